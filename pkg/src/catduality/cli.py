"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 budget
exceeded.  Monoid arguments accept a JSON file, ``-`` for stdin, inline
JSON, or a built-in name: trivial, T, Z<n>, S<n>, C<t>,<p>, S123 (the
product S1 x S2 x S3).
"""
import argparse
import json
import re
import sys

from . import io, limits
from .cauchy import cauchy_completion
from .duality import equivalence_witness, model_category, roundtrip_failures
from .errors import BudgetExceeded, CatDualityError, ValidationError
from .lang import dfa_to_dot, parse_regex, compile_min_dfa, transition_monoid
from .monoid import (catalog, cyclic_group, generating_set, idempotents, is_group,
                     monoid_iso, product_monoid, semigroup_homs, symmetric_group,
                     trivial_monoid, two_element_semilattice)
from .profinite import (continuous_homs, continuous_homs_to_finite, cyclic_monoid,
                        standard_systems, STANDARD, truncated_limit)
from .verify import sabotage, verify_monoid

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(CatDualityError):
    pass


def builtin_monoid(name):
    if name in ("trivial", "1"):
        return trivial_monoid()
    if name == "T":
        return two_element_semilattice()
    if name == "S123":
        return product_monoid(*[symmetric_group(n) for n in (1, 2, 3)])
    m = re.fullmatch(r"([ZS])(\d+)", name)
    if m:
        n = int(m.group(2))
        if n < 1:
            raise InputError(f"bad size in {name!r}")
        return cyclic_group(n) if m.group(1) == "Z" else symmetric_group(n)
    m = re.fullmatch(r"C(\d+),(\d+)", name)
    if m:
        return cyclic_monoid(int(m.group(1)), int(m.group(2)))
    return None


def load_monoid(arg):
    M = builtin_monoid(arg)
    if M is not None:
        return M
    d = io.load_json(sys.stdin.read() if arg == "-" else arg)
    if isinstance(d, dict) and "table" not in d and "monoid" in d:
        d = d["monoid"]
    return io.monoid_from_json(d)


def emit(obj, pretty=False):
    print(json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2 if pretty else None))


def _labels(M, elems):
    return [M.label(x) for x in elems]


# --- commands ------------------------------------------------------------

def cmd_info(args):
    monoids = catalog(args.catalog) if args.catalog else [load_monoid(args.monoid)]
    for M in monoids:
        emit({"order": M.order, "identity": M.label(M.identity),
              "idempotents": _labels(M, idempotents(M)), "group": is_group(M),
              "generators": _labels(M, generating_set(M)),
              "monoid": io.monoid_to_json(M)}, args.json)
    return EXIT_OK


def cmd_verify(args):
    if args.catalog:
        if args.catalog > 4:
            raise InputError("--catalog supports orders up to 4")
        items = [(f"catalog:{i}", M) for i, M in enumerate(catalog(args.catalog))]
    elif args.monoid:
        items = [(args.monoid, load_monoid(args.monoid))]
    else:
        raise InputError("give a monoid or --catalog n")
    partners = catalog(min(args.partners, 3))
    status = EXIT_OK
    for name, M in items:
        if args.mutate:
            a, b, v = args.mutate
            out = sabotage(M, a, b, v, partners=partners[:2])
            emit({"instance": name, "mutation": [a, b, v], **out}, args.json)
            if out["caught_by"]:
                status = EXIT_FAIL
            continue
        reference = load_monoid(args.reference) if args.reference else None
        rep = verify_monoid(M, partners=partners, reference=reference, name=name)
        emit(rep.to_dict(), args.json)
        sys.stdout.flush()
        if not rep.ok:
            status = EXIT_FAIL
    return status


def cmd_from_regex(args):
    ast = parse_regex(args.pattern)
    dfa = compile_min_dfa(ast, args.alphabet)
    S = transition_monoid(dfa)
    if args.dot:
        sys.stdout.write(dfa_to_dot(dfa))
        return EXIT_OK
    emit({"pattern": args.pattern, "ast": str(ast), "monoid": io.monoid_to_json(S.monoid),
          "generators": S.generators, "group": is_group(S.monoid),
          "dfa": {"alphabet": list(dfa.alphabet), "delta": dfa.delta.tolist(),
                  "start": dfa.start, "accepting": sorted(dfa.accepting)}}, args.json)
    return EXIT_OK


def cmd_cauchy(args):
    M = load_monoid(args.monoid)
    C = cauchy_completion(M)
    if args.dot:
        sys.stdout.write(io.cauchy_to_dot(C))
    else:
        emit({"monoid": io.monoid_to_json(M), "cauchy": io.cauchy_to_json(C)}, args.json)
    return EXIT_OK


def cmd_models(args):
    M = load_monoid(args.monoid)
    Mod = model_category(M)
    C = cauchy_completion(M)
    eq = equivalence_witness(Mod, C)
    fails = []
    for N in [M] + catalog(2):
        fails += roundtrip_failures(M, N) + roundtrip_failures(N, M)
    emit({"monoid": io.monoid_to_json(M), "idempotents": _labels(M, Mod.objects),
          "model_category": {f"{M.label(e)}->{M.label(d)}": _labels(M, Mod.hom(e, d))
                             for e in Mod.objects for d in Mod.objects},
          "cauchy": io.cauchy_to_json(C), "equivalence": eq.ok,
          "roundtrip_failures": fails}, args.json)
    return EXIT_OK if eq.ok and not fails else EXIT_FAIL


def cmd_homs(args):
    M, N = load_monoid(args.source), load_monoid(args.target)
    homs = semigroup_homs(M, N)
    emit({"count": len(homs), "homs": [io.hom_to_json(h) for h in homs],
          "unit_images": sorted({N.label(h.unit_image) for h in homs})}, args.json)
    return EXIT_OK


def _load_system(arg, depth):
    if arg in STANDARD:
        return standard_systems(arg, depth)
    S = io.system_from_json(arg)
    return S.truncate(min(depth, S.depth))


def cmd_profinite(args):
    S = _load_system(args.system, args.depth)
    out = {"system": S.name or args.system, "levels": [L.order for L in S.levels],
           "truncated_limit_iso": [monoid_iso(truncated_limit(S, k), S.levels[k]) is not None
                                   for k in range(S.depth + 1)]}
    if args.target_system:
        T = _load_system(args.target_system, args.depth)
        out["continuous_homs"] = continuous_homs(S, T, args.depth).to_dict()
    else:
        targets = [load_monoid(t) for t in (args.target or ["Z2", "Z3"])]
        out["homs_to"] = {name: continuous_homs_to_finite(S, N, args.depth).to_dict()
                          for name, N in zip(args.target or ["Z2", "Z3"], targets)}
    emit(out, args.json)
    return EXIT_OK


def cmd_export_dot(args):
    if args.kind == "dfa":
        sys.stdout.write(dfa_to_dot(compile_min_dfa(parse_regex(args.input))))
        return EXIT_OK
    if args.kind == "mset":
        sys.stdout.write(io.mset_to_dot(io.mset_from_json(args.input)))
        return EXIT_OK
    M = load_monoid(args.input)
    if args.kind == "cauchy":
        sys.stdout.write(io.cauchy_to_dot(cauchy_completion(M)))
    else:
        sys.stdout.write(io.monoid_to_dot(M))
    return EXIT_OK


# --- parser --------------------------------------------------------------

def build_parser():
    # shared flags work before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-candidates", type=int, default=argparse.SUPPRESS,
                        help="cap every brute-force search at this many candidates")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="pretty-print JSON output")
    p = argparse.ArgumentParser(prog="catduality", description=__doc__.splitlines()[0],
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(*a, **kw):
        return _add(*a, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("info", help="order, idempotents, group test, generators")
    s.add_argument("monoid", nargs="?")
    s.add_argument("--catalog", type=int, metavar="N")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("verify", help="run the verification suite (JSON lines)")
    s.add_argument("monoid", nargs="?")
    s.add_argument("--catalog", type=int, metavar="N")
    s.add_argument("--reference", help="monoid the input must be isomorphic to")
    s.add_argument("--partners", type=int, default=3, metavar="N",
                   help="roundtrip against catalog monoids up to this order (default 3)")
    s.add_argument("--mutate", type=int, nargs=3, metavar=("A", "B", "V"),
                   help="test mode: set table[A][B] = V and report how it is caught")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("from-regex", help="syntactic monoid of a regular expression")
    s.add_argument("pattern")
    s.add_argument("--alphabet", help="letters to use (default: those in the pattern)")
    s.add_argument("--dot", action="store_true", help="emit the minimal DFA as DOT")
    s.set_defaults(func=cmd_from_regex)

    s = sub.add_parser("cauchy", help="idempotent completion")
    s.add_argument("monoid")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_cauchy)

    s = sub.add_parser("models", help="model category and its comparison with the completion")
    s.add_argument("monoid")
    s.set_defaults(func=cmd_models)

    s = sub.add_parser("homs", help="semigroup morphisms between two monoids")
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(func=cmd_homs)

    s = sub.add_parser("profinite", help="continuous homs out of an inverse system")
    s.add_argument("system", help=f"one of {sorted(STANDARD)} or a system JSON file")
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--target", action="append", help="finite target monoid (repeatable)")
    s.add_argument("--target-system", help="profinite target system")
    s.set_defaults(func=cmd_profinite)

    s = sub.add_parser("export-dot", help="DOT for a monoid, completion, M-set or DFA")
    s.add_argument("input")
    s.add_argument("--kind", choices=["monoid", "cauchy", "mset", "dfa"], default="monoid")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.json = getattr(args, "json", False)
    limits.set_max_candidates(getattr(args, "max_candidates", None))
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        emit({"error": str(exc), "kind": "budget"})
        return EXIT_BUDGET
    except ValidationError as exc:
        emit({"error": str(exc), "kind": "input", "counterexample": exc.counterexample})
        return EXIT_INPUT
    except (CatDualityError, ValueError) as exc:
        out = {"error": str(exc), "kind": "input"}
        if getattr(exc, "offset", None) is not None:
            out["offset"] = exc.offset
        emit(out)
        return EXIT_INPUT
    finally:
        limits.set_max_candidates(None)


if __name__ == "__main__":
    sys.exit(main())
