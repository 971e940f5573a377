"""JSON interchange formats and DOT export.

Monoid:  {"order": n, "identity": i, "table": [[...]], "labels": [...]}
Hom:     {"map": [...]}
M-set:   {"monoid": <monoid>, "size": n, "action": [[...]]}
System:  {"levels": [<monoid>, ...], "transitions": [<hom>, ...]}

Every reader validates what it builds, so a bad file raises ValidationError.
"""
import json
from pathlib import Path

from .errors import ValidationError
from .monoid import SemigroupHom, generating_set, validate_monoid
from .mset import validate_mset
from .profinite import make_system


def load_json(source):
    """Parse a path, a JSON string, or pass a dict through."""
    if isinstance(source, dict):
        return source
    text = str(source)
    if not text.lstrip().startswith(("{", "[")):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read {source}: {exc.strerror}", {"law": "input"})
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc.msg} at line {exc.lineno}",
                              {"law": "json", "line": exc.lineno})


def dumps(obj):
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _require(d, *keys, what):
    if not isinstance(d, dict):
        raise ValidationError(f"{what} must be a JSON object", {"law": "schema"})
    missing = [k for k in keys if k not in d]
    if missing:
        raise ValidationError(f"{what} is missing {missing}", {"law": "schema", "missing": missing})


def monoid_to_json(M):
    d = {"order": M.order, "identity": M.identity, "table": M.table.tolist()}
    if M.labels:
        d["labels"] = list(M.labels)
    return d


def monoid_from_json(source):
    d = load_json(source)
    _require(d, "order", "identity", "table", what="monoid")
    return validate_monoid(d["order"], d["identity"], d["table"], d.get("labels"))


def hom_to_json(h):
    return {"map": list(h.map)}


def hom_from_json(source, M, N):
    d = load_json(source)
    _require(d, "map", what="hom")
    return SemigroupHom(M, N, tuple(int(x) for x in d["map"])).check()


def mset_to_json(X):
    return {"monoid": monoid_to_json(X.monoid), "size": X.size, "action": X.action.tolist()}


def mset_from_json(source, M=None):
    d = load_json(source)
    _require(d, "size", "action", what="M-set")
    if M is None:
        _require(d, "monoid", what="M-set")
        M = monoid_from_json(d["monoid"])
    return validate_mset(M, d["size"], d["action"])


def system_to_json(S):
    return {"levels": [monoid_to_json(L) for L in S.levels],
            "transitions": [hom_to_json(t) for t in S.transitions]}


def system_from_json(source):
    d = load_json(source)
    _require(d, "levels", "transitions", what="system")
    levels = [monoid_from_json(L) for L in d["levels"]]
    if len(d["transitions"]) != len(levels) - 1:
        raise ValidationError("need one transition per level above 0", {"law": "schema"})
    trans = [hom_from_json(t, levels[k + 1], levels[k]) for k, t in enumerate(d["transitions"])]
    return make_system(levels, trans)


def functor_to_json(F):
    return {"objects": {str(e): d for e, d in sorted(F.obj_map.items())},
            "morphisms": [[e, d, f, v] for (e, d, f), v in sorted(F.mor_map.items())]}


def cauchy_to_json(C):
    M = C.base
    return {"objects": [M.label(e) for e in C.objects],
            "homs": [{"source": M.label(e), "target": M.label(d),
                      "arrows": [M.label(f) for f in C.hom(e, d)]}
                     for e in C.objects for d in C.objects]}


# --- DOT -----------------------------------------------------------------

def _q(s):
    return '"' + str(s).replace('"', r'\"') + '"'


def cauchy_to_dot(C, name="cauchy"):
    """Objects are idempotents; one edge per non-identity arrow."""
    M = C.base
    lines = [f"digraph {name} {{"]
    for e in C.objects:
        lines.append(f"  {_q(M.label(e))};")
    for e in C.objects:
        for d in C.objects:
            for f in C.hom(e, d):
                if e == d and f == e:
                    continue
                lines.append(f"  {_q(M.label(e))} -> {_q(M.label(d))} [label={_q(M.label(f))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def mset_to_dot(X, name="mset"):
    """Action graph with one labelled edge per generator of the monoid."""
    M = X.monoid
    lines = [f"digraph {name} {{"]
    for x in range(X.size):
        lines.append(f"  {x};")
    for g in generating_set(M):
        for x in range(X.size):
            lines.append(f"  {x} -> {X.act(g, x)} [label={_q(M.label(g))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def monoid_to_dot(M, name="monoid"):
    """Right Cayley graph over a generating set."""
    lines = [f"digraph {name} {{"]
    for a in range(M.order):
        lines.append(f"  {_q(M.label(a))};")
    for g in generating_set(M):
        for a in range(M.order):
            lines.append(f"  {_q(M.label(a))} -> {_q(M.label(M.mul(a, g)))} "
                         f"[label={_q(M.label(g))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
