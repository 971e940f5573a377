"""Brute-force reference implementations, independent of the library code.

Each oracle works straight from the definitions with plain loops or
whole-array numpy, never calling the search routines under test.
"""
from itertools import permutations, product

import numpy as np


def all_monoid_tables(n):
    """Canonical tables (identity 0) of every monoid of order n, by exhaustion.

    Orders up to 3 scan all n^(n*n) tables with any identity; order 4
    scans the tables whose row and column 0 are the identity.
    """
    if n <= 3:
        cells = n * n
        raw = np.array(list(product(range(n), repeat=cells)), dtype=np.int64).reshape(-1, n, n)
    else:
        inner = np.array(list(product(range(n), repeat=(n - 1) ** 2)), dtype=np.int64)
        raw = np.empty((len(inner), n, n), dtype=np.int64)
        raw[:, 0, :] = np.arange(n)
        raw[:, :, 0] = np.arange(n)
        raw[:, 1:, 1:] = inner.reshape(-1, n - 1, n - 1)
    idx = np.arange(len(raw))[:, None, None, None]
    a = np.arange(n)[:, None, None]
    b = np.arange(n)[None, :, None]
    c = np.arange(n)[None, None, :]
    ab = raw[idx, a, b]
    bc = raw[idx, b, c]
    assoc = (raw[idx, ab, c] == raw[idx, a, bc]).reshape(len(raw), -1).all(axis=1)
    found = set()
    for t in raw[assoc]:
        units = [e for e in range(n) if (t[e] == np.arange(n)).all() and (t[:, e] == np.arange(n)).all()]
        if not units:
            continue
        e = units[0]
        best = None
        for p in permutations(range(n)):
            if p[e] != 0:
                continue
            perm = np.array(p)
            inv = np.argsort(perm)
            key = tuple(perm[t[np.ix_(inv, inv)]].ravel().tolist())
            best = key if best is None or key < best else best
        found.add(best)
    return sorted(found)


def homs_bruteforce(S, T):
    """Every map S -> T (as tuples) preserving the product; S, T are tables."""
    n, m = len(S), len(T)
    out = []
    for f in product(range(m), repeat=n):
        if all(f[S[a][b]] == T[f[a]][f[b]] for a in range(n) for b in range(n)):
            out.append(f)
    return out


def actions_bruteforce(S, identity, size):
    """Every left action of the monoid table S on range(size), as tuples of rows."""
    n = len(S)
    rows = list(product(range(size), repeat=size))
    out = []
    for choice in product(rows, repeat=n):
        if choice[identity] != tuple(range(size)):
            continue
        if all(choice[S[f][g]][x] == choice[f][choice[g][x]]
               for f in range(n) for g in range(n) for x in range(size)):
            out.append(choice)
    return out


def action_classes(actions, size):
    """Number of isomorphism classes among the given actions."""
    seen = set()
    for act in actions:
        best = None
        for p in permutations(range(size)):
            inv = [0] * size
            for i, v in enumerate(p):
                inv[v] = i
            key = tuple(tuple(p[row[inv[x]]] for x in range(size)) for row in act)
            best = key if best is None or key < best else best
        seen.add(best)
    return len(seen)


def equivariant_maps(actX, actY):
    nx = len(actX[0]) if actX else 0
    ny = len(actY[0]) if actY else 0
    return [u for u in product(range(ny), repeat=nx)
            if all(u[rx[x]] == ry[u[x]] for rx, ry in zip(actX, actY) for x in range(nx))]


def pushout_classes(q, f, act_psi, act_chi):
    """Pushout of q : phi -> psi and f : phi -> chi as a partition of psi + chi.

    Naive fixpoint: start from q(x) ~ f(x), then close under the action and
    under transitivity until nothing changes.
    """
    npsi = len(act_psi[0])
    nchi = len(act_chi[0])
    n = npsi + nchi
    rel = {(i, i) for i in range(n)}
    rel |= {(q[x], npsi + f[x]) for x in range(len(q))}
    acts = [list(r1) + [npsi + v for v in r2] for r1, r2 in zip(act_psi, act_chi)]
    while True:
        new = set(rel)
        new |= {(b, a) for a, b in rel}
        new |= {(a, d) for a, b in rel for c, d in rel if b == c}
        new |= {(act[a], act[b]) for act in acts for a, b in rel}
        if new == rel:
            break
        rel = new
    classes = {frozenset(b for a, b in rel if a == x) for x in range(n)}
    return classes


def transition_closure(gens, degree):
    """Set of transformations generated by gens on range(degree), with identity."""
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                x = tuple(g[q] for q in s)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return seen


def nerode_index(member, alphabet, max_len, suffix_len):
    """Number of distinct residual signatures among words up to max_len.

    member is any membership test (here re.fullmatch); two words share a
    class when every suffix up to suffix_len gives the same verdict.
    """
    def all_words(n):
        for k in range(n + 1):
            for w in product(alphabet, repeat=k):
                yield "".join(w)

    sufs = list(all_words(suffix_len))
    return len({tuple(member(w + s) for s in sufs) for w in all_words(max_len)})
