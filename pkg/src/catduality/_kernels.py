"""Hot inner loops, each in two flavours.

Every kernel exists as a numba ``@njit`` loop (``*_jit``) and as a
vectorised numpy/scipy version (``*_np``).  The public name points at the
jitted flavour unless numba is missing or ``CATDUALITY_DISABLE_NUMBA=1`` is
set in the environment when this module is first imported.

All arrays are int64.  Kernels never allocate Python objects, and report
"no violation" with ``-1`` sentinels so that the jitted and numpy flavours
share one return convention.
"""
import os

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover
    numba = None

ENV_FLAG = "CATDUALITY_DISABLE_NUMBA"


def _numba_requested():
    return os.environ.get(ENV_FLAG, "0").strip().lower() not in ("1", "true", "yes", "on")


USE_NUMBA = numba is not None and _numba_requested()

if numba is not None:
    jit = njit(cache=True, nogil=True)
else:  # pragma: no cover
    def jit(fn):
        return fn


# --- associativity -------------------------------------------------------

@jit
def assoc_violation_jit(table):
    n = table.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                if table[ab, c] != table[a, table[b, c]]:
                    out[0] = a
                    out[1] = b
                    out[2] = c
                    return out
    return out


def assoc_violation_np(table):
    left = table[table]              # left[a, b, c] = (ab)c
    right = table[:, table]          # right[a, b, c] = a(bc)
    bad = np.argwhere(left != right)
    if len(bad) == 0:
        return np.full(3, -1, dtype=np.int64)
    return bad[0].astype(np.int64)


# --- multiplicative maps -------------------------------------------------

@jit
def hom_mask_jit(src, tgt, cands):
    k, n = cands.shape
    mask = np.ones(k, dtype=np.bool_)
    for i in range(k):
        h = cands[i]
        ok = True
        for a in range(n):
            if not ok:
                break
            for b in range(n):
                if h[src[a, b]] != tgt[h[a], h[b]]:
                    ok = False
                    break
        mask[i] = ok
    return mask


def hom_mask_np(src, tgt, cands):
    if cands.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    lhs = cands[:, src]
    rhs = tgt[cands[:, :, None], cands[:, None, :]]
    return (lhs == rhs).all(axis=(1, 2))


# --- actions -------------------------------------------------------------

@jit
def action_violation_jit(table, identity, action):
    """Return [kind, f, g, x]; kind 0 = unit law, 1 = associativity, -1 = ok."""
    n = table.shape[0]
    size = action.shape[1]
    out = np.full(4, -1, dtype=np.int64)
    for x in range(size):
        if action[identity, x] != x:
            out[0] = 0
            out[1] = identity
            out[3] = x
            return out
    for f in range(n):
        for g in range(n):
            fg = table[f, g]
            for x in range(size):
                if action[fg, x] != action[f, action[g, x]]:
                    out[0] = 1
                    out[1] = f
                    out[2] = g
                    out[3] = x
                    return out
    return out


def action_violation_np(table, identity, action):
    out = np.full(4, -1, dtype=np.int64)
    size = action.shape[1]
    if size == 0:
        return out
    bad = np.flatnonzero(action[identity] != np.arange(size))
    if len(bad):
        out[0], out[1], out[3] = 0, identity, bad[0]
        return out
    n = table.shape[0]
    lhs = action[table]                                   # (n, n, size)
    rhs = action[np.arange(n)[:, None, None], action[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        out[0] = 1
        out[1:] = bad[0]
    return out


@jit
def equivariance_violation_jit(act_x, act_y, fmap):
    n, size = act_x.shape
    out = np.full(2, -1, dtype=np.int64)
    for m in range(n):
        for x in range(size):
            if fmap[act_x[m, x]] != act_y[m, fmap[x]]:
                out[0] = m
                out[1] = x
                return out
    return out


def equivariance_violation_np(act_x, act_y, fmap):
    out = np.full(2, -1, dtype=np.int64)
    if act_x.shape[1] == 0:
        return out
    lhs = fmap[act_x]
    rhs = act_y[np.arange(act_x.shape[0])[:, None], fmap[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        out[:] = bad[0]
    return out


# --- equivalence closure under unary maps --------------------------------

@jit
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@jit
def close_equivalence_jit(funcs, pairs, n):
    """Smallest equivalence on range(n) containing pairs and closed under funcs.

    ``funcs`` is (k, n): x ~ y must imply funcs[i, x] ~ funcs[i, y].
    Returns labels numbered by first occurrence.
    """
    parent = np.arange(n)
    stack = np.empty((n * (funcs.shape[0] + 1) + pairs.shape[0] + 1, 2), dtype=np.int64)
    top = 0
    for i in range(pairs.shape[0]):
        stack[top, 0] = pairs[i, 0]
        stack[top, 1] = pairs[i, 1]
        top += 1
    while top > 0:
        top -= 1
        x = stack[top, 0]
        y = stack[top, 1]
        rx = _find(parent, x)
        ry = _find(parent, y)
        if rx == ry:
            continue
        if rx < ry:
            parent[ry] = rx
        else:
            parent[rx] = ry
        # every successful union is pushed through each map once;
        # at most n - 1 unions, so the stack bound above holds
        for i in range(funcs.shape[0]):
            stack[top, 0] = funcs[i, x]
            stack[top, 1] = funcs[i, y]
            top += 1
    labels = np.full(n, -1, dtype=np.int64)
    root_label = np.full(n, -1, dtype=np.int64)
    nxt = 0
    for x in range(n):
        r = _find(parent, x)
        if root_label[r] < 0:
            root_label[r] = nxt
            nxt += 1
        labels[x] = root_label[r]
    return labels


def _first_occurrence_labels(labels):
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inverse].astype(np.int64)


def close_equivalence_np(funcs, pairs, n):
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    base_r = np.concatenate([pairs[:, 0], np.arange(n)]).astype(np.int64)
    base_c = np.concatenate([pairs[:, 1], np.arange(n)]).astype(np.int64)
    r, c = base_r, base_c
    labels = None
    while True:
        graph = coo_matrix((np.ones(len(r)), (r, c)), shape=(n, n))
        new = _first_occurrence_labels(connected_components(graph, directed=False)[1])
        if labels is not None and np.array_equal(new, labels):
            return labels
        labels = new
        if funcs.size == 0:
            return labels
        # link each element to its class representative, then push through maps
        first = np.zeros(labels.max() + 1, dtype=np.int64)
        first[labels[::-1]] = np.arange(n)[::-1]
        rep = first[labels]
        r = np.concatenate([base_r, np.arange(n), funcs.reshape(-1)])
        c = np.concatenate([base_c, rep, funcs[:, rep].reshape(-1)])


# --- brute-force functor enumeration -------------------------------------

@jit
def functor_maps_jit(src, src_id, tgt, e, cands):
    """All maps m -> cands[...] with F(1) = e and F(ab) = F(a)F(b)."""
    n = src.shape[0]
    c = cands.shape[0]
    total = 1
    for _ in range(n):
        total *= c
    found = np.empty((total, n), dtype=np.int64)
    cnt = 0
    digits = np.zeros(n, dtype=np.int64)
    h = np.empty(n, dtype=np.int64)
    for _ in range(total):
        for i in range(n):
            h[i] = cands[digits[i]]
        ok = h[src_id] == e
        if ok:
            for a in range(n):
                if not ok:
                    break
                for b in range(n):
                    if h[src[a, b]] != tgt[h[a], h[b]]:
                        ok = False
                        break
        if ok:
            found[cnt] = h
            cnt += 1
        i = 0
        while i < n:
            digits[i] += 1
            if digits[i] < c:
                break
            digits[i] = 0
            i += 1
    return found[:cnt]


def functor_maps_np(src, src_id, tgt, e, cands):
    n = src.shape[0]
    grid = np.indices((len(cands),) * n).reshape(n, -1).T[:, ::-1]
    maps = cands[grid] if len(grid) else np.zeros((0, n), dtype=np.int64)
    maps = maps[maps[:, src_id] == e]
    # same odometer order as the jitted version: digit 0 varies fastest
    return np.ascontiguousarray(maps[hom_mask_np(src, tgt, maps)]).astype(np.int64)


# --- brute-force M-set enumeration ---------------------------------------

@jit
def mset_actions_jit(table, gens, order, parent, via, size):
    """All actions on range(size) obtained from generator images.

    Elements are listed in ``order`` (BFS from the identity), element
    ``order[j]`` equals ``gens[via[j]] * order[parent[j]]``.  An assignment of
    generator images extends to a genuine action iff
    action[g*m] = action[g] o action[m] for every generator g and element m.
    """
    n = table.shape[0]
    k = gens.shape[0]
    slots = k * size
    total = 1
    for _ in range(slots):
        total *= size
    buf = np.empty((64, n, size), dtype=np.int64)
    cnt = 0
    digits = np.zeros(slots, dtype=np.int64)
    act = np.empty((n, size), dtype=np.int64)
    gimg = np.empty((k, size), dtype=np.int64)
    for _ in range(total):
        for g in range(k):
            for x in range(size):
                gimg[g, x] = digits[g * size + x]
        for x in range(size):
            act[order[0], x] = x
        for j in range(1, n):
            m = order[j]
            p = order[parent[j]]
            g = via[j]
            for x in range(size):
                act[m, x] = gimg[g, act[p, x]]
        ok = True
        for g in range(k):
            if not ok:
                break
            for m in range(n):
                gm = table[gens[g], m]
                for x in range(size):
                    if act[gm, x] != gimg[g, act[m, x]]:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            if cnt == buf.shape[0]:
                bigger = np.empty((2 * cnt, n, size), dtype=np.int64)
                bigger[:cnt] = buf
                buf = bigger
            buf[cnt] = act
            cnt += 1
        i = 0
        while i < slots:
            digits[i] += 1
            if digits[i] < size:
                break
            digits[i] = 0
            i += 1
    return buf[:cnt].copy()


def mset_actions_np(table, gens, order, parent, via, size):
    n = table.shape[0]
    k = len(gens)
    slots = k * size
    if size == 0:
        return np.zeros((1, n, 0), dtype=np.int64)
    if slots:
        grid = np.indices((size,) * slots).reshape(slots, -1).T[:, ::-1]
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    gimg = grid.reshape(grid.shape[0], k, size)
    c = gimg.shape[0]
    act = np.empty((c, n, size), dtype=np.int64)
    act[:, order[0], :] = np.arange(size)
    rows = np.arange(c)[:, None]
    for j in range(1, n):
        act[:, order[j], :] = gimg[rows, via[j], act[:, order[parent[j]], :]]
    ok = np.ones(c, dtype=bool)
    for g in range(k):
        lhs = act[:, table[gens[g]], :]                    # (c, n, size)
        rhs = gimg[rows[:, :, None], g, act]               # (c, n, size)
        ok &= (lhs == rhs).all(axis=(1, 2))
    return np.ascontiguousarray(act[ok])


# --- dispatch ------------------------------------------------------------

_PAIRS = {
    "assoc_violation": (assoc_violation_jit, assoc_violation_np),
    "hom_mask": (hom_mask_jit, hom_mask_np),
    "action_violation": (action_violation_jit, action_violation_np),
    "equivariance_violation": (equivariance_violation_jit, equivariance_violation_np),
    "close_equivalence": (close_equivalence_jit, close_equivalence_np),
    "functor_maps": (functor_maps_jit, functor_maps_np),
    "mset_actions": (mset_actions_jit, mset_actions_np),
}


def flavours(name):
    """(jitted, numpy) implementations of kernel ``name``."""
    return _PAIRS[name]


def _select(name):
    jitted, plain = _PAIRS[name]
    return jitted if USE_NUMBA else plain


assoc_violation = _select("assoc_violation")
hom_mask = _select("hom_mask")
action_violation = _select("action_violation")
equivariance_violation = _select("equivariance_violation")
close_equivalence = _select("close_equivalence")
functor_maps = _select("functor_maps")
mset_actions = _select("mset_actions")
