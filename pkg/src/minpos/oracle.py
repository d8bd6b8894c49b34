r"""
Brute-force references for tests.

:func:`brute_min_perturbation` enumerates every perturbation (the product of
one permutation per edge) and counts crossings with numpy, a block of
perturbations at a time. Only usable for a handful of pebbles per edge.

EXAMPLES::

    >>> from minpos.surface_map import build_map
    >>> M = build_map([(0, 1)], [[0, 1]])
    >>> brute_min_perturbation(M, [(0, 0)])[0]
    1
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial, prod

import numpy as np

from .walks import Perturbation


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_pebbles_per_edge: int = 9
    max_total_orderings: int = 2_000_000
    block: int = 1 << 15


def brute_chord_crossings(pairs) -> int:
    """Quadratic scan over all chord pairs."""
    ps = [(min(a, b), max(a, b)) for a, b in pairs]
    if len(ps) < 64:
        n = 0
        for i, (a, b) in enumerate(ps):
            for c, d in ps[i + 1:]:
                if a < c < b < d or c < a < d < b:
                    n += 1
        return n
    # same scan on blocks of rows of the pair matrix. With chords sorted by
    # left end, a pair is counted from the chord starting first, and only
    # columns starting before the block's last right end can qualify.
    arr = np.array(sorted(ps), dtype=np.int32)
    u, v = arr[:, 0], arr[:, 1]
    n = 0
    for s in range(0, len(ps), 256):
        a, b = u[s:s + 256, None], v[s:s + 256, None]
        hi = int(np.searchsorted(u, b.max()))
        c, d = u[s:hi], v[s:hi]
        n += int(np.count_nonzero((a < c) & (c < b) & (b < d)))
    return n


def count_perturbations(M, walks) -> int:
    sizes = {}
    for walk in walks:
        for d in walk:
            e = M.edge_of[d]
            sizes[e] = sizes.get(e, 0) + 1
    return prod(factorial(k) for k in sizes.values())


def brute_min_perturbation(M, walks, budget: OracleBudget = OracleBudget()):
    r"""
    Minimum self-crossing count over all perturbations of ``walks``.

    Returns ``(count, P)`` where ``P`` is the first minimizer in
    lexicographic order of per-edge permutations (edges by id).
    """
    pebs = {}
    for w, walk in enumerate(walks):
        for i, d in enumerate(walk):
            pebs.setdefault(M.edge_of[d], []).append((w, i))
    edges = sorted(pebs)
    big = max((len(v) for v in pebs.values()), default=0)
    if big > budget.max_pebbles_per_edge:
        raise BudgetExceeded(f"an edge carries {big} pebbles, budget is {budget.max_pebbles_per_edge}")
    total = count_perturbations(M, walks)
    if total > budget.max_total_orderings:
        raise BudgetExceeded(f"{total} perturbations exceed the budget of {budget.max_total_orderings}")
    if not edges:
        return 0, Perturbation({})
    # column of every pebble in the position matrix
    col = {}
    for e in edges:
        for p in pebs[e]:
            col[p] = len(col)
    perm_tables = [_perms(len(pebs[e]))[0] for e in edges]
    inv_tables = [_perms(len(pebs[e]))[1] for e in edges]
    radices = [len(t) for t in perm_tables]

    # endpoint coordinate on a disk: sector offset + position (reversed for non-reference darts)
    def endpoint(d, p):
        v = M.tail(d)
        off = 0
        for d2 in M.vertices[v]:
            if d2 == d:
                break
            off += len(pebs.get(M.edge_of[d2], ()))
        k = len(pebs[M.edge_of[d]])
        return v, off, M.is_ref(d), k, col[p]

    chords = {}
    twin = M.twin
    for w, walk in enumerate(walks):
        k = len(walk)
        for i in range(k):
            j = (i + 1) % k
            a = endpoint(twin[walk[i]], (w, i))
            b = endpoint(walk[j], (w, j))
            chords.setdefault(a[0], []).append((a[1:], b[1:]))

    best, best_idx = None, 0
    for start in range(0, total, budget.block):
        idx = np.arange(start, min(total, start + budget.block), dtype=np.int64)
        pos = np.empty((len(idx), len(col)), dtype=np.int32)
        rem = idx.copy()
        digits = []
        for r in reversed(radices):
            digits.append(rem % r)
            rem //= r
        digits.reverse()
        for e, t, dg in zip(edges, inv_tables, digits):
            # pebble pebs[e][k] sits at position inv[:, k]
            inv = t[dg]
            for k, p in enumerate(pebs[e]):
                pos[:, col[p]] = inv[:, k]
        cnt = np.zeros(len(idx), dtype=np.int64)
        for lst in chords.values():
            if len(lst) < 2:
                continue
            xa = np.stack([_coord(pos, *a) for a, _ in lst])
            xb = np.stack([_coord(pos, *b) for _, b in lst])
            u, v = np.minimum(xa, xb), np.maximum(xa, xb)
            # chord i starts first and chord j starts inside it and ends outside
            U1, V1, U2, V2 = u[:, None], v[:, None], u[None], v[None]
            cnt += ((U1 < U2) & (U2 < V1) & (V1 < V2)).sum(axis=(0, 1))
        k = int(np.argmin(cnt))
        if best is None or cnt[k] < best:
            best, best_idx = int(cnt[k]), start + k
    order = {}
    rem = best_idx
    digits = []
    for r in reversed(radices):
        digits.append(rem % r)
        rem //= r
    digits.reverse()
    for e, t, dg in zip(edges, perm_tables, digits):
        order[e] = [pebs[e][c] for c in t[dg]]
    return best, Perturbation(order)


@lru_cache(maxsize=None)
def _perms(k):
    # all permutations of range(k) in lexicographic order, and their inverses
    t = np.array(list(permutations(range(k))), dtype=np.int32).reshape(-1, k)
    return t, np.argsort(t, axis=1).astype(np.int32)


def _coord(pos, off, ref, k, c):
    x = pos[:, c]
    return off + (x if ref else k - 1 - x)
