r"""
Counting crossings of chord diagrams and of perturbed closed walks.

Two chords ``ij`` and ``uv`` (``i < j``, ``u < v``) of a matching cross when
``i < u < j < v`` up to exchanging them. :func:`count_chord_crossings` counts
crossing pairs in ``O(n log n)`` by divide and conquer; a Fenwick-tree sweep
is kept as a second backend.

EXAMPLES::

    >>> count_chord_crossings(ChordMatching(4, [(1, 3), (2, 4)]))
    1
    >>> count_chord_crossings(ChordMatching(4, [(1, 4), (2, 3)]))
    0
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .walks import disk_boundaries

# below this many chords the recursion switches to a quadratic count
_BASE = 48


class NotPerfectMatching(ValueError):
    pass


@dataclass(frozen=True)
class ChordMatching:
    """Perfect matching on ``n`` points, numbered ``0..n-1`` or ``1..n``."""

    n: int
    pairs: tuple

    def __init__(self, n, pairs, check=True):
        norm = tuple((a, b) if a < b else (b, a) for a, b in pairs)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "pairs", norm)
        if check:
            self.validate()

    def validate(self):
        pts = [x for p in self.pairs for x in p]
        if len(pts) != self.n:
            raise NotPerfectMatching(f"{len(self.pairs)} pairs cannot match {self.n} points")
        s = set(pts)
        if len(s) != self.n:
            dup = next(x for x in pts if pts.count(x) > 1)
            raise NotPerfectMatching(f"point {dup} is matched twice")
        if self.n and s != set(range(self.n)) and s != set(range(1, self.n + 1)):
            raise NotPerfectMatching("points must be 0..n-1 or 1..n")


def count_chord_crossings(E, backend: str = "dc") -> int:
    r"""
    Number of crossing pairs of chords in a perfect matching.

    ``E`` is a :class:`ChordMatching` or a sequence of pairs with distinct
    endpoints. ``backend`` is ``"dc"`` (divide and conquer) or ``"sweep"``.
    """
    pairs = E.pairs if isinstance(E, ChordMatching) else E
    if backend == "sweep":
        return _sweep(pairs)
    if backend != "dc":
        raise ValueError(f"unknown backend {backend!r}")
    if len(pairs) < 2:
        return 0
    a = np.array(pairs, dtype=np.int64)
    u = np.minimum(a[:, 0], a[:, 1])
    v = np.maximum(a[:, 0], a[:, 1])
    order = np.argsort(v, kind="stable")
    return int(_dc(u[order], v[order]))


def _brute_sorted(u, v):
    m = len(u)
    if m < 2:
        return 0
    cross = (u[:, None] < u[None, :]) & (u[None, :] < v[:, None]) & (v[:, None] < v[None, :])
    return int(cross.sum())


def _dc(u, v):
    # u, v: left/right endpoints with v increasing
    m = len(u)
    if m <= _BASE:
        return _brute_sorted(u, v)
    h = (m + 1) // 2
    k = v[h - 1]
    u0, v0 = u[:h], v[:h]
    ur, vr = u[h:], v[h:]
    right = ur > k
    u1, v1 = ur[right], vr[right]
    u2, v2 = ur[~right], vr[~right]
    total = _dc(u0, v0) + _dc(u1, v1)
    m2 = len(u2)
    if m2:
        # chords of E2 straddle k: inside E2 two chords cross iff their left
        # and right endpoints come in the same order
        total += m2 * (m2 - 1) // 2 - _inversions(u2)
        s0 = np.sort(u0)
        total += int((np.searchsorted(s0, u2) - np.searchsorted(v0, u2)).sum())
        if len(u1):
            s1 = np.sort(u1)
            total += int((np.searchsorted(s1, v2) - np.searchsorted(v1, v2)).sum())
    return total


def _inversions(a):
    n = len(a)
    if n <= _BASE:
        if n < 2:
            return 0
        return int(np.triu(a[:, None] > a[None, :], 1).sum())
    mid = n // 2
    left, right = a[:mid], a[mid:]
    sl = np.sort(left)
    cross = int((mid - np.searchsorted(sl, right, side="right")).sum())
    return _inversions(left) + _inversions(right) + cross


def _sweep(pairs) -> int:
    if len(pairs) < 2:
        return 0
    pts = sorted(x for p in pairs for x in p)
    rank = {x: i for i, x in enumerate(pts)}
    n = len(pts)
    partner = [0] * n
    for a, b in pairs:
        ra, rb = rank[a], rank[b]
        partner[ra] = rb
        partner[rb] = ra
    tree = [0] * (n + 1)
    total = 0
    for j in range(n):
        i = partner[j]
        if i > j:
            k = j + 1
            while k <= n:
                tree[k] += 1
                k += k & -k
        else:
            # open chords starting strictly between i and j cross chord (i, j)
            s = 0
            k = j
            while k > 0:
                s += tree[k]
                k -= k & -k
            k = i + 1
            while k > 0:
                s -= tree[k]
                k -= k & -k
            total += s
            k = i + 1
            while k <= n:
                tree[k] -= 1
                k += k & -k
    return total


def count_self_crossings(M, walks, P, backend: str = "dc", per_disk: bool = False, check: bool = True):
    r"""
    Number of self-crossings of the perturbed collection ``(walks, P)``.

    Every vertex disk contributes the crossing count of its chord matching,
    read from the first dart of the vertex rotation. With ``per_disk`` the
    per-vertex counts are returned too.

    EXAMPLES::

        >>> from minpos.surface_map import build_map
        >>> from minpos.walks import Perturbation
        >>> M = build_map([(0, 1), (2, 3)], [[0, 2, 1, 3]])
        >>> count_self_crossings(M, [(0,), (2,)], Perturbation.initial(M, [(0,), (2,)]))
        1
    """
    disks = disk_boundaries(M, walks, P, check=check)
    counts = [count_chord_crossings(D.chords, backend) for D in disks]
    total = sum(counts)
    return (total, counts) if per_disk else total


def crossing_decomposition(M, walks, P, backend: str = "dc"):
    r"""
    Split the crossings by walk.

    Returns ``(per_walk, pairwise)`` where ``per_walk[w]`` counts the
    self-crossings of walk ``w`` alone and ``pairwise[(w, x)]`` the crossings
    between walks ``w < x`` (only nonzero entries).
    """
    disks = disk_boundaries(M, walks, P)
    per_walk = [0] * len(walks)
    pairwise = {}
    for D in disks:
        by_walk = {}
        owner = {}
        for i, (_, peb) in enumerate(D.endpoints):
            owner[i] = peb[0]
        for c in D.chords:
            by_walk.setdefault(owner[c[0]], []).append(c)
        own = {w: count_chord_crossings(cs, backend) for w, cs in by_walk.items()}
        for w, c in own.items():
            per_walk[w] += c
        for w, x in combinations(sorted(by_walk), 2):
            c = count_chord_crossings(by_walk[w] + by_walk[x], backend) - own[w] - own[x]
            if c:
                pairwise[(w, x)] = pairwise.get((w, x), 0) + c
    return per_walk, pairwise
