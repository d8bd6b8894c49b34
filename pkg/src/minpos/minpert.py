r"""
Minimal perturbations of spur-free closed walks.

The algorithm keeps an *arrangement*: every arc is cut into sub-arcs, and
pebbles may only be reordered inside their sub-arc. A sub-arc whose pebbles
lead, through one of its two vertex disks, to several distinct sub-arcs is
*split* so that pebbles going to different neighbours occupy consecutive
blocks, ordered like the neighbours around the disk. Only the light groups
are moved; the heaviest group stays in place, which bounds the total work by
``O(n log n)``. When no split applies, the sub-arc graph is a union of cycles
and each cycle is laid out explicitly: every curve winding ``k`` times around
it gets ``k`` consecutive levels and a single staircase, hence ``k - 1``
self-crossings and no crossing with the other curves of the cycle.

The split requires a graph without loops and parallel edges;
:func:`preprocess` subdivides every edge twice otherwise.

EXAMPLES::

    >>> from minpos.surface_map import build_map
    >>> from minpos.crossings import count_self_crossings
    >>> M = build_map([(0, 1)], [[0, 1]])
    >>> P = minimize_perturbation(M, [(0, 0, 0, 0)])
    >>> count_self_crossings(M, [(0, 0, 0, 0)], P)
    3
"""

from __future__ import annotations

import gc
from collections import deque
from dataclasses import dataclass, field

from .surface_map import CombinatorialMap
from .walks import Perturbation, check_walk, has_spur


class SpurPresent(ValueError):
    def __init__(self, walk_id):
        super().__init__(f"walk {walk_id} has a spur; remove spurs first")
        self.walk_id = walk_id


class SplitUndefined(ValueError):
    pass


class NotCycleState(ValueError):
    pass


# ---------------------------------------------------------------------------
# preprocessing


@dataclass
class Subdivision:
    """Back-mapping from the twice-subdivided map to the original one."""

    original: CombinatorialMap
    walks: list

    def pull_back(self, P: Perturbation) -> Perturbation:
        # the first third of edge e (next to the tail of its reference dart)
        # carries the order of e
        M = self.original
        order = {}
        for e in range(M.num_edges):
            lst = P.order.get(3 * e)
            if lst:
                order[e] = [(w, j // 3) for w, j in lst]
        return Perturbation(order)


def subdivide(M: CombinatorialMap) -> CombinatorialMap:
    r"""
    Insert two vertices in every edge.

    Edge ``e`` becomes edges ``3e, 3e+1, 3e+2`` in the direction of its
    reference dart; the darts of edge ``k`` are ``2k`` (reference) and
    ``2k + 1``. Original vertices keep their ids and the two new vertices of
    edge ``e`` are ``V + 2e`` and ``V + 2e + 1``.
    """
    V = M.num_vertices
    n = 6 * M.num_edges
    twin = [d ^ 1 for d in range(n)]
    vertices = []
    for cyc in M.vertices:
        new = []
        for d in cyc:
            e = M.edge_of[d]
            new.append(6 * e if M.is_ref(d) else 6 * e + 5)
        vertices.append(new)
    for e in range(M.num_edges):
        vertices.append([6 * e + 1, 6 * e + 2])
        vertices.append([6 * e + 3, 6 * e + 4])
    rot = [0] * n
    for cyc in vertices:
        for i, d in enumerate(cyc):
            rot[d] = cyc[(i + 1) % len(cyc)]
    labels = None
    if M.vertex_labels is not None:
        labels = list(M.vertex_labels) + [f"s{e}.{k}" for e in range(M.num_edges) for k in (1, 2)]
    assert len(vertices) == V + 2 * M.num_edges
    return CombinatorialMap(twin, rot, vertices, (), labels)


def subdivide_walk(M: CombinatorialMap, walk) -> tuple:
    out = []
    for d in walk:
        e = M.edge_of[d]
        if M.is_ref(d):
            out.extend((6 * e, 6 * e + 2, 6 * e + 4))
        else:
            out.extend((6 * e + 5, 6 * e + 3, 6 * e + 1))
    return tuple(out)


def preprocess(M: CombinatorialMap, walks):
    r"""
    Make the graph loopless and simple by subdividing every edge twice.

    Returns ``(M', walks', back)`` where ``back.pull_back`` turns a
    perturbation of ``walks'`` into one of ``walks`` with no more
    self-crossings. Simple maps are returned unchanged (``back`` is ``None``).

    EXAMPLES::

        >>> from minpos.surface_map import build_map
        >>> M = build_map([(0, 1)], [[0, 1]])
        >>> M2, W2, back = preprocess(M, [(0,)])
        >>> M2.num_vertices, M2.num_edges, W2
        (3, 3, [(0, 2, 4)])
    """
    for i, w in enumerate(walks):
        if has_spur(M, w):
            raise SpurPresent(i)
    if M.is_simple():
        return M, list(walks), None
    return subdivide(M), [subdivide_walk(M, w) for w in walks], Subdivision(M, list(walks))


# ---------------------------------------------------------------------------
# arrangement


class SubArc:
    __slots__ = ("id", "edge", "pebbles", "lo", "side")

    def __init__(self, sid, edge, pebbles, lo, ends):
        self.id = sid
        self.edge = edge
        self.pebbles = pebbles
        # the sub-arc occupies positions lo .. lo + len(pebbles) - 1 of its arc
        self.lo = lo
        a, b = ends
        self.side = {a: {}, b: {}}

    def __repr__(self):
        return f"SubArc({self.id}, edge={self.edge}, size={len(self.pebbles)}, lo={self.lo})"


@dataclass
class SplitRecord:
    subarc: int
    disk: int
    N: int
    Nj: int
    groups: int


@dataclass
class SplitStats:
    # pebbles of the arrangement, three per input pebble after subdivision
    pebbles: int = 0
    input_pebbles: int = 0
    splits: int = 0
    cost: int = 0
    records: list = field(default_factory=list)


class Arrangement:
    r"""
    Sub-arcs, their pebbles, and the sub-arc graph with link payloads.

    ``subarc.side[x][t]`` is the set of pebbles of ``subarc`` linked through
    the disk of vertex ``x`` to pebbles of sub-arc ``t``; its size is the
    cached weight of the sub-arc graph edge.
    """

    def __init__(self, M: CombinatorialMap, walks, trace: bool = False):
        if not M.is_simple():
            raise ValueError("arrangements need a map without loops or parallel edges")
        self.M = M
        self.walks = walks
        keys, darts, nxt, prv = [], [], [], []
        for w, walk in enumerate(walks):
            base = len(keys)
            k = len(walk)
            for i, d in enumerate(walk):
                keys.append((w, i))
                darts.append(d)
                nxt.append(base + (i + 1) % k)
                prv.append(base + (i - 1) % k)
        self.keys, self.darts, self.nxt, self.prv = keys, darts, nxt, prv
        self.phead = [M.head(d) for d in darts]
        # per edge: tail of the reference dart, reference dart, its twin
        self._ends = [(M.tail(r), r, M.twin[r]) for r in M.edges]
        self.subarcs = []
        self.subarc_of = [None] * len(keys)
        by_edge = {}
        for p, d in enumerate(darts):
            by_edge.setdefault(M.edge_of[d], {})[p] = None
        for e in sorted(by_edge):
            self._new_subarc(e, by_edge[e], 0)
        for s in self.subarcs:
            for x in s.side:
                tbl = s.side[x]
                for p in s.pebbles:
                    t = self.subarc_of[self.link(p, x)]
                    tbl.setdefault(t, {})[p] = None
        self.stats = SplitStats(pebbles=len(keys))
        self.trace = trace
        self.worklist = deque((s, x) for s in self.subarcs for x in s.side if len(s.side[x]) > 1)

    def _new_subarc(self, e, pebbles, lo):
        r = self.M.edges[e]
        s = SubArc(len(self.subarcs), e, pebbles, lo, (self.M.tail(r), self.M.head(r)))
        self.subarcs.append(s)
        for p in pebbles:
            self.subarc_of[p] = s
        return s

    def link(self, p, x):
        """Pebble following ``p`` through the disk of vertex ``x``."""
        return self.nxt[p] if self.phead[p] == x else self.prv[p]

    def _dart_at(self, e, x):
        t, r, rr = self._ends[e]
        return r if t == x else rr

    def splittable(self, s, x) -> bool:
        return len(s.side[x]) > 1

    def split(self, s: SubArc, x: int):
        r"""
        Split sub-arc ``s`` along the disk of vertex ``x``.

        The groups of pebbles are laid out counterclockwise around the disk in
        the clockwise order of their target sub-arcs, so that the strands of
        different groups do not cross inside the disk.
        """
        groups = s.side[x]
        if len(groups) < 2:
            raise SplitUndefined(f"sub-arc {s.id} links to a single sub-arc through vertex {x}")
        M = self.M
        d_s = self._dart_at(s.edge, x)
        deg = M.degree(x)
        ri = M.rot_index(d_s)

        def ccw_key(t):
            d_t = self._dart_at(t.edge, x)
            return ((M.rot_index(d_t) - ri) % deg, t.lo if M.is_ref(d_t) else -t.lo)

        targets = sorted(groups, key=ccw_key, reverse=True)
        heavy = max(targets, key=lambda t: (len(groups[t]), -t.id))
        N = len(s.pebbles)
        Nj = len(groups[heavy])
        seq = targets if M.is_ref(d_s) else targets[::-1]
        start = {}
        cur = s.lo
        for t in seq:
            start[t] = cur
            cur += len(groups[t])
        (y,) = [z for z in s.side if z != x]
        touched = set()
        nxt, prv, phead, subarc_of = self.nxt, self.prv, self.phead, self.subarc_of
        for t in targets:
            if t is heavy:
                continue
            grp = groups.pop(t)
            for p in grp:
                del s.pebbles[p]
            q = self._new_subarc(s.edge, dict(grp), start[t])
            q.side[x][t] = grp
            t.side[x][q] = t.side[x].pop(s)
            sy, qy = s.side[y], q.side[y]
            for p in grp:
                z = nxt[p] if phead[p] == y else prv[p]
                r = subarc_of[z]
                g = sy[r]
                del g[p]
                if not g:
                    del sy[r]
                qy.setdefault(r, {})[p] = None
                ry = r.side[y]
                g = ry[s]
                del g[z]
                if not g:
                    del ry[s]
                ry.setdefault(q, {})[z] = None
                touched.add(r)
            self.worklist.append((q, y))
        s.lo = start[heavy]
        self.worklist.append((s, y))
        for r in sorted(touched, key=lambda r: r.id):
            self.worklist.append((r, y))
        st = self.stats
        st.splits += 1
        st.cost += N - Nj
        if self.trace:
            st.records.append(SplitRecord(s.id, x, N, Nj, len(targets)))

    def run(self):
        """Split as long as possible."""
        wl = self.worklist
        while wl:
            s, x = wl.popleft()
            if len(s.side[x]) > 1:
                self.split(s, x)
        return self

    def is_cycle_state(self) -> bool:
        return all(len(tbl) <= 1 for s in self.subarcs for tbl in s.side.values())

    def check(self):
        """Verify the bookkeeping invariants (for tests)."""
        for p, s in enumerate(self.subarc_of):
            assert p in s.pebbles
        for e in {s.edge for s in self.subarcs}:
            spans = sorted((s.lo, len(s.pebbles)) for s in self.subarcs if s.edge == e)
            pos = 0
            for lo, k in spans:
                assert lo == pos and k > 0
                pos += k
        for s in self.subarcs:
            for x, tbl in s.side.items():
                assert sum(len(g) for g in tbl.values()) == len(s.pebbles)
                for t, g in tbl.items():
                    for p in g:
                        assert self.subarc_of[self.link(p, x)] is t
                    assert len(t.side[x][s]) == len(g)


def split(A: Arrangement, p0: SubArc, D: int) -> Arrangement:
    A.split(p0, D)
    return A


def finalize_cycles(A: Arrangement) -> Perturbation:
    r"""
    Order pebbles inside the sub-arcs of a cycle state.

    Each cycle ``s_0, ..., s_{L-1}`` of the sub-arc graph carries strands at
    levels; levels are kept parallel between consecutive sub-arcs, and between
    ``s_{L-1}`` and ``s_0`` every curve shifts its levels by one inside its own
    block of consecutive levels.
    """
    if not A.is_cycle_state():
        raise NotCycleState("a split still applies")
    M = A.M
    position = [0] * len(A.keys)
    visited = set()

    def ccw_fwd(s, x):
        return M.is_ref(A._dart_at(s.edge, x))

    for s0 in A.subarcs:
        if s0.id in visited:
            continue
        r = M.edges[s0.edge]
        x = M.tail(r)
        cyc, disks = [s0], []
        s = s0
        while True:
            (t,) = s.side[x]
            disks.append(x)
            if t is s0:
                break
            assert t.id not in visited
            cyc.append(t)
            (x,) = [z for z in t.side if z != x]
            s = t
        assert disks[-1] == M.head(r), "cycle does not close on the other side"
        L = len(cyc)
        assert L >= 3
        for s in cyc:
            visited.add(s.id)
        lf = {s0.id: True}
        for i in range(L - 1):
            up = lf[cyc[i].id] == ccw_fwd(cyc[i], disks[i])
            lf[cyc[i + 1].id] = (not up) == ccw_fwd(cyc[i + 1], disks[i])
        up_last = lf[cyc[-1].id] == ccw_fwd(cyc[-1], disks[-1])
        up_first = lf[s0.id] == ccw_fwd(s0, disks[-1])
        assert up_first != up_last, "orientation-reversing cycle"

        origin = {p: p for p in s0.pebbles}
        for i in range(L - 1):
            for p in cyc[i].pebbles:
                origin[A.link(p, disks[i])] = origin[p]
        succ = {}
        for p in cyc[-1].pebbles:
            succ[origin[p]] = A.link(p, disks[-1])
        level = {}
        starts = {}
        for p in s0.pebbles:
            # one cycle of succ per curve; start each at its earliest pebble
            if p in starts:
                continue
            orbit = [p]
            q = succ[p]
            while q != p:
                orbit.append(q)
                q = succ[q]
            first = min(orbit, key=lambda q: A.keys[q])
            for q in orbit:
                starts[q] = first
        blocks = sorted({starts[p] for p in s0.pebbles}, key=lambda q: A.keys[q])
        lev = 0
        for first in blocks:
            q = first
            while True:
                level[q] = lev
                lev += 1
                q = succ[q]
                if q == first:
                    break
        for i in range(L - 1):
            for p in cyc[i].pebbles:
                level[A.link(p, disks[i])] = level[p]
        for s in cyc:
            ordered = sorted(s.pebbles, key=level.__getitem__, reverse=not lf[s.id])
            for k, p in enumerate(ordered):
                position[p] = s.lo + k
    order = {}
    for p, key in enumerate(A.keys):
        order.setdefault(M.edge_of[A.darts[p]], []).append(p)
    return Perturbation({e: [A.keys[p] for p in sorted(lst, key=position.__getitem__)]
                         for e, lst in order.items()})


def minimize_with_stats(M: CombinatorialMap, walks, trace: bool = False):
    """Like :func:`minimize_perturbation` but also return the :class:`SplitStats`."""
    for i, w in enumerate(walks):
        check_walk(M, w, i)
        if has_spur(M, w):
            raise SpurPresent(i)
    ids = [i for i, w in enumerate(walks) if w]
    sub = [walks[i] for i in ids]
    M2, W2, back = preprocess(M, sub)
    # the arrangement allocates many small containers but creates no garbage
    # cycles; pausing the cycle collector keeps the run close to linear
    enabled = gc.isenabled()
    gc.disable()
    try:
        A = Arrangement(M2, W2, trace=trace).run()
        P = finalize_cycles(A)
        if back is not None:
            P = back.pull_back(P)
        P = P.relabel(ids)
        stats = A.stats
        del A
    finally:
        if enabled:
            gc.enable()
    stats.input_pebbles = sum(len(w) for w in sub)
    return P, stats


def minimize_perturbation(M: CombinatorialMap, walks) -> Perturbation:
    r"""
    A perturbation of ``walks`` with the minimum number of self-crossings.

    Walks must be spur-free; empty walks are allowed and carry no pebbles.
    """
    return minimize_with_stats(M, walks)[0]
