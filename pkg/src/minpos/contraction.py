r"""
Undo a tree contraction on perturbed walks.

Contracting a spanning tree ``T`` merges all vertex disks and the arcs of the
tree edges into one disk. To go back, place the boundary points of the merged
disk (pebble endpoints and one marker at each end of every tree arc) on the
convex curve ``y = x^2`` in counterclockwise order and draw every strand as a
straight chord. The segment between the two markers of a tree arc cuts off the
subtree hanging from it; these cuts are pairwise disjoint, so they chop the
convex disk into one convex piece per vertex. Each chord crosses a cut at most
once and two chords at most once, so the order in which chords meet a cut
gives a perturbation of the tree edge with exactly as many crossings as the
merged disk. Coordinates are integers and intersections are compared exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .surface_map import CombinatorialMap
from .walks import Perturbation


class Inconsistent(AssertionError):
    pass


def _tree_paths(M: CombinatorialMap, root: int, tree):
    # parent dart (parent -> child) and depth of every vertex
    down = {}
    depth = {root: 0}
    stack = [root]
    while stack:
        v = stack.pop()
        for d in M.vertices[v]:
            if M.edge_of[d] in tree:
                u = M.head(d)
                if u not in depth:
                    depth[u] = depth[v] + 1
                    down[u] = d
                    stack.append(u)
    return down, depth


def _path(M, down, depth, a, b):
    up, dn = [], []
    while depth[a] > depth[b]:
        d = down[a]
        up.append(M.twin[d])
        a = M.tail(d)
    while depth[b] > depth[a]:
        d = down[b]
        dn.append(d)
        b = M.tail(d)
    while a != b:
        d = down[a]
        up.append(M.twin[d])
        a = M.tail(d)
        d = down[b]
        dn.append(d)
        b = M.tail(d)
    return up + dn[::-1]


def lift_contraction(M: CombinatorialMap, tree, walks, P: Perturbation, root: int = 0):
    r"""
    Expand walks of the contracted map back into ``M``.

    ``walks`` are given as darts of ``M`` that are not in the spanning tree
    ``tree`` (a set of edge ids); consecutive darts are joined through the
    tree. ``P`` orders their pebbles on the non-tree edges of ``M``. Returns
    ``(walks2, P2)``: the walks with tree paths inserted, and a perturbation
    of them in ``M`` with the same number of self-crossings.

    EXAMPLES::

        >>> from minpos.surface_map import build_map
        >>> from minpos.crossings import count_self_crossings
        >>> M = build_map([(0, 1), (2, 3)], [[0, 1, 2], [3]])
        >>> W, P = lift_contraction(M, {1}, [(0,)], Perturbation({0: [(0, 0)]}))
        >>> W
        [(0,)]
    """
    tree = set(tree)
    if not tree:
        return [tuple(w) for w in walks], Perturbation({e: list(l) for e, l in P.order.items()})
    twin = M.twin
    down, depth = _tree_paths(M, root, tree)
    if len(depth) != M.num_vertices:
        raise Inconsistent("tree does not span the map")

    # boundary sequence of the merged disk
    index = {}
    enter, leave = {}, {}
    k = 0
    for kind, d in M.euler_tour(root, tree):
        if kind == "dart":
            lst = P.order.get(M.edge_of[d], ())
            for p in (lst if M.is_ref(d) else reversed(lst)):
                index[(d, p)] = k
                k += 1
        elif kind == "enter":
            enter[M.edge_of[d]] = k
            k += 1
        else:
            leave[M.edge_of[d]] = k
            k += 1

    new_walks = []
    newpos = {}
    hits = {e: [] for e in tree}
    for w, walk in enumerate(walks):
        out = []
        n = len(walk)
        paths = []
        for i in range(n):
            d, nd = walk[i], walk[(i + 1) % n]
            paths.append(_path(M, down, depth, M.head(d), M.tail(nd)))
        # the path after step i belongs to the strand from pebble i to pebble i+1
        for i in range(n):
            newpos[(w, i)] = len(out)
            out.append(walk[i])
            out.extend(paths[i])
        for i in range(n):
            path = paths[i]
            if not path:
                continue
            a = index[(twin[walk[i]], (w, i))]
            b = index[(walk[(i + 1) % n], (w, (i + 1) % n))]
            start = newpos[(w, i)] + 1
            for j, t in enumerate(path):
                e = M.edge_of[t]
                hits[e].append((_cut_key(enter[e], leave[e], a, b), (w, start + j)))
        new_walks.append(tuple(out))

    order = {}
    for e, lst in P.order.items():
        if lst:
            order[e] = [(w, newpos[(w, i)]) for w, i in lst]
    for e, lst in hits.items():
        if not lst:
            continue
        lst.sort(key=lambda h: h[0])
        for x, y in zip(lst, lst[1:]):
            if x[0] == y[0]:
                raise Inconsistent(f"two strands meet tree edge {e} at the same point")
        seq = [p for _, p in lst]
        # the strip is traversed from the enter marker to the leave marker in the
        # counterclockwise order of the parent disk
        t = M.edges[e]
        if down.get(M.head(t)) != t:
            t = twin[t]
        order[e] = seq if M.is_ref(t) else seq[::-1]
    return new_walks, Perturbation(order)


def _pt(i):
    return i, i * i


def _cut_key(p, q, a, b):
    # parameter of the intersection of chord ab with segment pq, then a
    # tie-break as if the segment were pushed slightly into the subtree side
    px, py = _pt(p)
    qx, qy = _pt(q)
    ax, ay = _pt(a)
    bx, by = _pt(b)
    ux, uy = qx - px, qy - py
    dx, dy = bx - ax, by - ay
    den = ux * dy - uy * dx
    if den == 0:
        raise Inconsistent("strand parallel to a cut")
    num = (ax - px) * dy - (ay - py) * dx
    # normal pointing below the segment, towards the points of the subtree
    nx, ny = uy, -ux
    return Fraction(num, den), Fraction(-(nx * dy - ny * dx), den)
