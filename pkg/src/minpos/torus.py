r"""
Minimal position of closed curves on the torus.

Any cellular map of the torus simplifies to the one-vertex map with two loops
``l1`` (darts 0, 1) and ``l2`` (darts 2, 3) and rotation ``(0, 2, 1, 3)``.
There a walk is determined up to homotopy by its class ``(k1, k2)``, the
signed number of times it takes each loop, and a *quasi-geodesic*
representative reads the loops in the order a straight segment of slope
``k2 / k1`` crosses the grid lines. A minimal perturbation of
quasi-geodesics is in minimal position on the torus.

EXAMPLES::

    >>> quasi_geodesic(TorusClass(2, 1))
    (0, 0, 2)
    >>> minimize_classes([(2, 0)]).count
    1
    >>> torus_formula([(1, 0), (0, 1)])
    1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import NamedTuple

from .contraction import lift_contraction
from .crossings import count_self_crossings
from .minpert import minimize_with_stats
from .surface_map import CombinatorialMap, build_map, map_walk, simplify_to_one_vertex
from .walks import Perturbation, check_walk, remove_spurs


class ContractibleClass(ValueError):
    pass


class NotGenusOne(ValueError):
    pass


class TorusClass(NamedTuple):
    k1: int
    k2: int


def canonical_loops() -> CombinatorialMap:
    return build_map([(0, 1), (2, 3)], [[0, 2, 1, 3]])


CanonicalLoops = canonical_loops


def winding(walk) -> TorusClass:
    """Class of a walk on the canonical loops.

    >>> winding((0, 0, 2)), winding((0, 2, 1, 3)), winding((3, 3, 3))
    (TorusClass(k1=2, k2=1), TorusClass(k1=0, k2=0), TorusClass(k1=0, k2=-3))
    """
    k = [0, 0, 0, 0]
    for d in walk:
        k[d] += 1
    return TorusClass(k[0] - k[1], k[2] - k[3])


def quasi_geodesic(k) -> tuple:
    r"""
    Quasi-geodesic closed walk of class ``k`` on the canonical loops.

    The segment from a generic point ``p`` to ``p + k`` crosses vertical grid
    lines at times ``i / |k1|`` and horizontal ones at ``j / |k2|``; both
    sequences are merged by cross-multiplication, vertical first on ties.
    """
    k1, k2 = k
    if k1 == 0 and k2 == 0:
        raise ContractibleClass("class (0, 0) has no quasi-geodesic")
    a, b = abs(k1), abs(k2)
    s1 = 0 if k1 > 0 else 1
    s2 = 2 if k2 > 0 else 3
    out = []
    i = j = 1
    while i <= a or j <= b:
        if j > b or (i <= a and i * b <= j * a):
            out.append(s1)
            i += 1
        else:
            out.append(s2)
            j += 1
    return tuple(out)


def degraaf_combine(n: int, m: int, i_hat: int, i_star_hat: int, same_primitive: bool):
    r"""
    Intersection numbers of powers from those of primitive curves.

    For ``c = c_hat^n`` and ``d = d_hat^m``: ``i(c) = n^2 i(c_hat) + n - 1``,
    and ``i(c, d)`` is ``2nm i(c_hat)`` when ``c_hat`` and ``d_hat`` coincide
    (up to orientation), ``nm i(c_hat, d_hat)`` otherwise.

    >>> degraaf_combine(2, 3, 1, 0, True)
    (5, 12)
    """
    i_c = n * n * i_hat + n - 1
    i_star = 2 * n * m * i_hat if same_primitive else n * m * i_star_hat
    return i_c, i_star


def primitive(k):
    n = gcd(abs(k[0]), abs(k[1]))
    return n, (k[0] // n, k[1] // n)


def torus_formula(classes) -> int:
    r"""
    Closed-form intersection number of a collection of torus classes.

    Self term ``gcd - 1`` per curve; pair term ``n_c n_d |p s - q r|`` on the
    primitive parts, which is ``|det|`` of the two classes. Contractible
    classes contribute nothing.
    """
    ks = [tuple(k) for k in classes if tuple(k) != (0, 0)]
    total = sum(primitive(k)[0] - 1 for k in ks)
    for x in range(len(ks)):
        for y in range(x + 1, len(ks)):
            (a, b), (c, d) = ks[x], ks[y]
            total += abs(a * d - b * c)
    return total


def random_classes(rng, n):
    """Nonzero classes whose quasi-geodesics total exactly ``n`` steps."""
    classes = []
    left = n
    while left > 0:
        a = rng.randint(1, max(1, left // 2))
        b = rng.randint(0, max(0, left - a))
        classes.append((a * rng.choice((1, -1)), b * rng.choice((1, -1))))
        left -= a + b
    return classes


@dataclass
class TorusResult:
    walks: list
    perturbation: Perturbation
    count: int
    classes: list = field(default_factory=list)
    contractible: list = field(default_factory=list)
    stats: object = None


def minimize_classes(classes) -> TorusResult:
    """Minimal position of quasi-geodesics of the given classes on the canonical loops."""
    L = canonical_loops()
    walks = [quasi_geodesic(k) if tuple(k) != (0, 0) else () for k in classes]
    P, stats = minimize_with_stats(L, walks)
    count = count_self_crossings(L, walks, P)
    return TorusResult(walks, P, count, [TorusClass(*k) for k in classes],
                       [i for i, k in enumerate(classes) if tuple(k) == (0, 0)], stats)


def _drop_triangle_loop(cur: CombinatorialMap, walks, to_orig):
    # two triangular faces: remove the lowest loop bordering both of them,
    # rewriting d as the other two sides of its triangle
    for e, r in enumerate(cur.edges):
        if cur.face_of[r] != cur.face_of[cur.twin[r]]:
            break
    else:
        raise NotGenusOne("no loop separates the two faces")
    sub = {}
    for d in (r, cur.twin[r]):
        f1 = cur.rot[cur.twin[d]]
        f2 = cur.rot[cur.twin[f1]]
        sub[d] = (cur.twin[f2], cur.twin[f1])
    walks = [tuple(x for d in w for x in sub.get(d, (d,))) for w in walks]
    nxt, o2n = cur.delete_edges([e])
    new_to = [0] * nxt.num_darts
    for d, nd in enumerate(o2n):
        if nd >= 0:
            new_to[nd] = to_orig[d]
    walks = [remove_spurs(nxt, map_walk(w, o2n)) for w in walks]
    return nxt, walks, new_to


def minimize_on_torus(M: CombinatorialMap, walks, tree=None, rng=None) -> TorusResult:
    r"""
    Minimal position of closed walks of a map on the torus.

    Returns walks of ``M`` homotopic to the input, a perturbation realizing
    the minimum number of crossings, that number, the classes and the indices
    of contractible walks (which are returned empty and cost nothing).
    """
    if M.genus != 1 or M.boundary_faces:
        raise NotGenusOne(f"map has genus {M.genus} and {len(M.boundary_faces)} boundary faces")
    for i, w in enumerate(walks):
        check_walk(M, w, i)
    cur, cw, simp = simplify_to_one_vertex(M, walks, allow_empty=True, tree=tree, rng=rng)
    to_orig = list(simp.to_original)
    if cur.num_edges == 3:
        cur, cw, to_orig = _drop_triangle_loop(cur, cw, to_orig)
    if cur.num_edges != 2 or cur.num_faces != 1:
        raise NotGenusOne("simplification did not reach two loops")
    x0, x1, x2, x3 = cur.vertices[0]
    if cur.twin[x0] != x2 or cur.twin[x1] != x3:
        raise NotGenusOne("loops do not cross at the vertex")
    canon = {x0: 0, x2: 1, x1: 2, x3: 3}
    back = {v: k for k, v in canon.items()}
    classes = [winding([canon[d] for d in w]) for w in cw]
    contractible = [i for i, k in enumerate(classes) if k == (0, 0)]
    qg = [tuple(back[d] for d in quasi_geodesic(k)) if k != (0, 0) else () for k in classes]
    P2, stats = minimize_with_stats(cur, qg)
    count = count_self_crossings(cur, qg, P2)
    W = [tuple(to_orig[d] for d in w) for w in qg]
    P = Perturbation({M.edge_of[to_orig[cur.edges[e]]]: lst for e, lst in P2.order.items() if lst})
    W2, P3 = lift_contraction(M, simp.tree, W, P)
    return TorusResult(W2, P3, count, classes, contractible, stats)
