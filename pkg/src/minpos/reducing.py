r"""
Reducing triangulations and reduced closed walks (closed surfaces, genus >= 2).

A reducing triangulation has triangular faces, vertex degrees at least 8 and a
bipartite dual; its faces are colored red and blue (face 0 red). A closed
walk is reduced when none of its turns is bad, in either direction:

* it goes back along the edge it came from,
* it leaves a single triangle on its left,
* it leaves two triangles on its left and the first one met is red,

and it is not one of the exceptional walks that leave three triangles on the
left at every vertex with a blue middle one (or the mirror condition).

Reduced walks are in minimal position once perturbed minimally, so their
intersection numbers come straight out of :func:`minimize_perturbation`.
Reducing an arbitrary walk is not provided.

EXAMPLES::

    >>> T = search_reducing(2)
    >>> T.map.num_vertices, T.map.num_edges, T.map.num_faces, T.map.genus
    (1, 9, 6, 2)
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product

from .crossings import count_self_crossings
from .minpert import minimize_perturbation
from .surface_map import CombinatorialMap


class NotTriangulation(ValueError):
    def __init__(self, face, degree):
        super().__init__(f"face {face} has degree {degree}, not 3")
        self.face, self.degree = face, degree


class LowDegreeVertex(ValueError):
    def __init__(self, vertex, degree):
        super().__init__(f"vertex {vertex} has degree {degree} < 8")
        self.vertex, self.degree = vertex, degree


class DualOddCycle(ValueError):
    def __init__(self, cycle):
        super().__init__(f"dual graph has an odd cycle through faces {cycle}")
        self.cycle = cycle


class WrongGenus(ValueError):
    def __init__(self, genus, boundaries=0):
        super().__init__(f"need a closed surface of genus >= 2, got genus {genus} with {boundaries} boundaries")
        self.genus, self.boundaries = genus, boundaries


class NotReduced(ValueError):
    def __init__(self, walk_id, step, reason):
        super().__init__(f"walk {walk_id} is not reduced at step {step}: {reason}")
        self.walk_id, self.step, self.reason = walk_id, step, reason


RED, BLUE = 0, 1


@dataclass(frozen=True)
class ReducingTriangulation:
    map: CombinatorialMap
    coloring: tuple

    def red(self, f) -> bool:
        return self.coloring[f] == RED


def validate_reducing(T: CombinatorialMap) -> ReducingTriangulation:
    r"""
    Certify a reducing triangulation and 2-color its faces.

    Checks run in this order, each failure carrying a witness: face degrees,
    vertex degrees, bipartite dual, genus.
    """
    for f, cyc in enumerate(T.faces):
        if len(cyc) != 3:
            raise NotTriangulation(f, len(cyc))
    for v in range(T.num_vertices):
        if T.degree(v) < 8:
            raise LowDegreeVertex(v, T.degree(v))
    color = [-1] * T.num_faces
    parent = [-1] * T.num_faces
    color[0] = RED
    q = deque([0])
    while q:
        f = q.popleft()
        for d in T.faces[f]:
            g = T.face_of[T.twin[d]]
            if color[g] < 0:
                color[g] = 1 - color[f]
                parent[g] = f
                q.append(g)
            elif color[g] == color[f]:
                raise DualOddCycle(_odd_cycle(parent, f, g))
    if T.boundary_faces or T.genus < 2:
        raise WrongGenus(T.genus, len(T.boundary_faces))
    return ReducingTriangulation(T, tuple(color))


def _odd_cycle(parent, f, g):
    if f == g:
        return [f]

    def chain(x):
        out = [x]
        while parent[x] >= 0:
            x = parent[x]
            out.append(x)
        return out

    a, b = chain(f), chain(g)
    common = set(a) & set(b)
    i = next(k for k, x in enumerate(a) if x in common)
    j = b.index(a[i])
    return a[:i + 1] + b[:j][::-1]


def left_count(M: CombinatorialMap, d_in: int, d_out: int) -> int:
    """Number of triangles on the left of the turn ``d_in -> d_out``."""
    v = M.tail(d_out)
    return (M.rot_index(M.twin[d_in]) - M.rot_index(d_out)) % M.degree(v)


def bad_turn(T: ReducingTriangulation, d_in: int, d_out: int):
    r"""Reason why the turn is bad (for the walk or its reversal), or ``None``."""
    M = T.map
    k = left_count(M, d_in, d_out)
    kr = (-k) % M.degree(M.tail(d_out))
    if k == 0:
        return "spur"
    if k == 1:
        return "one triangle on the left"
    if kr == 1:
        return "one triangle on the right"
    if k == 2 and T.red(M.face_of[M.twin[d_in]]):
        return "two triangles on the left, first one red"
    if kr == 2 and T.red(M.face_of[d_out]):
        return "two triangles on the right, first one red"
    return None


def is_exception(T: ReducingTriangulation, walk) -> bool:
    r"""
    True for the exceptional closed walks: three triangles on the left at
    every turn with a blue middle one, or the same on the right.
    """
    M = T.map
    n = len(walk)
    if not n:
        return False
    left = right = True
    for i in range(n):
        d_in, d_out = walk[i], walk[(i + 1) % n]
        k = left_count(M, d_in, d_out)
        kr = (-k) % M.degree(M.tail(d_out))
        r1 = M.rot[d_out]
        if not (k == 3 and not T.red(M.face_of[M.rot[r1]])):
            left = False
        t1 = M.rot[M.twin[d_in]]
        if not (kr == 3 and not T.red(M.face_of[M.rot[t1]])):
            right = False
    return left or right


def first_violation(T: ReducingTriangulation, walk):
    n = len(walk)
    for i in range(n):
        r = bad_turn(T, walk[i], walk[(i + 1) % n])
        if r:
            return i, r
    if is_exception(T, walk):
        return 0, "exceptional walk"
    return None


def is_reduced(T: ReducingTriangulation, walk) -> bool:
    return bool(walk) and first_violation(T, walk) is None


def intersection_number_reduced(T: ReducingTriangulation, walks):
    r"""
    Intersection number of a collection of reduced closed walks.

    Returns ``(count, P)``. Raises :class:`NotReduced` with the first bad
    turn of the first offending walk.
    """
    for w, walk in enumerate(walks):
        if not walk:
            raise NotReduced(w, 0, "empty walk")
        v = first_violation(T, walk)
        if v:
            raise NotReduced(w, *v)
    P = minimize_perturbation(T.map, walks)
    return count_self_crossings(T.map, walks, P), P


def dual_map(M: CombinatorialMap) -> CombinatorialMap:
    """Dual map: same darts and twins, rotation ``rot . twin``."""
    n = M.num_darts
    rot = [M.rot[M.twin[d]] for d in range(n)]
    return CombinatorialMap(M.twin, rot, M.faces)


def _cubic_bipartite(genus: int):
    # bipartite cubic graph on 2n vertices, n = 2g - 1: a_i ~ b_i, b_{i+1}, b_{i+s}
    n = 2 * genus - 1
    offsets = (0, 1, 2) if n == 3 else (0, 1, 3)
    edges = [(i, n + (i + o) % n) for i in range(n) for o in offsets]
    return 2 * n, edges


def search_reducing(genus: int = 2, max_vertices: int = 6, budget: int = 1 << 16):
    r"""
    Find a one-vertex reducing triangulation of the given genus.

    Its dual is a bipartite cubic graph embedded with a single face; rotation
    systems of a fixed such graph are enumerated (two per vertex) until one
    has one face. Returns ``None`` when nothing is found within ``budget``
    rotation systems.
    """
    if genus < 2 or max_vertices < 1:
        return None
    nv, edges = _cubic_bipartite(genus)
    if len(set(edges)) != len(edges):
        return None
    twin = [d ^ 1 for d in range(2 * len(edges))]
    around = [[] for _ in range(nv)]
    for e, (a, b) in enumerate(edges):
        around[a].append(2 * e)
        around[b].append(2 * e + 1)
    for k, flips in enumerate(product((False, True), repeat=nv)):
        if k >= budget:
            return None
        cycles = [tuple(c[::-1]) if f else tuple(c) for c, f in zip(around, flips)]
        rot = [0] * len(twin)
        for c in cycles:
            for i, d in enumerate(c):
                rot[d] = c[(i + 1) % 3]
        G = CombinatorialMap(twin, rot, cycles)
        if G.num_faces == 1 and len(G.faces) == 1:
            return validate_reducing(dual_map(G))
    return None


def exceptional_walk(T: ReducingTriangulation, d0: int, length: int = 64):
    r"""
    Follow the rule "three triangles on the left" from dart ``d0`` until it
    closes up; returns the closed walk, or ``None`` if it does not close
    within ``length`` steps or is not exceptional.
    """
    M = T.map
    walk = [d0]
    for _ in range(length):
        t = M.twin[walk[-1]]
        v = M.tail(t)
        i = (M.rot_index(t) - 3) % M.degree(v)
        d = M.vertices[v][i]
        if d == d0:
            return tuple(walk) if is_exception(T, walk) else None
        walk.append(d)
    return None
