r"""
Minimal position on surfaces with boundary.

A face without a boundary component is a disk, so an edge between it and a
neighbouring face can be pushed across it. Removing such edges along a dual
spanning tree until every face holds a boundary component gives a submap
``M0`` onto which the surface retracts; contracting a spanning tree of
``M0`` leaves a one-vertex map where walks are minimized and then lifted back.

EXAMPLES::

    >>> from minpos.surface_map import build_map
    >>> A = build_map([(0, 1)], [[0, 1]], boundary_faces=[0, 1])   # annulus
    >>> minimize_with_boundary(A, [(0, 0, 0)]).count
    2
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .contraction import lift_contraction
from .crossings import count_self_crossings
from .minpert import minimize_with_stats
from .surface_map import CombinatorialMap, map_walk, tree_cotree
from .walks import Perturbation, check_walk, is_rotation, remove_spurs


class NoBoundary(ValueError):
    pass


@dataclass
class BoundaryPipelineState:
    M: CombinatorialMap
    M0: CombinatorialMap
    to_M0: list
    removed: list
    replacements: dict
    Y: frozenset
    Ystar: frozenset
    M1: CombinatorialMap | None = None
    to_M1: list | None = None


def build_M0(M: CombinatorialMap, rng: random.Random | None = None, tc=None) -> BoundaryPipelineState:
    r"""
    Remove edges until every face contains a boundary component.

    The dual tree is rooted at the first boundary face; the edge from a face
    to its parent is removed exactly when the face has no boundary. The
    replacement of a removed dart runs backwards around the rest of that face
    (the side away from the parent), with removed edges inside it expanded
    recursively.
    """
    if not M.boundary_faces:
        raise NoBoundary("map has no boundary face")
    if tc is None:
        tc = tree_cotree(M, rng)
    flagged = M.boundary_faces
    root = min(flagged)
    parent_dart = {}
    depth = {root: 0}
    q = deque([root])
    while q:
        f = q.popleft()
        for d in M.faces[f]:
            if M.edge_of[d] not in tc.Ystar:
                continue
            g = M.face_of[M.twin[d]]
            if g not in depth:
                depth[g] = depth[f] + 1
                # dart of the edge lying in the child face g
                parent_dart[g] = M.twin[d]
                q.append(g)
    assert len(depth) == M.num_faces
    removed_faces = sorted((f for f in parent_dart if f not in flagged), key=lambda f: -depth[f])
    replacements = {}

    def expand(d):
        return replacements.get(d, (d,))

    for f in removed_faces:
        d = parent_dart[f]
        cyc = M.faces[f]
        i = cyc.index(d)
        rest = cyc[i + 1:] + cyc[:i]
        # rest already goes around f; d is homotopic to the reverse of rest
        path = []
        for x in reversed(rest):
            path.extend(expand(M.twin[x]))
        replacements[d] = tuple(path)
        replacements[M.twin[d]] = tuple(M.twin[x] for x in reversed(path))
    removed = sorted(M.edge_of[parent_dart[f]] for f in removed_faces)
    M0, to_M0 = M.delete_edges(removed)
    assert len(M0.boundary_faces) == M0.num_faces
    return BoundaryPipelineState(M, M0, to_M0, removed, replacements, tc.Y, tc.Ystar)


def is_minimal_removal(state: BoundaryPipelineState) -> bool:
    """True when keeping any single removed edge leaves a face without boundary."""
    for e in state.removed:
        N, _ = state.M.delete_edges([x for x in state.removed if x != e])
        if len(N.boundary_faces) == N.num_faces:
            return False
    return True


def push_walks(state: BoundaryPipelineState, walks) -> list:
    r"""Push walks into ``M0``; the result uses darts of ``M0``."""
    out = []
    for w in walks:
        path = [x for d in w for x in state.replacements.get(d, (d,))]
        out.append(remove_spurs(state.M0, map_walk(path, state.to_M0)))
    return out


def lift_perturbation(state: BoundaryPipelineState, walks1, P1: Perturbation):
    r"""
    Lift walks of ``M1`` and a perturbation of them back to ``M0``.

    Returns ``(walks0, P0)`` with the same number of crossings.
    """
    M0 = state.M0
    back = {nd: d for d, nd in enumerate(state.to_M1) if nd >= 0}
    M1 = state.M1
    W = [tuple(back[d] for d in w) for w in walks1]
    P = Perturbation({M0.edge_of[back[M1.edges[e]]]: lst for e, lst in P1.order.items() if lst})
    return lift_contraction(M0, _tree_in_M0(state), W, P)


def _tree_in_M0(state):
    M, M0 = state.M, state.M0
    return {M0.edge_of[state.to_M0[M.edges[e]]] for e in state.Y}


@dataclass
class BoundaryResult:
    walks: list
    perturbation: Perturbation
    count: int
    state: BoundaryPipelineState
    stats: object = None


def minimize_with_boundary(M: CombinatorialMap, walks, rng: random.Random | None = None, tc=None) -> BoundaryResult:
    r"""
    Minimal position of closed walks on a surface with boundary.

    Returns walks of ``M`` homotopic to the input (contractible ones become
    empty), a perturbation of them in ``M`` and its number of crossings.
    """
    for i, w in enumerate(walks):
        check_walk(M, w, i)
    state = build_M0(M, rng, tc)
    C0 = push_walks(state, walks)
    M1, to_M1 = state.M0.contract_tree(_tree_in_M0(state))
    state.M1, state.to_M1 = M1, to_M1
    C1 = [map_walk(w, to_M1) for w in C0]
    P1, stats = minimize_with_stats(M1, C1)
    count = count_self_crossings(M1, C1, P1)
    W0, P0 = lift_perturbation(state, C1, P1)
    # the lift reproduces C0 up to the starting point of each walk
    assert all(is_rotation(a, b) for a, b in zip(W0, C0))
    back = {nd: d for d, nd in enumerate(state.to_M0) if nd >= 0}
    W = [tuple(back[d] for d in w) for w in W0]
    P = Perturbation({M.edge_of[back[state.M0.edges[e]]]: lst for e, lst in P0.order.items()})
    return BoundaryResult(W, P, count, state, stats)
