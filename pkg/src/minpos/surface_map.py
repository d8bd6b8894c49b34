r"""
Combinatorial maps of graphs cellularly embedded on orientable surfaces.

A map is stored as two permutations of its darts:

* ``twin`` -- the fixed-point free involution sending a dart to its reverse,
* ``rot`` -- the next dart with the same tail, counterclockwise.

Vertices are the cycles of ``rot``, edges the cycles of ``twin`` and faces the
cycles of ``d -> rot[twin[d]]``. With this convention the face of a dart lies
on its right, and the corner between ``d`` and ``rot[d]`` belongs to the face of
``twin[d]``. The reference dart of an edge is the smaller of its two darts.

EXAMPLES::

    >>> M = build_map([(0, 1), (2, 3)], [[0, 2, 1, 3]])
    >>> M.num_vertices, M.num_edges, M.num_faces, M.genus
    (1, 2, 1, 1)
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class MapError(ValueError):
    """Base class for invalid map input."""


class NonInvolution(MapError):
    def __init__(self, dart, msg="twin pairing is not a fixed-point free involution"):
        super().__init__(f"{msg} (dart {dart})")
        self.dart = dart


class DartMissing(MapError):
    def __init__(self, dart, msg="dart does not appear exactly once in the rotations"):
        super().__init__(f"{msg} (dart {dart})")
        self.dart = dart


class Disconnected(MapError):
    def __init__(self, vertex):
        super().__init__(f"map is not connected (vertex {vertex} unreachable from vertex 0)")
        self.vertex = vertex


class EmptyWalk(ValueError):
    """Raised when simplification turns a walk into the empty (contractible) walk."""

    def __init__(self, walk_id):
        super().__init__(f"walk {walk_id} became empty; it is contractible")
        self.walk_id = walk_id


class CombinatorialMap:
    r"""
    Dart-based cellular embedding.

    Use :func:`build_map` to construct one from twin pairs and rotations;
    the constructor only takes already validated permutations.

    ``boundary_faces`` holds the ids of the faces containing a boundary
    component of the surface. Faces are numbered by increasing smallest dart.
    """

    __slots__ = (
        "twin", "rot", "boundary_faces", "vertex_labels",
        "vertex_of", "vertices", "face_of", "faces", "edge_of", "edges", "_rot_index",
    )

    def __init__(self, twin, rot, vertices, boundary_faces=(), vertex_labels=None):
        self.twin = tuple(twin)
        self.rot = tuple(rot)
        n = len(self.twin)
        self.vertices = [tuple(v) for v in vertices]
        self.vertex_of = [0] * n
        self._rot_index = [0] * n
        for i, cyc in enumerate(self.vertices):
            for j, d in enumerate(cyc):
                self.vertex_of[d] = i
                self._rot_index[d] = j
        self.edges = [d for d in range(n) if d < self.twin[d]]
        self.edge_of = [0] * n
        for e, d in enumerate(self.edges):
            self.edge_of[d] = e
            self.edge_of[self.twin[d]] = e
        self.face_of = [-1] * n
        self.faces = []
        for d in range(n):
            if self.face_of[d] != -1:
                continue
            f = len(self.faces)
            cyc = []
            x = d
            while self.face_of[x] == -1:
                self.face_of[x] = f
                cyc.append(x)
                x = self.rot[self.twin[x]]
            self.faces.append(tuple(cyc))
        self.boundary_faces = frozenset(boundary_faces)
        self.vertex_labels = list(vertex_labels) if vertex_labels is not None else None

    # counts ---------------------------------------------------------------

    @property
    def num_darts(self) -> int:
        return len(self.twin)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_faces(self) -> int:
        # a single vertex without edges is the sphere with one face
        return max(1, len(self.faces))

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    @property
    def num_boundaries(self) -> int:
        return len(self.boundary_faces)

    # local structure --------------------------------------------------------

    def tail(self, d: int) -> int:
        return self.vertex_of[d]

    def head(self, d: int) -> int:
        return self.vertex_of[self.twin[d]]

    def edge(self, d: int) -> int:
        return self.edge_of[d]

    def is_ref(self, d: int) -> bool:
        return d < self.twin[d]

    def dart(self, e: int, forward: bool = True) -> int:
        d = self.edges[e]
        return d if forward else self.twin[d]

    def rot_index(self, d: int) -> int:
        """Position of ``d`` in the rotation of its tail."""
        return self._rot_index[d]

    def degree(self, v: int) -> int:
        return len(self.vertices[v])

    def face(self, d: int) -> int:
        """Face on the right of ``d``."""
        return self.face_of[d]

    def left_face(self, d: int) -> int:
        return self.face_of[self.twin[d]]

    def face_degree(self, f: int) -> int:
        return len(self.faces[f])

    def is_loop(self, e: int) -> bool:
        d = self.edges[e]
        return self.vertex_of[d] == self.vertex_of[self.twin[d]]

    def is_simple(self) -> bool:
        """True when the graph has neither loops nor parallel edges."""
        seen = set()
        for d in self.edges:
            u, w = self.vertex_of[d], self.vertex_of[self.twin[d]]
            if u == w:
                return False
            key = (min(u, w), max(u, w))
            if key in seen:
                return False
            seen.add(key)
        return True

    def __repr__(self):
        return (f"CombinatorialMap(V={self.num_vertices}, E={self.num_edges}, "
                f"F={self.num_faces}, genus={self.genus}, b={self.num_boundaries})")

    def __eq__(self, other):
        if not isinstance(other, CombinatorialMap):
            return NotImplemented
        return (self.twin == other.twin and self.rot == other.rot
                and self.boundary_faces == other.boundary_faces)

    def __hash__(self):
        return hash((self.twin, self.rot, self.boundary_faces))

    # derived maps -----------------------------------------------------------

    def delete_edges(self, edges: Iterable[int]) -> tuple["CombinatorialMap", list[int]]:
        r"""
        Return the submap without ``edges`` and the dart relabelling.

        The relabelling sends every old dart to its new id, or ``-1`` if it was
        deleted. Surviving darts keep their relative order, so reference darts
        stay reference darts. Faces merged by a deletion inherit the union of
        the boundary flags.

        EXAMPLES::

            >>> M = build_map([(0, 1), (2, 3)], [[0, 1, 2, 3]])
            >>> M.num_faces
            3
            >>> N, old2new = M.delete_edges([1])
            >>> N.num_faces, old2new
            (2, [0, 1, -1, -1])
        """
        dead = set()
        for e in edges:
            d = self.edges[e]
            dead.add(d)
            dead.add(self.twin[d])
        old2new = [-1] * self.num_darts
        k = 0
        for d in range(self.num_darts):
            if d not in dead:
                old2new[d] = k
                k += 1
        twin = [0] * k
        rot = [0] * k
        vertices = []
        for cyc in self.vertices:
            keep = [old2new[d] for d in cyc if d not in dead]
            vertices.append(keep)
            for i, d in enumerate(keep):
                rot[d] = keep[(i + 1) % len(keep)]
        for d in range(self.num_darts):
            if old2new[d] >= 0:
                twin[old2new[d]] = old2new[self.twin[d]]
        flagged = self._merged_flags(dead, old2new, k)
        N = CombinatorialMap(twin, rot, vertices, (), self.vertex_labels)
        N.boundary_faces = frozenset(N.face_of[d] for d in flagged if N.num_darts) \
            if N.num_darts else frozenset([0] if flagged else [])
        return N, old2new

    def _merged_flags(self, dead, old2new, k):
        # union-find on old faces across deleted edges; return surviving new
        # darts (or a sentinel) representing every flagged merged face
        parent = list(range(len(self.faces)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in dead:
            a, b = find(self.face_of[d]), find(self.face_of[self.twin[d]])
            if a != b:
                parent[a] = b
        flagged_roots = {find(f) for f in self.boundary_faces}
        reps = {}
        for d in range(self.num_darts):
            if old2new[d] >= 0:
                r = find(self.face_of[d])
                if r in flagged_roots and r not in reps:
                    reps[r] = old2new[d]
        if k == 0:
            return [0] if flagged_roots else []
        return list(reps.values())

    def contract_tree(self, tree_edges: Iterable[int]) -> tuple["CombinatorialMap", list[int]]:
        r"""
        Contract a forest of non-loop edges.

        Returns the contracted map and the relabelling of the surviving darts
        (``-1`` for contracted ones). Each tree component becomes one vertex
        whose rotation is the Euler tour of the component.

        EXAMPLES::

            >>> P = build_map([(0, 1)], [[0], [1]])
            >>> Q, old2new = P.contract_tree([0])
            >>> Q.num_vertices, Q.num_edges, old2new
            (1, 0, [-1, -1])
        """
        tree = set(tree_edges)
        dead = set()
        for e in tree:
            d = self.edges[e]
            dead.add(d)
            dead.add(self.twin[d])
        old2new = [-1] * self.num_darts
        k = 0
        for d in range(self.num_darts):
            if d not in dead:
                old2new[d] = k
                k += 1
        seen = [False] * self.num_vertices
        vertices = []
        labels = [] if self.vertex_labels is not None else None
        for v in range(self.num_vertices):
            if seen[v]:
                continue
            cyc = []
            for kind, d in self.euler_tour(v, tree):
                if kind == "dart":
                    cyc.append(old2new[d])
                elif kind == "enter":
                    seen[self.head(d)] = True
            seen[v] = True
            vertices.append(cyc)
            if labels is not None:
                labels.append(self.vertex_labels[v])
        twin = [0] * k
        rot = [0] * k
        for cyc in vertices:
            for i, d in enumerate(cyc):
                rot[d] = cyc[(i + 1) % len(cyc)]
        for d in range(self.num_darts):
            if old2new[d] >= 0:
                twin[old2new[d]] = old2new[self.twin[d]]
        N = CombinatorialMap(twin, rot, vertices, (), labels)
        if N.num_darts:
            flags = set()
            for f in self.boundary_faces:
                for d in self.faces[f]:
                    if old2new[d] >= 0:
                        flags.add(N.face_of[old2new[d]])
                        break
            N.boundary_faces = frozenset(flags)
        else:
            N.boundary_faces = frozenset([0] if self.boundary_faces else [])
        return N, old2new

    def euler_tour(self, root: int, tree: set) -> Iterator[tuple[str, int]]:
        r"""
        Walk around the tree component of ``root`` counterclockwise.

        Yields ``("dart", d)`` for every non-tree dart in the merged rotation
        order, and ``("enter", t)`` / ``("leave", t)`` around the subtree hanging
        from tree dart ``t`` (pointing away from the root).
        """
        cyc = self.vertices[root]
        stack = [(iter(cyc), None)]
        while stack:
            it, entered = stack[-1]
            d = next(it, None)
            if d is None:
                stack.pop()
                if entered is not None:
                    yield "leave", entered
                continue
            if self.edge_of[d] in tree:
                yield "enter", d
                t = self.twin[d]
                c = self.vertices[self.vertex_of[t]]
                i = self._rot_index[t]
                stack.append((iter(c[i + 1:] + c[:i]), d))
            else:
                yield "dart", d


def build_map(twin_pairs: Sequence[tuple[int, int]], rotations: Sequence[Sequence[int]],
              boundary_faces: Iterable[int] = (), vertex_labels=None) -> CombinatorialMap:
    r"""
    Validate and build a combinatorial map.

    Parameters
    ----------
    twin_pairs
        Pairs ``(i, j)`` of reverse darts; together they must cover the darts
        ``0 .. 2E-1`` exactly once.
    rotations
        For every vertex, its darts in counterclockwise order.
    boundary_faces
        Face ids (faces numbered by increasing smallest dart) containing a
        boundary component.

    EXAMPLES::

        >>> build_map([(0, 1)], [[0, 1]]).genus
        0
        >>> build_map([(0, 1), (2, 3), (4, 5), (6, 7)],
        ...           [[0, 2, 1, 3, 4, 6, 5, 7]]).genus
        2
        >>> build_map([(0, 1), (1, 2)], [[0, 1, 2]])
        Traceback (most recent call last):
        ...
        minpos.surface_map.NonInvolution: twin pairing is not a fixed-point free involution (dart 1)
    """
    n = 2 * len(twin_pairs)
    twin = [-1] * n
    for i, j in twin_pairs:
        for d in (i, j):
            if not (0 <= d < n):
                raise NonInvolution(d, "dart id out of range")
        if i == j:
            raise NonInvolution(i)
        if twin[i] != -1:
            raise NonInvolution(i)
        if twin[j] != -1:
            raise NonInvolution(j)
        twin[i] = j
        twin[j] = i
    rot = [-1] * n
    for cyc in rotations:
        for k, d in enumerate(cyc):
            if not (0 <= d < n):
                raise DartMissing(d, "dart id out of range")
            if rot[d] != -1:
                raise DartMissing(d, "dart appears twice in the rotations")
            rot[d] = cyc[(k + 1) % len(cyc)]
    for d in range(n):
        if rot[d] == -1:
            raise DartMissing(d)
    if not rotations:
        raise DartMissing(0, "a map needs at least one vertex")
    if any(len(c) == 0 for c in rotations) and len(rotations) > 1:
        v = next(i for i, c in enumerate(rotations) if len(c) == 0)
        raise Disconnected(v)
    M = CombinatorialMap(twin, rot, rotations, (), vertex_labels)
    _check_connected(M)
    nf = len(M.faces) if n else 1
    for f in boundary_faces:
        if not (0 <= f < nf):
            raise MapError(f"boundary face {f} does not exist (map has {nf} faces)")
    M.boundary_faces = frozenset(boundary_faces)
    return M


def _check_connected(M: CombinatorialMap):
    if M.num_vertices == 0:
        return
    seen = [False] * M.num_vertices
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for d in M.vertices[v]:
            w = M.head(d)
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    for v, s in enumerate(seen):
        if not s:
            raise Disconnected(v)


# ---------------------------------------------------------------------------
# tree-cotree decomposition


@dataclass(frozen=True)
class TreeCotree:
    """Partition of the edges into a spanning tree, a dual spanning tree and leftovers."""

    Y: frozenset
    Ystar: frozenset
    L: frozenset


def spanning_tree(M: CombinatorialMap, rng: random.Random | None = None, root: int = 0) -> set:
    """Edges of a spanning tree of ``M`` (BFS, or random Kruskal when ``rng`` is given)."""
    if rng is None:
        tree = set()
        seen = [False] * M.num_vertices
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for d in M.vertices[v]:
                w = M.head(d)
                if not seen[w]:
                    seen[w] = True
                    tree.add(M.edge_of[d])
                    queue.append(w)
        return tree
    order = list(range(M.num_edges))
    rng.shuffle(order)
    uf = _UnionFind(M.num_vertices)
    return {e for e in order if uf.union(M.tail(M.edges[e]), M.head(M.edges[e]))}


def tree_cotree(M: CombinatorialMap, rng: random.Random | None = None) -> TreeCotree:
    r"""
    Disjoint spanning tree ``Y`` and dual spanning tree ``Ystar``.

    The remaining edges ``L`` number ``2g + max(b, 1) - 1`` when boundary
    faces are counted as ordinary faces of the filled surface.

    EXAMPLES::

        >>> T = tree_cotree(build_map([(0, 1), (2, 3)], [[0, 2, 1, 3]]))
        >>> sorted(T.Y), sorted(T.Ystar), sorted(T.L)
        ([], [], [0, 1])
    """
    Y = spanning_tree(M, rng)
    order = [e for e in range(M.num_edges) if e not in Y]
    if rng is not None:
        rng.shuffle(order)
    uf = _UnionFind(M.num_faces)
    Ystar = set()
    for e in order:
        d = M.edges[e]
        if uf.union(M.face_of[d], M.face_of[M.twin[d]]):
            Ystar.add(e)
    L = set(range(M.num_edges)) - Y - Ystar
    return TreeCotree(frozenset(Y), frozenset(Ystar), frozenset(L))


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.parent[a] = b
        return True


# ---------------------------------------------------------------------------
# simplification to one vertex


@dataclass
class Simplification:
    r"""
    Bookkeeping returned by :func:`simplify_to_one_vertex`.

    ``tree`` is the contracted spanning tree of the original map and
    ``to_original`` sends every dart of the simplified map to the dart of the
    original map it comes from.
    """

    original: CombinatorialMap
    tree: frozenset
    to_original: list
    deleted: list


def map_walk(walk, old2new):
    return tuple(old2new[d] for d in walk if old2new[d] >= 0)


def simplify_to_one_vertex(M: CombinatorialMap, walks, allow_empty: bool = False, tree=None,
                           rng: random.Random | None = None):
    r"""
    Contract a spanning tree, then merge bigons and delete monogons.

    Walks are pushed along: contracted darts vanish, occurrences of a merged
    bigon edge are rewritten to the kept edge, occurrences of a monogon edge
    are dropped, and spurs are removed after every step. Only faces without a
    boundary component are treated as bigons or monogons.

    Returns ``(M1, walks1, mapping)``. Raises :class:`EmptyWalk` when a walk
    becomes contractible, unless ``allow_empty``.

    EXAMPLES::

        >>> M = build_map([(0, 1)], [[0], [1]])
        >>> M1, W1, _ = simplify_to_one_vertex(M, [])
        >>> M1.num_vertices, M1.num_edges
        (1, 0)
    """
    from .walks import remove_spurs

    if tree is None:
        tree = spanning_tree(M, rng)
    tree = frozenset(tree)
    cur, old2new = M.contract_tree(tree)
    to_orig = [0] * cur.num_darts
    for d, nd in enumerate(old2new):
        if nd >= 0:
            to_orig[nd] = d
    cur_walks = [remove_spurs(cur, map_walk(w, old2new)) for w in walks]
    deleted = []
    while True:
        target = None
        for f, cyc in enumerate(cur.faces):
            if f in cur.boundary_faces:
                continue
            if len(cyc) == 1:
                target = ("monogon", cyc[0])
                break
        if target is None:
            for f, cyc in enumerate(cur.faces):
                if f in cur.boundary_faces or len(cyc) != 2:
                    continue
                d1, d2 = cyc
                if cur.edge_of[d1] == cur.edge_of[d2]:
                    continue
                if cur.edge_of[d1] > cur.edge_of[d2]:
                    d1, d2 = d2, d1
                target = ("bigon", d1, d2)
                break
        if target is None:
            break
        if target[0] == "monogon":
            d = target[1]
            gone = {d, cur.twin[d]}
            cur_walks = [tuple(x for x in w if x not in gone) for w in cur_walks]
            e = cur.edge_of[d]
        else:
            _, d1, d2 = target
            # the face walk (d1, d2) is contractible, so d2 ~ twin(d1)
            sub = {d2: cur.twin[d1], cur.twin[d2]: d1}
            cur_walks = [tuple(sub.get(x, x) for x in w) for w in cur_walks]
            e = cur.edge_of[d2]
        deleted.append(to_orig[cur.edges[e]])
        nxt, o2n = cur.delete_edges([e])
        new_to_orig = [0] * nxt.num_darts
        for d, nd in enumerate(o2n):
            if nd >= 0:
                new_to_orig[nd] = to_orig[d]
        to_orig = new_to_orig
        cur_walks = [remove_spurs(nxt, map_walk(w, o2n)) for w in cur_walks]
        cur = nxt
    if not allow_empty:
        for i, w in enumerate(cur_walks):
            if walks[i] and not w:
                raise EmptyWalk(i)
    return cur, cur_walks, Simplification(M, tree, to_orig, deleted)


# ---------------------------------------------------------------------------
# text format


class ParseError(ValueError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_cmap(text: str) -> CombinatorialMap:
    r"""
    Parse the ``.cmap`` text format.

    Grammar (one statement per line, ``#`` starts a comment)::

        darts <2E>
        twin <i> <j>
        vertex <name>: <d0> <d1> ... <dk>
        boundary <face id>

    EXAMPLES::

        >>> M = parse_cmap("darts 4\ntwin 0 1\ntwin 2 3\nvertex v: 0 2 1 3\n")
        >>> M.genus
        1
    """
    ndarts = None
    pairs, rotations, labels, bfaces = [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        toks = line.split()
        kw = toks[0]
        if kw == "darts":
            if len(toks) != 2:
                raise ParseError("expected 'darts <count>'", lineno, col)
            ndarts = _int(toks[1], lineno, raw)
        elif kw == "twin":
            if len(toks) != 3:
                raise ParseError("expected 'twin <i> <j>'", lineno, col)
            pairs.append((_int(toks[1], lineno, raw), _int(toks[2], lineno, raw)))
        elif kw == "vertex":
            head, sep, rest = line.partition(":")
            if not sep:
                raise ParseError("expected ':' after vertex name", lineno, len(line) + 1)
            name = head.split(None, 1)
            if len(name) != 2 or len(name[1].split()) != 1:
                raise ParseError("expected 'vertex <name>: darts...'", lineno, col)
            labels.append(name[1].strip())
            rotations.append([_int(t, lineno, raw) for t in rest.split()])
        elif kw == "boundary":
            if len(toks) != 2:
                raise ParseError("expected 'boundary <face>'", lineno, col)
            bfaces.append(_int(toks[1], lineno, raw))
        else:
            raise ParseError(f"unknown statement {kw!r}", lineno, col)
    if ndarts is None:
        raise ParseError("missing 'darts' line", 1)
    if ndarts != 2 * len(pairs):
        raise ParseError(f"'darts {ndarts}' but {len(pairs)} twin pairs", 1)
    return build_map(pairs, rotations, bfaces, labels)


def _int(tok, lineno, raw):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno, raw.find(tok) + 1) from None


def format_cmap(M: CombinatorialMap) -> str:
    lines = [f"darts {M.num_darts}"]
    for d in M.edges:
        lines.append(f"twin {d} {M.twin[d]}")
    for v, cyc in enumerate(M.vertices):
        name = M.vertex_labels[v] if M.vertex_labels else f"v{v}"
        lines.append(f"vertex {name}: " + " ".join(map(str, cyc)))
    for f in sorted(M.boundary_faces):
        lines.append(f"boundary {f}")
    return "\n".join(lines) + "\n"
