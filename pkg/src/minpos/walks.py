r"""
Closed walks, perturbations, and the vertex disks of the patch system.

A closed walk is a tuple of darts ``(d0, ..., d_{k-1})`` with
``head(d_i) == tail(d_{i+1})`` cyclically. A pebble is one occurrence of an
edge in a collection of walks, written ``(walk_id, position)``.

A :class:`Perturbation` gives, for every edge, the linear order of its pebbles
along the arc crossing that edge. In the disk of a vertex ``v`` the endpoints
are listed counterclockwise: darts with tail ``v`` in rotation order and,
inside the sector of a dart ``d``, the pebbles of its edge in perturbation
order when ``d`` is the reference dart and in reverse order otherwise. The
strand of a walk going through ``v`` from step ``i`` to step ``i + 1`` is a
chord between the endpoint of pebble ``i`` in the sector of ``twin(d_i)`` and
the endpoint of pebble ``i + 1`` in the sector of ``d_{i+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .surface_map import CombinatorialMap, ParseError


class WalkError(ValueError):
    pass


class OrderMismatch(ValueError):
    pass


def check_walk(M: CombinatorialMap, walk: Sequence[int], walk_id: int = 0):
    """Raise :class:`WalkError` unless ``walk`` is a closed walk of ``M``."""
    k = len(walk)
    for i, d in enumerate(walk):
        if not (0 <= d < M.num_darts):
            raise WalkError(f"walk {walk_id}: dart {d} does not exist")
    for i, d in enumerate(walk):
        nxt = walk[(i + 1) % k]
        if M.head(d) != M.tail(nxt):
            raise WalkError(f"walk {walk_id}: step {i} ends at vertex {M.head(d)} "
                            f"but step {(i + 1) % k} starts at vertex {M.tail(nxt)}")


def has_spur(M: CombinatorialMap, walk: Sequence[int]) -> bool:
    k = len(walk)
    return any(walk[(i + 1) % k] == M.twin[walk[i]] for i in range(k))


def remove_spurs(M: CombinatorialMap, walk: Sequence[int]) -> tuple:
    r"""
    Cyclically reduce a closed walk.

    The result is homotopic to ``walk`` in the graph, spur-free, and unique up
    to rotation; it is empty when the walk is contractible in the graph.

    EXAMPLES::

        >>> from minpos.surface_map import build_map
        >>> M = build_map([(0, 1), (2, 3), (4, 5)], [[0, 1, 2, 3, 4, 5]])
        >>> remove_spurs(M, (0, 1))
        ()
        >>> remove_spurs(M, (0, 2, 3, 4))
        (0, 4)
        >>> remove_spurs(M, (0, 2, 3, 1, 0, 4))
        (0, 4)
    """
    twin = M.twin
    stack = []
    for d in walk:
        if stack and stack[-1] == twin[d]:
            stack.pop()
        else:
            stack.append(d)
    lo, hi = 0, len(stack) - 1
    while lo < hi and stack[lo] == twin[stack[hi]]:
        lo += 1
        hi -= 1
    return tuple(stack[lo:hi + 1])


def reverse_walk(M: CombinatorialMap, walk: Sequence[int]) -> tuple:
    return tuple(M.twin[d] for d in reversed(walk))


def rotate_walk(walk: Sequence[int], k: int) -> tuple:
    if not walk:
        return tuple(walk)
    k %= len(walk)
    return tuple(walk[k:]) + tuple(walk[:k])


def is_rotation(a: Sequence[int], b: Sequence[int]) -> bool:
    """True when ``a`` is a cyclic shift of ``b``."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    return not a or any(b[k] == a[0] and b[k:] + b[:k] == a for k in range(len(b)))


def primitive_root(walk: Sequence[int]) -> tuple[tuple, int]:
    """Return ``(root, n)`` with ``walk == root * n`` and ``root`` not a proper power."""
    k = len(walk)
    for p in range(1, k + 1):
        if k % p == 0 and all(walk[i] == walk[i % p] for i in range(k)):
            return tuple(walk[:p]), k // p
    return tuple(walk), 1


class Pebble(NamedTuple):
    walk_id: int
    position: int
    edge: int
    forward: bool


def pebbles(M: CombinatorialMap, walks) -> list[Pebble]:
    return [Pebble(w, i, M.edge_of[d], M.is_ref(d))
            for w, walk in enumerate(walks) for i, d in enumerate(walk)]


@dataclass
class Perturbation:
    r"""
    Per-edge linear orders of pebbles.

    ``order[e]`` lists the pebbles ``(walk_id, position)`` of edge ``e``.
    Edges without pebbles may be absent.
    """

    order: dict = field(default_factory=dict)

    @classmethod
    def initial(cls, M: CombinatorialMap, walks) -> "Perturbation":
        """Pebbles in order of appearance in the walks."""
        order = {}
        for w, walk in enumerate(walks):
            for i, d in enumerate(walk):
                order.setdefault(M.edge_of[d], []).append((w, i))
        return cls(order)

    def validate(self, M: CombinatorialMap, walks):
        expected = Perturbation.initial(M, walks).order
        for e, lst in self.order.items():
            if lst and e not in expected:
                raise OrderMismatch(f"edge {e} has pebbles but no walk uses it")
        for e, lst in expected.items():
            got = self.order.get(e, [])
            if len(got) != len(lst) or set(got) != set(lst):
                raise OrderMismatch(f"order of edge {e} is not a permutation of its pebbles")

    def positions(self) -> dict:
        pos = {}
        for lst in self.order.values():
            for k, p in enumerate(lst):
                pos[p] = k
        return pos

    def relabel(self, walk_ids: Sequence[int]) -> "Perturbation":
        """Rename walk ``i`` to ``walk_ids[i]``."""
        return Perturbation({e: [(walk_ids[w], i) for w, i in lst] for e, lst in self.order.items()})

    def __eq__(self, other):
        if not isinstance(other, Perturbation):
            return NotImplemented
        a = {e: lst for e, lst in self.order.items() if lst}
        b = {e: lst for e, lst in other.order.items() if lst}
        return a == b


@dataclass
class DiskBoundary:
    """Endpoints around one vertex disk and the chords joining them."""

    vertex: int
    endpoints: list
    chords: list


def disk_boundaries(M: CombinatorialMap, walks, P: Perturbation, check: bool = True) -> list[DiskBoundary]:
    r"""
    Build the endpoint cycle and chord matching of every vertex disk.

    ``endpoints`` holds ``(dart, pebble)`` pairs in counterclockwise order and
    ``chords`` pairs of indices into it, smaller index first.

    EXAMPLES::

        >>> from minpos.surface_map import build_map
        >>> M = build_map([(0, 1), (2, 3)], [[0, 2, 1, 3]])
        >>> [D] = disk_boundaries(M, [(0,)], Perturbation({0: [(0, 0)]}))
        >>> D.endpoints, D.chords
        ([(0, (0, 0)), (1, (0, 0))], [(0, 1)])
    """
    if check:
        P.validate(M, walks)
    disks = []
    index = {}
    for v, cyc in enumerate(M.vertices):
        endpoints = []
        for d in cyc:
            lst = P.order.get(M.edge_of[d], ())
            seq = lst if M.is_ref(d) else reversed(lst)
            for p in seq:
                index[(d, p)] = (v, len(endpoints))
                endpoints.append((d, p))
        disks.append(DiskBoundary(v, endpoints, []))
    twin = M.twin
    for w, walk in enumerate(walks):
        k = len(walk)
        for i in range(k):
            j = (i + 1) % k
            v, a = index[(twin[walk[i]], (w, i))]
            _, b = index[(walk[j], (w, j))]
            disks[v].chords.append((a, b) if a < b else (b, a))
    return disks


# ---------------------------------------------------------------------------
# text formats


def parse_walks(text: str, M: CombinatorialMap | None = None) -> list[tuple]:
    r"""
    Parse a ``.walks`` file: one walk per line, steps as signed edge ids.

    ``+e`` (or ``e``) is the reference dart of edge ``e`` and ``-e`` its
    reverse; the sign is read textually, so ``-0`` is the reverse of edge 0.
    Without a map, edge ``e`` is assumed to have darts ``2e`` and ``2e + 1``.

    EXAMPLES::

        >>> parse_walks("+0 +1 -0 -1\n# comment\n-1\n")
        [(0, 2, 1, 3), (3,)]
    """
    walks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        walk = []
        for tok in toks:
            neg = tok.startswith("-")
            body = tok[1:] if tok[:1] in "+-" else tok
            if not body.isdigit():
                raise ParseError(f"expected a signed edge id, got {tok!r}", lineno, raw.find(tok) + 1)
            e = int(body)
            if M is not None:
                if e >= M.num_edges:
                    raise ParseError(f"edge {e} does not exist", lineno, raw.find(tok) + 1)
                walk.append(M.dart(e, not neg))
            else:
                walk.append(2 * e + int(neg))
        walks.append(tuple(walk))
    if M is not None:
        for i, w in enumerate(walks):
            try:
                check_walk(M, w, i)
            except WalkError as exc:
                raise ParseError(str(exc), 1) from None
    return walks


def format_walks(M: CombinatorialMap, walks) -> str:
    lines = []
    for walk in walks:
        lines.append(" ".join(("+" if M.is_ref(d) else "-") + str(M.edge_of[d]) for d in walk))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_pert(text: str) -> Perturbation:
    r"""
    Parse a ``.pert`` file: ``edge <e>: (<walk>,<pos>) ...`` per line.

    EXAMPLES::

        >>> parse_pert("edge 0: (0,0) (0,1)\nedge 3:\n").order
        {0: [(0, 0), (0, 1)], 3: []}
    """
    order = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        hs = head.split()
        if not sep or len(hs) != 2 or hs[0] != "edge" or not hs[1].isdigit():
            raise ParseError("expected 'edge <id>: (<walk>,<pos>) ...'", lineno, 1)
        lst = []
        for tok in rest.replace(" ", "").replace(")(", ") (").split():
            if not (tok.startswith("(") and tok.endswith(")")):
                raise ParseError(f"expected '(walk,pos)', got {tok!r}", lineno, raw.find(tok) + 1)
            parts = tok[1:-1].split(",")
            if len(parts) != 2 or not all(x.isdigit() for x in parts):
                raise ParseError(f"expected '(walk,pos)', got {tok!r}", lineno, raw.find(tok) + 1)
            lst.append((int(parts[0]), int(parts[1])))
        e = int(hs[1])
        if e in order:
            raise ParseError(f"edge {e} listed twice", lineno, 1)
        order[e] = lst
    return Perturbation(order)


def format_pert(P: Perturbation) -> str:
    lines = []
    for e in sorted(P.order):
        lines.append(f"edge {e}: " + " ".join(f"({w},{i})" for w, i in P.order[e]))
    return "\n".join(lines) + ("\n" if lines else "")
