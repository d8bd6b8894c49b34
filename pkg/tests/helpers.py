"""Instance generators shared by the test modules."""

from __future__ import annotations

import itertools
from collections import deque

from minpos.surface_map import CombinatorialMap, Disconnected, build_map
from minpos.walks import remove_spurs

# one line per acceptance criterion, printed again in the terminal summary
ACCEPTANCE = []


def cycles_of(perm):
    seen = set()
    out = []
    for s in range(len(perm)):
        if s in seen:
            continue
        c = []
        x = s
        while x not in seen:
            seen.add(x)
            c.append(x)
            x = perm[x]
        out.append(c)
    return out


def random_map(rng, V, E, boundary=0):
    """Connected map with V vertices and E edges (None if impossible)."""
    if V > 2 * E or E < V - 1 or V < 1:
        return None
    pairs = [(2 * i, 2 * i + 1) for i in range(E)]
    while True:
        perm = list(range(2 * E))
        rng.shuffle(perm)
        cuts = sorted(rng.sample(range(1, 2 * E), V - 1))
        rots = [perm[a:b] for a, b in zip([0] + cuts, cuts + [2 * E])]
        try:
            M = build_map(pairs, rots)
        except Disconnected:
            continue
        if boundary:
            k = min(boundary, M.num_faces)
            M = CombinatorialMap(M.twin, M.rot, M.vertices, rng.sample(range(M.num_faces), k))
        return M


def random_map_of_genus(rng, genus, max_edges=9):
    while True:
        V = rng.randint(1, 4)
        E = rng.randint(max(V - 1, 2 * genus), max_edges)
        M = random_map(rng, V, E)
        if M is not None and M.genus == genus:
            return M


def _path(M, u, v):
    prev = {u: None}
    q = deque([u])
    while q:
        x = q.popleft()
        if x == v:
            break
        for d in M.vertices[x]:
            y = M.head(d)
            if y not in prev:
                prev[y] = d
                q.append(y)
    out = []
    while v != u:
        d = prev[v]
        out.append(d)
        v = M.tail(d)
    return out[::-1]


def random_walk(rng, M, L):
    """Random closed walk of roughly L steps with spurs removed (may be empty)."""
    w = [rng.randrange(M.num_darts)]
    for _ in range(L - 1):
        w.append(rng.choice(M.vertices[M.head(w[-1])]))
    w += _path(M, M.head(w[-1]), M.tail(w[0]))
    return remove_spurs(M, w)


def random_nonempty_walks(rng, M, k, L):
    # on a tree every closed walk reduces to nothing
    if M.num_edges < M.num_vertices:
        raise ValueError("map is a tree")
    out = []
    while len(out) < k:
        w = random_walk(rng, M, rng.randint(1, L))
        if w:
            out.append(w)
    return out


def random_spur_free_walk(rng, M, L):
    """Non-backtracking closed walk of exactly L steps on a one-vertex map."""
    assert M.num_vertices == 1
    while True:
        w = [rng.randrange(M.num_darts)]
        for _ in range(L - 1):
            w.append(rng.choice([d for d in M.vertices[0] if d != M.twin[w[-1]]]))
        if L == 1 or w[0] != M.twin[w[-1]]:
            return tuple(w)


# exhaustive enumeration -------------------------------------------------


def _canonical(twin, rot):
    n = len(twin)
    best = None
    for s in range(n):
        lab = {s: 0}
        order = [s]
        i = 0
        while i < len(order):
            d = order[i]
            i += 1
            for x in (twin[d], rot[d]):
                if x not in lab:
                    lab[x] = len(order)
                    order.append(x)
        if len(order) < n:
            return None
        key = tuple((lab[twin[d]], lab[rot[d]]) for d in order)
        if best is None or key < best:
            best = key
    return best


def all_maps(max_edges):
    """Every connected map with 1..max_edges edges, one per isomorphism class."""
    out = []
    for E in range(1, max_edges + 1):
        twin = [d ^ 1 for d in range(2 * E)]
        seen = set()
        for rot in itertools.permutations(range(2 * E)):
            key = _canonical(twin, rot)
            if key is None or key in seen:
                continue
            seen.add(key)
            out.append(CombinatorialMap(twin, rot, cycles_of(rot)))
    return out


def closed_walks(M, L):
    """Spur-free closed walks of length L, one per cyclic rotation class."""
    res = []
    twin, head, verts = M.twin, M.head, M.vertices

    def rec(w):
        if len(w) == L:
            if head(w[-1]) == M.tail(w[0]) and w[0] != twin[w[-1]]:
                t = tuple(w)
                if all(t <= t[i:] + t[:i] for i in range(1, L)):
                    res.append(t)
            return
        for d in verts[head(w[-1])]:
            if d != twin[w[-1]] and d >= w[0]:
                w.append(d)
                rec(w)
                w.pop()

    for d in range(M.num_darts):
        rec([d])
    return res


def walk_collections(M, max_total):
    """Nonempty multisets of spur-free closed walks of total length <= max_total."""
    walks = []
    for L in range(1, max_total + 1):
        walks += closed_walks(M, L)
    acc = []

    def rec(start, budget):
        if acc:
            yield list(acc)
        for i in range(start, len(walks)):
            w = walks[i]
            if len(w) > budget:
                break
            acc.append(w)
            yield from rec(i, budget - len(w))
            acc.pop()

    yield from rec(0, max_total)


def oracle_sweep(max_edges=3, max_total=8, limit=None):
    """
    Compare minimize_perturbation with brute_min_perturbation on every instance.

    A minimized count of 0 needs no enumeration (no perturbation has fewer
    crossings). Returns (instances, mismatches).
    """
    from minpos.crossings import count_self_crossings
    from minpos.minpert import minimize_perturbation
    from minpos.oracle import brute_min_perturbation

    n = 0
    bad = []
    for M in all_maps(max_edges):
        for C in walk_collections(M, max_total):
            c = count_self_crossings(M, C, minimize_perturbation(M, C), check=False)
            if c and brute_min_perturbation(M, C)[0] != c:
                bad.append((M, C, c))
            n += 1
            if limit is not None and n >= limit:
                return n, bad
    return n, bad


def random_reduced_walk(rng, T, L, tries=1000):
    """Random reduced primitive closed walk of length L on a one-vertex triangulation."""
    from minpos.reducing import bad_turn, is_reduced
    from minpos.walks import primitive_root

    M = T.map
    for _ in range(tries):
        w = [rng.randrange(M.num_darts)]
        for _ in range(L - 1):
            w.append(rng.choice([d for d in M.vertices[M.head(w[-1])] if bad_turn(T, w[-1], d) is None]))
        if is_reduced(T, w) and primitive_root(w)[1] == 1:
            return tuple(w)
    return None


def all_matchings(n):
    """Every perfect matching of 0..n-1 (n even) as a list of pairs."""
    def rec(free):
        if not free:
            yield []
            return
        a = free[0]
        for i in range(1, len(free)):
            rest = free[1:i] + free[i + 1:]
            for m in rec(rest):
                yield [(a, free[i])] + m
    yield from rec(list(range(n)))
