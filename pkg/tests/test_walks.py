import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_map, random_walk
from minpos.surface_map import ParseError
from minpos.walks import (
    OrderMismatch, Perturbation, WalkError, check_walk, disk_boundaries, format_pert, format_walks,
    has_spur, is_rotation, parse_pert, parse_walks, primitive_root, remove_spurs, reverse_walk,
)

seeds = st.integers(0, 2**32 - 1)


def test_check_walk(torus_map):
    check_walk(torus_map, (0, 2, 1, 3))
    with pytest.raises(WalkError):
        check_walk(torus_map, (0, 9))


def test_check_walk_disconnected_steps(tree_disk):
    with pytest.raises(WalkError):
        check_walk(tree_disk, (0, 2))


def test_spurs(torus_map):
    assert has_spur(torus_map, (0, 1))
    assert has_spur(torus_map, (0, 2, 3, 1))  # cyclic spur 1 -> 0
    assert not has_spur(torus_map, (0, 2))
    assert remove_spurs(torus_map, (0, 2, 3, 1)) == ()
    assert remove_spurs(torus_map, (2, 0, 2, 3)) in {(2, 0), (0, 2)}


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_remove_spurs_is_idempotent(seed):
    rng = random.Random(seed)
    M = random_map(rng, rng.randint(1, 4), rng.randint(3, 7))
    if M is None:
        return
    w = random_walk(rng, M, 10)
    assert not has_spur(M, w) or len(w) == 0
    assert remove_spurs(M, w) == w
    r = reverse_walk(M, w)
    assert remove_spurs(M, r) == r


def test_primitive_root():
    assert primitive_root((1, 2, 1, 2, 1, 2)) == ((1, 2), 3)
    assert primitive_root((1, 2, 3)) == ((1, 2, 3), 1)


def test_is_rotation():
    assert is_rotation((1, 2, 3), (3, 1, 2))
    assert not is_rotation((1, 2, 3), (1, 3, 2))
    assert is_rotation((), ())


def test_walk_format_roundtrip(torus_map):
    walks = [(0, 2, 1, 3), (3,)]
    text = format_walks(torus_map, walks)
    assert text == "+0 +1 -0 -1\n-1\n"
    assert parse_walks(text, torus_map) == walks


def test_minus_zero(torus_map):
    assert parse_walks("-0", torus_map) == [(1,)]


def test_walk_parse_errors(torus_map):
    with pytest.raises(ParseError):
        parse_walks("+0 x", torus_map)
    with pytest.raises(ParseError):
        parse_walks("+7", torus_map)


def test_pert_roundtrip():
    P = Perturbation({0: [(0, 1), (0, 0)], 2: [(1, 0)]})
    assert parse_pert(format_pert(P)) == P


def test_pert_parse_errors():
    with pytest.raises(ParseError):
        parse_pert("edge 0 (0,0)")
    with pytest.raises(ParseError):
        parse_pert("edge 0: (0,x)")
    with pytest.raises(ParseError):
        parse_pert("edge 0: (0,0)\nedge 0: (0,1)")


def test_validate(loop_map):
    walks = [(0, 0)]
    Perturbation({0: [(0, 1), (0, 0)]}).validate(loop_map, walks)
    with pytest.raises(OrderMismatch):
        Perturbation({0: [(0, 0)]}).validate(loop_map, walks)
    with pytest.raises(OrderMismatch):
        Perturbation({0: [(0, 0), (0, 0)]}).validate(loop_map, walks)


def test_disk_boundary_convention(loop_map):
    # in the single disk the sector of dart 0 lists the order forward and the
    # sector of dart 1 backwards
    [D] = disk_boundaries(loop_map, [(0, 0)], Perturbation({0: [(0, 0), (0, 1)]}))
    assert D.endpoints == [(0, (0, 0)), (0, (0, 1)), (1, (0, 1)), (1, (0, 0))]
    # strand 0 -> 1 joins twin sector of pebble 0 to dart sector of pebble 1
    assert sorted(D.chords) == [(0, 2), (1, 3)]
