import pytest

from minpos.surface_map import build_map


@pytest.fixture
def loop_map():
    # one vertex, one loop, on the sphere
    return build_map([(0, 1)], [[0, 1]])


@pytest.fixture
def torus_map():
    return build_map([(0, 1), (2, 3)], [[0, 2, 1, 3]])


@pytest.fixture
def genus2_map():
    return build_map([(0, 1), (2, 3), (4, 5), (6, 7)], [[0, 2, 1, 3, 4, 6, 5, 7]])


@pytest.fixture
def annulus():
    # one loop separating the two boundary components
    return build_map([(0, 1)], [[0, 1]], boundary_faces=[0, 1])


@pytest.fixture
def pants():
    # two loops at one vertex, three faces, each holding a boundary
    return build_map([(0, 1), (2, 3)], [[0, 1, 2, 3]], boundary_faces=[0, 1, 2])


@pytest.fixture
def tree_disk():
    # a path on a disk
    return build_map([(0, 1), (2, 3)], [[0], [1, 2], [3]], boundary_faces=[0])


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
