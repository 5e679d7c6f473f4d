"""Shared systems for the test suite.

Three reference systems recur everywhere:

  sys_m3    all bonds m = 3, rank 3, all weights 1 (the smallest infinite
            complete-graph system; its a-function takes exactly the values
            0, 1, 3);
  sys_mixed rank 3 with m = (3, 4, 4) and weights (1, 1, 2) (unequal
            weights, exponential growth, bound N_0 = 6);
  sys_ra    right-angled rank 3 with one commuting pair and weights
            (1, 2, 1) (bound N_0 = 2).

Session scope matters: CoxeterSystem memoizes braid closures and the shared
KL table, so reusing one instance across test files is what keeps the suite
fast.
"""

import pytest

from heckecells.coxeter import CoxeterSystem

DIHEDRAL_INSTANCES = [
    (3, 1, 1),
    (4, 1, 1),
    (4, 1, 2),
    (6, 1, 1),
    (6, 1, 3),
    (6, 2, 3),
    (8, 1, 2),
]

UNEQUAL_INSTANCES = [(m, a, b) for m, a, b in DIHEDRAL_INSTANCES if a != b]


def make_dihedral_system(m: int, a: int, b: int) -> CoxeterSystem:
    return CoxeterSystem(
        ["s", "t"], [[1, m], [m, 1]], [a, b], family="complete"
    )


@pytest.fixture(scope="session")
def sys_m3():
    return CoxeterSystem(
        ["s1", "s2", "s3"],
        [[1, 3, 3], [3, 1, 3], [3, 3, 1]],
        [1, 1, 1],
        family="complete",
    )


@pytest.fixture(scope="session")
def sys_m3_rst():
    # Same group as sys_m3 under different generator names; used by the
    # worked product example whose frozen words are spelled with r, s, t.
    return CoxeterSystem(
        ["r", "s", "t"],
        [[1, 3, 3], [3, 1, 3], [3, 3, 1]],
        [1, 1, 1],
        family="complete",
    )


@pytest.fixture(scope="session")
def sys_mixed():
    return CoxeterSystem(
        ["s1", "s2", "s3"],
        [[1, 3, 4], [3, 1, 4], [4, 4, 1]],
        [1, 1, 2],
        family="complete",
    )


@pytest.fixture(scope="session")
def sys_ra():
    # m13 = 2 (commuting pair), the other two bonds infinite.
    return CoxeterSystem(
        ["s1", "s2", "s3"],
        [[1, 0, 2], [0, 1, 0], [2, 0, 1]],
        [1, 2, 1],
        family="right-angled",
    )


@pytest.fixture(scope="session")
def dih412():
    return make_dihedral_system(4, 1, 2)
