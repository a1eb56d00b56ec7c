"""Shared fixtures: the lattice zoo, a small algebra zoo, and fixed
matrices used across modules."""

from __future__ import annotations

import numpy as np
import pytest

from qgelfand.algebra import FdAlgebra, generate_algebra
from qgelfand.oml import FiniteOml, SetOml, lattice_zoo

E12 = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture(scope="session")
def zoo() -> dict[str, FiniteOml]:
    return lattice_zoo()


def diagonal_algebra(n: int) -> FdAlgebra:
    return generate_algebra([np.diag(np.arange(1.0, n + 1)).astype(complex)])


@pytest.fixture(scope="session")
def algebra_zoo() -> dict[str, FdAlgebra]:
    """{C2, C3, M2, M3, M2+C, CI2}: the commutative/noncommutative spread
    used by the purity and dichotomy checks."""
    m3_gen = np.zeros((3, 3), dtype=complex)
    m3_gen[0, 1] = 1.0
    m3_gen[1, 2] = 1.0
    m2c_gen = np.zeros((3, 3), dtype=complex)
    m2c_gen[0, 1] = 1.0
    return {
        "C2": diagonal_algebra(2),
        "C3": diagonal_algebra(3),
        "M2": generate_algebra([E12]),
        "M3": generate_algebra([m3_gen]),
        "M2+C": generate_algebra([m2c_gen]),
        "CI2": generate_algebra([np.eye(2, dtype=complex)]),
    }


@pytest.fixture(scope="session")
def mo2_qset() -> SetOml:
    """A four-point quantum set whose member lattice is MO2: two
    incompatible binary splittings of the ground set."""
    members = [
        frozenset(),
        frozenset({0}),
        frozenset({1}),
        frozenset({2}),
        frozenset({3}),
        frozenset({0, 1, 2, 3}),
    ]
    return SetOml(["a1", "a2", "b1", "b2"], members, [5, 2, 1, 4, 3, 0])
