import numpy as np
import pytest

from conftest import E12, SIGMA_X, diagonal_algebra
from qgelfand.algebra import (
    AlgebraMembershipError,
    PureState,
    State,
    StateError,
    as_pure,
    center_basis,
    commutant_basis,
    generate_algebra,
    gns,
    gns_equivalent,
    hat,
    hat_map_diagnostics,
    is_irreducible,
    is_pure,
    orthogonal_states,
    pure_equal,
    pure_to_state,
    r_is_discrete,
    random_pure_state,
    support_projection,
    vector_state,
)
from qgelfand.linalg import op_norm

RNG = np.random.default_rng(7)


def test_generated_dimensions(algebra_zoo):
    expected = {"C2": 2, "C3": 3, "M2": 4, "M3": 9, "M2+C": 5, "CI2": 1}
    for name, alg in algebra_zoo.items():
        assert alg.dim == expected[name], name


def test_generate_idempotent(algebra_zoo):
    alg = algebra_zoo["M2+C"]
    again = generate_algebra(alg.basis)
    assert again.dim == alg.dim
    for b in alg.basis:
        assert again.contains(b)


def test_membership():
    alg = diagonal_algebra(3)
    assert alg.contains(np.diag([5.0, -1.0, 2.0]))
    assert not alg.contains(E12_3())
    with pytest.raises(AlgebraMembershipError):
        alg.require_member(E12_3())


def E12_3():
    m = np.zeros((3, 3), dtype=complex)
    m[0, 1] = 1.0
    return m


def test_commutant_and_center(algebra_zoo):
    m2 = algebra_zoo["M2"]
    assert len(commutant_basis(m2.basis, 2, 1e-8)) == 1
    assert len(center_basis(m2)) == 1
    assert len(center_basis(algebra_zoo["M2+C"])) == 2
    assert len(center_basis(algebra_zoo["C3"])) == 3


def test_block_structures(algebra_zoo):
    expected = {
        "C2": [(1, 1), (1, 1)],
        "C3": [(1, 1), (1, 1), (1, 1)],
        "M2": [(2, 1)],
        "M3": [(3, 1)],
        "M2+C": [(2, 1), (1, 1)],
        "CI2": [(1, 2)],
    }
    for name, alg in algebra_zoo.items():
        dec = alg.decomposition()
        got = sorted((b.irrep_dim, b.multiplicity) for b in dec.blocks)
        assert got == sorted(expected[name]), name


def test_block_reconstruction_oracle(algebra_zoo):
    for name, alg in algebra_zoo.items():
        dec = alg.decomposition()
        total = sum(b.central_projector for b in dec.blocks)
        assert op_norm(total - np.eye(alg.ambient_dim)) < 1e-8, name
        for b in alg.basis:
            assert op_norm(dec.reconstruct(b) - b) < 1e-8, name


def test_block_embed_irrep_roundtrip(algebra_zoo):
    dec = algebra_zoo["M2+C"].decomposition()
    for blk in dec.blocks:
        x = RNG.standard_normal((blk.irrep_dim, blk.irrep_dim)) \
            + 1j * RNG.standard_normal((blk.irrep_dim, blk.irrep_dim))
        assert op_norm(blk.irrep(blk.embed(x)) - x) < 1e-10


def test_state_validation():
    with pytest.raises(StateError):
        State(np.diag([0.7, 0.7]))  # trace 1.4
    with pytest.raises(StateError):
        State(np.array([[0.5, 1.0], [0.0, 0.5]]))  # not Hermitian
    with pytest.raises(StateError):
        State(np.diag([1.5, -0.5]))  # not PSD


def test_pure_state_roundtrip(algebra_zoo):
    alg = algebra_zoo["M2"]
    dec = alg.decomposition()
    p = random_pure_state(dec, RNG)
    rho = pure_to_state(dec, p)
    # the density matrix induces the same functional
    a = alg.random_element(RNG)
    direct = hat(alg, a, p)
    via_rho = rho(a)
    assert abs(direct - via_rho) < 1e-10
    back = as_pure(dec, rho)
    assert back is not None and pure_equal(back, p)


def test_ambient_mixed_but_algebra_pure(algebra_zoo):
    # I/2 is ambient-mixed yet pure on the scalar algebra
    ci = algebra_zoo["CI2"]
    rho = State(np.eye(2) / 2)
    assert is_pure(ci.decomposition(), rho)
    m2 = algebra_zoo["M2"]
    assert not is_pure(m2.decomposition(), rho)


def test_gns_dimensions(algebra_zoo):
    m2 = algebra_zoo["M2"]
    pure = gns(m2, vector_state(np.array([1.0, 0.0])))
    assert pure.dim == 2 and is_irreducible(pure)
    mixed = gns(m2, State(np.eye(2) / 2))
    assert mixed.dim == 4 and not is_irreducible(mixed)
    c3 = algebra_zoo["C3"]
    char = gns(c3, vector_state(np.array([1.0, 0.0, 0.0])))
    assert char.dim == 1 and is_irreducible(char)


def test_gns_representation_oracle(algebra_zoo):
    # pi is a homomorphism and the cyclic vector reproduces the state
    alg = algebra_zoo["M2+C"]
    state = vector_state(np.array([1.0, 1.0, 1.0]) / np.sqrt(3))
    rep = gns(alg, state)
    a = alg.random_element(RNG)
    b = alg.random_element(RNG)
    assert op_norm(rep.pi(a @ b) - rep.pi(a) @ rep.pi(b)) < 1e-8
    om = rep.cyclic_vector
    assert abs(np.vdot(om, rep.pi(a) @ om) - state(a)) < 1e-8


def test_gns_equivalence(algebra_zoo):
    m2 = algebra_zoo["M2"]
    dec = m2.decomposition()
    e1 = as_pure(dec, vector_state(np.array([1.0, 0.0])))
    plus = as_pure(dec, vector_state(np.array([1.0, 1.0]) / np.sqrt(2)))
    assert gns_equivalent(dec, e1, plus)
    c2 = algebra_zoo["C2"]
    dec2 = c2.decomposition()
    a = as_pure(dec2, vector_state(np.array([1.0, 0.0])))
    b = as_pure(dec2, vector_state(np.array([0.0, 1.0])))
    assert not gns_equivalent(dec2, a, b)


def test_support_and_orthogonality(algebra_zoo):
    m2 = algebra_zoo["M2"]
    dec = m2.decomposition()
    e1 = vector_state(np.array([1.0, 0.0]))
    e2 = vector_state(np.array([0.0, 1.0]))
    plus = vector_state(np.array([1.0, 1.0]) / np.sqrt(2))
    assert orthogonal_states(dec, e1, e2)
    assert not orthogonal_states(dec, e1, plus)
    supp = support_projection(dec, e1)
    assert abs(e1(supp) - 1.0) < 1e-10


def test_r_is_discrete_dichotomy(algebra_zoo):
    for name, alg in algebra_zoo.items():
        assert r_is_discrete(alg.decomposition()) == alg.is_commutative(), name


def test_hat_values(algebra_zoo):
    m2 = algebra_zoo["M2"]
    dec = m2.decomposition()
    e1 = as_pure(dec, vector_state(np.array([1.0, 0.0])))
    assert abs(hat(m2, np.eye(2), e1) - 1.0) < 1e-12
    assert abs(hat(m2, SIGMA_X, e1)) < 1e-12
    with pytest.raises(AlgebraMembershipError):
        hat(diagonal_algebra(2), E12, e1)


def test_hat_diagnostics_commutative(algebra_zoo):
    diag = hat_map_diagnostics(algebra_zoo["C3"], 20, np.random.default_rng(3))
    assert diag["multiplicativity_defect"] < 1e-10
    assert diag["separation"]


def test_hat_diagnostics_noncommutative(algebra_zoo):
    diag = hat_map_diagnostics(algebra_zoo["M2"], 20, np.random.default_rng(3))
    assert diag["multiplicativity_defect"] > 1e-3
    assert diag["separation"]


def test_hat_isometric_commutative(algebra_zoo):
    # sup of |a-hat| over the finite pure-state set equals the norm
    alg = algebra_zoo["C3"]
    dec = alg.decomposition()
    points = [PureState(i, np.ones(1)) for i in range(3)]
    for b in alg.basis:
        sup = max(abs(hat(alg, b, p)) for p in points)
        assert abs(sup - op_norm(b)) < 1e-6
