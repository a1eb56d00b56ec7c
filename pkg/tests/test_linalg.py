import numpy as np
import pytest

from qgelfand.linalg import (
    NonHermitianError,
    Projector,
    ToleranceConfig,
    as_cmatrix,
    haar_unit_vector,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    orthonormalize,
    proj_join,
    proj_leq,
    proj_meet,
    proj_ortho,
    projector_from_basis,
    random_projector,
    sasaki_product,
)

RNG = np.random.default_rng(2024)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        ToleranceConfig(eig_tol=-1.0)
    with pytest.raises(ValueError):
        ToleranceConfig(eig_tol=1e-6, rank_tol=1e-10)
    t = ToleranceConfig()
    assert t.rank_tol >= t.eig_tol


def test_as_cmatrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_cmatrix([[np.nan, 0], [0, 1]])
    with pytest.raises(ValueError):
        as_cmatrix([1, 2, 3])


def test_matrix_json_roundtrip():
    a = RNG.standard_normal((3, 4)) + 1j * RNG.standard_normal((3, 4))
    b = matrix_from_json(matrix_to_json(a))
    assert np.allclose(a, b)
    bad = matrix_to_json(a)
    bad["rows"] = 5
    with pytest.raises(ValueError):
        matrix_from_json(bad)


def test_hermitian_eig_sigma_x():
    vals, vecs = hermitian_eig(np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(vals, [-1.0, 1.0])
    # oracle: reassemble
    assert op_norm(vecs @ np.diag(vals) @ vecs.conj().T
                   - np.array([[0, 1], [1, 0]])) < 1e-12


def test_hermitian_eig_deterministic_phase():
    a = RNG.standard_normal((5, 5)) + 1j * RNG.standard_normal((5, 5))
    a = a + a.conj().T
    _, v1 = hermitian_eig(a)
    _, v2 = hermitian_eig(a.copy())
    assert np.array_equal(v1, v2)
    # first nonzero entry of each column is positive real
    for j in range(5):
        col = v1[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-9)
        assert abs(col[nz[0]].imag) < 1e-12 and col[nz[0]].real > 0


def test_hermitian_eig_rejects_nonhermitian():
    with pytest.raises(NonHermitianError):
        hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_orthonormalize_rank_and_orthogonality():
    cols = np.column_stack([
        [1.0, 0, 0], [1.0, 1e-12, 0], [0, 1.0, 0],
    ]).astype(complex)
    q = orthonormalize(cols)
    assert q.shape[1] == 2
    assert op_norm(q.conj().T @ q - np.eye(2)) < 1e-12


def test_projector_validation():
    with pytest.raises(ValueError):
        Projector(np.array([[0.5, 0.5], [0.5, 0.6]]))
    p = Projector(np.diag([1.0, 0.0]))
    assert p.rank == 1 and p.dim == 2


def test_projector_lattice_ops_commuting_oracle():
    # on commuting (diagonal) projectors, meet is the product, join the max
    p = Projector(np.diag([1.0, 1.0, 0.0, 0.0]))
    q = Projector(np.diag([0.0, 1.0, 1.0, 0.0]))
    assert op_norm(proj_meet(p, q).matrix - p.matrix @ q.matrix) < 1e-10
    assert op_norm(proj_join(p, q).matrix - np.diag([1.0, 1, 1, 0])) < 1e-10
    assert op_norm(proj_ortho(p).matrix - np.diag([0.0, 0, 1, 1])) < 1e-10


def test_projector_de_morgan_random():
    for _ in range(20):
        p = random_projector(4, 2, RNG)
        q = random_projector(4, 1, RNG)
        lhs = proj_ortho(proj_join(p, q))
        rhs = proj_meet(proj_ortho(p), proj_ortho(q))
        assert op_norm(lhs.matrix - rhs.matrix) < 1e-8
        assert proj_leq(proj_meet(p, q), p)
        assert proj_leq(p, proj_join(p, q))


def test_orthomodular_law_random_projectors():
    # p <= q implies p v (p-perp ^ q) = q; force p <= q by construction
    for _ in range(20):
        q = random_projector(4, 3, RNG)
        basis = q.range_basis()
        p = projector_from_basis(basis[:, :2], dim=4)
        lhs = proj_join(p, proj_meet(proj_ortho(p), q))
        assert op_norm(lhs.matrix - q.matrix) < 1e-8


def test_sasaki_product_witness():
    p = Projector(np.array([[1.0, 0], [0, 0]], dtype=complex))
    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)
    q = projector_from_basis(plus.reshape(-1, 1), dim=2)
    assert op_norm(sasaki_product(p, q).matrix - p.matrix) < 1e-10
    assert op_norm(sasaki_product(q, p).matrix - q.matrix) < 1e-10
    assert proj_meet(p, q).rank == 0


def test_haar_unit_vector_norm():
    for _ in range(10):
        v = haar_unit_vector(6, RNG)
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12


def test_random_projector_rank():
    p = random_projector(5, 3, RNG)
    assert p.rank == 3
    assert op_norm(p.matrix @ p.matrix - p.matrix) < 1e-10
