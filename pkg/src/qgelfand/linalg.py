"""Dense complex linear algebra: Hermitian eigendecomposition with a
deterministic phase convention, subspace arithmetic, and the projector
lattice (meet, join, orthocomplement, Sasaki product)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionMismatchError(ValueError):
    pass


class NonHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared across the library.

    rank_tol governs rank decisions (which singular/eigen values count as
    zero), eig_tol bounds decomposition residuals, lattice_tol is the slack
    allowed in projector-lattice identities.
    """

    eig_tol: float = 1e-10
    rank_tol: float = 1e-8
    lattice_tol: float = 1e-8

    def __post_init__(self):
        if self.eig_tol <= 0 or self.rank_tol <= 0 or self.lattice_tol <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.rank_tol < self.eig_tol:
            raise ValueError("rank_tol must be >= eig_tol")


DEFAULT_TOL = ToleranceConfig()


def as_cmatrix(entries) -> np.ndarray:
    """Coerce to a complex 2-d array, rejecting NaN/Inf entries."""
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError("matrix contains non-finite entries")
    return a


def matrix_to_json(a: np.ndarray) -> dict:
    a = as_cmatrix(a)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    a = re + 1j * im
    if a.shape != (obj["rows"], obj["cols"]):
        raise ValueError("matrix JSON shape fields disagree with data")
    return as_cmatrix(a)


def op_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def hermitian_eig(a: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, unitary eigenbasis).  Each eigenvector is
    phase-normalized so its first nonzero component is a positive real,
    making the output reproducible across runs.
    """
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("matrix must be square")
    scale = max(1.0, op_norm(a))
    if op_norm(a - a.conj().T) > tol.rank_tol * scale:
        raise NonHermitianError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh((a + a.conj().T) / 2)
    vecs = _phase_normalize(vecs)
    return vals, vecs


def _phase_normalize(vecs: np.ndarray, thresh: float = 1e-12) -> np.ndarray:
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > thresh * max(1.0, np.abs(col).max()))
        if nz.size:
            pivot = col[nz[0]]
            out[:, j] = col * (pivot.conjugate() / abs(pivot))
    return out


def orthonormalize(columns: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Columns whose residual drops below rank_tol are discarded; the returned
    matrix holds an orthonormal basis of the numerically detected span (may
    have zero columns).
    """
    cols = np.asarray(columns, dtype=complex)
    if cols.ndim != 2 or cols.shape[1] == 0:
        raise ValueError("need at least one column")
    basis: list[np.ndarray] = []
    for j in range(cols.shape[1]):
        v = cols[:, j].copy()
        for _ in range(2):
            for b in basis:
                v -= b * (b.conj() @ v)
        norm = np.linalg.norm(v)
        if norm >= tol.rank_tol:
            basis.append(v / norm)
    if not basis:
        return np.zeros((cols.shape[0], 0), dtype=complex)
    return np.column_stack(basis)


@dataclass(frozen=True)
class Projector:
    """Hermitian idempotent matrix representing a closed subspace."""

    matrix: np.ndarray
    tol: float = DEFAULT_TOL.lattice_tol

    def __post_init__(self):
        m = as_cmatrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatchError("projector must be square")
        if op_norm(m - m.conj().T) > self.tol:
            raise ValueError("projector is not Hermitian within tol")
        if op_norm(m @ m - m) > self.tol:
            raise ValueError("projector is not idempotent within tol")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(float(np.real(np.trace(self.matrix)))))

    def range_basis(self, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
        vals, vecs = hermitian_eig(self.matrix, tol)
        keep = vals > 0.5
        return vecs[:, keep]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Projector):
            return NotImplemented
        return (
            self.dim == other.dim
            and op_norm(self.matrix - other.matrix) <= max(self.tol, other.tol)
        )

    def __hash__(self):
        return hash((self.dim, self.rank))


def projector_from_basis(basis: np.ndarray, dim: int | None = None,
                         tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """Projector onto the span of the given columns (may be empty)."""
    basis = np.asarray(basis, dtype=complex)
    if basis.size == 0:
        if dim is None:
            dim = basis.shape[0]
        return Projector(np.zeros((dim, dim), dtype=complex), tol.lattice_tol)
    q = orthonormalize(basis, tol)
    if q.shape[1] == 0:
        return Projector(np.zeros((basis.shape[0],) * 2, dtype=complex), tol.lattice_tol)
    return Projector(q @ q.conj().T, tol.lattice_tol)


def _check_same_dim(p: Projector, q: Projector):
    if p.dim != q.dim:
        raise DimensionMismatchError("projectors act on different spaces")


def proj_ortho(p: Projector) -> Projector:
    return Projector(np.eye(p.dim) - p.matrix, p.tol)


def proj_meet(p: Projector, q: Projector, tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """Projector onto range(p) ∩ range(q).

    Computed as the eigenspace of p + q at eigenvalue 2: the sum attains 2
    exactly on the intersection.
    """
    _check_same_dim(p, q)
    vals, vecs = hermitian_eig(p.matrix + q.matrix, tol)
    keep = vals > 2 - tol.rank_tol
    return projector_from_basis(vecs[:, keep], dim=p.dim, tol=tol)


def proj_join(p: Projector, q: Projector, tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """Projector onto span(range(p) ∪ range(q))."""
    _check_same_dim(p, q)
    cols = np.hstack([p.range_basis(tol), q.range_basis(tol)])
    if cols.shape[1] == 0:
        return projector_from_basis(cols, dim=p.dim, tol=tol)
    return projector_from_basis(cols, dim=p.dim, tol=tol)


def sasaki_product(p: Projector, q: Projector, tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """The projector p ∧ (p⊥ ∨ q), i.e. compression of q into p at lattice level."""
    _check_same_dim(p, q)
    return proj_meet(p, proj_join(proj_ortho(p), q, tol), tol)


def proj_leq(p: Projector, q: Projector, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Order of the projection lattice: p <= q iff pq = qp = p."""
    _check_same_dim(p, q)
    return op_norm(p.matrix @ q.matrix - p.matrix) <= tol.lattice_tol


def haar_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform point on the unit sphere of C^dim."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_projector(dim: int, rank: int, rng: np.random.Generator,
                     tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    cols = np.column_stack([haar_unit_vector(dim, rng) for _ in range(rank)])
    return projector_from_basis(cols, dim=dim, tol=tol)
