"""Spectrum versus the pure-state image Sigma(a), star-cyclic
decomposition, the GNS-realized multiplication-operator unitary, and the
invariant-subspace pipeline (modeled construction plus an eigenvector
oracle)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import FdAlgebra, generate_algebra, gns, vector_state
from .linalg import (
    DEFAULT_TOL,
    Projector,
    as_cmatrix,
    haar_unit_vector,
    op_norm,
    orthonormalize,
    projector_from_basis,
)


class NotCyclicError(ValueError):
    def __init__(self, achieved: int, ambient: int):
        self.achieved = achieved
        self.ambient = ambient
        super().__init__(
            f"vector is not star-cyclic: orbit spans {achieved} of {ambient} dimensions"
        )


def spectrum(a: np.ndarray) -> np.ndarray:
    """Eigenvalues with algebraic multiplicity, sorted by (re, im)."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    vals = np.linalg.eigvals(a)
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


@dataclass
class SpectralReport:
    """sigma(a) against Sigma(a) = union over blocks of the numerical
    range of the block image, described by support functions on a uniform
    angle grid plus a Monte-Carlo sample cloud."""

    sigma: np.ndarray
    thetas: np.ndarray
    block_supports: list[np.ndarray]  # support value per angle, per block
    block_boundaries: list[np.ndarray]  # complex boundary polyline per block
    cloud: np.ndarray  # complex samples of a-hat over Haar pure states
    sigma_singleton: bool
    sigma_equals_big: bool
    hausdorff_tol: float

    def contains(self, z: complex, tol: float | None = None) -> bool:
        """z in Sigma(a) iff some block's support function dominates it at
        every swept angle (numerical ranges are convex)."""
        if tol is None:
            tol = self.hausdorff_tol
        for supports in self.block_supports:
            proj = np.real(np.exp(-1j * self.thetas) * z)
            if np.all(proj <= supports + tol):
                return True
        return False

    def to_json(self) -> dict:
        return {
            "sigma": [[z.real, z.imag] for z in self.sigma],
            "thetas": self.thetas.tolist(),
            "block_supports": [s.tolist() for s in self.block_supports],
            "block_boundaries": [
                [[z.real, z.imag] for z in b] for b in self.block_boundaries
            ],
            "cloud": [[z.real, z.imag] for z in self.cloud],
            "flags": {
                "sigma_singleton": self.sigma_singleton,
                "sigma_equals_big": self.sigma_equals_big,
            },
        }


def sigma_big(a: np.ndarray, n_angles: int = 720, samples: int = 2000,
              rng: np.random.Generator | None = None,
              hausdorff_tol: float = 1e-6) -> SpectralReport:
    """Sigma(a): the set of values of a-hat over pure states of the
    algebra generated by a.

    Per block, the numerical range of the block image is traced by a
    support-line sweep: for each angle the top eigenvector of the
    Hermitian part of e^{-i theta} m gives a boundary point.  A Haar
    sample cloud over ambient unit vectors is attached for diagnostics.
    """
    a = as_cmatrix(a)
    if rng is None:
        rng = np.random.default_rng(0)
    alg = generate_algebra([a])
    dec = alg.decomposition()
    sig = spectrum(a)
    thetas = np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False)

    block_supports = []
    block_boundaries = []
    for blk in dec.blocks:
        m = blk.irrep(a)
        supports = np.empty(n_angles)
        boundary = np.empty(n_angles, dtype=complex)
        for k, th in enumerate(thetas):
            rot = np.exp(-1j * th) * m
            h = (rot + rot.conj().T) / 2
            vals, vecs = np.linalg.eigh(h)
            supports[k] = vals[-1]
            v = vecs[:, -1]
            boundary[k] = complex(np.vdot(v, m @ v))
        block_supports.append(supports)
        block_boundaries.append(boundary)

    n = a.shape[0]
    cloud = np.empty(samples, dtype=complex)
    for i in range(samples):
        xi = haar_unit_vector(n, rng)
        cloud[i] = complex(np.vdot(xi, a @ xi))

    all_boundary = np.concatenate(block_boundaries)
    singleton = bool(np.max(np.abs(all_boundary - all_boundary[0])) <= hausdorff_tol)
    # Hausdorff check: every boundary point near sigma and vice versa
    d1 = max(np.min(np.abs(sig - z)) for z in all_boundary)
    equals = bool(d1 <= 10 * hausdorff_tol)
    report = SpectralReport(sig, thetas, block_supports, block_boundaries,
                            cloud, singleton, equals, hausdorff_tol)
    for lam in sig:
        if not report.contains(lam, 100 * hausdorff_tol):
            raise RuntimeError("eigenvalue escaped the swept Sigma region")
    return report


# ---------------------------------------------------------------------------
# star-cyclic decomposition


@dataclass
class CyclicDecomposition:
    algebra: FdAlgebra
    pieces: list[tuple[Projector, np.ndarray]]  # (subspace projector, cyclic vector)
    orthogonality_defect: float
    completeness_defect: float


def orbit_basis(alg: FdAlgebra, h: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orbit span {x h : x in the algebra}."""
    cols = np.column_stack([b @ h for b in alg.basis])
    return orthonormalize(cols)


def cyclic_decompose(a: np.ndarray) -> CyclicDecomposition:
    """Split the ambient space into orbit subspaces of the *-algebra
    generated by a, each with a star-cyclic vector.

    Greedy: take the first standard basis vector with a component outside
    the span so far, project it out, and form its orbit.  Orbits of a
    *-closed algebra are reducing, so the pieces stay orthogonal.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    alg = generate_algebra([a])
    pieces: list[tuple[Projector, np.ndarray]] = []
    covered = np.zeros((n, 0), dtype=complex)
    for j in range(n):
        if covered.shape[1] == n:
            break
        e = np.zeros(n, dtype=complex)
        e[j] = 1.0
        resid = e - covered @ (covered.conj().T @ e)
        if np.linalg.norm(resid) < DEFAULT_TOL.rank_tol:
            continue
        h = resid / np.linalg.norm(resid)
        basis = orbit_basis(alg, h)
        pieces.append((projector_from_basis(basis, dim=n), h))
        covered = orthonormalize(np.hstack([covered, basis]))
    ortho = 0.0
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            ortho = max(ortho, op_norm(pieces[i][0].matrix @ pieces[j][0].matrix))
    total = sum(p.matrix for p, _ in pieces)
    complete = op_norm(total - np.eye(n))
    return CyclicDecomposition(alg, pieces, ortho, complete)


# ---------------------------------------------------------------------------
# the multiplication-operator unitary


@dataclass
class IntertwiningReport:
    unitary: np.ndarray  # GNS coordinates -> ambient
    unitarity_defect: float
    intertwining_defect: float
    gns_dim: int
    representation: object = None  # the GNS representation the unitary maps from

    def defect_for(self, x: np.ndarray) -> float:
        """‖x − U π(x) U†‖ against the representation used to build U."""
        u = self.unitary
        return op_norm(x - u @ self.representation.pi(x) @ u.conj().T)


def fc_unitary(a: np.ndarray, h: np.ndarray) -> IntertwiningReport:
    """The unitary [x] -> x h from the GNS space of the vector state at h
    onto the ambient space, verified to carry every algebra element to its
    GNS left-multiplication image.

    Requires h star-cyclic for the algebra generated by a.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    h = np.asarray(h, dtype=complex).reshape(-1)
    h = h / np.linalg.norm(h)
    alg = generate_algebra([a])
    orbit = orbit_basis(alg, h)
    if orbit.shape[1] < n:
        raise NotCyclicError(orbit.shape[1], n)
    state = vector_state(h)
    rep = gns(alg, state)
    if rep.dim != n:
        raise NotCyclicError(rep.dim, n)
    # U solves U . (GNS class of b_j) = b_j h over the basis
    classes = np.column_stack([rep.vector_of(b) for b in alg.basis])
    images = np.column_stack([b @ h for b in alg.basis])
    u = images @ np.linalg.pinv(classes)
    unit_defect = op_norm(u.conj().T @ u - np.eye(n))
    defect = 0.0
    for b in alg.basis:
        defect = max(defect, op_norm(b - u @ rep.pi(b) @ u.conj().T))
    return IntertwiningReport(u, unit_defect, defect, rep.dim, rep)


# ---------------------------------------------------------------------------
# invariant subspaces


@dataclass
class InvariantSubspaceResult:
    projector: Projector | None
    invariance_defect: float | None
    dims: tuple[int, int]  # (rank, ambient)
    case_tag: str  # scalar-case | sigma-split-case | oracle | out-of-dichotomy
    provenance: str  # paper-construction | eigenvector-oracle
    verdict: str  # nontrivial | trivial | out-of-dichotomy | scalar-discrepancy
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "projector": None if self.projector is None else {
                "re": self.projector.matrix.real.tolist(),
                "im": self.projector.matrix.imag.tolist(),
            },
            "invariance_defect": self.invariance_defect,
            "rank": self.dims[0],
            "ambient": self.dims[1],
            "case_tag": self.case_tag,
            "provenance": self.provenance,
            "verdict": self.verdict,
            "notes": {k: str(v) for k, v in self.notes.items()},
        }


def invariance_defect(a: np.ndarray, p: Projector) -> float:
    comp = np.eye(p.dim) - p.matrix
    return op_norm(comp @ a @ p.matrix)


def _oracle_result(a: np.ndarray) -> InvariantSubspaceResult:
    n = a.shape[0]
    vals, vecs = np.linalg.eig(a)
    order = np.lexsort((vals.imag, vals.real))
    v = vecs[:, order[0]]
    p = projector_from_basis(v.reshape(-1, 1), dim=n)
    defect = invariance_defect(a, p)
    verdict = "nontrivial" if 0 < p.rank < n else "trivial"
    return InvariantSubspaceResult(p, defect, (p.rank, n), "oracle",
                                   "eigenvector-oracle", verdict,
                                   {"eigenvalue": vals[order[0]]})


def _modeled_result(a: np.ndarray, report: SpectralReport, samples: int,
                    rng: np.random.Generator,
                    scalar_tol: float = 1e-8) -> InvariantSubspaceResult:
    """The sigma-versus-Sigma dichotomy, with measured defects in place of
    asserted invariance.

    Scalar case: Sigma a single point lambda; the claim 'a = lambda I'
    is checked, and its failure is recorded as a discrepancy witness.
    Split case: sigma strictly inside Sigma; the subspace is the span of
    sampled pure-state vectors whose a-hat value sits on sigma (nearest
    quantile fallback if the exact fiber is empty), rank-capped below the
    ambient dimension.  Anything else is reported out-of-dichotomy.
    """
    n = a.shape[0]
    norm_a = max(1.0, op_norm(a))
    split_tol = 1e-6 * norm_a
    if report.sigma_singleton:
        lam = complex(np.mean(np.concatenate(report.block_boundaries)))
        scalar_gap = op_norm(a - lam * np.eye(n))
        e = np.zeros((n, 1), dtype=complex)
        e[0, 0] = 1.0
        p = projector_from_basis(e, dim=n)
        defect = invariance_defect(a, p)
        if scalar_gap > scalar_tol * norm_a:
            return InvariantSubspaceResult(
                p, defect, (1, n), "scalar-case", "paper-construction",
                "scalar-discrepancy",
                {"lambda": lam, "scalar_gap": scalar_gap},
            )
        return InvariantSubspaceResult(p, defect, (1, n), "scalar-case",
                                       "paper-construction", "nontrivial",
                                       {"lambda": lam})
    boundary = np.concatenate(report.block_boundaries)
    gap = max(np.min(np.abs(report.sigma - z)) for z in boundary)
    if gap <= split_tol:
        return InvariantSubspaceResult(
            None, None, (0, n), "out-of-dichotomy", "paper-construction",
            "out-of-dichotomy",
            {"reason": "sigma equals Sigma but is not a single point"},
        )
    # split case: sample pure-state vectors, keep the sigma fiber
    xs = [haar_unit_vector(n, rng) for _ in range(samples)]
    resid = np.array([
        float(np.min(np.abs(report.sigma - complex(np.vdot(x, a @ x))))) for x in xs
    ])
    fiber = [x for x, r in zip(xs, resid) if r <= split_tol]
    quantile_fallback = not fiber
    if quantile_fallback:
        k = max(1, samples // 10)
        order = np.argsort(resid)
        fiber = [xs[i] for i in order[:k]]
    cols = np.zeros((n, 0), dtype=complex)
    for x in fiber:
        cand = orthonormalize(np.hstack([cols, x.reshape(-1, 1)]))
        if cand.shape[1] >= n:
            break
        cols = cand
    if cols.shape[1] == 0:
        cols = fiber[0].reshape(-1, 1)
    p = projector_from_basis(cols, dim=n)
    defect = invariance_defect(a, p)
    return InvariantSubspaceResult(
        p, defect, (p.rank, n), "sigma-split-case", "paper-construction",
        "nontrivial" if 0 < p.rank < n else "trivial",
        {"fiber_size": len(fiber), "quantile_fallback": quantile_fallback,
         "sigma_gap": gap},
    )


def invariant_subspace(a: np.ndarray, mode: str = "oracle",
                       samples: int = 2000,
                       rng: np.random.Generator | None = None,
                       n_angles: int = 720) -> list[InvariantSubspaceResult]:
    """Candidate invariant subspaces for a.

    'oracle' returns an eigenvector line (always exists over C) with its
    defect.  'paper' runs the modeled dichotomy construction and reports
    its measured defect without asserting success.  'both' returns both.
    """
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise ValueError("need a square matrix of size at least 2")
    if mode not in ("paper", "oracle", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None:
        rng = np.random.default_rng(0)
    out = []
    if mode in ("paper", "both"):
        report = sigma_big(a, n_angles=n_angles, samples=min(samples, 500), rng=rng)
        out.append(_modeled_result(a, report, samples, rng))
    if mode in ("oracle", "both"):
        out.append(_oracle_result(a))
    return out
