"""The quantum-set structure on the pure states of a finite-dimensional
C*-algebra: singleton joins, closure-generated subsets, the subset lattice,
the noncommutative product of functions over pure states, and the claims
harness quantifying how far the noncommutative identities hold."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    BlockDecomposition,
    FdAlgebra,
    PureState,
    hat,
    pure_equal,
    random_pure_state,
)
from .linalg import (
    DEFAULT_TOL,
    Projector,
    ToleranceConfig,
    hermitian_eig,
    op_norm,
    orthonormalize,
    projector_from_basis,
    sasaki_product,
)


class UnsupportedModeError(ValueError):
    """Operation needs subspace components (superposition mode)."""


SUPERPOSITION = "superposition"
LITERAL = "literal"


@dataclass
class QSubset:
    """A closure-stable set of pure states.

    In superposition mode each block carries a subspace of the irrep space
    (None = no members there); the members are its vector states.  In
    literal mode the subset is a finite list of pure states.
    """

    decomposition: BlockDecomposition
    components: list[np.ndarray | None] | None = None  # orthonormal bases per block
    points: list[PureState] | None = None

    @property
    def mode(self) -> str:
        return SUPERPOSITION if self.components is not None else LITERAL

    def require_subspace(self) -> list[np.ndarray | None]:
        if self.components is None:
            raise UnsupportedModeError("literal-mode subset has no subspace structure")
        return self.components

    def contains(self, alpha: PureState, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        if self.points is not None:
            return any(pure_equal(alpha, p) for p in self.points)
        comp = self.components[alpha.block]
        if comp is None:
            return False
        v = comp @ (comp.conj().T @ alpha.vector)
        return np.linalg.norm(v - alpha.vector) <= 1e3 * tol.lattice_tol

    def block_projector(self, i: int) -> Projector:
        d = self.decomposition.blocks[i].irrep_dim
        comp = self.require_subspace()[i]
        if comp is None:
            return projector_from_basis(np.zeros((d, 0)), dim=d)
        return projector_from_basis(comp, dim=d)

    def is_empty(self) -> bool:
        if self.points is not None:
            return not self.points
        return all(c is None for c in self.components)

    def is_full(self) -> bool:
        if self.points is not None:
            return False
        return all(
            c is not None and c.shape[1] == blk.irrep_dim
            for c, blk in zip(self.components, self.decomposition.blocks)
        )

    def __eq__(self, other):
        if not isinstance(other, QSubset):
            return NotImplemented
        if self.mode != other.mode:
            return False
        if self.points is not None:
            return len(self.points) == len(other.points) and all(
                any(pure_equal(p, q) for q in other.points) for p in self.points
            )
        for i in range(self.decomposition.n_blocks):
            if op_norm(self.block_projector(i).matrix - other.block_projector(i).matrix) > 1e-7:
                return False
        return True


def full_qsubset(dec: BlockDecomposition) -> QSubset:
    return QSubset(dec, [np.eye(b.irrep_dim, dtype=complex) for b in dec.blocks])


def empty_qsubset(dec: BlockDecomposition) -> QSubset:
    return QSubset(dec, [None] * dec.n_blocks)


def subset_from_projectors(dec: BlockDecomposition, projs: list[Projector | None]) -> QSubset:
    comps = []
    for p, blk in zip(projs, dec.blocks):
        if p is None or p.rank == 0:
            comps.append(None)
        else:
            comps.append(p.range_basis())
    return QSubset(dec, comps)


def singleton_join(dec: BlockDecomposition, alpha: PureState, beta: PureState,
                   mode: str = SUPERPOSITION) -> QSubset:
    """{α} ∨ {β}: the two-point set for inequivalent states; for equivalent
    ones, either the vector states of span{x, y} (superposition mode) or
    the pure states among the normalized functional combinations (literal
    mode — which degenerates to the two points)."""
    if alpha.block != beta.block:
        if mode == LITERAL:
            return QSubset(dec, points=[alpha, beta])
        comps: list[np.ndarray | None] = [None] * dec.n_blocks
        comps[alpha.block] = orthonormalize(alpha.vector.reshape(-1, 1))
        comps[beta.block] = orthonormalize(beta.vector.reshape(-1, 1))
        return QSubset(dec, comps)
    if mode == SUPERPOSITION:
        comps = [None] * dec.n_blocks
        comps[alpha.block] = orthonormalize(
            np.column_stack([alpha.vector, beta.vector])
        )
        return QSubset(dec, comps)
    return QSubset(dec, points=_literal_combinations(alpha, beta))


def _literal_combinations(alpha: PureState, beta: PureState) -> list[PureState]:
    """Pure states of the form c1·α + c2·β (as functionals) with
    |c1|² + |c2|² = 1.

    For independent vectors, hermiticity forces real coefficients, the
    trace forces c1 + c2 = 1, and together with the normalization only the
    corners survive; verified numerically rather than assumed.
    """
    x, y = alpha.vector, beta.vector
    if pure_equal(alpha, beta):
        return [alpha]
    out = []
    for c1, c2 in [(1.0, 0.0), (0.0, 1.0)]:
        rho = c1 * np.outer(x, x.conj()) + c2 * np.outer(y, y.conj())
        vals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
        if vals.min() > -1e-12 and abs(vals.sum() - 1) < 1e-12 and np.sum(vals > 1e-9) == 1:
            out.append(alpha if c1 == 1.0 else beta)
    return out


def qsubset_closure(dec: BlockDecomposition, seeds: list[PureState],
                    mode: str = SUPERPOSITION) -> QSubset:
    """Least closure-stable subset containing the seeds."""
    if not seeds:
        raise ValueError("need at least one seed state")
    if mode == SUPERPOSITION:
        comps: list[np.ndarray | None] = [None] * dec.n_blocks
        for i in range(dec.n_blocks):
            vecs = [s.vector for s in seeds if s.block == i]
            if vecs:
                comps[i] = orthonormalize(np.column_stack(vecs))
        return QSubset(dec, comps)
    # literal mode: fixed point of pairwise literal joins
    points = list(seeds)
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(points), 2):
            for g in _literal_combinations(a, b):
                if not any(pure_equal(g, p) for p in points):
                    points.append(g)
                    changed = True
    return QSubset(dec, points=points)


def qsubset_meet(u: QSubset, v: QSubset) -> QSubset:
    from .linalg import proj_meet

    dec = u.decomposition
    u.require_subspace(), v.require_subspace()
    return subset_from_projectors(
        dec,
        [proj_meet(u.block_projector(i), v.block_projector(i)) for i in range(dec.n_blocks)],
    )


def qsubset_join(u: QSubset, v: QSubset) -> QSubset:
    from .linalg import proj_join

    dec = u.decomposition
    u.require_subspace(), v.require_subspace()
    return subset_from_projectors(
        dec,
        [proj_join(u.block_projector(i), v.block_projector(i)) for i in range(dec.n_blocks)],
    )


def qsubset_perp(u: QSubset) -> QSubset:
    """Per-block orthocomplement; blocks without members go to the full
    block (cross-block orthogonality is automatic, supports being
    centrally orthogonal)."""
    from .linalg import proj_ortho

    dec = u.decomposition
    u.require_subspace()
    return subset_from_projectors(
        dec, [proj_ortho(u.block_projector(i)) for i in range(dec.n_blocks)]
    )


def qsubset_sasaki(u: QSubset, v: QSubset) -> QSubset:
    """Per-block Sasaki product of the component projectors: the subset
    product U * V transported to the projector picture."""
    dec = u.decomposition
    u.require_subspace(), v.require_subspace()
    return subset_from_projectors(
        dec,
        [
            sasaki_product(u.block_projector(i), v.block_projector(i))
            for i in range(dec.n_blocks)
        ],
    )


# ---------------------------------------------------------------------------
# functions on P(A)


@dataclass
class QFunction:
    """Finite complex combination of characteristic functions of QSubsets."""

    decomposition: BlockDecomposition
    terms: list[tuple[complex, QSubset]] = field(default_factory=list)

    def evaluate(self, alpha: PureState) -> complex:
        return sum(c for c, u in self.terms if u.contains(alpha))

    def conjugate(self) -> "QFunction":
        return QFunction(self.decomposition, [(np.conj(c), u) for c, u in self.terms])

    def sup_norm(self) -> float:
        """Exact sup of |f| over all pure states, by enumerating realizable
        membership patterns per block.

        A pattern T is realizable iff the intersection of the subspaces in
        T is nonzero and not contained in any subspace outside T (over C a
        subspace inside a finite union of subspaces lies in one of them).
        """
        dec = self.decomposition
        best = 0.0
        for i in range(dec.n_blocks):
            d = dec.blocks[i].irrep_dim
            comps = []
            for c, u in self.terms:
                comp = u.require_subspace()[i]
                comps.append((c, comp))
            live = [t for t, (_, comp) in enumerate(comps) if comp is not None]
            for size in range(len(live) + 1):
                for pattern in itertools.combinations(live, size):
                    val = abs(sum(comps[t][0] for t in pattern))
                    if val <= best:
                        continue
                    if _pattern_realizable(comps, pattern, d):
                        best = val
        return best


def _pattern_realizable(comps, pattern, d) -> bool:
    basis = np.eye(d, dtype=complex)
    for t in pattern:
        basis = _intersect_bases(basis, comps[t][1], d)
        if basis.shape[1] == 0:
            return False
    k = basis.shape[1]
    for s, (_, comp) in enumerate(comps):
        if s in pattern:
            continue
        if comp is None:
            continue
        inter = _intersect_bases(basis, comp, d)
        if inter.shape[1] >= k:
            return False
    return True


def _intersect_bases(a: np.ndarray, b: np.ndarray, d: int) -> np.ndarray:
    pa = projector_from_basis(a, dim=d)
    pb = projector_from_basis(b, dim=d)
    from .linalg import proj_meet

    return proj_meet(pa, pb).range_basis()


def char_fn(u: QSubset, coeff: complex = 1.0) -> QFunction:
    return QFunction(u.decomposition, [(complex(coeff), u)])


def qfunction_star(f: QFunction, g: QFunction) -> QFunction:
    """Bilinear extension of χ_U * χ_V = χ_{U*V} (per-block Sasaki
    products); reduces to the pointwise product when every block is
    one-dimensional."""
    terms = []
    for cf, u in f.terms:
        for cg, v in g.terms:
            terms.append((cf * cg, qsubset_sasaki(u, v)))
    return QFunction(f.decomposition, terms)


def hat_as_qfunction(alg: FdAlgebra, a: np.ndarray) -> QFunction:
    """The simple-function surrogate of â: per block, the spectral
    decomposition of the compressed element turned into characteristic
    functions of eigenspaces (split into Hermitian parts first).

    Exact for commutative algebras; in the noncommutative case the
    surrogate differs from â on superpositions, which is precisely what
    the claims harness measures.
    """
    dec = alg.decomposition()
    a = alg.require_member(a)
    h = (a + a.conj().T) / 2
    k = (a - a.conj().T) / (2j)
    terms: list[tuple[complex, QSubset]] = []
    for part, scale in ((h, 1.0), (k, 1j)):
        if op_norm(part) <= 1e-14:
            continue
        for i, blk in enumerate(dec.blocks):
            m = blk.irrep(part)
            vals, vecs = hermitian_eig(m)
            clusters = _eig_clusters(vals)
            for idx in clusters:
                lam = float(np.mean(vals[idx]))
                if abs(lam) <= 1e-14:
                    continue
                comps: list[np.ndarray | None] = [None] * dec.n_blocks
                comps[i] = vecs[:, idx]
                terms.append((scale * lam, QSubset(dec, comps)))
    return QFunction(dec, terms)


def _eig_clusters(vals: np.ndarray, gap: float = 1e-9) -> list[np.ndarray]:
    clusters = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[i - 1] > gap:
            clusters.append([i])
        else:
            clusters[-1].append(i)
    return [np.array(c) for c in clusters]


# ---------------------------------------------------------------------------
# claims harness


@dataclass
class ClaimsReport:
    claim: str
    instance: str
    defects: dict
    verdict: str  # holds-within-tol | fails | inconclusive
    witnesses: list
    mode: str = SUPERPOSITION
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "instance": self.instance,
            "defects": {k: _json_value(v) for k, v in self.defects.items()},
            "verdict": self.verdict,
            "witnesses": [_json_value(w) for w in self.witnesses],
            "mode": self.mode,
            "seed": self.seed,
        }


def _json_value(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return _json_value(v.tolist())
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, PureState):
        return {"block": v.block, "vector": [[z.real, z.imag] for z in v.vector]}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    return v


def hat_preimage_qness(alg: FdAlgebra, a: np.ndarray, center: complex, radius: float,
                       samples: int, rng: np.random.Generator,
                       instance: str = "", tol: float = 1e-9) -> ClaimsReport:
    """Is the preimage of a disc under â closed under singleton joins?

    Samples equivalent pairs inside the preimage and measures how far â
    leaves the disc on the joined subspace's vector states.  Quantifies
    whether â can be q-continuous for the modeled subset lattice.
    """
    dec = alg.decomposition()
    a = alg.require_member(a)
    inside: list[PureState] = []
    for _ in range(samples):
        s = random_pure_state(dec, rng)
        if abs(hat(alg, a, s) - center) <= radius:
            inside.append(s)
    worst = 0.0
    witness = None
    pairs = 0
    for s, t in itertools.combinations(inside, 2):
        if s.block != t.block or pure_equal(s, t):
            continue
        pairs += 1
        w = orthonormalize(np.column_stack([s.vector, t.vector]))
        if w.shape[1] < 2:
            continue
        m = w.conj().T @ dec.blocks[s.block].irrep(a) @ w
        # extreme values of â over the joined vector states: numerical
        # range of the compressed 2×2 matrix
        for theta in np.linspace(0, 2 * np.pi, 64, endpoint=False):
            hm = (np.exp(-1j * theta) * m + (np.exp(-1j * theta) * m).conj().T) / 2
            vals, vecs = np.linalg.eigh(hm)
            eta = vecs[:, -1]
            z = complex(np.vdot(eta, m @ eta))
            viol = abs(z - center) - radius
            if viol > worst:
                worst = viol
                witness = PureState(s.block, w @ eta)
        if pairs >= 200:
            break
    if pairs == 0:
        # no inequivalent same-block pairs: joins add nothing, closure holds
        if inside:
            return ClaimsReport("hat_preimage_qness", instance,
                                {"violation": 0.0, "pairs_checked": 0,
                                 "preimage_size": len(inside)},
                                "holds-within-tol", [])
        return ClaimsReport("hat_preimage_qness", instance, {"violation": None},
                            "inconclusive", [])
    verdict = "holds-within-tol" if worst <= tol else "fails"
    return ClaimsReport(
        "hat_preimage_qness", instance,
        {"violation": worst, "pairs_checked": pairs, "preimage_size": len(inside)},
        verdict, [witness] if witness is not None else [],
    )


def cstar_identity_defect(f: QFunction, instance: str = "") -> ClaimsReport:
    """|‖f * f̄‖ − ‖f‖²| under the modeled product and exact sup-norms."""
    prod = qfunction_star(f, f.conjugate())
    lhs = prod.sup_norm()
    rhs = f.sup_norm() ** 2
    defect = abs(lhs - rhs)
    return ClaimsReport(
        "cstar_identity", instance,
        {"norm_f_star_fbar": lhs, "norm_f_sq": rhs, "defect": defect},
        "holds-within-tol" if defect <= 1e-9 else "fails",
        [],
    )


def prop9_defect(alg: FdAlgebra, state, a: np.ndarray, b: np.ndarray,
                 instance: str = "") -> ClaimsReport:
    """Purity-characterization defects at a state.

    (i) |α(h²) − α(h)²| for the Hermitian parts of a and b;
    (ii) |α(p∧q) − χ_{U_p ∧ U_q}(α)| for the top spectral projections of
    those Hermitian parts (the displayed lattice identity);
    (iii) the characteristic-function defect min(|p̂(α)|, |1 − p̂(α)|).
    """
    from .linalg import proj_meet

    dec = alg.decomposition()
    a = alg.require_member(a)
    b = alg.require_member(b)
    defects = {}
    hs = [(a + a.conj().T) / 2, (b + b.conj().T) / 2]
    defects["square"] = max(
        abs(hat(alg, h @ h, state) - hat(alg, h, state) ** 2) for h in hs
    )
    # mixed states are allowed: they are simply not members of any QSubset,
    # and the square defect then measures the variance directly
    pure_alpha = _as_pure_state(alg, state)
    projs = [_top_spectral_projector(alg, h) for h in hs]
    p, q = projs
    meets = []
    for blk in dec.blocks:
        meets.append(proj_meet(Projector(blk.irrep(p)), Projector(blk.irrep(q))))
    meet_elem = sum(
        blk.embed(m.matrix) for blk, m in zip(dec.blocks, meets)
    )
    u_meet = subset_from_projectors(dec, meets)
    chi_val = 1.0 if pure_alpha is not None and u_meet.contains(pure_alpha) else 0.0
    defects["lattice_meet"] = abs(hat(alg, meet_elem, state) - chi_val)
    defects["characteristic"] = max(
        min(abs(hat(alg, pp, state)), abs(1 - hat(alg, pp, state))) for pp in projs
    )
    verdict = "holds-within-tol" if max(defects.values()) <= 1e-9 else "fails"
    return ClaimsReport("prop9", instance, defects, verdict,
                        [pure_alpha] if pure_alpha is not None else [])


def _top_spectral_projector(alg: FdAlgebra, h: np.ndarray) -> np.ndarray:
    vals, vecs = hermitian_eig(h)
    clusters = _eig_clusters(vals)
    idx = clusters[-1]
    w = vecs[:, idx]
    return w @ w.conj().T


def _as_pure_state(alg: FdAlgebra, state) -> PureState | None:
    from .algebra import State, as_pure

    if isinstance(state, PureState):
        return state
    if isinstance(state, State):
        return as_pure(alg.decomposition(), state)
    return None


def hat_is_characteristic_defect(alg: FdAlgebra, p: np.ndarray, samples: int,
                                 rng: np.random.Generator,
                                 instance: str = "") -> ClaimsReport:
    """max over sampled pure α of min(|p̂(α)|, |1 − p̂(α)|): zero iff p̂ is
    {0,1}-valued on the sample."""
    dec = alg.decomposition()
    p = alg.require_member(p)
    if op_norm(p @ p - p) > 1e-8:
        raise ValueError("p must be a projection in the algebra")
    worst = 0.0
    witness = None
    for _ in range(samples):
        s = random_pure_state(dec, rng)
        v = hat(alg, p, s)
        val = min(abs(v), abs(1 - v))
        if val > worst:
            worst, witness = val, s
    return ClaimsReport(
        "hat_is_characteristic", instance, {"defect": worst, "samples": samples},
        "holds-within-tol" if worst <= 1e-9 else "fails",
        [witness] if witness is not None else [],
    )


def thm3_diagnostics(alg: FdAlgebra, samples: int, rng: np.random.Generator,
                     instance: str = "") -> ClaimsReport:
    """Injectivity, point separation, and homomorphism defect of the hat map.

    Injectivity is exact linear algebra: the smallest singular value of
    a ↦ ⊕ (block compressions of a) on the basis span.  The homomorphism
    defect compares α(ab) with (â * b̂)(α) in the simple-function model of
    the product; it vanishes for commutative algebras.
    """
    dec = alg.decomposition()
    cols = []
    for bmat in alg.basis:
        cols.append(np.concatenate([blk.irrep(bmat).ravel() for blk in dec.blocks]))
    sv = np.linalg.svd(np.column_stack(cols), compute_uv=False)
    injective = bool(sv[-1] > 1e-8)

    separated = True
    sep_witness = None
    for _ in range(samples):
        s, t = random_pure_state(dec, rng), random_pure_state(dec, rng)
        if pure_equal(s, t):
            continue
        if all(abs(hat(alg, bb, s) - hat(alg, bb, t)) <= 1e-10 for bb in alg.basis):
            separated = False
            sep_witness = (s, t)
            break

    hom_defect = 0.0
    hom_witness = None
    for _ in range(samples):
        s = random_pure_state(dec, rng)
        a = alg.random_element(rng)
        b = alg.random_element(rng)
        fa, fb = hat_as_qfunction(alg, a), hat_as_qfunction(alg, b)
        model = qfunction_star(fa, fb).evaluate(s)
        val = abs(hat(alg, a @ b, s) - model)
        if val > hom_defect:
            hom_defect, hom_witness = val, (s,)
    defects = {
        "min_singular_value": float(sv[-1]),
        "injective": injective,
        "separation": separated,
        "homomorphism_defect": hom_defect,
    }
    ok = injective and separated and hom_defect <= 1e-10
    witnesses = [w for w in (sep_witness, hom_witness) if w is not None]
    return ClaimsReport(
        "thm3", instance, defects,
        "holds-within-tol" if ok else "fails",
        witnesses if not ok else [],
    )
