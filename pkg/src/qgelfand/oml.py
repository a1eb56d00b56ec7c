"""Finite orthomodular lattices as explicit tables, set-based OMLs
(quantum sets), axiom verification, and the Boolean/commutativity
dichotomy."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


class StructureError(ValueError):
    """Tables are malformed (sizes/indices), as opposed to axiom failure."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    witnesses: tuple[int, ...]

    def __str__(self):
        return f"{self.axiom}{self.witnesses}"


NO_ELEMENT = -1


class FiniteOml:
    """An orthocomplemented lattice given by an explicit order table.

    Construction only validates well-formedness; use verify_oml for the
    axioms, so that deliberately broken instances can still be built and
    inspected.
    """

    def __init__(self, leq, ortho, labels=None):
        leq = np.asarray(leq, dtype=bool)
        ortho = np.asarray(ortho, dtype=int)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise StructureError("leq must be a square truth table")
        n = leq.shape[0]
        if n == 0:
            raise StructureError("lattice must be nonempty")
        if ortho.shape != (n,):
            raise StructureError("ortho table size disagrees with leq")
        if np.any(ortho < 0) or np.any(ortho >= n):
            raise StructureError("ortho entries out of range")
        if labels is not None and len(labels) != n:
            raise StructureError("label count disagrees with leq")
        self.n = n
        self.leq = leq
        self.ortho = ortho
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        self.bottom = self._find_bound(lambda p, q: leq[p, q])
        self.top = self._find_bound(lambda p, q: leq[q, p])
        self.meet, self.join = self._bound_tables()

    def _find_bound(self, below) -> int:
        for p in range(self.n):
            if all(below(p, q) for q in range(self.n)):
                return p
        return NO_ELEMENT

    def _bound_tables(self):
        n, leq = self.n, self.leq
        meet = np.full((n, n), NO_ELEMENT, dtype=int)
        join = np.full((n, n), NO_ELEMENT, dtype=int)
        for p in range(n):
            for q in range(n):
                lower = [r for r in range(n) if leq[r, p] and leq[r, q]]
                greatest = [r for r in lower if all(leq[s, r] for s in lower)]
                if len(greatest) == 1:
                    meet[p, q] = greatest[0]
                upper = [r for r in range(n) if leq[p, r] and leq[q, r]]
                least = [r for r in upper if all(leq[r, s] for s in upper)]
                if len(least) == 1:
                    join[p, q] = least[0]
        return meet, join

    def __eq__(self, other):
        if not isinstance(other, FiniteOml):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.leq, other.leq)
            and np.array_equal(self.ortho, other.ortho)
        )

    def __hash__(self):
        return hash((self.n, self.leq.tobytes(), self.ortho.tobytes()))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "leq": self.leq.astype(int).tolist(),
            "ortho": self.ortho.tolist(),
            "labels": self.labels,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteOml":
        try:
            return cls(obj["leq"], obj["ortho"], obj.get("labels"))
        except KeyError as exc:
            raise StructureError(f"lattice JSON missing field {exc}") from exc


def verify_oml(lat: FiniteOml) -> list[Violation]:
    """Check the bounded-lattice and orthocomplementation axioms.

    Empty report means the instance is an orthomodular lattice.  Each
    violation names the failed axiom and the witnessing element(s).
    """
    out: list[Violation] = []
    n, leq, ortho = lat.n, lat.leq, lat.ortho

    # partial order
    for p in range(n):
        if not leq[p, p]:
            out.append(Violation("order.reflexive", (p,)))
    for p, q in itertools.permutations(range(n), 2):
        if leq[p, q] and leq[q, p]:
            out.append(Violation("order.antisymmetric", (p, q)))
    for p, q, r in itertools.product(range(n), repeat=3):
        if leq[p, q] and leq[q, r] and not leq[p, r]:
            out.append(Violation("order.transitive", (p, q, r)))
    if out:
        return out

    if lat.bottom == NO_ELEMENT:
        out.append(Violation("bounds.bottom", ()))
    if lat.top == NO_ELEMENT:
        out.append(Violation("bounds.top", ()))
    for p, q in itertools.product(range(n), repeat=2):
        if lat.meet[p, q] == NO_ELEMENT:
            out.append(Violation("lattice.meet", (p, q)))
        if lat.join[p, q] == NO_ELEMENT:
            out.append(Violation("lattice.join", (p, q)))
    if out:
        return out

    for p in range(n):
        if ortho[ortho[p]] != p:
            out.append(Violation("ortho.involution", (p,)))
    for p, q in itertools.product(range(n), repeat=2):
        if leq[p, q] and not leq[ortho[q], ortho[p]]:
            out.append(Violation("ortho.order_reversing", (p, q)))
    for p in range(n):
        if lat.join[p, ortho[p]] != lat.top:
            out.append(Violation("ortho.complement_join", (p,)))
        if lat.meet[p, ortho[p]] != lat.bottom:
            out.append(Violation("ortho.complement_meet", (p,)))
    for p, q in itertools.product(range(n), repeat=2):
        if leq[p, q] and lat.join[p, lat.meet[ortho[p], q]] != q:
            out.append(Violation("orthomodular", (p, q)))
    return out


def skew_meet(lat: FiniteOml, p: int, q: int) -> int:
    """The Sasaki (skew) meet p ∧ (p⊥ ∨ q)."""
    return int(lat.meet[p, lat.join[lat.ortho[p], q]])


def is_boolean(lat: FiniteOml) -> tuple[bool, tuple[int, int] | None]:
    """True iff the skew meet is symmetric; otherwise the first bad pair."""
    for p, q in itertools.combinations(range(lat.n), 2):
        if skew_meet(lat, p, q) != skew_meet(lat, q, p):
            return False, (p, q)
    return True, None


def is_distributive(lat: FiniteOml) -> bool:
    """Exhaustive distributivity check, independent of skew_meet."""
    for p, q, r in itertools.product(range(lat.n), repeat=3):
        lhs = lat.meet[p, lat.join[q, r]]
        rhs = lat.join[lat.meet[p, q], lat.meet[p, r]]
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# lattice zoo


def boolean_lattice(k: int) -> FiniteOml:
    """Power-set lattice of a k-point set; elements are bitmasks."""
    n = 1 << k
    leq = np.array([[(p & ~q) == 0 for q in range(n)] for p in range(n)])
    ortho = np.array([(n - 1) ^ p for p in range(n)])
    labels = [format(p, f"0{max(k, 1)}b") for p in range(n)]
    return FiniteOml(leq, ortho, labels)


def mo_lattice(k: int) -> FiniteOml:
    """MO_k: bottom, top, and k orthocomplementary pairs of atoms."""
    n = 2 * k + 2
    top = n - 1
    leq = np.zeros((n, n), dtype=bool)
    for p in range(n):
        leq[p, p] = True
        leq[0, p] = True
        leq[p, top] = True
    ortho = np.zeros(n, dtype=int)
    ortho[0], ortho[top] = top, 0
    labels = ["0"] + [None] * (n - 2) + ["1"]
    for i in range(k):
        a, ac = 1 + 2 * i, 2 + 2 * i
        ortho[a], ortho[ac] = ac, a
        labels[a], labels[ac] = f"a{i}", f"a{i}'"
    return FiniteOml(leq, ortho, labels)


def horizontal_sum(parts: list[FiniteOml]) -> FiniteOml:
    """Glue OMLs by identifying their bottoms and tops (0-1 pasting)."""
    if not parts:
        raise StructureError("need at least one summand")
    interiors = []
    for lat in parts:
        if lat.bottom == NO_ELEMENT or lat.top == NO_ELEMENT:
            raise StructureError("summands must be bounded")
        interiors.append([p for p in range(lat.n) if p not in (lat.bottom, lat.top)])
    n = 2 + sum(len(ix) for ix in interiors)
    top = n - 1
    offsets = []
    acc = 1
    for ix in interiors:
        offsets.append(acc)
        acc += len(ix)

    def glob(i_part, p):
        lat = parts[i_part]
        if p == lat.bottom:
            return 0
        if p == lat.top:
            return top
        return offsets[i_part] + interiors[i_part].index(p)

    leq = np.zeros((n, n), dtype=bool)
    ortho = np.zeros(n, dtype=int)
    labels = [""] * n
    for p in range(n):
        leq[p, p] = True
        leq[0, p] = True
        leq[p, top] = True
    ortho[0], ortho[top] = top, 0
    labels[0], labels[top] = "0", "1"
    for i, lat in enumerate(parts):
        for p in interiors[i]:
            gp = glob(i, p)
            labels[gp] = f"{i}.{lat.labels[p]}"
            ortho[gp] = glob(i, lat.ortho[p])
            for q in interiors[i]:
                if lat.leq[p, q]:
                    leq[gp, glob(i, q)] = True
    return FiniteOml(leq, ortho, labels)


def lattice_zoo() -> dict[str, FiniteOml]:
    """The canonical finite test corpus."""
    zoo = {
        "B1": boolean_lattice(1),
        "B2": boolean_lattice(2),
        "B3": boolean_lattice(3),
        "B4": boolean_lattice(4),
        "MO1": mo_lattice(1),
        "MO2": mo_lattice(2),
        "MO3": mo_lattice(3),
        "chain2": boolean_lattice(1),  # the only chain that is an OML
        "hsum_B2_B3": horizontal_sum([boolean_lattice(2), boolean_lattice(3)]),
        "hsum_MO2_B2": horizontal_sum([mo_lattice(2), boolean_lattice(2)]),
    }
    return zoo


# ---------------------------------------------------------------------------
# set-based OMLs (quantum sets)


@dataclass
class SetOml:
    """A finite family of subsets of a ground set, ordered by inclusion.

    Members are frozensets of ground-point indices.  Singleton joins are
    taken to be the least upper bounds in the member poset; an explicit
    sjoin table may override them (they are primitive data when the family
    comes from an external construction).
    """

    ground: list[str]
    members: list[frozenset[int]]
    ortho: list[int]
    sjoin: dict[tuple[int, int], int] | None = None
    _index: dict[frozenset, int] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.ground:
            raise StructureError("ground set must be nonempty")
        if len(set(self.members)) != len(self.members):
            raise StructureError("duplicate members")
        npts = len(self.ground)
        for m in self.members:
            if any(x < 0 or x >= npts for x in m):
                raise StructureError("member contains out-of-range point")
        if len(self.ortho) != len(self.members):
            raise StructureError("ortho table size disagrees with members")
        if any(o < 0 or o >= len(self.members) for o in self.ortho):
            raise StructureError("ortho entries out of range")
        self._index = {m: i for i, m in enumerate(self.members)}

    @property
    def n(self) -> int:
        return len(self.members)

    def member_index(self, s) -> int:
        try:
            return self._index[frozenset(s)]
        except KeyError:
            raise KeyError(f"{set(s)} is not a member") from None

    def lub(self, p: int, q: int) -> int:
        """Least upper bound in the member poset, or NO_ELEMENT."""
        upper = [
            r
            for r, m in enumerate(self.members)
            if self.members[p] <= m and self.members[q] <= m
        ]
        least = [r for r in upper if all(self.members[r] <= self.members[s] for s in upper)]
        return least[0] if len(least) == 1 else NO_ELEMENT

    def singleton_join(self, x: int, y: int) -> frozenset[int]:
        """Join of the singletons {x}, {y}, as a point set."""
        if self.sjoin is not None:
            return self.members[self.sjoin[(min(x, y), max(x, y))]]
        p = self.member_index({x})
        q = self.member_index({y})
        r = self.lub(p, q)
        if r == NO_ELEMENT:
            raise StructureError(f"singleton join of {x},{y} undefined")
        return self.members[r]

    def point_closure(self, points: frozenset[int]) -> frozenset[int]:
        """Least fixed point of pairwise singleton joins over a point set."""
        cur = frozenset(points)
        while True:
            nxt = set(cur)
            for x, y in itertools.combinations(sorted(cur), 2):
                nxt |= self.singleton_join(x, y)
            nxt = frozenset(nxt)
            if nxt == cur:
                return cur
            cur = nxt

    def to_finite_oml(self) -> FiniteOml:
        order = np.array(
            [[self.members[p] <= self.members[q] for q in range(self.n)] for p in range(self.n)]
        )
        labels = ["{" + ",".join(self.ground[i] for i in sorted(m)) + "}" for m in self.members]
        return FiniteOml(order, np.asarray(self.ortho), labels)

    def to_json(self) -> dict:
        return {
            "ground": self.ground,
            "members": [sorted(m) for m in self.members],
            "ortho": list(self.ortho),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SetOml":
        try:
            return cls(
                list(obj["ground"]),
                [frozenset(m) for m in obj["members"]],
                list(obj["ortho"]),
            )
        except KeyError as exc:
            raise StructureError(f"SetOml JSON missing field {exc}") from exc


def powerset_quantum_set(ground: list[str]) -> SetOml:
    """(X, P(X)): the classical quantum set on a finite ground set."""
    npts = len(ground)
    members = [frozenset(i for i in range(npts) if mask >> i & 1) for mask in range(1 << npts)]
    full = frozenset(range(npts))
    index = {m: i for i, m in enumerate(members)}
    ortho = [index[full - m] for m in members]
    return SetOml(ground, members, ortho)


def verify_quantum_set(qs: SetOml) -> list[Violation]:
    """Check the quantum-set conditions plus the OML axioms of the member family."""
    out: list[Violation] = []
    npts = len(qs.ground)
    full = frozenset(range(npts))
    if frozenset() not in qs._index or full not in qs._index:
        out.append(Violation("qset.1_bounds", ()))
    for x in range(npts):
        if frozenset({x}) not in qs._index:
            out.append(Violation("qset.2_singletons", (x,)))
    if out:
        return out
    # 3 (order = inclusion) holds by representation; 4: meets are intersections
    for p, q in itertools.combinations(range(qs.n), 2):
        inter = qs.members[p] & qs.members[q]
        if inter not in qs._index:
            out.append(Violation("qset.4_meet_intersection", (p, q)))
    if out:
        return out
    # 5: pairwise joins agree with the singleton-join point closure
    for p, q in itertools.combinations(range(qs.n), 2):
        r = qs.lub(p, q)
        if r == NO_ELEMENT:
            out.append(Violation("qset.5_join_exists", (p, q)))
            continue
        closure = qs.point_closure(qs.members[p] | qs.members[q])
        if closure != qs.members[r]:
            out.append(Violation("qset.5_join_formula", (p, q)))
    # 6: members are closed under joins of their singletons
    for u in range(qs.n):
        if qs.point_closure(qs.members[u]) != qs.members[u]:
            out.append(Violation("qset.6_join_closed", (u,)))
    out.extend(verify_oml(qs.to_finite_oml()))
    return out


def relative_lattice(qs: SetOml, y) -> SetOml:
    """The quantum set induced on a member y, with relative complement y ∧ u⊥."""
    yi = qs.member_index(y)
    yset = qs.members[yi]
    below = [i for i, m in enumerate(qs.members) if m <= yset]
    local = {i: k for k, i in enumerate(below)}
    members = [qs.members[i] for i in below]
    ortho = []
    for i in below:
        rel = yset & qs.members[qs.ortho[i]]
        try:
            ortho.append(local[qs.member_index(rel)])
        except KeyError:
            raise StructureError(
                f"relative complement of member {i} is not a member below y"
            ) from None
    ground = list(qs.ground)
    sub = SetOml(ground, members, ortho)
    # keep the ambient singleton joins, restricted to y
    if any(frozenset({x}) in qs._index for x in sorted(yset)):
        sj = {}
        for x, z in itertools.combinations_with_replacement(sorted(yset), 2):
            j = qs.point_closure(frozenset({x, z})) & yset
            if j in sub._index:
                sj[(x, z)] = sub._index[j]
        if len(sj) == len(list(itertools.combinations_with_replacement(sorted(yset), 2))):
            sub.sjoin = sj
    return sub


def is_q_map(point_map: dict[int, int], src: SetOml, dst: SetOml):
    """True iff every member of dst has a preimage member in src."""
    for x in range(len(src.ground)):
        if x not in point_map:
            raise StructureError(f"point map undefined at {x}")
    for u, m in enumerate(dst.members):
        pre = frozenset(x for x in range(len(src.ground)) if point_map[x] in m)
        if pre not in src._index:
            return False, u
    return True, None
