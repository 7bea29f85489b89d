"""Subgroup calculus for finite abelian groups.

A group is presented as ``Z^k / R`` for a full-rank relation lattice ``R``
(``R = m_1 Z ⊕ ... ⊕ m_k Z`` for ``Z_{m_1} × ... × Z_{m_k}``). A subgroup ``S``
is identified with its preimage lattice ``R ⊆ Λ_S ⊆ Z^k`` held in row-style
Hermite normal form, so equality of subgroups is equality of HNFs and

    |S| = det(R) / det(Λ_S),      [T : S] = det(Λ_S) / det(Λ_T).

Quotients ``G/N`` are again presented groups, with relation lattice ``Λ_N``.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from sympy import factorint

from .errors import (
    BadModulus,
    DimMismatch,
    InvalidInstance,
    MixedUniverse,
    NotAutomorphism,
    NotContained,
    ParentMismatch,
)
from .exact import EntropyValue, Factored
from .universe import Automorphism, Universe

IntMatrix = Tuple[Tuple[int, ...], ...]

DEFAULT_ENUMERATION_LIMIT = 10**4


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def int_hnf(rows: Iterable[Sequence[int]], k: int, modulus: int | None = None) -> IntMatrix:
    """Row-style Hermite normal form of a full-rank integer lattice in Z^k.

    Upper triangular, positive pivots, entries above each pivot in
    ``[0, pivot)``. When ``modulus`` is given the lattice is known to contain
    ``modulus·Z^k``; those rows are added and entries are kept reduced.
    """
    work = [list(r) for r in rows]
    if modulus is not None:
        work += [[modulus if i == j else 0 for j in range(k)] for i in range(k)]
    work = [r for r in work if any(r)]
    H: List[List[int]] = []
    for col in range(k):
        piv = None
        rest = []
        for r in work:
            if r[col] == 0:
                rest.append(r)
            elif piv is None:
                piv = r
            else:
                a, b = piv[col], r[col]
                g, x, y = xgcd(a, b)
                new_piv = [x * s + y * t for s, t in zip(piv, r)]
                other = [(b // g) * s - (a // g) * t for s, t in zip(piv, r)]
                piv = new_piv
                if modulus is not None:
                    other = [v % modulus for v in other]
                    piv = piv[: col + 1] + [v % modulus for v in piv[col + 1 :]]
                if any(other):
                    rest.append(other)
        if piv is None:
            raise DimMismatch("relation lattice is not full rank")
        if piv[col] < 0:
            piv = [-v for v in piv]
        H.append(piv)
        work = rest
    for i in range(k):
        d = H[i][i]
        for j in range(i):
            q = H[j][i] // d
            if q:
                H[j] = [s - q * t for s, t in zip(H[j], H[i])]
    return tuple(tuple(r) for r in H)


def _hnf_det(H: IntMatrix) -> int:
    return math.prod(H[i][i] for i in range(len(H)))


def _reduce(v: Sequence[int], H: IntMatrix) -> Tuple[int, ...]:
    w = list(v)
    for i, row in enumerate(H):
        q = w[i] // row[i]
        if q:
            w = [s - q * t for s, t in zip(w, row)]
    return tuple(w)


def _is_member(v: Sequence[int], H: IntMatrix) -> bool:
    w = list(v)
    for i, row in enumerate(H):
        if w[i] % row[i]:
            return False
        q = w[i] // row[i]
        if q:
            w = [s - q * t for s, t in zip(w, row)]
    return True


def _inverse_transpose(H: IntMatrix) -> List[List[Fraction]]:
    k = len(H)
    aug = [[Fraction(x) for x in H[i]] + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for c in range(k - 1, -1, -1):
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(c):
            f = aug[r][c]
            if f:
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    inv = [row[k:] for row in aug]
    return [[inv[j][i] for j in range(k)] for i in range(k)]


def _dual_rows(H: IntMatrix, D: int) -> List[List[int]]:
    """Rows of ``D·Λ*`` for the row lattice ``Λ`` with HNF ``H`` (integral when ``D·Z^k ⊆ Λ``)."""
    out = []
    for row in _inverse_transpose(H):
        scaled = [x * D for x in row]
        assert all(x.denominator == 1 for x in scaled)
        out.append([int(x) for x in scaled])
    return out


def _lattice_meet(H1: IntMatrix, H2: IntMatrix, D: int) -> IntMatrix:
    # Λ1 ∩ Λ2 = (Λ1* + Λ2*)*, everything scaled by D to stay integral
    k = len(H1)
    M = int_hnf(_dual_rows(H1, D) + _dual_rows(H2, D), k, modulus=D)
    return int_hnf(_dual_rows(M, D), k, modulus=D)


class FinAbGroup:
    """The finite abelian group ``Z^k / R``."""

    __slots__ = ("moduli", "relations", "rank", "order", "exponent_bound", "_hash")

    def __init__(self, moduli: Sequence[int] | None = None, relations: Sequence[Sequence[int]] | None = None):
        if (moduli is None) == (relations is None):
            raise ValueError("give exactly one of moduli / relations")
        if moduli is not None:
            moduli = tuple(int(m) for m in moduli)
            if any(m < 1 for m in moduli):
                raise BadModulus(f"moduli must be >= 1, got {moduli}")
            k = len(moduli)
            relations = [[m if i == j else 0 for j in range(k)] for i, m in enumerate(moduli)]
            self.moduli = moduli
            bound = math.lcm(*moduli) if moduli else 1
        else:
            k = len(relations)
            self.moduli = None
            bound = None
        self.rank = k
        H = int_hnf(relations, k)
        self.relations = H
        self.order = _hnf_det(H)
        self.exponent_bound = bound if bound is not None else self.order
        self._hash = hash(H)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinAbGroup) and self.relations == other.relations

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.moduli is not None:
            return f"FinAbGroup(moduli={list(self.moduli)})"
        return f"FinAbGroup(relations={[list(r) for r in self.relations]})"

    def reduce(self, v: Sequence[int]) -> Tuple[int, ...]:
        return _reduce(v, self.relations)

    def trivial(self) -> "FinAbSubgroup":
        return FinAbSubgroup(self, self.relations)

    def whole(self) -> "FinAbSubgroup":
        k = self.rank
        return FinAbSubgroup(self, tuple(tuple(int(i == j) for j in range(k)) for i in range(k)))

    def quotient(self, N: "FinAbSubgroup") -> "FinAbGroup":
        """``G/N`` presented with the extended relation lattice ``Λ_N``."""
        if N.parent != self:
            raise ParentMismatch("subgroup does not belong to this group")
        return FinAbGroup(relations=N.lattice)

    def to_json(self) -> dict:
        if self.moduli is not None:
            return {"moduli": list(self.moduli)}
        return {"relations": [list(r) for r in self.relations]}


class FinAbSubgroup:
    """A subgroup, stored as the HNF of its preimage lattice in Z^k."""

    __slots__ = ("parent", "lattice", "_hash")

    def __init__(self, parent: FinAbGroup, lattice: IntMatrix):
        self.parent = parent
        self.lattice = lattice
        self._hash = hash((parent, lattice))

    @property
    def generators(self) -> List[Tuple[int, ...]]:
        """Canonical generators: HNF rows reduced modulo the relations, zeros dropped."""
        gens = []
        for row in self.lattice:
            r = self.parent.reduce(row)
            if any(r):
                gens.append(r)
        return gens

    @property
    def order(self) -> int:
        return self.parent.order // _hnf_det(self.lattice)

    def __contains__(self, v) -> bool:
        return _is_member(v, self.lattice)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinAbSubgroup)
            and self.parent == other.parent
            and self.lattice == other.lattice
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FinAbSubgroup({self.parent!r}, gens={[list(g) for g in self.generators]})"

    def to_json(self) -> dict:
        data = self.parent.to_json()
        data["generators"] = [list(g) for g in self.generators]
        return data


def fa_canonicalize(parent: FinAbGroup, gens: Iterable[Sequence[int]]) -> FinAbSubgroup:
    gens = [list(map(int, g)) for g in gens]
    if any(len(g) != parent.rank for g in gens):
        raise DimMismatch(f"generators must have length {parent.rank}")
    H = int_hnf(gens + [list(r) for r in parent.relations], parent.rank, modulus=parent.exponent_bound)
    return FinAbSubgroup(parent, H)


def _same_parent(a: FinAbSubgroup, b: FinAbSubgroup):
    if a.parent != b.parent:
        raise ParentMismatch("subgroups live in different groups")


def fa_contains(sub: FinAbSubgroup, sup: FinAbSubgroup) -> bool:
    _same_parent(sub, sup)
    return all(_is_member(row, sup.lattice) for row in sub.lattice)


def fa_index(sub: FinAbSubgroup, sup: FinAbSubgroup) -> Factored:
    """``[sup : sub]`` as an order ratio."""
    if not fa_contains(sub, sup):
        raise NotContained("subgroup is not contained in the supergroup")
    return Factored.from_rational(Fraction(_hnf_det(sub.lattice), _hnf_det(sup.lattice)))


def fa_meet_join(a: FinAbSubgroup, b: FinAbSubgroup, which: str) -> FinAbSubgroup:
    _same_parent(a, b)
    G = a.parent
    if a == b:
        return a
    if which == "join":
        H = int_hnf(list(a.lattice) + list(b.lattice), G.rank, modulus=G.exponent_bound)
    elif which == "meet":
        H = _lattice_meet(a.lattice, b.lattice, G.exponent_bound)
    else:
        raise ValueError("which must be 'meet' or 'join'")
    return FinAbSubgroup(G, H)


def fa_meet(a: FinAbSubgroup, b: FinAbSubgroup) -> FinAbSubgroup:
    return fa_meet_join(a, b, "meet")


def fa_join(a: FinAbSubgroup, b: FinAbSubgroup) -> FinAbSubgroup:
    return fa_meet_join(a, b, "join")


def _int_det(M: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in M]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return int(det)


def _mat_vec(M: IntMatrix, v: Sequence[int]) -> List[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in M]


class FinAbAutomorphism:
    """An automorphism of a finite abelian group induced by an integer matrix (acting on columns)."""

    __slots__ = ("group", "matrix", "inverse_matrix")

    def __init__(self, group: FinAbGroup, matrix: Sequence[Sequence[int]], _inverse=None):
        k = group.rank
        M = tuple(tuple(int(x) for x in row) for row in matrix)
        if len(M) != k or any(len(r) != k for r in M):
            raise DimMismatch(f"matrix must be {k}x{k}")
        D = group.exponent_bound
        M = tuple(tuple(x % D for x in row) for row in M) if D > 1 else tuple(tuple(0 for _ in r) for r in M)
        if _inverse is None:
            for row in group.relations:
                if not _is_member(_mat_vec(M, row), group.relations):
                    raise NotAutomorphism("matrix does not preserve the relations")
            det = _int_det(M) if k else 1
            if math.gcd(det, D) != 1:
                raise NotAutomorphism(f"determinant {det} is not a unit modulo {D}")
            if k:
                t = pow(det % D, -1, D) if D > 1 else 0
                adj = _adjugate(M, det)
                _inverse = tuple(tuple(t * x % D for x in row) for row in adj)
            else:
                _inverse = ()
        self.group = group
        self.matrix = M
        self.inverse_matrix = _inverse

    def image(self, S: FinAbSubgroup) -> FinAbSubgroup:
        return fa_apply(self.matrix, S)

    def preimage(self, S: FinAbSubgroup) -> FinAbSubgroup:
        return fa_apply(self.inverse_matrix, S)

    def inverse(self) -> "FinAbAutomorphism":
        return FinAbAutomorphism(self.group, self.inverse_matrix, _inverse=self.matrix)

    def compose(self, other: "FinAbAutomorphism") -> "FinAbAutomorphism":
        D = self.group.exponent_bound
        prod = _int_mat_mul(self.matrix, other.matrix, D)
        inv = _int_mat_mul(other.inverse_matrix, self.inverse_matrix, D)
        return FinAbAutomorphism(self.group, prod, _inverse=inv)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinAbAutomorphism) and self.group == other.group and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.group, self.matrix))


def _int_mat_mul(A: IntMatrix, B: IntMatrix, D: int) -> IntMatrix:
    k = len(A)
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k)) % D for j in range(k)) for i in range(k))


def _adjugate(M: IntMatrix, det: int) -> List[List[int]]:
    # adj(M) = det · M^{-1}, computed exactly
    k = len(M)
    aug = [[Fraction(x) for x in M[i]] + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for c in range(k):
        piv = next(r for r in range(c, k) if aug[r][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(k):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [[int(aug[i][k + j] * det) for j in range(k)] for i in range(k)]


def fa_apply(M: Sequence[Sequence[int]], S: FinAbSubgroup) -> FinAbSubgroup:
    """Image of ``S`` under the endomorphism given by ``M``."""
    G = S.parent
    M = tuple(tuple(int(x) for x in row) for row in M)
    if len(M) != G.rank:
        raise DimMismatch("matrix size does not match the group rank")
    rows = [_mat_vec(M, row) for row in S.lattice] + [list(r) for r in G.relations]
    return FinAbSubgroup(G, int_hnf(rows, G.rank, modulus=G.exponent_bound))


def make_automorphism(group: FinAbGroup, matrix) -> FinAbAutomorphism:
    return FinAbAutomorphism(group, matrix)


# -- brute-force oracles -----------------------------------------------------


def enumerate_elements(S: FinAbSubgroup, limit: int = DEFAULT_ENUMERATION_LIMIT) -> set:
    """All elements of ``S`` as canonical vectors, by closure under its generators."""
    G = S.parent
    if G.order > limit:
        raise ValueError(f"group order {G.order} exceeds enumeration limit {limit}")
    gens = [G.reduce(g) for g in S.lattice]
    start = G.reduce([0] * G.rank)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.reduce([a + b for a, b in zip(x, g)])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def enumerate_cosets(sub: FinAbSubgroup, sup: FinAbSubgroup, limit: int = DEFAULT_ENUMERATION_LIMIT) -> int:
    """Number of cosets of ``sub`` met by ``sup``, found by walking ``sup``'s generators."""
    G = sup.parent
    if G.order > limit:
        raise ValueError(f"group order {G.order} exceeds enumeration limit {limit}")
    gens = list(sup.lattice)
    start = _reduce([0] * G.rank, sub.lattice)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _reduce([a + b for a, b in zip(x, g)], sub.lattice)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen)


def enumerate_group(G: FinAbGroup, limit: int = DEFAULT_ENUMERATION_LIMIT) -> List[Tuple[int, ...]]:
    return sorted(enumerate_elements(G.whole(), limit))


# -- universe wrapper ----------------------------------------------------------


class FiniteUniverse(Universe):
    """A finite abelian group as a (discrete, compact) universe; every subgroup is compact open."""

    kind = "finite"
    is_compact = True

    def __init__(self, group: FinAbGroup):
        self.group = group

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteUniverse) and self.group == other.group

    def __hash__(self) -> int:
        return hash(("finite", self.group))

    def __repr__(self) -> str:
        return repr(self.group)

    def _check(self, *subgroups):
        for S in subgroups:
            if not isinstance(S, FinAbSubgroup) or S.parent != self.group:
                raise MixedUniverse(f"{S!r} is not a subgroup of {self.group!r}")

    def intersect(self, a, b):
        self._check(a, b)
        return fa_meet(a, b)

    def sum(self, a, b):
        self._check(a, b)
        return fa_join(a, b)

    def contains(self, sub, sup) -> bool:
        self._check(sub, sup)
        return fa_contains(sub, sup)

    def index(self, sub, sup) -> Factored:
        self._check(sub, sup)
        return fa_index(sub, sup)

    def base(self, budget: int) -> list:
        # {0} alone is a local base at 1 of a discrete group
        return [self.group.trivial(), self.group.whole()][: max(budget, 1)]

    def whole_group(self):
        return self.group.whole()

    def standard_subgroup(self):
        return self.group.trivial()

    def default_window(self, U) -> int:
        # alpha_n > 1 can happen at most Omega(|G|) times
        return sum(factorint(self.group.order).values()) + 2

    def entropy_oracle(self, aut, U):
        return EntropyValue.zero()

    def describe(self) -> dict:
        return {"kind": "finite", **self.group.to_json()}

    def subgroup_to_json(self, S) -> dict:
        return {"kind": "finite", "generators": [list(g) for g in S.generators]}

    def subgroup_from_json(self, data: dict):
        gens = data.get("generators", [])
        if not isinstance(gens, list) or any(
            not isinstance(g, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in g) for g in gens
        ):
            raise InvalidInstance("finite subgroup generators must be integer vectors")
        try:
            return fa_canonicalize(self.group, gens)
        except DimMismatch as exc:
            raise InvalidInstance(str(exc)) from None


class FiniteAutomorphism(Automorphism):
    def __init__(self, universe: FiniteUniverse, matrix, _aut: FinAbAutomorphism | None = None):
        self.universe = universe
        self.aut = _aut if _aut is not None else FinAbAutomorphism(universe.group, matrix)

    @property
    def matrix(self) -> IntMatrix:
        return self.aut.matrix

    def image(self, S):
        self.universe._check(S)
        return self.aut.image(S)

    def preimage(self, S):
        self.universe._check(S)
        return self.aut.preimage(S)

    def inverse(self) -> "FiniteAutomorphism":
        return FiniteAutomorphism(self.universe, None, _aut=self.aut.inverse())

    def compose(self, other: "FiniteAutomorphism") -> "FiniteAutomorphism":
        if other.universe != self.universe:
            raise MixedUniverse("cannot compose automorphisms of different universes")
        return FiniteAutomorphism(self.universe, None, _aut=self.aut.compose(other.aut))

    def identity(self) -> "FiniteAutomorphism":
        k = self.universe.group.rank
        return FiniteAutomorphism(self.universe, [[int(i == j) for j in range(k)] for i in range(k)])

    def describe(self) -> dict:
        return {"kind": "matrix", "rows": [[str(x) for x in row] for row in self.aut.matrix]}

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteAutomorphism) and self.aut == other.aut

    def __hash__(self) -> int:
        return hash(self.aut)
