"""Full-rank lattices in Q_p^n over the p-local integers Z_(p).

A compact open subgroup of Q_p^n is a full-rank Z_p-lattice, and every such
lattice is the closure of a Z_(p)-lattice in Q^n. We therefore compute with
exact rationals and only ever look at p-adic valuations.

Canonical form
--------------
Basis vectors are stored as the columns of an upper-triangular matrix ``B``:

* column ``j`` is zero below row ``j``;
* ``B[j][j] = p**e_j`` for an integer ``e_j`` (negative allowed);
* every off-diagonal entry ``B[r][j]`` (``r < j``) is the canonical residue of
  its class modulo ``p**e_r * Z_(p)`` (see :func:`exact.canonical_residue`).

Two generating sets of the same lattice give identical canonical bases. The
upper-triangular shape makes ``L ∩ (Q_p^k × 0)`` the span of the first ``k``
columns and the image in the last ``n-k`` coordinates the span of the trailing
block, which is what the sub/quotient constructions need.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import MixedUniverse, NotContained, RankDeficient, Singular
from .exact import Factored, as_fraction, canonical_residue, check_prime, valuation

Matrix = Tuple[Tuple[Fraction, ...], ...]

_ZERO = Fraction(0)


class Lattice:
    """A full-rank Z_(p)-lattice in Q^n held in canonical form. Immutable."""

    __slots__ = ("p", "dim", "columns", "exponents", "_hash")

    def __init__(self, p: int, columns, exponents):
        # use hnf_normalize(); this constructor trusts its input
        self.p = p
        self.dim = len(columns)
        self.columns = columns
        self.exponents = exponents
        self._hash = hash((p, columns))

    @property
    def basis(self) -> Matrix:
        """Row-major basis matrix; its columns generate the lattice."""
        n = self.dim
        return tuple(tuple(self.columns[j][i] for j in range(n)) for i in range(n))

    @property
    def det_valuation(self) -> int:
        return sum(self.exponents)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.p == other.p and self.columns == other.columns

    def __hash__(self) -> int:
        return self._hash

    def __contains__(self, vector) -> bool:
        return is_member(vector, self)

    def __repr__(self) -> str:
        rows = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.basis)
        return f"Lattice(p={self.p}, [{rows}])"


def _pivot_column(cols, i, p):
    best = None
    best_v = None
    for j, c in enumerate(cols):
        x = c[i]
        if x:
            v = valuation(x, p)
            if best_v is None or v < best_v:
                best, best_v = j, v
    return best, best_v


def hnf_normalize(generators: Sequence[Sequence], p: int, dim: int | None = None) -> Lattice:
    """Canonical basis of the Z_(p)-span of ``generators`` (a list of column vectors).

    Raises :class:`RankDeficient` when the span is not full rank.
    """
    check_prime(p)
    cols = [[as_fraction(x) for x in g] for g in generators]
    if dim is None:
        if not cols:
            raise RankDeficient("no generators")
        dim = len(cols[0])
    if any(len(c) != dim for c in cols):
        raise MixedUniverse("generator lengths differ")
    return _normalize(cols, p, dim)


def _normalize(cols: List[List[Fraction]], p: int, n: int) -> Lattice:
    cols = [c for c in cols if any(c)]
    out: List[List[Fraction]] = [None] * n  # type: ignore[list-item]
    exps = [0] * n
    pf = Fraction(p)
    for i in range(n - 1, -1, -1):
        j, e = _pivot_column(cols, i, p)
        if j is None:
            raise RankDeficient(f"generators do not span Q_{p}^{n}")
        piv = cols.pop(j)
        unit = piv[i] / pf**e
        if unit != 1:
            piv = [x / unit for x in piv[: i + 1]] + [_ZERO] * (n - i - 1)
        pivot = piv[i]
        rest = []
        for c in cols:
            x = c[i]
            if x:
                f = x / pivot
                for r in range(i):
                    if piv[r]:
                        c[r] -= f * piv[r]
                c[i] = _ZERO
            if any(c[:i]):
                rest.append(c)
        cols = rest
        out[i] = piv
        exps[i] = e
    # off-diagonal reduction; row r of column j is reduced by column r
    for j in range(n):
        col = out[j]
        for r in range(j - 1, -1, -1):
            x = col[r]
            if not x:
                continue
            rep = canonical_residue(x, exps[r], p)
            if rep != x:
                q = (x - rep) / out[r][r]
                pr = out[r]
                for s in range(r + 1):
                    if pr[s]:
                        col[s] -= q * pr[s]
    columns = tuple(tuple(c) for c in out)
    return Lattice(p, columns, tuple(exps))


def standard_lattice(p: int, n: int) -> Lattice:
    """Z_p^n."""
    check_prime(p)
    cols = tuple(tuple(Fraction(1) if r == j else _ZERO for r in range(n)) for j in range(n))
    return Lattice(p, cols, (0,) * n)


def diagonal_lattice(p: int, exponents: Sequence[int]) -> Lattice:
    """The lattice ``p^{e_1} Z_p × ... × p^{e_n} Z_p``."""
    check_prime(p)
    n = len(exponents)
    pf = Fraction(p)
    cols = tuple(
        tuple(pf ** exponents[j] if r == j else _ZERO for r in range(n)) for j in range(n)
    )
    return Lattice(p, cols, tuple(exponents))


def scale_lattice(L: Lattice, k: int) -> Lattice:
    """``p^k · L``."""
    f = Fraction(L.p) ** k
    return _normalize([[x * f for x in c] for c in L.columns], L.p, L.dim)


def _check_same(L1: Lattice, L2: Lattice):
    if L1.p != L2.p or L1.dim != L2.dim:
        raise MixedUniverse(
            f"lattices live in different spaces (p={L1.p}, n={L1.dim}) vs (p={L2.p}, n={L2.dim})"
        )


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    """Smallest lattice containing both."""
    _check_same(L1, L2)
    if L1 == L2:
        return L1
    return _normalize([list(c) for c in L1.columns + L2.columns], L1.p, L1.dim)


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """Largest lattice contained in both.

    Solves ``B1 x = B2 y`` over Z_(p): column-reduce ``[B1 | -B2]`` while
    recording the unimodular transform; the columns that reduce to zero carry
    a basis of the kernel, and ``B1 x`` over that basis spans the intersection.
    """
    _check_same(L1, L2)
    if L1 == L2:
        return L1
    p, n = L1.p, L1.dim
    m = 2 * n
    cols = [list(c) for c in L1.columns] + [[-x for x in c] for c in L2.columns]
    trans = [[Fraction(1) if r == j else _ZERO for r in range(m)] for j in range(m)]
    active = list(range(m))
    for i in range(n - 1, -1, -1):
        sub = [cols[j] for j in active]
        k, _ = _pivot_column(sub, i, p)
        if k is None:
            continue
        jp = active.pop(k)
        piv, tpiv = cols[jp], trans[jp]
        pivot = piv[i]
        for j in active:
            c = cols[j]
            x = c[i]
            if not x:
                continue
            f = x / pivot
            for r in range(i + 1):
                if piv[r]:
                    c[r] -= f * piv[r]
            t = trans[j]
            for r in range(m):
                if tpiv[r]:
                    t[r] -= f * tpiv[r]
    gens = []
    for j in active:
        x = trans[j][:n]
        gens.append([sum((L1.columns[k][r] * x[k] for k in range(n) if x[k]), _ZERO) for r in range(n)])
    return _normalize(gens, p, n)


def is_member(vector: Sequence, L: Lattice) -> bool:
    """Whether ``vector`` lies in ``L`` (back-substitution against the triangular basis)."""
    if len(vector) != L.dim:
        raise MixedUniverse("vector length does not match lattice dimension")
    w = [as_fraction(x) for x in vector]
    p = L.p
    for i in range(L.dim - 1, -1, -1):
        x = w[i]
        if not x:
            continue
        if valuation(x, p) < L.exponents[i]:
            return False
        col = L.columns[i]
        q = x / col[i]
        for r in range(i + 1):
            if col[r]:
                w[r] -= q * col[r]
    return True


def is_sublattice(L_sub: Lattice, L_sup: Lattice) -> bool:
    _check_same(L_sub, L_sup)
    if L_sub.det_valuation < L_sup.det_valuation:
        return False
    return all(is_member(c, L_sup) for c in L_sub.columns)


def reduce_vector(vector: Sequence, L: Lattice) -> Tuple[Fraction, ...]:
    """Canonical representative of the coset ``vector + L``."""
    w = [as_fraction(x) for x in vector]
    p = L.p
    for i in range(L.dim - 1, -1, -1):
        x = w[i]
        if not x:
            continue
        rep = canonical_residue(x, L.exponents[i], p)
        if rep != x:
            col = L.columns[i]
            q = (x - rep) / col[i]
            for r in range(i + 1):
                if col[r]:
                    w[r] -= q * col[r]
    return tuple(w)


def lattice_index(L_sub: Lattice, L_sup: Lattice) -> Factored:
    """``[L_sup : L_sub]`` as ``p^k`` with ``k = v_p(det B_sub) - v_p(det B_sup)``."""
    if not is_sublattice(L_sub, L_sup):
        raise NotContained("first lattice is not contained in the second")
    return Factored.prime_power(L_sub.p, L_sub.det_valuation - L_sup.det_valuation)


def generalized_index(K: Lattice, H: Lattice) -> Factored:
    """``[K+H : H]``, computed as ``[K : K∩H]``."""
    return lattice_index(lattice_intersect(K, H), K)


def as_matrix(rows) -> Matrix:
    m = tuple(tuple(as_fraction(x) for x in row) for row in rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise MixedUniverse("matrix must be square")
    return m


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    return tuple(
        tuple(sum((A[i][t] * B[t][j] for t in range(k) if A[i][t] and B[t][j]), _ZERO) for j in range(m))
        for i in range(n)
    )


def mat_vec(A: Matrix, v: Sequence[Fraction]) -> List[Fraction]:
    return [sum((a * x for a, x in zip(row, v) if a and x), _ZERO) for row in A]


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(Fraction(1) if i == j else _ZERO for j in range(n)) for i in range(n))


def mat_inverse(A: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination; :class:`Singular` if not invertible."""
    n = len(A)
    aug = [list(A[i]) + [Fraction(1) if i == j else _ZERO for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise Singular("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def determinant(A: Matrix) -> Fraction:
    n = len(A)
    m = [list(r) for r in A]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return _ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def apply_matrix(A: Matrix, L: Lattice) -> Lattice:
    """Canonical form of ``A·L``. ``A`` must be invertible."""
    if len(A) != L.dim:
        raise MixedUniverse("matrix and lattice dimensions differ")
    if determinant(A) == 0:
        raise Singular("matrix is singular")
    return _apply_unchecked(A, L)


def _apply_unchecked(A: Matrix, L: Lattice) -> Lattice:
    return _normalize([mat_vec(A, c) for c in L.columns], L.p, L.dim)


def restrict_to_leading(L: Lattice, k: int) -> Lattice:
    """``L ∩ (Q_p^k × 0)`` as a lattice in Q_p^k."""
    cols = [list(L.columns[j][:k]) for j in range(k)]
    return Lattice(L.p, tuple(tuple(c) for c in cols), L.exponents[:k])


def project_to_trailing(L: Lattice, k: int) -> Lattice:
    """Image of ``L`` under the projection onto the last ``n-k`` coordinates."""
    return _normalize([list(L.columns[j][k:]) for j in range(k, L.dim)], L.p, L.dim - k)

