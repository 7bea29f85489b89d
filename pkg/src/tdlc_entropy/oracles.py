"""Independent oracles used to certify the entropy engine.

* Closed forms for linear automorphisms of Q_p^n, read off the Newton polygon
  of the characteristic polynomial: the entropy and the scale are both
  ``log p`` times the total valuation deficit of the expanding eigenvalues,
  and the modulus is ``p^{-v_p(det A)}``.
* Index oracles that never look at determinants: elementary divisors over
  Z_(p) and literal coset enumeration.

Newton polygon convention: for ``f = Σ a_i x^i`` take the lower convex hull of
``(i, v_p(a_i))``; a segment of slope ``s`` and horizontal length ``ℓ``
accounts for ``ℓ`` roots of valuation ``-s``. (Check: ``x - p`` has one
segment of slope ``-1``, i.e. a root of valuation 1.)
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import Singular
from .exact import EntropyValue, Factored, as_fraction, check_prime, valuation
from .lattice import Lattice, determinant, is_sublattice, mat_inverse, mat_vec, reduce_vector

DEFAULT_COSET_LIMIT = 10**4


def char_poly(A) -> List[Fraction]:
    """Monic characteristic polynomial ``det(xI - A)``, coefficients in ascending degree.

    Faddeev-LeVerrier recurrence; exact over the rationals.
    """
    A = [[as_fraction(x) for x in row] for row in A]
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A·M_{k-1} + c_{n-k+1}·I
        AM = [[sum((A[i][t] * M[t][j] for t in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        c_prev = coeffs[n - k + 1]
        M = [[AM[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        trace = sum((sum((A[i][t] * M[t][i] for t in range(n)), Fraction(0)) for i in range(n)), Fraction(0))
        coeffs[n - k] = -trace / k
    return coeffs


@dataclass(frozen=True)
class NewtonPolygon:
    points: Tuple[Tuple[int, int], ...]
    segments: Tuple[Tuple[Fraction, int], ...]  # (slope, horizontal length), slopes increasing

    @classmethod
    def of(cls, coeffs: Sequence, p: int) -> "NewtonPolygon":
        pts = tuple((i, valuation(c, p)) for i, c in enumerate(coeffs) if c != 0)
        hull: List[Tuple[int, int]] = []
        for pt in pts:
            while len(hull) >= 2:
                (x1, y1), (x2, y2) = hull[-2], hull[-1]
                # drop the middle point unless it lies strictly below the chord
                if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                    hull.pop()
                else:
                    break
            hull.append(pt)
        segs = tuple(
            (Fraction(y2 - y1, x2 - x1), x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])
        )
        return cls(pts, segs)

    def root_valuations(self) -> List[Tuple[Fraction, int]]:
        """``(valuation, multiplicity)`` of the roots."""
        return [(-s, n) for s, n in self.segments]

    def expanding_exponent(self) -> int:
        """``Σ -v_p(λ)`` over roots with ``v_p(λ) < 0``; always an integer."""
        total = sum((s * n for s, n in self.segments if s > 0), Fraction(0))
        assert total.denominator == 1, "segment rises between lattice points are integers"
        return int(total)


def _nonsingular(A, p):
    check_prime(p)
    d = determinant(tuple(tuple(as_fraction(x) for x in row) for row in A))
    if d == 0:
        raise Singular("matrix is singular")
    return d


def entropy_oracle_padic(A, p: int) -> EntropyValue:
    _nonsingular(A, p)
    e = NewtonPolygon.of(char_poly(A), p).expanding_exponent()
    return EntropyValue(Factored.prime_power(p, e))


def modulus_oracle_padic(A, p: int) -> Factored:
    d = _nonsingular(A, p)
    return Factored.prime_power(p, -valuation(d, p))


def scale_oracle_padic(A, p: int) -> Factored:
    _nonsingular(A, p)
    return Factored.prime_power(p, NewtonPolygon.of(char_poly(A), p).expanding_exponent())


# -- index oracles -------------------------------------------------------------


def smith_valuations(M, p: int) -> List[int]:
    """Valuations of the elementary divisors over Z_(p) of a nonsingular square matrix."""
    m = [[as_fraction(x) for x in row] for row in M]
    n = len(m)
    out = []
    for t in range(n):
        best = None
        for i in range(t, n):
            for j in range(t, n):
                if m[i][j]:
                    v = valuation(m[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            raise Singular("matrix is singular")
        v, i, j = best
        m[t], m[i] = m[i], m[t]
        for row in m:
            row[t], row[j] = row[j], row[t]
        piv = m[t][t]
        for i in range(t + 1, n):
            if m[i][t]:
                f = m[i][t] / piv
                m[i] = [a - f * b for a, b in zip(m[i], m[t])]
        for j in range(t + 1, n):
            if m[t][j]:
                f = m[t][j] / piv
                for row in m:
                    row[j] -= f * row[t]
        out.append(v)
    return out


def smith_index(L_sub: Lattice, L_sup: Lattice) -> Factored:
    """``[L_sup : L_sub]`` from the elementary divisors of ``B_sup^{-1} B_sub``."""
    if not is_sublattice(L_sub, L_sup):
        raise ValueError("not a sublattice")
    inv = mat_inverse(L_sup.basis)
    coords = [mat_vec(inv, c) for c in L_sub.columns]  # columns of B_sup^{-1} B_sub
    M = [[coords[j][i] for j in range(L_sub.dim)] for i in range(L_sub.dim)]
    return Factored.prime_power(L_sub.p, sum(smith_valuations(M, L_sub.p)))


def coset_count(L_sub: Lattice, L_sup: Lattice, limit: int = DEFAULT_COSET_LIMIT) -> int | None:
    """Count cosets of ``L_sub`` in ``L_sup`` by walking ``L_sup``'s generators.

    Returns ``None`` once more than ``limit`` cosets have been seen.
    """
    start = reduce_vector([0] * L_sub.dim, L_sub)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in L_sup.columns:
            y = reduce_vector([a + b for a, b in zip(x, g)], L_sub)
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    return None
                queue.append(y)
    return len(seen)
