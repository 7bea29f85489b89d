"""Invariant subgroups and quotients of concrete universes.

Two constructions, each returning the induced automorphisms together with the
maps on compact open subgroups:

* ``invariant_subquotient``: for ``x ↦ A x`` on Q_p^n with ``A`` block upper
  triangular, ``N = Q_p^k × 0`` is invariant; the restriction acts by the
  leading block and the quotient ``Q_p^n / N ≅ Q_p^{n-k}`` by the trailing one.
* ``quotient_by_compact_factor``: for ``φ × ψ`` on ``G_1 × Z_m^Z`` and a
  ψ-invariant cylinder subgroup ``N``, the quotient is ``G_1 × (Z_m^Z / N)``
  with ``Z_m^Z / N`` a finite group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import MixedUniverse, NotInvariant
from .finite_abelian import FinAbGroup, FiniteAutomorphism, FiniteUniverse, fa_canonicalize
from .lattice import project_to_trailing, restrict_to_leading
from .padic import MatrixAutomorphism, PAdicUniverse
from .shift import CylinderSubgroup, ShiftAutomorphism, ShiftUniverse
from .universe import ProductAutomorphism, ProductUniverse, product_automorphism


@dataclass(frozen=True)
class Subquotient:
    sub: MatrixAutomorphism  # φ restricted to N
    quot: MatrixAutomorphism  # induced map on G/N
    k: int

    def restrict(self, U):
        """``U ∩ N`` as a lattice of Q_p^k."""
        return restrict_to_leading(U, self.k)

    def project(self, U):
        """``q(U)``: drop the first ``k`` coordinates."""
        return project_to_trailing(U, self.k)


def invariant_subquotient(phi: MatrixAutomorphism, k: int) -> Subquotient:
    u = phi.universe
    if not isinstance(u, PAdicUniverse):
        raise MixedUniverse("invariant_subquotient needs a p-adic matrix automorphism")
    n = u.dim
    if not 0 < k < n:
        raise ValueError(f"split point must satisfy 0 < k < {n}")
    A = phi.matrix
    if any(A[i][j] for i in range(k, n) for j in range(k)):
        raise NotInvariant(f"lower-left block is nonzero, so the first {k} coordinates are not invariant")
    A11 = [row[:k] for row in A[:k]]
    A22 = [row[k:] for row in A[k:]]
    # the inverse of a block triangular matrix is block triangular with inverted diagonal blocks
    B = phi.inverse_matrix
    B11 = tuple(tuple(row[:k]) for row in B[:k])
    B22 = tuple(tuple(row[k:]) for row in B[k:])
    sub = MatrixAutomorphism(PAdicUniverse(u.p, k), A11, _inverse=B11)
    quot = MatrixAutomorphism(PAdicUniverse(u.p, n - k), A22, _inverse=B22)
    return Subquotient(sub, quot, k)


@dataclass(frozen=True)
class CompactQuotient:
    automorphism: ProductAutomorphism  # φ × ψ̄ on G_1 × (Z_m^Z / N)
    coords: tuple  # coordinates of Z_m^Z surviving in the quotient
    project: Callable  # (U_1, U_2) ↦ (U_1, q(U_2))

    @property
    def universe(self) -> ProductUniverse:
        return self.automorphism.universe


def quotient_by_compact_factor(phi: ProductAutomorphism, N: CylinderSubgroup) -> CompactQuotient:
    u = phi.universe
    if not isinstance(u, ProductUniverse) or len(u.factors) != 2 or not isinstance(u.factors[1], ShiftUniverse):
        raise MixedUniverse("quotient_by_compact_factor needs a product whose second factor is a shift universe")
    first, psi = phi.factors
    shift: ShiftUniverse = u.factors[1]
    shift._check(N)
    if not shift.equal(psi.image(N), N):
        raise NotInvariant("the cylinder subgroup is not invariant under the compact factor's automorphism")
    assert isinstance(psi, ShiftAutomorphism)
    coords = N.coords
    # Z_m^Z / N is the sum over constrained coordinates c of Z_m / H_c ≅ Z_{m/|H_c|}
    group = FinAbGroup([shift.m // H.order for _, H in N.constraints])
    fin = FiniteUniverse(group)
    w = len(coords)
    # invariance with nonempty constraints forces k = 0, so ψ̄ is diagonal multiplication by the unit
    psi_bar = FiniteAutomorphism(fin, [[psi.unit if i == j else 0 for j in range(w)] for i in range(w)])
    aut = product_automorphism(first, psi_bar)
    whole = shift.letter_group.whole()

    def project(U):
        U1, U2 = U
        gens = []
        for t, c in enumerate(coords):
            K = U2.constraint(c) or whole
            for g in K.generators:
                gens.append([g[0] if s == t else 0 for s in range(w)])
        return (U1, fa_canonicalize(group, gens))

    return CompactQuotient(aut, coords, project)


def shift_quotient_chain(phi: ProductAutomorphism, radii) -> list:
    """Quotients by the zero cylinders on ``[-i, i]`` for each ``i`` in ``radii``."""
    shift = phi.universe.factors[1]
    return [quotient_by_compact_factor(phi, shift.window(-i, i)) for i in radii]


__all__ = [
    "CompactQuotient",
    "Subquotient",
    "invariant_subquotient",
    "quotient_by_compact_factor",
    "shift_quotient_chain",
]
