"""G = Q_p^n with automorphisms given by invertible rational matrices.

Compact open subgroups are full-rank lattices. For this universe the local
entropy ``H(φ, U)`` does not depend on ``U``: any two lattices satisfy
``p^k U ⊆ V`` for some ``k``, scalar multiplication by ``p^k`` commutes with
``φ`` (so conjugation invariance gives ``H(φ, p^k U) = H(φ, U)``) and
antimonotonicity then squeezes ``H(φ, V)`` from both sides. Hence
``h_top(φ) = H(φ, Z_p^n)``; the engine still checks constancy over a base.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import List, Sequence

from .errors import InvalidInstance, MixedUniverse, Singular
from .exact import EntropyValue, Factored, check_prime, format_rational, parse_rational
from .lattice import (
    Lattice,
    Matrix,
    _apply_unchecked,
    as_matrix,
    determinant,
    diagonal_lattice,
    hnf_normalize,
    identity_matrix,
    is_sublattice,
    lattice_index,
    lattice_intersect,
    lattice_sum,
    mat_inverse,
    mat_mul,
    standard_lattice,
)
from .oracles import entropy_oracle_padic
from .universe import Automorphism, Universe, modulus


class PAdicUniverse(Universe):
    kind = "padic"
    is_compact = False

    def __init__(self, p: int, dim: int):
        check_prime(p)
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.p = p
        self.dim = dim

    def __eq__(self, other) -> bool:
        return isinstance(other, PAdicUniverse) and (self.p, self.dim) == (other.p, other.dim)

    def __hash__(self) -> int:
        return hash(("padic", self.p, self.dim))

    def __repr__(self) -> str:
        return f"Q_{self.p}^{self.dim}"

    def _check(self, *lattices: Lattice):
        for L in lattices:
            if not isinstance(L, Lattice) or L.p != self.p or L.dim != self.dim:
                raise MixedUniverse(f"{L!r} is not a lattice of {self!r}")

    def intersect(self, a: Lattice, b: Lattice) -> Lattice:
        self._check(a, b)
        return lattice_intersect(a, b)

    def sum(self, a: Lattice, b: Lattice) -> Lattice:
        self._check(a, b)
        return lattice_sum(a, b)

    def contains(self, sub: Lattice, sup: Lattice) -> bool:
        self._check(sub, sup)
        return is_sublattice(sub, sup)

    def index(self, sub: Lattice, sup: Lattice) -> Factored:
        self._check(sub, sup)
        return lattice_index(sub, sup)

    def base(self, budget: int) -> List[Lattice]:
        """Diagonal lattices ``p^{e_1}Z_p × ... × p^{e_n}Z_p``, by growing exponent radius."""
        out = [standard_lattice(self.p, self.dim)]
        seen = {(0,) * self.dim}
        radius = 0
        while len(out) < budget:
            radius += 1
            for exps in itertools.product(range(-radius, radius + 1), repeat=self.dim):
                if exps in seen or max(abs(e) for e in exps) != radius:
                    continue
                seen.add(exps)
                out.append(diagonal_lattice(self.p, exps))
                if len(out) >= budget:
                    break
        return out[:budget]

    def standard_subgroup(self) -> Lattice:
        return standard_lattice(self.p, self.dim)

    def default_window(self, U) -> int:
        return 2 * self.dim + 2

    def entropy_oracle(self, aut: "MatrixAutomorphism", U) -> EntropyValue:
        return entropy_oracle_padic(aut.matrix, self.p)

    def lattice(self, generators) -> Lattice:
        return hnf_normalize(generators, self.p, self.dim)

    def describe(self) -> dict:
        return {"kind": "padic", "p": self.p, "dim": self.dim}

    def subgroup_to_json(self, S: Lattice) -> dict:
        return {"kind": "lattice", "basis": [[format_rational(x) for x in row] for row in S.basis]}

    def subgroup_from_json(self, data: dict) -> Lattice:
        if data.get("kind") != "lattice":
            raise InvalidInstance("p-adic subgroups must have kind 'lattice'")
        rows = data.get("basis")
        if not isinstance(rows, list) or len(rows) != self.dim or any(
            not isinstance(r, list) or len(r) != self.dim for r in rows
        ):
            raise InvalidInstance(f"lattice basis must be a {self.dim}x{self.dim} array")
        m = [[parse_rational(x) for x in row] for row in rows]
        return hnf_normalize([[m[i][j] for i in range(self.dim)] for j in range(self.dim)], self.p, self.dim)


class MatrixAutomorphism(Automorphism):
    """``x ↦ A x`` on Q_p^n."""

    def __init__(self, universe: PAdicUniverse, matrix, _inverse: Matrix | None = None):
        A = as_matrix(matrix)
        if len(A) != universe.dim:
            raise MixedUniverse(f"matrix must be {universe.dim}x{universe.dim}")
        if _inverse is None:
            if determinant(A) == 0:
                raise Singular("matrix is singular")
            _inverse = mat_inverse(A)
        self.universe = universe
        self.matrix = A
        self.inverse_matrix = _inverse

    @property
    def p(self) -> int:
        return self.universe.p

    def image(self, S: Lattice) -> Lattice:
        self.universe._check(S)
        return _apply_unchecked(self.matrix, S)

    def preimage(self, S: Lattice) -> Lattice:
        self.universe._check(S)
        return _apply_unchecked(self.inverse_matrix, S)

    def inverse(self) -> "MatrixAutomorphism":
        return MatrixAutomorphism(self.universe, self.inverse_matrix, _inverse=self.matrix)

    def compose(self, other: "MatrixAutomorphism") -> "MatrixAutomorphism":
        if other.universe != self.universe:
            raise MixedUniverse("cannot compose automorphisms of different universes")
        return MatrixAutomorphism(
            self.universe,
            mat_mul(self.matrix, other.matrix),
            _inverse=mat_mul(other.inverse_matrix, self.inverse_matrix),
        )

    def identity(self) -> "MatrixAutomorphism":
        I = identity_matrix(self.universe.dim)
        return MatrixAutomorphism(self.universe, I, _inverse=I)

    def describe(self) -> dict:
        return {"kind": "matrix", "rows": [[format_rational(x) for x in row] for row in self.matrix]}

    def __eq__(self, other) -> bool:
        return isinstance(other, MatrixAutomorphism) and self.universe == other.universe and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.universe, self.matrix))

    def __repr__(self) -> str:
        return f"MatrixAutomorphism({self.universe!r}, {self.describe()['rows']})"


def padic_universe(p: int, A) -> tuple:
    """Build ``(universe, automorphism)`` for ``x ↦ A x`` on ``Q_p^n``."""
    A = as_matrix(A)
    u = PAdicUniverse(p, len(A))
    return u, MatrixAutomorphism(u, A)


def padic_modulus(phi: MatrixAutomorphism, U: Lattice) -> Factored:
    """Modulus via the index ratio ``[φU : U∩φU] / [U : U∩φU]``."""
    return modulus(phi, U)


def scalar_matrix(n: int, c: Fraction) -> Matrix:
    return tuple(tuple(Fraction(c) if i == j else Fraction(0) for j in range(n)) for i in range(n))


def matrix_from_json(rows: Sequence[Sequence[str]]) -> Matrix:
    if not isinstance(rows, list) or not rows or any(not isinstance(r, list) for r in rows):
        raise InvalidInstance("matrix rows must be a non-empty array of arrays")
    return as_matrix([[parse_rational(x) for x in row] for row in rows])
