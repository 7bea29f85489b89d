"""G = Z_m^Z with automorphisms ``x ↦ (u·x_{i+k})_i`` (shift power times a unit).

Compact open subgroups are cylinder subgroups: finitely many coordinates are
constrained to a subgroup of Z_m, the rest are free. The group is compact, so
the modulus of every automorphism is 1.

Translation structure gives an exact stabilization point: with ``S`` the set
of constrained coordinates, every cotrajectory sequence attached to ``U_S`` is
constant from ``n = diam(S) + 1`` on, because ``S + n·k`` no longer meets the
earlier translates' overlap pattern. We stop at ``diam(S) + 2``.
"""

from __future__ import annotations

import math
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import BadModulus, InvalidInstance, MixedUniverse, NotContained
from .exact import EntropyValue, Factored
from .finite_abelian import FinAbGroup, FinAbSubgroup, fa_apply, fa_canonicalize, fa_contains, fa_index, fa_join, fa_meet
from .universe import Automorphism, Universe


class CylinderSubgroup:
    """``{x : x_c ∈ H_c for every constrained coordinate c}``. Immutable."""

    __slots__ = ("m", "constraints", "_hash")

    def __init__(self, m: int, constraints: Mapping[int, FinAbSubgroup] | Iterable = ()):
        items = constraints.items() if isinstance(constraints, Mapping) else constraints
        kept = []
        for c, H in items:
            if H.order != m:  # the full coordinate group imposes nothing
                kept.append((int(c), H))
        self.m = m
        self.constraints: Tuple[Tuple[int, FinAbSubgroup], ...] = tuple(sorted(kept, key=lambda t: t[0]))
        self._hash = hash((m, self.constraints))

    @property
    def coords(self) -> Tuple[int, ...]:
        return tuple(c for c, _ in self.constraints)

    def constraint(self, c: int) -> Optional[FinAbSubgroup]:
        for d, H in self.constraints:
            if d == c:
                return H
        return None

    @property
    def diameter(self) -> int:
        cs = self.coords
        return cs[-1] - cs[0] if cs else 0

    def is_zero_cylinder(self) -> bool:
        return all(H.order == 1 for _, H in self.constraints)

    def __eq__(self, other) -> bool:
        return isinstance(other, CylinderSubgroup) and self.m == other.m and self.constraints == other.constraints

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        parts = []
        for c, H in self.constraints:
            gens = H.generators
            parts.append(f"{c}:0" if H.order == 1 else f"{c}:<{','.join(str(g[0]) for g in gens)}>")
        return f"Cylinder(m={self.m}, {{{', '.join(parts)}}})"


class ShiftUniverse(Universe):
    kind = "shift"
    is_compact = True

    def __init__(self, m: int):
        if not isinstance(m, int) or m < 2:
            raise BadModulus(f"alphabet modulus must be an integer >= 2, got {m!r}")
        self.m = m
        self.letter_group = FinAbGroup([m])

    def __eq__(self, other) -> bool:
        return isinstance(other, ShiftUniverse) and self.m == other.m

    def __hash__(self) -> int:
        return hash(("shift", self.m))

    def __repr__(self) -> str:
        return f"Z_{self.m}^Z"

    # -- constructors ---------------------------------------------------------

    def coordinate_subgroup(self, gens) -> FinAbSubgroup:
        return fa_canonicalize(self.letter_group, [[g] for g in gens])

    def cylinder(self, zero_coords: Iterable[int] = (), coord_subgroups: Mapping[int, Iterable[int]] | None = None) -> CylinderSubgroup:
        cons: Dict[int, FinAbSubgroup] = {}
        zero = self.letter_group.trivial()
        for c in zero_coords:
            cons[int(c)] = zero
        for c, gens in (coord_subgroups or {}).items():
            H = self.coordinate_subgroup(gens)
            c = int(c)
            cons[c] = fa_meet(cons[c], H) if c in cons else H
        return CylinderSubgroup(self.m, cons)

    def window(self, lo: int, hi: int) -> CylinderSubgroup:
        return self.cylinder(range(lo, hi + 1))

    # -- calculus -------------------------------------------------------------

    def _check(self, *subgroups: CylinderSubgroup):
        for S in subgroups:
            if not isinstance(S, CylinderSubgroup) or S.m != self.m:
                raise MixedUniverse(f"{S!r} is not a cylinder subgroup of {self!r}")

    def intersect(self, a: CylinderSubgroup, b: CylinderSubgroup) -> CylinderSubgroup:
        self._check(a, b)
        if a == b:
            return a
        cons = dict(a.constraints)
        for c, H in b.constraints:
            cons[c] = fa_meet(cons[c], H) if c in cons else H
        return CylinderSubgroup(self.m, cons)

    def sum(self, a: CylinderSubgroup, b: CylinderSubgroup) -> CylinderSubgroup:
        self._check(a, b)
        if a == b:
            return a
        bc = dict(b.constraints)
        cons = {c: fa_join(H, bc[c]) for c, H in a.constraints if c in bc}
        return CylinderSubgroup(self.m, cons)

    def contains(self, sub: CylinderSubgroup, sup: CylinderSubgroup) -> bool:
        self._check(sub, sup)
        for c, H in sup.constraints:
            K = sub.constraint(c)
            if K is None or not fa_contains(K, H):
                return False
        return True

    def index(self, sub: CylinderSubgroup, sup: CylinderSubgroup) -> Factored:
        """Product over constrained coordinates of the coordinate indices."""
        if not self.contains(sub, sup):
            raise NotContained("cylinder subgroup is not contained in the other")
        whole = self.letter_group.whole()
        out = Factored.one()
        for c, K in sub.constraints:
            out = out * fa_index(K, sup.constraint(c) or whole)
        return out

    def base(self, budget: int) -> List[CylinderSubgroup]:
        """The whole group, then the zero cylinders on windows ``[-r, r]``."""
        out = [self.whole_group()]
        r = 0
        while len(out) < budget:
            out.append(self.window(-r, r))
            r += 1
        return out[:budget]

    def whole_group(self) -> CylinderSubgroup:
        return CylinderSubgroup(self.m, ())

    def standard_subgroup(self) -> CylinderSubgroup:
        return self.cylinder([0])

    def stabilization_bound(self, aut: "ShiftAutomorphism", U: CylinderSubgroup) -> int:
        return U.diameter + 2

    def default_window(self, U: CylinderSubgroup) -> int:
        return U.diameter + 2

    def entropy_oracle(self, aut: "ShiftAutomorphism", U: CylinderSubgroup) -> Optional[EntropyValue]:
        """Counting oracle for zero cylinders.

        ``C_n(σ^k ψ, U_S)`` is the zero cylinder on ``S ∪ (S+k) ∪ ... ∪ (S+(n-1)k)``;
        each step eventually adds one new coordinate per residue class of ``S``
        modulo ``|k|``.
        """
        if not U.is_zero_cylinder():
            return None
        if aut.k == 0 or not U.constraints:
            return EntropyValue.zero()
        classes = len({c % abs(aut.k) for c in U.coords})
        return EntropyValue(Factored.from_rational(self.m) ** classes)

    def describe(self) -> dict:
        return {"kind": "shift", "m": self.m}

    def subgroup_to_json(self, S: CylinderSubgroup) -> dict:
        zeros = [c for c, H in S.constraints if H.order == 1]
        out = {"kind": "cylinder", "zero_coords": zeros}
        others = {str(c): [g[0] for g in H.generators] for c, H in S.constraints if H.order != 1}
        if others:
            out["coord_subgroups"] = others
        return out

    def subgroup_from_json(self, data: dict) -> CylinderSubgroup:
        if data.get("kind") != "cylinder":
            raise InvalidInstance("shift subgroups must have kind 'cylinder'")
        zeros = data.get("zero_coords", [])
        subs = data.get("coord_subgroups", {})
        if not isinstance(zeros, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in zeros):
            raise InvalidInstance("zero_coords must be a list of integers")
        if not isinstance(subs, dict):
            raise InvalidInstance("coord_subgroups must be an object")
        try:
            parsed = {int(c): [int(g) for g in gens] for c, gens in subs.items()}
        except (TypeError, ValueError):
            raise InvalidInstance("coord_subgroups must map integer coordinates to integer generators") from None
        return self.cylinder(zeros, parsed)


class ShiftAutomorphism(Automorphism):
    """``(σ^k ψ_u)(x)_i = u·x_{i+k}``."""

    def __init__(self, universe: ShiftUniverse, k: int, unit: int = 1):
        if math.gcd(unit, universe.m) != 1:
            raise BadModulus(f"{unit} is not a unit modulo {universe.m}")
        self.universe = universe
        self.k = int(k)
        self.unit = unit % universe.m

    def _move(self, S: CylinderSubgroup, offset: int, mult: int) -> CylinderSubgroup:
        self.universe._check(S)
        cons = {c + offset: fa_apply([[mult]], H) for c, H in S.constraints}
        return CylinderSubgroup(self.universe.m, cons)

    def image(self, S: CylinderSubgroup) -> CylinderSubgroup:
        # a constraint at c moves to c - k
        return self._move(S, -self.k, self.unit)

    def preimage(self, S: CylinderSubgroup) -> CylinderSubgroup:
        return self._move(S, self.k, pow(self.unit, -1, self.universe.m))

    def inverse(self) -> "ShiftAutomorphism":
        return ShiftAutomorphism(self.universe, -self.k, pow(self.unit, -1, self.universe.m))

    def compose(self, other: "ShiftAutomorphism") -> "ShiftAutomorphism":
        if other.universe != self.universe:
            raise MixedUniverse("cannot compose automorphisms of different universes")
        # unit multiplication commutes with the shift
        return ShiftAutomorphism(self.universe, self.k + other.k, self.unit * other.unit)

    def identity(self) -> "ShiftAutomorphism":
        return ShiftAutomorphism(self.universe, 0, 1)

    def describe(self) -> dict:
        return {"kind": "shift", "k": self.k, "unit": self.unit}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ShiftAutomorphism)
            and self.universe == other.universe
            and (self.k, self.unit) == (other.k, other.unit)
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.k, self.unit))

    def __repr__(self) -> str:
        return f"ShiftAutomorphism(m={self.universe.m}, k={self.k}, unit={self.unit})"


def shift_universe(m: int) -> ShiftUniverse:
    return ShiftUniverse(m)


def shift_apply(a: ShiftAutomorphism, S: CylinderSubgroup) -> CylinderSubgroup:
    return a.image(S)


def shift_index(sub: CylinderSubgroup, sup: CylinderSubgroup) -> Factored:
    return ShiftUniverse(sub.m).index(sub, sup)
