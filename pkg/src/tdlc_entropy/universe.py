"""The subgroup calculus every concrete group model implements.

A :class:`Universe` is a totally disconnected locally compact abelian group
presented through its compact open subgroups: we can intersect and add them,
push them through automorphisms and compute finite indices. Because every
implemented group is abelian, the product ``K·H`` appearing in the entropy
formulas is simply the subgroup sum.

Automorphisms are separate objects bound to a universe; they compose, invert
and take integer powers.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from typing import Optional, Sequence

from .errors import InvalidInstance, MixedUniverse, NotContained
from .exact import EntropyValue, Factored


class Universe(ABC):
    is_compact: bool = False
    kind: str = ""

    @abstractmethod
    def intersect(self, a, b): ...

    @abstractmethod
    def sum(self, a, b): ...

    @abstractmethod
    def contains(self, sub, sup) -> bool:
        """Whether ``sub`` is a subgroup of ``sup``."""

    @abstractmethod
    def index(self, sub, sup) -> Factored:
        """``[sup : sub]``; raises :class:`NotContained` unless ``sub ⊆ sup``."""

    def generalized_index(self, K, H) -> Factored:
        """``[K·H : H] = [K : K∩H]``."""
        return self.index(self.intersect(K, H), K)

    def equal(self, a, b) -> bool:
        return a == b

    def apply(self, aut: "Automorphism", S):
        self.check_automorphism(aut)
        return aut.image(S)

    def apply_inverse(self, aut: "Automorphism", S):
        self.check_automorphism(aut)
        return aut.preimage(S)

    def check_automorphism(self, aut: "Automorphism"):
        if aut.universe != self:
            raise MixedUniverse("automorphism belongs to a different universe")

    @abstractmethod
    def base(self, budget: int) -> list:
        """Up to ``budget`` members of a local base at 1 of compact open subgroups."""

    def whole_group(self):
        raise NotImplementedError(f"{type(self).__name__} is not compact")

    @abstractmethod
    def standard_subgroup(self):
        """The default compact open subgroup used when an instance names none."""

    def default_window(self, U) -> int:
        return 2

    def stabilization_bound(self, aut: "Automorphism", U) -> Optional[int]:
        """A proven index from which the entropy sequences are constant, if one is known."""
        return None

    def entropy_oracle(self, aut: "Automorphism", U) -> Optional[EntropyValue]:
        """Independent value of ``H(aut, U)`` when a closed form is available."""
        return None

    @abstractmethod
    def describe(self) -> dict: ...

    @abstractmethod
    def subgroup_to_json(self, S) -> dict: ...

    @abstractmethod
    def subgroup_from_json(self, data: dict): ...


class Automorphism(ABC):
    universe: Universe

    @abstractmethod
    def image(self, S): ...

    @abstractmethod
    def preimage(self, S): ...

    @abstractmethod
    def inverse(self) -> "Automorphism": ...

    @abstractmethod
    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self ∘ other``."""

    @abstractmethod
    def identity(self) -> "Automorphism": ...

    @abstractmethod
    def describe(self) -> dict: ...

    def power(self, k: int) -> "Automorphism":
        if k < 0:
            return self.inverse().power(-k)
        result = self.identity()
        base = self
        while k:
            if k & 1:
                result = result.compose(base)
            base = base.compose(base)
            k >>= 1
        return result

    def __pow__(self, k: int) -> "Automorphism":
        return self.power(k)

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return self.compose(other)


def modulus(phi: Automorphism, U) -> Factored:
    """``[φ(U) : U∩φ(U)] / [U : U∩φ(U)]``, the factor by which φ scales Haar measure."""
    u = phi.universe
    image = phi.image(U)
    common = u.intersect(U, image)
    return u.index(common, image) / u.index(common, U)


class ProductUniverse(Universe):
    """``G_1 × G_2 × ...``; subgroups and automorphisms are tuples acting componentwise."""

    kind = "product"

    def __init__(self, factors: Sequence[Universe]):
        self.factors = tuple(factors)
        if len(self.factors) < 2:
            raise ValueError("a product needs at least two factors")
        self.is_compact = all(f.is_compact for f in self.factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductUniverse) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(("product", self.factors))

    def __repr__(self) -> str:
        return " × ".join(repr(f) for f in self.factors)

    def _split(self, *subgroups):
        for S in subgroups:
            if not isinstance(S, tuple) or len(S) != len(self.factors):
                raise MixedUniverse("subgroup does not match the product shape")
        return zip(self.factors, *subgroups)

    def intersect(self, a, b):
        return tuple(f.intersect(x, y) for f, x, y in self._split(a, b))

    def sum(self, a, b):
        return tuple(f.sum(x, y) for f, x, y in self._split(a, b))

    def contains(self, sub, sup) -> bool:
        return all(f.contains(x, y) for f, x, y in self._split(sub, sup))

    def index(self, sub, sup) -> Factored:
        if not self.contains(sub, sup):
            raise NotContained("product subgroup not contained componentwise")
        out = Factored.one()
        for f, x, y in self._split(sub, sup):
            out = out * f.index(x, y)
        return out

    def equal(self, a, b) -> bool:
        return all(f.equal(x, y) for f, x, y in self._split(a, b))

    def base(self, budget: int) -> list:
        # pairs ordered by the larger of the two positions, so every factor's base is reached
        parts = [f.base(budget) for f in self.factors]
        combos = sorted(
            itertools.product(*[range(len(p)) for p in parts]),
            key=lambda idx: (max(idx), idx),
        )
        return [tuple(p[i] for p, i in zip(parts, idx)) for idx in combos[:budget]]

    def whole_group(self):
        return tuple(f.whole_group() for f in self.factors)

    def standard_subgroup(self):
        return tuple(f.standard_subgroup() for f in self.factors)

    def default_window(self, U) -> int:
        return sum(f.default_window(x) for f, x in self._split(U))

    def entropy_oracle(self, aut: "Automorphism", U):
        total = EntropyValue.zero()
        for f, a, x in zip(self.factors, aut.factors, U):
            h = f.entropy_oracle(a, x)
            if h is None:
                return None
            total = total + h
        return total

    def describe(self) -> dict:
        return {"kind": "product", "factors": [f.describe() for f in self.factors]}

    def subgroup_to_json(self, S) -> dict:
        return {"kind": "product", "factors": [f.subgroup_to_json(x) for f, x in self._split(S)]}

    def subgroup_from_json(self, data: dict):
        parts = data.get("factors")
        if not isinstance(parts, list) or len(parts) != len(self.factors):
            raise InvalidInstance("product subgroup needs one entry per factor")
        return tuple(f.subgroup_from_json(d) for f, d in zip(self.factors, parts))


class ProductAutomorphism(Automorphism):
    def __init__(self, universe: ProductUniverse, factors: Sequence[Automorphism]):
        if len(factors) != len(universe.factors):
            raise MixedUniverse("one automorphism per factor is required")
        for f, a in zip(universe.factors, factors):
            f.check_automorphism(a)
        self.universe = universe
        self.factors = tuple(factors)

    def image(self, S):
        return tuple(a.image(x) for a, x in zip(self.factors, S))

    def preimage(self, S):
        return tuple(a.preimage(x) for a, x in zip(self.factors, S))

    def inverse(self) -> "ProductAutomorphism":
        return ProductAutomorphism(self.universe, [a.inverse() for a in self.factors])

    def compose(self, other: "ProductAutomorphism") -> "ProductAutomorphism":
        return ProductAutomorphism(self.universe, [a.compose(b) for a, b in zip(self.factors, other.factors)])

    def identity(self) -> "ProductAutomorphism":
        return ProductAutomorphism(self.universe, [a.identity() for a in self.factors])

    def describe(self) -> dict:
        return {"kind": "product", "factors": [a.describe() for a in self.factors]}

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductAutomorphism) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)


def product_universe(*factors: Universe) -> ProductUniverse:
    return ProductUniverse(factors)


def product_automorphism(*factors: Automorphism) -> ProductAutomorphism:
    return ProductAutomorphism(ProductUniverse([a.universe for a in factors]), factors)
