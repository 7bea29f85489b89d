"""Exact scalars: p-adic valuations of rationals, factored positive rationals and entropy values.

Every index and entropy in the package is carried as a :class:`Factored` value
(a map ``prime -> integer exponent``); logarithms only appear when a value is
rendered for display.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Iterable, Mapping, Union

from sympy import factorint, isprime

from .errors import BadPrime, InvalidInstance

Rational = Union[int, Fraction]


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or p < 2 or not isprime(p):
        raise BadPrime(f"{p!r} is not a prime")
    return p


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"`` exactly; floats and zero denominators are rejected."""
    if not isinstance(text, str):
        raise InvalidInstance(f"rational must be a string, got {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        a = int(num)
        b = int(den) if sep else 1
    except ValueError:
        raise InvalidInstance(f"malformed rational {text!r}") from None
    if b == 0:
        raise InvalidInstance(f"zero denominator in {text!r}")
    return Fraction(a, b)


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: Rational, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero is +infinity")
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def split_unit(x: Rational, p: int):
    """Return ``(v, u)`` with ``x = p**v * u`` and ``u`` a p-adic unit."""
    v = valuation(x, p)
    return v, Fraction(x) / Fraction(p) ** v


def unit_residue(u: Fraction, modulus: int) -> int:
    """Residue in ``[0, modulus)`` of a rational whose denominator is invertible mod ``modulus``."""
    if modulus == 1:
        return 0
    return u.numerator * pow(u.denominator, -1, modulus) % modulus


def canonical_residue(x: Fraction, e: int, p: int) -> Fraction:
    """Canonical representative of the class of ``x`` modulo ``p**e * Z_(p)``.

    The representative is ``0`` when ``v_p(x) >= e`` and otherwise ``N * p**v``
    with ``v = v_p(x)`` and ``N`` the residue of ``x / p**v`` in ``[0, p**(e-v))``.
    """
    if x == 0:
        return Fraction(0)
    v, u = split_unit(x, p)
    if v >= e:
        return Fraction(0)
    return unit_residue(u, p ** (e - v)) * Fraction(p) ** v


@total_ordering
class Factored:
    """A positive rational stored as ``{prime: exponent}`` with nonzero integer exponents."""

    __slots__ = ("_exps", "_hash")

    def __init__(self, exponents: Mapping[int, int] | None = None):
        exps = {}
        for prime, k in (exponents or {}).items():
            k = int(k)
            if k:
                exps[int(prime)] = k
        self._exps = dict(sorted(exps.items()))
        self._hash = hash(tuple(self._exps.items()))

    @classmethod
    def one(cls) -> "Factored":
        return cls()

    @classmethod
    def prime_power(cls, p: int, k: int) -> "Factored":
        return cls({p: k})

    @classmethod
    def from_rational(cls, x: Rational) -> "Factored":
        x = Fraction(x)
        if x <= 0:
            raise ValueError("only positive rationals can be factored")
        exps: Dict[int, int] = {}
        for prime, k in factorint(x.numerator).items():
            exps[prime] = exps.get(prime, 0) + k
        for prime, k in factorint(x.denominator).items():
            exps[prime] = exps.get(prime, 0) - k
        return cls(exps)

    @property
    def exponents(self) -> Dict[int, int]:
        return dict(self._exps)

    def exponent(self, p: int) -> int:
        return self._exps.get(p, 0)

    @property
    def value(self) -> Fraction:
        num = den = 1
        for prime, k in self._exps.items():
            if k > 0:
                num *= prime**k
            else:
                den *= prime ** (-k)
        return Fraction(num, den)

    def is_integer(self) -> bool:
        # the empty product (value 1) counts as an integer
        return all(k > 0 for k in self._exps.values())

    def is_one(self) -> bool:
        return not self._exps

    def __mul__(self, other: "Factored") -> "Factored":
        exps = dict(self._exps)
        for prime, k in other._exps.items():
            exps[prime] = exps.get(prime, 0) + k
        return Factored(exps)

    def __truediv__(self, other: "Factored") -> "Factored":
        return self * other.inverse()

    def __pow__(self, k: int) -> "Factored":
        return Factored({prime: e * k for prime, e in self._exps.items()})

    def inverse(self) -> "Factored":
        return self**-1

    def divides(self, other: "Factored") -> bool:
        """True when ``other / self`` is a positive integer."""
        return (other / self).is_integer()

    def __eq__(self, other) -> bool:
        if isinstance(other, Factored):
            return self._exps == other._exps
        if isinstance(other, (int, Fraction)):
            return other > 0 and self.value == other
        return NotImplemented

    def __lt__(self, other: "Factored") -> bool:
        if isinstance(other, (int, Fraction)):
            other = Factored.from_rational(other)
        return self._log_key() < other._log_key()

    def _log_key(self):
        # exact comparison via the rational value; cheap for the sizes we see
        return self.value

    def __hash__(self) -> int:
        return self._hash

    def log(self) -> float:
        return sum(k * math.log(prime) for prime, k in self._exps.items())

    def factor_string(self) -> str:
        if not self._exps:
            return "1"
        return "*".join(f"{prime}" if k == 1 else f"{prime}^{k}" for prime, k in self._exps.items())

    def to_json(self) -> Dict[str, int]:
        return {str(prime): k for prime, k in self._exps.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "Factored":
        return cls({int(prime): int(k) for prime, k in data.items()})

    def __str__(self) -> str:
        return format_rational(self.value)

    def __repr__(self) -> str:
        return f"Factored({self.factor_string()})"


def product(values: Iterable[Factored]) -> Factored:
    out = Factored.one()
    for v in values:
        out = out * v
    return out


@total_ordering
class EntropyValue:
    """``log(x)`` for a factored positive rational ``x``, or +infinity.

    Addition merges factored forms, so equalities such as the inverse relation
    and the product formula are decided exactly.
    """

    __slots__ = ("argument", "infinite")

    def __init__(self, argument: Factored | None = None, infinite: bool = False):
        if infinite:
            argument = None
        elif argument is None:
            argument = Factored.one()
        self.argument = argument
        self.infinite = infinite

    @classmethod
    def log_of(cls, x) -> "EntropyValue":
        if not isinstance(x, Factored):
            x = Factored.from_rational(x)
        return cls(x)

    @classmethod
    def zero(cls) -> "EntropyValue":
        return cls(Factored.one())

    @classmethod
    def infinity(cls) -> "EntropyValue":
        return cls(infinite=True)

    def is_log_of_integer(self) -> bool:
        return not self.infinite and self.argument.is_integer()

    def __add__(self, other: "EntropyValue") -> "EntropyValue":
        if self.infinite or other.infinite:
            return EntropyValue.infinity()
        return EntropyValue(self.argument * other.argument)

    def __sub__(self, other: "EntropyValue") -> "EntropyValue":
        if other.infinite:
            raise ValueError("cannot subtract an infinite entropy")
        if self.infinite:
            return self
        return EntropyValue(self.argument / other.argument)

    def __mul__(self, k: int) -> "EntropyValue":
        if not isinstance(k, int) or k < 0:
            raise ValueError("entropies scale by nonnegative integers only")
        if self.infinite:
            return EntropyValue.zero() if k == 0 else self
        return EntropyValue(self.argument**k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, EntropyValue):
            return NotImplemented
        if self.infinite or other.infinite:
            return self.infinite == other.infinite
        return self.argument == other.argument

    def __lt__(self, other: "EntropyValue") -> bool:
        if self.infinite:
            return False
        if other.infinite:
            return True
        return self.argument < other.argument

    def __hash__(self) -> int:
        return hash(("inf",)) if self.infinite else hash(self.argument)

    def to_float(self) -> float:
        return math.inf if self.infinite else self.argument.log()

    def __str__(self) -> str:
        if self.infinite:
            return "inf"
        if self.argument.is_one():
            return "0"
        return f"log({self.argument})"

    def __repr__(self) -> str:
        return f"EntropyValue({self})"

    def to_json(self) -> dict:
        if self.infinite:
            return {"value": "inf", "infinite": True}
        return {
            "value": str(self),
            "argument": str(self.argument),
            "factors": self.argument.to_json(),
            "display": f"{self.to_float():.12f}",
        }
