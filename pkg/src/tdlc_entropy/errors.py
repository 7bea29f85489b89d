"""Exception hierarchy shared by every module of the package."""


class EntropyError(Exception):
    """Base class for all errors raised by tdlc_entropy."""


class BadPrime(EntropyError, ValueError):
    pass


class BadModulus(EntropyError, ValueError):
    pass


class RankDeficient(EntropyError, ValueError):
    """Generators do not span a full-rank lattice."""


class MixedUniverse(EntropyError, ValueError):
    """Operands live in different universes (prime, dimension or modulus mismatch)."""


class NotContained(EntropyError, ValueError):
    """An index [sup : sub] was requested but sub is not a subgroup of sup."""


class Singular(EntropyError, ValueError):
    pass


class DimMismatch(EntropyError, ValueError):
    pass


class ParentMismatch(EntropyError, ValueError):
    pass


class NotAutomorphism(EntropyError, ValueError):
    pass


class NotInvariant(EntropyError, ValueError):
    """The subgroup to restrict to / quotient by is not invariant under the automorphism."""


class EmptyCandidates(EntropyError, ValueError):
    pass


class NotStabilized(EntropyError):
    """A stabilizing sequence did not settle within ``max_steps``.

    ``partial`` carries whatever trace rows were computed, so callers can still
    export them.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial or []


class MonotonicityViolation(EntropyError, AssertionError):
    """c_n does not divide c_{n+1}, alpha increased, or a chain failed to descend.

    These conditions are theorems; seeing one means the calculus is broken.
    """


class CrossCheckMismatch(EntropyError):
    """An engine value disagrees with an independent oracle."""


class InvalidInstance(EntropyError, ValueError):
    """Malformed instance file (schema violation, bad rational, unknown kind)."""
