"""Universe-generic entropy algorithms.

Three routes to the local entropy ``H(φ, U)``, which must agree exactly:

``limit``
    ``c_n = [U : C_n(φ, U)]`` with ``C_n = U ∩ φ^{-1}U ∩ ... ∩ φ^{-n+1}U``.
    The ratios ``α_n = c_{n+1}/c_n`` are integers, non-increasing, and
    eventually constant; the entropy is ``log α``.

``limitfree``
    ``D_n = φ(C_n(φ^{-1}, U)) + U`` is a descending chain of subgroups whose
    index over ``U`` settles to ``[φ(C(φ^{-1},U)) : C(φ^{-1},U)]``; the entropy is
    the log of that index. The infinite intersection ``C(φ^{-1},U)`` is never
    built, only the finite stage at which the chain has stopped moving.

``corollary``
    The same chain for ``φ^{-1}``, plus ``log Δ(φ)``.

A run stops either at a proven bound supplied by the universe or after
``window`` consecutive equal terms; ``max_steps`` caps the work. When the
universe has an independent closed form the result is checked against it and a
disagreement raises :class:`CrossCheckMismatch` instead of returning a value.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import CrossCheckMismatch, EmptyCandidates, MonotonicityViolation, NotStabilized
from .exact import EntropyValue, Factored
from .finite_abelian import FiniteUniverse
from .oracles import scale_oracle_padic
from .padic import PAdicUniverse
from .shift import ShiftUniverse
from .universe import Automorphism, ProductUniverse, Universe, modulus

log = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 64
DEFAULT_BASE_BUDGET = 8

ALGORITHMS = ("limit", "limitfree", "corollary")


@dataclass(frozen=True)
class TraceRow:
    n: int
    c_n: Optional[Factored] = None
    alpha_n: Optional[Factored] = None
    d_index: Optional[Factored] = None

    def csv_fields(self) -> List[str]:
        return [str(self.n)] + ["" if v is None else str(v) for v in (self.c_n, self.alpha_n, self.d_index)]


@dataclass(frozen=True)
class EntropyReport:
    value: EntropyValue
    algorithm: str
    stabilized_at: int
    stop_rule: str  # "window" or "bound"
    alpha: Factored
    trace: Tuple[TraceRow, ...]
    cross_checks: Tuple[Tuple[str, str], ...] = ()
    modulus: Optional[Factored] = None
    first_constant_at: Optional[int] = None

    def to_json(self) -> dict:
        out = {
            "algorithm": self.algorithm,
            **self.value.to_json(),
            "alpha": str(self.alpha),
            "stabilized_at": self.stabilized_at,
            "stop_rule": self.stop_rule,
            "cross_checks": [list(c) for c in self.cross_checks],
        }
        if self.first_constant_at is not None:
            out["first_constant_at"] = self.first_constant_at
        if self.modulus is not None:
            out["modulus"] = str(self.modulus)
        return out


def cotrajectory(phi: Automorphism, U, n: int):
    """``C_n(φ, U) = U ∩ φ^{-1}(U) ∩ ... ∩ φ^{-n+1}(U)``."""
    if n < 1:
        raise ValueError("n must be positive")
    u = phi.universe
    C = P = U
    for _ in range(n - 1):
        P = phi.preimage(P)
        C = u.intersect(C, P)
    return C


def _stop_params(phi, U, window, max_steps):
    u = phi.universe
    bound = u.stabilization_bound(phi, U) if window is None else None
    if window is None:
        window = u.default_window(U)
    if window < 2:
        raise ValueError("window must be at least 2")
    return u, bound, window, max_steps


def _oracle_check(phi, U, value: EntropyValue, cross_check: bool) -> Tuple[Tuple[str, str], ...]:
    if not cross_check:
        return ()
    oracle = phi.universe.entropy_oracle(phi, U)
    if oracle is None:
        return ()
    name = f"oracle:{phi.universe.kind}"
    if oracle != value:
        raise CrossCheckMismatch(f"{name} gives {oracle} but the engine computed {value}")
    return ((name, "agree"),)


def entropy_local_limit(
    phi: Automorphism,
    U,
    window: Optional[int] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    cross_check: bool = True,
) -> EntropyReport:
    """``H(φ, U) = log α`` from the stabilized ratios of cotrajectory indices."""
    u, bound, window, max_steps = _stop_params(phi, U, window, max_steps)
    rows: List[TraceRow] = []
    C = P = U
    c_n = Factored.one()
    prev_alpha = None
    run_start, run_len = 1, 0
    for n in range(1, max_steps + 1):
        P = phi.preimage(P)  # φ^{-n}(U)
        C_next = u.intersect(C, P)
        c_next = u.index(C_next, U)
        alpha = c_next / c_n
        if not alpha.is_integer():
            raise MonotonicityViolation(f"c_{n}={c_n} does not divide c_{n + 1}={c_next}")
        if prev_alpha is not None and prev_alpha < alpha:
            raise MonotonicityViolation(f"alpha_{n}={alpha} exceeds alpha_{n - 1}={prev_alpha}")
        rows.append(TraceRow(n, c_n, alpha, None))
        if alpha == prev_alpha:
            run_len += 1
        else:
            run_start, run_len = n, 1
        prev_alpha = alpha
        C, c_n = C_next, c_next
        if bound is not None:
            if n == bound:
                return _finish_limit(phi, U, alpha, bound, "bound", rows, cross_check, first=run_start)
        elif run_len >= window:
            return _finish_limit(phi, U, alpha, run_start, "window", rows, cross_check)
    raise NotStabilized(f"alpha_n did not stabilize within {max_steps} steps", partial=rows)


def _finish_limit(phi, U, alpha, stabilized_at, rule, rows, cross_check, first=None):
    value = EntropyValue(alpha)
    log.debug("limit algorithm: alpha=%s stabilized at n=%s (%s)", alpha, stabilized_at, rule)
    return EntropyReport(
        value=value,
        algorithm="limit",
        stabilized_at=stabilized_at,
        stop_rule=rule,
        alpha=alpha,
        trace=tuple(rows),
        cross_checks=_oracle_check(phi, U, value, cross_check),
        modulus=modulus(phi, U),
        first_constant_at=first,
    )


def _descending_chain(phi: Automorphism, U, window, max_steps, bound):
    """Stabilized ``[D : U]`` for ``D_n = φ(C_n(φ^{-1}, U)) + U``; returns (index, n, rule, rows, first)."""
    u = phi.universe
    rows: List[TraceRow] = []
    Cinv = Q = U  # Q = φ^{n-1}(U)
    prev_D = None
    run_start, run_len = 1, 0
    for n in range(1, max_steps + 1):
        if n > 1:
            Q = phi.image(Q)
            Cinv = u.intersect(Cinv, Q)
        D = u.sum(phi.image(Cinv), U)
        d = u.index(U, D)
        rows.append(TraceRow(n, None, None, d))
        if prev_D is not None and u.equal(D, prev_D):
            run_len += 1
        else:
            if prev_D is not None and not u.contains(D, prev_D):
                raise MonotonicityViolation(f"D_{n} is not contained in D_{n - 1}")
            run_start, run_len = n, 1
        prev_D = D
        if bound is not None:
            if n == bound:
                return d, bound, "bound", rows, run_start
        elif run_len >= window:
            return d, run_start, "window", rows, None
    raise NotStabilized(f"D_n did not stabilize within {max_steps} steps", partial=rows)


def entropy_local_limitfree(
    phi: Automorphism,
    U,
    window: Optional[int] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    cross_check: bool = True,
) -> EntropyReport:
    """``H(φ, U) = log [φ(C(φ^{-1},U)) : C(φ^{-1},U)]`` via the stabilized chain ``D_n``."""
    u, bound, window, max_steps = _stop_params(phi, U, window, max_steps)
    d, n, rule, rows, first = _descending_chain(phi, U, window, max_steps, bound)
    value = EntropyValue(d)
    return EntropyReport(
        value=value,
        algorithm="limitfree",
        stabilized_at=n,
        stop_rule=rule,
        alpha=d,
        trace=tuple(rows),
        cross_checks=_oracle_check(phi, U, value, cross_check),
        modulus=modulus(phi, U),
        first_constant_at=first,
    )


def entropy_local_corollary(
    phi: Automorphism,
    U,
    window: Optional[int] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    cross_check: bool = True,
) -> EntropyReport:
    """``H(φ, U) = log [φ^{-1}(C(φ,U)) : C(φ,U)] + log Δ(φ)``."""
    inv = phi.inverse()
    u, bound, window, max_steps = _stop_params(inv, U, window, max_steps)
    d, n, rule, rows, first = _descending_chain(inv, U, window, max_steps, bound)
    delta = modulus(phi, U)
    value = EntropyValue(d * delta)
    if not value.is_log_of_integer():
        raise MonotonicityViolation(f"corollary route produced log({value.argument}), not the log of an integer")
    return EntropyReport(
        value=value,
        algorithm="corollary",
        stabilized_at=n,
        stop_rule=rule,
        alpha=d * delta,
        trace=tuple(rows),
        cross_checks=_oracle_check(phi, U, value, cross_check),
        modulus=delta,
        first_constant_at=first,
    )


_ROUTES = {
    "limit": entropy_local_limit,
    "limitfree": entropy_local_limitfree,
    "corollary": entropy_local_corollary,
}


def entropy_local(
    phi: Automorphism,
    U,
    algorithms: Sequence[str] = ALGORITHMS,
    window: Optional[int] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    cross_check: bool = True,
) -> dict:
    """Run the selected routes and insist that they agree."""
    reports = {}
    for name in algorithms:
        if name not in _ROUTES:
            raise ValueError(f"unknown algorithm {name!r}")
        reports[name] = _ROUTES[name](phi, U, window=window, max_steps=max_steps, cross_check=cross_check)
    values = {r.value for r in reports.values()}
    if len(values) > 1:
        detail = ", ".join(f"{k}={r.value}" for k, r in reports.items())
        raise CrossCheckMismatch(f"entropy algorithms disagree: {detail}")
    return reports


def local_entropy(phi: Automorphism, U, **kw) -> EntropyValue:
    """Shorthand: the limit-free value of ``H(φ, U)``."""
    return entropy_local_limitfree(phi, U, **kw).value


# -- global entropy ------------------------------------------------------------


@dataclass(frozen=True)
class GlobalEntropy:
    value: EntropyValue
    certified: bool
    method: str
    evaluated: int = 0
    components: Tuple["GlobalEntropy", ...] = field(default=())

    def to_json(self) -> dict:
        out = {**self.value.to_json(), "certified": self.certified, "method": self.method, "evaluated": self.evaluated}
        if self.components:
            out["components"] = [c.to_json() for c in self.components]
        return out


def entropy_global(
    phi: Automorphism,
    base_budget: int = DEFAULT_BASE_BUDGET,
    window: Optional[int] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> GlobalEntropy:
    """``h_top(φ)``, the supremum of ``H(φ, U)`` over a local base of compact open subgroups."""
    if base_budget < 1:
        raise ValueError("base_budget must be at least 1")
    u = phi.universe
    kw = dict(window=window, max_steps=max_steps)
    if isinstance(u, ProductUniverse):
        parts = tuple(entropy_global(a, base_budget, **kw) for a in phi.factors)
        total = EntropyValue.zero()
        for part in parts:
            total = total + part.value
        return GlobalEntropy(
            total, all(p.certified for p in parts), "sum-of-factors", sum(p.evaluated for p in parts), parts
        )
    if isinstance(u, PAdicUniverse):
        h = local_entropy(phi, u.standard_subgroup(), **kw)
        base = u.base(base_budget)
        for L in base[1:]:
            other = local_entropy(phi, L, **kw)
            if other != h:
                raise CrossCheckMismatch(f"H(phi, U) is not constant over lattices: {h} vs {other} at {L!r}")
        return GlobalEntropy(h, True, "standard-lattice", len(base))
    if isinstance(u, ShiftUniverse):
        # every compact open subgroup contains a zero window, H is antitone, and
        # H(σ^k ψ, U) <= |k| log m with equality on windows of width >= |k|
        ceiling = EntropyValue(Factored.from_rational(u.m) ** abs(phi.k))
        best = EntropyValue.zero()
        base = u.base(base_budget)
        for S in base:
            best = max(best, local_entropy(phi, S, **kw))
        return GlobalEntropy(best, best == ceiling, "cylinder-base", len(base))
    if isinstance(u, FiniteUniverse):
        h = local_entropy(phi, u.standard_subgroup(), **kw)
        return GlobalEntropy(h, True, "trivial-subgroup", 1)
    best = EntropyValue.zero()
    base = u.base(base_budget)
    for S in base:
        best = max(best, local_entropy(phi, S, **kw))
    return GlobalEntropy(best, False, "base-maximum", len(base))


# -- scale ---------------------------------------------------------------------


@dataclass(frozen=True)
class ScaleEstimate:
    value: Factored
    argmin: object
    candidates: int
    oracle: Optional[Factored] = None

    @property
    def oracle_attained(self) -> Optional[bool]:
        return None if self.oracle is None else self.value == self.oracle

    def to_json(self, universe: Universe) -> dict:
        out = {
            "value": str(self.value),
            "factors": self.value.to_json(),
            "log": str(EntropyValue(self.value)),
            "candidates": self.candidates,
            "argmin": universe.subgroup_to_json(self.argmin),
        }
        if self.oracle is not None:
            out["oracle"] = str(self.oracle)
            out["oracle_attained"] = self.oracle_attained
        return out


def scale_estimate(
    phi: Automorphism,
    candidates: Optional[Iterable] = None,
    base_budget: int = DEFAULT_BASE_BUDGET,
    window: Optional[int] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> ScaleEstimate:
    """Minimum of ``[φ(C(φ^{-1},U)) : C(φ^{-1},U)]`` over the candidate subgroups.

    An upper bound for the scale of ``φ``; it equals the scale when the
    candidates include a subgroup minimizing the index.
    """
    u = phi.universe
    cands = list(candidates) if candidates is not None else u.base(base_budget)
    if u.is_compact:
        whole = u.whole_group()
        if not any(u.equal(whole, c) for c in cands):
            cands.append(whole)
    if not cands:
        raise EmptyCandidates("scale estimate needs at least one candidate subgroup")
    best = None
    for U in cands:
        d = entropy_local_limitfree(phi, U, window=window, max_steps=max_steps).alpha
        if best is None or d < best[0]:
            best = (d, U)
    oracle = scale_oracle_padic(phi.matrix, u.p) if isinstance(u, PAdicUniverse) else None
    return ScaleEstimate(best[0], best[1], len(cands), oracle)


# -- combined trace ------------------------------------------------------------


def trace_rows(
    phi: Automorphism,
    U,
    window: Optional[int] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> Tuple[List[TraceRow], Optional[int]]:
    """Rows ``(n, c_n, alpha_n, d_index)`` for ``n = 1 .. stabilized + window``.

    Returns ``(rows, stabilized_at)``; on failure raises :class:`NotStabilized`
    carrying the rows computed so far.
    """
    u, bound, window, max_steps = _stop_params(phi, U, window, max_steps)
    w = window if bound is None else None
    limit = entropy_local_limit(phi, U, window=w, max_steps=max_steps, cross_check=False)
    chain = entropy_local_limitfree(phi, U, window=w, max_steps=max_steps, cross_check=False)
    stabilized = max(limit.stabilized_at, chain.stabilized_at)
    last = min(stabilized + window, max_steps)
    return _joint_rows(phi, U, last), stabilized


def _joint_rows(phi: Automorphism, U, last: int) -> List[TraceRow]:
    u = phi.universe
    rows = []
    C = P = U
    c_n = Factored.one()
    Cinv = Q = U
    for n in range(1, last + 1):
        P = phi.preimage(P)
        C_next = u.intersect(C, P)
        c_next = u.index(C_next, U)
        if n > 1:
            Q = phi.image(Q)
            Cinv = u.intersect(Cinv, Q)
        D = u.sum(phi.image(Cinv), U)
        rows.append(TraceRow(n, c_n, c_next / c_n, u.index(U, D)))
        C, c_n = C_next, c_next
    return rows
