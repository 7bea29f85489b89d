from fractions import Fraction

import pytest
from hypothesis import given, settings

from strategies import padic_automorphisms, shift_automorphisms
from tdlc_entropy.engine import (
    ALGORITHMS,
    cotrajectory,
    entropy_global,
    entropy_local,
    entropy_local_corollary,
    entropy_local_limit,
    entropy_local_limitfree,
    local_entropy,
    scale_estimate,
    trace_rows,
)
from tdlc_entropy.errors import CrossCheckMismatch, EmptyCandidates, MonotonicityViolation, NotStabilized
from tdlc_entropy.exact import EntropyValue, Factored
from tdlc_entropy.finite_abelian import FinAbGroup, FiniteAutomorphism, FiniteUniverse
from tdlc_entropy.lattice import diagonal_lattice
from tdlc_entropy.padic import padic_universe
from tdlc_entropy.shift import ShiftAutomorphism, ShiftUniverse
from tdlc_entropy.universe import product_automorphism

F = Fraction


def all_routes(phi, U, **kw):
    reports = entropy_local(phi, U, **kw)
    assert set(reports) == set(ALGORITHMS)
    return next(iter(reports.values())).value


@pytest.mark.parametrize("p", [2, 3, 5])
def test_identity_has_zero_entropy(p):
    u, ident = padic_universe(p, [[1, 0], [0, 1]])
    assert all_routes(ident, u.standard_subgroup()) == EntropyValue.zero()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_division_by_p_has_entropy_log_p(p):
    u, a = padic_universe(p, [[F(1, p)]])
    Z = u.standard_subgroup()
    assert all_routes(a, Z) == EntropyValue.log_of(p)
    assert all_routes(a.inverse(), Z) == EntropyValue.zero()


def test_limit_trace_for_division_by_p():
    p = 3
    u, a = padic_universe(p, [[F(1, p)]])
    rep = entropy_local_limit(a, u.standard_subgroup())
    assert [r.c_n.value for r in rep.trace[:3]] == [1, 3, 9]
    assert all(r.alpha_n.value == p for r in rep.trace)
    assert rep.cross_checks == (("oracle:padic", "agree"),)


def test_diagonal_and_swap():
    p = 5
    u, d = padic_universe(p, [[F(1, p), 0], [0, p]])
    assert all_routes(d, u.standard_subgroup()) == EntropyValue.log_of(p)
    u, s = padic_universe(p, [[0, F(1, p)], [1, 0]])
    Z = u.standard_subgroup()
    assert all_routes(s, Z) == EntropyValue.log_of(p)
    assert entropy_local_limit(s, Z).modulus == Factored.prime_power(p, 1)


def test_shift_examples():
    s = ShiftUniverse(2)
    sigma = ShiftAutomorphism(s, 1)
    U0 = s.cylinder([0])
    assert all_routes(sigma, U0) == EntropyValue.log_of(2)
    assert all_routes(sigma.inverse(), U0) == EntropyValue.log_of(2)
    assert cotrajectory(sigma, U0, 4) == s.window(0, 3)
    assert all_routes(ShiftAutomorphism(s, 0), U0) == EntropyValue.zero()
    with pytest.raises(ValueError):
        cotrajectory(sigma, U0, 0)


def test_cotrajectory_indices_of_the_shift():
    s = ShiftUniverse(3)
    sigma = ShiftAutomorphism(s, 1)
    U0 = s.cylinder([0])
    for n in range(1, 6):
        assert s.index(cotrajectory(sigma, U0, n), U0).value == 3 ** (n - 1)


def test_not_stabilized_carries_partial_trace():
    p = 5
    u, s = padic_universe(p, [[0, F(1, p)], [1, 0]])
    with pytest.raises(NotStabilized) as info:
        entropy_local_limit(s, u.standard_subgroup(), window=4, max_steps=3)
    assert len(info.value.partial) == 3
    with pytest.raises(NotStabilized) as info:
        trace_rows(s, u.standard_subgroup(), window=4, max_steps=3)
    assert info.value.partial


def test_window_must_be_at_least_two():
    u, a = padic_universe(3, [[F(1, 3)]])
    with pytest.raises(ValueError):
        entropy_local_limit(a, u.standard_subgroup(), window=1)


def test_broken_index_is_reported_as_monotonicity_violation(monkeypatch):
    s = ShiftUniverse(2)
    sigma = ShiftAutomorphism(s, 1)
    counts = iter([2, 8, 64, 1024])
    monkeypatch.setattr(ShiftUniverse, "index", lambda self, a, b: Factored.from_rational(next(counts)))
    with pytest.raises(MonotonicityViolation):
        entropy_local_limit(sigma, s.cylinder([0]), window=2)


def test_non_divisible_indices_are_rejected(monkeypatch):
    s = ShiftUniverse(2)
    sigma = ShiftAutomorphism(s, 1)
    counts = iter([2, 3, 6])
    monkeypatch.setattr(ShiftUniverse, "index", lambda self, a, b: Factored.from_rational(next(counts)))
    with pytest.raises(MonotonicityViolation):
        entropy_local_limit(sigma, s.cylinder([0]), window=2)


def test_oracle_disagreement_raises(monkeypatch):
    p = 3
    u, a = padic_universe(p, [[F(1, p)]])
    monkeypatch.setattr(type(u), "entropy_oracle", lambda self, phi, U: EntropyValue.log_of(7))
    with pytest.raises(CrossCheckMismatch):
        entropy_local_limitfree(a, u.standard_subgroup())
    rep = entropy_local_limitfree(a, u.standard_subgroup(), cross_check=False)
    assert rep.value == EntropyValue.log_of(p) and rep.cross_checks == ()


def test_unknown_algorithm():
    u, a = padic_universe(3, [[1]])
    with pytest.raises(ValueError):
        entropy_local(a, u.standard_subgroup(), algorithms=["guess"])


def test_global_examples():
    s3 = ShiftUniverse(3)
    g = entropy_global(ShiftAutomorphism(s3, 1))
    assert g.value == EntropyValue.log_of(3) and g.certified
    p = 5
    _, d = padic_universe(p, [[F(1, p), 0], [0, p]])
    s2 = ShiftUniverse(2)
    g = entropy_global(product_automorphism(d, ShiftAutomorphism(s2, 1)))
    assert g.value == EntropyValue.log_of(p) + EntropyValue.log_of(2)
    assert g.certified and g.method == "sum-of-factors" and len(g.components) == 2
    fu = FiniteUniverse(FinAbGroup([4, 6]))
    g = entropy_global(FiniteAutomorphism(fu, [[1, 0], [0, 5]]))
    assert g.value == EntropyValue.zero() and g.certified
    with pytest.raises(ValueError):
        entropy_global(ShiftAutomorphism(s3, 1), base_budget=0)


def test_global_of_a_wide_shift_is_k_log_m():
    s = ShiftUniverse(2)
    g = entropy_global(ShiftAutomorphism(s, 3), base_budget=8)
    assert g.value == EntropyValue.log_of(8) and g.certified


def test_scale_examples():
    p = 3
    u, d = padic_universe(p, [[F(1, p), 0], [0, p]])
    est = scale_estimate(d)
    assert est.value == Factored.prime_power(p, 1) and est.oracle_attained
    s = ShiftUniverse(2)
    est = scale_estimate(ShiftAutomorphism(s, 1), candidates=[s.cylinder([0])])
    assert est.value.is_one() and est.candidates == 2
    assert s.equal(est.argmin, s.whole_group())
    u1, a = padic_universe(p, [[1]])
    with pytest.raises(EmptyCandidates):
        scale_estimate(a, candidates=[])


def test_trace_rows_cover_stabilization_plus_window():
    p = 5
    u, sw = padic_universe(p, [[0, F(1, p)], [1, 0]])
    rows, stab = trace_rows(sw, u.standard_subgroup(), window=3)
    assert len(rows) == stab + 3
    assert [r.c_n.value for r in rows[:3]] == [1, 5, 25]
    assert all(r.alpha_n.value == p for r in rows)
    assert rows[-1].d_index.value == p


@settings(max_examples=40, deadline=None)
@given(padic_automorphisms(max_dim=2))
def test_routes_agree_with_oracle_on_padic(phi):
    Z = phi.universe.standard_subgroup()
    value = all_routes(phi, Z)
    assert value == phi.universe.entropy_oracle(phi, Z)
    assert value.is_log_of_integer()


@settings(max_examples=40, deadline=None)
@given(shift_automorphisms())
def test_routes_agree_on_shifts(psi):
    s = psi.universe
    U = s.window(0, max(abs(psi.k) - 1, 0))
    assert all_routes(psi, U) == EntropyValue.log_of(s.m ** abs(psi.k))


@settings(max_examples=30, deadline=None)
@given(padic_automorphisms(max_dim=2))
def test_lattice_independence_and_inverse_formula(phi):
    u = phi.universe
    Z = u.standard_subgroup()
    h = local_entropy(phi, Z)
    assert local_entropy(phi, diagonal_lattice(u.p, [1] + [-1] * (u.dim - 1))) == h
    # H(φ^{-1}) = H(φ) - log Δ(φ)
    assert local_entropy(phi.inverse(), Z) == h - EntropyValue(entropy_local_corollary(phi, Z).modulus)
