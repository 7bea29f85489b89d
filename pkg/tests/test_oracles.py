from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import matrices, primes
from tdlc_entropy.errors import Singular
from tdlc_entropy.exact import EntropyValue, Factored
from tdlc_entropy.oracles import (
    NewtonPolygon,
    char_poly,
    entropy_oracle_padic,
    modulus_oracle_padic,
    scale_oracle_padic,
)

F = Fraction


def test_char_poly_examples():
    p = 5
    assert char_poly([[F(1, p), 0], [0, p]]) == [1, -(p + F(1, p)), 1]
    assert char_poly([[1, 0], [0, 1]]) == [1, -2, 1]
    assert char_poly([[0, F(1, p)], [1, 0]]) == [-F(1, p), 0, 1]


def test_newton_convention_on_linear_probes():
    # x - p has a root of valuation 1, x - 1/p one of valuation -1
    assert NewtonPolygon.of([-5, 1], 5).root_valuations() == [(1, 1)]
    assert NewtonPolygon.of([-F(1, 5), 1], 5).root_valuations() == [(-1, 1)]


def test_newton_polygon_half_integer_slopes():
    poly = NewtonPolygon.of([-F(1, 3), 0, 1], 3)
    assert poly.root_valuations() == [(F(-1, 2), 2)]
    assert poly.expanding_exponent() == 1


def test_entropy_oracle_examples():
    p = 7
    assert entropy_oracle_padic([[F(1, p), 0], [0, p]], p) == EntropyValue.log_of(p)
    assert entropy_oracle_padic([[1, 0], [0, 1]], p) == EntropyValue.zero()
    assert entropy_oracle_padic([[0, F(1, p)], [1, 0]], p) == EntropyValue.log_of(p)
    with pytest.raises(Singular):
        entropy_oracle_padic([[1, 2], [2, 4]], p)


def test_modulus_and_scale_oracle_examples():
    p = 3
    assert modulus_oracle_padic([[1]], p).is_one()
    assert modulus_oracle_padic([[F(1, p)]], p) == Factored.prime_power(p, 1)
    assert modulus_oracle_padic([[F(1, p), 0], [0, p]], p).is_one()
    assert scale_oracle_padic([[1]], p).is_one()
    assert scale_oracle_padic([[F(1, p), 0], [0, p]], p) == Factored.prime_power(p, 1)
    assert scale_oracle_padic([[p]], p).is_one()


@given(st.data())
def test_polygon_invariants(data):
    p = data.draw(primes)
    n = data.draw(st.integers(1, 4))
    A = data.draw(matrices(p, n))
    poly = NewtonPolygon.of(char_poly(A), p)
    slopes = [s for s, _ in poly.segments]
    assert slopes == sorted(set(slopes))
    assert sum(length for _, length in poly.segments) == n
    for s, length in poly.segments:
        assert (s * length).denominator == 1
    # the sum of all root valuations is v_p(det A)
    total = sum((v * k for v, k in poly.root_valuations()), F(0))
    assert modulus_oracle_padic(A, p) == Factored.prime_power(p, -int(total))
    assert entropy_oracle_padic(A, p).is_log_of_integer()
