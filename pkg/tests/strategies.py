"""Hypothesis strategies for rationals, lattices, matrices and cylinder subgroups."""

from fractions import Fraction

from hypothesis import strategies as st

from tdlc_entropy.finite_abelian import FinAbGroup, fa_canonicalize
from tdlc_entropy.lattice import determinant, hnf_normalize
from tdlc_entropy.padic import MatrixAutomorphism, PAdicUniverse
from tdlc_entropy.shift import ShiftAutomorphism, ShiftUniverse

primes = st.sampled_from([2, 3, 5])


@st.composite
def units(draw, p):
    a = draw(st.integers(1, 12).filter(lambda x: x % p))
    b = draw(st.integers(1, 12).filter(lambda x: x % p))
    return Fraction(draw(st.sampled_from([1, -1])) * a, b)


@st.composite
def rationals(draw, p, lo=-3, hi=3, zero=True):
    if zero and draw(st.integers(0, 9)) < 3:
        return Fraction(0)
    return draw(units(p)) * Fraction(p) ** draw(st.integers(lo, hi))


@st.composite
def matrices(draw, p, n, lo=-3, hi=3):
    A = [[draw(rationals(p, lo, hi)) for _ in range(n)] for _ in range(n)]
    if determinant(A) == 0:
        # fall back to adding a scalar so the draw stays usable
        for i in range(n):
            A[i][i] += Fraction(p) ** draw(st.integers(lo, hi))
    if determinant(A) == 0:
        A = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return A


@st.composite
def lattices(draw, p, n, spread=2):
    A = draw(matrices(p, n, -spread, spread))
    return hnf_normalize([[A[i][j] for i in range(n)] for j in range(n)], p, n)


@st.composite
def padic_automorphisms(draw, max_dim=3, lo=-2, hi=2):
    p = draw(primes)
    n = draw(st.integers(1, max_dim))
    return MatrixAutomorphism(PAdicUniverse(p, n), draw(matrices(p, n, lo, hi)))


@st.composite
def shift_automorphisms(draw, ms=(2, 3, 4), kmax=3):
    m = draw(st.sampled_from(ms))
    unit = draw(st.sampled_from([a for a in range(1, m) if __import__("math").gcd(a, m) == 1]))
    return ShiftAutomorphism(ShiftUniverse(m), draw(st.integers(-kmax, kmax)), unit)


@st.composite
def cylinders(draw, s: ShiftUniverse, span=4):
    coords = draw(st.lists(st.integers(-span, span), min_size=1, max_size=4, unique=True))
    proper = [d for d in range(2, s.m) if s.m % d == 0]
    zeros, others = [], {}
    for c in coords:
        if proper and draw(st.booleans()):
            others[c] = [draw(st.sampled_from(proper))]
        else:
            zeros.append(c)
    return s.cylinder(zeros, others)


finite_groups = st.lists(st.sampled_from([1, 2, 3, 4, 6, 8, 9]), min_size=1, max_size=3).map(FinAbGroup)


@st.composite
def fa_subgroups(draw, G):
    gens = draw(st.lists(st.lists(st.integers(0, 20), min_size=G.rank, max_size=G.rank), max_size=3))
    return fa_canonicalize(G, gens)
