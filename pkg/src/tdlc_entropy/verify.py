"""Seeded property-verification suites.

Every check evaluates both sides of an identity or inequality exactly. A failed
case is recorded as data (never raised) together with a replayable witness: an
instance document that the CLI can load, plus a ``witness`` block naming the
extra objects the check used.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .engine import (
    cotrajectory,
    entropy_global,
    entropy_local,
    entropy_local_limit,
    entropy_local_limitfree,
    scale_estimate,
)
from .errors import EntropyError
from .exact import EntropyValue, format_rational
from .finite_abelian import (
    FinAbGroup,
    FinAbSubgroup,
    FiniteAutomorphism,
    FiniteUniverse,
    enumerate_cosets,
    fa_canonicalize,
    fa_contains,
    fa_index,
    fa_join,
    fa_meet,
)
from .lattice import (
    Lattice,
    determinant,
    hnf_normalize,
    is_sublattice,
    lattice_index,
    lattice_intersect,
    lattice_sum,
    standard_lattice,
)
from .oracles import coset_count, modulus_oracle_padic, scale_oracle_padic, smith_index
from .padic import MatrixAutomorphism, PAdicUniverse
from .shift import CylinderSubgroup, ShiftAutomorphism, ShiftUniverse
from .subquotients import invariant_subquotient, quotient_by_compact_factor
from .universe import Automorphism, modulus, product_automorphism

log = logging.getLogger(__name__)

SUITES = (
    "gi-laws",
    "lemma-logalpha",
    "algorithms-agree",
    "inverse-modulus",
    "conjugation",
    "antitone",
    "loglaw",
    "monotonicity",
    "inverse-limit",
    "weak-addition",
    "scale-inequality",
)

DEFAULT_COUNTS = {
    "gi-laws": 200,
    "lemma-logalpha": 200,
    "algorithms-agree": 200,
    "inverse-modulus": 50,
    "conjugation": 50,
    "antitone": 50,
    "loglaw": 30,
    "monotonicity": 30,
    "inverse-limit": 10,
    "weak-addition": 30,
    "scale-inequality": 50,
}

HORIZON = 6  # finite n up to which cotrajectory identities are compared


# -- results -------------------------------------------------------------------


@dataclass
class CheckResult:
    suite: str
    check: str
    cases: int = 0
    failures: int = 0
    detail: str = ""
    witness: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, detail: str = "", witness: Optional[Callable[[], dict]] = None):
        self.cases += 1
        if ok:
            return
        self.failures += 1
        if self.witness is None:
            self.detail = detail
            self.witness = witness() if witness else None
            log.info("%s/%s failed: %s", self.suite, self.check, detail)

    def to_json(self) -> dict:
        out = {"suite": self.suite, "check": self.check, "cases": self.cases, "failures": self.failures,
               "passed": self.passed}
        if not self.passed:
            out["detail"] = self.detail
            out["witness"] = self.witness
        return out


@dataclass
class VerifyReport:
    seed: int
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {"seed": self.seed, "passed": self.passed, "checks": [r.to_json() for r in self.results]}

    def lines(self) -> List[str]:
        out = []
        for r in self.results:
            verdict = "PASS" if r.passed else "FAIL"
            line = f"{verdict} {r.suite}/{r.check}: {r.cases - r.failures}/{r.cases}"
            if not r.passed:
                line += f" ({r.detail})"
            out.append(line)
        out.append(f"{'PASS' if self.passed else 'FAIL'} overall (seed {self.seed})")
        return out


def _witness(phi: Automorphism, U=None, **extra) -> dict:
    u = phi.universe
    doc = {
        "universe": u.describe(),
        "automorphism": phi.describe(),
        "subgroup": u.subgroup_to_json(U if U is not None else u.standard_subgroup()),
        "op": "entropy",
    }
    if extra:
        doc["witness"] = extra
    return doc


def _rows(A) -> list:
    return [[format_rational(x) for x in row] for row in A]


# -- random instances ------------------------------------------------------------


class RandomInstances:
    """Deterministic generator of desk-scale random instances."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def prime(self) -> int:
        return self.rng.choice((2, 3, 5))

    def unit(self, p: int, bound: int = 7) -> Fraction:
        while True:
            a, b = self.rng.randint(1, bound), self.rng.randint(1, bound)
            if a % p and b % p:
                return Fraction(self.rng.choice((1, -1)) * a, b)

    def entry(self, p: int, lo: int = -3, hi: int = 3, zero: float = 0.3) -> Fraction:
        if self.rng.random() < zero:
            return Fraction(0)
        return self.unit(p) * Fraction(p) ** self.rng.randint(lo, hi)

    def matrix(self, p: int, n: int, lo: int = -3, hi: int = 3, zero: float = 0.3):
        while True:
            A = [[self.entry(p, lo, hi, zero) for _ in range(n)] for _ in range(n)]
            if determinant(A) != 0:
                return A

    def padic(self, n: Optional[int] = None, p: Optional[int] = None, lo: int = -3, hi: int = 3) -> MatrixAutomorphism:
        p = p or self.prime()
        n = n or self.rng.randint(1, 4)
        return MatrixAutomorphism(PAdicUniverse(p, n), self.matrix(p, n, lo, hi))

    def block_triangular(self, lo: int = -2, hi: int = 2):
        p = self.prime()
        n = self.rng.randint(2, 4)
        k = self.rng.randint(1, n - 1)
        while True:
            A = [[self.entry(p, lo, hi) for _ in range(n)] for _ in range(n)]
            for i in range(k, n):
                for j in range(k):
                    A[i][j] = Fraction(0)
            if determinant(A) != 0:
                return MatrixAutomorphism(PAdicUniverse(p, n), A), k

    def lattice(self, u: PAdicUniverse, spread: int = 2) -> Lattice:
        cols = self.matrix(u.p, u.dim, -spread, spread, zero=0.4)
        return hnf_normalize([[cols[i][j] for i in range(u.dim)] for j in range(u.dim)], u.p, u.dim)

    def sublattice(self, L: Lattice, depth: int = 2) -> Lattice:
        """``L·M`` for a random upper triangular integer ``M`` with diagonal powers of ``p``."""
        n = L.dim
        M = [[0] * n for _ in range(n)]
        for j in range(n):
            M[j][j] = L.p ** self.rng.randint(0, depth)
            for i in range(j):
                M[i][j] = self.rng.randint(-3, 3)
        cols = [[sum(L.columns[i][r] * M[i][j] for i in range(n)) for r in range(n)] for j in range(n)]
        return hnf_normalize(cols, L.p, n)

    def shift(self, m: Optional[int] = None, kmax: int = 3) -> ShiftAutomorphism:
        m = m or self.rng.choice((2, 3, 4))
        units = [a for a in range(1, m) if math.gcd(a, m) == 1]
        return ShiftAutomorphism(ShiftUniverse(m), self.rng.randint(-kmax, kmax), self.rng.choice(units))

    def cylinder(self, s: ShiftUniverse, span: int = 3) -> CylinderSubgroup:
        coords = [c for c in range(-span, span + 1) if self.rng.random() < 0.4] or [self.rng.randint(-span, span)]
        zeros, others = [], {}
        proper = [d for d in range(2, s.m) if s.m % d == 0]
        for c in coords:
            if proper and self.rng.random() < 0.3:
                others[c] = [self.rng.choice(proper)]
            else:
                zeros.append(c)
        return s.cylinder(zeros, others)

    def finite_group(self) -> FinAbGroup:
        return FinAbGroup([self.rng.choice((2, 3, 4, 6, 8, 9, 12)) for _ in range(self.rng.randint(1, 3))])

    def fa_subgroup(self, G: FinAbGroup) -> FinAbSubgroup:
        gens = [[self.rng.randint(0, 11) for _ in range(G.rank)] for _ in range(self.rng.randint(0, 2))]
        return fa_canonicalize(G, gens)


def _H(phi, U) -> EntropyValue:
    return entropy_local_limitfree(phi, U).value


def _h(phi, budget: int = 3) -> EntropyValue:
    return entropy_global(phi, base_budget=budget).value


def _run(check: CheckResult, fn: Callable[[], tuple]):
    """Evaluate one case; engine errors count as failures."""
    try:
        ok, detail, witness = fn()
    except EntropyError as exc:
        check.record(False, f"{type(exc).__name__}: {exc}", None)
        return
    check.record(ok, detail, witness)


# -- suites --------------------------------------------------------------------


def suite_gi_laws(gen: RandomInstances, count: int) -> List[CheckResult]:
    S = "gi-laws"
    la, lb, lc, lo, lalg = (CheckResult(S, n) for n in (
        "lattice-gi-a", "lattice-gi-b", "lattice-gi-c", "lattice-index-oracles", "lattice-algebra"))
    fa, fb, fc, fd, fo = (CheckResult(S, n) for n in (
        "finite-gi-a", "finite-gi-b", "finite-gi-c", "finite-gi-d", "finite-index-oracle"))
    conf = CheckResult(S, "universe-conformance")

    def lat_w(*Ls):
        return lambda: {"witness": {"lattices": [[[format_rational(x) for x in r] for r in L.basis] for L in Ls],
                                    "p": Ls[0].p}}

    def oracle_check(sub, sup):
        idx = lattice_index(sub, sup)
        ok = smith_index(sub, sup) == idx
        cc = coset_count(sub, sup)
        if cc is not None:
            ok = ok and cc == idx.value
        lo.record(ok, f"index oracles disagree on {idx}", lat_w(sub, sup))

    for _ in range(count):
        u = PAdicUniverse(gen.prime(), gen.rng.randint(1, 3))
        L0 = gen.lattice(u, 1)
        L1 = gen.sublattice(L0, 1)
        L2 = gen.sublattice(L1, 1)
        lhs, rhs = lattice_index(L2, L0), lattice_index(L2, L1) * lattice_index(L1, L0)
        la.record(lhs == rhs, f"[L0:L2]={lhs} but product {rhs}", lat_w(L0, L1, L2))
        oracle_check(L2, L0)
        oracle_check(L1, L0)

        K, H = gen.lattice(u, 1), gen.lattice(u, 1)
        meet, join = lattice_intersect(K, H), lattice_sum(K, H)
        g1, g2, g3 = u.generalized_index(K, H), lattice_index(meet, K), lattice_index(H, join)
        lb.record(g1 == g2 == g3, f"{g1}, {g2}, {g3}", lat_w(K, H))
        oracle_check(meet, K)
        alg = (
            is_sublattice(meet, K) and is_sublattice(meet, H) and is_sublattice(K, join) and is_sublattice(H, join)
            and meet == lattice_intersect(H, K) and join == lattice_sum(H, K)
            and lattice_intersect(K, K) == K and lattice_sum(K, K) == K
        )
        lalg.record(alg, "meet/join laws", lat_w(K, H))

        Hs = gen.sublattice(K, 2)
        Lr = gen.lattice(u, 2)
        big, small = lattice_index(Hs, K), lattice_index(lattice_intersect(Hs, Lr), lattice_intersect(K, Lr))
        lc.record(not big < small, f"[K:H]={big} < [K∩L:H∩L]={small}", lat_w(K, Hs, Lr))

        G = gen.finite_group()

        def fw(*subs):
            return lambda: {"witness": {"group": G.to_json(), "subgroups": [[list(g) for g in s.generators] for s in subs]}}

        K = gen.fa_subgroup(G)
        H = fa_meet(K, gen.fa_subgroup(G))
        W = G.whole()
        lhs, rhs = fa_index(H, W), fa_index(K, W) * fa_index(H, K)
        fa.record(lhs == rhs, f"{lhs} vs {rhs}", fw(K, H))
        Lf = gen.fa_subgroup(G)
        lhs, rhs = fa_index(H, fa_join(Lf, H)), fa_index(fa_meet(H, Lf), Lf)
        fb.record(lhs == rhs, f"[L+H:H]={lhs} vs [L:H∩L]={rhs}", fw(Lf, H))
        big, small = fa_index(H, K), fa_index(fa_meet(H, Lf), fa_meet(K, Lf))
        fc.record(not big < small, f"{big} < {small}", fw(K, H, Lf))
        N = fa_meet(H, gen.fa_subgroup(G))
        Q = G.quotient(N)
        qK, qH = fa_canonicalize(Q, K.generators), fa_canonicalize(Q, H.generators)
        lhs, rhs = fa_index(H, K), fa_index(qH, qK)
        fd.record(lhs == rhs and fa_contains(qH, qK), f"[K:H]={lhs} vs [qK:qH]={rhs}", fw(K, H, N))
        if G.order <= 10**4:
            fo.record(enumerate_cosets(H, K) == fa_index(H, K).value, "coset enumeration disagrees", fw(K, H))

    # inverse bijection and base membership for every universe kind
    for _ in range(max(1, count // 10)):
        phi = gen.padic(lo=-2, hi=2)
        u = phi.universe
        for L in [gen.lattice(u)] + u.base(4):
            conf.record(phi.preimage(phi.image(L)) == L and phi.image(phi.preimage(L)) == L
                        and isinstance(L, Lattice), "p-adic round trip", lambda: _witness(phi, L))
        psi = gen.shift()
        s = psi.universe
        for C in [gen.cylinder(s)] + s.base(4):
            conf.record(psi.preimage(psi.image(C)) == C and s.contains(C, s.whole_group()),
                        "shift round trip", lambda: _witness(psi, C))
        eta = product_automorphism(phi, psi)
        for P in eta.universe.base(6):
            conf.record(eta.universe.equal(eta.preimage(eta.image(P)), P), "product round trip",
                        lambda: _witness(eta, P))
        G = FinAbGroup([gen.rng.choice((4, 6, 8))] * 2)
        fu = FiniteUniverse(G)
        D = G.moduli[0]
        fin = FiniteAutomorphism(fu, [[1, 1], [0, 1]] if gen.rng.random() < 0.5 else [[1, 0], [0, D - 1]])
        X = gen.fa_subgroup(G)
        conf.record(fin.preimage(fin.image(X)) == X, "finite round trip", lambda: _witness(fin, X))
    return [la, lb, lc, lo, lalg, fa, fb, fc, fd, fo, conf]


def _check_trace(report) -> bool:
    prev_c, prev_a = None, None
    for row in report.trace:
        if prev_c is not None and not (row.c_n / prev_c).is_integer():
            return False
        if prev_a is not None and prev_a < row.alpha_n:
            return False
        prev_c, prev_a = row.c_n, row.alpha_n
    return True


def suite_ratio_trace(gen: RandomInstances, count: int) -> List[CheckResult]:
    padic, shift = CheckResult("lemma-logalpha", "padic-trace"), CheckResult("lemma-logalpha", "shift-trace")
    for _ in range(count):
        phi = gen.padic()
        U = standard_lattice(phi.p, phi.universe.dim)
        _run(padic, lambda: (_check_trace(entropy_local_limit(phi, U, cross_check=False)), "trace", lambda: _witness(phi, U)))
    for _ in range(max(1, count // 4)):
        psi = gen.shift()
        C = gen.cylinder(psi.universe)
        _run(shift, lambda: (_check_trace(entropy_local_limit(psi, C, cross_check=False)), "trace", lambda: _witness(psi, C)))
    return [padic, shift]


def _agree(phi, U):
    reports = entropy_local(phi, U, cross_check=False)
    values = {name: r.value for name, r in reports.items()}
    oracle = phi.universe.entropy_oracle(phi, U)
    if oracle is not None:
        values["oracle"] = oracle
    ok = len(set(values.values())) == 1
    return ok, ", ".join(f"{k}={v}" for k, v in values.items()), lambda: _witness(phi, U)


def suite_algorithms_agree(gen: RandomInstances, count: int) -> List[CheckResult]:
    padic, shift = CheckResult("algorithms-agree", "padic"), CheckResult("algorithms-agree", "shift")
    for i in range(count):
        phi = gen.padic()
        U = phi.universe.standard_subgroup() if i % 2 == 0 else gen.lattice(phi.universe)
        _run(padic, lambda: _agree(phi, U))
    for _ in range(max(1, count // 4)):
        psi = gen.shift()
        C = gen.cylinder(psi.universe)
        _run(shift, lambda: _agree(psi, C))
    return [padic, shift]


def suite_inverse_modulus(gen: RandomInstances, count: int) -> List[CheckResult]:
    S = "inverse-modulus"
    inv, mult, indep, index_law, compact = (CheckResult(S, n) for n in (
        "inverse-relation", "modulus-multiplicative", "modulus-independent-of-U", "modulus-index-law",
        "compact-modulus-one"))

    def inverse_case(phi, U):
        lhs = _H(phi.inverse(), U)
        rhs = _H(phi, U) - EntropyValue(modulus(phi, U))
        return lhs == rhs, f"H(phi^-1,U)={lhs} but H(phi,U)-log Delta={rhs}", lambda: _witness(phi, U)

    for _ in range(count):
        phi = gen.padic()
        u = phi.universe
        U = gen.lattice(u)
        _run(inv, lambda: inverse_case(phi, U))

        psi = MatrixAutomorphism(u, gen.matrix(u.p, u.dim))
        Z = u.standard_subgroup()
        d_phi, d_psi = modulus(phi, Z), modulus(psi, Z)
        ok = modulus(phi.compose(psi), Z) == d_phi * d_psi and modulus(phi.inverse(), Z) == d_phi.inverse()
        mult.record(ok, "Delta is not multiplicative", lambda: _witness(phi, Z, other=_rows(psi.matrix)))

        values = {modulus(phi, gen.lattice(u)) for _ in range(10)} | {modulus_oracle_padic(phi.matrix, u.p)}
        indep.record(len(values) == 1, f"modulus values {sorted(map(str, values))}", lambda: _witness(phi, U))

        V = gen.sublattice(lattice_intersect(U, phi.image(U)), 2)
        lhs, rhs = lattice_index(V, phi.image(U)), lattice_index(V, U) * modulus(phi, U)
        index_law.record(lhs == rhs, f"[phi(U):V]={lhs} vs [U:V]*Delta={rhs}",
                       lambda: _witness(phi, U, V=u.subgroup_to_json(V)))

    for _ in range(max(20, count // 2)):
        psi = gen.shift()
        C = gen.cylinder(psi.universe)
        compact.record(modulus(psi, C).is_one(), "Delta != 1 on a compact group", lambda: _witness(psi, C))
        _run(inv, lambda: inverse_case(psi, C))
    return [inv, mult, indep, index_law, compact]


def suite_conjugation(gen: RandomInstances, count: int) -> List[CheckResult]:
    glob, local = CheckResult("conjugation", "global"), CheckResult("conjugation", "local")
    for i in range(count):
        if i % 5 == 4:
            phi = gen.shift()
            xi = gen.shift(m=phi.universe.m)
            U = gen.cylinder(phi.universe)
        else:
            phi = gen.padic(n=gen.rng.randint(1, 3), lo=-2, hi=2)
            u = phi.universe
            xi = MatrixAutomorphism(u, gen.matrix(u.p, u.dim, -1, 1))
            U = gen.lattice(u)
        conj = xi.compose(phi).compose(xi.inverse())
        w = lambda: _witness(phi, U, xi=xi.describe())
        _run(glob, lambda: ((a := _h(phi)) == (b := _h(conj)), f"h(phi)={a} vs h(conj)={b}", w))
        _run(local, lambda: ((a := _H(phi, U)) == (b := _H(conj, xi.image(U))), f"{a} vs {b}", w))
    return [glob, local]


def suite_antitone(gen: RandomInstances, count: int) -> List[CheckResult]:
    chk = CheckResult("antitone", "nested-chains")

    def chain_case(phi, chain):
        u = phi.universe
        values = [_H(phi, U) for U in chain]
        nested = all(u.contains(a, b) for a, b in zip(chain, chain[1:]))
        ok = nested and all(not a < b for a, b in zip(values, values[1:]))
        return ok, f"values along chain {[str(v) for v in values]}", lambda: _witness(
            phi, chain[0], chain=[u.subgroup_to_json(U) for U in chain])

    for i in range(count):
        if i % 2 == 0:
            phi = gen.padic(n=gen.rng.randint(1, 3), lo=-2, hi=2)
            u = phi.universe
            U0 = gen.lattice(u)
            chain = [U0]
            for _ in range(3):
                chain.append(lattice_sum(chain[-1], gen.lattice(u)))
        else:
            phi = gen.shift()
            s = phi.universe
            if i % 4 == 1:  # a chain taken from the enumerated base, smallest first
                chain = list(reversed(s.base(5)))
            else:
                chain = [gen.cylinder(s, span=4)]
                for _ in range(3):
                    chain.append(s.sum(chain[-1], gen.cylinder(s, span=4)))
        _run(chk, lambda: chain_case(phi, chain))
    return [chk]


def suite_loglaw(gen: RandomInstances, count: int) -> List[CheckResult]:
    S = "loglaw"
    glob, local, upper = CheckResult(S, "global"), CheckResult(S, "local-cotrajectory"), CheckResult(S, "local-upper")
    for i in range(count):
        k = (2, 3, 4)[i % 3]
        if i % 2 == 0:
            phi = gen.padic(n=gen.rng.randint(1, 3), lo=-2, hi=2)
            U = gen.lattice(phi.universe)
        else:
            phi = gen.shift(kmax=2)
            U = gen.cylinder(phi.universe)
        pk = phi ** k
        w = lambda: _witness(phi, U, power=k)
        _run(glob, lambda: ((a := _h(pk, 6)) == (b := _h(phi, 6) * k), f"h(phi^k)={a} vs k*h(phi)={b}", w))
        V = cotrajectory(phi.inverse(), U, k)
        _run(local, lambda: ((a := _H(pk, V)) == (b := _H(phi, U) * k), f"H(phi^k,V)={a} vs k*H(phi,U)={b}", w))
        _run(upper, lambda: (not (a := _H(phi, U) * k) < (b := _H(pk, U)), f"H(phi^k,U)={b} > {a}", w))
    return [glob, local, upper]


def suite_monotonicity(gen: RandomInstances, count: int) -> List[CheckResult]:
    S = "monotonicity"
    r_id, q_inc, h_sub, h_quot, H_sub = (CheckResult(S, n) for n in (
        "restriction-cotrajectory", "quotient-cotrajectory-inclusion", "global-subgroup", "global-quotient",
        "local-subgroup"))
    cq_id, cq_H = CheckResult(S, "compact-quotient-cotrajectory"), CheckResult(S, "compact-quotient-entropy")

    for _ in range(count):
        phi, k = gen.block_triangular()
        u = phi.universe
        U = gen.lattice(u)
        sq = invariant_subquotient(phi, k)
        w = lambda: _witness(phi, U, split=k)

        def restriction():
            for n in range(1, HORIZON + 1):
                if cotrajectory(sq.sub, sq.restrict(U), n) != sq.restrict(cotrajectory(phi, U, n)):
                    return False, f"differs at n={n}", w
            return True, "", w

        def quotient():
            for n in range(1, HORIZON + 1):
                if not is_sublattice(sq.project(cotrajectory(phi, U, n)), cotrajectory(sq.quot, sq.project(U), n)):
                    return False, f"q(C_n) not inside C_n(quotient) at n={n}", w
            return True, "", w

        _run(r_id, restriction)
        _run(q_inc, quotient)
        _run(H_sub, lambda: (not (a := _H(phi, U)) < (b := _H(sq.sub, sq.restrict(U))), f"{b} > {a}", w))
        _run(h_sub, lambda: (not (a := _h(phi)) < (b := _h(sq.sub)), f"h(restriction)={b} > h={a}", w))
        _run(h_quot, lambda: (not (a := _h(phi)) < (b := _h(sq.quot)), f"h(quotient)={b} > h={a}", w))

    for _ in range(count):
        phi = gen.padic(n=gen.rng.randint(1, 2), lo=-2, hi=2)
        psi = ShiftAutomorphism(ShiftUniverse(gen.rng.choice((2, 3, 4))), 0, 1)
        psi = ShiftAutomorphism(psi.universe, 0, gen.rng.choice([a for a in range(1, psi.universe.m)
                                                                 if math.gcd(a, psi.universe.m) == 1]))
        eta = product_automorphism(phi, psi)
        s = psi.universe
        N = gen.cylinder(s, span=2)
        U = (gen.lattice(phi.universe), s.sum(N, gen.cylinder(s, span=3)))
        q = quotient_by_compact_factor(eta, N)
        w = lambda: _witness(eta, U, N=s.subgroup_to_json(N))

        def identity():
            for n in range(1, HORIZON + 1):
                if not q.universe.equal(q.project(cotrajectory(eta, U, n)), cotrajectory(q.automorphism, q.project(U), n)):
                    return False, f"differs at n={n}", w
            return True, "", w

        _run(cq_id, identity)
        _run(cq_H, lambda: ((a := _H(eta, U)) == (b := _H(q.automorphism, q.project(U))), f"{a} vs {b}", w))
    return [r_id, q_inc, H_sub, h_sub, h_quot, cq_id, cq_H]


def suite_inverse_limit(gen: RandomInstances, count: int) -> List[CheckResult]:
    S = "inverse-limit"
    per_line, sup = CheckResult(S, "quotient-preserves-H"), CheckResult(S, "supremum")
    radii = range(0, 4)
    for _ in range(count):
        phi = gen.padic(n=gen.rng.randint(1, 2), lo=-2, hi=2)
        m = gen.rng.choice((2, 2, 3))
        units = [a for a in range(1, m) if math.gcd(a, m) == 1]
        psi = ShiftAutomorphism(ShiftUniverse(m), 0, gen.rng.choice(units))
        eta = product_automorphism(phi, psi)
        s = psi.universe
        quotients = {i: quotient_by_compact_factor(eta, s.window(-i, i)) for i in radii}
        for U in eta.universe.base(8) + [(gen.lattice(phi.universe), gen.cylinder(s, span=3))]:
            coords = U[1].coords
            i = max((abs(c) for c in coords), default=0)
            q = quotients[i] if i in quotients else quotient_by_compact_factor(eta, s.window(-i, i))
            w = lambda: _witness(eta, U, radius=i)
            _run(per_line, lambda: ((a := _H(eta, U)) == (b := _H(q.automorphism, q.project(U))), f"{a} vs {b}", w))

        def supremum():
            hs = [_h(quotients[i].automorphism) for i in radii]
            h = _h(eta)
            ok = all(not b < a for a, b in zip(hs, hs[1:])) and max(hs) == h
            return ok, f"h(quotients)={[str(x) for x in hs]} vs h={h}", lambda: _witness(eta)

        _run(sup, supremum)
    return [per_line, sup]


def suite_weak_addition(gen: RandomInstances, count: int) -> List[CheckResult]:
    S = "weak-addition"
    cot, local, glob = CheckResult(S, "cotrajectory-product"), CheckResult(S, "local"), CheckResult(S, "global")
    for i in range(count):
        if i % 2 == 0:
            p1 = gen.prime()
            p2 = gen.rng.choice([p for p in (2, 3, 5) if p != p1])
            phi = gen.padic(n=gen.rng.randint(1, 2), p=p1, lo=-2, hi=2)
            psi = gen.padic(n=gen.rng.randint(1, 2), p=p2, lo=-2, hi=2)
            V = gen.lattice(psi.universe)
        else:
            phi = gen.padic(n=gen.rng.randint(1, 2), lo=-2, hi=2)
            psi = gen.shift()
            V = gen.cylinder(psi.universe)
        U = gen.lattice(phi.universe)
        eta = product_automorphism(phi, psi)
        UV = (U, V)
        w = lambda: _witness(eta, UV)

        def componentwise():
            e_inv, f_inv, g_inv = eta.inverse(), phi.inverse(), psi.inverse()
            for n in range(1, HORIZON + 1):
                if not eta.universe.equal(cotrajectory(e_inv, UV, n), (cotrajectory(f_inv, U, n), cotrajectory(g_inv, V, n))):
                    return False, f"differs at n={n}", w
            return True, "", w

        def direct_global():
            best = EntropyValue.zero()
            for P in eta.universe.base(16):
                best = max(best, _H(eta, P))
            total = _h(phi) + _h(psi, 6)
            return best == total, f"max over product base {best} vs sum {total}", w

        _run(cot, componentwise)
        _run(local, lambda: ((a := _H(eta, UV)) == (b := _H(phi, U) + _H(psi, V)), f"{a} vs {b}", w))
        _run(glob, direct_global)
    return [cot, local, glob]


def suite_scale_inequality(gen: RandomInstances, count: int) -> List[CheckResult]:
    S = "scale-inequality"
    upper, oracle = CheckResult(S, "log-scale-at-most-h"), CheckResult(S, "padic-oracle-bound")
    for i in range(count):
        phi = gen.shift() if i % 3 == 2 else gen.padic(n=gen.rng.randint(1, 3), lo=-2, hi=2)
        w = lambda: _witness(phi)

        def case():
            est = scale_estimate(phi, base_budget=4)
            g = entropy_global(phi, base_budget=6)
            if not g.certified:
                return True, "", w
            return not g.value < EntropyValue(est.value), f"log {est.value} > h = {g.value}", w

        _run(upper, case)
        if isinstance(phi, MatrixAutomorphism):
            _run(oracle, lambda: (not (e := scale_estimate(phi, base_budget=4).value) < (o := scale_oracle_padic(phi.matrix, phi.p)),
                                  f"estimate {e} below oracle {o}", w))
    return [upper, oracle]


_SUITE_FUNCS: Dict[str, Callable[[RandomInstances, int], List[CheckResult]]] = {
    "gi-laws": suite_gi_laws,
    "lemma-logalpha": suite_ratio_trace,
    "algorithms-agree": suite_algorithms_agree,
    "inverse-modulus": suite_inverse_modulus,
    "conjugation": suite_conjugation,
    "antitone": suite_antitone,
    "loglaw": suite_loglaw,
    "monotonicity": suite_monotonicity,
    "inverse-limit": suite_inverse_limit,
    "weak-addition": suite_weak_addition,
    "scale-inequality": suite_scale_inequality,
}


def verify_properties(suite: str = "all", seed: int = 0, count: Optional[int] = None) -> VerifyReport:
    """Run one suite (or ``all``) deterministically from ``seed``."""
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in _SUITE_FUNCS:
            raise ValueError(f"unknown suite {name!r}")
    report = VerifyReport(seed)
    for name in names:
        gen = RandomInstances(f"{seed}:{name}")
        n = count if count is not None else DEFAULT_COUNTS[name]
        log.info("running %s with %d cases", name, n)
        report.results.extend(_SUITE_FUNCS[name](gen, n))
    return report
