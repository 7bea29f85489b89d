"""Acceptance criteria 1-9, each reported as one PASS/FAIL line."""

import os
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

from tdlc_entropy.engine import (
    entropy_global,
    entropy_local,
    entropy_local_limit,
    local_entropy,
    scale_estimate,
)
from tdlc_entropy.errors import EntropyError
from tdlc_entropy.exact import EntropyValue, Factored
from tdlc_entropy.lattice import lattice_index, lattice_intersect
from tdlc_entropy.oracles import scale_oracle_padic
from tdlc_entropy.padic import MatrixAutomorphism, padic_universe
from tdlc_entropy.shift import ShiftAutomorphism, ShiftUniverse
from tdlc_entropy.universe import modulus
from tdlc_entropy.verify import RandomInstances, verify_properties

F = Fraction
ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"
WORKED = ("padic_scale_down", "padic_scale_up", "padic_diagonal", "padic_swap")
RANDOM_COUNT = 200


def all_values(phi, U):
    """Entropy by every algorithm plus the oracle, as a dict of exact values."""
    reports = entropy_local(phi, U, cross_check=False)
    values = {name: r.value for name, r in reports.items()}
    values["oracle"] = phi.universe.entropy_oracle(phi, U)
    return values, reports


def trace_is_monotone(report) -> bool:
    prev_c = prev_a = None
    for row in report.trace:
        if prev_c is not None and not (row.c_n / prev_c).is_integer():
            return False
        if prev_a is not None and prev_a < row.alpha_n:
            return False
        prev_c, prev_a = row.c_n, row.alpha_n
    return True


def random_instances():
    gen = RandomInstances("acceptance:random")
    return [gen.padic(lo=-3, hi=3) for _ in range(RANDOM_COUNT)]


def test_criterion_1_worked_instances(verdict):
    failures, slowest = [], 0.0
    for p in (2, 3, 5):
        cases = [
            ([[F(1, p)]], EntropyValue.log_of(p), Factored.prime_power(p, 1), EntropyValue.zero()),
            ([[F(p)]], EntropyValue.zero(), Factored.prime_power(p, -1), EntropyValue.log_of(p)),
            ([[F(1, p), 0], [0, F(p)]], EntropyValue.log_of(p), Factored.one(), None),
            ([[0, F(1, p)], [1, 0]], EntropyValue.log_of(p), None, None),
        ]
        for A, H, delta, H_inv in cases:
            start = time.perf_counter()
            u, phi = padic_universe(p, A)
            Z = u.standard_subgroup()
            values, _ = all_values(phi, Z)
            ok = set(values.values()) == {H}
            if delta is not None:
                ok = ok and modulus(phi, Z) == delta
            if H_inv is not None:
                inv_values, _ = all_values(phi.inverse(), Z)
                ok = ok and set(inv_values.values()) == {H_inv}
            elapsed = time.perf_counter() - start
            slowest = max(slowest, elapsed)
            if not ok or elapsed > 1.0:
                failures.append(f"p={p} A={A}: {values} in {elapsed:.3f}s")
    verdict("CRITERION 1", not failures, f"slowest {slowest:.3f}s" if not failures else "; ".join(failures))


def test_criterion_2_random_agreement(verdict):
    start = time.perf_counter()
    bad = []
    for phi in random_instances():
        try:
            values, _ = all_values(phi, phi.universe.standard_subgroup())
        except EntropyError as exc:
            bad.append(f"{phi.describe()}: {exc}")
            continue
        if len(set(values.values())) != 1:
            bad.append(f"{phi.describe()}: {values}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    verdict("CRITERION 2", ok, f"{RANDOM_COUNT} instances in {elapsed:.1f}s" + (f"; {bad[:3]}" if bad else ""))


def test_criterion_3_trace_monotonicity(verdict):
    bad = 0
    steps = 0
    for phi in random_instances():
        try:
            report = entropy_local_limit(phi, phi.universe.standard_subgroup(), cross_check=False)
        except EntropyError:
            bad += 1
            continue
        steps += len(report.trace)
        bad += not trace_is_monotone(report)
    verdict("CRITERION 3", bad == 0, f"{steps} steps checked, {bad} violations")


def test_criterion_4_modulus_suite(verdict):
    failures = []
    for phi in random_instances():
        Z = phi.universe.standard_subgroup()
        lhs = local_entropy(phi.inverse(), Z)
        rhs = local_entropy(phi, Z) - EntropyValue(modulus(phi, Z))
        if lhs != rhs:
            failures.append(f"inverse relation on {phi.describe()}")

    gen = RandomInstances("acceptance:modulus")
    for _ in range(50):
        phi = gen.padic()
        u = phi.universe
        psi = MatrixAutomorphism(u, gen.matrix(u.p, u.dim))
        U = gen.lattice(u)
        if modulus(phi.compose(psi), U) != modulus(phi, U) * modulus(psi, U):
            failures.append(f"multiplicativity on {phi.describe()}")
    for _ in range(50):
        phi = gen.padic()
        u = phi.universe
        U = gen.lattice(u)
        V = gen.sublattice(lattice_intersect(U, phi.image(U)), 2)
        if lattice_index(V, phi.image(U)) != lattice_index(V, U) * modulus(phi, U):
            failures.append(f"index law on {phi.describe()}")
    for _ in range(20):
        psi = gen.shift()
        if not modulus(psi, gen.cylinder(psi.universe)).is_one():
            failures.append(f"shift modulus on {psi.describe()}")
    verdict("CRITERION 4", not failures, "; ".join(failures[:3]))


def test_criterion_5_entropy_laws(verdict):
    counts = {"conjugation": 50, "antitone": 50, "loglaw": 30, "monotonicity": 30,
              "inverse-limit": 10, "weak-addition": 30}
    failed = []
    for suite, count in counts.items():
        report = verify_properties(suite, seed=0, count=count)
        failed += [line for line in report.lines() if line.startswith("FAIL") and "overall" not in line]
    verdict("CRITERION 5", not failed, "; ".join(failed) or ", ".join(f"{k} x{v}" for k, v in counts.items()))


def test_criterion_6_scale(verdict):
    failures = []
    s = ShiftUniverse(2)
    sigma = ShiftAutomorphism(s, 1)
    est = scale_estimate(sigma)
    h = entropy_global(sigma)
    if not (est.value.is_one() and h.value == EntropyValue.log_of(2) and EntropyValue(est.value) < h.value):
        failures.append(f"shift: scale {est.value}, h {h.value}")

    gen = RandomInstances("acceptance:scale")
    for _ in range(50):
        p = gen.prime()
        n = gen.rng.randint(1, 4)
        A = [[gen.unit(p) * F(p) ** gen.rng.randint(-3, 3) if i == j else F(0) for j in range(n)] for i in range(n)]
        u, phi = padic_universe(p, A)
        est = scale_estimate(phi, candidates=[u.standard_subgroup()])
        oracle = scale_oracle_padic(A, p)
        h = entropy_global(phi)
        if not (EntropyValue(est.value) == EntropyValue(oracle) == h.value):
            failures.append(f"diagonal {A}: {est.value} / {oracle} / {h.value}")

    report = verify_properties("scale-inequality", seed=0, count=50)
    if not report.passed:
        failures += [line for line in report.lines() if line.startswith("FAIL")]
    for phi in random_instances()[:50]:
        if entropy_global(phi).value < EntropyValue(scale_estimate(phi, base_budget=4).value):
            failures.append(f"log scale exceeds h on {phi.describe()}")
    verdict("CRITERION 6", not failures, "; ".join(failures[:3]))


def test_criterion_7_shift_single_coordinate(verdict):
    # the literal reading: H(σ^k, U_{0}) against k·log m
    wrong = []
    for m in (2, 3, 4):
        s = ShiftUniverse(m)
        U0 = s.cylinder([0])
        for k in (1, 2, 3):
            reports = entropy_local(ShiftAutomorphism(s, k), U0)
            values = {r.value for r in reports.values()}
            at_bound = all(r.stop_rule == "bound" and r.stabilized_at == s.stabilization_bound(
                ShiftAutomorphism(s, k), U0) for r in reports.values())
            expected = EntropyValue.log_of(m) * k
            if values != {expected} or not at_bound:
                wrong.append(f"m={m} k={k}: got {values.pop()} expected {expected}")
    verdict("CRITERION 7", not wrong, f"{len(wrong)}/9 cases differ: " + "; ".join(wrong) if wrong else "9/9")


def test_criterion_7_shift_width_k_window(verdict):
    # k·log m is attained on the window [0, k-1] and by h_top(σ^k)
    wrong = []
    for m in (2, 3, 4):
        s = ShiftUniverse(m)
        for k in (1, 2, 3):
            sk = ShiftAutomorphism(s, k)
            W = s.window(0, k - 1)
            expected = EntropyValue.log_of(m) * k
            reports = entropy_local(sk, W)
            bound = s.stabilization_bound(sk, W)
            ok = {r.value for r in reports.values()} == {expected}
            ok = ok and all(r.stop_rule == "bound" and r.stabilized_at == bound for r in reports.values())
            ok = ok and entropy_global(sk).value == expected
            if not ok:
                wrong.append(f"m={m} k={k}")
    verdict("CRITERION 7 (width-k window)", not wrong, "; ".join(wrong) or "9/9 at the diameter bound")


def test_criterion_8_index_calculus(verdict):
    report = verify_properties("gi-laws", seed=0, count=200)
    failed = [line for line in report.lines() if line.startswith("FAIL")]
    cases = sum(r.cases for r in report.results)
    verdict("CRITERION 8", report.passed, "; ".join(failed) or f"{cases} checks")


def _cli(*args):
    cmd = [sys.executable, "-m", "tdlc_entropy", *map(str, args)]
    env = {**os.environ, "TDLC_ENTROPY_LOG": "error"}
    return subprocess.run(cmd, capture_output=True, env=env, cwd=ROOT).stdout


def test_criterion_9_golden_files(verdict):
    update = os.environ.get("TDLC_UPDATE_GOLDEN") == "1"
    mismatched = []
    for name in WORKED:
        inst = ROOT / "instances" / f"{name}.json"
        for suffix, args in (("report.json", ("run", "--instance", inst)),
                             ("trace.csv", ("trace", "--instance", inst))):
            first, second = _cli(*args), _cli(*args)
            golden = GOLDEN / f"{name}.{suffix}"
            if update:
                GOLDEN.mkdir(exist_ok=True)
                golden.write_bytes(first)
            if first != second or not golden.exists() or golden.read_bytes() != first:
                mismatched.append(golden.name)
    verdict("CRITERION 9", not mismatched, "differs: " + ", ".join(mismatched) if mismatched
            else f"{2 * len(WORKED)} golden files byte-identical across two runs")
