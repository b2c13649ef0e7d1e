"""Acceptance criteria, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` to get one PASS/FAIL line per
criterion in the terminal summary.
"""

import math
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest

from equilab.cli import main
from equilab.charsum import cochrane_check, prop1_audit
from equilab.lab.equidist import ExperimentConfig, joint_distribution
from equilab.lab.lemmas import coprime_lower_bound_check, range_limit_demo, sifted_interval_count
from equilab.lab.vm import CharacterFormula, vm_claim_audit, vm_distribution
from equilab.multfun import MultiplicativeFunction, ProductFunction
from equilab.polynomials import IntPolynomial
from equilab.primes import sieve_primes

T = IntPolynomial((0, 1))
NPS = tuple(MultiplicativeFunction.preset(n) for n in ("id", "phi", "sigma"))

# Max relative class deviation at x = 1e6, q = 17, (id, phi, sigma), measured before
# the x = 1e7 run by an independent plain-sieve evaluation of n, phi(n), sigma(n).
D6 = 27.16268019650479
RHS_1E6 = 794688


def identity_errors(threads=1):
    worst = 0.0
    rows = []
    for q in (5, 7, 9, 15, 25):
        for polys in ([T - 1], [T - 1, T + 1]):
            formula = CharacterFormula.build(q, polys, threads)
            for J in (1, 2, 3):
                dist = vm_distribution(q, polys, J)
                for u, exact in dist.items():
                    value, _ = formula.count(u, J)
                    err = abs(value - exact)
                    worst = max(worst, err)
                    rows.append((q, len(polys), J, u, exact, value))
    return worst, rows


def test_criterion_1_orthogonality_identity(record):
    t = time.perf_counter()
    worst, rows = identity_errors()
    ok = worst < 1e-6
    record(1, ok, f"{len(rows)} (q, K, J, u) cases, max |chars - brute| = {worst:.2e} < 1e-6 "
                  f"({time.perf_counter() - t:.1f}s)")
    assert ok


def test_criterion_2_prop1_exhaustive(record):
    t = time.perf_counter()
    fam = [T - 1, T + 1]
    audits = [prop1_audit(p, 1, fam) for p in (7, 11, 13, 17, 19, 23)]
    audits += [prop1_audit(p, 2, fam) for p in (3, 5, 7)]
    violations = sum(a.violations for a in audits)
    skipped = [a.p for a in audits if a.skipped]
    checked = sum(a.checked for a in audits)
    for a in audits[:6]:
        assert a.checked == (a.p - 1) ** 2 - 1  # every pair except the all-trivial one
    elapsed = time.perf_counter() - t
    ok = violations == 0 and not skipped and elapsed < 60
    record(2, ok, f"{checked} character pairs, {violations} violations, max |S|/bound = "
                  f"{max(a.max_ratio for a in audits):.15f} ({elapsed:.2f}s)")
    assert ok


def test_criterion_3_cochrane(record):
    r = cochrane_check(T**2 + T, 3, 2)
    z = cochrane_check(T**2, 3, 2)
    ok = (r.satisfied and r.bound == 3 and r.abs_value <= 3 + r.rounding_budget
          and z.bound == 0 and z.satisfied and z.abs_value == 0)
    record(3, ok, f"|S(T^2+T)| = {r.abs_value:.15f} <= 3 (+{r.rounding_budget:.1e}); "
                  f"S(T^2) = 0 exactly: {z.satisfied}")
    assert ok


def test_criterion_4_claim_audit(record):
    t = time.perf_counter()
    a = vm_claim_audit(101, [T - 1], [1], 4)
    i = a.count_bruteforce is not None and abs(a.count - a.count_bruteforce) < 1e-3
    ii = abs(100 * a.count_bruteforce - 99**4) <= 100 * 101**2
    assert a.guaranteed_error_bound == pytest.approx(1020100)
    iii = 0.90 <= a.ratio <= 0.95
    ok = i and ii and iii and time.perf_counter() - t < 60
    record(4, ok, f"#V = {a.count_bruteforce} (chars {a.count:.6f}); |100 #V - 99^4| = {a.actual_error:.0f} "
                  f"<= 1020100; ratio {a.ratio:.5f} in [0.90, 0.95]")
    assert i and ii and iii


def test_criterion_5_empirical_equidistribution(record):
    t = time.perf_counter()
    rep6 = joint_distribution(ExperimentConfig(10**6, 17, NPS))
    assert rep6.rhs_count == RHS_1E6 and rep6.stats["max_rel_dev"] == pytest.approx(D6, rel=1e-12)
    rep7 = joint_distribution(ExperimentConfig(10**7, 17, NPS, threads=4))
    rep5 = joint_distribution(ExperimentConfig(10**5, 17, NPS))
    conserved = rep7.class_sum_conserved() and rep6.class_sum_conserved() and rep5.class_sum_conserved()
    mean_ok = rep7.stats["mean_count"] >= 500
    dev_ok = rep7.stats["max_rel_dev"] <= D6
    tv5, tv7 = rep5.stats["tv_distance"], rep7.stats["tv_distance"]
    elapsed = time.perf_counter() - t
    ok = conserved and mean_ok and dev_ok and elapsed <= 300
    tag = None
    if ok and not tv7 < tv5:
        warnings.warn(f"TV distance did not decrease: {tv5} -> {tv7}")
        tag = "WARN"
    record(5, ok, f"rhs={rep7.rhs_count}, mean class {rep7.stats['mean_count']:.1f} >= 500, "
                  f"max_rel_dev {rep7.stats['max_rel_dev']:.4f} <= D6 {D6:.4f}, "
                  f"TV {tv5:.4f} -> {tv7:.4f} ({elapsed:.1f}s)", tag=tag)
    assert ok


def test_criterion_6_range_limit(record):
    r = range_limit_demo(10**6, [T - 1, T + 1], 3, p=19)
    ps = sieve_primes(10**6)
    oracle = int(np.count_nonzero(ps % 19 == 3))
    ok = r.passed and r.lower_count == oracle and r.lower_count >= Fraction(4 * 10**6, 3 * 19**2)
    record(6, ok, f"{r.lower_count} primes = 3 mod 19 up to 1e6 >= {float(r.threshold):.1f}")
    assert ok


def test_criterion_7_sifted_interval(record):
    primes = sieve_primes(100).tolist()
    r = sifted_interval_count(0, 10**6, {p: 0 for p in primes}, Z=100)
    ok = abs(r.count / r.main_term - 1) <= 0.25
    record(7, ok, f"count {r.count} vs main term {r.main_term:.2f}: |ratio - 1| = {abs(r.relative_error):.5f} <= 0.25")
    assert ok


def test_criterion_8_coprime_lower_bound(record):
    r = coprime_lower_bound_check(10**6, 17, ProductFunction(NPS))
    # independent check of the bound: float product over primes with p = 0, +-1 mod 17
    ps = sieve_primes(10**6)
    flagged = ps[np.isin(ps % 17, (0, 1, 16))]
    approx_bound = 10**6 / 20 * math.prod(1 - 1 / p for p in flagged.tolist())
    assert r.count == RHS_1E6 and len(flagged) == r.flagged_primes
    assert float(r.bound) == pytest.approx(approx_bound, rel=1e-9)
    ok = r.status == "pass"
    record(8, ok, f"count {r.count} >= x/20 prod(1 - 1/p) = {float(r.bound):.2f} over {r.flagged_primes} primes",
           tag=None if ok else "FLAG")
    if not ok:
        pytest.xfail("bound only holds eventually; flagged at this x")


def _cli(argv, path):
    assert main([str(a) for a in argv] + ["--out", str(path)]) in (0, 2)
    return path.read_bytes()


def test_criterion_9_determinism(record, tmp_path):
    same = {}
    w1, rows1 = identity_errors(threads=1)
    w8, rows8 = identity_errors(threads=8)
    same[1] = rows1 == rows8
    cases = {
        2: ["charsum-audit", "--family", "phi,sigma", "--p-range", "7..23", "--exhaustive"],
        4: ["vm", "--q", "101", "--family", "phi", "--J", "4", "--u", "1", "--method", "both"],
        5: ["equidist", "--x", "1e7", "--q", "17", "--family", "id,phi,sigma"],
        6: ["range-limit", "--x", "1e6", "--family", "phi,sigma", "--p0", "3", "--p", "19"],
        7: ["sift", "--x", "1e6", "--z", "100"],
        8: ["coprime-lower", "--x", "1e6", "--q", "17", "--family", "id,phi,sigma"],
    }
    for n, argv in cases.items():
        a = _cli(argv + ["--threads", "1"], tmp_path / f"c{n}_t1.json")
        b = _cli(argv + ["--threads", "8"], tmp_path / f"c{n}_t8.json")
        same[n] = a == b
    c3 = [cochrane_check(T**2 + T, 3, 2).to_json() for _ in range(2)]
    same[3] = c3[0] == c3[1]
    ok = all(same.values())
    record(9, ok, "byte-identical across --threads 1/8 for criteria "
                  + ",".join(str(k) for k in sorted(same) if same[k]))
    assert ok
