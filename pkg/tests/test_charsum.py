import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equilab.chargroup import PrimePowerModulus, character, compose_tuple
from equilab.charsum import (CharsumError, RoundingBudgetError, _judge, bound_polynomials, cochrane_check,
                             cochrane_params, complete_sum, complete_sum_histogram, composite_bound,
                             composite_bound_check, conductor_reduced_histogram, crt_product_histogram,
                             cyclotomic, histogram_is_zero, histogram_value, local_sum_histograms,
                             prop1_audit, prop1_bound, prop1_check, proof_polynomials, t_zero_check,
                             weil_check)
from equilab.polynomials import IntPolynomial, ModPRoot, derivative

T = IntPolynomial((0, 1))


def brute_sum(q, polys, chars_by_k, unit):
    """Direct complex sum: chars_by_k[k] maps x -> complex or 0."""
    total = 0j
    for x in range(q):
        if unit and math.gcd(x, q) > 1:
            continue
        v = 1 + 0j
        for F, chi in zip(polys, chars_by_k):
            v *= chi(F(x))
        total += v
    return total


def local_char(p, m, A):
    mod = PrimePowerModulus(p, m)

    def chi(y):
        y %= mod.modulus
        if y % p == 0:
            return 0
        return complex(np.exp(2j * np.pi * A * int(mod.log_table[y]) / mod.group_order))

    return chi


def test_cyclotomic_small():
    assert cyclotomic(1) == T - 1
    assert cyclotomic(6) == IntPolynomial((1, -1, 1))
    assert cyclotomic(12) == IntPolynomial((1, 0, -1, 0, 1))


def test_histogram_zero_exact():
    assert histogram_is_zero(np.array([1, 1, 1]))
    assert not histogram_is_zero(np.array([1, 1, 0]))
    # 1 + zeta_6**2 + zeta_6**4 = 0
    assert histogram_is_zero(np.array([1, 0, 1, 0, 1, 0]))
    assert not histogram_is_zero(np.array([1, 0, 0, 1, 0, 1]))


def test_complete_sum_examples():
    tup = compose_tuple(7, [{7: character(7, 1, 6)}])
    assert complete_sum(7, [T], tup, True).value == pytest.approx(6)
    quad = compose_tuple(7, [{7: character(7, 1, 3)}])
    assert complete_sum(7, [T**2 + 1], quad, False).value == pytest.approx(-1)
    non = compose_tuple(5, [{5: character(5, 1, 1)}])
    assert abs(complete_sum(5, [T], non, False).value) < 1e-12
    with pytest.raises(CharsumError):
        complete_sum(8, [T], non, False)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(3, 2), (5, 1), (7, 1), (5, 2), (11, 1)]), st.data())
def test_complete_sum_matches_direct(pm, data):
    p, m = pm
    order = p ** (m - 1) * (p - 1)
    polys = [T - 1, T + 1, T**2 + 2]
    As = [data.draw(st.integers(1, order)) for _ in polys]
    unit = data.draw(st.booleans())
    tup = compose_tuple(p**m, [{p: character(p, m, A)} for A in As])
    got = complete_sum(p**m, polys, tup, unit).value
    expect = brute_sum(p**m, polys, [local_char(p, m, A) for A in As], unit)
    assert abs(got - expect) < 1e-9


def test_weil_examples():
    r = weil_check(7, [T**2 + 1], [character(7, 1, 3)])
    assert r.abs_value == pytest.approx(1) and r.satisfied and r.bound == pytest.approx(math.sqrt(7))
    r = weil_check(17, [T - 1, T + 1], [character(17, 1, 16), character(17, 1, 16)])
    assert r.status == "hypothesis_not_established" and r.satisfied is None
    r = weil_check(17, [T - 1, T + 1], [character(17, 1, 1), character(17, 1, 16)])
    assert r.satisfied and r.abs_value <= math.sqrt(17)


def test_cochrane_params_examples():
    d = cochrane_params(T**2 + T, 3)
    assert (d.t, d.F_tilde, d.A_set, d.M) == (0, IntPolynomial((1, 2)), (ModPRoot(1, 1),), 1)
    d = cochrane_params(T**2, 3)
    assert (d.t, d.F_tilde, d.A_set, d.M) == (0, IntPolynomial((0, 2)), (), 0)
    d = cochrane_params(T**3 + 9 * T, 3)
    assert (d.t, d.F_tilde, d.A_set, d.M) == (1, IntPolynomial((0, 0, 1)), (), 0)


def test_cochrane_check_examples():
    r = cochrane_check(T**2 + T, 3, 2)
    assert r.satisfied and r.bound == pytest.approx(3)
    assert r.abs_value == pytest.approx(3)  # attained; passes within the rounding budget
    assert r.abs_value <= r.bound + r.rounding_budget
    r = cochrane_check(T**2, 3, 2)
    assert r.bound == 0 and r.abs_value == 0 and r.satisfied
    with pytest.raises(CharsumError, match="hypothesis violated"):
        cochrane_check(T**3 + 9 * T, 3, 2)


def test_prop1_examples():
    for A1, A2 in itertools.product(range(1, 17), repeat=2):
        chars = [character(17, 1, A1), character(17, 1, A2)]
        r = prop1_check(17, 1, [T - 1, T + 1], chars)
        if A1 == 16 and A2 == 16:
            assert r.status == "precondition_failed"
        else:
            assert r.satisfied and r.bound == pytest.approx(math.sqrt(17))
    r = prop1_check(3, 2, [T - 1, T + 1], [character(3, 2, 1), character(3, 2, 6)])
    assert r.satisfied and r.bound == pytest.approx(3)
    with pytest.raises(CharsumError):
        prop1_check(2, 1, [T - 1], [character(3, 1, 1)])


def test_prop1_audit_exhaustive():
    for p in (7, 11, 13, 17, 19, 23):
        a = prop1_audit(p, 1, [T - 1, T + 1])
        assert a.violations == 0 and a.checked == (p - 1) ** 2 - 1
    for p in (3, 5, 7):
        a = prop1_audit(p, 2, [T - 1, T + 1])
        assert a.violations == 0 and a.checked > 0


def test_rounding_budget_gate():
    hist = np.zeros(4, dtype=np.int64)
    hist[0] = 10**12
    with pytest.raises(RoundingBudgetError):
        _judge(hist, 1e-3)


def test_proof_polynomials_examples():
    F, G = proof_polynomials([T - 1], [3])
    assert F == (T - 1) ** 3 and G == IntPolynomial((3,))
    F, G = proof_polynomials([T - 1, T + 1], [1, 1])
    assert F == T**2 - 1 and G == 2 * T
    F, G = proof_polynomials([T - 1, T + 1], [2, 1])
    assert G == 3 * T + 1 and derivative(F) == (T - 1) * G


def test_t_zero_examples():
    assert t_zero_check([T - 1, T + 1], 17, 1, [1, 1])
    assert t_zero_check([T - 1, T + 1], 17, 1, [17, 17]).status == "hypothesis_void"


def test_t_zero_randomized():
    rng = random.Random(5)
    fams = [[T - 1, T + 1], [T, T - 1, T + 1], [T**2 + 1, T + 3], [T**3 - 2, T - 5]]
    trials = 0
    while trials < 1000:
        polys = rng.choice(fams)
        p = rng.choice([17, 19, 23, 29, 31, 37, 41, 43])
        As = [rng.randint(1, 3 * p) for _ in polys]
        try:
            r = t_zero_check(polys, p, 1, As)
        except CharsumError:
            continue  # p divides the discriminant for this family
        trials += 1
        assert r.status in ("holds", "hypothesis_void")
        if any(A % p for A in As):
            assert r.status == "holds"


@pytest.mark.parametrize("q", [45, 63, 99])
def test_crt_factorisation_exact(q):
    from equilab.primes import factorize_small

    fact = factorize_small(q)
    rng = random.Random(q)
    polys = [T - 1, T + 1]
    for _ in range(20):
        local = [{p: character(p, e, rng.randint(1, p ** (e - 1) * (p - 1))) for p, e in fact.items()}
                 for _ in polys]
        tup = compose_tuple(q, local)
        for unit in (True, False):
            hist = complete_sum_histogram(q, polys, tup, unit)
            loc = local_sum_histograms(polys, tup, unit)
            assert np.array_equal(crt_product_histogram(loc, len(hist)), hist)


@pytest.mark.parametrize("p,e,A", [(3, 2, 3), (3, 3, 3), (3, 3, 12), (3, 3, 6), (5, 2, 5)])
def test_conductor_reduction_exact(p, e, A):
    chi = character(p, e, A)
    f = chi.conductor
    assert f < p**e
    polys = [T**2 + 1]
    tup = compose_tuple(p**e, [{p: chi}])
    full = complete_sum_histogram(p**e, polys, tup, True)
    red = conductor_reduced_histogram(p, e, polys, [chi], f, True)
    assert np.array_equal(full, red * (p**e // f))


def test_bound_polynomials_convention():
    polys, kept = bound_polynomials([T - 1])
    assert polys == (T, T - 1) and kept
    polys, kept = bound_polynomials([T, T - 1, T + 1])
    assert polys == (T, T - 1, T + 1) and not kept


def test_composite_examples():
    fam = [T - 1]
    both = compose_tuple(323, [{17: character(17, 1, 1), 19: character(19, 1, 1)}])
    r = composite_bound_check(323, fam, both)
    assert r.satisfied and r.details["crt_exact"]
    assert r.bound == pytest.approx(323 * 1 * (17 * 19) ** -0.5)
    half = compose_tuple(323, [{17: character(17, 1, 1), 19: character(19, 1, 18)}])
    r = composite_bound_check(323, fam, half)
    assert r.satisfied and r.bound == pytest.approx(19 * prop1_bound(17, 1, 2))
    red = compose_tuple(45, [{3: character(3, 2, 3), 5: character(5, 1, 1)}])
    r = composite_bound_check(45, fam, red)
    assert r.details["type"]["3"] == 3
    assert r.details["conductor_reduction"]["3"]["exact"]
    assert r.satisfied
    triv = compose_tuple(45, [{3: character(3, 2, 6), 5: character(5, 1, 4)}])
    with pytest.raises(CharsumError, match="vacuous"):
        composite_bound_check(45, fam, triv)


def test_composite_bound_formula():
    tup = compose_tuple(45, [{3: character(3, 2, 1), 5: character(5, 1, 4)}])
    assert composite_bound(tup, 3) == pytest.approx(45 * 2 * 9 ** (-1 / 3))


def test_histogram_value_deterministic():
    rng = np.random.default_rng(0)
    h = rng.integers(0, 1000, size=96)
    assert histogram_value(h) == histogram_value(h.copy())
