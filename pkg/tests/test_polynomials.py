import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from equilab.polynomials import (IntPolynomial, ModPRoot, PolynomialError, derivative, discriminant,
                                 eval_mod, eval_mod_array, gcd_mod_p, is_squarefree_over_Q,
                                 p_content_valuation, resultant, roots_mod_p,
                                 squarefree_part_degree_mod_p)

T = IntPolynomial((0, 1))


def P(*c):
    return IntPolynomial(c)


def sylvester_det(F, G):
    """Independent oracle: determinant of the Sylvester matrix via sympy."""
    n, m = F.degree, G.degree
    f = list(reversed(F.to_list()))
    g = list(reversed(G.to_list()))
    size = n + m
    rows = []
    for i in range(m):
        rows.append([0] * i + f + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + g + [0] * (size - m - 1 - i))
    return int(sympy.Matrix(rows).det())


polys = st.lists(st.integers(-10, 10), min_size=2, max_size=5).map(IntPolynomial).filter(lambda F: F.degree >= 1)


def test_zero_polynomial_invariants():
    Z = IntPolynomial([0, 0])
    assert Z.coeffs == () and Z.degree == -1 and not Z
    assert P(1, 2, 0, 0).coeffs == (1, 2)
    assert P(0, -1, 0, 1).degree == 3


def test_eval_mod_examples():
    assert eval_mod(P(1, 0, 1), 3, 7) == 3
    assert eval_mod(IntPolynomial(), 5, 11) == 0
    assert eval_mod(P(0, -1, 0, 1), 4, 17) == 9


def test_eval_mod_array_matches_scalar_and_large_moduli():
    F = P(7, -3, 0, 11, 2)
    xs = np.arange(0, 500, dtype=np.int64)
    for m in (17, 10**9 + 7, 5 * 10**9 + 11):
        got = eval_mod_array(F, xs, m)
        assert [int(v) for v in got] == [F(int(x)) % m for x in xs]


def test_derivative_examples():
    assert derivative(P(1, 0, 1)) == P(0, 2)
    assert derivative(P(5)) == IntPolynomial()
    assert derivative(P(0, -1, 0, 1)) == P(-1, 0, 3)


def test_resultant_examples():
    assert resultant(T, T - 1) == -1
    # Sylvester convention: res(T - a, T - b) = a - b
    assert resultant(T - 2, T - 5) == -3
    assert resultant(T - 2, T - 5) == sylvester_det(T - 2, T - 5)
    assert resultant(P(1, 0, 1), P(0, 2)) == 4


def test_resultant_zero_input_raises():
    with pytest.raises(PolynomialError, match="undefined resultant"):
        resultant(IntPolynomial(), T)


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_resultant_matches_sylvester_oracle(F, G):
    assert resultant(F, G) == sylvester_det(F, G)


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_resultant_antisymmetry(F, G):
    assert resultant(F, G) == (-1) ** (F.degree * G.degree) * resultant(G, F)


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys)
def test_resultant_multiplicative(F, G, H):
    assert resultant(F, G * H) == resultant(F, G) * resultant(F, H)


def test_discriminant_examples():
    assert discriminant(P(1, 0, 1)) == -4
    assert discriminant(P(0, -1, 0, 1)) == 4
    assert discriminant(T - 1) == 1
    with pytest.raises(PolynomialError):
        discriminant(P(5))


def test_discriminant_closed_forms_random():
    rng = random.Random(7)
    for _ in range(100):
        a = rng.choice([i for i in range(-9, 10) if i])
        b, c = rng.randint(-9, 9), rng.randint(-9, 9)
        assert discriminant(P(c, b, a)) == b * b - 4 * a * c
        p, q = rng.randint(-9, 9), rng.randint(-9, 9)
        assert discriminant(P(q, p, 0, 1)) == -4 * p**3 - 27 * q**2


@settings(max_examples=100, deadline=None)
@given(polys)
def test_discriminant_matches_sympy(F):
    x = sympy.Symbol("x")
    expr = sum(c * x**i for i, c in enumerate(F.coeffs))
    assert discriminant(F) == int(sympy.discriminant(expr, x))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-10, 10), min_size=2, max_size=5).map(IntPolynomial).filter(lambda F: F.degree >= 1))
def test_discriminant_zero_iff_not_squarefree(F):
    assert (discriminant(F) == 0) == (not is_squarefree_over_Q(F))


def test_squarefree_examples():
    assert is_squarefree_over_Q(P(0, -1, 0, 1))
    assert not is_squarefree_over_Q(P(1, -2, 1))
    assert is_squarefree_over_Q(P(1, 0, 1))


def test_roots_mod_p_examples():
    assert roots_mod_p(P(0, -1, 0, 1), 5) == [ModPRoot(0, 1), ModPRoot(1, 1), ModPRoot(4, 1)]
    assert roots_mod_p(P(1, -2, 1), 7) == [ModPRoot(1, 2)]
    assert roots_mod_p(P(1, 0, 1), 7) == []
    with pytest.raises(PolynomialError, match="zero polynomial mod p"):
        roots_mod_p(P(7, 14), 7)


@settings(max_examples=150, deadline=None)
@given(polys, st.sampled_from([3, 5, 7, 11, 13]))
def test_roots_mod_p_properties(F, p):
    R = F.reduce_mod(p)
    if not R:
        return
    roots = roots_mod_p(F, p)
    assert sum(r.multiplicity for r in roots) <= R.degree
    brute = [x for x in range(p) if eval_mod(F, x, p) == 0]
    assert [r.residue for r in roots] == brute
    for r in roots:
        assert r.multiplicity >= 1


def test_p_content_valuation_examples():
    assert p_content_valuation(P(1, 2), 3) == 0
    assert p_content_valuation(P(3, 0, 9), 3) == 1
    assert p_content_valuation(P(0, 49), 7) == 2
    with pytest.raises(PolynomialError):
        p_content_valuation(IntPolynomial(), 3)


def test_gcd_mod_p_and_squarefree_degree():
    F = (T - 1) ** 2 * (T + 1)
    assert gcd_mod_p(F, derivative(F), 7).degree == 1
    assert squarefree_part_degree_mod_p(F, 7) == 2
    # T^2 + 1 = (T - 2)(T + 2) mod 5 is squarefree
    assert squarefree_part_degree_mod_p(P(1, 0, 1), 5) == 2
    assert squarefree_part_degree_mod_p(P(-1, 0, 1), 3) == 2


def test_json_round_trip():
    F = P(0, -1, 0, 1)
    assert F.to_list() == [0, -1, 0, 1]
    assert IntPolynomial(F.to_list()) == F
