import random
from fractions import Fraction

import pytest

from dstab.poly import (IDENTICALLY_ZERO, MIXED, NONNEG_STRICT, Poly,
                        poly_sum)


def random_poly(rng, nvars=3, nterms=5, maxexp=2):
    terms = {}
    for _ in range(nterms):
        mono = tuple(sorted((v, rng.randint(1, maxexp))
                            for v in rng.sample(range(1, nvars + 1),
                                                rng.randint(0, nvars))))
        terms[mono] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return Poly(terms)


def test_zero_and_const():
    assert Poly.zero().is_zero()
    p = Poly.const(Fraction(3, 2))
    assert p.is_constant()
    assert p.constant_value() == Fraction(3, 2)
    assert Poly.const(0) == Poly.zero()


def test_ring_axioms():
    rng = random.Random(11)
    for _ in range(200):
        p = random_poly(rng)
        q = random_poly(rng)
        r = random_poly(rng)
        assert p + q == q + p
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p - p == Poly.zero()
        assert p * Poly.const(1) == p
        assert p * Poly.zero() == Poly.zero()


def test_collect_reassembles():
    rng = random.Random(7)
    for _ in range(100):
        p = random_poly(rng, nvars=4, nterms=8)
        for v in (1, 2, 3, 4):
            c0, c1, c2 = p.collect(v)
            d = Poly.var(v)
            assert c2 * d * d + c1 * d + c0 == p
            for part in (c0, c1, c2):
                assert v not in part.variables()


def test_collect_rejects_high_degree():
    p = Poly({((1, 3),): 1})
    with pytest.raises(ValueError):
        p.collect(1)
    # other variables are unaffected
    assert p.collect(2)[0] == p


def test_substitute_zero_is_the_constant_part():
    rng = random.Random(23)
    for _ in range(100):
        p = random_poly(rng, nvars=4, nterms=8)
        for v in (1, 2, 3, 4):
            assert p.substitute_zero(v) == p.collect(v)[0]


def test_evaluate_matches_term_sum():
    rng = random.Random(5)
    for _ in range(100):
        p = random_poly(rng, nvars=3, nterms=6, maxexp=3)
        point = {v: Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                 for v in (1, 2, 3)}
        expected = sum((coeff * _mono_value(mono, point)
                        for mono, coeff in p.terms.items()), Fraction(0))
        assert p.evaluate(point) == expected


def _mono_value(mono, point):
    val = Fraction(1)
    for v, e in mono:
        val *= Fraction(point[v]) ** e
    return val


def test_evaluate_requires_all_variables():
    p = Poly.var(1) * Poly.var(2)
    with pytest.raises(ValueError):
        p.evaluate({1: Fraction(1)})


def test_coeffwise_sign_classes():
    assert Poly.zero().coeffwise_sign() == IDENTICALLY_ZERO
    assert (Poly.const(2) + Poly.var(1)).coeffwise_sign() == NONNEG_STRICT
    assert (Poly.const(2) - Poly.var(1)).coeffwise_sign() == MIXED
    # cancellation produces the zero polynomial, not a stored zero
    p = Poly.var(1) - Poly.var(1)
    assert p.coeffwise_sign() == IDENTICALLY_ZERO


def test_coefficient_lookup():
    p = Poly.const(3) + Poly.var(2).scale(-4) * Poly.var(1)
    assert p.coefficient(()) == 3
    assert p.coefficient(((1, 1), (2, 1))) == -4
    assert p.coefficient(((1, 2),)) == 0
    # zero exponents are ignored in the key
    assert p.coefficient(((1, 1), (2, 1), (3, 0))) == -4


def test_integral_coefficients_stay_int():
    p = Poly.const(Fraction(6, 2)) * Poly.var(1)
    (coeff,) = p.terms.values()
    assert isinstance(coeff, int) and coeff == 3
    q = Poly.const(Fraction(1, 2)).scale(2)
    assert q == Poly.const(1)


def test_render_and_sorted_terms():
    p = Poly.const(3) - Poly.var(1) * Poly.var(2).scale(4) \
        + (Poly.var(2) * Poly.var(2)).scale(2)
    assert p.render() == "3 - 4*d1*d2 + 2*d2^2"
    assert Poly.zero().render() == "0"
    assert Poly.var(3).render() == "d3"
    degs = [sum(e for _, e in m) for m, _ in p.sorted_terms()]
    assert degs == sorted(degs)


def test_poly_sum():
    parts = [Poly.var(i) for i in (1, 2, 3)]
    assert poly_sum(parts) == Poly.var(1) + Poly.var(2) + Poly.var(3)
    assert poly_sum([]) == Poly.zero()
