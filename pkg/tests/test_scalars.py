import cmath
import random
from fractions import Fraction

import pytest

from hvsl2 import DivisionByZero, RootData
from conftest import get_ring


def brute(ell, x):
    return cmath.exp(2j * cmath.pi * x / ell)


def test_xi_pow_identity():
    r = get_ring(5)
    assert (r.xi_pow(0) - r.one).is_zero()


def test_xi_pow_primitive_fourth_root():
    r = get_ring(4)
    i = r.xi_pow(1)
    assert (i * i + r.one).is_zero()


def test_root_of_unity_sum():
    r = get_ring(5)
    s = r.xi_pow(1) + r.xi_pow(2) + r.xi_pow(3) + r.xi_pow(4)
    assert (s + r.one).is_zero()


def test_xi_pow_group_morphism(rng):
    r = get_ring(6)
    for _ in range(50):
        x = Fraction(rng.randrange(-30, 30), rng.randrange(1, 8))
        y = Fraction(rng.randrange(-30, 30), rng.randrange(1, 8))
        assert (r.xi_pow(x) * r.xi_pow(y) - r.xi_pow(x + y)).is_zero()
    assert (r.xi_pow(r.ell) - r.one).is_zero()
    # kernel is exactly ell Z
    assert not (r.xi_pow(Fraction(1, 2)) - r.one).is_zero()
    assert not (r.xi_pow(3) - r.one).is_zero()


def test_qint_antisymmetry():
    r = get_ring(5)
    assert r.qint(0).is_zero()
    for x in (1, Fraction(3, 2), Fraction(7, 5)):
        assert (r.qint(x) + r.qint(-x)).is_zero()


def test_qint_ell4():
    r = get_ring(4)
    # qint(1) = i - (-i) = 2i
    assert (r.qint(1) - r.scalar(2) * r.xi_pow(1)).is_zero()


def test_qint_product_numeric_oracle():
    r = get_ring(6)
    v = (r.qint(1) * r.qint(2)).to_complex()
    z = brute(6, 1) - brute(6, -1)
    w = brute(6, 2) - brute(6, -2)
    assert abs(v - z * w) < 1e-12


def test_qfact():
    r = get_ring(5)
    assert (r.qfact(0) - r.one).is_zero()
    assert (r.qfact(1) - r.qint(1)).is_zero()
    oracle = 1
    for k in range(1, 5):
        oracle *= brute(5, k) - brute(5, -k)
    assert abs(r.qfact(4).to_complex() - oracle) < 1e-12
    assert not r.qfact(4).is_zero()


def test_qint_vanishing_at_ellprime_even():
    r = get_ring(6)
    assert r.qint(r.ellprime).is_zero()
    assert abs(brute(6, 3) - brute(6, -3)) < 1e-12


def test_inverse_roundtrip(rng):
    r = get_ring(5)
    for _ in range(25):
        s = r.zero
        for _ in range(rng.randrange(1, 4)):
            s = s + r.scalar(Fraction(rng.randrange(-3, 4), rng.randrange(1, 3))) \
                * r.xi_pow(Fraction(rng.randrange(10), rng.choice([1, 2, 3])))
        if s.is_zero():
            continue
        assert (s.inv() * s - r.one).is_zero()


def test_division_by_zero_reported():
    r = get_ring(4)
    with pytest.raises(DivisionByZero):
        r.zero.inv()
    with pytest.raises(DivisionByZero):
        (r.xi_pow(2) + r.one).inv()  # xi^2 = -1 at ell = 4


def test_field_axioms_random(rng):
    r = get_ring(5)
    def rand():
        s = r.zero
        for _ in range(rng.randrange(1, 4)):
            s = s + r.scalar(Fraction(rng.randrange(-3, 4), rng.randrange(1, 3))) \
                * r.xi_pow(Fraction(rng.randrange(10), rng.choice([1, 2])))
        return s
    for _ in range(40):
        a, b, c = rand(), rand(), rand()
        assert ((a + b) + c - (a + (b + c))).is_zero()
        assert ((a * b) * c - (a * (b * c))).is_zero()
        assert (a * (b + c) - (a * b + a * c)).is_zero()
        assert (a * b - b * a).is_zero()


def test_canonical_collapses_hidden_zero():
    r = get_ring(4)
    s = r.one + r.xi_pow(2)  # 1 + (-1)
    assert s.is_zero()
    assert not s.canonical().ex


def test_exact_approx_agreement(rng):
    re = get_ring(6)
    ra = RootData(6, backend="approx")
    for _ in range(1000):
        ops = [(Fraction(rng.randrange(-3, 4), rng.randrange(1, 3)),
                Fraction(rng.randrange(12), rng.choice([1, 2, 3])))
               for _ in range(rng.randrange(1, 5))]
        se = re.zero
        sa = ra.zero
        for c, x in ops:
            se = se + re.scalar(c) * re.xi_pow(x)
            sa = sa + ra.scalar(c) * ra.xi_pow(x)
        prod_e = (se * se).to_complex()
        prod_a = (sa * sa).to_complex()
        assert abs(prod_e - prod_a) <= 1e-9 * max(1.0, abs(prod_e))


def test_approx_equality_tolerance():
    ra = RootData(4, backend="approx")
    a = ra.approx(1.0)
    b = ra.approx(1.0 + 1e-12)
    assert a == b
    assert not (a == ra.approx(1.0 + 1e-6))


def test_conjugate():
    r = get_ring(5)
    s = r.xi_pow(Fraction(3, 2)) + r.scalar(2)
    assert abs(s.conjugate().to_complex() - s.to_complex().conjugate()) < 1e-12


def test_eta_validation():
    with pytest.raises(ValueError):
        RootData(4, eta=0)
    with pytest.raises(ValueError):
        RootData(2)
    r = RootData(7, eta=Fraction(2, 3))
    assert r.ellprime == 7
    assert (r.eta - r.scalar(Fraction(2, 3))).is_zero()
