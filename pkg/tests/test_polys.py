"""Polynomial arithmetic, division, factorization and root finding."""

import random

import pytest

from atinfty.errors import DivisionByZero
from atinfty.fields import QQ, ExtensionField, PrimeField
from atinfty.polys import (
    Poly,
    factor,
    is_irreducible,
    rational_roots,
    roots_in_field,
)
from atinfty.suites import random_poly

F5 = PrimeField(5)
F17 = PrimeField(17)


def _t(field):
    return Poly.variable(field, ("t",), "t")


def _c(field, v):
    return Poly.const(field, ("t",), field(v))


@pytest.mark.parametrize("field", [QQ, F5, ExtensionField(3, [1, 2, 0, 1])])
def test_ring_axioms_bivariate(field):
    rng = random.Random(311)
    for _ in range(25):
        a = random_poly(rng, field, ("x", "y"), 3)
        b = random_poly(rng, field, ("x", "y"), 3)
        c = random_poly(rng, field, ("x", "y"), 2)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a - a == Poly(field, ("x", "y"), {})


def test_divmod_univariate():
    rng = random.Random(13)
    for _ in range(30):
        a = random_poly(rng, QQ, ("t",), 6)
        b = random_poly(rng, QQ, ("t",), 3, nonzero=True)
        q, r = a.divmod(b)
        assert q * b + r == a
        assert r.is_zero() or r.degree() < b.degree()
    with pytest.raises(DivisionByZero):
        a.divmod(Poly(QQ, ("t",), {}))


def test_gcd_contains_common_factor():
    rng = random.Random(29)
    for _ in range(20):
        g = random_poly(rng, F5, ("t",), 2, nonzero=True)
        a = random_poly(rng, F5, ("t",), 3, nonzero=True) * g
        b = random_poly(rng, F5, ("t",), 3, nonzero=True) * g
        d = a.gcd(b)
        assert d.lead() == F5.one()
        assert a.divmod(d)[1].is_zero()
        assert b.divmod(d)[1].is_zero()
        assert d.divmod(g.monic())[1].is_zero()


def test_rational_roots_exact():
    t = _t(QQ)
    half3 = _c(QQ, QQ(3) / QQ(2))
    # (t - 2)(t + 3/2)^2 (t^2 + 1)
    p = (t - _c(QQ, 2)) * (t + half3) * (t + half3) * (t * t + _c(QQ, 1))
    roots, rem = rational_roots(p)
    by_val = {str(r): m for r, m in roots}
    assert by_val == {"2": 1, "-3/2": 2}
    assert rem.degree() == 2  # the irreducible t^2 + 1 survives


def test_factor_over_finite_field_reassembles():
    rng = random.Random(47)
    for q in range(25):
        p = random_poly(rng, F5, ("t",), 6, nonzero=True)
        if p.degree() < 1:
            continue
        pm = p.monic()
        fac, lead = factor(pm)
        assert lead == F5.one()
        prod = Poly.const(F5, ("t",), F5.one())
        for g, m in fac:
            assert is_irreducible(g)
            for _ in range(m):
                prod = prod * g
        assert prod == pm


def test_roots_in_field_edge_cubic():
    # c^3 - 3c - 1 has no rational root but splits over F_17
    over_q = Poly(QQ, ("c",), {(3,): QQ(1), (1,): QQ(-3), (0,): QQ(-1)})
    roots, nonsplit = roots_in_field(over_q)
    assert roots == [] and nonsplit == 3

    over_17 = Poly(F17, ("c",), {(3,): F17(1), (1,): F17(-3),
                                 (0,): F17(-1)})
    roots17, nonsplit17 = roots_in_field(over_17)
    assert nonsplit17 == 0
    assert sorted(r.payload for r, _ in roots17) == [3, 4, 10]
    for r, m in roots17:
        assert m == 1
        assert over_17.eval({"c": r}).is_zero()


def test_is_irreducible_known_cases():
    t = _t(F5)
    assert is_irreducible(t * t + _c(F5, 2))
    assert not is_irreducible(t * t + _c(F5, 1))       # (t+2)(t+3)
    assert not is_irreducible((t + _c(F5, 1)) * (t + _c(F5, 2)))


def test_eval_is_a_homomorphism():
    rng = random.Random(3)
    for _ in range(20):
        a = random_poly(rng, F17, ("x", "y"), 3)
        b = random_poly(rng, F17, ("x", "y"), 3)
        pt = {"x": F17(rng.randrange(17)), "y": F17(rng.randrange(17))}
        assert (a * b).eval(pt) == a.eval(pt) * b.eval(pt)
        assert (a + b).eval(pt) == a.eval(pt) + b.eval(pt)


def test_derivative_leibniz():
    rng = random.Random(9)
    for _ in range(20):
        a = random_poly(rng, QQ, ("t",), 5)
        b = random_poly(rng, QQ, ("t",), 5)
        da, db = a.derivative("t"), b.derivative("t")
        assert (a * b).derivative("t") == da * b + a * db
