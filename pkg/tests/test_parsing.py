"""Text input format: expressions with precision markers, their error
positions, and print/parse round trips for every object kind."""

import random
from fractions import Fraction

import pytest

from atinfty.errors import ParseError
from atinfty.fields import QQ, ExtensionField, PrimeField, field_from_spec
from atinfty.parsing import (
    parse_biseries,
    parse_chart_unit,
    parse_field_value,
    parse_poly,
    parse_ratfun,
    parse_series,
)
from atinfty.polys import Poly
from atinfty.series import BiSeries, ChartUnit, TruncatedSeries

F5 = PrimeField(5)
F25 = ExtensionField(5, [2, 0, 1])


# -- field values --------------------------------------------------------------------


def test_field_value_forms():
    assert parse_field_value("-3/4", QQ) == QQ(Fraction(-3, 4))
    assert parse_field_value("7", QQ) == QQ(7)
    assert parse_field_value("3 mod 5", F5) == F5(3)
    assert parse_field_value("12", F5) == F5(2)
    z = F25.gen()
    assert parse_field_value("z^2+1", F25) == z * z + F25(1)
    assert parse_field_value("2*z+3", F25) == F25(2) * z + F25(3)


def test_field_value_errors():
    with pytest.raises(ParseError):
        parse_field_value("3 mod 7", F5)
    with pytest.raises(ParseError):
        parse_field_value("z+1", F5)       # no generator in a prime field
    with pytest.raises(ParseError):
        parse_field_value("1/0", QQ)
    with pytest.raises(ParseError):
        parse_field_value("2+O(t^-3)", QQ)


def test_field_spec_round_trips():
    assert field_from_spec("q") == QQ
    assert field_from_spec("fp:5") == F5
    assert field_from_spec("fq:5:z^2+2") == F25
    by_degree = field_from_spec("fq:5:2")
    assert by_degree.q == 25
    assert field_from_spec("fq:5:2") == by_degree      # deterministic
    assert field_from_spec("fq:2:6").q == 64


# -- series ----------------------------------------------------------------------------


def test_series_marker_sets_precision():
    s = parse_series("t^2+1+3*t^-4+O(t^-9)", QQ)
    assert s.prec == 9
    assert s.tcoeff(2) == QQ(1) and s.tcoeff(-4) == QQ(3)
    assert s.tcoeff(-8) == QQ(0)          # inside the window: exactly zero
    from atinfty.errors import PrecisionExhausted

    with pytest.raises(PrecisionExhausted):
        s.tcoeff(-9)
    assert parse_series("t+1", QQ, default_prec=7).prec == 7


def test_series_expressions_evaluate():
    s = parse_series("(t+1)*(t-1)+O(t^-5)", QQ)
    assert s.tcoeff(2) == QQ(1) and s.tcoeff(0) == QQ(-1)
    geo = parse_series("1/(1-t^-1)+O(t^-6)", QQ)
    assert all(geo.tcoeff(-k) == QQ(1) for k in range(0, 6))
    sq = parse_series("(1+t^-1)^2+O(t^-8)", QQ)
    assert sq.tcoeff(-1) == QQ(2) and sq.tcoeff(-2) == QQ(1)


def test_series_round_trip_random():
    rng = random.Random(21)
    for field in (QQ, F5, F25):
        for _ in range(12):
            terms = {}
            for e in range(4, -7, -1):
                if rng.random() < 0.5:
                    if field == QQ:
                        c = QQ(Fraction(rng.randint(-9, 9),
                                        rng.randint(1, 6)))
                    elif field == F5:
                        c = F5(rng.randrange(5))
                    else:
                        c = F25(rng.randrange(5)) + F25.gen() * F25(
                            rng.randrange(5))
                    if not c.is_zero():
                        terms[e] = c
            s = TruncatedSeries.from_tdict(field, "t", terms,
                                           rng.randint(8, 15))
            assert parse_series(str(s), field) == s


def test_series_errors_carry_positions():
    with pytest.raises(ParseError) as e1:
        parse_series("t^2+*3", QQ)
    assert e1.value.pos == 4
    with pytest.raises(ParseError) as e2:
        parse_series("t^2+(1", QQ)
    assert e2.value.pos == 6
    with pytest.raises(ParseError) as e3:
        parse_series("t^2 @ 1", QQ)
    assert "'@'" in str(e3.value) and e3.value.pos == 4
    with pytest.raises(ParseError) as e4:
        parse_series("x+1+O(x^-4)", QQ, var="t")
    assert e4.value.pos == 4                  # marker names the wrong variable
    with pytest.raises(ParseError):
        parse_series("t+O(t^2)", QQ)          # marker must descend
    with pytest.raises(ParseError):
        parse_series("2*(1+O(t^-4))", QQ)     # marker buried in a product
    with pytest.raises(ParseError):
        parse_series("t+O(deg 4)", QQ)        # wrong marker species
    with pytest.raises(ParseError):
        parse_series("t^^2", QQ)              # malformed exponent


# -- polynomials and rational functions -------------------------------------------------


def test_poly_round_trip_and_eval():
    rng = random.Random(22)
    for field in (QQ, F5):
        for _ in range(10):
            terms = {}
            for i in range(0, 4):
                for j in range(0, 3):
                    if rng.random() < 0.4:
                        c = (QQ(rng.randint(-5, 5)) if field == QQ
                             else F5(rng.randrange(5)))
                        if not c.is_zero():
                            terms[(i, j)] = c
            p = Poly(field, ("x", "y"), terms)
            assert parse_poly(str(p), field, ("x", "y")) == p
    assert parse_poly("x^3-3*x*y^2-y^3-y", QQ, ("x", "y")) == Poly(
        QQ, ("x", "y"),
        {(3, 0): QQ(1), (1, 2): QQ(-3), (0, 3): QQ(-1), (0, 1): QQ(-1)})


def test_poly_rejects_markers_and_true_division():
    with pytest.raises(ParseError):
        parse_poly("x+O(deg 3)", QQ, ("x", "y"))
    with pytest.raises(ParseError):
        parse_poly("x/y", QQ, ("x", "y"))
    assert parse_poly("x/2", QQ, ("x", "y")) == Poly(
        QQ, ("x", "y"), {(1, 0): QQ(Fraction(1, 2))})


def test_ratfun_round_trip():
    rng = random.Random(23)
    for field in (QQ, F5):
        for _ in range(10):
            num = Poly.from_coeffs(
                field, "t",
                [rng.randint(-4, 4) if field == QQ else rng.randrange(5)
                 for _ in range(rng.randint(1, 4))])
            den = Poly.from_coeffs(
                field, "t",
                [rng.randint(-4, 4) if field == QQ else rng.randrange(5)
                 for _ in range(rng.randint(1, 3))] + [1])
            if num.is_zero():
                continue
            from atinfty.adeles import RationalFunction

            f = RationalFunction(num, den)
            assert parse_ratfun(str(f), field) == f
    f = parse_ratfun("(t^2-1)/(t^2+t)", QQ)
    assert str(f) == "(t-1)/(t)" or (f.num.degree(), f.den.degree()) == (1, 1)


# -- bivariate series and chart units ----------------------------------------------------


def test_biseries_round_trip():
    b = parse_biseries("1+2*x^-1*y^-1-x^-3+O(deg 8)", QQ)
    assert b.prec == 8
    assert b.coeff(1, 1) == QQ(2) and b.coeff(3, 0) == QQ(-1)
    assert parse_biseries(str(b), QQ) == b
    with pytest.raises(ParseError):
        parse_biseries("1+x*y^-2", QQ)        # positive exponent


def test_chart_unit_round_trip_and_level_marker():
    u = parse_chart_unit("3*x^2*y^-2*(1+x^-1*y^-2)+O(deg 10)", QQ)
    assert u.scalar == QQ(3) and u.mono == 2 and u.order == 10
    assert parse_chart_unit(str(u), QQ) == u
    v = parse_chart_unit("y^-1*x*(1-x^-2)+O(level 6)", QQ)
    assert v.order == 6 and v.mono == 1
    for field in (QQ, F5):
        one = ChartUnit.one(field, "G12", 9)
        assert parse_chart_unit(str(one), field) == one


def test_chart_unit_needs_unit_level_zero():
    with pytest.raises(ParseError):
        parse_chart_unit("x^-1*y^-1", QQ)       # no level-0 term
    with pytest.raises(ParseError):
        parse_chart_unit("x+y", QQ)             # two level-... pieces
