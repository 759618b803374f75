"""Field arithmetic: axioms over Q, F_p and F_q, plus norm/trace/Frobenius
and the CLI field-spec syntax."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from atinfty.errors import (
    DescriptorMismatch,
    DivisionByZero,
    NotAnExtensionField,
    ParseError,
)
from atinfty.fields import (
    QQ,
    ExtensionField,
    PrimeField,
    field_from_spec,
    frobenius,
    norm_to_base,
    trace_to_base,
)
from conftest import (
    all_field_elements,
    frobenius_orbit_product,
    frobenius_orbit_sum,
)

F5 = PrimeField(5)
F25 = ExtensionField(5, [2, 0, 1])  # z^2 + 2


def _sample(rng, field, n):
    if field == QQ:
        return [QQ(Fraction(rng.randint(-30, 30), rng.randint(1, 12)))
                for _ in range(n)]
    if hasattr(field, "degree"):
        return [field([rng.randrange(field.p) for _ in range(field.degree)])
                for _ in range(n)]
    return [field(rng.randrange(field.p)) for _ in range(n)]


@pytest.mark.parametrize("field", [QQ, F5, PrimeField(17), F25,
                                   ExtensionField(2, [1, 1, 0, 1])])
def test_ring_axioms(field):
    rng = random.Random(101)
    xs = _sample(rng, field, 40)
    for a, b, c in zip(xs, xs[1:], xs[2:]):
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + field.zero() == a
        assert a * field.one() == a
        assert a - a == field.zero()
        if not a.is_zero():
            assert a * a.inv() == field.one()
            assert (a ** -3) * (a ** 3) == field.one()


@pytest.mark.parametrize("field", [QQ, F5, F25])
def test_division_by_zero_raises(field):
    with pytest.raises(DivisionByZero):
        field.zero().inv()


def test_prime_field_fermat():
    for p in (2, 3, 5, 17):
        F = PrimeField(p)
        for a in all_field_elements(F):
            if not a.is_zero():
                assert a ** (p - 1) == F.one()


def test_extension_generator_satisfies_modulus():
    z = F25.gen()
    assert z * z + F25(2) == F25.zero()
    assert F25.q == 25 and F25.degree == 2


def test_frobenius_is_additive_and_fixes_base():
    rng = random.Random(77)
    for a, b in zip(_sample(rng, F25, 20), _sample(rng, F25, 21)):
        assert frobenius(a + b) == frobenius(a) + frobenius(b)
        assert frobenius(a * b) == frobenius(a) * frobenius(b)
    for i in range(5):
        assert frobenius(F25(i)) == F25(i)


def test_norm_and_trace_match_frobenius_orbits():
    for F in (F25, ExtensionField(2, [1, 1, 0, 1]),
              ExtensionField(3, [1, 2, 0, 1])):
        for a in all_field_elements(F):
            s = frobenius_orbit_sum(a)
            pr = frobenius_orbit_product(a)
            # both land in the prime field
            assert s == F(trace_to_base(a).payload)
            assert pr == F(norm_to_base(a).payload)


def test_trace_is_linear_and_norm_multiplicative():
    rng = random.Random(5)
    xs = _sample(rng, F25, 30)
    for a, b in zip(xs, xs[1:]):
        assert (trace_to_base(a + b)
                == trace_to_base(a) + trace_to_base(b))
        assert norm_to_base(a * b) == norm_to_base(a) * norm_to_base(b)


def test_field_spec_round_trips():
    assert field_from_spec("q") == QQ
    assert field_from_spec("fp:7") == PrimeField(7)
    assert field_from_spec("fq:5:z^2+2") == F25
    # degree form picks a fixed modulus deterministically
    assert field_from_spec("fq:5:2") == field_from_spec("fq:5:2")
    assert field_from_spec("fq:2:6").q == 64


def test_field_spec_errors():
    with pytest.raises(ParseError):
        field_from_spec("octonions")
    with pytest.raises(NotAnExtensionField):
        field_from_spec("fq:5:z^2-1")  # reducible
    with pytest.raises(DescriptorMismatch):
        F25(F5(2)) * F25.gen() + PrimeField(7)(1) * F25.one()


@given(st.fractions(max_denominator=10**4), st.fractions(max_denominator=10**4))
def test_rationals_mirror_fraction_arithmetic(x, y):
    a, b = QQ(x), QQ(y)
    assert (a + b).payload == x + y
    assert (a * b).payload == x * y
    assert (a - b).payload == x - y
    if y != 0:
        assert (a / b).payload == x / y
