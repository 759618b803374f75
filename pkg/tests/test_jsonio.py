"""decode(encode(x)) == x for every object kind, plus canonical dumps."""

import json
import random
from fractions import Fraction

from atinfty.adeles import RationalFunction
from atinfty.fields import QQ, ExtensionField, PrimeField
from atinfty.infinity import phi_of_series
from atinfty.jsonio import (
    decode_biseries,
    decode_certificate,
    decode_chart_unit,
    decode_field,
    decode_operator,
    decode_poly,
    decode_ratfun,
    decode_series,
    decode_value,
    dumps,
    encode_biseries,
    encode_certificate,
    encode_chart_unit,
    encode_field,
    encode_operator,
    encode_poly,
    encode_ratfun,
    encode_series,
    encode_value,
)
from atinfty.operators import rank_on_window
from atinfty.polys import Poly
from atinfty.series import BiSeries, ChartUnit, TruncatedSeries

F5 = PrimeField(5)
F25 = ExtensionField(5, [2, 0, 1])
FIELDS = (QQ, F5, F25)


def _rand_value(rng, field):
    if field == QQ:
        return QQ(Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
    if isinstance(field, ExtensionField):
        out = field(0)
        g = field(1)
        for _ in range(field.degree):
            out = out + g * field(rng.randrange(field.p))
            g = g * field.gen()
        return out
    return field(rng.randrange(field.p))


def test_field_round_trip():
    for field in FIELDS:
        assert decode_field(encode_field(field)) == field
    assert encode_field(QQ) == {"kind": "q"}
    assert encode_field(F5) == {"kind": "fp", "p": 5}
    assert encode_field(F25)["modulus"] == [2, 0, 1]


def test_value_round_trip():
    rng = random.Random(31)
    for field in FIELDS:
        for _ in range(20):
            v = _rand_value(rng, field)
            assert decode_value(field, encode_value(v)) == v


def test_series_round_trip():
    rng = random.Random(32)
    for field in FIELDS:
        for _ in range(10):
            terms = {e: _rand_value(rng, field)
                     for e in range(3, -6, -1) if rng.random() < 0.5}
            s = TruncatedSeries.from_tdict(field, "t", terms,
                                           rng.randint(7, 12))
            assert decode_series(field, encode_series(s)) == s
    # ascending series round trip too
    asc = TruncatedSeries(QQ, "pi", {0: QQ(2), 3: QQ(-1)}, 9, inverted=False)
    assert decode_series(QQ, encode_series(asc)) == asc


def test_biseries_and_chart_unit_round_trip():
    rng = random.Random(33)
    for field in (QQ, F5):
        for _ in range(8):
            terms = {}
            for i in range(0, 4):
                for j in range(0, 4):
                    if 0 < i + j < 7 and rng.random() < 0.4:
                        v = _rand_value(rng, field)
                        if not v.is_zero():
                            terms[(i, j)] = v
            b = BiSeries(field, ("x", "y"), terms, 7)
            assert decode_biseries(field, encode_biseries(b)) == b
            scalar = _rand_value(rng, field)
            if scalar.is_zero():
                scalar = field(1)
            tail = {(-1, -1): field(2), (0, -3): field(1)}
            u = ChartUnit(field, "G12", scalar, rng.randint(-3, 3), tail, 8)
            assert decode_chart_unit(field, encode_chart_unit(u)) == u


def test_poly_and_ratfun_round_trip():
    rng = random.Random(34)
    for field in (QQ, F5):
        for _ in range(8):
            terms = {(i, j): _rand_value(rng, field)
                     for i in range(3) for j in range(3)
                     if rng.random() < 0.4}
            p = Poly(field, ("x", "y"), terms)
            assert decode_poly(field, encode_poly(p)) == p
        num = Poly.from_coeffs(field, "t", [1, 2, 1])
        den = Poly.from_coeffs(field, "t", [0, 1])
        f = RationalFunction(num, den)
        assert decode_ratfun(field, encode_ratfun(f)) == f


def _sample_operator(field):
    f = TruncatedSeries.from_tdict(
        field, "t", {2: field(2), 0: field(1), -3: field(3)}, 10)
    return phi_of_series(f, window=20).op


def test_operator_round_trip_and_row_equality():
    from atinfty.jsonio import operator_rows_equal

    for field in FIELDS:
        op = _sample_operator(field)
        obj = encode_operator(op, window=12)
        back = decode_operator(field, obj)
        assert operator_rows_equal(op, back, 12)
        assert back.window == 12 and back.delta == op.delta
        assert back.label == op.label
        # rows are judged on content, not on identity of the rule closure
        assert back.apply_index(0) == op.apply_index(0)


def test_certificate_round_trip():
    from atinfty.adeles import prop71_check

    for field in (QQ, F5):
        # a proved certificate with a nonempty image basis
        cert = prop71_check(field, window=8).defect
        back = decode_certificate(field, encode_certificate(cert))
        assert back == cert
        # a stable rank-0 certificate from a genuinely zero commutator
        op = _sample_operator(field)
        zero = op.compose(op) - op.compose(op)
        cert0 = rank_on_window(zero, 8)
        assert cert0.rank == 0
        assert decode_certificate(field, encode_certificate(cert0)) == cert0


def test_dumps_is_canonical():
    obj = {"b": 1, "a": [1, 2], "c": {"y": 0, "x": 1}}
    text = dumps(obj)
    assert text.endswith("\n")
    assert text == dumps({"c": {"x": 1, "y": 0}, "a": [1, 2], "b": 1})
    assert json.loads(text) == obj
    lines = text.splitlines()
    assert lines[0] == "{" and lines[1].startswith('  "a"')


def test_encoded_documents_are_json_stable():
    op = _sample_operator(QQ)
    a = dumps(encode_operator(op, window=10))
    b = dumps(encode_operator(_sample_operator(QQ), window=10))
    assert a == b
