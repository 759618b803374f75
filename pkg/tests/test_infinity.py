"""The series <-> operator correspondence modulo finite rank."""

import random

import pytest

from atinfty.errors import NotStabilized, PrecisionExhausted, WindowExceeded
from atinfty.fields import QQ, PrimeField
from atinfty.infinity import (
    calkin_class_from_operator,
    calkin_equal,
    phi_of_series,
    phi_two_charts,
    laurent_of_two_charts,
    residue_pairing_at_infinity,
    series_of_operator,
    verify_homomorphism,
)
from atinfty.operators import BasisScheme, WindowedOperator, multiplication_operator
from atinfty.polys import Poly
from atinfty.series import TruncatedSeries
from atinfty.suites import random_series

F5 = PrimeField(5)
MONO = BasisScheme("mono1d", "t")


def test_action_on_basis_matches_truncation_rule():
    # f = t^2 + 3 t^-1: phi(f) t^m = t^(m+2) + 3 t^(m-1), the second term
    # dropped when m - 1 < 0 i.e. the truncated shift kills low rows
    f = TruncatedSeries.from_tdict(QQ, "t", {2: QQ(1), -1: QQ(3)}, 8)
    op = phi_of_series(f, window=12).op
    assert op.apply_index(0) == {2: QQ(1)}
    assert op.apply_index(1) == {3: QQ(1), 0: QQ(3)}
    assert op.apply_index(4) == {6: QQ(1), 3: QQ(3)}


@pytest.mark.parametrize("field", [QQ, F5])
def test_round_trip_random(field):
    rng = random.Random(90125)
    for _ in range(25):
        f = random_series(rng, field, pole=4, prec=10)
        cls = phi_of_series(f, window=26)
        back = series_of_operator(cls, 10)
        assert back == f


def test_rank_law():
    rng = random.Random(4)
    seen_pole = seen_poly = False
    for _ in range(30):
        f = random_series(rng, QQ, pole=3, prec=9)
        cls = phi_of_series(f, window=20)
        has_tail = any(n < 0 and not f.tcoeff(n).is_zero()
                       for n in range(-f.prec + f.pole_order() + 1, 0))
        rank = cls.commutator_rank()
        _, cert = cls.membership.generator_certs[0]
        assert cert.proved
        if has_tail:
            seen_pole = True
            assert rank == 1
        else:
            seen_poly = True
            assert rank == 0
    assert seen_pole and seen_poly


def test_polynomial_case_commutes_exactly():
    t = Poly.variable(QQ, ("t",), "t")
    p = t * t * t + t.scale(QQ(2))
    f = TruncatedSeries.from_poly(p, 8)
    cls = phi_of_series(f, window=18)
    assert cls.commutator_rank() == 0
    back = series_of_operator(cls, 8)
    assert back == f


def test_distinct_multiplications_are_distinct():
    t = Poly.variable(QQ, ("t",), "t")
    a = multiplication_operator(MONO, t, 20)
    b = multiplication_operator(MONO, t * t, 20)
    verdict = calkin_equal(a, b, 16)
    assert verdict.status != "Equivalent"


def test_flip_operator_rejected():
    def flip(m):
        return {m + 1: QQ.one()} if m % 2 == 0 else {m - 1: QQ.one()}

    op = WindowedOperator(QQ, MONO, MONO, flip, 24, 1, "flip")
    cls = calkin_class_from_operator(op)
    with pytest.raises(NotStabilized):
        series_of_operator(cls, 6)


def test_window_too_small_raises():
    f = TruncatedSeries.from_tdict(QQ, "t", {-1: QQ(1)}, 10)
    cls = phi_of_series(f, window=12)
    with pytest.raises(WindowExceeded):
        series_of_operator(cls, 10)   # needs window >= 20


def test_noisy_operator_recovers_series():
    # phi(f) plus a rank-1 perturbation supported in low degrees still
    # recovers f: the probe rows sit above the noise
    rng = random.Random(66)
    for _ in range(10):
        f = random_series(rng, QQ, pole=2, prec=8)
        base = phi_of_series(f, window=24).op

        def noisy(m, b=base):
            img = dict(b.apply_index(m))
            if m <= 2:
                img[0] = img.get(0, QQ(0)) + QQ(7)
            return img

        op = WindowedOperator(QQ, MONO, MONO, noisy, 24, base.delta, "noisy")
        cls = calkin_class_from_operator(op)
        assert series_of_operator(cls, 8) == f


@pytest.mark.parametrize("field", [QQ, F5])
def test_homomorphism_defect_bound(field):
    rng = random.Random(31337)
    for _ in range(12):
        f = random_series(rng, field, pole=2, prec=8, ensure_pole=True)
        g = random_series(rng, field, pole=3, prec=8, ensure_pole=True)
        rep = verify_homomorphism(f, g, window=18)
        assert rep.ok()
        assert rep.rank <= max(f.pole_order(), 0) * max(g.pole_order(), 0) \
            + (0 if f.pole_order() and g.pole_order() else 1)
        assert rep.rank <= rep.bound_dim or rep.bound_dim == 0


def test_homomorphism_exact_known_case():
    # f = g = t^-1: phi(f)phi(g) - phi(t^-2) kills t^1 twice over, the
    # defect is the rank-1 map picking out the m = 1 row
    f = TruncatedSeries.from_tdict(QQ, "t", {-1: QQ(1)}, 10)
    rep = verify_homomorphism(f, f, window=24)
    assert rep.ok() and rep.rank == 0


def test_residue_pairing():
    # res_inf = minus the t^-1 coefficient of the product
    f = TruncatedSeries.from_tdict(QQ, "t", {-1: QQ(5), -3: QQ(2)}, 10)
    t = Poly.variable(QQ, ("t",), "t")
    assert residue_pairing_at_infinity(f, t * t) == QQ(-2)
    assert residue_pairing_at_infinity(f, Poly.const(QQ, ("t",), QQ(1))) == QQ(-5)
    g = TruncatedSeries.from_tdict(QQ, "t", {0: QQ(1)}, 10)
    assert residue_pairing_at_infinity(g, t).is_zero()


def test_two_charts_round_trip():
    rng = random.Random(12)
    for _ in range(10):
        terms = {}
        for n in range(-4, 5):
            if rng.random() < 0.5:
                c = QQ(rng.randint(-5, 5))
                if not c.is_zero():
                    terms[n] = c
        pair = phi_two_charts(terms, QQ, window=18)
        back = laurent_of_two_charts(pair, 8)
        assert back == {n: c for n, c in terms.items()}
