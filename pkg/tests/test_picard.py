"""Cocycle factorization on the overlap chart and the Picard group law."""

import random

import pytest

from atinfty.errors import MalformedCocycle, NotInFiltrationLevel
from atinfty.fields import QQ, PrimeField
from atinfty.picard import (
    factor_cocycle,
    pic_identity,
    pic_inv,
    pic_mul,
    verify_partition_of_graded,
)
from atinfty.series import ChartUnit, chart_embed
from atinfty.suites import (
    random_chart_unit_g1,
    random_chart_unit_g2,
    random_cocycle,
)

F5 = PrimeField(5)


@pytest.mark.parametrize("field", [QQ, F5])
def test_partition_of_graded_small(field):
    rep = verify_partition_of_graded(8, field)
    assert rep.ok()
    assert [lv.level for lv in rep.levels] == list(range(1, 9))
    lo, hi = rep.probe_range
    for lv in rep.levels:
        # the three stored ranges abut: .. 0 | 1 .. m-1 | m ..
        assert lv.g1_exponents == [lo, 0]
        assert lv.g_exponents == [1, lv.level - 1]
        assert lv.g2_exponents == [lv.level, hi]
        assert lv.partition_ok and lv.construction_ok


@pytest.mark.parametrize("field", [QQ, F5])
def test_factor_soundness(field):
    rng = random.Random(2718)
    for _ in range(12):
        c = random_cocycle(rng, field, 10)
        fr = factor_cocycle(c)
        assert fr.verify(c)
        # residual is the identity to the stated order
        assert fr.residual.agrees_with(
            ChartUnit.one(field, "G12", fr.order))


def test_factor_uniqueness_of_pic_class():
    rng = random.Random(314)
    for _ in range(10):
        c = random_cocycle(rng, QQ, 10)
        fr = factor_cocycle(c)
        u1 = random_chart_unit_g1(rng, QQ, 10)
        u2 = random_chart_unit_g2(rng, QQ, 10)
        moved = chart_embed(u1) * c * chart_embed(u2)
        fr2 = factor_cocycle(moved)
        n1, g1 = fr.pic_class()
        n2, g2 = fr2.pic_class()
        assert n1 == n2
        assert g1.agrees_with(g2)


def test_group_law_matches_factorization():
    rng = random.Random(16180)
    for _ in range(8):
        c1 = random_cocycle(rng, QQ, 9)
        c2 = random_cocycle(rng, QQ, 9)
        fr1 = factor_cocycle(c1)
        fr2 = factor_cocycle(c2)
        fr12 = factor_cocycle(c1 * c2)
        prod = pic_mul(fr1.pic_class(), fr2.pic_class())
        n, g = fr12.pic_class()
        assert n == prod[0]
        assert g.agrees_with(prod[1])


def test_pic_inverse_and_identity():
    rng = random.Random(41)
    e = pic_identity(QQ, 9)
    for _ in range(8):
        c = random_cocycle(rng, QQ, 9)
        a = factor_cocycle(c).pic_class()
        ainv = pic_inv(a)
        prod = pic_mul(a, ainv)
        assert prod[0] == 0
        assert prod[1].agrees_with(e[1])


def test_nontrivial_class_detected():
    # 2 (x/y)^3 (1 + x^-1 y^-1) is not a coboundary: n = 3 and the
    # x^-1 y^-1 term sits in the middle (G) range of its level
    c = ChartUnit(QQ, "G12", QQ(2), 3, {(-1, -1): QQ(1)}, 10)
    fr = factor_cocycle(c)
    assert fr.n == 3
    assert fr.scalar == QQ(2)
    assert fr.g.coeff(1, 1) == QQ(1)
    assert fr.verify(c)


def test_malformed_cocycles_rejected():
    with pytest.raises(MalformedCocycle):
        ChartUnit(QQ, "G12", QQ(1), 0, {(2, -1): QQ(1)}, 8)  # level -1 term
    u = random_cocycle(random.Random(1), QQ, 8)
    with pytest.raises(NotInFiltrationLevel):
        u.graded_piece(0)
    with pytest.raises(NotInFiltrationLevel):
        u.graded_piece(9)
