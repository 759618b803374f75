"""Windowed operators: algebra laws, rank certificates, and the exact
linear algebra they rest on."""

import random
from itertools import combinations

import pytest

from atinfty.fields import QQ, PrimeField
from atinfty.linalg import exact_rank, rank_by_minors, rref_kernel
from atinfty.operators import (
    BasisScheme,
    WindowedOperator,
    commutator,
    h0_membership,
    identity_operator,
    multiplication_operator,
    rank_on_window,
)
from atinfty.polys import Poly
from atinfty.suites import random_poly
from conftest import clip_matrix, operator_matrix

F5 = PrimeField(5)
MONO = BasisScheme("mono1d", "t")


def _random_operator(rng, field, window, delta=1, density=0.5):
    table = {}
    for m in range(window + delta + 1):
        img = {}
        for j in range(max(0, m - 3), m + delta + 1):
            if rng.random() < density:
                c = field(rng.randint(-4, 4)) if field == QQ else \
                    field(rng.randrange(field.p))
                if not c.is_zero():
                    img[j] = c
        table[m] = img
    return WindowedOperator(field, MONO, MONO,
                            lambda m, t=table: dict(t.get(m, {})),
                            window, delta, "rnd")


@pytest.mark.parametrize("field", [QQ, F5])
def test_operator_algebra_laws(field):
    rng = random.Random(2025)
    for _ in range(12):
        a = _random_operator(rng, field, 14)
        b = _random_operator(rng, field, 14)
        c = _random_operator(rng, field, 14)
        w = min((a + b).window, 10)
        lhs = (a + b).compose(c)
        rhs = a.compose(c) + b.compose(c)
        for m in range(w + 1):
            assert lhs.apply_index(m) == rhs.apply_index(m)
        lhs2 = c.compose(a + b)
        rhs2 = c.compose(a) + c.compose(b)
        for m in range(min(lhs2.window, 10) + 1):
            assert lhs2.apply_index(m) == rhs2.apply_index(m)


def test_identity_and_multiplication_operator():
    t = Poly.variable(QQ, ("t",), "t")
    L = multiplication_operator(MONO, t * t + Poly.const(QQ, ("t",), QQ(3)),
                                16)
    ident = identity_operator(QQ, MONO, 16)
    comp = L.compose(ident)
    for m in range(comp.window + 1):
        assert comp.apply_index(m) == L.apply_index(m)
    # L_p L_q = L_{pq}
    q = t + Poly.const(QQ, ("t",), QQ(-1))
    Lq = multiplication_operator(MONO, q, 16)
    Lpq = multiplication_operator(MONO, (t * t + Poly.const(QQ, ("t",), QQ(3))) * q, 16)
    prod = L.compose(Lq)
    for m in range(prod.window + 1):
        assert prod.apply_index(m) == Lpq.apply_index(m)


def test_commutator_of_multiplications_vanishes():
    t = Poly.variable(F5, ("t",), "t")
    p = t * t + Poly.const(F5, ("t",), F5(2))
    q = t * t * t + t
    c = commutator(multiplication_operator(MONO, p, 18),
                   multiplication_operator(MONO, q, 18))
    cert = rank_on_window(c, min(10, c.window))
    assert cert.rank == 0 and cert.stable


def test_rank_windows_are_monotone():
    rng = random.Random(31)
    for _ in range(10):
        a = _random_operator(rng, QQ, 14)
        cert = rank_on_window(a, 10)
        ranks = [cert.ranks_at[w] for w in sorted(cert.ranks_at)]
        assert all(x <= y for x, y in zip(ranks, ranks[1:]))


def test_rank_subadditive():
    rng = random.Random(97)
    for _ in range(10):
        a = _random_operator(rng, F5, 12)
        b = _random_operator(rng, F5, 12)
        ra = rank_on_window(a, 8).rank
        rb = rank_on_window(b, 8).rank
        rab = rank_on_window(a + b, 8).rank
        assert rab <= ra + rb


def test_structural_bound_upgrades_to_proof():
    rng = random.Random(11)
    a = _random_operator(rng, QQ, 12)

    def rule(m):
        img = a.apply_index(m)
        return {0: sum(img.values(), QQ(0))}

    bounded = WindowedOperator(QQ, MONO, MONO, rule, 12, 0,
                               "row-sum").with_bound((0,))
    cert = rank_on_window(bounded, 8)
    assert cert.proved
    assert cert.rank <= 1
    unproved = WindowedOperator(QQ, MONO, MONO, rule, 12, 0, "row-sum")
    cert2 = rank_on_window(unproved, 8)
    assert not cert2.proved and cert2.stable


def test_membership_flip_not_stable():
    def flip(m):
        return {m + 1: QQ.one()} if m % 2 == 0 else {m - 1: QQ.one()}

    op = WindowedOperator(QQ, MONO, MONO, flip, 20, 1, "flip")
    gen = Poly.variable(QQ, ("t",), "t")
    rep = h0_membership(op, [gen], 16)
    assert not rep.verdict()


@pytest.mark.parametrize("field", [QQ, F5])
def test_exact_rank_matches_minor_oracle(field):
    rng = random.Random(123)
    for _ in range(40):
        n = rng.randint(1, 6)
        m = rng.randint(1, 6)
        rows = [[field(rng.randint(-3, 3)) if field == QQ
                 else field(rng.randrange(field.p))
                 for _ in range(m)] for _ in range(n)]
        assert exact_rank(rows, field) == rank_by_minors(rows, field)


def test_rref_kernel_annihilates():
    rng = random.Random(55)
    for _ in range(15):
        n, m = rng.randint(2, 5), rng.randint(2, 6)
        rows = [[QQ(rng.randint(-3, 3)) for _ in range(m)] for _ in range(n)]
        ker = rref_kernel(rows, QQ, m)
        assert len(ker) == m - exact_rank(rows, QQ)
        for vec in ker:
            for row in rows:
                acc = QQ(0)
                for a, b in zip(row, vec):
                    acc = acc + a * b
                assert acc.is_zero()


def test_operator_matrix_rank_equals_certificate():
    rng = random.Random(202)
    for _ in range(8):
        a = _random_operator(rng, F5, 10)
        cert = rank_on_window(a, 7)
        rows = operator_matrix(a, 7)
        assert exact_rank(rows, F5) == cert.ranks_at[7]
        sub = clip_matrix(rows, 8)
        assert exact_rank(sub, F5) == rank_by_minors(sub, F5)


def test_compose_window_shrinks_by_delta():
    rng = random.Random(6)
    a = _random_operator(rng, QQ, 12, delta=2)
    b = _random_operator(rng, QQ, 12, delta=1)
    comp = a.compose(b)
    assert comp.window == min(b.window, a.window - b.delta)
    assert comp.delta == a.delta + b.delta
