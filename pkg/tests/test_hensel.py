"""Laurent-series roots by Newton-polygon slopes and Hensel--Newton
lifting, and the exact-kernel algebraicity witness search."""

import random

import pytest

from atinfty import hensel as hensel_mod
from atinfty.almost import char_phi_h
from atinfty.errors import NotMonic, WildBranch
from atinfty.fields import QQ, PrimeField
from atinfty.hensel import (
    algebraicity_witness,
    laurent_roots,
    pseudo_remainder,
    root_witness_pipeline,
)
from atinfty.polys import Poly
from atinfty.series import TruncatedSeries

F17 = PrimeField(17)
F5 = PrimeField(5)


def _pq(terms, field=QQ, vars=("x", "y")):
    return Poly(field, vars, {e: field(c) for e, c in terms.items()})


P1 = _pq({(2, 0): 1, (0, 2): -1, (0, 1): -2})            # x^2 - y^2 - 2y
P2_TERMS = {(3, 0): 1, (1, 2): -3, (0, 3): -1, (0, 1): -1}


def test_p1_two_branches_exact_to_depth():
    rr = laurent_roots(P1, 20)
    assert len(rr) == 2 and not rr.unresolved
    for h in rr:
        resid = char_phi_h(h, P1)
        assert resid.is_zero() and resid.prec >= 20
    # the two branches are y + 1 - ... and its negative mirror
    leads = sorted(str(h.tcoeff(1)) for h in rr)
    assert leads == ["-1", "1"]


def test_newton_residual_at_least_doubles():
    laurent_roots(P1, 24)
    assert hensel_mod.LAST_NEWTON_VALUATIONS
    for slope, vals in hensel_mod.LAST_NEWTON_VALUATIONS:
        assert slope == 1
        assert len(vals) >= 3
        for v, v2 in zip(vals, vals[1:]):
            assert v2 >= 2 * v or v2 >= 24


def test_deeper_request_extends_the_same_branch():
    shallow = laurent_roots(P1, 6)
    deep = laurent_roots(P1, 26)
    for hs in shallow:
        match = [hd for hd in deep if hd.tcoeff(1) == hs.tcoeff(1)]
        assert len(match) == 1
        hd = match[0]
        for n in range(1, -5, -1):
            assert hs.tcoeff(n) == hd.tcoeff(n)


def test_p2_wild_over_q_but_splits_mod_17():
    with pytest.raises(WildBranch) as exc:
        laurent_roots(_pq(P2_TERMS), 12)
    kinds = {u.kind for u in exc.value.unresolved}
    assert kinds == {"edge-root-not-in-field"}

    rr = laurent_roots(_pq(P2_TERMS, F17), 14)
    assert len(rr) == 3 and not rr.unresolved
    assert sorted(h.tcoeff(1).payload for h in rr) == [3, 4, 10]
    for h in rr:
        assert char_phi_h(h, _pq(P2_TERMS, F17)).is_zero()


def test_fractional_slope_rejected():
    with pytest.raises(WildBranch) as exc:
        laurent_roots(_pq({(2, 0): 1, (0, 1): -1}), 8)   # x^2 = y
    assert {u.kind for u in exc.value.unresolved} == {"puiseux-slope"}


def test_repeated_edge_root_rejected():
    with pytest.raises(WildBranch) as exc:
        laurent_roots(_pq({(2, 0): 1, (1, 1): -2, (0, 2): 1}), 8)
    assert {u.kind for u in exc.value.unresolved} == {"multiple-edge-root"}


def test_partial_resolution_keeps_good_branch():
    # (x - y)(x^2 - y) has one integer-slope branch and one Puiseux branch
    p = _pq({(1, 0): 1, (0, 1): -1}) * _pq({(2, 0): 1, (0, 1): -1})
    rr = laurent_roots(p, 10)
    assert len(rr) == 1
    assert {u.kind for u in rr.unresolved} == {"puiseux-slope"}
    assert rr[0].tcoeff(1) == QQ(1)


def test_non_monic_rejected():
    with pytest.raises(NotMonic):
        laurent_roots(_pq({(2, 1): 1, (0, 0): 1}), 8)   # lead y x^2
    with pytest.raises(NotMonic):
        laurent_roots(Poly(QQ, ("x", "y"), {}), 8)


def test_random_split_products_recover_all_roots():
    # split polynomials: products of (x - h_i) for polynomial branches
    # with pairwise distinct (slope, leading coefficient), so every
    # Newton-polygon edge root is simple and every branch must lift
    rng = random.Random(5150)
    x = Poly.variable(QQ, ("x", "y"), "x")
    for _ in range(10):
        n = rng.randint(2, 4)
        branches = []
        seen = set()
        while len(branches) < n:
            slope = rng.randint(0, 2)
            lead = QQ(rng.choice([c for c in range(-4, 5) if c]))
            if (slope, lead) in seen:
                continue
            seen.add((slope, lead))
            terms = {slope: lead}
            for e in range(slope - 1, -1, -1):
                c = QQ(rng.randint(-3, 3))
                if not c.is_zero():
                    terms[e] = c
            branches.append(TruncatedSeries.from_tdict(QQ, "y", terms, 40))
        p = Poly(QQ, ("x", "y"), {(0, 0): QQ(1)})
        for h in branches:
            hp = Poly(QQ, ("x", "y"),
                      {(0, e): h.tcoeff(e) for e in range(0, 3)
                       if not h.tcoeff(e).is_zero()})
            p = p * (x - hp)
        rr = laurent_roots(p, 20)
        assert len(rr) == n and not rr.unresolved

        def key(h):
            return tuple(str(h.tcoeff(e)) for e in range(2, -1, -1))

        found = {key(h): h for h in rr}
        for h in branches:
            got = found[key(h)]
            for e in range(3, -5, -1):
                assert got.tcoeff(e) == h.tcoeff(e)


def test_witness_for_p1_roots():
    rr = laurent_roots(P1, 30)
    for h in rr:
        w = algebraicity_witness(h, 2, 2)
        assert w is not None
        assert pseudo_remainder(P1, w.rename("x", "y"), "x").is_zero()
        assert char_phi_h(h, w.rename("x", "y")).is_zero()


def test_witness_canonical_normalization():
    rr = laurent_roots(P1, 30)
    w1 = algebraicity_witness(rr[0], 2, 2)
    w2 = algebraicity_witness(rr[0], 2, 2)
    assert w1 == w2  # deterministic
    # over Q: integer coprime coefficients, first nonzero positive
    coeffs = [c.payload for c in w1.terms.values()]
    assert all(c.denominator == 1 for c in coeffs)


def test_geometric_tail_has_degree_one_witness():
    terms = {1: QQ(1), 0: QQ(1)}
    terms.update({-k: QQ(1) for k in range(1, 28)})
    h = TruncatedSeries.from_tdict(QQ, "y", terms, 28)
    w = algebraicity_witness(h, 1, 2)
    assert w is not None
    assert char_phi_h(h, w.rename("x", "y")).is_zero()


def test_lacunary_series_has_no_small_witness():
    lac = TruncatedSeries.from_tdict(
        QQ, "y", {-(2 ** k): QQ(1) for k in range(0, 6)}, 40)
    assert algebraicity_witness(lac, 3, 3) is None


def test_pipeline_p1_and_f17():
    rep = root_witness_pipeline(P1, 20, 2, 2)
    assert rep.ok() and len(rep.entries) == 2
    rep17 = root_witness_pipeline(_pq(P2_TERMS, F17), 14, 3, 3)
    assert rep17.ok() and len(rep17.entries) == 3
    for e in rep17.entries:
        assert e.divides and e.residual_zero
