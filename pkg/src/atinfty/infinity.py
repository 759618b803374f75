"""The one-variable correspondence between Laurent series in t^-1 and
column-finite operators on k[t] modulo finite rank.

A series f = sum c_n t^n (finite pole part, tail known to a stated
precision) acts on the monomial basis by

    phi(f)(t^m) = sum_n c_n T_n(t^m),
    T_n(t^m) = t^(m+n) if m >= max(-n, 0), and 0 if 0 <= m <= -n-1,

so T_n is multiplication by t^n for n >= 0 and a truncated shift-down for
n < 0.  The operator built here is that of the truncated representative of
f (the finitely many known coefficients, an exact Laurent polynomial), so
any window is admissible; rows only ever touch known coefficients.

The inverse direction recovers the coefficients of f from high-degree rows
of the operator: finite-rank noise can pollute any fixed diagonal in at
most finitely many rows, so probe rows that agree pin the coefficient down,
and a final round-trip comparison in the quotient certifies the answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .errors import NotStabilized, PrecisionExhausted, WindowExceeded
from .fields import Field, Fv
from .operators import (
    EQUIVALENT,
    BasisScheme,
    CalkinVerdict,
    MembershipReport,
    RankCertificate,
    WindowedOperator,
    calkin_equal,
    h0_membership,
    rank_on_window,
)
from .polys import Poly
from .series import TruncatedSeries

DEFAULT_WINDOW = 20


def _printed_terms(f: TruncatedSeries) -> Dict[int, Fv]:
    """Known nonzero coefficients of f, keyed by printed exponent."""
    if f.inverted:
        return {-e: c for e, c in f.terms.items()}
    return dict(f.terms)


class CalkinClass1D:
    """An operator on the t-power basis together with its commutant
    certificates for the generator t.

    Instances built by phi_of_series carry a structural proof that the
    commutator with right multiplication by t has image inside k*t^0;
    instances wrapped around arbitrary operators carry whatever stability
    the window shows, and `member` records the verdict.
    """

    def __init__(self, op: WindowedOperator, membership: MembershipReport,
                 rep_terms: Optional[Dict[int, Fv]] = None):
        self.op = op
        self.membership = membership
        self.rep_terms = rep_terms  # printed-exponent dict when known

    @property
    def field(self) -> Field:
        return self.op.field

    @property
    def window(self) -> int:
        return self.op.window

    @property
    def member(self) -> bool:
        return self.membership.verdict()

    def commutator_rank(self) -> int:
        return max(c.rank for _, c in self.membership.generator_certs)

    def __repr__(self):
        return (f"CalkinClass1D({self.op.label}, window={self.op.window}, "
                f"member={self.member})")


def _t_poly(field: Field, var: str) -> Poly:
    return Poly.variable(field, (var,), var)


def phi_of_series(f: TruncatedSeries, window: Optional[int] = None) -> CalkinClass1D:
    """Operator of multiplication by f in the quotient, with certificates.

    Acts by the truncated representative of f; the commutator certificate
    [phi(f), R_t] is computed with the structural image bound {t^0} and is
    therefore proved, with rank 1 exactly when f has a nonzero coefficient
    in degrees < 0 (within precision) and 0 otherwise.
    """
    if not f.inverted:
        raise PrecisionExhausted(
            "phi_of_series expects a series in descending powers"
        )
    w = DEFAULT_WINDOW if window is None else window
    if w < 4:
        raise WindowExceeded(f"window {w} too small to certify stability")
    if f.prec < 1:
        raise PrecisionExhausted(f"series known to no coefficients (prec {f.prec})")
    field = f.field
    coeffs = _printed_terms(f)
    scheme = BasisScheme("mono1d", f.var)
    delta = max(f.pole_order(), 0)

    def rule(m, cs=coeffs):
        out = {}
        for n, c in cs.items():
            if m >= max(-n, 0):
                j = m + n
                s = out.get(j)
                out[j] = c if s is None else s + c
        return out

    op = WindowedOperator(field, scheme, scheme, rule, w, delta,
                          f"phi[{f}]")
    gen = _t_poly(field, f.var)
    membership = h0_membership(op, [gen], w - 1, bounds={str(gen): (0,)})
    return CalkinClass1D(op, membership, rep_terms=coeffs)


def calkin_class_from_operator(op: WindowedOperator) -> CalkinClass1D:
    """Wrap an arbitrary operator on the 1-d monomial scheme, computing the
    commutant certificate for the generator t on the available window."""
    gen = _t_poly(op.field, op.source.label or "t")
    membership = h0_membership(op, [gen], max(3, op.window - max(op.delta, 1)))
    return CalkinClass1D(op, membership)


def series_of_operator(psi: CalkinClass1D, target_prec: int) -> TruncatedSeries:
    """Recover the series f with psi = phi(f) modulo finite rank.

    Reads candidate coefficients c_n off the probe rows m = W-N .. W as the
    coefficient of t^(m+n) in psi(t^m), demands that every probe row report
    the same value, and certifies the answer by a round-trip comparison of
    psi against phi of the recovered series.  Raises NotStabilized when the
    rows disagree (window too small, or psi is not a multiplication
    operator modulo finite rank on this window).
    """
    n_prec = target_prec
    if n_prec < 1:
        raise PrecisionExhausted(f"target precision {n_prec} must be positive")
    if not psi.member:
        raise NotStabilized(
            "commutant certificate not stable: operator does not commute "
            "with R_t modulo finite rank on this window"
        )
    op = psi.op
    w = op.window
    if w < 2 * n_prec:
        raise WindowExceeded(
            f"window {w} too small for target precision {n_prec} "
            f"(need at least {2 * n_prec})"
        )
    field = op.field
    probe = list(range(w - n_prec, w + 1))
    images = {m: op.apply_index(m) for m in probe}
    zero = field.zero()

    recovered: Dict[int, Fv] = {}
    for n in range(-n_prec + 1, op.delta + 1):
        readings = [(m, images[m].get(m + n, zero)) for m in probe]
        vals = {str(v) for _, v in readings}
        if len(vals) > 1:
            raise NotStabilized(
                f"probe rows disagree on the coefficient of degree {n}: "
                + ", ".join(f"row {m} reads {v}" for m, v in readings[:4])
            )
        c = readings[0][1]
        if not c.is_zero():
            recovered[n] = c

    f = TruncatedSeries.from_tdict(field, op.source.label or "t",
                                   recovered, n_prec)

    # round trip: the difference must have stable finite rank on the window
    back = phi_of_series(f, window=min(w, n_prec + max(f.pole_order(), 0) + 4))
    w_rt = min(w, back.op.window)
    verdict = calkin_equal(op, back.op, w_rt)
    if verdict.status != EQUIVALENT:
        raise NotStabilized(
            "round-trip check failed: recovered series does not match the "
            f"operator modulo finite rank on window {w_rt}"
        )
    return f


@dataclass
class HomomorphismReport:
    """Certificate that phi(f)phi(g) equals phi(f g) modulo finite rank."""

    status: str
    rank: Optional[int]
    window: int
    bound_dim: int
    certificate: RankCertificate

    def ok(self) -> bool:
        return self.status == EQUIVALENT

    def __str__(self):
        if self.ok():
            return (f"equivalent: defect rank {self.rank} "
                    f"(image inside a {self.bound_dim}-dimensional space)")
        return f"inconclusive on window {self.window}"


def verify_homomorphism(f: TruncatedSeries, g: TruncatedSeries,
                        window: Optional[int] = None) -> HomomorphismReport:
    """Compare phi(f).phi(g) with phi(f*g) in the quotient.

    The product is taken exactly on the truncated representatives, so the
    comparison is exact.  The defect's image lies inside
    span{t^0, ..., t^(p-1)} with p the pole order of f: a defect term at
    row m arises from a tail coefficient of g at some r <= -m-1 meeting a
    coefficient of f at n <= pole(f), landing in degree m+n+r <= pole(f)-1,
    and degrees are always >= 0.  That bound is attached structurally, so
    the certificate is proved, not merely window-stable.
    """
    w = DEFAULT_WINDOW if window is None else window
    field = f.field
    pf = max(f.pole_order(), 0)
    pg = max(g.pole_order(), 0)

    # exact product of the truncated representatives
    tf, tg = _printed_terms(f), _printed_terms(g)
    prod: Dict[int, Fv] = {}
    for a, ca in tf.items():
        for b, cb in tg.items():
            s = prod.get(a + b)
            acc = ca * cb if s is None else s + ca * cb
            if acc.is_zero():
                prod.pop(a + b, None)
            else:
                prod[a + b] = acc
    prec_fg = (f.prec - 1) + (g.prec - 1) + 1
    fg = TruncatedSeries.from_tdict(field, f.var, prod, max(prec_fg, 1))

    A = phi_of_series(f, window=w + pg + 4)
    B = phi_of_series(g, window=w + 4)
    C = phi_of_series(fg, window=w + 4)
    defect = (A.op.compose(B.op) - C.op).with_bound(tuple(range(pf)),
                                                    "hom-defect")
    cert = rank_on_window(defect, min(w, defect.window))
    status = EQUIVALENT if cert.ok() else "Inconclusive"
    rank = cert.rank if cert.ok() else None
    return HomomorphismReport(status, rank, cert.window, pf, cert)


def residue_pairing_at_infinity(f: TruncatedSeries, p: Poly) -> Fv:
    """Residue at infinity of f * p dt: minus the coefficient of t^-1 in
    the product.  Needs the tail of f known past degree -1 - deg(p)."""
    field = f.field
    if p.is_zero():
        return field.zero()
    if len(p.vars) != 1:
        raise PrecisionExhausted("the 1-form must be univariate")
    d = p.total_degree()
    if f.prec < d + 2:
        raise PrecisionExhausted(
            f"precision {f.prec} too small for a degree-{d} form "
            f"(need at least {d + 2})"
        )
    total = field.zero()
    for e, c in p.terms.items():
        total = total + c * f.tcoeff(-1 - e[0])
    return -total


# -- two charts for k[t, t^-1] --------------------------------------------------


@dataclass
class TwoChartClasses:
    """Images of a Laurent polynomial under the correspondence in the two
    charts of the projective line: at infinity (series in t^-1, acting on
    k[t]) and at zero (substitute t -> t^-1 first, then the same machine)."""

    at_infinity: CalkinClass1D
    at_zero: CalkinClass1D


def phi_two_charts(terms: Dict[int, Fv], field: Field,
                   window: Optional[int] = None,
                   var: str = "t") -> TwoChartClasses:
    """Run the correspondence on both charts of k[t, t^-1].

    `terms` maps exponents to coefficients of an exact Laurent polynomial.
    """
    w = DEFAULT_WINDOW if window is None else window
    terms = {n: c for n, c in terms.items() if not c.is_zero()}
    lo = min(terms) if terms else 0
    hi = max(terms) if terms else 0
    prec_inf = max(1, -lo + 1) + 4
    prec_zero = max(1, hi + 1) + 4
    s_inf = TruncatedSeries.from_tdict(field, var, terms, prec_inf)
    s_zero = TruncatedSeries.from_tdict(field, var,
                                        {-n: c for n, c in terms.items()},
                                        prec_zero)
    return TwoChartClasses(at_infinity=phi_of_series(s_inf, w),
                           at_zero=phi_of_series(s_zero, w))


def laurent_of_two_charts(pair: TwoChartClasses,
                          target_prec: int) -> Dict[int, Fv]:
    """Recover the Laurent polynomial from its two chart operators.

    Each chart determines the coefficients on its side of 0; the overlap
    must agree, and the degree-growth bounds of the two operators confine
    the exponents to a finite range, so the recovery is exact once the
    target precision clears both bounds."""
    d_inf = pair.at_infinity.op.delta
    d_zero = pair.at_zero.op.delta
    need = max(d_inf, d_zero) + 2
    if target_prec < need:
        raise PrecisionExhausted(
            f"target precision {target_prec} below the degree bounds "
            f"(need at least {need})"
        )
    f_inf = series_of_operator(pair.at_infinity, target_prec)
    f_zero = series_of_operator(pair.at_zero, target_prec)
    a = _printed_terms(f_inf)
    b = {-n: c for n, c in _printed_terms(f_zero).items()}
    out = dict(a)
    for n, c in b.items():
        if n in out:
            if out[n] != c:
                raise NotStabilized(
                    f"charts disagree on the coefficient of degree {n}"
                )
        else:
            out[n] = c
    return out
