"""Operator presentations of modules over k[x,y] that are modules only up
to finite rank, and the exact-sequence check connecting them.

Two families are built here.  On the grid basis {e_ij}, a unit
g = 1 + sum lambda_ij x^-i y^-j twists the x-action:

    Phi_x(e_ij) = e_{i+1,j} - sum_{l=1}^{j} lambda_{i+1,l} e_{0,j-l},
    Phi_y(e_ij) = e_{i,j+1},

so [Phi_x, Phi_y](e_ij) = -lambda_{i+1,j+1} e_00, a rank <= 1 commutator
with image structurally inside k*e_00.  On the sequence basis {e_i}, a
series h = sum_{j<=d} mu_j y^j acts by

    Psi_x(e_i) = sum_{j=-i}^{d} mu_j e_{i+j},    Psi_y(e_i) = e_{i+1},

with [Psi_x, Psi_y](e_i) = mu_{-i-1} e_0, again rank <= 1 inside k*e_0.

For h with only negative powers of y, the presentations fit into a short
exact sequence 0 -> k[x,y] -> V -> W -> 0 with V the grid presentation for
g = 1 - x^-1 h and W the sequence presentation for h, via x^i y^j -> e_{i+1,j}
and e_{0j} -> e_j; verify_ses checks graded exactness and the intertwining
defect ranks on a window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import NotInG, PrecisionExhausted, WindowExceeded
from .fields import Fv
from .linalg import exact_rank
from .operators import (
    BasisScheme,
    RankCertificate,
    WindowedOperator,
    commutator,
    multiplication_operator,
    rank_on_window,
)
from .polys import Poly
from .series import BiSeries, TruncatedSeries, biseries_is_in_g

DEFAULT_GRID_WINDOW = 14


@dataclass
class AlmostModulePresentation:
    """A basis scheme, one operator per algebra generator, and rank
    certificates for the defining relations (here the single commutator of
    the two generator actions).  The unit acts as the identity exactly for
    every presentation constructed in this module, so the unit condition
    holds with rank 0 and is recorded as a constant."""

    scheme: BasisScheme
    generators: Dict[str, WindowedOperator]
    relation_certs: List[Tuple[str, RankCertificate]]
    label: str = ""
    unit_defect_rank: int = 0

    def generator(self, name: str) -> WindowedOperator:
        return self.generators[name]

    def commutator_rank(self) -> int:
        return max((c.rank for _, c in self.relation_certs), default=0)

    def certified(self) -> bool:
        return all(c.ok() for _, c in self.relation_certs)


def build_M_g(g: BiSeries, window: Optional[int] = None) -> AlmostModulePresentation:
    """Grid-basis presentation twisted by a unit g = 1 + x^-1 y^-1 (...).

    The commutator certificate carries the structural bound {e_00}, so its
    rank (0 or 1) is proved, not merely window-stable.
    """
    w = DEFAULT_GRID_WINDOW if window is None else window
    if w < 4:
        raise WindowExceeded(f"window {w} too small to certify stability")
    if not biseries_is_in_g(g):
        raise NotInG(
            "unit must have shape 1 + x^-1 y^-1 (...): constant term 1 and "
            "no pure x^-i or y^-j terms"
        )
    if g.prec < w + 4:
        raise PrecisionExhausted(
            f"unit known to total degree < {g.prec} but the generators on "
            f"window {w + 2} read coefficients to total degree {w + 3}"
        )
    field = g.field
    scheme = BasisScheme("grid")
    w_ops = w + 2

    def rule_x(idx, g=g):
        i, j = idx
        out = {(i + 1, j): field.one()}
        for l in range(1, j + 1):
            lam = g.coeff(i + 1, l)
            if not lam.is_zero():
                key = (0, j - l)
                s = out.get(key)
                out[key] = -lam if s is None else s - lam
        return out

    def rule_y(idx):
        i, j = idx
        return {(i, j + 1): field.one()}

    phi_x = WindowedOperator(field, scheme, scheme, rule_x, w_ops, 1, "Phi_x")
    phi_y = WindowedOperator(field, scheme, scheme, rule_y, w_ops, 1, "Phi_y")
    com = commutator(phi_x, phi_y, bound=((0, 0),))
    cert = rank_on_window(com, w)
    return AlmostModulePresentation(
        scheme, {"x": phi_x, "y": phi_y}, [("[x,y]", cert)],
        label=f"M[{g}]",
    )


def build_N_h(h: TruncatedSeries, window: Optional[int] = None) -> AlmostModulePresentation:
    """Sequence-basis presentation attached to h = sum_{j<=d} mu_j y^j.

    The x-action adds h-weighted shifts truncated below index 0; the
    commutator certificate carries the structural bound {e_0}.
    """
    w = DEFAULT_GRID_WINDOW if window is None else window
    if w < 4:
        raise WindowExceeded(f"window {w} too small to certify stability")
    if not h.inverted:
        raise PrecisionExhausted("h must be a series in descending powers")
    field = h.field
    d = h.pole_order()
    delta = max(d, 1)
    w_ops = w + 2 + delta
    if h.prec < w_ops + 1:
        raise PrecisionExhausted(
            f"series precision {h.prec} too small: the x-action on window "
            f"{w_ops} reads coefficients down to y^-{w_ops}"
        )
    mu = {(-e): c for e, c in h.terms.items()}  # printed exponent -> coeff
    scheme = BasisScheme("seq")

    def rule_x(i, mu=mu):
        out = {}
        for j, c in mu.items():
            if j >= -i:
                key = i + j
                s = out.get(key)
                out[key] = c if s is None else s + c
        return out

    def rule_y(i):
        return {i + 1: field.one()}

    psi_x = WindowedOperator(field, scheme, scheme, rule_x, w_ops, max(d, 0),
                             "Psi_x")
    psi_y = WindowedOperator(field, scheme, scheme, rule_y, w_ops, 1, "Psi_y")
    com = commutator(psi_x, psi_y, bound=(0,))
    cert = rank_on_window(com, w)
    return AlmostModulePresentation(
        scheme, {"x": psi_x, "y": psi_y}, [("[x,y]", cert)],
        label=f"N[{h}]",
    )


# -- the short exact sequence -----------------------------------------------


@dataclass
class GradedSliceCheck:
    degree: int
    dim_source: int       # polynomials of degree d-1
    dim_middle: int       # grid vectors of degree d
    dim_quotient: int     # sequence vectors hit in degree d
    injective: bool
    composite_zero: bool
    surjective: bool
    middle_exact: bool

    def ok(self) -> bool:
        return (self.injective and self.composite_zero and self.surjective
                and self.middle_exact)


@dataclass
class SESReport:
    """Window verification of 0 -> k[x,y] -> V -> W -> 0."""

    window: int
    slices: List[GradedSliceCheck]
    defect_certs: List[Tuple[str, RankCertificate]]
    exact: bool

    def max_defect_rank(self) -> int:
        return max((c.rank for _, c in self.defect_certs), default=0)

    def ok(self) -> bool:
        return self.exact and all(c.ok() for _, c in self.defect_certs)


def verify_ses(h: TruncatedSeries, window: Optional[int] = None) -> SESReport:
    """Check the sequence 0 -> k[x,y] -> V -> W -> 0 on a degree window.

    V is the grid presentation for 1 - x^-1 h and W the sequence
    presentation for h; the maps are alpha(x^i y^j) = e_{i+1,j} and
    beta(e_{0j}) = e_j, beta(e_{ij}) = 0 for i > 0.  The report contains
    per-degree exactness checks and stable rank certificates for the four
    intertwining defects (each map against each generator action).  The
    defect certificates are window-stable, not structurally proved: no
    finite-dimensional bound is claimed for general h.
    """
    w = DEFAULT_GRID_WINDOW if window is None else window
    if w < 4:
        raise WindowExceeded(f"window {w} too small to certify stability")
    field = h.field
    if h.pole_order() > 0 or not h.tcoeff(0).is_zero():
        raise NotInG(
            "h must lie in y^-1 k[[y^-1]]: no constant or polynomial part"
        )
    if h.prec < w + 4:
        raise PrecisionExhausted(
            f"series precision {h.prec} below window + 4 = {w + 4}: the "
            "twisted actions read coefficients past the window edge"
        )

    # g = 1 - x^-1 h on the total-degree grid: term mu_{-j} y^-j contributes
    # -mu_{-j} at x^-1 y^-j, total degree 1 + j
    g_terms: Dict[Tuple[int, int], Fv] = {(0, 0): field.one()}
    for e, c in h.terms.items():
        g_terms[(1, e)] = -c
    g = BiSeries(field, ("x", "y"), g_terms, h.prec + 1)

    V = build_M_g(g, w)
    W = build_N_h(h, w)
    poly_scheme = BasisScheme("mono2d")
    x = Poly.variable(field, ("x", "y"), "x")
    y = Poly.variable(field, ("x", "y"), "y")
    w_ops = w + 3
    B_ops = {
        "x": multiplication_operator(poly_scheme, x, w_ops, "L_x"),
        "y": multiplication_operator(poly_scheme, y, w_ops, "L_y"),
    }

    alpha = WindowedOperator(
        field, poly_scheme, V.scheme,
        lambda idx: {(idx[0] + 1, idx[1]): field.one()},
        w_ops, 1, "alpha",
    )
    beta = WindowedOperator(
        field, V.scheme, W.scheme,
        lambda idx: ({idx[1]: field.one()} if idx[0] == 0 else {}),
        w_ops, 0, "beta",
    )

    defect_certs: List[Tuple[str, RankCertificate]] = []
    for s in ("x", "y"):
        d_alpha = alpha.compose(B_ops[s]) - V.generator(s).compose(alpha)
        d_alpha.label = f"alpha-{s}-defect"
        defect_certs.append(
            (d_alpha.label, rank_on_window(d_alpha, min(w, d_alpha.window)))
        )
        d_beta = beta.compose(V.generator(s)) - W.generator(s).compose(beta)
        d_beta.label = f"beta-{s}-defect"
        defect_certs.append(
            (d_beta.label, rank_on_window(d_beta, min(w, d_beta.window)))
        )

    # graded exactness: alpha shifts degree by one, beta preserves it
    slices: List[GradedSliceCheck] = []
    zero = field.zero()
    for deg in range(0, w + 1):
        src = poly_scheme.indices_of_degree(deg - 1)
        mid = V.scheme.indices_of_degree(deg)
        rows_alpha = [alpha.apply_index(i) for i in src]
        cols = {j for r in rows_alpha for j in r} | set(mid)
        cols = sorted(cols)
        mat_alpha = [[r.get(j, zero) for j in cols] for r in rows_alpha]
        rk_alpha = exact_rank(mat_alpha, field)
        injective = rk_alpha == len(src)

        comp = [beta.apply(r) for r in rows_alpha]
        composite_zero = all(not c for c in comp)

        rows_beta = [beta.apply_index(i) for i in mid]
        qcols = sorted({j for r in rows_beta for j in r})
        mat_beta = [[r.get(j, zero) for j in qcols] for r in rows_beta]
        rk_beta = exact_rank(mat_beta, field)
        dim_q = len(qcols)
        surjective = rk_beta == dim_q

        middle_exact = rk_alpha + rk_beta == len(mid)
        slices.append(GradedSliceCheck(
            degree=deg, dim_source=len(src), dim_middle=len(mid),
            dim_quotient=dim_q, injective=injective,
            composite_zero=composite_zero, surjective=surjective,
            middle_exact=middle_exact,
        ))

    exact = all(s.ok() for s in slices)
    return SESReport(window=w, slices=slices, defect_certs=defect_certs,
                     exact=exact)


def char_phi_h(h: TruncatedSeries, f: Poly) -> TruncatedSeries:
    """Evaluate f(x, y) at x = h, keeping y: the character sending x to h
    and y to itself.  Substitution runs by Horner in x; the result's
    precision is tracked through the series arithmetic."""
    field = f.field
    if len(f.vars) != 2:
        raise PrecisionExhausted("expected a polynomial in two variables")
    xv, yv = f.vars
    by_x = f.coeffs_in(xv)
    degx = max(by_x) if by_x else 0
    pole = max(h.pole_order(), 0)
    prec0 = h.prec + degx * pole
    result = TruncatedSeries.zero(field, h.var, prec0)
    for i in range(degx, -1, -1):
        result = result * h if i < degx else result
        ci = by_x.get(i)
        if ci is not None:
            result = result + TruncatedSeries.from_poly(
                ci.rename(h.var), result.prec
            )
    return result
