"""Laurent-series roots at infinity for polynomials monic in x, found by
integer slopes of the Newton polygon and refined by Hensel--Newton
iteration, plus exact-linear-algebra search for algebraic relations
satisfied by a given series.

For P = sum_i a_i(y) x^i monic in x, a root h with leading term c*y^s
forces at least two indices to tie in max_i(deg a_i + s*i); the tying
slopes are the edges of the upper Newton polygon of the points
(i, deg a_i).  For an integer slope s the substitution x = y^s z divides
out y^M (M the tied maximum) and leaves Q(z) with power-series
coefficients in y^-1 whose reduction at y^-1 = 0 is the edge polynomial;
a simple root of the edge polynomial lifts by Newton iteration with the
residual's y^-1-valuation at least doubling each step.  Fractional slopes,
repeated edge roots, and edge roots outside the coefficient field are
reported as unresolved branches rather than roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NotMonic, PrecisionExhausted, WildBranch
from .fields import QQ, Field, Fv
from .linalg import rref_kernel
from .polys import Poly, roots_in_field
from .series import TruncatedSeries

# Diagnostic trace of the last root search: one (slope, valuations) pair
# per lifted branch, where valuations[k] is the residual's valuation after
# k Newton steps.  Reset by every laurent_roots call; consumers that want
# to inspect the doubling behaviour read it right after the call.
LAST_NEWTON_VALUATIONS: List[Tuple[int, List[int]]] = []


@dataclass
class UnresolvedBranch:
    """A Newton-polygon branch the lifter does not follow: a fractional
    slope, a repeated edge root, or an edge factor that does not split
    over the coefficient field."""

    kind: str            # "puiseux-slope" | "multiple-edge-root" | "edge-root-not-in-field"
    slope: Tuple[int, int]   # exponent as a reduced fraction (num, den)
    detail: str

    def __str__(self):
        num, den = self.slope
        s = f"{num}" if den == 1 else f"{num}/{den}"
        return f"{self.kind} at slope {s}: {self.detail}"


@dataclass
class RootsResult(Sequence):
    """Roots found, unresolved branches, and the polygon that drove the
    search.  Iterating the result iterates the roots."""

    roots: List[TruncatedSeries]
    unresolved: List[UnresolvedBranch]
    polygon: List[Tuple[int, int]]

    def __len__(self):
        return len(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    def __iter__(self):
        return iter(self.roots)


def _coeffs_by_x(P: Poly, xvar: str, yvar: str) -> Dict[int, Poly]:
    """P as {x-degree: coefficient polynomial in y}, accepting univariate
    input in either variable."""
    if len(P.vars) == 2:
        return P.coeffs_in(xvar)
    if P.vars == (xvar,):
        wide = Poly(P.field, (xvar, yvar),
                    {(e[0], 0): c for e, c in P.terms.items()})
        return wide.coeffs_in(xvar)
    raise NotMonic(f"expected a polynomial involving {xvar}")


def _upper_hull(points: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Upper convex hull of (i, d) points, left to right."""
    pts = sorted(points)
    hull: List[Tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it turns strictly downward
            if (y2 - y1) * (p[0] - x2) <= (p[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _horner(coeffs: List[TruncatedSeries], z: TruncatedSeries,
            prec: int) -> TruncatedSeries:
    r = TruncatedSeries.zero(z.field, z.var, prec)
    for c in reversed(coeffs):
        r = (r * z + c).truncate(prec)
    return r


def _lift_branch(by_x: Dict[int, Poly], s: int, big_m: int, c0: Fv,
                 prec_u: int, yvar: str, field: Field,
                 degx: int) -> TruncatedSeries:
    """Newton iteration for the branch x = y^s z, z(0) = c0.

    Works in k[[y^-1]]: the rescaled coefficients b_i = a_i y^(s i - M)
    have no positive powers, the derivative at the seed is a unit, and
    each step at least doubles the residual's valuation (asserted)."""
    bs: List[TruncatedSeries] = []
    for i in range(degx + 1):
        ai = by_x.get(i)
        terms = {} if ai is None else {
            e[0] + s * i - big_m: c for e, c in ai.terms.items()
        }
        bs.append(TruncatedSeries.from_tdict(field, yvar, terms, prec_u))
    dbs = [bs[i].scale(field(i)) for i in range(1, degx + 1)]

    z = TruncatedSeries.from_tdict(field, yvar, {0: c0}, prec_u)
    qz = _horner(bs, z, prec_u)
    vals: List[int] = [] if qz.is_zero() else [qz.valuation()]
    guard = 0
    while not qz.is_zero():
        v = qz.valuation()
        if v >= prec_u:
            break
        dq = _horner(dbs, z, prec_u)
        if dq.is_zero() or dq.valuation() != 0:
            raise WildBranch(
                f"derivative not a unit at slope {s}: inseparable reduction"
            )
        z = (z - qz * dq.invert()).truncate(prec_u)
        qz = _horner(bs, z, prec_u)
        v2 = qz.prec if qz.is_zero() else qz.valuation()
        vals.append(v2)
        if v2 < min(2 * v, prec_u):
            raise WildBranch(
                f"Newton residual failed to double at slope {s}: "
                f"{v} -> {v2} (library bug or inseparable input)"
            )
        guard += 1
        if guard > 64:
            raise WildBranch(f"Newton did not terminate at slope {s}")
    LAST_NEWTON_VALUATIONS.append((s, vals))
    return z.shift(-s)


def laurent_roots(P: Poly, N: int, xvar: str = "x",
                  yvar: str = "y") -> RootsResult:
    """All simple integer-exponent Laurent-series roots of P, each exact
    to P(h, y) = 0 modulo degree -N.

    Branches the polygon cannot resolve (fractional slopes, repeated or
    non-split edge roots) are listed in the result; if no root is found
    at all and unresolved branches exist, WildBranch is raised carrying
    the list.
    """
    field = P.field
    LAST_NEWTON_VALUATIONS.clear()
    if P.is_zero():
        raise NotMonic("the zero polynomial has no root structure")
    if yvar == xvar:
        raise NotMonic("the two variable names must differ")
    by_x = _coeffs_by_x(P, xvar, yvar)
    degx = max(by_x)
    lead = by_x[degx]
    one = field.one()
    if not (lead.is_constant() and lead.coeff(0) == one):
        raise NotMonic(
            f"leading x-coefficient is {lead}, expected 1"
        )
    ch = field.char
    if ch != 0 and ch <= degx:
        raise WildBranch(
            f"characteristic {ch} does not exceed deg_x = {degx}: "
            "Newton refinement is not certified"
        )

    roots: List[TruncatedSeries] = []
    unresolved: List[UnresolvedBranch] = []

    # zero roots: strip the x^m factor
    i_min = min(i for i, a in by_x.items() if not a.is_zero())
    if i_min == 1:
        roots.append(TruncatedSeries.zero(field, yvar, N + 1))
    elif i_min > 1:
        unresolved.append(UnresolvedBranch(
            "multiple-edge-root", (0, 1),
            f"x = 0 is a root of multiplicity {i_min}",
        ))
    pts = [(i, by_x[i].degree()) for i in sorted(by_x)
           if i >= i_min and not by_x[i].is_zero()]

    hull = _upper_hull(pts)
    for (i1, d1), (i2, d2) in zip(hull, hull[1:]):
        slope = Fraction(d1 - d2, i2 - i1)
        if slope.denominator != 1:
            unresolved.append(UnresolvedBranch(
                "puiseux-slope",
                (slope.numerator, slope.denominator),
                f"edge from x^{i1} to x^{i2} has fractional slope",
            ))
            continue
        s = int(slope)
        big_m = d1 + s * i1
        # edge polynomial in c, normalized so its constant term is nonzero
        e_terms: Dict[tuple, Fv] = {}
        for i, d in pts:
            if d + s * i == big_m:
                e_terms[(i - i1,)] = by_x[i].coeff(d)
        edge = Poly(field, ("c",), e_terms)
        found, nonsplit = roots_in_field(edge)
        if nonsplit:
            unresolved.append(UnresolvedBranch(
                "edge-root-not-in-field", (s, 1),
                f"edge polynomial {edge} has a degree-{nonsplit} factor "
                "with no root in the coefficient field",
            ))
        for c0, mult in found:
            if c0.is_zero():
                continue
            if mult > 1:
                unresolved.append(UnresolvedBranch(
                    "multiple-edge-root", (s, 1),
                    f"edge root {c0} has multiplicity {mult}",
                ))
                continue
            prec_u = big_m + N + 1
            roots.append(
                _lift_branch(by_x, s, big_m, c0, prec_u, yvar, field, degx)
            )

    if not roots and unresolved:
        raise WildBranch(
            "no integer-slope simple branch: "
            + "; ".join(str(u) for u in unresolved),
            unresolved=unresolved,
        )
    return RootsResult(roots=roots, unresolved=unresolved, polygon=hull)


# -- algebraicity witnesses ------------------------------------------------------


def _normalize_witness_vec(field: Field, vec: List[Fv]) -> List[Fv]:
    """Scale a coefficient vector canonically: over the rationals clear
    denominators, divide by the content, and make the first nonzero entry
    positive; over a finite field make the first nonzero entry 1."""
    first = next((c for c in vec if not c.is_zero()), None)
    if first is None:
        return vec
    if field == QQ:
        from math import gcd

        nums = [c.payload.numerator for c in vec]
        dens = [c.payload.denominator for c in vec]
        mult = 1
        for d in dens:
            mult = mult * d // gcd(mult, d)
        ints = [n * (mult // d) for n, d in zip(nums, dens)]
        g = 0
        for n in ints:
            g = gcd(g, abs(n))
        lead = next(n for n in ints if n)
        sign = -1 if lead < 0 else 1
        return [field(Fraction(n * sign, g)) for n in ints]
    return [c / first for c in vec]


def algebraicity_witness(h: TruncatedSeries, dx: int, dy: int,
                         xvar: str = "x") -> Optional[Poly]:
    """A nonzero P with deg_x <= dx, deg_y <= dy and P(h, y) = 0 to the
    full usable precision, or None if no such P exists at this precision.

    The coefficients solve an exact homogeneous linear system (one
    equation per observable power of y).  Smaller x-degrees are tried
    first; among the kernel's solutions the sparsest, lexicographically
    least, content-normalized vector is returned.  Absence of a witness
    at finite precision is evidence, not proof, of transcendence, and a
    returned witness certifies the relation only to the stated precision.
    """
    field = h.field
    pole = max(h.pole_order(), 0)
    needed = (dx + 1) * (dy + 1) + dx * pole + 5
    if h.prec < needed:
        raise PrecisionExhausted(
            f"series precision {h.prec} below the witness threshold "
            f"{needed} for dx={dx}, dy={dy}"
        )
    # exact powers h^0..h^dx, then all shifts by y^j
    powers = [TruncatedSeries.one(field, h.var, h.prec + pole)]
    for _ in range(dx):
        powers.append(powers[-1] * h)
    smat: Dict[Tuple[int, int], TruncatedSeries] = {}
    for i in range(dx + 1):
        for j in range(dy + 1):
            smat[(i, j)] = powers[i].shift(-j)
    usable = min(s.prec for s in smat.values())
    n_hi = dx * pole + dy

    def coeff_at(i, j, n):
        s = smat[(i, j)]
        return s.tcoeff(n) if n > -s.prec else field.zero()

    for dxp in range(dx + 1):
        cols = [(i, j) for i in range(dxp + 1) for j in range(dy + 1)]
        rows = []
        for n in range(n_hi, -usable, -1):
            rows.append([coeff_at(i, j, n) for i, j in cols])
        kernel = rref_kernel(rows, field, len(cols))
        if not kernel:
            continue
        candidates = []
        for vec in kernel:
            nv = _normalize_witness_vec(field, vec)
            support = sum(1 for c in nv if not c.is_zero())
            key = (support, tuple(str(c) for c in nv))
            candidates.append((key, nv))
        candidates.sort(key=lambda kv: kv[0])
        best = candidates[0][1]
        terms = {
            (i, j): c
            for (i, j), c in zip(cols, best)
            if not c.is_zero()
        }
        return Poly(field, (xvar, h.var), terms)
    return None


# -- divisor check and the root-to-witness pipeline ------------------------------


def pseudo_remainder(A: Poly, B: Poly, xvar: str) -> Poly:
    """Pseudo-remainder of A by B with respect to x: the remainder after
    clearing leading y-coefficients, zero exactly when B divides A in
    k(y)[x]."""
    field = A.field
    yvar = next(v for v in A.vars if v != xvar)
    R = A
    db = B.deg_in(xvar)
    lb_terms = B.coeffs_in(xvar)[db]
    lb = Poly(field, A.vars, {(0, e[0]): c for e, c in lb_terms.terms.items()})
    guard = 0
    while not R.is_zero() and R.deg_in(xvar) >= db:
        dr = R.deg_in(xvar)
        lr_y = R.coeffs_in(xvar)[dr]
        lr = Poly(field, A.vars,
                  {(0, e[0]): c for e, c in lr_y.terms.items()})
        xshift = Poly.monomial(field, A.vars, (dr - db, 0), field.one())
        R = lb * R - lr * xshift * B
        guard += 1
        if guard > A.deg_in(xvar) + 2:
            raise NotMonic("pseudo-division failed to reduce the degree")
    return R


@dataclass
class PipelineEntry:
    root: TruncatedSeries
    witness: Optional[Poly]
    divides: bool
    residual_zero: bool

    def ok(self) -> bool:
        return self.witness is not None and self.divides and self.residual_zero


@dataclass
class PipelineReport:
    entries: List[PipelineEntry]
    unresolved: List[UnresolvedBranch]

    def ok(self) -> bool:
        return bool(self.entries) and all(e.ok() for e in self.entries)


def root_witness_pipeline(P: Poly, N: int, dx: Optional[int] = None,
                          dy: Optional[int] = None, xvar: str = "x",
                          yvar: str = "y") -> PipelineReport:
    """Find roots, search a witness for each, and close the loop: the
    witness must divide P (pseudo-division) and must vanish on the root
    under substitution of h for x."""
    from .almost import char_phi_h

    by_x = _coeffs_by_x(P, xvar, yvar)
    dxw = max(by_x) if dx is None else dx
    dyw = (max((a.degree() for a in by_x.values()), default=0)
           if dy is None else dy)
    # roots must be known past the witness threshold (pole order of a root
    # is at most the largest polygon slope, itself at most deg_y)
    n_root = max(N, (dxw + 1) * (dyw + 1) + dxw * dyw + 8)
    result = laurent_roots(P, n_root, xvar, yvar)
    wide = (P if len(P.vars) == 2 else
            Poly(P.field, (xvar, yvar),
                 {(e[0], 0): c for e, c in P.terms.items()}))
    entries = []
    for h in result.roots:
        w = algebraicity_witness(h, dxw, dyw, xvar)
        divides = False
        residual_zero = False
        if w is not None:
            divides = pseudo_remainder(wide, w.rename(xvar, yvar),
                                       xvar).is_zero()
            residual_zero = char_phi_h(h, w.rename(xvar, yvar)).is_zero()
        entries.append(PipelineEntry(h, w, divides, residual_zero))
    return PipelineReport(entries=entries, unresolved=result.unresolved)
