"""Local expansions, residues and reciprocity for rational functions on the
projective line.

A place is a closed point of P^1 over the base field: either a monic
irreducible polynomial pi(t) or the point at infinity with uniformizer t^-1.
``local_expand`` rewrites a rational function as a Laurent series in the
uniformizer whose coefficients live in the residue field of the place.  At a
place of degree d >= 2 the coefficients are computed through the canonical
embedding of the residue field into the completed local ring: we solve
pi(tau) = pi for a series tau = z + O(pi) by Newton iteration and substitute
t -> tau.  (Reducing truncated remainders mod pi instead would produce digits
that depend on t and assigns wrong residues; the embedded coefficients are
honest constants of the local field.)

On top of the expansions the module provides the trace residue of f dg, the
global residue-sum check, the tame Hilbert symbol with its norm-product
reciprocity check, and the local multiplication action on the quotient
K_p / O_p with its finite-codimension certificate.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    DescriptorMismatch,
    DivisionByZero,
    InseparableDifferential,
    NotMonic,
    UnsplitFactor,
    VariableMismatch,
    ZeroFunction,
)
from .fields import QQ, ExtensionField, Field, Fv, PrimeField, norm_to_base, trace_to_base
from .linalg import exact_rank
from .operators import (
    BasisScheme,
    RankCertificate,
    WindowedOperator,
    multiplication_operator,
    rank_on_window,
)
from .polys import Poly, factor, rational_roots
from .series import TruncatedSeries

INFINITY_LABEL = "infinity"


# -- places ---------------------------------------------------------------------


class Place:
    """A closed point of the projective line over the base field.

    Finite places are monic irreducible polynomials ``pi`` in one variable;
    the infinite place has uniformizer ``t^-1``.  ``residue_field`` is the
    base field at a degree-1 place and an extension field F_{p^d} at a
    degree-d place over F_p.  ``residue_image`` is the image of the curve
    coordinate t in the residue field (a root of pi, or None at infinity).
    """

    def __init__(self, field: Field, pi: Optional[Poly] = None, var: str = "t"):
        self.field = field
        self.pi = pi
        if pi is None:
            self.var = var
            self.degree = 1
            self.residue_field = field
            self.residue_image = None
            self.label = INFINITY_LABEL
            return
        if len(pi.vars) != 1:
            raise VariableMismatch("a finite place needs a univariate polynomial")
        if pi.field != field:
            raise DescriptorMismatch("place polynomial over the wrong field")
        self.var = pi.vars[0]
        d = pi.degree()
        if d < 1:
            raise NotMonic(f"a finite place needs positive degree, got {pi}")
        if not (pi.lead() - field.one()).is_zero():
            raise NotMonic(f"a finite place must be monic, got {pi}")
        self.degree = d
        if d == 1:
            self.residue_field = field
            self.residue_image = -pi.coeff(0)
        else:
            if field == QQ:
                raise UnsplitFactor(str(pi))
            if not isinstance(field, PrimeField):
                raise DescriptorMismatch(
                    "places of degree >= 2 are supported over prime fields only"
                )
            from .polys import is_irreducible

            if not is_irreducible(pi):
                raise DescriptorMismatch(f"place polynomial is reducible: {pi}")
            modulus = [pi.coeff(i).payload for i in range(d + 1)]
            self.residue_field = ExtensionField(field.p, modulus)
            self.residue_image = self.residue_field.gen()
        self.label = str(pi)

    @property
    def is_infinity(self) -> bool:
        return self.pi is None

    def embed(self, c: Fv) -> Fv:
        """Embed a base-field constant into the residue field."""
        return self.residue_field(c)

    def trace_down(self, c: Fv) -> Fv:
        """Trace from the residue field back to the base field."""
        return c if self.degree == 1 else trace_to_base(c)

    def norm_down(self, c: Fv) -> Fv:
        """Norm from the residue field back to the base field."""
        return c if self.degree == 1 else norm_to_base(c)

    def sort_key(self):
        return (1, 0, "") if self.is_infinity else (0, self.degree, self.label)

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        return self.field == other.field and self.label == other.label

    def __hash__(self):
        return hash((self.field, self.label))

    def __str__(self):
        return self.label

    def __repr__(self):
        return f"Place({self.label})"


def place_infinity(field: Field, var: str = "t") -> Place:
    return Place(field, None, var)


def place_finite(pi: Poly) -> Place:
    return Place(pi.field, pi)


def place_at(field: Field, a, var: str = "t") -> Place:
    """The degree-1 place t = a."""
    a = a if isinstance(a, Fv) else field(a)
    return Place(field, Poly.from_coeffs(field, var, [-a, field.one()]))


def point_key(place: Place) -> str:
    """Short display key for a place: the point for a degree-1 place
    (the root of its uniformizer), the monic uniformizer for larger
    residue fields, and "inf" at infinity."""
    if place.pi is None:
        return "inf"
    if place.degree == 1:
        payload = getattr(place.residue_image, "payload", None)
        if isinstance(payload, (int, Fraction)):
            return str(payload)
        return str(place.residue_image)
    return place.label


# -- rational functions -----------------------------------------------------------


class RationalFunction:
    """A quotient of univariate polynomials, reduced, with monic denominator."""

    def __init__(self, num: Poly, den: Optional[Poly] = None):
        if len(num.vars) != 1:
            raise VariableMismatch("rational functions are univariate")
        field, var = num.field, num.vars[0]
        if den is None:
            den = Poly.const(field, (var,), field.one())
        if den.vars != num.vars:
            raise VariableMismatch(
                f"mixed variables {num.vars} vs {den.vars}"
            )
        if den.field != field:
            raise DescriptorMismatch("numerator and denominator fields differ")
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            den = Poly.const(field, (var,), field.one())
        else:
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num // g, den // g
            lead = den.lead().inv()
            num, den = num.scale(lead), den.scale(lead)
        self.field = field
        self.var = var
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunction":
        return cls(p)

    @classmethod
    def constant(cls, field: Field, var: str, c) -> "RationalFunction":
        return cls(Poly.const(field, (var,), c))

    @classmethod
    def variable(cls, field: Field, var: str = "t") -> "RationalFunction":
        return cls(Poly.variable(field, (var,), var))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree() < 1 and self.den.degree() < 1

    def _check(self, other: "RationalFunction"):
        if self.field != other.field:
            raise DescriptorMismatch("mixed coefficient fields")
        if self.var != other.var:
            raise VariableMismatch(f"mixed variables {self.var!r} vs {other.var!r}")

    def __add__(self, other):
        other = _as_ratfun(other, self.field, self.var)
        self._check(other)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_ratfun(other, self.field, self.var))

    def __mul__(self, other):
        other = _as_ratfun(other, self.field, self.var)
        self._check(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        other = _as_ratfun(other, self.field, self.var)
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __pow__(self, e: int):
        if e < 0:
            return (RationalFunction(self.den, self.num)) ** (-e)
        out = RationalFunction.constant(self.field, self.var, self.field.one())
        b = self
        while e:
            if e & 1:
                out = out * b
            b = b * b
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def ord_at(self, place: Place) -> int:
        """Order of vanishing at the place (negative at a pole)."""
        if self.is_zero():
            raise ZeroFunction("the zero function has no valuation")
        if place.is_infinity:
            return self.den.degree() - self.num.degree()
        a, _ = _strip_factor(self.num, place.pi)
        b, _ = _strip_factor(self.den, place.pi)
        return a - b

    def __str__(self):
        if self.den.degree() < 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _as_ratfun(x, field: Field, var: str) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    return RationalFunction.constant(field, var, x)


def _strip_factor(q: Poly, pi: Poly) -> Tuple[int, Poly]:
    """Multiplicity of pi in a nonzero polynomial, plus the cofactor."""
    m = 0
    while q.degree() >= pi.degree():
        quo, rem = q.divmod(pi)
        if not rem.is_zero():
            break
        m, q = m + 1, quo
    return m, q


# -- local expansions -------------------------------------------------------------


@dataclass(frozen=True)
class LocalExpansion:
    """A rational function expanded in powers of the uniformizer of a place.

    ``series`` holds coefficients in the residue field: exponents are powers
    of pi at a finite place, and powers of t (so that -exponent is the power
    of the uniformizer t^-1) at infinity.  ``order`` is the exact valuation,
    computed from the rational function, not from the truncation.
    """

    place: Place
    series: TruncatedSeries
    order: int

    def valuation(self) -> int:
        return self.order

    def leading_coefficient(self) -> Fv:
        return self.series.coeff(self.order)

    def precision(self) -> int:
        return self.series.prec

    def __str__(self):
        return f"[{self.series}  at {self.place}]"


def _uniformizer_root(place: Place, prec: int) -> TruncatedSeries:
    """The series tau = z + O(pi) over the residue field with pi(tau) = pi.

    Newton iteration from the residue image z; the derivative pi'(z) is a
    unit because pi is irreducible over a perfect field, so each step at
    least doubles the contact order.
    """
    R, pi = place.residue_field, place.pi
    d = pi.degree()
    coeffs = [place.embed(pi.coeff(i)) for i in range(d + 1)]
    dcoeffs = [place.embed(pi.coeff(i)) * R(i) for i in range(1, d + 1)]
    x_series = TruncatedSeries(R, "pi", {1: R.one()}, prec, inverted=False)
    tau = TruncatedSeries(R, "pi", {0: place.residue_image}, prec, inverted=False)
    for _ in range(64):
        err = _series_horner(coeffs, tau) - x_series
        if err.is_zero():
            return tau
        slope = _series_horner(dcoeffs, tau)
        tau = tau - err * slope.invert()
    raise AssertionError("Newton iteration for the uniformizer did not settle")


def _series_horner(coeffs: Sequence[Fv], at: TruncatedSeries) -> TruncatedSeries:
    """Evaluate a polynomial, given by field coefficients low-first, at a series."""
    R = at.field
    acc = TruncatedSeries(R, at.var, {}, at.prec, at.inverted)
    for c in reversed(coeffs):
        acc = acc * at
        if not c.is_zero():
            acc = acc + TruncatedSeries(R, at.var, {0: c}, at.prec, at.inverted)
    return acc


def local_expand(f, place: Place, prec: int) -> LocalExpansion:
    """Expand a nonzero rational function at a place, with coefficients in
    the residue field, to absolute uniformizer precision ``prec``."""
    f = _as_ratfun(f, place.field, place.var)
    if f.is_zero():
        raise ZeroFunction("cannot expand the zero function")
    if f.field != place.field:
        raise DescriptorMismatch("function and place over different fields")
    if place.is_infinity:
        v = f.den.degree() - f.num.degree()
        big = prec + f.num.degree() + f.den.degree() + 2
        num = TruncatedSeries.from_poly(f.num, big, inverted=True)
        den = TruncatedSeries.from_poly(f.den, big, inverted=True)
        series = (num * den.invert()).truncate(prec)
        return LocalExpansion(place, series, v)
    a, n0 = _strip_factor(f.num, place.pi)
    b, d0 = _strip_factor(f.den, place.pi)
    v = a - b
    unit_prec = max(prec - v, 1) + 1
    tau = _uniformizer_root(place, unit_prec)
    num = _series_horner([place.embed(n0.coeff(i)) for i in range(n0.degree() + 1)], tau)
    den = _series_horner([place.embed(d0.coeff(i)) for i in range(d0.degree() + 1)], tau)
    series = (num * den.invert()).shift(v).truncate(prec)
    return LocalExpansion(place, series, v)


# -- residues ---------------------------------------------------------------------


def residue(f, g, place: Place) -> Fv:
    """Trace residue of the differential f dg at a place, in the base field.

    The raw residue is the coefficient of pi^-1 in F * dG/dpi, where F and G
    are the local expansions; it lives in the residue field and is traced
    down to the base field.  Nonconstant g with identically-zero derivative
    (a p-th power in characteristic p) is rejected: its differential carries
    no residue data.
    """
    f = _as_ratfun(f, place.field, place.var)
    g = _as_ratfun(g, place.field, place.var)
    if f.is_zero() or g.is_zero():
        raise ZeroFunction("residue needs nonzero f and g")
    if g.is_constant():
        return place.field.zero()
    if g.derivative().is_zero():
        raise InseparableDifferential(
            f"d({g}) vanishes identically; no residue is defined"
        )
    vf = f.ord_at(place)
    vg = g.ord_at(place)
    F = local_expand(f, place, max(1, 1 - vg) + 2)
    G = local_expand(g, place, max(1, 1 - vf) + 2)
    prod = F.series * G.series.derivative()
    return place.trace_down(prod.coeff(-1))


def _finite_places_of(poly: Poly) -> List[Place]:
    """Places at the monic irreducible factors of a nonzero polynomial.

    Over the rationals every factor must be linear; a factor of degree >= 2
    raises UnsplitFactor naming the offending cofactor.
    """
    if poly.is_zero():
        raise ZeroFunction("zero polynomial has no factor support")
    if poly.degree() < 1:
        return []
    field, var = poly.field, poly.vars[0]
    if field == QQ:
        roots, rem = rational_roots(poly)
        if rem.degree() >= 1:
            raise UnsplitFactor(str(rem.monic()))
        return [place_at(field, r, var) for r, _m in roots]
    pieces, _lead = factor(poly.monic())
    return [place_finite(pi) for pi, _m in pieces]


def _support(polys: Sequence[Poly], field: Field, var: str) -> List[Place]:
    """Finite places in the factor support of the given polynomials, sorted,
    with the infinite place appended."""
    seen: Dict[str, Place] = {}
    for q in polys:
        for p in _finite_places_of(q):
            seen.setdefault(p.label, p)
    out = sorted(seen.values(), key=Place.sort_key)
    out.append(place_infinity(field, var))
    return out


@dataclass(frozen=True)
class AdelicResidueReport:
    """Per-place trace residues of f dg and their sum over all of P^1."""

    entries: Tuple[Tuple[Place, Fv], ...]
    total: Fv

    @property
    def ok(self) -> bool:
        return self.total.is_zero()

    def table(self) -> Dict[str, str]:
        return {str(p): str(r) for p, r in self.entries}

    def __str__(self):
        lines = [f"res[{p}] = {r}" for p, r in self.entries]
        lines.append(f"sum = {self.total}")
        return "\n".join(lines)


def residue_theorem_check(f, g, field: Optional[Field] = None,
                          var: str = "t") -> AdelicResidueReport:
    """Residues of f dg at every pole of the differential plus infinity;
    their sum vanishes on the projective line."""
    if field is None:
        probe = f if isinstance(f, (RationalFunction, Poly)) else g
        field, var = probe.field, (probe.var if isinstance(probe, RationalFunction)
                                   else probe.vars[0])
    f = _as_ratfun(f, field, var)
    g = _as_ratfun(g, field, var)
    if f.is_zero() or g.is_zero():
        raise ZeroFunction("residue table needs nonzero f and g")
    places = _support([f.den, g.den], field, var)
    entries = tuple((p, residue(f, g, p)) for p in places)
    total = field.zero()
    for _p, r in entries:
        total = total + r
    return AdelicResidueReport(entries, total)


# -- tame symbols and reciprocity ---------------------------------------------------


def hilbert_symbol(f, g, place: Place) -> Fv:
    """The tame symbol (-1)^(v(f)v(g)) f^v(g) / g^v(f) mod the maximal ideal,
    an element of the residue field of the place."""
    f = _as_ratfun(f, place.field, place.var)
    g = _as_ratfun(g, place.field, place.var)
    if f.is_zero() or g.is_zero():
        raise ZeroFunction("the symbol needs nonzero f and g")
    vf = f.ord_at(place)
    vg = g.ord_at(place)
    lc_f = local_expand(f, place, vf + 1).leading_coefficient()
    lc_g = local_expand(g, place, vg + 1).leading_coefficient()
    out = lc_f**vg * lc_g ** (-vf)
    if (vf * vg) % 2:
        out = -out
    return out


@dataclass(frozen=True)
class WeilReciprocityReport:
    """Tame symbols of (f, g) over their joint support, with residue-field
    norms down to the base field and the norm product."""

    entries: Tuple[Tuple[Place, Fv, Fv], ...]
    product: Fv

    @property
    def ok(self) -> bool:
        return (self.product - self.product.field.one()).is_zero()

    def table(self) -> Dict[str, str]:
        return {str(p): str(s) for p, s, _n in self.entries}

    def __str__(self):
        lines = [f"symbol[{p}] = {s}   (norm {n})" for p, s, n in self.entries]
        lines.append(f"norm product = {self.product}")
        return "\n".join(lines)


def weil_reciprocity_check(f, g, field: Optional[Field] = None,
                           var: str = "t") -> WeilReciprocityReport:
    """Product over all places of the norms of the tame symbols; equals 1 on
    the projective line."""
    if field is None:
        probe = f if isinstance(f, (RationalFunction, Poly)) else g
        field, var = probe.field, (probe.var if isinstance(probe, RationalFunction)
                                   else probe.vars[0])
    f = _as_ratfun(f, field, var)
    g = _as_ratfun(g, field, var)
    if f.is_zero() or g.is_zero():
        raise ZeroFunction("reciprocity needs nonzero f and g")
    places = _support([f.num, f.den, g.num, g.den], field, var)
    entries = []
    product = field.one()
    for p in places:
        s = hilbert_symbol(f, g, p)
        n = p.norm_down(s)
        entries.append((p, s, n))
        product = product * n
    return WeilReciprocityReport(tuple(entries), product)


# -- the local action on K_p / O_p ---------------------------------------------------


@dataclass(frozen=True)
class LocalActionResult:
    """Multiplication by a local element on the pole part K_p / O_p.

    ``codimension`` certifies dim(O_p / I) for the largest ideal I on which
    multiplication by the element preserves integrality: max(0, -ord(a)).
    """

    operator: WindowedOperator
    codimension: int
    place: Place


def adele_local_action(a: LocalExpansion, label: str = "") -> LocalActionResult:
    """Multiplication by a on the quotient basis pi^-k (k >= 1), defined row
    by row through the standard section and truncation of nonnegative powers."""
    if a.series.is_zero() and a.series.prec <= a.order:
        raise ZeroFunction("local action needs a nonzero expansion")
    R = a.series.field
    scheme = BasisScheme("quot", "pi")
    terms = dict(a.series.terms)

    def rule(k):
        return {k - n: c for n, c in terms.items() if n <= k - 1}

    op = WindowedOperator(
        R,
        scheme,
        scheme,
        rule,
        window=a.series.prec,
        delta=max(0, -a.order),
        label=label or f"mult[ord {a.order} at {a.place}]",
    )
    return LocalActionResult(op, max(0, -a.order), a.place)


# -- the polynomial model of the quotient at infinity --------------------------------


@dataclass(frozen=True)
class Prop71Report:
    """Desk check for the comparison map u: k[t] -> K_oo / O_oo.

    On a degree window, u kills exactly the constants (kernel 1), hits every
    pole class (cokernel 0), sends 1 to 0, and intertwines multiplication by
    t with the local action of t at infinity up to a rank-1 defect.
    """

    window: int
    kernel_dim: int
    cokernel_dim: int
    unit_maps_to_zero: bool
    defect: RankCertificate

    @property
    def ok(self) -> bool:
        return (
            self.kernel_dim == 1
            and self.cokernel_dim == 0
            and self.unit_maps_to_zero
            and self.defect.rank <= 1
            and self.defect.ok()
        )

    def __str__(self):
        return (
            f"window {self.window}: kernel {self.kernel_dim}, "
            f"cokernel {self.cokernel_dim}, u(1)=0 {self.unit_maps_to_zero}, "
            f"defect rank {self.defect.rank} ({'ok' if self.ok else 'FAIL'})"
        )


def prop71_check(field: Field, window: int = 12, var: str = "t") -> Prop71Report:
    """Check the polynomial model of the pole part at infinity on a window."""
    source = BasisScheme("mono1d", var)
    quot = BasisScheme("quot", "pi")
    one = field.one()

    def u_rule(m):
        return {} if m == 0 else {m: one}

    w_big = window + 4
    u_op = WindowedOperator(field, source, quot, u_rule, w_big, 0, "u")
    t_poly = Poly.variable(field, (var,), var)
    mult_t = multiplication_operator(source, t_poly, w_big, label="t")
    t_at_inf = local_expand(RationalFunction(t_poly), place_infinity(field, var),
                            w_big + 2)
    action = adele_local_action(t_at_inf, label="t").operator
    defect_op = (u_op.compose(mult_t) - action.compose(u_op)).with_bound((1,))
    defect = rank_on_window(defect_op, window)

    rows = []
    for m in source.indices_upto(window):
        img = u_op.apply_index(m)
        rows.append([img.get(k, field.zero()) for k in quot.indices_upto(window)])
    rank = exact_rank(rows, field)
    kernel = len(rows) - rank
    cokernel = len(quot.indices_upto(window)) - rank
    unit_zero = u_op.apply_index(0) == {}
    return Prop71Report(window, kernel, cokernel, unit_zero, defect)
