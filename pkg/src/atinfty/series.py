"""Truncated series types.

TruncatedSeries models a Laurent series with finitely many terms on the
"large" side and a precision cutoff on the small side.  Internally terms
are keyed by the exponent of the small parameter (ascending), so the same
type serves both

  * series at infinity in a variable t (small parameter t^-1, printed in
    descending powers of t; set inverted=True), and
  * local expansions in a uniformizer pi (printed ascending; inverted=False).

A series of precision N has known coefficients exactly for internal
exponents e < N.  For an inverted series in t this is the usual convention
"known for t-exponents > -N".

BiSeries models elements of k[[x^-1, y^-1]] truncated by total degree, and
ChartUnit models units of the three boundary charts of the plane at
infinity, with the common filtration level of a monomial x^a y^b given by
-(a + b).
"""

from __future__ import annotations

from typing import Dict, Optional, Tuple

from .errors import (
    DescriptorMismatch,
    MalformedCocycle,
    NotAUnit,
    NotInFiltrationLevel,
    PrecisionExhausted,
    VariableMismatch,
)
from .fields import Field, Fv
from .polys import Poly


class TruncatedSeries:
    """Laurent series with exact coefficients below a precision cutoff."""

    __slots__ = ("field", "var", "inverted", "terms", "prec")

    def __init__(self, field: Field, var: str, terms: Dict[int, Fv], prec: int,
                 inverted: bool = True):
        self.field = field
        self.var = var
        self.inverted = inverted
        self.prec = prec
        self.terms = {e: c for e, c in terms.items()
                      if e < prec and not c.is_zero()}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_tdict(cls, field, var, tdict, prec, inverted=True):
        """Build from exponents of the printed variable.  For an inverted
        series the printed exponent n corresponds to internal -n."""
        sign = -1 if inverted else 1
        terms = {}
        for n, c in tdict.items():
            c = c if isinstance(c, Fv) else field(c)
            terms[sign * n] = c
        return cls(field, var, terms, prec, inverted)

    @classmethod
    def zero(cls, field, var, prec, inverted=True):
        return cls(field, var, {}, prec, inverted)

    @classmethod
    def one(cls, field, var, prec, inverted=True):
        return cls(field, var, {0: field.one()}, prec, inverted)

    @classmethod
    def from_poly(cls, poly: Poly, prec: int, inverted: bool = True):
        """Embed a univariate (Laurent-free) polynomial as a series."""
        assert len(poly.vars) == 1
        sign = -1 if inverted else 1
        terms = {sign * e[0]: c for e, c in poly.terms.items()}
        return cls(poly.field, poly.vars[0], terms, prec, inverted)

    # -- basic structure ------------------------------------------------------

    def _check(self, other: "TruncatedSeries"):
        if self.field != other.field:
            raise DescriptorMismatch("mixed coefficient fields")
        if self.var != other.var or self.inverted != other.inverted:
            raise VariableMismatch(
                f"mixed series variables {self.var!r} vs {other.var!r}"
            )

    def coeff(self, e: int) -> Fv:
        """Coefficient at internal exponent e (must be below the precision)."""
        if e >= self.prec:
            raise PrecisionExhausted(
                f"coefficient at {e} unknown at precision {self.prec}"
            )
        return self.terms.get(e, self.field.zero())

    def tcoeff(self, n: int) -> Fv:
        """Coefficient of the printed variable to the n-th power."""
        return self.coeff(-n if self.inverted else n)

    def valuation(self) -> int:
        """Smallest internal exponent with nonzero coefficient; for the
        (known-)zero series, the precision."""
        return min(self.terms) if self.terms else self.prec

    def pole_order(self) -> int:
        """max(0, largest printed exponent) for an inverted series."""
        if not self.terms:
            return 0
        return max(0, -min(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def support(self):
        return sorted(self.terms)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        prec = min(self.prec, other.prec)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e)
            t[e] = c if s is None else s + c
        return TruncatedSeries(self.field, self.var, t, prec, self.inverted)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TruncatedSeries(
            self.field, self.var, {e: -c for e, c in self.terms.items()},
            self.prec, self.inverted,
        )

    def __mul__(self, other):
        if isinstance(other, Fv):
            return self.scale(other)
        self._check(other)
        prec = min(self.prec + other.valuation(), other.prec + self.valuation())
        t: Dict[int, Fv] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e >= prec:
                    continue
                prod = c1 * c2
                s = t.get(e)
                t[e] = prod if s is None else s + prod
        return TruncatedSeries(self.field, self.var, t, prec, self.inverted)

    def scale(self, c: Fv):
        return TruncatedSeries(
            self.field, self.var, {e: v * c for e, v in self.terms.items()},
            self.prec, self.inverted,
        )

    def shift(self, k: int):
        """Multiply by the k-th power of the small parameter."""
        return TruncatedSeries(
            self.field, self.var, {e + k: c for e, c in self.terms.items()},
            self.prec + k, self.inverted,
        )

    def invert(self) -> "TruncatedSeries":
        """Series inverse; precision drops by twice the valuation."""
        if self.is_zero():
            raise NotAUnit("cannot invert a series with no known nonzero term")
        v = self.valuation()
        nterms = self.prec - v  # known coefficients of the unit part
        a = [self.terms.get(v + i, self.field.zero()) for i in range(nterms)]
        c0inv = a[0].inv()
        b = [c0inv]
        for k in range(1, nterms):
            acc = self.field.zero()
            for i in range(1, k + 1):
                if not a[i].is_zero():
                    acc = acc + a[i] * b[k - i]
            b.append(-c0inv * acc)
        terms = {-v + i: c for i, c in enumerate(b)}
        return TruncatedSeries(
            self.field, self.var, terms, self.prec - 2 * v, self.inverted
        )

    def __truediv__(self, other):
        return self * other.invert()

    def __pow__(self, n: int):
        if n < 0:
            return self.invert() ** (-n)
        r = TruncatedSeries.one(self.field, self.var,
                                self.prec + abs(self.valuation()) * (n + 1),
                                self.inverted)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b if n > 1 else b
            n >>= 1
        return r

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec > self.prec:
            raise PrecisionExhausted(
                f"cannot extend precision {self.prec} to {prec}"
            )
        return TruncatedSeries(self.field, self.var, self.terms, prec, self.inverted)

    def derivative(self) -> "TruncatedSeries":
        """d/d(small parameter); coefficients treated as constants."""
        t = {}
        for e, c in self.terms.items():
            if e != 0:
                t[e - 1] = c * self.field(e)
        return TruncatedSeries(self.field, self.var, t, self.prec - 1, self.inverted)

    # -- comparison and printing ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.var == other.var
            and self.inverted == other.inverted
            and self.prec == other.prec
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.var, self.inverted, self.prec,
                     frozenset(self.terms.items())))

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality of all coefficients up to the smaller precision."""
        self._check(other)
        prec = min(self.prec, other.prec)
        keys = {e for e in self.terms if e < prec} | {
            e for e in other.terms if e < prec
        }
        z = self.field.zero()
        return all(self.terms.get(e, z) == other.terms.get(e, z) for e in keys)

    def _fmt_term(self, e: int, c: Fv) -> str:
        n = -e if self.inverted else e
        cs = str(c)
        wrap = "+" in cs or " " in cs or "-" in cs[1:]
        if n == 0:
            return f"({cs})" if wrap else cs
        mono = self.var if n == 1 else f"{self.var}^{n}"
        if c == self.field.one():
            return mono
        if c == -self.field.one():
            return f"-{mono}"
        return f"({cs})*{mono}" if wrap else f"{cs}*{mono}"

    def __str__(self):
        parts = [self._fmt_term(e, self.terms[e]) for e in sorted(self.terms)]
        if self.inverted:
            tail = f"O({self.var}^{-self.prec})"
        else:
            tail = f"O({self.var}^{self.prec})"
        if not parts:
            return tail
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out + "+" + tail

    def __repr__(self):
        return f"TruncatedSeries({self})"


class BiSeries:
    """Element of k[[x^-1, y^-1]] truncated at a total degree.

    Terms are keyed by (i, j) >= (0, 0) meaning x^-i y^-j; all stored pairs
    satisfy i + j < prec.
    """

    __slots__ = ("field", "vars", "terms", "prec")

    def __init__(self, field: Field, vars: Tuple[str, str],
                 terms: Dict[Tuple[int, int], Fv], prec: int):
        self.field = field
        self.vars = tuple(vars)
        self.prec = prec
        self.terms = {
            e: c for e, c in terms.items()
            if e[0] + e[1] < prec and not c.is_zero()
        }

    @classmethod
    def zero(cls, field, prec, vars=("x", "y")):
        return cls(field, vars, {}, prec)

    @classmethod
    def one(cls, field, prec, vars=("x", "y")):
        return cls(field, vars, {(0, 0): field.one()}, prec)

    def _check(self, other: "BiSeries"):
        if self.field != other.field:
            raise DescriptorMismatch("mixed coefficient fields")
        if self.vars != other.vars:
            raise VariableMismatch("mixed series variables")

    def coeff(self, i: int, j: int) -> Fv:
        if i + j >= self.prec:
            raise PrecisionExhausted(
                f"coefficient at total degree {i + j} unknown at precision "
                f"{self.prec}"
            )
        return self.terms.get((i, j), self.field.zero())

    def valuation(self) -> int:
        return min((i + j for i, j in self.terms), default=self.prec)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        self._check(other)
        prec = min(self.prec, other.prec)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e)
            t[e] = c if s is None else s + c
        return BiSeries(self.field, self.vars, t, prec)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BiSeries(self.field, self.vars,
                        {e: -c for e, c in self.terms.items()}, self.prec)

    def __mul__(self, other):
        if isinstance(other, Fv):
            return BiSeries(self.field, self.vars,
                            {e: c * other for e, c in self.terms.items()},
                            self.prec)
        self._check(other)
        prec = min(self.prec + other.valuation(), other.prec + self.valuation())
        t: Dict[Tuple[int, int], Fv] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                if i1 + i2 + j1 + j2 >= prec:
                    continue
                e = (i1 + i2, j1 + j2)
                prod = c1 * c2
                s = t.get(e)
                t[e] = prod if s is None else s + prod
        return BiSeries(self.field, self.vars, t, prec)

    def invert(self) -> "BiSeries":
        c0 = self.terms.get((0, 0))
        if c0 is None:
            raise NotAUnit("constant term is zero (or unknown)")
        c0inv = c0.inv()
        one = BiSeries.one(self.field, self.prec, self.vars)
        u = (self * c0inv) - one  # valuation >= 1
        acc = one
        power = one
        # geometric series terminates at the truncation order
        for _ in range(self.prec):
            power = power * u
            if power.is_zero():
                break
            acc = acc + (-power if _ % 2 == 0 else power)
        return acc * c0inv

    def truncate(self, prec: int) -> "BiSeries":
        if prec > self.prec:
            raise PrecisionExhausted(
                f"cannot extend precision {self.prec} to {prec}"
            )
        return BiSeries(self.field, self.vars, self.terms, prec)

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (self.field == other.field and self.vars == other.vars
                and self.prec == other.prec and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field, self.vars, self.prec,
                     frozenset(self.terms.items())))

    def agrees_with(self, other: "BiSeries") -> bool:
        self._check(other)
        prec = min(self.prec, other.prec)
        keys = {e for e in self.terms if sum(e) < prec} | {
            e for e in other.terms if sum(e) < prec
        }
        z = self.field.zero()
        return all(self.terms.get(e, z) == other.terms.get(e, z) for e in keys)

    def __str__(self):
        x, y = self.vars
        parts = []
        for (i, j) in sorted(self.terms):
            c = self.terms[(i, j)]
            mono = "*".join(
                ([f"{x}^{-i}"] if i else []) + ([f"{y}^{-j}"] if j else [])
            )
            cs = str(c)
            wrap = "+" in cs or " " in cs or "-" in cs[1:]
            if not mono:
                parts.append(f"({cs})" if wrap else cs)
            elif c == self.field.one():
                parts.append(mono)
            elif c == -self.field.one():
                parts.append(f"-{mono}")
            else:
                parts.append(f"({cs})*{mono}" if wrap else f"{cs}*{mono}")
        out = parts[0] if parts else ""
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        tail = f"O(deg {self.prec})"
        return f"{out}+{tail}" if out else tail

    def __repr__(self):
        return f"BiSeries({self})"


def biseries_is_in_g(g: BiSeries) -> bool:
    """1 + x^-1 y^-1 k[[x^-1, y^-1]]: constant term 1, no pure-row terms."""
    one = g.field.one()
    if g.terms.get((0, 0)) != one:
        return False
    for (i, j) in g.terms:
        if (i, j) != (0, 0) and (i == 0 or j == 0):
            return False
    return True


# -- chart units --------------------------------------------------------------

CHARTS = ("G1", "G2", "G12")


def _support_ok(chart: str, a: int, b: int) -> bool:
    """Whether the tail monomial x^a y^b is allowed in the given chart."""
    if a + b > -1:
        return False
    if chart == "G1":
        return b >= 0
    if chart == "G2":
        return a >= 0
    return True  # G12: any monomial of total degree <= -1


class ChartUnit:
    """Unit of a boundary chart: scalar * (x/y)^mono * (1 + tail).

    chart "G1": tail in x^-1 k[y/x][[x^-1]]            (mono must be 0)
    chart "G2": tail in y^-1 k[x/y][[y^-1]]            (mono must be 0)
    chart "G12": scalar * (x/y)^mono times 1 + tail in
                 x^-1 k[(x/y), (x/y)^-1][[x^-1]]

    Tail terms are keyed by signed exponent pairs (a, b) of x^a y^b; the
    filtration level of a term is -(a + b), and terms are stored for levels
    1 <= level < order.
    """

    __slots__ = ("field", "chart", "scalar", "mono", "tail", "order")

    def __init__(self, field: Field, chart: str, scalar: Fv, mono: int,
                 tail: Dict[Tuple[int, int], Fv], order: int):
        if chart not in CHARTS:
            raise MalformedCocycle(f"unknown chart {chart!r}")
        if scalar.is_zero():
            raise MalformedCocycle("leading scalar must be a unit")
        if mono != 0 and chart != "G12":
            raise MalformedCocycle(f"(x/y)^n leading monomial only in G12")
        self.field = field
        self.chart = chart
        self.scalar = scalar
        self.mono = mono
        self.order = order
        clean = {}
        for (a, b), c in tail.items():
            if c.is_zero():
                continue
            level = -(a + b)
            if level >= order:
                continue
            if level < 1 or not _support_ok(chart, a, b):
                raise MalformedCocycle(
                    f"monomial x^{a} y^{b} not allowed in chart {chart}"
                )
            clean[(a, b)] = c
        self.tail = clean

    @classmethod
    def one(cls, field, chart, order):
        return cls(field, chart, field.one(), 0, {}, order)

    def _check(self, other: "ChartUnit"):
        if self.field != other.field:
            raise DescriptorMismatch("mixed coefficient fields")
        if self.chart != other.chart:
            raise VariableMismatch(
                f"mixed charts {self.chart} and {other.chart}"
            )

    def __mul__(self, other: "ChartUnit") -> "ChartUnit":
        self._check(other)
        order = min(self.order, other.order)
        t = dict(self.tail)
        for e, c in other.tail.items():
            s = t.get(e)
            t[e] = c if s is None else s + c
        for (a1, b1), c1 in self.tail.items():
            for (a2, b2), c2 in other.tail.items():
                if -(a1 + b1 + a2 + b2) >= order:
                    continue
                e = (a1 + a2, b1 + b2)
                prod = c1 * c2
                s = t.get(e)
                t[e] = prod if s is None else s + prod
        return ChartUnit(self.field, self.chart, self.scalar * other.scalar,
                         self.mono + other.mono, t, order)

    def invert(self) -> "ChartUnit":
        inv_tail: Dict[Tuple[int, int], Fv] = {}
        power = {(0, 0): self.field.one()}
        sign = -1
        for _ in range(1, self.order):
            nxt: Dict[Tuple[int, int], Fv] = {}
            for (a1, b1), c1 in power.items():
                for (a2, b2), c2 in self.tail.items():
                    if -(a1 + b1 + a2 + b2) >= self.order:
                        continue
                    e = (a1 + a2, b1 + b2)
                    prod = c1 * c2
                    s = nxt.get(e)
                    nxt[e] = prod if s is None else s + prod
            if not nxt:
                break
            power = nxt
            for e, c in power.items():
                add = c if sign > 0 else -c
                s = inv_tail.get(e)
                inv_tail[e] = add if s is None else s + add
            sign = -sign
        return ChartUnit(self.field, self.chart, self.scalar.inv(),
                         -self.mono, inv_tail, self.order)

    def truncate(self, order: int) -> "ChartUnit":
        if order > self.order:
            raise PrecisionExhausted(
                f"cannot extend order {self.order} to {order}"
            )
        return ChartUnit(self.field, self.chart, self.scalar, self.mono,
                         self.tail, order)

    def filtration_level(self) -> int:
        """Largest n with self in F^n (for units with scalar 1, mono 0)."""
        if self.scalar != self.field.one() or self.mono != 0:
            return 0
        return min((-(a + b) for a, b in self.tail), default=self.order)

    def graded_piece(self, n: int) -> Dict[int, Fv]:
        """The level-n component as a Laurent polynomial in (x/y): the
        coefficient dict {k: c} of x^-n (x/y)^k.  Requires membership in F^n."""
        if n < 1:
            raise NotInFiltrationLevel("graded pieces are defined for n >= 1")
        if self.filtration_level() < n:
            raise NotInFiltrationLevel(
                f"unit has terms below filtration level {n}"
            )
        out = {}
        for (a, b), c in self.tail.items():
            if -(a + b) == n:
                out[-b] = c
        return out

    def __eq__(self, other):
        if not isinstance(other, ChartUnit):
            return NotImplemented
        return (self.field == other.field and self.chart == other.chart
                and self.scalar == other.scalar and self.mono == other.mono
                and self.order == other.order and self.tail == other.tail)

    def __hash__(self):
        return hash((self.field, self.chart, self.scalar, self.mono,
                     self.order, frozenset(self.tail.items())))

    def agrees_with(self, other: "ChartUnit") -> bool:
        self._check(other)
        if self.scalar != other.scalar or self.mono != other.mono:
            return False
        order = min(self.order, other.order)
        keys = {e for e in self.tail if -(e[0] + e[1]) < order} | {
            e for e in other.tail if -(e[0] + e[1]) < order
        }
        z = self.field.zero()
        return all(self.tail.get(e, z) == other.tail.get(e, z) for e in keys)

    def __str__(self):
        head = ""
        if self.scalar != self.field.one() or (not self.tail and self.mono == 0):
            cs = str(self.scalar)
            head = f"({cs})" if ("+" in cs or " " in cs or "-" in cs[1:]) else cs
        if self.mono:
            m = f"(x/y)^{self.mono}" if self.mono != 1 else "(x/y)"
            head = f"{head}*{m}" if head else m
        parts = []
        for (a, b) in sorted(self.tail, key=lambda e: (-(e[0] + e[1]), -e[1])):
            c = self.tail[(a, b)]
            mono = "*".join(
                ([f"x^{a}"] if a else []) + ([f"y^{b}"] if b else [])
            )
            cs = str(c)
            wrap = "+" in cs or " " in cs or "-" in cs[1:]
            if c == self.field.one():
                parts.append(mono)
            elif c == -self.field.one():
                parts.append(f"-{mono}")
            else:
                parts.append(f"({cs})*{mono}" if wrap else f"{cs}*{mono}")
        tail_str = "1" if (self.tail or not head) else ""
        for p in parts:
            tail_str += p if p.startswith("-") else "+" + p
        if head and tail_str:
            body = f"{head}*({tail_str})"
        else:
            body = head or tail_str
        return f"{body}+O(level {self.order})"

    def __repr__(self):
        return f"ChartUnit[{self.chart}]({self})"


def chart_embed(unit, order: Optional[int] = None) -> ChartUnit:
    """Re-expand a G1/G2 unit, or a pair (n, g in G), in the overlap chart.

    The result is exact to the filtration order: no coefficients outside the
    input's stored range are needed.
    """
    if isinstance(unit, ChartUnit):
        target = unit.order if order is None else order
        if target > unit.order:
            raise PrecisionExhausted(
                f"re-expansion to order {target} needs order {unit.order} input"
            )
        return ChartUnit(unit.field, "G12", unit.scalar, unit.mono,
                         unit.tail, target)
    n, g = unit
    if not isinstance(g, BiSeries):
        raise MalformedCocycle("expected (int, BiSeries in G)")
    if not biseries_is_in_g(g):
        raise MalformedCocycle("second component is not in G")
    target = g.prec if order is None else order
    if target > g.prec:
        raise PrecisionExhausted(
            f"re-expansion to order {target} needs precision {g.prec} input"
        )
    tail = {(-i, -j): c for (i, j), c in g.terms.items() if (i, j) != (0, 0)}
    return ChartUnit(g.field, "G12", g.field.one(), n, tail, target)


def chart_unit_from_biseries_g1(scalar: Fv, series_terms, order: int,
                                field: Field) -> ChartUnit:
    """Helper for tests: G1 unit scalar + sum of x^-m (y/x)^j terms given as
    {(m, j): c}."""
    tail = {}
    for (m, j), c in series_terms.items():
        tail[(-m - j, j)] = c if isinstance(c, Fv) else field(c)
    return ChartUnit(field, "G1", scalar, 0, tail, order)


def chart_unit_from_biseries_g2(scalar: Fv, series_terms, order: int,
                                field: Field) -> ChartUnit:
    """G2 unit scalar + sum of y^-m (x/y)^j terms given as {(m, j): c}."""
    tail = {}
    for (m, j), c in series_terms.items():
        tail[(j, -m - j)] = c if isinstance(c, Fv) else field(c)
    return ChartUnit(field, "G2", scalar, 0, tail, order)
