"""Canonical text syntax for field values, polynomials, series and units.

One tokenizer and Pratt-style parser produce a small expression tree; a
family of evaluators interprets the tree in the algebra a verb expects:

* polynomials         ``x^3 - 3*x*y^2 - y^3 - y``
* rational functions  ``(t+1)/(t^2-2)``
* Laurent series      ``t + 2 - t^-3 + O(t^-12)``
* bivariate tails     ``1 + 3/2*x^-1*y^-1 - x^-2*y^-3 + O(deg 8)``
* overlap-chart units ``2*(x/y)^3*(1 - x^-1*y^-1) + O(deg 9)``
* field constants     ``-3/2``, ``4 mod 7``, ``z^2+2*z``

``O(...)`` markers fix the precision (smallest wins) and are only legal as
top-level summands.  All syntax errors carry the byte offset of the first
offending token.
"""

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import ParseError
from .fields import QQ, ExtensionField, Field, Fv
from .polys import Poly
from .series import BiSeries, ChartUnit, TruncatedSeries

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/^()])"
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            out.append((kind, "^" if tok == "**" else tok, pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


# -- expression tree ---------------------------------------------------------------
# nodes: ("int", value, pos), ("name", text, pos), ("neg", a),
#        ("add"|"sub"|"mul"|"div", a, b, pos), ("pow", a, exponent, pos),
#        ("omark", ("deg", n) | (var, prec), pos)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str):
        kind, tok, pos = self.next()
        if kind != "op" or tok != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self):
        node = self.sum()
        kind, tok, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input starting with {tok!r}", pos)
        return node

    def sum(self):
        node = self.term()
        while True:
            kind, tok, pos = self.peek()
            if kind == "op" and tok in "+-":
                self.next()
                rhs = self.term()
                node = ("add" if tok == "+" else "sub", node, rhs, pos)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, tok, pos = self.peek()
            if kind == "op" and tok in "*/":
                self.next()
                rhs = self.factor()
                node = ("mul" if tok == "*" else "div", node, rhs, pos)
            else:
                return node

    def factor(self):
        kind, tok, pos = self.peek()
        if kind == "op" and tok in "+-":
            self.next()
            inner = self.factor()
            return inner if tok == "+" else ("neg", inner)
        return self.power()

    def power(self):
        node = self.atom()
        kind, tok, pos = self.peek()
        if kind == "op" and tok == "^":
            self.next()
            exp = self.signed_int()
            return ("pow", node, exp, pos)
        return node

    def signed_int(self) -> int:
        kind, tok, pos = self.next()
        sign = 1
        if kind == "op" and tok in "+-":
            sign = -1 if tok == "-" else 1
            kind, tok, pos = self.next()
        if kind != "int":
            raise ParseError("expected an integer exponent", pos)
        return sign * int(tok)

    def atom(self):
        kind, tok, pos = self.next()
        if kind == "int":
            if self.peek()[:2] == ("name", "mod"):
                self.next()
                kind2, tok2, pos2 = self.next()
                if kind2 != "int":
                    raise ParseError("expected a modulus after 'mod'", pos2)
                return ("modint", int(tok), int(tok2), pos)
            return ("int", int(tok), pos)
        if kind == "name":
            if tok == "O" and self.peek()[1] == "(":
                return self.omark(pos)
            return ("name", tok, pos)
        if kind == "op" and tok == "(":
            node = self.sum()
            self.expect_op(")")
            return node
        raise ParseError(f"expected a value, got {tok!r}" if tok else
                         "unexpected end of input", pos)

    def omark(self, start: int):
        self.expect_op("(")
        kind, tok, pos = self.next()
        if kind != "name":
            raise ParseError("expected 'deg' or a variable in O(...)", pos)
        if tok in ("deg", "level"):
            kind2, tok2, pos2 = self.next()
            if kind2 != "int":
                raise ParseError(f"expected an integer after {tok!r}", pos2)
            payload = ("deg", int(tok2))
        else:
            self.expect_op("^")
            exp = self.signed_int()
            if exp >= 0:
                raise ParseError(
                    "a precision marker needs a negative exponent", pos)
            payload = (tok, -exp)
        self.expect_op(")")
        return ("omark", payload, start)


def _extract_markers(node, top: bool, markers: List):
    """Collect O(...) markers; they may only appear as top-level summands."""
    tag = node[0]
    if tag == "omark":
        if not top:
            raise ParseError("O(...) must be a top-level summand", node[2])
        markers.append(node)
        return ("int", 0, node[2])
    if tag in ("add", "sub"):
        a = _extract_markers(node[1], top, markers)
        b = _extract_markers(node[2], top, markers)
        return (tag, a, b, node[3])
    if tag == "neg":
        return ("neg", _extract_markers(node[1], False, markers))
    if tag in ("mul", "div"):
        a = _extract_markers(node[1], False, markers)
        b = _extract_markers(node[2], False, markers)
        return (tag, a, b, node[3])
    if tag == "pow":
        return ("pow", _extract_markers(node[1], False, markers),
                node[2], node[3])
    return node


def _marker_prec(markers, allowed_vars, allow_deg: bool,
                 what: str) -> Optional[int]:
    precs = []
    for node in markers:
        (kind, n), pos = node[1], node[2]
        if kind == "deg":
            if not allow_deg:
                raise ParseError(f"O(deg n) is not valid in {what}", pos)
        elif kind not in allowed_vars:
            raise ParseError(
                f"precision marker variable {kind!r} is not valid in {what}",
                pos)
        precs.append(n)
    return min(precs) if precs else None


# -- generic evaluation -------------------------------------------------------------


class _Algebra:
    """Operations an evaluator must provide; positions feed error messages."""

    def const(self, n: int, pos: int):
        raise NotImplementedError

    def modint(self, n: int, p: int, pos: int):
        """A residue literal 'n mod p', as printed by finite-field values."""
        char = getattr(getattr(self, "field", None), "char", 0)
        if char != p:
            raise ParseError(
                f"value is mod {p}, but the field has characteristic {char}",
                pos)
        return self.const(n, pos)

    def name(self, s: str, pos: int):
        raise NotImplementedError

    def add(self, a, b, pos):
        return a + b

    def sub(self, a, b, pos):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b, pos):
        return a * b

    def div(self, a, b, pos):
        raise NotImplementedError

    def pow(self, a, e: int, pos: int):
        raise NotImplementedError

    def _pospow(self, a, e: int, one):
        out = one
        b = a
        while e:
            if e & 1:
                out = self.mul(out, b, 0)
            b = self.mul(b, b, 0)
            e >>= 1
        return out


def _eval(node, alg: _Algebra):
    tag = node[0]
    if tag == "int":
        return alg.const(node[1], node[2])
    if tag == "modint":
        return alg.modint(node[1], node[2], node[3])
    if tag == "name":
        return alg.name(node[1], node[2])
    if tag == "neg":
        return alg.neg(_eval(node[1], alg))
    if tag == "add":
        return alg.add(_eval(node[1], alg), _eval(node[2], alg), node[3])
    if tag == "sub":
        return alg.sub(_eval(node[1], alg), _eval(node[2], alg), node[3])
    if tag == "mul":
        return alg.mul(_eval(node[1], alg), _eval(node[2], alg), node[3])
    if tag == "div":
        return alg.div(_eval(node[1], alg), _eval(node[2], alg), node[3])
    if tag == "pow":
        return alg.pow(_eval(node[1], alg), node[2], node[3])
    raise AssertionError(f"unhandled node {tag}")


# -- field values -------------------------------------------------------------------


class _ValueAlgebra(_Algebra):
    def __init__(self, field: Field):
        self.field = field

    def const(self, n, pos):
        return self.field(n)

    def name(self, s, pos):
        if s == "z" and isinstance(self.field, ExtensionField):
            return self.field.gen()
        raise ParseError(f"unknown constant {s!r}", pos)

    def div(self, a, b, pos):
        if b.is_zero():
            raise ParseError("division by zero", pos)
        return a * b.inv()

    def pow(self, a, e, pos):
        return a**e


_MOD_RE = re.compile(r"^\s*(-?\d+)\s+mod\s+(\d+)\s*$")


def parse_field_value(text: str, field: Field) -> Fv:
    """Parse the textual encoding of one field element: 'a/b' over Q,
    'a mod p' or a plain integer over F_p, a polynomial in z over F_q."""
    m = _MOD_RE.match(text)
    if m is not None:
        a, p = int(m.group(1)), int(m.group(2))
        if getattr(field, "char", 0) != p:
            raise ParseError(f"value is mod {p}, field has "
                             f"characteristic {getattr(field, 'char', 0)}", 0)
        return field(a)
    if field == QQ:
        try:
            return field(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as err:
            raise ParseError(f"bad rational literal: {err}", 0) from None
    node = _Parser(text).parse()
    markers: List = []
    node = _extract_markers(node, True, markers)
    if markers:
        raise ParseError("a field constant takes no precision marker",
                         markers[0][2])
    return _eval(node, _ValueAlgebra(field))


# -- polynomials and rational functions ----------------------------------------------


class _PolyAlgebra(_Algebra):
    def __init__(self, field: Field, vars: Tuple[str, ...]):
        self.field = field
        self.vars = tuple(vars)

    def const(self, n, pos):
        return Poly.const(self.field, self.vars, n)

    def name(self, s, pos):
        if s not in self.vars:
            if s == "z" and isinstance(self.field, ExtensionField):
                return Poly.const(self.field, self.vars, self.field.gen())
            raise ParseError(f"unknown variable {s!r} (expected one of "
                             f"{', '.join(self.vars)})", pos)
        return Poly.variable(self.field, self.vars, s)

    def div(self, a, b, pos):
        if b.total_degree() > 0:
            raise ParseError("only division by constants is allowed in a "
                             "polynomial", pos)
        c = b.coeff(*((0,) * len(self.vars)))
        if c.is_zero():
            raise ParseError("division by zero", pos)
        return a.scale(c.inv())

    def pow(self, a, e, pos):
        if e < 0:
            raise ParseError("negative exponents are not allowed in a "
                             "polynomial", pos)
        return self._pospow(a, e, self.const(1, pos))


def parse_poly(text: str, field: Field, vars: Tuple[str, ...]) -> Poly:
    node = _Parser(text).parse()
    markers: List = []
    node = _extract_markers(node, True, markers)
    if markers:
        raise ParseError("a polynomial takes no precision marker",
                         markers[0][2])
    return _eval(node, _PolyAlgebra(field, vars))


class _RatAlgebra(_Algebra):
    def __init__(self, field: Field, var: str):
        from .adeles import RationalFunction

        self.field = field
        self.var = var
        self._rf = RationalFunction

    def const(self, n, pos):
        return self._rf.constant(self.field, self.var, n)

    def name(self, s, pos):
        if s != self.var:
            if s == "z" and isinstance(self.field, ExtensionField):
                return self._rf.constant(self.field, self.var,
                                         self.field.gen())
            raise ParseError(f"unknown variable {s!r} (expected {self.var!r})",
                             pos)
        return self._rf.variable(self.field, self.var)

    def div(self, a, b, pos):
        if b.is_zero():
            raise ParseError("division by the zero function", pos)
        return a / b

    def pow(self, a, e, pos):
        if e < 0:
            if a.is_zero():
                raise ParseError("cannot invert zero", pos)
            return (self.const(1, pos) / a) ** (-e)
        return a**e


def parse_ratfun(text: str, field: Field, var: str = "t"):
    node = _Parser(text).parse()
    markers: List = []
    node = _extract_markers(node, True, markers)
    if markers:
        raise ParseError("a rational function takes no precision marker",
                         markers[0][2])
    return _eval(node, _RatAlgebra(field, var))


# -- descending Laurent series -------------------------------------------------------


class _SeriesAlgebra(_Algebra):
    def __init__(self, field: Field, var: str, prec: int):
        self.field = field
        self.var = var
        self.prec = prec

    def const(self, n, pos):
        return TruncatedSeries.from_tdict(self.field, self.var, {0: n},
                                          self.prec)

    def name(self, s, pos):
        if s != self.var:
            if s == "z" and isinstance(self.field, ExtensionField):
                return TruncatedSeries.from_tdict(
                    self.field, self.var, {0: self.field.gen()}, self.prec)
            raise ParseError(f"unknown variable {s!r} (expected {self.var!r})",
                             pos)
        return TruncatedSeries.from_tdict(self.field, self.var, {1: 1},
                                          self.prec)

    def div(self, a, b, pos):
        return a * b.invert()

    def pow(self, a, e, pos):
        if e < 0:
            return self.pow(a.invert(), -e, pos)
        return self._pospow(a, e, self.const(1, pos))


def _exponent_bound(node) -> int:
    """Upper bound on the largest |exponent| an expression can reach, used
    to pad the working precision so literal terms parse exactly."""
    tag = node[0]
    if tag == "name":
        return 1
    if tag == "neg":
        return _exponent_bound(node[1])
    if tag in ("add", "sub"):
        return max(_exponent_bound(node[1]), _exponent_bound(node[2]))
    if tag in ("mul", "div"):
        return _exponent_bound(node[1]) + _exponent_bound(node[2])
    if tag == "pow":
        return _exponent_bound(node[1]) * max(1, abs(node[2]))
    return 0


def parse_series(text: str, field: Field, var: str = "t",
                 default_prec: int = 12) -> TruncatedSeries:
    """Parse a truncated series descending in the variable; ``O(var^-N)``
    sets the precision, otherwise ``default_prec`` applies."""
    node = _Parser(text).parse()
    markers: List = []
    node = _extract_markers(node, True, markers)
    prec = _marker_prec(markers, {var}, False, "a series")
    if prec is None:
        prec = default_prec
    if prec < 1:
        raise ParseError("series precision must be positive", 0)
    head = min(2 * _exponent_bound(node) + 4, 4 * prec + 64)
    out = _eval(node, _SeriesAlgebra(field, var, prec + head))
    return out.truncate(min(out.prec, prec))


# -- exact Laurent support in two variables ------------------------------------------


class _LaurentBi:
    """Finite sums of c * x^a * y^b with integer exponents, used as the
    staging value for tails and chart units."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: Dict[Tuple[int, int], Fv]):
        self.field = field
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    def __add__(self, other):
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e)
            t[e] = c if s is None else s + c
        return _LaurentBi(self.field, t)

    def __neg__(self):
        return _LaurentBi(self.field,
                          {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        t: Dict[Tuple[int, int], Fv] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                e = (a1 + a2, b1 + b2)
                prod = c1 * c2
                s = t.get(e)
                t[e] = prod if s is None else s + prod
        return _LaurentBi(self.field, t)

    def single_term(self) -> Optional[Tuple[Tuple[int, int], Fv]]:
        if len(self.terms) != 1:
            return None
        ((e, c),) = self.terms.items()
        return e, c


class _LaurentAlgebra(_Algebra):
    def __init__(self, field: Field, vars: Tuple[str, str]):
        self.field = field
        self.vars = tuple(vars)

    def const(self, n, pos):
        return _LaurentBi(self.field, {(0, 0): self.field(n)})

    def name(self, s, pos):
        if s == self.vars[0]:
            return _LaurentBi(self.field, {(1, 0): self.field.one()})
        if s == self.vars[1]:
            return _LaurentBi(self.field, {(0, 1): self.field.one()})
        if s == "z" and isinstance(self.field, ExtensionField):
            return _LaurentBi(self.field, {(0, 0): self.field.gen()})
        raise ParseError(f"unknown variable {s!r} (expected "
                         f"{self.vars[0]!r}, {self.vars[1]!r})", pos)

    def div(self, a, b, pos):
        inv = self._invert(b, pos)
        return a * inv

    def _invert(self, b: _LaurentBi, pos: int) -> _LaurentBi:
        st = b.single_term()
        if st is None:
            raise ParseError("only division by a single term is allowed "
                             "here", pos)
        (ea, eb), c = st
        if c.is_zero():
            raise ParseError("division by zero", pos)
        return _LaurentBi(self.field, {(-ea, -eb): c.inv()})

    def pow(self, a, e, pos):
        if e < 0:
            return self.pow(self._invert(a, pos), -e, pos)
        return self._pospow(a, e, self.const(1, pos))


def parse_biseries(text: str, field: Field, vars: Tuple[str, str] = ("x", "y"),
                   default_prec: int = 12) -> BiSeries:
    """Parse 1 + (tail in negative powers) as a bivariate series in the two
    inverse variables; ``O(deg N)`` sets the total-degree precision."""
    node = _Parser(text).parse()
    markers: List = []
    node = _extract_markers(node, True, markers)
    prec = _marker_prec(markers, set(), True, "a bivariate series")
    if prec is None:
        prec = default_prec
    if prec < 1:
        raise ParseError("precision must be positive", 0)
    lb = _eval(node, _LaurentAlgebra(field, vars))
    terms: Dict[Tuple[int, int], Fv] = {}
    for (a, b), c in lb.terms.items():
        if a > 0 or b > 0:
            raise ParseError(
                f"term {vars[0]}^{a}*{vars[1]}^{b} has a positive exponent; "
                "a bivariate series lives in the inverse variables", 0)
        if -(a + b) < prec:
            terms[(-a, -b)] = c
    return BiSeries(field, tuple(vars), terms, prec)


def parse_chart_unit(text: str, field: Field,
                     vars: Tuple[str, str] = ("x", "y"),
                     default_order: int = 12) -> ChartUnit:
    """Parse an overlap-chart unit  scalar * (x/y)^n * (1 + tail)  given as
    any expanded expression; ``O(deg N)`` sets the filtration order."""
    node = _Parser(text).parse()
    markers: List = []
    node = _extract_markers(node, True, markers)
    order = _marker_prec(markers, set(), True, "a chart unit")
    if order is None:
        order = default_order
    if order < 1:
        raise ParseError("order must be positive", 0)
    lb = _eval(node, _LaurentAlgebra(field, vars))
    level0 = [(e, c) for e, c in lb.terms.items() if e[0] + e[1] == 0]
    if len(level0) != 1:
        raise ParseError(
            "a chart unit needs exactly one term of level 0 "
            f"(found {len(level0)})", 0)
    (n, _), scalar = level0[0]
    tail: Dict[Tuple[int, int], Fv] = {}
    sinv = scalar.inv() if not scalar.is_zero() else None
    if sinv is None:
        raise ParseError("the level-0 coefficient must be a unit", 0)
    for (a, b), c in lb.terms.items():
        level = -(a + b)
        if level == 0:
            continue
        if level < 0:
            raise ParseError(
                f"term {vars[0]}^{a}*{vars[1]}^{b} has negative filtration "
                "level; not a chart unit", 0)
        if level < order:
            tail[(a - n, b + n)] = c * sinv
    return ChartUnit(field, "G12", scalar, n, tail, order)
