"""Sparse polynomials in one or two variables over an exact field.

Univariate polynomials additionally support division, gcd, derivative,
root finding and full factorization over finite fields (squarefree,
distinct-degree, then Cantor-Zassenhaus equal-degree splitting, with a
deterministic internal seed so repeated runs agree).  Over the rationals
only rational roots are extracted; anything left of degree >= 1 is reported
as the non-split part.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from typing import Iterable, Optional

from .errors import AtInftyError, DivisionByZero, NotAUnit, VariableMismatch
from .fields import ExtensionField, Field, Fv, PrimeField, QQ


class Poly:
    """Polynomial with exponent-tuple keys and FieldValue coefficients."""

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: Field, vars: tuple, terms: dict):
        self.field = field
        self.vars = tuple(vars)
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field, vars):
        return cls(field, vars, {})

    @classmethod
    def const(cls, field, vars, c):
        c = field(c) if not isinstance(c, Fv) else c
        return cls(field, vars, {(0,) * len(vars): c})

    @classmethod
    def monomial(cls, field, vars, exps, c=1):
        c = field(c) if not isinstance(c, Fv) else c
        return cls(field, vars, {tuple(exps): c})

    @classmethod
    def variable(cls, field, vars, name):
        exps = tuple(1 if v == name else 0 for v in vars)
        if sum(exps) != 1:
            raise VariableMismatch(f"{name!r} is not among {vars}")
        return cls.monomial(field, vars, exps)

    @classmethod
    def from_coeffs(cls, field, var, coeffs: Iterable):
        """Dense univariate constructor, low degree first."""
        terms = {}
        for i, c in enumerate(coeffs):
            c = field(c) if not isinstance(c, Fv) else c
            if not c.is_zero():
                terms[(i,)] = c
        return cls(field, (var,), terms)

    # -- structure -----------------------------------------------------------

    def _check(self, other: "Poly"):
        if self.field != other.field:
            raise VariableMismatch("mixed coefficient fields")
        if self.vars != other.vars:
            raise VariableMismatch(f"mixed variables {self.vars} vs {other.vars}")

    def is_zero(self):
        return not self.terms

    def coeff(self, *exps) -> Fv:
        return self.terms.get(tuple(exps), self.field.zero())

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def deg_in(self, var: str) -> int:
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def rename(self, *names: str) -> "Poly":
        """The same polynomial with its variables renamed."""
        assert len(names) == len(self.vars)
        return Poly(self.field, tuple(names), dict(self.terms))

    def degree(self) -> int:
        """Degree of a univariate polynomial (-1 for zero)."""
        assert len(self.vars) == 1
        return max((e[0] for e in self.terms), default=-1)

    def lead(self) -> Fv:
        """Leading coefficient of a univariate polynomial."""
        assert len(self.vars) == 1
        if self.is_zero():
            return self.field.zero()
        return self.terms[(self.degree(),)]

    def coeffs_in(self, var: str) -> dict:
        """Split a bivariate polynomial as {exp of var: Poly in the other}."""
        i = self.vars.index(var)
        j = 1 - i
        other = (self.vars[j],)
        out: dict = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[(e[j],)] = c
        return {k: Poly(self.field, other, t) for k, t in sorted(out.items())}

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e)
            t[e] = c if s is None else s + c
        return Poly(self.field, self.vars, t)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly(self.field, self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Fv):
            return self.scale(other)
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                s = t.get(e)
                t[e] = prod if s is None else s + prod
        return Poly(self.field, self.vars, t)

    def scale(self, c: Fv):
        return Poly(self.field, self.vars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        r = Poly.const(self.field, self.vars, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.vars, frozenset(self.terms.items())))

    def shift_in(self, var: str, k: int) -> "Poly":
        i = self.vars.index(var)
        t = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[i] += k
            if e2[i] < 0:
                raise AtInftyError("negative exponent after shift")
            t[tuple(e2)] = c
        return Poly(self.field, self.vars, t)

    # -- univariate algorithms -----------------------------------------------

    def divmod(self, other: "Poly"):
        self._check(other)
        assert len(self.vars) == 1
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q = Poly.zero(self.field, self.vars)
        r = self
        d = other.degree()
        inv_lead = other.lead().inv()
        while not r.is_zero() and r.degree() >= d:
            k = r.degree() - d
            c = r.lead() * inv_lead
            m = Poly.monomial(self.field, self.vars, (k,), c)
            q = q + m
            r = r - m * other
        return q, r

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd of univariate polynomials."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.scale(a.lead().inv())

    def derivative(self, var: Optional[str] = None) -> "Poly":
        i = 0 if var is None else self.vars.index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            n = e2[i]
            e2[i] -= 1
            cc = c * self.field(n)
            key = tuple(e2)
            s = t.get(key)
            t[key] = cc if s is None else s + cc
        return Poly(self.field, self.vars, t)

    def eval(self, values: dict):
        """Evaluate at field values (Horner per variable)."""
        acc = self.field.zero()
        for e, c in self.terms.items():
            term = c
            for name, exp in zip(self.vars, e):
                if exp:
                    term = term * values[name] ** exp
            acc = acc + term
        return acc

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.lead().inv())

    # -- printing ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{v}^{k}" if k != 1 else v
                for v, k in zip(self.vars, e)
                if k != 0
            )
            cs = str(c)
            wrap = "+" in cs or " " in cs or "-" in cs[1:]
            if mono:
                if c == self.field.one():
                    parts.append(mono)
                elif c == -self.field.one():
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"({cs})*{mono}" if wrap else f"{cs}*{mono}")
            else:
                parts.append(f"({cs})" if wrap else cs)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"Poly({self})"


# -- rational-root extraction over Q -----------------------------------------

def rational_roots(f: Poly):
    """All rational roots with multiplicity: list of (root, multiplicity),
    plus the non-split cofactor (constant if f splits into linear factors)."""
    assert f.field == QQ and len(f.vars) == 1
    if f.is_zero():
        raise DivisionByZero("zero polynomial has no root list")
    var = f.vars[0]
    # clear denominators and content
    den = 1
    for c in f.terms.values():
        den = den * c.payload.denominator // _gcd(den, c.payload.denominator)
    ints = {e[0]: int(c.payload * den) for e, c in f.terms.items()}
    roots = []
    # strip root 0
    v0 = min(ints)
    if v0 > 0:
        roots.append((QQ(0), v0))
        ints = {e - v0: c for e, c in ints.items()}
    deg = max(ints)
    lead, const = ints[deg], ints.get(0, 0)
    candidates = set()
    for p in _divisors(abs(const)):
        for q in _divisors(abs(lead)):
            candidates.add(Fraction(p, q))
            candidates.add(Fraction(-p, q))
    rem = f
    if v0 > 0:
        x = Poly.variable(QQ, (var,), var)
        for _ in range(v0):
            rem = rem // x
    for cand in sorted(candidates):
        r = QQ(cand)
        mult = 0
        lin = Poly(QQ, (var,), {(1,): QQ(1), (0,): -r})
        while not rem.is_zero() and rem.eval({var: r}).is_zero():
            rem = rem // lin
            mult += 1
        if mult:
            roots.append((r, mult))
    return roots, rem


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


# -- factorization over finite fields -----------------------------------------

def _field_order(F: Field) -> int:
    if isinstance(F, PrimeField):
        return F.p
    if isinstance(F, ExtensionField):
        return F.q
    raise AtInftyError("finite-field factorization needs a finite field")


def squarefree_decomposition(f: Poly):
    """Yield (g, multiplicity) with g squarefree, product g^mult = f/lead."""
    F = f.field
    f = f.monic()
    out = []
    p = F.char

    def rec(h: Poly, mult: int):
        if h.degree() < 1:
            return
        hp = h.derivative()
        if hp.is_zero():
            # h = g(x^p); take p-th roots of coefficients
            q = _field_order(F)
            root = {}
            for e, c in h.terms.items():
                assert e[0] % p == 0
                root[(e[0] // p,)] = c ** (q // p)
            rec(Poly(F, h.vars, root), mult * p)
            return
        g = h.gcd(hp)
        w = h // g
        m = mult
        while w.degree() >= 1:
            y = w.gcd(g)
            z = w // y
            if z.degree() >= 1:
                out.append((z, m))
            w, g = y, g // y
            m += mult
        if g.degree() >= 1:
            rec(g, mult * p)

    rec(f, 1)
    return out


def distinct_degree(f: Poly):
    """For squarefree monic f: list of (product of irreducibles of degree d, d)."""
    F = f.field
    q = _field_order(F)
    out = []
    x = Poly.variable(F, f.vars, f.vars[0])
    h = x
    rest = f
    d = 0
    while rest.degree() >= 1:
        d += 1
        if 2 * d > rest.degree():
            out.append((rest, rest.degree()))
            break
        h = _powmod(h, q, rest)
        g = rest.gcd(h - x)
        if g.degree() >= 1:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    return out


def _powmod(a: Poly, e: int, m: Poly) -> Poly:
    r = Poly.const(a.field, a.vars, 1)
    a = a % m
    while e:
        if e & 1:
            r = (r * a) % m
        a = (a * a) % m
        e >>= 1
    return r


def _random_poly(F, var, deg, rng):
    if isinstance(F, ExtensionField):
        coeffs = [[rng.randrange(F.p) for _ in range(F.degree)] for _ in range(deg + 1)]
    else:
        coeffs = [rng.randrange(F.p) for _ in range(deg + 1)]
    return Poly.from_coeffs(F, var, coeffs)


def equal_degree_split(f: Poly, d: int):
    """Cantor-Zassenhaus: factor monic squarefree f, all of whose irreducible
    factors have degree d.  Deterministically seeded from f."""
    F = f.field
    q = _field_order(F)
    canon = f"{sorted((e[0], str(c)) for e, c in f.terms.items())}|{d}|{q}"
    seed = int.from_bytes(hashlib.sha256(canon.encode()).digest()[:4], "big")
    rng = random.Random(seed)
    out = []

    def split(h: Poly):
        if h.degree() == d:
            out.append(h)
            return
        while True:
            r = _random_poly(F, h.vars[0], h.degree() - 1, rng)
            if r.degree() < 1:
                continue
            g = h.gcd(r)
            if 1 <= g.degree() < h.degree():
                break
            if q % 2 == 1:
                t = _powmod(r, (q**d - 1) // 2, h) - Poly.const(F, h.vars, 1)
            else:
                # char 2: trace map r + r^2 + r^4 + ... over F_{2^(d*k)}
                t = Poly.zero(F, h.vars)
                rr = r % h
                bits = d * _ext_deg(F)
                for _ in range(bits):
                    t = (t + rr) % h
                    rr = (rr * rr) % h
            g = h.gcd(t)
            if 1 <= g.degree() < h.degree():
                break
        split(g)
        split(h // g)

    split(f.monic())
    return sorted(out, key=_poly_sort_key)


def _ext_deg(F):
    return F.degree if isinstance(F, ExtensionField) else 1


def _poly_sort_key(f: Poly):
    return (f.degree(), tuple((e[0], str(c)) for e, c in sorted(f.terms.items())))


def factor(f: Poly):
    """Full factorization over a finite field: list of (monic irreducible,
    multiplicity), sorted deterministically, plus the leading coefficient."""
    lead = f.lead()
    pieces = []
    for g, mult in squarefree_decomposition(f):
        for h, d in distinct_degree(g):
            for irr in equal_degree_split(h, d):
                pieces.append((irr, mult))
    pieces.sort(key=lambda t: _poly_sort_key(t[0]))
    return pieces, lead


def roots_in_field(f: Poly):
    """Roots of f in its (finite or rational) coefficient field, with
    multiplicity, plus the degree of the non-split remainder."""
    if f.field == QQ:
        roots, rem = rational_roots(f)
        return roots, max(rem.degree(), 0)
    out = []
    nonsplit = 0
    for g, mult in factor(f)[0]:
        if g.degree() == 1:
            out.append((-g.coeff(0), mult))
        else:
            nonsplit += g.degree() * mult
    return out, nonsplit


def is_irreducible(f: Poly) -> bool:
    """Irreducibility over a finite field via distinct-degree structure."""
    f = f.monic()
    if f.degree() < 1:
        return False
    sq = squarefree_decomposition(f)
    if len(sq) != 1 or sq[0][1] != 1:
        return False
    dd = distinct_degree(sq[0][0])
    return len(dd) == 1 and dd[0][1] == f.degree()
