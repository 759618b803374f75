"""Exact coefficient fields: the rationals, prime fields, and their finite
extensions by an explicit irreducible modulus.

A field is described by a FieldDescriptor-like object (RationalField,
PrimeField, ExtensionField); values are FieldValue wrappers that carry their
descriptor and refuse mixed arithmetic.  All arithmetic is exact.

Payload conventions:
  rationals -> fractions.Fraction
  prime field F_p -> int in [0, p)
  extension F_p[z]/(m) -> tuple of ints of length deg(m), low degree first
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import (
    DescriptorMismatch,
    DivisionByZero,
    NotAnExtensionField,
    ParseError,
)

MAX_PRIME = 2**31
MAX_EXT_DEGREE = 8


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3_215_031_751 > 2**31."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# -- dense polynomial helpers over Z/p, used only for field construction ----
# (the general Poly type lives in polys.py and depends on this module)

def _pstrip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pstrip(out)


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        a = _pstrip(a)
        if len(a) - 1 < dm:
            break
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _pstrip(a)
    return a


def _ppowmod(a, e, m, p):
    r = [1]
    a = _pmod(a, m, p)
    while e:
        if e & 1:
            r = _pmod(_pmul(r, a, p), m, p)
        a = _pmod(_pmul(a, a, p), m, p)
        e >>= 1
    return r


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _psub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c % p
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _pstrip(out)


def _irreducible_mod_p(m, p) -> bool:
    """Rabin irreducibility test for a monic m over F_p."""
    d = len(m) - 1
    if d < 1:
        return False
    x = [0, 1]
    # x^(p^d) == x mod m
    t = x
    for _ in range(d):
        t = _ppowmod(t, p, m, p)
    if _psub(t, x, p):
        return False
    # gcd(x^(p^(d/l)) - x, m) == 1 for every prime l | d
    primes = set()
    dd, q = d, 2
    while q * q <= dd:
        while dd % q == 0:
            primes.add(q)
            dd //= q
        q += 1
    if dd > 1:
        primes.add(dd)
    for l in primes:
        t = x
        for _ in range(d // l):
            t = _ppowmod(t, p, m, p)
        g = _pgcd(_psub(t, x, p), m, p)
        if len(g) - 1 >= 1:
            return False
    return True


# -- field descriptors -------------------------------------------------------

class Field:
    """Common interface for the three descriptor kinds."""

    kind = "?"

    def __call__(self, raw) -> "Fv":
        return Fv(self, self.coerce(raw))

    def zero(self) -> "Fv":
        return self(0)

    def one(self) -> "Fv":
        return self(1)

    # subclasses provide: char, coerce, _add, _neg, _mul, _inv,
    # _is_zero, _to_str, from_str, descriptor_json, __eq__/__hash__/__repr__


class RationalField(Field):
    kind = "rational"
    char = 0

    def coerce(self, raw):
        if isinstance(raw, Fv):
            if raw.field != self:
                raise DescriptorMismatch("expected a rational value")
            return raw.payload
        return Fraction(raw)

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        if a == 0:
            raise DivisionByZero("1/0 in Q")
        return 1 / a

    def _is_zero(self, a):
        return a == 0

    def _to_str(self, a):
        return str(a)

    def from_str(self, s: str) -> "Fv":
        try:
            return self(Fraction(s.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {s!r}: {exc}", 0)

    def descriptor_json(self):
        return {"kind": "rational"}

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "Q"


class PrimeField(Field):
    kind = "prime"

    def __init__(self, p: int):
        if not (2 <= p < MAX_PRIME) or not _is_prime(p):
            raise NotAnExtensionField(f"{p} is not a prime below 2^31")
        self.p = p
        self.char = p

    def coerce(self, raw):
        if isinstance(raw, Fv):
            if raw.field != self:
                raise DescriptorMismatch("expected an F_p value")
            return raw.payload
        return int(raw) % self.p

    def _add(self, a, b):
        return (a + b) % self.p

    def _neg(self, a):
        return -a % self.p

    def _mul(self, a, b):
        return a * b % self.p

    def _inv(self, a):
        if a == 0:
            raise DivisionByZero(f"1/0 in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def _is_zero(self, a):
        return a == 0

    def _to_str(self, a):
        return f"{a} mod {self.p}"

    def from_str(self, s: str) -> "Fv":
        s = s.strip()
        if " mod " in s:
            a, pp = s.split(" mod ")
            if int(pp) != self.p:
                raise ParseError(f"value {s!r} is not mod {self.p}", 0)
            return self(int(a))
        return self(int(s))

    def descriptor_json(self):
        return {"kind": "prime", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class ExtensionField(Field):
    """F_p[z]/(m) for a monic irreducible m of degree 2..8."""

    kind = "extension"

    def __init__(self, p: int, modulus):
        self.base = PrimeField(p)
        self.p = p
        self.char = p
        m = [int(c) % p for c in modulus]
        while m and m[-1] == 0:
            m.pop()
        if len(m) - 1 < 2 or len(m) - 1 > MAX_EXT_DEGREE:
            raise NotAnExtensionField(
                f"modulus degree must be 2..{MAX_EXT_DEGREE}, got {len(m) - 1}"
            )
        if m[-1] != 1:
            raise NotAnExtensionField("modulus must be monic")
        if not _irreducible_mod_p(m, p):
            raise NotAnExtensionField(
                f"modulus {m} is reducible over F_{p}"
            )
        self.modulus = tuple(m)
        self.degree = len(m) - 1
        self.q = p ** self.degree

    def coerce(self, raw):
        if isinstance(raw, Fv):
            if raw.field == self:
                return raw.payload
            if raw.field == self.base:
                return self._from_list([raw.payload])
            raise DescriptorMismatch("expected an extension-field value")
        if isinstance(raw, int):
            return self._from_list([raw % self.p])
        return self._from_list(list(raw))

    def _from_list(self, coeffs):
        c = [int(v) % self.p for v in coeffs]
        c = _pmod(c, list(self.modulus), self.p)
        c += [0] * (self.degree - len(c))
        return tuple(c[: self.degree])

    def gen(self) -> "Fv":
        """The class of z."""
        return self([0, 1])

    def _add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def _neg(self, a):
        return tuple(-x % self.p for x in a)

    def _mul(self, a, b):
        prod = _pmul(_pstrip(list(a)), _pstrip(list(b)), self.p)
        return self._from_list(prod)

    def _inv(self, a):
        if self._is_zero(a):
            raise DivisionByZero(f"1/0 in F_{self.q}")
        # extended Euclid in F_p[z]
        r0, r1 = list(self.modulus), _pstrip(list(a))
        s0, s1 = [], [1]
        while r1:
            # r0 = q*r1 + r2
            q = []
            r2 = list(r0)
            dm = len(r1) - 1
            inv_lead = pow(r1[-1], self.p - 2, self.p)
            while _pstrip(r2) and len(_pstrip(r2)) - 1 >= dm:
                r2 = _pstrip(r2)
                c = r2[-1] * inv_lead % self.p
                shift = len(r2) - 1 - dm
                q += [0] * max(0, shift + 1 - len(q))
                q[shift] = c
                for i, mi in enumerate(r1):
                    r2[shift + i] = (r2[shift + i] - c * mi) % self.p
            r2 = _pstrip(r2)
            s2 = _psub(s0, _pmul(q, s1, self.p), self.p)
            r0, r1, s0, s1 = r1, r2, s1, s2
        # r0 = gcd (a constant, since modulus is irreducible)
        inv_g = pow(r0[0], self.p - 2, self.p)
        return self._from_list([c * inv_g % self.p for c in s0])

    def _is_zero(self, a):
        return all(x == 0 for x in a)

    def _to_str(self, a):
        parts = []
        for e in range(self.degree - 1, -1, -1):
            c = a[e]
            if c == 0:
                continue
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append("z" if c == 1 else f"{c}*z")
            else:
                parts.append(f"z^{e}" if c == 1 else f"{c}*z^{e}")
        return "+".join(parts) if parts else "0"

    def from_str(self, s: str) -> "Fv":
        coeffs = [0] * self.degree
        s2 = s.replace(" ", "").replace("-", "+-")
        for chunk in s2.split("+"):
            if not chunk:
                continue
            sign = 1
            if chunk.startswith("-"):
                sign, chunk = -1, chunk[1:]
            if "z" not in chunk:
                try:
                    coeffs[0] = (coeffs[0] + sign * int(chunk)) % self.p
                except ValueError:
                    raise ParseError(f"bad extension literal {s!r}", 0)
                continue
            c_part, _, e_part = chunk.partition("z")
            c = int(c_part.rstrip("*")) if c_part.rstrip("*") else 1
            e = int(e_part.lstrip("^")) if e_part.lstrip("^") else 1
            if e >= self.degree:
                raise ParseError(f"exponent {e} out of range in {s!r}", 0)
            coeffs[e] = (coeffs[e] + sign * c) % self.p
        return self(coeffs)

    def descriptor_json(self):
        return {"kind": "extension", "p": self.p, "modulus": list(self.modulus)}

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.p == self.p
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("extension", self.p, self.modulus))

    def __repr__(self):
        return f"F_{self.q}"


QQ = RationalField()


def field_from_json(obj) -> Field:
    kind = obj.get("kind")
    if kind == "rational":
        return QQ
    if kind == "prime":
        return PrimeField(obj["p"])
    if kind == "extension":
        return ExtensionField(obj["p"], obj["modulus"])
    raise NotAnExtensionField(f"unknown field descriptor {obj!r}")


def field_from_spec(spec: str) -> Field:
    """CLI encoding: 'q', 'fp:<p>' or 'fq:<p>:<modulus in z>'."""
    spec = spec.strip()
    if spec == "q":
        return QQ
    if spec.startswith("fp:"):
        return PrimeField(int(spec[3:]))
    if spec.startswith("fq:"):
        _, p, m = spec.split(":", 2)
        p = int(p)
        if m.isdigit():
            return ExtensionField(p, _first_irreducible(p, int(m)))
        coeffs = _parse_z_poly(m, p)
        return ExtensionField(p, coeffs)
    raise ParseError(f"unknown field spec {spec!r}", 0)


def _first_irreducible(p: int, d: int):
    """The lexicographically smallest monic irreducible of degree d over
    F_p (constant coefficient varying fastest), so that `fq:p:d` names one
    field deterministically."""
    if d < 1:
        raise ParseError(f"extension degree must be positive, got {d}", 0)
    if d == 1:
        return [0, 1]
    for n in range(p ** d):
        lower = []
        k = n
        for _ in range(d):
            lower.append(k % p)
            k //= p
        m = lower + [1]
        if _irreducible_mod_p(m, p):
            return m
    raise NotAnExtensionField(f"no irreducible of degree {d} over F_{p}")


def _parse_z_poly(s: str, p: int):
    """Parse 'z^2+z+1' into a dense coefficient list over F_p."""
    s2 = s.replace(" ", "").replace("-", "+-")
    terms = {}
    for chunk in s2.split("+"):
        if not chunk:
            continue
        sign = 1
        if chunk.startswith("-"):
            sign, chunk = -1, chunk[1:]
        if "z" not in chunk:
            terms[0] = terms.get(0, 0) + sign * int(chunk)
            continue
        c_part, _, e_part = chunk.partition("z")
        c = int(c_part.rstrip("*")) if c_part.rstrip("*") else 1
        e = int(e_part.lstrip("^")) if e_part.lstrip("^") else 1
        terms[e] = terms.get(e, 0) + sign * c
    deg = max(terms)
    return [terms.get(i, 0) % p for i in range(deg + 1)]


# -- values ------------------------------------------------------------------

class Fv:
    """A field value: descriptor plus payload, with exact arithmetic."""

    __slots__ = ("field", "payload")

    def __init__(self, field: Field, payload):
        self.field = field
        self.payload = payload

    def _check(self, other: "Fv"):
        if not isinstance(other, Fv):
            raise DescriptorMismatch(f"cannot combine Fv with {type(other).__name__}")
        if other.field != self.field:
            raise DescriptorMismatch(
                f"mixed fields {self.field!r} and {other.field!r}"
            )

    def __add__(self, other):
        self._check(other)
        return Fv(self.field, self.field._add(self.payload, other.payload))

    def __sub__(self, other):
        self._check(other)
        return Fv(
            self.field,
            self.field._add(self.payload, self.field._neg(other.payload)),
        )

    def __neg__(self):
        return Fv(self.field, self.field._neg(self.payload))

    def __mul__(self, other):
        self._check(other)
        return Fv(self.field, self.field._mul(self.payload, other.payload))

    def __truediv__(self, other):
        self._check(other)
        return Fv(
            self.field,
            self.field._mul(self.payload, self.field._inv(other.payload)),
        )

    def inv(self) -> "Fv":
        return Fv(self.field, self.field._inv(self.payload))

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        r = self.field.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def is_zero(self) -> bool:
        return self.field._is_zero(self.payload)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, Fv):
            return NotImplemented
        return self.field == other.field and self.payload == other.payload

    def __hash__(self):
        return hash((self.field, self.payload))

    def __str__(self):
        return self.field._to_str(self.payload)

    def __repr__(self):
        return f"Fv({self})"


Scalar = Union[Fv, int, Fraction]


def norm_to_base(a: Fv) -> Fv:
    """Determinant of multiplication by a on the F_p-basis 1, z, .., z^(d-1)."""
    F = a.field
    if not isinstance(F, ExtensionField):
        raise NotAnExtensionField("norm_to_base needs an extension-field value")
    cols = _mult_matrix(a)
    p, d = F.p, F.degree
    # Gaussian elimination over F_p for the determinant
    m = [list(row) for row in cols]
    det = 1
    for c in range(d):
        piv = next((r for r in range(c, d) if m[r][c] % p), None)
        if piv is None:
            return F.base(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], p - 2, p)
        for r in range(c + 1, d):
            f = m[r][c] * inv % p
            if f:
                for k in range(c, d):
                    m[r][k] = (m[r][k] - f * m[c][k]) % p
    return F.base(det)


def trace_to_base(a: Fv) -> Fv:
    """Trace of multiplication by a, as an element of F_p."""
    F = a.field
    if not isinstance(F, ExtensionField):
        raise NotAnExtensionField("trace_to_base needs an extension-field value")
    m = _mult_matrix(a)
    return F.base(sum(m[i][i] for i in range(F.degree)))


def _mult_matrix(a: Fv):
    """Rows = coordinates of a*z^j; entry [j][i] = coefficient of z^i."""
    F = a.field
    rows = []
    zj = F.one()
    for _ in range(F.degree):
        rows.append(list((a * zj).payload))
        zj = zj * F.gen()
    # transpose so that columns index z^j (matrix of the multiplication map)
    return [[rows[j][i] for j in range(F.degree)] for i in range(F.degree)]


def frobenius(a: Fv) -> Fv:
    """x -> x^p on an extension field (identity on F_p)."""
    F = a.field
    p = getattr(F, "char", 0)
    if p == 0:
        raise NotAnExtensionField("frobenius needs positive characteristic")
    return a**p
