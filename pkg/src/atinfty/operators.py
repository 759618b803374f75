"""Column-finite operators certified on degree windows, with exact rank
certificates for images of commutators and differences.

An operator carries the basis scheme it acts on, a window bound W (its rule
is certified for indices of degree <= W), and a degree growth bound delta
(the image of a degree-d basis vector is supported in degrees <= d + delta).
Compositions and sums propagate windows; applying an operator outside its
window raises WindowExceeded rather than guessing.

Rank certificates record the exact rank of the image of the window rows,
the ranks at the three previous windows (the stability flag), and, when the
operator was built with a structural image bound (an explicitly known
finite-dimensional subspace containing the image of the full operator), a
"proved" flag meaning the bound was verified on every window row, so the
rank bound holds at every window, not just the inspected one.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import VariableMismatch, WindowExceeded
from .fields import Field, Fv
from .linalg import exact_rank, rank_by_minors, row_basis_indices
from .polys import Poly

Index = object  # int for 1-d schemes, (int, int) for 2-d schemes
Combo = Dict[Index, Fv]


@dataclass(frozen=True)
class BasisScheme:
    """A countable basis with a degree function with finite fibers.

    kinds: "mono1d" (t^m, deg m), "mono2d" (x^i y^j, deg i+j),
    "seq" (e_i, deg i), "grid" (e_ij, deg i+j),
    "quot" (pi^-k for k >= 1, deg k).
    """

    kind: str
    label: str = ""

    def degree(self, idx) -> int:
        if self.kind in ("mono1d", "seq"):
            return idx
        if self.kind == "quot":
            return idx  # index k >= 1 stands for pi^-k
        return idx[0] + idx[1]

    def indices_of_degree(self, d: int) -> List:
        if self.kind in ("mono1d", "seq"):
            return [d] if d >= 0 else []
        if self.kind == "quot":
            return [d] if d >= 1 else []
        return [(i, d - i) for i in range(d + 1)] if d >= 0 else []

    def indices_upto(self, window: int) -> List:
        out = []
        for d in range(window + 1):
            out.extend(self.indices_of_degree(d))
        return out

    def index_str(self, idx) -> str:
        if self.kind == "mono1d":
            return f"t^{idx}" if self.label == "" else f"{self.label}^{idx}"
        if self.kind == "seq":
            return f"e_{idx}"
        if self.kind == "quot":
            return f"pi^-{idx}"
        if self.kind == "grid":
            return f"e_{idx[0]}{idx[1]}" if max(idx) < 10 else f"e_({idx[0]},{idx[1]})"
        i, j = idx
        return f"x^{i}*y^{j}"


def combo_str(scheme: BasisScheme, combo: Combo) -> str:
    if not combo:
        return "0"
    parts = []
    for idx in sorted(combo):
        c = combo[idx]
        cs = str(c)
        wrap = "+" in cs or " " in cs or "-" in cs[1:]
        base = scheme.index_str(idx)
        if c == c.field.one():
            parts.append(base)
        elif c == -c.field.one():
            parts.append(f"-{base}")
        else:
            parts.append(f"({cs})*{base}" if wrap else f"{cs}*{base}")
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


class WindowedOperator:
    """A linear rule on a basis scheme, certified on a degree window."""

    def __init__(self, field: Field, source: BasisScheme, target: BasisScheme,
                 rule: Callable[[Index], Combo], window: int, delta: int,
                 label: str = "", image_bound: Optional[Tuple] = None):
        self.field = field
        self.source = source
        self.target = target
        self._rule = rule
        self.window = window
        self.delta = delta
        self.label = label or "operator"
        # indices spanning a subspace known to contain the image of the
        # *full* operator (not just the window rows); None if no such bound
        self.image_bound = tuple(image_bound) if image_bound is not None else None
        self._cache: Dict[Index, Combo] = {}

    def apply_index(self, idx) -> Combo:
        if self.source.degree(idx) > self.window:
            raise WindowExceeded(
                f"{self.label}: index {idx} of degree "
                f"{self.source.degree(idx)} exceeds window {self.window}"
            )
        got = self._cache.get(idx)
        if got is None:
            got = {k: v for k, v in self._rule(idx).items() if not v.is_zero()}
            self._cache[idx] = got
        return got

    def apply(self, combo: Combo) -> Combo:
        out: Combo = {}
        for idx, c in combo.items():
            for jdx, v in self.apply_index(idx).items():
                prod = c * v
                s = out.get(jdx)
                acc = prod if s is None else s + prod
                if acc.is_zero():
                    out.pop(jdx, None)
                else:
                    out[jdx] = acc
        return out

    # -- algebra ---------------------------------------------------------------

    def _check_add(self, other: "WindowedOperator"):
        if self.field != other.field:
            raise VariableMismatch("mixed coefficient fields")
        if self.source != other.source or self.target != other.target:
            raise VariableMismatch("operators act on different schemes")

    def __add__(self, other: "WindowedOperator") -> "WindowedOperator":
        self._check_add(other)
        window = min(self.window, other.window)
        bound = None
        if self.image_bound is not None and other.image_bound is not None:
            bound = tuple(sorted(set(self.image_bound) | set(other.image_bound)))

        def rule(idx, a=self, b=other):
            out = dict(a.apply_index(idx))
            for jdx, v in b.apply_index(idx).items():
                s = out.get(jdx)
                out[jdx] = v if s is None else s + v
            return out

        return WindowedOperator(self.field, self.source, self.target, rule,
                                window, max(self.delta, other.delta),
                                f"({self.label}+{other.label})", bound)

    def __neg__(self):
        def rule(idx, a=self):
            return {jdx: -v for jdx, v in a.apply_index(idx).items()}
        return WindowedOperator(self.field, self.source, self.target, rule,
                                self.window, self.delta, f"-{self.label}",
                                self.image_bound)

    def __sub__(self, other):
        return self + (-other)

    def compose(self, other: "WindowedOperator") -> "WindowedOperator":
        """Composition self after other (apply other first)."""
        if self.field != other.field:
            raise VariableMismatch("mixed coefficient fields")
        if other.target != self.source:
            raise VariableMismatch(
                f"cannot compose: {other.label} maps into {other.target.kind}, "
                f"{self.label} acts on {self.source.kind}"
            )
        window = min(other.window, self.window - other.delta)
        if window < 0:
            raise WindowExceeded(
                f"composition {self.label}.{other.label} has empty window"
            )

        def rule(idx, a=self, b=other):
            return a.apply(b.apply_index(idx))

        return WindowedOperator(self.field, other.source, self.target, rule,
                                window, self.delta + other.delta,
                                f"{self.label}.{other.label}",
                                self.image_bound)

    def with_bound(self, bound: Sequence, label: Optional[str] = None):
        return WindowedOperator(self.field, self.source, self.target,
                                self._rule, self.window, self.delta,
                                label or self.label, tuple(bound))

    def materialize(self, window: Optional[int] = None) -> List[Tuple[Index, Combo]]:
        w = self.window if window is None else window
        return [(idx, self.apply_index(idx)) for idx in self.source.indices_upto(w)]

    def __repr__(self):
        return (f"WindowedOperator({self.label}, window={self.window}, "
                f"delta={self.delta})")


def identity_operator(field, scheme, window, label="1"):
    return WindowedOperator(field, scheme, scheme,
                            lambda idx: {idx: field.one()},
                            window, 0, label)


def zero_operator(field, scheme, window, label="0"):
    return WindowedOperator(field, scheme, scheme, lambda idx: {},
                            window, 0, label, image_bound=())


def multiplication_operator(scheme: BasisScheme, poly: Poly, window: int,
                            label: Optional[str] = None) -> WindowedOperator:
    """Multiplication by a polynomial on a monomial scheme (mono1d/mono2d)."""
    field = poly.field
    if scheme.kind == "mono1d":
        assert len(poly.vars) == 1

        def rule(m):
            return {m + e[0]: c for e, c in poly.terms.items()}

        delta = max((e[0] for e in poly.terms), default=0)
    elif scheme.kind == "mono2d":
        assert len(poly.vars) == 2

        def rule(idx):
            i, j = idx
            return {(i + e[0], j + e[1]): c for e, c in poly.terms.items()}

        delta = poly.total_degree() if not poly.is_zero() else 0
    else:
        raise VariableMismatch(f"no multiplication action on {scheme.kind}")
    return WindowedOperator(field, scheme, scheme, rule, window, max(delta, 0),
                            label or f"R[{poly}]")


def commutator(a: WindowedOperator, b: WindowedOperator,
               bound: Optional[Sequence] = None) -> WindowedOperator:
    c = a.compose(b) - b.compose(a)
    c.label = f"[{a.label},{b.label}]"
    if bound is not None:
        return c.with_bound(bound, c.label)
    return c


# -- rank certificates ---------------------------------------------------------

STABILITY_SPAN = 3


@dataclass
class RankCertificate:
    """Exact rank of an operator's image on a window, with stability data."""

    operator: str
    window: int
    rank: int
    ranks_at: Dict[int, int]
    stable: bool
    proved: bool
    image_basis: List[Tuple[Index, Combo]]
    bound_dim: Optional[int] = None
    scheme_kind: str = ""

    def ok(self) -> bool:
        return self.stable or self.proved


def rank_on_window(op: WindowedOperator, window: int) -> RankCertificate:
    """Exact rank of {op(b) : deg b <= window}, plus ranks at the three
    previous windows and structural-bound verification."""
    if window > op.window:
        raise WindowExceeded(
            f"{op.label}: window {window} exceeds certified window {op.window}"
        )
    rows_by_idx: List[Tuple[Index, Combo]] = []
    for idx in op.source.indices_upto(window):
        img = op.apply_index(idx)
        if img:
            rows_by_idx.append((idx, img))

    # structural bound verification: every row supported inside the bound
    proved = False
    bound_dim = None
    if op.image_bound is not None:
        bset = set(op.image_bound)
        proved = all(set(img) <= bset for _, img in rows_by_idx)
        bound_dim = len(op.image_bound)

    cols = sorted({j for _, img in rows_by_idx for j in img})
    colpos = {j: p for p, j in enumerate(cols)}
    zero = op.field.zero()

    ranks_at: Dict[int, int] = {}
    lo = max(0, window - STABILITY_SPAN)
    for w in range(lo, window + 1):
        rows = [
            [img.get(j, zero) for j in cols]
            for idx, img in rows_by_idx
            if op.source.degree(idx) <= w
        ]
        ranks_at[w] = exact_rank(rows, op.field)
    rank = ranks_at[window]
    stable = (
        window - lo == STABILITY_SPAN
        and len({ranks_at[w] for w in range(lo, window + 1)}) == 1
    )

    dense = [[img.get(j, zero) for j in cols] for _, img in rows_by_idx]
    picked = row_basis_indices(dense, op.field)
    image_basis = [rows_by_idx[i] for i in picked]

    return RankCertificate(
        operator=op.label,
        window=window,
        rank=rank,
        ranks_at=ranks_at,
        stable=stable,
        proved=proved and (bound_dim is not None),
        image_basis=image_basis,
        bound_dim=bound_dim,
        scheme_kind=op.target.kind,
    )


def certificate_matrix(cert: RankCertificate, field: Field) -> List[List[Fv]]:
    """Dense matrix of the certificate's spanning image vectors."""
    cols = sorted({j for _, img in cert.image_basis for j in img})
    zero = field.zero()
    return [[img.get(j, zero) for j in cols] for _, img in cert.image_basis]


def recheck_rank_by_minors(cert: RankCertificate, field: Field) -> bool:
    """Cross-check the certificate's rank with the minor-expansion oracle
    (only meaningful when the spanning matrix is at most 8 x 8)."""
    m = certificate_matrix(cert, field)
    if not m:
        return cert.rank == 0
    if len(m) > 8 or len(m[0]) > 8:
        raise WindowExceeded("minor oracle limited to matrices of size <= 8")
    return rank_by_minors(m, field) == cert.rank


# -- equality in the quotient by finite rank -----------------------------------

EQUIVALENT = "EquivalentWithRank"
INCONCLUSIVE = "Inconclusive"
DISTINCT = "DistinctOnWindow"  # part of the vocabulary; never produced


@dataclass
class CalkinVerdict:
    status: str
    rank: Optional[int]
    certificate: RankCertificate

    def __str__(self):
        if self.status == EQUIVALENT:
            return f"{EQUIVALENT}({self.rank})"
        return self.status


def calkin_equal(a: WindowedOperator, b: WindowedOperator,
                 window: int) -> CalkinVerdict:
    """Decide equality modulo finite rank on a window.

    Returns EquivalentWithRank(r) when the rank of a - b is stable over the
    last three window increments (or structurally proved); Inconclusive when
    the rank is still growing at the window edge.  Operators genuinely
    distinct in the quotient never stabilize, so no DistinctOnWindow verdict
    is ever produced; a larger window keeps returning Inconclusive.
    """
    diff = a - b
    cert = rank_on_window(diff, min(window, diff.window))
    if cert.ok():
        return CalkinVerdict(EQUIVALENT, cert.rank, cert)
    return CalkinVerdict(INCONCLUSIVE, None, cert)


@dataclass
class MembershipReport:
    """Per-generator finite-rank certificates for commutators with right
    multiplications; the membership verdict is the conjunction."""

    generator_certs: List[Tuple[str, RankCertificate]]
    window: int

    def verdict(self) -> bool:
        return all(c.ok() for _, c in self.generator_certs)


def h0_membership(phi: WindowedOperator, generators: Sequence[Poly],
                  window: int,
                  bounds: Optional[Dict[str, Sequence]] = None) -> MembershipReport:
    """Certified finite-rank check of [phi, R_s] for each generator s.

    A per-generator certificate bounds commutators with the generators only;
    by the Leibniz rule [phi, R_ab] = [phi, R_b] R_a + R_b [phi, R_a] this
    controls every product of generators, but no uniform rank bound for the
    whole ring is claimed or reported.
    """
    certs = []
    for gen in generators:
        key = str(gen)
        r = multiplication_operator(phi.source, gen, window + phi.delta + 4)
        com = commutator(phi, r, (bounds or {}).get(key))
        w = min(window, com.window)
        certs.append((key, rank_on_window(com, w)))
    return MembershipReport(certs, window)
