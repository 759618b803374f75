"""JSON encodings for fields, values, series, polynomials, operators and
certificates.

Every encoder has a decoder such that ``decode(encode(x)) == x``; the CLI
composes these primitives into its top-level report objects.  Output is
canonical: ``dumps`` sorts keys and fixes separators, so identical inputs
produce byte-identical documents.
"""

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import DescriptorMismatch
from .fields import QQ, ExtensionField, Field, Fv, PrimeField
from .operators import BasisScheme, RankCertificate, WindowedOperator
from .parsing import parse_field_value
from .polys import Poly
from .series import BiSeries, ChartUnit, TruncatedSeries


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- fields -------------------------------------------------------------------------


def encode_field(field: Field) -> dict:
    if field == QQ:
        return {"kind": "q"}
    if isinstance(field, ExtensionField):
        return {"kind": "fq", "p": field.p, "modulus": list(field.modulus)}
    if isinstance(field, PrimeField):
        return {"kind": "fp", "p": field.p}
    raise DescriptorMismatch(f"cannot encode field {field}")


def decode_field(obj: dict) -> Field:
    kind = obj["kind"]
    if kind == "q":
        return QQ
    if kind == "fp":
        return PrimeField(obj["p"])
    if kind == "fq":
        return ExtensionField(obj["p"], obj["modulus"])
    raise DescriptorMismatch(f"unknown field kind {kind!r}")


def encode_value(v: Fv) -> str:
    return str(v)


def decode_value(field: Field, text: str) -> Fv:
    return parse_field_value(text, field)


# -- series -------------------------------------------------------------------------


def encode_series(s: TruncatedSeries) -> dict:
    terms = sorted(((-e if s.inverted else e), c) for e, c in s.terms.items())
    return {
        "kind": "series",
        "var": s.var,
        "inverted": s.inverted,
        "prec": s.prec,
        "terms": [[n, encode_value(c)] for n, c in reversed(terms)],
    }


def decode_series(field: Field, obj: dict) -> TruncatedSeries:
    tdict = {n: decode_value(field, c) for n, c in obj["terms"]}
    return TruncatedSeries.from_tdict(field, obj["var"], tdict, obj["prec"],
                                      obj["inverted"])


def encode_biseries(b: BiSeries) -> dict:
    """Terms are [i, j, c] with (i, j) the exponents of the two inverse
    variables, sorted by total degree."""
    items = sorted(b.terms.items(), key=lambda t: (t[0][0] + t[0][1], t[0]))
    return {
        "kind": "biseries",
        "vars": list(b.vars),
        "prec": b.prec,
        "terms": [[i, j, encode_value(c)] for (i, j), c in items],
    }


def decode_biseries(field: Field, obj: dict) -> BiSeries:
    terms = {(i, j): decode_value(field, c) for i, j, c in obj["terms"]}
    return BiSeries(field, tuple(obj["vars"]), terms, obj["prec"])


def encode_chart_unit(u: ChartUnit) -> dict:
    items = sorted(u.tail.items(), key=lambda t: (-(t[0][0] + t[0][1]), t[0]))
    return {
        "kind": "chartunit",
        "chart": u.chart,
        "scalar": encode_value(u.scalar),
        "mono": u.mono,
        "order": u.order,
        "tail": [[a, b, encode_value(c)] for (a, b), c in items],
    }


def decode_chart_unit(field: Field, obj: dict) -> ChartUnit:
    tail = {(a, b): decode_value(field, c) for a, b, c in obj["tail"]}
    return ChartUnit(field, obj["chart"], decode_value(field, obj["scalar"]),
                     obj["mono"], tail, obj["order"])


# -- polynomials ----------------------------------------------------------------------


def encode_poly(p: Poly) -> dict:
    items = sorted(p.terms.items(), reverse=True)
    return {
        "kind": "poly",
        "vars": list(p.vars),
        "terms": [[list(e), encode_value(c)] for e, c in items],
    }


def decode_poly(field: Field, obj: dict) -> Poly:
    terms = {tuple(e): decode_value(field, c) for e, c in obj["terms"]}
    return Poly(field, tuple(obj["vars"]), terms)


def encode_ratfun(f) -> dict:
    return {"kind": "ratfun", "num": encode_poly(f.num),
            "den": encode_poly(f.den)}


def decode_ratfun(field: Field, obj: dict):
    from .adeles import RationalFunction

    return RationalFunction(decode_poly(field, obj["num"]),
                            decode_poly(field, obj["den"]))


# -- operators and certificates --------------------------------------------------------


def _encode_index(idx) -> object:
    return list(idx) if isinstance(idx, tuple) else idx


def _decode_index(obj) -> object:
    return tuple(obj) if isinstance(obj, list) else obj


def _combo_items(combo: dict) -> list:
    return sorted(combo.items(), key=lambda t: (str(type(t[0])), t[0]))


def encode_combo(combo: dict) -> list:
    return [[_encode_index(j), encode_value(c)] for j, c in
            _combo_items(combo)]


def decode_combo(field: Field, obj: list) -> dict:
    return {_decode_index(j): decode_value(field, c) for j, c in obj}


def encode_operator(op: WindowedOperator, window: Optional[int] = None) -> dict:
    """Materialized table of the operator on a window, with scheme data."""
    w = op.window if window is None else min(window, op.window)
    rows = [[_encode_index(idx), encode_combo(img)]
            for idx, img in op.materialize(w)]
    out = {
        "kind": "operator",
        "label": op.label,
        "source": {"kind": op.source.kind, "label": op.source.label},
        "target": {"kind": op.target.kind, "label": op.target.label},
        "window": w,
        "delta": op.delta,
        "rows": rows,
    }
    if op.image_bound is not None:
        out["image_bound"] = [_encode_index(i) for i in op.image_bound]
    return out


def decode_operator(field: Field, obj: dict) -> WindowedOperator:
    source = BasisScheme(obj["source"]["kind"], obj["source"]["label"])
    target = BasisScheme(obj["target"]["kind"], obj["target"]["label"])
    table = {_decode_index(idx): decode_combo(field, img)
             for idx, img in obj["rows"]}

    def rule(idx):
        return dict(table.get(idx, {}))

    bound = obj.get("image_bound")
    if bound is not None:
        bound = tuple(_decode_index(i) for i in bound)
    return WindowedOperator(field, source, target, rule, obj["window"],
                            obj["delta"], obj["label"], bound)


def operator_rows_equal(a: WindowedOperator, b: WindowedOperator,
                        window: int) -> bool:
    """Row-by-row equality of two operators on a window."""
    if a.source != b.source or a.target != b.target:
        return False
    return a.materialize(window) == b.materialize(window)


def encode_certificate(cert: RankCertificate) -> dict:
    return {
        "kind": "certificate",
        "operator": cert.operator,
        "window": cert.window,
        "rank": cert.rank,
        "ranks_at": {str(w): r for w, r in sorted(cert.ranks_at.items())},
        "stable": cert.stable,
        "proved": cert.proved,
        "bound_dim": cert.bound_dim,
        "scheme": cert.scheme_kind,
        "image_basis": [[_encode_index(idx), encode_combo(img)]
                        for idx, img in cert.image_basis],
    }


def decode_certificate(field: Field, obj: dict) -> RankCertificate:
    basis = [(_decode_index(idx), decode_combo(field, img))
             for idx, img in obj["image_basis"]]
    return RankCertificate(
        operator=obj["operator"],
        window=obj["window"],
        rank=obj["rank"],
        ranks_at={int(w): r for w, r in obj["ranks_at"].items()},
        stable=obj["stable"],
        proved=obj["proved"],
        image_basis=basis,
        bound_dim=obj["bound_dim"],
        scheme_kind=obj["scheme"],
    )
