"""Command-line front end.

One verb per library entry point, grouped by module:

    infinity  to-operator | from-operator | verify-hom | residue
    almost    build-mg | build-nh | verify-ses
    pic       factor
    hensel    roots | witness | th84-pipeline
    adele     residues | weil | prop71
    suite     calkin | almost | picard | hensel | adeles | all

All state is per-invocation.  Exit codes: 0 when the requested check
verifies, 1 when it runs but fails to verify (a reciprocity product that
is not 1, an operator that does not stabilize, an unresolved branch), and
2 on usage or parse errors.  With --json every verb prints a single
object carrying a "verdict" field; output is deterministic for a fixed
argv (keys sorted, no timestamps).  With --report-dir a verb additionally
writes a CSV table and a PNG figure summarizing the run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import hensel as hensel_mod
from . import jsonio
from .adeles import (
    point_key,
    prop71_check,
    residue_theorem_check,
    weil_reciprocity_check,
)
from .almost import build_M_g, build_N_h, verify_ses
from .errors import (
    AtInftyError,
    DescriptorMismatch,
    DivisionByZero,
    InseparableDifferential,
    MalformedCocycle,
    NotAnExtensionField,
    NotAUnit,
    NotInFiltrationLevel,
    NotInG,
    NotMonic,
    NotStabilized,
    ParseError,
    PrecisionExhausted,
    UnsplitFactor,
    VariableMismatch,
    WildBranch,
    WindowExceeded,
    ZeroFunction,
)
from .fields import field_from_spec
from .hensel import algebraicity_witness, laurent_roots, root_witness_pipeline
from .infinity import (
    calkin_class_from_operator,
    phi_of_series,
    residue_pairing_at_infinity,
    series_of_operator,
    verify_homomorphism,
)
from .parsing import (
    parse_chart_unit,
    parse_poly,
    parse_ratfun,
    parse_series,
)
from .picard import factor_cocycle
from .suites import DEFAULT_SEED, SUITE_NAMES, run_suite

# Errors that mean the input itself was unusable (exit 2), as opposed to a
# computation that ran and failed to verify (exit 1).
_USAGE_ERRORS = (
    ParseError,
    MalformedCocycle,
    NotInG,
    NotMonic,
    UnsplitFactor,
    NotAnExtensionField,
    DescriptorMismatch,
    VariableMismatch,
    PrecisionExhausted,
    ZeroFunction,
    DivisionByZero,
    WindowExceeded,
    NotAUnit,
    NotInFiltrationLevel,
    InseparableDifferential,
)
_FAILURE_ERRORS = (NotStabilized, WildBranch)


# -- plumbing ---------------------------------------------------------------------------


def _payload(text: str) -> str:
    """Resolve a positional payload: '-' reads stdin, an existing file
    path reads the file, anything else is taken literally."""
    if text == "-":
        return sys.stdin.read()
    if os.path.isfile(text):
        with open(text, "r", encoding="utf-8") as fh:
            return fh.read()
    return text


def _emit(args, obj: dict, lines: List[str]) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(jsonio.dumps(obj))
    else:
        for line in lines:
            print(line)


def _report(args, obj: dict, lines: List[str], stem: str,
            header: Sequence[str], rows: Sequence[Sequence],
            draw: Callable[[str], str]) -> None:
    """Write the delimited table and the figure for --report-dir runs."""
    rdir = getattr(args, "report_dir", None)
    if not rdir:
        return
    from . import report as report_mod

    os.makedirs(rdir, exist_ok=True)
    csv_path = os.path.join(rdir, stem + ".csv")
    png_path = os.path.join(rdir, stem + ".png")
    report_mod.write_csv(csv_path, header, rows)
    draw(png_path)
    obj["report"] = {"csv": csv_path, "png": png_path}
    lines.append(f"report: {csv_path} {png_path}")


def _field(args):
    return field_from_spec(getattr(args, "field", None) or "q")


def _plot_value(v) -> float:
    """Crude numeric image of a field element for bar charts only: the
    rational value over Q, the integer representative over F_p, and the
    coefficient sum of the representative over an extension field."""
    pay = getattr(v, "payload", 0)
    if isinstance(pay, (Fraction, int)):
        return float(pay)
    try:
        return float(sum(int(c) for c in pay))
    except TypeError:
        return 0.0


def _cert_lines(name: str, cert) -> str:
    grade = "proved" if cert.proved else ("stable" if cert.stable else
                                          "not stable")
    return f"{name}: rank {cert.rank} on window {cert.window} ({grade})"


# -- infinity ---------------------------------------------------------------------------


def _cmd_inf_to_operator(args) -> int:
    field = _field(args)
    f = parse_series(_payload(args.series), field, "t", args.prec)
    cls = phi_of_series(f, window=args.window)
    verdict = "member" if cls.member else "inconclusive"
    obj = {
        "verdict": verdict,
        "field": jsonio.encode_field(field),
        "series": jsonio.encode_series(f),
        "operator": jsonio.encode_operator(cls.op),
        "commutators": {name: jsonio.encode_certificate(cert)
                        for name, cert in cls.membership.generator_certs},
    }
    lines = [f"verdict: {verdict}", f"series: {f}",
             f"operator: {cls.op.label}  window {cls.op.window}  "
             f"delta {cls.op.delta}"]
    lines += [_cert_lines(f"[phi, R_{n}]", c)
              for n, c in cls.membership.generator_certs]
    _, cert = cls.membership.generator_certs[0]
    from .report import rank_staircase

    _report(args, obj, lines, "to-operator",
            ("window", "rank"), sorted(cert.ranks_at.items()),
            lambda p: rank_staircase(p, cert.ranks_at, cert.operator,
                                     bound=cert.bound_dim))
    _emit(args, obj, lines)
    return 0 if cls.member else 1


def _cmd_inf_from_operator(args) -> int:
    raw = _payload(args.operator)
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ParseError(f"operator payload is not JSON: {err.msg}",
                         err.pos) from None
    if isinstance(payload, dict) and "operator" in payload:
        op_obj = payload["operator"]
        if args.field:
            field = field_from_spec(args.field)
        elif "field" in payload:
            field = jsonio.decode_field(payload["field"])
        else:
            field = field_from_spec("q")
    else:
        op_obj = payload
        field = field_from_spec(args.field or "q")
    op = jsonio.decode_operator(field, op_obj)
    cls = calkin_class_from_operator(op)
    f = series_of_operator(cls, args.prec)
    obj = {
        "verdict": "recovered",
        "field": jsonio.encode_field(field),
        "series": jsonio.encode_series(f),
        "series_text": str(f),
        "commutators": {name: jsonio.encode_certificate(cert)
                        for name, cert in cls.membership.generator_certs},
    }
    lines = [f"verdict: recovered", f"series: {f}"]
    lines += [_cert_lines(f"[psi, R_{n}]", c)
              for n, c in cls.membership.generator_certs]
    _, cert = cls.membership.generator_certs[0]
    from .report import rank_staircase

    _report(args, obj, lines, "from-operator",
            ("window", "rank"), sorted(cert.ranks_at.items()),
            lambda p: rank_staircase(p, cert.ranks_at, cert.operator))
    _emit(args, obj, lines)
    return 0


def _cmd_inf_verify_hom(args) -> int:
    field = _field(args)
    f = parse_series(_payload(args.f), field, "t", args.prec)
    g = parse_series(_payload(args.g), field, "t", args.prec)
    rep = verify_homomorphism(f, g, window=args.window)
    verdict = "equivalent" if rep.ok() else "inconclusive"
    obj = {
        "verdict": verdict,
        "rank": rep.rank,
        "window": rep.window,
        "bound_dim": rep.bound_dim,
        "certificate": jsonio.encode_certificate(rep.certificate),
    }
    lines = [f"verdict: {verdict}", str(rep)]
    from .report import rank_staircase

    cert = rep.certificate
    _report(args, obj, lines, "verify-hom",
            ("window", "rank"), sorted(cert.ranks_at.items()),
            lambda p: rank_staircase(p, cert.ranks_at,
                                     "phi(f)phi(g) - phi(fg)",
                                     bound=rep.bound_dim))
    _emit(args, obj, lines)
    return 0 if rep.ok() else 1


def _cmd_inf_residue(args) -> int:
    field = _field(args)
    f = parse_series(_payload(args.series), field, "t", args.prec)
    p = parse_poly(_payload(args.poly), field, ("t",))
    val = residue_pairing_at_infinity(f, p)
    obj = {"verdict": "ok", "value": str(val)}
    lines = [f"residue at infinity of f * p dt: {val}"]
    _emit(args, obj, lines)
    return 0


# -- almost -----------------------------------------------------------------------------


def _presentation_out(args, pres, stem: str) -> Tuple[dict, List[str], int]:
    verdict = "certified" if pres.certified() else "unstable"
    obj = {
        "verdict": verdict,
        "label": pres.label,
        "scheme": pres.scheme.kind,
        "unit_defect_rank": pres.unit_defect_rank,
        "commutator_rank": pres.commutator_rank(),
        "generators": {name: jsonio.encode_operator(op)
                       for name, op in sorted(pres.generators.items())},
        "relations": [[name, jsonio.encode_certificate(cert)]
                      for name, cert in pres.relation_certs],
    }
    lines = [f"verdict: {verdict}", f"presentation: {pres.label}",
             f"unit defect rank: {pres.unit_defect_rank}"]
    lines += [_cert_lines(name, cert) for name, cert in pres.relation_certs]
    name, cert = pres.relation_certs[0]
    from .report import rank_staircase

    _report(args, obj, lines, stem,
            ("window", "rank"), sorted(cert.ranks_at.items()),
            lambda p: rank_staircase(p, cert.ranks_at, name,
                                     bound=cert.bound_dim))
    return obj, lines, 0 if pres.certified() else 1


def _cmd_almost_build_mg(args) -> int:
    field = _field(args)
    from .parsing import parse_biseries

    g = parse_biseries(_payload(args.g), field, ("x", "y"), args.prec)
    pres = build_M_g(g, window=args.window)
    obj, lines, code = _presentation_out(args, pres, "build-mg")
    _emit(args, obj, lines)
    return code


def _cmd_almost_build_nh(args) -> int:
    field = _field(args)
    h = parse_series(_payload(args.h), field, "y", args.prec)
    pres = build_N_h(h, window=args.window)
    obj, lines, code = _presentation_out(args, pres, "build-nh")
    _emit(args, obj, lines)
    return code


def _cmd_almost_verify_ses(args) -> int:
    field = _field(args)
    h = parse_series(_payload(args.h), field, "y", args.prec)
    rep = verify_ses(h, window=args.window)
    verdict = "exact" if rep.ok() else "failed"
    obj = {
        "verdict": verdict,
        "window": rep.window,
        "exact": rep.exact,
        "slices": [{
            "degree": s.degree,
            "dim_source": s.dim_source,
            "dim_middle": s.dim_middle,
            "dim_quotient": s.dim_quotient,
            "ok": s.ok(),
        } for s in rep.slices],
        "defects": [[name, jsonio.encode_certificate(cert)]
                    for name, cert in rep.defect_certs],
    }
    lines = [f"verdict: {verdict}", f"window: {rep.window}"]
    lines += [f"degree {s.degree}: dims {s.dim_source}/{s.dim_middle}/"
              f"{s.dim_quotient} {'ok' if s.ok() else 'FAIL'}"
              for s in rep.slices]
    lines += [_cert_lines(name, cert) for name, cert in rep.defect_certs]
    from .report import value_bars

    names = [name for name, _ in rep.defect_certs]
    ranks = [float(cert.rank) for _, cert in rep.defect_certs]
    _report(args, obj, lines, "verify-ses",
            ("defect", "rank"),
            [(n, c.rank) for n, c in rep.defect_certs],
            lambda p: value_bars(p, names, ranks, "intertwining defects",
                                 "rank"))
    _emit(args, obj, lines)
    return 0 if rep.ok() else 1


# -- pic --------------------------------------------------------------------------------


def _cmd_pic_factor(args) -> int:
    field = _field(args)
    c = parse_chart_unit(_payload(args.cocycle), field, ("x", "y"),
                         args.order)
    fr = factor_cocycle(c, order=args.order)
    sound = fr.verify(c)
    verdict = "factored" if sound else "mismatch"
    obj = {
        "verdict": verdict,
        "order": fr.order,
        "n": fr.n,
        "scalar": str(fr.scalar),
        "g": jsonio.encode_biseries(fr.g),
        "u1": jsonio.encode_chart_unit(fr.u1),
        "u2": jsonio.encode_chart_unit(fr.u2),
        "residual": jsonio.encode_chart_unit(fr.residual),
    }
    lines = [
        f"verdict: {verdict}",
        f"scalar: {fr.scalar}",
        f"(x/y) exponent n: {fr.n}",
        f"g: {fr.g}",
        f"u1 (chart 1): {fr.u1}",
        f"u2 (chart 2): {fr.u2}",
        f"residual: {fr.residual}",
    ]
    from .report import level_plot

    levels = sorted(a + b for a, b in fr.g.terms)
    _report(args, obj, lines, "pic-factor",
            ("component", "value"),
            [("scalar", str(fr.scalar)), ("n", fr.n), ("g", str(fr.g)),
             ("u1", str(fr.u1)), ("u2", str(fr.u2)),
             ("residual", str(fr.residual))],
            lambda p: level_plot(p, levels or [0],
                                 "filtration levels of the g component"))
    _emit(args, obj, lines)
    return 0 if sound else 1


# -- hensel -----------------------------------------------------------------------------


def _cmd_hensel_roots(args) -> int:
    field = _field(args)
    P = parse_poly(_payload(args.poly), field, ("x", "y"))
    rr = laurent_roots(P, args.prec)
    trace = [(s, list(vals)) for s, vals in
             hensel_mod.LAST_NEWTON_VALUATIONS]
    verdict = "resolved" if not rr.unresolved else "partial"
    obj = {
        "verdict": verdict,
        "roots": [jsonio.encode_series(h) for h in rr.roots],
        "roots_text": [str(h) for h in rr.roots],
        "unresolved": [{"kind": u.kind, "slope": list(u.slope),
                        "detail": u.detail} for u in rr.unresolved],
        "polygon": [list(pt) for pt in rr.polygon],
        "newton_valuations": [[s, vals] for s, vals in trace],
    }
    lines = [f"verdict: {verdict}"]
    lines += [f"root: {h}" for h in rr.roots]
    lines += [f"unresolved: {u}" for u in rr.unresolved]
    from .report import doubling_plot

    longest = max((vals for _, vals in trace), key=len, default=[])
    rows = [(s, k, v) for s, vals in trace for k, v in enumerate(vals)]
    _report(args, obj, lines, "hensel-roots",
            ("slope", "step", "residual_valuation"), rows,
            lambda p: doubling_plot(p, longest, "Newton residual valuation"))
    _emit(args, obj, lines)
    return 0 if not rr.unresolved else 1


def _cmd_hensel_witness(args) -> int:
    field = _field(args)
    h = parse_series(_payload(args.series), field, "y", args.prec)
    w = algebraicity_witness(h, args.dx, args.dy)
    if w is None:
        obj = {"verdict": "no-witness", "witness": None}
        lines = [f"verdict: no-witness",
                 f"no relation of bidegree ({args.dx}, {args.dy}) "
                 f"within precision {h.prec}"]
        _emit(args, obj, lines)
        return 1
    obj = {"verdict": "witness", "witness": jsonio.encode_poly(w),
           "witness_text": str(w)}
    lines = [f"verdict: witness", f"P: {w}"]
    _emit(args, obj, lines)
    return 0


def _cmd_hensel_pipeline(args) -> int:
    field = _field(args)
    P = parse_poly(_payload(args.poly), field, ("x", "y"))
    rep = root_witness_pipeline(P, args.prec, args.dx, args.dy)
    verdict = "verified" if rep.ok() else "failed"
    obj = {
        "verdict": verdict,
        "entries": [{
            "root": str(e.root),
            "witness": None if e.witness is None else str(e.witness),
            "divides": e.divides,
            "residual_zero": e.residual_zero,
        } for e in rep.entries],
        "unresolved": [{"kind": u.kind, "slope": list(u.slope),
                        "detail": u.detail} for u in rep.unresolved],
    }
    lines = [f"verdict: {verdict}"]
    for e in rep.entries:
        lines.append(f"root: {e.root}")
        lines.append(f"  witness: {e.witness}")
        lines.append(f"  divides P: {e.divides}  "
                     f"residual zero: {e.residual_zero}")
    lines += [f"unresolved: {u}" for u in rep.unresolved]
    from .report import pass_fail_bars

    names = [f"branch {i}" for i in range(len(rep.entries))]
    _report(args, obj, lines, "th84-pipeline",
            ("branch", "witness", "divides", "residual_zero"),
            [(i, e.witness is not None, e.divides, e.residual_zero)
             for i, e in enumerate(rep.entries)],
            lambda p: pass_fail_bars(
                p, names,
                [int(e.ok()) for e in rep.entries],
                [int(not e.ok()) for e in rep.entries],
                "witness pipeline"))
    _emit(args, obj, lines)
    return 0 if rep.ok() else 1


# -- adele ------------------------------------------------------------------------------


def _cmd_adele_residues(args) -> int:
    field = _field(args)
    f = parse_ratfun(_payload(args.f), field, "t")
    g = parse_ratfun(_payload(args.g), field, "t")
    rep = residue_theorem_check(f, g, field)
    verdict = "verified" if rep.ok else "failed"
    table = {point_key(p): str(r) for p, r in rep.entries}
    obj = {"verdict": verdict, "table": table, "total": str(rep.total)}
    lines = [f"verdict: {verdict}"]
    lines += [f"res at {point_key(p)}: {r}" for p, r in rep.entries]
    lines.append(f"total: {rep.total}")
    from .report import value_bars

    labels = [point_key(p) for p, _ in rep.entries]
    vals = [_plot_value(r) for _, r in rep.entries]
    _report(args, obj, lines, "adele-residues",
            ("place", "residue"),
            [(point_key(p), str(r)) for p, r in rep.entries],
            lambda p: value_bars(p, labels, vals, "traced residues of f dg",
                                 "residue"))
    _emit(args, obj, lines)
    return 0 if rep.ok else 1


def _cmd_adele_weil(args) -> int:
    field = _field(args)
    f = parse_ratfun(_payload(args.f), field, "t")
    g = parse_ratfun(_payload(args.g), field, "t")
    rep = weil_reciprocity_check(f, g, field)
    verdict = "verified" if rep.ok else "failed"
    table = {point_key(p): str(s) for p, s, _ in rep.entries}
    norms = {point_key(p): str(n) for p, _, n in rep.entries}
    obj = {"verdict": verdict, "table": table, "norms": norms,
           "product": str(rep.product)}
    lines = [f"verdict: {verdict}"]
    lines += [f"symbol at {point_key(p)}: {s}  (norm {n})"
              for p, s, n in rep.entries]
    lines.append(f"product of norms: {rep.product}")
    from .report import value_bars

    labels = [point_key(p) for p, _, _ in rep.entries]
    vals = [_plot_value(n) for _, _, n in rep.entries]
    _report(args, obj, lines, "adele-weil",
            ("place", "symbol", "norm"),
            [(point_key(p), str(s), str(n)) for p, s, n in rep.entries],
            lambda p: value_bars(p, labels, vals, "normed tame symbols",
                                 "norm"))
    _emit(args, obj, lines)
    return 0 if rep.ok else 1


def _cmd_adele_prop71(args) -> int:
    field = _field(args)
    rep = prop71_check(field, window=args.window)
    verdict = "verified" if rep.ok else "failed"
    obj = {
        "verdict": verdict,
        "window": rep.window,
        "kernel_dim": rep.kernel_dim,
        "cokernel_dim": rep.cokernel_dim,
        "unit_maps_to_zero": rep.unit_maps_to_zero,
        "defect": jsonio.encode_certificate(rep.defect),
    }
    lines = [f"verdict: {verdict}", str(rep)]
    from .report import rank_staircase

    _report(args, obj, lines, "prop71",
            ("window", "rank"), sorted(rep.defect.ranks_at.items()),
            lambda p: rank_staircase(p, rep.defect.ranks_at,
                                     "comparison defect"))
    _emit(args, obj, lines)
    return 0 if rep.ok else 1


# -- suite ------------------------------------------------------------------------------


def _cmd_suite(args) -> int:
    res = run_suite(args.name, seed=args.seed, order=args.order)
    verdict = "pass" if res.ok else "fail"
    obj = {
        "verdict": verdict,
        "name": res.name,
        "seed": res.seed,
        "total": res.total,
        "passed": res.passed,
        "checks": [{"id": c.cid, "ok": c.ok, "note": c.note}
                   for c in sorted(res.checks, key=lambda c: c.cid)],
    }
    lines = list(res.lines())
    lines.append(res.summary())
    from .report import pass_fail_bars

    groups: Dict[str, List[int]] = {}
    for c in res.checks:
        head = c.cid.split("-", 1)[0]
        cell = groups.setdefault(head, [0, 0])
        cell[0] += int(c.ok)
        cell[1] += int(not c.ok)
    names = sorted(groups)
    _report(args, obj, lines, f"suite-{res.name}",
            ("check", "status", "note"),
            [(c.cid, "pass" if c.ok else "FAIL", c.note)
             for c in sorted(res.checks, key=lambda c: c.cid)],
            lambda p: pass_fail_bars(p, names,
                                     [groups[n][0] for n in names],
                                     [groups[n][1] for n in names],
                                     f"suite {res.name} (seed {res.seed})"))
    _emit(args, obj, lines)
    return 0 if res.ok else 1


# -- parser -----------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, *, field: bool = True,
            window: Optional[int] = None, prec: Optional[int] = None,
            order: Optional[int] = None) -> None:
    if field:
        p.add_argument("--field", default="q", metavar="SPEC",
                       help="q | fp:<p> | fq:<p>:<degree or modulus in z> "
                            "(default q)")
    if window is not None:
        p.add_argument("--window", type=int, default=window,
                       help=f"verification window (default {window})")
    if prec is not None:
        p.add_argument("--prec", type=int, default=prec,
                       help=f"series precision (default {prec})")
    if order is not None:
        p.add_argument("--order", type=int, default=order,
                       help=f"filtration order (default {order})")
    p.add_argument("--json", action="store_true",
                   help="emit one JSON object instead of text")
    p.add_argument("--report-dir", default=None, metavar="DIR",
                   help="write a CSV table and a PNG figure under DIR")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="atinfty",
        description="exact calculations in the formal neighborhood of "
                    "infinity: operator classes modulo finite rank, "
                    "almost-module presentations, cocycle factorization, "
                    "Laurent-series roots, and adelic residues",
    )
    sub = top.add_subparsers(dest="group", required=True)

    inf = sub.add_parser("infinity",
                         help="series <-> operator correspondence")
    infsub = inf.add_subparsers(dest="verb", required=True)

    p = infsub.add_parser("to-operator",
                          help="multiplication operator of a series")
    p.add_argument("series", help="series in t (file, '-', or literal)")
    _common(p, window=20, prec=12)
    p.set_defaults(func=_cmd_inf_to_operator)

    p = infsub.add_parser("from-operator",
                          help="recover the series of an operator")
    p.add_argument("operator", help="operator JSON (file, '-', or literal)")
    p.add_argument("--field", default=None, metavar="SPEC",
                   help="override the field recorded in the payload")
    p.add_argument("--prec", type=int, default=8,
                   help="target precision of the recovered series "
                        "(default 8)")
    p.add_argument("--json", action="store_true",
                   help="emit one JSON object instead of text")
    p.add_argument("--report-dir", default=None, metavar="DIR",
                   help="write a CSV table and a PNG figure under DIR")
    p.set_defaults(func=_cmd_inf_from_operator)

    p = infsub.add_parser("verify-hom",
                          help="phi(f)phi(g) = phi(fg) modulo finite rank")
    p.add_argument("f")
    p.add_argument("g")
    _common(p, window=20, prec=12)
    p.set_defaults(func=_cmd_inf_verify_hom)

    p = infsub.add_parser("residue",
                          help="residue at infinity of f * p dt")
    p.add_argument("series", help="series f in t")
    p.add_argument("poly", help="polynomial p in t")
    _common(p, prec=12)
    p.set_defaults(func=_cmd_inf_residue)

    alm = sub.add_parser("almost", help="almost-module presentations")
    almsub = alm.add_subparsers(dest="verb", required=True)

    p = almsub.add_parser("build-mg",
                          help="grid presentation twisted by a unit g")
    p.add_argument("g", help="unit 1 + x^-1 y^-1 (...) in x, y")
    _common(p, window=8, prec=14)
    p.set_defaults(func=_cmd_almost_build_mg)

    p = almsub.add_parser("build-nh",
                          help="sequence presentation twisted by a series h")
    p.add_argument("h", help="series h in y")
    _common(p, window=10, prec=16)
    p.set_defaults(func=_cmd_almost_build_nh)

    p = almsub.add_parser("verify-ses",
                          help="graded exactness of the twisted sequence")
    p.add_argument("h", help="series h in y")
    _common(p, window=12, prec=18)
    p.set_defaults(func=_cmd_almost_verify_ses)

    pic = sub.add_parser("pic", help="overlap cocycle factorization")
    picsub = pic.add_subparsers(dest="verb", required=True)

    p = picsub.add_parser("factor",
                          help="split a cocycle into chart units, "
                               "(x/y)^n and the unipotent g")
    p.add_argument("cocycle", help="cocycle as an expanded expression "
                                   "in x, y")
    _common(p, order=12)
    p.set_defaults(func=_cmd_pic_factor)

    hen = sub.add_parser("hensel", help="Laurent-series roots and witnesses")
    hensub = hen.add_subparsers(dest="verb", required=True)

    p = hensub.add_parser("roots", help="series roots of P(x, y), monic "
                                        "in x")
    p.add_argument("poly")
    _common(p, prec=20)
    p.set_defaults(func=_cmd_hensel_roots)

    p = hensub.add_parser("witness",
                          help="polynomial relation annihilating a series")
    p.add_argument("series", help="series h in y")
    p.add_argument("--dx", type=int, default=2, help="x-degree bound")
    p.add_argument("--dy", type=int, default=2, help="y-degree bound")
    _common(p, prec=24)
    p.set_defaults(func=_cmd_hensel_witness)

    p = hensub.add_parser("th84-pipeline",
                          help="roots, witnesses, and the residual check "
                               "in one pass")
    p.add_argument("poly")
    p.add_argument("--dx", type=int, default=None, help="x-degree bound "
                   "(default: degree of P)")
    p.add_argument("--dy", type=int, default=None, help="y-degree bound "
                   "(default: degree of P)")
    _common(p, prec=20)
    p.set_defaults(func=_cmd_hensel_pipeline)

    ade = sub.add_parser("adele", help="residues and reciprocity on the "
                                       "projective line")
    adesub = ade.add_subparsers(dest="verb", required=True)

    p = adesub.add_parser("residues",
                          help="traced residues of f dg over all places")
    p.add_argument("f", help="rational function in t")
    p.add_argument("g", help="rational function in t")
    _common(p)
    p.set_defaults(func=_cmd_adele_residues)

    p = adesub.add_parser("weil", help="tame symbols and their norm product")
    p.add_argument("f", help="rational function in t")
    p.add_argument("g", help="rational function in t")
    _common(p)
    p.set_defaults(func=_cmd_adele_weil)

    p = adesub.add_parser("prop71",
                          help="polynomials against the pole part at "
                               "infinity")
    _common(p, window=12)
    p.set_defaults(func=_cmd_adele_prop71)

    p = sub.add_parser("suite", help="randomized property suites")
    p.add_argument("name", choices=SUITE_NAMES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"RNG seed (default {DEFAULT_SEED})")
    p.add_argument("--order", type=int, default=12,
                   help="filtration order for the picard suite "
                        "(default 12)")
    p.add_argument("--json", action="store_true",
                   help="emit one JSON object instead of text")
    p.add_argument("--report-dir", default=None, metavar="DIR",
                   help="write a CSV table and a PNG figure under DIR")
    p.set_defaults(func=_cmd_suite)

    return top


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Dispatch argv and return the exit code (0 verified, 1 failed,
    2 usage)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except _USAGE_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except _FAILURE_ERRORS as err:
        print(f"failed: {err}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
