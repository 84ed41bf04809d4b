"""Command line interface.

Exit codes: 0 the property holds, 1 it fails, 2 usage or input error,
3 inconclusive (height bound or truncation exhausted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .algebra.poly import HPoly, ParseError, parse_poly
from .algebra.ratio import ratio
from .certificates import (
    configuration_json,
    dimension_json,
    dumps,
    family_json,
    singularity_json,
    star_line_json,
    star_point_json,
    star_sum_json,
    verify,
)
from .families import (
    FamilyError,
    cone_over_curve,
    deformation_to_Ad2,
    extremal_family,
    family_dimension,
    family_dimension_oracle,
    lemma_surface,
    line_Ak_surface,
    proper_star_deformation,
    star_family,
    star_sum_check,
)
from .geometry import GeometryError, Hypersurface, LinSubspace, ProjPoint, singular_points_on_line
from .singularities import classify_Ak
from .starpoints import (
    analyze_star_configuration,
    is_star_point,
    is_star_point_with_plane,
    star_line_certificate,
)

HOLDS, FAILS, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    truncation: int | None
    seed: int
    height_bound: int
    fmt: str

    def __post_init__(self):
        if self.truncation is not None and self.truncation < 3:
            raise UsageError("--truncation must be at least 3")
        if self.height_bound < 1:
            raise UsageError("--height-bound must be at least 1")


def _read_text(value: str) -> str:
    if value.startswith("@"):
        with open(value[1:], encoding="utf-8") as fh:
            return fh.read().strip()
    return value


def _poly(value: str, nvars: int | None = None) -> HPoly:
    text = _read_text(value)
    if text.startswith("{"):
        p = HPoly.from_json(json.loads(text))
        return p
    return parse_poly(text, nvars)


def _surface(value: str, nvars: int | None = None) -> Hypersurface:
    return Hypersurface(_poly(value, nvars))


def _point(value: str) -> ProjPoint:
    try:
        return ProjPoint.parse(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point {value!r}: {exc}") from None


def _subspace(value: str, nvars: int) -> LinSubspace:
    """Equations separated by ``;`` (``X2;X3``) or points joined by ``;`` (``1,0,0,0;0,1,0,0``)."""
    if "," in value:
        return LinSubspace.parse_points(value)
    return LinSubspace.parse_equations(value, nvars)


def _forms(value: str, nvars: int | None = None) -> list:
    return [parse_poly(part.strip(), nvars) for part in value.split(",") if part.strip()]


def _emit(cfg: RunConfig, doc: dict, lines: list):
    if cfg.fmt == "json":
        sys.stdout.write(dumps(doc))
    else:
        sys.stdout.write("\n".join(lines) + "\n")


# commands


def cmd_check_star(args, cfg: RunConfig) -> int:
    P = _point(args.point)
    X = _surface(args.surface, len(P))
    if not X.contains(P):
        raise UsageError(f"point {P} is not on the surface")
    if args.plane:
        plane = _subspace(args.plane, X.nvars)
        result = is_star_point_with_plane(X, P, plane)
        doc = star_point_json(X, result, with_plane=True)
    else:
        if not X.is_smooth_at(P):
            raise UsageError(
                f"point {P} is singular; pass a candidate hyperplane with --plane to use the generalized test"
            )
        result = is_star_point(X, P)
        doc = star_point_json(X, result)
    lines = [
        f"star point: {'yes' if result.verdict else 'no'}",
        f"point: {P}",
        f"hyperplane: {result.plane}",
        f"section: {result.restricted if result.restricted is not None else 'hyperplane is a component'}",
    ]
    _emit(cfg, doc, lines)
    return HOLDS if result.verdict else FAILS


def cmd_classify(args, cfg: RunConfig) -> int:
    P = _point(args.point)
    X = _surface(args.surface, len(P))
    report = classify_Ak(X, P, cfg.truncation)
    doc = singularity_json(X, report)
    _emit(cfg, doc, [f"{P}: {report.label}"])
    if report.kind == "AkAtLeast":
        return INCONCLUSIVE
    return FAILS if report.kind == "NotA" else HOLDS


def cmd_scan_line(args, cfg: RunConfig) -> int:
    X = _surface(args.surface, args.nvars)
    line = _subspace(args.line, X.nvars)
    if line.dim != 1:
        raise UsageError("the line must be one-dimensional")
    cert = star_line_certificate(X, line, cfg.height_bound)
    sing = singular_points_on_line(X, line)
    certs = [star_line_json(X, cert)]
    lines = [f"line: {line}", f"star line: {cert.status}"]
    if cert.reason:
        lines.append(f"reason: {cert.reason}")
    points = []
    ledger = None
    if X.N == 3:
        if cert:
            ledger = star_sum_check(X, line, cfg.truncation)
            certs.append(star_sum_json(X, line, ledger, ledger.reports))
            types = {e["point"]: e["type"] for e in ledger.entries if e["source"] == "classified"}
        else:
            types = {str(pt): classify_Ak(X, pt, cfg.truncation).label for pt, _ in sing.points}
        for pt, m in sing.points:
            points.append({"point": str(pt), "multiplicity": m, "type": types.get(str(pt))})
            lines.append(f"singular point {pt} (multiplicity {m}): {types.get(str(pt))}")
    if sing.factorization is not None:
        for f, m in sing.factorization.factors:
            if f.degree > 1:
                lines.append(f"non-rational singular points: roots of {f} (multiplicity {m})")
    if ledger is not None:
        lines.append(f"star sum: {ledger.total} (target {ledger.target}) {'holds' if ledger.holds else 'FAILS'}")
    doc = {
        "type": "line-scan",
        "surface": X.f.to_json(),
        "line": line.to_json(),
        "status": cert.status,
        "singular_trace": str(sing.gcd),
        "singular_points": points,
        "certificates": certs,
    }
    _emit(cfg, doc, lines)
    if cert.status == "inconclusive":
        return INCONCLUSIVE
    if not cert or (ledger is not None and not ledger.holds):
        return FAILS
    return HOLDS


def _family_lines(member) -> list:
    lines = [f"{member.kind}: {member.surface}"]
    for name, check in member.checks.items():
        detail = ", ".join(f"{k}={v}" for k, v in check.items() if k != "ok")
        lines.append(f"  {name}: {'ok' if check.get('ok') else 'FAILED'} {detail}".rstrip())
    if member.seed is not None:
        lines.append(f"  seed: {member.seed}")
    return lines


def cmd_family(args, cfg: RunConfig) -> int:
    kind = args.family
    if kind == "dimension":
        value = family_dimension(args.N, args.d, args.lam)
        oracle = family_dimension_oracle(args.N, args.d, args.lam)
        _emit(cfg, dimension_json(args.N, args.d, args.lam, value, oracle), [str(value)])
        return HOLDS if value == oracle else FAILS
    if kind == "star":
        n = args.N + 1
        member = star_family(args.N, args.d, args.lam, _poly(args.h, n), _poly(args.g, n))
    elif kind == "extremal":
        forms = _forms(args.forms)
        member = extremal_family(forms, ratio(args.alpha), args.N, cfg.height_bound)
    elif kind == "cone":
        curve = _poly(args.curve, 3)
        plane = LinSubspace.parse_points(args.plane) if args.plane else None
        vertex = LinSubspace.parse_points(args.vertex) if args.vertex else None
        member = cone_over_curve(curve, plane, vertex)
    elif kind == "line-ak":
        member = line_Ak_surface(
            args.d,
            _poly(args.L, 4),
            _poly(args.L2, 4) if args.L2 else None,
            _poly(args.L3, 4) if args.L3 else None,
            seed=cfg.seed,
            height_bound=cfg.height_bound,
        )
    elif kind == "lemma":
        member = lemma_surface(args.d, args.alpha, _poly(args.L, 4) if args.L else None, cfg.truncation)
    elif kind == "deform-ad2":
        L = _poly(args.L, 4)
        L2 = _poly(args.L2, 4) if args.L2 else None
        L3 = _poly(args.L3, 4) if args.L3 else None
        P = _point(args.point) if args.point else None
        members = [
            deformation_to_Ad2(args.d, L, L2, L3, P, t, seed=cfg.seed, T=cfg.truncation)
            for t in (ratio(0), ratio(args.t))
        ]
        lines = ["t | surface | types at the roots of L | star point"]
        for m in members:
            types = ", ".join(f"{p} {lab}" for p, lab in m.extra["types"].items())
            lines.append(f"{m.params['t']} | {m.surface} | {types} | {m.params['P']}")
        doc = {"type": "bundle", "certificates": [family_json(m) for m in members]}
        _emit(cfg, doc, lines)
        return HOLDS
    elif kind == "deform-proper":
        n = args.N + 1
        member = proper_star_deformation(
            _poly(args.h, n),
            _poly(args.g, n),
            _poly(args.H, n) if args.H else None,
            _poly(args.G, n) if args.G else None,
            ratio(args.t),
            N=args.N,
            seed=cfg.seed,
        )
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown family {kind}")
    _emit(cfg, family_json(member), _family_lines(member))
    return HOLDS if member.ok else FAILS


def cmd_config_analyze(args, cfg: RunConfig) -> int:
    pairs = []
    for item in args.pair:
        if "|" not in item:
            raise UsageError("each --pair needs the form 'SUBSPACE|HYPERPLANE'")
        a, b = item.split("|", 1)
        pairs.append((_subspace(a, args.nvars), _subspace(b, args.nvars)))
    report = analyze_star_configuration(pairs, args.degree)
    doc = configuration_json(pairs, report, args.degree)
    lines = [f"case: {report.case}", f"count: {report.count}"]
    if report.vertex is not None:
        lines.append(f"common vertex: {report.vertex}")
    if report.hyperplane is not None:
        lines.append(f"common hyperplane: {report.hyperplane}")
    if report.bound is not None:
        lines.append(f"bound: {report.bound} ({'ok' if report.count_bound_ok else 'VIOLATED'})")
    _emit(cfg, doc, lines)
    return HOLDS if report.count_bound_ok else FAILS


def cmd_verify(args, cfg: RunConfig) -> int:
    text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not a JSON document: {exc}") from None
    result = verify(doc)
    out = {"type": "verification", "ok": result.ok, "problems": list(result.problems)}
    lines = ["verified" if result.ok else "verification FAILED"] + [f"  {p}" for p in result.problems]
    _emit(cfg, out, lines)
    return HOLDS if result.ok else FAILS


# parser


def _global_options(parser: argparse.ArgumentParser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--truncation", type=int, default=default, help="series truncation order T (default 4d+2)")
    parser.add_argument("--seed", type=int, default=default, help="random seed (default $STARLOCK_SEED or 0)")
    parser.add_argument("--height-bound", type=int, default=default, help="height bound for rational point scans")
    parser.add_argument("--format", choices=("json", "text"), default=default, help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starlock", description="Star points and A_k singularities, exactly.", allow_abbrev=False
    )
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text, allow_abbrev=False)
        _global_options(p, suppress=True)
        return p

    p = command("check-star", "test whether a point is a star point")
    p.add_argument("--surface", required=True, help="equation in X0..XN, or @file")
    p.add_argument("--point", required=True, help="comma separated coordinates")
    p.add_argument("--plane", help="candidate hyperplane for a singular point, e.g. 'X2'")
    p.set_defaults(run=cmd_check_star)

    p = command("classify", "classify a surface point as A_k")
    p.add_argument("--surface", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(run=cmd_classify)

    p = command("scan-line", "certify a line of star points and its singular points")
    p.add_argument("--surface", required=True)
    p.add_argument("--line", required=True, help="'X2;X3' (equations) or '1,0,0,0;0,1,0,0' (points)")
    p.add_argument("--nvars", type=int, default=None)
    p.set_defaults(run=cmd_scan_line)

    p = command("family", "construct a family member with its self-check certificates")
    fam = p.add_subparsers(dest="family", required=True)

    def family(name, help_text):
        q = fam.add_parser(name, help=help_text, allow_abbrev=False)
        _global_options(q, suppress=True)
        q.set_defaults(run=cmd_family)
        return q

    q = family("star", "X_(lambda+1) h + g")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--lambda", dest="lam", type=int, required=True)
    q.add_argument("--h", required=True)
    q.add_argument("--g", required=True)
    q = family("extremal", "product of linear forms plus alpha X_N^d")
    q.add_argument("--forms", required=True, help="comma separated linear forms")
    q.add_argument("--alpha", required=True)
    q.add_argument("--N", type=int, default=None)
    q = family("cone", "cone over a plane curve")
    q.add_argument("--curve", required=True)
    q.add_argument("--plane", help="three points spanning the plane of the curve")
    q.add_argument("--vertex", help="points spanning the vertex")
    q = family("line-ak", "surface with a line of star points")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--L", required=True)
    q.add_argument("--L2")
    q.add_argument("--L3")
    q = family("lemma", "surface with an A_(d alpha - 1) point")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--alpha", type=int, required=True)
    q.add_argument("--L")
    q = family("deform-ad2", "deform A_(d-1) points on the line into A_(d-2) points")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--L", required=True)
    q.add_argument("--L2")
    q.add_argument("--L3")
    q.add_argument("--point")
    q.add_argument("--t", required=True)
    q = family("deform-proper", "X1 (h + tH) + (g + tG)")
    q.add_argument("--h", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--H")
    q.add_argument("--G")
    q.add_argument("--t", required=True)
    q.add_argument("--N", type=int, default=3)
    q = family("dimension", "dimension of the family with a star subspace")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--lambda", dest="lam", type=int, required=True)

    p = command("config-analyze", "arrangement of star subspaces")
    p.add_argument("--pair", action="append", required=True, help="'X0;X3|X0' : subspace | hyperplane")
    p.add_argument("--nvars", type=int, default=4)
    p.add_argument("--degree", type=int, default=None)
    p.set_defaults(run=cmd_config_analyze)

    p = command("verify", "replay a certificate document")
    p.add_argument("file", help="JSON file, or - for stdin")
    p.set_defaults(run=cmd_verify)
    return parser


def _config(args) -> RunConfig:
    seed = getattr(args, "seed", None)
    if seed is None:
        env = os.environ.get("STARLOCK_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise UsageError("STARLOCK_SEED must be an integer") from None
    height = getattr(args, "height_bound", None)
    return RunConfig(
        truncation=getattr(args, "truncation", None),
        seed=seed,
        height_bound=32 if height is None else height,
        fmt=getattr(args, "format", None) or "text",
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else HOLDS
    try:
        cfg = _config(args)
        return args.run(args, cfg)
    except (UsageError, ParseError, GeometryError, FamilyError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
