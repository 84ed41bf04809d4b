"""JSON certificates and their replay.

Every document carries a ``"type"`` and enough data to check the claim by
substitution and comparison alone: :func:`verify` never reruns a search
or a classification.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebra.linalg import determinant, rank
from .algebra.poly import HPoly, monomials, substitute_linear
from .algebra.ratio import ratio, ratio_str
from .algebra.series import TruncSeries, series_order
from .geometry import (
    Hypersurface,
    LinSubspace,
    ProjPoint,
    pullback_subspace,
    restrict_to_subspace,
    singular_points_on_line,
)
from .markers import CONTAINS_HYPERPLANE, OVERFLOW
from .singularities import SingReport, log_from_json, log_to_json, replay
from .starpoints import ConeCertificate, ConfigurationReport, StarLineCertificate, StarPointResult

FORMAT_VERSION = 1


def dumps(doc) -> str:
    """Canonical serialization: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _matrix(m) -> list:
    return [[ratio_str(x) for x in row] for row in m]


def _read_matrix(doc) -> list:
    return [[ratio(str(x)) for x in row] for row in doc]


# builders


def cone_json(cert: ConeCertificate) -> dict:
    doc = {
        "type": "cone",
        "verdict": cert.verdict,
        "polynomial": cert.polynomial.to_json(),
        "vertex": cert.vertex.to_json(),
        "transform": _matrix(cert.transform),
        "transformed": cert.transformed.to_json(),
    }
    if cert.witness is not None:
        var, exps, c = cert.witness
        doc["witness"] = {"variable": var, "exps": list(exps), "coeff": ratio_str(c)}
    return doc


def star_point_json(X: Hypersurface, result: StarPointResult, with_plane: bool = False) -> dict:
    doc = {
        "type": "star-plane" if with_plane else "star-point",
        "verdict": result.verdict,
        "surface": X.f.to_json(),
        "point": result.point.to_json(),
        "plane": result.plane.to_json(),
        "smooth": result.smooth,
    }
    if result.basis is None:
        doc["plane_is_component"] = True
    else:
        doc["basis"] = _matrix(result.basis)
        doc["restricted"] = result.restricted.to_json()
        doc["cone"] = cone_json(result.cone)
    return doc


def star_line_json(X: Hypersurface, cert: StarLineCertificate) -> dict:
    doc = {
        "type": "star-line",
        "status": cert.status,
        "surface": X.f.to_json(),
        "subspace": cert.subspace.to_json(),
        "reason": cert.reason,
    }
    if cert.plane is not None:
        doc["plane"] = cert.plane.to_json()
        doc["point"] = cert.point.to_json()
    if cert.restricted is not None:
        doc["basis"] = _matrix(cert.basis)
        doc["restricted"] = cert.restricted.to_json()
        doc["linear_form"] = cert.linear_form.to_json()
        doc["degree"] = cert.degree
        doc["multiplicity"] = cert.multiplicity
        doc["residual"] = cert.residual.to_json()
        if cert.scalar is not None:
            doc["scalar"] = ratio_str(cert.scalar)
    return doc


def star_subspace_json(X: Hypersurface, vertex: LinSubspace, plane: LinSubspace, section) -> dict:
    """Section of ``X`` by ``plane`` is a cone with vertex ``vertex``."""
    doc = {
        "type": "star-subspace",
        "verdict": True if section is None else section[2].verdict,
        "surface": X.f.to_json(),
        "vertex": vertex.to_json(),
        "plane": plane.to_json(),
    }
    if section is None:
        doc["plane_is_component"] = True
    else:
        basis, r, cert = section
        doc["basis"] = _matrix(basis)
        doc["restricted"] = r.to_json()
        doc["cone"] = cone_json(cert)
    return doc


def inflection_json(curve: HPoly, Q) -> dict:
    from .geometry import tangent_hyperplane
    from .starpoints import is_total_inflection

    Q = Q if isinstance(Q, ProjPoint) else ProjPoint(Q)
    line = tangent_hyperplane(Hypersurface(curve), Q)
    A, B = line.basis
    r = curve.compose([HPoly.linear([a, b]) for a, b in zip(A, B)])
    verdict = is_total_inflection(curve, Q)
    doc = {
        "type": "inflection",
        "verdict": verdict,
        "curve": curve.to_json(),
        "point": Q.to_json(),
        "line": line.to_json(),
        "restricted": r.to_json(),
    }
    if verdict:
        q = line.coordinates_of(list(Q))
        ell = HPoly.linear([q[1], -q[0]])
        target = ell**curve.degree
        exps, lead = target.items()[0]
        doc["linear_form"] = ell.to_json()
        doc["scalar"] = ratio_str(r.coeff(exps) / lead)
    return doc


def singularity_json(X: Hypersurface, report: SingReport) -> dict:
    doc = {
        "type": "singularity",
        "surface": X.f.to_json(),
        "point": report.point.to_json(),
        "truncation": report.truncation,
        "kind": report.kind,
        "label": report.label,
        "k": report.k,
        "corank": report.corank,
        "transform_log": log_to_json(report.transform_log),
    }
    if report.germ is not None:
        doc["germ"] = report.germ.to_json()
    if report.split is not None:
        sp = report.split
        doc["split"] = {
            "series": sp.split.to_json(),
            "split_vars": list(sp.split_vars),
            "corank_vars": list(sp.corank_vars),
            "coeffs": [ratio_str(c) for c in sp.coeffs],
            "exact_order": sp.exact_order,
        }
    return doc


def configuration_json(pairs, report: ConfigurationReport, d: int | None = None) -> dict:
    return {
        "type": "configuration",
        "pairs": [{"subspace": a.to_json(), "hyperplane": b.to_json()} for a, b in pairs],
        "case": report.case,
        "count": report.count,
        "degree": d,
        "bound": report.bound,
        "count_bound_ok": report.count_bound_ok,
        "vertex": report.vertex.to_json() if report.vertex else None,
        "hyperplane": report.hyperplane.to_json() if report.hyperplane else None,
    }


def dimension_json(N: int, d: int, lam: int, value: int, oracle: int) -> dict:
    return {"type": "dimension", "N": N, "d": d, "lambda": lam, "value": value, "oracle": oracle}


def star_sum_json(X: Hypersurface, line: LinSubspace, ledger, reports) -> dict:
    return {
        "type": "star-sum",
        "surface": X.f.to_json(),
        "line": line.to_json(),
        "ledger": ledger.to_json(),
        "classifications": [singularity_json(X, r) for r in reports],
    }


def family_json(member) -> dict:
    """Member document with a replayable certificate for each self-check."""
    X = member.surface
    extra = member.extra
    certs = []
    if member.kind == "star":
        (vertex, plane), = member.star_pairs
        certs.append(star_subspace_json(X, vertex, plane, extra["section"]))
    elif member.kind == "extremal":
        for cert in extra.get("line_certificates", []):
            certs.append(star_line_json(X, cert))
        if "report" in extra:
            certs.append(configuration_json(member.star_pairs, extra["report"], X.d))
    elif member.kind == "cone":
        from .starpoints import is_cone

        certs.append(cone_json(is_cone(X.f, extra["vertex"])))
    elif member.kind == "line-ak":
        certs.append(star_line_json(X, extra["certificate"]))
    elif member.kind == "lemma":
        certs.append(singularity_json(X, extra["report"]))
    elif member.kind == "deform-ad2":
        certs.append(star_point_json(X, extra["star"]))
        certs.extend(singularity_json(X, r) for r in extra["reports"])
    elif member.kind == "deform-proper":
        certs.append(star_point_json(X, extra["star"], with_plane=True))
    doc = member.to_json()
    doc["type"] = "family"
    doc["family"] = doc.pop("kind")
    doc["certificates"] = certs
    return doc


# verification


@dataclass(frozen=True)
class Verification:
    ok: bool
    problems: tuple

    def __bool__(self):
        return self.ok


class _Checker:
    def __init__(self):
        self.problems = []

    def need(self, cond, message):
        if not cond:
            self.problems.append(message)
        return bool(cond)


def _verify_cone(doc, c: _Checker, prefix="cone"):
    p = HPoly.from_json(doc["polynomial"])
    vertex = LinSubspace.from_json(doc["vertex"])
    M = _read_matrix(doc["transform"])
    q = HPoly.from_json(doc["transformed"])
    k = vertex.dim
    c.need(determinant(M) != 0, f"{prefix}: transform is singular")
    cols = [[M[i][j] for i in range(len(M))] for j in range(k + 1)]
    c.need(
        rank(cols) == k + 1 and all(vertex.contains_point(v) for v in cols),
        f"{prefix}: leading columns do not span the vertex",
    )
    if p:
        c.need(substitute_linear(p, M) == q, f"{prefix}: transformed polynomial does not match")
        c.need(
            restrict_to_subspace(p, vertex) is CONTAINS_HYPERPLANE, f"{prefix}: vertex not on hypersurface"
        )
    free = all(not any(e[: k + 1]) for e, _ in q.items())
    c.need(free == doc["verdict"], f"{prefix}: verdict disagrees with the variables used")
    if not doc["verdict"] and "witness" in doc:
        w = doc["witness"]
        c.need(
            q.coeff(tuple(w["exps"])) == ratio(w["coeff"]) and w["exps"][w["variable"]] > 0,
            f"{prefix}: witness term not present",
        )


def _verify_section(doc, X: Hypersurface, c: _Checker, prefix, vertex=None):
    plane = LinSubspace.from_json(doc["plane"])
    if vertex is None:
        point = ProjPoint.from_json(doc["point"])
        vertex = LinSubspace.point(point)
    else:
        point = None
    c.need(plane.contains(vertex), f"{prefix}: vertex not in the hyperplane")
    c.need(
        restrict_to_subspace(X.f, vertex) is CONTAINS_HYPERPLANE, f"{prefix}: vertex not on the surface"
    )
    if doc.get("plane_is_component"):
        c.need(
            restrict_to_subspace(X.f, plane) is CONTAINS_HYPERPLANE,
            f"{prefix}: hyperplane is not a component",
        )
        return plane, point, None, None
    basis = _read_matrix(doc["basis"])
    c.need(LinSubspace.from_span(basis) == plane, f"{prefix}: basis does not span the hyperplane")
    r = HPoly.from_json(doc["restricted"])
    got = restrict_to_subspace(X.f, LinSubspace.from_span(basis))
    if got is CONTAINS_HYPERPLANE:
        c.need(not r, f"{prefix}: restriction mismatch")
    else:
        forms = [HPoly.linear([basis[j][i] for j in range(len(basis))]) for i in range(X.nvars)]
        c.need(X.f.compose(forms) == r, f"{prefix}: restriction mismatch")
    return plane, point, basis, r


def _verify_star_point(doc, c: _Checker, prefix=None):
    prefix = prefix or doc["type"]
    X = Hypersurface(HPoly.from_json(doc["surface"]))
    if doc["type"] == "star-subspace":
        _verify_star_subspace(doc, X, c, prefix)
        return
    plane, point, basis, r = _verify_section(doc, X, c, prefix)
    if doc["type"] == "star-point":
        grad = X.gradient_at(point)
        c.need(any(grad), f"{prefix}: point is singular")
        if any(grad):
            c.need(LinSubspace.from_equations([grad], X.nvars) == plane, f"{prefix}: not the tangent hyperplane")
    c.need(X.is_smooth_at(point) == doc["smooth"], f"{prefix}: smoothness flag is wrong")
    if basis is None:
        c.need(doc["verdict"], f"{prefix}: verdict should hold")
        return
    cone = doc["cone"]
    _verify_cone(cone, c, prefix + "/cone")
    c.need(HPoly.from_json(cone["polynomial"]) == r, f"{prefix}: cone test ran on another polynomial")
    inner = LinSubspace.from_span(basis)
    vertex = LinSubspace.from_json(cone["vertex"])
    c.need(vertex == pullback_subspace(LinSubspace.point(point), inner), f"{prefix}: vertex is not the point")
    c.need(cone["verdict"] == doc["verdict"], f"{prefix}: verdict mismatch")


def _verify_star_subspace(doc, X: Hypersurface, c: _Checker, prefix):
    vertex = LinSubspace.from_json(doc["vertex"])
    plane, _, basis, r = _verify_section(doc, X, c, prefix, vertex)
    if basis is None:
        return
    cone = doc["cone"]
    _verify_cone(cone, c, prefix + "/cone")
    c.need(HPoly.from_json(cone["polynomial"]) == r, f"{prefix}: cone test ran on another polynomial")
    local = pullback_subspace(vertex, LinSubspace.from_span(basis))
    c.need(LinSubspace.from_json(cone["vertex"]) == local, f"{prefix}: cone vertex is not the subspace")
    c.need(cone["verdict"] == doc["verdict"], f"{prefix}: verdict mismatch")


def _verify_star_line(doc, c: _Checker, prefix="star-line"):
    X = Hypersurface(HPoly.from_json(doc["surface"]))
    sub = LinSubspace.from_json(doc["subspace"])
    c.need(restrict_to_subspace(X.f, sub) is CONTAINS_HYPERPLANE, f"{prefix}: subspace not on the surface")
    status = doc["status"]
    if status == "inconclusive":
        return
    plane = LinSubspace.from_json(doc["plane"])
    point = ProjPoint.from_json(doc["point"])
    c.need(sub.contains_point(point), f"{prefix}: point not on the subspace")
    grad = X.gradient_at(point)
    c.need(any(grad), f"{prefix}: point is singular")
    if any(grad):
        c.need(LinSubspace.from_equations([grad], X.nvars) == plane, f"{prefix}: not the tangent hyperplane")
    if "restricted" not in doc:
        c.need(status == "failed", f"{prefix}: missing restriction")
        c.need(
            restrict_to_subspace(X.f, plane) is CONTAINS_HYPERPLANE,
            f"{prefix}: hyperplane is not a component",
        )
        return
    basis = _read_matrix(doc["basis"])
    c.need(LinSubspace.from_span(basis) == plane, f"{prefix}: basis does not span the hyperplane")
    forms = [HPoly.linear([basis[j][i] for j in range(len(basis))]) for i in range(X.nvars)]
    r = HPoly.from_json(doc["restricted"])
    c.need(X.f.compose(forms) == r, f"{prefix}: restriction mismatch")
    ell = HPoly.from_json(doc["linear_form"])
    local = pullback_subspace(sub, LinSubspace.from_span(basis))
    c.need(
        ell.degree == 1 and LinSubspace.from_equations([ell.linear_coeffs()], ell.nvars) == local,
        f"{prefix}: linear form does not cut the subspace",
    )
    m = doc["multiplicity"]
    residual = HPoly.from_json(doc["residual"])
    c.need(ell**m * residual == r, f"{prefix}: factorization identity fails")
    if status == "certified":
        scalar = ratio(doc["scalar"])
        c.need(scalar != 0 and r == ell ** doc["degree"] * scalar, f"{prefix}: r != c * l^d")
        c.need(doc["degree"] == X.d, f"{prefix}: wrong degree")
    else:
        c.need(residual.divide_exact(ell) is None, f"{prefix}: residual is still divisible")
        c.need(residual.degree > 0, f"{prefix}: failure certificate has a constant residual")


def _verify_singularity(doc, c: _Checker, prefix="singularity"):
    X = Hypersurface(HPoly.from_json(doc["surface"]))
    point = ProjPoint.from_json(doc["point"])
    T = doc["truncation"]
    c.need(X.contains(point), f"{prefix}: point not on the surface")
    if doc["kind"] == "Smooth":
        c.need(X.is_smooth_at(point), f"{prefix}: point is singular")
        return
    c.need(not X.is_smooth_at(point), f"{prefix}: point is smooth")
    germ = doc["germ"]
    M = _read_matrix(germ["transform"])
    c.need(
        ProjPoint([row[0] for row in M]) == point, f"{prefix}: transform does not move the point to (1:0:0:0)"
    )
    q = substitute_linear(X.f, M)
    series = TruncSeries(
        X.nvars - 1, T, {e[1:]: co for e, co in q.items() if sum(e[1:]) < T}
    )
    c.need(series == TruncSeries.from_json(germ["series"]), f"{prefix}: germ mismatch")
    log = log_from_json(doc["transform_log"])
    if doc["kind"] == "NotA":
        # the logged linear change must kill the quadratic part in corank variables
        s = replay(series, log)
        quad = s.homogeneous_part(2)
        diag = {e for e in quad if max(e) == 2}
        c.need(len(quad) == len(diag) == 3 - doc["corank"], f"{prefix}: quadratic rank mismatch")
        return
    split = doc["split"]
    exact = split["exact_order"]
    s = replay(series, log, exact)
    expected = TruncSeries.from_json(split["series"])
    c.need(s == expected, f"{prefix}: replay does not reproduce the split form")
    pivots, corank_vars = split["split_vars"], split["corank_vars"]
    coeffs = [ratio(x) for x in split["coeffs"]]
    quad = {}
    rest = {}
    for e, co in expected.terms().items():
        if any(e[i] for i in pivots):
            quad[e] = co
        else:
            rest[e] = co
    want = {}
    for i, co in zip(pivots, coeffs):
        e = [0] * 3
        e[i] = 2
        want[tuple(e)] = co
    c.need(quad == want and all(coeffs), f"{prefix}: split variables are not diagonal squares")
    residual = TruncSeries(3, exact, rest)
    order = series_order(residual)
    if doc["kind"] == "A":
        if doc["k"] == 1:
            c.need(len(pivots) == 3, f"{prefix}: A1 needs full rank")
        else:
            c.need(len(corank_vars) == 1 and order == doc["k"] + 1, f"{prefix}: residual order mismatch")
    elif doc["kind"] == "AkAtLeast":
        c.need(order is OVERFLOW and doc["k"] == T - 1, f"{prefix}: residual does not vanish")


def _verify_configuration(doc, c: _Checker):
    pairs = [(LinSubspace.from_json(p["subspace"]), LinSubspace.from_json(p["hyperplane"])) for p in doc["pairs"]]
    for lam, pi in pairs:
        c.need(pi.contains(lam), "configuration: subspace not in its hyperplane")
    c.need(doc["count"] == len(pairs), "configuration: count mismatch")
    case = doc["case"]
    if case == "CommonVertex":
        v = LinSubspace.from_json(doc["vertex"])
        c.need(all(lam.contains(v) for lam, _ in pairs), "configuration: vertex not common")
        c.need(v.dim == v.nvars - 4, "configuration: vertex has the wrong dimension")
    if case == "CommonHyperplane" or doc.get("hyperplane"):
        h = LinSubspace.from_json(doc["hyperplane"])
        c.need(all(h.contains(lam) for lam, _ in pairs), "configuration: hyperplane not common")
    if doc.get("bound") is not None:
        c.need(doc["count_bound_ok"] == (len(pairs) <= doc["bound"]), "configuration: bound flag wrong")


def _verify_star_sum(doc, c: _Checker):
    X = Hypersurface(HPoly.from_json(doc["surface"]))
    line = LinSubspace.from_json(doc["line"])
    ledger = doc["ledger"]
    d = X.d
    sing = singular_points_on_line(X, line)
    degrees = sum(f.degree * m for f, m in sing.factorization.factors) if sing.factorization else 0
    c.need(degrees == sing.gcd.degree, "star-sum: trace factorization incomplete")
    total = Fraction(0)
    for entry in ledger["entries"]:
        total += Fraction(entry["contribution"])
        if entry["source"] == "classified":
            c.need(Fraction(entry["k"] + 1, d) == Fraction(entry["contribution"]), "star-sum: contribution mismatch")
    c.need(str(total) == ledger["total"], "star-sum: ledger does not add up")
    c.need(ledger["holds"] == (total == d - 1 and not ledger["counterexample_candidates"]), "star-sum: verdict wrong")
    labels = {}
    for sub in doc["classifications"]:
        _verify_singularity(sub, c, "star-sum/singularity")
        labels[str(ProjPoint.from_json(sub["point"]))] = sub["label"]
    for entry in ledger["entries"]:
        if entry["source"] == "classified":
            c.need(labels.get(entry["point"]) == entry["type"], "star-sum: classification missing")


def _verify_dimension(doc, c: _Checker):
    from math import comb

    N, d, lam = doc["N"], doc["d"], doc["lambda"]
    formula = comb(N + d - 1, N) + comb(N + d - lam - 2, N - lam - 2) - 1
    oracle = len(monomials(N + 1, d - 1)) + len(monomials(N - lam - 1, d)) - 1
    c.need(doc["value"] == formula, "dimension: formula value mismatch")
    c.need(doc["oracle"] == oracle == formula, "dimension: oracle disagrees")


def _verify_inflection(doc, c: _Checker):
    curve = HPoly.from_json(doc["curve"])
    Q = ProjPoint.from_json(doc["point"])
    c.need(curve.evaluate(list(Q)) == 0, "inflection: point not on the curve")
    grad = [g.evaluate(list(Q)) if g else 0 for g in curve.gradient()]
    c.need(any(grad), "inflection: point is singular")
    line = LinSubspace.from_json(doc["line"])
    c.need(LinSubspace.from_equations([grad], 3) == line, "inflection: not the tangent line")
    A, B = line.basis
    r = curve.compose([HPoly.linear([a, b]) for a, b in zip(A, B)])
    c.need(r == HPoly.from_json(doc["restricted"]), "inflection: restriction mismatch")
    if doc["verdict"]:
        ell = HPoly.from_json(doc["linear_form"])
        coords = line.coordinates_of(list(Q))
        c.need(ell.evaluate(coords) == 0, "inflection: linear form does not vanish at the point")
        c.need(r == ell ** curve.degree * ratio(doc["scalar"]), "inflection: not a full-contact power")


_SUB_VERIFIERS = {
    "cone": _verify_cone,
    "star-point": _verify_star_point,
    "star-plane": _verify_star_point,
    "star-subspace": _verify_star_point,
    "star-line": _verify_star_line,
    "singularity": _verify_singularity,
    "configuration": _verify_configuration,
    "star-sum": _verify_star_sum,
    "dimension": _verify_dimension,
    "inflection": _verify_inflection,
}


def _verify_into(doc, c: _Checker):
    kind = doc.get("type")
    if kind in _SUB_VERIFIERS:
        _SUB_VERIFIERS[kind](doc, c)
    elif kind in ("family", "line-scan", "bundle"):
        surface = doc.get("surface")
        for sub in doc.get("certificates", []):
            if surface is not None and "surface" in sub:
                c.need(sub["surface"] == surface, f"{kind}: nested certificate is about another surface")
            _verify_into(sub, c)
    else:
        c.need(False, f"unknown certificate type {kind!r}")


def verify(doc) -> Verification:
    """Replay a certificate document; ``problems`` lists every failed check."""
    c = _Checker()
    try:
        _verify_into(doc, c)
    except (KeyError, TypeError, ValueError) as exc:
        c.need(False, f"malformed certificate: {exc}")
    return Verification(not c.problems, tuple(c.problems))
