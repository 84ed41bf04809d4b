"""Constructors for the hypersurface families with star points.

Every constructor returns a :class:`FamilyMember` holding the
hypersurface and the outcome of its self-checks; a member whose
self-check fails is never returned.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .algebra.linalg import inverse, rank
from .algebra.poly import HPoly, monomials
from .algebra.ratio import ONE, ZERO, ratio, ratio_str
from .algebra.univariate import binary_to_upoly, factor_binary, squarefree_decomposition
from .geometry import (
    Hypersurface,
    binary_gcd,
    LinSubspace,
    ProjPoint,
    pullback_subspace,
    restrict_to_hyperplane,
    singular_points_on_line,
)
from .markers import CONTAINS_HYPERPLANE
from .singularities import classify_Ak, default_truncation
from .starpoints import (
    analyze_star_configuration,
    is_cone,
    is_star_point,
    is_star_point_with_plane,
    star_line_certificate,
)


class FamilyError(ValueError):
    """Raised for constraint violations and failed self-checks."""


@dataclass(frozen=True)
class FamilyMember:
    """A constructed hypersurface with its parameters and self-check results.

    ``checks`` maps a check name to a JSON-ready record that always has an
    ``"ok"`` entry.  ``star_pairs`` lists ``(subspace, hyperplane)`` pairs
    known to consist of star points.
    """

    kind: str
    surface: Hypersurface
    params: dict
    checks: dict
    star_pairs: tuple = ()
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.get("ok", False) for c in self.checks.values())

    def to_json(self) -> dict:
        doc = {
            "kind": self.kind,
            "surface": self.surface.f.to_json(),
            "surface_text": str(self.surface.f),
            "params": self.params,
            "checks": self.checks,
            "star_pairs": [
                {"subspace": lam.to_json(), "hyperplane": pi.to_json()} for lam, pi in self.star_pairs
            ],
        }
        if self.seed is not None:
            doc["seed"] = self.seed
        return doc


def _require(ok: bool, message: str):
    if not ok:
        raise FamilyError(message)


def embed(p: HPoly, nvars: int) -> HPoly:
    """Read ``p`` as a form in ``nvars`` variables with the same indices."""
    if p.nvars == nvars:
        return p
    if p.nvars > nvars:
        used = p.variables_used()
        _require(all(i < nvars for i in used), f"form uses variables beyond X{nvars - 1}")
        return HPoly(nvars, {e[:nvars]: c for e, c in p.items()})
    pad = (0,) * (nvars - p.nvars)
    if not p:
        return HPoly.zero(nvars)
    return HPoly(nvars, {e + pad: c for e, c in p.items()})


def _as_form(p, nvars: int) -> HPoly:
    if isinstance(p, HPoly):
        return embed(p, nvars)
    return HPoly.constant(p, nvars)


def random_form(rng: random.Random, nvars: int, degree: int, variables=None, bound: int = 3) -> HPoly:
    """Form with small random integer coefficients in the chosen variables."""
    variables = list(range(nvars)) if variables is None else list(variables)
    terms = {}
    for exps in monomials(len(variables), degree):
        c = rng.randint(-bound, bound)
        if c:
            full = [0] * nvars
            for v, e in zip(variables, exps):
                full[v] = e
            terms[tuple(full)] = c
    return HPoly(nvars, terms)


def _rng(seed):
    return random.Random(0 if seed is None else seed)


def _check_uses_only(p: HPoly, allowed, name: str):
    bad = sorted(i for i in p.variables_used() if i not in allowed)
    _require(not bad, f"{name} involves forbidden variables {', '.join(f'X{i}' for i in bad)}")


def _check_degree(p: HPoly, degree: int, name: str, allow_zero: bool = False):
    if not p:
        _require(allow_zero, f"{name} must be nonzero")
        return
    _require(p.degree == degree, f"{name} must have degree {degree}, got {p.degree}")


# star subspaces in general dimension


def star_family(N: int, d: int, lam: int, h: HPoly, g: HPoly) -> FamilyMember:
    """``X_{lam+1} h + g(X_{lam+2}, ..., X_N)``: every smooth point of
    ``{X_{lam+1} = ... = X_N = 0}`` is a star point."""
    _require(d >= 2, "degree must be at least 2")
    _require(0 <= lam <= N - 2, "need 0 <= lambda <= N-2")
    n = N + 1
    h, g = _as_form(h, n), _as_form(g, n)
    _check_degree(h, d - 1, "h", allow_zero=True)
    _check_degree(g, d, "g", allow_zero=True)
    _check_uses_only(g, range(lam + 2, n), "g")
    f = HPoly.variable(lam + 1, n) * h + g if h else g
    _require(bool(f), "the equation vanishes identically")
    X = Hypersurface(f)
    plane = LinSubspace.from_equations([HPoly.variable(lam + 1, n)], n)
    vertex = LinSubspace.from_span([[ONE if i == j else ZERO for i in range(n)] for j in range(lam + 1)], n)
    restricted = restrict_to_hyperplane(X, plane)
    section = None
    if restricted is CONTAINS_HYPERPLANE:
        ok, witness = True, "hyperplane is a component"
    else:
        r, basis = restricted
        inner = LinSubspace.from_span([list(v) for v in basis])
        cert = is_cone(r, pullback_subspace(vertex, inner))
        ok, witness = cert.verdict, str(cert.transformed)
        section = (basis, r, cert)
    _require(ok, "self-check failed: hyperplane section is not a cone over the vertex")
    params = {"N": N, "d": d, "lambda": lam, "h": str(h), "g": str(g)}
    return FamilyMember(
        "star",
        X,
        params,
        {"section_is_cone": {"ok": ok, "section": witness}},
        ((vertex, plane),),
        extra={"section": section},
    )


def family_dimension(N: int, d: int, lam: int) -> int:
    """Dimension of the family of degree-``d`` hypersurfaces in ``P^N`` with a
    ``lam``-dimensional subspace of star points."""
    _require(N >= 2, "need N >= 2")
    _require(d >= 3, "need d >= 3")
    _require(0 <= lam <= N - 2, "lambda out of range: need 0 <= lambda <= N-2")
    return comb(N + d - 1, N) + comb(N + d - lam - 2, N - lam - 2) - 1


def family_dimension_oracle(N: int, d: int, lam: int) -> int:
    """Monomial count: coefficients of ``h`` plus those of ``g``, minus scaling."""
    return len(monomials(N + 1, d - 1)) + len(monomials(N - lam - 1, d)) - 1


# the extremal example


def extremal_family(forms, alpha, N: int | None = None, height_bound: int = 32) -> FamilyMember:
    """``prod l_i + alpha X_N^d`` with the ``d`` star subspaces ``{X_N = l_i = 0}``.

    Without ``N`` the variable ``X_N`` is the one after the last variable
    the forms mention.
    """
    forms = list(forms)
    _require(len(forms) >= 2, "need at least two linear forms")
    n = max(max(f.variables_used(), default=0) for f in forms) + 2 if N is None else N + 1
    forms = [embed(f, n) for f in forms]
    N = n - 1
    _require(N >= 2, "need N >= 2")
    for f in forms:
        _require(f.degree == 1, "forms must be linear")
    alpha = ratio(alpha)
    d = len(forms)
    xn = [ZERO] * n
    xn[N] = ONE
    vecs = [f.linear_coeffs() for f in forms]
    for i, v in enumerate(vecs):
        _require(rank([v, xn]) == 2, f"form {i} is dependent on X{N}")
        for w in vecs[:i]:
            _require(rank([v, w, xn]) == 3, "forms are dependent modulo X_N")
    product = forms[0]
    for f in forms[1:]:
        product = product * f
    XN = HPoly.variable(N, n)
    f = product + XN**d * alpha if alpha else product
    X = Hypersurface(f)
    hyper = LinSubspace.from_equations([xn], n)
    pairs = tuple(
        (LinSubspace.from_equations([xn, v], n), LinSubspace.from_equations([v], n)) for v in vecs
    )
    params = {"forms": [str(g) for g in forms], "alpha": ratio_str(alpha), "N": N}
    if not alpha:
        warnings.warn("alpha = 0 gives a degenerate member (product of hyperplanes)", stacklevel=2)
        return FamilyMember("extremal", X, params, {"degenerate": {"ok": True, "alpha": "0"}}, pairs)
    checks = {}
    line_certs = []
    for i, (lam, pi) in enumerate(pairs):
        cert = star_line_certificate(X, lam, height_bound)
        line_certs.append(cert)
        _require(bool(cert), f"self-check failed on subspace {i}: {cert.reason}")
        _require(cert.plane == pi, f"self-check failed: unexpected tangent hyperplane on subspace {i}")
        checks[f"star_subspace_{i}"] = {
            "ok": True,
            "subspace": str(lam),
            "hyperplane": str(pi),
            "scalar": ratio_str(cert.scalar),
        }
    report = analyze_star_configuration(pairs, d)
    # concurrent forms also share a vertex; the hyperplane statement still holds
    in_hyperplane = report.hyperplane is not None and report.hyperplane == hyper
    checks["configuration"] = {
        "ok": in_hyperplane and report.count <= d,
        "case": report.case,
        "count": report.count,
        "bound": report.bound,
        "hyperplane": str(report.hyperplane) if report.hyperplane else None,
    }
    _require(checks["configuration"]["ok"], "self-check failed: star subspaces do not span {X_N = 0}")
    extra = {"hyperplane": hyper, "report": report, "line_certificates": line_certs}
    return FamilyMember("extremal", X, params, checks, pairs, extra=extra)


def extremal_singularities(member: FamilyMember, T: int | None = None) -> dict:
    """Singular points of an extremal surface and their types.

    When no form involves ``X_N`` the partial derivative in ``X_N`` is
    ``d alpha X_N^(d-1)``, so every singular point lies in ``{X_N = 0}``,
    whose trace on the surface is the union of the star lines.  The
    singular points are therefore found line by line.
    """
    X = member.surface
    _require(X.N == 3, "singularity types are computed for surfaces only")
    N = X.N
    _require(bool(member.star_pairs), "no star lines recorded")
    _require(
        all(N not in HPoly.linear(pi.equations[0]).variables_used() for _, pi in member.star_pairs),
        "forms must not involve X_N",
    )
    points = {}
    irrational = 0
    for lam, _ in member.star_pairs:
        sing = singular_points_on_line(X, lam)
        if sing.factorization is not None:
            irrational += sum(f.degree for f, _ in sing.factorization.factors if f.degree > 1)
        for pt, _m in sing.points:
            points.setdefault(pt, None)
    types = {}
    for pt in points:
        types[pt] = classify_Ak(X, pt, T)
    return {"points": types, "non_rational": irrational}


# cones over plane curves


def cone_over_curve(curve: HPoly, plane: LinSubspace | None = None, vertex: LinSubspace | None = None) -> FamilyMember:
    """Cone with vertex ``vertex`` over a plane curve drawn in ``plane``.

    The basis of ``plane`` supplies the curve's coordinates.  Defaults:
    the plane ``{X3 = 0}`` of ``P^3`` and the vertex ``(0:0:0:1)``.
    """
    _require(curve.nvars == 3, "need a plane curve in three variables")
    if plane is None and vertex is None:
        plane = LinSubspace.from_span([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
        vertex = LinSubspace.point([0, 0, 0, 1])
    _require(plane is not None and vertex is not None, "give both the plane and the vertex")
    n = plane.nvars
    _require(plane.dim == 2, "the curve's plane must be two-dimensional")
    _require(vertex.nvars == n and vertex.dim == n - 4, "vertex must have dimension N-3")
    _require(plane.intersect(vertex) is None, "vertex meets the plane of the curve")
    columns = [list(v) for v in plane.basis] + [list(v) for v in vertex.basis]
    B = [[columns[j][i] for j in range(n)] for i in range(n)]
    Binv = inverse(B)
    forms = [HPoly.linear(Binv[i]) for i in range(3)]
    f = curve.compose(forms)
    X = Hypersurface(f)
    cert = is_cone(f, vertex)
    _require(cert.verdict, "self-check failed: not a cone over the vertex")
    params = {"curve": str(curve), "plane": str(plane), "vertex": str(vertex)}
    return FamilyMember(
        "cone", X, params, {"is_cone": {"ok": True, "transformed": str(cert.transformed)}},
        extra={"plane": plane, "vertex": vertex, "basis_change": B},
    )


def cone_generator(member: FamilyMember, Q) -> LinSubspace:
    """The subspace joining a curve point ``Q`` (curve coordinates) to the vertex."""
    plane, vertex = member.extra["plane"], member.extra["vertex"]
    Q = list(Q)
    p = [sum((q * v[i] for q, v in zip(Q, plane.basis)), ZERO) for i in range(plane.nvars)]
    return LinSubspace.point(p).join(vertex)


# surfaces with a line of star points


def _line_Ak_equation(d, L, L2, L3):
    n = 4
    X2, X3 = HPoly.variable(2, n), HPoly.variable(3, n)
    h = L
    if L2:
        h = h + X2 * L2
    if L3:
        h = h + X3 * L3
    return X2 * h + X3**d


def _on_line(p: HPoly) -> HPoly:
    """``p(X0, X1, 0, 0)`` as a binary form."""
    return HPoly(2, {e[:2]: c for e, c in p.items() if not e[2] and not e[3]})


def _line_Ak_inputs(d, L, L2, L3, seed):
    _require(d >= 3, "need d >= 3")
    rng = _rng(seed)
    L = _as_form(L, 4)
    _check_degree(L, d - 1, "L")
    _check_uses_only(L, (0, 1), "L")
    if L2 is None:
        L2 = random_form(rng, 4, d - 2, (0, 1, 2))
    if L3 is None:
        # a general L3 does not vanish at the roots of L on the line;
        # where it does the point degenerates beyond type A
        binary_L = _on_line(L)
        for _ in range(100):
            L3 = random_form(rng, 4, d - 2)
            trace = _on_line(L3)
            if trace and binary_gcd([trace, binary_L]).degree == 0:
                break
        else:
            raise FamilyError("could not draw a general L3")
    L2, L3 = _as_form(L2, 4), _as_form(L3, 4)
    _check_degree(L2, d - 2, "L2", allow_zero=True)
    _check_degree(L3, d - 2, "L3", allow_zero=True)
    _check_uses_only(L2, (0, 1, 2), "L2")
    return L, L2, L3


STAR_LINE = LinSubspace.from_equations([[0, 0, 1, 0], [0, 0, 0, 1]], 4)
STAR_PLANE = LinSubspace.from_equations([[0, 0, 1, 0]], 4)


def line_Ak_surface(d: int, L, L2=None, L3=None, seed: int | None = None, height_bound: int = 32) -> FamilyMember:
    """``X2 (X3 L3 + X2 L2 + L(X0, X1)) + X3^d``.

    Missing ``L2`` or ``L3`` are drawn from ``seed``; the seed is recorded.
    """
    L, L2, L3 = _line_Ak_inputs(d, L, L2, L3, seed)
    X = Hypersurface(_line_Ak_equation(d, L, L2, L3))
    cert = star_line_certificate(X, STAR_LINE, height_bound)
    _require(bool(cert), f"self-check failed: {cert.reason or cert.status}")
    _require(cert.plane == STAR_PLANE, "self-check failed: tangent plane is not {X2 = 0}")
    params = {"d": d, "L": str(L), "L2": str(L2), "L3": str(L3)}
    checks = {
        "star_line": {
            "ok": True,
            "hyperplane": str(cert.plane),
            "point": str(cert.point),
            "scalar": ratio_str(cert.scalar),
        }
    }
    return FamilyMember(
        "line-ak", X, params, checks, ((STAR_LINE, STAR_PLANE),), seed=seed,
        extra={"L": L, "L2": L2, "L3": L3, "certificate": cert},
    )


def lemma_surface(d: int, alpha: int, L=None, T: int | None = None) -> FamilyMember:
    """``X2 (X3 X0^(d-2) + X1^alpha L(X0, X1)) + X3^d``, an ``A_(d alpha - 1)`` point at ``(1:0:0:0)``."""
    _require(d >= 3, "need d >= 3")
    _require(1 <= alpha <= d - 1, "need 1 <= alpha <= d-1")
    L = HPoly.constant(1, 4) if L is None else _as_form(L, 4)
    _check_degree(L, d - 1 - alpha, "L")
    _check_uses_only(L, (0, 1), "L")
    _require(bool(L.evaluate([1, 0, 0, 0])), "L(1,0) must be nonzero")
    X0, X1, X2, X3 = (HPoly.variable(i, 4) for i in range(4))
    f = X2 * (X3 * X0 ** (d - 2) + X1**alpha * L) + X3**d
    X = Hypersurface(f)
    T = max(default_truncation(d), d * alpha + 2) if T is None else T
    report = classify_Ak(X, ProjPoint([1, 0, 0, 0]), T)
    expected = d * alpha - 1
    _require(report.is_A(expected), f"self-check failed: expected A{expected}, got {report.label}")
    params = {"d": d, "alpha": alpha, "L": str(L)}
    checks = {"type_at_origin": {"ok": True, "point": "(1:0:0:0)", "type": report.label, "truncation": T}}
    return FamilyMember("lemma", X, params, checks, ((STAR_LINE, STAR_PLANE),), extra={"report": report})


def _rational_roots(L: HPoly):
    """Factorization of a binary form in ``X0, X1``; its ``roots`` are the rational ones."""
    binary = HPoly(2, {e[:2]: c for e, c in L.items()})
    fac = factor_binary(binary)
    return fac


def deformation_to_Ad2(d: int, L, L2=None, L3=None, P=None, t=0, seed: int | None = None, T: int | None = None) -> FamilyMember:
    """``X3^(d-1) (X3 + t g) + X2 (X3 L3 + X2 L2 + L)`` with ``g = a1 X0 - a0 X1``.

    At ``t = 0`` this is the line surface; for ``t != 0`` each simple root
    of ``L`` becomes an ``A_(d-2)`` point and ``P = (a0:a1:0:0)`` stays a
    smooth star point.
    """
    L, L2, L3 = _line_Ak_inputs(d, L, L2, L3, seed)
    t = ratio(t)
    binary = binary_to_upoly(HPoly(2, {e[:2]: c for e, c in L.items()}))
    lead_gap = L.degree - binary.degree
    parts = squarefree_decomposition(binary) if binary.degree > 0 else []
    _require(lead_gap <= 1 and all(m == 1 for _, m in parts), "L must have distinct roots")
    if P is None:
        P = next(
            ProjPoint([a, 1, 0, 0]) for a in range(0, 64) if L.evaluate([a, 1, 0, 0])
        )
    P = P if isinstance(P, ProjPoint) else ProjPoint(P)
    _require(P[2] == 0 and P[3] == 0, "P must lie on the line X2 = X3 = 0")
    a0, a1 = P[0], P[1]
    _require(bool(L.evaluate(list(P))), "L must not vanish at P")
    X0, X1, X3 = HPoly.variable(0, 4), HPoly.variable(1, 4), HPoly.variable(3, 4)
    g = X0 * a1 - X1 * a0
    base = _line_Ak_equation(d, L, L2, L3)
    f = base + X3 ** (d - 1) * g * t if t else base
    X = Hypersurface(f)
    _require(X.is_smooth_at(P), "self-check failed: P is singular")
    star = is_star_point(X, P)
    _require(star.verdict, "self-check failed: P is not a star point")
    expected = d - 1 if not t else d - 2
    fac = _rational_roots(L)
    types = {}
    reports = []
    for (a, b), m in fac.roots:
        pt = ProjPoint([a, b, 0, 0])
        report = classify_Ak(X, pt, T)
        _require(report.is_A(expected), f"self-check failed at {pt}: expected A{expected}, got {report.label}")
        types[str(pt)] = report.label
        reports.append(report)
    params = {"d": d, "L": str(L), "L2": str(L2), "L3": str(L3), "P": str(P), "t": ratio_str(t)}
    checks = {
        "star_point": {"ok": True, "point": str(P), "hyperplane": str(star.plane)},
        "root_types": {"ok": True, "expected": f"A{expected}", "types": types},
    }
    extra = {"P": P, "types": types, "star": star, "reports": reports}
    return FamilyMember("deform-ad2", X, params, checks, seed=seed, extra=extra)


def proper_star_deformation(h, g, H=None, G=None, t=0, N: int = 3, seed: int | None = None) -> FamilyMember:
    """``X1 (h + t H) + (g + t G)`` keeping ``P = (1:0:...:0)`` a star point via ``{X1 = 0}``."""
    n = N + 1
    h, g = _as_form(h, n), _as_form(g, n)
    _require(bool(g) or bool(h), "X(0) vanishes identically")
    d = g.degree if g else h.degree + 1
    rng = _rng(seed)
    if H is None:
        H = random_form(rng, n, d - 1)
    if G is None:
        G = random_form(rng, n, d, range(2, n))
    H, G = _as_form(H, n), _as_form(G, n)
    _check_degree(h, d - 1, "h", allow_zero=True)
    _check_degree(g, d, "g", allow_zero=True)
    _check_degree(H, d - 1, "H", allow_zero=True)
    _check_degree(G, d, "G", allow_zero=True)
    _check_uses_only(g, range(2, n), "g")
    _check_uses_only(G, range(2, n), "G")
    t = ratio(t)
    X1 = HPoly.variable(1, n)
    hh = h + H * t if t else h
    gg = g + G * t if t else g
    f = X1 * hh + gg if hh else gg
    _require(bool(f), "X(t) vanishes identically")
    X = Hypersurface(f)
    P = ProjPoint([1] + [0] * N)
    plane = LinSubspace.from_equations([X1], n)
    _require(X.contains(P), "self-check failed: P is not on X(t)")
    result = is_star_point_with_plane(X, P, plane)
    _require(result.verdict, "self-check failed: section by X1 = 0 is not a cone with vertex P")
    params = {"h": str(h), "g": str(g), "H": str(H), "G": str(G), "t": ratio_str(t), "N": N}
    checks = {
        "star_point": {"ok": True, "point": str(P), "hyperplane": str(plane), "smooth_at_P": result.smooth},
    }
    extra = {"P": P, "smooth": result.smooth, "star": result}
    return FamilyMember("deform-proper", X, params, checks, seed=seed, extra=extra)


# the multiplicity ledger


@dataclass(frozen=True)
class StarSumLedger:
    """Terms ``(k(P) + 1) / d`` summed over the singular points on a star line.

    ``entries`` holds one record per irreducible factor of the singular
    trace; ``source`` is ``"classified"`` for rational points and
    ``"by-multiplicity"`` for conjugate points of a nonlinear factor.
    """

    holds: bool
    total: Fraction
    target: int
    entries: tuple
    counterexample_candidates: tuple
    reports: tuple = ()

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "total": str(self.total),
            "target": self.target,
            "entries": list(self.entries),
            "counterexample_candidates": list(self.counterexample_candidates),
        }


def star_sum_check(X: Hypersurface, line: LinSubspace | None = None, T: int | None = None) -> StarSumLedger:
    line = STAR_LINE if line is None else line
    d = X.d
    sing = singular_points_on_line(X, line)
    entries = []
    total = Fraction(0)
    bad = []
    reports = []
    if sing.factorization is not None:
        A, B = sing.parametrization
        for f, alpha in sing.factorization.factors:
            expected = d * alpha - 1
            if f.degree == 1:
                a, b = f.linear_coeffs()
                pt = ProjPoint([-b * x + a * y for x, y in zip(A, B)])
                Tp = max(default_truncation(d), d * alpha + 2) if T is None else T
                report = classify_Ak(X, pt, Tp)
                reports.append(report)
                k = report.k if report.kind == "A" else None
                if k != expected:
                    bad.append({"point": str(pt), "type": report.label, "expected": f"A{expected}"})
                contribution = Fraction((k if k is not None else expected) + 1, d)
                entries.append(
                    {
                        "factor": str(f),
                        "multiplicity": alpha,
                        "point": str(pt),
                        "type": report.label,
                        "k": k,
                        "source": "classified",
                        "contribution": str(contribution),
                    }
                )
            else:
                contribution = Fraction(f.degree * (expected + 1), d)
                entries.append(
                    {
                        "factor": str(f),
                        "multiplicity": alpha,
                        "points": f.degree,
                        "k": expected,
                        "source": "by-multiplicity",
                        "contribution": str(contribution),
                    }
                )
            total += contribution
    holds = total == d - 1 and not bad
    return StarSumLedger(holds, total, d - 1, tuple(entries), tuple(bad), tuple(reports))
