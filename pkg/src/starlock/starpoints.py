"""Cone tests, star points, star-line certificates, total inflections and
configurations of star subspaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Sequence

from .algebra.poly import HPoly, substitute_linear
from .algebra.ratio import ONE, ZERO, Ratio
from .algebra.univariate import FieldElement, factor_binary
from .geometry import (
    GeometryError,
    Hypersurface,
    LinSubspace,
    ProjPoint,
    pullback_subspace,
    rational_points,
    restrict_to_hyperplane,
    restrict_to_line,
    restrict_to_subspace,
    tangent_hyperplane,
    transform_to_standard,
)
from .markers import CONTAINS_HYPERPLANE, SINGULAR

DEFAULT_HEIGHT_BOUND = 32


@dataclass(frozen=True)
class ConeCertificate:
    """Outcome of the coordinate cone test.

    ``transformed`` is ``polynomial`` in coordinates where the vertex is
    spanned by the first ``vertex.dim + 1`` unit vectors.  For a cone the
    witness is ``transformed`` itself; otherwise ``witness`` is a
    ``(variable, exps, coeff)`` term that still sees a vertex variable.
    """

    verdict: bool
    polynomial: HPoly
    vertex: LinSubspace
    transform: tuple
    transformed: HPoly
    witness: tuple | None

    def __bool__(self):
        return self.verdict


def is_cone(p: HPoly, vertex: LinSubspace) -> ConeCertificate:
    if vertex.nvars != p.nvars:
        raise GeometryError("vertex lives in a different space than the polynomial")
    if p and restrict_to_subspace(p, vertex) is not CONTAINS_HYPERPLANE:
        raise GeometryError("vertex not on hypersurface")
    M = transform_to_standard(vertex)
    q = substitute_linear(p, M) if p else p
    k = vertex.dim
    witness = None
    for exps, c in q.items():
        hit = next((i for i in range(k + 1) if exps[i]), None)
        if hit is not None:
            witness = (hit, exps, c)
            break
    return ConeCertificate(witness is None, p, vertex, tuple(map(tuple, M)), q, witness)


def cone_oracle(p: HPoly, vertex: LinSubspace) -> bool:
    """Line-containment form of the cone property, as one polynomial identity.

    With a symbolic point ``P = sum c_i b_i`` of the vertex and formal ``X``,
    ``p(s P + t X) == t^d p(X)`` holds exactly when every line from the
    vertex to a point of the scheme ``p = 0`` stays inside it.  No
    coordinate change is involved.
    """
    n = p.nvars
    if not p:
        return True
    k1 = len(vertex.basis)
    big = n + k1 + 2
    s_idx, t_idx = n + k1, n + k1 + 1

    def var(i):
        return HPoly.variable(i, big)

    s, t = var(s_idx), var(t_idx)
    coords = []
    for j in range(n):
        generic = HPoly.zero(big)
        for i, b in enumerate(vertex.basis):
            if b[j]:
                generic = generic + var(n + i) * b[j]
        coords.append(s * generic + t * var(j) if generic else t * var(j))
    lhs = p.compose(coords)
    rhs = t ** p.degree * p.compose([var(j) for j in range(n)])
    return lhs == rhs


@dataclass(frozen=True)
class StarPointResult:
    """Verdict of a star-point test at ``point`` with the hyperplane used."""

    verdict: bool
    point: ProjPoint
    plane: LinSubspace
    basis: tuple | None
    restricted: HPoly | None
    cone: ConeCertificate | None
    smooth: bool

    def __bool__(self):
        return self.verdict


def _section_cone(X: Hypersurface, plane: LinSubspace, vertex: LinSubspace):
    restricted = restrict_to_hyperplane(X, plane)
    if restricted is CONTAINS_HYPERPLANE:
        return True, None, HPoly.zero(X.N), None
    r, basis = restricted
    inner = LinSubspace.from_span([list(v) for v in basis])
    local_vertex = pullback_subspace(vertex, inner)
    cert = is_cone(r, local_vertex)
    return cert.verdict, basis, r, cert


def is_star_point(X: Hypersurface, P) -> StarPointResult:
    P = P if isinstance(P, ProjPoint) else ProjPoint(P)
    plane = tangent_hyperplane(X, P)
    if plane is SINGULAR:
        raise GeometryError("point is singular: use generalized test is_star_point_with_plane")
    verdict, basis, r, cert = _section_cone(X, plane, LinSubspace.point(P))
    return StarPointResult(verdict, P, plane, basis, r, cert, True)


def is_star_point_with_plane(X: Hypersurface, P, plane: LinSubspace) -> StarPointResult:
    """Star test at a possibly singular point against a caller-supplied hyperplane."""
    P = P if isinstance(P, ProjPoint) else ProjPoint(P)
    if plane.nvars != X.nvars or plane.dim != X.N - 1:
        raise GeometryError("not a hyperplane")
    if not plane.contains_point(P):
        raise GeometryError("point not in the hyperplane")
    if not X.contains(P):
        raise GeometryError("point not on hypersurface")
    verdict, basis, r, cert = _section_cone(X, plane, LinSubspace.point(P))
    return StarPointResult(verdict, P, plane, basis, r, cert, X.is_smooth_at(P))


def find_star_plane(X: Hypersurface, P, candidates: Sequence[LinSubspace]):
    """First candidate hyperplane through ``P`` whose section is a cone with vertex ``P``."""
    for plane in candidates:
        if plane.contains_point(P):
            result = is_star_point_with_plane(X, P, plane)
            if result:
                return result
    return None


# star subspaces


@dataclass(frozen=True)
class StarLineCertificate:
    """Certificate that ``plane . X = d * subspace`` as a divisor on ``plane``.

    ``status`` is ``"certified"``, ``"failed"`` or ``"inconclusive"``.  On
    success ``restricted == scalar * linear_form ** degree`` exactly, with
    ``linear_form`` cutting the subspace inside ``plane`` (coordinates of
    ``basis``).  On failure ``multiplicity`` and ``residual`` record
    ``restricted = linear_form**multiplicity * residual``.
    """

    status: str
    subspace: LinSubspace
    plane: LinSubspace | None = None
    point: ProjPoint | None = None
    basis: tuple | None = None
    restricted: HPoly | None = None
    linear_form: HPoly | None = None
    scalar: Ratio | None = None
    degree: int | None = None
    multiplicity: int | None = None
    residual: HPoly | None = None
    reason: str = ""

    def __bool__(self):
        return self.status == "certified"


def _contains_in_singular_locus(X: Hypersurface, sub: LinSubspace) -> bool:
    return all(
        (not g) or restrict_to_subspace(g, sub) is CONTAINS_HYPERPLANE for g in X.partials()
    )


def smooth_point_on(X: Hypersurface, sub: LinSubspace, height_bound: int = DEFAULT_HEIGHT_BOUND):
    for pt in rational_points(sub, height_bound):
        if X.is_smooth_at(pt):
            return pt
    return None


def star_line_certificate(
    X: Hypersurface, sub: LinSubspace, height_bound: int = DEFAULT_HEIGHT_BOUND
) -> StarLineCertificate:
    if sub.nvars != X.nvars:
        raise GeometryError("subspace lives in a different ambient space")
    if sub.dim != X.N - 2:
        raise GeometryError(f"need a subspace of dimension {X.N - 2}")
    if restrict_to_subspace(X.f, sub) is not CONTAINS_HYPERPLANE:
        raise GeometryError("line not on hypersurface")
    if _contains_in_singular_locus(X, sub):
        raise GeometryError("subspace lies in the singular locus")
    P = smooth_point_on(X, sub, height_bound)
    if P is None:
        return StarLineCertificate(
            "inconclusive", sub, reason=f"no smooth rational point up to height {height_bound}"
        )
    plane = tangent_hyperplane(X, P)
    restricted = restrict_to_hyperplane(X, plane)
    if restricted is CONTAINS_HYPERPLANE:
        return StarLineCertificate(
            "failed", sub, plane, P, reason="hypersurface contains the tangent hyperplane"
        )
    r, basis = restricted
    inner = LinSubspace.from_span([list(v) for v in basis])
    local = pullback_subspace(sub, inner)
    (eq,) = local.equations
    ell = HPoly.linear(eq)
    d = X.d
    target = ell**d
    lead_exps, lead_c = target.items()[0]
    c = r.coeff(lead_exps) / lead_c
    if c and r == target * c:
        return StarLineCertificate("certified", sub, plane, P, basis, r, ell, c, d, d, HPoly.constant(c, r.nvars))
    m, rest = 0, r
    while True:
        q = rest.divide_exact(ell)
        if q is None:
            break
        m, rest = m + 1, q
    return StarLineCertificate(
        "failed",
        sub,
        plane,
        P,
        basis,
        r,
        ell,
        None,
        d,
        m,
        rest,
        reason=f"tangent section is {m} times the subspace plus a residual of degree {rest.degree}",
    )


def generic_point_is_star(X: Hypersurface, sub: LinSubspace) -> bool:
    """Star property at the symbolic generic point of ``sub``.

    Checks, as polynomial identities in the parameters of ``sub``, that the
    gradient along ``sub`` is a nonzero multiple of one fixed normal vector
    and that the section by that hyperplane is a cone with vertex ``sub``.
    """
    n = X.nvars
    k1 = len(sub.basis)
    forms = [HPoly.linear([sub.basis[j][i] for j in range(k1)]) for i in range(n)]
    grads = [g.compose(forms) if g else HPoly.zero(k1) for g in X.partials()]
    ref = next((i for i, g in enumerate(grads) if g), None)
    if ref is None:
        return False
    exps, cref = grads[ref].items()[0]
    normal = [g.coeff(exps) / cref for g in grads]
    if any(g != grads[ref] * nv for g, nv in zip(grads, normal)):
        return False
    plane = LinSubspace.from_equations([normal], n)
    if not plane.contains(sub):
        return False
    restricted = restrict_to_hyperplane(X, plane)
    if restricted is CONTAINS_HYPERPLANE:
        return True
    r, basis = restricted
    inner = LinSubspace.from_span([list(v) for v in basis])
    return cone_oracle(r, pullback_subspace(sub, inner))


# plane curves


def _tangent_line_section(curve: HPoly, Q):
    if curve.nvars != 3:
        raise GeometryError("need a plane curve in three variables")
    X = Hypersurface(curve)
    line = tangent_hyperplane(X, Q)
    if line is SINGULAR:
        raise GeometryError("point is singular on the curve")
    r = restrict_to_line(curve, line)
    coords = line.coordinates_of(list(Q))
    ell = HPoly.linear([coords[1], -coords[0]])
    return r, ell


def contact_order(curve: HPoly, Q) -> int:
    """Intersection multiplicity of the curve with its tangent line at ``Q``."""
    r, ell = _tangent_line_section(curve, Q)
    if not r:
        return curve.degree
    m = 0
    while True:
        q = r.divide_exact(ell)
        if q is None:
            return m
        m, r = m + 1, q


def is_total_inflection(curve: HPoly, Q) -> bool:
    """Whether the tangent line at the smooth point ``Q`` meets the curve only at ``Q``.

    A tangent line lying on the curve is not counted as an inflection.
    """
    r, ell = _tangent_line_section(curve, Q)
    if not r:
        return False
    target = ell**curve.degree
    exps, lead = target.items()[0]
    c = r.coeff(exps) / lead
    return bool(c) and r == target * c


def _cross(u, v):
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def _partials_of_order(poly: HPoly, k: int):
    """``{beta: d^beta poly}`` for all multi-indices of size ``k``."""
    out = {}
    for beta in itertools.product(range(k + 1), repeat=poly.nvars):
        if sum(beta) != k:
            continue
        g = poly
        for i, b in enumerate(beta):
            for _ in range(b):
                g = g.derivative(i)
        out[beta] = g
    return out


def _total_inflection_at_generic_root(curve: HPoly, A, B, factor: HPoly) -> bool:
    """Total-inflection test at a root ``(theta:1)`` of an irreducible binary factor,
    computed in ``Q(theta)``.  The point is ``theta*A + B``."""
    from .algebra.univariate import binary_to_upoly

    modulus = binary_to_upoly(factor).monic()
    theta = FieldElement.generator(modulus)
    Q = [theta * a + b for a, b in zip(A, B)]
    if curve.evaluate(Q):
        return False
    grad = [g.evaluate(Q) if g else FieldElement(ZERO, modulus) for g in curve.gradient()]
    if not any(grad):
        return False
    R = _cross(grad, Q)
    if not any(_cross(R, Q)):
        return False
    d = curve.degree
    for k in range(1, d):
        total = FieldElement(ZERO, modulus)
        for beta, g in _partials_of_order(curve, k).items():
            if not g:
                continue
            term = g.evaluate(Q)
            for r, b in zip(R, beta):
                if b:
                    term = term * r**b
            denom = 1
            for b in beta:
                denom *= factorial(b)
            total = total + term * (ONE / denom)
        if total:
            return False
    return True


@dataclass(frozen=True)
class InflectionFactor:
    factor: HPoly
    multiplicity: int
    degree: int
    point: ProjPoint | None
    verified: bool


def total_inflections_on_line(curve: HPoly, line: LinSubspace) -> list:
    """Check every intersection point of the curve with ``line`` for total inflection.

    Rational points are tested directly; each irreducible nonlinear
    factor of the section is tested at its generic root over the number
    field it defines, which covers all of its conjugate roots at once.
    """
    A, B = line.basis
    section = restrict_to_line(curve, line)
    if not section:
        raise GeometryError("line is a component of the curve")
    fac = factor_binary(section)
    out = []
    for f, m in fac.factors:
        if f.degree == 1:
            a, b = f.linear_coeffs()
            # f = a s + b u vanishes at (s:u) = (-b:a)
            s, u = -b, a
            pt = ProjPoint([s * x + u * y for x, y in zip(A, B)])
            ok = Hypersurface(curve).is_smooth_at(pt) and is_total_inflection(curve, pt)
            out.append(InflectionFactor(f, m, 1, pt, ok))
        else:
            ok = _total_inflection_at_generic_root(curve, A, B, f)
            out.append(InflectionFactor(f, m, f.degree, None, ok))
    return out


# configurations


@dataclass(frozen=True)
class ConfigurationReport:
    """Arrangement of star subspaces of dimension ``N-2``.

    ``case`` is ``"CommonVertex"``, ``"CommonHyperplane"``, ``"Single"``,
    ``"Empty"`` or ``"Neither"``.  A common vertex takes precedence when
    both descriptions apply (two coplanar lines in P^3, say).
    """

    case: str
    count: int
    vertex: LinSubspace | None
    hyperplane: LinSubspace | None
    bound: int | None
    count_bound_ok: bool


def analyze_star_configuration(pairs: Sequence, d: int | None = None) -> ConfigurationReport:
    pairs = list(pairs)
    if not pairs:
        return ConfigurationReport("Empty", 0, None, None, None, True)
    n = pairs[0][0].nvars
    N = n - 1
    for lam, pi in pairs:
        if lam.nvars != n or pi.nvars != n:
            raise GeometryError("subspaces in different ambient spaces")
        if pi.dim != N - 1 or lam.dim != N - 2:
            raise GeometryError("need subspaces of dimension N-2 in hyperplanes")
        if not pi.contains(lam):
            raise GeometryError("inconsistent input: subspace not contained in its hyperplane")
    for (a, _), (b, _) in itertools.combinations(pairs, 2):
        if a == b:
            raise GeometryError("subspaces are not pairwise distinct")
    if len(pairs) == 1:
        lam, pi = pairs[0]
        return ConfigurationReport("Single", 1, None, None, None, True)
    meet = pairs[0][0]
    span = pairs[0][0]
    for lam, _ in pairs[1:]:
        meet = meet.intersect(lam) if meet is not None else None
        span = span.join(lam)
    vertex = meet if meet is not None and meet.dim == N - 3 else None
    hyper = span if span.dim == N - 1 else None
    count = len(pairs)
    if vertex is not None:
        case, bound = "CommonVertex", (3 * d if d else None)
    elif hyper is not None:
        case, bound = "CommonHyperplane", (d if d else None)
    else:
        case, bound = "Neither", None
    ok = case != "Neither" and (bound is None or count <= bound)
    return ConfigurationReport(case, count, vertex, hyper, bound, ok)
