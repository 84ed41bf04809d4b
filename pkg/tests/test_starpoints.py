import random

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import X as SX, cone_instance, contact_order_oracle, star_oracle, to_sympy
from strategies import forms, invertible_matrices

from starlock import (
    CONTAINS_HYPERPLANE,
    GeometryError,
    Hypersurface,
    LinSubspace,
    ProjPoint,
    analyze_star_configuration,
    cone_oracle,
    contact_order,
    generic_point_is_star,
    is_cone,
    is_star_point,
    is_star_point_with_plane,
    is_total_inflection,
    parse_poly,
    restrict_to_hyperplane,
    star_line_certificate,
    tangent_hyperplane,
    total_inflections_on_line,
)
from starlock.algebra import HPoly, ratio, substitute_linear
from starlock.families import STAR_PLANE, cone_generator, cone_over_curve, line_Ak_surface
from starlock.geometry import map_point, map_subspace, pullback_subspace, rational_points

FERMAT = Hypersurface.parse("X0^3+X1^3+X2^3+X3^3")
EXTREMAL = Hypersurface.parse("X0*X1*(X0+X1+X2)+X3^3")
LINE = LinSubspace.parse_equations("X2;X3", 4)


def plane(*coeffs):
    return LinSubspace.from_equations([list(coeffs)], len(coeffs))


# cones


def test_is_cone_examples():
    assert is_cone(parse_poly("X2^3+X3^3", 4), LINE).verdict
    cert = is_cone(parse_poly("X0*X2^2+X3^3", 4), LINE)
    assert not cert.verdict
    var, exps, coeff = cert.witness
    assert var == 0 and exps[0] > 0 and coeff
    # X3^3 on the plane X0 = 0 with coordinates (X1, X2, X3); P = (0:1:0:0) is (1:0:0)
    assert is_cone(parse_poly("X2^3", 3), LinSubspace.point([1, 0, 0])).verdict


def test_is_cone_requires_vertex_on_hypersurface():
    with pytest.raises(GeometryError, match="vertex not on hypersurface"):
        is_cone(parse_poly("X0^3+X3^3", 4), LINE)


def test_cone_oracle_examples():
    assert cone_oracle(parse_poly("X2^3+X3^3", 4), LINE)
    assert not cone_oracle(parse_poly("X0*X2^2+X3^3", 4), LINE)
    ell = parse_poly("X0-2*X1+X3", 4)
    sub = LinSubspace.from_span([[2, 1, 0, 0], [0, 0, 1, 0]])
    assert cone_oracle(ell**4, sub) and is_cone(ell**4, sub).verdict


def test_non_cone_line_computation():
    # P = (1:0:0:0) and Q = (1:0:1:-1) on the surface; the joining line is not
    f = to_sympy(parse_poly("X0*X2^2+X3^3", 4))
    s, t = sympy.symbols("s t")
    on_line = sympy.expand(f.subs({SX[0]: s + t, SX[1]: 0, SX[2]: t, SX[3]: -t}, simultaneous=True))
    assert on_line == s * t**2


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]), st.sampled_from([3, 4]))
def test_is_cone_matches_oracle_and_construction(seed, N, d):
    p, vertex, truth = cone_instance(random.Random(seed), N, d)
    cert = is_cone(p, vertex)
    assert cert.verdict == cone_oracle(p, vertex) == truth


@given(st.integers(0, 10**6))
def test_cone_certificate_replays(seed):
    p, vertex, _ = cone_instance(random.Random(seed), 3, 3)
    cert = is_cone(p, vertex)
    assert substitute_linear(p, cert.transform) == cert.transformed
    k = vertex.dim
    vertex_free = all(not any(e[: k + 1]) for e in cert.transformed.terms)
    assert vertex_free == cert.verdict
    if not cert.verdict:
        var, exps, coeff = cert.witness
        assert cert.transformed.coeff(exps) == coeff and exps[var] > 0


# star points


def test_is_star_point_examples():
    r = is_star_point(EXTREMAL, [0, 1, 0, 0])
    assert r.verdict and r.plane == plane(1, 0, 0, 0)
    assert r.restricted == parse_poly("X2^3", 3)
    r = is_star_point(FERMAT, [1, -1, 0, 0])
    assert r.verdict and r.plane == plane(1, 1, 0, 0)
    assert star_oracle(FERMAT.f, [1, -1, 0, 0])


def test_non_eckardt_point_of_fermat_cubic():
    P = [1, -1, 1, -1]
    assert not is_star_point(FERMAT, P).verdict
    assert not star_oracle(FERMAT.f, P)


def test_is_star_point_rejects_singular_points():
    X = Hypersurface.parse("X2*(X0*X1)+X3^3")
    with pytest.raises(GeometryError, match="is_star_point_with_plane"):
        is_star_point(X, [1, 0, 0, 0])


@st.composite
def smooth_surface_point(draw):
    d = draw(st.sampled_from([3, 4]))
    p = draw(forms(4, d, max_terms=8))
    P = draw(st.lists(st.integers(-2, 2), min_size=4, max_size=4).filter(any))
    j = next(i for i, c in enumerate(P) if c)
    f = p - HPoly.variable(j, 4) ** d * (p.evaluate(P) / ratio(P[j]) ** d)
    assume(bool(f))
    X = Hypersurface(f)
    assume(X.is_smooth_at(P))
    return X, ProjPoint(P)


@given(smooth_surface_point())
def test_is_star_point_matches_identity_oracle(XP):
    X, P = XP
    assert is_star_point(X, P).verdict == star_oracle(X.f, P)


@st.composite
def star_surfaces(draw):
    """``X1 h + g(X2, X3)`` with a smooth star point at (1:0:0:0), in random coordinates."""
    d = draw(st.sampled_from([3, 4]))
    h = draw(forms(4, d - 1)) + HPoly.variable(0, 4) ** (d - 1)
    assume(h.evaluate([1, 0, 0, 0]) != 0)
    g = draw(forms(2, d))
    g = HPoly(4, {(0, 0) + e: c for e, c in g.items()})
    X = Hypersurface(HPoly.variable(1, 4) * h + g)
    M = draw(invertible_matrices(4))
    return X.transform(M), map_point(M, [1, 0, 0, 0])


@given(star_surfaces())
def test_constructed_star_points_are_star(XP):
    X, P = XP
    assert is_star_point(X, P).verdict
    assert star_oracle(X.f, P)


@given(smooth_surface_point(), invertible_matrices(4))
def test_is_star_point_coordinate_invariance(XP, M):
    X, P = XP
    assert is_star_point(X, P).verdict == is_star_point(X.transform(M), map_point(M, P)).verdict


def test_is_star_point_with_plane_examples():
    X = Hypersurface.parse("X2*(X3*(X0+X1)+X2*X1+X0*X1)+X3^3")
    r = is_star_point_with_plane(X, [1, 0, 0, 0], plane(0, 0, 1, 0))
    assert r.verdict and not r.smooth
    assert r.restricted == parse_poly("X2^3", 3)
    # the vertex of a cone over a nodal cubic: every plane through it works
    cone = cone_over_curve(parse_poly("X1^2*X2-X0^3-X0^2*X2")).surface
    for coeffs in ([1, 0, 0, 0], [1, 2, -1, 0], [0, 1, 1, 0]):
        assert is_star_point_with_plane(cone, [0, 0, 0, 1], plane(*coeffs)).verdict


def test_is_star_point_with_plane_false_on_general_surface():
    X = Hypersurface.parse("X0^3+2*X1^3-X2^3+X0*X1*X3+X3^2*X1+X2^2*X0-X0^2*X2")
    P = [0, 0, 0, 1]
    assert X.contains(P)
    assert not is_star_point_with_plane(X, P, plane(1, -1, 2, 0)).verdict


def test_is_star_point_with_plane_errors():
    with pytest.raises(GeometryError):
        is_star_point_with_plane(EXTREMAL, [0, 1, 0, 0], plane(0, 1, 0, 0))


# star lines


def test_star_line_certificate_examples():
    X = line_Ak_surface(3, parse_poly("X0*X1", 4), seed=0).surface
    cert = star_line_certificate(X, LINE)
    assert cert.status == "certified" and cert.plane == STAR_PLANE
    assert cert.scalar == 1 and cert.restricted == parse_poly("X2^3", 3)
    cert = star_line_certificate(EXTREMAL, LinSubspace.parse_equations("X0;X3", 4))
    assert cert and cert.plane == plane(1, 0, 0, 0)
    cert = star_line_certificate(FERMAT, LinSubspace.parse_equations("X0+X1;X2+X3", 4))
    assert cert.status == "failed" and not cert
    assert cert.restricted == cert.linear_form**cert.multiplicity * cert.residual
    assert cert.multiplicity < FERMAT.d


def test_star_line_certificate_errors():
    with pytest.raises(GeometryError, match="line not on hypersurface"):
        star_line_certificate(FERMAT, LINE)
    with pytest.raises(GeometryError, match="dimension"):
        star_line_certificate(FERMAT, LinSubspace.point([1, -1, 0, 0]))
    with pytest.raises(GeometryError, match="singular locus"):
        star_line_certificate(Hypersurface.parse("X2^2*X0+X3^2*X1"), LINE)


def test_star_line_certificate_inconclusive_at_small_height():
    L = parse_poly("X0*X1*(X0-X1)*(X0+X1)", 4)
    X = line_Ak_surface(5, L, seed=0).surface
    assert star_line_certificate(X, LINE, height_bound=1).status == "inconclusive"
    assert star_line_certificate(X, LINE, height_bound=2).status == "certified"


def test_tangent_hyperplane_contained_in_surface():
    X = Hypersurface.parse("X0*(X1^2+X2*X3)")
    line = LinSubspace.parse_equations("X0;X1", 4)
    cert = star_line_certificate(X, line)
    assert cert.status == "failed" and "tangent hyperplane" in cert.reason


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("L", ["X0*X1", "X1^2", "X0^2+X1^2"])
def test_certified_line_properties(seed, L):
    X = line_Ak_surface(3, parse_poly(L, 4), seed=seed).surface
    cert = star_line_certificate(X, LINE)
    assert cert
    sampled = 0
    for pt in rational_points(LINE, 3):
        if X.is_smooth_at(pt):
            assert tangent_hyperplane(X, pt) == cert.plane
            assert is_star_point(X, pt).verdict
            sampled += 1
    assert sampled >= 4
    # success is the cone property of the section with the whole line as vertex
    r, basis = restrict_to_hyperplane(X, cert.plane)
    inner = LinSubspace.from_span([list(v) for v in basis])
    assert is_cone(r, pullback_subspace(LINE, inner)).verdict
    assert generic_point_is_star(X, LINE)


def test_failed_line_is_not_a_cone_and_generic_point_not_star():
    line = LinSubspace.parse_equations("X0+X1;X2+X3", 4)
    cert = star_line_certificate(FERMAT, line)
    r, basis = restrict_to_hyperplane(FERMAT, cert.plane)
    inner = LinSubspace.from_span([list(v) for v in basis])
    assert not is_cone(r, pullback_subspace(line, inner)).verdict
    assert not generic_point_is_star(FERMAT, line)


def test_star_subspace_in_higher_dimension():
    # X3 h + X4^3 in P^4 with star subspace {X3 = X4 = 0}
    X = Hypersurface.parse("X3*(X0^2+X1*X2+X4^2)+X4^3", 5)
    sub = LinSubspace.parse_equations("X3;X4", 5)
    cert = star_line_certificate(X, sub)
    assert cert and cert.plane == LinSubspace.parse_equations("X3", 5)
    assert generic_point_is_star(X, sub)


# plane curves


def test_total_inflection_examples():
    fermat = parse_poly("X0^3+X1^3+X2^3")
    assert is_total_inflection(fermat, [1, -1, 0])
    quartic = parse_poly("X0^4-X1^4+X2^4")
    assert is_total_inflection(quartic, [1, 1, 0]) and contact_order(quartic, [1, 1, 0]) == 4
    nodal = parse_poly("X1^2*X2-X0^3-X0*X2^2")
    assert contact_order(nodal, [0, 0, 1]) == 2 and not is_total_inflection(nodal, [0, 0, 1])


def test_total_inflection_rejects_bad_points():
    with pytest.raises(GeometryError, match="not on hypersurface"):
        is_total_inflection(parse_poly("X0^4+X1^4+X2^4"), [1, -1, 0])
    with pytest.raises(GeometryError, match="singular"):
        is_total_inflection(parse_poly("X1^2*X2-X0^3-X0^2*X2"), [0, 0, 1])


def test_tangent_line_component_is_not_an_inflection():
    curve = parse_poly("X0*(X1^2-X0*X2)")
    assert not is_total_inflection(curve, [0, 1, 0])


@st.composite
def curve_with_point(draw):
    d = draw(st.sampled_from([3, 4]))
    p = draw(forms(3, d, max_terms=6))
    Q = draw(st.lists(st.integers(-2, 2), min_size=3, max_size=3).filter(any))
    j = next(i for i, c in enumerate(Q) if c)
    f = p - HPoly.variable(j, 3) ** d * (p.evaluate(Q) / ratio(Q[j]) ** d)
    assume(bool(f))
    assume(any(g.evaluate(Q) for g in f.gradient() if g))
    return f, Q


@given(curve_with_point())
def test_contact_order_matches_oracle(data):
    curve, Q = data
    order = contact_order(curve, Q)
    assert order == contact_order_oracle(curve, Q)
    assert is_total_inflection(curve, Q) == (order == curve.degree and bool(restricted_nonzero(curve, Q)))


def restricted_nonzero(curve, Q):
    line = tangent_hyperplane(Hypersurface(curve), Q)
    return restrict_to_hyperplane(Hypersurface(curve), line) is not CONTAINS_HYPERPLANE


@pytest.mark.parametrize("d", [3, 4, 5])
def test_fermat_curve_has_3d_total_inflections(d):
    curve = parse_poly(f"X0^{d}+X1^{d}+X2^{d}")
    total = 0
    for i in range(3):
        line = LinSubspace.from_equations([[1 if j == i else 0 for j in range(3)]], 3)
        factors = total_inflections_on_line(curve, line)
        assert all(f.verified for f in factors)
        total += sum(f.degree * f.multiplicity for f in factors)
    assert total == 3 * d


def test_non_inflection_factors_are_not_verified():
    curve = parse_poly("X0^3+X1^3+X2^3")
    line = LinSubspace.from_equations([[1, 2, 3]], 3)
    factors = total_inflections_on_line(curve, line)
    assert factors and not any(f.verified for f in factors)


# configurations


def _pairs_of_extremal():
    return [
        (LinSubspace.parse_equations("X0;X3", 4), plane(1, 0, 0, 0)),
        (LinSubspace.parse_equations("X1;X3", 4), plane(0, 1, 0, 0)),
        (LinSubspace.parse_equations("X0+X1+X2;X3", 4), plane(1, 1, 1, 0)),
    ]


def test_configuration_common_hyperplane():
    report = analyze_star_configuration(_pairs_of_extremal(), 3)
    assert report.case == "CommonHyperplane" and report.count == 3
    assert report.hyperplane == plane(0, 0, 0, 1) and report.count_bound_ok
    assert all(report.hyperplane.contains(lam) for lam, _ in _pairs_of_extremal())


def test_configuration_bound_violation_flagged():
    pairs = _pairs_of_extremal() + [(LinSubspace.parse_equations("X0-X1+X2;X3", 4), plane(1, -1, 1, 0))]
    report = analyze_star_configuration(pairs, 3)
    assert report.case == "CommonHyperplane" and not report.count_bound_ok


def test_configuration_common_vertex_from_cone():
    member = cone_over_curve(parse_poly("X0^3+X1^3+X2^3"))
    X = member.surface
    pairs = []
    for Q in ([1, -1, 0], [1, 0, -1], [0, 1, -1]):
        lam = cone_generator(member, Q)
        pairs.append((lam, star_line_certificate(X, lam).plane))
    report = analyze_star_configuration(pairs, 3)
    assert report.case == "CommonVertex"
    assert report.vertex == LinSubspace.point([0, 0, 0, 1])
    assert all(lam.contains(report.vertex) for lam, _ in pairs)
    assert report.count_bound_ok


def test_configuration_single_empty_neither():
    assert analyze_star_configuration([]).case == "Empty"
    assert analyze_star_configuration(_pairs_of_extremal()[:1]).case == "Single"
    skew = [
        (LinSubspace.parse_equations("X0;X1", 4), plane(1, 0, 0, 0)),
        (LinSubspace.parse_equations("X2;X3", 4), plane(0, 0, 1, 0)),
    ]
    report = analyze_star_configuration(skew, 3)
    assert report.case == "Neither" and not report.count_bound_ok


def test_configuration_input_errors():
    with pytest.raises(GeometryError, match="inconsistent"):
        analyze_star_configuration([(LinSubspace.parse_equations("X0;X3", 4), plane(0, 1, 0, 0))])
    pair = _pairs_of_extremal()[0]
    with pytest.raises(GeometryError, match="distinct"):
        analyze_star_configuration([pair, pair])


@given(invertible_matrices(4))
def test_configuration_case_is_coordinate_free(M):
    pairs = [(map_subspace(M, lam), map_subspace(M, pi)) for lam, pi in _pairs_of_extremal()]
    assert analyze_star_configuration(pairs, 3).case == "CommonHyperplane"
