import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import classify_oracle, report_tuple, singular_points_oracle, star_oracle
from strategies import forms

from starlock import Hypersurface, LinSubspace, ProjPoint, classify_Ak, is_star_point, parse_poly
from starlock.algebra import HPoly, monomials
from starlock.families import (
    STAR_LINE,
    STAR_PLANE,
    FamilyError,
    cone_generator,
    cone_over_curve,
    deformation_to_Ad2,
    extremal_family,
    extremal_singularities,
    family_dimension,
    family_dimension_oracle,
    lemma_surface,
    line_Ak_surface,
    proper_star_deformation,
    random_form,
    star_family,
    star_sum_check,
)
from starlock.geometry import rational_points
from starlock.singularities import default_truncation


def P4(text):
    return parse_poly(text, 4)


# star subspaces


def test_star_family_example():
    member = star_family(3, 3, 1, P4("X0^2+X1*X3"), P4("X3^3"))
    assert member.ok
    vertex, plane = member.star_pairs[0]
    assert vertex == LinSubspace.parse_equations("X2;X3", 4)
    assert plane == LinSubspace.parse_equations("X2", 4)
    for pt in rational_points(vertex, 2):
        if member.surface.is_smooth_at(pt):
            assert star_oracle(member.surface.f, pt)


def test_star_family_errors():
    with pytest.raises(FamilyError, match="forbidden"):
        star_family(3, 3, 1, P4("X0^2"), P4("X0*X3^2"))
    with pytest.raises(FamilyError, match="degree"):
        star_family(3, 3, 1, P4("X0"), P4("X3^3"))
    with pytest.raises(FamilyError, match="lambda"):
        star_family(3, 3, 2, P4("X0^2"), P4("X3^3"))


@given(st.integers(0, 10**6), st.sampled_from([(3, 0), (3, 1), (4, 0), (4, 1), (4, 2)]), st.sampled_from([3, 4]))
def test_star_family_generic_vertex_point_is_star(seed, Nlam, d):
    N, lam = Nlam
    rng = random.Random(seed)
    n = N + 1
    h = random_form(rng, n, d - 1)
    # h(1:0:...:0) = 1 keeps that vertex point smooth
    h = h + HPoly.variable(0, n) ** (d - 1) * (1 - h.evaluate([1] + [0] * N))
    g = random_form(rng, n, d, range(lam + 2, n))
    member = star_family(N, d, lam, h, g)
    vertex, _ = member.star_pairs[0]
    pt = next(p for p in rational_points(vertex, 3) if member.surface.is_smooth_at(p))
    assert is_star_point(member.surface, pt).verdict
    assert star_oracle(member.surface.f, pt)


def test_family_dimension_values():
    assert family_dimension(3, 3, 1) == 10 + 1 - 1
    # h has 10 coefficients and g(X2, X3) has 4, less one for scaling
    assert family_dimension(3, 3, 0) == 13
    assert family_dimension(3, 4, 1) == comb(6, 3) + 0


@given(st.integers(2, 7), st.integers(3, 7), st.data())
def test_family_dimension_matches_monomial_count(N, d, data):
    lam = data.draw(st.integers(0, N - 2))
    value = family_dimension(N, d, lam)
    assert value == family_dimension_oracle(N, d, lam)
    assert value == len(monomials(N + 1, d - 1)) + len(monomials(N - lam - 1, d)) - 1


def test_family_dimension_errors():
    for args in [(1, 3, 0), (3, 2, 0), (3, 3, 2), (3, 3, -1)]:
        with pytest.raises(FamilyError):
            family_dimension(*args)


# the extremal example


def _lines(text):
    return [parse_poly(t, 3) for t in text.split(",")]


def test_extremal_cubic():
    member = extremal_family(_lines("X0,X1,X0+X1+X2"), 1)
    assert member.ok and member.surface.f == P4("X0*X1*(X0+X1+X2)+X3^3")
    assert member.extra["report"].case == "CommonHyperplane"
    sing = extremal_singularities(member)
    assert {pt: r.label for pt, r in sing["points"].items()} == {
        ProjPoint([0, 0, 1, 0]): "A2",
        ProjPoint([0, 1, -1, 0]): "A2",
        ProjPoint([1, 0, -1, 0]): "A2",
    }
    assert set(sing["points"]) == {ProjPoint(p) for p in singular_points_oracle(member.surface.f)}
    for pt in sing["points"]:
        assert classify_oracle(member.surface.f, pt, default_truncation(3)) == ("A", 2)


def test_extremal_alpha_zero_warns():
    with pytest.warns(UserWarning, match="degenerate"):
        member = extremal_family(_lines("X0,X1,X0+X1+X2"), 0)
    assert member.surface.f == P4("X0*X1*(X0+X1+X2)")


def test_extremal_errors():
    with pytest.raises(FamilyError, match="dependent modulo"):
        extremal_family(_lines("X0,2*X0"), 1, N=3)
    with pytest.raises(FamilyError, match="linear"):
        extremal_family([parse_poly("X0^2", 3), parse_poly("X1^2", 3)], 1)
    with pytest.raises(FamilyError, match="at least two"):
        extremal_family(_lines("X0"), 1)


# cones


def test_cone_over_fermat_cubic():
    member = cone_over_curve(parse_poly("X0^3+X1^3+X2^3"))
    assert member.ok and member.surface.f == P4("X0^3+X1^3+X2^3")
    lam = cone_generator(member, [1, -1, 0])
    assert lam.contains_point(ProjPoint([0, 0, 0, 1])) and lam.contains_point(ProjPoint([1, -1, 0, 0]))


def test_cone_over_curve_in_other_coordinates():
    plane = LinSubspace.parse_points("1,0,0,1;0,1,0,0;0,0,1,0")
    vertex = LinSubspace.point([0, 0, 0, 1])
    member = cone_over_curve(parse_poly("X0*X1*X2"), plane, vertex)
    assert member.ok
    with pytest.raises(FamilyError, match="meets the plane"):
        cone_over_curve(parse_poly("X0*X1*X2"), plane, LinSubspace.point([1, 0, 0, 1]))


# lines of star points


def test_line_Ak_surface_records_seed_and_certificate():
    member = line_Ak_surface(4, P4("X0*X1*(X0-X1)"), seed=7)
    assert member.ok and member.seed == 7
    assert member.star_pairs == ((STAR_LINE, STAR_PLANE),)
    again = line_Ak_surface(4, P4("X0*X1*(X0-X1)"), seed=7)
    assert again.surface == member.surface


def test_line_Ak_surface_errors():
    with pytest.raises(FamilyError, match="degree"):
        line_Ak_surface(3, P4("X0^3"))
    with pytest.raises(FamilyError, match="forbidden"):
        line_Ak_surface(3, P4("X0*X2"))
    with pytest.raises(FamilyError, match="forbidden"):
        line_Ak_surface(3, P4("X0*X1"), L2=P4("X3"))


@pytest.mark.parametrize("seed", range(6))
def test_generic_L3_keeps_type_A(seed):
    L = P4("X0*X1^2")
    member = line_Ak_surface(4, L, seed=seed)
    ledger = star_sum_check(member.surface)
    assert ledger.holds, ledger.counterexample_candidates


def test_lemma_surface_types():
    for d, alpha in [(3, 1), (3, 2), (4, 3), (5, 2)]:
        L = P4(f"X0^{d - 1 - alpha}") if alpha < d - 1 else None
        member = lemma_surface(d, alpha, L)
        assert member.extra["report"].is_A(d * alpha - 1)
    with pytest.raises(FamilyError, match="nonzero"):
        lemma_surface(3, 1, P4("X1"))


# deformations


@pytest.mark.parametrize("t", [0, 1, Fraction(-2, 3)])
def test_deformation_to_Ad2(t):
    member = deformation_to_Ad2(3, P4("X0*X1"), seed=0, t=t)
    expected = "A2" if t == 0 else "A1"
    assert set(member.extra["types"].values()) == {expected}
    P = member.extra["P"]
    assert member.surface.is_smooth_at(P) and star_oracle(member.surface.f, P)
    for name, label in member.extra["types"].items():
        pt = ProjPoint.parse(name)
        assert report_tuple(classify_Ak(member.surface, pt)) == ("A", int(label[1:]))


def test_deformation_requires_distinct_roots():
    with pytest.raises(FamilyError, match="distinct roots"):
        deformation_to_Ad2(4, P4("X0*X1^2"), seed=0, t=1)
    with pytest.raises(FamilyError, match="must not vanish"):
        deformation_to_Ad2(3, P4("X0*X1"), P=[1, 0, 0, 0], seed=0, t=1)


@pytest.mark.parametrize("t", [0, 1, -1, Fraction(1, 2)])
def test_proper_deformation_keeps_star_point(t):
    member = proper_star_deformation(P4("X0*X2+X3^2"), P4("X2^3+X3^3"), t=t, seed=0)
    assert member.ok
    assert not member.extra["smooth"] if t == 0 else True


def test_proper_deformation_rejects_bad_g():
    with pytest.raises(FamilyError, match="forbidden"):
        proper_star_deformation(P4("X0^2"), P4("X0*X2^2"), t=1)


# the multiplicity ledger


def test_star_sum_with_conjugate_points():
    L = P4("X0*(X0^2+X1^2)")
    member = line_Ak_surface(4, L, seed=0)
    ledger = star_sum_check(member.surface)
    assert ledger.holds and ledger.total == 3
    sources = sorted(e["source"] for e in ledger.entries)
    assert sources == ["by-multiplicity", "classified"]
    conj = next(e for e in ledger.entries if e["source"] == "by-multiplicity")
    assert conj["points"] == 2 and conj["k"] == 3


def test_star_sum_with_repeated_root():
    member = line_Ak_surface(4, P4("X0^2*X1"), seed=0)
    ledger = star_sum_check(member.surface)
    assert ledger.holds
    ks = sorted(e["k"] for e in ledger.entries)
    assert ks == [3, 7]


@given(st.integers(3, 5), st.integers(0, 10**5), st.data())
def test_star_sum_holds_on_generic_line_surfaces(d, seed, data):
    L = data.draw(forms(2, d - 1, max_terms=d))
    L = HPoly(4, {e + (0, 0): c for e, c in L.items()})
    ledger = star_sum_check(line_Ak_surface(d, L, seed=seed).surface)
    assert ledger.total == d - 1
    assert ledger.holds
