"""Projective points, linear subspaces, adapted coordinates and tangent
hyperplanes of hypersurfaces.

Coordinate changes follow one convention throughout: a matrix ``M`` acts
on polynomials by ``p -> p(M X)``.  A point with new coordinates ``y``
is the point ``M y`` in old coordinates, so the new zero set is
``M^-1`` applied to the old one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Sequence

from .algebra.linalg import complete_basis, inverse, mat_vec, nullspace, rank, rref, solve_in_span, transpose
from .algebra.poly import HPoly, parse_poly
from .algebra.ratio import ONE, ZERO, ratio, ratio_str
from .algebra.univariate import BinaryFactorization, factor_binary
from .markers import CONTAINS_HYPERPLANE, SINGULAR


class GeometryError(ValueError):
    pass


def _normalize(coords) -> tuple:
    coords = [ratio(c) for c in coords]
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise GeometryError("the zero vector is not a projective point")
    return tuple(c / lead for c in coords)


@dataclass(frozen=True)
class ProjPoint:
    """Point of projective space, scaled so its first nonzero coordinate is 1."""

    coords: tuple

    def __init__(self, coords: Sequence):
        object.__setattr__(self, "coords", _normalize(coords))

    @classmethod
    def parse(cls, text: str) -> "ProjPoint":
        parts = [p for p in text.replace(":", ",").replace(" ", "").strip("()").split(",") if p]
        return cls([ratio(p) for p in parts])

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self):
        return "(" + ":".join(ratio_str(c) for c in self.coords) + ")"

    def to_json(self) -> list:
        return [ratio_str(c) for c in self.coords]

    @classmethod
    def from_json(cls, doc) -> "ProjPoint":
        return cls([ratio(str(c)) for c in doc])


@dataclass(frozen=True)
class LinSubspace:
    """Projective linear subspace kept both as a span and as equations.

    ``basis`` is the reduced row echelon basis of the underlying vector
    space and ``equations`` the reduced basis of the linear forms that
    vanish on it.
    """

    nvars: int
    basis: tuple
    equations: tuple

    @classmethod
    def from_span(cls, vectors: Sequence[Sequence], nvars: int | None = None) -> "LinSubspace":
        vectors = [list(map(ratio, v)) for v in vectors]
        n = nvars if nvars is not None else len(vectors[0])
        if any(len(v) != n for v in vectors):
            raise GeometryError("vectors of different lengths")
        basis, _ = rref(vectors, n) if vectors else ([], [])
        if not basis:
            raise GeometryError("empty span")
        eqs = nullspace(basis, n)
        eqs, _ = rref(eqs, n) if eqs else ([], [])
        return cls(n, tuple(map(tuple, basis)), tuple(map(tuple, eqs)))

    @classmethod
    def from_equations(cls, forms: Sequence, nvars: int | None = None) -> "LinSubspace":
        rows = []
        for f in forms:
            if isinstance(f, HPoly):
                rows.append(f.linear_coeffs())
            else:
                rows.append(list(map(ratio, f)))
        n = nvars if nvars is not None else len(rows[0])
        eqs, _ = rref(rows, n) if rows else ([], [])
        span = nullspace(eqs, n)
        if not span:
            raise GeometryError("equations cut out the empty set")
        return cls.from_span(span, n)

    @classmethod
    def point(cls, p: ProjPoint | Sequence) -> "LinSubspace":
        return cls.from_span([list(p)])

    @classmethod
    def parse_equations(cls, text: str, nvars: int) -> "LinSubspace":
        forms = [parse_poly(piece, nvars) for piece in text.split(";") if piece.strip()]
        for f in forms:
            if f.degree != 1:
                raise GeometryError(f"{f} is not a linear form")
        return cls.from_equations(forms, nvars)

    @classmethod
    def parse_points(cls, text: str) -> "LinSubspace":
        pts = [ProjPoint.parse(piece) for piece in text.split(";") if piece.strip()]
        return cls.from_span([list(p) for p in pts])

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    def equation_forms(self) -> list:
        return [HPoly.linear(e) for e in self.equations]

    def contains_point(self, p) -> bool:
        return all(sum((a * b for a, b in zip(e, p)), ZERO) == 0 for e in self.equations)

    def contains(self, other: "LinSubspace") -> bool:
        return all(self.contains_point(v) for v in other.basis)

    def coordinates_of(self, p) -> list | None:
        """Coefficients of ``p`` in this subspace's basis."""
        return solve_in_span(self.basis, list(p))

    def intersect(self, other: "LinSubspace") -> "LinSubspace | None":
        rows = list(self.equations) + list(other.equations)
        span = nullspace(rows, self.nvars) if rows else [list(v) for v in _unit_vectors(self.nvars)]
        return LinSubspace.from_span(span, self.nvars) if span else None

    def join(self, other: "LinSubspace") -> "LinSubspace":
        return LinSubspace.from_span(list(self.basis) + list(other.basis), self.nvars)

    def to_json(self) -> dict:
        return {
            "span": [[ratio_str(c) for c in v] for v in self.basis],
            "equations": [[ratio_str(c) for c in e] for e in self.equations],
        }

    @classmethod
    def from_json(cls, doc) -> "LinSubspace":
        span = [[ratio(str(c)) for c in v] for v in doc["span"]]
        sub = cls.from_span(span)
        if "equations" in doc:
            eqs = [[ratio(str(c)) for c in e] for e in doc["equations"]]
            if eqs and rank(eqs) != len(sub.equations):
                raise GeometryError("span and equations disagree")
            if not all(sub.contains_point(v) for v in span) or any(
                sum(a * b for a, b in zip(e, v)) for e in eqs for v in sub.basis
            ):
                raise GeometryError("span and equations disagree")
        return sub

    def __str__(self):
        eqs = " = ".join(str(f) for f in self.equation_forms())
        return f"{{{eqs} = 0}}" if self.equations else "{everything}"


def _unit_vectors(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class Hypersurface:
    """Zero set of a nonzero form ``f``; irreducibility is not checked."""

    f: HPoly
    _gradient: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.f, HPoly):
            raise TypeError("a hypersurface needs an HPoly")
        if not self.f or self.f.degree < 1:
            raise GeometryError("need a nonzero form of positive degree")
        object.__setattr__(self, "_gradient", tuple(self.f.gradient()))

    @classmethod
    def parse(cls, text: str, nvars: int | None = None) -> "Hypersurface":
        return cls(parse_poly(text, nvars))

    @property
    def N(self) -> int:
        return self.f.nvars - 1

    @property
    def nvars(self) -> int:
        return self.f.nvars

    @property
    def d(self) -> int:
        return self.f.degree

    def contains(self, p) -> bool:
        return self.f.evaluate(list(p)) == 0

    def gradient_at(self, p) -> list:
        p = list(p)
        return [g.evaluate(p) if g else ZERO for g in self._gradient]

    def partials(self) -> tuple:
        return self._gradient

    def is_smooth_at(self, p) -> bool:
        return any(self.gradient_at(p))

    def transform(self, matrix) -> "Hypersurface":
        from .algebra.poly import substitute_linear

        return Hypersurface(substitute_linear(self.f, matrix))

    def __str__(self):
        return str(self.f)


# operations


def tangent_hyperplane(X: Hypersurface, P) -> "LinSubspace | SINGULAR":
    """Embedded tangent hyperplane ``grad f(P) . X = 0``, or ``SINGULAR``."""
    P = list(P)
    if len(P) != X.nvars:
        raise GeometryError("point has the wrong number of coordinates")
    if not X.contains(P):
        raise GeometryError("point not on hypersurface")
    grad = X.gradient_at(P)
    if not any(grad):
        return SINGULAR
    return LinSubspace.from_equations([grad], X.nvars)


def transform_to_standard(subspace: LinSubspace, plane: LinSubspace | None = None) -> list:
    """Invertible ``M`` putting ``subspace`` (dimension ``k``) at ``{X_{k+1} = ... = X_N = 0}``.

    When ``plane`` (a hyperplane containing the subspace) is given it goes
    to ``{X_{k+1} = 0}``.  Under ``p -> p(M X)`` the standard subspace is the
    image, i.e. the first ``k+1`` columns of ``M`` span ``subspace``.
    """
    n = subspace.nvars
    k = subspace.dim
    cols = [list(v) for v in subspace.basis]
    if plane is not None:
        if plane.nvars != n or plane.dim != n - 2:
            raise GeometryError("second argument must be a hyperplane")
        if not plane.contains(subspace):
            raise GeometryError("subspace is not contained in the hyperplane")
        inner = cols[:]
        for v in plane.basis:
            if len(inner) == n - 1:
                break
            if rank(inner + [list(v)]) > len(inner):
                inner.append(list(v))
        outside = next(
            v for v in _unit_vectors(n) if not plane.contains_point(v)
        )
        cols = inner[: k + 1] + [outside] + inner[k + 1 :]
    else:
        cols = complete_basis(cols, n)
    M = transpose(cols)
    inverse(M)  # raises if something went wrong
    return M


def restrict_to_hyperplane(X: Hypersurface, plane: LinSubspace):
    """``f`` pulled back to the basis of ``plane``.

    Returns ``(poly, basis)`` with ``poly`` in ``N`` variables, or
    ``CONTAINS_HYPERPLANE`` if ``f`` vanishes on the plane.
    """
    if plane.nvars != X.nvars or plane.dim != X.N - 1:
        raise GeometryError("not a hyperplane of the ambient space")
    return restrict_to_subspace(X.f, plane)


def restrict_to_subspace(f: HPoly, sub: LinSubspace):
    basis = [list(v) for v in sub.basis]
    m = len(basis)
    forms = [HPoly.linear([basis[j][i] for j in range(m)]) for i in range(f.nvars)]
    r = f.compose(forms)
    if not r:
        return CONTAINS_HYPERPLANE
    return r, tuple(map(tuple, basis))


def pullback_subspace(sub: LinSubspace, inner: LinSubspace) -> LinSubspace:
    """Express ``sub`` (contained in ``inner``) in the coordinates of ``inner.basis``."""
    if not inner.contains(sub):
        raise GeometryError("subspace is not contained in the plane")
    vecs = [inner.coordinates_of(v) for v in sub.basis]
    return LinSubspace.from_span(vecs, len(inner.basis))


def line_parametrization(line: LinSubspace) -> tuple:
    if line.dim != 1:
        raise GeometryError("not a line")
    return tuple(line.basis)


def restrict_to_line(f: HPoly, line: LinSubspace) -> HPoly:
    """Binary form ``f(s A + u B)`` for the basis points ``A, B`` of the line."""
    A, B = line_parametrization(line)
    forms = [HPoly.linear([a, b]) for a, b in zip(A, B)]
    return f.compose(forms)


def binary_gcd(forms: Sequence[HPoly]) -> HPoly:
    from .algebra.univariate import binary_to_upoly, upoly_gcd, upoly_to_binary

    nonzero = [f for f in forms if f]
    if not nonzero:
        return HPoly.zero(2)
    upow = min(min(e[1] for e in f.terms) for f in nonzero)
    g = None
    for f in nonzero:
        u = binary_to_upoly(f)
        g = u if g is None else upoly_gcd(g, u)
    g = g.monic()
    return upoly_to_binary(g) * HPoly.variable(1, 2) ** upow


@dataclass(frozen=True)
class LineSingularities:
    """Trace of ``Sing(X)`` on a line.

    ``gcd`` is the binary form (in the parameters ``(s:u)`` of
    ``s*A + u*B``) cutting out the singular points; ``points`` pairs each
    rational singular point with the multiplicity of its root.
    """

    line: LinSubspace
    parametrization: tuple
    gcd: HPoly
    factorization: BinaryFactorization | None
    points: tuple


def singular_points_on_line(X: Hypersurface, line: LinSubspace) -> LineSingularities:
    if line.nvars != X.nvars:
        raise GeometryError("line lives in a different ambient space")
    A, B = line_parametrization(line)
    if restrict_to_line(X.f, line):
        raise GeometryError("line not on hypersurface")
    parts = [restrict_to_line(g, line) if g else HPoly.zero(2) for g in X.partials()]
    g = binary_gcd(parts)
    if not g:
        raise GeometryError("line lies in the singular locus")
    if g.degree == 0:
        return LineSingularities(line, (A, B), g, None, ())
    fac = factor_binary(g)
    points = []
    for (a, b), m in fac.roots:
        pt = ProjPoint([a * x + b * y for x, y in zip(A, B)])
        points.append((pt, m))
    return LineSingularities(line, (A, B), g, fac, tuple(points))


def rational_points(sub: LinSubspace, height: int) -> Iterator[ProjPoint]:
    """Points of ``sub`` with small integer coordinates in its basis, by increasing height."""
    k = len(sub.basis)
    seen = set()
    for h in range(1, height + 1):
        for coeffs in itertools.product(range(-h, h + 1), repeat=k):
            if max(abs(c) for c in coeffs) != h:
                continue
            first = next(c for c in coeffs if c)
            if first < 0:
                continue
            if _gcd_all(coeffs) != 1:
                continue
            vec = [sum((c * v[i] for c, v in zip(coeffs, sub.basis)), ZERO) for i in range(sub.nvars)]
            pt = ProjPoint(vec)
            if pt in seen:
                continue
            seen.add(pt)
            yield pt
    return


def _gcd_all(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, abs(v))
    return g


def random_invertible(rng, n: int, bound: int = 3) -> list:
    """Seeded random invertible integer matrix with entries in ``[-bound, bound]``."""
    from .algebra.linalg import determinant

    while True:
        m = [[ratio(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]
        if determinant(m):
            return m


def map_point(M, p) -> ProjPoint:
    """New coordinates of an old point: ``M^-1 p``."""
    return ProjPoint(mat_vec(inverse(M), list(p)))


def map_subspace(M, sub: LinSubspace) -> LinSubspace:
    Minv = inverse(M)
    return LinSubspace.from_span([mat_vec(Minv, list(v)) for v in sub.basis], sub.nvars)
