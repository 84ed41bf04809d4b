"""Classification of surface singularities of type A_k.

A singular point is moved to the origin of an affine chart, the
quadratic part of the local equation is diagonalized over the rationals,
and the remaining mixed terms are removed degree by degree.  What is left
is ``sum c_i z_i^2 + R`` with ``R`` a series in the corank variables; the
corank and the order of ``R`` decide the type over the complex numbers,
so no square roots are ever taken.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra.linalg import identity, mat_mul
from .algebra.poly import substitute_linear
from .algebra.ratio import ONE, ZERO, ratio, ratio_str
from .algebra.series import TruncSeries, series_order
from .geometry import GeometryError, Hypersurface, ProjPoint, transform_to_standard, LinSubspace
from .markers import OVERFLOW, SMOOTH


def default_truncation(d: int) -> int:
    return 4 * d + 2


@dataclass(frozen=True)
class LocalGerm:
    """Local equation of a hypersurface at a point, centred at the origin.

    ``transform`` moved the point to ``(1:0:...:0)``; the germ lives on
    the chart ``X0 != 0`` of the transformed coordinates.
    """

    series: TruncSeries
    origin: ProjPoint
    transform: tuple

    def to_json(self) -> dict:
        return {
            "series": self.series.to_json(),
            "origin": self.origin.to_json(),
            "transform": [[ratio_str(x) for x in row] for row in self.transform],
        }


def localize(X: Hypersurface, P, T: int | None = None):
    """Local germ of ``X`` at ``P`` truncated at order ``T``, or ``SMOOTH``."""
    P = P if isinstance(P, ProjPoint) else ProjPoint(P)
    if len(P) != X.nvars:
        raise GeometryError("point has the wrong number of coordinates")
    if not X.contains(P):
        raise GeometryError("point not on hypersurface")
    T = default_truncation(X.d) if T is None else T
    if T < 3:
        raise ValueError("truncation order must be at least 3")
    M = transform_to_standard(LinSubspace.point(P))
    q = substitute_linear(X.f, M)
    n = X.nvars - 1
    terms = {}
    for exps, c in q.items():
        local = exps[1:]
        if sum(local) < T:
            terms[local] = c
    series = TruncSeries(n, T, terms)
    if any(d == 1 for d in (sum(e) for e in series.terms())):
        return SMOOTH
    return LocalGerm(series, P, tuple(map(tuple, M)))


# Morse splitting


@dataclass(frozen=True)
class MorseSplit:
    """``split == replay(input, log)`` modulo degree ``exact_order``.

    ``split`` equals ``sum coeffs[i] * z_{split_vars[i]}^2 + residual`` where
    ``residual`` only involves ``corank_vars``.
    """

    rank: int
    split_vars: tuple
    corank_vars: tuple
    coeffs: tuple
    residual: TruncSeries
    split: TruncSeries
    log: tuple
    exact_order: int

    @property
    def corank(self) -> int:
        return len(self.corank_vars)


def _quadratic_matrix(s: TruncSeries) -> list:
    n = s.nvars
    Q = [[ZERO] * n for _ in range(n)]
    for exps, c in s.homogeneous_part(2).items():
        idx = [i for i, e in enumerate(exps) for _ in range(e)]
        i, j = idx
        if i == j:
            Q[i][i] = c
        else:
            Q[i][j] = Q[j][i] = c / 2
    return Q


def _diagonalize(Q: list):
    """Symmetric rational elimination.  Returns ``(A, pivots, coeffs)`` with
    ``A^T Q A`` diagonal; old variables are ``A`` times new ones."""
    n = len(Q)
    A = identity(n)
    Q = [row[:] for row in Q]
    pivots, coeffs = [], []
    remaining = list(range(n))
    while remaining:
        i = next((r for r in remaining if Q[r][r]), None)
        if i is None:
            pair = next(
                ((a, b) for a in remaining for b in remaining if a < b and Q[a][b]), None
            )
            if pair is None:
                break
            a, b = pair
            # x_a = y_a + y_b, x_b = y_a - y_b turns 2q x_a x_b into 2q (y_a^2 - y_b^2)
            step = identity(n)
            step[a][b] = ONE
            step[b][a] = ONE
            step[b][b] = -ONE
            A = mat_mul(A, step)
            Q = mat_mul(mat_mul(_t(step), Q), step)
            continue
        step = identity(n)
        for j in remaining:
            if j != i and Q[i][j]:
                step[i][j] = -Q[i][j] / Q[i][i]
        A = mat_mul(A, step)
        Q = mat_mul(mat_mul(_t(step), Q), step)
        pivots.append(i)
        coeffs.append(Q[i][i])
        remaining.remove(i)
    return A, pivots, coeffs


def _t(m):
    return [list(c) for c in zip(*m)]


def _is_identity(m) -> bool:
    return all(m[i][j] == (ONE if i == j else ZERO) for i in range(len(m)) for j in range(len(m)))


def morse_split(series: TruncSeries, stop_when_determined: bool = False) -> MorseSplit:
    """Split off the nondegenerate quadratic part of a singular germ.

    With ``stop_when_determined`` the completion stops at the first degree
    ``m`` where the residual in a single corank variable has a nonzero
    term; everything is then exact modulo degree ``m + 1``, which is all
    the classification needs.
    """
    if series.constant_term() or series.homogeneous_part(1):
        raise ValueError("germ is not singular at the origin")
    n, T = series.nvars, series.order
    A, pivots, coeffs = _diagonalize(_quadratic_matrix(series))
    log = []
    s = series
    if not _is_identity(A):
        s = s.linear_substitute(A)
        log.append({"kind": "linear", "matrix": A})
    corank_vars = tuple(i for i in range(n) if i not in pivots)
    coeff_of = dict(zip(pivots, coeffs))
    order = sorted(pivots)
    exact = T
    if pivots:
        for m in range(3, T):
            # pure corank terms of degree <= m no longer change from here on
            determined = False
            if stop_when_determined and len(corank_vars) == 1:
                e = [0] * n
                e[corank_vars[0]] = m
                determined = bool(s.coeff(e))
            deltas = {}
            for exps, a in s.homogeneous_part(m).items():
                i = next((p for p in order if exps[p]), None)
                if i is None:
                    continue
                rest = list(exps)
                rest[i] -= 1
                term = TruncSeries(n, T, {tuple(rest): -a / (2 * coeff_of[i])})
                deltas[i] = deltas[i] + term if i in deltas else term
            if deltas:
                s = s.shift(deltas)
                log.append({"kind": "shift", "deltas": deltas})
            if determined:
                exact = m + 1
                break
        if exact < T:
            s = s.truncate(exact)
    residual = s.select(corank_vars) if corank_vars else TruncSeries.zero(1, s.order)
    return MorseSplit(
        len(pivots),
        tuple(pivots),
        corank_vars,
        tuple(coeffs),
        residual,
        s,
        tuple(log),
        exact,
    )


def replay(series: TruncSeries, log, order: int | None = None) -> TruncSeries:
    """Apply the recorded coordinate changes to ``series`` in order."""
    s = series
    for entry in log:
        if entry["kind"] == "linear":
            s = s.linear_substitute(entry["matrix"])
        elif entry["kind"] == "shift":
            s = s.shift(entry["deltas"])
        else:
            raise ValueError(f"unknown transform record {entry['kind']!r}")
    return s.truncate(order) if order is not None and order < s.order else s


def log_to_json(log) -> list:
    out = []
    for entry in log:
        if entry["kind"] == "linear":
            out.append({"kind": "linear", "matrix": [[ratio_str(x) for x in row] for row in entry["matrix"]]})
        else:
            out.append(
                {
                    "kind": "shift",
                    "deltas": {str(i): d.to_json() for i, d in sorted(entry["deltas"].items())},
                }
            )
    return out


def log_from_json(doc) -> list:
    out = []
    for entry in doc:
        if entry["kind"] == "linear":
            out.append({"kind": "linear", "matrix": [[ratio(str(x)) for x in row] for row in entry["matrix"]]})
        elif entry["kind"] == "shift":
            out.append(
                {
                    "kind": "shift",
                    "deltas": {int(i): TruncSeries.from_json(d) for i, d in entry["deltas"].items()},
                }
            )
        else:
            raise ValueError(f"unknown transform record {entry['kind']!r}")
    return out


# classification


@dataclass(frozen=True)
class SingReport:
    """Type of a surface point.

    ``kind`` is ``"A"`` (with ``k``), ``"NotA"`` (with ``corank``),
    ``"AkAtLeast"`` (with ``k`` the lower bound ``T - 1``) or ``"Smooth"``.
    """

    kind: str
    point: ProjPoint
    truncation: int
    k: int | None = None
    corank: int | None = None
    germ: LocalGerm | None = None
    split: MorseSplit | None = None
    transform_log: tuple = field(default=())

    @property
    def label(self) -> str:
        if self.kind == "A":
            return f"A{self.k}"
        if self.kind == "NotA":
            return f"NotA({self.corank})"
        if self.kind == "AkAtLeast":
            return f"A>={self.k}"
        return "smooth"

    def is_A(self, k: int) -> bool:
        return self.kind == "A" and self.k == k

    def __str__(self):
        return self.label


def classify_germ(germ: LocalGerm, point: ProjPoint | None = None) -> SingReport:
    s = germ.series
    if s.nvars != 3:
        raise GeometryError("only surface germs in three local variables are classified")
    T = s.order
    pt = point or germ.origin
    A, pivots, _ = _diagonalize(_quadratic_matrix(s))
    corank = 3 - len(pivots)
    if corank >= 2:
        log = ({"kind": "linear", "matrix": A},) if not _is_identity(A) else ()
        return SingReport("NotA", pt, T, corank=corank, germ=germ, transform_log=log)
    split = morse_split(s, stop_when_determined=True)
    if corank == 0:
        return SingReport("A", pt, T, k=1, corank=0, germ=germ, split=split, transform_log=split.log)
    order = series_order(split.residual)
    if order is OVERFLOW:
        return SingReport("AkAtLeast", pt, T, k=T - 1, corank=1, germ=germ, split=split, transform_log=split.log)
    return SingReport("A", pt, T, k=order - 1, corank=1, germ=germ, split=split, transform_log=split.log)


def classify_Ak(X: Hypersurface, P, T: int | None = None) -> SingReport:
    if X.N != 3:
        raise GeometryError("classification is implemented for surfaces in P^3 only")
    P = P if isinstance(P, ProjPoint) else ProjPoint(P)
    T = default_truncation(X.d) if T is None else T
    germ = localize(X, P, T)
    if germ is SMOOTH:
        return SingReport("Smooth", P, T)
    return classify_germ(germ, P)


def classify_series(series: TruncSeries) -> SingReport:
    """Classify a germ given directly as a series in three local variables."""
    origin = ProjPoint([1, 0, 0, 0])
    if series.homogeneous_part(1):
        return SingReport("Smooth", origin, series.order)
    if series.constant_term():
        raise GeometryError("germ does not pass through the origin")
    return classify_germ(LocalGerm(series, origin, tuple(map(tuple, identity(4)))))
