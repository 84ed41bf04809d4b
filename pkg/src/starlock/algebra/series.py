"""Multivariate power series truncated at a total degree.

A :class:`TruncSeries` keeps only terms of total degree ``< order``.
Exponent vectors are packed into one integer in base ``order`` (every
exponent of a stored term is below ``order``), so adding exponents is
one integer addition and products never carry between digits.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from ..markers import OVERFLOW
from .ratio import ONE, ZERO, Ratio, ratio, ratio_str, rational_root


@lru_cache(maxsize=None)
def _weights(nvars: int, base: int) -> tuple:
    return tuple(base ** (nvars - 1 - i) for i in range(nvars))


@lru_cache(maxsize=200_000)
def _unpack(key: int, nvars: int, base: int) -> tuple:
    out = []
    for w in _weights(nvars, base):
        e, key = divmod(key, w)
        out.append(e)
    return tuple(out)


def _pack(exps, nvars: int, base: int) -> int:
    return sum(e * w for e, w in zip(exps, _weights(nvars, base)))


class TruncSeries:
    __slots__ = ("nvars", "order", "_terms", "_buckets")

    def __init__(self, nvars: int, order: int, terms: Mapping | None = None):
        if order < 1:
            raise ValueError("truncation order must be at least 1")
        if nvars < 1:
            raise ValueError("need at least one variable")
        self.nvars = nvars
        self.order = order
        packed: dict = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps}")
            if sum(exps) >= order:
                continue
            c = ratio(c)
            if c:
                k = _pack(exps, nvars, order)
                v = packed.get(k, ZERO) + c
                if v:
                    packed[k] = v
                else:
                    packed.pop(k, None)
        self._terms = packed
        self._buckets = None

    @classmethod
    def _raw(cls, nvars: int, order: int, packed: dict) -> "TruncSeries":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.order = order
        obj._terms = packed
        obj._buckets = None
        return obj

    @classmethod
    def zero(cls, nvars: int, order: int) -> "TruncSeries":
        return cls._raw(nvars, order, {})

    @classmethod
    def constant(cls, value, nvars: int, order: int) -> "TruncSeries":
        c = ratio(value)
        return cls._raw(nvars, order, {0: c} if c else {})

    @classmethod
    def variable(cls, index: int, nvars: int, order: int) -> "TruncSeries":
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, order, {tuple(exps): ONE})

    @classmethod
    def from_poly(cls, poly, order: int) -> "TruncSeries":
        """From an :class:`HPoly` or a mapping of exponent tuples to coefficients."""
        terms = poly.terms if hasattr(poly, "terms") and not isinstance(poly, Mapping) else poly
        nvars = poly.nvars if hasattr(poly, "nvars") else len(next(iter(terms)))
        return cls(nvars, order, terms)

    # access

    def _deg(self, key: int) -> int:
        return sum(_unpack(key, self.nvars, self.order))

    def terms(self) -> dict:
        return {_unpack(k, self.nvars, self.order): c for k, c in self._terms.items()}

    def items(self):
        """Terms sorted by increasing degree, then lex descending within a degree."""
        return sorted(self.terms().items(), key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))

    def coeff(self, exps) -> Ratio:
        exps = tuple(exps)
        if sum(exps) >= self.order:
            raise ValueError("coefficient beyond the truncation order")
        return self._terms.get(_pack(exps, self.nvars, self.order), ZERO)

    def constant_term(self) -> Ratio:
        return self._terms.get(0, ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def homogeneous_part(self, degree: int) -> dict:
        return {
            _unpack(k, self.nvars, self.order): c
            for k, c in self._terms.items()
            if self._deg(k) == degree
        }

    def buckets(self) -> list:
        """Terms grouped by degree: ``buckets()[m]`` lists ``(key, coeff)`` of degree ``m``."""
        if self._buckets is None:
            b = [[] for _ in range(self.order)]
            for k, c in self._terms.items():
                b[self._deg(k)].append((k, c))
            self._buckets = b
        return self._buckets

    # arithmetic

    def _check(self, other: "TruncSeries"):
        if other.nvars != self.nvars or other.order != self.order:
            raise ValueError("series live in different rings")

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        return TruncSeries.constant(other, self.nvars, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return TruncSeries._raw(self.nvars, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw(self.nvars, self.order, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = ratio(other)
            if not c:
                return TruncSeries.zero(self.nvars, self.order)
            return TruncSeries._raw(self.nvars, self.order, {k: v * c for k, v in self._terms.items()})
        self._check(other)
        T = self.order
        ba, bb = self.buckets(), other.buckets()
        out: dict = {}
        get = out.get
        for da in range(T):
            la = ba[da]
            if not la:
                continue
            for db in range(T - da):
                lb = bb[db]
                if not lb:
                    continue
                for ka, ca in la:
                    for kb, cb in lb:
                        k = ka + kb
                        out[k] = get(k, ZERO) + ca * cb
        return TruncSeries._raw(self.nvars, T, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = ratio(other)
        return self * (ONE / c)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncSeries.constant(1, self.nvars, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return (self.nvars, self.order, self._terms) == (other.nvars, other.order, other._terms)
        if isinstance(other, (int, Ratio, Fraction)) and not isinstance(other, bool):
            return self == TruncSeries.constant(other, self.nvars, self.order)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, self.order, frozenset(self._terms.items())))

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse of a unit."""
        c0 = self.constant_term()
        if not c0:
            raise ValueError("non-unit series")
        # 1/(c0 (1 + v)) = (1/c0) sum (-v)^k
        v = self * (ONE / c0) - 1
        result = TruncSeries.constant(1, self.nvars, self.order)
        power = TruncSeries.constant(1, self.nvars, self.order)
        for _ in range(1, self.order):
            power = power * (-v)
            if not power:
                break
            result = result + power
        return result * (ONE / c0)

    # calculus and substitution

    def derivative(self, index: int) -> "TruncSeries":
        w = _weights(self.nvars, self.order)[index]
        base = self.order
        out = {}
        for k, c in self._terms.items():
            e = (k // w) % base
            if e:
                out[k - w] = c * e
        return TruncSeries._raw(self.nvars, self.order, out)

    def shift(self, deltas: Mapping[int, "TruncSeries"]) -> "TruncSeries":
        """Apply the coordinate change generated by ``D = sum deltas[i] d/dz_i``.

        The result is ``exp(D) F = sum_k D^k F / k!``, which is ``F``
        composed with the time-one flow ``z + delta(z) + (higher order)``
        of the vector field.  It agrees with ``F(z + delta(z))`` whenever
        no delta depends on a shifted variable.  Each delta must have
        order at least 2, so the sum terminates inside the truncation and
        the change is tangent to the identity.
        """
        for i, d in deltas.items():
            self._check(d)
            if d.constant_term() or any(d._deg(k) < 2 for k in d._terms):
                raise ValueError("shift needs deltas of order >= 2")
        result = self
        current = self
        k = 1
        while True:
            nxt = TruncSeries.zero(self.nvars, self.order)
            for i, d in deltas.items():
                if d:
                    nxt = nxt + d * current.derivative(i)
            if not nxt:
                break
            current = nxt * (ONE / k)
            result = result + current
            k += 1
        return result

    def compose(self, subs: Sequence["TruncSeries"]) -> "TruncSeries":
        """Substitute ``subs[i]`` for variable ``i``; substitutes must have no constant term."""
        if len(subs) != self.nvars:
            raise ValueError(f"need {self.nvars} substitutes")
        m = subs[0].nvars
        for s in subs:
            if s.nvars != m or s.order != self.order:
                raise ValueError("substitutes live in different rings")
            if s.constant_term():
                raise ValueError("substitute with a constant term")
        powers = [[TruncSeries.constant(1, m, self.order)] for _ in subs]
        out = TruncSeries.zero(m, self.order)
        for exps, c in self.terms().items():
            term = TruncSeries.constant(c, m, self.order)
            for i, e in enumerate(exps):
                if e:
                    cache = powers[i]
                    while len(cache) <= e:
                        cache.append(cache[-1] * subs[i])
                    term = term * cache[e]
                    if not term:
                        break
            out = out + term
        return out

    def linear_substitute(self, matrix: Sequence[Sequence]) -> "TruncSeries":
        """``F(A z)``: old variable ``i`` becomes ``sum_j A[i][j] z_j``."""
        n = self.nvars
        subs = []
        for row in matrix:
            terms = {}
            for j, a in enumerate(row):
                if a:
                    e = [0] * n
                    e[j] = 1
                    terms[tuple(e)] = a
            subs.append(TruncSeries(n, self.order, terms))
        return self.compose(subs)

    def select(self, keep: Sequence[int]) -> "TruncSeries":
        """Terms involving only the variables in ``keep``, re-indexed to them."""
        keep = list(keep)
        out = {}
        for exps, c in self.terms().items():
            if all(e == 0 for i, e in enumerate(exps) if i not in keep):
                out[tuple(exps[i] for i in keep)] = c
        return TruncSeries(max(len(keep), 1), self.order, out) if keep else TruncSeries.constant(
            self.constant_term(), 1, self.order
        )

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.nvars, order, {e: c for e, c in self.terms().items() if sum(e) < order})

    # presentation

    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names else [f"x{i + 1}" for i in range(self.nvars)]
        if not self._terms:
            body = "0"
        else:
            parts = []
            for exps, c in self.items():
                mono = "*".join(names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exps) if e)
                mag = -c if c < 0 else c
                piece = ratio_str(mag) if not mono else (mono if mag == 1 else f"{ratio_str(mag)}*{mono}")
                parts.append(("-" if c < 0 else "+", piece))
            body = ("-" if parts[0][0] == "-" else "") + parts[0][1]
            for sign, piece in parts[1:]:
                body += f" {sign} {piece}"
        return f"{body} + O({self.order})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"TruncSeries({self.nvars}, {self.order}, {self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "order": self.order,
            "terms": [{"coeff": ratio_str(c), "exps": list(e)} for e, c in self.items()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "TruncSeries":
        try:
            return cls(
                int(doc["nvars"]),
                int(doc["order"]),
                {tuple(t["exps"]): ratio(str(t["coeff"])) for t in doc["terms"]},
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed series document: {exc}") from None


def series_order(s: TruncSeries):
    """Lowest total degree of a nonzero term, or ``OVERFLOW`` if ``s`` vanishes to the truncation."""
    if not s:
        return OVERFLOW
    return min(s._deg(k) for k in s._terms)


def series_nth_root(u: TruncSeries, n: int) -> TruncSeries:
    """``r`` with ``r**n == u`` modulo the truncation.

    The constant term needs an exact rational ``n``-th root.  Higher
    degrees are fixed one at a time by ``r <- r + (u - r^n) / (n r0^(n-1))``.
    """
    if n < 1:
        raise ValueError("root index must be positive")
    c0 = u.constant_term()
    if not c0:
        raise ValueError("non-unit series")
    r0 = rational_root(c0, n)
    if r0 is None:
        raise ValueError("root not in coefficient field")
    if n == 1:
        return u
    scale = ONE / (n * r0 ** (n - 1))
    r = TruncSeries.constant(r0, u.nvars, u.order)
    for _ in range(u.order):
        err = u - r**n
        if not err:
            break
        r = r + err * scale
    return r
