"""Univariate polynomials, factorization over Q, binary forms, and
arithmetic in a simple extension Q[t]/(phi).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import HPoly
from .ratio import ONE, ZERO, Ratio, ratio, ratio_str


class UPoly:
    """Dense univariate polynomial; ``coeffs[i]`` multiplies ``t**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [ratio(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def t(cls) -> "UPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Ratio:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_upoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return UPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_upoly(other))

    def __rsub__(self, other):
        return _as_upoly(other) - self

    def __mul__(self, other):
        other = _as_upoly(other)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = UPoly([1])
        for _ in range(n):
            result = result * self
        return result

    def __divmod__(self, other):
        other = _as_upoly(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        q = [ZERO] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv = ONE / other.lead
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + other.degree] * inv
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UPoly(q), UPoly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UPoly":
        return UPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "UPoly":
        if not self:
            raise ValueError("zero polynomial has no monic form")
        return self * (ONE / self.lead)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            mag = -c if c < 0 else c
            body = ratio_str(mag) if not mono else (mono if mag == 1 else f"{ratio_str(mag)}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"UPoly({str(self)!r})"

    def to_json(self) -> list:
        return [ratio_str(c) for c in self.coeffs]


def _as_upoly(x) -> UPoly:
    return x if isinstance(x, UPoly) else UPoly([x])


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while b:
        a, b = b, a % b
    return a.monic() if a else a


@dataclass(frozen=True)
class UniFactorization:
    content: Ratio
    factors: tuple  # ((monic irreducible UPoly, multiplicity), ...)

    def expand(self) -> UPoly:
        out = UPoly([self.content])
        for f, m in self.factors:
            out = out * f**m
        return out

    def rational_roots(self) -> list:
        """``(root, multiplicity)`` for every linear factor."""
        return [(-f.coeffs[0], m) for f, m in self.factors if f.degree == 1]


def squarefree_decomposition(p: UPoly) -> list:
    """Yun's algorithm: ``[(a_i, i), ...]`` with monic squarefree pairwise coprime ``a_i``."""
    if not p:
        raise ValueError("zero polynomial")
    f = p.monic()
    out = []
    if f.degree <= 0:
        return out
    a0 = upoly_gcd(f, f.derivative())
    b = f // a0
    c = f.derivative() // a0
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = upoly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def univariate_factor(p: UPoly) -> UniFactorization:
    """Exact factorization over Q into monic irreducibles with multiplicities.

    The squarefree split is done here; each squarefree part is then split
    into irreducibles by sympy's factorizer over QQ.
    """
    import sympy

    if not p:
        raise ValueError("cannot factor the zero polynomial")
    content = p.lead
    factors = []
    t = sympy.Symbol("t")
    for part, mult in squarefree_decomposition(p):
        expr = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(part.coeffs)], t, domain="QQ")
        _, pieces = expr.factor_list()
        for piece, piece_mult in pieces:
            coeffs = [ratio(str(c)) for c in reversed(piece.all_coeffs())]
            factors.append((UPoly(coeffs).monic(), mult * piece_mult))
    factors.sort(key=lambda fm: (fm[0].degree, [str(c) for c in fm[0].coeffs], fm[1]))
    return UniFactorization(content, tuple(factors))


# binary forms


def binary_to_upoly(form: HPoly) -> UPoly:
    """Dehomogenize a binary form ``B(s, u)`` at ``u = 1``."""
    if form.nvars != 2:
        raise ValueError("not a binary form")
    if not form:
        return UPoly()
    coeffs = [ZERO] * (form.degree + 1)
    for (a, _b), c in form.terms.items():
        coeffs[a] = c
    return UPoly(coeffs)


def upoly_to_binary(p: UPoly, degree: int | None = None) -> HPoly:
    """Homogenize ``p(t)`` as ``u^deg p(s/u)``."""
    deg = p.degree if degree is None else degree
    if deg < p.degree:
        raise ValueError("target degree below polynomial degree")
    return HPoly(2, {(i, deg - i): c for i, c in enumerate(p.coeffs) if c})


@dataclass(frozen=True)
class BinaryFactorization:
    """``form = content * prod(factor ** mult)`` with each factor an irreducible binary form.

    ``roots`` lists ``((a, b), mult)`` for the rational points ``(a:b)``.
    """

    content: Ratio
    factors: tuple  # ((HPoly, multiplicity), ...)
    roots: tuple

    def expand(self, nvars: int = 2) -> HPoly:
        out = HPoly.constant(self.content, 2)
        for f, m in self.factors:
            out = out * f**m
        return out


def factor_binary(form: HPoly) -> BinaryFactorization:
    if form.nvars != 2 or not form:
        raise ValueError("need a nonzero binary form")
    u_power = min(e[1] for e in form.terms)
    # u^k accounts for the root (1:0)
    reduced = binary_to_upoly(form)
    fac = univariate_factor(reduced)
    factors = []
    roots = []
    if u_power:
        factors.append((HPoly.variable(1, 2), u_power))
        roots.append(((ONE, ZERO), u_power))
    for f, m in fac.factors:
        factors.append((upoly_to_binary(f), m))
        if f.degree == 1:
            roots.append(((-f.coeffs[0], ONE), m))
    return BinaryFactorization(fac.content, tuple(factors), tuple(roots))


class FieldElement:
    """Element of Q[t]/(modulus) for a monic irreducible modulus."""

    __slots__ = ("value", "modulus")

    def __init__(self, value, modulus: UPoly):
        self.modulus = modulus
        v = value if isinstance(value, UPoly) else UPoly([value])
        self.value = v % modulus

    @classmethod
    def generator(cls, modulus: UPoly) -> "FieldElement":
        return cls(UPoly.t(), modulus)

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("elements of different fields")
            return other
        return FieldElement(ratio(other), self.modulus)

    def __add__(self, other):
        return FieldElement(self.value + self._lift(other).value, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.value, self.modulus)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        return FieldElement(self.value * self._lift(other).value, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = FieldElement(ONE, self.modulus)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.value == other.value
        try:
            return self.value == UPoly([ratio(other)])
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.modulus})"
