"""Sparse homogeneous polynomials over the rationals.

An :class:`HPoly` maps exponent tuples to nonzero coefficients.  All terms
of a nonzero polynomial share one total degree.  Terms are emitted in
graded-lex order with ``X0`` the largest variable, so text and JSON output
is deterministic.
"""

from __future__ import annotations

import ast
import re
from typing import Iterable, Mapping, Sequence

from .ratio import ONE, ZERO, Ratio, ratio, ratio_str

Exps = tuple


def _add_into(target: dict, exps, coeff):
    c = target.get(exps, ZERO) + coeff
    if c:
        target[exps] = c
    else:
        target.pop(exps, None)


def _mul_terms(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            _add_into(out, e, ca * cb)
    return out


class HPoly:
    """Homogeneous polynomial in ``X0 .. X{nvars-1}``.

    The zero polynomial is allowed and has degree ``-1``.  Instances are
    treated as immutable.
    """

    __slots__ = ("nvars", "_terms", "_degree", "_hash")

    def __init__(self, nvars: int, terms=None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        clean: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} does not have {nvars} entries")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            _add_into(clean, exps, ratio(coeff))
        degrees = {sum(e) for e in clean}
        if len(degrees) > 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
        self.nvars = nvars
        self._terms = clean
        self._degree = degrees.pop() if degrees else -1
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict, degree: int | None = None) -> "HPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        if degree is None:
            degree = sum(next(iter(terms))) if terms else -1
        obj._degree = degree if terms else -1
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "HPoly":
        return cls._raw(nvars, {}, -1)

    @classmethod
    def constant(cls, value, nvars: int) -> "HPoly":
        c = ratio(value)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {}, 0)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "HPoly":
        if not 0 <= index < nvars:
            raise ValueError(f"variable X{index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls._raw(nvars, {tuple(exps): ONE}, 1)

    @classmethod
    def linear(cls, coeffs: Sequence) -> "HPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = ratio(c)
            if c:
                exps = [0] * n
                exps[i] = 1
                terms[tuple(exps)] = c
        return cls._raw(n, terms, 1)

    # basic access

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in graded-lex descending order."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def coeff(self, exps) -> Ratio:
        return self._terms.get(tuple(exps), ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def variables_used(self) -> set:
        used = set()
        for exps in self._terms:
            used.update(i for i, e in enumerate(exps) if e)
        return used

    def linear_coeffs(self) -> list:
        if self._degree != 1:
            raise ValueError("not a linear form")
        out = [ZERO] * self.nvars
        for exps, c in self._terms.items():
            out[exps.index(1)] = c
        return out

    # arithmetic

    def _check(self, other: "HPoly"):
        if other.nvars != self.nvars:
            raise ValueError("variable counts differ")

    def __add__(self, other):
        if not isinstance(other, HPoly):
            if other == 0:
                return self
            other = HPoly.constant(other, self.nvars)
        self._check(other)
        if not self._terms:
            return other
        if not other._terms:
            return self
        if self._degree != other._degree:
            raise ValueError(
                f"sum of degree {self._degree} and degree {other._degree} is not homogeneous"
            )
        out = dict(self._terms)
        for e, c in other._terms.items():
            _add_into(out, e, c)
        return HPoly._raw(self.nvars, out, self._degree)

    __radd__ = __add__

    def __neg__(self):
        return HPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()}, self._degree)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HPoly):
            self._check(other)
            if not self._terms or not other._terms:
                return HPoly.zero(self.nvars)
            return HPoly._raw(
                self.nvars, _mul_terms(self._terms, other._terms), self._degree + other._degree
            )
        c = ratio(other)
        if not c:
            return HPoly.zero(self.nvars)
        return HPoly._raw(self.nvars, {e: v * c for e, v in self._terms.items()}, self._degree)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = ratio(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (ONE / c)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = HPoly.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, HPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # calculus and evaluation

    def derivative(self, index: int) -> "HPoly":
        out = {}
        for exps, c in self._terms.items():
            e = exps[index]
            if e:
                new = list(exps)
                new[index] = e - 1
                out[tuple(new)] = c * e
        return HPoly._raw(self.nvars, out, self._degree - 1 if out else -1)

    def gradient(self) -> list:
        return [self.derivative(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence):
        """Evaluate at ``point``.

        Coordinates may be Ratios or any ring elements supporting ``+``,
        ``*`` and ``**`` with rational scalars.
        """
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, need {self.nvars}")
        pt = [ratio(x) if isinstance(x, (int, str)) else x for x in point]
        total = ZERO
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(pt, exps):
                if e:
                    term = term * (x**e)
            total = total + term
        return total

    __call__ = evaluate

    def compose(self, forms: Sequence["HPoly"]) -> "HPoly":
        """Substitute ``forms[i]`` for ``X_i``.

        All forms share a variable count and, when nonzero, one degree.
        """
        if len(forms) != self.nvars:
            raise ValueError(f"need {self.nvars} forms, got {len(forms)}")
        if not forms:
            raise ValueError("no forms given")
        m = forms[0].nvars
        degs = {f.degree for f in forms if f}
        if any(f.nvars != m for f in forms):
            raise ValueError("forms live in different rings")
        if len(degs) > 1:
            raise ValueError("forms of different degrees")
        form_deg = degs.pop() if degs else 0
        if not self._terms:
            return HPoly.zero(m)
        powers = [[HPoly.constant(1, m)] for _ in forms]
        out: dict = {}
        for exps, c in self._terms.items():
            term = {(0,) * m: c}
            for i, e in enumerate(exps):
                if not e:
                    continue
                cache = powers[i]
                while len(cache) <= e:
                    cache.append(cache[-1] * forms[i])
                factor = cache[e]
                if not factor:
                    term = {}
                    break
                term = _mul_terms(term, factor._terms)
            for te, tc in term.items():
                _add_into(out, te, tc)
        return HPoly._raw(m, out, self._degree * form_deg)

    def divide_exact(self, divisor: "HPoly") -> "HPoly | None":
        """Quotient if ``divisor`` divides ``self`` exactly, else ``None``.

        Plain multivariate division by one polynomial; the remainder is
        zero exactly when the divisor divides.
        """
        self._check(divisor)
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return HPoly.zero(self.nvars)
        key = lambda e: (sum(e), e)  # noqa: E731
        lead_e = max(divisor._terms, key=key)
        lead_c = divisor._terms[lead_e]
        rem = dict(self._terms)
        quot: dict = {}
        while rem:
            e = max(rem, key=key)
            if any(a < b for a, b in zip(e, lead_e)):
                return None
            qe = tuple(a - b for a, b in zip(e, lead_e))
            qc = rem[e] / lead_c
            quot[qe] = qc
            for de, dc in divisor._terms.items():
                _add_into(rem, tuple(a + b for a, b in zip(qe, de)), -qc * dc)
        return HPoly._raw(self.nvars, quot, self._degree - divisor._degree)

    # presentation

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"HPoly({self.nvars}, {self.to_text()!r})"

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = list(names) if names else [f"X{i}" for i in range(self.nvars)]
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exps) if e
            )
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if not mono:
                body = ratio_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{ratio_str(mag)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [{"coeff": ratio_str(c), "exps": list(e)} for e, c in self.items()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "HPoly":
        try:
            nvars = int(doc["nvars"])
            terms = [(t["exps"], ratio(str(t["coeff"]))) for t in doc["terms"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial document: {exc}") from None
        return cls(nvars, terms)


def substitute_linear(p: HPoly, matrix: Sequence[Sequence]) -> HPoly:
    """Return ``p(M X)``: variable ``X_i`` becomes ``sum_j M[i][j] X_j``."""
    from .linalg import determinant, to_matrix

    m = to_matrix(matrix)
    if len(m) != p.nvars or any(len(row) != p.nvars for row in m):
        raise ValueError(f"transform must be {p.nvars}x{p.nvars}")
    if not determinant(m):
        raise ValueError("non-invertible transform")
    return p.compose([HPoly.linear(row) for row in m])


def monomials(nvars: int, degree: int) -> list:
    """All exponent vectors of the given total degree, graded-lex descending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def poly_from_terms(nvars: int, terms: Iterable) -> HPoly:
    return HPoly(nvars, list(terms))


# text parsing

_VAR = re.compile(r"^X(\d+)$")


class ParseError(ValueError):
    pass


def _const_int(node) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return node.value
    raise ParseError("exponents must be integer literals")


def _pad(e, n):
    return tuple(e) + (0,) * (n - len(e))


def _sparse_add(a, b, sign):
    n = max([len(e) for e in list(a) + list(b)] + [0])
    out = {}
    for e, c in a.items():
        _add_into(out, _pad(e, n), c)
    for e, c in b.items():
        _add_into(out, _pad(e, n), sign * c)
    return out


def _sparse_mul(a, b):
    n = max([len(e) for e in list(a) + list(b)] + [0])
    out = {}
    for ea, ca in a.items():
        ea = _pad(ea, n)
        for eb, cb in b.items():
            eb = _pad(eb, n)
            _add_into(out, tuple(x + y for x, y in zip(ea, eb)), ca * cb)
    return out


def _var_exps(index):
    return tuple([0] * index + [1])


def parse_poly(text: str, nvars: int | None = None) -> HPoly:
    """Parse ``"X0*X1*(X0+X1+X2) + X3^3"`` style input.

    ``nvars`` defaults to one more than the largest variable index.
    """
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    if re.search(r"\*\*", text):
        raise ParseError("use ^ for powers")
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    terms = _Evaluator().visit(tree)
    width = max([len(e) for e in terms] + [0])
    n = nvars if nvars is not None else max(width, 1)
    if width > n:
        raise ParseError(f"expression uses X{width - 1} but only {n} variables were requested")
    try:
        return HPoly(n, {_pad(e, n): c for e, c in terms.items()})
    except ValueError as exc:
        raise ParseError(str(exc)) from None


class _Evaluator(ast.NodeVisitor):
    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"unsupported literal {node.value!r}")
        return {(): ratio(node.value)} if node.value else {}

    def visit_Name(self, node):
        m = _VAR.match(node.id)
        if not m:
            raise ParseError(f"unknown name {node.id!r}; variables are X0, X1, ...")
        return {_var_exps(int(m.group(1))): ONE}

    def visit_UnaryOp(self, node):
        inner = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return {e: -c for e, c in inner.items()}
        if isinstance(node.op, ast.UAdd):
            return inner
        raise ParseError("unsupported unary operator")

    def visit_BinOp(self, node):
        left = self.visit(node.left)
        if isinstance(node.op, ast.Pow):
            exp = _const_int(node.right)
            if exp < 0:
                raise ParseError("negative exponent")
            result = {(): ONE}
            for _ in range(exp):
                result = _sparse_mul(result, left)
            return result
        right = self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return _sparse_add(left, right, 1)
        if isinstance(node.op, ast.Sub):
            return _sparse_add(left, right, -1)
        if isinstance(node.op, ast.Mult):
            return _sparse_mul(left, right)
        if isinstance(node.op, ast.Div):
            if not right or any(any(e) for e in right):
                raise ParseError("division only by nonzero constants")
            c = right[next(iter(right))]
            return {e: v / c for e, v in left.items()}
        raise ParseError("unsupported operator")

    def generic_visit(self, node):
        raise ParseError(f"unsupported syntax {type(node).__name__}")
