"""Exact rationals.

``Ratio`` is gmpy2's ``mpq``: always reduced, positive denominator, and
about ten times faster than :class:`fractions.Fraction` in the inner loops
of series multiplication.
"""

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

Ratio = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)


def ratio(value) -> Ratio:
    """Coerce ints, ``"p/q"`` strings, Fractions and mpq values to a Ratio."""
    if isinstance(value, Ratio):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        try:
            return mpq(text)
        except ValueError:
            raise ValueError(f"bad rational literal {value!r}") from None
    if isinstance(value, Rational):
        return mpq(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    return mpq(value)


def ratio_str(value) -> str:
    return str(ratio(value))


def to_fraction(value) -> Fraction:
    value = ratio(value)
    return Fraction(int(value.numerator), int(value.denominator))


def rational_root(value, n: int):
    """Exact ``n``-th root of a rational, or ``None`` if it is irrational."""
    import gmpy2

    value = ratio(value)
    if n < 1:
        raise ValueError("root index must be positive")
    sign = 1
    if value < 0:
        if n % 2 == 0:
            return None
        sign = -1
        value = -value
    num, num_exact = gmpy2.iroot(gmpy2.mpz(value.numerator), n)
    den, den_exact = gmpy2.iroot(gmpy2.mpz(value.denominator), n)
    if not (num_exact and den_exact):
        return None
    return mpq(sign * num, den)
