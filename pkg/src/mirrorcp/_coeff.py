"""Exact rational coefficients.

Everything in this package computes over Q, never over floats. gmpy2.mpq is
used when available (noticeably faster on deep runs); stdlib Fraction is the
drop-in fallback. Both are normalized (lowest terms, positive denominator), so
the Rational contract holds for either backend.
"""

try:
    from gmpy2 import mpq as Q

    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only where gmpy2 is absent
    from fractions import Fraction as Q

    BACKEND = "fractions"

ZERO = Q(0)
ONE = Q(1)


def rat(num, den=1):
    """Build a rational from integers (or parse a 'p/q' / 'p' string)."""
    if isinstance(num, str):
        if "/" in num:
            p, q = num.split("/")
            return Q(int(p), int(q))
        return Q(int(num))
    return Q(num, den)


def rat_str(x):
    """Serialize exactly: 'p/q', or just 'p' when the denominator is 1."""
    p, q = x.numerator, x.denominator
    if q == 1:
        return str(p)
    return "%d/%d" % (p, q)


def is_integer(x):
    return x.denominator == 1


def factorial(k):
    r = 1
    for i in range(2, k + 1):
        r *= i
    return r
