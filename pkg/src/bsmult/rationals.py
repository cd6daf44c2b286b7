"""Exact rational scalars.

All coefficient arithmetic in the package is exact.  `gmpy2.mpq` is used
when available (it is a drop-in rational type registered with
``numbers.Rational``); otherwise ``fractions.Fraction``.  Both keep values
reduced with a positive denominator.
"""

from __future__ import annotations

from math import gcd, lcm

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

QLike = object  # ints and Q values are accepted wherever a scalar is expected

ZERO = Q(0)
ONE = Q(1)


def rat(numerator, denominator=None):
    """Build a rational, accepting ints, Q values or 'p/q' strings."""
    if denominator is not None:
        return Q(numerator, denominator)
    if isinstance(numerator, str):
        text = numerator.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            return Q(int(p), int(q))
        return Q(int(text))
    return Q(numerator)


def rat_str(value) -> str:
    """Canonical 'p/q' form, with '/q' omitted for integers."""
    return str(value)


def content(coeffs) -> "Q":
    """Positive rational c with coeffs/c integral, coprime as a whole.

    Returns 1 for an empty sequence.
    """
    num = 0
    den = 1
    for c in coeffs:
        num = gcd(num, int(c.numerator))
        den = lcm(den, int(c.denominator))
    if num == 0:
        return ONE
    return Q(num, den)
