"""Univariate polynomials in s with rational-root bookkeeping.

A BPoly is a monic polynomial together with its multiset of rational
roots.  Root extraction clears denominators, enumerates rational-root
candidates from divisors of the outer coefficients and deflates; the
rational-root-free residual is reported separately and must be 1 before a
polynomial is accepted as a b-polynomial.
"""

from __future__ import annotations

from math import isqrt

from .poly import Polynomial
from .rationals import Q, ONE, ZERO, rat_str


class ResidualFactorError(ValueError):
    """A polynomial expected to split over Q has a non-rational factor."""


class FactorizationLimitError(ValueError):
    """Coefficient factorization exceeded the trial-division budget."""


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factorize(n: int, limit: int = 1_000_000) -> dict:
    """Prime factorization by trial division; error if a large composite remains."""
    n = abs(n)
    factors: dict = {}
    if n <= 1:
        return factors
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    f = 5
    while f <= limit and f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                factors[p] = factors.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        if _is_probable_prime(n):
            factors[n] = factors.get(n, 0) + 1
        else:
            raise FactorizationLimitError(
                f"cannot factor coefficient {n} within trial-division budget"
            )
    return factors


def _divisors(n: int):
    divs = [1]
    for p, k in _factorize(n).items():
        divs = [d * p**i for d in divs for i in range(k + 1)]
    return sorted(divs)


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _eval(coeffs, x):
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs, root):
    """coeffs / (s - root), assuming exact divisibility."""
    n = len(coeffs) - 1
    out = [ZERO] * n
    carry = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = carry
        carry = coeffs[i] + carry * root
    return out


def rational_roots(poly):
    """All rational roots with multiplicities, plus the monic residual.

    Accepts a coefficient sequence (ascending) or a univariate Polynomial.
    The product of (s - root)^mult times the residual reconstructs the
    monic normalization of the input.
    """
    if isinstance(poly, Polynomial):
        if len(poly.ring) != 1:
            raise ValueError("rational_roots expects a univariate polynomial")
        deg = poly.total_degree()
        coeffs = [poly.coefficient_of((i,)) for i in range(deg + 1)]
    else:
        coeffs = [Q(c) for c in poly]
    coeffs = _strip(coeffs)
    if not coeffs:
        raise ValueError("zero polynomial")
    lead = coeffs[-1]
    coeffs = [c / lead for c in coeffs]

    roots = []
    mult0 = 0
    while coeffs[0] == 0:
        coeffs = coeffs[1:]
        mult0 += 1
    if mult0:
        roots.append((ZERO, mult0))
    while len(coeffs) > 1:
        den_lcm = 1
        for c in coeffs:
            d = int(c.denominator)
            den_lcm = den_lcm * d // _gcd(den_lcm, d)
        ints = [int(c.numerator) * (den_lcm // int(c.denominator)) for c in coeffs]
        a0, an = ints[0], ints[-1]
        found = None
        for p in _divisors(a0):
            for q in _divisors(an):
                if _gcd(p, q) != 1:
                    continue
                for cand in (Q(p, q), Q(-p, q)):
                    if _eval(coeffs, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        mult = 0
        while _eval(coeffs, found) == 0:
            coeffs = _deflate(coeffs, found)
            mult += 1
        roots.append((found, mult))
    roots.sort(key=lambda rm: (abs(rm[0]), rm[0]))
    return roots, tuple(coeffs)


def _gcd(a, b):
    a, b = abs(int(a)), abs(int(b))
    while b:
        a, b = b, a % b
    return a


class BPoly:
    """Monic univariate polynomial in s splitting over Q."""

    __slots__ = ("coeffs", "roots")

    def __init__(self, coeffs, roots):
        self.coeffs = tuple(coeffs)
        self.roots = tuple(roots)

    @classmethod
    def from_coefficients(cls, coeffs):
        roots, residual = rational_roots(coeffs)
        if residual != (ONE,):
            raise ResidualFactorError(
                "polynomial has a factor without rational roots; "
                f"residual coefficients {tuple(rat_str(c) for c in residual)}"
            )
        return cls.from_roots(roots)

    @classmethod
    def from_roots(cls, roots):
        merged: dict = {}
        for r, m in roots:
            r = Q(r)
            if m <= 0:
                continue
            merged[r] = merged.get(r, 0) + m
        pairs = sorted(merged.items(), key=lambda rm: (abs(rm[0]), rm[0]))
        coeffs = [ONE]
        for r, m in pairs:
            for _ in range(m):
                coeffs = [ZERO] + coeffs
                for i in range(len(coeffs) - 1):
                    coeffs[i] -= r * coeffs[i + 1]
        return cls(coeffs, pairs)

    @classmethod
    def one(cls):
        return cls((ONE,), ())

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_one(self) -> bool:
        return self.degree() == 0

    def multiplicity(self, root) -> int:
        root = Q(root)
        for r, m in self.roots:
            if r == root:
                return m
        return 0

    def without_root(self, root, times=1):
        """Divide out (s - root)^times."""
        root = Q(root)
        out = []
        for r, m in self.roots:
            m2 = m - times if r == root else m
            if m2 > 0:
                out.append((r, m2))
            elif m2 < 0:
                raise ValueError("root multiplicity exhausted")
        return BPoly.from_roots(out)

    def divides(self, other: "BPoly") -> bool:
        return all(other.multiplicity(r) >= m for r, m in self.roots)

    def negated_roots(self):
        """Roots of b(-s), i.e. sign-flipped roots, sorted ascending."""
        return sorted(((-r, m) for r, m in self.roots), key=lambda rm: rm[0])

    def min_negated_root(self):
        """Smallest root of b(-s); None for the constant polynomial 1."""
        if not self.roots:
            return None
        return min(-r for r, _ in self.roots)

    def evaluate(self, x):
        return _eval(list(self.coeffs), Q(x))

    def as_polynomial(self, ring, var="s") -> Polynomial:
        ring = tuple(ring)
        i = ring.index(var)
        terms = {}
        for k, c in enumerate(self.coeffs):
            if c != 0:
                e = [0] * len(ring)
                e[i] = k
                terms[tuple(e)] = c
        return Polynomial(ring, terms)

    def factored_str(self, var="s") -> str:
        if not self.roots:
            return "1"
        parts = []
        for r, m in self.roots:
            if r == 0:
                base = var
            elif r < 0:
                base = f"({var}+{rat_str(-r)})"
            else:
                base = f"({var}-{rat_str(r)})"
            parts.append(base if m == 1 else f"{base}^{m}")
        return "".join(parts)

    def __eq__(self, other):
        if not isinstance(other, BPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return self.factored_str()


def bpoly_lcm(items):
    """Least common multiple of b-polynomials from their root multisets."""
    acc: dict = {}
    for b in items:
        for r, m in b.roots:
            acc[r] = max(acc.get(r, 0), m)
    return BPoly.from_roots(list(acc.items()))
