"""Sparse multivariate polynomials over the rationals.

A ring is just an ordered tuple of variable names; a polynomial is an
immutable map from exponent tuples to nonzero rational coefficients.
Operations between polynomials require identical rings.
"""

from __future__ import annotations

from itertools import product as _cartesian

from .rationals import Q, ZERO, ONE, content, rat, rat_str


class RingMismatchError(ValueError):
    pass


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = tuple(ring)
        clean = {}
        n = len(self.ring)
        for exp, c in terms.items():
            if len(exp) != n:
                raise ValueError("exponent length does not match ring")
            c = Q(c)
            if c != 0:
                clean[exp] = c
        self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def constant(cls, ring, c):
        c = Q(c)
        if c == 0:
            return cls.zero(ring)
        return cls(ring, {(0,) * len(ring): c})

    @classmethod
    def variable(cls, ring, name):
        ring = tuple(ring)
        i = ring.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(ring)))
        return cls(ring, {exp: ONE})

    @classmethod
    def monomial(cls, ring, exp, c=ONE):
        return cls(ring, {tuple(exp): Q(c)})

    # predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if self.is_zero():
            return ZERO
        ((exp, c),) = self.terms.items()
        if sum(exp):
            raise ValueError("not a constant polynomial")
        return c

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, index: int) -> int:
        if not self.terms:
            return -1
        return max(e[index] for e in self.terms)

    # arithmetic ------------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"rings differ: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.ring, other)
        self._check(other)
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e, ZERO) + c
            if s == 0:
                res.pop(e, None)
            else:
                res[e] = s
        return Polynomial._raw(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = Q(other)
            if c == 0:
                return Polynomial.zero(self.ring)
            return Polynomial._raw(self.ring, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        res = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                s = res.get(e, ZERO) + c1 * c2
                if s == 0:
                    res.pop(e, None)
                else:
                    res[e] = s
        return Polynomial._raw(self.ring, res)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __truediv__(self, scalar):
        c = Q(scalar)
        return self * (ONE / c)

    @classmethod
    def _raw(cls, ring, terms):
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # structure -------------------------------------------------------------

    def leading(self, order):
        """(exponent, coefficient) of the leading term under `order`."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def coefficient_of(self, exp):
        return self.terms.get(tuple(exp), ZERO)

    def monic(self, order):
        if not self.terms:
            return self
        _, c = self.leading(order)
        if c == 1:
            return self
        return self * (ONE / c)

    def primitive(self):
        """Scale by a positive rational so coefficients are coprime integers."""
        if not self.terms:
            return self
        c = content(self.terms.values())
        if c == 1:
            return self
        return self * (ONE / c)

    def derivative(self, index: int):
        res = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                e2 = e[:index] + (k - 1,) + e[index + 1 :]
                s = res.get(e2, ZERO) + c * k
                if s == 0:
                    res.pop(e2, None)
                else:
                    res[e2] = s
        return Polynomial._raw(self.ring, res)

    def evaluate(self, point):
        """Value at a rational point (one scalar per ring variable)."""
        point = [Q(v) for v in point]
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x**k
            total += v
        return total

    def substitute_var(self, index: int, value):
        """Specialize one variable to a scalar; the ring keeps its shape."""
        value = Q(value)
        res = {}
        for e, c in self.terms.items():
            k = e[index]
            c2 = c * value**k if k else c
            e2 = e[:index] + (0,) + e[index + 1 :]
            s = res.get(e2, ZERO) + c2
            if s == 0:
                res.pop(e2, None)
            else:
                res[e2] = s
        return Polynomial._raw(self.ring, res)

    def map_ring(self, new_ring):
        """Reinterpret over `new_ring`, matching variables by name.

        Source variables absent from the target must be unused by the
        polynomial; empty slots in the target get exponent zero.
        """
        new_ring = tuple(new_ring)
        idx = []
        for i, name in enumerate(self.ring):
            if name in new_ring:
                idx.append((i, new_ring.index(name)))
            elif any(e[i] for e in self.terms):
                raise ValueError(f"variable {name!r} is used but absent from target ring")
        width = len(new_ring)
        res = {}
        for e, c in self.terms.items():
            e2 = [0] * width
            for src, dst in idx:
                e2[dst] = e[src]
            res[tuple(e2)] = c
        return Polynomial(new_ring, res)

    def variables_used(self):
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring[i])
        return used

    # comparisons -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if self.is_constant() or self.is_zero():
                try:
                    return self.constant_value() == Q(other)
                except (TypeError, ValueError):
                    return NotImplemented
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # display ---------------------------------------------------------------

    def to_string(self, order=None) -> str:
        if not self.terms:
            return "0"
        if order is None:
            from .orders import degrevlex

            order = degrevlex(len(self.ring))
        parts = []
        for e in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{name}^{k}" if k > 1 else name
                for name, k in zip(self.ring, e)
                if k
            )
            if not mono:
                body = rat_str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{rat_str(abs(c))}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return self.to_string()


def poly_from_dict(ring, named_terms):
    """Build from {'x': 2, ...}-keyed exponents given as dicts, for tests."""
    ring = tuple(ring)
    terms = {}
    for spec, c in named_terms.items():
        exp = [0] * len(ring)
        for name, k in spec.items():
            exp[ring.index(name)] = k
        terms[tuple(exp)] = rat(c)
    return Polynomial(ring, terms)


def ideal_product(a, b):
    """Generators of the product of two ideals (pairwise products)."""
    return [p * q for p, q in _cartesian(a, b)]
