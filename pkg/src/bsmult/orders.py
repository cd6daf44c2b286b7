"""Monomial orders on exponent vectors.

An order is represented by a key function: exponent tuples compare by the
Python ordering of their keys, larger key = larger monomial.  Keys are
flat integer tuples of fixed length per ring (so they can be negated
componentwise for min-heap use) and are cached per order instance, since
leading-term extraction touches the same monomials over and over during
Groebner basis computations.

Kinds
-----
degrevlex        graded reverse lexicographic (the default everywhere)
lex              pure lexicographic
weight           weight vector first, degrevlex tie-break
block            block elimination: the designated block is compared first
                 (by degrevlex), so a Groebner basis eliminates it
graded_weight    total degree, then weight, then degrevlex; this is the
                 order used on degree-homogenized operator rings so that
                 leading forms are top weight forms
"""

from __future__ import annotations


class MonomialOrder:
    """Total order on fixed-length exponent tuples."""

    __slots__ = ("kind", "nvars", "weight", "block", "_rest", "_cache", "_negcache")

    def __init__(self, kind: str, nvars: int, weight=None, block=None):
        self.kind = kind
        self.nvars = nvars
        self.weight = tuple(weight) if weight is not None else None
        self.block = tuple(sorted(block)) if block is not None else None
        if self.block is not None:
            inblock = set(self.block)
            self._rest = tuple(i for i in range(nvars) if i not in inblock)
        else:
            self._rest = None
        self._cache: dict = {}
        self._negcache: dict = {}

    def key(self, exp):
        k = self._cache.get(exp)
        if k is None:
            k = self._raw_key(exp)
            self._cache[exp] = k
        return k

    def neg_key(self, exp):
        """Componentwise negation of key(exp); reverses the comparison."""
        k = self._negcache.get(exp)
        if k is None:
            k = tuple(-v for v in self.key(exp))
            self._negcache[exp] = k
        return k

    def _raw_key(self, exp):
        kind = self.kind
        if kind == "degrevlex":
            return (sum(exp), *_revneg(exp))
        if kind == "lex":
            return tuple(exp)
        if kind == "weight":
            w = sum(wi * ei for wi, ei in zip(self.weight, exp))
            return (w, sum(exp), *_revneg(exp))
        if kind == "block":
            b = tuple(exp[i] for i in self.block)
            r = tuple(exp[i] for i in self._rest)
            return (sum(b), *_revneg(b), sum(r), *_revneg(r))
        if kind == "graded_weight":
            w = sum(wi * ei for wi, ei in zip(self.weight, exp))
            return (sum(exp), w, *_revneg(exp))
        raise ValueError(f"unknown order kind {kind!r}")

    def leading_exponent(self, exps):
        return max(exps, key=self.key)

    def sort(self, exps, reverse=False):
        return sorted(exps, key=self.key, reverse=reverse)

    def __repr__(self):
        extra = ""
        if self.weight is not None:
            extra += f", weight={self.weight}"
        if self.block is not None:
            extra += f", block={self.block}"
        return f"MonomialOrder({self.kind!r}, {self.nvars}{extra})"


def _revneg(exp):
    return tuple(-e for e in reversed(exp))


def degrevlex(nvars: int) -> MonomialOrder:
    return MonomialOrder("degrevlex", nvars)


def lex(nvars: int) -> MonomialOrder:
    return MonomialOrder("lex", nvars)


def weight_order(weight, nvars: int) -> MonomialOrder:
    return MonomialOrder("weight", nvars, weight=weight)


def elimination_order(block, nvars: int) -> MonomialOrder:
    """Block order eliminating the variables at the given indices."""
    return MonomialOrder("block", nvars, block=block)


def graded_weight_order(weight, nvars: int) -> MonomialOrder:
    return MonomialOrder("graded_weight", nvars, weight=weight)
