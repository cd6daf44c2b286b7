"""Generalized and m-generalized b-functions of a polynomial ideal.

Both variants reduce to the same minimal-polynomial search over a left
ideal built from the weight-homogeneous part of the graph relations: the
generalized version adjoins g*f_i together with a central s tied to the
Euler operator, the m-generalized version adjoins all products of the
generators of total multidegree m.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from itertools import combinations_with_replacement
from math import inf

from .bfunction import DEFAULT_CAP, sigma_minimal_polynomial
from .bpoly import BPoly
from .groebner import ideal_dimension
from .poly import Polynomial
from .rationals import Q
from .weyl import (
    WeylElement,
    graph_ideal,
    homogeneous_subideal,
    initial_ideal,
    weyl_eliminate,
    _fresh,
)


class GeneralBMethod(Enum):
    STAR_IDEAL = "star"
    INITIAL_IDEAL = "initial"


def _as_poly_list(fs):
    fs = [f for f in fs]
    if not fs:
        raise ValueError("need at least one generator")
    ring = fs[0].ring
    out = []
    for f in fs:
        if not isinstance(f, Polynomial):
            f = Polynomial.constant(ring, f)
        if f.is_zero():
            raise ValueError("zero generator in the ideal")
        out.append(f)
    return tuple(out)


def _as_g(g, ring):
    if not isinstance(g, Polynomial):
        g = Polynomial.constant(ring, g)
    if g.is_zero():
        raise ValueError("g must be nonzero")
    return g


@lru_cache(maxsize=None)
def graph_with_star(fs):
    """(ring, graph generators, weight-homogeneous subideal generators)."""
    ring, gens = graph_ideal(list(fs))
    star = homogeneous_subideal(gens)
    return ring, tuple(gens), tuple(star)


def power_products(fs, m: int):
    """All products f^alpha with |alpha| = m, in graded-lex order of alpha."""
    fs = list(fs)
    out = []
    for combo in combinations_with_replacement(range(len(fs)), m):
        p = Polynomial.constant(fs[0].ring, 1)
        for i in combo:
            p = p * fs[i]
        out.append(p)
    return out


def _weyl_ideal_intersection(gens, other, ring):
    """Intersection of two left ideals via one central tag variable."""
    tag = _fresh("a", set(ring.names))
    ring_a = ring.extended((tag,))
    a = WeylElement.variable(ring_a, tag)
    mixed = [a * g.map_ring(ring_a) for g in gens]
    mixed += [(a - 1) * g.map_ring(ring_a) for g in other]
    cut = weyl_eliminate(mixed, [tag])
    return [g.map_ring(ring) for g in cut]


def generalized_b_function(
    fs,
    g=1,
    method: GeneralBMethod = GeneralBMethod.STAR_IDEAL,
    cap: int = DEFAULT_CAP,
) -> BPoly:
    """The generalized b-function of the ideal of f_1..f_r at g."""
    fs = _as_poly_list(fs)
    base = fs[0].ring
    g = _as_g(g, base)
    ring, gens, star = graph_with_star(fs)
    if method == GeneralBMethod.STAR_IDEAL:
        sname = _fresh("s", set(ring.names))
        ring_s = ring.extended((sname,))
        s = WeylElement.variable(ring_s, sname)
        big = [e.map_ring(ring_s) for e in star]
        for f in fs:
            big.append(WeylElement.from_polynomial(ring_s, g * f))
        big.append(s - ring_s.sigma())
        return sigma_minimal_polynomial(g, big, sigma=ring_s.sigma(), cap=cap)
    if method == GeneralBMethod.INITIAL_IDEAL:
        if g.is_constant():
            cut = list(gens)
        else:
            gw = WeylElement.from_polynomial(ring, g)
            cut = _weyl_ideal_intersection(list(gens), [gw], ring)
        ini = initial_ideal(cut)
        return sigma_minimal_polynomial(g, ini, cap=cap)
    raise ValueError(f"unknown method {method!r}")


@lru_cache(maxsize=None)
def _star_with_powers(fs, m: int):
    ring, _, star = graph_with_star(fs)
    big = list(star)
    for p in power_products(list(fs), m):
        big.append(WeylElement.from_polynomial(ring, p))
    return ring, tuple(big)


@lru_cache(maxsize=None)
def _generalized_bm_cached(fs, g: Polynomial, m: int, cap: int) -> BPoly:
    ring, big = _star_with_powers(fs, m)
    return sigma_minimal_polynomial(g, list(big), sigma=ring.sigma(), cap=cap)


def generalized_b_function_m(fs, g, m: int, cap: int = DEFAULT_CAP) -> BPoly:
    """The m-generalized b-function: right-hand sides from the m-th power."""
    fs = _as_poly_list(fs)
    if m < 1:
        raise ValueError("m must be a positive integer")
    g = _as_g(g, fs[0].ring)
    return _generalized_bm_cached(fs, g, m, cap)


@lru_cache(maxsize=None)
def lct_value(fs):
    """Log-canonical threshold: smallest sign-flipped root of the
    1-generalized b-function; the unit ideal gets the +infinity sentinel."""
    fs = _as_poly_list(fs)
    one = Polynomial.constant(fs[0].ring, 1)
    b = generalized_b_function_m(fs, one, 1)
    least = b.min_negated_root()
    return inf if least is None else least


def in_multiplier_ideal(fs, g, c, m: int | None = None, cap: int = DEFAULT_CAP) -> bool:
    """Membership of g in the multiplier ideal with coefficient c.

    Uses the generalized b-function of the pair; with `m` given, the
    m-generalized variant, valid for c < m + lct.
    """
    fs = _as_poly_list(fs)
    c = Q(c)
    if c < 0:
        raise ValueError("c must be nonnegative")
    if isinstance(g, Polynomial) and g.is_zero():
        return True
    g = _as_g(g, fs[0].ring)
    if m is not None:
        bound = lct_value(fs)
        if not (bound == inf or c < m + bound):
            raise ValueError(
                f"membership via the m-generalized b-function requires c < m + lct "
                f"(here c = {c}, m = {m}, lct = {bound})"
            )
        b = generalized_b_function_m(fs, g, m, cap=cap)
    else:
        b = generalized_b_function(fs, g, cap=cap)
    least = b.min_negated_root()
    return least is None or c < least


def has_rational_singularities(fs, cap: int = DEFAULT_CAP) -> bool:
    """Rational-singularity test for a complete intersection of codim r.

    The codimension is verified; the complete-intersection property is the
    caller's assertion.  True iff the smallest sign-flipped root of the
    generalized b-function equals r with multiplicity one.
    """
    fs = _as_poly_list(fs)
    r = len(fs)
    n = len(fs[0].ring)
    dim = ideal_dimension(list(fs))
    if n - dim != r:
        raise ValueError(f"codimension {n - dim} differs from the number of generators {r}")
    one = Polynomial.constant(fs[0].ring, 1)
    b = generalized_b_function(fs, one, cap=cap)
    neg = b.negated_roots()
    least, mult = neg[0]
    return least == Q(r) and mult == 1
