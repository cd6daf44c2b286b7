"""Local b-functions at a prime and stratification by local b-function.

The locus where the local b-function fails to divide a given candidate is
cut out by an ideal obtained from syzygies: among the s-power shifts of an
eliminating basis of the functional-equation ideal in K[x,s] and the
candidate itself, the syzygy coordinates on the candidate are exactly the
cofactors h with h*b in the ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .bfunction import DEFAULT_CAP, global_b_function
from .bpoly import BPoly
from .groebner import (
    eliminate,
    groebner_basis,
    ideal_intersection,
    in_radical,
    intersect_many,
    is_member,
)
from .orders import elimination_order
from .poly import Polynomial
from .rationals import Q
from .weyl import (
    WeylRing,
    euler_to_s,
    graph_ideal,
    initial_ideal,
    to_weight_zero,
    weyl_eliminate,
    _fresh,
)


@lru_cache(maxsize=None)
def _cached_global_b(f: Polynomial) -> BPoly:
    return global_b_function(f)


@lru_cache(maxsize=None)
def equation_ideal_xs(f: Polynomial):
    """Generators in K[x,s] of the left sides of local functional equations.

    Take top weight forms of the graph ideal, eliminate the derivations in
    the base variables, normalize each generator to weight zero and
    rewrite the Euler block in terms of s.  Returns (svar, generators).
    """
    ring, gens = graph_ideal([f])
    ini = initial_ideal(gens)
    dx_names = ["d" + v for v in ring.xvars]
    cut = weyl_eliminate(ini, dx_names)
    sname = _fresh("s", set(ring.names))
    helper = WeylRing(ring.xvars, (), centrals=(sname,))
    target = f.ring + (sname,)
    out = []
    for g in cut:
        e = euler_to_s(to_weight_zero(g), helper, sname)
        p = e.to_polynomial(target).primitive()
        if not p.is_zero():
            out.append(p)
    return sname, tuple(out)


def _exact_quotient(p: Polynomial, b: Polynomial, order) -> Polynomial:
    """p / b for p a known multiple of b (monic lead under `order`)."""
    ring = p.ring
    lead_exp, lead_c = b.leading(order)
    quotient = Polynomial.zero(ring)
    rem = p
    while not rem.is_zero():
        e, c = rem.leading(order)
        shift = tuple(a - bb for a, bb in zip(e, lead_exp))
        if any(k < 0 for k in shift):
            raise ValueError("polynomial is not a multiple of the divisor")
        mono = Polynomial.monomial(ring, shift, c / lead_c)
        quotient = quotient + mono
        rem = rem - mono * b
    return quotient


def exceptional_locus_core(gens, b: BPoly, svar: str):
    """The ideal of cofactors h in K[x] with h*b inside the K[x,s]-ideal.

    Computed as the colon ideal by b followed by elimination of s: the
    intersection with the principal ideal of b is divided through by b and
    cut down to the s-free part.  The cofactor membership h*b in the ideal
    happens within s-degree deg b automatically, since h is s-free and b
    is monic in s.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    sidx = ring.index(svar)
    xring = ring[:sidx] + ring[sidx + 1 :]
    order = elimination_order([sidx], len(ring))
    if b.is_one():
        cut = eliminate(gens, [svar])
        return groebner_basis([g.map_ring(xring) for g in cut])
    bpoly = b.as_polynomial(ring, svar)
    meet = ideal_intersection(gens, [bpoly])
    quotients = [_exact_quotient(q, bpoly, order) for q in meet]
    cofree = eliminate(quotients, [svar])
    return groebner_basis([g.map_ring(xring) for g in cofree])


def exceptional_locus(f: Polynomial, b: BPoly):
    """Ideal E with: the local b-function at P divides b iff E is not inside P."""
    if f.is_constant():
        raise ValueError("f must be nonconstant")
    svar, gens = equation_ideal_xs(f)
    return exceptional_locus_core(list(gens), b, svar)


def _contained_in_prime(gens, prime_gb) -> bool:
    return all(is_member(g, prime_gb) for g in gens)


def local_b_function(f: Polynomial, prime_gens, cap: int = DEFAULT_CAP) -> BPoly:
    """Local b-function of f at the prime spanned by `prime_gens`.

    Primality is the caller's responsibility; properness is checked.
    Starting from the global b-function, factors are stripped while the
    stripped candidate still works at the prime.
    """
    prime_gens = list(prime_gens)
    prime_gb = groebner_basis(prime_gens)
    if len(prime_gb) == 1 and prime_gb[0].is_constant():
        raise ValueError("prime ideal must be proper")
    b = _cached_global_b(f)
    for root, _ in sorted(b.roots, key=lambda rm: (abs(rm[0]), rm[0])):
        while b.multiplicity(root) > 0:
            candidate = b.without_root(root)
            locus = exceptional_locus(f, candidate)
            if _contained_in_prime(locus, prime_gb):
                break
            b = candidate
    return b


@dataclass(frozen=True)
class Stratum:
    divisor: BPoly
    closure: tuple  # ideal generators of the closed part; () means everything
    excluded: tuple  # tuple of generator tuples for the removed closed sets


def _stratum_is_empty(closure, excluded) -> bool:
    if closure and len(closure) == 1 and closure[0].is_constant():
        return True
    if any(not exc for exc in excluded):
        # a removed set given by the zero ideal covers everything
        return True
    if not excluded:
        return False
    cover = intersect_many(excluded)
    if closure:
        return all(in_radical(g, list(closure)) for g in cover)
    return all(g.is_zero() for g in cover)


def local_b_stratification(f: Polynomial, cap: int = DEFAULT_CAP):
    """Partition of affine space by the value of the local b-function.

    For every divisor of the global b-function the candidate stratum is
    the intersection of the loci forcing each root multiplicity, minus the
    loci forcing one more; empty candidates are discarded by an exact
    radical-membership cover test.
    """
    if f.is_constant():
        raise ValueError("f must be nonconstant")
    b = _cached_global_b(f)
    roots = list(b.roots)
    loci = {}
    for root, mult in roots:
        for i in range(mult + 1):
            loci[(root, i)] = exceptional_locus(f, b.without_root(root, mult - i))
    strata = []
    choices = [()]
    for root, mult in roots:
        choices = [prev + (i,) for prev in choices for i in range(mult + 1)]
    for choice in choices:
        closure_gens = []
        excluded = []
        for (root, mult), i in zip(roots, choice):
            if i > 0:
                closure_gens.extend(loci[(root, i - 1)])
            exc = loci[(root, i)]
            if not (len(exc) == 1 and exc[0].is_constant()):
                excluded.append(tuple(exc))
        closure = tuple(groebner_basis(closure_gens)) if closure_gens else ()
        excluded = tuple(excluded)
        if _stratum_is_empty(closure, excluded):
            continue
        divisor = BPoly.from_roots(
            [(root, i) for (root, _), i in zip(roots, choice) if i > 0]
        )
        strata.append(Stratum(divisor, closure, excluded))
    strata.sort(key=lambda s: (s.divisor.degree(), s.divisor.coeffs))
    return strata
