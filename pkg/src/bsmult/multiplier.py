"""Multiplier ideals, log-canonical thresholds and jumping coefficients.

The syzygy route eliminates everything but the base variables and s from
the weight-homogeneous graph relations plus an m-th power block, then
reuses the cofactor-ideal subroutine of the local theory.  The linear
algebra route avoids that elimination and assembles the ideal degree by
degree from kernels of normal-form matrices; it certifies completeness
only when the quotient is finite dimensional, otherwise the result is
flagged partial.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import inf

from .bfunction import DEFAULT_CAP
from .bpoly import BPoly
from .generalized import (
    _as_poly_list,
    _star_with_powers,
    generalized_b_function_m,
    graph_with_star,
    lct_value,
)
from .groebner import eliminate, groebner_basis, ideal_equals
from .linalg import nullspace
from .localb import exceptional_locus_core
from .orders import degrevlex, elimination_order
from .poly import Polynomial
from .rationals import Q, ONE
from .weyl import (
    WeylElement,
    WeylRing,
    euler_to_s,
    to_weight_zero,
    weyl_eliminate,
    weyl_groebner,
    weyl_normal_form,
    _fresh,
)

log = logging.getLogger("bsmult")


@dataclass(frozen=True)
class IdealResult:
    """Generators of a computed ideal plus how they were obtained."""

    generators: tuple
    partial: bool = False
    note: str = ""

    def __iter__(self):
        return iter(self.generators)


@dataclass(frozen=True)
class JumpingData:
    lct: object  # rational, or math.inf for the unit ideal
    jumps: tuple
    ideals: tuple  # ideals[i] = generators of the multiplier ideal at jumps[i]


def _qceil(q) -> int:
    q = Q(q)
    num, den = int(q.numerator), int(q.denominator)
    return -((-num) // den)


def _qfloor(q) -> int:
    q = Q(q)
    return int(q.numerator) // int(q.denominator)


def lct(fs, cap: int = DEFAULT_CAP):
    """Log-canonical threshold of the ideal of f_1..f_r."""
    return lct_value(_as_poly_list(fs))


def _exponent_m(c, threshold) -> int:
    gap = c - threshold
    m = max(_qceil(gap), 1)
    if gap >= 1 and Q(gap).denominator == 1:
        m += 1
    return m


@lru_cache(maxsize=None)
def _equation_ideal_with_powers(fs, m: int):
    """K[x,s]-ideal of the m-th functional equations: eliminate operators.

    Everything weight-homogeneous in the star generators plus the m-th
    power block is cut down to the base variables and s.  With one graph
    variable only the derivations in x need to be eliminated; the result
    is weight-normalized and the Euler block rewritten in s.  With several
    graph variables a central s tied to sigma is adjoined and the whole
    operator block eliminated.  This is the run-time hot spot; duration is
    logged.
    """
    ring, big = _star_with_powers(fs, m)
    sname = _fresh("s", set(ring.names))
    target = fs[0].ring + (sname,)
    t0 = time.perf_counter()
    if len(ring.tvars) == 1:
        drop = ["d" + v for v in ring.xvars]
        cut = weyl_eliminate(list(big), drop)
        helper = WeylRing(ring.xvars, (), centrals=(sname,))
        gens = []
        for e in cut:
            p = euler_to_s(to_weight_zero(e), helper, sname).to_polynomial(target)
            p = p.primitive()
            if not p.is_zero():
                gens.append(p)
    else:
        ring_s = ring.extended((sname,))
        s = WeylElement.variable(ring_s, sname)
        lifted = [e.map_ring(ring_s) for e in big]
        lifted.append(s - ring_s.sigma())
        drop = ["d" + v for v in ring.xvars]
        drop += list(ring.tvars)
        drop += ["d" + v for v in ring.tvars]
        cut = weyl_eliminate(lifted, drop)
        gens = []
        for e in cut:
            p = e.to_polynomial(target).primitive()
            if not p.is_zero():
                gens.append(p)
    log.info(
        "operator elimination for m=%d finished in %.2fs (%d generators)",
        m,
        time.perf_counter() - t0,
        len(gens),
    )
    return sname, tuple(gens)


@lru_cache(maxsize=None)
def _bm_from_equation_ideal(fs, m: int) -> BPoly:
    """b-polynomial at g=1 read off the equation ideal: the monic generator
    of its purely-s part.  Equal to the m-generalized b-function; far
    cheaper than the operator-side search once the ideal is at hand."""
    svar, gens = _equation_ideal_with_powers(fs, m)
    xvars = [v for v in gens[0].ring if v != svar]
    cut = eliminate(list(gens), xvars)
    if len(cut) != 1:
        raise RuntimeError("purely-s part of the equation ideal is not principal")
    uni = cut[0].map_ring((svar,))
    coeffs = [uni.coefficient_of((i,)) for i in range(uni.total_degree() + 1)]
    return BPoly.from_coefficients(coeffs)


def multiplier_ideal(fs, c, cap: int = DEFAULT_CAP) -> IdealResult:
    """Multiplier ideal with coefficient c, by the syzygy route."""
    fs = _as_poly_list(fs)
    c = Q(c)
    if c < 0:
        raise ValueError("c must be nonnegative")
    one = Polynomial.constant(fs[0].ring, 1)
    if c == 0:
        return IdealResult((one,), note="multiplier ideal at c=0 is trivial")
    threshold = lct_value(fs)
    if threshold == inf:
        return IdealResult((one,), note="unit ideal: every multiplier ideal is trivial")
    if c < threshold:
        return IdealResult((one,), note=f"c below the log-canonical threshold {threshold}")
    m = _exponent_m(c, threshold)
    svar, gens = _equation_ideal_with_powers(fs, m)
    b = _bm_from_equation_ideal(fs, m)
    keep = [(r, mult) for r, mult in b.roots if -r > c]
    bprime = BPoly.from_roots(keep)
    locus = exceptional_locus_core(list(gens), bprime, svar)
    return IdealResult(tuple(locus), note=f"syzygy route, m={m}")


@lru_cache(maxsize=None)
def _operator_basis(fs, m: int):
    """Groebner basis of star generators plus the m-th power block."""
    ring, big = _star_with_powers(fs, m)
    order = degrevlex(ring.width)
    return ring, tuple(weyl_groebner(list(big), order)), order


def _monomials_up_to(ring, d: int):
    n = len(ring)
    out = []

    def rec(prefix, remaining, budget):
        if remaining == 1:
            for k in range(budget + 1):
                out.append(tuple(prefix + [k]))
            return
        for k in range(budget + 1):
            rec(prefix + [k], remaining - 1, budget - k)

    rec([], n, d)
    out.sort(key=lambda e: (sum(e), tuple(reversed([-k for k in e]))))
    return out


def multiplier_ideal_linalg(fs, c, dmax=None, cap: int = DEFAULT_CAP) -> IdealResult:
    """Multiplier ideal by degree-capped linear algebra.

    Builds kernel combinations of normal forms of x^alpha * b'(sigma) for
    standard monomials of growing degree.  Certified complete when every
    monomial of the current degree lies in the initial ideal of what was
    found; hitting dmax first yields a partial basis and a flag.
    """
    fs = _as_poly_list(fs)
    c = Q(c)
    if c < 0:
        raise ValueError("c must be nonnegative")
    base = fs[0].ring
    one = Polynomial.constant(base, 1)
    threshold = lct_value(fs)
    if threshold == inf:
        return IdealResult((one,), note="unit ideal: every multiplier ideal is trivial")
    if dmax is None:
        dmax = 2 * max(f.total_degree() for f in fs)
    m = _exponent_m(c, threshold) if c > 0 else 1
    ring, basis, order = _operator_basis(fs, m)
    b = generalized_b_function_m(fs, one, m, cap=cap)
    keep = [(r, mult) for r, mult in b.roots if -r > c]
    bprime = BPoly.from_roots(keep)
    bsigma = WeylElement.constant(ring, bprime.coeffs[-1])
    sigma = ring.sigma()
    for coeff in reversed(bprime.coeffs[:-1]):
        bsigma = sigma * bsigma + WeylElement.constant(ring, coeff)

    found: list[Polynomial] = []
    partial = False
    d = -1
    base_order = degrevlex(len(base))
    while True:
        if found:
            lead_gb = groebner_basis(found, base_order)
            leads = [g.leading(base_order)[0] for g in lead_gb]
        else:
            leads = []

        def in_initial(e):
            return any(all(a <= b_ for a, b_ in zip(le, e)) for le in leads)

        if d >= 0 and found:
            if all(in_initial(e) for e in _monomials_up_to(base, d) if sum(e) == d):
                break
        if d >= dmax:
            partial = True
            break
        d += 1
        standard = [e for e in _monomials_up_to(base, d) if not in_initial(e)]
        rows = []
        for e in standard:
            xa = WeylElement.monomial(ring, _embed_exp(ring, base, e))
            nf = weyl_normal_form(xa * bsigma, list(basis), order)
            rows.append(nf.terms)
        for combo in nullspace(rows, key=order.key):
            p = Polynomial(base, {standard[i]: coeff for i, coeff in combo.items()})
            if not p.is_zero():
                found.append(p)
    gens = tuple(groebner_basis(found, base_order)) if found else ()
    note = f"linear algebra route, m={m}, reached degree {d}"
    return IdealResult(gens, partial=partial, note=note)


def _embed_exp(ring, base, e):
    out = [0] * ring.width
    for name, k in zip(base, e):
        out[ring.index(name)] = k
    return tuple(out)


def jumping_coefficients(fs, lo, hi, cap: int = DEFAULT_CAP) -> JumpingData:
    """Confirmed jumping coefficients in (lo, hi] and the ideals at them.

    Candidates are sign-flipped roots of an m-generalized b-function with
    m large enough to cover the interval; each candidate is kept exactly
    when the multiplier ideal drops there.
    """
    fs = _as_poly_list(fs)
    lo, hi = Q(lo), Q(hi)
    if not (0 <= lo < hi):
        raise ValueError("need 0 <= lo < hi")
    threshold = lct_value(fs)
    if threshold == inf:
        return JumpingData(inf, (), ())
    m = max(1, _qfloor(hi - threshold) + 1) if hi > threshold else 1
    b = _bm_from_equation_ideal(fs, m)
    candidates = sorted({xi for xi, _ in b.negated_roots() if lo < xi <= hi})
    jumps = []
    ideals = []
    prev_point = lo
    prev_ideal = None
    for xi in candidates:
        if prev_ideal is None:
            midpoint = (prev_point + xi) / 2
            prev_ideal = list(multiplier_ideal(fs, midpoint, cap=cap).generators)
        here = list(multiplier_ideal(fs, xi, cap=cap).generators)
        if not ideal_equals(here, prev_ideal):
            jumps.append(xi)
            ideals.append(tuple(here))
        prev_ideal = here
        prev_point = xi
    return JumpingData(threshold, tuple(jumps), tuple(ideals))
