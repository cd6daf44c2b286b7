"""Groebner bases, normal forms, syzygies and elimination over K[x].

One Buchberger engine serves both rings and free modules: a term is a pair
(component, exponent tuple) and scalar polynomials are vectors with a
single component.  The pair queue uses normal selection (smallest lcm
first) and the Gebauer-Moeller update; the product criterion is applied
only in the single-component case, where it is valid.
"""

from __future__ import annotations

import heapq
from itertools import combinations

from .orders import MonomialOrder, degrevlex, elimination_order
from .poly import Polynomial, RingMismatchError
from .rationals import Q, ZERO, ONE, content

# ---------------------------------------------------------------------------
# internal vector term machinery: a vecpoly is {(comp, exp): coeff}
# ---------------------------------------------------------------------------


def _vp_lead(vp, key):
    return max(vp, key=key)


def _divides(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def _mask(exp) -> int:
    m = 0
    for i, e in enumerate(exp):
        if e:
            m |= 1 << i
    return m


def _vp_reduce(vp, basis, keys, normalize=False):
    """Full normal form of a vecpoly against (mask, lead, lc, vecpoly) rows.

    The largest remaining term is tracked with a lazy heap over negated
    keys; entries for cancelled terms are skipped when popped.
    """
    key, negkey = keys
    result = {}
    work = dict(vp)
    heap = [(negkey(t), t) for t in work]
    heapq.heapify(heap)
    pop = heapq.heappop
    push = heapq.heappush
    while heap:
        t = pop(heap)[1]
        c = work.get(t)
        if c is None:
            continue
        comp, exp = t
        tmask = _mask(exp)
        hit = None
        for gmask, lead, lc, g in basis:
            if lead[0] != comp or gmask & ~tmask:
                continue
            if _divides(lead[1], exp):
                hit = (lead, lc, g)
                break
        if hit is None:
            del work[t]
            result[t] = c
            continue
        lead, lc, g = hit
        shift = tuple(a - b for a, b in zip(exp, lead[1]))
        factor = c / lc
        for (gc, ge), gv in g.items():
            t2 = (gc, tuple(a + b for a, b in zip(ge, shift)))
            s = work.get(t2)
            if s is None:
                work[t2] = -factor * gv
                push(heap, (negkey(t2), t2))
            else:
                s -= factor * gv
                if s == 0:
                    del work[t2]
                else:
                    work[t2] = s
    if normalize and result:
        c = content(result.values())
        if c != 1:
            result = {t: v / c for t, v in result.items()}
    return result


def _mk_key(order):
    okey = order.key
    onkey = order.neg_key
    cache = {}
    ncache = {}

    def key(term):
        k = cache.get(term)
        if k is None:
            k = (-term[0], *okey(term[1]))
            cache[term] = k
        return k

    def negkey(term):
        k = ncache.get(term)
        if k is None:
            k = (term[0], *onkey(term[1]))
            ncache[term] = k
        return k

    return key, negkey


def _lcm_exp(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def _coprime(e1, e2):
    return all(a == 0 or b == 0 for a, b in zip(e1, e2))


class _Engine:
    """Buchberger over vecpolys; `use_product` enables the coprime skip."""

    def __init__(self, order: MonomialOrder, use_product: bool):
        self.keys = _mk_key(order)
        self.key = self.keys[0]
        self.okey = order.key
        self.use_product = use_product
        self.basis = []  # list of (mask, lead, lc, vecpoly)
        self.pairs = []  # heap of (lcm_key, i, j, lcm_exp)
        self._pairset = set()

    def _lead(self, vp):
        t = _vp_lead(vp, self.key)
        return t, vp[t]

    def add_generator(self, vp):
        vp = _vp_reduce(vp, self.basis, self.keys, normalize=True)
        if not vp:
            return
        lead, lc = self._lead(vp)
        self._update_pairs(lead)
        self.basis.append((_mask(lead[1]), lead, lc, vp))

    def _update_pairs(self, hlead):
        basis = self.basis
        h = len(basis)
        hcomp, hexp = hlead
        new = []
        for g in range(h):
            gcomp, gexp = basis[g][1]
            if gcomp == hcomp:
                new.append((g, _lcm_exp(gexp, hexp)))
        # Gebauer-Moeller M-filter among new pairs
        kept = []
        while new:
            g, l = new.pop()
            survives = False
            if self.use_product and _coprime(basis[g][1][1], hexp):
                survives = True
            else:
                survives = not (
                    any(_divides(l2, l) for _, l2 in new)
                    or any(_divides(l2, l) for _, l2 in kept)
                )
            if survives:
                kept.append((g, l))
        # drop coprime pairs (product criterion, rings only)
        if self.use_product:
            kept = [
                (g, l) for g, l in kept if not _coprime(basis[g][1][1], hexp)
            ]
        # B-filter on old pairs
        if self._pairset:
            stale = []
            for (i, j) in self._pairset:
                icomp, iexp = basis[i][1]
                jcomp, jexp = basis[j][1]
                if icomp != hcomp:
                    continue
                lij = _lcm_exp(iexp, jexp)
                if (
                    _divides(hexp, lij)
                    and _lcm_exp(iexp, hexp) != lij
                    and _lcm_exp(jexp, hexp) != lij
                ):
                    stale.append((i, j))
            for p in stale:
                self._pairset.discard(p)
        for g, l in kept:
            self._pairset.add((g, h))
            heapq.heappush(self.pairs, (self.okey(l), g, h, l))

    def run(self):
        basis = self.basis
        while self.pairs:
            _, i, j, l = heapq.heappop(self.pairs)
            if (i, j) not in self._pairset:
                continue
            self._pairset.discard((i, j))
            _, (icomp, iexp), ilc, ivp = basis[i]
            _, (jcomp, jexp), jlc, jvp = basis[j]
            si = tuple(a - b for a, b in zip(l, iexp))
            sj = tuple(a - b for a, b in zip(l, jexp))
            sp = {}
            for (c, e), v in ivp.items():
                t = (c, tuple(a + b for a, b in zip(e, si)))
                sp[t] = sp.get(t, ZERO) + v * jlc
            for (c, e), v in jvp.items():
                t = (c, tuple(a + b for a, b in zip(e, sj)))
                s = sp.get(t, ZERO) - v * ilc
                if s == 0:
                    sp.pop(t, None)
                else:
                    sp[t] = s
            red = _vp_reduce(sp, basis, self.keys, normalize=True)
            if red:
                lead, lc = self._lead(red)
                self._update_pairs(lead)
                basis.append((_mask(lead[1]), lead, lc, red))
        return [vp for _, _, _, vp in basis]

    def interreduced(self):
        """Reduced basis: every element fully reduced by the others, monic."""
        items = [vp for _, _, _, vp in self.basis]
        changed = True
        while changed:
            changed = False
            out = []
            for idx, vp in enumerate(items):
                others = []
                for k, other in enumerate(items):
                    if k == idx or not other:
                        continue
                    t = _vp_lead(other, self.key)
                    others.append((_mask(t[1]), t, other[t], other))
                red = _vp_reduce(vp, others, self.keys, normalize=True)
                if red != vp:
                    changed = True
                out.append(red)
            items = [vp for vp in out if vp]
        reduced = []
        for vp in items:
            t = _vp_lead(vp, self.key)
            lc = vp[t]
            reduced.append({k: v / lc for k, v in vp.items()})
        reduced.sort(key=lambda vp: self.key(_vp_lead(vp, self.key)))
        return reduced


# ---------------------------------------------------------------------------
# conversions between Polynomial vectors and vecpolys
# ---------------------------------------------------------------------------


def _to_vp(components):
    vp = {}
    for comp, p in enumerate(components):
        for e, c in p.terms.items():
            vp[(comp, e)] = c
    return vp


def _from_vp(vp, ring, ncomp):
    comps = [dict() for _ in range(ncomp)]
    for (comp, e), c in vp.items():
        comps[comp][e] = c
    return tuple(Polynomial(ring, t) for t in comps)


def _common_ring(polys):
    ring = None
    for p in polys:
        if ring is None:
            ring = p.ring
        elif p.ring != ring:
            raise RingMismatchError("generators live in different rings")
    return ring


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def groebner_basis(gens, order: MonomialOrder | None = None):
    """Reduced Groebner basis (monic, sorted by ascending leading term)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = _common_ring(gens)
    if order is None:
        order = degrevlex(len(ring))
    eng = _Engine(order, use_product=True)
    for g in gens:
        eng.add_generator(_to_vp([g]))
    eng.run()
    return [_from_vp(vp, ring, 1)[0] for vp in eng.interreduced()]


def normal_form(p: Polynomial, basis, order: MonomialOrder | None = None):
    """Remainder of p modulo a Groebner basis; zero iff p is a member."""
    if order is None:
        order = degrevlex(len(p.ring))
    keys = _mk_key(order)
    rows = []
    for g in basis:
        if g.is_zero():
            continue
        if g.ring != p.ring:
            raise RingMismatchError("basis ring differs from argument ring")
        vp = _to_vp([g])
        t = _vp_lead(vp, keys[0])
        rows.append((_mask(t[1]), t, vp[t], vp))
    red = _vp_reduce(_to_vp([p]), rows, keys)
    return _from_vp(red, p.ring, 1)[0]


def is_member(p, basis, order=None) -> bool:
    return normal_form(p, basis, order).is_zero()


def spair_reduces_to_zero(f, g, basis, order=None) -> bool:
    """Check one S-polynomial against a basis (property-test helper)."""
    ring = f.ring
    if order is None:
        order = degrevlex(len(ring))
    ef, cf = f.leading(order)
    eg, cg = g.leading(order)
    l = _lcm_exp(ef, eg)
    mf = Polynomial.monomial(ring, tuple(a - b for a, b in zip(l, ef)))
    mg = Polynomial.monomial(ring, tuple(a - b for a, b in zip(l, eg)))
    sp = mf * f * cg - mg * g * cf
    return normal_form(sp, basis, order).is_zero()


def syzygies(vectors, order: MonomialOrder | None = None):
    """Generators of the kernel of e_i -> vectors[i] between free modules.

    Each input vector is a sequence of polynomials over one ring; the
    output vectors have one component per input vector.  Computed as the
    tail block of a position-over-term elimination basis of the graphs
    (v_i | e_i).
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    m = len(vectors[0])
    if any(len(v) != m for v in vectors):
        raise ValueError("vectors live in different free modules")
    ring = _common_ring([p for v in vectors for p in v])
    if ring is None:
        raise ValueError("cannot infer ring from zero input")
    k = len(vectors)
    if order is None:
        order = degrevlex(len(ring))
    eng = _Engine(order, use_product=False)
    one = Polynomial.constant(ring, 1)
    zero = Polynomial.zero(ring)
    for i, v in enumerate(vectors):
        unit = [one if j == i else zero for j in range(k)]
        eng.add_generator(_to_vp(list(v) + unit))
    eng.run()
    out = []
    for vp in eng.interreduced():
        if all(comp >= m for (comp, _) in vp):
            tail = {(comp - m, e): c for (comp, e), c in vp.items()}
            out.append(_from_vp(tail, ring, k))
    return out


def module_normal_form(vector, basis_vectors, order=None):
    """Normal form in a free module (used by verification tests)."""
    vector = tuple(vector)
    ring = _common_ring(list(vector) + [p for v in basis_vectors for p in v])
    if order is None:
        order = degrevlex(len(ring))
    keys = _mk_key(order)
    rows = []
    for v in basis_vectors:
        vp = _to_vp(list(v))
        if not vp:
            continue
        t = _vp_lead(vp, keys[0])
        rows.append((_mask(t[1]), t, vp[t], vp))
    red = _vp_reduce(_to_vp(list(vector)), rows, keys)
    return _from_vp(red, ring, len(vector))


def module_groebner_basis(vectors, order=None):
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    m = len(vectors[0])
    ring = _common_ring([p for v in vectors for p in v])
    if order is None:
        order = degrevlex(len(ring))
    eng = _Engine(order, use_product=False)
    for v in vectors:
        eng.add_generator(_to_vp(list(v)))
    eng.run()
    return [_from_vp(vp, ring, m) for vp in eng.interreduced()]


def eliminate(gens, varnames, order_rest=None):
    """Generators of the ideal's intersection with K[remaining variables].

    The result stays in the ambient ring but is free of `varnames`.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = _common_ring(gens)
    block = [ring.index(v) for v in varnames]
    if not block:
        return groebner_basis(gens)
    order = elimination_order(block, len(ring))
    gb = groebner_basis(gens, order)
    blockset = set(block)
    out = []
    for g in gb:
        if all(all(e[i] == 0 for i in blockset) for e in g.terms):
            out.append(g)
    return out


def ideal_contains(big, small, order=None) -> bool:
    """True iff <big> contains every generator of `small`."""
    big = [g for g in big if not g.is_zero()]
    small = [g for g in small if not g.is_zero()]
    if not small:
        return True
    if not big:
        return False
    gb = groebner_basis(big, order)
    return all(is_member(p, gb, order) for p in small)


def ideal_equals(a, b, order=None) -> bool:
    """True iff the two generator lists span the same ideal."""
    return ideal_contains(a, b, order) and ideal_contains(b, a, order)


def ideal_intersection(a, b, tag="@t"):
    """Generators of <a> inter <b> via the one-tag-variable elimination."""
    a = [g for g in a if not g.is_zero()]
    b = [g for g in b if not g.is_zero()]
    if not a or not b:
        return []
    ring = _common_ring(a + b)
    if tag in ring:
        raise ValueError("tag variable collides with a ring variable")
    big = (tag,) + ring
    t = Polynomial.variable(big, tag)
    mixed = [t * g.map_ring(big) for g in a]
    mixed += [(1 - t) * g.map_ring(big) for g in b]
    cut = eliminate(mixed, [tag])
    return [g.map_ring(ring) for g in cut]


def intersect_many(ideals):
    result = None
    for gens in ideals:
        result = list(gens) if result is None else ideal_intersection(result, gens)
    return result or []


def in_radical(p: Polynomial, gens, tag="@z") -> bool:
    """Radical membership via the auxiliary-variable trick (1 in I + <1-z*p>)."""
    if p.is_zero():
        return True
    gens = [g for g in gens if not g.is_zero()]
    ring = p.ring
    big = ring + (tag,)
    z = Polynomial.variable(big, tag)
    lifted = [g.map_ring(big) for g in gens]
    lifted.append(1 - z * p.map_ring(big))
    gb = groebner_basis(lifted)
    return len(gb) == 1 and gb[0].is_constant()


def ideal_dimension(gens) -> int:
    """Krull dimension of K[x]/<gens> (combinatorial, via leading terms)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("zero ideal: dimension equals the ambient dimension")
    ring = _common_ring(gens)
    n = len(ring)
    gb = groebner_basis(gens)
    if len(gb) == 1 and gb[0].is_constant():
        return -1
    order = degrevlex(n)
    leads = [g.leading(order)[0] for g in gb]
    best = 0
    for size in range(n, 0, -1):
        for subset in combinations(range(n), size):
            keep = set(subset)
            if all(any(e[i] for i in range(n) if i not in keep) for e in leads):
                return size
    return best
