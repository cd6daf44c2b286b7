"""Rings of polynomial differential operators and their left ideals.

A ring has coordinate blocks x (base variables) and t (graph variables),
one derivation per coordinate, and optional central variables.  Monomials
are stored normally ordered, coordinates left of derivations, as plain
exponent tuples over the layout

    x_1 .. x_n, t_1 .. t_r, dx_1 .. dx_n, dt_1 .. dt_r, centrals...

Multiplication rewrites d^c * x^a with the binomial commutation formula;
when a distinguished central h is present the relation d*x = x*d + h^2 is
used instead, which keeps total-degree-homogeneous inputs homogeneous and
lets weight orders with negative entries be handled by ordinary global
Buchberger runs.
"""

from __future__ import annotations

import heapq
from math import comb, factorial

from .orders import (
    MonomialOrder,
    degrevlex,
    elimination_order,
    graded_weight_order,
)
from .poly import Polynomial
from .rationals import Q, ZERO, ONE, content


class WeylRing:
    __slots__ = (
        "xvars",
        "tvars",
        "centrals",
        "hvar",
        "names",
        "ncoords",
        "width",
        "_index",
        "_h_index",
        "_mulcache",
    )

    def __init__(self, xvars, tvars=(), centrals=(), hvar=None):
        self.xvars = tuple(xvars)
        self.tvars = tuple(tvars)
        self.centrals = tuple(centrals)
        self.hvar = hvar
        coords = self.xvars + self.tvars
        duals = tuple("d" + v for v in coords)
        self.names = coords + duals + self.centrals
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"variable names collide: {self.names}")
        if hvar is not None and hvar not in self.centrals:
            raise ValueError("hvar must be one of the central variables")
        self.ncoords = len(coords)
        self.width = len(self.names)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._h_index = self._index[hvar] if hvar else None
        self._mulcache = {}

    # identity is by construction data
    def __eq__(self, other):
        if not isinstance(other, WeylRing):
            return NotImplemented
        return (
            self.xvars == other.xvars
            and self.tvars == other.tvars
            and self.centrals == other.centrals
            and self.hvar == other.hvar
        )

    def __hash__(self):
        return hash((self.xvars, self.tvars, self.centrals, self.hvar))

    def __repr__(self):
        h = f", h={self.hvar}" if self.hvar else ""
        return f"WeylRing(x={self.xvars}, t={self.tvars}, central={self.centrals}{h})"

    def index(self, name: str) -> int:
        return self._index[name]

    def dual_index(self, i: int) -> int:
        return self.ncoords + i

    def role(self, i: int) -> str:
        if i < self.ncoords:
            return "coord"
        if i < 2 * self.ncoords:
            return "dual"
        return "central"

    def central_indices(self):
        return range(2 * self.ncoords, self.width)

    def extended(self, centrals=(), hvar=None):
        return WeylRing(
            self.xvars, self.tvars, self.centrals + tuple(centrals), hvar or self.hvar
        )

    def zero_exp(self):
        return (0,) * self.width

    # weights -------------------------------------------------------------

    def elimination_weight(self):
        """Per-position weights: 0 on x and dx, -1 on t, +1 on dt, 0 central."""
        n, r = len(self.xvars), len(self.tvars)
        w = [0] * self.width
        for j in range(r):
            w[n + j] = -1
            w[self.ncoords + n + j] = 1
        return tuple(w)

    def sigma(self):
        """-sum_j (t_j dt_j + 1), the weight-zero Euler-type operator."""
        n, r = len(self.xvars), len(self.tvars)
        if r == 0:
            raise ValueError("ring has no graph variables")
        terms = {self.zero_exp(): Q(-r)}
        for j in range(r):
            e = [0] * self.width
            e[n + j] = 1
            e[self.ncoords + n + j] = 1
            terms[tuple(e)] = Q(-1)
        return WeylElement(self, terms)


def _mono_mul(ring: WeylRing, m1, m2):
    """Normally ordered product of two monomials: [(exponent, int coeff)]."""
    cached = ring._mulcache.get((m1, m2))
    if cached is not None:
        return cached
    nc = ring.ncoords
    base = tuple(a + b for a, b in zip(m1, m2))
    hot = [
        (i, m1[nc + i], m2[i])
        for i in range(nc)
        if m1[nc + i] and m2[i]
    ]
    if not hot:
        result = ((base, 1),)
    else:
        hidx = ring._h_index
        partial = [(list(base), 1)]
        for i, d, a in hot:
            nxt = []
            for exp, coef in partial:
                for k in range(min(d, a) + 1):
                    c2 = coef * comb(d, k) * comb(a, k) * factorial(k)
                    e2 = exp if k == 0 else list(exp)
                    if k:
                        e2[i] -= k
                        e2[nc + i] -= k
                        if hidx is not None:
                            e2[hidx] += 2 * k
                    nxt.append((e2, c2))
            partial = nxt
        result = tuple((tuple(e), c) for e, c in partial)
    ring._mulcache[(m1, m2)] = result
    return result


class WeylElement:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: WeylRing, terms):
        self.ring = ring
        clean = {}
        for e, c in terms.items():
            c = Q(c)
            if c != 0:
                clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        e = object.__new__(cls)
        e.ring = ring
        e.terms = terms
        e._hash = None
        return e

    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def constant(cls, ring, c):
        c = Q(c)
        return cls(ring, {ring.zero_exp(): c} if c != 0 else {})

    @classmethod
    def variable(cls, ring, name):
        i = ring.index(name)
        e = [0] * ring.width
        e[i] = 1
        return cls(ring, {tuple(e): ONE})

    @classmethod
    def monomial(cls, ring, exp, c=ONE):
        return cls(ring, {tuple(exp): Q(c)})

    @classmethod
    def from_polynomial(cls, ring, p: Polynomial):
        """Embed a commutative polynomial, matching variables by name."""
        idx = [ring.index(v) for v in p.ring]
        terms = {}
        for e, c in p.terms.items():
            e2 = [0] * ring.width
            for pos, k in zip(idx, e):
                e2[pos] = k
            terms[tuple(e2)] = c
        return cls(ring, terms)

    # predicates and access -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def uses(self, index: int) -> bool:
        return any(e[index] for e in self.terms)

    def leading(self, order: MonomialOrder):
        if not self.terms:
            raise ValueError("zero element has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    # arithmetic -------------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("operator rings differ")

    def __add__(self, other):
        if not isinstance(other, WeylElement):
            other = WeylElement.constant(self.ring, other)
        self._check(other)
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e, ZERO) + c
            if s == 0:
                res.pop(e, None)
            else:
                res[e] = s
        return WeylElement._raw(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WeylElement):
            other = WeylElement.constant(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scaled(self, c):
        c = Q(c)
        if c == 0:
            return WeylElement.zero(self.ring)
        return WeylElement._raw(self.ring, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, WeylElement):
            return self.scaled(other)
        self._check(other)
        ring = self.ring
        res = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                cc = c1 * c2
                for e, ic in _mono_mul(ring, m1, m2):
                    s = res.get(e, ZERO) + cc * ic
                    if s == 0:
                        res.pop(e, None)
                    else:
                        res[e] = s
        return WeylElement._raw(ring, res)

    def __rmul__(self, other):
        # scalars only: noncommutative products must use explicit order
        return self.scaled(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = WeylElement.constant(self.ring, 1)
        for _ in range(n):
            result = result * self
        return result

    def monic(self, order):
        if not self.terms:
            return self
        _, c = self.leading(order)
        if c == 1:
            return self
        return self.scaled(ONE / c)

    def primitive(self):
        if not self.terms:
            return self
        c = content(self.terms.values())
        if c != 1:
            return self.scaled(ONE / c)
        return self

    # ring movement ----------------------------------------------------------

    def map_ring(self, ring: WeylRing):
        """Move to another ring, matching by variable name and role."""
        src = self.ring
        idx = []
        for i, name in enumerate(src.names):
            if name in ring._index:
                j = ring.index(name)
                if src.role(i) != ring.role(j):
                    raise ValueError(f"variable {name!r} changes role between rings")
                idx.append((i, j))
            elif any(e[i] for e in self.terms):
                raise ValueError(f"variable {name!r} is used but absent from target")
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * ring.width
            for i, j in idx:
                e2[j] = e[i]
            terms[tuple(e2)] = c
        return WeylElement(ring, terms)

    def substitute_central(self, name: str, value):
        """Specialize a central variable to a scalar (same ring, var unused)."""
        i = self.ring.index(name)
        if self.ring.role(i) != "central":
            raise ValueError(f"{name!r} is not central")
        value = Q(value)
        res = {}
        for e, c in self.terms.items():
            k = e[i]
            c2 = c * value**k if k else c
            e2 = e[:i] + (0,) + e[i + 1 :]
            s = res.get(e2, ZERO) + c2
            if s == 0:
                res.pop(e2, None)
            else:
                res[e2] = s
        return WeylElement._raw(self.ring, res)

    def to_polynomial(self, ring_names):
        """Convert to a commutative polynomial; derivations must be unused."""
        src = self.ring
        for i in range(src.width):
            if src.role(i) == "dual" and self.uses(i):
                raise ValueError("element uses derivations; not commutative")
        ring_names = tuple(ring_names)
        pos = {}
        for i, name in enumerate(src.names):
            if self.uses(i):
                pos[i] = ring_names.index(name)
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * len(ring_names)
            for i, j in pos.items():
                e2[j] = e[i]
            terms[tuple(e2)] = c
        return Polynomial(ring_names, terms)

    # weights -----------------------------------------------------------------

    def weight_degree(self, w=None):
        """(min, max) of per-term weights; equal iff homogeneous."""
        if not self.terms:
            raise ValueError("zero element has no weight degree")
        if w is None:
            w = self.ring.elimination_weight()
        degs = [sum(wi * ei for wi, ei in zip(w, e)) for e in self.terms]
        return min(degs), max(degs)

    def is_weight_homogeneous(self, w=None) -> bool:
        lo, hi = self.weight_degree(w)
        return lo == hi

    def weight_components(self, w=None):
        if w is None:
            w = self.ring.elimination_weight()
        comps: dict = {}
        for e, c in self.terms.items():
            d = sum(wi * ei for wi, ei in zip(w, e))
            comps.setdefault(d, {})[e] = c
        return {
            d: WeylElement._raw(self.ring, t) for d, t in sorted(comps.items())
        }

    def top_weight_form(self, w=None):
        comps = self.weight_components(w)
        return comps[max(comps)]

    # comparisons / display -----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            if self.is_constant() or self.is_zero():
                zero = self.ring.zero_exp()
                return self.terms.get(zero, ZERO) == Q(other)
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def to_string(self, order=None) -> str:
        if not self.terms:
            return "0"
        if order is None:
            order = degrevlex(self.ring.width)
        names = self.ring.names
        parts = []
        for e in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{nm}^{k}" if k > 1 else nm for nm, k in zip(names, e) if k
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return self.to_string()


# ---------------------------------------------------------------------------
# left Groebner bases over packed monomials
# ---------------------------------------------------------------------------
#
# Inside the basis engine a monomial is a single integer: 16-bit fields,
# one per ring variable, lowest field = first variable.  Products of
# commuting parts are integer additions, divisibility is a three-op guard
# test, and order comparisons are integer comparisons of derived keys, so
# dictionary and heap traffic dominate far less than with tuples.

_FIELD = 16
_FMASK = (1 << _FIELD) - 1
_CMAX = (1 << (_FIELD - 1)) - 1


class _PackedOps:
    """Packing context for one ring and one monomial order."""

    __slots__ = (
        "ring",
        "width",
        "offs",
        "guard",
        "order",
        "_keys",
        "_dual",
        "_coord",
        "_supp",
        "_mul",
        "pairs",
        "hoff",
    )

    def __init__(self, ring: WeylRing, order: MonomialOrder):
        self.ring = ring
        self.width = ring.width
        self.offs = [i * _FIELD for i in range(ring.width)]
        self.guard = 0
        for off in self.offs:
            self.guard |= 1 << (off + _FIELD - 1)
        self.order = order
        self._keys: dict = {}
        self._dual: dict = {}
        self._coord: dict = {}
        self._supp: dict = {}
        self._mul: dict = {}
        nc = ring.ncoords
        self.pairs = [(i, self.offs[i], self.offs[nc + i]) for i in range(nc)]
        self.hoff = self.offs[ring._h_index] if ring._h_index is not None else None

    def pack(self, exp) -> int:
        p = 0
        for off, e in zip(self.offs, exp):
            if e > _CMAX:
                raise OverflowError("exponent exceeds packed field capacity")
            p |= e << off
        return p

    def unpack(self, p: int):
        return tuple((p >> off) & _FMASK for off in self.offs)

    def pack_terms(self, terms):
        return {self.pack(e): c for e, c in terms.items()}

    def unpack_terms(self, terms):
        return {self.unpack(p): c for p, c in terms.items()}

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        out = 0
        for off in self.offs:
            ea = (a >> off) & _FMASK
            eb = (b >> off) & _FMASK
            out |= (ea if ea > eb else eb) << off
        return out

    def key(self, p: int) -> int:
        k = self._keys.get(p)
        if k is None:
            k = self._raw_key(self.unpack(p))
            self._keys[p] = k
        return k

    def _raw_key(self, exp) -> int:
        order = self.order
        kind = order.kind
        if kind == "degrevlex":
            k = sum(exp)
            for e in reversed(exp):
                k = (k << _FIELD) | (_CMAX - e)
            return k
        if kind == "lex":
            k = 0
            for e in exp:
                k = (k << _FIELD) | e
            return k
        if kind == "block":
            k = sum(exp[i] for i in order.block)
            for i in reversed(order.block):
                k = (k << _FIELD) | (_CMAX - exp[i])
            rest = order._rest
            k = (k << 32) | sum(exp[i] for i in rest)
            for i in reversed(rest):
                k = (k << _FIELD) | (_CMAX - exp[i])
            return k
        if kind == "graded_weight":
            w = sum(wi * ei for wi, ei in zip(order.weight, exp))
            k = sum(exp)
            k = (k << 32) | (w + (1 << 31))
            for e in reversed(exp):
                k = (k << _FIELD) | (_CMAX - e)
            return k
        if kind == "weight":
            w = sum(wi * ei for wi, ei in zip(order.weight, exp))
            k = w + (1 << 31)
            k = (k << 32) | sum(exp)
            for e in reversed(exp):
                k = (k << _FIELD) | (_CMAX - e)
            return k
        raise ValueError(f"unsupported order kind {kind!r}")

    def support_mask(self, p: int) -> int:
        m = self._supp.get(p)
        if m is None:
            m = 0
            for i, off in enumerate(self.offs):
                if (p >> off) & _FMASK:
                    m |= 1 << i
            self._supp[p] = m
        return m

    def dual_mask(self, p: int) -> int:
        m = self._dual.get(p)
        if m is None:
            m = 0
            for i, _coff, doff in self.pairs:
                if (p >> doff) & _FMASK:
                    m |= 1 << i
            self._dual[p] = m
        return m

    def coord_mask(self, p: int) -> int:
        m = self._coord.get(p)
        if m is None:
            m = 0
            for i, coff, _doff in self.pairs:
                if (p >> coff) & _FMASK:
                    m |= 1 << i
            self._coord[p] = m
        return m

    def mono_mul(self, m1: int, m2: int):
        """Normally ordered monomial product: ((packed, int coeff), ...)."""
        cached = self._mul.get((m1, m2))
        if cached is not None:
            return cached
        hot = self.dual_mask(m1) & self.coord_mask(m2)
        if not hot:
            result = ((m1 + m2, 1),)
        else:
            base = m1 + m2
            partial = [(base, 1)]
            hoff = self.hoff
            for i, coff, doff in self.pairs:
                if not (hot >> i) & 1:
                    continue
                d = (m1 >> doff) & _FMASK
                a = (m2 >> coff) & _FMASK
                nxt = []
                for exp, coef in partial:
                    for k in range(min(d, a) + 1):
                        c2 = coef * comb(d, k) * comb(a, k) * factorial(k)
                        e2 = exp - (k << coff) - (k << doff)
                        if k and hoff is not None:
                            e2 += (2 * k) << hoff
                        nxt.append((e2, c2))
                partial = nxt
            result = tuple(partial)
        self._mul[(m1, m2)] = result
        return result


def _w_reduce(terms, basis, ops: _PackedOps, normalize=False):
    """Full left normal form over packed terms.

    `basis` rows are (lead, lc, termdict) with packed keys.  The largest
    remaining term is tracked by a lazy heap of negated keys; entries go
    stale when terms cancel and are skipped on pop.  Terms spawned by a
    reduction step are strictly smaller than the reduced term, so
    finished terms never reactivate.
    """
    key = ops.key
    divides = ops.divides
    mono_mul = ops.mono_mul
    dual_mask = ops.dual_mask
    coord_mask = ops.coord_mask
    support = ops.support_mask
    result = {}
    work = dict(terms)
    heap = [-key(t) for t in work]
    heapq.heapify(heap)
    pop = heapq.heappop
    push = heapq.heappush
    index = {key(t): t for t in work}
    while heap:
        t = index[-pop(heap)]
        c = work.get(t)
        if c is None:
            continue
        tsupp = support(t)
        hit = None
        for gsupp, lead, lc, g in basis:
            if gsupp & ~tsupp:
                continue
            if divides(lead, t):
                hit = (lead, lc, g)
                break
        if hit is None:
            del work[t]
            result[t] = c
            continue
        lead, lc, g = hit
        shift = t - lead
        factor = c / lc
        smask = dual_mask(shift)
        for ge, gv in g.items():
            if smask & coord_mask(ge):
                cc = factor * gv
                for e, ic in mono_mul(shift, ge):
                    s = work.get(e)
                    if s is None:
                        work[e] = -cc * ic
                        k = key(e)
                        index[k] = e
                        push(heap, -k)
                    else:
                        s -= cc * ic
                        if s == 0:
                            del work[e]
                        else:
                            work[e] = s
            else:
                e = shift + ge
                s = work.get(e)
                if s is None:
                    work[e] = -factor * gv
                    k = key(e)
                    index[k] = e
                    push(heap, -k)
                else:
                    s -= factor * gv
                    if s == 0:
                        del work[e]
                    else:
                        work[e] = s
    if normalize and result:
        c = content(result.values())
        if c != 1:
            result = {e: v / c for e, v in result.items()}
    return result


class _WeylEngine:
    """Left Buchberger with the Gebauer-Moeller chain filters.

    The coprime (product) criterion is never used: derivations and their
    coordinates have coprime leading monomials yet nonzero commutators.
    """

    def __init__(self, ring: WeylRing, order: MonomialOrder):
        self.ring = ring
        self.ops = _PackedOps(ring, order)
        self.basis = []  # (lead, lc, packed termdict)
        self.reducers = []  # lead-minimal subset used for reduction scans
        self.pairs = []
        self._pairset = set()

    def _note_element(self, lead, lc, red):
        self.basis.append((lead, lc, red))
        ops = self.ops
        supp = ops.support_mask(lead)
        divides = ops.divides
        self.reducers = [
            row for row in self.reducers if not divides(lead, row[1])
        ]
        self.reducers.append((supp, lead, lc, red))

    def add_generator(self, terms):
        red = _w_reduce(self.ops.pack_terms(terms), self.reducers, self.ops, normalize=True)
        if not red:
            return
        key = self.ops.key
        lead = max(red, key=key)
        self._update_pairs(lead)
        self._note_element(lead, red[lead], red)

    def _update_pairs(self, hexp):
        ops = self.ops
        basis = self.basis
        h = len(basis)
        new = [(g, ops.lcm(basis[g][0], hexp)) for g in range(h)]
        kept = []
        while new:
            g, l = new.pop()
            if not (
                any(ops.divides(l2, l) for _, l2 in new)
                or any(ops.divides(l2, l) for _, l2 in kept)
            ):
                kept.append((g, l))
        if self._pairset:
            stale = []
            for (i, j) in self._pairset:
                lij = ops.lcm(basis[i][0], basis[j][0])
                if (
                    ops.divides(hexp, lij)
                    and ops.lcm(basis[i][0], hexp) != lij
                    and ops.lcm(basis[j][0], hexp) != lij
                ):
                    stale.append((i, j))
            for p in stale:
                self._pairset.discard(p)
        for g, l in kept:
            self._pairset.add((g, h))
            heapq.heappush(self.pairs, (ops.key(l), g, h, l))

    def run(self):
        ops = self.ops
        basis = self.basis
        mono_mul = ops.mono_mul
        dual_mask = ops.dual_mask
        coord_mask = ops.coord_mask
        while self.pairs:
            _, i, j, l = heapq.heappop(self.pairs)
            if (i, j) not in self._pairset:
                continue
            self._pairset.discard((i, j))
            ilead, ilc, ig = basis[i]
            jlead, jlc, jg = basis[j]
            sp = {}
            for shift, gdict, mult in ((l - ilead, ig, jlc), (l - jlead, jg, -ilc)):
                smask = dual_mask(shift)
                for ge, gv in gdict.items():
                    cc = gv * mult
                    if smask & coord_mask(ge):
                        for e, ic in mono_mul(shift, ge):
                            s = sp.get(e, ZERO) + cc * ic
                            if s == 0:
                                sp.pop(e, None)
                            else:
                                sp[e] = s
                    else:
                        e = shift + ge
                        s = sp.get(e, ZERO) + cc
                        if s == 0:
                            sp.pop(e, None)
                        else:
                            sp[e] = s
            red = _w_reduce(sp, self.reducers, ops, normalize=True)
            if red:
                lead = max(red, key=ops.key)
                self._update_pairs(lead)
                self._note_element(lead, red[lead], red)

    def interreduced(self):
        ops = self.ops
        key = ops.key
        # only lead-minimal elements can survive in the reduced basis
        items = sorted(
            (t for _, _, t in self.basis if t),
            key=lambda t: key(max(t, key=key)),
        )
        minimal = []
        leads = []
        for t in items:
            lead = max(t, key=key)
            if any(ops.divides(l, lead) for l in leads):
                continue
            minimal.append(t)
            leads.append(lead)
        items = minimal
        changed = True
        while changed:
            changed = False
            rows = []
            for t in items:
                lead = max(t, key=key)
                rows.append((ops.support_mask(lead), lead, t[lead], t))
            out = []
            for idx, t in enumerate(items):
                others = rows[:idx] + rows[idx + 1 :]
                red = _w_reduce(t, others, ops, normalize=True)
                if red != t:
                    changed = True
                out.append(red)
            items = [t for t in out if t]
        final = []
        for t in items:
            lead = max(t, key=key)
            lc = t[lead]
            final.append({e: c / lc for e, c in t.items()})
        final.sort(key=lambda t: key(max(t, key=key)))
        return final


class NormalFormer:
    """Repeated normal forms against one fixed basis (packed once)."""

    def __init__(self, basis, order: MonomialOrder | None = None):
        basis = [g for g in basis if not g.is_zero()]
        if not basis:
            raise ValueError("empty basis")
        self.ring = basis[0].ring
        if order is None:
            order = degrevlex(self.ring.width)
        self.order = order
        self.ops = _PackedOps(self.ring, order)
        self.rows = []
        for g in basis:
            terms = self.ops.pack_terms(g.terms)
            lead = max(terms, key=self.ops.key)
            self.rows.append((self.ops.support_mask(lead), lead, terms[lead], terms))

    def reduce(self, e: WeylElement) -> WeylElement:
        red = _w_reduce(self.ops.pack_terms(e.terms), self.rows, self.ops)
        return WeylElement._raw(self.ring, self.ops.unpack_terms(red))


def weyl_groebner(gens, order: MonomialOrder | None = None):
    """Reduced left Groebner basis (monic, ascending leading monomials)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators live in different rings")
    if order is None:
        order = degrevlex(ring.width)
    eng = _WeylEngine(ring, order)
    for g in gens:
        eng.add_generator(g.terms)
    eng.run()
    ops = eng.ops
    return [WeylElement._raw(ring, ops.unpack_terms(t)) for t in eng.interreduced()]


def weyl_normal_form(p: WeylElement, basis, order: MonomialOrder | None = None):
    return NormalFormer(basis, order).reduce(p)


def weyl_is_member(p, basis, order=None) -> bool:
    return weyl_normal_form(p, basis, order).is_zero()


def weyl_spair_reduces_to_zero(f, g, basis, order=None) -> bool:
    ring = f.ring
    if order is None:
        order = degrevlex(ring.width)
    ef, cf = f.leading(order)
    eg, cg = g.leading(order)
    l = tuple(max(a, b) for a, b in zip(ef, eg))
    mf = WeylElement.monomial(ring, tuple(a - b for a, b in zip(l, ef)))
    mg = WeylElement.monomial(ring, tuple(a - b for a, b in zip(l, eg)))
    sp = (mf * f).scaled(cg) - (mg * g).scaled(cf)
    return weyl_normal_form(sp, basis, order).is_zero()


def weyl_eliminate(gens, varnames, order=None):
    """GB-based elimination: members of the ideal free of `varnames`.

    Valid whenever the surviving variables are closed under the ring's
    commutation relations, which holds for every use in this package
    (dropping derivations, graph blocks, or central tags).
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    block = [ring.index(v) for v in varnames]
    if order is None:
        order = elimination_order(block, ring.width)
    gb = weyl_groebner(gens, order)
    out = [g for g in gb if not any(g.uses(i) for i in block)]
    return out


# ---------------------------------------------------------------------------
# graph ideal, initial ideals, weight normalization, homogeneous subideal
# ---------------------------------------------------------------------------


def _fresh(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "_"
    return name


def graph_ring(xvars, r: int) -> WeylRing:
    xvars = tuple(xvars)
    taken = set(xvars) | {"d" + v for v in xvars}
    tvars = []
    for j in range(r):
        base = "t" if r == 1 else f"t{j + 1}"
        name = _fresh(base, taken)
        taken.add(name)
        taken.add("d" + name)
        tvars.append(name)
    return WeylRing(xvars, tuple(tvars))


def graph_ideal(fs):
    """Relations of the graph embedding of the map given by f_1..f_r.

    Returns (ring, generators): the t_j - f_j together with the chain-rule
    derivations dx_i + sum_j (df_j/dx_i) dt_j.  These generate the
    annihilator of the parametric power product of the f_j.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one polynomial")
    base = fs[0].ring
    for f in fs:
        if f.ring != base:
            raise ValueError("polynomials live in different rings")
        if f.is_zero():
            raise ValueError("zero polynomial in the input")
    n, r = len(base), len(fs)
    ring = graph_ring(base, r)
    gens = []
    for j, f in enumerate(fs):
        tj = WeylElement.variable(ring, ring.tvars[j])
        gens.append(tj - WeylElement.from_polynomial(ring, f))
    for i in range(n):
        e = WeylElement.variable(ring, "d" + base[i])
        for j, f in enumerate(fs):
            df = f.derivative(i)
            if df.is_zero():
                continue
            dtj = WeylElement.variable(ring, "d" + ring.tvars[j])
            e = e + WeylElement.from_polynomial(ring, df) * dtj
        gens.append(e)
    return ring, gens


def homogenize_total_degree(e: WeylElement, ring_h: WeylRing) -> WeylElement:
    """Lift to the h-ring, padding each term to the maximal total degree."""
    hidx = ring_h._h_index
    deg = e.total_degree()
    terms = {}
    for exp, c in e.terms.items():
        lifted = [0] * ring_h.width
        for i, name in enumerate(e.ring.names):
            lifted[ring_h.index(name)] = exp[i]
        lifted[hidx] += deg - sum(exp)
        terms[tuple(lifted)] = c
    return WeylElement(ring_h, terms)


def initial_ideal_witnessed(gens, w=None):
    """Pairs (ideal member, top weight form) generating the initial ideal.

    Degree-homogenize, run a basis computation under total degree then
    weight then degrevlex, set h back to 1, and read off top weight forms.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    if w is None:
        w = ring.elimination_weight()
    hname = _fresh("h", set(ring.names))
    ring_h = ring.extended((hname,), hvar=hname)
    w_h = tuple(w) + (0,)
    order = graded_weight_order(w_h, ring_h.width)
    lifted = [homogenize_total_degree(g, ring_h) for g in gens]
    gb = weyl_groebner(lifted, order)
    out = []
    for g in gb:
        plain = g.substitute_central(hname, 1).map_ring(ring)
        if plain.is_zero():
            continue
        out.append((plain.primitive(), plain.top_weight_form(w).primitive()))
    return out


def initial_ideal(gens, w=None):
    """Generators of the ideal of top weight forms."""
    return [top for _, top in initial_ideal_witnessed(gens, w)]


def to_weight_zero(e: WeylElement, w=None) -> WeylElement:
    """Left-multiply a weight-homogeneous element into weight zero.

    Single graph variable only: weight d >= 0 multiplies by t^d, negative
    weight by dt^(-d).
    """
    ring = e.ring
    if len(ring.tvars) != 1:
        raise ValueError("weight normalization needs exactly one graph variable")
    lo, hi = e.weight_degree(w)
    if lo != hi:
        raise ValueError("element is not weight homogeneous")
    d = hi
    if d == 0:
        return e
    name = ring.tvars[0] if d > 0 else "d" + ring.tvars[0]
    factor = WeylElement.variable(ring, name) ** abs(d)
    return factor * e


def euler_to_s(e: WeylElement, target: WeylRing, sname: str) -> WeylElement:
    """Rewrite a weight-zero element over one graph variable into K<x,dx>[s].

    Weight-zero monomials carry equal powers of t and dt; the block
    t^i dt^i equals the falling factorial of the Euler operator t*dt,
    which acts as -s-1 on parametric powers.  Everything else commutes
    with the substitution.
    """
    ring = e.ring
    if len(ring.tvars) != 1:
        raise ValueError("rewrite needs exactly one graph variable")
    tname = ring.tvars[0]
    ti, dti = ring.index(tname), ring.index("d" + tname)
    si = target.index(sname)
    factor_cache = [[ONE]]  # coefficients of prod_{j<i} (-s-1-j), ascending

    def factor(i):
        while len(factor_cache) <= i:
            prev = factor_cache[-1]
            j = len(factor_cache) - 1
            # multiply by (-s - 1 - j)
            nxt = [ZERO] * (len(prev) + 1)
            for k, c in enumerate(prev):
                nxt[k] += c * Q(-1 - j)
                nxt[k + 1] += -c
            factor_cache.append(nxt)
        return factor_cache[i]

    terms = {}
    for exp, c in e.terms.items():
        if exp[ti] != exp[dti]:
            raise ValueError("element is not weight zero")
        base = [0] * target.width
        for i, name in enumerate(ring.names):
            if i in (ti, dti):
                continue
            if exp[i]:
                base[target.index(name)] = exp[i]
        for k, ck in enumerate(factor(exp[ti])):
            if ck == 0:
                continue
            e2 = list(base)
            e2[si] += k
            key = tuple(e2)
            s = terms.get(key, ZERO) + c * ck
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
    return WeylElement(target, terms)


def homogeneous_subideal(gens, w=None):
    """Generators of the subideal of weight-homogeneous ideal members.

    Weight-homogenize the generators with a fresh central h, invert h with
    a second central u via hu - 1, eliminate both and return what remains.
    A one-fewer-variable elimination variant exists and is reported faster
    elsewhere; this implementation keeps the two-variable form.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    if w is None:
        w = ring.elimination_weight()
    taken = set(ring.names)
    hname = _fresh("h", taken)
    taken.add(hname)
    uname = _fresh("u", taken)
    ring_hu = ring.extended((hname, uname))
    hidx = ring_hu.index(hname)
    lifted = []
    for g in gens:
        comps = g.weight_components(w)
        top = max(comps)
        acc = WeylElement.zero(ring_hu)
        for d, part in comps.items():
            e = [0] * ring_hu.width
            e[hidx] = top - d
            acc = acc + WeylElement.monomial(ring_hu, tuple(e)) * part.map_ring(ring_hu)
        lifted.append(acc)
    h = WeylElement.variable(ring_hu, hname)
    u = WeylElement.variable(ring_hu, uname)
    lifted.append(h * u - 1)
    cut = weyl_eliminate(lifted, [hname, uname])
    return [g.map_ring(ring).primitive() for g in cut]
