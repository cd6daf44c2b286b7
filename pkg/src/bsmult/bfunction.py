"""Global b-functions of a single polynomial.

Two routes: through the initial ideal of the graph relations under the
elimination weight (the default), and through the annihilator of the
parametric power plus the polynomial itself.  Both feed the same
minimal-polynomial search, which looks for the first monic linear
dependency among normal forms of sigma powers.
"""

from __future__ import annotations

import warnings
from enum import Enum

from .bpoly import BPoly
from .linalg import Echelon
from .orders import degrevlex
from .poly import Polynomial
from .rationals import Q, ZERO
from .weyl import (
    NormalFormer,
    WeylElement,
    WeylRing,
    euler_to_s,
    graph_ideal,
    homogeneous_subideal,
    initial_ideal,
    to_weight_zero,
    weyl_groebner,
    _fresh,
)

DEFAULT_CAP = 50


class IterationCapError(RuntimeError):
    """The dependency search exceeded its degree cap.

    Either the cap is too small or the ideal does not satisfy the
    precondition that some b(sigma)*g lies in it.
    """

    def __init__(self, cap: int, rank: int):
        super().__init__(
            f"no monic dependency up to degree {cap} (row space rank {rank}); "
            "raise the cap or check the membership precondition"
        )
        self.cap = cap
        self.rank = rank


class BMethod(Enum):
    INITIAL_IDEAL = "initial"
    ANNIHILATOR = "ann"


def sigma_minimal_polynomial(
    g,
    gens,
    sigma: WeylElement | None = None,
    order=None,
    cap: int = DEFAULT_CAP,
    basis_ready: bool = False,
) -> BPoly:
    """Minimal monic b with b(sigma)*g in the left ideal of `gens`.

    `g` may be a commutative polynomial or an operator.  Normal forms of
    sigma^i * g are accumulated into an exact echelon; the first linear
    dependency (monic in the newest power) is the answer.
    """
    gens = [e for e in gens if not e.is_zero()]
    if not gens:
        raise ValueError("empty generating set")
    ring = gens[0].ring
    if isinstance(g, Polynomial):
        g = WeylElement.from_polynomial(ring, g)
    if g.is_zero():
        raise ValueError("g must be nonzero")
    if sigma is None:
        sigma = ring.sigma()
    if order is None:
        order = degrevlex(ring.width)
    basis = gens if basis_ready else weyl_groebner(gens, order)
    reducer = NormalFormer(basis, order)
    u = reducer.reduce(g)
    if u.is_zero():
        return BPoly.one()
    ech = Echelon(key=order.key)
    ech.insert(u.terms)
    for _ in range(cap):
        u = reducer.reduce(sigma * u)
        dep = ech.insert(u.terms)
        if dep is not None:
            degree = max(dep)
            coeffs = [dep.get(i, ZERO) for i in range(degree + 1)]
            return BPoly.from_coefficients(coeffs)
    raise IterationCapError(cap, ech.rank)


def ann_fs(f: Polynomial, cap: int = DEFAULT_CAP):
    """Generators of the annihilator of the parametric power of f.

    Weight-homogeneous members of the graph ideal generate everything the
    annihilator needs: normalize each homogeneous-subideal generator to
    weight zero and rewrite the Euler block t*dt as -s-1.  The result
    lives in the operator ring on the base variables with s central.
    """
    if f.is_zero():
        raise ValueError("f must be nonzero")
    ring, gens = graph_ideal([f])
    star = homogeneous_subideal(gens)
    sname = _fresh("s", set(ring.names))
    target = WeylRing(ring.xvars, (), centrals=(sname,))
    out = []
    for g in star:
        e = euler_to_s(to_weight_zero(g), target, sname)
        if not e.is_zero():
            out.append(e.primitive())
    return out


def global_b_function(
    f: Polynomial,
    method: BMethod = BMethod.INITIAL_IDEAL,
    cap: int = DEFAULT_CAP,
) -> BPoly:
    """The Bernstein-Sato polynomial of a nonzero polynomial."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if f.is_constant():
        warnings.warn("constant polynomial: b-polynomial is 1", RuntimeWarning)
        return BPoly.one()
    if method == BMethod.INITIAL_IDEAL:
        ring, gens = graph_ideal([f])
        ini = initial_ideal(gens)
        one = Polynomial.constant(f.ring, 1)
        return sigma_minimal_polynomial(one, ini, cap=cap)
    if method == BMethod.ANNIHILATOR:
        ann = ann_fs(f, cap=cap)
        ring = ann[0].ring
        sname = ring.centrals[0]
        s = WeylElement.variable(ring, sname)
        gens = list(ann) + [WeylElement.from_polynomial(ring, f)]
        one = Polynomial.constant(f.ring, 1)
        return sigma_minimal_polynomial(one, gens, sigma=s, cap=cap)
    raise ValueError(f"unknown method {method!r}")
