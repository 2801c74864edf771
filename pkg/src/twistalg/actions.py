"""The matrix-group action on twisted torus algebras.

For g = (a b; c d) of determinant one the action on the rank-one twisted
torus algebra is

    sigma(g)(u^k v^l) = alpha^{(kl - k'l')/2} u^{k'} v^{l'},
    (k', l') = (a k + b l, c k + d l),

extended linearly.  On the lambda basis (lambda(x) = alpha^{-x1 x2 / 2}
u^{x1} v^{x2}) the same action is plain transport lambda(x) -> lambda(gx);
both are implemented and cross-checked, since the half-integer exponent
is the easiest place for a convention to drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .cocycles import (ExtendedCocycle, SymplecticCocycle, TwoCocycle,
                       WellDefinednessError, extend_to_semidirect,
                       invariance_witness)
from .groups import (FiniteGroup, Lattice, cyclic_power, generated_subgroup,
                     mat, mdet, mmod, mvec, sl2_generators)
from .scalars import Alpha
from .twisted_algebra import (AlgebraElement, ProjectiveRep,
                              TwistedGroupAlgebra, regular_rep)


class ActionError(ValueError):
    pass


@dataclass
class ActionContext:
    """Parameters of the action: the scalar, quotient and acting matrices."""

    alpha: Alpha
    q: Optional[int] = None
    gens: tuple = field(default_factory=sl2_generators)
    n: int = 1

    def __post_init__(self):
        self.gens = tuple(mat(g) for g in self.gens)
        self.cocycle = SymplecticCocycle(self.alpha, self.n, self.q)
        for g in self.gens:
            ok, pair = invariance_witness(self.cocycle, g)
            if not ok:
                raise ActionError(f"generator {g!r} does not preserve the cocycle "
                                  f"(witness {pair!r})")
        self.algebra = TwistedGroupAlgebra(self.cocycle.group, self.cocycle)

    def reduce_matrix(self, g):
        return mmod(g, self.q) if self.q is not None else g

    def monomials(self):
        """All lambda-basis monomials of the finite quotient."""
        if self.q is None:
            raise ActionError("monomial enumeration needs a finite quotient")
        return list(self.cocycle.group.elements)


def make_context(alpha: Alpha, q: Optional[int] = None, gens=None, n: int = 1) -> ActionContext:
    if gens is None:
        gens = sl2_generators()
    return ActionContext(alpha, q, tuple(gens), n)


def sigma(ctx: ActionContext, g, x: AlgebraElement) -> AlgebraElement:
    """Transport form: the basis vector at y moves to g y (no phase)."""
    det = mdet(g)
    if (det % ctx.q != 1 % ctx.q) if ctx.q is not None else (det != 1):
        raise ActionError("sigma expects a determinant-one matrix")
    ok, pair = invariance_witness(ctx.cocycle, g)
    if not ok:
        raise ActionError(f"matrix {g!r} does not preserve the cocycle (witness {pair!r})")
    if x.algebra is not ctx.algebra:
        raise ActionError("element does not belong to this context's algebra")
    q = ctx.q
    out = {}
    for y, c in x.terms.items():
        gy = mvec(g, y, mod=q)
        out[gy] = out[gy] + c if gy in out else c
    return AlgebraElement(ctx.algebra, out)


def uv_monomial(ctx: ActionContext, k: int, l: int) -> AlgebraElement:
    """u^k v^l = alpha^{kl/2} lambda((k, l))."""
    q = ctx.q
    key = (k % q, l % q) if q is not None else (k, l)
    return ctx.algebra.monomial(key, ctx.alpha.half_power(k * l))


def uv_coefficient(ctx: ActionContext, x: AlgebraElement, k: int, l: int):
    """Coefficient of u^k v^l in x."""
    q = ctx.q
    key = (k % q, l % q) if q is not None else (k, l)
    return x.coeff(key) * ctx.alpha.half_power(-k * l)


def sigma_formula(ctx: ActionContext, g, k: int, l: int) -> AlgebraElement:
    """Closed form on u^k v^l monomials (rank one only)."""
    if ctx.n != 1:
        raise ActionError("the closed formula is the rank-one one; use sigma()")
    (a, b), (c, d) = g
    k2 = a * k + b * l
    l2 = c * k + d * l
    phase = ctx.alpha.half_power(k * l - k2 * l2)
    return uv_monomial(ctx, k2, l2).scale(phase)


@dataclass
class ActionReport:
    homomorphism: bool
    multiplicative: bool
    star_preserving: bool
    trace_preserving: bool
    formula_matches_transport: bool
    witness: Optional[dict] = None

    def all_ok(self) -> bool:
        return (self.homomorphism and self.multiplicative and self.star_preserving
                and self.trace_preserving and self.formula_matches_transport)


def verify_action(ctx: ActionContext, sigma_fn: Callable = None, seed: int = 0,
                  exhaustive_monomials: int = 100) -> ActionReport:
    """Check the action laws on the finite quotient.

    Exhaustive over lambda-monomials and generator pairs while the
    monomial count stays within ``exhaustive_monomials``; sampled beyond.
    A custom ``sigma_fn(ctx, g, x)`` can be injected (fault injection in
    tests); the default is the transport action.
    """
    if ctx.q is None:
        raise ActionError("verification runs on a finite quotient")
    act = sigma_fn or sigma
    monos = ctx.monomials()
    rng = np.random.default_rng(seed)
    if len(monos) > exhaustive_monomials:
        sel = rng.choice(len(monos), size=exhaustive_monomials, replace=False)
        monos = [monos[i] for i in sel]
    gens = [ctx.reduce_matrix(g) for g in ctx.gens]
    words = list(gens)
    for g in gens:
        for h in gens:
            words.append(_mm_mod(g, h, ctx.q))
    alg = ctx.algebra
    witness = None

    def basis(y):
        return alg.monomial(y)

    homo = True
    for g in gens:
        for h in gens:
            gh = _mm_mod(g, h, ctx.q)
            for y in monos:
                lhs = act(ctx, g, act(ctx, h, basis(y)))
                rhs = act(ctx, gh, basis(y))
                if lhs != rhs:
                    homo = False
                    witness = witness or {"law": "homomorphism", "g": g, "h": h, "monomial": y}
                    break
            if not homo:
                break
        if not homo:
            break

    multiplicative = True
    pair_budget = 4096
    pairs = [(y1, y2) for y1 in monos for y2 in monos]
    if len(pairs) > pair_budget:
        sel = rng.choice(len(pairs), size=pair_budget, replace=False)
        pairs = [pairs[i] for i in sel]
    for g in words:
        for y1, y2 in pairs:
            x1, x2 = basis(y1), basis(y2)
            lhs = act(ctx, g, x1 * x2)
            rhs = act(ctx, g, x1) * act(ctx, g, x2)
            if lhs != rhs:
                multiplicative = False
                witness = witness or {"law": "multiplicativity", "g": g, "pair": (y1, y2)}
                break
        if not multiplicative:
            break

    star_ok = True
    for g in words:
        for y in monos:
            x = basis(y)
            if act(ctx, g, x.star()) != act(ctx, g, x).star():
                star_ok = False
                witness = witness or {"law": "star", "g": g, "monomial": y}
                break
        if not star_ok:
            break

    trace_ok = True
    for g in words:
        for y in monos:
            x = basis(y)
            if not (act(ctx, g, x).trace() - x.trace()).is_zero():
                trace_ok = False
                witness = witness or {"law": "trace", "g": g, "monomial": y}
                break
        if not trace_ok:
            break

    formula_ok = True
    if ctx.n == 1:
        for g in words:
            for y in monos:
                k, l = y
                transported = act(ctx, g, uv_monomial(ctx, k, l))
                if transported != sigma_formula(ctx, g, k, l):
                    formula_ok = False
                    witness = witness or {"law": "formula-vs-transport", "g": g, "monomial": y}
                    break
            if not formula_ok:
                break

    return ActionReport(homo, multiplicative, star_ok, trace_ok, formula_ok, witness)


def _mm(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b)))
                       for j in range(len(b[0]))) for i in range(len(a)))


def _mm_mod(a, b, q):
    m = _mm(a, b)
    if q is None:
        return m
    return tuple(tuple(v % q for v in row) for row in m)


def finite_model(alpha: Alpha, q: int, gamma_gens=None, n: int = 1) -> ProjectiveRep:
    """The twisted regular representation of (Z/q)^{2n} x| Gamma_q.

    Gamma_q is the subgroup of SL(2, Z/q) generated by the given integer
    matrices reduced mod q (all of SL(2, Z/q) by default).
    """
    base = SymplecticCocycle(alpha, n, q)  # raises WellDefinednessError if needed
    from .cocycles import sl2_mod_cached
    full = sl2_mod_cached(q)
    if gamma_gens is None:
        gamma = full
    else:
        gens = [mmod(mat(g), q) for g in gamma_gens]
        for g in gens:
            if g not in full:
                raise ActionError(f"{g!r} is not in SL(2, Z/{q})")
        gamma = generated_subgroup(full, gens)
    ext = extend_to_semidirect(base, gamma)
    return regular_rep(ext.group, ext)


def crossed_product_consistency(ctx: ActionContext, gamma: FiniteGroup = None,
                                fault: Callable = None, pair_budget: int = 4096,
                                seed: int = 0) -> bool:
    """Twisted algebra of the semidirect product == crossed product.

    Compares, on basis pairs, the product under the extended cocycle
    against lambda(x1) sigma(g1)(lambda(x2)) w_{g1 g2} with the base
    cocycle phase.  ``fault`` may replace the extension-cocycle evaluator
    to demonstrate that the check has teeth.
    """
    if ctx.q is None:
        raise ActionError("crossed-product check runs on a finite quotient")
    if gamma is None:
        from .cocycles import sl2_mod_cached
        gamma = sl2_mod_cached(ctx.q)
    ext = extend_to_semidirect(ctx.cocycle, gamma)
    ext_eval = fault or (lambda e1, e2: ext(e1, e2))
    G = ext.group
    rng = np.random.default_rng(seed)
    pairs = []
    n = G.order
    total = n * n
    if total <= pair_budget:
        pairs = [(g1, g2) for g1 in G.elements for g2 in G.elements]
    else:
        for _ in range(pair_budget):
            pairs.append((G.elements[int(rng.integers(0, n))],
                          G.elements[int(rng.integers(0, n))]))
    base = ctx.cocycle
    q = ctx.q
    for (x1, g1), (x2, g2) in pairs:
        # extension-cocycle route
        lhs_phase = ext_eval((x1, g1), (x2, g2))
        # crossed-product route: lambda(x1) sigma(g1)(lambda(x2)) = nu(x1, g1 x2) lambda(x1 + g1 x2)
        y = mvec(g1, x2, mod=q)
        rhs_phase = base(x1, y)
        if lhs_phase != rhs_phase:
            return False
        # the group parts agree by construction of the semidirect product
    return True
