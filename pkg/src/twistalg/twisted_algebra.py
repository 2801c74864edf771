"""Twisted group algebras and projective regular representations.

An :class:`AlgebraElement` is a finite formal sum over a group with
exact coefficients (integer combinations of unit scalars); the product
is twisted by a 2-cocycle on the basis: g * h = mu(g,h) (gh).  The
projective left regular representation acts by monomial matrices, which
keeps every identity in this module decidable with zero tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .cocycles import TwoCocycle
from .groups import FiniteGroup, Lattice
from .scalars import (Formal, RootUnity, Scalar, ScalarModeError,
                      scalar_one_like, unit_sum_is_zero)


class Coeff:
    """Exact coefficient: an integer combination of unit scalars of one mode."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        t = {}
        if terms:
            for s, c in terms.items():
                if c:
                    t[s] = t.get(s, 0) + c
                    if t[s] == 0:
                        del t[s]
        self.terms = t

    @staticmethod
    def unit(s: Scalar, c: int = 1) -> "Coeff":
        return Coeff({s: c})

    @staticmethod
    def integer(c: int, like: Scalar) -> "Coeff":
        return Coeff({scalar_one_like(like): c})

    @staticmethod
    def zero() -> "Coeff":
        return Coeff()

    def copy(self) -> "Coeff":
        return Coeff(dict(self.terms))

    def __add__(self, other: "Coeff") -> "Coeff":
        t = dict(self.terms)
        for s, c in other.terms.items():
            t[s] = t.get(s, 0) + c
        return Coeff(t)

    def __sub__(self, other: "Coeff") -> "Coeff":
        t = dict(self.terms)
        for s, c in other.terms.items():
            t[s] = t.get(s, 0) - c
        return Coeff(t)

    def __neg__(self) -> "Coeff":
        return Coeff({s: -c for s, c in self.terms.items()})

    def __mul__(self, other) -> "Coeff":
        if isinstance(other, int):
            return Coeff({s: c * other for s, c in self.terms.items()})
        if isinstance(other, (RootUnity, Formal)):
            return Coeff({s * other: c for s, c in self.terms.items()})
        if isinstance(other, Coeff):
            t = {}
            for s1, c1 in self.terms.items():
                for s2, c2 in other.terms.items():
                    s = s1 * s2
                    t[s] = t.get(s, 0) + c1 * c2
            return Coeff(t)
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> "Coeff":
        return Coeff({s.conj(): c for s, c in self.terms.items()})

    def is_zero(self) -> bool:
        if not self.terms:
            return True
        return unit_sum_is_zero(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            like = next(iter(self.terms), RootUnity.one())
            other = Coeff.integer(other, like)
        if isinstance(other, (RootUnity, Formal)):
            other = Coeff.unit(other)
        if not isinstance(other, Coeff):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover - coefficients are not dict keys
        raise TypeError("Coeff is unhashable")

    def to_complex(self) -> complex:
        out = 0j
        for s, c in self.terms.items():
            if not isinstance(s, RootUnity):
                raise ScalarModeError("cannot evaluate a formal unit numerically")
            out += c * s.to_complex()
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for s in sorted(self.terms, key=lambda u: u.render()):
            c = self.terms[s]
            base = s.render()
            if base == "1":
                parts.append(f"{c:+d}")
            elif c == 1:
                parts.append(f"+{base}")
            elif c == -1:
                parts.append(f"-{base}")
            else:
                parts.append(f"{c:+d}*{base}")
        return "".join(parts).lstrip("+")

    def __repr__(self):
        return self.render()


class TwistedGroupAlgebra:
    """Ambient context: a group together with a 2-cocycle on it."""

    def __init__(self, group, cocycle: TwoCocycle):
        self.group = group
        self.cocycle = cocycle
        self._one_scalar = cocycle.one()

    def coeff(self, c) -> Coeff:
        if isinstance(c, Coeff):
            return c
        if isinstance(c, int):
            return Coeff.integer(c, self._one_scalar)
        return Coeff.unit(c)

    def element(self, terms: dict) -> "AlgebraElement":
        return AlgebraElement(self, {g: self.coeff(c) for g, c in terms.items()})

    def monomial(self, g, c=1) -> "AlgebraElement":
        return self.element({g: c})

    def unit(self) -> "AlgebraElement":
        return self.monomial(self.group.identity)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})


class AlgebraElement:
    """Finite formal sum  sum_g c_g g  with the mu-twisted product."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: TwistedGroupAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = {g: c for g, c in terms.items() if not c.is_zero()}

    def _require_same(self, other: "AlgebraElement"):
        if self.algebra is not other.algebra:
            raise ValueError("elements live in different twisted algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._require_same(other)
        t = dict(self.terms)
        for g, c in other.terms.items():
            t[g] = t[g] + c if g in t else c
        return AlgebraElement(self.algebra, t)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {g: -c for g, c in self.terms.items()})

    def scale(self, c) -> "AlgebraElement":
        cc = self.algebra.coeff(c)
        return AlgebraElement(self.algebra, {g: v * cc for g, v in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._require_same(other)
        G = self.algebra.group
        mu = self.algebra.cocycle
        out = {}
        for g, cg in self.terms.items():
            for h, ch in other.terms.items():
                k = G.mul(g, h)
                c = cg * ch * mu(g, h)
                out[k] = out[k] + c if k in out else c
        return AlgebraElement(self.algebra, out)

    def star(self) -> "AlgebraElement":
        """Adjoint: (c g)* = conj(c) conj(mu(g, g^-1)) g^-1."""
        G = self.algebra.group
        mu = self.algebra.cocycle
        out = {}
        for g, c in self.terms.items():
            gi = G.inv(g)
            cc = c.conj() * mu(g, gi).conj()
            out[gi] = out[gi] + cc if gi in out else cc
        return AlgebraElement(self.algebra, out)

    def trace(self) -> Coeff:
        """Coefficient of the identity."""
        return self.terms.get(self.algebra.group.identity, Coeff.zero())

    def coeff(self, g) -> Coeff:
        return self.terms.get(g, Coeff.zero())

    def support(self):
        return set(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover
        raise TypeError("AlgebraElement is unhashable")

    def render(self) -> list:
        return [{"element": list(g) if isinstance(g, tuple) else g,
                 "coeff": c.render()} for g, c in sorted(self.terms.items(),
                                                         key=lambda kv: repr(kv[0]))]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c.render()})*{g}" for g, c in self.terms.items())


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def trace(x: AlgebraElement) -> Coeff:
    return x.trace()


def star(x: AlgebraElement) -> AlgebraElement:
    return x.star()


def hs_inner(x: AlgebraElement, y: AlgebraElement) -> Coeff:
    """tau(y* x): the Hilbert-Schmidt pairing induced by the trace."""
    return (y.star() * x).trace()


# ---------------------------------------------------------------------------
# monomial matrices


@dataclass(frozen=True)
class MonomialMatrix:
    """A unitary monomial matrix: entry phases[j] at row perm[j], column j."""

    dim: int
    perm: tuple
    phases: tuple

    @staticmethod
    def identity(dim: int, like: Scalar = None) -> "MonomialMatrix":
        one = scalar_one_like(like) if like is not None else RootUnity.one()
        return MonomialMatrix(dim, tuple(range(dim)), (one,) * dim)

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        perm = tuple(self.perm[other.perm[j]] for j in range(self.dim))
        phases = tuple(self.phases[other.perm[j]] * other.phases[j] for j in range(self.dim))
        return MonomialMatrix(self.dim, perm, phases)

    def adjoint(self) -> "MonomialMatrix":
        inv = [0] * self.dim
        for j, i in enumerate(self.perm):
            inv[i] = j
        phases = tuple(self.phases[inv[j]].conj() for j in range(self.dim))
        return MonomialMatrix(self.dim, tuple(inv), phases)

    def scale(self, s: Scalar) -> "MonomialMatrix":
        return MonomialMatrix(self.dim, self.perm, tuple(p * s for p in self.phases))

    def trace_coeff(self) -> Coeff:
        t = {}
        for j in range(self.dim):
            if self.perm[j] == j:
                s = self.phases[j]
                t[s] = t.get(s, 0) + 1
        return Coeff(t)

    def is_identity(self) -> bool:
        return all(self.perm[j] == j and self.phases[j].is_one() for j in range(self.dim))

    def kron(self, other: "MonomialMatrix") -> "MonomialMatrix":
        d1, d2 = self.dim, other.dim
        perm = []
        phases = []
        for j1 in range(d1):
            for j2 in range(d2):
                perm.append(self.perm[j1] * d2 + other.perm[j2])
                phases.append(self.phases[j1] * other.phases[j2])
        return MonomialMatrix(d1 * d2, tuple(perm), tuple(phases))

    def conj_entries(self) -> "MonomialMatrix":
        return MonomialMatrix(self.dim, self.perm, tuple(p.conj() for p in self.phases))

    def to_complex(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for j in range(self.dim):
            out[self.perm[j], j] = self.phases[j].to_complex()
        return out

    def apply(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        for j in range(self.dim):
            out[self.perm[j]] += self.phases[j].to_complex() * vec[j]
        return out

    def entry(self, i: int, j: int) -> Coeff:
        if self.perm[j] == i:
            return Coeff.unit(self.phases[j])
        return Coeff.zero()


# ---------------------------------------------------------------------------
# projective representations


class ProjectiveRep:
    """A map g -> unitary monomial matrix with pi(g) pi(h) = mu(g,h) pi(gh)."""

    def __init__(self, group, cocycle: TwoCocycle, dim: int, mat_fn: Callable):
        self.group = group
        self.cocycle = cocycle
        self.dim = dim
        self._mat_fn = mat_fn
        self._cache = {}

    def mat(self, g) -> MonomialMatrix:
        m = self._cache.get(g)
        if m is None:
            m = self._mat_fn(g)
            self._cache[g] = m
        return m

    def check_relation(self, g, h) -> bool:
        lhs = self.mat(g) @ self.mat(h)
        rhs = self.mat(self.group.mul(g, h)).scale(self.cocycle(g, h))
        return lhs == rhs

    def verify_relations(self, pair_limit: int = 2_000_000, seed: int = 0):
        """Exhaustive over pairs when |G|^2 is small, else seeded samples."""
        G = self.group
        n = G.order
        if n * n <= pair_limit:
            for g in G.elements:
                for h in G.elements:
                    if not self.check_relation(g, h):
                        return False, (g, h)
            return True, None
        rng = np.random.default_rng(seed)
        for _ in range(pair_limit):
            g = G.elements[int(rng.integers(0, n))]
            h = G.elements[int(rng.integers(0, n))]
            if not self.check_relation(g, h):
                return False, (g, h)
        return True, None


def regular_rep(G: FiniteGroup, mu: TwoCocycle) -> ProjectiveRep:
    """lambda_mu(g) xi_h = mu(g,h) xi_{gh} as a |G| x |G| monomial matrix."""
    G.index(G.identity)  # force the index map

    def mat_fn(g):
        perm = []
        phases = []
        for h in G.elements:
            perm.append(G.index(G.mul(g, h)))
            phases.append(mu(g, h))
        return MonomialMatrix(G.order, tuple(perm), tuple(phases))

    return ProjectiveRep(G, mu, G.order, mat_fn)


def clock_shift(N: int):
    """Clock u = diag(zeta_N^j), shift v: e_j -> e_{j+1}; u v = alpha v u.

    Returns (u, v, alpha) with u^N = v^N = I and normalized matrix trace
    of u^k v^l equal to zero unless (k, l) = (0, 0) mod N.
    """
    from .scalars import make_alpha
    if N < 1:
        raise ValueError("N must be >= 1")
    alpha = make_alpha(N, 1)
    u = MonomialMatrix(N, tuple(range(N)),
                       tuple(RootUnity.of(j, N) for j in range(N)))
    v = MonomialMatrix(N, tuple((j + 1) % N for j in range(N)),
                       (RootUnity.one(),) * N)
    return u, v, alpha


def monomial_power(m: MonomialMatrix, k: int) -> MonomialMatrix:
    if k < 0:
        return monomial_power(m.adjoint(), -k)
    out = MonomialMatrix.identity(m.dim, m.phases[0])
    base = m
    while k:
        if k & 1:
            out = out @ base
        base = base @ base
        k >>= 1
    return out
