"""Scalar 2-cocycles: construction, verification, coboundary detection.

A 2-cocycle mu on G satisfies mu(g,h) mu(gh,k) = mu(h,k) mu(g,hk).  The
workhorse family here is the symplectic one: nu_alpha(x, y) =
alpha^{(1/2) x^T J y} on Z^{2n} or on a finite quotient (Z/q)^{2n}, its
extension to semidirect products by symplectic matrix groups, and exact
coboundary detection over finite groups by integer linear algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .groups import (FiniteGroup, Lattice, cyclic_power, generated_subgroup,
                     mmul, mtrans, mvec, semidirect, symplectic_form)
from .intlinalg import CongruenceSystem
from .scalars import Alpha, RootUnity, Scalar, scalar_one_like


class WellDefinednessError(ValueError):
    """Finite quotient modulus incompatible with the scalar's order."""


class InvarianceViolation(ValueError):
    def __init__(self, gamma, pair):
        self.gamma = gamma
        self.pair = pair
        super().__init__(f"cocycle not invariant under {gamma!r} (witness pair {pair!r})")


class NonTorsionValuesError(TypeError):
    """Coboundary detection needs torsion (root-of-unity) values."""


class TwoCocycle:
    """Base: a function G x G -> unit scalars with the cocycle identity."""

    group = None
    value_order: Optional[int] = None  # all values in <zeta_M> when set

    def __call__(self, g, h) -> Scalar:
        raise NotImplementedError

    def one(self) -> Scalar:
        raise NotImplementedError

    def conj(self) -> "TwoCocycle":
        return _MappedCocycle(self, lambda s: s.conj())

    def product(self, other: "TwoCocycle") -> "TwoCocycle":
        if self.group is not other.group and getattr(self.group, "elements", None) != getattr(other.group, "elements", None):
            raise ValueError("cocycles live on different groups")
        return _ProductCocycle(self, other)


class _MappedCocycle(TwoCocycle):
    def __init__(self, base, fn):
        self.base = base
        self.fn = fn
        self.group = base.group
        self.value_order = base.value_order

    def __call__(self, g, h):
        return self.fn(self.base(g, h))

    def one(self):
        return self.base.one()


class _ProductCocycle(TwoCocycle):
    def __init__(self, a, b):
        self.a = a
        self.b = b
        self.group = a.group
        if a.value_order and b.value_order:
            self.value_order = a.value_order * b.value_order // math.gcd(a.value_order, b.value_order)
        else:
            self.value_order = None

    def __call__(self, g, h):
        return self.a(g, h) * self.b(g, h)

    def one(self):
        return self.a.one()


class SymplecticCocycle(TwoCocycle):
    """nu_alpha(x, y) = half_power(alpha, x^T J y) on Z^{2n} or (Z/q)^{2n}."""

    def __init__(self, alpha: Alpha, n: int = 1, q: Optional[int] = None):
        self.alpha = alpha
        self.n = n
        self.q = q
        self.J = symplectic_form(n)
        if q is None:
            self.group = Lattice(2 * n)
        else:
            ro = alpha.root_order
            if ro is None or q % ro != 0:
                raise WellDefinednessError(
                    f"order of alpha^(1/2) is {ro}, which does not divide q={q}")
            self.group = cyclic_power(q, 2 * n)
        self.value_order = alpha.root_order

    def exponent(self, x, y) -> int:
        """x^T J y over the integers (canonical representatives)."""
        n = self.n
        s = 0
        for i in range(n):
            s += x[i] * y[n + i] - x[n + i] * y[i]
        return s

    def __call__(self, x, y) -> Scalar:
        return self.alpha.half_power(self.exponent(x, y))

    def one(self) -> Scalar:
        return scalar_one_like(self.alpha.value)

    # vectorized support -----------------------------------------------
    def batch_data(self):
        if self.q is None:
            raise ValueError("vectorized checks need a finite quotient")
        arr = np.array(self.group.elements, dtype=np.int64)
        return {"x": arr}

    def batch_product(self, a, b):
        return {"x": (a["x"] + b["x"]) % self.q}

    def batch_exponent(self, a, b):
        """Exponents of the values as powers of zeta_M, M = value_order."""
        n = self.n
        x, y = a["x"], b["x"]
        form = (x[..., :n] * y[..., n:]).sum(axis=-1) - (x[..., n:] * y[..., :n]).sum(axis=-1)
        t = self.alpha.root.turn
        M = self.value_order
        return (form * (t.numerator * (M // t.denominator))) % M


def mu_alpha(alpha: Alpha) -> SymplecticCocycle:
    """The rank-one torus cocycle ((k,l),(k',l')) -> alpha^{(kl'-k'l)/2}.

    With J = ((0,1),(-1,0)) this is literally the symplectic cocycle for
    n = 1; the two published sign conventions coincide under this J.
    """
    return SymplecticCocycle(alpha, n=1, q=None)


class ExtendedCocycle(TwoCocycle):
    """nu extended to (Z/q)^{2n} x| Gamma by ((x1,g1),(x2,g2)) -> nu(x1, g1 x2)."""

    def __init__(self, base: SymplecticCocycle, gamma: FiniteGroup):
        if base.q is None:
            raise ValueError("extension implemented on finite quotients")
        self.base = base
        self.gamma = gamma
        self.q = base.q
        for g in gamma.elements:
            ok, pair = invariance_witness(base, g)
            if not ok:
                raise InvarianceViolation(g, pair)
        self.group = semidirect(base.group, gamma, base.q)
        self.value_order = base.value_order

    def __call__(self, e1, e2) -> Scalar:
        (x1, g1), (x2, _) = e1, e2
        return self.base(x1, mvec(g1, x2, mod=self.q))

    def one(self) -> Scalar:
        return self.base.one()

    # vectorized support -----------------------------------------------
    def batch_data(self):
        els = self.group.elements
        x = np.array([e[0] for e in els], dtype=np.int64)
        m = np.array([e[1] for e in els], dtype=np.int64)
        return {"x": x, "m": m}

    def batch_product(self, a, b):
        q = self.q
        x = (a["x"] + np.einsum("...ij,...j->...i", a["m"], b["x"])) % q
        m = np.einsum("...ik,...kj->...ij", a["m"], b["m"]) % q
        return {"x": x, "m": m}

    def batch_exponent(self, a, b):
        q = self.q
        y = np.einsum("...ij,...j->...i", a["m"], b["x"]) % q
        n = self.base.n
        x = a["x"]
        form = (x[..., :n] * y[..., n:]).sum(axis=-1) - (x[..., n:] * y[..., :n]).sum(axis=-1)
        t = self.base.alpha.root.turn
        M = self.value_order
        return (form * (t.numerator * (M // t.denominator))) % M


class TableCocycle(TwoCocycle):
    """A cocycle given by its full value table on a finite group."""

    def __init__(self, group: FiniteGroup, table: dict, value_order: Optional[int] = None):
        self.group = group
        self.table = dict(table)
        if value_order is None:
            M = 1
            for v in self.table.values():
                if not isinstance(v, RootUnity):
                    M = None
                    break
                M = M * v.order // math.gcd(M, v.order)
            value_order = M
        self.value_order = value_order

    def __call__(self, g, h) -> Scalar:
        return self.table[(g, h)]

    def one(self) -> Scalar:
        return scalar_one_like(next(iter(self.table.values())))


def trivial_cocycle(G) -> TwoCocycle:
    """The constant cocycle 1 on G (the untwisted group algebra)."""

    class _Trivial(TwoCocycle):
        def __init__(self):
            self.group = G
            self.value_order = 1

        def __call__(self, g, h):
            return RootUnity.one()

        def one(self):
            return RootUnity.one()

    return _Trivial()


def as_table(mu: TwoCocycle) -> TableCocycle:
    if isinstance(mu, TableCocycle):
        return mu
    G = mu.group
    table = {(g, h): mu(g, h) for g in G.elements for h in G.elements}
    return TableCocycle(G, table, mu.value_order)


def coboundary(group: FiniteGroup, lam: dict) -> TableCocycle:
    """The coboundary d(lam): (g,h) -> lam_g lam_h conj(lam_{gh}).

    lam is normalized so that lam(e) = 1 (a constant rescaling does not
    change the coboundary), keeping the cocycle normalized.
    """
    e = group.identity
    c = lam[e].conj()
    lam = {g: v * c for g, v in lam.items()}
    table = {}
    for g in group.elements:
        for h in group.elements:
            table[(g, h)] = lam[g] * lam[h] * lam[group.mul(g, h)].conj()
    return TableCocycle(group, table)


def invariance_witness(nu: SymplecticCocycle, g):
    """Check nu(gx, gy) = nu(x, y) on all standard basis pairs.

    The exponent is bilinear, so basis pairs span: the values agree for
    all x, y iff the entries of g^T J g - J vanish mod the root order.
    """
    dim = 2 * nu.n
    M = nu.value_order  # None in symbolic mode: require exact equality over Z
    JT = mmul(mtrans(g), mmul(nu.J, g))
    for i in range(dim):
        for j in range(dim):
            diff = JT[i][j] - nu.J[i][j]
            if (diff % M if M else diff) != 0:
                ei = tuple(int(k == i) for k in range(dim))
                ej = tuple(int(k == j) for k in range(dim))
                return False, (ei, ej)
    return True, None


def verify_invariance(nu: SymplecticCocycle, g) -> bool:
    return invariance_witness(nu, g)[0]


def extend_to_semidirect(nu: SymplecticCocycle, gamma: FiniteGroup) -> ExtendedCocycle:
    return ExtendedCocycle(nu, gamma)


# ---------------------------------------------------------------------------
# cocycle identity verification


@dataclass
class IdentityReport:
    ok: bool
    checked: int
    mode: str  # "exhaustive" | "sampled"
    witness: Optional[tuple] = None


def verify_cocycle_identity(mu: TwoCocycle, exhaustive_limit: int = 10 ** 7,
                            samples: int = 10 ** 6, seed: int = 0) -> IdentityReport:
    """mu(g,h) mu(gh,k) == mu(h,k) mu(g,hk), exhaustively when |G|^3 is
    within the limit and on seeded uniform triples beyond."""
    G = mu.group
    if isinstance(G, Lattice):
        return _verify_identity_lattice(mu, samples=min(samples, 20000), seed=seed)
    n = G.order
    if n ** 3 <= exhaustive_limit:
        if hasattr(mu, "batch_exponent"):
            return _verify_identity_batched(mu, None, seed)
        return _verify_identity_loop(mu)
    if hasattr(mu, "batch_exponent"):
        return _verify_identity_batched(mu, samples, seed)
    return _verify_identity_sampled_loop(mu, samples, seed)


def _verify_identity_loop(mu) -> IdentityReport:
    G = mu.group
    count = 0
    for g in G.elements:
        for h in G.elements:
            gh = G.mul(g, h)
            m_gh = mu(g, h)
            for k in G.elements:
                lhs = m_gh * mu(gh, k)
                rhs = mu(h, k) * mu(g, G.mul(h, k))
                count += 1
                if lhs != rhs:
                    return IdentityReport(False, count, "exhaustive", (g, h, k))
    return IdentityReport(True, count, "exhaustive")


def _verify_identity_sampled_loop(mu, samples, seed) -> IdentityReport:
    G = mu.group
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, G.order, size=(samples, 3))
    count = 0
    for i, j, k in idx:
        g, h, kk = G.elements[i], G.elements[j], G.elements[k]
        lhs = mu(g, h) * mu(G.mul(g, h), kk)
        rhs = mu(h, kk) * mu(g, G.mul(h, kk))
        count += 1
        if lhs != rhs:
            return IdentityReport(False, count, "sampled", (g, h, kk))
    return IdentityReport(True, count, "sampled")


def _take(data, idx):
    return {k: v[idx] for k, v in data.items()}


def _verify_identity_batched(mu, samples, seed) -> IdentityReport:
    """Vectorized identity check in exponent form (values are zeta_M powers)."""
    data = mu.batch_data()
    n = len(next(iter(data.values())))
    M = mu.value_order
    rng = np.random.default_rng(seed)
    checked = 0
    if samples is None:
        # exhaustive: for each g, sweep the full (h, k) grid
        hh, kk = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        hh, kk = hh.ravel(), kk.ravel()
        H = _take(data, hh)
        K = _take(data, kk)
        HK = mu.batch_product(H, K)
        e_hk = mu.batch_exponent(H, K)
        for gi in range(n):
            gsel = np.full(n * n, gi)
            Gd = _take(data, gsel)
            GH = mu.batch_product(Gd, H)
            lhs = (mu.batch_exponent(Gd, H) + mu.batch_exponent(GH, K)) % M
            rhs = (e_hk + mu.batch_exponent(Gd, HK)) % M
            bad = np.nonzero(lhs != rhs)[0]
            checked += n * n
            if len(bad):
                b = int(bad[0])
                G = mu.group
                return IdentityReport(False, checked, "exhaustive",
                                      (G.elements[gi], G.elements[int(hh[b])], G.elements[int(kk[b])]))
        return IdentityReport(True, checked, "exhaustive")
    chunk = 250_000
    remaining = samples
    while remaining > 0:
        m = min(chunk, remaining)
        gi = rng.integers(0, n, size=m)
        hi = rng.integers(0, n, size=m)
        ki = rng.integers(0, n, size=m)
        Gd, H, K = _take(data, gi), _take(data, hi), _take(data, ki)
        GH = mu.batch_product(Gd, H)
        HK = mu.batch_product(H, K)
        lhs = (mu.batch_exponent(Gd, H) + mu.batch_exponent(GH, K)) % M
        rhs = (mu.batch_exponent(H, K) + mu.batch_exponent(Gd, HK)) % M
        bad = np.nonzero(lhs != rhs)[0]
        checked += m
        if len(bad):
            b = int(bad[0])
            G = mu.group
            return IdentityReport(False, checked, "sampled",
                                  (G.elements[int(gi[b])], G.elements[int(hi[b])], G.elements[int(ki[b])]))
        remaining -= m
    return IdentityReport(True, checked, "sampled")


def _verify_identity_lattice(mu, samples, seed) -> IdentityReport:
    rng = np.random.default_rng(seed)
    rank = mu.group.rank
    vecs = rng.integers(-12, 13, size=(samples, 3, rank))
    count = 0
    for g, h, k in vecs:
        g, h, k = tuple(map(int, g)), tuple(map(int, h)), tuple(map(int, k))
        gh = mu.group.mul(g, h)
        hk = mu.group.mul(h, k)
        count += 1
        if mu(g, h) * mu(gh, k) != mu(h, k) * mu(g, hk):
            return IdentityReport(False, count, "sampled", (g, h, k))
    return IdentityReport(True, count, "sampled")


# ---------------------------------------------------------------------------
# coboundary detection by exact integer linear algebra


def _coboundary_system(group: FiniteGroup, modulus: int) -> CongruenceSystem:
    cache = getattr(group, "_coboundary_systems", None)
    if cache is None:
        cache = {}
        group._coboundary_systems = cache
    if modulus not in cache:
        n = group.order
        rows = []
        for g in group.elements:
            ig = group.index(g)
            for h in group.elements:
                row = {}
                for col, coef in ((ig, 1), (group.index(h), 1), (group.index(group.mul(g, h)), -1)):
                    row[col] = row.get(col, 0) + coef
                rows.append(row)
        cache[modulus] = CongruenceSystem(rows, n, modulus)
    return cache[modulus]


def _value_exponents(mu: TwoCocycle, modulus: int) -> list:
    """Exponent vector of mu's values as powers of zeta_modulus, in row order."""
    G = mu.group
    out = []
    for g in G.elements:
        for h in G.elements:
            v = mu(g, h)
            if not isinstance(v, RootUnity):
                raise NonTorsionValuesError("cocycle values are not roots of unity")
            t = v.turn
            if modulus % t.denominator:
                raise NonTorsionValuesError("value outside the declared torsion group")
            out.append(t.numerator * (modulus // t.denominator) % modulus)
    return out


def is_coboundary(mu: TwoCocycle) -> Optional[dict]:
    """A witness lam with mu = d(lam), or None when the class is nontrivial.

    Values of mu must lie in <zeta_M>.  The unknown lam is searched with
    values in <zeta_{M * exp(G)}>: if mu = d(lam) for ANY circle-valued
    lam then lam^M is a character of G, whose values are exp(G)-th roots
    of unity, so this enlarged modulus loses no solutions.  The g=h=e
    equation pins lam(e), and the integer system lam_g + lam_h - lam_{gh}
    = m_{g,h} (mod M exp(G)) is solved by Smith normal form.
    """
    G = mu.group
    if isinstance(G, Lattice):
        raise NonTorsionValuesError("coboundary detection needs a finite group")
    if mu.value_order is None:
        raise NonTorsionValuesError("cocycle values are not torsion")
    M = mu.value_order
    Mp = M * G.exponent()
    system = _coboundary_system(G, Mp)
    rhs = _value_exponents(mu, Mp)
    x = system.solve(rhs)
    if x is None:
        return None
    lam = {g: RootUnity.of(x[G.index(g)], Mp) for g in G.elements}
    for g in G.elements:  # exactness audit
        for h in G.elements:
            if lam[g] * lam[h] * lam[G.mul(g, h)].conj() != mu(g, h):
                raise AssertionError("coboundary witness failed verification")
    return lam


def restrict(mu: TwoCocycle, H) -> TableCocycle:
    """Pointwise restriction of mu to a subgroup H of its domain."""
    G = mu.group
    if isinstance(H, FiniteGroup):
        sub = H.elements
    else:
        sub = list(H)
    sset = set(sub)
    if not isinstance(G, Lattice):
        for a in sub:
            if a not in G:
                raise ValueError(f"{a!r} is not an element of the ambient group")
    for a in sub:
        for b in sub:
            if G.mul(a, b) not in sset:
                raise ValueError("subset is not closed under multiplication")
    Hgrp = FiniteGroup(sub, G.mul, G.inv, kind="subgroup",
                       descriptor={"kind": "subgroup"})
    table = {(a, b): mu(a, b) for a in sub for b in sub}
    return TableCocycle(Hgrp, table, mu.value_order)


def same_class(mu1: TwoCocycle, mu2: TwoCocycle) -> bool:
    """Whether mu1 and mu2 differ by a coboundary on a shared finite group."""
    G1, G2 = mu1.group, mu2.group
    if getattr(G1, "elements", None) != getattr(G2, "elements", None):
        raise ValueError("cocycles must share a group")
    prod = TableCocycle(G1, {(g, h): mu1(g, h) * mu2(g, h).conj()
                             for g in G1.elements for h in G1.elements})
    return is_coboundary(prod) is not None


# ---------------------------------------------------------------------------
# descriptors


def cocycle_from_descriptor(desc: dict) -> TwoCocycle:
    from .scalars import make_alpha
    kind = desc.get("type")
    if kind == "symplectic":
        alpha = make_alpha(int(desc["alphaOrder"]), int(desc["alphaExp"]))
        return SymplecticCocycle(alpha, int(desc.get("n", 1)), desc.get("q"))
    if kind == "table":
        from .scalars import parse_scalar
        gdesc = desc["group"]
        G = group_from_descriptor(gdesc)
        M = int(desc["m"])
        table = {}
        for g, h, e in desc["entries"]:
            table[(_canon_el(g), _canon_el(h))] = RootUnity.of(int(e), M)
        return TableCocycle(G, table, M)
    raise ValueError(f"unknown cocycle descriptor {desc!r}")


def _canon_el(x):
    if isinstance(x, list):
        return tuple(_canon_el(v) for v in x)
    return x


def group_from_descriptor(desc: dict) -> FiniteGroup:
    kind = desc.get("kind")
    if kind == "cyclicPower" or kind == "torus":
        q = int(desc["q"])
        m = int(desc.get("m", 2 * int(desc.get("n", 1))))
        return cyclic_power(q, m)
    if kind == "sl2mod":
        return sl2_mod_cached(int(desc["q"]))
    if kind == "semidirect":
        q = int(desc["q"])
        n = int(desc.get("n", 1))
        gd = desc.get("gamma", "sl2mod")
        if gd == "sl2mod" or (isinstance(gd, dict) and gd.get("kind") == "sl2mod"):
            gamma = sl2_mod_cached(q)
        else:
            from .groups import mat, mmod
            gens = [mmod(mat(g), q) for g in gd]
            gamma = generated_subgroup(sl2_mod_cached(q), gens)
        return semidirect(cyclic_power(q, 2 * n), gamma, q)
    if kind == "abelian":
        from .groups import abelian_group
        return abelian_group(desc["cycles"])
    raise ValueError(f"unknown group descriptor {desc!r}")


_SL2_CACHE = {}


def sl2_mod_cached(q: int) -> FiniteGroup:
    from .groups import sl2_mod
    if q not in _SL2_CACHE:
        _SL2_CACHE[q] = sl2_mod(q)
    return _SL2_CACHE[q]
