"""Finite group machinery and integer matrix helpers.

Elements are hashable canonical values (tuples), so they can key cocycle
tables and representation matrices.  Groups are formula backed -- no
multiplication table is materialized -- which keeps semidirect products
of order tens of thousands workable.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Iterable, Optional

import numpy as np


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group given by an element list and a multiplication rule."""

    def __init__(self, elements, mul: Callable, inv: Callable = None,
                 identity=None, kind: str = "table", descriptor: dict = None):
        self.elements = list(elements)
        self.mul = mul
        self.kind = kind
        self.descriptor = descriptor or {"kind": kind}
        self._index = None
        self._exponent = None
        if identity is None:
            identity = self._find_identity()
        self.identity = identity
        if inv is None:
            inv = self._search_inverse
        self.inv = inv

    @property
    def order(self) -> int:
        return len(self.elements)

    def _find_identity(self):
        probe = self.elements[0]
        for e in self.elements:
            if self.mul(e, probe) == probe and self.mul(probe, e) == probe:
                return e
        raise GroupError("no identity element found")

    def _search_inverse(self, g):
        for h in self.elements:
            if self.mul(g, h) == self.identity and self.mul(h, g) == self.identity:
                return h
        raise GroupError(f"no inverse for {g!r}")

    def index(self, g) -> int:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
        return self._index[g]

    def __contains__(self, g):
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
        return g in self._index

    def power(self, g, n: int):
        if n < 0:
            return self.power(self.inv(g), -n)
        out = self.identity
        base = g
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def element_order(self, g) -> int:
        n = 1
        x = g
        while x != self.identity:
            x = self.mul(x, g)
            n += 1
        return n

    def exponent(self) -> int:
        if self._exponent is None:
            e = 1
            for g in self.elements:
                o = self.element_order(g)
                e = e * o // math.gcd(e, o)
            self._exponent = e
        return self._exponent

    def __repr__(self):
        return f"<FiniteGroup {self.kind} order {self.order}>"


class Lattice:
    """The free abelian group Z^rank, handled symbolically."""

    def __init__(self, rank: int):
        self.rank = rank
        self.identity = (0,) * rank
        self.kind = "lattice"
        self.descriptor = {"kind": "lattice", "rank": rank}

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def __repr__(self):
        return f"<Lattice Z^{self.rank}>"


def cyclic_power(q: int, m: int) -> FiniteGroup:
    """(Z/q)^m with componentwise addition."""
    if q < 1 or m < 1:
        raise GroupError("q and m must be >= 1")
    elements = [tuple(t) for t in itertools.product(range(q), repeat=m)]

    def mul(x, y):
        return tuple((a + b) % q for a, b in zip(x, y))

    def inv(x):
        return tuple((-a) % q for a in x)

    return FiniteGroup(elements, mul, inv, identity=(0,) * m,
                       kind="cyclicPower", descriptor={"kind": "cyclicPower", "q": q, "m": m})


def abelian_group(cycles) -> FiniteGroup:
    """Z/d1 x ... x Z/dr for the given cycle sizes."""
    cycles = tuple(int(d) for d in cycles)
    if not cycles or any(d < 1 for d in cycles):
        raise GroupError("cycle sizes must be >= 1")
    elements = [tuple(t) for t in itertools.product(*[range(d) for d in cycles])]

    def mul(x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, cycles))

    def inv(x):
        return tuple((-a) % d for a, d in zip(x, cycles))

    G = FiniteGroup(elements, mul, inv, identity=(0,) * len(cycles),
                    kind="abelian", descriptor={"kind": "abelian", "cycles": list(cycles)})
    G.cycles = cycles
    return G


def sl2_order(q: int) -> int:
    """|SL(2, Z/q)| = q^3 * prod_{p | q} (1 - p^-2)."""
    n = q ** 3
    num, den = 1, 1
    qq = q
    for p in range(2, qq + 1):
        if p * p > qq:
            if qq > 1:
                num *= qq * qq - 1
                den *= qq * qq
            break
        if qq % p == 0:
            num *= p * p - 1
            den *= p * p
            while qq % p == 0:
                qq //= p
    return n * num // den


def sl2_mod(q: int, max_order: int = 100_000) -> FiniteGroup:
    """All 2x2 matrices of determinant 1 mod q."""
    if q < 2:
        raise GroupError("q must be >= 2")
    expected = sl2_order(q)
    if expected > max_order:
        raise GroupError(f"SL(2,Z/{q}) has order {expected} > cap {max_order}")
    rng = np.arange(q, dtype=np.int64)
    a, b, c, d = np.meshgrid(rng, rng, rng, rng, indexing="ij")
    mask = (a * d - b * c) % q == 1
    quads = np.stack([a[mask], b[mask], c[mask], d[mask]], axis=1)
    elements = [((int(r[0]), int(r[1])), (int(r[2]), int(r[3]))) for r in quads]
    elements.sort()
    if len(elements) != expected:
        raise AssertionError("SL2 enumeration disagrees with the order formula")

    def mul(x, y):
        return mmul(x, y, mod=q)

    def inv(x):
        (aa, bb), (cc, dd) = x
        return ((dd % q, (-bb) % q), ((-cc) % q, aa % q))

    return FiniteGroup(elements, mul, inv, identity=((1, 0), (0, 1)),
                       kind="sl2mod", descriptor={"kind": "sl2mod", "q": q})


def semidirect(N: FiniteGroup, Gamma: FiniteGroup, q: int) -> FiniteGroup:
    """(Z/q)^m x| Gamma with Gamma acting by matrices mod q.

    Elements are (x, g); (x1, g1)(x2, g2) = (x1 + g1 x2, g1 g2).
    """
    for g in Gamma.elements:
        det = mdet(g) % q
        if math.gcd(det, q) != 1:
            raise GroupError(f"action matrix {g!r} not invertible mod {q}")
    elements = [(x, g) for x in N.elements for g in Gamma.elements]

    def mul(e1, e2):
        (x1, g1), (x2, g2) = e1, e2
        return (tuple((a + b) % q for a, b in zip(x1, mvec(g1, x2, mod=q))),
                Gamma.mul(g1, g2))

    def inv(e):
        x, g = e
        gi = Gamma.inv(g)
        y = mvec(gi, x, mod=q)
        return (tuple((-a) % q for a in y), gi)

    return FiniteGroup(elements, mul, inv, identity=(N.identity, Gamma.identity),
                       kind="semidirect",
                       descriptor={"kind": "semidirect", "q": q,
                                   "n": len(N.identity) // 2,
                                   "gamma": Gamma.descriptor})


def generated_subgroup(G: FiniteGroup, gens: Iterable) -> FiniteGroup:
    """The subgroup of G generated by gens (breadth-first closure)."""
    gens = list(gens)
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                for y in (G.mul(x, s), G.mul(x, G.inv(s))):
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
        frontier = nxt
    elements = sorted(seen)
    return FiniteGroup(elements, G.mul, G.inv, identity=G.identity,
                       kind="subgroup", descriptor={"kind": "subgroup", "of": G.descriptor})


def check_group_axioms(G: FiniteGroup, seed: int = 0, sample_triples: int = 20_000):
    """Associativity and inverses; exhaustive for |G| <= 200, sampled beyond."""
    n = G.order
    for g in G.elements:
        h = G.inv(g)
        if G.mul(g, h) != G.identity or G.mul(h, g) != G.identity:
            return False, ("inverse", g)
    if n <= 200:
        for a in G.elements:
            for b in G.elements:
                ab = G.mul(a, b)
                for c in G.elements:
                    if G.mul(ab, c) != G.mul(a, G.mul(b, c)):
                        return False, ("assoc", a, b, c)
    else:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, n, size=(sample_triples, 3))
        for i, j, k in idx:
            a, b, c = G.elements[i], G.elements[j], G.elements[k]
            if G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c)):
                return False, ("assoc", a, b, c)
    return True, None


# ---------------------------------------------------------------------------
# integer matrices as tuples of tuples


def mat(rows) -> tuple:
    return tuple(tuple(int(v) for v in r) for r in rows)


def identity_mat(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mmul(a, b, mod: Optional[int] = None) -> tuple:
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = sum(a[i][k] * b[k][j] for k in range(m))
            row.append(s % mod if mod else s)
        out.append(tuple(row))
    return tuple(out)


def mvec(a, v, mod: Optional[int] = None) -> tuple:
    out = []
    for row in a:
        s = sum(x * y for x, y in zip(row, v))
        out.append(s % mod if mod else s)
    return tuple(out)


def mtrans(a) -> tuple:
    return tuple(tuple(a[j][i] for j in range(len(a))) for i in range(len(a[0])))


def mmod(a, q: int) -> tuple:
    return tuple(tuple(v % q for v in row) for row in a)


def mdet(a) -> int:
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    det = 0
    for j in range(n):
        minor = tuple(tuple(row[k] for k in range(n) if k != j) for row in a[1:])
        det += (-1) ** j * a[0][j] * mdet(minor)
    return det


def madjugate(a) -> tuple:
    n = len(a)
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(tuple(a[r][c] for c in range(n) if c != j)
                          for r in range(n) if r != i)
            row.append((-1) ** (i + j) * (mdet(minor) if n > 1 else 1))
        cof.append(tuple(row))
    return mtrans(tuple(cof))


def munimodular_inverse(a) -> tuple:
    d = mdet(a)
    if d not in (1, -1):
        raise GroupError("matrix is not unimodular")
    adj = madjugate(a)
    return tuple(tuple(d * v for v in row) for row in adj)


def symplectic_form(n: int) -> tuple:
    """The 2n x 2n block matrix ((0, I), (-I, 0))."""
    rows = []
    for i in range(n):
        rows.append(tuple(int(j == n + i) for j in range(2 * n)))
    for i in range(n):
        rows.append(tuple(-int(j == i) for j in range(2 * n)))
    return tuple(rows)


def is_symplectic(m) -> bool:
    n2 = len(m)
    if n2 % 2:
        return False
    J = symplectic_form(n2 // 2)
    return mmul(mtrans(m), mmul(J, m)) == J


def theta_embedding(g) -> tuple:
    """Block matrix diag(g, (g^-1)^t) in SL(2n, Z); always symplectic."""
    gi_t = mtrans(munimodular_inverse(g))
    n = len(g)
    rows = []
    for i in range(n):
        rows.append(tuple(g[i]) + (0,) * n)
    for i in range(n):
        rows.append((0,) * n + tuple(gi_t[i]))
    return tuple(rows)


def is_parabolic(g) -> bool:
    """Trace +-2 but not +-identity, for g in SL(2, Z)."""
    if mdet(g) != 1:
        raise GroupError("is_parabolic expects determinant 1")
    tr = g[0][0] + g[1][1]
    if tr not in (2, -2):
        return False
    eye = identity_mat(2)
    neg = tuple(tuple(-v for v in row) for row in eye)
    return g != eye and g != neg


def sl2_generators() -> tuple:
    """The standard generators S = (0,-1;1,0) and T = (1,1;0,1)."""
    return (mat([[0, -1], [1, 0]]), mat([[1, 1], [0, 1]]))
