"""Central extensions and their block decomposition over characters.

A central extension of a finite group G by a finite abelian group A is
built from an A-valued 2-cocycle nu: the set A x G with multiplication
(a1, g1)(a2, g2) = (a1 a2 nu(g1, g2), g1 g2).  Conjugating the regular
representation of the extension by the character-indexed isometry theta
block-diagonalizes it: the block at a character chi is the regular
representation of G twisted by the scalar cocycle chi(nu).  Everything
here is verified in exact cyclotomic-integer arithmetic; the flagship
family is the discrete Heisenberg group mod m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .cocycles import TableCocycle, TwoCocycle
from .cycmat import CycMat
from .groups import FiniteGroup, abelian_group, cyclic_power
from .scalars import RootUnity
from .twisted_algebra import (AlgebraElement, Coeff, MonomialMatrix,
                              ProjectiveRep, regular_rep)


class CocycleIdentityError(ValueError):
    def __init__(self, triple):
        self.triple = triple
        super().__init__(f"A-valued cocycle identity fails at {triple!r}")


class AValuedCocycle:
    """A 2-cocycle on G with values in a finite abelian group A."""

    def __init__(self, G: FiniteGroup, A: FiniteGroup, fn: Callable):
        self.G = G
        self.A = A
        self.fn = fn

    def __call__(self, g, h):
        return self.fn(g, h)


def heisenberg_cocycle(m: int) -> AValuedCocycle:
    """nu(x, y) = x1 * y2 mod m on (Z/m)^2, valued in Z/m."""
    G = cyclic_power(m, 2)
    A = abelian_group((m,))

    def fn(x, y):
        return ((x[0] * y[1]) % m,)

    return AValuedCocycle(G, A, fn)


class CentralExtension(FiniteGroup):
    """The group A x_nu G with multiplication twisted by nu in the A slot."""

    def __init__(self, A: FiniteGroup, G: FiniteGroup, nu: AValuedCocycle,
                 check_triples: int = 200_000, seed: int = 0):
        self.A = A
        self.base = G
        self.nu = nu
        _check_a_valued_identity(G, A, nu, check_triples, seed)
        elements = [(a, g) for a in A.elements for g in G.elements]

        def mul(e1, e2):
            (a1, g1), (a2, g2) = e1, e2
            return (A.mul(A.mul(a1, a2), nu(g1, g2)), G.mul(g1, g2))

        def inv(e):
            a, g = e
            gi = G.inv(g)
            return (A.inv(A.mul(a, nu(g, gi))), gi)

        super().__init__(elements, mul, inv,
                         identity=(A.identity, G.identity),
                         kind="centralExtension",
                         descriptor={"kind": "centralExtension",
                                     "a": A.descriptor, "g": G.descriptor})
        ident = self.identity
        for e in elements:
            if self.mul(e, self.inv(e)) != ident or self.mul(self.inv(e), e) != ident:
                raise AssertionError(f"inverse formula fails at {e!r}")
        # A x {e} must be central
        for a in A.elements:
            z = (a, G.identity)
            for g in G.elements[: min(len(G.elements), 64)]:
                e = (A.identity, g)
                if self.mul(z, e) != self.mul(e, z):
                    raise AssertionError(f"central fiber element {z!r} does not commute")


def _check_a_valued_identity(G, A, nu, budget, seed):
    n = G.order
    if n ** 3 <= budget:
        triples = ((g, h, k) for g in G.elements for h in G.elements for k in G.elements)
    else:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, n, size=(budget, 3))
        triples = ((G.elements[i], G.elements[j], G.elements[k]) for i, j, k in idx)
    for g, h, k in triples:
        lhs = A.mul(nu(g, h), nu(G.mul(g, h), k))
        rhs = A.mul(nu(h, k), nu(g, G.mul(h, k)))
        if lhs != rhs:
            raise CocycleIdentityError((g, h, k))


def central_extension(A: FiniteGroup, G: FiniteGroup, nu: AValuedCocycle) -> CentralExtension:
    return CentralExtension(A, G, nu)


def heisenberg_extension(m: int) -> CentralExtension:
    nu = heisenberg_cocycle(m)
    return CentralExtension(nu.A, nu.G, nu)


# ---------------------------------------------------------------------------
# characters of a finite abelian group


@dataclass(frozen=True)
class Character:
    cycles: tuple
    exponents: tuple

    def __call__(self, a) -> RootUnity:
        from fractions import Fraction
        t = Fraction(0)
        for d, e, x in zip(self.cycles, self.exponents, a):
            t += Fraction(e * x, d)
        return RootUnity(t)

    @property
    def order(self) -> int:
        o = 1
        for d, e in zip(self.cycles, self.exponents):
            oe = d // math.gcd(d, e)
            o = o * oe // math.gcd(o, oe)
        return o

    def label(self) -> str:
        return ",".join(str(e) for e in self.exponents)


def characters(A: FiniteGroup) -> List[Character]:
    """All characters, in lexicographic order of their exponent tuples."""
    cycles = getattr(A, "cycles", None)
    if cycles is None:
        desc = A.descriptor
        if desc.get("kind") == "cyclicPower":
            cycles = (desc["q"],) * desc["m"]
        else:
            raise ValueError("characters need a known cyclic decomposition")
    import itertools
    return [Character(tuple(cycles), t)
            for t in itertools.product(*[range(d) for d in cycles])]


def pullback_cocycle(nu: AValuedCocycle, chi: Character) -> TwoCocycle:
    """The scalar cocycle chi(nu(g, h)) on G."""
    G = nu.G
    table = {(g, h): chi(nu(g, h)) for g in G.elements for h in G.elements}
    return TableCocycle(G, table)


def tau_character(chi: Character, x, ext: CentralExtension) -> Coeff:
    """The functional (a, g) -> chi(a) * [g = e], linearly extended."""
    if isinstance(x, AlgebraElement):
        out = Coeff.zero()
        for (a, g), c in x.terms.items():
            if g == ext.base.identity:
                out = out + c * chi(a)
        return out
    a, g = x
    if g != ext.base.identity:
        return Coeff.zero()
    return Coeff.unit(chi(a))


def plain_trace(x, ext: CentralExtension) -> Coeff:
    """The functional (a, g) -> [a = e][g = e], linearly extended."""
    if isinstance(x, AlgebraElement):
        return x.terms.get(ext.identity, Coeff.zero()).copy()
    return Coeff.integer(1 if x == ext.identity else 0, RootUnity.one())


# ---------------------------------------------------------------------------
# the character-block isometry


@dataclass
class ThetaData:
    matrix: CycMat          # |A||G| x |A||G|, entries chi(a) at ((chi,g),(a,g))
    chars: List[Character]
    M: int                  # cyclotomic order: exponent of A
    ext: CentralExtension

    def col_index(self, a, g) -> int:
        return self.ext.A.index(a) * self.ext.base.order + self.ext.base.index(g)

    def row_index(self, ci: int, g) -> int:
        return ci * self.ext.base.order + self.ext.base.index(g)


def theta_map(ext: CentralExtension) -> ThetaData:
    A, G = ext.A, ext.base
    chars = characters(A)
    M = A.exponent()
    D = A.order * G.order
    data = np.zeros((D, D, M), dtype=np.int64)
    for ci, chi in enumerate(chars):
        for a in A.elements:
            e = CycMat.unit_exponent(chi(a), M)
            for g in G.elements:
                data[ci * G.order + G.index(g), A.index(a) * G.order + G.index(g), e] = 1
    return ThetaData(CycMat(data, M), chars, M, ext)


def regular_monomial(ext: CentralExtension, x) -> MonomialMatrix:
    """The (untwisted) left regular permutation matrix of the extension."""
    perm = []
    one = RootUnity.one()
    for e in ext.elements:
        perm.append(ext.index(ext.mul(x, e)))
    return MonomialMatrix(ext.order, tuple(perm), (one,) * ext.order)


def block_rep_monomial(ext: CentralExtension, chars, M: int, x) -> MonomialMatrix:
    """blockdiag over characters chi of chi(a) lambda_{chi(nu)}(g) at x = (a, g)."""
    A, G = ext.A, ext.base
    a0, g0 = x
    nG = G.order
    perm = [0] * (len(chars) * nG)
    phases = [None] * (len(chars) * nG)
    for ci, chi in enumerate(chars):
        za = chi(a0)
        for g in G.elements:
            j = ci * nG + G.index(g)
            perm[j] = ci * nG + G.index(G.mul(g0, g))
            phases[j] = za * chi(ext.nu(g0, g))
    return MonomialMatrix(len(chars) * nG, tuple(perm), tuple(phases))


@dataclass
class DisintegrationReport:
    blocks: list            # per character: dict(character, dim, isCommutative, traceTable)
    unitary_check: bool
    intertwine_check: bool
    block_diagonal_check: bool
    dims_sum_check: bool
    trace_identity_check: bool


def disintegrate(ext: CentralExtension, generators: Optional[list] = None,
                 full_basis_conjugation: bool = False) -> Tuple[List[Tuple[Character, ProjectiveRep]], DisintegrationReport]:
    """Split the regular representation of the extension over characters.

    Returns the list (chi, regular rep of G twisted by chi(nu)) and a
    report of exact checks: theta* theta = |A| I; theta rho(x) =
    blockdiag(pi_chi(x)) theta on generators (all basis x when
    ``full_basis_conjugation``); conjugation by theta is block diagonal
    with the predicted blocks; dimension bookkeeping; and the trace
    identity tau = |A|^{-1} sum_chi tau_chi on every basis element.
    """
    A, G = ext.A, ext.base
    th = theta_map(ext)
    M, chars = th.M, th.chars
    nA, nG = A.order, G.order
    D = nA * nG

    unitary = (th.matrix.adjoint() @ th.matrix) == CycMat.identity(D, M, scale=nA)

    if generators is None:
        generators = _extension_generators(ext)
    xs = ext.elements if full_basis_conjugation else generators

    intertwine = True
    blockdiag_ok = True
    for x in xs:
        rho = regular_monomial(ext, x)
        lhs = th.matrix.mul_monomial_right(rho)
        pi = block_rep_monomial(ext, chars, M, x)
        rhs = th.matrix.mul_monomial_left(pi)
        if lhs != rhs:
            intertwine = False
            break
        conj = rhs @ th.matrix.adjoint()  # theta rho theta* = |A| * blockdiag
        pred = CycMat.from_monomial(pi, M).scale_int(nA)
        if conj != pred:
            blockdiag_ok = False
            break

    blocks = []
    block_meta = []
    for ci, chi in enumerate(chars):
        mu = pullback_cocycle(ext.nu, chi)
        rep = regular_rep(G, mu)
        blocks.append((chi, rep))
        block_meta.append({
            "character": chi.label(),
            "dim": nG,
            "isCommutative": _block_commutative(rep),
            "traceTable": _trace_table(rep, chi),
        })

    dims_ok = sum(b["dim"] for b in block_meta) == D

    trace_ok = True
    for x in ext.elements:
        acc = Coeff.zero()
        for chi in chars:
            acc = acc + tau_character(chi, x, ext)
        expected = plain_trace(x, ext) * nA
        if not (acc - expected).is_zero():
            trace_ok = False
            break

    report = DisintegrationReport(block_meta, unitary, intertwine,
                                  blockdiag_ok, dims_ok, trace_ok)
    return blocks, report


def _extension_generators(ext: CentralExtension) -> list:
    A, G = ext.A, ext.base
    gens = []
    for i in range(len(A.identity)):
        a = tuple(int(j == i) for j in range(len(A.identity)))
        if a != A.identity:
            gens.append((a, G.identity))
    for i in range(len(G.identity)):
        g = tuple(int(j == i) for j in range(len(G.identity)))
        if g != G.identity:
            gens.append((A.identity, g))
    return gens or [ext.identity]


def _block_commutative(rep: ProjectiveRep) -> bool:
    G = rep.group
    gens = []
    for i in range(len(G.identity)):
        g = tuple(int(j == i) for j in range(len(G.identity)))
        if g != G.identity:
            gens.append(g)
    for g in gens:
        for h in gens:
            if rep.mat(g) @ rep.mat(h) != rep.mat(h) @ rep.mat(g):
                return False
    return True


def _trace_table(rep: ProjectiveRep, chi: Character) -> list:
    """Normalized traces of the monomials over a fundamental cell.

    For a rank-two torus base the cell ranges over (k, l) in [0, d)^2,
    d = ord(chi): these are the monomials matched against the
    clock-and-shift model of size d.  Other bases list all basis traces.
    """
    G = rep.group
    q = G.descriptor.get("q", 0)
    if G.descriptor.get("m") != 2 or not q:
        return [{"element": list(g), "trace": rep.mat(g).trace_coeff().render(),
                 "dim": rep.dim} for g in G.elements]
    d = max(chi.order, 1)
    out = []
    for k in range(d):
        for l in range(d):
            g = ((k % q), (l % q))
            tr = rep.mat(g).trace_coeff()
            out.append({"k": k, "l": l, "trace": tr.render(), "dim": rep.dim})
    return out


def block_matches_clock(rep: ProjectiveRep, chi: Character) -> bool:
    """Trace match between a block and the clock-shift model of size ord(chi).

    Over the fundamental cell (k, l) in [0, d)^2 both normalized traces
    are 1 at (0, 0) and vanish elsewhere; the block generators satisfy
    the same commutation phase as the model pair.
    """
    from .twisted_algebra import clock_shift, monomial_power
    d = chi.order
    if d == 0:
        return False
    if d == 1:
        return _block_commutative(rep)
    u, v, _ = clock_shift(d)
    G = rep.group
    q = G.descriptor.get("q")
    U, V = rep.mat((1 % q, 0)), rep.mat((0, 1 % q))
    for k in range(d):
        for l in range(d):
            model = (monomial_power(u, k) @ monomial_power(v, l)).trace_coeff() * rep.dim
            block = rep.mat((k % q, l % q)).trace_coeff() * d
            if not (model - block).is_zero():
                return False
    # commutation phase: U V = c V U with c the antisymmetrized cocycle value
    lhs = U @ V
    rhs = V @ U
    c = rep.cocycle((1 % q, 0), (0, 1 % q)) * rep.cocycle((0, 1 % q), (1 % q, 0)).conj()
    return lhs == rhs.scale(c)
