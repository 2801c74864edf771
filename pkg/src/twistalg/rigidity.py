"""Constructive rigidity tools for finite projective representations.

The centerpiece is :func:`trivialize`: given a projective representation
pi of a finite group H and a unit vector xi, it averages the rank-one
operator xi xi* over H (the exact invariant replacement for an
almost-invariant operator), splits the commutant-invariant average into
spectral clusters, and looks inside the best-overlap cluster for a
common eigenvector of pi(H).  Such a vector exists exactly when the
restricted cocycle is a coboundary, and the eigenvalue family lambda is
then an exact coboundary witness; the emitted certificate is computed in
exact arithmetic after snapping the eigenvalues to roots of unity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .groups import FiniteGroup
from .scalars import RootUnity
from .twisted_algebra import MonomialMatrix, ProjectiveRep


class NoRankOneInvariant(Exception):
    """The averaged operator has no invariant line: mu|_H is not a coboundary."""


class NotEigenvector(Exception):
    """The selected vector failed the eigenvector residual test."""


@dataclass
class TrivializationResult:
    xi0: np.ndarray
    lam: dict  # h -> RootUnity
    residual: float
    certificate: float  # exactly 0.0 when the coboundary identity holds exactly
    overlap: float


def _snap_phase(z: complex, order: int):
    """Nearest root of unity of the given order, or None when too far."""
    ang = (np.angle(z) / (2 * np.pi)) % 1.0
    e = int(round(ang * order)) % order
    root = RootUnity.of(e, order)
    if abs(z - root.to_complex()) > 1e-6:
        return None
    return root


def trivialize(rep: ProjectiveRep, H: Optional[FiniteGroup] = None,
               xi: Optional[np.ndarray] = None, tol: float = 1e-8) -> TrivializationResult:
    """Search for xi0 and lambda with pi(h) xi0 = lambda_h xi0 on all of H.

    Steps: (1) form xi xi*; (2) average the conjugates pi(h) (xi xi*)
    pi(h)* over H -- the result T commutes with every pi(h); (3) take the
    spectral cluster of T with the largest overlap with xi; (4) refine the
    cluster to joint eigenvectors of pi(H); (5) phase-align the winner
    against xi; (6) read off lambda and snap it to exact roots of unity;
    (7) certify mu(h,h') = lambda_h lambda_h' conj(lambda_{hh'}) exactly.

    Raises NoRankOneInvariant when no pi(H)-eigenline exists with squared
    overlap above 1 - tol (the non-coboundary signal), NotEigenvector
    when the numeric eigen-residual is out of tolerance.
    """
    if H is None:
        H = rep.group
    d = rep.dim
    if xi is None:
        xi = np.full(d, 1.0 / math.sqrt(d), dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    if abs(np.linalg.norm(xi) - 1.0) > 1e-9:
        raise ValueError("xi must be a unit vector")

    mats = [rep.mat(h) for h in H.elements]
    T = np.zeros((d, d), dtype=complex)
    for m in mats:
        w = m.apply(xi)
        T += np.outer(w, w.conj())
    T /= len(mats)

    evals, evecs = np.linalg.eigh(T)
    order = np.argsort(-evals)
    evals, evecs = evals[order], evecs[:, order]

    # cluster equal eigenvalues (entries are algebraic; gaps are clean)
    clusters = []
    start = 0
    for i in range(1, len(evals) + 1):
        if i == len(evals) or abs(evals[i] - evals[start]) > 1e-9:
            clusters.append((start, i))
            start = i
    overlaps = [float(np.linalg.norm(evecs[:, a:b].conj().T @ xi) ** 2)
                for a, b in clusters]
    best = int(np.argmax(overlaps))
    a, b = clusters[best]
    basis = evecs[:, a:b]

    # refine to joint eigenvectors of pi(H) inside the cluster
    subspaces = [basis]
    for m in mats:
        refined = []
        for V in subspaces:
            if V.shape[1] == 1:
                refined.append(V)
                continue
            MV = np.column_stack([m.apply(V[:, j]) for j in range(V.shape[1])])
            A = V.conj().T @ MV
            w, u = np.linalg.eig(A)
            idx = np.argsort(w.real * 1e6 + w.imag)
            w, u = w[idx], u[:, idx]
            s = 0
            for i in range(1, len(w) + 1):
                if i == len(w) or abs(w[i] - w[s]) > 1e-7:
                    piece = V @ u[:, s:i]
                    piece, _ = np.linalg.qr(piece)
                    refined.append(piece)
                    s = i
        subspaces = refined
        if all(V.shape[1] == 1 for V in subspaces):
            break

    candidates = []
    for V in subspaces:
        if V.shape[1] != 1:
            continue
        v = V[:, 0]
        res = 0.0
        for m in mats:
            w = m.apply(v)
            lam = np.vdot(v, w)
            res = max(res, float(np.linalg.norm(w - lam * v)))
        if res <= max(tol, 1e-7):
            candidates.append((float(abs(np.vdot(v, xi)) ** 2), res, v))
    if not candidates:
        raise NoRankOneInvariant(
            "no common eigenline of pi(H) inside the best-overlap spectral cluster")
    candidates.sort(key=lambda t: -t[0])
    overlap, residual, v = candidates[0]
    if overlap < 1 - tol:
        raise NoRankOneInvariant(
            f"best eigenline overlap {overlap:.3g} is not above 1 - tol")

    # phase alignment: a <xi', xi> > 0
    inner = np.vdot(v, xi)
    if abs(inner) > 1e-12:
        v = v * (inner / abs(inner))
    xi0 = v

    # read off lambda and snap to exact roots of unity
    M = rep.cocycle.value_order or 1
    snap_order = M * H.exponent()
    lam = {}
    residual = 0.0
    for h, m in zip(H.elements, mats):
        w = m.apply(xi0)
        z = np.vdot(xi0, w)
        root = _snap_phase(z, snap_order)
        if root is None:
            raise NotEigenvector(f"eigenvalue at {h!r} does not snap to a root of unity")
        lam[h] = root
        residual = max(residual, float(np.linalg.norm(w - root.to_complex() * xi0)))
    if residual > max(tol, 1e-7):
        raise NotEigenvector(f"residual {residual:.3g} exceeds tolerance")

    mu = rep.cocycle
    cert = 0.0
    for g in H.elements:
        for h in H.elements:
            expected = lam[g] * lam[h] * lam[H.mul(g, h)].conj()
            if mu(g, h) != expected:
                cert = max(cert, abs(mu(g, h).to_complex() - expected.to_complex()))
    return TrivializationResult(xi0, lam, residual, cert, overlap)


def projective_rigidity_constants(eps: float, F: Callable, delta: Callable):
    """Transform a rigidity schedule for genuine representations into one
    for projective representations: (F(eps^2/28), delta(eps^2/28)/2)."""
    if not (0 < eps <= 1):
        raise ValueError("eps must lie in (0, 1]")
    arg = eps * eps / 28
    return F(arg), delta(arg) / 2


def comparison_rep(rep1: ProjectiveRep, rep2: ProjectiveRep,
                   rows: Optional[Iterable[int]] = None,
                   cols: Optional[Iterable[int]] = None) -> ProjectiveRep:
    """The two-sided representation eta -> pi1(g) eta pi2(g)* on matrices.

    Realized on vec(eta) as pi1(g) (x) conj(pi2(g)); its cocycle is the
    pointwise product mu1 * conj(mu2).  Optional row/column index subsets
    compress to a corner (the subsets must be invariant under the
    permutation parts of the representations).
    """
    if rep1.group is not rep2.group:
        if getattr(rep1.group, "elements", None) != getattr(rep2.group, "elements", None):
            raise ValueError("representations must share a group")
    mu = rep1.cocycle.product(rep2.cocycle.conj())

    if rows is None and cols is None:
        def mat_fn(g):
            return rep1.mat(g).kron(rep2.mat(g).conj_entries())
        return ProjectiveRep(rep1.group, mu, rep1.dim * rep2.dim, mat_fn)

    rows = list(rows if rows is not None else range(rep1.dim))
    cols = list(cols if cols is not None else range(rep2.dim))
    rpos = {r: i for i, r in enumerate(rows)}
    cpos = {c: i for i, c in enumerate(cols)}
    dim = len(rows) * len(cols)

    def mat_fn(g):
        m1, m2 = rep1.mat(g), rep2.mat(g)
        perm = [0] * dim
        phases = [None] * dim
        for i, r in enumerate(rows):
            pr = m1.perm[r]
            if pr not in rpos:
                raise ValueError("row subset is not invariant")
            for j, c in enumerate(cols):
                pc = m2.perm[c]
                if pc not in cpos:
                    raise ValueError("column subset is not invariant")
                src = i * len(cols) + j
                perm[src] = rpos[pr] * len(cols) + cpos[pc]
                phases[src] = m1.phases[r] * m2.phases[c].conj()
        return MonomialMatrix(dim, tuple(perm), tuple(phases))

    return ProjectiveRep(rep1.group, mu, dim, mat_fn)


def relative_gap(rep: ProjectiveRep, H, F, tol: float = 1e-10):
    """Smallest eigenvalue of the generator Laplacian off the H-invariants.

    Delta = sum_{g in F} (2 I - pi(g) - pi(g)*) restricted to the
    orthogonal complement of the pi(H)-invariant subspace.  pi must be a
    genuine permutation representation (trivial cocycle on the sampled
    generators).  Returns math.inf when the complement is zero.
    """
    G = rep.group
    d = rep.dim
    F = list(F)
    for g in F:
        if not rep.cocycle(g, G.inv(g)).is_one():
            raise ValueError("relative_gap expects a genuine (untwisted) representation")
    H_els = H.elements if isinstance(H, FiniteGroup) else list(H)

    # orbit partition of the basis under h: j -> perm_h[j]
    parent = list(range(d))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for h in H_els:
        m = rep.mat(h)
        for j in range(d):
            ra, rb = find(j), find(m.perm[j])
            if ra != rb:
                parent[ra] = rb
    orbits = {}
    for j in range(d):
        orbits.setdefault(find(j), []).append(j)
    n_orb = len(orbits)
    dim_complement = d - n_orb
    if dim_complement == 0:
        return math.inf, 0

    rowsD, colsD, valsD = [], [], []
    Fn = len(F)
    shift = 4.0 * Fn + 1.0
    for g in F:
        m = rep.mat(g)
        for j in range(d):
            if not m.phases[j].is_one():
                raise ValueError("relative_gap expects permutation matrices")
            rowsD.append(m.perm[j]); colsD.append(j); valsD.append(-1.0)
            rowsD.append(j); colsD.append(m.perm[j]); valsD.append(-1.0)
    diag = sp.identity(d, format="csr") * (2.0 * Fn)
    Delta = (sp.csr_matrix((valsD, (rowsD, colsD)), shape=(d, d)) + diag)

    orbit_of = np.empty(d, dtype=np.int64)
    sizes = {}
    for root, members in orbits.items():
        for j in members:
            orbit_of[j] = root
        sizes[root] = len(members)
    size_vec = np.array([sizes[orbit_of[j]] for j in range(d)], dtype=float)

    def avg(x):
        sums = np.zeros(d)
        np.add.at(sums, orbit_of, x)
        return sums[orbit_of] / size_vec

    if d <= 2500:
        dense = Delta.toarray()
        P = np.zeros((d, d))
        for root, members in orbits.items():
            w = 1.0 / len(members)
            for i in members:
                for j in members:
                    P[i, j] = w
        Q = np.eye(d) - P
        A = Q @ dense @ Q + shift * P
        evals = np.linalg.eigvalsh(A)
        gap = float(evals[0])
    else:
        def mv(x):
            y = x - avg(x)
            z = Delta @ y
            z = z - avg(z)
            return z + shift * avg(x)
        op = spla.LinearOperator((d, d), matvec=mv, dtype=float)
        vals = spla.eigsh(op, k=1, which="SA", maxiter=20000, tol=1e-10,
                          return_eigenvectors=False)
        gap = float(vals[0])
    if gap < -1e-8:
        raise AssertionError("Laplacian produced a negative eigenvalue")
    return max(gap, 0.0), dim_complement


def counting_bound(n: int, f1_size: int, delta1) -> int:
    """2^n * c0^(f1_size * n^2) with the volumetric covering constant
    c0 = ceil((1 + 4/delta1)^2), in exact big-integer arithmetic."""
    if n < 1 or f1_size < 0:
        raise ValueError("n must be >= 1 and f1_size >= 0")
    dd = Fraction(delta1)
    if not (0 < dd <= 2):
        raise ValueError("delta1 must lie in (0, 2]")
    c0 = -((-(1 + 4 / dd) ** 2) // 1)  # ceil of an exact Fraction
    c0 = int(c0)
    return 2 ** n * c0 ** (f1_size * n * n)
