"""Exact integer linear algebra.

Provides a Smith normal form with unimodular transforms and a solver for
families of linear congruence systems ``A x = b (mod M)`` that share the
same coefficient matrix: the structural reduction of ``A`` is performed
once and replayed on each right-hand side.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np


def ext_gcd(a: int, b: int):
    """(g, x, y) with g = gcd(a, b) = x*a + y*b, g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def modinv(a: int, m: int) -> int:
    g, x, _ = ext_gcd(a % m, m)
    if g != 1:
        raise ValueError("not invertible")
    return x % m


def smith_normal_form(A):
    """Diagonalize an integer matrix: returns (D, U, V) with U A V = D.

    U and V are unimodular; the diagonal entries are nonnegative and each
    divides the next.  Lists of lists of Python ints throughout, so there
    is no overflow.
    """
    D = [list(map(int, row)) for row in A]
    rows = len(D)
    cols = len(D[0]) if rows else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_combine(i, j, x, y, u, v):
        # rows i, j <- (x*Ri + y*Rj, u*Ri + v*Rj)
        for k in range(cols):
            D[i][k], D[j][k] = x * D[i][k] + y * D[j][k], u * D[i][k] + v * D[j][k]
        for k in range(rows):
            U[i][k], U[j][k] = x * U[i][k] + y * U[j][k], u * U[i][k] + v * U[j][k]

    def col_combine(i, j, x, y, u, v):
        for k in range(rows):
            D[k][i], D[k][j] = x * D[k][i] + y * D[k][j], u * D[k][i] + v * D[k][j]
        for k in range(cols):
            V[k][i], V[k][j] = x * V[k][i] + y * V[k][j], u * V[k][i] + v * V[k][j]

    t = 0
    while t < min(rows, cols):
        # find a pivot: smallest nonzero entry of the trailing block
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                a = abs(D[i][j])
                if a and (best is None or a < best):
                    best, piv = a, (i, j)
        if piv is None:
            break
        i, j = piv
        if i != t:
            row_combine(t, i, 0, 1, 1, 0)
        if j != t:
            col_combine(t, j, 0, 1, 1, 0)
        while True:
            # When the pivot divides the target, clear with an elementary
            # operation that leaves the pivot row/column untouched; the
            # Bezout combine is reserved for the non-divisible case, where
            # it strictly shrinks the pivot.  This ordering terminates.
            if D[t][t] < 0:
                row_combine(t, t, -1, 0, 0, -1)
            shrunk = False
            for i in range(t + 1, rows):
                b = D[i][t]
                if b:
                    a = D[t][t]
                    if b % a == 0:
                        row_combine(t, i, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = ext_gcd(a, b)
                        row_combine(t, i, x, y, -(b // g), a // g)
                        shrunk = True
            for j in range(t + 1, cols):
                b = D[t][j]
                if b:
                    a = D[t][t]
                    if b % a == 0:
                        col_combine(t, j, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = ext_gcd(a, b)
                        col_combine(t, j, x, y, -(b // g), a // g)
                        shrunk = True
            if (not shrunk
                    and all(D[i][t] == 0 for i in range(t + 1, rows))
                    and all(D[t][j] == 0 for j in range(t + 1, cols))):
                break
        # divisibility: D[t][t] must divide the rest of the block
        a = D[t][t]
        fixed = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if D[i][j] % a:
                    row_combine(t, i, 1, 1, 0, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            t += 1
    # normalize signs
    for i in range(min(rows, cols)):
        if D[i][i] < 0:
            for k in range(cols):
                D[i][k] = -D[i][k]
            for k in range(rows):
                U[i][k] = -U[i][k]
    return D, U, V


class CongruenceSystem:
    """A x = b (mod M) for a fixed sparse A and many right-hand sides.

    Rows are given sparsely as ``{col: coeff}``.  Construction performs a
    gcd-based row triangulation (entries kept reduced mod M) recording
    every unimodular row operation; :meth:`solve` replays the operations
    on a right-hand side and finishes with an exact Smith-normal-form
    solve of the small pivot system.
    """

    def __init__(self, rows: Sequence[dict], ncols: int, modulus: int):
        if modulus < 1:
            raise ValueError("modulus must be >= 1")
        self.ncols = ncols
        self.M = modulus
        self._rows = [dict(r) for r in rows]
        M = modulus
        pivots = {}  # leading col -> (np row, slot)
        ops = []  # ("c", slot_i, slot_j, x, y, u, v) | ("z", slot)
        for slot, sparse in enumerate(self._rows):
            w = np.zeros(ncols, dtype=np.int64)
            for c, v in sparse.items():
                w[c] = (w[c] + v) % M
            while True:
                nz = np.nonzero(w)[0]
                if len(nz) == 0:
                    ops.append(("z", slot))
                    break
                c = int(nz[0])
                if c not in pivots:
                    pivots[c] = (w, slot)
                    break
                p, sp = pivots[c]
                a, b = int(p[c]), int(w[c])
                g, x, y = ext_gcd(a, b)
                u, v = -(b // g), a // g
                p_new = (x * p + y * w) % M
                w = (u * p + v * w) % M
                pivots[c] = (p_new, sp)
                ops.append(("c", sp, slot, x, y, u, v))
        self._ops = ops
        self._pivot_cols = sorted(pivots)
        self._pivot_slots = [pivots[c][1] for c in self._pivot_cols]
        H = [list(map(int, pivots[c][0])) for c in self._pivot_cols]
        if H:
            self._D, self._U, self._V = smith_normal_form(H)
        else:
            self._D, self._U, self._V = [], [], [[int(i == j) for j in range(ncols)] for i in range(ncols)]
        self._nrows_H = len(H)

    def solve(self, b: Sequence[int]) -> Optional[list]:
        """A solution vector mod M, or None when the system is inconsistent."""
        M = self.M
        bv = [int(x) % M for x in b]
        if len(bv) != len(self._rows):
            raise ValueError("right-hand side length mismatch")
        zero_ok = True
        for op in self._ops:
            if op[0] == "c":
                _, i, j, x, y, u, v = op
                bi, bj = bv[i], bv[j]
                bv[i] = (x * bi + y * bj) % M
                bv[j] = (u * bi + v * bj) % M
            else:
                if bv[op[1]] % M != 0:
                    zero_ok = False
                    break
        if not zero_ok:
            return None
        c = [bv[s] for s in self._pivot_slots]
        R, n = self._nrows_H, self.ncols
        # t = U c (mod M)
        t = [sum(self._U[i][k] * c[k] for k in range(R)) % M for i in range(R)]
        y = [0] * n
        for i in range(R):
            d = self._D[i][i] if i < n else 0
            ti = t[i]
            if d % M == 0:
                if ti % M != 0:
                    return None
                continue
            g = math.gcd(d, M)
            if ti % g != 0:
                return None
            mm = M // g
            y[i] = (ti // g) * modinv((d // g) % mm, mm) % mm if mm > 1 else 0
        x = [sum(self._V[i][k] * y[k] for k in range(n)) % M for i in range(n)]
        # belt and braces: confirm against the original sparse rows
        for sparse, bval in zip(self._rows, (int(v) % M for v in b)):
            acc = sum(co * x[cc] for cc, co in sparse.items())
            if (acc - bval) % M != 0:
                raise AssertionError("congruence solver produced an invalid witness")
        return x
