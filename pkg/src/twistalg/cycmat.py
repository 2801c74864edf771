"""Dense exact matrices over the ring of cyclotomic integers Z[zeta_M].

An entry is stored as the integer coefficient vector of a polynomial in
zeta_M reduced mod x^M - 1, so a d1 x d2 matrix is an int64 tensor of
shape (d1, d2, M).  Products are cyclic convolutions in the last axis,
evaluated as M shifted integer matmuls -- exact and fast.  Equality
reduces the difference modulo the M-th cyclotomic polynomial.
"""

from __future__ import annotations

import numpy as np

from .scalars import RootUnity, cyclotomic_polynomial
from .twisted_algebra import Coeff, MonomialMatrix

_INT64_GUARD = 2 ** 55


class CycMat:
    __slots__ = ("M", "data")

    def __init__(self, data: np.ndarray, M: int):
        if data.ndim != 3 or data.shape[2] != M:
            raise ValueError("data must have shape (d1, d2, M)")
        self.M = M
        self.data = data.astype(np.int64, copy=False)

    # construction -------------------------------------------------------
    @staticmethod
    def zeros(d1: int, d2: int, M: int) -> "CycMat":
        return CycMat(np.zeros((d1, d2, M), dtype=np.int64), M)

    @staticmethod
    def identity(d: int, M: int, scale: int = 1) -> "CycMat":
        out = CycMat.zeros(d, d, M)
        out.data[np.arange(d), np.arange(d), 0] = scale
        return out

    @staticmethod
    def unit_exponent(u: RootUnity, M: int) -> int:
        t = u.turn
        if M % t.denominator:
            raise ValueError(f"{u!r} does not lie in the zeta_{M} group")
        return t.numerator * (M // t.denominator) % M

    @staticmethod
    def from_monomial(mono: MonomialMatrix, M: int) -> "CycMat":
        out = CycMat.zeros(mono.dim, mono.dim, M)
        for j in range(mono.dim):
            e = CycMat.unit_exponent(mono.phases[j], M)
            out.data[mono.perm[j], j, e] = 1
        return out

    # ring operations ----------------------------------------------------
    def __add__(self, other: "CycMat") -> "CycMat":
        self._check(other)
        return CycMat(self.data + other.data, self.M)

    def __sub__(self, other: "CycMat") -> "CycMat":
        self._check(other)
        return CycMat(self.data - other.data, self.M)

    def scale_int(self, c: int) -> "CycMat":
        return CycMat(self.data * c, self.M)

    def __matmul__(self, other: "CycMat") -> "CycMat":
        self._check(other, square=False)
        if self.data.shape[1] != other.data.shape[0]:
            raise ValueError("inner dimensions differ")
        M = self.M
        d1 = self.data.shape[0]
        d2 = other.data.shape[1]
        out = np.zeros((d1, d2 * M), dtype=np.int64)
        B = other.data
        for t in range(M):
            if not self.data[:, :, t].any():
                continue
            rolled = np.roll(B, t, axis=2).reshape(B.shape[0], d2 * M)
            out += self.data[:, :, t] @ rolled
        return CycMat(out.reshape(d1, d2, M), M)

    def adjoint(self) -> "CycMat":
        # conjugate = negate exponents: index e -> (M - e) mod M
        flipped = np.roll(self.data[:, :, ::-1], 1, axis=2)
        return CycMat(np.transpose(flipped, (1, 0, 2)).copy(), self.M)

    def mul_monomial_right(self, mono: MonomialMatrix) -> "CycMat":
        """self @ from_monomial(mono): permute/phase columns, O(d^2 M)."""
        if mono.dim != self.data.shape[1]:
            raise ValueError("dimension mismatch")
        out = np.empty_like(self.data)
        for j in range(mono.dim):
            e = CycMat.unit_exponent(mono.phases[j], self.M)
            out[:, j, :] = np.roll(self.data[:, mono.perm[j], :], e, axis=-1)
        return CycMat(out, self.M)

    def mul_monomial_left(self, mono: MonomialMatrix) -> "CycMat":
        """from_monomial(mono) @ self: permute/phase rows."""
        if mono.dim != self.data.shape[0]:
            raise ValueError("dimension mismatch")
        out = np.empty_like(self.data)
        for j in range(mono.dim):
            e = CycMat.unit_exponent(mono.phases[j], self.M)
            out[mono.perm[j], :, :] = np.roll(self.data[j, :, :], e, axis=-1)
        return CycMat(out, self.M)

    # equality ------------------------------------------------------------
    def _check(self, other, square=True):
        if self.M != other.M:
            raise ValueError("cyclotomic orders differ")
        if square and self.data.shape != other.data.shape:
            raise ValueError("shape mismatch")

    def reduced(self) -> np.ndarray:
        """Coefficients reduced mod the M-th cyclotomic polynomial."""
        return _reduce_tensor(self.data, self.M)

    def is_zero(self) -> bool:
        return not self.reduced().any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycMat):
            return NotImplemented
        self._check(other)
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover
        raise TypeError("CycMat is unhashable")

    def entry(self, i: int, j: int) -> Coeff:
        t = {}
        for e in range(self.M):
            c = int(self.data[i, j, e])
            if c:
                t[RootUnity.of(e, self.M)] = c
        return Coeff(t)

    def block(self, rows, cols) -> "CycMat":
        return CycMat(self.data[np.ix_(rows, cols)], self.M)

    def exact_divide(self, c: int) -> "CycMat":
        if (self.data % c).any():
            raise ValueError(f"entries are not divisible by {c}")
        return CycMat(self.data // c, self.M)


def _reduce_tensor(data: np.ndarray, M: int) -> np.ndarray:
    phi = cyclotomic_polynomial(M)
    deg = len(phi) - 1
    flat = data.reshape(-1, M)
    if np.abs(flat).max(initial=0) < _INT64_GUARD and M <= 64:
        r = flat.astype(np.int64).copy()
        for k in range(M - 1, deg - 1, -1):
            c = r[:, k].copy()
            if not c.any():
                continue
            r[:, k] = 0
            for j in range(deg):
                r[:, k - deg + j] -= c * phi[j]
            if np.abs(r).max() >= _INT64_GUARD:
                return _reduce_tensor_object(flat, phi, deg).reshape(data.shape[:-1] + (deg,))
        return r[:, :deg].reshape(data.shape[:-1] + (deg,))
    return _reduce_tensor_object(flat, phi, deg).reshape(data.shape[:-1] + (deg,))


def _reduce_tensor_object(flat: np.ndarray, phi, deg: int) -> np.ndarray:
    r = flat.astype(object).copy()
    M = flat.shape[1]
    for k in range(M - 1, deg - 1, -1):
        c = r[:, k].copy()
        r[:, k] = 0
        for j in range(deg):
            r[:, k - deg + j] -= c * phi[j]
    return r[:, :deg]
