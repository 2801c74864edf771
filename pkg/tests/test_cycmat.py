import numpy as np
import pytest

from twistalg.cycmat import CycMat
from twistalg.scalars import RootUnity
from twistalg.twisted_algebra import Coeff, MonomialMatrix, clock_shift


def _random_cycmat(rng, d, M, lo=-3, hi=4):
    data = rng.integers(lo, hi, size=(d, d, M))
    return CycMat(data.astype(np.int64), M)


def _naive_mul(A: CycMat, B: CycMat) -> CycMat:
    d1, mid, M = A.data.shape
    d2 = B.data.shape[1]
    out = np.zeros((d1, d2, M), dtype=np.int64)
    for i in range(d1):
        for j in range(d2):
            for k in range(mid):
                for s in range(M):
                    for t in range(M):
                        out[i, j, (s + t) % M] += A.data[i, k, s] * B.data[k, j, t]
    return CycMat(out, M)


@pytest.mark.parametrize("M", [1, 2, 3, 6, 8])
def test_matmul_matches_naive_convolution(M):
    rng = np.random.default_rng(M)
    A = _random_cycmat(rng, 3, M)
    B = _random_cycmat(rng, 3, M)
    fast = A @ B
    slow = _naive_mul(A, B)
    assert (fast.data == slow.data).all()


def test_adjoint_involution_and_product_rule():
    rng = np.random.default_rng(0)
    A = _random_cycmat(rng, 4, 6)
    B = _random_cycmat(rng, 4, 6)
    assert (A.adjoint().adjoint().data == A.data).all()
    assert (A @ B).adjoint() == (B.adjoint() @ A.adjoint())


def test_equality_uses_cyclotomic_relations():
    # the all-ones exponent vector is the vanishing geometric sum
    d = 2
    M = 3
    A = CycMat(np.ones((d, d, M), dtype=np.int64), M)
    Z = CycMat.zeros(d, d, M)
    assert A == Z
    B = CycMat.zeros(d, d, M)
    B.data[0, 0, 1] = 1
    assert not (B == Z)


def test_from_monomial_round_trip():
    u, v, alpha = clock_shift(4)
    M = 8
    cu = CycMat.from_monomial(u, M)
    cv = CycMat.from_monomial(v, M)
    prod = cu @ cv
    expect = CycMat.from_monomial(u @ v, M)
    assert prod == expect
    assert cu.entry(1, 1) == Coeff.unit(RootUnity.of(1, 4))


def test_unit_exponent_requires_compatible_order():
    with pytest.raises(ValueError):
        CycMat.unit_exponent(RootUnity.of(1, 3), 8)


def test_mul_monomial_shortcuts():
    rng = np.random.default_rng(3)
    A = _random_cycmat(rng, 4, 4)
    u, v, _ = clock_shift(4)
    right = A.mul_monomial_right(v)
    assert right == A @ CycMat.from_monomial(v, 4)
    left = A.mul_monomial_left(u)
    assert left == CycMat.from_monomial(u, 4) @ A


def test_exact_divide():
    A = CycMat.identity(3, 4, scale=6)
    half = A.exact_divide(3)
    assert half == CycMat.identity(3, 4, scale=2)
    with pytest.raises(ValueError):
        A.exact_divide(4)


def test_object_fallback_for_large_entries():
    M = 6
    A = CycMat.zeros(1, 1, M)
    A.data[0, 0, 5] = 2 ** 56  # beyond the int64 reduction guard
    reduced = A.reduced()
    # zeta_6^5 = zeta_6^2 - 1 + ... : just confirm the reduction is exact
    val = sum(int(c) * np.exp(2j * np.pi * e / M)
              for e, c in enumerate(A.data[0, 0]))
    back = sum(int(c) * np.exp(2j * np.pi * e / M)
               for e, c in enumerate(reduced[0, 0]))
    assert abs(val - back) < 1e-2 * abs(val)
