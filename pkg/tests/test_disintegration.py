import pytest

from twistalg.cocycles import SymplecticCocycle, as_table, same_class
from twistalg.disintegration import (AValuedCocycle, CocycleIdentityError,
                                     block_matches_clock, central_extension,
                                     characters, disintegrate,
                                     heisenberg_cocycle, heisenberg_extension,
                                     plain_trace, pullback_cocycle,
                                     tau_character, theta_map)
from twistalg.groups import abelian_group, cyclic_power
from twistalg.scalars import RootUnity, make_alpha
from twistalg.twisted_algebra import Coeff, TwistedGroupAlgebra


def test_trivial_cocycle_gives_direct_product():
    G = cyclic_power(2, 2)
    A = abelian_group((2,))
    nu = AValuedCocycle(G, A, lambda g, h: (0,))
    ext = central_extension(A, G, nu)
    assert ext.order == 8
    # abelian: every pair commutes
    for x in ext.elements:
        for y in ext.elements:
            assert ext.mul(x, y) == ext.mul(y, x)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_heisenberg_order_and_center(m):
    ext = heisenberg_extension(m)
    assert ext.order == m ** 3
    center = [z for z in ext.elements
              if all(ext.mul(z, x) == ext.mul(x, z) for x in ext.elements)]
    assert len(center) == m  # the central fiber, nothing more, for m >= 2
    for a in ext.A.elements:
        assert (a, ext.base.identity) in center


def test_heisenberg_noncommutative():
    ext = heisenberg_extension(2)
    x = ((0,), (1, 0))
    y = ((0,), (0, 1))
    assert ext.mul(x, y) != ext.mul(y, x)


def test_inverse_formula_exhaustive_m3():
    ext = heisenberg_extension(3)
    A, G = ext.A, ext.base
    for (a, g) in ext.elements:
        gi = G.inv(g)
        expected = (A.inv(A.mul(a, ext.nu(g, gi))), gi)
        assert ext.inv((a, g)) == expected
        assert ext.mul((a, g), expected) == ext.identity


def test_bad_cocycle_rejected():
    G = cyclic_power(2, 2)
    A = abelian_group((2,))
    # an arbitrary asymmetric table violating the identity
    def bad(g, h):
        return (1,) if g == (1, 0) and h == (1, 1) else (0,)
    with pytest.raises(CocycleIdentityError):
        central_extension(A, G, AValuedCocycle(G, A, bad))


def test_characters_z2():
    A = abelian_group((2,))
    chars = characters(A)
    assert len(chars) == 2
    values = sorted(chi((1,)).render() for chi in chars)
    assert values == ["1", "zeta(2)^1"]
    assert all(chi(A.identity).is_one() for chi in chars)


def test_characters_orthogonality_z6():
    A = abelian_group((6,))
    chars = characters(A)
    for chi in chars:
        for psi in chars:
            s = Coeff.zero()
            for a in A.elements:
                s = s + Coeff.unit(chi(a) * psi(a).conj())
            if chi == psi:
                assert s == Coeff.integer(6, RootUnity.one())
            else:
                assert s.is_zero()


def test_tau_character_basics():
    ext = heisenberg_extension(3)
    chars = characters(ext.A)
    for chi in chars:
        assert tau_character(chi, ext.identity, ext) == Coeff.integer(1, RootUnity.one())
        assert tau_character(chi, ((1,), (1, 2)), ext).is_zero()
        assert tau_character(chi, ((2,), (0, 0)), ext) == Coeff.unit(chi((2,)))


def test_trace_decomposition_heisenberg3():
    ext = heisenberg_extension(3)
    chars = characters(ext.A)
    for x in ext.elements:
        acc = Coeff.zero()
        for chi in chars:
            acc = acc + tau_character(chi, x, ext)
        assert acc == plain_trace(x, ext) * 3


def test_tau_character_tracial_on_algebra():
    ext = heisenberg_extension(2)
    from twistalg.cocycles import trivial_cocycle
    alg = TwistedGroupAlgebra(ext, trivial_cocycle(ext))
    chars = characters(ext.A)
    import random
    rng = random.Random(5)
    for _ in range(10):
        x = alg.element({ext.elements[rng.randrange(ext.order)]: rng.randint(-2, 2)
                         for _ in range(3)})
        y = alg.element({ext.elements[rng.randrange(ext.order)]: rng.randint(-2, 2)
                         for _ in range(3)})
        for chi in chars:
            assert (tau_character(chi, x * y, ext) - tau_character(chi, y * x, ext)).is_zero()


def test_theta_columns_orthonormal_m2():
    ext = heisenberg_extension(2)
    th = theta_map(ext)
    from twistalg.cycmat import CycMat
    gram = th.matrix.adjoint() @ th.matrix
    assert gram == CycMat.identity(8, th.M, scale=2)


def test_theta_trivial_fiber_is_identity():
    G = cyclic_power(2, 2)
    A = abelian_group((1,))
    nu = AValuedCocycle(G, A, lambda g, h: (0,))
    ext = central_extension(A, G, nu)
    th = theta_map(ext)
    from twistalg.cycmat import CycMat
    assert th.matrix == CycMat.identity(4, th.M)


@pytest.mark.parametrize("m", [2, 3])
def test_theta_intertwines_all_basis_elements(m):
    ext = heisenberg_extension(m)
    blocks, report = disintegrate(ext, full_basis_conjugation=True)
    assert report.intertwine_check
    assert report.block_diagonal_check
    assert report.unitary_check


def test_disintegrate_m2_block_structure():
    ext = heisenberg_extension(2)
    blocks, report = disintegrate(ext)
    assert report.dims_sum_check
    assert len(blocks) == 2
    meta = {b["character"]: b for b in report.blocks}
    assert meta["0"]["isCommutative"] is True
    assert meta["1"]["isCommutative"] is False
    assert all(b["dim"] == 4 for b in report.blocks)
    for chi, rep in blocks:
        assert block_matches_clock(rep, chi)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_disintegrate_block_count_and_checks(m):
    ext = heisenberg_extension(m)
    blocks, report = disintegrate(ext)
    assert len(blocks) == m
    assert report.unitary_check and report.intertwine_check
    assert report.block_diagonal_check and report.dims_sum_check
    assert report.trace_identity_check
    for chi, rep in blocks:
        assert block_matches_clock(rep, chi)


def test_disintegrate_trivial_nu_blocks_untwisted():
    G = cyclic_power(2, 2)
    A = abelian_group((2,))
    ext = central_extension(A, G, AValuedCocycle(G, A, lambda g, h: (0,)))
    blocks, report = disintegrate(ext)
    assert report.unitary_check and report.intertwine_check
    for chi, rep in blocks:
        # every block is the plain permutation representation
        for g in G.elements:
            assert all(p.is_one() for p in rep.mat(g).phases)


def test_block_commutation_phase():
    # block generators satisfy U V = chi(nu(e1,e2) - nu(e2,e1)) V U
    m = 4
    ext = heisenberg_extension(m)
    for chi in characters(ext.A):
        mu = pullback_cocycle(ext.nu, chi)
        from twistalg.twisted_algebra import regular_rep
        rep = regular_rep(ext.base, mu)
        U, V = rep.mat((1, 0)), rep.mat((0, 1))
        c = chi((1,))  # nu(e1, e2) = 1, nu(e2, e1) = 0
        assert (U @ V) == (V @ U).scale(c)


def test_heisenberg_class_agrees_with_symplectic_family():
    # chi(nu_heis) and the half-power symplectic cocycle with matching
    # commutator are cohomologous whenever the latter is well defined
    m = 4
    ext = heisenberg_extension(m)
    for chi in characters(ext.A):
        t = chi.exponents[0]
        if t % 2:
            continue  # the square root zeta_m^{t/...}: keep to even t
        mu1 = as_table(pullback_cocycle(ext.nu, chi))
        a = make_alpha(m, t)
        if a.root_order and m % a.root_order == 0:
            mu2 = as_table(SymplecticCocycle(a, 1, m))
            assert same_class(mu1, mu2)


def test_custom_extension_z2_by_z4():
    # A = Z/2 valued cocycle on Z/4 (cyclic): the extension is Z/8-like
    G = cyclic_power(4, 1)
    A = abelian_group((2,))

    def nu(g, h):
        return (1,) if g[0] + h[0] >= 4 else (0,)
    ext = central_extension(A, G, AValuedCocycle(G, A, nu))
    assert ext.order == 8
    orders = sorted(ext.element_order(x) for x in ext.elements)
    assert max(orders) == 8  # the carry cocycle builds the cyclic group of order 8
    blocks, report = disintegrate(ext)
    assert report.unitary_check and report.intertwine_check and report.trace_identity_check
