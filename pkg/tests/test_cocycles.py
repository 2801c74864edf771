import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_lambda
from twistalg.cocycles import (InvarianceViolation, NonTorsionValuesError,
                               SymplecticCocycle, WellDefinednessError,
                               as_table, coboundary, extend_to_semidirect,
                               is_coboundary, mu_alpha, restrict, same_class,
                               sl2_mod_cached, trivial_cocycle,
                               verify_cocycle_identity, verify_invariance)
from twistalg.groups import cyclic_power, generated_subgroup, mat, mmod, sl2_generators
from twistalg.scalars import RootUnity, make_alpha, symbolic_alpha


def test_symplectic_basis_pair_gives_root():
    a = make_alpha(6, 1)
    nu = SymplecticCocycle(a, 1, None)
    assert nu((1, 0), (0, 1)) == a.root


def test_symplectic_diagonal_trivial():
    nu = SymplecticCocycle(make_alpha(5, 2), 1, None)
    for x in [(0, 0), (3, 1), (-2, 5)]:
        assert nu(x, x).is_one()


def test_symplectic_antisymmetry():
    nu = SymplecticCocycle(make_alpha(7, 1), 1, None)
    rng = random.Random(1)
    for _ in range(50):
        x = (rng.randint(-9, 9), rng.randint(-9, 9))
        y = (rng.randint(-9, 9), rng.randint(-9, 9))
        assert (nu(x, y) * nu(y, x)).is_one()


def test_mu_alpha_matches_symplectic_n1():
    a = make_alpha(12, 1)
    mu = mu_alpha(a)
    nu = SymplecticCocycle(a, 1, None)
    rng = random.Random(2)
    for _ in range(100):
        x = (rng.randint(-8, 8), rng.randint(-8, 8))
        y = (rng.randint(-8, 8), rng.randint(-8, 8))
        assert mu(x, y) == nu(x, y)
        # the published closed form: alpha^{(k l' - k' l)/2}
        assert mu(x, y) == a.half_power(x[0] * y[1] - y[0] * x[1])


def test_mu_alpha_formula_values():
    a = make_alpha(9, 1)
    mu = mu_alpha(a)
    assert mu((1, 0), (0, 1)) == a.root
    assert mu((2, 0), (0, 3)) == a.value ** 3


def test_symbolic_cocycle():
    a = symbolic_alpha(1)
    nu = SymplecticCocycle(a, 1, None)
    v = nu((1, 0), (0, 1))
    assert v == a.root and not v.is_one()


def test_quotient_well_definedness():
    SymplecticCocycle(make_alpha(2, 1), 1, 4)  # root i has order 4 | 4
    with pytest.raises(WellDefinednessError):
        SymplecticCocycle(make_alpha(3, 1), 1, 4)  # root zeta6: 6 does not divide 4
    with pytest.raises(WellDefinednessError):
        SymplecticCocycle(symbolic_alpha(1), 1, 4)


def test_cocycle_identity_exhaustive_quotient():
    nu = SymplecticCocycle(make_alpha(2, 1), 1, 4)
    rep = verify_cocycle_identity(nu)
    assert rep.ok and rep.mode == "exhaustive" and rep.checked == 16 ** 3


def test_cocycle_identity_lattice_sampled():
    nu = SymplecticCocycle(symbolic_alpha(1), 1, None)
    rep = verify_cocycle_identity(nu, seed=5)
    assert rep.ok


def test_cocycle_identity_dim4():
    nu = SymplecticCocycle(make_alpha(1, 1), 2, 2)  # (Z/2)^4, root -1
    rep = verify_cocycle_identity(nu)
    assert rep.ok and rep.mode == "exhaustive"


def test_invariance_of_sl2_generators():
    nu = SymplecticCocycle(make_alpha(8, 1), 1, None)
    s, t = sl2_generators()
    assert verify_invariance(nu, s)
    assert verify_invariance(nu, t)
    assert verify_invariance(nu, mat([[1, 0], [0, 1]]))


def test_invariance_fails_for_scaling():
    nu = SymplecticCocycle(make_alpha(8, 1), 1, None)
    assert not verify_invariance(nu, mat([[2, 0], [0, 2]]))


def test_invariance_fails_for_det_minus_one():
    nu = SymplecticCocycle(make_alpha(4, 1), 1, 8)
    flip = mat([[1, 0], [0, -1]])
    assert not verify_invariance(nu, flip)
    with pytest.raises(InvarianceViolation):
        from twistalg.groups import FiniteGroup

        def mul(a, b):
            return mmod(mat([[sum(a[i][k] * b[k][j] for k in range(2))
                              for j in range(2)] for i in range(2)]), 8)
        bad = FiniteGroup([((1, 0), (0, 1)), mmod(flip, 8)], mul,
                          identity=((1, 0), (0, 1)))
        extend_to_semidirect(nu, bad)


def test_extension_reduces_to_base_at_identity_gamma():
    nu = SymplecticCocycle(make_alpha(2, 1), 1, 4)
    gamma = sl2_mod_cached(4)
    ext = extend_to_semidirect(nu, gamma)
    e = gamma.identity
    for x1 in [(0, 1), (3, 2)]:
        for x2 in [(1, 1), (2, 3)]:
            assert ext((x1, e), (x2, e)) == nu(x1, x2)


def test_extension_identity_sampled():
    nu = SymplecticCocycle(make_alpha(2, 1), 1, 4)
    ext = extend_to_semidirect(nu, sl2_mod_cached(4))
    rep = verify_cocycle_identity(ext, samples=50_000, seed=11)
    assert rep.ok
    assert rep.mode == "sampled"  # 768^3 > 10^7


def test_extension_identity_exhaustive_q2():
    nu = SymplecticCocycle(make_alpha(1, 1), 1, 2)
    ext = extend_to_semidirect(nu, sl2_mod_cached(2))
    rep = verify_cocycle_identity(ext)
    assert rep.ok and rep.mode == "exhaustive" and rep.checked == 24 ** 3


def test_is_coboundary_trivial():
    G = cyclic_power(3, 2)
    lam = is_coboundary(trivial_cocycle(G))
    assert lam is not None
    assert all(v.is_one() for v in lam.values())


def test_is_coboundary_rejects_nu_alpha():
    nu = SymplecticCocycle(make_alpha(2, 1), 1, 4)
    assert is_coboundary(as_table(nu)) is None


def test_is_coboundary_needs_torsion():
    nu = SymplecticCocycle(symbolic_alpha(1), 1, None)
    with pytest.raises(NonTorsionValuesError):
        is_coboundary(nu)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_coboundary_round_trip(m, rng):
    G = cyclic_power(m, 2)
    for _ in range(5):
        lamhat = random_lambda(rng, G, m)
        mu = coboundary(G, lamhat)
        lam = is_coboundary(mu)
        assert lam is not None
        for g in G.elements:
            for h in G.elements:
                assert lam[g] * lam[h] * lam[G.mul(g, h)].conj() == mu(g, h)


def test_symmetric_symplectic_sign_cocycle_is_coboundary():
    # root -1, value 1: the cocycle (-1)^{x^T J y} is symmetric on an
    # abelian group, hence trivial in circle-valued cohomology
    nu = SymplecticCocycle(make_alpha(1, 1), 1, 2)
    lam = is_coboundary(as_table(nu))
    assert lam is not None


def test_coboundary_witness_may_need_larger_value_group():
    # on Z/2 the sign cocycle (-1)^{gh} is a circle coboundary, but every
    # witness takes zeta_4 values: the solver searches mod M * exp(G)
    from twistalg.cocycles import TableCocycle
    G = cyclic_power(2, 1)
    table = {(g, h): RootUnity.of(g[0] * h[0], 2)
             for g in G.elements for h in G.elements}
    mu = TableCocycle(G, table)
    rep = verify_cocycle_identity(mu)
    assert rep.ok
    lam = is_coboundary(mu)
    assert lam is not None
    assert any(v.order == 4 for v in lam.values())


def test_restrict_extension_to_fiber():
    nu = SymplecticCocycle(make_alpha(2, 1), 1, 4)
    gamma = sl2_mod_cached(4)
    ext = extend_to_semidirect(nu, gamma)
    e = gamma.identity
    fiber = [(x, e) for x in nu.group.elements]
    res = restrict(ext, fiber)
    for x1 in nu.group.elements:
        for x2 in nu.group.elements:
            assert res((x1, e), (x2, e)) == nu(x1, x2)


def test_restrict_collinear_is_trivial():
    nu = SymplecticCocycle(make_alpha(4, 1), 1, 8)
    line = [(k, 0) for k in range(8)]
    res = restrict(nu, line)
    assert all(res(a, b).is_one() for a in line for b in line)


def test_restrict_rejects_non_subgroup():
    nu = SymplecticCocycle(make_alpha(2, 1), 1, 4)
    with pytest.raises(ValueError):
        restrict(nu, [(0, 0), (1, 0), (3, 0)])  # not closed: (1,0)+(3,0)=(0,0) ok but (1,0)+(1,0)=(2,0) missing


def test_restriction_of_coboundary_is_coboundary(rng):
    G = cyclic_power(4, 2)
    mu = coboundary(G, random_lambda(rng, G, 4))
    sub = [(k, 0) for k in range(4)]
    res = restrict(mu, sub)
    assert is_coboundary(res) is not None


def test_same_class_reflexive():
    nu = SymplecticCocycle(make_alpha(2, 1), 1, 4)
    t = as_table(nu)
    assert same_class(t, t)


def test_same_class_distinguishes_conjugate_parameters():
    # nu with root zeta8 vs root zeta8^3 on (Z/8)^2: the ratio has
    # parameter -1, which is not a coboundary
    a1, a2 = make_alpha(4, 1), make_alpha(4, 3)
    nu1 = SymplecticCocycle(a1, 1, 8)
    nu2 = SymplecticCocycle(a2, 1, 8)
    assert not same_class(as_table(nu1), as_table(nu2))


def test_same_class_mod_coboundary(rng):
    G = cyclic_power(2, 2)
    nu = as_table(SymplecticCocycle(make_alpha(1, 1), 1, 2))
    lamhat = random_lambda(rng, G, 4)
    from twistalg.cocycles import TableCocycle
    d = coboundary(G, lamhat)
    prod = TableCocycle(G, {(g, h): nu(g, h) * d(g, h)
                            for g in G.elements for h in G.elements})
    assert same_class(nu, prod)


def test_same_class_is_symmetric_and_transitive(rng):
    G = cyclic_power(3, 2)
    mus = [coboundary(G, random_lambda(rng, G, 3)) for _ in range(3)]
    nu = as_table(SymplecticCocycle(make_alpha(3, 2), 1, 3))
    assert same_class(mus[0], mus[1]) and same_class(mus[1], mus[0])
    assert same_class(mus[1], mus[2]) and same_class(mus[0], mus[2])
    assert not same_class(nu, mus[0])
    assert not same_class(mus[0], nu)


def test_invariance_group_closure():
    nu = SymplecticCocycle(make_alpha(16, 1), 1, None)
    s, t = sl2_generators()
    from twistalg.groups import mmul
    assert verify_invariance(nu, mmul(s, t))
    assert verify_invariance(nu, mmul(t, mmul(s, t)))
