import pytest

from twistalg.actions import (ActionError, crossed_product_consistency,
                              finite_model, make_context, sigma,
                              sigma_formula, uv_coefficient, uv_monomial,
                              verify_action)
from twistalg.cocycles import WellDefinednessError, sl2_mod_cached
from twistalg.groups import generated_subgroup, identity_mat, mat, mmod
from twistalg.scalars import make_alpha, symbolic_alpha
from twistalg.twisted_algebra import AlgebraElement, Coeff, hs_inner


def _ctx(q=4, alpha=None):
    return make_context(alpha or make_alpha(2, 1), q)


def test_sigma_identity_fixes_everything():
    ctx = _ctx()
    x = uv_monomial(ctx, 3, 2).scale(ctx.alpha.root)
    assert sigma(ctx, identity_mat(2), x) == x


def test_sigma_shear_formula():
    # sigma((1 n; 0 1))(u^k v^l) = alpha^{-n l^2 / 2} u^{k+nl} v^l
    ctx = _ctx(8, make_alpha(4, 1))
    n = 3
    a = mat([[1, n], [0, 1]])
    for (k, l) in [(0, 1), (1, 1), (2, 3), (5, 7)]:
        img = sigma(ctx, a, uv_monomial(ctx, k, l))
        expect = uv_monomial(ctx, k + n * l, l).scale(ctx.alpha.half_power(-n * l * l))
        assert img == expect


def test_sigma_preserves_trace(rng):
    ctx = _ctx()
    g = mat([[1, 1], [1, 2]])
    for _ in range(20):
        x = ctx.algebra.element({(rng.randrange(4), rng.randrange(4)): rng.randint(-3, 3)
                                 for _ in range(3)})
        assert (sigma(ctx, g, x).trace() - x.trace()).is_zero()


def test_sigma_preserves_hs_inner(rng):
    ctx = _ctx()
    g = mat([[2, 1], [1, 1]])
    for _ in range(10):
        x = ctx.algebra.element({(rng.randrange(4), rng.randrange(4)): rng.randint(-2, 2)
                                 for _ in range(3)})
        y = ctx.algebra.element({(rng.randrange(4), rng.randrange(4)): rng.randint(-2, 2)
                                 for _ in range(3)})
        assert (hs_inner(sigma(ctx, g, x), sigma(ctx, g, y)) - hs_inner(x, y)).is_zero()


def test_sigma_rejects_non_invariant_matrix():
    ctx = _ctx()
    with pytest.raises(ActionError):
        sigma(ctx, mat([[2, 0], [0, 2]]), ctx.algebra.unit())


def test_sigma_formula_matches_transport_exhaustive():
    for q, alpha in [(2, make_alpha(1, 1)), (4, make_alpha(2, 1)),
                     (6, make_alpha(3, 1)), (8, make_alpha(4, 1))]:
        ctx = make_context(alpha, q)
        gens = [ctx.reduce_matrix(g) for g in ctx.gens]
        for g in gens:
            for (k, l) in ctx.monomials():
                assert sigma(ctx, g, uv_monomial(ctx, k, l)) == sigma_formula(ctx, g, k, l)


def test_verify_action_all_true():
    report = verify_action(_ctx())
    assert report.all_ok(), report.witness


def test_verify_action_trivial_gamma():
    ctx = make_context(make_alpha(2, 1), 4, gens=[identity_mat(2)])
    report = verify_action(ctx)
    assert report.all_ok()


def test_verify_action_detects_fault():
    ctx = _ctx()

    def corrupted(c, g, x):
        out = sigma(c, g, x)
        return AlgebraElement(c.algebra,
                              {y: cc * c.alpha.half_power(2) for y, cc in out.terms.items()})

    report = verify_action(ctx, sigma_fn=corrupted)
    assert not report.multiplicative
    assert report.witness is not None


def test_sigma_homomorphism_on_words():
    ctx = _ctx(8, make_alpha(4, 1))
    from twistalg.groups import mmul
    s, t = ctx.gens
    words = [s, t, mmul(s, t), mmul(t, s), mmul(s, mmul(t, s)), mmul(mmul(s, t), mmul(s, t))]
    x = uv_monomial(ctx, 1, 2) + uv_monomial(ctx, 3, 0).scale(ctx.alpha.root)
    for g in words:
        for h in words:
            gh = mmul(g, h)
            assert sigma(ctx, g, sigma(ctx, h, x)) == sigma(ctx, gh, x)


def test_uv_coefficient_inverse():
    ctx = _ctx(8, make_alpha(4, 1))
    x = uv_monomial(ctx, 3, 5).scale(ctx.alpha.root)
    assert uv_coefficient(ctx, x, 3, 5) == Coeff.unit(ctx.alpha.root)
    assert uv_coefficient(ctx, x, 1, 0).is_zero()


def test_finite_model_dimension_q2():
    rep = finite_model(make_alpha(1, 1), 2)
    assert rep.dim == 4 * 6 == 24


def test_finite_model_relations_exhaustive_q2():
    rep = finite_model(make_alpha(1, 1), 2)
    ok, witness = rep.verify_relations()
    assert ok, witness


def test_finite_model_well_definedness_error():
    with pytest.raises(WellDefinednessError):
        finite_model(make_alpha(3, 1), 4)  # root zeta_6: 6 does not divide 4


def test_finite_model_subgroup_generators():
    rep = finite_model(make_alpha(2, 1), 4, gamma_gens=[mat([[1, 1], [0, 1]])])
    # the shear has order 4 mod 4
    assert rep.dim == 16 * 4


def test_crossed_product_consistency_untwisted():
    ctx = make_context(make_alpha(1, 0), 2)  # alpha = 1, root = 1
    assert crossed_product_consistency(ctx)


def test_crossed_product_consistency_twisted_shear():
    ctx = make_context(make_alpha(2, 1), 4)
    gamma = generated_subgroup(sl2_mod_cached(4), [mmod(mat([[1, 1], [0, 1]]), 4)])
    assert crossed_product_consistency(ctx, gamma=gamma)


def test_crossed_product_fault_detected():
    ctx = make_context(make_alpha(2, 1), 4)
    gamma = generated_subgroup(sl2_mod_cached(4), [mmod(mat([[1, 1], [0, 1]]), 4)])

    def fault(e1, e2):
        from twistalg.groups import mvec
        (x1, g1), (x2, _) = e1, e2
        return ctx.cocycle(x1, mvec(g1, x2, mod=4)) * ctx.alpha.half_power(1)

    assert not crossed_product_consistency(ctx, gamma=gamma, fault=fault)


def test_lattice_context_symbolic():
    ctx = make_context(symbolic_alpha(1), None)
    x = uv_monomial(ctx, 1, 0)
    a = mat([[1, 2], [0, 1]])
    img = sigma(ctx, a, x)
    assert img == uv_monomial(ctx, 1, 0)
    y = uv_monomial(ctx, 0, 1)
    img = sigma(ctx, a, y)
    assert img == uv_monomial(ctx, 2, 1).scale(ctx.alpha.half_power(-2))
