import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gptcompat.compat import (IncompatibilityCertificate, JointMeasurement,
                              construct_incompatible_pair, degree, degree_free_coin,
                              degree_lp, extract_certificate, finite_marginal,
                              half_coin_joint, is_compatible, joint_from_p,
                              marginals, simplex_product_joint, verify_certificate)
from gptcompat.effects import (AffineFunction, Effect, FiniteMeasurement,
                               TwoOutcomeMeasurement, coin_toss, mix_with_coin)
from gptcompat.errors import (DimensionMismatch, EffectInvalid, InfeasibleP,
                              InvalidCertificate, NotASimplex, NotIncompatible,
                              ParameterOutOfRange, SimplexInput)
from gptcompat.geometry import build_polytope
from gptcompat.lp import solve_lp
from gptcompat.shapes import ngon_vertices
from conftest import ambient, corpus_polytopes, measurement, random_pair, random_simplex
from oracles import degree_scipy, grid_bisection_degree

CORPUS = corpus_polytopes()
NON_SIMPLEX = ["square", "cube", "octahedron", "pentagon", "hexagon",
               "flat_square_3d", "random_3d", "random_4d"]


def sharp_square_pair(K):
    return measurement(K, [1, 0]), measurement(K, [0, 1])


def square_certificate(a3=1.0, z3=(1.0, 1.0)):
    return IncompatibilityCertificate(1.0, 1.0, a3, np.array([0.0, 1.0]),
                                      np.array([1.0, 0.0]), np.array(z3), 0.0)


def corpus_pairs(per_shape=6, seed=0):
    rng = np.random.default_rng(seed)
    for name in sorted(CORPUS):
        K = CORPUS[name]
        for _ in range(per_shape):
            yield name, K, random_pair(K, rng)


class TestJointFromP:
    def test_triangle_zero_p(self, triangle):
        m1, m2 = measurement(triangle, [1, 0]), measurement(triangle, [0, 1])
        joint = joint_from_p(m1, m2, AffineFunction.constant(triangle, 0.0))
        assert joint.g11.allclose(0.0)
        assert joint.g12.allclose(m1.effect)
        assert joint.g21.allclose(m2.effect)
        assert joint.g22.allclose(ambient(triangle, [-1, -1], 1))

    def test_diagonal(self, square):
        m = measurement(square, [0.3, 0.4], 0.1)
        joint = joint_from_p(m, m, m.effect)
        assert joint.g12.allclose(0.0) and joint.g21.allclose(0.0)
        assert joint.g22.allclose(1 - m.effect)
        a, b = marginals(joint)
        assert a.effect.allclose(m.effect) and b.effect.allclose(m.effect)

    def test_square_infeasible(self, square):
        m1, m2 = sharp_square_pair(square)
        with pytest.raises(InfeasibleP):
            joint_from_p(m1, m2, AffineFunction.constant(square, 0.0))

    def test_joint_must_sum_to_one(self, square):
        e = Effect.of(AffineFunction.constant(square, 0.25))
        with pytest.raises(EffectInvalid):
            JointMeasurement(e, e, e, Effect.of(AffineFunction.constant(square, 0.3)))

    def test_mixed_spaces_rejected(self, square, triangle):
        with pytest.raises(DimensionMismatch):
            is_compatible(measurement(square, [1, 0]), measurement(triangle, [1, 0]))


class TestMarginals:
    def test_product_of_constants(self, square):
        c = lambda v: Effect.of(AffineFunction.constant(square, v))
        e, d = 0.3, 0.6
        joint = JointMeasurement(c(e * d), c(e * (1 - d)), c((1 - e) * d),
                                 c((1 - e) * (1 - d)))
        a, b = marginals(joint)
        assert a.effect.allclose(e) and b.effect.allclose(d)

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_round_trip(self, name):
        K = CORPUS[name]
        rng = np.random.default_rng(5)
        checked = 0
        for _ in range(15):
            m1, m2 = random_pair(K, rng)
            res = is_compatible(m1, m2)
            if not res.compatible:
                continue
            a, b = marginals(res.joint)
            assert np.allclose(a.effect.vertex_values(), m1.effect.vertex_values(), atol=1e-9)
            assert np.allclose(b.effect.vertex_values(), m2.effect.vertex_values(), atol=1e-9)
            checked += 1
        assert checked > 0


class TestIsCompatible:
    def test_examples(self, triangle, square):
        m1, m2 = measurement(triangle, [1, 0]), measurement(triangle, [0, 1])
        assert is_compatible(m1, m2).compatible
        assert not is_compatible(*sharp_square_pair(square)).compatible

    @pytest.mark.parametrize("t", [0.0, 0.2, 0.5, 1.0])
    def test_coin_toss_compatible_with_everything(self, square, t):
        m = measurement(square, [1, 0])
        assert is_compatible(m, coin_toss(square, t)).compatible
        assert is_compatible(coin_toss(square, t), m).compatible

    def test_iff_consistency(self):
        seen = {True: 0, False: 0}
        for _, K, (m1, m2) in corpus_pairs():
            feasible = is_compatible(m1, m2).compatible
            assert feasible == degree(m1, m2, certificate=False).compatible
            seen[feasible] += 1
        assert seen[True] > 5 and seen[False] > 5


class TestDegree:
    def test_triangle(self, triangle):
        rng = np.random.default_rng(0)
        for _ in range(10):
            res = degree(*random_pair(triangle, rng))
            assert res.lam == pytest.approx(1.0, abs=1e-7)
            assert res.certificate is None

    def test_square(self, square):
        res = degree(*sharp_square_pair(square))
        assert res.lam == pytest.approx(0.5, abs=1e-9)
        assert res.mu == pytest.approx(1.0, abs=1e-9)
        assert res.gap <= 1e-7
        assert not res.compatible
        assert res.certificate.violation > 1e-8

    def test_square_grid_oracle(self, square):
        X = square.vertices
        lam = grid_bisection_degree(X, X[:, 0], X[:, 1])
        assert lam == pytest.approx(0.5, abs=1e-6)

    def test_64gon(self):
        K = build_polytope(ngon_vertices(64))
        m1, m2 = measurement(K, [0.5, 0], 0.5), measurement(K, [0, 0.5], 0.5)
        res = degree(m1, m2)
        assert res.lam == pytest.approx(0.7071, abs=0.01)
        X = K.vertices
        assert res.lam == pytest.approx(degree_scipy(X, m1.effect.vertex_values(),
                                                     m2.effect.vertex_values()), abs=1e-7)

    def test_result_fields(self, square):
        m1, m2 = measurement(square, [0.5, 0.2], 0.1), measurement(square, [-0.3, 0.6], 0.3)
        res = degree(m1, m2)
        assert res.lam == pytest.approx(1 / (1 + res.mu))
        assert 0.5 - 1e-7 <= res.lam <= 1
        a, b = marginals(res.joint_at_lambda)
        assert a.effect.allclose(mix_with_coin(m1, res.lam, 0.5).effect, atol=1e-8)
        assert b.effect.allclose(mix_with_coin(m2, res.lam, 0.5).effect, atol=1e-8)

    @pytest.mark.parametrize("name", ["square", "pentagon", "hexagon"])
    def test_agrees_with_highs(self, name):
        K = CORPUS[name]
        rng = np.random.default_rng(21)
        for _ in range(10):
            m1, m2 = random_pair(K, rng)
            ref = degree_scipy(K.vertices, m1.effect.vertex_values(),
                               m2.effect.vertex_values())
            assert degree(m1, m2).lam == pytest.approx(ref, abs=1e-7)

    def test_lower_bound_and_gap(self):
        for _, K, (m1, m2) in corpus_pairs(per_shape=10, seed=9):
            res = degree(m1, m2)
            assert res.lam >= 0.5 - 1e-7
            assert res.gap <= 1e-7
            if res.certificate is not None:
                assert verify_certificate(res.certificate, m1, m2) > 1e-8

    def test_invariant_under_similarity(self):
        rng = np.random.default_rng(4)
        for name in sorted(CORPUS):
            K = CORPUS[name]
            d = K.ambient_dim
            q, _ = np.linalg.qr(rng.standard_normal((d, d)))
            moved = build_polytope(3.7 * K.vertices @ q.T + rng.standard_normal(d))
            for _ in range(3):
                m1, m2 = random_pair(K, rng)
                n1 = TwoOutcomeMeasurement(Effect.of(AffineFunction.from_vertex_values(
                    moved, m1.effect.vertex_values())))
                n2 = TwoOutcomeMeasurement(Effect.of(AffineFunction.from_vertex_values(
                    moved, m2.effect.vertex_values())))
                assert degree(n1, n2).lam == pytest.approx(degree(m1, m2).lam, abs=1e-9)


class TestCertificates:
    def test_square_candidate(self, square):
        m1, m2 = sharp_square_pair(square)
        assert verify_certificate(square_certificate(), m1, m2) == pytest.approx(1.0)

    def test_doubled_a3(self, square):
        m1, m2 = sharp_square_pair(square)
        with pytest.raises(InvalidCertificate) as info:
            verify_certificate(square_certificate(a3=2.0), m1, m2)
        assert info.value.condition == "positivity"

    def test_z3_at_origin(self, square):
        m1, m2 = sharp_square_pair(square)
        assert verify_certificate(square_certificate(z3=(0, 0)), m1, m2) == pytest.approx(-1.0)

    def test_other_conditions(self, square):
        m1, m2 = sharp_square_pair(square)
        bad = IncompatibilityCertificate(1.5, 1.0, 1.0, *square_certificate().z, 0.0)
        with pytest.raises(InvalidCertificate) as info:
            verify_certificate(bad, m1, m2)
        assert info.value.condition == "normalisation"
        outside = square_certificate(z3=(2.0, 2.0))
        with pytest.raises(InvalidCertificate) as info:
            verify_certificate(outside, m1, m2)
        assert info.value.condition == "membership"
        neg = IncompatibilityCertificate(-1.0, 1.0, 1.0, *square_certificate().z, 0.0)
        with pytest.raises(InvalidCertificate) as info:
            verify_certificate(neg, m1, m2)
        assert info.value.condition == "nonnegativity"

    def test_compatible_pair_rejected(self, triangle):
        m1, m2 = measurement(triangle, [1, 0]), measurement(triangle, [0, 1])
        lp, _ = degree_lp(m1, m2)
        with pytest.raises(NotIncompatible):
            extract_certificate(solve_lp(lp), triangle, m1, m2)

    def test_extracted_matches_dual(self, square):
        m1, m2 = sharp_square_pair(square)
        lp, _ = degree_lp(m1, m2)
        sol = solve_lp(lp)
        cert = extract_certificate(sol, square, m1, m2)
        assert cert.violation == pytest.approx(sol.dual_objective, abs=1e-7)
        assert (cert.a1 + cert.a2) / 2 <= 1 + 1e-9

    def test_soundness(self):
        found = 0
        for _, K, (m1, m2) in corpus_pairs(per_shape=8, seed=13):
            res = degree(m1, m2)
            if res.certificate is None:
                continue
            if verify_certificate(res.certificate, m1, m2) > 1e-8:
                assert not is_compatible(m1, m2).compatible
                found += 1
        assert found > 3

    def test_certificate_dual_objective(self):
        for _, K, (m1, m2) in corpus_pairs(per_shape=6, seed=17):
            res = degree(m1, m2)
            if res.mu > 1e-6:
                assert res.certificate.violation == pytest.approx(res.dual_objective, abs=1e-7)


class TestFreeCoin:
    def test_triangle(self, triangle):
        rng = np.random.default_rng(2)
        assert degree_free_coin(*random_pair(triangle, rng)).lam == pytest.approx(1.0, abs=1e-7)

    def test_square(self, square):
        res = degree_free_coin(*sharp_square_pair(square))
        assert res.lam == pytest.approx(0.5, abs=1e-7)
        assert res.certificate is not None

    def test_identical(self, square):
        m = measurement(square, [1, 0])
        res = degree_free_coin(m, m)
        assert res.lam == pytest.approx(1.0, abs=1e-9)
        assert res.biases == (0.5, 0.5)

    def test_never_below_uniform(self):
        for _, K, (m1, m2) in corpus_pairs(per_shape=4, seed=23):
            free = degree_free_coin(m1, m2)
            assert free.lam >= degree(m1, m2, certificate=False).lam - 1e-9
            assert free.gap <= 1e-7
            t1, t2 = free.biases
            a, b = marginals(free.joint_at_lambda)
            assert a.effect.allclose(mix_with_coin(m1, free.lam, t1).effect, atol=1e-7)
            assert b.effect.allclose(mix_with_coin(m2, free.lam, t2).effect, atol=1e-7)


class TestSimplexProduct:
    def test_triangle(self, triangle):
        m1, m2 = measurement(triangle, [1, 0]), measurement(triangle, [0, 1])
        joint = simplex_product_joint(m1, m2)
        assert joint[(1, 1)].allclose(0.0)
        assert finite_marginal(joint, 0)[1].allclose(m1.effect)
        assert finite_marginal(joint, 1)[1].allclose(m2.effect)

    def test_segment(self, segment):
        m = measurement(segment, [1.0])
        joint = simplex_product_joint(m, m)
        assert joint[(1, 1)].allclose(m.effect)
        assert joint[(1, 2)].allclose(0.0) and joint[(2, 1)].allclose(0.0)
        assert joint[(2, 2)].allclose(1 - m.effect)

    def test_coin(self, triangle):
        m = measurement(triangle, [0.5, 0.25], 0.1)
        joint = simplex_product_joint(m, coin_toss(triangle, 0.3))
        assert joint[(1, 1)].allclose(0.3 * m.effect)
        assert joint[(2, 2)].allclose(0.7 * m.complement())

    def test_not_simplex(self, square):
        with pytest.raises(NotASimplex):
            simplex_product_joint(*sharp_square_pair(square))

    def test_finite_inputs(self, triangle):
        x, y = ambient(triangle, [1, 0]), ambient(triangle, [0, 1])
        m1 = FiniteMeasurement("abc", [Effect.of(x), Effect.of(y), Effect.of(1 - x - y)])
        m2 = measurement(triangle, [0.5, 0.5])
        joint = simplex_product_joint(m1, m2)
        assert len(joint.outcomes) == 6
        for got, want in zip(finite_marginal(joint, 0).effects, m1.effects):
            assert np.allclose(got.vertex_values(), want.vertex_values(), rtol=0, atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 2**32 - 1))
    def test_marginals_exact(self, d, seed):
        rng = np.random.default_rng(seed)
        K = random_simplex(d, rng)
        m1, m2 = random_pair(K, rng)
        joint = simplex_product_joint(m1, m2)
        got1 = finite_marginal(joint, 0)[1].vertex_values()
        got2 = finite_marginal(joint, 1)[1].vertex_values()
        assert np.allclose(got1, m1.effect.vertex_values(), rtol=0, atol=1e-12)
        assert np.allclose(got2, m2.effect.vertex_values(), rtol=0, atol=1e-12)


class TestHalfCoin:
    def test_square(self, square):
        m1, m2 = sharp_square_pair(square)
        joint = half_coin_joint(m1, m2)
        assert joint.g11.allclose(ambient(square, [0.25, 0.25]))
        assert marginals(joint)[0].effect.allclose(ambient(square, [0.5, 0], 0.25))

    def test_coins(self, square):
        c = coin_toss(square, 0.5)
        assert all(g.allclose(0.25) for g in half_coin_joint(c, c).effects)

    def test_zero_biases(self, square):
        m1, m2 = sharp_square_pair(square)
        joint = half_coin_joint(m1, m2, 0, 0)
        assert joint.g11.allclose(0.0)
        a, b = marginals(joint)
        assert a.effect.allclose(m1.effect / 2) and b.effect.allclose(m2.effect / 2)

    def test_bias_range(self, square):
        with pytest.raises(ParameterOutOfRange):
            half_coin_joint(*sharp_square_pair(square), 1.5, 0.5)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0, 1), st.floats(0, 1), st.integers(0, 10**6))
    def test_marginals_are_half_mixtures(self, t1, t2, seed):
        K = CORPUS["hexagon"]
        m1, m2 = random_pair(K, np.random.default_rng(seed))
        a, b = marginals(half_coin_joint(m1, m2, t1, t2))
        assert a.effect.allclose(mix_with_coin(m1, 0.5, t1).effect, atol=1e-12)
        assert b.effect.allclose(mix_with_coin(m2, 0.5, t2).effect, atol=1e-12)


class TestWitness:
    def test_square_two_thirds(self, square):
        m1, m2, res = construct_incompatible_pair(square)
        assert res.lam == pytest.approx(2 / 3, abs=1e-9)
        assert verify_certificate(res.certificate, m1, m2) > 1e-8

    def test_square_pairs_by_grid_oracle(self, square):
        # every facet/off-vertex pair on the square has the same degree
        from gptcompat.effects import effect_exposing_vertex, effect_vanishing_on_facet
        X = square.vertices
        for F in square.facets:
            f1 = effect_vanishing_on_facet(square, F).vertex_values()
            for v in range(4):
                if v in F.vertex_indices:
                    continue
                f2 = effect_exposing_vertex(square, v).vertex_values()
                assert grid_bisection_degree(X, f1, f2) == pytest.approx(2 / 3, abs=1e-6)

    def test_cube(self, cube):
        m1, m2, res = construct_incompatible_pair(cube)
        assert res.lam < 1 - 1e-6
        assert verify_certificate(res.certificate, m1, m2) > 1e-8

    def test_triangle(self, triangle):
        with pytest.raises(SimplexInput):
            construct_incompatible_pair(triangle)

    @pytest.mark.parametrize("name", NON_SIMPLEX)
    def test_corpus(self, name):
        K = CORPUS[name]
        m1, m2, res = construct_incompatible_pair(K)
        assert res.lam < 1 - 1e-6
        assert not is_compatible(m1, m2).compatible
