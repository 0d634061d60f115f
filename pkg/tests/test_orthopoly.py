import mpmath as mp
import pytest

from spherelp import _poly
from spherelp.errors import ArgumentError
from spherelp.orthopoly import (
    adjacent10_family,
    adjacent10_norm,
    expand_gegenbauer,
    gauss_rule,
    gegenbauer_eval,
    gegenbauer_family,
    gegenbauer_to_power,
    is_positive_definite,
    lagrange_mu_weights,
    mu_integral,
    mu_moments,
    mu_normalization,
    radau_right_rule,
)
from spherelp.precision import working


def quad_oracle(n, f, dps=50):
    """Independent numeric integration of f against dmu."""
    with mp.workdps(dps):
        gam = mp.gamma(mp.mpf(n) / 2) / (mp.sqrt(mp.pi) * mp.gamma(mp.mpf(n - 1) / 2))
        return mp.quad(lambda t: gam * f(t) * (1 - t * t) ** (mp.mpf(n - 3) / 2), [-1, 1])


def jacobi_normalized(k, a, b, t, dps=50):
    with mp.workdps(dps):
        return mp.jacobi(k, a, b, t) / mp.jacobi(k, a, b, mp.mpf(1))


class TestMoments:
    def test_normalization_constant_makes_mu_probability(self):
        for n in (3, 4, 7, 12):
            total = quad_oracle(n, lambda t: mp.mpf(1))
            assert abs(total - 1) < mp.mpf("1e-45")

    @pytest.mark.parametrize("n", [3, 4, 5, 8, 12])
    def test_moments_match_quadrature_oracle(self, n):
        moms = mu_moments(n, 8)
        for j in range(9):
            ref = quad_oracle(n, lambda t: t**j)
            assert abs(moms[j] - ref) < mp.mpf("1e-30")

    def test_first_moments(self):
        moms = mu_moments(4, 4)
        assert moms[0] == 1
        assert moms[1] == 0
        assert abs(moms[2] - mp.mpf(1) / 4) < mp.mpf("1e-30")
        assert abs(moms[4] - mp.mpf(3) / (4 * 6)) < mp.mpf("1e-30")

    def test_gamma_constant_value(self):
        # n=3 gives the flat measure dt/2
        assert abs(mu_normalization(3) - mp.mpf(1) / 2) < mp.mpf("1e-30")


class TestGegenbauerEval:
    def test_degree_0_is_1(self):
        assert gegenbauer_eval(4, 0, 0.37) == 1

    def test_degree_1_is_t(self):
        t = mp.mpf("-0.2")
        assert abs(gegenbauer_eval(5, 1, t) - t) < mp.mpf("1e-30")

    @pytest.mark.parametrize("n,k,t", [
        (4, 2, "0.53"), (3, 5, "-0.77"), (7, 9, "0.31"), (12, 4, "0.9"),
    ])
    def test_matches_jacobi_oracle(self, n, k, t):
        a = mp.mpf(n - 3) / 2
        got = gegenbauer_eval(n, k, mp.mpf(t))
        ref = jacobi_normalized(k, a, a, mp.mpf(t))
        assert abs(got - ref) < mp.mpf("1e-30")

    def test_rejects_bad_arguments(self):
        with pytest.raises(ArgumentError):
            gegenbauer_eval(2, 1, 0.0)
        with pytest.raises(ArgumentError):
            gegenbauer_eval(4, -1, 0.0)


class TestAdjacentFamily:
    def test_degree_one_closed_form(self):
        fam = adjacent10_family(4, 3)
        # P_1 = (n t + 1)/(n + 1)
        assert abs(fam.eval(1, 1) - 1) < mp.mpf("1e-30")
        assert abs(fam.eval(1, 0) - mp.mpf(1) / 5) < mp.mpf("1e-30")
        assert abs(fam.zero_values(1)[0] + mp.mpf(1) / 4) < mp.mpf("1e-30")

    def test_degree_two_largest_zero(self):
        fam = adjacent10_family(4, 3)
        assert abs(fam.zero_values(2)[-1] - mp.mpf("0.27429")) < mp.mpf("1e-5")

    def test_norm_closed_form_value(self):
        # ((n+2i-1)/(n-1))^2 binom(n+i-2, i) at n=4, i=1 is 25/3
        assert abs(adjacent10_norm(4, 1) - mp.mpf(25) / 3) < mp.mpf("1e-30")

    def test_norms_match_direct_integrals(self):
        n = 5
        fam = adjacent10_family(n, 4)
        for i in range(4):
            pi = fam.polys[i]
            val = quad_oracle(n, lambda t: _poly.evaluate(pi, t) ** 2 * (1 - t))
            assert abs(1 / val - fam.r[i]) < mp.mpf("1e-25") * fam.r[i]

    @pytest.mark.parametrize("n", [3, 4, 9])
    def test_matches_jacobi_oracle(self, n):
        fam = adjacent10_family(n, 5)
        a, b = mp.mpf(n - 1) / 2, mp.mpf(n - 3) / 2
        for k in (2, 4, 5):
            for t in (mp.mpf("-0.41"), mp.mpf("0.83")):
                assert abs(fam.eval(k, t) - jacobi_normalized(k, a, b, t)) < mp.mpf("1e-30")

    def test_recurrence_positivity_and_normalization(self):
        for n in (3, 6, 11):
            fam = adjacent10_family(n, 8)
            assert all(b > 0 for b in fam.b)
            assert all(c > 0 for c in fam.c[1:])
            for k in range(9):
                assert abs(fam.eval(k, 1) - 1) < mp.mpf("1e-33")

    def test_zero_interlacing(self):
        for fam in (adjacent10_family(5, 9), gegenbauer_family(6, 9)):
            for d in range(2, 10):
                lo_row = fam.zero_values(d - 1)
                hi_row = fam.zero_values(d)
                assert all(hi_row[i] < lo_row[i] < hi_row[i + 1] for i in range(d - 1))

    def test_zeros_inside_recorded_brackets(self):
        fam = adjacent10_family(7, 6)
        for d in range(1, 7):
            for z, lo, hi in fam.zeros[d]:
                assert lo <= z <= hi


class TestExpansion:
    def test_basis_element(self):
        exp = expand_gegenbauer([0, 1], 7)
        assert exp.coeffs[0] == 0
        assert abs(exp.coeffs[1] - 1) < mp.mpf("1e-33")

    def test_linear_shift(self):
        exp = expand_gegenbauer([mp.mpf("0.3"), 1], 7)
        assert abs(exp.coeffs[0] - mp.mpf("0.3")) < mp.mpf("1e-33")
        assert abs(exp.coeffs[1] - 1) < mp.mpf("1e-33")

    def test_t_squared_zeroth_coefficient_is_1_over_n(self):
        exp = expand_gegenbauer([0, 0, 1], 4)
        assert abs(exp.coeffs[0] - mp.mpf(1) / 4) < mp.mpf("1e-33")
        ref = quad_oracle(4, lambda t: t * t)
        assert abs(exp.coeffs[0] - ref) < mp.mpf("1e-30")

    def test_sum_of_coefficients_is_value_at_1(self):
        rnd = mp.rand
        with working():
            p = [mp.mpf(j * j % 7 - 3) / (j + 1) for j in range(12)]
        exp = expand_gegenbauer(p, 5)
        assert abs(exp.value_at_1() - _poly.evaluate(tuple(p), mp.mpf(1))) < mp.mpf("1e-30")

    def test_round_trip_at_sample_points(self):
        import random

        rng = random.Random(7)
        p = tuple(mp.mpf(rng.uniform(-2, 2)) for _ in range(14))
        back = gegenbauer_to_power(expand_gegenbauer(p, 6))
        for i in range(32):
            t = mp.mpf(rng.uniform(-1, 1))
            v1, v2 = _poly.evaluate(p, t), _poly.evaluate(back, t)
            assert abs(v1 - v2) <= mp.mpf("1e-28") * max(1, abs(v1))

    def test_coefficients_match_projection_oracle(self):
        n = 5
        p = tuple(mp.mpf(c) for c in (1, -2, 0, 3, 1))
        exp = expand_gegenbauer(p, n)
        fam = gegenbauer_family(n, 6)
        for k, ck in enumerate(exp.coeffs):
            proj = quad_oracle(
                n, lambda t: _poly.evaluate(p, t) * _poly.evaluate(fam.polys[k], t)
            )
            ref = proj * fam.r[k]
            assert abs(ck - ref) < mp.mpf("1e-25")

    def test_zeroth_coefficient_equals_gauss_integral(self):
        n, p = 6, tuple(mp.mpf(c) for c in (0.5, 1, -1, 2, 0, 1, 3))
        exp = expand_gegenbauer(p, n)
        rule = gauss_rule(n, 4)  # exact to degree 7
        got = rule.integrate_poly(p)
        assert abs(got - exp.coeffs[0]) <= mp.mpf("1e-10") * max(1, abs(exp.coeffs[0]))


class TestPositiveDefinite:
    def test_basis_element_is_strictly_pd(self):
        fam = gegenbauer_family(5, 4)
        res = is_positive_definite(fam.polys[3], 5, strict=True)
        assert res.ok
        # witness is the third basis vector
        assert abs(res.coeffs[3] - 1) < mp.mpf("1e-30")
        assert all(abs(c) < mp.mpf("1e-30") for i, c in enumerate(res.coeffs) if i != 3)

    def test_negative_constant_fails(self):
        assert not is_positive_definite([-1], 4)

    def test_shifted_square_product(self):
        # (t+1) P_2^{1,1}(t): classically positive definite
        n = 4
        a = mp.mpf(n - 1) / 2
        with mp.workdps(50):
            vals = [mp.jacobi(2, a, a, t) / mp.jacobi(2, a, a, mp.mpf(1))
                    for t in (mp.mpf(0), mp.mpf(1) / 2, mp.mpf(1))]
        # reconstruct P_2^{1,1} power coefficients from three values
        A = mp.matrix([[1, 0, 0], [1, mp.mpf(1) / 2, mp.mpf(1) / 4], [1, 1, 1]])
        c = mp.lu_solve(A, mp.matrix(vals))
        p211 = tuple(c)
        prod = _poly.mul((mp.mpf(1), mp.mpf(1)), p211)
        res = is_positive_definite(prod, n, strict=True)
        assert res.ok
        # cross-check expansion against the projection oracle
        exp = expand_gegenbauer(prod, n)
        fam = gegenbauer_family(n, 4)
        for k, ck in enumerate(exp.coeffs):
            ref = fam.r[k] * quad_oracle(
                n, lambda t: _poly.evaluate(prod, t) * _poly.evaluate(fam.polys[k], t)
            )
            assert abs(ck - ref) < mp.mpf("1e-25")

    def test_structural_zero_passes_strict_but_fuzz_fails(self):
        # t alone is the basis element e_1: structurally zero f_0 is fine
        assert is_positive_definite([0, 1], 4, strict=True).ok
        # a coefficient inside the tolerance band is neither zero nor positive
        fuzz = mp.mpf("1e-14")
        assert not is_positive_definite([fuzz, 1], 4, strict=True).ok
        assert is_positive_definite([fuzz, 1], 4, strict=False).ok
        # genuinely negative coefficients fail both once past the band
        assert not is_positive_definite([mp.mpf("-1e-9"), 1], 4, strict=False).ok


class TestQuadratures:
    def test_radau_weights_sum_to_1(self):
        for n, k in ((3, 2), (5, 4), (9, 6)):
            rule = radau_right_rule(n, k)
            assert abs(mp.fsum(rule.weights) - 1) < mp.mpf("1e-30")

    def test_radau_moments_n4_k2(self):
        rule = radau_right_rule(4, 2)
        moms = mu_moments(4, 4)
        for j in range(5):
            got = rule.integrate(lambda t: t**j)
            assert abs(got - moms[j]) < mp.mpf("1e-12")

    def test_radau_weights_positive_n3_k3(self):
        rule = radau_right_rule(3, 3)
        assert all(w > 0 for w in rule.weights)

    def test_radau_exactness_degree(self):
        rule = radau_right_rule(5, 3)
        assert rule.exactness_degree == 6
        moms = mu_moments(5, 7)
        assert abs(rule.integrate(lambda t: t**6) - moms[6]) < mp.mpf("1e-25")
        # degree 2k+1 is generally not integrated exactly
        assert abs(rule.integrate(lambda t: t**7) - moms[7]) > mp.mpf("1e-6")

    def test_gauss_single_node_at_zero(self):
        rule = gauss_rule(4, 1)
        assert len(rule.nodes) == 1
        assert abs(rule.nodes[0]) < mp.mpf("1e-30")
        assert abs(rule.weights[0] - 1) < mp.mpf("1e-30")
        assert abs(rule.integrate(lambda t: t)) < mp.mpf("1e-30")

    def test_gauss_moments_n6_k4(self):
        rule = gauss_rule(6, 4)
        moms = mu_moments(6, 7)
        for j in range(8):
            assert abs(rule.integrate(lambda t: t**j) - moms[j]) < mp.mpf("1e-12")

    def test_gauss_nodes_match_scipy(self):
        from scipy.special import roots_jacobi

        n, k = 7, 5
        rule = gauss_rule(n, k)
        a = (n - 3) / 2
        nodes, _ = roots_jacobi(k, a, a)
        for x, y in zip(rule.nodes, sorted(nodes)):
            assert abs(float(x) - y) < 1e-12

    def test_radau_interior_nodes_match_scipy(self):
        from scipy.special import roots_jacobi

        n, k = 6, 4
        rule = radau_right_rule(n, k)
        nodes, _ = roots_jacobi(k, (n - 1) / 2, (n - 3) / 2)
        for x, y in zip(rule.nodes[:-1], sorted(nodes)):
            assert abs(float(x) - y) < 1e-12
        assert rule.nodes[-1] == 1

    def test_lagrange_weights_reproduce_linear_moments(self):
        ws = lagrange_mu_weights(5, [mp.mpf("-0.3"), mp.mpf("0.2"), mp.mpf(1)])
        moms = mu_moments(5, 2)
        nodes = [mp.mpf("-0.3"), mp.mpf("0.2"), mp.mpf(1)]
        for j in range(3):
            got = mp.fsum(w * x**j for w, x in zip(ws, nodes))
            assert abs(got - moms[j]) < mp.mpf("1e-30")


class TestSignedMeasurePositivity:
    """Discretized constructive positivity of the four signed measures."""

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_integrals_of_squares_positive(self, seed):
        import random

        rng = random.Random(seed)
        n, k = rng.choice([(4, 3), (5, 4), (8, 5)])
        fam = adjacent10_family(n, k)
        t_lo = fam.zero_values(k)[0]
        t_hi = fam.zero_values(k)[-1]
        ell = t_lo - mp.mpf(rng.uniform(0.01, 0.3))
        if ell < -1:
            ell = (t_lo - 1) / 2
        s = t_hi + mp.mpf(rng.uniform(0.01, 0.5)) * (1 - t_hi)
        radau = radau_right_rule(n, k)
        gauss = gauss_rule(n, k)

        def rand_poly(deg):
            return tuple(mp.mpf(rng.uniform(-1, 1)) for _ in range(deg + 1))

        for _ in range(5):
            q = rand_poly(k - 1)
            q2 = _poly.mul(q, q)
            nu_ell = radau.integrate_poly(
                _poly.mul(q2, _poly.mul(_poly.linear(ell), (mp.mpf(1), mp.mpf(-1)))))
            nu_s = radau.integrate_poly(
                _poly.mul(q2, _poly.mul((mp.mpf(float(s)), mp.mpf(-1)), (mp.mpf(1), mp.mpf(-1)))))
            mu_ell = gauss.integrate_poly(_poly.mul(q2, _poly.linear(ell)))
            assert nu_ell > 0
            assert nu_s > 0
            assert mu_ell > 0
            q = rand_poly(k - 2)
            q2 = _poly.mul(q, q)
            nu_ells = radau.integrate_poly(
                _poly.mul(q2, _poly.mul(_poly.mul(_poly.linear(ell),
                                                  (s, mp.mpf(-1))), (mp.mpf(1), mp.mpf(-1)))))
            assert nu_ells > 0
