import random

import mpmath as mp
import pytest

from spherelp import _poly
from spherelp.errors import DegenerateConfigurationError, RangeError
from spherelp.levenshtein import (
    bound_L2k,
    bound_curves,
    bound_u4,
    build_f2k,
    build_quadrature,
    classical_odd_bound,
    reassemble_f2k,
    regime_crossover,
)
from spherelp.orthopoly import mu_moments
from spherelp.reference import classical_even_bound, classical_even_window
from spherelp.signed import s_window

THIRD = mp.mpf(1) / 3


class TestF2k:
    def test_value_at_1(self):
        lev = build_f2k(5, mp.mpf("-0.85"), mp.mpf("0.7"), 4)
        assert abs(lev.eval(1) - (1 - lev.ell) * (1 - lev.s)) < mp.mpf("1e-28")

    def test_sign_pattern(self):
        lev = build_f2k(5, mp.mpf("-0.85"), mp.mpf("0.7"), 4)
        betas = set(float(b) for b in lev.kernel.beta_values())
        rng = random.Random(11)
        for _ in range(60):
            t = mp.mpf(rng.uniform(float(lev.ell), float(lev.s)))
            if min(abs(float(t) - b) for b in betas) < 1e-3:
                continue
            assert lev.eval(t) < 0
        for t in (mp.mpf("-0.99"), lev.s + (1 - lev.s) / 3, mp.mpf("0.999")):
            if t < lev.ell or t > lev.s:
                assert lev.eval(t) >= 0

    def test_double_zeros_at_interior_nodes(self):
        lev = build_f2k(6, mp.mpf("-0.8"), mp.mpf("0.5"), 3)
        d = _poly.derivative(lev.coeffs)
        for b in lev.kernel.beta_values():
            assert abs(lev.eval(b)) < mp.mpf("1e-28")
            assert abs(_poly.evaluate(d, b)) < mp.mpf("1e-26")

    def test_m2_configuration_zeros(self):
        lev = build_f2k(7, mp.mpf(-1), THIRD, 2)
        assert abs(lev.eval(-1)) < mp.mpf("1e-30")
        assert abs(lev.eval(THIRD)) < mp.mpf("1e-30")
        assert abs(lev.eval(-THIRD)) < mp.mpf("1e-30")
        assert abs(_poly.evaluate(_poly.derivative(lev.coeffs), -THIRD)) < mp.mpf("1e-28")

    def test_f0_both_routes_exposed(self):
        lev = build_f2k(5, mp.mpf("-0.85"), mp.mpf("0.7"), 4)
        assert abs(lev.f0 - lev.f0_closed) <= mp.mpf("1e-25") * abs(lev.f0)
        assert lev.f0 > 0


class TestQuadrature:
    def test_weights_sum_to_one(self):
        q = build_quadrature(5, mp.mpf("-0.85"), mp.mpf("0.7"), 4)
        assert abs(mp.fsum(q.weights) - 1) < mp.mpf("1e-30")

    def test_exactness_to_2k(self):
        n, k = 6, 3
        ell = mp.mpf("-0.8")
        s = sum(s_window(n, ell, k)) / 2
        q = build_quadrature(n, ell, s, k)
        moms = mu_moments(n, 2 * k + 1)
        for j in range(2 * k + 1):
            got = q.integrate(lambda t: t**j)
            assert abs(got - moms[j]) <= mp.mpf("1e-10") * max(1, abs(moms[j]))
        # degree 2k+1 is generically missed
        assert abs(q.integrate(lambda t: t ** (2 * k + 1)) - moms[2 * k + 1]) > mp.mpf("1e-8")

    def test_m2_weights(self):
        q = build_quadrature(7, mp.mpf(-1), THIRD, 2)
        assert abs(q.weights[-1] - mp.mpf(1) / 56) < mp.mpf("1e-12")
        assert all(w > 0 for w in q.weights)


class TestBound:
    def test_m2_attained_value(self):
        rep = bound_L2k(7, mp.mpf(-1), THIRD, 2)
        assert abs(rep.value - 56) <= mp.mpf("1e-9") * 56
        assert abs(rep.value_from_f0 - 56) <= mp.mpf("1e-9") * 56
        assert rep.checks["f2k_positive_definite"]

    def test_dual_representation_on_grid(self):
        rng = random.Random(5)
        for _ in range(6):
            n = rng.choice([3, 5, 8, 11])
            k = rng.choice([1, 2, 3, 5])
            from spherelp.krein import ratio_root

            rr = ratio_root(n, k)
            ell = mp.mpf(-1) + (rr + 1) * mp.mpf(rng.uniform(0.05, 0.95))
            lo, hi = s_window(n, ell, k)
            s = lo + (hi - lo) * mp.mpf(rng.uniform(0.05, 0.95))
            rep = bound_L2k(n, ell, s, k, krein="none")
            assert abs(rep.value - rep.value_from_f0) <= mp.mpf("1e-10") * abs(rep.value)
            assert abs(rep.value - (1 - ell) * (1 - s) / rep.polynomial.f0) \
                <= mp.mpf("1e-10") * abs(rep.value)

    def test_monotone_in_s(self):
        n, ell, k = 4, mp.mpf("-0.95"), 2
        lo, hi = s_window(n, ell, k)
        vals = [bound_L2k(n, ell, lo + (hi - lo) * mp.mpf(x), k, krein="none").value
                for x in ("0.1", "0.3", "0.5", "0.7", "0.9")]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_reassembly_identity(self):
        for (n, ell, k) in ((5, "-0.85", 4), (4, "-0.95", 3), (7, "-1", 2)):
            ell = mp.mpf(ell)
            s = sum(s_window(n, ell, k)) / 2
            lev = build_f2k(n, ell, s, k)
            re = reassemble_f2k(lev)
            scale = max(abs(c) for c in lev.coeffs)
            assert max(abs(a - b) for a, b in zip(re, lev.coeffs)) <= mp.mpf("1e-10") * scale

    def test_classical_endpoint_reduction(self):
        # at ell = -1 the bound agrees with the classical even-degree path
        for (n, k, frac) in ((4, 2, "0.3"), (6, 3, "0.6"), (5, 2, "0.5")):
            lo, hi = s_window(n, mp.mpf(-1), k)
            s = lo + (hi - lo) * mp.mpf(frac)
            ours = bound_L2k(n, mp.mpf(-1), s, k, krein="none").value
            ref, _, _ = classical_even_bound(n, s, k)
            assert abs(ours - ref) <= mp.mpf("1e-9") * abs(ours)
            wlo, whi = classical_even_window(n, k)
            assert abs(wlo - lo) < mp.mpf("1e-25")
            assert abs(whi - hi) < mp.mpf("1e-25")


class TestU4:
    def test_m2_value(self):
        rep = bound_u4(7, mp.mpf(-1), THIRD)
        assert abs(rep.value - 56) <= mp.mpf("1e-9") * 56
        assert all(rep.constraints.values())
        assert abs(rep.alpha + THIRD) < mp.mpf("1e-30")

    def test_m3_parameters_evaluate_to_275(self):
        # the degree-4 closed form at (22, -1/4, 1/4): the quadruple tied to
        # the m=3 tight-design family (cardinality 891) does NOT reproduce
        # its cardinality here; the closed form gives exactly 275
        rep = bound_u4(22, mp.mpf(-1) / 4, mp.mpf(1) / 4)
        assert abs(rep.value - 275) <= mp.mpf("1e-9") * 275

    def test_agreement_with_pipeline_on_random_grid(self):
        rng = random.Random(17)
        from spherelp.krein import ratio_root

        done = 0
        while done < 5:
            n = rng.choice([4, 6, 9, 13])
            rr = ratio_root(n, 2)
            ell = mp.mpf(-1) + (rr + 1) * mp.mpf(rng.uniform(0.1, 0.9))
            lo, hi = s_window(n, ell, 2)
            s = lo + (hi - lo) * mp.mpf(rng.uniform(0.1, 0.9))
            pipeline = bound_L2k(n, ell, s, 2, krein="none").value
            closed = bound_u4(n, ell, s).value
            assert abs(pipeline - closed) <= mp.mpf("1e-9") * abs(pipeline)
            done += 1

    def test_degenerate_denominator(self):
        with pytest.raises(DegenerateConfigurationError):
            bound_u4(22, mp.mpf(-1) / 4, mp.mpf(1) / 6)


class TestClassicalOdd:
    def test_simplex_value(self):
        for n in (3, 5, 12):
            b = classical_odd_bound(n, mp.mpf(-1) / n, 1)
            assert abs(b.value - (n + 1)) < mp.mpf("1e-25")

    def test_degree_1_closed_form_curve(self):
        for s in ("-0.95", "-0.5", "-0.25"):
            s = mp.mpf(s)
            b = classical_odd_bound(4, s, 1)
            assert abs(b.value - (1 - s) / (-s)) < mp.mpf("1e-25")

    def test_degree_3_orthoplex_value(self):
        for n in (3, 4, 7):
            b = classical_odd_bound(n, mp.mpf(0), 2)
            assert abs(b.value - 2 * n) < mp.mpf("1e-20")

    def test_degree_3_against_moment_oracle(self):
        # brute force f(1)/f0 with f = (t-s) K^2 via high-precision moments
        n, s = 4, mp.mpf("0.1")
        got = classical_odd_bound(n, s, 2).value
        # K(t) = 1 + (n t + 1)(n s + 1)/(n - 1), f0 by monomial moments
        K = (1 + (n * s + 1) / (n - 1), mp.mpf(n) * (n * s + 1) / (n - 1))
        f = _poly.mul(_poly.linear(s), _poly.mul(K, K))
        moms = mu_moments(n, 3)
        f0 = mp.fsum(c * moms[j] for j, c in enumerate(f))
        ref = _poly.evaluate(f, mp.mpf(1)) / f0
        assert abs(got - ref) < mp.mpf("1e-25")

    def test_out_of_range_raises(self):
        with pytest.raises(RangeError):
            classical_odd_bound(4, mp.mpf("0.1"), 1)  # degree-1 needs s < 0


class TestCurvesAndCrossovers:
    def test_crossover_handovers_match_known_values(self):
        c1 = regime_crossover(4, mp.mpf("-0.95"), 1)
        assert abs(c1.s_cross - mp.mpf(1) / 56) < mp.mpf("1e-25")
        assert c1.gap <= mp.mpf("1e-6") * c1.left_value
        c2 = regime_crossover(4, mp.mpf("-0.95"), 2)
        assert abs(c2.s_cross - mp.mpf("0.4195")) < mp.mpf("0.002")
        assert c2.gap <= mp.mpf("1e-6") * c2.left_value

    def test_curves_rows_structure(self):
        ell = mp.mpf("-0.95")
        rows = bound_curves(4, ell, [mp.mpf("-0.5"), mp.mpf("0.0"), mp.mpf("0.3")],
                            new_ks=(1, 2), odd_ks=(1, 2))
        by_s = {float(r["s"]): r for r in rows}
        # s=-0.5: degree-1 valid, degree-2 window not reached
        assert by_s[-0.5]["L1"] is not None
        assert by_s[-0.5]["L2"] is None
        # s=0: inside degree-2 window [(-0.25, 0.0179)]? no: 0 > 0.0179 is false
        assert by_s[0.0]["L2"] is not None
        assert by_s[0.0]["L1"] is None  # degree 1 needs s < 0
        # s=0.3: inside the k=2 window (0.274, 0.419)
        assert by_s[0.3]["L4"] is not None
        assert by_s[0.3]["L2"] is None
