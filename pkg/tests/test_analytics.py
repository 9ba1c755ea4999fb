import math

import numpy as np
import pytest

from rqcfid import analytics
from rqcfid.analytics import (_boundary_count, _catalan,
                              asymptotic_fidelity,
                              brickwall_deficit_coefficient,
                              brickwall_fidelity_perturbative, delta_formula,
                              f_approx, f_exact, fidelity_from_heavy_output,
                              pulse_sigma, qv_contour, qv_threshold_fidelity,
                              solvable_fidelity, swap_omission_prob)
from rqcfid.linalg import gue_batch
from rqcfid.routing import Architecture
from rqcfid.seeding import Seed

from oracles import brickwall_deficit_hypergeometric, f4_polynomial

FC = Architecture.fully_connected()
LINE = Architecture.line()
EULER_GAMMA = 0.5772156649015329


class TestFormFactor:
    def test_unit_at_zero(self):
        for d in range(2, 17):
            assert abs(f_exact(d, 0.0) - 1.0) < 1e-12

    def test_small_alpha_expansion(self):
        a = 1e-3
        for d in (2, 4, 8, 16):
            assert abs(f_exact(d, a) - (1 - (d + 1) * a * a)) < 1e-8

    def test_matches_degree_ten_polynomial(self):
        for a in np.linspace(0.0, 3.0, 91):
            assert abs(f_exact(4, float(a)) - f4_polynomial(float(a))) < 1e-10

    def test_value_at_one(self):
        # -22.5/36 * e^-1, cross-checked against a GUE Monte Carlo below
        assert abs(f_exact(4, 1.0) - (-22.5 / 36.0 * math.exp(-1.0))) < 1e-12

    def test_gue_monte_carlo(self):
        n = 60_000
        ev = np.linalg.eigvalsh(gue_batch(Seed(31).rng(), n, 4))
        for a in (0.1, 0.5, 1.0, 1.7):
            z = np.exp(1j * a * ev).sum(axis=1)
            est = ((z * z.conj()).real - 4.0) / 12.0
            se = est.std(ddof=1) / math.sqrt(n)
            assert abs(est.mean() - f_exact(4, a)) < 5 * se

    def test_ansatz_accuracy(self):
        # the exp(-(d+1) a^2) ansatz tracks f_4 to 0.01 up to a ~ 0.22 and to
        # 0.026 at a = 0.3 (the drift grows like the a^4 term it drops)
        assert abs(f_approx(4, 0.0) - 1.0) < 1e-12
        assert abs(f_approx(4, 0.1) - math.exp(-0.05)) < 1e-12
        for a in np.linspace(0.0, 0.22, 23):
            assert abs(f_exact(4, float(a)) - f_approx(4, float(a))) < 0.01
        for a in np.linspace(0.22, 0.3, 9):
            assert abs(f_exact(4, float(a)) - f_approx(4, float(a))) < 0.026

    def test_dimension_limits(self):
        with pytest.raises(ValueError):
            f_exact(17, 0.1)
        with pytest.raises(ValueError):
            f_exact(1, 0.1)


class TestSwapOmission:
    def test_endpoints(self):
        assert swap_omission_prob(0.0) == 0.0
        assert abs(swap_omission_prob(1e6) - 0.5) < 1e-12

    def test_sigma_one(self):
        assert abs(swap_omission_prob(1.0) - 0.49640) < 5e-6

    def test_inverse(self):
        for p in (0.0, 0.01, 0.1, 0.3, 0.49):
            assert abs(swap_omission_prob(pulse_sigma(p)) - p) < 1e-12


class TestDeltaFormula:
    def test_p_zero_all_modes(self):
        grid = Architecture.grid(3, 3)
        cases = [(FC, 8, analytics.EXACT_FC), (FC, 8, analytics.ASYMPTOTIC_FC),
                 (LINE, 8, analytics.SPARSE_1D), (LINE, 8, analytics.OPTIMIZED_BOUND_1D),
                 (grid, 9, analytics.SPARSE_GRID), (grid, 9, analytics.OPTIMIZED_BOUND_GRID)]
        for arch, L, mode in cases:
            assert abs(delta_formula(arch, L, 0.0, mode) / 4.0**L - 1.0) < 1e-12

    def test_sparse_1d_value(self):
        got = delta_formula(LINE, 8, 0.01, analytics.SPARSE_1D)
        assert abs(got - 4.0**8 * math.exp(-0.75 * 0.01 * 14.0)) < 1e-6

    def test_asymptotic_close_to_exact(self):
        a = delta_formula(FC, 10, 0.02, analytics.ASYMPTOTIC_FC)
        b = delta_formula(FC, 10, 0.02, analytics.EXACT_FC)
        assert abs(a / b - 1.0) < 0.02

    def test_grid_two_dim_rate(self):
        grid = Architecture.grid(4, 4)
        got = delta_formula(grid, 16, 0.01, analytics.SPARSE_GRID)
        assert abs(got - 4.0**16 * math.exp(-9.0 / 8.0 * 0.01 * 16**1.5)) < 1e-3 * 4.0**16

    def test_optimized_bound_rates(self):
        got = delta_formula(LINE, 8, 0.01, analytics.OPTIMIZED_BOUND_1D)
        assert abs(got / (4.0**8 * math.exp(-0.01 * 8 * 6 / 8.0)) - 1.0) < 1e-12
        grid = Architecture.grid(4, 4)
        got = delta_formula(grid, 16, 0.01, analytics.OPTIMIZED_BOUND_GRID)
        assert abs(got / (4.0**16 * math.exp(-0.25 * 0.01 * 16**1.5)) - 1.0) < 1e-12

    def test_mode_arch_mismatch(self):
        with pytest.raises(ValueError):
            delta_formula(LINE, 8, 0.01, analytics.EXACT_FC)


class TestSolvableFidelity:
    def test_noiseless_is_one(self):
        for L in (2, 4, 8, 12):
            assert abs(solvable_fidelity(L, 5, 0.0, 4.0**L) - 1.0) < 1e-12

    def test_deep_circuit_floor(self):
        val = solvable_fidelity(4, 600, 0.3, 4.0**4)
        assert abs(val - 2.0**-4) < 1e-12

    def test_reference_point(self):
        # direct evaluation; cross-checked against solvable-model Monte Carlo
        assert abs(solvable_fidelity(4, 4, 0.1, 256.0) - 0.7557339102699518) < 1e-12

    def test_monotone_in_depth_alpha_p(self):
        vals = [solvable_fidelity(8, T, 0.1, 4.0**8) for T in range(1, 10)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
        vals = [solvable_fidelity(8, 4, a, 4.0**8) for a in np.linspace(0, 0.5, 21)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
        deltas = [delta_formula(FC, 8, p, analytics.EXACT_FC)
                  for p in np.linspace(0, 0.5, 21)]
        vals = [solvable_fidelity(8, 4, 0.0, d) for d in deltas]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_values_within_bounds(self):
        for L in (2, 4, 6):
            for a in (0.0, 0.2, 0.8, 1.5):
                for p in (0.0, 0.1, 0.5):
                    d = delta_formula(FC, L, p, analytics.EXACT_FC)
                    v = solvable_fidelity(L, 6, a, d)
                    assert 2.0**-L - 1e-12 <= v <= 1.0 + 1e-12

    def test_delta_out_of_range(self):
        with pytest.raises(ValueError):
            solvable_fidelity(4, 4, 0.1, 0.0)
        with pytest.raises(ValueError):
            solvable_fidelity(4, 4, 0.1, 4.0**4 + 1)


class TestAsymptotic:
    def test_noiseless(self):
        assert asymptotic_fidelity(8, 8, 0.0, 0.0, 1) == 1.0

    def test_gate_only(self):
        got = asymptotic_fidelity(8, 8, 0.05, 0.0, 1)
        assert abs(got - math.exp(-15 / 8 * 0.0025 * 64)) < 1e-12

    def test_perm_only_two_dim(self):
        got = asymptotic_fidelity(16, 4, 0.0, 0.01, 2)
        assert abs(got - math.exp(-9 / 8 * 0.01 * 4 * 16**1.5)) < 1e-12


class TestBrickwallSeries:
    def test_alpha_zero(self):
        assert brickwall_fidelity_perturbative(8, 8, 0.0) == 1.0

    def test_catalan_and_boundary_sequences(self):
        assert [_catalan(m) for m in (1, 2, 3, 4)] == [1, 2, 5, 14]
        assert [_boundary_count(l) for l in range(5)] == [1, 3, 10, 35, 126]

    def test_matches_hypergeometric_closed_form(self):
        for T in (2, 3, 4, 6, 8, 12, 16, 24, 40, 60):
            got = brickwall_deficit_coefficient(8, T)
            ref = brickwall_deficit_hypergeometric(8, T)
            assert abs(got - ref) < 1e-8 * max(1.0, ref)

    def test_asymptotic_rate(self):
        # deficit approaches (15/8) L T - (5/6) L as the depth grows
        got = brickwall_deficit_coefficient(8, 200)
        assert abs(got - (15 / 8 * 8 * 200 - 5 / 6 * 8)) < 1e-9

    def test_finite_size_term_bounded(self):
        for T in range(2, 64):
            coeff = brickwall_deficit_coefficient(8, T)
            fin = 15 / 8 * 8 * T - coeff     # positive finite-size correction
            assert 0.0 < fin <= 5 / 6 * 8 + 1e-9

    def test_depth_guard(self):
        with pytest.raises(ValueError):
            brickwall_fidelity_perturbative(8, 1, 0.1)


class TestHeavyOutputMap:
    def test_equal_h_gives_unity(self):
        assert fidelity_from_heavy_output(0.85, 0.85, 8) == 1.0

    def test_half_gives_floor(self):
        for L in (4, 10):
            assert abs(fidelity_from_heavy_output(0.5, 0.85, L) - 2.0**-L) < 1e-12

    def test_affine_slope(self):
        L, h = 6, 0.84
        s = (1 - 2.0**-L) / (h - 0.5)
        f1 = fidelity_from_heavy_output(0.6, h, L)
        f2 = fidelity_from_heavy_output(0.7, h, L)
        assert abs((f2 - f1) / 0.1 - s) < 1e-12

    def test_threshold_fidelity_value(self):
        # 2/3 against the ideal asymptote, deep in the many-qubit regime;
        # exactly 1/(3 ln 2) = 0.4809 in the large-L limit
        got = fidelity_from_heavy_output(2 / 3, 0.85, 30)
        assert abs(got - 0.479) < 5e-3
        got = qv_threshold_fidelity(30)
        assert abs(got - 1 / (3 * math.log(2))) < 1e-9

    def test_h_ideal_guard(self):
        with pytest.raises(ValueError):
            fidelity_from_heavy_output(0.4, 0.5, 4)


class TestQvContour:
    def test_p_zero_arch_independent(self):
        grid = [0.0, 0.002, 0.004]
        fc = qv_contour(4, 4, FC, grid)
        line = qv_contour(4, 4, LINE, grid)
        assert abs(fc[0][1] - line[0][1]) < 2e-6

    def test_root_solves_threshold(self):
        pts = qv_contour(4, 4, FC, [0.0, 0.01])
        fstar = qv_threshold_fidelity(4)
        for p, a in pts:
            if a > 0:
                d = delta_formula(FC, 4, p, analytics.EXACT_FC)
                assert abs(solvable_fidelity(4, 4, a, d) - fstar) < 1e-5

    def test_boundary_point_at_large_p(self):
        pts = qv_contour(4, 4, LINE, [0.3])
        assert pts[0][1] == 0.0

    def test_contour_shrinks_with_size(self):
        grid = [k * 0.004 for k in range(6)]
        small = dict(qv_contour(4, 4, FC, grid))
        large = dict(qv_contour(8, 8, FC, grid))
        for p in grid:
            assert large[p] <= small[p] + 1e-9

    def test_monotone_in_p(self):
        grid = [k * 0.004 for k in range(8)]
        pts = qv_contour(4, 4, FC, grid)
        alphas = [a for _, a in pts]
        assert all(b <= a + 1e-9 for a, b in zip(alphas, alphas[1:]))
