"""Campaign-level checks: the comparison table, fuzz harnesses, structural oracles."""

import math

import numpy as np
import pytest

from qslmetrics.errors import OutOfRange
from qslmetrics.experiments import (
    TABLE1_P_VALUES,
    conjecture_fuzz,
    generator_consistency,
    generator_fuzz,
    large_n_limit_ratio,
    metric_axiom_fuzz,
    pseudo_oracle_fuzz,
    rearrangement_consistency,
    random_spectral_state,
    reproduce_table1,
    table1_max_deviation,
    table1_reference,
    three_level_state,
    triangle_fuzz,
    uniform_comb_ratio,
    uniform_comb_state,
)
from qslmetrics.unitary_core import haar_random_unitary

PI = math.pi


class TestComparisonTable:
    def test_reproduction_matches_reference_within_tolerance(self):
        rows = reproduce_table1()
        ref = table1_reference()
        assert table1_max_deviation(rows, ref) <= 5e-4

    def test_row_labels_and_shape(self):
        rows = reproduce_table1()
        assert len(rows) == 6
        for row in rows:
            assert set(row.ratios) == set(TABLE1_P_VALUES)
            for v in row.ratios.values():
                assert 0.0 < v <= 1.0 + 1e-12

    def test_exact_times_match_closed_forms(self):
        rows = {r.state_label: r for r in reproduce_table1()}
        assert rows["equal_pair"].tau_exact == pytest.approx(PI / 2, rel=1e-10)
        assert rows["three_level_beta_half"].tau_exact == pytest.approx(PI, rel=1e-10)
        assert rows["equal_triple"].tau_exact == pytest.approx(2 * PI / 3, rel=1e-10)

    def test_saturating_row_reaches_one_at_p1(self):
        rows = {r.state_label: r for r in reproduce_table1()}
        assert rows["three_level_saturating_p1"].ratios[1.0] == pytest.approx(
            1.0, abs=1e-9
        )

    def test_comb_row_converges_to_limit(self):
        for p in TABLE1_P_VALUES:
            lim = large_n_limit_ratio(p)
            assert abs(uniform_comb_ratio(p, 1000) - lim) <= 1e-2
            # convergence is monotone in n at this scale
            assert abs(uniform_comb_ratio(p, 200) - lim) >= abs(
                uniform_comb_ratio(p, 2000) - lim
            ) - 1e-6

    def test_state_builders_validate(self):
        with pytest.raises(OutOfRange):
            three_level_state(1.4)
        with pytest.raises(OutOfRange):
            uniform_comb_state(0)
        st = uniform_comb_state(3)
        assert len(st.energies) == 7
        assert sum(st.weights) == pytest.approx(1.0, abs=1e-12)


class TestFuzzHarnesses:
    def test_axiom_fuzz_clean_in_proved_regime(self):
        rep = metric_axiom_fuzz(3, (1.0, 1.5, 2.0), trials=400, seed=5)
        assert rep.violations == 0
        assert rep.max_triangle_slack <= 1e-9
        assert rep.max_symmetry_dev <= 1e-9
        assert rep.max_left_invariance_dev <= 1e-9
        assert rep.max_right_invariance_dev <= 1e-9

    def test_axiom_fuzz_rejects_sub_unit_exponent(self):
        with pytest.raises(OutOfRange):
            metric_axiom_fuzz(3, (0.5, 1.0), trials=10, seed=0)

    def test_conjecture_fuzz_clean_at_small_scale(self):
        rep = conjecture_fuzz(2, 0.5, None, trials=2000, seed=7)
        assert len(rep.violations) == 0
        assert rep.max_slack <= 1e-9

    def test_conjecture_fuzz_demands_sub_unit_exponent(self):
        with pytest.raises(OutOfRange):
            conjecture_fuzz(2, 1.2, None, trials=10, seed=0)

    def test_triangle_fuzz_seed_reproducibility(self):
        a = triangle_fuzz(3, 1.5, (1.0, 1.0, 1.0), 300, seed=9)
        b = triangle_fuzz(3, 1.5, (1.0, 1.0, 1.0), 300, seed=9)
        assert a.max_slack == b.max_slack

    def test_pseudo_oracle_fuzz_within_budget(self):
        rep = pseudo_oracle_fuzz(3, 1.5, None, trials=60, seed=3, grid_points=50_000)
        assert len(rep.violations) == 0
        assert rep.max_slack <= 1e-8

    def test_fuzz_report_serializes(self):
        rep = triangle_fuzz(2, 1.0, (1.0, 1.0), 50, seed=1)
        d = rep.to_dict()
        assert d["mode"] == "triangle"
        assert d["trials"] == 50
        assert d["violation_count"] == 0


class TestStructuralOracles:
    def test_rearrangement_exact_for_small_dimensions(self, rng):
        for n in (2, 3, 4, 5):
            phases = rng.uniform(-PI, PI, n)
            mu = rng.uniform(0.05, 1.05, n)
            rep = rearrangement_consistency(tuple(phases), tuple(mu), 1.3)
            assert rep.matches
            assert rep.sorted_value == pytest.approx(rep.brute_force_max, rel=1e-12)
            assert rep.permutations_checked == math.factorial(n)

    def test_rearrangement_rejects_large_dimension(self, rng):
        with pytest.raises(OutOfRange):
            rearrangement_consistency(tuple(rng.uniform(-1, 1, 7)), tuple(np.ones(7)), 1.0)

    def test_generator_never_undercuts_principal(self, rng):
        for trial in range(10):
            n = int(rng.integers(2, 5))
            u = haar_random_unitary(n, seed=300 + trial)
            v = haar_random_unitary(n, seed=400 + trial)
            mu = tuple(rng.uniform(0.05, 1.05, n))
            from qslmetrics.un_metrics import MetricSpec

            rep = generator_consistency(u, v, MetricSpec.of(mu, 2.0), k_range=2)
            assert rep.undercut <= 1e-9
            assert rep.exhaustive
            assert rep.branches_checked == 5 ** n

    def test_generator_fuzz_clean(self):
        rep = generator_fuzz(3, 2.0, (1.0, 0.7, 0.2), 40, seed=8, k_range=1)
        assert len(rep.violations) == 0

    def test_random_state_symmetric_mode_pairs_levels(self, rng):
        st = random_spectral_state(rng, 6, symmetric=True)
        e = np.array(st.energies)
        assert np.allclose(np.sort(e), -np.sort(-e)[::-1])
