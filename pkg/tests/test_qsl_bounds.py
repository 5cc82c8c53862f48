"""Speed-limit machinery: envelope constants, reference moments, bounds, passage times."""

import math

import numpy as np
import pytest

from qslmetrics.errors import DegenerateState, InvalidP, LengthMismatch, NeverAttained, OutOfRange
from qslmetrics.qsl_bounds import (
    SpectralState,
    amplitude_constant,
    critical_angle,
    dpe,
    fidelity_at,
    first_passage_time,
    magic_state,
    moment_ep,
    tau_c1,
    tau_c2,
)

PI = math.pi


def envelope_oracle(p, lo=1e-8, hi=40.0, coarse=2_000_000, fine=40_000):
    """Independent two-stage grid for sup over x of (1 - cos x)/x^p.

    The tight amplitude constant is exactly that supremum and the critical
    angle its argmax, so a dense scan plus a local rescan is an oracle that
    shares no code with the bisection implementation.
    """
    xs = np.linspace(lo, hi, coarse)
    vals = (1.0 - np.cos(xs)) / xs ** p
    k = int(np.argmax(vals))
    window = xs[max(k - 2, 0)], xs[min(k + 2, coarse - 1)]
    xs2 = np.linspace(window[0], window[1], fine)
    vals2 = (1.0 - np.cos(xs2)) / xs2 ** p
    k2 = int(np.argmax(vals2))
    return float(xs2[k2]), float(vals2[k2])


class TestSpectralState:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(OutOfRange):
            SpectralState((0.0, 1.0), (0.7, 0.7))

    def test_lengths_must_agree(self):
        with pytest.raises(LengthMismatch):
            SpectralState((0.0, 1.0, 2.0), (0.5, 0.5))

    def test_negative_weight_rejected(self):
        with pytest.raises(OutOfRange):
            SpectralState((0.0, 1.0), (1.5, -0.5))


class TestEnvelopeConstants:
    def test_p2_closed_form(self):
        c = amplitude_constant(2.0)
        assert c.a_p == pytest.approx(0.5, abs=1e-15)
        assert c.x_c == 0.0

    def test_near_two_band_collapses_to_limit(self):
        c = amplitude_constant(2.0 - 1e-7)
        assert c.x_c == 0.0
        assert c.a_p == pytest.approx(0.5, abs=1e-12)

    def test_critical_exponent_gives_half_pi_angle(self):
        got = critical_angle(PI / 2)
        assert got == pytest.approx(PI / 2, abs=1e-11)
        c = amplitude_constant(PI / 2)
        assert c.a_p == pytest.approx((PI / 2) ** (-PI / 2), rel=1e-12)

    def test_p1_against_grid_oracle(self):
        x_oracle, a_oracle = envelope_oracle(1.0)
        assert critical_angle(1.0) == pytest.approx(x_oracle, abs=1e-6)
        assert amplitude_constant(1.0).a_p == pytest.approx(a_oracle, rel=1e-10)

    def test_generic_exponents_against_grid_oracle(self):
        for p in (0.3, 0.7, 1.3, 1.9):
            x_oracle, a_oracle = envelope_oracle(p)
            assert critical_angle(p) == pytest.approx(x_oracle, abs=1e-5)
            assert amplitude_constant(p).a_p == pytest.approx(a_oracle, rel=1e-9)

    def test_out_of_range_exponents_rejected(self):
        with pytest.raises(OutOfRange):
            critical_angle(2.5)
        with pytest.raises(OutOfRange):
            critical_angle(0.0)

    def test_envelope_inequality_pointwise(self, rng):
        # the defining property: cos x >= 1 - A_p |x|^p everywhere
        xs = np.concatenate([
            rng.uniform(-50.0, 50.0, 200_000),
            rng.uniform(-1e-3, 1e-3, 20_000),
        ])
        for p in (0.5, 1.0, PI / 2, 1.9, 2.0):
            a_p = amplitude_constant(p).a_p
            slack = np.cos(xs) - (1.0 - a_p * np.abs(xs) ** p)
            assert slack.min() >= -1e-12

    def test_envelope_touches_at_critical_angle(self):
        for p in (0.5, 1.0, 1.4):
            c = amplitude_constant(p)
            touch = math.cos(c.x_c) - (1.0 - c.a_p * c.x_c ** p)
            assert abs(touch) <= 1e-12


class TestReferenceMoment:
    def test_moment_shifts_with_reference(self):
        s = SpectralState((0.0, 2.0), (0.5, 0.5))
        assert moment_ep(s, 1.0, 0.0) == pytest.approx(1.0)
        assert moment_ep(s, 1.0, 1.0) == pytest.approx(1.0)
        assert moment_ep(s, 2.0, 1.0) == pytest.approx(1.0)
        assert moment_ep(s, 2.0, 0.0) == pytest.approx(2.0)

    def test_p2_minimizer_is_weighted_mean(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 7))
            e = rng.uniform(-3.0, 3.0, n)
            w = rng.dirichlet(np.ones(n))
            s = SpectralState(tuple(e), tuple(w))
            value, ref = dpe(s, 2.0)
            mean = float(np.sum(w * e))
            assert ref == pytest.approx(mean, abs=1e-12)
            assert value == pytest.approx(
                math.sqrt(float(np.sum(w * (e - mean) ** 2))), rel=1e-12
            )

    def test_p1_minimizer_is_weighted_median(self):
        s = SpectralState((0.0, -1.0, 1.0), (0.5, 0.25, 0.25))
        value, ref = dpe(s, 1.0)
        assert ref == 0.0
        assert value == pytest.approx(0.5, rel=1e-14)

    def test_p1_exact_tie_takes_midpoint(self):
        s = SpectralState((-1.0, 1.0), (0.5, 0.5))
        value, ref = dpe(s, 1.0)
        assert ref == pytest.approx(0.0, abs=1e-14)
        assert value == pytest.approx(1.0, rel=1e-14)

    def test_generic_p_against_dense_grid(self, rng):
        for _ in range(12):
            n = int(rng.integers(2, 6))
            e = np.sort(rng.uniform(-2.0, 2.0, n))
            w = rng.dirichlet(np.ones(n))
            s = SpectralState(tuple(e), tuple(w))
            for p in (1.3, 1.7, 2.6):
                value, ref = dpe(s, p)
                xs = np.linspace(e[0], e[-1], 200_001)
                grid = np.sum(
                    w[None, :] * np.abs(e[None, :] - xs[:, None]) ** p, axis=1
                ) ** (1.0 / p)
                assert value <= grid.min() + 1e-9
                assert abs(value - grid.min()) <= 1e-6

    def test_sub_unit_minimizer_sits_on_a_level(self, rng):
        for _ in range(15):
            n = int(rng.integers(2, 6))
            e = rng.uniform(-2.0, 2.0, n)
            w = rng.dirichlet(np.ones(n))
            s = SpectralState(tuple(e), tuple(w))
            value, ref = dpe(s, 0.6)
            assert min(abs(ref - x) for x in e) <= 1e-14
            # no off-level point may do better
            xs = np.linspace(e.min() - 0.5, e.max() + 0.5, 50_001)
            grid = np.sum(
                w[None, :] * np.abs(e[None, :] - xs[:, None]) ** 0.6, axis=1
            ) ** (1.0 / 0.6)
            assert value <= grid.min() + 1e-9

    def test_dpe_never_exceeds_reference_zero_moment(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 7))
            e = rng.uniform(-2.0, 2.0, n)
            w = rng.dirichlet(np.ones(n))
            s = SpectralState(tuple(e), tuple(w))
            p = float(rng.uniform(0.2, 2.5))
            value, _ = dpe(s, p)
            assert value <= moment_ep(s, p, 0.0) ** (1.0 / p) + 1e-12


class TestBounds:
    def test_equal_pair_p1_bound_is_inverse_amplitude(self):
        # moment and optimized deviation both equal the level magnitude
        s = SpectralState((-1.0, 1.0), (0.5, 0.5))
        a1 = amplitude_constant(1.0).a_p
        assert tau_c1(s, 1.0, 0.0) == pytest.approx(1.0 / a1, rel=1e-12)
        rep = tau_c2(s, 1.0, 0.0)
        assert rep.tau_c2 == pytest.approx(1.0 / a1, rel=1e-12)

    def test_epsilon_one_gives_zero_bounds(self):
        s = SpectralState((-1.0, 1.0), (0.5, 0.5))
        assert tau_c1(s, 1.0, 1.0) == 0.0
        rep = tau_c2(s, 1.0, 1.0)
        assert rep.tau_c2 == 0.0

    def test_second_bound_dominates_first(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 7))
            e = rng.uniform(-2.0, 2.0, n)
            w = rng.dirichlet(np.ones(n))
            s = SpectralState(tuple(e), tuple(w))
            p = float(rng.uniform(0.2, 2.0))
            eps = float(rng.uniform(0.0, 0.9))
            rep = tau_c2(s, p, eps)
            assert rep.tau_c2 >= rep.tau_c1 - 1e-12
            assert rep.tau_c1 == pytest.approx(tau_c1(s, p, eps), rel=1e-12)

    def test_phase_cap_from_spread_bound(self, rng):
        # the optimized bound times the deviation never exceeds hbar pi/2
        for _ in range(50):
            n = int(rng.integers(2, 7))
            e = rng.uniform(-2.0, 2.0, n)
            w = rng.dirichlet(np.ones(n))
            s = SpectralState(tuple(e), tuple(w))
            p = float(rng.uniform(0.2, 2.0))
            rep = tau_c2(s, p, 0.0)
            assert rep.tau_c2 * rep.dpe <= PI / 2 + 1e-12

    def test_degenerate_spectrum_raises_below_epsilon_one(self):
        # equal levels kill the optimized deviation but not the raw moment
        s = SpectralState((0.7, 0.7), (0.5, 0.5))
        with pytest.raises(DegenerateState):
            tau_c2(s, 1.0, 0.0)
        assert tau_c1(s, 1.0, 0.25) > 0.0
        # an all-zero spectrum kills the raw moment as well
        z = SpectralState((0.0, 0.0), (0.5, 0.5))
        with pytest.raises(DegenerateState):
            tau_c1(z, 1.0, 0.25)

    def test_report_carries_phase_angles_and_tightness_flag(self):
        s = SpectralState((-1.0, 1.0), (0.5, 0.5))
        rep = tau_c2(s, 1.0, 0.0, hbar=2.0)
        assert rep.hbar == 2.0
        assert rep.tight is True
        want = tuple(e * rep.tau_c2 / 2.0 for e in (-1.0, 1.0))
        assert rep.phase_angles == pytest.approx(want, rel=1e-12)
        loose = tau_c2(s, 1.8, 0.0)
        assert loose.tight is False

    def test_hbar_scales_linearly(self):
        s = SpectralState((-1.0, 1.0), (0.5, 0.5))
        base = tau_c2(s, 1.3, 0.1, hbar=1.0).tau_c2
        doubled = tau_c2(s, 1.3, 0.1, hbar=2.0).tau_c2
        assert doubled == pytest.approx(2 * base, rel=1e-12)


class TestMagicStates:
    def test_p1_construction_matches_closed_form(self):
        c = amplitude_constant(1.0)
        st = magic_state(1.0, 0.0, 1.0)
        beta = 1.0 / (c.a_p * c.x_c)
        assert st.weights == pytest.approx((1 - beta, beta / 2, beta / 2), rel=1e-12)
        assert st.energies == (0.0, -1.0, 1.0)

    def test_epsilon_scales_occupation_down(self):
        st0 = magic_state(1.0, 0.0, 1.0)
        st1 = magic_state(1.0, 0.64, 1.0)
        assert st1.weights[1] < st0.weights[1]
        # occupation scales by 1 - sqrt(eps)
        ratio = st1.weights[1] / st0.weights[1]
        assert ratio == pytest.approx(1 - math.sqrt(0.64), rel=1e-12)

    def test_infeasible_exponent_rejected(self):
        with pytest.raises(InvalidP):
            magic_state(1.9, 0.0, 1.0)

    def test_above_critical_exponent_needs_large_epsilon(self):
        # occupation exceeds 1 at epsilon = 0 for every p above the critical
        # exponent; a large enough target fidelity shrinks it back into range
        with pytest.raises(InvalidP):
            magic_state(1.7, 0.0, 1.0)
        st = magic_state(1.7, 0.5, 1.0)
        assert sum(st.weights) == pytest.approx(1.0, abs=1e-12)
        assert 0.0 < st.weights[1] < 0.5

    def test_saturation_of_both_bounds(self):
        # the designed state makes both bounds coincide with the passage time
        for p in (0.5, 1.0, PI / 2):
            st = magic_state(p, 0.0, 1.0)
            rep = tau_c2(st, p, 0.0)
            tstar = first_passage_time(st, 0.0)
            assert rep.tau_c1 == pytest.approx(tstar, rel=1e-9)
            assert rep.tau_c2 == pytest.approx(tstar, rel=1e-9)


class TestFidelityAndPassage:
    def test_fidelity_at_time_zero_is_one(self):
        s = SpectralState((0.0, 1.5), (0.4, 0.6))
        assert fidelity_at(s, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_fidelity_closed_form_two_levels(self):
        # amplitude 0.4 + 0.6 e^{-i 1.5 t}; squared modulus by hand
        s = SpectralState((0.0, 1.5), (0.4, 0.6))
        for t in (0.3, 1.0, 2.7):
            want = 0.4 ** 2 + 0.6 ** 2 + 2 * 0.4 * 0.6 * math.cos(1.5 * t)
            assert fidelity_at(s, t) == pytest.approx(want, rel=1e-12)

    def test_equal_pair_crosses_at_quarter_period(self):
        s = SpectralState((-1.0, 1.0), (0.5, 0.5))
        assert first_passage_time(s, 0.0) == pytest.approx(PI / 2, rel=1e-11)
        # cos^2 t = 1/2 first at pi/4
        assert first_passage_time(s, 0.5) == pytest.approx(PI / 4, rel=1e-11)

    def test_equal_triple_crossing(self):
        s = SpectralState((0.0, -1.0, 1.0), (1 / 3, 1 / 3, 1 / 3))
        # amplitude (1 + 2 cos t)/3 vanishes first at 2 pi/3
        assert first_passage_time(s, 0.0) == pytest.approx(2 * PI / 3, rel=1e-11)

    def test_tangency_detected_at_half_occupation(self):
        # amplitude 1/2 + cos(t)/2 touches zero exactly at t = pi
        s = SpectralState((0.0, -1.0, 1.0), (0.5, 0.25, 0.25))
        got = first_passage_time(s, 0.0)
        assert got == pytest.approx(PI, rel=1e-11)
        assert fidelity_at(s, got) <= 1e-20

    def test_hbar_rescales_passage_time(self):
        s = SpectralState((-1.0, 1.0), (0.5, 0.5))
        assert first_passage_time(s, 0.0, hbar=3.0) == pytest.approx(
            3 * PI / 2, rel=1e-11
        )

    def test_single_level_never_attains(self):
        s = SpectralState((1.0,), (1.0,))
        with pytest.raises(NeverAttained) as exc:
            first_passage_time(s, 0.5)
        assert exc.value.scanned_min >= 0.999

    def test_dominant_weight_never_attains_zero(self):
        # amplitude is bounded below by 2 w_max - 1 = 0.6
        s = SpectralState((0.0, 1.0, 2.3), (0.8, 0.1, 0.1))
        with pytest.raises(NeverAttained) as exc:
            first_passage_time(s, 0.0)
        assert exc.value.scanned_min >= 0.6 ** 2 - 1e-9
        assert exc.value.horizon > 0

    def test_passage_time_is_first_not_any(self):
        # fidelity of the equal pair re-attains 0.5 many times; the scan must
        # return the earliest crossing even though later ones exist
        s = SpectralState((-1.0, 1.0), (0.5, 0.5))
        t = first_passage_time(s, 0.5)
        assert t < PI / 2

    def test_bound_chain_on_passage(self, rng):
        for _ in range(25):
            n = int(rng.integers(2, 6))
            e = rng.uniform(-2.0, 2.0, n)
            w = rng.dirichlet(np.ones(n))
            s = SpectralState(tuple(e), tuple(w))
            p = float(rng.uniform(0.3, 2.0))
            rep = tau_c2(s, p, 0.5)
            try:
                tstar = first_passage_time(s, 0.5)
            except NeverAttained:
                continue
            assert tstar >= rep.tau_c2 - 1e-9
