"""Unitary validation, angle wrapping, eigenphase extraction, Haar sampling."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qslmetrics.errors import EigenSolverFailure, NonSquare, NotUnitary
from qslmetrics.unitary_core import (
    ComplexMatrix,
    compose,
    eigenphases,
    haar_random_unitary,
    phase_shift,
    principal_phases_batch,
    relative_operator,
    sort_phases,
    unitarity_defect,
    validate_unitary,
    wrap_angle,
    wrap_angles,
)

PI = math.pi


class TestValidation:
    def test_rectangular_matrix_rejected(self):
        with pytest.raises(NonSquare):
            ComplexMatrix(np.ones((2, 3)))

    def test_nonfinite_entries_rejected(self):
        m = np.eye(2, dtype=complex)
        m[0, 1] = np.nan
        with pytest.raises(NonSquare):
            ComplexMatrix(m)

    def test_defect_is_frobenius_distance_of_gram_to_identity(self):
        # diag(2, 1): M^H M - I = diag(3, 0), Frobenius norm 3
        assert unitarity_defect(np.diag([2.0, 1.0])) == pytest.approx(3.0, rel=1e-14)

    def test_validate_accepts_true_unitary(self):
        u = haar_random_unitary(4, seed=1)
        assert u.unitarity_defect <= 4e-10

    def test_validate_rejects_contraction(self):
        with pytest.raises(NotUnitary) as exc:
            validate_unitary(0.5 * np.eye(2))
        assert exc.value.defect > exc.value.tol

    def test_matrix_entries_are_read_only(self):
        u = validate_unitary(np.eye(2))
        with pytest.raises(ValueError):
            u.entries[0, 0] = 5.0


class TestWrapAngle:
    def test_interior_values_unchanged(self):
        assert wrap_angle(0.7) == pytest.approx(0.7, abs=1e-15)
        assert wrap_angle(-3.0) == pytest.approx(-3.0, abs=1e-15)

    def test_boundary_goes_to_plus_pi(self):
        # the principal interval is (-pi, pi]
        assert wrap_angle(PI) == PI
        assert wrap_angle(-PI) == PI
        assert wrap_angle(3 * PI) == PI

    def test_multiple_turns(self):
        assert wrap_angle(0.3 + 8 * PI) == pytest.approx(0.3, abs=1e-12)
        assert wrap_angle(-0.3 - 8 * PI) == pytest.approx(-0.3, abs=1e-12)

    @given(st.floats(min_value=-50.0, max_value=50.0,
                     allow_nan=False, allow_infinity=False))
    @settings(max_examples=300, deadline=None)
    def test_always_lands_in_principal_interval(self, x):
        y = wrap_angle(x)
        assert -PI < y <= PI
        # wrapping preserves the angle modulo 2 pi
        assert math.isclose(math.cos(y), math.cos(x), abs_tol=1e-9)
        assert math.isclose(math.sin(y), math.sin(x), abs_tol=1e-9)

    def test_vector_form_matches_scalar(self):
        xs = np.array([0.0, PI, -PI, 4.5, -4.5, 100.0])
        np.testing.assert_allclose(
            wrap_angles(xs), [wrap_angle(x) for x in xs], atol=1e-15
        )


class TestEigenphases:
    def test_identity_gives_zeros(self):
        u = validate_unitary(np.eye(3))
        assert eigenphases(u).phases == (0.0, 0.0, 0.0)

    def test_minus_identity_uses_positive_boundary(self):
        u = validate_unitary(-np.eye(2))
        assert eigenphases(u).phases == (PI, PI)

    def test_diagonal_phases_recovered_in_canonical_order(self):
        u = validate_unitary(np.diag(np.exp(1j * np.array([0.5, -2.0, 1.0]))))
        got = eigenphases(u).phases
        assert got == pytest.approx((-2.0, 1.0, 0.5), abs=1e-14)

    def test_canonical_order_breaks_magnitude_ties_by_sign(self):
        u = validate_unitary(np.diag(np.exp(1j * np.array([-0.5, 0.5]))))
        assert eigenphases(u).phases == pytest.approx((0.5, -0.5), abs=1e-14)

    def test_phases_invariant_under_basis_change(self, rng):
        theta = np.array([0.3, -1.2, 2.9])
        d = np.diag(np.exp(1j * theta))
        w = haar_random_unitary(3, seed=33)
        conj = w.entries @ d @ w.entries.conj().T
        got = eigenphases(validate_unitary(conj)).phases
        want = eigenphases(validate_unitary(d)).phases
        assert got == pytest.approx(want, abs=1e-12)

    def test_batch_matches_single_as_multisets(self, rng):
        # the batch path skips the canonical sort; compare sorted values
        stack = np.stack([haar_random_unitary(3, seed=s).entries for s in range(8)])
        batch = principal_phases_batch(stack)
        for k in range(8):
            single = eigenphases(validate_unitary(stack[k])).phases
            assert sorted(batch[k]) == pytest.approx(sorted(single), abs=1e-12)

    def test_solver_failure_on_defective_input(self):
        # far from unitary: an eigenvalue of diag(2, 1) has modulus 2, but a
        # nilpotent block gives eigenvalue 0, which cannot be projected
        m = ComplexMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(EigenSolverFailure):
            eigenphases(m)

    def test_sort_phases_orders_by_decreasing_magnitude(self):
        got = sort_phases(np.array([0.1, -2.0, 1.5, -0.1]))
        assert tuple(got) == (-2.0, 1.5, 0.1, -0.1)


class TestOperators:
    def test_relative_operator_of_equal_inputs_is_identity(self):
        u = haar_random_unitary(3, seed=9)
        rel = relative_operator(u, u)
        np.testing.assert_allclose(rel.entries, np.eye(3), atol=1e-12)

    def test_compose_then_relative_cancels(self):
        u = haar_random_unitary(2, seed=4)
        v = haar_random_unitary(2, seed=5)
        uv = compose(u, v)
        back = relative_operator(uv, v)
        np.testing.assert_allclose(back.entries, u.entries, atol=1e-12)

    def test_phase_shift_moves_all_eigenphases(self):
        u = validate_unitary(np.diag(np.exp(1j * np.array([0.2, -0.4]))))
        shifted = phase_shift(u, 0.3)
        got = eigenphases(shifted).phases
        assert sorted(got) == pytest.approx([-0.1, 0.5], abs=1e-14)


class TestHaarSampling:
    def test_output_is_unitary(self):
        for n in (1, 2, 5, 8):
            u = haar_random_unitary(n, seed=7)
            assert u.unitarity_defect <= 1e-10 * n

    def test_seed_reproducibility(self):
        a = haar_random_unitary(4, seed=123)
        b = haar_random_unitary(4, seed=123)
        np.testing.assert_array_equal(a.entries, b.entries)
        c = haar_random_unitary(4, seed=124)
        assert not np.allclose(a.entries, c.entries)

    def test_eigenphase_distribution_is_symmetric(self):
        # Haar eigenphases are symmetric about zero; the sample mean of the
        # phase sum over many draws must be near zero
        total = 0.0
        count = 400
        for s in range(count):
            u = haar_random_unitary(3, seed=s)
            total += sum(eigenphases(u).phases)
        mean = total / count
        # each phase sum has std about pi, so the mean of 400 draws
        # concentrates within a few tenths
        assert abs(mean) < 0.35

    def test_first_column_is_uniform_on_sphere(self):
        # the squared modulus of the first component of a Haar column in
        # dimension 2 is uniform on [0, 1]; check the mean is near 1/2
        vals = []
        for s in range(300):
            u = haar_random_unitary(2, seed=1000 + s)
            vals.append(abs(u.entries[0, 0]) ** 2)
        assert abs(np.mean(vals) - 0.5) < 0.06
