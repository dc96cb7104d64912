import math

import pytest
from hypothesis import given, strategies as st

from scamp.coherent import (
    VACUUM,
    CoherentAmplitude,
    Mixture,
    beamsplitter,
    mixture_fidelity,
    overlap_sq,
)

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
amplitudes = st.builds(CoherentAmplitude, finite, finite)


class TestCoherentAmplitude:
    def test_mean_photon_number(self):
        assert CoherentAmplitude(3.0, 4.0).mean_photon_number() == 25.0
        assert VACUUM.mean_photon_number() == 0.0

    def test_from_mean_photons(self):
        a = CoherentAmplitude.from_mean_photons(0.25)
        assert math.isclose(a.mean_photon_number(), 0.25, rel_tol=1e-15)
        with pytest.raises(ValueError):
            CoherentAmplitude.from_mean_photons(-0.1)

    @given(amplitudes, st.floats(min_value=-10.0, max_value=10.0, allow_nan=False))
    def test_rotation_preserves_mean_photons(self, a, theta):
        assert math.isclose(
            a.rotated(theta).mean_photon_number(),
            a.mean_photon_number(),
            rel_tol=1e-12,
            abs_tol=1e-12,
        )


class TestOverlap:
    def test_identical_states(self):
        assert overlap_sq(VACUUM, VACUUM) == 1.0
        a = CoherentAmplitude(1.3, -0.2)
        assert overlap_sq(a, a) == 1.0

    def test_vacuum_against_unit_amplitude(self):
        assert overlap_sq(VACUUM, CoherentAmplitude(1.0)) == pytest.approx(
            0.36787944117144233, abs=1e-15
        )

    def test_vacuum_benchmark_two_fold_gain(self):
        # alpha^2 = 0.25 amplified by g^2 = 2: vacuum still overlaps > 0.6
        target = CoherentAmplitude.from_mean_photons(2.0 * 0.25)
        f = overlap_sq(VACUUM, target)
        assert f == pytest.approx(0.6065306597126334, abs=1e-15)
        assert f > 0.6

    @given(amplitudes, amplitudes)
    def test_symmetric_and_bounded(self, a, b):
        f = overlap_sq(a, b)
        assert f == overlap_sq(b, a)
        assert 0.0 < f <= 1.0

    @given(amplitudes, amplitudes, st.floats(min_value=-7.0, max_value=7.0, allow_nan=False))
    def test_invariant_under_common_rotation(self, a, b, theta):
        assert math.isclose(
            overlap_sq(a.rotated(theta), b.rotated(theta)),
            overlap_sq(a, b),
            rel_tol=1e-12,
            abs_tol=1e-12,
        )


class TestBeamsplitter:
    def test_even_split_of_single_input(self):
        halves = math.sqrt(0.5)
        retained, monitor = beamsplitter(CoherentAmplitude(1.0), VACUUM, halves, halves)
        assert monitor.re == pytest.approx(halves, abs=1e-15)
        assert retained.re == pytest.approx(halves, abs=1e-15)

    def test_matched_guess_interferes_destructively(self):
        # guess (t/r)*a nulls the monitor port and leaves a/r retained
        t, r = math.sqrt(0.3), math.sqrt(0.7)
        a = CoherentAmplitude(0.8, 0.1)
        guess = a.scaled(t / r)
        retained, monitor = beamsplitter(a, guess, t, r)
        assert abs(monitor.to_complex()) < 1e-15
        assert retained.to_complex() == pytest.approx(a.to_complex() / r, abs=1e-12)

    def test_opposite_inputs_at_even_splitter(self):
        # the wrong-guess branch of the two-state set
        halves = math.sqrt(0.5)
        a = CoherentAmplitude(0.6)
        retained, monitor = beamsplitter(a, a.scaled(-1.0), halves, halves)
        assert monitor.to_complex() == pytest.approx(math.sqrt(2.0) * 0.6, abs=1e-12)
        assert abs(retained.to_complex()) < 1e-15

    def test_rejects_non_unitary_pair(self):
        with pytest.raises(ValueError):
            beamsplitter(VACUUM, VACUUM, 0.9, 0.5)
        with pytest.raises(ValueError):
            beamsplitter(VACUUM, VACUUM, -0.6, 0.8)

    @given(amplitudes, amplitudes, st.floats(min_value=1e-6, max_value=1.0 - 1e-6))
    def test_energy_conservation(self, a, b, t_sq):
        t, r = math.sqrt(t_sq), math.sqrt(1.0 - t_sq)
        retained, monitor = beamsplitter(a, b, t, r)
        before = a.mean_photon_number() + b.mean_photon_number()
        after = retained.mean_photon_number() + monitor.mean_photon_number()
        assert math.isclose(before, after, rel_tol=1e-12, abs_tol=1e-12)


class TestMixture:
    def test_rejects_empty_and_negative(self):
        with pytest.raises(ValueError):
            Mixture(())
        with pytest.raises(ValueError):
            Mixture(((-0.1, VACUUM), (1.1, VACUUM)))

    def test_normalization(self):
        m = Mixture(((2.0, VACUUM), (2.0, CoherentAmplitude(1.0))))
        assert not m.is_normalized()
        assert m.normalized().is_normalized()
        assert m.normalized().weights() == (0.5, 0.5)

    def test_fidelity_of_pure_target(self):
        target = CoherentAmplitude(1.2, 0.3)
        assert mixture_fidelity(Mixture.single(target), target) == 1.0

    def test_fidelity_with_vacuum_admixture(self):
        # 0.9 on the target (g^2 alpha^2 = 0.9) plus 0.1 vacuum
        target = CoherentAmplitude.from_mean_photons(0.9)
        m = Mixture(((0.9, target), (0.1, VACUUM)))
        assert mixture_fidelity(m, target) == pytest.approx(0.9406569659740599, abs=1e-15)

    def test_fidelity_of_opposite_phase_pair(self):
        target = CoherentAmplitude.from_mean_photons(0.9)
        m = Mixture(((0.5, target), (0.5, target.scaled(-1.0))))
        # |g a - (-g a)|^2 = 4 g^2 a^2 = 3.6
        assert mixture_fidelity(m, target) == pytest.approx(0.5136618612236463, abs=1e-14)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            mixture_fidelity(Mixture(((0.7, VACUUM),)), VACUUM)

    @given(
        st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
        amplitudes,
        amplitudes,
        amplitudes,
    )
    def test_affine_in_weights(self, lam, a1, a2, target):
        m1 = Mixture.single(a1)
        m2 = Mixture.single(a2)
        blended = Mixture(((lam, a1), (1.0 - lam, a2)))
        expected = lam * mixture_fidelity(m1, target) + (1.0 - lam) * mixture_fidelity(m2, target)
        assert math.isclose(mixture_fidelity(blended, target), expected, rel_tol=1e-12, abs_tol=1e-12)
