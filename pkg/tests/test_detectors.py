import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from scamp.analysis import AnalysisConfig, count_probabilities
from scamp.coherent import CoherentAmplitude
from scamp.detectors import DetectorModel, click_probability, dark_prob_from_rate, sample_click

probs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestClickProbability:
    def test_dark_port(self):
        det = DetectorModel(efficiency=0.5)
        assert click_probability(0.0, det) == 0.0

    def test_dark_counts_only(self):
        det = DetectorModel(efficiency=0.5, dark_prob_per_gate=0.1)
        assert click_probability(0.0, det) == pytest.approx(0.1, abs=1e-15)

    def test_methods_efficiency_one_photon(self):
        det = DetectorModel(efficiency=0.405)
        assert click_probability(1.0, det) == pytest.approx(0.3330231891415256, abs=1e-15)

    def test_rejects_negative_mean(self):
        with pytest.raises(ValueError):
            click_probability(-1e-9, DetectorModel.ideal())

    def test_saturates_at_one(self):
        det = DetectorModel(efficiency=0.405, loss_transmission=0.7)
        assert click_probability(1e6, det) == pytest.approx(1.0, abs=1e-12)

    @given(
        st.floats(min_value=0.0, max_value=50.0, allow_nan=False),
        st.floats(min_value=0.01, max_value=1.0),
        st.floats(min_value=0.01, max_value=1.0),
    )
    def test_loss_lumping_is_equivalent(self, n, eta, loss):
        # attenuating the field then detecting == detecting with eta*l
        lumped = DetectorModel(efficiency=eta * loss)
        split = DetectorModel(efficiency=eta, loss_transmission=loss)
        attenuated = DetectorModel(efficiency=eta)
        p_split = click_probability(n, split)
        assert math.isclose(p_split, click_probability(n, lumped), rel_tol=1e-12, abs_tol=1e-15)
        assert math.isclose(p_split, click_probability(loss * n, attenuated), rel_tol=1e-12, abs_tol=1e-15)

    def test_monotone_in_everything(self):
        grid = np.linspace(0.0, 3.0, 7)
        base = dict(efficiency=0.4, loss_transmission=0.8, dark_prob_per_gate=0.01)
        p_n = [click_probability(n, DetectorModel(**base)) for n in grid]
        assert all(b >= a for a, b in zip(p_n, p_n[1:]))
        for key in base:
            values = []
            for x in np.linspace(0.05, 0.95, 7):
                values.append(click_probability(1.0, DetectorModel(**{**base, key: x})))
            assert all(b >= a for a, b in zip(values, values[1:]))

    def test_reduces_to_analyzer_bright_port_term(self):
        # d = 0, l = 1: identical, term for term, to the analyzer's signal row
        det = DetectorModel(efficiency=0.405)
        ref = CoherentAmplitude.from_mean_photons(0.9)
        cfg = AnalysisConfig(reference_amplitude=ref, epsilon=0.0, detector=det)
        assert count_probabilities(ref, cfg).p10 == click_probability(2.0 * 0.9, det)


class TestDetectorModel:
    def test_validation(self):
        with pytest.raises(ValueError):
            DetectorModel(efficiency=1.2)
        with pytest.raises(ValueError):
            DetectorModel(efficiency=0.5, dark_prob_per_gate=-0.1)

    def test_ideal(self):
        det = DetectorModel.ideal()
        assert det.eta_l() == 1.0 and det.dark_prob_per_gate == 0.0


class TestDarkProbFromRate:
    def test_raw_window_arithmetic(self):
        # 296 cps in a 4 ns window
        assert dark_prob_from_rate(296.0, 4e-9) == pytest.approx(1.184e-6, rel=1e-15)

    def test_zero_rate(self):
        assert dark_prob_from_rate(0.0, 4e-9) == 0.0

    def test_post_gating_budget(self):
        # 3% of the background survives gating; per pulse at 1 MHz
        assert dark_prob_from_rate(296.0, 1e-6, 0.03) == pytest.approx(8.88e-6, rel=1e-15)

    def test_clamped_to_unity(self):
        assert dark_prob_from_rate(1e12, 1.0) == 1.0

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            dark_prob_from_rate(-1.0, 1e-9)
        with pytest.raises(ValueError):
            dark_prob_from_rate(296.0, 0.0)
        with pytest.raises(ValueError):
            dark_prob_from_rate(296.0, 1e-9, 1.5)


class TestSampleClick:
    def test_degenerate_probabilities(self):
        rng = np.random.default_rng(0)
        assert not any(sample_click(0.0, rng) for _ in range(100))
        assert all(sample_click(1.0, rng) for _ in range(100))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            sample_click(1.5, np.random.default_rng(0))

    def test_reproducible_for_fixed_seed(self):
        draws = lambda: [sample_click(0.3, np.random.default_rng(123)) for _ in range(50)]
        assert draws() == draws()

    def test_empirical_mean_within_five_sigma(self):
        rng = np.random.default_rng(2024)
        n = 1_000_000
        hits = sum(sample_click(0.5, rng) for _ in range(n))
        sigma = math.sqrt(0.25 / n)
        assert abs(hits / n - 0.5) < 5.0 * sigma
