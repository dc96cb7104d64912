"""Simulator and analysis toolkit for a coherent-state comparison amplifier.

The device interferes an unknown coherent state from a known phase-symmetric
set with a guessed set member at a comparison beamsplitter, taps the
retained beam onto a photon-subtraction detector, and accepts the output
when the comparison detector stays silent while the subtraction detector
fires.  This package computes the conditioned output state and its figures
of merit both in closed form and by seeded Monte Carlo, and implements the
count-based estimator that reconstructs the output fidelity from
interferometric click records.
"""

from .coherent import (
    VACUUM,
    CoherentAmplitude,
    Mixture,
    beamsplitter,
    mixture_fidelity,
    overlap_sq,
)
from .detectors import DetectorModel, click_probability, dark_prob_from_rate, sample_click
from .amplifier import (
    AmplifierConfig,
    BranchOutcome,
    Conditioning,
    FiguresOfMerit,
    StateSet,
    acceptance_weight,
    enumerate_branches,
    figures_of_merit,
    nominal_gain,
    output_mixture,
    success_probability,
    success_rate,
)
from .analysis import (
    AnalysisConfig,
    CountProbabilities,
    CountTable,
    count_probabilities,
    estimate_class_pulse_numbers,
    estimate_fidelity,
    estimate_pulse_numbers,
    expected_counts,
    reconstruct_density,
    visibility,
)
from .montecarlo import (
    DetectorBank,
    RunSpec,
    TallyTable,
    conditioned_class_totals,
    conditioned_counts,
    counts_by_offset,
    detector_marginals,
    mc_visibility,
    phase_scan,
    simulate_run,
    standard_error,
)
from .sweep import Dataset, SweepSpec, reproduce_figure, run_estimator, run_sweep
from .errors import (
    ConfigError,
    InsufficientSignalError,
    InvalidEpsilonError,
    NeverHeraldedError,
)
from . import params

__version__ = "0.1.0"

__all__ = [
    "AmplifierConfig",
    "AnalysisConfig",
    "BranchOutcome",
    "CoherentAmplitude",
    "ConfigError",
    "Conditioning",
    "CountProbabilities",
    "CountTable",
    "Dataset",
    "DetectorBank",
    "DetectorModel",
    "FiguresOfMerit",
    "InsufficientSignalError",
    "InvalidEpsilonError",
    "Mixture",
    "NeverHeraldedError",
    "RunSpec",
    "StateSet",
    "SweepSpec",
    "TallyTable",
    "VACUUM",
    "acceptance_weight",
    "beamsplitter",
    "click_probability",
    "conditioned_class_totals",
    "conditioned_counts",
    "count_probabilities",
    "counts_by_offset",
    "dark_prob_from_rate",
    "detector_marginals",
    "enumerate_branches",
    "estimate_class_pulse_numbers",
    "estimate_fidelity",
    "estimate_pulse_numbers",
    "expected_counts",
    "figures_of_merit",
    "mc_visibility",
    "mixture_fidelity",
    "nominal_gain",
    "output_mixture",
    "overlap_sq",
    "params",
    "phase_scan",
    "reconstruct_density",
    "reproduce_figure",
    "run_estimator",
    "run_sweep",
    "sample_click",
    "simulate_run",
    "standard_error",
    "success_probability",
    "success_rate",
    "visibility",
]
