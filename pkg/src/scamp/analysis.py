"""Analysis interferometer: visibility, count probabilities and estimators.

The amplifier output is mixed with a phase-adjustable test copy of the
expected amplified state at a 50/50 beamsplitter feeding detectors A and B.
At the analysis phase all light from a perfect output exits at A; a vacuum
output splits evenly.  Counting clicks at A and B over many pulses lets the
pulse numbers behind each output class, and from them the output density
operator and its fidelity, be estimated without knowing the interferometer
imperfection epsilon (it cancels in the signal-class inversion).

Two bookkeeping conventions circulate for the estimator's exponents, and
they are mutually inconsistent, so both are kept as explicit switches
rather than silently reconciled: the vacuum-class denominator of the
pulse-number estimator (``vacuum_denominator``: "doubled" reuses the
signal-class exponent, "per-port" uses the per-port mean photon number the
click law actually implies) and the vacuum-overlap exponent of the
fidelity estimate (``vacuum_overlap``: "standard" is exp(-g2a2),
"doubled" is exp(-2*g2a2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coherent import CoherentAmplitude, Mixture
from .detectors import DetectorModel
from .errors import InsufficientSignalError, InvalidEpsilonError

EXPONENT_GUARD = 1e-12
AMPLITUDE_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class AnalysisConfig:
    """Reference (test) state, imperfection epsilon, detector and phase grid."""

    reference_amplitude: CoherentAmplitude
    epsilon: float = 0.0
    detector: DetectorModel = DetectorModel.ideal()
    phase_points: int = 256

    def __post_init__(self):
        if not (0.0 <= self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.phase_points < 8:
            raise ValueError(f"phase_points must be >= 8, got {self.phase_points}")

    def ref_mean_photons(self) -> float:
        return self.reference_amplitude.mean_photon_number()


@dataclass(frozen=True)
class CountTable:
    """Click counts at detectors A and B, split by attributed output class.

    "sig" rows come from pulses whose output should be the amplified state,
    "vac" rows from pulses attributed to the vacuum class.  Fields are
    nonnegative; the Monte Carlo writes integers, analytic expectations may
    be fractional.
    """

    n_A_sig: float
    n_B_sig: float
    n_A_vac: float
    n_B_vac: float

    def __post_init__(self):
        for name in ("n_A_sig", "n_B_sig", "n_A_vac", "n_B_vac"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")

    def to_dict(self) -> dict:
        return {
            "n_A_sig": self.n_A_sig,
            "n_B_sig": self.n_B_sig,
            "n_A_vac": self.n_A_vac,
            "n_B_vac": self.n_B_vac,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CountTable":
        try:
            return cls(
                n_A_sig=float(d["n_A_sig"]),
                n_B_sig=float(d["n_B_sig"]),
                n_A_vac=float(d["n_A_vac"]),
                n_B_vac=float(d["n_B_vac"]),
            )
        except KeyError as exc:
            raise ValueError(f"count table is missing field {exc.args[0]!r}") from exc


@dataclass(frozen=True)
class CountProbabilities:
    """Joint click pattern probabilities at (A, B) for one pulse."""

    p10: float
    p01: float
    p11: float
    p00: float


def count_probabilities(output: CoherentAmplitude, cfg: AnalysisConfig) -> CountProbabilities:
    """Click pattern probabilities for one output state behind the analyzer.

    An output matching the reference is handled with the phenomenological
    imperfection epsilon: the B-click marginal equals epsilon and the
    A-click marginal is 1 - (1 + eps)*exp(-2*eta*l*g2a2).  Any other output
    (including vacuum) is treated physically: the two ports see independent
    coherent fields (output +/- reference)/sqrt(2).
    """
    eta_l = cfg.detector.eta_l()
    z_out = output.to_complex()
    z_ref = cfg.reference_amplitude.to_complex()
    if abs(z_out - z_ref) <= AMPLITUDE_MATCH_TOL:
        e2 = math.exp(-2.0 * eta_l * cfg.ref_mean_photons())
        p10 = 1.0 - e2 - cfg.epsilon
        if p10 < 0.0:
            raise InvalidEpsilonError(
                f"epsilon {cfg.epsilon} exceeds the bright-port click probability {1.0 - e2}"
            )
        p01 = cfg.epsilon * e2
        p11 = cfg.epsilon * (1.0 - e2)
    else:
        n_a = 0.5 * abs(z_out + z_ref) ** 2
        n_b = 0.5 * abs(z_out - z_ref) ** 2
        pa = 1.0 - math.exp(-eta_l * n_a)
        pb = 1.0 - math.exp(-eta_l * n_b)
        p10 = pa * (1.0 - pb)
        p01 = pb * (1.0 - pa)
        p11 = pa * pb
    return CountProbabilities(p10=p10, p01=p01, p11=p11, p00=1.0 - p10 - p01 - p11)


def visibility(m: Mixture, cfg: AnalysisConfig) -> float:
    """Interferometric visibility of a mixture against the reference state.

    Scans the reference phase over ``phase_points`` uniform points on
    [0, 2*pi), computes the detector-A click probability of the mixture at
    each phase, and returns (max - min) / (max + min).  The click
    nonlinearity makes extrema of mixtures sit away from the pure-state
    positions, hence the dense scan instead of a closed form.
    """
    if not m.is_normalized():
        raise ValueError("mixture must be normalized")
    phases = np.linspace(0.0, 2.0 * np.pi, cfg.phase_points, endpoint=False)
    z_ref = cfg.reference_amplitude.to_complex() * np.exp(1j * phases)
    p_a = np.zeros_like(phases)
    eta_l = cfg.detector.eta_l()
    dark = cfg.detector.dark_prob_per_gate
    for w, a in m.components:
        n_a = 0.5 * np.abs(a.to_complex() + z_ref) ** 2
        p_a += w * (1.0 - (1.0 - dark) * np.exp(-eta_l * n_a))
    hi = float(p_a.max())
    lo = float(p_a.min())
    if hi <= 0.0:
        return 0.0
    return (hi - lo) / (hi + lo)


def expected_counts(
    n_sig_pulses: float,
    n_vac_pulses: float,
    g2a2: float,
    eta_l: float,
    epsilon: float = 0.0,
    vacuum_denominator: str = "doubled",
) -> CountTable:
    """Expected count table for known class pulse numbers (forward model).

    Signal class:  n_B = eps * N_sig,
                   n_A = [1 - (1 + eps) * exp(-2*eta_l*g2a2)] * N_sig.
    Vacuum class:  both ports equal; "doubled" uses the signal-class
    exponent [1 - exp(-2*eta_l*g2a2)], "per-port" uses the per-port click
    probability [1 - exp(-eta_l*g2a2/2)].

    This is the exact inverse of :func:`estimate_pulse_numbers` under the
    same ``vacuum_denominator``.
    """
    if n_sig_pulses < 0.0 or n_vac_pulses < 0.0:
        raise ValueError("pulse numbers must be >= 0")
    e2 = math.exp(-2.0 * eta_l * g2a2)
    n_a_sig = (1.0 - (1.0 + epsilon) * e2) * n_sig_pulses
    if n_a_sig < 0.0:
        raise InvalidEpsilonError(
            f"epsilon {epsilon} too large for exponent {eta_l * g2a2}: negative A counts"
        )
    vac_click = _vacuum_click_probability(g2a2, eta_l, vacuum_denominator)
    return CountTable(
        n_A_sig=n_a_sig,
        n_B_sig=epsilon * n_sig_pulses,
        n_A_vac=vac_click * n_vac_pulses,
        n_B_vac=vac_click * n_vac_pulses,
    )


def _vacuum_click_probability(g2a2: float, eta_l: float, vacuum_denominator: str) -> float:
    if vacuum_denominator == "doubled":
        return 1.0 - math.exp(-2.0 * eta_l * g2a2)
    if vacuum_denominator == "per-port":
        return 1.0 - math.exp(-0.5 * eta_l * g2a2)
    raise ValueError(f"unknown vacuum_denominator {vacuum_denominator!r}")


def estimate_pulse_numbers(
    counts: CountTable,
    g2a2: float,
    eta_l: float,
    vacuum_denominator: str = "doubled",
) -> tuple[float, float]:
    """Estimate (N_sig, N_vac) class pulse numbers from a count table.

        N_sig = [n_A_sig + n_B_sig * exp(-2*eta_l*g2a2)] / [1 - exp(-2*eta_l*g2a2)]
        N_vac = (n_A_vac + n_B_vac) / (2 * vacuum click probability)

    The interferometer imperfection epsilon cancels in N_sig, so it is not
    an input.  The two vacuum conventions are mutually inconsistent by
    construction (see module docstring); "per-port" is the one consistent
    with the click law used everywhere else and is validated against the
    Monte Carlo oracle.
    """
    if not (0.0 < eta_l <= 1.0):
        raise ValueError(f"eta_l must lie in (0, 1], got {eta_l}")
    if g2a2 <= 0.0 or g2a2 * eta_l < EXPONENT_GUARD:
        raise InsufficientSignalError(
            f"exponent eta_l*g2a2 = {g2a2 * eta_l} too small: estimator undefined"
        )
    e2 = math.exp(-2.0 * eta_l * g2a2)
    n_sig = (counts.n_A_sig + counts.n_B_sig * e2) / (1.0 - e2)
    vac_click = _vacuum_click_probability(g2a2, eta_l, vacuum_denominator)
    n_vac = (counts.n_A_vac + counts.n_B_vac) / (2.0 * vac_click)
    return n_sig, n_vac


def estimate_fidelity(
    n_sig: float,
    n_vac: float,
    g2a2: float,
    vacuum_overlap: str = "standard",
) -> float:
    """Fidelity of the two-component reconstructed state with the reference.

    F = N_sig/(N_sig + N_vac) + c * N_vac/(N_sig + N_vac) with the vacuum
    overlap c = exp(-g2a2) ("standard" coherent-state rule) or
    c = exp(-2*g2a2) ("doubled").
    """
    total = n_sig + n_vac
    if total <= 0.0:
        raise InsufficientSignalError("no pulses attributed to either class")
    if vacuum_overlap == "standard":
        c = math.exp(-g2a2)
    elif vacuum_overlap == "doubled":
        c = math.exp(-2.0 * g2a2)
    else:
        raise ValueError(f"unknown vacuum_overlap {vacuum_overlap!r}")
    return n_sig / total + c * n_vac / total


def reconstruct_density(
    n_sig: float,
    n_vac: float,
    reference: CoherentAmplitude,
) -> Mixture:
    """Two-component density operator from estimated class pulse numbers."""
    total = n_sig + n_vac
    if total <= 0.0:
        raise InsufficientSignalError("no pulses attributed to either class")
    return Mixture(
        (
            (n_sig / total, reference),
            (n_vac / total, CoherentAmplitude(0.0, 0.0)),
        )
    )


def estimate_class_pulse_numbers(
    class_counts: list[tuple[float, float]],
    class_amplitudes: list[CoherentAmplitude],
    reference: CoherentAmplitude,
    eta_l: float,
) -> list[float]:
    """Pulse numbers for an arbitrary set of known output classes.

    Generalization of the two-class estimator to state sets with more than
    two possible outputs: each class j with known amplitude a_j sees port
    mean photons |a_j +/- ref|^2 / 2, so with counts (n_A, n_B) the class
    pulse number is (n_A + n_B) / (p_A + p_B).  Assumes the output is
    confined to the listed amplitudes; validated against the Monte Carlo
    oracle only.
    """
    if len(class_counts) != len(class_amplitudes):
        raise ValueError("class_counts and class_amplitudes must have equal length")
    if not (0.0 < eta_l <= 1.0):
        raise ValueError(f"eta_l must lie in (0, 1], got {eta_l}")
    z_ref = reference.to_complex()
    numbers = []
    for (n_a, n_b), amp in zip(class_counts, class_amplitudes):
        z = amp.to_complex()
        p_a = 1.0 - math.exp(-eta_l * 0.5 * abs(z + z_ref) ** 2)
        p_b = 1.0 - math.exp(-eta_l * 0.5 * abs(z - z_ref) ** 2)
        if p_a + p_b < EXPONENT_GUARD:
            raise InsufficientSignalError(
                "class amplitude and reference both vanish: pulse number unobservable"
            )
        numbers.append((n_a + n_b) / (p_a + p_b))
    return numbers
