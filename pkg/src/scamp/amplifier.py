"""The state comparison amplifier.

An input coherent state drawn from a phase-symmetric set is interfered with
a randomly chosen guess state at the comparison beamsplitter (r1, t1).  The
monitor port feeds detector D0; a correct guess interferes destructively
there and sends everything to the retained port.  A second, highly
transmitting beamsplitter (t2, r2) taps a small fraction to detector D1
(photon subtraction).  A pulse is accepted when D0 stays silent and D1
fires; acceptance both vetoes wrong guesses (via D0) and favors the
brighter retained field of correct guesses (via D1).  The nominal amplitude
gain of an accepted pulse is t2/r1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .coherent import CoherentAmplitude, Mixture, mixture_fidelity
from .detectors import DetectorModel, click_probability
from .errors import NeverHeraldedError

UNITARITY_TOL = 1e-12
DISTRIBUTION_TOL = 1e-12


@dataclass(frozen=True)
class StateSet:
    """N coherent states alpha * exp(2*pi*i*m/N), m = 0..N-1, on a circle."""

    base_amplitude: CoherentAmplitude
    n_states: int

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError(f"n_states must be >= 1, got {self.n_states}")

    def state(self, m: int) -> CoherentAmplitude:
        # reduce the index first so state(m + N) == state(m) exactly
        m = m % self.n_states
        if m == 0:
            return self.base_amplitude
        return self.base_amplitude.rotated(2.0 * math.pi * m / self.n_states)

    def mean_photon_number(self) -> float:
        return self.base_amplitude.mean_photon_number()


class Conditioning(enum.Enum):
    """Which heralding pattern an output is accepted on."""

    NONE = "none"
    D0_SILENT = "d0_silent"
    D0_SILENT_D1_FIRES = "d0_silent_and_d1_fires"


@dataclass(frozen=True)
class AmplifierConfig:
    """Beamsplitter amplitudes, input state set and guess distribution.

    The guess set is the input set scaled by t1/r1, which generalizes the
    destructive-interference condition beyond the 50/50 comparison splitter
    (at 50/50 the guess and input sets coincide).
    """

    comparison_r1: float
    comparison_t1: float
    subtraction_t2: float
    subtraction_r2: float
    input_set: StateSet
    guess_distribution: tuple[float, ...] = ()

    def __post_init__(self):
        if abs(self.comparison_r1**2 + self.comparison_t1**2 - 1.0) > UNITARITY_TOL:
            raise ValueError("comparison beamsplitter is not unitary: r1^2 + t1^2 != 1")
        if abs(self.subtraction_t2**2 + self.subtraction_r2**2 - 1.0) > UNITARITY_TOL:
            raise ValueError("subtraction beamsplitter is not unitary: t2^2 + r2^2 != 1")
        if self.comparison_r1 <= 0.0 or self.subtraction_t2 <= 0.0:
            raise ValueError("comparison_r1 and subtraction_t2 must be > 0 (gain t2/r1 > 0)")
        n = self.input_set.n_states
        if len(self.guess_distribution) == 0:
            object.__setattr__(self, "guess_distribution", (1.0 / n,) * n)
        if len(self.guess_distribution) != n:
            raise ValueError(
                f"guess_distribution has {len(self.guess_distribution)} entries for {n} states"
            )
        if any(p < 0.0 for p in self.guess_distribution):
            raise ValueError("guess probabilities must be >= 0")
        if abs(math.fsum(self.guess_distribution) - 1.0) > DISTRIBUTION_TOL:
            raise ValueError("guess_distribution must sum to 1")

    @classmethod
    def from_intensities(
        cls,
        comparison_reflectivity: float,
        subtraction_transmission: float,
        input_set: StateSet,
        guess_distribution: tuple[float, ...] = (),
    ) -> "AmplifierConfig":
        """Build from intensity parameters; amplitude pairs are unitary by construction."""
        if not (0.0 < comparison_reflectivity < 1.0):
            raise ValueError("comparison reflectivity must lie in (0, 1)")
        if not (0.0 < subtraction_transmission <= 1.0):
            raise ValueError("subtraction transmission must lie in (0, 1]")
        return cls(
            comparison_r1=math.sqrt(comparison_reflectivity),
            comparison_t1=math.sqrt(1.0 - comparison_reflectivity),
            subtraction_t2=math.sqrt(subtraction_transmission),
            subtraction_r2=math.sqrt(1.0 - subtraction_transmission),
            input_set=input_set,
            guess_distribution=guess_distribution,
        )

    def n_states(self) -> int:
        return self.input_set.n_states

    def nominal_gain(self) -> float:
        return self.subtraction_t2 / self.comparison_r1

    def guess_amplitude(self, k: int) -> CoherentAmplitude:
        return self.input_set.state(k).scaled(self.comparison_t1 / self.comparison_r1)

    def target_amplitude(self, m: int) -> CoherentAmplitude:
        """Ideal amplified output for input m."""
        return self.input_set.state(m).scaled(self.nominal_gain())


@dataclass(frozen=True)
class BranchOutcome:
    """Amplitudes and prior of one (input, guess) branch of the device."""

    input_index: int
    guess_index: int
    d0_amplitude: CoherentAmplitude
    d1_amplitude: CoherentAmplitude
    output_amplitude: CoherentAmplitude
    prior_probability: float


def nominal_gain(cfg: AmplifierConfig) -> float:
    """Nominal amplitude gain t2/r1 of an accepted pulse."""
    return cfg.nominal_gain()


def enumerate_branches(cfg: AmplifierConfig, input_index: int) -> list[BranchOutcome]:
    """All N guess branches for one input state.

    The comparison-port amplitudes follow the fixed beamsplitter convention
    (monitor = t1*input - r1*guess, retained = r1*input + t1*guess) with the
    guess scaled so a correct guess nulls the monitor port; that branch is
    evaluated in closed form to keep the null and the gain law exact.
    """
    n = cfg.n_states()
    if not (0 <= input_index < n):
        raise IndexError(f"input index {input_index} out of range for {n} states")
    r1, t1 = cfg.comparison_r1, cfg.comparison_t1
    r2, t2 = cfg.subtraction_r2, cfg.subtraction_t2
    z_in = cfg.input_set.state(input_index).to_complex()
    branches = []
    for k in range(n):
        if k == input_index:
            d0 = CoherentAmplitude(0.0, 0.0)
            retained = CoherentAmplitude.from_complex(z_in / r1)
            output = cfg.target_amplitude(input_index)
        else:
            # guess amplitude is (t1/r1) * member, so the splitter output
            # simplifies to d0 = t1*(in - member), retained = r1*in + (t1^2/r1)*member
            z_member = cfg.input_set.state(k).to_complex()
            d0 = CoherentAmplitude.from_complex(t1 * (z_in - z_member))
            retained = CoherentAmplitude.from_complex(r1 * z_in + (t1 * t1 / r1) * z_member)
            output = retained.scaled(t2)
        branches.append(
            BranchOutcome(
                input_index=input_index,
                guess_index=k,
                d0_amplitude=d0,
                d1_amplitude=retained.scaled(r2),
                output_amplitude=output,
                prior_probability=cfg.guess_distribution[k],
            )
        )
    return branches


def acceptance_weight(
    b: BranchOutcome,
    det0: DetectorModel,
    det1: DetectorModel,
    conditioning: Conditioning = Conditioning.D0_SILENT_D1_FIRES,
) -> float:
    """Joint probability that this branch occurs and passes the conditioning."""
    w = b.prior_probability
    if conditioning is Conditioning.NONE:
        return w
    w *= 1.0 - click_probability(b.d0_amplitude.mean_photon_number(), det0)
    if conditioning is Conditioning.D0_SILENT:
        return w
    return w * click_probability(b.d1_amplitude.mean_photon_number(), det1)


def output_mixture(
    cfg: AmplifierConfig,
    det0: DetectorModel,
    det1: DetectorModel,
    input_index: int,
    conditioning: Conditioning = Conditioning.D0_SILENT_D1_FIRES,
) -> Mixture:
    """Conditioned output state for one input, as a normalized coherent mixture.

    Components with exactly zero acceptance weight are dropped (e.g. the dead
    wrong branch of the two-state set under ideal detectors).
    """
    branches = enumerate_branches(cfg, input_index)
    weights = [acceptance_weight(b, det0, det1, conditioning) for b in branches]
    total = math.fsum(weights)
    if total <= 0.0:
        raise NeverHeraldedError(
            f"no branch of input {input_index} can pass conditioning {conditioning.value}"
        )
    components = tuple(
        (w / total, b.output_amplitude) for w, b in zip(weights, branches) if w > 0.0
    )
    return Mixture(components)


@dataclass(frozen=True)
class FiguresOfMerit:
    fidelity: float
    correct_state_fraction: float
    success_probability: float


def figures_of_merit(
    cfg: AmplifierConfig,
    det0: DetectorModel,
    det1: DetectorModel,
    conditioning: Conditioning = Conditioning.D0_SILENT_D1_FIRES,
) -> FiguresOfMerit:
    """Fidelity, correct-state fraction and success probability, averaged
    over a uniform prior on the input states.

    fidelity: overlap of the conditioned output mixture with the ideal
    amplified input.  correct_state_fraction: accepted-weight share of the
    guess == input branch.  success_probability: total acceptance
    probability per pulse (before normalization).
    """
    n = cfg.n_states()
    fidelity_sum = 0.0
    fraction_sum = 0.0
    success_sum = 0.0
    for m in range(n):
        branches = enumerate_branches(cfg, m)
        weights = [acceptance_weight(b, det0, det1, conditioning) for b in branches]
        total = math.fsum(weights)
        if total <= 0.0:
            raise NeverHeraldedError(
                f"no branch of input {m} can pass conditioning {conditioning.value}"
            )
        target = cfg.target_amplitude(m)
        mixture = Mixture(tuple((w / total, b.output_amplitude) for w, b in zip(weights, branches)))
        fidelity_sum += mixture_fidelity(mixture, target)
        fraction_sum += weights[m] / total
        success_sum += total
    return FiguresOfMerit(
        fidelity=fidelity_sum / n,
        correct_state_fraction=fraction_sum / n,
        success_probability=success_sum / n,
    )


def success_probability(
    cfg: AmplifierConfig,
    det0: DetectorModel,
    det1: DetectorModel,
    conditioning: Conditioning = Conditioning.D0_SILENT_D1_FIRES,
) -> float:
    """Per-pulse acceptance probability, averaged over a uniform input prior.

    Well defined even when no branch can herald (returns 0), unlike the
    conditioned output state itself.
    """
    n = cfg.n_states()
    total = 0.0
    for m in range(n):
        for b in enumerate_branches(cfg, m):
            total += acceptance_weight(b, det0, det1, conditioning)
    return total / n


def success_rate(
    cfg: AmplifierConfig,
    det0: DetectorModel,
    det1: DetectorModel,
    prf: float,
    conditioning: Conditioning = Conditioning.D0_SILENT_D1_FIRES,
) -> float:
    """Accepted pulses per second at pulse repetition frequency `prf`."""
    if prf <= 0.0:
        raise ValueError(f"pulse repetition frequency must be > 0, got {prf}")
    return success_probability(cfg, det0, det1, conditioning) * prf
