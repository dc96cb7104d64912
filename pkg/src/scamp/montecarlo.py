"""Pulse-by-pulse stochastic simulation of the full experiment.

Each pulse draws an input state and a guess state, samples clicks at the
heralding detectors D0/D1 from the branch amplitudes, propagates the branch
output through the analysis interferometer (test state phase-locked to the
input, plus the scheduled scan phase) and samples clicks at DA/DB.  Counts
are tallied per (phase bin, input, guess, 4-bit click pattern).

Pulses are simulated in fixed-size chunks; chunk c owns an independent
random stream derived from (master_seed, c), so a run is bit-identical for
a given master seed regardless of how many workers execute the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .amplifier import AmplifierConfig, Conditioning, enumerate_branches
from .analysis import AnalysisConfig, CountTable
from .detectors import DetectorModel

DEFAULT_CHUNK_SIZE = 1 << 16

# click-pattern bit layout, most significant first
_BIT_D0 = 8
_BIT_D1 = 4
_BIT_DA = 2
_BIT_DB = 1
_N_PATTERNS = 16


@dataclass(frozen=True)
class DetectorBank:
    """One detector model per physical detector."""

    d0: DetectorModel
    d1: DetectorModel
    da: DetectorModel
    db: DetectorModel

    @classmethod
    def uniform(cls, det: DetectorModel) -> "DetectorBank":
        return cls(d0=det, d1=det, da=det, db=det)


@dataclass(frozen=True)
class RunSpec:
    """Everything one stochastic run needs, including its master seed."""

    amplifier: AmplifierConfig
    detectors: DetectorBank
    analysis: AnalysisConfig
    n_pulses: int
    master_seed: int
    phase_schedule: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        if self.n_pulses < 1:
            raise ValueError(f"n_pulses must be >= 1, got {self.n_pulses}")
        if self.master_seed < 0:
            raise ValueError(f"master_seed must be a nonnegative integer, got {self.master_seed}")
        if len(self.phase_schedule) == 0:
            raise ValueError("phase_schedule must contain at least one phase")


@dataclass(frozen=True)
class TallyTable:
    """Event counts per (phase bin, input, guess, D0/D1/DA/DB click pattern).

    Merging two tables is field-wise addition, so chunked simulation reduces
    to a sum in any order.
    """

    counts: np.ndarray  # int64, shape (n_phases, N, N, 16)
    phases: tuple[float, ...]
    n_states: int

    def __post_init__(self):
        expected = (len(self.phases), self.n_states, self.n_states, _N_PATTERNS)
        if self.counts.shape != expected:
            raise ValueError(f"counts shape {self.counts.shape} != {expected}")

    @property
    def n_pulses(self) -> int:
        return int(self.counts.sum())

    def merged(self, other: "TallyTable") -> "TallyTable":
        if self.phases != other.phases or self.n_states != other.n_states:
            raise ValueError("cannot merge tallies with different layouts")
        return TallyTable(self.counts + other.counts, self.phases, self.n_states)

    @classmethod
    def empty(cls, phases: tuple[float, ...], n_states: int) -> "TallyTable":
        shape = (len(phases), n_states, n_states, _N_PATTERNS)
        return cls(np.zeros(shape, dtype=np.int64), phases, n_states)


def chunk_rng(master_seed: int, chunk_index: int) -> np.random.Generator:
    """Independent, reproducible random stream for one chunk."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.PCG64(ss))


def phase_scan(n_points: int) -> tuple[float, ...]:
    """Uniform scan schedule over [0, 2*pi) for visibility runs."""
    if n_points < 2:
        raise ValueError(f"a phase scan needs >= 2 points, got {n_points}")
    return tuple(2.0 * math.pi * j / n_points for j in range(n_points))


@dataclass(frozen=True)
class _BranchTables:
    """Per-(input, guess) click probabilities and per-phase analyzer tables."""

    p0: np.ndarray        # (N, N) D0 click probability
    p1: np.ndarray        # (N, N) D1 click probability
    pa: np.ndarray        # (P, N, N) DA click probability
    pb: np.ndarray        # (P, N, N) DB click probability
    guess_cdf: np.ndarray  # (N,) cumulative guess distribution


def _click_array(mean_photons: np.ndarray, det: DetectorModel) -> np.ndarray:
    return 1.0 - (1.0 - det.dark_prob_per_gate) * np.exp(-det.eta_l() * mean_photons)


def branch_tables(spec: RunSpec) -> _BranchTables:
    """Precompute all per-branch click probabilities for a run.

    The analyzer reference for input m is the configured reference rotated
    by the input phase 2*pi*m/N (the test state is a copy of that pulse's
    expected amplified state) and by each scheduled scan phase.
    """
    cfg = spec.amplifier
    n = cfg.n_states()
    n_d0 = np.zeros((n, n))
    n_d1 = np.zeros((n, n))
    out = np.zeros((n, n), dtype=complex)
    for m in range(n):
        for b in enumerate_branches(cfg, m):
            n_d0[m, b.guess_index] = b.d0_amplitude.mean_photon_number()
            n_d1[m, b.guess_index] = b.d1_amplitude.mean_photon_number()
            out[m, b.guess_index] = b.output_amplitude.to_complex()
    z_ref = spec.analysis.reference_amplitude.to_complex()
    input_phases = np.exp(2j * np.pi * np.arange(n) / n)
    scan = np.exp(1j * np.asarray(spec.phase_schedule))
    # reference per (phase bin, input): outer product of the two phase factors
    ref = z_ref * scan[:, None] * input_phases[None, :]
    n_da = 0.5 * np.abs(out[None, :, :] + ref[:, :, None]) ** 2
    n_db = 0.5 * np.abs(out[None, :, :] - ref[:, :, None]) ** 2
    cdf = np.cumsum(np.asarray(cfg.guess_distribution))
    cdf[-1] = 1.0
    return _BranchTables(
        p0=_click_array(n_d0, spec.detectors.d0),
        p1=_click_array(n_d1, spec.detectors.d1),
        pa=_click_array(n_da, spec.detectors.da),
        pb=_click_array(n_db, spec.detectors.db),
        guess_cdf=cdf,
    )


def simulate_chunk(
    spec: RunSpec,
    chunk_index: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    tables: _BranchTables | None = None,
) -> TallyTable:
    """Simulate one chunk of pulses with its own derived random stream."""
    start = chunk_index * chunk_size
    count = min(chunk_size, spec.n_pulses - start)
    if count <= 0:
        return TallyTable.empty(spec.phase_schedule, spec.amplifier.n_states())
    if tables is None:
        tables = branch_tables(spec)
    n = spec.amplifier.n_states()
    n_phases = len(spec.phase_schedule)
    rng = chunk_rng(spec.master_seed, chunk_index)

    inputs = rng.integers(0, n, size=count)
    guesses = np.searchsorted(tables.guess_cdf, rng.random(count), side="right")
    u0 = rng.random(count)
    u1 = rng.random(count)
    ua = rng.random(count)
    ub = rng.random(count)

    j = (start + np.arange(count)) % n_phases
    d0 = u0 < tables.p0[inputs, guesses]
    d1 = u1 < tables.p1[inputs, guesses]
    da = ua < tables.pa[j, inputs, guesses]
    db = ub < tables.pb[j, inputs, guesses]
    pattern = (
        d0.astype(np.int64) * _BIT_D0
        + d1.astype(np.int64) * _BIT_D1
        + da.astype(np.int64) * _BIT_DA
        + db.astype(np.int64) * _BIT_DB
    )
    flat = ((j * n + inputs) * n + guesses) * _N_PATTERNS + pattern
    counts = np.bincount(flat, minlength=n_phases * n * n * _N_PATTERNS)
    counts = counts.reshape(n_phases, n, n, _N_PATTERNS).astype(np.int64)
    return TallyTable(counts, spec.phase_schedule, n)


def simulate_run(
    spec: RunSpec,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> TallyTable:
    """Simulate the full run; deterministic for a fixed master seed.

    The chunk decomposition and per-chunk seeds depend only on
    (master_seed, chunk_size), never on the worker count, so any degree of
    parallelism produces a bit-identical tally.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    tables = branch_tables(spec)
    n_chunks = (spec.n_pulses + chunk_size - 1) // chunk_size
    total = TallyTable.empty(spec.phase_schedule, spec.amplifier.n_states())
    if workers == 1:
        for c in range(n_chunks):
            total = total.merged(simulate_chunk(spec, c, chunk_size, tables))
        return total
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = pool.map(
            lambda c: simulate_chunk(spec, c, chunk_size, tables), range(n_chunks)
        )
        for tally in results:
            total = total.merged(tally)
    return total


def _condition_mask(condition) -> np.ndarray:
    """Boolean mask over the 16 click patterns selecting accepted events."""
    if isinstance(condition, str):
        condition = Conditioning(condition)
    patterns = np.arange(_N_PATTERNS)
    d0_fired = (patterns & _BIT_D0) != 0
    d1_fired = (patterns & _BIT_D1) != 0
    if condition is Conditioning.NONE:
        return np.ones(_N_PATTERNS, dtype=bool)
    if condition is Conditioning.D0_SILENT:
        return ~d0_fired
    return ~d0_fired & d1_fired


def _class_masks(n: int) -> tuple[np.ndarray, np.ndarray]:
    correct = np.eye(n, dtype=bool)
    return correct, ~correct


def conditioned_counts(t: TallyTable, condition) -> CountTable:
    """Project a tally onto a count table under the requested conditioning.

    "sig" counts come from correct-guess pulses, "vac" counts from
    wrong-guess pulses (for the two-state set the wrong branch output is
    exactly vacuum; for larger sets this is the binary attribution the
    two-class estimator assumes).
    """
    mask = _condition_mask(condition)
    patterns = np.arange(_N_PATTERNS)
    a_fired = ((patterns & _BIT_DA) != 0) & mask
    b_fired = ((patterns & _BIT_DB) != 0) & mask
    correct, wrong = _class_masks(t.n_states)
    by_branch_a = t.counts[:, :, :, a_fired].sum(axis=(0, 3))
    by_branch_b = t.counts[:, :, :, b_fired].sum(axis=(0, 3))
    return CountTable(
        n_A_sig=float(by_branch_a[correct].sum()),
        n_B_sig=float(by_branch_b[correct].sum()),
        n_A_vac=float(by_branch_a[wrong].sum()),
        n_B_vac=float(by_branch_b[wrong].sum()),
    )


def conditioned_class_totals(t: TallyTable, condition) -> tuple[int, int]:
    """Accepted pulse counts in the (correct, wrong) guess classes."""
    mask = _condition_mask(condition)
    by_branch = t.counts[:, :, :, mask].sum(axis=(0, 3))
    correct, wrong = _class_masks(t.n_states)
    return int(by_branch[correct].sum()), int(by_branch[wrong].sum())


def counts_by_offset(t: TallyTable, condition) -> list[tuple[int, int, int]]:
    """Per guess-offset (n_A, n_B, accepted pulses) records.

    Offset d = (guess - input) mod N indexes the N possible output classes
    of the symmetric set; feed these to the multi-class pulse estimator.
    """
    mask = _condition_mask(condition)
    patterns = np.arange(_N_PATTERNS)
    a_fired = ((patterns & _BIT_DA) != 0) & mask
    b_fired = ((patterns & _BIT_DB) != 0) & mask
    n = t.n_states
    by_branch_a = t.counts[:, :, :, a_fired].sum(axis=(0, 3))
    by_branch_b = t.counts[:, :, :, b_fired].sum(axis=(0, 3))
    by_branch_n = t.counts[:, :, :, mask].sum(axis=(0, 3))
    records = []
    m_idx, k_idx = np.indices((n, n))
    offsets = (k_idx - m_idx) % n
    for d in range(n):
        sel = offsets == d
        records.append(
            (
                int(by_branch_a[sel].sum()),
                int(by_branch_b[sel].sum()),
                int(by_branch_n[sel].sum()),
            )
        )
    return records


def detector_marginals(t: TallyTable) -> dict[str, float]:
    """Fraction of pulses on which each detector fired."""
    patterns = np.arange(_N_PATTERNS)
    total = t.n_pulses
    by_pattern = t.counts.sum(axis=(0, 1, 2))
    out = {}
    for name, bit in (("d0", _BIT_D0), ("d1", _BIT_D1), ("da", _BIT_DA), ("db", _BIT_DB)):
        out[name] = float(by_pattern[(patterns & bit) != 0].sum()) / total
    return out


def mc_visibility(t: TallyTable, condition) -> float:
    """Visibility of the conditioned DA count rate across the phase schedule."""
    mask = _condition_mask(condition)
    patterns = np.arange(_N_PATTERNS)
    a_fired = ((patterns & _BIT_DA) != 0) & mask
    per_phase_pulses = t.counts.sum(axis=(1, 2, 3)).astype(float)
    if np.any(per_phase_pulses == 0):
        raise ValueError("phase schedule has empty bins; run more pulses")
    rate = t.counts[:, :, :, a_fired].sum(axis=(1, 2, 3)) / per_phase_pulses
    hi = float(rate.max())
    lo = float(rate.min())
    if hi <= 0.0:
        return 0.0
    return (hi - lo) / (hi + lo)


def standard_error(k: int, n: int) -> float:
    """Binomial standard error sqrt(p*(1-p)/n) of a count k out of n."""
    if n < 1:
        raise ValueError(f"total must be >= 1, got {n}")
    if not (0 <= k <= n):
        raise ValueError(f"count {k} outside [0, {n}]")
    p = k / n
    return math.sqrt(p * (1.0 - p) / n)
