"""Parameter sweeps, figure-reproduction datasets and their serialization.

A sweep evaluates the analytic model (and optionally the Monte Carlo) on a
grid of (state-set size, input mean photon number) points and emits one row
per point with fixed, documented columns.  Figure datasets are column
projections of the same rows; they are model curves only, never measured
points.  CSV carries the rows; JSON carries {"spec": ..., "rows": ...}.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from . import params
from .amplifier import Conditioning, figures_of_merit, output_mixture
from .analysis import (
    AnalysisConfig,
    CountTable,
    estimate_fidelity,
    estimate_pulse_numbers,
    visibility,
)
from .errors import ConfigError, InsufficientSignalError
from .montecarlo import (
    DetectorBank,
    RunSpec,
    TallyTable,
    conditioned_class_totals,
    conditioned_counts,
    simulate_run,
    standard_error,
)

MODES = ("analytic", "montecarlo", "both")
FORMATS = ("csv", "json")

BASE_COLUMNS = (
    "n_states",
    "alpha_sq",
    "fidelity",
    "correct_state_fraction",
    "success_probability",
    "success_rate_per_s",
    "visibility_unconditioned",
    "visibility_d0_silent",
    "visibility_conditioned",
)
MC_COLUMNS = (
    "mc_success_probability",
    "mc_success_probability_se",
    "mc_correct_state_fraction",
    "mc_correct_state_fraction_se",
    "mc_fidelity",
    "mc_fidelity_se",
    "mc_n_pulses",
    "mc_seed",
)
INT_COLUMNS = {"n_states", "mc_n_pulses", "mc_seed"}

FIGURE_COLUMNS = {
    "fig3a": ("alpha_sq", "visibility_unconditioned", "visibility_d0_silent", "visibility_conditioned"),
    "fig3b": ("alpha_sq", "correct_state_fraction", "fidelity"),
    "fig3c": ("alpha_sq", "correct_state_fraction", "fidelity"),
    "fig3d": ("alpha_sq", "correct_state_fraction", "fidelity"),
    "fig4": ("alpha_sq", "success_rate_per_s"),
}
FIGURE_N_STATES = {"fig3a": 2, "fig3b": 2, "fig3c": 4, "fig3d": 8, "fig4": 2}


@dataclass(frozen=True)
class SweepSpec:
    """Grid, mode and physics parameters of one sweep."""

    alpha_sq_grid: tuple[float, ...]
    n_states_list: tuple[int, ...]
    mode: str = "analytic"
    output_path: str | None = None
    output_format: str = "csv"
    comparison_reflectivity: float = params.COMPARISON_REFLECTIVITY
    subtraction_transmission: float = params.SUBTRACTION_TRANSMISSION
    detectors: DetectorBank = field(default_factory=params.default_detector_bank)
    prf: float = params.PULSE_REPETITION_HZ
    epsilon: float | None = None
    phase_points: int = 256
    n_pulses: int = 1_000_000
    seed: int = 12345

    def __post_init__(self):
        object.__setattr__(self, "alpha_sq_grid", tuple(float(a) for a in self.alpha_sq_grid))
        object.__setattr__(self, "n_states_list", tuple(int(n) for n in self.n_states_list))
        if len(self.alpha_sq_grid) == 0:
            raise ConfigError("alpha_sq_grid must be non-empty")
        if any(a < 0.0 for a in self.alpha_sq_grid):
            raise ConfigError("alpha_sq values must be >= 0")
        if list(self.alpha_sq_grid) != sorted(set(self.alpha_sq_grid)):
            raise ConfigError("alpha_sq values must be distinct and sorted")
        if len(self.n_states_list) == 0:
            raise ConfigError("n_states_list must be non-empty")
        if any(n < 1 for n in self.n_states_list):
            raise ConfigError("n_states values must be >= 1")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"output_format must be one of {FORMATS}, got {self.output_format!r}")
        if self.mode != "analytic" and self.n_pulses < 1:
            raise ConfigError("n_pulses must be >= 1 for a montecarlo sweep")
        if self.prf <= 0.0:
            raise ConfigError("prf must be > 0")

    def wants_montecarlo(self) -> bool:
        return self.mode in ("montecarlo", "both")

    def columns(self) -> tuple[str, ...]:
        return BASE_COLUMNS + MC_COLUMNS if self.wants_montecarlo() else BASE_COLUMNS

    def echo(self) -> dict:
        d = asdict(self)
        d["alpha_sq_grid"] = list(self.alpha_sq_grid)
        d["n_states_list"] = list(self.n_states_list)
        return d


@dataclass(frozen=True)
class Dataset:
    """Echoed configuration plus one record per grid point, in grid order."""

    spec: dict
    rows: list[dict]


def _point_seed(master_seed: int, point_index: int) -> int:
    state = np.random.SeedSequence(entropy=master_seed, spawn_key=(point_index,))
    return int(state.generate_state(1, np.uint64)[0])


def _analysis_for(spec: SweepSpec, cfg) -> AnalysisConfig:
    det = spec.detectors.da
    reference = cfg.target_amplitude(0)
    eps = spec.epsilon
    if eps is None:
        eps = params.epsilon_from_visibility(
            reference.mean_photon_number(), det.eta_l(), params.OUTER_VISIBILITY
        )
    return AnalysisConfig(
        reference_amplitude=reference,
        epsilon=eps,
        detector=det,
        phase_points=spec.phase_points,
    )


def _analytic_row(spec: SweepSpec, n_states: int, alpha_sq: float) -> dict:
    cfg = params.default_amplifier(
        alpha_sq,
        n_states,
        comparison_reflectivity=spec.comparison_reflectivity,
        subtraction_transmission=spec.subtraction_transmission,
    )
    d0, d1 = spec.detectors.d0, spec.detectors.d1
    fom = figures_of_merit(cfg, d0, d1)
    analysis_cfg = _analysis_for(spec, cfg)
    row = {
        "n_states": n_states,
        "alpha_sq": alpha_sq,
        "fidelity": fom.fidelity,
        "correct_state_fraction": fom.correct_state_fraction,
        "success_probability": fom.success_probability,
        "success_rate_per_s": fom.success_probability * spec.prf,
    }
    for cond, name in (
        (Conditioning.NONE, "visibility_unconditioned"),
        (Conditioning.D0_SILENT, "visibility_d0_silent"),
        (Conditioning.D0_SILENT_D1_FIRES, "visibility_conditioned"),
    ):
        mixture = output_mixture(cfg, d0, d1, 0, cond)
        row[name] = visibility(mixture, analysis_cfg)
    return row


def _montecarlo_columns(spec: SweepSpec, n_states: int, alpha_sq: float, seed: int, workers: int) -> dict:
    cfg = params.default_amplifier(
        alpha_sq,
        n_states,
        comparison_reflectivity=spec.comparison_reflectivity,
        subtraction_transmission=spec.subtraction_transmission,
    )
    analysis_cfg = _analysis_for(spec, cfg)
    run = RunSpec(
        amplifier=cfg,
        detectors=spec.detectors,
        analysis=analysis_cfg,
        n_pulses=spec.n_pulses,
        master_seed=seed,
    )
    tally = simulate_run(run, workers=workers)
    n_correct, n_wrong = conditioned_class_totals(tally, Conditioning.D0_SILENT_D1_FIRES)
    accepted = n_correct + n_wrong
    out = {
        "mc_success_probability": accepted / spec.n_pulses,
        "mc_success_probability_se": standard_error(accepted, spec.n_pulses),
        "mc_n_pulses": spec.n_pulses,
        "mc_seed": seed,
    }
    if accepted > 0:
        out["mc_correct_state_fraction"] = n_correct / accepted
        out["mc_correct_state_fraction_se"] = standard_error(n_correct, accepted)
    else:
        out["mc_correct_state_fraction"] = math.nan
        out["mc_correct_state_fraction_se"] = math.nan
    counts = conditioned_counts(tally, Conditioning.D0_SILENT_D1_FIRES)
    g2a2 = analysis_cfg.ref_mean_photons()
    eta_l = analysis_cfg.detector.eta_l()
    try:
        n_sig, n_vac = estimate_pulse_numbers(counts, g2a2, eta_l, vacuum_denominator="per-port")
        fid = estimate_fidelity(n_sig, n_vac, g2a2, vacuum_overlap="standard")
        # F is affine in the class split, so its error is the binomial error
        # of that split scaled by (1 - vacuum overlap)
        se_frac = standard_error(n_correct, accepted) if accepted > 0 else math.nan
        out["mc_fidelity"] = fid
        out["mc_fidelity_se"] = (1.0 - math.exp(-g2a2)) * se_frac
    except InsufficientSignalError:
        out["mc_fidelity"] = math.nan
        out["mc_fidelity_se"] = math.nan
    return out


def run_sweep(spec: SweepSpec, workers: int = 1) -> Dataset:
    """Evaluate the sweep grid; rows are ordered by grid position."""
    rows = []
    point_index = 0
    for n_states in spec.n_states_list:
        for alpha_sq in spec.alpha_sq_grid:
            row = _analytic_row(spec, n_states, alpha_sq)
            if spec.wants_montecarlo():
                seed = _point_seed(spec.seed, point_index)
                row.update(_montecarlo_columns(spec, n_states, alpha_sq, seed, workers))
            rows.append({c: row[c] for c in spec.columns()})
            point_index += 1
    return Dataset(spec=spec.echo(), rows=rows)


def reproduce_figure(
    figure_id: str,
    optical_loss: float = params.FROZEN_OPTICAL_LOSS,
    alpha_sq_grid: tuple[float, ...] | None = None,
    detectors: DetectorBank | None = None,
    phase_points: int = 256,
    prf: float = params.PULSE_REPETITION_HZ,
) -> Dataset:
    """Model-curve dataset for one of the known figure layouts.

    The rows are the model evaluated on the requested grid with the given
    parameters; no measured points are produced or implied.
    """
    if figure_id not in FIGURE_COLUMNS:
        raise ConfigError(
            f"unknown figure id {figure_id!r}; expected one of {sorted(FIGURE_COLUMNS)}"
        )
    if alpha_sq_grid is not None:
        grid = tuple(alpha_sq_grid)
    elif figure_id == "fig4":
        grid = params.FIG4_ALPHA_SQ_GRID
    else:
        grid = params.FIG3_ALPHA_SQ_GRID
    bank = params.default_detector_bank(optical_loss) if detectors is None else detectors
    spec = SweepSpec(
        alpha_sq_grid=grid,
        n_states_list=(FIGURE_N_STATES[figure_id],),
        mode="analytic",
        detectors=bank,
        phase_points=phase_points,
        prf=prf,
    )
    dataset = run_sweep(spec)
    columns = FIGURE_COLUMNS[figure_id]
    rows = [{c: row[c] for c in columns} for row in dataset.rows]
    spec_echo = dataset.spec
    spec_echo["figure_id"] = figure_id
    spec_echo["data"] = "model-curves"
    return Dataset(spec=spec_echo, rows=rows)


def run_estimator(
    counts: CountTable,
    g2a2: float,
    eta_l: float,
    vacuum_denominator: str = "doubled",
) -> dict:
    """Full estimator report: class pulse numbers, weights, both fidelities."""
    n_sig, n_vac = estimate_pulse_numbers(counts, g2a2, eta_l, vacuum_denominator)
    total = n_sig + n_vac
    if total <= 0.0:
        raise InsufficientSignalError("estimated pulse numbers are both zero")
    return {
        "n_sig": n_sig,
        "n_vac": n_vac,
        "p_sig": n_sig / total,
        "p_vac": n_vac / total,
        "fidelity_standard": estimate_fidelity(n_sig, n_vac, g2a2, "standard"),
        "fidelity_doubled": estimate_fidelity(n_sig, n_vac, g2a2, "doubled"),
        "g2a2": g2a2,
        "eta_l": eta_l,
        "vacuum_denominator": vacuum_denominator,
    }


# ---------------------------------------------------------------------------
# serialization


def fmt17(value) -> str:
    """Floats with 17 significant digits (lossless text round trip)."""
    return format(value, ".17g")


def _cell(column: str, value) -> str:
    if column in INT_COLUMNS:
        return str(int(value))
    return fmt17(float(value))


def dataset_to_csv(dataset: Dataset) -> str:
    if not dataset.rows:
        raise ValueError("dataset has no rows")
    columns = list(dataset.rows[0].keys())
    lines = [",".join(columns)]
    for row in dataset.rows:
        lines.append(",".join(_cell(c, row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def dataset_to_json(dataset: Dataset) -> str:
    return json.dumps({"spec": dataset.spec, "rows": dataset.rows}, indent=2) + "\n"


def write_dataset(dataset: Dataset, path: str, output_format: str) -> None:
    if output_format == "csv":
        text = dataset_to_csv(dataset)
    elif output_format == "json":
        text = dataset_to_json(dataset)
    else:
        raise ConfigError(f"output format must be one of {FORMATS}, got {output_format!r}")
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write dataset to {path!r}: {exc}") from exc


def read_csv_rows(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = []
        for record in reader:
            row = {}
            for column, text in record.items():
                row[column] = int(text) if column in INT_COLUMNS else float(text)
            rows.append(row)
    return rows


def read_json_dataset(path: str) -> Dataset:
    with open(path) as fh:
        payload = json.load(fh)
    return Dataset(spec=payload["spec"], rows=payload["rows"])


def write_count_table(counts: CountTable, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(counts.to_dict(), fh, indent=2)
        fh.write("\n")


def read_count_table(path: str) -> CountTable:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read count table from {path!r}: {exc}") from exc
    try:
        payload = json.loads(text)
        if not isinstance(payload, dict):
            raise ValueError("count table JSON must be an object")
        return CountTable.from_dict(payload)
    except json.JSONDecodeError:
        pass
    # CSV fallback: one header row plus one data row
    lines = [line for line in text.splitlines() if line.strip()]
    if len(lines) != 2:
        raise ValueError(f"count table file {path!r} is neither JSON nor single-row CSV")
    header = [h.strip() for h in lines[0].split(",")]
    values = [v.strip() for v in lines[1].split(",")]
    if len(header) != len(values):
        raise ValueError(f"count table CSV in {path!r} has mismatched header and row")
    return CountTable.from_dict(dict(zip(header, values)))


def tally_to_dict(t: TallyTable) -> dict:
    return {
        "phases": list(t.phases),
        "n_states": t.n_states,
        "counts": t.counts.tolist(),
    }


def tally_from_dict(d: dict) -> TallyTable:
    return TallyTable(
        counts=np.asarray(d["counts"], dtype=np.int64),
        phases=tuple(d["phases"]),
        n_states=int(d["n_states"]),
    )
