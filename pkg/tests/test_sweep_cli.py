import json
import math

import numpy as np
import pytest

import scamp.cli as cli
from scamp.analysis import CountTable
from scamp.coherent import mixture_fidelity
from scamp.errors import ConfigError, InsufficientSignalError
from scamp.montecarlo import (
    DetectorBank,
    RunSpec,
    conditioned_class_totals,
    conditioned_counts,
    simulate_run,
)
from scamp.amplifier import Conditioning, output_mixture
from scamp.detectors import DetectorModel
from scamp.sweep import (
    Dataset,
    SweepSpec,
    dataset_to_csv,
    read_csv_rows,
    read_json_dataset,
    reproduce_figure,
    run_estimator,
    run_sweep,
    write_count_table,
    write_dataset,
)
from scamp import params


class TestSweepSpecValidation:
    def test_rejects_empty_grid(self):
        with pytest.raises(ConfigError):
            SweepSpec(alpha_sq_grid=(), n_states_list=(2,))

    def test_rejects_unsorted_or_duplicate_grid(self):
        with pytest.raises(ConfigError):
            SweepSpec(alpha_sq_grid=(0.5, 0.1), n_states_list=(2,))
        with pytest.raises(ConfigError):
            SweepSpec(alpha_sq_grid=(0.1, 0.1), n_states_list=(2,))

    def test_rejects_bad_mode_and_format(self):
        with pytest.raises(ConfigError):
            SweepSpec(alpha_sq_grid=(0.1,), n_states_list=(2,), mode="exact")
        with pytest.raises(ConfigError):
            SweepSpec(alpha_sq_grid=(0.1,), n_states_list=(2,), output_format="xml")

    def test_rejects_empty_montecarlo_run(self):
        with pytest.raises(ConfigError):
            SweepSpec(alpha_sq_grid=(0.1,), n_states_list=(2,), mode="montecarlo", n_pulses=0)

    def test_analytic_mode_ignores_n_pulses(self):
        SweepSpec(alpha_sq_grid=(0.1,), n_states_list=(2,), mode="analytic", n_pulses=0)


class TestRunSweep:
    def test_rows_ordered_by_grid_position(self):
        spec = SweepSpec(alpha_sq_grid=(0.1, 0.5), n_states_list=(2, 4))
        ds = run_sweep(spec)
        assert [(r["n_states"], r["alpha_sq"]) for r in ds.rows] == [
            (2, 0.1), (2, 0.5), (4, 0.1), (4, 0.5),
        ]

    def test_analytic_output_is_bit_identical(self):
        spec = SweepSpec(alpha_sq_grid=(0.1, 0.3, 0.9), n_states_list=(2, 8))
        a, b = run_sweep(spec), run_sweep(spec)
        assert a.rows == b.rows
        assert dataset_to_csv(a) == dataset_to_csv(b)

    def test_conditioned_visibility_monotone_toward_one(self):
        grid = (0.01, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0)
        ds = run_sweep(SweepSpec(alpha_sq_grid=grid, n_states_list=(2,)))
        vis = [r["visibility_conditioned"] for r in ds.rows]
        assert all(b >= a - 1e-12 for a, b in zip(vis, vis[1:]))
        assert vis[-1] > 0.999

    def test_fraction_ordering_across_state_sets(self):
        ds = run_sweep(SweepSpec(alpha_sq_grid=(0.5,), n_states_list=(2, 4, 8)))
        f2, f4, f8 = (r["correct_state_fraction"] for r in ds.rows)
        assert f2 > f4 > f8

    def test_montecarlo_columns_and_seed_determinism(self):
        spec = SweepSpec(
            alpha_sq_grid=(0.5, 0.94),
            n_states_list=(2,),
            mode="montecarlo",
            n_pulses=50_000,
            seed=77,
        )
        a, b = run_sweep(spec), run_sweep(spec)
        assert a.rows == b.rows
        row = a.rows[0]
        for column in (
            "mc_success_probability",
            "mc_success_probability_se",
            "mc_correct_state_fraction",
            "mc_correct_state_fraction_se",
            "mc_fidelity",
            "mc_fidelity_se",
        ):
            assert column in row
        p, se = row["mc_success_probability"], row["mc_success_probability_se"]
        assert abs(p - row["success_probability"]) < 5.0 * se

    def test_montecarlo_respects_worker_count(self):
        spec = SweepSpec(
            alpha_sq_grid=(0.5,), n_states_list=(2,), mode="montecarlo", n_pulses=150_000, seed=5
        )
        assert run_sweep(spec, workers=1).rows == run_sweep(spec, workers=3).rows


class TestSerialization:
    def test_csv_round_trip(self, tmp_path):
        spec = SweepSpec(alpha_sq_grid=(0.1, 0.9), n_states_list=(2, 4))
        ds = run_sweep(spec)
        path = str(tmp_path / "rows.csv")
        write_dataset(ds, path, "csv")
        rows = read_csv_rows(path)
        assert rows == ds.rows

    def test_json_round_trip(self, tmp_path):
        spec = SweepSpec(
            alpha_sq_grid=(0.5,), n_states_list=(2,), mode="montecarlo", n_pulses=20_000
        )
        ds = run_sweep(spec)
        path = str(tmp_path / "rows.json")
        write_dataset(ds, path, "json")
        back = read_json_dataset(path)
        assert back.rows == ds.rows
        assert back.spec["n_pulses"] == 20_000

    def test_write_failure_carries_path(self, tmp_path):
        ds = run_sweep(SweepSpec(alpha_sq_grid=(0.1,), n_states_list=(2,)))
        with pytest.raises(OSError, match="no/such/dir"):
            write_dataset(ds, str(tmp_path / "no/such/dir/x.csv"), "csv")

    def test_count_table_round_trip(self, tmp_path):
        from scamp.sweep import read_count_table

        counts = CountTable(10.0, 2.0, 3.0, 4.0)
        path = str(tmp_path / "counts.json")
        write_count_table(counts, path)
        assert read_count_table(path) == counts
        csv_path = tmp_path / "counts.csv"
        csv_path.write_text("n_A_sig,n_B_sig,n_A_vac,n_B_vac\n10,2,3,4\n")
        assert read_count_table(str(csv_path)) == counts


class TestReproduceFigure:
    def test_unknown_id_rejected(self):
        with pytest.raises(ConfigError):
            reproduce_figure("fig5")

    def test_fig3a_ideal_conditioned_curve_is_unity(self):
        ideal = DetectorBank.uniform(DetectorModel.ideal())
        ds = reproduce_figure("fig3a", detectors=ideal, alpha_sq_grid=(0.1, 0.5, 1.0, 2.0))
        for row in ds.rows:
            assert row["visibility_conditioned"] == pytest.approx(1.0, abs=1e-9)

    def test_fig3b_fidelity_band(self):
        ds = reproduce_figure("fig3b", alpha_sq_grid=(0.5,))
        assert ds.rows[0]["fidelity"] >= 0.98

    def test_fig4_rate_near_quoted_value(self):
        # the default success-rate grid contains the quoted operating point
        ds = reproduce_figure("fig4")
        row = next(r for r in ds.rows if r["alpha_sq"] == 0.94)
        assert 13_000.0 <= row["success_rate_per_s"] <= 39_000.0

    def test_dataset_is_labeled_model_curves(self):
        ds = reproduce_figure("fig4", alpha_sq_grid=(0.5,))
        assert ds.spec["data"] == "model-curves"
        assert ds.spec["figure_id"] == "fig4"
        assert list(ds.rows[0].keys()) == ["alpha_sq", "success_rate_per_s"]


class TestRunEstimator:
    def test_report_contains_both_conventions(self):
        counts = CountTable(500.0, 1.0, 40.0, 42.0)
        report = run_estimator(counts, g2a2=1.69, eta_l=0.39)
        assert set(report) >= {
            "n_sig", "n_vac", "p_sig", "p_vac", "fidelity_standard", "fidelity_doubled",
        }
        assert report["fidelity_doubled"] <= report["fidelity_standard"]
        assert report["p_sig"] + report["p_vac"] == pytest.approx(1.0, abs=1e-12)

    def test_all_zero_counts_flagged(self):
        with pytest.raises(InsufficientSignalError):
            run_estimator(CountTable(0.0, 0.0, 0.0, 0.0), g2a2=0.9, eta_l=0.4)


def run_cli(args):
    return cli.main(args)


class TestCli:
    def test_selfcheck_passes(self, capsys):
        assert run_cli(["selfcheck"]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out and "[FAIL]" not in out

    def test_sweep_with_config_and_output(self, tmp_path, capsys):
        config = tmp_path / "run.ini"
        config.write_text(
            "[sweep]\n"
            "alpha_sq = 0.1,0.5\n"
            "n_states = 2,4\n"
            "mode = analytic\n"
            "[output]\n"
            f"path = {tmp_path / 'out.csv'}\n"
            "format = csv\n"
        )
        assert run_cli(["sweep", "--config", str(config)]) == 0
        rows = read_csv_rows(str(tmp_path / "out.csv"))
        assert len(rows) == 4
        assert rows[0]["n_states"] == 2

    def test_sweep_rejects_unknown_key(self, tmp_path, capsys):
        config = tmp_path / "bad.ini"
        config.write_text("[sweep]\nalpha_q = 0.1\n")
        assert run_cli(["sweep", "--config", str(config)]) == 2
        assert "unknown key" in capsys.readouterr().err

    def test_sweep_rejects_unknown_section(self, tmp_path, capsys):
        config = tmp_path / "bad.ini"
        config.write_text("[detector.dx]\nefficiency = 0.4\n")
        assert run_cli(["sweep", "--config", str(config)]) == 2

    def test_sweep_rejects_missing_config_file(self, capsys):
        assert run_cli(["sweep", "--config", "/no/such/file.ini"]) == 2

    def test_sweep_env_worker_override_validated(self, monkeypatch, capsys):
        monkeypatch.setenv("SCAMP_WORKERS", "zero")
        assert run_cli(["sweep", "--mode", "analytic"]) == 2
        monkeypatch.setenv("SCAMP_WORKERS", "2")
        assert run_cli(["sweep", "--mode", "analytic"]) == 0

    def test_figure_writes_parseable_csv(self, tmp_path):
        out = str(tmp_path / "fig.csv")
        code = run_cli(["figure", "--id", "fig3b", "--alpha-sq", "0.3,0.5", "--output", out])
        assert code == 0
        rows = read_csv_rows(out)
        assert [r["alpha_sq"] for r in rows] == [0.3, 0.5]

    def test_figure_json_spec_echo(self, tmp_path):
        out = str(tmp_path / "fig.json")
        assert run_cli(["figure", "--id", "fig4", "--alpha-sq", "0.94", "--output", out,
                        "--format", "json"]) == 0
        ds = read_json_dataset(out)
        assert ds.spec["figure_id"] == "fig4"

    def test_figure_unknown_id(self, capsys):
        assert run_cli(["figure", "--id", "fig7"]) == 2

    def test_figure_honors_config_detector_blocks(self, tmp_path):
        config = tmp_path / "ideal.ini"
        config.write_text(
            "[detector.d0]\nefficiency = 1.0\nloss = 1.0\ndark_prob = 0.0\n"
            "[detector.d1]\nefficiency = 1.0\nloss = 1.0\ndark_prob = 0.0\n"
            "[detector.da]\nefficiency = 1.0\nloss = 1.0\ndark_prob = 0.0\n"
            "[detector.db]\nefficiency = 1.0\nloss = 1.0\ndark_prob = 0.0\n"
        )
        out = str(tmp_path / "fig3a.csv")
        assert run_cli(["figure", "--id", "fig3a", "--config", str(config),
                        "--alpha-sq", "0.5,1.0", "--output", out]) == 0
        for row in read_csv_rows(out):
            assert row["visibility_conditioned"] == pytest.approx(1.0, abs=1e-9)

    def test_estimate_end_to_end_against_analytic_mixture(self, tmp_path, capsys):
        # seeded run, unconditioned two-state output: half amplified, half vacuum
        det = params.default_detector()
        cfg = params.default_amplifier(0.94, 2)
        ana = params.default_analysis(cfg, epsilon=0.0)
        spec = RunSpec(
            amplifier=cfg,
            detectors=DetectorBank.uniform(det),
            analysis=ana,
            n_pulses=1_000_000,
            master_seed=31415,
        )
        tally = simulate_run(spec)
        counts = conditioned_counts(tally, Conditioning.NONE)
        path = str(tmp_path / "counts.json")
        write_count_table(counts, path)
        g2a2 = ana.ref_mean_photons()
        eta_l = det.eta_l()
        assert run_cli([
            "estimate", "--counts", path,
            "--g2a2", f"{g2a2!r}", "--eta-l", f"{eta_l!r}",
            "--vacuum-denominator", "per-port",
            "--output", str(tmp_path / "report.json"),
        ]) == 0
        report = json.loads((tmp_path / "report.json").read_text())
        mixture = output_mixture(cfg, det, det, 0, Conditioning.NONE)
        f_true = mixture_fidelity(mixture, ana.reference_amplitude)
        # 5 sigma via the delta method on the two class inversions
        n_sig, n_vac = conditioned_class_totals(tally, Conditioning.NONE)
        e2 = math.exp(-2.0 * eta_l * g2a2)
        var_sig = n_sig * (1.0 - e2) * e2 / (1.0 - e2) ** 2
        p_vac = 1.0 - math.exp(-0.5 * eta_l * g2a2)
        var_vac = n_vac * (1.0 - p_vac) / (2.0 * p_vac)
        total = n_sig + n_vac
        var_p = (n_vac**2 * var_sig + n_sig**2 * var_vac) / total**4
        sigma_f = (1.0 - math.exp(-g2a2)) * math.sqrt(var_p)
        assert abs(report["fidelity_standard"] - f_true) < 5.0 * sigma_f

    def test_estimate_zero_counts_is_runtime_error(self, tmp_path, capsys):
        path = str(tmp_path / "zero.json")
        write_count_table(CountTable(0.0, 0.0, 0.0, 0.0), path)
        assert run_cli(["estimate", "--counts", path, "--g2a2", "0.9"]) == 3
        assert "runtime error" in capsys.readouterr().err

    def test_estimate_malformed_file(self, tmp_path, capsys):
        path = tmp_path / "garbage.json"
        path.write_text("{not json")
        assert run_cli(["estimate", "--counts", str(path), "--g2a2", "0.9"]) == 2
