"""Tests for the command-line interface."""
import json
from unittest.mock import patch

import pytest

from src.cli.app import (
    ESTIMATE_COLUMNS,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_RUNTIME_ERROR,
    OPTIMIZE_COLUMNS,
    RunRequest,
    execute,
    run,
)
from src.domain.errors import SimulationError, SingularDistanceError
from src.domain.models import SimParams
from src.fs.utils import manifest_path_for, read_csv
from src.service.monte_carlo_service import MonteCarloService, run_trial
from src.service.sweep_service import SweepService


@pytest.fixture
def small_config(tmp_path):
    """Config file for a fast ultra-dense point."""
    path = tmp_path / "small.cfg"
    path.write_text(
        "# fast point\nlambda_s = 0.02\ntarget_sbs_count = 40\n", encoding="utf-8"
    )
    return path


def invoke(*argv) -> int:
    return run([str(a) for a in argv])


class TestPoint:
    """Test the point command."""

    def test_same_seed_same_bytes(self, tmp_path):
        """Test two runs with the same seed write identical CSVs."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"

        for out in (first, second):
            code = invoke(
                "point", "--config", "defaults", "--seed", 7, "--trials", 40, "--out", out
            )
            assert code == EXIT_OK

        assert first.read_bytes() == second.read_bytes()

    def test_columns_and_values(self, tmp_path, small_config):
        """Test the point layout and its parsed values."""
        out = tmp_path / "point.csv"

        assert invoke("point", "--config", small_config, "--trials", 100, "--out", out) == 0

        rows = read_csv(out)
        assert list(rows[0]) == ["lambda_s", "lambda_m", "beta", *ESTIMATE_COLUMNS]
        row = rows[0]
        assert float(row["lambda_s"]) == 0.02
        assert float(row["lambda_m"]) == 0.02 / 50
        assert 0.0 <= float(row["outage_ci_lo"]) <= float(row["outage_mean"])
        assert float(row["outage_mean"]) <= float(row["outage_ci_hi"]) <= 1.0
        assert int(row["n_trials"]) + int(row["n_failed"]) == 100

    def test_thread_count_does_not_change_bytes(self, tmp_path, small_config):
        """Test 1, 2 and 8 threads write identical CSVs."""
        outputs = []
        for threads in (1, 2, 8):
            out = tmp_path / f"t{threads}.csv"
            code = invoke(
                "point",
                "--config",
                small_config,
                "--trials",
                600,
                "--threads",
                threads,
                "--out",
                out,
            )
            assert code == EXIT_OK
            outputs.append(out.read_bytes())

        assert outputs[0] == outputs[1] == outputs[2]

    def test_manifest_written(self, tmp_path, small_config):
        """Test a manifest accompanies the CSV."""
        out = tmp_path / "point.csv"

        invoke("point", "--config", small_config, "--seed", 11, "--trials", 30, "--out", out)

        manifest = json.loads(manifest_path_for(out).read_text(encoding="utf-8"))
        assert manifest["command"] == "point"
        assert manifest["seed"] == 11
        assert manifest["params"]["n_trials"] == 30
        assert manifest["params"]["lambda_s"] == 0.02
        assert manifest["n_trials"]["per_point"] == 30


class TestSweeps:
    """Test sweep and comparison commands."""

    def test_sweep_beta_grid(self, tmp_path, small_config):
        """Test --grid 0:1:0.25 gives five rows in grid order."""
        out = tmp_path / "beta.csv"

        code = invoke(
            "sweep-beta", "--config", small_config, "--grid", "0:1:0.25",
            "--trials", 30, "--out", out,
        )

        assert code == EXIT_OK
        rows = read_csv(out)
        assert [float(r["param_value"]) for r in rows] == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert list(rows[0]) == ["param_value", *ESTIMATE_COLUMNS]

    def test_sweep_lambda(self, tmp_path, small_config):
        """Test a lambda sweep on an explicit grid."""
        out = tmp_path / "lambda.csv"

        code = invoke(
            "sweep-lambda", "--config", small_config, "--grid", "0.01,0.03",
            "--trials", 30, "--out", out,
        )

        assert code == EXIT_OK
        assert [float(r["param_value"]) for r in read_csv(out)] == [0.01, 0.03]

    def test_compare_association(self, tmp_path, small_config):
        """Test rows are tagged with both association policies."""
        out = tmp_path / "assoc.csv"

        code = invoke(
            "compare-association", "--config", small_config, "--grid", "0.2,0.6",
            "--trials", 30, "--out", out,
        )

        assert code == EXIT_OK
        rows = read_csv(out)
        assert {r["association"] for r in rows} == {"nearest_any", "offgrid_only"}
        assert len(rows) == 4

    def test_compare_pathloss(self, tmp_path, small_config):
        """Test rows are tagged with both path-loss modes."""
        out = tmp_path / "pathloss.csv"

        code = invoke(
            "compare-pathloss", "--config", small_config, "--grid", "0.01,0.02",
            "--trials", 30, "--out", out,
        )

        assert code == EXIT_OK
        assert {r["pathloss_mode"] for r in read_csv(out)} == {"dual", "single"}

    def test_optimize(self, tmp_path, small_config):
        """Test one optimum row per level."""
        out = tmp_path / "opt.csv"

        code = invoke(
            "optimize", "--config", small_config, "--over", "beta",
            "--objective", "max_ee", "--levels", "0.01,0.02",
            "--grid", "0,0.5,1", "--trials", 30, "--out", out,
        )

        assert code == EXIT_OK
        rows = read_csv(out)
        assert list(rows[0]) == OPTIMIZE_COLUMNS
        assert [float(r["level"]) for r in rows] == [0.01, 0.02]
        assert all(r["objective"] == "max_ee" for r in rows)
        assert all(r["ci_separated"] in ("true", "false") for r in rows)


class TestOptimizeAccounting:
    """Test trial accounting of the optimize command."""

    def test_failures_counted_over_every_grid_point(self, logger):
        """Test excluded trials on any grid point reach n_failed and the totals."""
        sweeps = SweepService(logger, MonteCarloService(logger, threads=1))
        request = RunRequest(
            "optimize",
            SimParams(lambda_s=0.0, n_trials=10),
            grid=(0.0, 0.5),
            options={
                "over": "beta",
                "objective": "min_outage",
                "levels": [0.0],
                "lambda_ratio": 50.0,
            },
        )
        calls = iter(range(100))

        def flaky(p, rng):
            if next(calls) % 5 == 0:
                raise SingularDistanceError("co-located")
            return run_trial(p, rng)

        with patch("src.service.monte_carlo_service.run_trial", side_effect=flaky):
            output = execute(request, sweeps)

        assert output.n_failed == 4
        assert output.n_trials == {"per_point": 10, "outage": 16, "ee": 16, "rate": 16}
        assert len(output.rows) == 1


class TestReplay:
    """Test manifest replay."""

    def test_replay_in_place_reproduces_bytes(self, tmp_path, small_config):
        """Test replay rewrites a byte-identical CSV."""
        out = tmp_path / "beta.csv"
        invoke(
            "sweep-beta", "--config", small_config, "--grid", "0,0.5",
            "--trials", 40, "--out", out,
        )
        original = out.read_bytes()
        manifest = manifest_path_for(out)
        manifest_text = manifest.read_text(encoding="utf-8")
        out.unlink()

        assert invoke("replay", manifest) == EXIT_OK

        assert out.read_bytes() == original
        assert manifest.read_text(encoding="utf-8") == manifest_text

    def test_replay_to_new_path(self, tmp_path, small_config):
        """Test replay with --out writes a new CSV and manifest."""
        out = tmp_path / "point.csv"
        copy = tmp_path / "replayed.csv"
        invoke("point", "--config", small_config, "--trials", 40, "--out", out)

        code = invoke("replay", manifest_path_for(out), "--threads", 3, "--out", copy)

        assert code == EXIT_OK
        assert copy.read_bytes() == out.read_bytes()
        assert manifest_path_for(copy).exists()

    def test_missing_manifest(self, tmp_path):
        """Test a missing manifest is a configuration error."""
        assert invoke("replay", tmp_path / "none.manifest.json") == EXIT_CONFIG_ERROR


class TestErrors:
    """Test exit statuses."""

    def test_bad_config_value(self, tmp_path):
        """Test beta = 1.5 in a config file exits 1 and writes nothing."""
        config = tmp_path / "bad.cfg"
        config.write_text("beta = 1.5\n", encoding="utf-8")
        out = tmp_path / "out.csv"

        assert invoke("point", "--config", config, "--out", out) == EXIT_CONFIG_ERROR
        assert not out.exists()

    @pytest.mark.parametrize(
        "argv",
        [
            ["bogus"],
            [],
            ["point", "--trials", "0"],
            ["sweep-beta", "--grid", "0:1"],
            ["sweep-beta", "--grid", "0,0.5", "--preset", "standard"],
            ["sweep-lambda", "--preset", "nope"],
            ["point", "--config", "no-such-preset-or-file"],
        ],
    )
    def test_bad_arguments(self, argv):
        """Test malformed invocations exit 1."""
        assert run(argv) == EXIT_CONFIG_ERROR

    def test_runtime_error(self, tmp_path, small_config):
        """Test a simulation failure exits 2 and leaves no CSV."""
        out = tmp_path / "out.csv"

        with patch.object(
            MonteCarloService, "estimate", side_effect=SimulationError("all trials failed")
        ):
            code = invoke("point", "--config", small_config, "--out", out)

        assert code == EXIT_RUNTIME_ERROR
        assert not out.exists()

    def test_show_defaults(self, capsys):
        """Test --show-defaults prints the defaults and exits 0."""
        assert run(["--show-defaults"]) == EXIT_OK

        printed = capsys.readouterr().out
        assert "eta" in printed
        assert "theta_t_db" in printed
