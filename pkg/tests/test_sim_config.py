"""Tests for config files, grid syntax and presets."""
import pytest

from src.config.presets import (
    BETA_PRESETS,
    LAMBDA_PRESETS,
    get_grid_preset,
    get_param_preset,
)
from src.config.sim_config import (
    params_from_dict,
    params_to_dict,
    parse_config,
    parse_config_text,
    parse_grid,
    render_defaults,
)
from src.domain.errors import ConfigError, ParameterError
from src.domain.models import AssociationPolicy, PathLossMode, Region, SimParams


class TestParseConfig:
    """Test the flat key=value format."""

    def test_empty_file_gives_defaults(self):
        """Test an empty file yields the compiled defaults."""
        params = parse_config_text("")

        assert params == SimParams()
        assert params.eta == 0.7
        assert params.theta_t_db == 5.0
        assert params.p_s_dbm == 23.0

    def test_values_and_comments(self):
        """Test keys, comments and whitespace are handled."""
        text = """
        # ultra-dense point
        lambda_s = 0.05   # per m^2
        beta=0.25
        association = offgrid_only
        pathloss_mode = single
        alpha_near = 4
        clamp_gain = true
        n_trials = 2e3
        """
        params = parse_config_text(text)

        assert params.lambda_s == 0.05
        assert params.lambda_m == 0.05 / 50
        assert params.beta == 0.25
        assert params.association == AssociationPolicy.OFFGRID_ONLY
        assert params.path_loss.mode == PathLossMode.SINGLE
        assert params.path_loss.clamp_gain is True
        assert params.n_trials == 2000

    def test_lambda_ratio(self):
        """Test lambda_m derives from lambda_ratio when unset."""
        params = parse_config_text("lambda_s = 0.01\nlambda_ratio = 20\n")

        assert params.lambda_m == 0.01 / 20

    def test_explicit_lambda_m(self):
        """Test an explicit lambda_m wins over the default coupling."""
        params = parse_config_text("lambda_s = 0.01\nlambda_m = 0.0\n")

        assert params.lambda_m == 0.0

    def test_beta_out_of_range_names_key_and_line(self):
        """Test beta=1.5 is a range error naming the key and line."""
        with pytest.raises(ConfigError) as exc_info:
            parse_config_text("seed = 3\nbeta = 1.5\n")

        assert exc_info.value.key == "beta"
        assert exc_info.value.line == 2
        assert "beta" in str(exc_info.value)
        assert str(exc_info.value).startswith("line 2:")

    def test_single_mode_with_unequal_exponents(self):
        """Test single mode rejects alpha_near != alpha_far."""
        with pytest.raises(ConfigError) as exc_info:
            parse_config_text("pathloss_mode = single\n")

        assert exc_info.value.key == "pathloss_mode"
        assert exc_info.value.line == 1

    @pytest.mark.parametrize(
        "text, line",
        [
            ("beta = 0.5\nfoo = 1\n", 2),
            ("beta 0.5\n", 1),
            ("beta = 0.5\nbeta = 0.6\n", 2),
            ("# c\nn_trials = 1.5\n", 2),
            ("association = nearest\n", 1),
            ("lambda_m = 1e-4\nlambda_ratio = 10\n", 2),
            ("eta =\n", 1),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        """Test unknown, malformed, duplicate and conflicting entries."""
        with pytest.raises(ConfigError) as exc_info:
            parse_config_text(text)

        assert exc_info.value.line == line

    def test_config_error_is_parameter_error(self):
        """Test ConfigError can be caught as ParameterError and ValueError."""
        with pytest.raises(ParameterError):
            parse_config_text("beta = 2\n")
        with pytest.raises(ValueError):
            parse_config_text("beta = 2\n")

    def test_parse_config_file(self, tmp_path):
        """Test reading a config file from disk."""
        path = tmp_path / "point.cfg"
        path.write_text("seed = 42\nregion_radius_m = 250\n", encoding="utf-8")

        params = parse_config(path)

        assert params.seed == 42
        assert params.region == Region(250.0)

    def test_missing_file(self, tmp_path):
        """Test a missing file is a ConfigError."""
        with pytest.raises(ConfigError):
            parse_config(tmp_path / "missing.cfg")


class TestParamsDict:
    """Test flat dictionaries used by manifests."""

    def test_round_trip(self):
        """Test params_from_dict(params_to_dict(p)) == p."""
        params = SimParams(
            lambda_s=0.031,
            lambda_m=0.0007,
            beta=0.35,
            association="offgrid_only",
            target_sbs_count=500.0,
            seed=2**63 + 5,
        )

        assert params_from_dict(params_to_dict(params)) == params

    def test_unknown_key(self):
        """Test unknown keys are rejected."""
        with pytest.raises(ParameterError):
            params_from_dict({"gamma": 1.0})


class TestRenderDefaults:
    """Test --show-defaults output."""

    def test_defaults_parse_back(self):
        """Test rendered defaults are a valid config giving the defaults."""
        text = render_defaults()

        assert "eta" in text and "0.7" in text
        assert parse_config_text(text) == SimParams()

    def test_every_line_has_provenance(self):
        """Test each key line carries a comment."""
        lines = [l for l in render_defaults().splitlines() if not l.startswith("#")]

        assert lines
        assert all("#" in line for line in lines)


class TestParseGrid:
    """Test grid syntax."""

    def test_inclusive_range(self):
        """Test 0:1:0.25 gives five values."""
        assert parse_grid("0:1:0.25") == (0.0, 0.25, 0.5, 0.75, 1.0)

    def test_decimal_step(self):
        """Test 0:1:0.1 gives eleven clean values."""
        grid = parse_grid("0:1:0.1")

        assert len(grid) == 11
        assert grid[3] == 0.3
        assert grid[-1] == 1.0

    def test_log_grid(self):
        """Test log:1e-3:1:4 gives four decades."""
        assert parse_grid("log:1e-3:1:4") == pytest.approx((1e-3, 1e-2, 1e-1, 1.0))

    def test_comma_list(self):
        """Test explicit values."""
        assert parse_grid("0.1, 0.2,0.4") == (0.1, 0.2, 0.4)

    @pytest.mark.parametrize("text", ["", "0:1", "1:0:0.1", "0:1:0", "log:0:1:3", "a,b"])
    def test_invalid(self, text):
        """Test malformed grids raise ConfigError."""
        with pytest.raises(ConfigError):
            parse_grid(text)


class TestPresets:
    """Test shipped presets."""

    def test_sparse_mean_counts(self):
        """Test sparse grid spans a mean count of 10 to 1000 in the window."""
        grid = LAMBDA_PRESETS["sparse"].values
        area = Region().area_m2

        assert len(grid) == 7
        assert grid[0] * area == pytest.approx(10.0)
        assert grid[-1] * area == pytest.approx(1000.0)

    def test_ultra_dense(self):
        """Test ultra-dense grid spans 1e-3 to 1 with an adaptive window."""
        preset = get_grid_preset("lambda_s", "ultra-dense")

        assert len(preset.values) == 10
        assert preset.values[0] == pytest.approx(1e-3)
        assert preset.values[-1] == pytest.approx(1.0)
        assert preset.target_sbs_count > 0

    def test_beta_grids(self):
        """Test standard beta grid is 0..1 and association grid stops at 0.9."""
        assert BETA_PRESETS["standard"].values == tuple(i / 10 for i in range(11))
        assert BETA_PRESETS["association"].values[-1] == 0.9

    def test_grids_strictly_increasing(self):
        """Test every preset grid is strictly increasing."""
        for preset in [*LAMBDA_PRESETS.values(), *BETA_PRESETS.values()]:
            values = preset.values
            assert all(b > a for a, b in zip(values, values[1:])), preset.name

    def test_unknown_presets(self):
        """Test unknown names raise ParameterError."""
        with pytest.raises(ParameterError):
            get_grid_preset("beta", "nope")
        with pytest.raises(ParameterError):
            get_param_preset("nope")

    def test_param_presets(self):
        """Test defaults preset equals the compiled defaults."""
        assert get_param_preset("defaults") == SimParams()
        assert get_param_preset("ultra-dense").target_sbs_count > 0
