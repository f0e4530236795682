import pytest

from mopsearch.config import ConfigError, load_config, parse_config

VALID = {
    "model": {"builtin": "cantilever", "n_modes": 5},
    "damage": {"max_severity": 0.3, "theta_min": 0.15},
    "search": {"hof_threshold": 50, "resolution_exponent": 20, "budget": 1000},
    "twin": {"severity": 0.04, "center": 0.375, "extent": 0.03, "seed": 0},
    "output": {"directory": "out"},
}


def copy_of(data):
    return {k: dict(v) if isinstance(v, dict) else v for k, v in data.items()}


class TestParseConfig:
    def test_valid(self):
        config = parse_config(copy_of(VALID))
        assert config.builtin_model == "cantilever"
        assert config.n_modes == 5
        assert config.hof_threshold == 50
        assert config.budget == 1000
        assert config.twin.severity == 0.04
        assert config.measured_healthy is None

    def test_defaults(self):
        data = copy_of(VALID)
        del data["damage"]
        del data["search"]
        config = parse_config(data)
        assert config.max_severity == 0.3
        assert config.theta_min == 0.15
        assert config.resolution_exponent == 20
        assert config.budget is None

    def test_unknown_keys_rejected_everywhere(self):
        data = copy_of(VALID)
        data["search"]["bogus"] = 1
        data["frobnicate"] = {}
        with pytest.raises(ConfigError) as err:
            parse_config(data)
        joined = " ".join(err.value.errors)
        assert "bogus" in joined and "frobnicate" in joined

    def test_every_violation_listed(self):
        data = copy_of(VALID)
        data["model"] = {"builtin": "cantilever", "file": "x.toml", "n_modes": 0}
        data["search"]["hof_threshold"] = -3
        data["damage"]["max_severity"] = 2.0
        with pytest.raises(ConfigError) as err:
            parse_config(data)
        assert len(err.value.errors) >= 4

    def test_twin_xor_measurements(self):
        data = copy_of(VALID)
        data["measurements"] = {"healthy": "a.csv", "damaged": "b.csv"}
        with pytest.raises(ConfigError):
            parse_config(data)
        del data["twin"]
        config = parse_config(data)
        assert config.measured_healthy == "a.csv"
        data2 = copy_of(VALID)
        del data2["twin"]
        with pytest.raises(ConfigError):
            parse_config(data2)

    def test_bounds_override(self):
        data = copy_of(VALID)
        data["damage"].update({"severity": [0.0, 0.02], "center": [0.0, 8.04],
                               "extent": [0.0, 0.1]})
        config = parse_config(data)
        assert config.bounds_override == ((0.0, 0.02), (0.0, 8.04), (0.0, 0.1))

    def test_partial_bounds_rejected(self):
        data = copy_of(VALID)
        data["damage"]["severity"] = [0.0, 0.02]
        with pytest.raises(ConfigError):
            parse_config(data)

    def test_weights_validated(self):
        data = copy_of(VALID)
        data["search"]["weights"] = [1.0, -1.0]
        with pytest.raises(ConfigError):
            parse_config(data)
        data["search"]["weights"] = [2.0, 0.5]
        assert parse_config(data).weights == (2.0, 0.5)

    def test_model_theory_override(self):
        data = copy_of(VALID)
        data["model"]["theory"] = "timoshenko"
        assert parse_config(data).theory == "timoshenko"
        data["model"]["theory"] = "nonsense"
        with pytest.raises(ConfigError):
            parse_config(data)

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text(
            '[model]\nbuiltin = "cantilever"\n'
            "[twin]\nseverity = 0.04\ncenter = 0.375\nextent = 0.03\n"
            '[output]\ndirectory = "out"\n')
        config = load_config(path)
        assert config.builtin_model == "cantilever"
        assert config.n_modes == 5

    def test_invalid_toml_reported(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("[model\n")
        with pytest.raises(ConfigError) as err:
            load_config(path)
        assert "invalid TOML" in err.value.errors[0]

    def test_missing_output_dir(self):
        data = copy_of(VALID)
        del data["output"]
        with pytest.raises(ConfigError):
            parse_config(data)
