"""Tests for the command-line layer: configuration, presets, CSV, reports, main()."""

import json

import numpy as np
import pytest

from main import main
from src import constants
from src.cli import (
    FIELDS,
    SWEEP_HEADER,
    BVPCommands,
    PresetLibrary,
    RegressionTable,
    Report,
    RunConfig,
    env_name,
    list_criteria,
    parse_value,
    read_report,
    read_trajectory_csv,
    select,
    uniform_times,
    write_trajectory_csv,
)
from src.model import CheckResult, GSpec, InvalidConfig, ProblemSpec

# three distinct raw values per kind: (file, env, flag)
RAW_BY_KIND = {
    "float": ("1.5", "2.5", "3.5"),
    "int": ("3", "4", "5"),
    "floats": ("0,1", "0,2", "0,3"),
    "bool": ("false", "true", "false"),
    "choice": ("oracle", "polynomial", "quadratic"),
    "str": ("x", "y", "z"),
}


def run_main(capsys, *argv, environ=None):
    code = main(list(argv), environ={} if environ is None else environ)
    return code, capsys.readouterr().out


class TestParseValue:

    @pytest.mark.parametrize("key, raw, expected", [
        ("a", "-1.25", -1.25),
        ("n", "64", 64),
        ("n", "1e2", 100),
        ("coeffs", "0, 0, 0.5", (0.0, 0.0, 0.5)),
        ("coeffs", [0, 1], (0.0, 1.0)),
        ("override", "yes", True),
        ("override", False, False),
        ("g", "Oracle", "oracle"),
        ("out", "run.csv", "run.csv"),
        ("b", "  ", None),
    ])
    def test_valid(self, key, raw, expected):
        assert parse_value(key, raw) == expected

    @pytest.mark.parametrize("key, raw", [
        ("a", "abc"),
        ("n", "1.5"),
        ("override", "maybe"),
        ("g", "cubic"),
        ("coeffs", "0,x"),
    ])
    def test_invalid_names_key(self, key, raw):
        with pytest.raises(InvalidConfig) as exc:
            parse_value(key, raw)
        assert exc.value.field == key

    def test_unknown_key(self):
        with pytest.raises(InvalidConfig) as exc:
            parse_value("gamma", "1")
        assert exc.value.field == "gamma"

    def test_env_name(self):
        assert env_name("t_max") == "HFBVP_T_MAX"


class TestRunConfig:

    @pytest.mark.parametrize("key", sorted(FIELDS))
    def test_layer_precedence(self, tmp_path, key):
        file_raw, env_raw, flag_raw = RAW_BY_KIND[FIELDS[key][0]]
        path = tmp_path / "run.cfg"
        path.write_text(f"# layered\n{key} = {file_raw}\n")
        environ = {env_name(key): env_raw}

        cfg = RunConfig.layered(config_path=str(path), environ={})
        assert cfg.get(key) == parse_value(key, file_raw)
        assert cfg.sources[key] == f"file:{path}"

        cfg = RunConfig.layered(config_path=str(path), environ=environ)
        assert cfg.get(key) == parse_value(key, env_raw)
        assert cfg.sources[key] == f"env:{env_name(key)}"

        cfg = RunConfig.layered(config_path=str(path), environ=environ, flags={key: flag_raw})
        assert cfg.get(key) == parse_value(key, flag_raw)
        assert cfg.sources[key] == "flag"

    def test_defaults(self):
        cfg = RunConfig.layered(environ={})
        assert cfg.get("t_max") == constants.T_MAX
        assert cfg.get("c") is None
        assert set(cfg.sources.values()) == {"default"}

    def test_preset_is_lowest_layer(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("a=2\n")
        cfg = RunConfig.layered(preset="oracle", config_path=str(path), environ={})
        assert cfg.get("g") == "oracle"
        assert cfg.sources["c"] == "preset:oracle"
        assert cfg.get("a") == 2.0
        assert cfg.sources["a"] == f"file:{path}"

    def test_none_flags_ignored(self):
        cfg = RunConfig.layered(environ={"HFBVP_BETA": "0.75"}, flags={"beta": None})
        assert cfg.get("beta") == 0.75

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidConfig) as exc:
            RunConfig.layered(config_path=str(tmp_path / "absent.cfg"), environ={})
        assert exc.value.field == "config"

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("a=1\nnot a pair\n")
        with pytest.raises(InvalidConfig) as exc:
            RunConfig.layered(config_path=str(path), environ={})
        assert ":2:" in str(exc.value)

    def test_require(self):
        cfg = RunConfig.layered(environ={})
        with pytest.raises(InvalidConfig) as exc:
            cfg.require("c")
        assert str(exc.value) == "c: is required but not set"

    def test_problem_from_layers(self):
        cfg = RunConfig.layered(environ={"HFBVP_C": "-2"},
                                flags={"g": "polynomial", "coeffs": "0,0,0.25"})
        problem = cfg.problem()
        assert problem.c == -2.0
        assert problem.g.describe() == "polynomial(0,0,0.25)"
        assert problem.controls.abs_tol == constants.ABS_TOL


class TestPresets:

    def test_builtin_names(self):
        assert PresetLibrary().names() == [
            "b-zero", "default-shoot", "mform", "oracle", "paper-b1-empty",
        ]

    def test_alias_resolves_to_preset(self):
        library = PresetLibrary()
        assert library.get("b1-empty") is library.get("paper-b1-empty")
        assert library.get("b1-empty").values["beta"] == 1.0

    def test_unknown_preset(self):
        with pytest.raises(InvalidConfig) as exc:
            PresetLibrary().get("nope")
        assert exc.value.field == "preset"
        assert "oracle" in str(exc.value)

    def test_custom_file(self, tmp_path):
        path = tmp_path / "presets.yaml"
        path.write_text(
            "presets:\n"
            "  - name: steep\n"
            "    values:\n"
            "      beta: 0.25\n"
            "      c: -0.1\n"
        )
        preset = PresetLibrary(str(path)).get("steep")
        assert preset.values == {"beta": 0.25, "c": -0.1}
        assert preset.description == ""

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidConfig):
            PresetLibrary(str(tmp_path / "none.yaml"))

    def test_committed_b_star_lookup(self):
        table = RegressionTable()
        entry = table.lookup(ProblemSpec(0.0, -1.0, GSpec.quadratic(0.5)))
        assert entry is not None
        assert entry.tolerance == 1e-6
        assert 1.9 < entry.b_star < 2.0
        assert table.lookup(ProblemSpec(1.0, -1.0, GSpec.quadratic(0.5))) is None
        assert table.lookup(ProblemSpec(0.0, -1.0, GSpec.oracle_cubic())) is None

    def test_committed_b_star_check(self):
        entry = RegressionTable().lookup(ProblemSpec(0.0, -1.0, GSpec.quadratic(0.5)))
        assert entry.check(entry.b_star + 5e-7).passed
        failed = entry.check(entry.b_star + 1e-5)
        assert not failed.passed
        assert failed.name == "regression_b_star"


class TestCsv:

    def test_uniform_times(self):
        ts = uniform_times(0.9, 0.05)
        assert len(ts) == 19
        assert ts[-1] == 0.9
        assert ts[3] == 0.15
        assert list(uniform_times(0.0, 0.05)) == [0.0]

    def test_uniform_times_needs_positive_dt(self):
        with pytest.raises(InvalidConfig):
            uniform_times(1.0, 0.0)

    def test_rewrite_is_byte_identical(self, tmp_path):
        data = np.array([[0.0, 1.0, -0.5, -0.25], [0.1, 0.1 + 0.2, 1.0 / 3.0, -1e-300]])
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        write_trajectory_csv(str(first), data)
        write_trajectory_csv(str(second), read_trajectory_csv(str(first)))
        assert first.read_bytes() == second.read_bytes()
        assert first.read_bytes().startswith(b"t,f,fp,fpp\n0,1,-0.5,-0.25\n")
        assert b"\r" not in first.read_bytes()

    def test_read_rejects_other_header(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("time,f\n0,1\n")
        with pytest.raises(ValueError):
            read_trajectory_csv(str(path))


class TestReport:

    def test_write_text_and_json(self, tmp_path):
        report = Report("shoot").add("b_star", 0.1 + 0.2).add("mu", None).add("ok", True)
        report.add("inf", float("inf")).add("iterations", 34)
        report.add_check(CheckResult.of("width", True, "narrow", value=0.375))
        json_path = report.write(str(tmp_path / "report.txt"))

        assert json_path == str(tmp_path / "report.json")
        text = read_report(str(tmp_path / "report.txt"))
        assert text["kind"] == "shoot"
        assert float(text["b_star"]) == 0.1 + 0.2
        assert text["mu"] == ""
        assert text["ok"] == "true"
        assert text["diag.width"] == "pass"
        assert text["diag.width.detail"] == "narrow"

        with open(json_path) as f:
            payload = json.load(f)
        assert payload["kind"] == "shoot"
        assert payload["mu"] is None
        assert payload["inf"] == "inf"
        assert payload["iterations"] == 34
        assert payload["diag.width.value"] == 0.375
        assert list(payload)[:3] == ["kind", "b_star", "mu"]

    def test_get(self):
        report = Report("verify").add("passed", "3/3")
        assert report.get("kind") == "verify"
        assert report.get("passed") == "3/3"
        with pytest.raises(KeyError):
            report.get("absent")


class TestCommandHandler:

    def test_registered_commands(self):
        handler = BVPCommands()
        assert handler.get_command_names() == ["shoot", "solve", "sweep", "transform", "verify"]
        assert handler.get_commands_by_category()["check"] == ["verify"]

    def test_help_overview(self):
        text = BVPCommands().get_help()
        assert text.splitlines()[0] == "check:"
        assert "  verify       Run the acceptance suite" in text.splitlines()
        assert "run:" in text

    def test_dispatch_unknown(self):
        assert BVPCommands().dispatch("plot", RunConfig()) is None

    def test_run_unknown_command(self, capsys):
        assert BVPCommands().run("plot", environ={}) == constants.EXIT_INVALID
        assert "Unknown command: plot" in capsys.readouterr().out


class TestAcceptanceRegistry:

    def test_twelve_criteria_in_order(self):
        names = [c.name for c in list_criteria()]
        assert len(names) == 12
        assert names[0] == "oracle"
        assert names[-1] == "blow-up"
        assert [c.number for c in list_criteria()] == list(range(1, 13))

    def test_select_subset_sorted(self):
        assert [c.name for c in select(["power-tail", " oracle "])] == ["oracle", "power-tail"]

    def test_select_unknown(self):
        with pytest.raises(InvalidConfig) as exc:
            select(["oracle", "bogus"])
        assert exc.value.field == "only"


class TestMain:

    def test_solve_oracle_preset(self, tmp_path, capsys):
        out = tmp_path / "oracle.csv"
        code, text = run_main(capsys, "solve", "--preset", "oracle", "--out", str(out))
        assert code == constants.EXIT_OK
        assert "type=II" in text.splitlines()
        data = read_trajectory_csv(str(out))
        assert data.shape == (19, 4)
        row = data[np.argmin(np.abs(data[:, 0] - 0.75))]
        assert row[0] == 0.75
        np.testing.assert_allclose(row[1:], [0.5, -1.0, -2.0], atol=1e-6)

    def test_solve_is_deterministic(self, tmp_path, capsys):
        first, second = tmp_path / "1.csv", tmp_path / "2.csv"
        argv = ["solve", "--c=-1", "--b", "0.5", "--t-max", "20", "--dt", "0.5"]
        assert run_main(capsys, *argv, "--out", str(first))[0] == constants.EXIT_OK
        assert run_main(capsys, *argv, "--out", str(second))[0] == constants.EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_solve_zero_slope(self, tmp_path, capsys):
        out = tmp_path / "b0.csv"
        code, text = run_main(capsys, "solve", "--preset", "b-zero", "--out", str(out))
        assert code == constants.EXIT_OK
        assert "type=II" in text
        assert "t0=0.0" in text
        assert out.read_text() == "t,f,fp,fpp\n0,0,0,-1\n"

    def test_solve_env_layer(self, tmp_path, capsys):
        out = tmp_path / "env.csv"
        code, _ = run_main(capsys, "solve", "--b", "0.1", "--out", str(out),
                           environ={"HFBVP_C": "-1", "HFBVP_DT": "0.01"})
        assert code == constants.EXIT_OK
        assert read_trajectory_csv(str(out))[1, 0] == 0.01

    def test_missing_c_is_invalid(self, tmp_path, capsys):
        code, text = run_main(capsys, "solve", "--b", "1", "--out", str(tmp_path / "x.csv"))
        assert code == constants.EXIT_INVALID
        assert "c: is required but not set" in text
        assert not (tmp_path / "x.csv").exists()

    def test_bad_flag_value_is_invalid(self, tmp_path, capsys):
        code, text = run_main(capsys, "solve", "--c=-1", "--b", "one",
                              "--out", str(tmp_path / "x.csv"))
        assert code == constants.EXIT_INVALID
        assert "b:" in text

    def test_positive_c_is_invalid(self, tmp_path, capsys):
        code, _ = run_main(capsys, "solve", "--c", "1", "--b", "1",
                           "--out", str(tmp_path / "x.csv"))
        assert code == constants.EXIT_INVALID

    def test_sweep_single_zero_slope(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code, text = run_main(capsys, "sweep", "--c=-1", "--b-min=0", "--b-max=0", "--n=1",
                              "--out", str(out))
        assert code == constants.EXIT_OK
        assert out.read_text() == ",".join(SWEEP_HEADER) + "\n0,II,0,,false\n"
        assert "monotone=true" in text

    def test_sweep_empty_grid(self, tmp_path, capsys):
        code, text = run_main(capsys, "sweep", "--c=-1", "--b-min=0", "--b-max=1", "--n=0",
                              "--out", str(tmp_path / "s.csv"))
        assert code == constants.EXIT_INVALID
        assert "n:" in text

    def test_sweep_reversed_bounds(self, tmp_path, capsys):
        code, _ = run_main(capsys, "sweep", "--c=-1", "--b-min=1", "--b-max=0",
                           "--out", str(tmp_path / "s.csv"))
        assert code == constants.EXIT_INVALID

    def test_sweep_rows(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code, text = run_main(capsys, "sweep", "--c=-1", "--b-min=-0.5", "--b-max=0.1",
                              "--n=3", "--out", str(out))
        assert code == constants.EXIT_OK
        lines = out.read_text().splitlines()
        assert len(lines) == 4
        assert [line.split(",")[1] for line in lines[1:]] == ["II", "II", "II"]
        assert "last_type_ii=0.1" in text

    def test_transform_out_of_range(self, capsys):
        code, text = run_main(capsys, "transform", "--m=-0.5")
        assert code == constants.EXIT_INVALID
        assert "(-1, -1/2)" in text

    def test_shoot_oracle_cubic_needs_override(self, tmp_path, capsys):
        code, text = run_main(capsys, "shoot", "--g", "oracle", "--a", "1", "--c=-0.25",
                              "--out", str(tmp_path / "r.txt"))
        assert code == constants.EXIT_INVALID
        assert "override" in text

    def test_verify_list(self, capsys):
        code, text = run_main(capsys, "verify", "--list")
        assert code == constants.EXIT_OK
        assert "m-correspondence" in text

    def test_verify_unknown_criterion(self, capsys):
        code, text = run_main(capsys, "verify", "--only", "bogus")
        assert code == constants.EXIT_INVALID
        assert "bogus" in text

    def test_verify_oracle(self, tmp_path, capsys):
        out = tmp_path / "verify.txt"
        code, text = run_main(capsys, "verify", "--only", "oracle", "--out", str(out))
        assert code == constants.EXIT_OK
        assert "passed=1/1" in text
        report = read_report(str(out))
        assert report["criterion.oracle"] == "pass"
        assert report["oracle.max_error"] == "pass"

    def test_verify_oracle_fails_with_loose_tolerance(self, capsys):
        code, text = run_main(capsys, "verify", "--only", "oracle",
                              environ={"HFBVP_ABS_TOL": "1e-2", "HFBVP_REL_TOL": "1e-2"})
        assert code == constants.EXIT_FAILED
        assert "passed=0/1" in text

    def test_top_level_help_lists_categories(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--help"], environ={})
        assert exc.value.code == 0
        text = capsys.readouterr().out
        assert "commands by category:" in text
        assert "check:" in text
        assert "  shoot        Locate the critical slope b_* and report it" in text

    def test_log_file(self, tmp_path, capsys):
        log = tmp_path / "console.log"
        code, _ = run_main(capsys, "-l", str(log), "verify", "--list")
        assert code == constants.EXIT_OK
        assert "first-integral" in log.read_text()

    @pytest.mark.timeout(300)
    def test_shoot_b1_empty(self, tmp_path, capsys):
        code, text = run_main(capsys, "shoot", "--preset", "paper-b1-empty",
                              "--out", str(tmp_path / "r.txt"))
        assert code == constants.EXIT_BRACKET
        assert "B1 is empty" in text

    @pytest.mark.slow
    @pytest.mark.timeout(300)
    def test_verify_cheap_criteria(self, capsys):
        code, text = run_main(capsys, "verify", "--only", "first-integral,b1-empty")
        assert code == constants.EXIT_OK
        assert "passed=2/2" in text

    @pytest.mark.slow
    @pytest.mark.timeout(900)
    def test_transform_m_three_quarters(self, tmp_path, capsys):
        out = tmp_path / "transform.txt"
        code, text = run_main(capsys, "transform", "--preset", "mform", "--out", str(out))
        assert code == constants.EXIT_OK
        assert "beta=0.4" in text.splitlines()
        residual = next(float(line.split("=", 1)[1]) for line in text.splitlines()
                        if line.startswith("residual="))
        assert residual <= 1e-7
        report = read_report(str(out))
        assert report["beta.b_star"] == report["m.b_star"]

    @pytest.mark.slow
    @pytest.mark.timeout(900)
    def test_shoot_default_preset_matches_committed(self, tmp_path, capsys):
        out = tmp_path / "shoot.txt"
        code, _ = run_main(capsys, "shoot", "--preset", "default-shoot", "--out", str(out))
        assert code == constants.EXIT_OK
        report = read_report(str(out))
        entry = RegressionTable().lookup(ProblemSpec(0.0, -1.0, GSpec.quadratic(0.5)))
        assert abs(float(report["b_star"]) - entry.b_star) <= 1e-6
        assert report["diag.regression_b_star"] == "pass"

    @pytest.mark.slow
    @pytest.mark.timeout(900)
    def test_shoot_positive_a(self, tmp_path, capsys):
        out = tmp_path / "shoot.txt"
        code, _ = run_main(capsys, "shoot", "--a", "1", "--c=-1", "--bisect-tol", "1e-6",
                           "--out", str(out))
        assert code == constants.EXIT_OK
        report = read_report(str(out))
        assert 0.0 < float(report["b_star"]) < 1.0
        with open(tmp_path / "shoot.json") as f:
            assert json.load(f)["kind"] == "shoot"
