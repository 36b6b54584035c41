"""Command line front end: parsing, wiring, exit codes, output formats."""

import csv
import io
import json
import math

import pytest

from qmonty import cli, lab
from qmonty.cli import main, parse_host, parse_player, parse_theta
from qmonty.errors import ConfigError
from qmonty.strategies import (AngleSweepPlayer, EntangledHost,
                               FiniteSetCheatPlayer, FiniteSetHost, HaarHost,
                               IgnoreNotepadHost)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestThetaParsing:
    CASES = [
        ("pi", math.pi),
        ("pi/4", math.pi / 4),
        ("3*pi/8", 3 * math.pi / 8),
        ("3pi/8", 3 * math.pi / 8),
        ("0.5", 0.5),
        ("2 * pi", 2 * math.pi),
        ("π/2", math.pi / 2),
    ]

    @pytest.mark.parametrize("token,value", CASES)
    def test_tokens(self, token, value):
        assert abs(parse_theta(token) - value) < 1e-15

    def test_garbage_rejected(self):
        for bad in ("pie", "pi/", "two*pi", ""):
            with pytest.raises(ConfigError):
                parse_theta(bad)


class TestSpecParsing:
    def test_shorthands(self):
        assert isinstance(parse_host("haar", 0), HaarHost)
        host = parse_host("entangled-transpose", 0)
        assert isinstance(host, EntangledHost)
        assert host.policy == EntangledHost.POLICY_TRANSPOSE
        assert isinstance(parse_player("sweep:pi/4", None), AngleSweepPlayer)

    def test_json_specs(self):
        host = parse_host('{"kind": "ignore_notepad", "reveal_bias": 0.25}',
                          0)
        assert isinstance(host, IgnoreNotepadHost)
        assert host.reveal_bias == 0.25

    def test_finite_shorthand_uses_seed(self):
        host = parse_host("finite:6", 11)
        assert isinstance(host, FiniteSetHost)
        assert host.vectors.shape == (6, 3)
        again = parse_host("finite:6", 11)
        assert (host.vectors == again.vectors).all()

    def test_player_resolves_against_host(self):
        host = parse_host("axes", 0)
        player = parse_player("cheat-finite", host)
        assert isinstance(player, FiniteSetCheatPlayer)

    def test_unknown_names_rejected(self):
        with pytest.raises(ConfigError):
            parse_host("bogus", 0)
        with pytest.raises(ConfigError):
            parse_player("bogus", None)


class TestSimulateCommand:
    def test_default_command_is_simulate(self, capsys):
        code, out, err = run_cli(capsys, "--host", "axes", "--player",
                                 "switch", "-n", "50", "--seed", "1")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == list(lab.REPORT_COLUMNS)
        assert len(rows) == 2
        assert rows[1][0] != "" and int(rows[1][3]) == 50

    def test_json_format(self, capsys):
        code, out, err = run_cli(capsys, "simulate", "--host", "haar",
                                 "--player", "stick", "-n", "40",
                                 "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["columns"] == list(lab.REPORT_COLUMNS)
        assert doc["rows"][0]["trials"] == 40
        assert doc["rows"][0]["analytic"] == 1.0 / 3.0

    def test_theta_sweep_rows(self, capsys):
        code, out, err = run_cli(capsys, "--theta-sweep", "0,pi/4,pi/2",
                                 "-n", "30")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) == 4
        assert [r[1] for r in rows[1:]] == [
            "sweep(theta=0)", "sweep(theta=0.785398)",
            "sweep(theta=1.5708)"]

    def test_sweep_excludes_player_flag(self, capsys):
        code, out, err = run_cli(capsys, "--theta-sweep", "0", "--player",
                                 "stick", "-n", "10")
        assert code == 1
        assert "drop --player" in err

    def test_digits_flag_truncates_announcements(self, capsys):
        code, out, err = run_cli(capsys, "--host", "real", "--player",
                                 "cheat-real", "-n", "60", "--digits", "5")
        assert code == 0
        row = list(csv.reader(io.StringIO(out)))[1]
        assert "digits=5" in row[2]
        assert row[8] == ""  # truncation voids the exact-cheat guarantee

    def test_exit_code_two_on_host_violation(self, capsys):
        code, out, err = run_cli(
            capsys, "--host", '{"kind": "ignore_notepad", "reveal_bias": 1.0}',
            "--player", "switch", "-n", "300", "--seed", "0")
        assert code == 2
        assert "host violation" in err and "trial" in err

    def test_exit_code_one_on_config_error(self, capsys):
        code, out, err = run_cli(capsys, "--host", "nonsense")
        assert code == 1
        assert "error:" in err

    def test_exit_code_one_on_bad_json(self, capsys):
        code, out, err = run_cli(capsys, "--host", '{"kind": ')
        assert code == 1

    def test_usage_error_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--format", "xml"])
        assert exc.value.code == 1

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.csv"
        code, out, err = run_cli(capsys, "--host", "axes", "-n", "20",
                                 "--output", str(target))
        assert code == 0 and out == ""
        rows = list(csv.reader(io.StringIO(target.read_text())))
        assert rows[0] == list(lab.REPORT_COLUMNS)

    def test_workers_flag_keeps_results_identical(self, capsys):
        args = ("--host", "axes", "--player", "switch", "-n", "48",
                "--seed", "5")
        _, solo, _ = run_cli(capsys, *args, "--workers", "1")
        _, pooled, _ = run_cli(capsys, *args, "--workers", "3")
        assert solo == pooled

    def test_determinism_across_invocations(self, capsys):
        args = ("--host", "haar", "--player", "switch", "-n", "200",
                "--seed", "9", "--format", "json")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second


class TestServeCommand:
    def test_port_env_override_and_failure_path(self, capsys, monkeypatch):
        # binding to an invalid port fails fast inside uvicorn; the CLI
        # reports it on stderr and exits 1
        monkeypatch.setenv("QMONTY_PORT", "-1")
        code, out, err = run_cli(capsys, "serve")
        assert code == 1
        assert "failed to serve" in err or "error" in err
