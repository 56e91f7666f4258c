#!/usr/bin/env python3
"""Tests for the command line tool

S.D.G."""

import time

import json5 as json
import pytest

from nopomoments import cli, series, static
from nopomoments.errors import InvalidParams, NopoWarning, Nonconvergence

RATES = ["--kappa", "0.5", "--gamma3", "18"]
"""Resonant figure rates as flags"""


def read_mapping(text: str) -> dict[str, str]:
    """Parse "key = value" output lines"""
    return dict(line.split(" = ", 1) for line in text.splitlines())


class TestConfig:
    """Config files and presets"""

    def test_typing(self):
        config = cli.load_config("kappa = 0.5\n--count = 11\naxis = p\n# comment\n")
        assert config == {"kappa": 0.5, "count": 11, "axis": "p"}

    @pytest.mark.parametrize("text", ["kappa = fast\n", "colour = blue\n", "count = 1.5\n"])
    def test_rejects(self, text):
        with pytest.raises(InvalidParams):
            cli.load_config(text)

    @pytest.mark.parametrize("filename", [name for names in static.Presets.figures.values() for name in names])
    def test_presets_load(self, filename):
        config = cli.load_preset(filename)
        assert config["gamma3"] == 18
        assert config["count"] == 301
        assert "delta3" not in config

    def test_flag_beats_file(self, tmp_path, capsys):
        config = tmp_path / "rates.cfg"
        config.write_text("kappa = 0.5\ngamma3 = 18\nes = 5\n", encoding="utf-8")
        assert cli.main(["point", "--config", str(config), "--es", "0"]) == 0
        assert read_mapping(capsys.readouterr().out)["es"] == "0"


class TestPoint:
    """The point subcommand"""

    def test_vacuum(self, capsys):
        assert cli.main(["point", *RATES, "--es", "0"]) == 0
        report = read_mapping(capsys.readouterr().out)
        assert report["v_min"] == "1"
        assert report["n"] == "0"
        assert report["regime"] == "Monostable"

    def test_above_threshold(self, capsys):
        assert cli.main(["point", *RATES, "--p", "82944"]) == 0
        report = read_mapping(capsys.readouterr().out)
        assert float(report["n_cl"]) == pytest.approx(72.0)
        assert report["verdict"] == "Entangled"

    def test_missing_kappa(self, capsys):
        assert cli.main(["point", "--gamma3", "18", "--es", "1"]) == 2
        assert capsys.readouterr().err.startswith("error: InvalidParams:")

    def test_negative_kappa(self):
        assert cli.main(["point", "--kappa", "-1", "--gamma3", "18", "--es", "1"]) == 2

    def test_unparseable_flag(self):
        with pytest.raises(SystemExit) as e:
            cli.main(["point", "--kappa", "half", "--gamma3", "18", "--es", "1"])
        assert e.value.code == 2

    def test_nonconvergence(self, monkeypatch, capsys):
        def refuse(*args, **kwargs):
            raise Nonconvergence("no")

        monkeypatch.setattr(series, "moments", refuse)
        assert cli.main(["point", *RATES, "--es", "1"]) == 3
        assert "Nonconvergence" in capsys.readouterr().err


class TestSweep:
    """The sweep and figure subcommands"""

    def test_csv(self, tmp_path):
        path = tmp_path / "sweep.csv"
        arguments = ["sweep", *RATES, "--delta", "1", "--count", "5", "--stop", "4", "--output", str(path)]
        assert cli.main(arguments) == 0
        first = path.read_bytes()

        lines = first.decode("utf-8").splitlines()
        metadata = json.loads(lines[0][len(static.Output.metadata_prefix):])
        assert metadata["kappa"] == 0.5
        assert metadata["delta3"] == 2
        assert lines[1] == ",".join(static.Output.sweep_columns)
        assert len(lines) == 7

        assert cli.main(arguments) == 0
        assert path.read_bytes() == first

    def test_columns_flag(self, tmp_path):
        path = tmp_path / "sweep.csv"
        assert cli.main(["sweep", *RATES, "--count", "3", "--columns", "es, v_min", "--output", str(path)]) == 0
        assert path.read_text(encoding="utf-8").splitlines()[1] == "es,v_min"

    def test_figure(self, tmp_path):
        assert cli.main(["figure", "fig2", "--count", "5", "--output-dir", str(tmp_path)]) == 0
        written = sorted(p.name for p in tmp_path.iterdir())
        assert written == ["fig2_d1.csv", "fig2_d3.csv", "fig2_d7.csv"]
        metadata = json.loads((tmp_path / "fig2_d7.csv").read_text(encoding="utf-8").splitlines()[0][2:])
        assert metadata["preset"] == "fig2"
        assert metadata["regime"] == "Bistable"

    def test_figure_delta3_notice(self, tmp_path, capsys):
        with pytest.warns(NopoWarning, match="2\*delta"):
            assert cli.main(["figure", "fig2", "--count", "3", "--output-dir", str(tmp_path)]) == 0
        err = capsys.readouterr().err
        assert "notice: delta3 not given, using the delta3 = 2*delta convention: delta3 = 14" in err
        assert err.count("notice:") == 3

        metadata = json.loads((tmp_path / "fig2_d7.csv").read_text(encoding="utf-8").splitlines()[0][2:])
        assert metadata["delta3"] == 14
        assert metadata["delta3_convention"] == "2*delta"

    def test_explicit_delta3_is_quiet(self, tmp_path, capsys):
        path = tmp_path / "sweep.csv"
        assert cli.main(["sweep", *RATES, "--delta", "1", "--delta3", "0", "--count", "3", "--output", str(path)]) == 0
        assert "notice:" not in capsys.readouterr().err
        metadata = json.loads(path.read_text(encoding="utf-8").splitlines()[0][2:])
        assert "delta3_convention" not in metadata

    def test_fig3_runtime(self, tmp_path):
        started = time.perf_counter()
        assert cli.main(["figure", "fig3", "--output-dir", str(tmp_path)]) == 0
        assert time.perf_counter() - started < 60


class TestOracleCheck:
    """The oracle-check subcommand"""

    ARGS = ["oracle-check", *RATES, "--p", "2073.6", "--cutoff", "10"]

    def test_passes(self, tmp_path):
        path = tmp_path / "check.csv"
        assert cli.main([*self.ARGS, "--output", str(path)]) == 0
        summary = json.loads(path.read_text(encoding="utf-8").splitlines()[0][2:])
        assert summary["passed"]

    def test_flipped_pump(self, capsys):
        assert cli.main([*self.ARGS, "--flip-pump-sign"]) == 4
        assert "pair" in capsys.readouterr().err


@pytest.mark.slow
def test_audit(tmp_path):
    path = tmp_path / "audit.csv"
    assert cli.main(["audit", *RATES, "--output", str(path)]) == 0
    lines = path.read_text(encoding="utf-8").splitlines()
    report = json.loads(lines[0][2:])
    assert report["published"]["v_min_limit"] == 0.75
    assert report["measured"]["v_min_limit"] == pytest.approx(0.75, abs=0.01)
    assert 1.6 <= report["measured"]["offset_ratio"] <= 2.4
    assert len(lines) == 2 + 3
