"""Tests for the command-line front end."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from pczaa.cli import main
from pczaa.models.grid import GridFunction
from pczaa.models.sequence import AASequence
from pczaa.storage.artifacts import (
    ArtifactWriter,
    read_grid_csv,
    read_sequence_csv,
)


@pytest.fixture
def psi_csv(psi_sequence: AASequence, tmp_path: Path) -> Path:
    return ArtifactWriter(tmp_path).sequence("psi_seq.csv", psi_sequence)


def test_extend(
    psi_csv: Path, out_dir: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    argv = ["extend", "--in", str(psi_csv), "--out-dir", str(out_dir)]
    assert main([*argv, "--kind", "step", "-M", "8"]) == 0
    path = out_dir / "extend.csv"
    assert capsys.readouterr().out.strip() == str(path)
    f = read_grid_csv(path)
    assert f.samples_per_unit == 8
    sequence = read_sequence_csv(psi_csv)
    assert (
        f.restrict_to_integers().values.tolist()
        == sequence.take(f.window[0], f.window[1] - 1).tolist()
    )


def test_extend_two_segment(psi_csv: Path, out_dir: Path) -> None:
    argv = ["extend", "--in", str(psi_csv), "--out-dir", str(out_dir)]
    assert main([*argv, "--kind", "two-segment", "-M", "8"]) == 2
    assert not (out_dir / "extend.csv").exists()
    assert (
        main([*argv, "--kind", "two-segment", "--midpoint", "0", "-M", "8"])
        == 0
    )
    f = read_grid_csv(out_dir / "extend.csv")
    assert f.evaluate(0.5)[0] == 0.0


def test_diagnose(
    psi_step: GridFunction,
    tmp_path: Path,
    out_dir: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    path = ArtifactWriter(tmp_path).grid("step.csv", psi_step)
    argv = ["diagnose", "--in", str(path), "--out-dir", str(out_dir)]
    assert main(argv) == 0
    assert capsys.readouterr().out.strip() == "fails-UC"
    report = json.loads((out_dir / "diagnose.json").read_text())
    assert report["classification"]["verdict"] == "fails-UC"
    assert report["norm"]["jump_bound"] > 0


def test_conv_and_heat(tmp_path: Path, out_dir: Path) -> None:
    ones = GridFunction.constant(1.0, (0, 16), 16)
    path = ArtifactWriter(tmp_path).grid("ones.csv", ones)
    argv = ["--in", str(path), "--out-dir", str(out_dir)]
    assert main(["conv", *argv, "--mode", "halfline", "--kernel", "exp"]) == 0
    out = read_grid_csv(out_dir / "conv.csv")
    assert out.window == (0, 16)

    # The window is too short for the full-line kernel.
    assert main(["conv", *argv, "--kernel", "gauss:8"]) == 2
    assert main(["heat", *argv, "--kernel", "gauss:0.25"]) == 0
    heated = read_grid_csv(out_dir / "heat.csv")
    assert heated.window[0] > 0
    assert main(["heat", *argv, "--kernel", "exp"]) == 2


def test_depca(out_dir: Path) -> None:
    argv = ["depca", "--out-dir", str(out_dir), "--window", "-4", "4"]
    assert main([*argv, "--mode", "ivp", "--y0", "1", "--steps", "64"]) == 0
    assert (out_dir / "depca.csv").exists()
    report = json.loads((out_dir / "depca-report.json").read_text())
    assert report["intervals"] == list(range(-4, 4))

    assert main([*argv, "--mode", "lw", "--gamma", "0.5"]) == 0
    report = json.loads((out_dir / "depca-report.json").read_text())
    assert report["contraction"] == pytest.approx(0.5, rel=1e-6)

    assert main([*argv, "--mode", "bounded", "--a", "0", "--f", "1"]) == 3
    assert main([*argv, "--steps", "7"]) == 2
    assert main([*argv, "--a", "tan:1"]) == 2


def test_config_file(tmp_path: Path, out_dir: Path) -> None:
    config = tmp_path / "run.json"
    config.write_text(
        json.dumps(
            {
                "command": "depca",
                "depca_mode": "bounded",
                "window": [-2, 2],
                "a": "-2",
                "f": "4",
                "out_dir": str(out_dir),
            }
        )
    )
    assert main(["depca", "--config", str(config), "--steps", "32"]) == 0
    report = json.loads((out_dir / "depca-report.json").read_text())
    assert report["intervals"] == [-2, -1, 0, 1]


def test_bad_arguments(capsys: pytest.CaptureFixture[str]) -> None:
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["depca", "--mode", "sideways"]) == 2
    assert main(["--help"]) == 0
    assert "extend" in capsys.readouterr().out


def test_demo(out_dir: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["demo", "--out-dir", str(out_dir)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines
    assert all(line.startswith("PASS ") for line in lines)
    summary = (out_dir / "demo-summary.csv").read_text().splitlines()
    assert summary[0] == "name,expected,observed,tolerance,passed"
    assert len(summary) == len(lines) + 1
    rows = json.loads((out_dir / "demo-summary.json").read_text())["rows"]
    assert all(row["passed"] for row in rows)
