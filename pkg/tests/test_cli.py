"""End-to-end checks of the command-line interface.

Covers artifact layout (directory vs. explicit file targets, figure
suppression), config layering between file / flags / environment, golden-file
stability of the delimited outputs, JSON schemas of the verification
commands, and the exit-code contract (0 success, 2 validation, 3 failed
verification).
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from heisfan.cli import main

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def _clean_thread_env(monkeypatch):
    monkeypatch.delenv("HEISFAN_THREADS", raising=False)


def header_lines(path: Path) -> list[str]:
    return [line for line in path.read_text().splitlines() if line.startswith("# ")]


# ---------------------------------------------------------------------------
# golden artifacts
# ---------------------------------------------------------------------------


def test_spectrum_golden_bytes(tmp_path):
    out = tmp_path / "s.csv"
    rc = main(
        ["spectrum", "--m", "1", "--lambda", "100", "--no-figures", "--out", str(out)]
    )
    assert rc == 0
    assert out.read_bytes() == (GOLDEN / "spectrum_m1_l100.csv").read_bytes()
    # a .csv target places the JSON summary alongside it, same stem
    assert (tmp_path / "s.json").read_bytes() == (
        GOLDEN / "spectrum_m1_l100.json"
    ).read_bytes()
    # --no-figures suppresses the rendered figure
    assert not (tmp_path / "s.png").exists()


def test_fan_golden_bytes(tmp_path):
    out = tmp_path / "f.csv"
    rc = main(["fan", "--m", "2", "--lambda", "50", "--no-figures", "--out", str(out)])
    assert rc == 0
    assert out.read_bytes() == (GOLDEN / "fan_m2_l50.csv").read_bytes()


# ---------------------------------------------------------------------------
# artifact layout and config layering
# ---------------------------------------------------------------------------


def test_directory_target_uses_command_stems_and_renders_figure(tmp_path):
    rc = main(["spectrum", "--m", "1", "--lambda", "20", "--out", str(tmp_path / "d")])
    assert rc == 0
    target = tmp_path / "d"
    assert (target / "spectrum.csv").exists()
    assert (target / "spectrum.json").exists()
    png = target / "spectrum.png"
    assert png.exists() and png.stat().st_size > 0


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[run]\nm = 2\nlambda = 20\n")
    rc = main(
        [
            "spectrum",
            "--config",
            str(cfg),
            "--lambda",
            "30",
            "--no-figures",
            "--out",
            str(tmp_path / "d"),
        ]
    )
    assert rc == 0
    lines = header_lines(tmp_path / "d" / "spectrum.csv")
    assert "# lambda = 30.0" in lines  # flag wins over the file
    assert "# m = 2" in lines  # file value survives where no flag given


def test_thread_count_resolution_order(tmp_path, monkeypatch):
    monkeypatch.setenv("HEISFAN_THREADS", "3")
    rc = main(
        ["spectrum", "--m", "1", "--lambda", "10", "--no-figures", "--out", str(tmp_path / "a")]
    )
    assert rc == 0
    assert "# threads = 3" in header_lines(tmp_path / "a" / "spectrum.csv")

    rc = main(
        [
            "spectrum",
            "--m",
            "1",
            "--lambda",
            "10",
            "--threads",
            "2",
            "--no-figures",
            "--out",
            str(tmp_path / "b"),
        ]
    )
    assert rc == 0
    assert "# threads = 2" in header_lines(tmp_path / "b" / "spectrum.csv")


# ---------------------------------------------------------------------------
# split
# ---------------------------------------------------------------------------


def test_split_default_two_orthogonal_pieces(tmp_path):
    rc = main(
        ["split", "--lambda-pair", "1+2pi", "--no-figures", "--out", str(tmp_path)]
    )
    assert rc == 0
    report = json.loads((tmp_path / "split.json").read_text())
    assert report["eigenvalue_pair"] == [1, 1]
    assert report["config"]["m"] == "2"  # default arity when neither flag nor file sets it
    assert report["max_cross_inner"] == 0.0
    masses = sorted(piece["mass"] for piece in report["pieces"])
    assert masses == pytest.approx([0.5, 0.5])
    assert sorted(piece["copies"] for piece in report["pieces"]) == [[1], [2]]
    for piece in report["pieces"]:
        assert len(piece["labels"]) == 8


def test_split_requires_eigenvalue_or_config(capsys):
    rc = main(["split"])
    assert rc == 2
    assert "--lambda-pair" in capsys.readouterr().err


def test_split_rejects_malformed_eigenvalue(tmp_path):
    rc = main(
        ["split", "--lambda-pair", "1+3pi", "--no-figures", "--out", str(tmp_path)]
    )
    assert rc == 2


# ---------------------------------------------------------------------------
# eigen-eval
# ---------------------------------------------------------------------------


def test_eigen_eval_grid_manifest(tmp_path):
    rc = main(
        [
            "eigen-eval",
            "--state",
            "L(0,2)",
            "--axes",
            "x_1,y_1",
            "--resolution",
            "8",
            "--no-figures",
            "--out",
            str(tmp_path),
        ]
    )
    assert rc == 0
    assert "# command = eigen-eval" in header_lines(tmp_path / "grid.csv")
    manifest = json.loads((tmp_path / "grid.json").read_text())
    assert manifest["labels"] == ["L(0,2)"]
    assert manifest["eigenvalue"] == pytest.approx(2.0)
    assert manifest["max_relative_residual"] < 1e-10
    assert manifest["norm_squared"] == pytest.approx(1.0, abs=1e-9)
    assert [axis["name"] for axis in manifest["axes"]] == ["x_1", "y_1"]
    assert all(axis["points"] == 8 for axis in manifest["axes"])


def test_eigen_eval_needs_state_or_preset(capsys):
    rc = main(["eigen-eval"])
    assert rc == 2
    assert capsys.readouterr().err != ""


# ---------------------------------------------------------------------------
# verification commands
# ---------------------------------------------------------------------------


def test_invariance_defaults_pass(tmp_path):
    rc = main(["ql-invariance", "--no-figures", "--out", str(tmp_path)])
    assert rc == 0
    report = json.loads((tmp_path / "ql_invariance.json").read_text())
    assert report["sequence"] == "diagonal"
    assert report["k"] == 3
    flow = report["defects"]["flow(0.5,0.5)"]
    assert all(value == 0.0 for value in flow.values())
    transverse = report["defects"]["transverse(1,0)"]
    assert all(value > 0.01 for value in transverse.values())
    assert (tmp_path / "ql_invariance.csv").exists()


def test_converge_localized_short_ladder_fails_concentration(tmp_path, capsys):
    rc = main(
        [
            "ql-converge",
            "--preset",
            "localized",
            "--k",
            "3..4",
            "--no-figures",
            "--out",
            str(tmp_path),
        ]
    )
    assert rc == 3
    out = capsys.readouterr().out
    assert "FAIL: ball-concentration" in out
    assert "pass: uniform-marginal(z_1)" in out
    report = json.loads((tmp_path / "ql_converge.json").read_text())
    verdict = report["verdicts"]["ball-concentration"]
    assert verdict["passed"] is False
    outside = verdict["outside_mass"]
    assert outside["4"] < outside["3"]  # concentrating, just not yet below the bound
    assert report["verdicts"]["uniform-marginal(z_1)"]["passed"] is True


def test_disintegrate_recovers_mixture_weights(tmp_path):
    rc = main(
        ["disintegrate", "--k", "1,2", "--depth", "6", "--no-figures", "--out", str(tmp_path)]
    )
    assert rc == 0
    report = json.loads((tmp_path / "disintegration.json").read_text())
    assert report["sequence"] == "cone-mixture(0.36,0.64)"
    assert report["refinement_discrepancy"] == pytest.approx(0.0, abs=1e-12)
    final = report["ladder"]["final"]
    assert final["15"] == pytest.approx(0.64)
    assert final["31"] == pytest.approx(0.36)
    assert report["cells"]


# ---------------------------------------------------------------------------
# product-of-heights spectrum
# ---------------------------------------------------------------------------


def test_weighted_product_spectrum_multiplicities(tmp_path):
    rc = main(
        [
            "htype-spectrum",
            "--d",
            "2",
            "--beta",
            "1,0.5",
            "--lambda",
            "10",
            "--no-figures",
            "--out",
            str(tmp_path),
        ]
    )
    assert rc == 0
    body = [
        line
        for line in (tmp_path / "htype.csv").read_text().splitlines()
        if line and not line.startswith("#") and not line.startswith("eigenvalue")
    ]
    assert body[0] == "0,1,F(0,0)(0,0)"
    assert any(line.startswith("3,8,") for line in body)


def test_weight_count_must_match_factor_count(tmp_path):
    rc = main(
        ["htype-spectrum", "--d", "2", "--beta", "1", "--out", str(tmp_path)]
    )
    assert rc == 2


# ---------------------------------------------------------------------------
# exit-code contract
# ---------------------------------------------------------------------------


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["bogus"])
    assert excinfo.value.code == 2


def test_negative_cutoff_rejected(tmp_path, capsys):
    rc = main(
        ["spectrum", "--m", "1", "--lambda", "-5", "--out", str(tmp_path)]
    )
    assert rc == 2
    assert "error:" in capsys.readouterr().err
