import argparse
import json
from os import path as osp
from typing import Literal

import numpy as np
import pytest

from experiments.__main__ import entry, main
from experiments.check import CHECKS, CheckCommand, run_checks
from experiments.cli import _build_argparse_kwargs
from experiments.recorder import Recorder, RunManifest
from experiments.stats import CheckResult
from netkin.base import SimulationAborted
from netkin.scenarios import preset_tripod, run


COARSE = ["--dx", "0.05", "--tend", "0.05", "--velocity_cells", "8"]


def read_rows(file_path: str) -> tuple[list[str], np.ndarray]:
    with open(file_path) as f:
        header = f.readline().strip().split(",")
    return header, np.loadtxt(file_path, delimiter=",", skiprows=1, ndmin=2)


def output_bytes(out_dir: str) -> dict[str, bytes]:
    with open(osp.join(out_dir, "manifest.json")) as f:
        outputs = json.load(f)["outputs"]
    result = {}
    for name in outputs:
        if name.endswith(".csv"):
            with open(osp.join(out_dir, name), "rb") as f:
                result[name] = f.read()
    return result


# =============================================================================
# Flags
# =============================================================================


def test_argparse_kwargs():
    assert _build_argparse_kwargs(list[str] | None, None)["nargs"] == "*"
    assert _build_argparse_kwargs(list[float], [1.0])["nargs"] == "+"
    assert _build_argparse_kwargs(float | None, None)["type"] is float
    assert _build_argparse_kwargs(bool, False)["action"] is argparse.BooleanOptionalAction

    kwargs = _build_argparse_kwargs(list[Literal["a", "b"]] | None, None)
    assert kwargs["choices"] == ["a", "b"]
    assert kwargs["type"] is str


def test_flags_follow_command_fields():
    args = entry.parser.parse_args(["run", "--preset", "tripod", "--model", "kinetic", "p1", "--epsilon", "0.5"])
    assert args.command == "run"
    assert args.model == ["kinetic", "p1"]
    assert args.epsilon == 0.5
    assert args.out == "results"
    assert args.config is None

    args = entry.parser.parse_args(["check", "--suite", "limit", "eigen"])
    assert (args.preset, args.suite) == ("tripod", ["limit", "eigen"])


def test_unknown_choice_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["run", "--preset", "nowhere"])
    assert info.value.code == 2


# =============================================================================
# run
# =============================================================================


def test_run_tripod_kinetic(tmp_path):
    out = str(tmp_path)
    flags = ["--preset", "tripod", "--model", "kinetic", "--epsilon", "1", "--snapshots", "2", *COARSE]
    assert main(["run", *flags, "--out", out]) == 0

    for edge, rho in enumerate([1.0, 2.0, 3.0]):
        header, rows = read_rows(osp.join(out, "kinetic", f"edge_{edge}.csv"))
        assert header == ["t", "edge", "x", "rho", "q", "m"]
        assert rows.shape == (3 * 20, 6)
        np.testing.assert_allclose(np.unique(rows[:, 0]), [0.0, 0.025, 0.05], rtol=1e-14)
        assert np.all(rows[:, 1] == edge)
        np.testing.assert_allclose(rows[:20, 2], (np.arange(20) + 0.5) * 0.05, rtol=1e-14)
        np.testing.assert_allclose(rows[:20, 3], rho, rtol=1e-14)

    with open(osp.join(out, "mass.csv")) as f:
        lines = f.read().splitlines()
    assert lines[0] == "t,model,total_mass"
    assert len(lines) == 4
    assert lines[1].split(",")[1] == "kinetic"
    assert float(lines[1].split(",")[2]) == pytest.approx(6.0, rel=1e-12)

    manifest = Recorder.load_manifest(osp.join(out, "manifest.json"))
    assert isinstance(manifest, RunManifest)
    assert manifest.config.models[0].value == "kinetic"
    assert manifest.config.dx == 0.05
    assert manifest.steps["kinetic"] > 0
    assert sorted(manifest.outputs) == sorted(
        ["kinetic/edge_0.csv", "kinetic/edge_1.csv", "kinetic/edge_2.csv", "mass.csv", "manifest.json"]
    )
    assert osp.exists(osp.join(out, "run.log"))


def test_manifest_reproduces_outputs(tmp_path):
    first, second = str(tmp_path / "first"), str(tmp_path / "second")
    flags = ["--preset", "tripod", "--model", "p1", "keller_segel", "--snapshots", "3", *COARSE]
    assert main(["run", *flags, "--out", first]) == 0
    assert main(["run", "--manifest", osp.join(first, "manifest.json"), "--out", second]) == 0

    original = output_bytes(first)
    assert len(original) == 7
    assert output_bytes(second) == original


def test_missing_config_file(tmp_path, capsys):
    missing = str(tmp_path / "missing.json")
    assert main(["run", "--config", missing, "--out", str(tmp_path)]) == 2
    assert "missing.json" in capsys.readouterr().err


def test_config_file(tmp_path):
    config = preset_tripod().override(models=["keller_segel"], t_end=0.02, dx=0.05, snapshots=1)
    config_path = tmp_path / "tripod.json"
    config_path.write_text(config.model_dump_json(by_alias=True))

    assert main(["run", "--config", str(config_path), "--out", str(tmp_path / "out")]) == 0
    assert osp.exists(tmp_path / "out" / "keller_segel" / "edge_2.csv")


def test_rejected_inputs(tmp_path):
    out = str(tmp_path)
    # two scenario sources
    assert main(["run", "--preset", "tripod", "--config", "tripod.json", "--out", out]) == 2
    # no scenario source
    assert main(["run", "--out", out]) == 2
    # epsilon above lambda / alpha
    assert main(["run", "--preset", "tripod", "--epsilon", "2", "--out", out]) == 2


def test_aborted_run(tmp_path, monkeypatch):
    def abort(config):
        raise SimulationAborted("non-finite values", step=3, time=0.1, model="p1", edge=0)

    monkeypatch.setattr("experiments.run.run", abort)
    assert main(["run", "--preset", "tripod", "--out", str(tmp_path)]) == 1


# =============================================================================
# compare
# =============================================================================


def test_compare_cattaneo_variants(tmp_path):
    out = str(tmp_path)
    flags = ["--model", "p1", "--variants", "kinetic_derived", "density_continuity", "--epsilon", "1"]
    assert main(["compare", "--preset", "tripod", *flags, "--snapshots", "1", *COARSE, "--out", out]) == 0

    with open(osp.join(out, "l1.csv")) as f:
        lines = f.read().splitlines()
    assert lines[0] == "a,b,l1"
    assert len(lines) == 2
    a, b, distance = lines[1].split(",")
    assert (a, b) == ("p1[kinetic_derived]", "p1[density_continuity]")
    assert float(distance) > 0
    assert osp.exists(osp.join(out, "p1[density_continuity]", "edge_0.csv"))


def test_model_compared_to_itself():
    config = preset_tripod().override(models=["half_moment"], t_end=0.02, dx=0.05, snapshots=1)
    diagnostics = run(config)
    model_run = diagnostics.runs["half_moment"]
    twins = diagnostics.model_copy(update={"runs": {"a": model_run, "b": model_run}})
    assert twins.pairwise_l1() == {("a", "b"): 0.0}


# =============================================================================
# check
# =============================================================================


def test_fast_checks_pass():
    results = run_checks(CheckCommand(suite=["limit", "variants", "validation", "eigen"]))
    assert [result.name for result in results] == [
        "limit p1",
        "limit half_moment",
        "variants eps=1",
        "variants eps=0.1",
        "validation",
        "eigen phi=0.1667",
        "eigen phi=0.08333",
    ]
    assert all(result.passed for result in results)


def test_large_network_mass_ordering():
    (result,) = run_checks(CheckCommand(suite=["large_ordering"]))
    assert result.passed, result.detail
    assert result.measured <= 0.05


def test_diffusive_limit_on_coarser_interval():
    results = run_checks(CheckCommand(suite=["diffusive_limit"], dx=0.01, velocity_cells=20))
    assert [result.name for result in results] == [
        "diffusive_limit kinetic",
        "diffusive_limit p1[kinetic_derived]",
        "diffusive_limit half_moment",
    ]
    for result in results:
        assert result.passed, result.detail


def test_default_suite_passes_on_coarse_tripod(tmp_path):
    assert main(["check", *COARSE, "--out", str(tmp_path)]) == 0
    assert osp.exists(tmp_path / "run.log")


def test_failed_check_sets_exit_status(monkeypatch):
    monkeypatch.setitem(CHECKS, "eigen", lambda command: [CheckResult(name="eigen", passed=False)])
    assert main(["check", "--suite", "eigen", "limit"]) == 1
