"""Fast scenario-harness behaviors (full runs live in test_acceptance)."""

import json

import numpy as np
import pytest

from rotape.config import RunConfig
from rotape.grid import GridSpec
from rotape.io import read_diagnostics_csv, read_snapshot
from rotape.scenarios import SCENARIOS, formulation_equivalence, run_scenario


def tiny_config(**kw):
    cfg = RunConfig()
    cfg.grid = GridSpec(nh=16, nz=8)
    cfg.nu, cfg.omega, cfg.dt, cfg.t_end = 0.2, 3.0, 2e-3, 0.04
    cfg.init.seed = 9
    for k, v in kw.items():
        setattr(cfg, k, v)
    return cfg


def test_scenario_registry_names():
    assert set(SCENARIOS) == {
        "verify_projections", "formulation_equivalence", "local_clock_vs_omega",
        "vertical_gain", "limit_convergence", "lifespan_vs_omega", "small_data_2d",
        "lemma_ratios", "continuous_dependence",
    }


def test_unknown_scenario_rejected(tmp_path):
    cfg = tiny_config()
    cfg.scenario.name = "bogus"
    with pytest.raises(ValueError, match="unknown scenario"):
        run_scenario(cfg, tmp_path)


def test_run_writes_artifacts(tmp_path):
    cfg = tiny_config()
    summary = formulation_equivalence(cfg, tmp_path)
    assert (tmp_path / "config.json").exists()
    assert (tmp_path / "summary.json").exists()
    assert (tmp_path / "diagnostics.csv").exists()
    rows = read_diagnostics_csv(tmp_path / "diagnostics.csv")
    assert len(rows) == int(round(cfg.t_end / cfg.dt)) + 1
    assert rows[-1].termination == "completed"
    echoed = json.loads((tmp_path / "config.json").read_text())
    assert echoed["schema"] == "rotape-config/1"
    assert summary["pass"] is True


def test_snapshots_written_and_reloadable(tmp_path):
    cfg = tiny_config()
    cfg.output.snapshot_every = 10
    formulation_equivalence(cfg, tmp_path)
    snaps = sorted(tmp_path.glob("snapshot_*.pesp1"))
    assert len(snaps) == 3  # steps 0, 10, 20 of 20
    coeffs, grid, t = read_snapshot(snaps[-1])
    assert grid.nh == 16
    assert t == pytest.approx(0.04)
    assert np.isfinite(coeffs).all()


def test_t_end_zero_gives_initial_diagnostics_only(tmp_path):
    cfg = tiny_config(t_end=0.0)
    formulation_equivalence(cfg, tmp_path)
    rows = read_diagnostics_csv(tmp_path / "diagnostics.csv")
    assert len(rows) == 1
    assert rows[0].t == 0.0


def test_file_init_round_trip(tmp_path):
    from rotape.io import write_snapshot
    from rotape.initial_data import random_state
    from rotape.scenarios import _initial_state

    grid = GridSpec(nh=16, nz=8)
    rng = np.random.default_rng(2)
    vbar, vt = random_state(grid, rng)
    v = vt.coeffs.copy()
    v[..., 0] += vbar
    write_snapshot(tmp_path / "ic.pesp1", v, grid, 0.0)
    cfg = tiny_config()
    cfg.init.kind = "file"
    cfg.init.path = str(tmp_path / "ic.pesp1")
    vbar2, vt2 = _initial_state(cfg)
    assert np.allclose(vbar2, vbar)
    assert np.allclose(vt2.coeffs, vt.coeffs)


def test_sweep_verb(tmp_path):
    from rotape.cli import main

    doc = {
        "schema": "rotape-config/1",
        "grid": {"nh": 16, "nz": 8},
        "physics": {"nu": 0.2, "omega": 0.0},
        "time": {"dt": 2e-3, "t_end": 0.02},
        "init": {"seed": 3},
        "scenario": {"name": "formulation_equivalence", "sweep": [2.0, 4.0]},
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(doc))
    code = main(["sweep", "--config", str(p), "--out", str(tmp_path / "sw")])
    assert code == 0
    combined = json.loads((tmp_path / "sw" / "sweep_summary.json").read_text())
    assert combined["pass"] is True
    assert len(combined["members"]) == 2
    assert (tmp_path / "sw" / "member_00" / "summary.json").exists()
