"""End-to-end runs of the batch front end against temporary directories."""

import json

import pytest

from eqedc.cli import EXIT_CONFIG, EXIT_OK, load_config, main
from eqedc.stateprep import SlaterSpec, format_slater
import numpy as np


def write_config(tmp_path, text, name="cfg.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


MOMENTUM_CFG = """
[system]
basis = "momentum"
n_points = 1
box_length = 6.0
charge = 0.3
lambda_vac = 0.05

[trotter]
order = 2
dt = 0.05
steps = 2
"""


def test_build_momentum(tmp_path):
    cfg = write_config(tmp_path, MOMENTUM_CFG)
    out = tmp_path / "out"
    assert main(["build", "--config", cfg, "--out", str(out)]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["basis"] == "momentum"
    assert manifest["n_qubits"] == 4
    assert manifest["hermitian"] is True
    assert manifest["conserves_charge"] is True
    assert (out / "hamiltonian.txt").read_text().strip()


def test_build_lattice(tmp_path):
    cfg = write_config(
        tmp_path,
        '[system]\nbasis = "lattice"\nn_side = 2\nbox_length = 5.0\nmass = 1.0\n',
    )
    out = tmp_path / "out"
    assert main(["build", "--config", cfg, "--out", str(out)]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["n_qubits"] == 32


def test_compile_with_verification(tmp_path):
    cfg = write_config(tmp_path, MOMENTUM_CFG)
    out = tmp_path / "out"
    assert main(["compile", "--config", cfg, "--out", str(out), "--verify"]) == EXIT_OK
    report = json.loads((out / "compile_report.json").read_text())
    assert report["measured_error"] <= report["error_bound"]
    assert (out / "circuit.txt").read_text().startswith("QUBITS 4")


def test_compile_deterministic(tmp_path):
    cfg = write_config(tmp_path, MOMENTUM_CFG)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["compile", "--config", cfg, "--out", str(out1)]) == EXIT_OK
    assert main(["compile", "--config", cfg, "--out", str(out2)]) == EXIT_OK
    assert (out1 / "circuit.txt").read_text() == (out2 / "circuit.txt").read_text()


def test_unknown_section_rejected(tmp_path):
    cfg = write_config(tmp_path, "[nonsense]\nfoo = 1\n")
    assert main(["build", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_unknown_key_rejected(tmp_path):
    cfg = write_config(tmp_path, "[system]\nbasis = \"momentum\"\ntypo_key = 1\n")
    assert main(["build", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_missing_cutoff_spec_rejected(tmp_path):
    cfg = write_config(tmp_path, '[system]\nbasis = "momentum"\n')
    assert main(["build", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_missing_config_file(tmp_path):
    missing = str(tmp_path / "nope.toml")
    assert main(["build", "--config", missing, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_malformed_toml(tmp_path):
    cfg = write_config(tmp_path, "[system\nbroken")
    assert main(["build", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_load_config_roundtrip(tmp_path):
    cfg = write_config(tmp_path, MOMENTUM_CFG)
    doc = load_config(cfg)
    assert doc["system"]["n_points"] == 1
    assert doc["trotter"]["steps"] == 2


def test_estimate_outputs(tmp_path):
    out = tmp_path / "out"
    cfg = write_config(tmp_path, "[qpe]\nepsilon = 1.6e-3\n")
    assert main(["estimate", "--config", cfg, "--out", str(out)]) == EXIT_OK
    sweep = (out / "tgate_sweep.csv").read_text().splitlines()
    assert sweep[0] == "n_s,epsilon,n_ancilla,t,n_rot,n_t"
    assert len(sweep) == 13
    gold = json.loads((out / "gold_cutoff.json").read_text())
    assert gold["best_match"] == "rydberg"
    assert set(gold) >= {"hartree", "rydberg", "ev"}


def test_mc_deterministic(tmp_path):
    cfg = write_config(
        tmp_path,
        '[system]\nbox_length = 6.0\n\n[mc]\nsamples = [200]\nseed = 5\nsystems = [1]\n',
    )
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["mc", "--config", cfg, "--out", str(out1)]) == EXIT_OK
    assert main(["mc", "--config", cfg, "--out", str(out2)]) == EXIT_OK
    csv1 = (out1 / "commutator_mc.csv").read_text()
    assert csv1 == (out2 / "commutator_mc.csv").read_text()
    assert csv1.startswith("n_planewaves,M,samples,mean,stddev")


def test_mc_seed_flag_overrides(tmp_path):
    cfg = write_config(
        tmp_path,
        '[system]\nbox_length = 6.0\n\n[mc]\nsamples = [200]\nseed = 5\nsystems = [1]\n',
    )
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["mc", "--config", cfg, "--out", str(out1)]) == EXIT_OK
    assert main(["mc", "--config", cfg, "--out", str(out2), "--seed", "99"]) == EXIT_OK
    assert (out1 / "commutator_mc.csv").read_text() != (
        out2 / "commutator_mc.csv"
    ).read_text()


def test_stateprep_command(tmp_path):
    rng = np.random.default_rng(0)
    a = np.linalg.qr(rng.normal(size=(4, 4)))[0]
    slater = tmp_path / "orbitals.csv"
    slater.write_text(format_slater(SlaterSpec(a[:2, :])))
    cfg = write_config(tmp_path, f'[stateprep]\nslater_file = "{slater}"\n')
    out = tmp_path / "out"
    assert main(["stateprep", "--config", cfg, "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "stateprep_report.json").read_text())
    assert report["within_bound"] is True
    assert report["n_rotations"] <= report["rotation_bound"] == 4


def test_stateprep_requires_file(tmp_path):
    cfg = write_config(tmp_path, "[stateprep]\n")
    assert main(["stateprep", "--config", cfg, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_cutoff_command(tmp_path):
    cfg = write_config(tmp_path, "[cutoff]\nz = 79\nenergy_unit = \"rydberg\"\n")
    out = tmp_path / "out"
    assert main(["cutoff", "--config", cfg, "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "cutoff.json").read_text())
    assert report["unit_convention"] == "rydberg"
    assert report["n_planewaves"] > 1e6


def test_verify_appendix(capsys):
    assert main(["verify-appendix"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "all 8 rows verified" in out
    assert out.count("ok") >= 8
