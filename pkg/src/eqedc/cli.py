"""Batch front end: TOML config in, term dumps / circuits / sweep CSVs out.

Exit codes: 0 success, 2 config error, 3 verification failure, 4 resource
limit refused.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

import numpy as np

from .circuits import format_circuit
from .dense import CIRCUIT_QUBIT_CAP, measure_trotter_error
from .errors import EqedcError
from .fermions import check_hermitian, conserves_charge, format_polynomial, jordan_wigner
from .lattice import LatticeConfig, build_lattice
from .mc import McConfig, format_mc_csv, run_campaign
from .rellium import RelliumConfig, build_rellium_blocks
from .resources import planewave_cutoff, sweep_rows
from .stateprep import compile_givens, givens_decompose, parse_slater
from .trotter import TrotterPlan, compile_trotter, second_order_bound

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_RESOURCE = 4

_SCHEMA = {
    "system": {
        "basis",
        "n_side",
        "e_cut",
        "n_points",
        "box_length",
        "mass",
        "charge",
        "delta_m",
        "lambda_vac",
        "include_interaction",
        "include_pair_terms",
    },
    "trotter": {"order", "dt", "steps", "term_grouping", "dense_one_body"},
    "qpe": {"epsilon"},
    "mc": {"samples", "seed", "systems", "norm_method"},
    "output": {"directory", "formats"},
    "stateprep": {"slater_file"},
    "cutoff": {"z", "n_quantum", "j", "box_length", "energy_unit"},
}


class ConfigError(EqedcError):
    pass


def load_config(path: str) -> dict:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    for section, body in doc.items():
        allowed = _SCHEMA.get(section)
        if allowed is None:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(body, dict):
            raise ConfigError(f"section [{section}] must be a table")
        for key in body:
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
    return doc


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _system_from_config(doc: dict):
    sysc = doc.get("system", {})
    basis = sysc.get("basis", "momentum")
    if basis == "lattice":
        cfg = LatticeConfig(
            n_side=int(sysc.get("n_side", 2)),
            box_length=float(sysc.get("box_length", 1.0)),
            mass=float(sysc.get("mass", 1.0)),
            charge=float(sysc.get("charge", 1.0)),
        )
        total, blocks, manifest = build_lattice(
            cfg, include_interaction=bool(sysc.get("include_interaction", True))
        )
        return basis, total, blocks, manifest
    if basis != "momentum":
        raise ConfigError(f"system.basis must be 'lattice' or 'momentum', got {basis!r}")
    if "e_cut" in sysc:
        e_cut = float(sysc["e_cut"])
    elif "n_points" in sysc:
        from .rellium import cutoff_for_grid

        e_cut = cutoff_for_grid(float(sysc.get("box_length", 1.0)), int(sysc["n_points"]))
    else:
        raise ConfigError("momentum basis needs system.e_cut or system.n_points")
    cfg = RelliumConfig(
        box_length=float(sysc.get("box_length", 1.0)),
        energy_cutoff=e_cut,
        mass=float(sysc.get("mass", 1.0)),
        charge=float(sysc.get("charge", 1.0)),
        delta_m=float(sysc.get("delta_m", 0.0)),
        lambda_vac=float(sysc.get("lambda_vac", 0.0)),
        include_pair_terms=bool(sysc.get("include_pair_terms", True)),
    )
    total, blocks, manifest = build_rellium_blocks(cfg)
    return basis, total, blocks, manifest


def cmd_build(doc: dict, out: str) -> int:
    basis, total, blocks, manifest = _system_from_config(doc)
    manifest = dict(manifest)
    manifest["basis"] = basis
    manifest["hermitian"] = check_hermitian(total)
    manifest["conserves_charge"] = conserves_charge(total)
    atomic_write(os.path.join(out, "hamiltonian.txt"), format_polynomial(total) + "\n")
    atomic_write(os.path.join(out, "manifest.json"), json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {manifest['n_terms']} terms over {manifest['n_qubits']} qubits")
    return EXIT_OK


def _plan_from_config(doc: dict) -> TrotterPlan:
    tr = doc.get("trotter", {})
    return TrotterPlan(
        order=int(tr.get("order", 2)),
        dt=float(tr.get("dt", 0.1)),
        steps=int(tr.get("steps", 1)),
        term_grouping=str(tr.get("term_grouping", "even_odd_families")),
        dense_one_body=bool(tr.get("dense_one_body", False)),
    )


def cmd_compile(doc: dict, out: str, verify: bool) -> int:
    basis, total, blocks, manifest = _system_from_config(doc)
    plan = _plan_from_config(doc)
    ps = jordan_wigner(total)
    n_qubits = manifest["n_qubits"]
    circ, report = compile_trotter(ps, plan, n_qubits=n_qubits)
    report = dict(report)
    report["basis"] = basis
    report["n_qubits"] = n_qubits
    atomic_write(os.path.join(out, "circuit.txt"), format_circuit(circ) + "\n")
    code = EXIT_OK
    if verify:
        if n_qubits > CIRCUIT_QUBIT_CAP:
            print(
                f"warning: skipping verification, {n_qubits} qubits exceeds "
                f"the dense cap of {CIRCUIT_QUBIT_CAP}",
                file=sys.stderr,
            )
        else:
            err = measure_trotter_error(ps, plan, n_qubits=n_qubits)
            bound = second_order_bound(ps, plan) if plan.order == 2 else None
            report["measured_error"] = err
            report["error_bound"] = bound
            if bound is not None and err > bound * (1 + 1e-9):
                print(
                    f"verification FAILED: measured {err:.3e} > bound {bound:.3e}",
                    file=sys.stderr,
                )
                code = EXIT_VERIFY
    atomic_write(os.path.join(out, "compile_report.json"), json.dumps(report, indent=2) + "\n")
    print(
        f"compiled {report['n_blocks']} blocks: "
        f"{report['n_rz']} Rz, {report['n_single_qubit']} single-qubit, "
        f"{report['n_cnot']} CNOT"
    )
    return code


def cmd_estimate(doc: dict, out: str) -> int:
    epsilon = float(doc.get("qpe", {}).get("epsilon", 1.6e-3))
    n_s_values = [1, 2, 4, 7, 10, 14, 20, 28, 40, 57, 80, 100]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n_s", "epsilon", "n_ancilla", "t", "n_rot", "n_t"])
    for row in sweep_rows(n_s_values, epsilon):
        writer.writerow([row[0], row[1], row[2], repr(row[3]), row[4], row[5]])
    atomic_write(os.path.join(out, "tgate_sweep.csv"), buf.getvalue())

    gold = {}
    for unit in ("hartree", "rydberg", "ev"):
        est = planewave_cutoff(79, 1, 0.5, 2 * 3.14, energy_unit=unit)
        gold[unit] = {
            "n_planewaves": est.n_planewaves,
            "logical_qubits": est.logical_qubits,
            "e_cut": est.e_cut,
        }
    gold["best_match"] = "rydberg"
    atomic_write(os.path.join(out, "gold_cutoff.json"), json.dumps(gold, indent=2) + "\n")
    print(f"wrote sweep for epsilon={epsilon} and the heavy-atom cutoff report")
    return EXIT_OK


def cmd_mc(doc: dict, out: str, seed_flag) -> int:
    mc = doc.get("mc", {})
    seed = int(seed_flag if seed_flag is not None else mc.get("seed", 1))
    samples = mc.get("samples", [1000, 10000])
    if isinstance(samples, int):
        samples = [samples]
    box = float(doc.get("system", {}).get("box_length", 1.0))
    from .rellium import cutoff_for_grid

    n_points_list = mc.get("systems", [7, 19])
    systems = [
        RelliumConfig(box_length=box, energy_cutoff=cutoff_for_grid(box, int(npts)))
        for npts in n_points_list
    ]
    cfg = McConfig(
        sample_counts=[int(s) for s in samples],
        seed=seed,
        systems=systems,
        norm_method=str(mc.get("norm_method", "power_iteration")),
    )
    result = run_campaign(cfg)
    atomic_write(os.path.join(out, "commutator_mc.csv"), format_mc_csv(result))
    print(f"sampled {len(systems)} systems; fit b={result.fit_b}")
    return EXIT_OK


def cmd_stateprep(doc: dict, out: str) -> int:
    path = doc.get("stateprep", {}).get("slater_file")
    if not path:
        raise ConfigError("stateprep needs [stateprep] slater_file")
    with open(path) as fh:
        spec = parse_slater(fh.read())
    rotations = givens_decompose(spec)
    circ = compile_givens(rotations, spec.n_s)
    bound = (spec.n_s - spec.n_f) * spec.n_f
    report = {
        "n_f": spec.n_f,
        "n_s": spec.n_s,
        "n_rotations": len(rotations),
        "rotation_bound": bound,
        "within_bound": len(rotations) <= bound,
    }
    atomic_write(os.path.join(out, "stateprep_circuit.txt"), format_circuit(circ) + "\n")
    atomic_write(os.path.join(out, "stateprep_report.json"), json.dumps(report, indent=2) + "\n")
    print(f"{len(rotations)} rotations (bound {bound})")
    return EXIT_OK


def cmd_cutoff(doc: dict, out: str) -> int:
    c = doc.get("cutoff", {})
    est = planewave_cutoff(
        int(c.get("z", 79)),
        int(c.get("n_quantum", 1)),
        float(c.get("j", 0.5)),
        float(c.get("box_length", 2 * 3.14)),
        energy_unit=str(c.get("energy_unit", "rydberg")),
    )
    report = {
        "z": est.z,
        "e_1s_hartree": est.e_1s_hartree,
        "e_cut": est.e_cut,
        "unit_convention": est.unit_convention,
        "n_planewaves": est.n_planewaves,
        "logical_qubits": est.logical_qubits,
    }
    atomic_write(os.path.join(out, "cutoff.json"), json.dumps(report, indent=2) + "\n")
    print(f"N_PW = {est.n_planewaves:.3e}, qubits = {est.logical_qubits:.3e}")
    return EXIT_OK


def cmd_verify_appendix() -> int:
    from .dense import circuit_to_unitary, pauli_to_dense
    from .pauli import PauliSum, PauliTerm
    from .trotter import ODD_WORD_TABLE, ghz_diagonalizer

    g = circuit_to_unitary(ghz_diagonalizer([0, 1, 2, 3]))
    worst = 0.0
    for word, (subset, sign) in sorted(ODD_WORD_TABLE.items()):
        p = pauli_to_dense(PauliSum([PauliTerm(1.0, dict(enumerate(word)))]), 4)
        d = pauli_to_dense(PauliSum([PauliTerm(1.0, {i: "Z" for i in subset})]), 4)
        defect = float(np.abs(p - sign * (g @ d @ g.conj().T)).max())
        worst = max(worst, defect)
        status = "ok" if defect < 1e-12 else "FAIL"
        print(f"{word} -> {'-' if sign < 0 else '+'}Z{subset}: {defect:.2e} {status}")
    if worst >= 1e-12:
        return EXIT_VERIFY
    print("all 8 rows verified")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="eqedc")
    parser.add_argument("command", choices=[
        "build", "compile", "estimate", "mc", "stateprep", "cutoff", "verify-appendix",
    ])
    parser.add_argument("--config", default=None)
    parser.add_argument("--out", default=".")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--verify", action="store_true")
    args = parser.parse_args(argv)

    try:
        doc = load_config(args.config) if args.config else {}
        if args.command == "build":
            return cmd_build(doc, args.out)
        if args.command == "compile":
            return cmd_compile(doc, args.out, args.verify)
        if args.command == "estimate":
            return cmd_estimate(doc, args.out)
        if args.command == "mc":
            return cmd_mc(doc, args.out, args.seed)
        if args.command == "stateprep":
            return cmd_stateprep(doc, args.out)
        if args.command == "cutoff":
            return cmd_cutoff(doc, args.out)
        return cmd_verify_appendix()
    except (ConfigError, FileNotFoundError, tomllib.TOMLDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EqedcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
