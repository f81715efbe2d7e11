"""Dense oracles: exact matrices for Pauli sums, circuit unitaries, matrix
exponentials, Trotter-error measurement, and a statistical phase-estimation
emulator.

Everything here is exact linear algebra on small registers and is used to
verify the symbolic/compiled layers.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .circuits import Circuit
from .errors import NonHermitian, PhaseWrap, TooLarge
from .pauli import PauliSum, to_dense

MATRIX_QUBIT_CAP = 14
CIRCUIT_QUBIT_CAP = 12

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_SDG = _S.conj()


def pauli_to_dense(s: PauliSum, n_qubits: int) -> np.ndarray:
    """Exact matrix on the full register; qubit q is bit q of the index."""
    if n_qubits > MATRIX_QUBIT_CAP:
        raise TooLarge(f"dense matrix needs <= {MATRIX_QUBIT_CAP} qubits, got {n_qubits}")
    return to_dense(s, n_qubits)


def _apply_single(mat: np.ndarray, gate_mat: np.ndarray, q: int, n: int) -> np.ndarray:
    dim = 1 << n
    t = mat.reshape([2] * n + [dim])
    axis = n - 1 - q
    t = np.moveaxis(t, axis, 0)
    t = np.tensordot(gate_mat, t, axes=([1], [0]))
    return np.moveaxis(t, 0, axis).reshape(dim, dim)


def _apply_cnot(mat: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    dim = 1 << n
    j = np.arange(dim)
    flipped = np.where((j >> control) & 1 == 1, j ^ (1 << target), j)
    out = np.empty_like(mat)
    out[flipped] = mat[j]
    return out


def circuit_to_unitary(c: Circuit) -> np.ndarray:
    """Exact unitary: ordered product of the gate matrices."""
    n = c.num_qubits
    if n > CIRCUIT_QUBIT_CAP:
        raise TooLarge(f"circuit unitary needs <= {CIRCUIT_QUBIT_CAP} qubits, got {n}")
    u = np.eye(1 << n, dtype=complex)
    for g in c.gates:
        if g.kind == "CNOT":
            u = _apply_cnot(u, g.qubits[0], g.qubits[1], n)
        elif g.kind == "H":
            u = _apply_single(u, _H, g.qubits[0], n)
        elif g.kind == "S":
            u = _apply_single(u, _S, g.qubits[0], n)
        elif g.kind == "SDG":
            u = _apply_single(u, _SDG, g.qubits[0], n)
        else:  # RZ
            rzm = np.diag([np.exp(-0.5j * g.angle), np.exp(0.5j * g.angle)])
            u = _apply_single(u, rzm, g.qubits[0], n)
    return u


def exact_evolution(h: np.ndarray, t: float) -> np.ndarray:
    """e^{-i h t} by eigendecomposition of a Hermitian matrix."""
    if np.abs(h - h.conj().T).max() > 1e-10:
        raise NonHermitian("exact_evolution needs a Hermitian matrix")
    vals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(-1j * vals * t)) @ vecs.conj().T


def spectral_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b, 2))


def measure_trotter_error(h: PauliSum, plan, n_qubits: Optional[int] = None) -> float:
    """Spectral distance between the compiled step sequence and e^{-iHt}."""
    from .trotter import compile_trotter  # local import to avoid a cycle

    if n_qubits is None:
        n_qubits = (max(h.support) + 1) if h.support else 1
    if n_qubits > CIRCUIT_QUBIT_CAP:
        raise TooLarge(f"trotter error measurement capped at {CIRCUIT_QUBIT_CAP} qubits")
    circ, report = compile_trotter(h, plan, n_qubits=n_qubits)
    u = circuit_to_unitary(circ) * np.exp(-1j * report["constant"] * plan.dt * plan.steps)
    exact = exact_evolution(pauli_to_dense(h, n_qubits), plan.dt * plan.steps)
    return spectral_distance(u, exact)


def phase_estimate_emulation(
    h: np.ndarray,
    state: Sequence[complex],
    t: float,
    n_ancilla: int,
    rng: Optional[np.random.Generator] = None,
    epsilon: float = 0.0,
) -> float:
    """Sample one phase-estimation energy readout classically.

    The ancilla register is never simulated: the outcome distribution of
    textbook phase estimation on e^{-iHt} is computed exactly from the
    eigendecomposition and sampled.  Requires t (||H|| + epsilon) <= pi so
    eigenphases cannot wrap.
    """
    if rng is None:
        rng = np.random.default_rng()
    if np.abs(h - h.conj().T).max() > 1e-10:
        raise NonHermitian("phase estimation needs a Hermitian matrix")
    vals, vecs = np.linalg.eigh(h)
    norm_h = float(np.abs(vals).max())
    if t * (norm_h + epsilon) > math.pi:
        raise PhaseWrap(f"t (||H|| + eps) = {t * (norm_h + epsilon):.6g} > pi")
    amp = vecs.conj().T @ np.asarray(state, dtype=complex)
    weights = np.abs(amp) ** 2
    weights = weights / weights.sum()
    k = rng.choice(len(vals), p=weights)
    phi = (-vals[k] * t / (2.0 * math.pi)) % 1.0
    dim = 1 << n_ancilla
    m = np.arange(dim)
    delta = phi - m / dim
    # |<m|QPE|phi>|^2 = |sin(pi dim delta) / (dim sin(pi delta))|^2
    num = np.sin(math.pi * dim * delta)
    den = dim * np.sin(math.pi * delta)
    probs = np.where(np.abs(den) < 1e-300, 1.0, (num / np.where(den == 0, 1.0, den)) ** 2)
    probs = probs / probs.sum()
    m_obs = rng.choice(dim, p=probs)
    phi_hat = m_obs / dim
    if phi_hat > 0.5:
        phi_hat -= 1.0
    return -2.0 * math.pi * phi_hat / t
