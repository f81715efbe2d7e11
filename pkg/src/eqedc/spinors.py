"""Gamma matrices (Dirac representation), relativistic dispersion, and
helicity spinors with their bilinear forms.

Hartree atomic units throughout (m = e = 1 unless stated); the speed of
light c = 1/alpha enters only through the heavy-atom cutoff estimates.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

C_LIGHT = 137.035999  # 1/alpha in Hartree atomic units

_SIGMA = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]
_I2 = np.eye(2, dtype=complex)

# gamma^0 = 1 (x) sigma_3 -> diag(1, 1, -1, -1); gamma^i = i sigma_2 (x) sigma_i
GAMMA0 = np.kron(_SIGMA[2], _I2)
GAMMAS = [GAMMA0] + [np.kron(1j * _SIGMA[1], s) for s in _SIGMA]
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


class HelicitySpinor(NamedTuple):
    components: np.ndarray  # 4-vector, complex
    momentum: np.ndarray  # physical 3-vector
    kind: str  # u1, u2, v1, v2


def dispersion(k: Sequence[float], m: float) -> float:
    """Relativistic energy E_k = sqrt(|k|^2 + m^2)."""
    k = np.asarray(k, dtype=float)
    return float(np.sqrt(k @ k + m * m))


def spinor(kind: str, p: Sequence[float], m: float) -> HelicitySpinor:
    """Helicity spinor u1/u2/v1/v2 at physical momentum p (closed forms)."""
    p = np.asarray(p, dtype=float)
    px, py, pz = p
    e = dispersion(p, m)
    d = e + m
    if kind == "u1":
        comp = [1, 0, pz / d, (px + 1j * py) / d]
    elif kind == "u2":
        comp = [0, 1, (px - 1j * py) / d, -pz / d]
    elif kind == "v1":
        comp = [(px - 1j * py) / d, -pz / d, 0, 1]
    elif kind == "v2":
        comp = [pz / d, (px + 1j * py) / d, 1, 0]
    else:
        raise ValueError(f"unknown spinor kind {kind!r}")
    return HelicitySpinor(np.sqrt(d) * np.array(comp, dtype=complex), p, kind)


def bilinear(
    left: HelicitySpinor,
    gammas: Sequence[np.ndarray],
    right: HelicitySpinor,
    barred: bool = True,
) -> complex:
    """psi-bar Gamma phi (or psi^dag Gamma phi when barred=False)."""
    mat = np.eye(4, dtype=complex)
    for g in gammas:
        mat = mat @ g
    l = left.components.conj()
    if barred:
        l = l @ GAMMA0
    return complex(l @ mat @ right.components)


def current(left: HelicitySpinor, right: HelicitySpinor) -> np.ndarray:
    """The four components psi-bar gamma^mu phi as a vector."""
    l = left.components.conj() @ GAMMA0
    return np.array([complex(l @ g @ right.components) for g in GAMMAS])


def contract(j1: np.ndarray, j2: np.ndarray) -> complex:
    """Lorentz contraction j1^mu g_{mu mu} j2^mu."""
    return complex(j1 @ METRIC @ j2)
