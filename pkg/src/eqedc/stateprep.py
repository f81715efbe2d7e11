"""Determinant counting for restricted-active-space CI and Givens-rotation
compilation of Slater determinants.

The planner works on the electronic sub-register only: positron modes are
taken as unoccupied by default (``positron_occupied`` flips the reading) and
never enter the rotation network.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .circuits import Circuit, rz
from .errors import EqedcError, NonIsometry
from .trotter import compile_one_body

ISOMETRY_TOL = 1e-8


@dataclass(frozen=True)
class ActiveSpaceSpec:
    n_ras1: int
    n_cas: int
    n_ras3: int
    n_e: int
    m_h: int = 2
    m_e: int = 2

    def __post_init__(self):
        if min(self.n_ras1, self.n_cas, self.n_ras3, self.n_e, self.m_h, self.m_e) < 0:
            raise EqedcError("active-space sizes must be nonnegative")
        if self.n_e > self.n_ras1 + self.n_cas + self.n_ras3:
            raise EqedcError("more electrons than orbitals")


def mrci_determinant_count(spec: ActiveSpaceSpec) -> int:
    """Number of determinants with at most m_h holes in RAS1 and at most
    m_e particles in RAS3 (exact big-integer double binomial sum)."""
    total = 0
    for i_h in range(spec.m_h + 1):
        for i_e in range(spec.m_e + 1):
            k = spec.n_e - spec.n_ras1 + i_h - i_e
            if k < 0 or k > spec.n_cas:
                continue
            total += (
                math.comb(spec.n_ras1, i_h)
                * math.comb(spec.n_cas, k)
                * math.comb(spec.n_ras3, i_e)
            )
    return total


def enumerate_determinants(spec: ActiveSpaceSpec) -> int:
    """Brute-force occupation-bitstring count (oracle for small spaces)."""
    n_orb = spec.n_ras1 + spec.n_cas + spec.n_ras3
    count = 0
    for bits in range(1 << n_orb):
        if bin(bits).count("1") != spec.n_e:
            continue
        ras1 = bin(bits & ((1 << spec.n_ras1) - 1)).count("1")
        ras3 = bin(bits >> (spec.n_ras1 + spec.n_cas)).count("1")
        holes = spec.n_ras1 - ras1
        if holes <= spec.m_h and ras3 <= spec.m_e:
            count += 1
    return count


@dataclass
class SlaterSpec:
    q: np.ndarray  # N_f x n_s, rows orthonormal
    n_f: int = field(init=False)
    n_s: int = field(init=False)

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=complex)
        if self.q.ndim != 2:
            raise EqedcError("Slater coefficient matrix must be 2-D")
        self.n_f, self.n_s = self.q.shape
        if self.n_f > self.n_s:
            raise EqedcError("more fermions than modes")


GivensRotation = Tuple[int, int, float, float]  # (p, q, theta, phi)


def givens_decompose(spec: SlaterSpec) -> List[GivensRotation]:
    """Rotations whose compiled product maps |1..1 0..0> to the Q determinant.

    Works on A = Q^T (orthonormal columns), zeroing below the diagonal
    column by column from the bottom row up with rotations on adjacent mode
    pairs; at most (n_s - N_f) N_f rotations survive pruning.
    """
    a = spec.q.T.copy()
    gram = spec.q @ spec.q.conj().T
    if np.abs(gram - np.eye(spec.n_f)).max() > ISOMETRY_TOL:
        raise NonIsometry("Slater rows are not orthonormal")
    # Mixing the occupied orbitals changes the determinant only by a global
    # phase; pick the mix that staircases the bottom rows so column f already
    # vanishes below row (n_s - n_f + f).  This caps the rotation count at
    # (n_s - n_f) n_f.
    if spec.n_f > 1:
        bottom = a[spec.n_s - spec.n_f + 1 :, :]
        flipped = bottom[::-1, ::-1]
        q_full, _ = np.linalg.qr(flipped.conj().T, mode="complete")
        w = q_full[::-1, ::-1]
        a = a @ w
    rotations: List[GivensRotation] = []
    for col in range(spec.n_f):
        for row in range(spec.n_s - 1, col, -1):
            b = a[row, col]
            if abs(b) < 1e-14:
                continue
            top = a[row - 1, col]
            if abs(top) < 1e-14:
                theta = math.pi / 2.0
                phi = 0.0
            else:
                theta = math.atan2(abs(b), abs(top))
                phi = math.pi + cmath.phase(top) - cmath.phase(b)
            g = np.array(
                [
                    [math.cos(theta), -cmath.exp(1j * phi) * math.sin(theta)],
                    [math.sin(theta), cmath.exp(1j * phi) * math.cos(theta)],
                ]
            )
            a[[row - 1, row], :] = g @ a[[row - 1, row], :]
            rotations.append((row - 1, row, theta, phi))
    return rotations


def compile_givens(
    rotations: Sequence[GivensRotation], n_modes: int
) -> Circuit:
    """Circuit preparing the decomposed determinant from |1..1 0..0>.

    Each (p, q, theta, phi) becomes the hopping-pair template for
    e^{i(theta/2)(X Z..Z Y - Y Z..Z X)} plus an Rz(phi) phase on mode q;
    rotations are applied in reverse decomposition order (the decomposition
    reduced Q to the computational determinant, the circuit undoes it).
    """
    circ = Circuit(n_modes)
    for p, q, theta, phi in reversed(list(rotations)):
        mids = list(range(p + 1, q))
        circ.extend(compile_one_body(p, q, mids, theta / 2.0, anti=True).gates)
        circ.append(rz(q, -phi))
    return circ


def parse_slater(text: str) -> SlaterSpec:
    """CSV-like format: header line `nf,ns`, then one `re,im` entry per line
    in row-major order."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise EqedcError("empty Slater file")
    n_f, n_s = (int(v) for v in lines[0].split(","))
    entries = []
    for ln in lines[1:]:
        re_s, im_s = ln.split(",")
        entries.append(complex(float(re_s), float(im_s)))
    if len(entries) != n_f * n_s:
        raise EqedcError(f"expected {n_f * n_s} entries, got {len(entries)}")
    return SlaterSpec(np.array(entries).reshape(n_f, n_s))


def format_slater(spec: SlaterSpec) -> str:
    lines = [f"{spec.n_f},{spec.n_s}"]
    for v in spec.q.ravel():
        lines.append(f"{float(v.real)!r},{float(v.imag)!r}")
    return "\n".join(lines)


def prepared_state(circ: Circuit, n_f: int) -> np.ndarray:
    """Apply the compiled circuit to the computational determinant."""
    from .dense import circuit_to_unitary

    dim = 1 << circ.num_qubits
    start = np.zeros(dim, dtype=complex)
    start[(1 << n_f) - 1] = 1.0
    return circuit_to_unitary(circ) @ start


def determinant_state(spec: SlaterSpec) -> np.ndarray:
    """Dense Fock-space oracle: apply the Q-rotated creation operators to
    the vacuum (mode occupation = qubit bit, little-endian)."""
    from .fermions import FermionPolynomial, FermionTerm, jordan_wigner
    from .pauli import to_dense

    n = spec.n_s
    dim = 1 << n
    state = np.zeros(dim, dtype=complex)
    state[0] = 1.0
    ordering = list(range(n))
    for f in range(spec.n_f - 1, -1, -1):
        op = FermionPolynomial(
            [FermionTerm(spec.q[f, x], ((x, True),)) for x in range(n)],
            normal=True,
        )
        state = to_dense(jordan_wigner(op, ordering=ordering), n) @ state
    return state
