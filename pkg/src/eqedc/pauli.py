"""Exact algebra of Pauli strings.

Terms are stored sparsely: a map qubit-index -> letter in {X, Y, Z} with a
complex coefficient.  Products track the group phase exactly (the phase is
always an element of {1, i, -1, -i} times the product of coefficients).
Sums are kept deduplicated by letter pattern so that commutators of
commuting strings cancel to the empty sum.
"""

from __future__ import annotations

import math
from typing import Dict, Iterable, List, Tuple

import numpy as np

from .errors import NonConvergence, SupportTooLarge

COEFF_TOL = 1e-12

# single-qubit products: (a, b) -> (phase, letter or None for identity)
_PROD = {
    ("X", "X"): (1 + 0j, None),
    ("Y", "Y"): (1 + 0j, None),
    ("Z", "Z"): (1 + 0j, None),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliTerm:
    """A complex multiple of a tensor product of Pauli letters.

    ``letters`` maps qubit index to one of ``"X"``, ``"Y"``, ``"Z"``;
    absent indices act as identity.  Instances are treated as immutable.
    """

    __slots__ = ("coefficient", "letters")

    def __init__(self, coefficient: complex, letters: Dict[int, str]):
        self.coefficient = complex(coefficient)
        self.letters = dict(letters)

    def key(self) -> Tuple[Tuple[int, str], ...]:
        return tuple(sorted(self.letters.items()))

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self.letters))

    def __repr__(self) -> str:
        body = " ".join(f"{l}{q}" for q, l in sorted(self.letters.items())) or "I"
        return f"PauliTerm({self.coefficient!r}, {body})"

    def scaled(self, factor: complex) -> "PauliTerm":
        return PauliTerm(self.coefficient * factor, self.letters)


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Exact product of two Pauli terms with the group phase folded in."""
    coeff = a.coefficient * b.coefficient
    letters = dict(a.letters)
    for q, lb in b.letters.items():
        la = letters.pop(q, None)
        if la is None:
            letters[q] = lb
        else:
            phase, lp = _PROD[(la, lb)]
            coeff *= phase
            if lp is not None:
                letters[q] = lp
    return PauliTerm(coeff, letters)


class PauliSum:
    """A deduplicated sum of :class:`PauliTerm`.  The empty sum is zero."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[PauliTerm] = ()):
        merged: Dict[Tuple[Tuple[int, str], ...], complex] = {}
        for t in terms:
            k = t.key()
            merged[k] = merged.get(k, 0j) + t.coefficient
        self.terms: List[PauliTerm] = [
            PauliTerm(c, dict(k)) for k, c in sorted(merged.items()) if abs(c) > COEFF_TOL
        ]

    @property
    def support(self) -> Tuple[int, ...]:
        qubits = set()
        for t in self.terms:
            qubits.update(t.letters)
        return tuple(sorted(qubits))

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        return PauliSum(self.terms + other.terms)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return PauliSum(self.terms + [t.scaled(-1) for t in other.terms])

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            return PauliSum(
                multiply(a, b) for a in self.terms for b in other.terms
            )
        return PauliSum(t.scaled(other) for t in self.terms)

    __rmul__ = __mul__

    def dagger(self) -> "PauliSum":
        return PauliSum(PauliTerm(t.coefficient.conjugate(), t.letters) for t in self.terms)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return all(abs(t.coefficient.imag) <= tol for t in self.terms)

    def __repr__(self) -> str:
        return f"PauliSum({self.terms!r})"


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """[a, b] = ab - ba, fully simplified."""
    out: List[PauliTerm] = []
    for ta in a.terms:
        for tb in b.terms:
            ab = multiply(ta, tb)
            ba = multiply(tb, ta)
            if ab.key() == ba.key() and abs(ab.coefficient - ba.coefficient) <= COEFF_TOL * (
                1 + abs(ab.coefficient)
            ):
                continue  # commuting pair cancels exactly
            out.append(ab)
            out.append(ba.scaled(-1))
    return PauliSum(out)


# ---------------------------------------------------------------------------
# dense embedding and norms
# ---------------------------------------------------------------------------

def _compress_support(s: PauliSum) -> Tuple[List[PauliTerm], int]:
    """Relabel support qubits to 0..k-1 (norms are embedding-invariant)."""
    sup = s.support
    remap = {q: i for i, q in enumerate(sup)}
    terms = [
        PauliTerm(t.coefficient, {remap[q]: l for q, l in t.letters.items()})
        for t in s.terms
    ]
    return terms, len(sup)


def term_action(term: PauliTerm, n_qubits: int):
    """Vectorized action of a Pauli term on computational basis indices.

    Returns (out_indices, amplitudes) so that P|j> = amplitudes[j] |out_indices[j]>.
    Qubit q corresponds to bit q of the index.
    """
    dim = 1 << n_qubits
    j = np.arange(dim)
    flip = 0
    amp = np.full(dim, term.coefficient, dtype=complex)
    for q, l in term.letters.items():
        bit = (j >> q) & 1
        if l == "X":
            flip |= 1 << q
        elif l == "Y":
            flip |= 1 << q
            amp = amp * (1j * (1 - 2 * bit))
        else:  # Z
            amp = amp * (1 - 2 * bit)
    return j ^ flip, amp


def to_dense(s: PauliSum, n_qubits: int | None = None) -> np.ndarray:
    """Dense matrix of the sum on ``n_qubits`` (default: compressed support)."""
    if n_qubits is None:
        terms, n_qubits = _compress_support(s)
    else:
        terms = s.terms
    dim = 1 << n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    j = np.arange(dim)
    for t in terms:
        out, amp = term_action(t, n_qubits)
        mat[out, j] += amp
    return mat


def _dense_norm(s: PauliSum) -> float:
    terms, n = _compress_support(s)
    if n > 14:
        raise SupportTooLarge(f"dense norm needs support <= 14 qubits, got {n}")
    mat = to_dense(PauliSum(terms), n)
    herm_defect = np.abs(mat - mat.conj().T).max()
    if herm_defect < 1e-12:
        return float(np.abs(np.linalg.eigvalsh(mat)).max())
    anti_defect = np.abs(mat + mat.conj().T).max()
    if anti_defect < 1e-12:
        return float(np.abs(np.linalg.eigvalsh(1j * mat)).max())
    return float(np.linalg.norm(mat, 2))


def _power_iteration_norm(s: PauliSum, tol: float = 1e-6) -> float:
    """Largest singular value via iteration on A^dag A with implicit matvec."""
    terms, n = _compress_support(s)
    if n == 0:
        return float(abs(sum(t.coefficient for t in terms))) if terms else 0.0
    dim = 1 << n
    actions = [term_action(t, n) for t in terms]
    dag_actions = [
        term_action(PauliTerm(t.coefficient.conjugate(), t.letters), n) for t in terms
    ]

    def apply(acts, v):
        out = np.zeros(dim, dtype=complex)
        for idx, amp in acts:
            out[idx] += amp * v  # idx is a permutation, so no collisions
        return out

    rng = np.random.default_rng(17)
    cap = max(10 * n, 30)
    best = 0.0
    for _ in range(3):
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        sigma2 = 0.0
        for _ in range(cap):
            w = apply(dag_actions, apply(actions, v))
            nw = np.linalg.norm(w)
            if nw == 0.0:
                sigma2 = 0.0
                break
            sigma2_new = float(np.real(np.vdot(v, w)))
            v = w / nw
            if abs(sigma2_new - sigma2) <= tol * max(sigma2_new, 1e-300):
                sigma2 = sigma2_new
                break
            sigma2 = sigma2_new
        else:
            # certify before giving up
            w = apply(dag_actions, apply(actions, v))
            resid = np.linalg.norm(w - sigma2 * v)
            if resid > 10 * tol * max(sigma2, 1e-300):
                raise NonConvergence(
                    f"power iteration residual {resid:.3e} above tolerance"
                )
        best = max(best, math.sqrt(max(sigma2, 0.0)))
    return best


def spectral_norm(s: PauliSum, method: str = "dense") -> float:
    """Largest singular value of the operator on its support.

    ``method`` is ``"dense"`` (exact, support <= 14 qubits) or
    ``"power_iteration"`` (implicit matvec, 1e-6 relative).
    """
    if not s.terms:
        return 0.0
    if method == "dense":
        return _dense_norm(s)
    if method == "power_iteration":
        return _power_iteration_norm(s)
    raise ValueError(f"unknown norm method {method!r}")


# ---------------------------------------------------------------------------
# text format: `coeff_re coeff_im : X0 Z1 Z2 X3`, one term per line
# ---------------------------------------------------------------------------

def format_pauli_sum(s: PauliSum) -> str:
    lines = []
    for t in s.terms:
        body = " ".join(f"{l}{q}" for q, l in sorted(t.letters.items()))
        lines.append(f"{t.coefficient.real:.17g} {t.coefficient.imag:.17g} : {body}".rstrip())
    return "\n".join(lines)


def parse_pauli_sum(text: str) -> PauliSum:
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, body = line.partition(":")
        re_s, im_s = head.split()
        letters = {}
        for tok in body.split():
            letters[int(tok[1:])] = tok[0]
        terms.append(PauliTerm(complex(float(re_s), float(im_s)), letters))
    return PauliSum(terms)
