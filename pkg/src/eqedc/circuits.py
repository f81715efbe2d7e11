"""Gate and circuit containers plus the text serialization format.

Gate set: H, S, SDG, CNOT, RZ(angle).  RZ(theta) = exp(-i theta Z / 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

from .errors import EqedcError

_KINDS = {"H", "S", "SDG", "CNOT", "RZ"}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: Tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise EqedcError(f"unknown gate kind {self.kind!r}")
        if self.kind == "CNOT":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise EqedcError("CNOT needs distinct control and target")
        elif len(self.qubits) != 1:
            raise EqedcError(f"{self.kind} is a single-qubit gate")


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def rz(qubit: int, angle: float) -> Gate:
    return Gate("RZ", (qubit,), float(angle))


@dataclass
class Circuit:
    num_qubits: int
    gates: List[Gate] = field(default_factory=list)

    def append(self, gate: Gate) -> None:
        if any(q >= self.num_qubits or q < 0 for q in gate.qubits):
            raise EqedcError(f"gate {gate} outside register of {self.num_qubits}")
        self.gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(g)

    def __len__(self) -> int:
        return len(self.gates)

    def counts(self) -> dict:
        """Gate tallies: Rz, all single-qubit, and CNOT."""
        n_rz = sum(1 for g in self.gates if g.kind == "RZ")
        n_cnot = sum(1 for g in self.gates if g.kind == "CNOT")
        return {
            "n_rz": n_rz,
            "n_single_qubit": len(self.gates) - n_cnot,
            "n_cnot": n_cnot,
        }


def format_circuit(c: Circuit) -> str:
    lines = [f"QUBITS {c.num_qubits}"]
    for g in c.gates:
        if g.kind == "RZ":
            lines.append(f"RZ {g.qubits[0]} {g.angle:.17g}")
        elif g.kind == "CNOT":
            lines.append(f"CNOT {g.qubits[0]} {g.qubits[1]}")
        else:
            lines.append(f"{g.kind} {g.qubits[0]}")
    return "\n".join(lines)


def parse_circuit(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("QUBITS"):
        raise EqedcError("circuit text must start with a QUBITS header")
    c = Circuit(int(lines[0].split()[1]))
    for ln in lines[1:]:
        parts = ln.split()
        kind = parts[0]
        if kind == "RZ":
            c.append(rz(int(parts[1]), float(parts[2])))
        elif kind == "CNOT":
            c.append(cnot(int(parts[1]), int(parts[2])))
        else:
            c.append(Gate(kind, (int(parts[1]),)))
    return c
