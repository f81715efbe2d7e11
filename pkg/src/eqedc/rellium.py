"""Momentum-space Hamiltonian builder for the relativistic electron gas.

Planewave modes live on the integer grid nu with kinetic cutoff
|2 pi nu / L|^2 / 2 <= E_cut; each grid point carries two electron and two
positron helicity modes.  Interactions are weighted by tree-level
scattering amplitudes (2->2 for ee/pp/ep, 1->3 for both species, and the
vacuum 0->4 coupling), each divided by 2 Omega sqrt(E_p E_q E_r E_s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigInvalid, MissingPotential, SingularDenominator
from .fermions import ELECTRON, POSITRON, FermionPolynomial, FermionTerm, ModeIndex
from .spinors import HelicitySpinor, bilinear, contract, current, dispersion, spinor

COEFF_TOL = 1e-12
DENOM_TOL = 1e-12

Nu = Tuple[int, int, int]


@dataclass(frozen=True)
class RelliumConfig:
    box_length: float
    energy_cutoff: float
    mass: float = 1.0
    charge: float = 1.0
    delta_m: float = 0.0
    lambda_vac: float = 0.0
    include_pair_terms: bool = True
    # nu -> covariant four-potential Fourier components
    external_potential: Optional[Dict[Nu, Sequence[complex]]] = None

    def __post_init__(self):
        if self.box_length <= 0:
            raise ConfigInvalid("box_length must be positive")
        if self.energy_cutoff <= 0:
            raise ConfigInvalid("energy_cutoff must be positive")


def grid(cfg: RelliumConfig) -> List[Nu]:
    """Integer grid points with |2 pi nu / L|^2 / 2 <= E_cut, sorted."""
    scale = (2.0 * math.pi / cfg.box_length) ** 2 / 2.0
    n_max = int(math.floor(math.sqrt(cfg.energy_cutoff / scale)))
    pts = [
        nu
        for nu in product(range(-n_max, n_max + 1), repeat=3)
        if scale * (nu[0] ** 2 + nu[1] ** 2 + nu[2] ** 2) <= cfg.energy_cutoff
    ]
    return sorted(pts)


def cutoff_for_grid(box_length: float, n_points: int) -> float:
    """Smallest isotropic cutoff whose grid has exactly n_points points.

    Raises ConfigInvalid when no closed shell gives that count (the shell
    sequence runs 1, 7, 19, 27, 33, ...).
    """
    scale = (2.0 * math.pi / box_length) ** 2 / 2.0
    n_max = 1
    while True:
        sqs = sorted(
            {a * a + b * b + c * c for a, b, c in product(range(-n_max, n_max + 1), repeat=3)}
        )
        counts = []
        total = 0
        all_pts = list(product(range(-n_max, n_max + 1), repeat=3))
        for s in sqs:
            total += sum(1 for p in all_pts if p[0] ** 2 + p[1] ** 2 + p[2] ** 2 == s)
            counts.append((s, total))
        for s, c in counts:
            if c == n_points and s < n_max * n_max:  # shell fully inside the cube
                # halfway to the next shell: strictly positive and unambiguous
                return scale * (s + 0.5)
        if counts[-1][1] > 4 * n_points:
            raise ConfigInvalid(f"no closed momentum shell has {n_points} points")
        n_max += 1


def mode_a(nu: Nu, sigma: int) -> ModeIndex:
    return ModeIndex(ELECTRON, nu, sigma)


def mode_b(nu: Nu, sigma: int) -> ModeIndex:
    return ModeIndex(POSITRON, nu, sigma)


def modes(cfg: RelliumConfig) -> List[ModeIndex]:
    g = grid(cfg)
    return sorted(
        [mode_a(nu, s) for nu in g for s in (1, 2)]
        + [mode_b(nu, s) for nu in g for s in (1, 2)],
        key=lambda m: m.sort_key(),
    )


class AmplitudeRequest(NamedTuple):
    process: str  # ee, pp, ep, eeep, pppe, vac
    momenta: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]  # physical
    spins: Tuple[int, int, int, int]


def _denom(ea: float, eb: float, pa: np.ndarray, pb: np.ndarray, sign: int) -> float:
    dp = pa + sign * pb
    d = (ea + sign * eb) ** 2 - float(dp @ dp)
    if abs(d) < DENOM_TOL:
        raise SingularDenominator(f"four-momentum-transfer denominator {d:.3e}")
    return d


class _Kinematics:
    """Caches spinors and currents over a fixed grid."""

    def __init__(self, cfg: RelliumConfig):
        self.cfg = cfg
        self._spinors: Dict[Tuple[str, Nu, int], HelicitySpinor] = {}
        self._currents: Dict[tuple, np.ndarray] = {}
        self._energy: Dict[Nu, float] = {}

    def phys(self, nu: Nu) -> np.ndarray:
        return 2.0 * math.pi * np.asarray(nu, dtype=float) / self.cfg.box_length

    def energy(self, nu: Nu) -> float:
        if nu not in self._energy:
            self._energy[nu] = dispersion(self.phys(nu), self.cfg.mass)
        return self._energy[nu]

    def spin(self, kind: str, nu: Nu, sigma: int) -> HelicitySpinor:
        key = (kind, nu, sigma)
        if key not in self._spinors:
            self._spinors[key] = spinor(f"{kind}{sigma}", self.phys(nu), self.cfg.mass)
        return self._spinors[key]

    def cur(self, kl: str, nl: Nu, sl: int, kr: str, nr: Nu, sr: int) -> np.ndarray:
        key = (kl, nl, sl, kr, nr, sr)
        if key not in self._currents:
            self._currents[key] = current(self.spin(kl, nl, sl), self.spin(kr, nr, sr))
        return self._currents[key]


def _amp_2to2(kin: _Kinematics, kinds: str, nus, spins) -> complex:
    """Direct-minus-exchange t-channel amplitude for ee or pp scattering."""
    n1, n2, n3, n4 = nus
    s1, s2, s3, s4 = spins
    e = [kin.energy(n) for n in nus]
    p = [kin.phys(n) for n in nus]
    if kinds == "u":
        direct = contract(kin.cur("u", n3, s3, "u", n1, s1), kin.cur("u", n4, s4, "u", n2, s2))
        exch = contract(kin.cur("u", n4, s4, "u", n1, s1), kin.cur("u", n3, s3, "u", n2, s2))
    else:
        direct = contract(kin.cur("v", n1, s1, "v", n3, s3), kin.cur("v", n2, s2, "v", n4, s4))
        exch = contract(kin.cur("v", n1, s1, "v", n4, s4), kin.cur("v", n2, s2, "v", n3, s3))
    d_dir = _denom(e[2], e[0], p[2], p[0], -1)
    d_exch = _denom(e[3], e[0], p[3], p[0], -1)
    return kin.cfg.charge**2 * (direct / d_dir - exch / d_exch)


def _amp_ep(kin: _Kinematics, nus, spins) -> complex:
    """e+ e- -> e+ e-: annihilation plus scattering channel."""
    p1, q1, p2, q2 = nus  # e in, p in, e out, p out
    s1, s2, s3, s4 = spins
    ann = contract(kin.cur("v", q1, s2, "u", p1, s1), kin.cur("u", p2, s3, "v", q2, s4))
    sca = contract(kin.cur("u", p2, s3, "u", p1, s1), kin.cur("v", q1, s2, "v", q2, s4))
    d_ann = _denom(kin.energy(p1), kin.energy(p2), kin.phys(p1), kin.phys(p2), +1)
    d_sca = _denom(kin.energy(p1), kin.energy(p2), kin.phys(p1), kin.phys(p2), -1)
    return kin.cfg.charge**2 * (ann / d_ann + sca / d_sca)


def _amp_1to3_e(kin: _Kinematics, nus, spins) -> complex:
    """e- -> e+ e- e-: pair emission off an electron line."""
    p, q, p1, p2 = nus  # e in; e+ out, e out, e out
    s1, s2, s3, s4 = spins
    direct = contract(kin.cur("u", p1, s3, "u", p, s1), kin.cur("u", p2, s4, "v", q, s2))
    exch = contract(kin.cur("u", p2, s4, "u", p, s1), kin.cur("u", p1, s3, "v", q, s2))
    d_dir = _denom(kin.energy(p), kin.energy(p1), kin.phys(p), kin.phys(p1), -1)
    d_exch = _denom(kin.energy(p), kin.energy(p2), kin.phys(p), kin.phys(p2), -1)
    return kin.cfg.charge**2 * (direct / d_dir - exch / d_exch)


def _amp_1to3_p(kin: _Kinematics, nus, spins) -> complex:
    """e+ -> e- e+ e+: pair emission off a positron line."""
    p, q, p1, p2 = nus  # p in; e out, p out, p out
    s1, s2, s3, s4 = spins
    direct = contract(kin.cur("u", q, s2, "v", p2, s4), kin.cur("v", p, s1, "v", p1, s3))
    exch = contract(kin.cur("u", q, s2, "v", p1, s3), kin.cur("v", p, s1, "v", p2, s4))
    d_dir = _denom(kin.energy(p), kin.energy(p1), kin.phys(p), kin.phys(p1), -1)
    d_exch = _denom(kin.energy(p), kin.energy(p2), kin.phys(p), kin.phys(p2), -1)
    return kin.cfg.charge**2 * (direct / d_dir - exch / d_exch)


def _amp_vac(kin: _Kinematics, nus, spins) -> complex:
    """0 -> e- e+ e- e+ vacuum coupling (single channel)."""
    p, q, r, s = nus
    s1, s2, s3, s4 = spins
    num = contract(kin.cur("u", p, s1, "v", q, s2), kin.cur("u", r, s3, "v", s, s4))
    d = _denom(kin.energy(p), kin.energy(q), kin.phys(p), kin.phys(q), +1)
    return kin.cfg.charge**2 * num / d


_PROCESS = {
    "ee": lambda kin, nus, spins: _amp_2to2(kin, "u", nus, spins),
    "pp": lambda kin, nus, spins: _amp_2to2(kin, "v", nus, spins),
    "ep": _amp_ep,
    "eeep": _amp_1to3_e,
    "pppe": _amp_1to3_p,
    "vac": _amp_vac,
}


def amplitude(req: AmplitudeRequest, cfg: RelliumConfig) -> complex:
    """Tree-level amplitude e^2 (direct - exchange) at physical momenta."""
    if req.process not in _PROCESS:
        raise ValueError(f"unknown process {req.process!r}")
    kin = _Kinematics(cfg)
    unit = cfg.box_length / (2.0 * math.pi)
    nus = tuple(tuple(np.asarray(p, dtype=float) * unit) for p in req.momenta)
    # _Kinematics keys by grid vector; allow arbitrary (possibly fractional) keys
    return _PROCESS[req.process](kin, nus, req.spins)


SPINS = (1, 2)


def build_rellium_blocks(cfg: RelliumConfig):
    """All Hamiltonian blocks plus a build manifest."""
    g = grid(cfg)
    gset = set(g)
    kin = _Kinematics(cfg)
    omega = cfg.box_length**3
    blocks: Dict[str, FermionPolynomial] = {}

    free_terms = []
    for nu in g:
        e_nu = kin.energy(nu)
        for s in SPINS:
            free_terms.append(FermionTerm(e_nu, ((mode_a(nu, s), True), (mode_a(nu, s), False))))
            free_terms.append(FermionTerm(e_nu, ((mode_b(nu, s), True), (mode_b(nu, s), False))))
    blocks["free"] = FermionPolynomial(free_terms, normal=True)

    def weight(m_val: complex, nus) -> complex:
        den = 2.0 * omega * math.sqrt(math.prod(kin.energy(n) for n in nus))
        return m_val / den

    def two_body(proc: str, make_ops):
        terms = []
        for p, q, r in product(g, repeat=3):
            s_nu = (p[0] + q[0] - r[0], p[1] + q[1] - r[1], p[2] + q[2] - r[2])
            if s_nu not in gset:
                continue
            amp_nus = (p, q, r, s_nu)
            for sp in product(SPINS, repeat=4):
                try:
                    m_val = _PROCESS[proc](kin, amp_nus, sp)
                except SingularDenominator:
                    continue
                w = weight(m_val, amp_nus)
                if abs(w) > COEFF_TOL:
                    terms.append(FermionTerm(w, make_ops(p, q, r, s_nu, sp)))
        return FermionPolynomial(terms)

    blocks["ee"] = two_body(
        "ee",
        lambda p, q, r, s, sp: (
            (mode_a(s, sp[3]), True),
            (mode_a(r, sp[2]), True),
            (mode_a(q, sp[1]), False),
            (mode_a(p, sp[0]), False),
        ),
    )
    blocks["pp"] = two_body(
        "pp",
        lambda p, q, r, s, sp: (
            (mode_b(s, sp[3]), True),
            (mode_b(r, sp[2]), True),
            (mode_b(q, sp[1]), False),
            (mode_b(p, sp[0]), False),
        ),
    )
    blocks["ep"] = two_body(
        "ep",
        lambda p, q, r, s, sp: (
            (mode_b(s, sp[3]), True),
            (mode_a(r, sp[2]), True),
            (mode_b(q, sp[1]), False),
            (mode_a(p, sp[0]), False),
        ),
    )

    def one_to_three(proc: str, make_ops):
        terms = []
        for p, q, p1 in product(g, repeat=3):
            p2 = (p[0] - q[0] - p1[0], p[1] - q[1] - p1[1], p[2] - q[2] - p1[2])
            if p2 not in gset:
                continue
            amp_nus = (p, q, p1, p2)
            for sp in product(SPINS, repeat=4):
                try:
                    m_val = _PROCESS[proc](kin, amp_nus, sp)
                except SingularDenominator:
                    continue
                w = weight(m_val, amp_nus)
                if abs(w) > COEFF_TOL:
                    ops = make_ops(p, q, p1, p2, sp)
                    terms.append(FermionTerm(w, ops))
                    terms.append(
                        FermionTerm(
                            w.conjugate(), tuple((m, not d) for m, d in reversed(ops))
                        )
                    )
        return FermionPolynomial(terms)

    if cfg.include_pair_terms:
        blocks["pair_e"] = one_to_three(
            "eeep",
            lambda p, q, p1, p2, sp: (
                (mode_a(p2, sp[3]), True),
                (mode_a(p1, sp[2]), True),
                (mode_b(q, sp[1]), True),
                (mode_a(p, sp[0]), False),
            ),
        )
        blocks["pair_p"] = one_to_three(
            "pppe",
            lambda p, q, p1, p2, sp: (
                (mode_b(p2, sp[3]), True),
                (mode_b(p1, sp[2]), True),
                (mode_a(q, sp[1]), True),
                (mode_b(p, sp[0]), False),
            ),
        )

        vac_terms = []
        for p, q, r in product(g, repeat=3):
            s_nu = (-p[0] - q[0] - r[0], -p[1] - q[1] - r[1], -p[2] - q[2] - r[2])
            if s_nu not in gset:
                continue
            amp_nus = (p, q, r, s_nu)
            for sp in product(SPINS, repeat=4):
                try:
                    m_val = _amp_vac(kin, amp_nus, sp)
                except SingularDenominator:
                    continue
                w = weight(m_val, amp_nus)
                if abs(w) > COEFF_TOL:
                    ops = (
                        (mode_a(p, sp[0]), True),
                        (mode_b(q, sp[1]), True),
                        (mode_a(r, sp[2]), True),
                        (mode_b(s_nu, sp[3]), True),
                    )
                    vac_terms.append(FermionTerm(w, ops))
                    vac_terms.append(
                        FermionTerm(w.conjugate(), tuple((m, not d) for m, d in reversed(ops)))
                    )
        blocks["vacuum"] = FermionPolynomial(vac_terms)

    if cfg.delta_m != 0.0:
        ct_terms = []
        n_grid = len(g)
        for p in g:
            neg = (-p[0], -p[1], -p[2])
            pref = cfg.delta_m / (2.0 * kin.energy(p) * n_grid)
            for s1, s2 in product(SPINS, repeat=2):
                pieces = [
                    (bilinear(kin.spin("u", p, s1), [], kin.spin("u", p, s2)),
                     ((mode_a(p, s1), True), (mode_a(p, s2), False))),
                    (-bilinear(kin.spin("v", p, s1), [], kin.spin("v", p, s2)),
                     ((mode_b(p, s1), True), (mode_b(p, s2), False))),
                    (bilinear(kin.spin("u", p, s1), [], kin.spin("v", neg, s2)),
                     ((mode_a(p, s1), True), (mode_b(neg, s2), True))),
                    (bilinear(kin.spin("v", neg, s1), [], kin.spin("u", p, s2)),
                     ((mode_b(neg, s1), False), (mode_a(p, s2), False))),
                ]
                for bil, ops in pieces:
                    c = pref * bil
                    if abs(c) > COEFF_TOL:
                        ct_terms.append(FermionTerm(c, ops))
        blocks["counterterm"] = FermionPolynomial(ct_terms)

    total = FermionPolynomial()
    for b in blocks.values():
        total = total + b
    if cfg.lambda_vac != 0.0:
        total = total + FermionPolynomial([FermionTerm(cfg.lambda_vac * len(g), ())])

    manifest = {
        "n_grid": len(g),
        "n_modes": 4 * len(g),
        "n_qubits": 4 * len(g),
        "blocks": {name: len(b.terms) for name, b in blocks.items()},
        "n_terms": len(total.terms),
    }
    return total, blocks, manifest


def build_rellium(cfg: RelliumConfig) -> FermionPolynomial:
    """Full momentum-space Hamiltonian (free + interactions + counterterms)."""
    total, _, _ = build_rellium_blocks(cfg)
    return total


def build_external_momentum(cfg: RelliumConfig) -> FermionPolynomial:
    """Coupling to an external four-potential given by Fourier components.

    Emits the four bilinear blocks (a^dag a, a^dag b^dag, b a, b b^dag) with
    weight -e / (2 sqrt(E_p E_q) L^3); the b b^dag block is normal-ordered,
    which leaves the usual constant shift in the identity component.
    """
    if cfg.external_potential is None:
        raise MissingPotential("RelliumConfig.external_potential is not set")
    pot = {k: np.asarray(v, dtype=complex) for k, v in cfg.external_potential.items()}
    g = grid(cfg)
    kin = _Kinematics(cfg)
    omega = cfg.box_length**3
    terms = []

    def add(bil: np.ndarray, arg: Nu, e_p: float, e_q: float, ops):
        a_tilde = pot.get(arg)
        if a_tilde is None:
            return
        c = -cfg.charge * complex(bil @ a_tilde) / (2.0 * math.sqrt(e_p * e_q) * omega)
        if abs(c) > COEFF_TOL:
            terms.append(FermionTerm(c, ops))

    for p, q in product(g, repeat=2):
        e_p, e_q = kin.energy(p), kin.energy(q)
        diff = (p[0] - q[0], p[1] - q[1], p[2] - q[2])
        nsum = (-p[0] - q[0], -p[1] - q[1], -p[2] - q[2])
        psum = (p[0] + q[0], p[1] + q[1], p[2] + q[2])
        rdiff = (q[0] - p[0], q[1] - p[1], q[2] - p[2])
        for s1, s2 in product(SPINS, repeat=2):
            add(
                kin.cur("u", q, s2, "u", p, s1), diff, e_p, e_q,
                ((mode_a(q, s2), True), (mode_a(p, s1), False)),
            )
            add(
                kin.cur("u", q, s2, "v", p, s1), nsum, e_p, e_q,
                ((mode_a(q, s2), True), (mode_b(p, s1), True)),
            )
            add(
                kin.cur("v", q, s2, "u", p, s1), psum, e_p, e_q,
                ((mode_b(q, s2), False), (mode_a(p, s1), False)),
            )
            add(
                kin.cur("v", q, s2, "v", p, s1), rdiff, e_p, e_q,
                ((mode_b(q, s2), False), (mode_b(p, s1), True)),
            )
    return FermionPolynomial(terms)
