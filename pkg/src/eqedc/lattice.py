"""Position-space Hamiltonian builders on a cubic spatial grid.

Each site carries a four-component spinor, so a grid with ``n_side**3``
sites uses ``4 * n_side**3`` modes.  Blocks: local mass term, nonlocal
(SLAC-derivative) kinetic term, instantaneous current-current Coulomb
interaction, and an optional external four-potential coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigInvalid, MissingPotential, OddLattice
from .fermions import ELECTRON, FermionPolynomial, FermionTerm, ModeIndex
from .spinors import GAMMA0, GAMMAS, METRIC

COEFF_TOL = 1e-12

Site = Tuple[int, int, int]


@dataclass(frozen=True)
class LatticeConfig:
    n_side: int
    box_length: float
    mass: float
    charge: float = 1.0
    # site -> covariant four-potential components A_mu(x)
    external_potential: Optional[Dict[Site, Sequence[complex]]] = None

    def __post_init__(self):
        if self.n_side < 1:
            raise ConfigInvalid("n_side must be >= 1")
        if self.box_length <= 0:
            raise ConfigInvalid("box_length must be positive")
        if self.mass < 0:
            raise ConfigInvalid("mass must be nonnegative")

    @property
    def n_sites(self) -> int:
        return self.n_side**3

    @property
    def n_modes(self) -> int:
        return 4 * self.n_sites


def sites(cfg: LatticeConfig) -> List[Site]:
    k = cfg.n_side
    return [s for s in product(range(k), repeat=3)]


def mode(site: Site, component: int) -> ModeIndex:
    return ModeIndex(ELECTRON, site, component)


def _one_body(entries) -> FermionPolynomial:
    """Entries: iterable of (coefficient, mode_dag, mode)."""
    return FermionPolynomial(
        FermionTerm(c, ((md, True), (mn, False)))
        for c, md, mn in entries
        if abs(c) > COEFF_TOL
    )


def build_mass(cfg: LatticeConfig) -> FermionPolynomial:
    """Local mass term m * a^dag gamma^0 a at every site."""
    entries = []
    for s in sites(cfg):
        for a in range(4):
            entries.append((cfg.mass * GAMMA0[a, a].real, mode(s, a), mode(s, a)))
    return _one_body(entries)


def slac_coefficients(n_side: int) -> np.ndarray:
    """One-dimensional derivative kernel S(d) = sum_p p exp(2 pi i p d / k).

    Momentum components run over the asymmetric half-open range
    {-k/2 + 1, ..., k/2}; the unpaired endpoint p = k/2 makes S(0) = k/2.
    """
    k = n_side
    ps = np.arange(-k // 2 + 1, k // 2 + 1)
    d = np.arange(k)
    return (ps[None, :] * np.exp(2j * np.pi * np.outer(d, ps) / k)).sum(axis=1)


def build_slac(cfg: LatticeConfig) -> FermionPolynomial:
    """Nonlocal kinetic term with the exact lattice dispersion.

    The hopping kernel is the inverse transform of the grid momentum
    operator, so the one-body spectrum is +/- sqrt(m^2 + |2 pi p / L|^2)
    with no extra fermion branches.  Requires an even ``n_side``.
    """
    k = cfg.n_side
    if k % 2 != 0:
        raise OddLattice("nonlocal kinetic term needs an even n_side")
    s1d = slac_coefficients(k)
    pref = 2.0 * math.pi / (cfg.box_length * cfg.n_sites)
    hop = [GAMMA0 @ GAMMAS[j + 1] for j in range(3)]  # gamma^0 gamma^j
    entries = []
    for y in sites(cfg):
        for j in range(3):
            mat = hop[j]
            for d in range(k):
                x = list(y)
                x[j] = (y[j] + d) % k
                x = tuple(x)
                coeff = pref * (k * k) * s1d[d]
                for a in range(4):
                    for b in range(4):
                        c = coeff * mat[a, b]
                        if abs(c) > COEFF_TOL:
                            entries.append((c, mode(y, a), mode(x, b)))
    return _one_body(entries)


def one_body_matrix(poly: FermionPolynomial, modes: Sequence[ModeIndex]) -> np.ndarray:
    """Dense coefficient matrix of a quadratic polynomial (for spectra)."""
    idx = {m: i for i, m in enumerate(modes)}
    mat = np.zeros((len(modes), len(modes)), dtype=complex)
    for t in poly.terms:
        if len(t.factors) == 0:
            continue
        assert len(t.factors) == 2 and t.factors[0][1] and not t.factors[1][1]
        mat[idx[t.factors[0][0]], idx[t.factors[1][0]]] += t.coefficient
    return mat


def free_dispersion(cfg: LatticeConfig) -> np.ndarray:
    """Expected one-body eigenvalues of mass + kinetic, sorted."""
    k = cfg.n_side
    ps = range(-k // 2 + 1, k // 2 + 1)
    vals = []
    for p in product(ps, repeat=3):
        e = math.sqrt(
            cfg.mass**2 + sum((2.0 * math.pi * c / cfg.box_length) ** 2 for c in p)
        )
        vals.extend([e, e, -e, -e])
    return np.sort(np.array(vals))


def build_interaction(cfg: LatticeConfig) -> FermionPolynomial:
    """Instantaneous current-current Coulomb block over distinct site pairs.

    Coefficient per ordered pair and Lorentz index mu:
    g_mumu * e^2 n_side / (8 pi L |x - y|), distance in integer lattice units.
    """
    hop = [np.eye(4, dtype=complex)] + [GAMMA0 @ GAMMAS[j] for j in range(1, 4)]
    all_sites = sites(cfg)
    terms: List[FermionTerm] = []
    base = cfg.charge**2 * cfg.n_side / (8.0 * math.pi * cfg.box_length)
    for x in all_sites:
        for y in all_sites:
            if x == y:
                continue
            dist = math.sqrt(sum((xi - yi) ** 2 for xi, yi in zip(x, y)))
            for mu in range(4):
                w = METRIC[mu, mu] * base / dist
                mat = hop[mu]
                for a in range(4):
                    for b in range(4):
                        for c in range(4):
                            for d in range(4):
                                coeff = w * mat[a, b] * mat[c, d]
                                if abs(coeff) > COEFF_TOL:
                                    terms.append(
                                        FermionTerm(
                                            coeff,
                                            (
                                                (mode(x, a), True),
                                                (mode(x, b), False),
                                                (mode(y, c), True),
                                                (mode(y, d), False),
                                            ),
                                        )
                                    )
    return FermionPolynomial(terms)


def build_external_lattice(cfg: LatticeConfig) -> FermionPolynomial:
    """Minimal coupling -e a^dag gamma^0 gamma^mu A_mu(x) a."""
    if cfg.external_potential is None:
        raise MissingPotential("LatticeConfig.external_potential is not set")
    hop = [np.eye(4, dtype=complex)] + [GAMMA0 @ GAMMAS[j] for j in range(1, 4)]
    entries = []
    for s, amu in cfg.external_potential.items():
        for mu in range(4):
            mat = hop[mu]
            for a in range(4):
                for b in range(4):
                    c = -cfg.charge * complex(amu[mu]) * mat[a, b]
                    if abs(c) > COEFF_TOL:
                        entries.append((c, mode(s, a), mode(s, b)))
    return _one_body(entries)


def build_lattice(cfg: LatticeConfig, include_interaction: bool = True):
    """Full position-space Hamiltonian plus a build manifest."""
    blocks = {"mass": build_mass(cfg), "kinetic": build_slac(cfg)}
    if include_interaction:
        blocks["interaction"] = build_interaction(cfg)
    if cfg.external_potential is not None:
        blocks["external"] = build_external_lattice(cfg)
    total = FermionPolynomial()
    for b in blocks.values():
        total = total + b
    manifest = {
        "n_side": cfg.n_side,
        "n_sites": cfg.n_sites,
        "n_modes": cfg.n_modes,
        "n_qubits": cfg.n_modes,
        "blocks": {name: len(b.terms) for name, b in blocks.items()},
        "n_terms": len(total.terms),
    }
    return total, blocks, manifest
