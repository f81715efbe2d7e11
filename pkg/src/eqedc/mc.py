"""Monte Carlo estimation of the average nested-commutator norm.

A sample draws a triple of Hamiltonian terms (i, j, k) uniformly with
replacement, forms [H_i, [H_j, H_k]] in the fermionic algebra, reduces the
result to its mode support, Jordan-Wigner maps it, and takes the spectral
norm.  Campaign means across several system sizes feed a power-law fit
A * M^b of the average against the term count M.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import EqedcError
from .fermions import FermionPolynomial, FermionTerm, jordan_wigner, reduce_to_support
from .pauli import spectral_norm
from .rellium import RelliumConfig

_BLOCK = 10_000


@dataclass
class McConfig:
    sample_counts: List[int]
    seed: int
    systems: List[RelliumConfig]
    norm_method: str = "dense"

    def __post_init__(self):
        if not self.systems:
            raise EqedcError("commutator campaign needs at least one system")
        if list(self.sample_counts) != sorted(self.sample_counts):
            raise EqedcError("sample_counts must be ascending")


@dataclass
class SystemResult:
    n_planewaves: int
    term_count: int
    mean: float
    stddev: float
    samples_used: int
    run_means: List[float] = field(default_factory=list)


@dataclass
class McResult:
    per_system: List[SystemResult]
    fit_a: Optional[float]
    fit_b: Optional[float]


def _rng_for(seed: int, system_index: int, block_index: int) -> np.random.Generator:
    # counter-based streams: one Philox key per (seed, system, block)
    return np.random.Generator(
        np.random.Philox(key=[seed, (system_index << 32) | block_index])
    )


def _triple_norm(
    terms: Sequence[FermionTerm],
    i: int,
    j: int,
    k: int,
    cache: Dict[Tuple[int, int, int], float],
    norm_method: str,
) -> float:
    key = (i, j, k) if j <= k else (i, k, j)
    hit = cache.get(key)
    if hit is not None:
        return hit
    ti, tj, tk = terms[i], terms[j], terms[k]
    sj = {m for m, _ in tj.factors}
    sk = {m for m, _ in tk.factors}
    value = 0.0
    if sj & sk:
        pj = FermionPolynomial([tj])
        pk = FermionPolynomial([tk])
        inner = pj * pk - pk * pj
        if inner.terms:
            si = {m for m, _ in ti.factors}
            if si & set(inner.modes()):
                pi = FermionPolynomial([ti])
                outer = pi * inner - inner * pi
                if outer.terms:
                    reduced, _ = reduce_to_support(outer)
                    value = spectral_norm(jordan_wigner(reduced), method=norm_method)
    cache[key] = value
    return value


def sample_commutator(
    h: FermionPolynomial, rng: np.random.Generator, norm_method: str = "dense"
) -> float:
    """One Monte Carlo sample of ||[H_i, [H_j, H_k]]|| for uniform (i, j, k)."""
    terms = h.terms
    if len(terms) < 3:
        raise EqedcError("sampling needs at least three Hamiltonian terms")
    i, j, k = (int(x) for x in rng.integers(0, len(terms), size=3))
    return _triple_norm(terms, i, j, k, {}, norm_method)


def run_campaign(cfg: McConfig, progress=None) -> McResult:
    per_system: List[SystemResult] = []
    for sys_idx, system in enumerate(cfg.systems):
        h, _, manifest = build_rellium_blocks_cached(system)
        terms = h.terms
        m_count = len(terms)
        cache: Dict[Tuple[int, int, int], float] = {}
        run_means = []
        samples_used = 0
        for run_idx, n_samples in enumerate(cfg.sample_counts):
            total = 0.0
            done = 0
            block = 0
            while done < n_samples:
                take = min(_BLOCK, n_samples - done)
                rng = _rng_for(cfg.seed, sys_idx * 1000 + run_idx, block)
                idx = rng.integers(0, m_count, size=(take, 3))
                # fixed-order reduction keeps the sum deterministic
                for i, j, k in idx:
                    total += _triple_norm(
                        terms, int(i), int(j), int(k), cache, cfg.norm_method
                    )
                done += take
                block += 1
                if progress is not None:
                    progress(sys_idx, run_idx, done)
            run_means.append(total / n_samples)
            samples_used += n_samples
        mean = run_means[-1]
        stddev = float(np.std(run_means)) if len(run_means) > 1 else 0.0
        per_system.append(
            SystemResult(
                n_planewaves=manifest["n_grid"],
                term_count=m_count,
                mean=mean,
                stddev=stddev,
                samples_used=samples_used,
                run_means=run_means,
            )
        )

    fit_a = fit_b = None
    points = [(r.term_count, r.mean) for r in per_system if r.mean > 0]
    if len(points) >= 2:
        fit_a, fit_b = power_law_fit(points)
    return McResult(per_system=per_system, fit_a=fit_a, fit_b=fit_b)


_BUILD_CACHE: Dict[tuple, tuple] = {}


def build_rellium_blocks_cached(cfg: RelliumConfig):
    from .rellium import build_rellium_blocks

    key = (
        cfg.box_length,
        cfg.energy_cutoff,
        cfg.mass,
        cfg.charge,
        cfg.delta_m,
        cfg.lambda_vac,
        cfg.include_pair_terms,
    )
    if key not in _BUILD_CACHE:
        _BUILD_CACHE[key] = build_rellium_blocks(cfg)
    return _BUILD_CACHE[key]


def power_law_fit(points: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Least squares of log(y) = log(A) + b log(x)."""
    xs = np.log([p[0] for p in points])
    ys = np.log([p[1] for p in points])
    b, log_a = np.polyfit(xs, ys, 1)
    return float(math.exp(log_a)), float(b)


def chi_h(n_s: int, a: float = 0.3, b_exp: float = 4.3) -> float:
    """Total-commutator norm model A * n_s^b (the fitted M^{-0.9} average
    times the M = O(n_s^3) term count cubed gives n_s^{7-2.7} = n_s^{4.3})."""
    if n_s < 1:
        raise EqedcError("n_s must be >= 1")
    return a * float(n_s) ** b_exp


def format_mc_csv(result: McResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n_planewaves", "M", "samples", "mean", "stddev"])
    for r in result.per_system:
        writer.writerow(
            [r.n_planewaves, r.term_count, r.samples_used, repr(r.mean), repr(r.stddev)]
        )
    text = buf.getvalue()
    if result.fit_a is not None:
        text += f"# fit A={result.fit_a!r} b={result.fit_b!r}\n"
    return text
