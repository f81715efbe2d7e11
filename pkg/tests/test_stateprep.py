"""Determinant counting against brute-force enumeration and Givens
state preparation against the dense Fock-space oracle."""

import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from eqedc.errors import EqedcError, NonIsometry
from eqedc.stateprep import (
    ActiveSpaceSpec,
    SlaterSpec,
    compile_givens,
    determinant_state,
    enumerate_determinants,
    format_slater,
    givens_decompose,
    mrci_determinant_count,
    parse_slater,
    prepared_state,
)


def test_active_space_validation():
    with pytest.raises(EqedcError):
        ActiveSpaceSpec(n_ras1=2, n_cas=-1, n_ras3=2, n_e=2)
    with pytest.raises(EqedcError):
        ActiveSpaceSpec(n_ras1=1, n_cas=1, n_ras3=1, n_e=4)


@pytest.mark.parametrize(
    "spec",
    [
        ActiveSpaceSpec(n_ras1=2, n_cas=3, n_ras3=2, n_e=4),
        ActiveSpaceSpec(n_ras1=3, n_cas=2, n_ras3=3, n_e=3, m_h=1, m_e=2),
        ActiveSpaceSpec(n_ras1=4, n_cas=4, n_ras3=4, n_e=6, m_h=2, m_e=1),
        ActiveSpaceSpec(n_ras1=0, n_cas=5, n_ras3=0, n_e=3),
        ActiveSpaceSpec(n_ras1=2, n_cas=0, n_ras3=2, n_e=2),
    ],
)
def test_count_matches_enumeration(spec):
    assert mrci_determinant_count(spec) == enumerate_determinants(spec)


def test_cas_only_is_plain_binomial():
    spec = ActiveSpaceSpec(n_ras1=0, n_cas=12, n_ras3=0, n_e=5)
    assert mrci_determinant_count(spec) == math.comb(12, 5)


def test_count_handles_big_spaces_exactly():
    spec = ActiveSpaceSpec(n_ras1=40, n_cas=60, n_ras3=40, n_e=50)
    n = mrci_determinant_count(spec)
    assert n > 10**15  # exact integer arithmetic, no overflow
    assert isinstance(n, int)


def random_isometry(rng, n_f, n_s):
    u = unitary_group.rvs(n_s, random_state=rng)
    return u[:n_f, :]


def test_non_isometry_rejected():
    q = np.array([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(NonIsometry):
        givens_decompose(SlaterSpec(q))
    with pytest.raises(EqedcError):
        SlaterSpec(np.ones((3, 2)))


@pytest.mark.parametrize("n_f,n_s", [(1, 2), (1, 4), (2, 4), (2, 6), (3, 6), (4, 8)])
def test_prepared_state_matches_oracle(n_f, n_s):
    rng = np.random.default_rng(n_f * 100 + n_s)
    spec = SlaterSpec(random_isometry(rng, n_f, n_s))
    rotations = givens_decompose(spec)
    circ = compile_givens(rotations, n_s)
    got = prepared_state(circ, n_f)
    want = determinant_state(spec)
    overlap = abs(np.vdot(want, got)) / (np.linalg.norm(want) * np.linalg.norm(got))
    assert overlap >= 1.0 - 1e-9


@pytest.mark.parametrize("n_f,n_s", [(2, 6), (3, 8)])
def test_rotation_count_bound(n_f, n_s):
    rng = np.random.default_rng(7)
    spec = SlaterSpec(random_isometry(rng, n_f, n_s))
    rotations = givens_decompose(spec)
    assert len(rotations) <= (n_s - n_f) * n_f


def test_prepared_state_conserves_particle_number():
    rng = np.random.default_rng(3)
    n_f, n_s = 2, 5
    spec = SlaterSpec(random_isometry(rng, n_f, n_s))
    circ = compile_givens(givens_decompose(spec), n_s)
    state = prepared_state(circ, n_f)
    for basis in range(1 << n_s):
        if bin(basis).count("1") != n_f and abs(state[basis]) > 1e-12:
            pytest.fail(f"weight {abs(state[basis]):.2e} outside the {n_f}-particle sector")


def test_computational_determinant_needs_no_rotations():
    q = np.eye(5)[:2, :]
    assert givens_decompose(SlaterSpec(q)) == []


def test_format_parse_roundtrip():
    rng = np.random.default_rng(9)
    spec = SlaterSpec(random_isometry(rng, 2, 4))
    again = parse_slater(format_slater(spec))
    assert again.n_f == 2 and again.n_s == 4
    assert np.abs(again.q - spec.q).max() == 0.0


def test_parse_validation():
    with pytest.raises(EqedcError):
        parse_slater("")
    with pytest.raises(EqedcError):
        parse_slater("1,2\n0.0,0.0\n")  # one entry short
