import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nusim import linalg
from nusim.linalg import (
    EPS_UNITARY,
    I2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    distance_up_to_global_phase,
    eig_hermitian,
    expm_hermitian,
    expm_taylor,
    kron,
)
from nusim.neutrino import hamiltonian_summed, table1_params
from nusim.qsim import _FIXED

from conftest import random_hermitian, random_unitary


def kron_loop(a, b):
    a, b = np.asarray(a), np.asarray(b)
    out = np.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            for k in range(b.shape[0]):
                for m in range(b.shape[1]):
                    out[i * b.shape[0] + k, j * b.shape[1] + m] = a[i, j] * b[k, m]
    return out


def test_kron_identity():
    np.testing.assert_array_equal(kron(I2, I2), np.eye(4))


def test_kron_xx_is_antidiagonal():
    np.testing.assert_array_equal(kron(SIGMA_X, SIGMA_X), np.fliplr(np.eye(4)))


def test_kron_matches_loop():
    np.testing.assert_allclose(kron(SIGMA_Z, SIGMA_Y), kron_loop(SIGMA_Z, SIGMA_Y), atol=0)


def test_kron_rejects_empty():
    with pytest.raises(linalg.LinalgError):
        kron(np.zeros((0, 0)), I2)


def test_eig_sigma_z():
    w, v = eig_hermitian(SIGMA_Z)
    np.testing.assert_allclose(w, [-1, 1])
    assert abs(abs(v[1, 0]) - 1) < 1e-12  # -1 pairs with |1>
    assert abs(abs(v[0, 1]) - 1) < 1e-12


def test_eig_zero_matrix():
    w, _ = eig_hermitian(np.zeros((2, 2)))
    np.testing.assert_array_equal(w, [0, 0])


def test_eig_random_reconstruct(rng):
    h = random_hermitian(rng, 8)
    w, v = eig_hermitian(h)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-9)
    np.testing.assert_allclose(h @ v, v * w, atol=1e-10)
    assert linalg.unitarity_error(v) < EPS_UNITARY


def test_eig_rejects_non_hermitian():
    with pytest.raises(linalg.NotHermitianError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_eig_convergence_failure_is_reported(monkeypatch):
    def boom(_):
        raise np.linalg.LinAlgError("no convergence")

    monkeypatch.setattr(np.linalg, "eigh", boom)
    with pytest.raises(linalg.EigenConvergenceError, match="did not converge"):
        eig_hermitian(SIGMA_X)


def test_expm_t0_is_identity(rng):
    np.testing.assert_allclose(expm_hermitian(random_hermitian(rng, 4), 0.0), np.eye(4), atol=1e-14)


def test_expm_sigma_z_quarter_turn():
    u = expm_hermitian(SIGMA_Z, np.pi / 2)
    np.testing.assert_allclose(u, np.diag([np.exp(-0.5j * np.pi), np.exp(0.5j * np.pi)]), atol=1e-15)


def test_expm_neutrino_hamiltonian_vs_taylor():
    h = hamiltonian_summed(table1_params())
    u = expm_hermitian(h, 0.7)
    assert linalg.unitarity_error(u) < 1e-10
    np.testing.assert_allclose(u, expm_taylor(-1j * 0.7 * h, terms=50), atol=1e-8)


def test_taylor_oracle_sanity():
    # exp of a nilpotent matrix is exactly I + N
    n = np.array([[0, 1], [0, 0]], dtype=complex)
    np.testing.assert_allclose(expm_taylor(n), np.eye(2) + n, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(-3, 3), st.floats(-3, 3))
def test_expm_group_property(seed, s, t):
    h = random_hermitian(np.random.default_rng(seed), 4)
    lhs = expm_hermitian(h, s) @ expm_hermitian(h, t)
    np.testing.assert_allclose(lhs, expm_hermitian(h, s + t), atol=1e-9)


def test_distance_self_and_global_phase(rng):
    u = random_unitary(rng, 4)
    assert distance_up_to_global_phase(u, u) < 1e-12
    assert distance_up_to_global_phase(u, np.exp(1j * np.pi / 3) * u) < 1e-12


def test_distance_identity_vs_cnot_matches_phase_grid():
    cnot = _FIXED["cnot"]
    phis = np.linspace(0, 2 * np.pi, 400_001)
    diffs = np.eye(4)[None] - np.exp(1j * phis)[:, None, None] * cnot[None]
    brute = np.sqrt((np.abs(diffs) ** 2).sum(axis=(1, 2))).min()
    d = distance_up_to_global_phase(np.eye(4), cnot)
    assert d > 0
    assert abs(d - brute) < 1e-6
    closed = np.sqrt(2 * 4 - 2 * abs(np.trace(cnot)))
    assert abs(d - closed) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_distance_symmetric_and_phase_only_zero(seed):
    r = np.random.default_rng(seed)
    u, v = random_unitary(r, 4), random_unitary(r, 4)
    assert abs(distance_up_to_global_phase(u, v) - distance_up_to_global_phase(v, u)) < 1e-12
    assert distance_up_to_global_phase(u, v) > 1e-3
    phi = r.uniform(0, 2 * np.pi)
    assert distance_up_to_global_phase(u, np.exp(1j * phi) * u) < 1e-12


def test_distance_shape_mismatch():
    with pytest.raises(linalg.LinalgError):
        distance_up_to_global_phase(np.eye(2), np.eye(4))
