"""Smoke tests for the qturpy bindings against scipy/numpy references."""

import numpy as np
import pytest
import scipy.integrate
import scipy.stats

import qturpy


def random_state(dim, seed, rank=None):
    rng = np.random.default_rng(seed)
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)


def test_relative_entropy_matches_scipy_on_diagonals():
    p = np.array([0.5, 0.3, 0.2])
    q = np.array([0.25, 0.35, 0.4])
    got = qturpy.relative_entropy(np.diag(p).astype(complex),
                                  np.diag(q).astype(complex))
    assert got == pytest.approx(scipy.stats.entropy(p, q), abs=1e-12)


def test_relative_entropy_support_violation_is_inf():
    rho = np.diag([0.5, 0.5]).astype(complex)
    sigma = np.diag([1.0, 0.0]).astype(complex)
    assert np.isinf(qturpy.relative_entropy(rho, sigma))


def test_invalid_state_raises():
    with pytest.raises(qturpy.QturError):
        qturpy.relative_entropy(np.eye(2, dtype=complex),  # trace 2
                                np.eye(2, dtype=complex))


def test_closed_form_bound_matches_quadrature():
    for a, y, z in [(1.0, 1.0, 1.0), (0.6, 0.64, 1.0), (-2.5, 0.3, 1.7)]:
        quad, _ = scipy.integrate.quad(
            lambda lam: qturpy.f_lambda(a, y, z, lam), 0.0, 1.0,
            epsabs=1e-12, epsrel=1e-12)
        assert qturpy.closed_form_bound(a, y, z) == pytest.approx(
            quad, abs=1e-9)


def test_exchange_inverse():
    for x in [1e-4, 0.1, 1.0, 7.0, 42.0]:
        assert qturpy.exchange_h(qturpy.exchange_g(x)) == pytest.approx(
            x, abs=1e-12)


def test_pure_state_qfi_is_four_variances():
    psi = np.array([1.0, 0.4 + 0.3j, -0.2j])
    psi /= np.linalg.norm(psi)
    rho = np.outer(psi, psi.conj())
    h = random_hermitian(3, 11)
    mean = np.real(psi.conj() @ h @ psi)
    var = np.real(psi.conj() @ h @ h @ psi) - mean**2
    assert qturpy.quantum_fisher_information(rho, h) == pytest.approx(
        4.0 * var, abs=1e-9)


def test_entropy_tur_on_random_states():
    for seed in range(5):
        rho = random_state(3, 100 + seed)
        sigma = random_state(3, 200 + seed)
        theta = random_hermitian(3, 300 + seed)
        rep = qturpy.entropy_tur(rho, sigma, theta)
        assert rep["satisfied"]
        assert rep["slack"] >= -1e-8
        assert rep["divergence"] >= rep["lower_bound"] - 1e-8
        chi = qturpy.chi2_tur(rho, sigma, theta, 0.5)
        assert chi["satisfied"]


def test_chi2_half_is_triangular_discrimination():
    rho = random_state(2, 7)
    sigma = random_state(2, 8)
    assert qturpy.chi2_lambda(rho, sigma, 0.5) == pytest.approx(
        qturpy.triangular_discrimination(rho, sigma), abs=1e-12)


def test_ns_pair_identities():
    rho = random_state(3, 21)
    sigma = random_state(3, 22)
    theta = random_hermitian(3, 23)
    pair = qturpy.ns_pair(rho, sigma, theta)
    p = np.array(pair["p"])
    th = np.array(pair["theta"])
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.real(p @ th) == pytest.approx(
        np.real(np.trace(theta @ rho)), abs=1e-10)


def test_thermal_state_and_flux():
    z = np.diag([1.0, -1.0]).astype(complex)
    for beta in [0.0, 0.2, 1.0]:
        state = qturpy.thermal_state(beta, z)
        assert np.real(np.trace(state @ z)) == pytest.approx(
            -np.tanh(beta), abs=1e-12)

    rho_s = qturpy.thermal_state(0.2, z)
    rho_e = qturpy.thermal_state(1.0, z)
    u = qturpy.partial_swap(2, 0.3)
    assert qturpy.entropy_production(rho_s, rho_e, u) == pytest.approx(
        0.03814722227270566, abs=1e-9)
    rep = qturpy.flux_tur(rho_s, rho_e, u, "bath_reset")
    assert rep["satisfied"]
    assert rep["phi"] == pytest.approx(0.0492744679996539, abs=1e-9)
    assert rep["divergence"] >= rep["lower_bound"] - 1e-8
    both = qturpy.flux_tur(rho_s, rho_e, u, "both_reset")
    assert both["satisfied"]
