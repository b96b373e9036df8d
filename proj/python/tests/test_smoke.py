"""Smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import effdyn


def test_kron_and_partial_trace_roundtrip():
    a = np.diag([1.0 + 0j, 2.0])
    b = np.array([[0, 1], [1, 0]], dtype=complex)
    k = effdyn.kron(a, b)
    assert k.shape == (4, 4)
    # Tr_UV[a x b] = Tr[b] * a
    back = effdyn.partial_trace(k, 2, 2, "uv")
    np.testing.assert_allclose(back, np.trace(b) * a, atol=1e-12)


def test_factorized_fidelity_is_one():
    v_ir = effdyn.haar_unitary(2, 1)
    v_uv = effdyn.haar_unitary(2, 2)
    u = effdyn.kron(v_ir, v_uv)
    rho = 0.5 * np.eye(2, dtype=complex)
    rep = effdyn.channel_fidelity(u, 2, 2, rho, v_ir)
    assert rep["fidelity"] == pytest.approx(1.0, abs=1e-10)
    assert rep["unit_fidelity"]


def test_mu_methods_agree():
    rng = np.random.default_rng(7)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = (g + g.conj().T) / 2
    rho = np.array([[0.7, 0.1j], [-0.1j, 0.3]], dtype=complex)
    values = [effdyn.mu(h, 2, 2, rho, m) for m in ("direct", "correlator", "variance")]
    assert values[0] == pytest.approx(values[1], abs=1e-9)
    assert values[1] == pytest.approx(values[2], abs=1e-9)
    assert values[0] >= -1e-10


def test_mu_dirac_closed_values():
    assert effdyn.mu_dirac_closed(effdyn.BlochVector(1, 0, 0)) == pytest.approx(0.5)
    assert effdyn.mu_dirac_closed(effdyn.BlochVector(0, 0, 0)) == pytest.approx(2.0)
    r = effdyn.BlochVector(0.6, 0.3, -0.2)
    assert effdyn.mu_dirac_generic(r, 4) == pytest.approx(
        effdyn.mu_dirac_closed(r), abs=1e-9
    )


def test_dispersion_limits():
    omega, omega_ir = effdyn.dispersion(0.0, 0.37)
    assert omega == pytest.approx(0.37)
    assert omega_ir is None
    omega, omega_ir = effdyn.dispersion(0.2, 0.0, effdyn.BlochVector(1, 0, 0))
    assert omega == pytest.approx(0.2)
    assert omega_ir == pytest.approx(0.4)


def test_optimizer_recovers_factorized_optimum():
    v_ir = effdyn.haar_unitary(2, 5)
    v_uv = effdyn.haar_unitary(2, 6)
    u = effdyn.kron(v_ir, v_uv)
    rho = 0.5 * np.eye(2, dtype=complex)
    res = effdyn.maximize_fidelity(u, 2, 2, rho, restarts=2, seed=3)
    assert res["best_fidelity"] == pytest.approx(1.0, abs=1e-8)
    assert effdyn.phase_align(res["best_unitary"], v_ir) < 1e-3


def test_packet_and_series():
    r = effdyn.packet_uv_bloch(0.2, 100, 0.05, 0.2, -100)
    assert r.rx == pytest.approx(math.cos(0.2), abs=0.05)
    assert r.ry == pytest.approx(-math.sin(0.2), abs=0.05)
    series = effdyn.trace_distance_series(0.2, 100, 0.05, 0.2, -100, r, 10)
    assert series[0][1] == pytest.approx(0.0, abs=1e-12)
    assert all(e >= 0 for _, e in series)
