import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm
from scipy.stats import unitary_group

from crflow.echo import (cartan_unitary, echo_hamiltonian, echo_product, echo_report, echo_unitary,
                         entangling_power, gate_fidelity, ideal_unitary, makhlin, makhlin_from_cartan,
                         nonlocal_error, pulse_time)
from crflow.errors import NonUnitaryInput, ZeroZX
from crflow.gates import GateParams, gate_params

from conftest import device

rate = st.floats(-3, 3)


@settings(max_examples=60, deadline=None)
@given(ix=rate, iz=rate, zi=rate, zz=st.floats(-0.5, 0.5), zx=st.floats(0.2, 4) | st.floats(-4, -0.2))
def test_closed_form_matches_product(ix, iz, zi, zz, zx):
    p = GateParams.two_qubit(ix=ix, iz=iz, zi=zi, zx=zx, zz=zz)
    res = echo_unitary(p)
    assert np.max(np.abs(res.unitary - echo_product(p, res.tau_p))) < 1e-9
    assert np.allclose(res.unitary.conj().T @ res.unitary, np.eye(4), atol=1e-12)


def test_zero_frequency_branches_are_continuous():
    # ZX = IX and IZ = ZZ make omega_minus vanish
    p = GateParams.two_qubit(ix=1.0, zx=1.0, iz=0.2, zz=0.2)
    res = echo_unitary(p)
    assert res.omega_minus == 0.0
    assert np.max(np.abs(res.unitary - echo_product(p, res.tau_p))) < 1e-12


def test_ideal_echo_is_exact():
    for zx in (2.0, -1.3):
        p = GateParams.two_qubit(zx=zx, zi=-5.0)
        res = echo_unitary(p)
        assert res.tau_p == pulse_time(zx)
        _, err = gate_fidelity(res.unitary, ideal_unitary(zx))
        assert err < 1e-12


def test_echo_cancels_ix_zz_and_keeps_zx():
    p = GateParams.two_qubit(ix=0.7, zz=0.05, zx=-1.9, zi=-14.0)
    rates = echo_hamiltonian(echo_unitary(p))
    assert rates.zx == pytest.approx(p.zx, rel=1e-2)
    h = rates.hamiltonian()
    u = expm(-1j * h * 2 * pulse_time(p.zx))
    assert np.allclose(u, echo_unitary(p).unitary, atol=1e-9)


def test_zero_zx_and_nonunitary():
    with pytest.raises(ZeroZX):
        pulse_time(0.0)
    with pytest.raises(NonUnitaryInput):
        makhlin(np.ones((4, 4)))


def test_makhlin_reference_classes():
    cnot = np.eye(4)[[0, 1, 3, 2]]
    g = makhlin(cnot)
    assert (g.g_x, g.g_y, g.g_z) == pytest.approx((0.0, 0.0, 1.0), abs=1e-12)
    g = makhlin(np.eye(4))
    assert (g.g_x, g.g_y, g.g_z) == pytest.approx((1.0, 0.0, 3.0), abs=1e-12)
    assert nonlocal_error(makhlin(ideal_unitary())) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, np.pi), st.floats(0, np.pi), st.floats(0, np.pi), st.integers(0, 2**31 - 1))
def test_makhlin_local_invariance(cx, cy, cz, seed):
    u = cartan_unitary(cx, cy, cz)
    rng = np.random.default_rng(seed)
    a, b, c, d = (unitary_group.rvs(2, random_state=rng) for _ in range(4))
    v = np.kron(a, b) @ u @ np.kron(c, d)
    g, h, ref = makhlin(u), makhlin(v), makhlin_from_cartan(cx, cy, cz)
    for x, y in ((g, h), (g, ref)):
        assert (x.g_x, x.g_y, x.g_z) == pytest.approx((y.g_x, y.g_y, y.g_z), abs=1e-9)


def test_entangling_power_of_cnot_class():
    assert entangling_power(np.pi / 2, 0, 0) == 2 / 9
    assert entangling_power(0, 0, 0) == 0.0
    assert makhlin_from_cartan(np.pi / 2, 0, 0).entangling_power_gap == pytest.approx(0.0, abs=1e-15)


def test_echo_report_at_region_two():
    report = echo_report(gate_params(device(100.0, 50.0), 4))
    assert 1e-4 <= report.error <= 1e-3
    assert report.nonlocal_error < report.error
    assert report.fidelity == pytest.approx(1 - report.error)
