from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crflow.model import (Coupling, Crosstalk, DeviceSpec, Drive, Qubit, build_model, build_three_qubit,
                          build_two_qubit, drive_frequency, dressed_basis, qubit_order, three_qubit_spec,
                          two_qubit_spec)
from crflow.transmon import TransmonParams

from conftest import device


def test_reference_spec_fields(reference):
    assert reference.control.params.omega_mhz == 5114 and reference.target.params.omega_mhz == 4914
    assert reference.coupling("c", "t") == 3.8 and reference.drive.amplitude_mhz == 50
    assert reference.delta_ct == 200 and reference.topology is None


def test_validation():
    p = TransmonParams.from_frequencies(5000, -300)
    with pytest.raises(ValueError):
        DeviceSpec(qubits=(Qubit("a", "control", p),), couplings=(Coupling("a", "a", 1.0),))
    with pytest.raises(ValueError):
        Coupling("a", "b", 0.0)
    with pytest.raises(ValueError):
        Drive(mode="nonsense")
    with pytest.raises(ValueError):
        Crosstalk(a_c=1.5)
    with pytest.raises(ValueError):
        two_qubit_spec(5000, 4900, -300, -300, 3, 50, cutoff=5)


def test_drive_frequency_modes(reference):
    assert drive_frequency(reference) == 4914
    explicit = reference.with_drive(mode="explicit", frequency_mhz=4920.0)
    assert drive_frequency(explicit) == 4920
    dressed = reference.with_drive(mode="dressed_target")
    assert abs(drive_frequency(dressed) - 4914) < 0.1


def test_dressed_drive_removes_static_iz():
    # second-order dressed target frequency equals the mean control-conditioned transition
    spec = device(120).with_drive(mode="dressed_target", amplitude_mhz=0.0)
    db = dressed_basis(spec, "perturbative")
    e = db.energies.reshape(4, 4)
    mean = 0.5 * ((e[0, 1] - e[0, 0]) + (e[1, 1] - e[1, 0]))
    assert drive_frequency(spec) == pytest.approx(mean, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(delta=st.floats(-300, 600), omega=st.floats(-80, 80), phase=st.floats(0, 6.3), rwa=st.booleans())
def test_model_hermitian(delta, omega, phase, rwa):
    spec = device(delta, omega, phase=phase, rwa=rwa)
    model = build_model(spec)
    assert model.interaction().to_fourier().is_hermitian(atol=1e-12)
    assert np.allclose(model.h0(), np.diag(model.energies))


def test_rwa_drops_counter_rotating_terms(reference):
    rwa = build_model(reference)
    full = build_model(replace(reference, rwa=False))
    assert set(rwa.sectors) == {-1, 0, 1}
    diff = full.sectors[0] - rwa.sectors[0]
    lv = rwa.levels()
    rows, cols = np.nonzero(diff)
    # counter-rotating exchange changes the total excitation number by two
    assert np.all(np.abs(lv[rows].sum(1) - lv[cols].sum(1)) == 2)


def test_phase_pi_drive_is_real_positive(reference):
    model = build_model(reference)
    assert np.allclose(model.sectors[1].imag, 0) and model.sectors[1].real.max() > 0


def test_crosstalk_adds_target_drive(reference):
    spec = replace(reference, crosstalk=Crosstalk(0.1, 0.2, 0.0))
    model = build_model(spec)
    lv = model.levels()
    rows, cols = np.nonzero(model.sectors[1])
    moved_target = lv[rows, 1] != lv[cols, 1]
    assert moved_target.any() and (~moved_target).any()


def test_two_and_three_qubit_builders(reference):
    h0, hint = build_two_qubit(reference)
    assert h0.shape == (16, 16) and hint.dim == 16
    s3 = three_qubit_spec(reference, 5300, -330, 3.8, "control_spectator")
    assert [q.name for q in qubit_order(s3)] == ["s", "c", "t"]
    assert s3.topology == "control_spectator"
    h0, hint = build_three_qubit(s3, "control_spectator")
    assert h0.shape == (64, 64)
    with pytest.raises(ValueError):
        build_three_qubit(s3, "target_spectator")
    s3t = three_qubit_spec(reference, 5300, -330, 3.8, "target_spectator")
    assert [q.name for q in qubit_order(s3t)] == ["c", "t", "s"]
    with pytest.raises(ValueError):
        build_two_qubit(s3)


def test_rotating_frame_is_static(reference):
    model = build_model(reference)
    h = model.rotating_hamiltonian()
    assert np.allclose(h, h.conj().T)


def test_dressed_basis_methods_agree(reference):
    pert = dressed_basis(reference, "perturbative")
    num = dressed_basis(reference, "numeric")
    # second-order shifts versus exact diagonalization: differences are O(J^4 / Delta^3)
    assert pert.zz == pytest.approx(0.114658, abs=1e-6)
    assert num.zz == pytest.approx(pert.zz, abs=5e-4)
    assert num.labels[5] == (1, 1)
    with pytest.raises(ValueError):
        dressed_basis(reference, "other")


def test_with_qubit_recomputes_epsilon(reference):
    moved = reference.with_qubit("control", omega_mhz=5014.0)
    assert moved.delta_ct == 100
    assert moved.control.params.epsilon != reference.control.params.epsilon
    assert moved.with_coupling_strength(2.0).coupling("c", "t") == 2.0
