from dataclasses import replace

import numpy as np
import pytest

from crflow.errors import LabelCrossing
from crflow.gates import closed_form_params
from crflow.model import Crosstalk
from crflow.saturation import (DrivenControl, _follow, charge_elements, control_stark_rate, driven_control,
                               driven_control_eigensystem, interaction_constants, saturation_curve)

from conftest import device

J = 3.8


def test_zero_drive_gives_bare_states(reference):
    d = driven_control_eigensystem(reference, 0.0)
    assert np.allclose(np.abs(d.states), np.eye(8))
    system = driven_control(reference)
    assert np.allclose(d.energies, system.diagonal)
    assert system.diagonal[1] == pytest.approx(reference.delta_ct)


def test_charge_elements_extend_series(reference):
    p = reference.control.params
    op = charge_elements(p, 8)
    assert op[3, 4] == pytest.approx(2 * (1 - 4 * p.epsilon / 8))
    assert np.allclose(np.diag(charge_elements(p, 6, kerr_mode=True), 1), np.sqrt(np.arange(1, 6)))
    with pytest.raises(ValueError):
        driven_control(reference, levels=3)


def test_stark_shift_matches_second_order(reference):
    spec = reference.with_drive(amplitude_mhz=5.0)
    assert control_stark_rate(spec, 5.0) == pytest.approx(closed_form_params(spec).zi, rel=0.05)


def test_cutoff_convergence(reference):
    e6 = driven_control_eigensystem(reference, 200.0, levels=6).energies[:2]
    e8 = driven_control_eigensystem(reference, 200.0, levels=8).energies[:2]
    e10 = driven_control_eigensystem(reference, 200.0, levels=10).energies[:2]
    assert np.all(np.abs(e6 - e8) <= 1e-6 * np.abs(e8))
    assert np.max(np.abs(e8 - e10)) < 1e-8


@pytest.mark.parametrize("delta", [-100.0, 100.0, 200.0])
def test_weak_drive_limit(delta):
    spec = device(delta, 1.0)
    a0, a1 = interaction_constants(spec, 1.0)
    closed = closed_form_params(spec)
    assert (a0 - a1).real == pytest.approx(closed.zx, rel=2e-3)
    assert (a0 + a1).real == pytest.approx(closed.ix, rel=2e-3)


def test_no_coupling_no_rates(reference):
    a0, a1 = interaction_constants(reference.with_coupling_strength(1e-300), 100.0)
    assert abs(a0) < 1e-290 and abs(a1) < 1e-290


def test_curve_grid_and_region():
    curve = saturation_curve(device(200.0), [10.0, 20.0, 30.0])
    assert curve.region_name == "III" and not curve.flagged.any()
    assert np.allclose(curve.zx, (curve.a0 - curve.a1).real)
    with pytest.raises(ValueError):
        saturation_curve(device(200.0), [20.0, 10.0])
    with pytest.raises(ValueError):
        saturation_curve(device(200.0), [-5.0, 10.0])
    assert saturation_curve(device(700.0), [10.0]).region is None


def test_bounded_by_coupling():
    for delta in (-100.0, 100.0, 200.0, 410.0, 580.0):
        curve = saturation_curve(device(delta), np.arange(10.0, 501.0, 10.0))
        assert np.max(np.abs(curve.zx)) <= 1.5 * J


@pytest.mark.parametrize("pair", [(-200.0, -100.0), (60.0, 140.0), (350.0, 450.0), (550.0, 640.0)])
def test_bands_converge(pair):
    # two curves in the same region draw closer at strong drive
    a, b = (saturation_curve(device(d), [50.0, 500.0]) for d in pair)
    assert a.region_name == b.region_name
    assert abs(a.zx[1] - b.zx[1]) < abs(a.zx[0] - b.zx[0])


def test_label_crossing_reported():
    # a two-level toy with an exact crossing that continuation cannot resolve at a coarse step
    toy = DrivenControl(diagonal=np.array([0.0, 0.0, 50.0, 90.0]), lowering=np.diag([1.0, 0.0, 0.0], 1),
                        phase=np.pi)
    points = list(_follow(toy, np.array([10.0]), max_step=10.0))
    assert points[-1].min_overlap < 0.5
    spec = replace(device(200.0), crosstalk=Crosstalk(0.1, 0.0, 0.0))
    with pytest.raises(ValueError):
        driven_control(spec)


def test_label_crossing_error(monkeypatch):
    import crflow.saturation as sat

    monkeypatch.setattr(sat, "MIN_OVERLAP", 1.01)
    with pytest.raises(LabelCrossing):
        sat.driven_control_eigensystem(device(200.0), 50.0)
