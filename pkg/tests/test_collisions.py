import pytest

from crflow.collisions import (CollisionInstance, Unclassified, catalogue_text, enumerate_rules, instantiate,
                               label_form, label_pole, pole_form, resonance_table, rule, scan_device)
from crflow.errors import ResonancePole
from crflow.model import three_qubit_spec
from crflow.swpt import run_swpt

from conftest import device

TWO_QUBIT_ROWS = [("II_B", -330), ("II_A", 0), ("II_C", 0), ("II_D", 0), ("I_A", 165), ("II_B", 330),
            ("I_C", 330), ("I_B", 330), ("I_D", 495), ("II_E", 660), ("I_E", 660)]

CONTROL_SPECTATOR = [("III_E", -830), ("II_E", -580), ("III_B", -330), ("II_B", -250), ("III_D", -170),
                     ("III_A", 0), ("II_A", 80), ("II_D", 80), ("III_B", 330), ("II_B", 410)]
TARGET_SPECTATOR = [("III_E", -1070), ("III_D", -410), ("II_B", -330), ("III_B", -250), ("II_A", 0),
                    ("II_C", 0), ("III_A", 80), ("III_C", 80), ("II_B", 330), ("III_B", 410)]


def _rows(spec, qubit, window=None):
    return sorted((r.label, round(r.detuning_mhz, 9)) for r in resonance_table(spec, qubit, window))


def test_catalogue():
    labels = [r.label for r in enumerate_rules()]
    assert len(labels) == 15 and labels[0] == "I_A" and labels[-1] == "III_E"
    assert rule("II_C").kind == "II"
    assert rule("I_B").severity == (1, 3) and rule("III_A").severity == (2, 0)
    with pytest.raises(KeyError):
        rule("IV_A")
    assert "III_E" in catalogue_text()


def test_two_qubit_table(reference):
    assert _rows(reference, "c", (-330, 660)) == sorted(TWO_QUBIT_ROWS)


@pytest.mark.parametrize("topology, expected", [("control_spectator", CONTROL_SPECTATOR),
                                                ("target_spectator", TARGET_SPECTATOR)])
def test_spectator_tables_contain_reference_rows(topology, expected):
    spec = three_qubit_spec(device(80.0), 4914.0, -330, 3.8, topology)
    rows = _rows(spec, "s")
    missing = [row for row in expected if row not in rows]
    assert not missing


def test_instances_are_deduplicated(reference):
    forms = [inst.form for inst in instantiate(reference)]
    assert len(forms) == len(set(forms))


def test_scan_flags_nearby_collision():
    reports = scan_device(device(166.0), guard_band_mhz=5.0)
    assert reports[0].flagged and reports[0].label == "I_A"
    assert reports[0].distance_mhz == pytest.approx(2.0)
    assert not any(r.flagged for r in scan_device(device(80.0), guard_band_mhz=5.0))


@pytest.mark.parametrize("delta, label", [(-330.0, "II_B"), (0.0, "II_A"), (165.0, "I_A"), (495.0, "I_D"),
                                          (330.0, "I_C"), (660.0, "I_E")])
def test_engine_poles_are_labelled(delta, label):
    spec = device(delta)
    with pytest.raises(ResonancePole) as err:
        run_swpt(spec, 4)
    found = label_pole(err.value, spec)
    assert isinstance(found, CollisionInstance) and found.label == label


def test_unmatched_form_is_unclassified(reference):
    form = pole_form(reference, (3, 3), (0, 0), 0)
    assert isinstance(label_form(reference, form, 1.0), Unclassified)
    assert isinstance(label_pole(ResonancePole(0.0, []), reference), Unclassified)
