import numpy as np
import pytest

from crflow.model import reference_spec, two_qubit_spec

TARGET_MHZ = 4914.0
ALPHA_MHZ = -330.0


def device(delta_ct: float, omega_mhz: float = 50.0, **options):
    """Reference device with the control moved to the given detuning from the target."""
    return two_qubit_spec(TARGET_MHZ + delta_ct, TARGET_MHZ, ALPHA_MHZ, ALPHA_MHZ, 3.8, omega_mhz, **options)


def random_specs(count: int, seed: int, **options):
    """Two-qubit specs with detunings kept at least 20 MHz from every region boundary."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a_c, a_t = rng.uniform(-350, -250, size=2)
        edges = np.array([a_t, 0, -a_c / 2, -a_c, -1.5 * a_c, -2 * a_c])
        delta = rng.uniform(a_t + 20, -2 * a_c - 20)
        if np.min(np.abs(edges - delta)) < 20:
            continue
        out.append(two_qubit_spec(4900 + delta, 4900, a_c, a_t, rng.uniform(1, 6), rng.uniform(5, 60),
                                  phase=rng.uniform(0, 2 * np.pi), **options))
    return out


@pytest.fixture
def reference():
    return reference_spec()


# one line per acceptance check, repeated in the terminal summary so they show without -s
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
