"""Strong-drive ZX/IX rates from the drive-dressed control qubit.

The control qubit is diagonalized together with the drive, in the frame rotating
at the drive frequency where the problem is static:

    H_c(Omega) = diag(E_n - n w_d) + c y_c^- + c* y_c^+,   c = -(Omega/2) e^{i phi}.

The exchange coupling is then treated as a small correction between the dressed
control states with the target left bare. The interaction constant

    a_n = J nu_t01 <psi_n(Omega)| y_c^- |psi_n(Omega)>

is the matrix element of H_J between |psi_n>|t=0> and |psi_n>|t=1>, so the target
sees a_n |1><0| + h.c. and the rates (half-coefficient convention) are
IX = Re(a_0 + a_1), ZX = Re(a_0 - a_1), with the Y rates from the imaginary parts.

Dressed states are labelled by continuation from the bare states at Omega = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import LabelCrossing, OutOfRange
from .gates import RegionLabel, classify_region
from .model import DeviceSpec, drive_frequency
from .transmon import SERIES_MAX_LEVELS, TransmonParams, harmonic_elements, matrix_elements

DEFAULT_LEVELS = 8
MAX_STEP_MHZ = 1.0
MIN_OVERLAP = 0.5


def charge_elements(params: TransmonParams, levels: int, kerr_mode: bool = False,
                    include_03: bool = False) -> np.ndarray:
    """Lowering part of the control charge operator on ``levels`` states.

    The three lowest transitions use the O(eps^2) series. Higher transitions,
    which the series does not cover, use the first-order form
    sqrt(n + 1) (1 - (n + 1) eps / 8), the pattern the series follows at first order.
    In Kerr mode every element is the harmonic sqrt(n + 1).
    """
    eps = params.epsilon
    known = (harmonic_elements() if kerr_mode else matrix_elements(eps)).nu
    op = np.zeros((levels, levels))
    for k in range(levels - 1):
        if k < SERIES_MAX_LEVELS - 1:
            op[k, k + 1] = known[f"{k}{k + 1}"]
        elif kerr_mode:
            op[k, k + 1] = np.sqrt(k + 1)
        else:
            op[k, k + 1] = np.sqrt(k + 1) * (1 - (k + 1) * eps / 8)
    if include_03 and levels >= 4:
        op[0, 3] = known["03"]
    return op


@dataclass(frozen=True)
class DrivenControl:
    """Static pieces of the rotating-frame control Hamiltonian."""

    diagonal: np.ndarray
    lowering: np.ndarray
    phase: float

    @property
    def levels(self) -> int:
        return self.diagonal.size

    def hamiltonian(self, omega_mhz: float) -> np.ndarray:
        co = -0.5 * omega_mhz * np.exp(1j * self.phase)
        return np.diag(self.diagonal).astype(complex) + co * self.lowering + np.conj(co) * self.lowering.T


def driven_control(spec: DeviceSpec, levels: int = DEFAULT_LEVELS) -> DrivenControl:
    if levels < 4:
        raise ValueError("the driven control needs at least 4 levels")
    if spec.crosstalk is not None and (spec.crosstalk.a_c or spec.crosstalk.a_t):
        raise ValueError("crosstalk is not supported by the dressed-control method")
    c = spec.control.params
    n = np.arange(levels)
    energies = c.ladder(spec.include_beta, levels=levels)
    diagonal = energies - n * drive_frequency(spec)
    lowering = charge_elements(c, levels, spec.kerr_mode, spec.include_03)
    return DrivenControl(diagonal=diagonal, lowering=lowering, phase=spec.drive.phase)


@dataclass(frozen=True)
class DressedControl:
    """Eigenpairs ordered by bare label: ``states[:, n]`` continues from |n>."""

    omega_mhz: float
    energies: np.ndarray
    states: np.ndarray
    min_overlap: float


def _follow(system: DrivenControl, omegas: np.ndarray, max_step: float):
    """Continue labelled eigenpairs along ascending ``omegas``, yielding one per point.

    Each step matches new eigenvectors to the previous ones by maximal total
    overlap. ``min_overlap`` is the worst matched overlap since the previous point.
    """
    states = np.eye(system.levels, dtype=complex)
    current = 0.0
    for target in omegas:
        worst = 1.0
        steps = max(int(np.ceil((target - current) / max_step)), 1) if target > current else 0
        grid = np.linspace(current, target, steps + 1)[1:] if steps else [target]
        energies = None
        for omega in grid:
            vals, vecs = np.linalg.eigh(system.hamiltonian(omega))
            overlap = np.abs(states.conj().T @ vecs) ** 2
            rows, cols = linear_sum_assignment(-overlap)
            perm = cols[np.argsort(rows)]
            worst = min(worst, float(np.min(overlap[np.arange(system.levels), perm])))
            states, energies = vecs[:, perm], vals[perm]
        current = target
        yield DressedControl(float(target), energies, states, worst)


def _check_grid(omegas: np.ndarray) -> None:
    if omegas.ndim != 1 or omegas.size == 0:
        raise ValueError("drive grid must be a non-empty 1D sequence")
    if np.any(omegas < 0) or np.any(np.diff(omegas) <= 0):
        raise ValueError("drive grid must be non-negative and strictly ascending")


def driven_control_eigensystem(spec: DeviceSpec, omega_mhz: float, levels: int = DEFAULT_LEVELS,
                               max_step: float = MAX_STEP_MHZ) -> DressedControl:
    """Dressed control eigenpairs at one drive amplitude, labelled by continuation from zero drive."""
    system = driven_control(spec, levels)
    result = list(_follow(system, np.array([float(omega_mhz)]), max_step))[-1]
    if result.min_overlap < MIN_OVERLAP:
        raise LabelCrossing(f"label continuation overlap {result.min_overlap:.3f} below {MIN_OVERLAP}")
    return result


def _constants(spec: DeviceSpec, dressed: DressedControl, lowering: np.ndarray) -> tuple[complex, complex]:
    c, t = spec.control, spec.target
    j = spec.coupling(c.name, t.name)
    nu_t01 = spec.elements(t).nu["01"]
    a = [j * nu_t01 * (dressed.states[:, n].conj() @ lowering @ dressed.states[:, n]) for n in (0, 1)]
    return complex(a[0]), complex(a[1])


def interaction_constants(spec: DeviceSpec, omega_mhz: float, levels: int = DEFAULT_LEVELS,
                          max_step: float = MAX_STEP_MHZ) -> tuple[complex, complex]:
    """(a_0, a_1) in MHz at one drive amplitude."""
    system = driven_control(spec, levels)
    dressed = driven_control_eigensystem(spec, omega_mhz, levels, max_step)
    return _constants(spec, dressed, system.lowering)


def control_stark_rate(spec: DeviceSpec, omega_mhz: float, levels: int = DEFAULT_LEVELS,
                       max_step: float = MAX_STEP_MHZ) -> float:
    """Drive-induced ZI rate (half-coefficient convention) from the dressed 0 and 1 energies."""
    system = driven_control(spec, levels)
    dressed = driven_control_eigensystem(spec, omega_mhz, levels, max_step)
    shift = dressed.energies[:2] - system.diagonal[:2]
    return float(-(shift[1] - shift[0]))


@dataclass(frozen=True)
class SaturationCurve:
    omega_mhz: np.ndarray
    zx: np.ndarray
    ix: np.ndarray
    zy: np.ndarray
    iy: np.ndarray
    a0: np.ndarray
    a1: np.ndarray
    flagged: np.ndarray  # label continuation unreliable at or before this point
    region: RegionLabel | None

    @property
    def region_name(self) -> str | None:
        return None if self.region is None else (self.region.region or f"pole:{self.region.pole}")


def saturation_curve(spec: DeviceSpec, omega_grid, levels: int = DEFAULT_LEVELS,
                     max_step: float = MAX_STEP_MHZ) -> SaturationCurve:
    """ZX/IX/ZY/IY rates along an ascending drive-amplitude grid.

    Points after a failed label continuation are flagged rather than dropped.
    """
    omegas = np.asarray(omega_grid, dtype=float)
    _check_grid(omegas)
    system = driven_control(spec, levels)
    a0, a1, flagged = [], [], []
    broken = False
    for dressed in _follow(system, omegas, max_step):
        broken = broken or dressed.min_overlap < MIN_OVERLAP
        flagged.append(broken)
        x0, x1 = _constants(spec, dressed, system.lowering)
        a0.append(x0)
        a1.append(x1)
    a0, a1 = np.array(a0), np.array(a1)
    c, t = spec.control.params, spec.target.params
    try:
        region = classify_region(spec.delta_ct, c.alpha_mhz, t.alpha_mhz)
    except OutOfRange:
        region = None
    return SaturationCurve(omega_mhz=omegas, zx=(a0 - a1).real, ix=(a0 + a1).real,
                           zy=(a0 - a1).imag, iy=(a0 + a1).imag, a0=a0, a1=a1,
                           flagged=np.array(flagged), region=region)


__all__ = ["charge_elements", "DrivenControl", "driven_control", "DressedControl",
           "driven_control_eigensystem", "interaction_constants", "control_stark_rate", "SaturationCurve", "saturation_curve"]
