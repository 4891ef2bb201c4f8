"""Echoed CR sequence: unitary, echoed rates, fidelity and non-local measures.

The sequence is two CR half pulses of length tau_p with opposite drive sign,
separated by ideal instantaneous control pi pulses about X:

    U_ech = exp(+i pi/2 XI) exp(-i H(-Omega) tau_p) exp(-i pi/2 XI) exp(-i H(+Omega) tau_p).

Flipping the drive flips the sign of the odd rates (IX, ZX) and keeps the even ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import BranchAmbiguity, MismatchClosedForm, NonUnitaryInput, ZeroZX
from .gates import GateParams, pauli_matrix

II, IY, IZ, ZX, XI = (pauli_matrix(lab) for lab in ("II", "IY", "IZ", "ZX", "XI"))
DIM = 4
CLOSED_FORM_TOL = 1e-9

MAGIC = np.array([[1, 0, 0, 1j],
                  [0, 1j, 1, 0],
                  [0, 1j, -1, 0],
                  [1, 0, 0, -1j]], dtype=complex) / np.sqrt(2)


def pulse_time(omega_zx: float) -> float:
    """Half-pulse length tau_p with |omega_zx| * 2 tau_p = pi/2 (units of 1/MHz)."""
    if omega_zx == 0:
        raise ZeroZX("no ZX rate, the echo cannot reach a ZX(pi/2) rotation")
    return float(np.pi / (4 * abs(omega_zx)))


def ideal_unitary(omega_zx: float = 1.0) -> np.ndarray:
    """exp(-i pi ZX / 4), with the rotation sense following the sign of omega_zx."""
    sign = 1.0 if omega_zx >= 0 else -1.0
    return expm(-1j * sign * np.pi / 4 * ZX)


def _cr_hamiltonian(p: GateParams, drive_sign: float) -> np.ndarray:
    rates = {"IX": drive_sign * p.ix, "ZX": drive_sign * p.zx, "IZ": p.iz, "ZI": p.zi, "ZZ": p.zz}
    return sum(0.5 * w * pauli_matrix(lab) for lab, w in rates.items())


def echo_product(params: GateParams, tau_p: float) -> np.ndarray:
    """Direct product of the four matrix exponentials."""
    flip = expm(-1j * np.pi / 2 * XI)
    return (flip.conj().T @ expm(-1j * _cr_hamiltonian(params, -1.0) * tau_p) @ flip
            @ expm(-1j * _cr_hamiltonian(params, 1.0) * tau_p))


@dataclass(frozen=True)
class EchoResult:
    u_ii: complex
    u_iy: complex
    u_iz: complex
    u_zx: complex
    omega_plus: float
    omega_minus: float
    tau_p: float
    unitary: np.ndarray

    @property
    def u(self) -> complex:
        return np.sqrt(self.u_iy**2 + self.u_iz**2 + self.u_zx**2)


def _sinc_ratio(num: float, freq: float, tau: float) -> float:
    # num / freq * sin(freq tau / 2), continuous at freq = 0
    if freq == 0:
        return num * tau / 2
    return num / freq * np.sin(freq * tau / 2)


def echo_unitary(params: GateParams, tau_p: float | None = None) -> EchoResult:
    """Closed-form echo unitary, checked against the direct matrix product."""
    ix, iz, zx, zz = params.ix, params.iz, params.zx, params.zz
    tau = pulse_time(zx) if tau_p is None else float(tau_p)
    w_p = float(np.hypot(zx + ix, iz + zz))
    w_m = float(np.hypot(zx - ix, iz - zz))
    cp, cm = np.cos(w_p * tau / 2), np.cos(w_m * tau / 2)
    ss = _sinc_ratio(1.0, w_p, tau) * _sinc_ratio(1.0, w_m, tau)
    u_ii = cp * cm + (ix**2 - iz**2 - zx**2 + zz**2) * ss
    u_iy = 2j * (zx * zz - ix * iz) * ss
    u_iz = 1j * _sinc_ratio(zz - iz, w_m, tau) * cp - 1j * _sinc_ratio(zz + iz, w_p, tau) * cm
    u_zx = 1j * _sinc_ratio(ix - zx, w_m, tau) * cp - 1j * _sinc_ratio(ix + zx, w_p, tau) * cm
    closed = u_ii * II + u_iy * IY + u_iz * IZ + u_zx * ZX
    direct = echo_product(params, tau)
    gap = float(np.max(np.abs(closed - direct)))
    if gap > CLOSED_FORM_TOL:
        raise MismatchClosedForm(f"closed-form echo unitary differs from the direct product by {gap:.2e}")
    return EchoResult(complex(u_ii), complex(u_iy), complex(u_iz), complex(u_zx), w_p, w_m, tau, closed)


@dataclass(frozen=True)
class EchoedRates:
    ii: float
    iy: float
    iz: float
    zx: float

    def hamiltonian(self) -> np.ndarray:
        return 0.5 * (self.ii * II + self.iy * IY + self.iz * IZ + self.zx * ZX)


def echo_hamiltonian(result: EchoResult, branch_tol: float = 1e-9) -> EchoedRates:
    """Rates of H_ech with U_ech = exp(-i H_ech 2 tau_p), principal-branch logarithms.

    The identity rate is only defined modulo pi / tau_p.
    """
    u = result.u
    if abs(u) == 0:
        raise BranchAmbiguity("u vanishes; echoed rates are undefined")
    plus, minus = result.u_ii + u, result.u_ii - u
    for z in (plus, minus):
        if abs(z.imag) < branch_tol and z.real < 0:
            raise BranchAmbiguity("logarithm argument lies on the branch cut")
    log_p, log_m = np.log(plus), np.log(minus)
    pref = 1j / (2 * result.tau_p)
    diff = pref * (log_p - log_m) / u
    return EchoedRates(ii=float((pref * (log_p + log_m)).real), iy=float((diff * result.u_iy).real),
                       iz=float((diff * result.u_iz).real), zx=float((diff * result.u_zx).real))


def gate_fidelity(u: np.ndarray, u_ideal: np.ndarray) -> tuple[float, float]:
    """Average-fidelity style overlap F and error E = 1 - F for d = 4."""
    d = u.shape[0]
    f = (np.trace(u.conj().T @ u).real + abs(np.trace(u.conj().T @ u_ideal)) ** 2) / (d * (d + 1))
    return float(f), float(1.0 - f)


@dataclass(frozen=True)
class MakhlinInvariants:
    g_x: float
    g_y: float
    g_z: float

    @property
    def nonlocal_error(self) -> float:
        return nonlocal_error(self)

    @property
    def entangling_power_gap(self) -> float:
        return entangling_power_gap(self)


def makhlin(u: np.ndarray, atol: float = 1e-10) -> MakhlinInvariants:
    u = np.asarray(u, dtype=complex)
    if u.shape != (DIM, DIM) or np.max(np.abs(u.conj().T @ u - np.eye(DIM))) > atol:
        raise NonUnitaryInput("expected a 4x4 unitary")
    um = MAGIC.conj().T @ u @ MAGIC
    m = um.T @ um
    det = np.linalg.det(um)
    tr = np.trace(m)
    g = tr**2 / (16 * det)
    g_z = (tr**2 - np.trace(m @ m)) / (4 * det)
    return MakhlinInvariants(float(g.real), float(g.imag), float(g_z.real))


def makhlin_from_cartan(c_x: float, c_y: float, c_z: float) -> MakhlinInvariants:
    cx, cy, cz = np.cos(2 * c_x), np.cos(2 * c_y), np.cos(2 * c_z)
    return MakhlinInvariants(0.25 * (cx + cy + cz + cx * cy * cz),
                             0.25 * np.sin(2 * c_x) * np.sin(2 * c_y) * np.sin(2 * c_z),
                             cx + cy + cz)


def cartan_unitary(c_x: float, c_y: float, c_z: float) -> np.ndarray:
    """exp(+i/2 (c_x XX + c_y YY + c_z ZZ)), the sign convention of ``makhlin_from_cartan``."""
    h = c_x * pauli_matrix("XX") + c_y * pauli_matrix("YY") + c_z * pauli_matrix("ZZ")
    return expm(0.5j * h)


def nonlocal_error(g: MakhlinInvariants) -> float:
    """Second-order estimate of 1 - F between the non-local parts of U and a CNOT-class gate."""
    return (4 * g.g_x - g.g_z + 1) / 10


def entangling_power(c_x: float, c_y: float, c_z: float) -> float:
    cx, cy, cz = np.cos(2 * c_x), np.cos(2 * c_y), np.cos(2 * c_z)
    return float((3 - cx * cy - cy * cz - cz * cx) / 18)


def entangling_power_gap(g: MakhlinInvariants) -> float:
    """Entangling-power deficit relative to the CNOT class, to second order."""
    return 2 * g.g_x / 9


@dataclass(frozen=True)
class EchoReport:
    params: GateParams
    result: EchoResult
    rates: EchoedRates
    fidelity: float
    error: float
    invariants: MakhlinInvariants

    @property
    def nonlocal_error(self) -> float:
        return nonlocal_error(self.invariants)


def echo_report(params: GateParams) -> EchoReport:
    result = echo_unitary(params)
    f, e = gate_fidelity(result.unitary, ideal_unitary(params.zx))
    return EchoReport(params, result, echo_hamiltonian(result), f, e, makhlin(result.unitary))
