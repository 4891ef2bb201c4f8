"""Pauli decomposition and gate parameters of the effective CR Hamiltonian.

Rates follow H = sum_P w_P P / 2 on the computational subspace, so w_P is
Tr(P H) / 2^(n-1). Pauli labels list one letter per tensor factor in model
order: control-target for two qubits, spectator-control-target for a control
spectator and control-target-spectator for a target spectator.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import reduce
from itertools import product

import numpy as np

from .errors import OutOfRange, ResonancePole
from .model import DeviceSpec
from .opalg import POLE_TOL
from .swpt import run_swpt

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(label: str) -> np.ndarray:
    return reduce(np.kron, [PAULI[ch] for ch in label])


def pauli_labels(n_qubits: int) -> list[str]:
    return ["".join(p) for p in product("IXYZ", repeat=n_qubits)]


def pauli_decompose(h: np.ndarray, n_qubits: int) -> dict[str, float]:
    """Coefficients w_P with h = sum_P w_P P / 2. Imaginary parts are dropped (h Hermitian)."""
    h = np.asarray(h)
    if h.shape != (2**n_qubits, 2**n_qubits):
        raise ValueError(f"expected a {2**n_qubits}-dimensional matrix")
    norm = 2 ** (n_qubits - 1)
    return {lab: float(np.trace(pauli_matrix(lab) @ h).real / norm) for lab in pauli_labels(n_qubits)}


def pauli_reconstruct(rates: dict[str, float], n_qubits: int) -> np.ndarray:
    out = np.zeros((2**n_qubits, 2**n_qubits), dtype=complex)
    for lab, w in rates.items():
        out += 0.5 * w * pauli_matrix(lab)
    return out


def standard_labels(n_qubits: int, target_index: int) -> list[str]:
    """{I,Z} on every non-target factor and {I,X,Z} on the target, without the identity."""
    letters = [("I", "X", "Z") if k == target_index else ("I", "Z") for k in range(n_qubits)]
    return ["".join(p) for p in product(*letters) if set(p) != {"I"}]


def _single_z(label: str) -> bool:
    return label.count("Z") == 1 and label.count("I") == len(label) - 1


@dataclass(frozen=True)
class GateParams:
    """Pauli rates in MHz of the computational effective Hamiltonian."""

    rates: dict
    n_qubits: int = 2
    target_index: int = 1
    order: int | None = None
    basis: str = "energy"
    static_subtracted: bool = False

    @classmethod
    def two_qubit(cls, ix=0.0, iz=0.0, zi=0.0, zx=0.0, zz=0.0, iy=0.0, zy=0.0, **flags) -> "GateParams":
        rates = {lab: 0.0 for lab in pauli_labels(2)}
        rates.update(IX=ix, IZ=iz, ZI=zi, ZX=zx, ZZ=zz, IY=iy, ZY=zy)
        return cls(rates={k: float(v) for k, v in rates.items()}, **flags)

    def rate(self, label: str) -> float:
        return self.rates.get(label, 0.0)

    @property
    def ix(self) -> float:
        return self.rate("IX")

    @property
    def iy(self) -> float:
        return self.rate("IY")

    @property
    def iz(self) -> float:
        return self.rate("IZ")

    @property
    def zi(self) -> float:
        return self.rate("ZI")

    @property
    def zx(self) -> float:
        return self.rate("ZX")

    @property
    def zy(self) -> float:
        return self.rate("ZY")

    @property
    def zz(self) -> float:
        return self.rate("ZZ")

    def standard(self) -> dict[str, float]:
        return {lab: self.rate(lab) for lab in standard_labels(self.n_qubits, self.target_index)}

    def hamiltonian(self) -> np.ndarray:
        return pauli_reconstruct(self.rates, self.n_qubits)


def _computational_static(spec: DeviceSpec, order: int, scope: str,
                          pole_tol: float = POLE_TOL) -> tuple[np.ndarray, int, int]:
    series = run_swpt(spec, order, scope, pole_tol)
    model = series.model
    comp = model.computational_indices()
    return series.static()[np.ix_(comp, comp)], len(model.dims), model.target_index


def gate_params(spec: DeviceSpec, order: int = 2, subtract_static: bool = True,
                scope: str = "computational", pole_tol: float = POLE_TOL) -> GateParams:
    """Rates through ``order`` from the perturbative engine.

    With ``subtract_static`` the single-Z rates of the undriven device are
    removed, leaving only the drive-induced (observable) part of the qubit
    frequency shifts. ZZ and other multi-qubit Z rates keep their static part.
    """
    h, n_q, target = _computational_static(spec, order, scope, pole_tol)
    rates = pauli_decompose(h, n_q)
    if subtract_static:
        h0, *_ = _computational_static(spec.with_drive(amplitude_mhz=0.0), order, scope, pole_tol)
        static = pauli_decompose(h0, n_q)
        for lab in rates:
            if _single_z(lab):
                rates[lab] -= static[lab]
    return GateParams(rates=rates, n_qubits=n_q, target_index=target, order=order,
                      basis="kerr" if spec.kerr_mode else "energy", static_subtracted=subtract_static)


def _check_denominators(**dens: float) -> None:
    for name, value in dens.items():
        if abs(value) < POLE_TOL:
            raise ResonancePole(value, message=f"closed form denominator {name} vanishes")


@dataclass(frozen=True)
class LowestOrderCoefficients:
    """ZX = zx*J*Omega, IX = ix*J*Omega, ZZ = zz*J^2, ZI = zi*Omega^2."""

    zx: float
    ix: float
    zz: float
    zi: float


def lowest_order_coefficients(delta: float, alpha_c: float, alpha_t: float,
                              nu_c: dict, nu_t: dict) -> LowestOrderCoefficients:
    _check_denominators(delta=delta, delta_plus_alpha_c=delta + alpha_c, delta_minus_alpha_t=delta - alpha_t)
    zx = 0.5 * (nu_t["01"] * nu_c["12"] ** 2 / (delta + alpha_c) - 2 * nu_t["01"] * nu_c["01"] ** 2 / delta)
    ix = -nu_t["01"] * nu_c["12"] ** 2 / (2 * (delta + alpha_c))
    zz = 0.5 * (nu_c["01"] ** 2 * nu_t["12"] ** 2 / (delta - alpha_t)
                - nu_t["01"] ** 2 * nu_c["12"] ** 2 / (delta + alpha_c))
    zi = nu_c["12"] ** 2 / (4 * (delta + alpha_c)) - nu_c["01"] ** 2 / (2 * delta)
    return LowestOrderCoefficients(zx=zx, ix=ix, zz=zz, zi=zi)


def zx_fourth_order_coefficient(delta: float, alpha_c: float, nu_c: dict, nu_t: dict) -> float:
    """Coefficient of J*Omega^3 in the fourth-order ZX rate."""
    d, a = delta, alpha_c
    _check_denominators(delta=d, delta_plus_alpha=d + a, two_delta_plus_alpha=2 * d + a,
                        two_delta_plus_three_alpha=2 * d + 3 * a)
    n01, n12, n23 = nu_c["01"] ** 2, nu_c["12"] ** 2, nu_c["23"] ** 2
    bracket = (n01**2 / (2 * d**3)
               + (-n01 * n12 - 3 * n12 * n23) / (4 * d**2 * (d + a))
               + (n01 * n12 - n12 * n23) / (4 * d * (d + a) ** 2)
               - n12**2 / (4 * (d + a) ** 3)
               - n01 * n12 / (4 * d**2 * (2 * d + a))
               + 9 * n12 * n23 / (4 * d**2 * (2 * d + 3 * a)))
    return bracket * nu_t["01"]


def zx_fourth_order_kerr_coefficient(delta: float, alpha_c: float) -> float:
    """Harmonic-element limit of ``zx_fourth_order_coefficient`` in factored form."""
    d, a = delta, alpha_c
    _check_denominators(delta=d, delta_plus_alpha=d + a, two_delta_plus_alpha=2 * d + a,
                        two_delta_plus_three_alpha=2 * d + 3 * a)
    num = 3 * a**5 + 11 * a**4 * d + 15 * a**3 * d**2 + 9 * a**2 * d**3
    return num / (2 * d**3 * (d + a) ** 3 * (2 * d + a) * (2 * d + 3 * a))


def closed_form_params(spec: DeviceSpec, include_fourth_order_zx: bool = False) -> GateParams:
    """Lowest-order rates evaluated from the closed-form expressions, without the engine.

    Uses energy-basis or harmonic matrix elements according to ``spec.kerr_mode``.
    The control drive is scaled by (1 - A_c) and a direct target drive adds
    nu_t01 A_t Omega (cos phi_t, -sin phi_t) to (IX, IY). The drive phase enters
    through the complex co-rotating amplitude -Omega e^{i phi_d}, which is real
    and positive for phi_d = pi.
    """
    if spec.spectator is not None:
        raise ValueError("closed forms cover the two-qubit model")
    c, t = spec.control, spec.target
    nu_c, nu_t = spec.elements(c).nu, spec.elements(t).nu
    xt = spec.crosstalk
    a_c = xt.a_c if xt else 0.0
    omega = (1.0 - a_c) * spec.drive.amplitude_mhz
    j = spec.coupling(c.name, t.name)
    coef = lowest_order_coefficients(spec.delta_ct, c.params.alpha_mhz, t.params.alpha_mhz, nu_c, nu_t)
    phase = -np.exp(1j * spec.drive.phase)
    zx_total = coef.zx * j * omega
    if include_fourth_order_zx:
        zx_total += zx_fourth_order_coefficient(spec.delta_ct, c.params.alpha_mhz, nu_c, nu_t) * j * omega**3
    ix_total = coef.ix * j * omega
    rates = {
        "ZX": zx_total * phase.real, "ZY": -zx_total * phase.imag,
        "IX": ix_total * phase.real, "IY": -ix_total * phase.imag,
        "ZZ": coef.zz * j**2, "ZI": coef.zi * omega**2, "IZ": 0.0,
    }
    if xt and xt.a_t:
        direct = nu_t["01"] * xt.a_t * spec.drive.amplitude_mhz * (-np.exp(1j * (spec.drive.phase + xt.phi_t)))
        rates["IX"] += direct.real
        rates["IY"] -= direct.imag
    full = {lab: 0.0 for lab in pauli_labels(2)}
    full.update({k: float(v) for k, v in rates.items()})
    return GateParams(rates=full, order=4 if include_fourth_order_zx else 2,
                      basis="kerr" if spec.kerr_mode else "energy", static_subtracted=True)


REGION_NAMES = ("I", "II", "III", "IV", "V")


@dataclass(frozen=True)
class RegionLabel:
    """Straddling-regime region, or the pole a boundary detuning sits on."""

    region: str | None
    bounds: tuple[float, float]
    pole: str | None = None


def region_boundaries(alpha_c: float, alpha_t: float) -> list[tuple[float, str]]:
    """Region edges with the collision type that makes each one a pole."""
    return [(alpha_t, "II_B"), (0.0, "II_A"), (-alpha_c / 2, "I_A"), (-alpha_c, "I_C"),
            (-1.5 * alpha_c, "I_D"), (-2 * alpha_c, "I_E")]


def classify_region(delta_ct: float, alpha_c: float, alpha_t: float, atol: float = 1e-9) -> RegionLabel:
    if alpha_c >= 0 or alpha_t >= 0:
        raise ValueError("anharmonicities must be negative")
    edges = region_boundaries(alpha_c, alpha_t)
    values = [v for v, _ in edges]
    if values != sorted(values):
        raise ValueError("region boundaries are not ordered for these anharmonicities")
    for value, name in edges:
        if abs(delta_ct - value) <= atol:
            return RegionLabel(region=None, bounds=(value, value), pole=name)
    if not values[0] < delta_ct < values[-1]:
        raise OutOfRange(f"detuning {delta_ct} MHz lies outside ({values[0]}, {values[-1]})")
    k = int(np.searchsorted(values, delta_ct)) - 1
    return RegionLabel(region=REGION_NAMES[k], bounds=(values[k], values[k + 1]))


def kerr_vs_energy_zx_error(spec: DeviceSpec) -> float:
    """Relative error in ZX predicted from measured ZZ and ZI by Kerr versus energy-basis coefficients.

    With ZX = A J Omega, ZZ = B J^2 and ZI = C Omega^2 this is
    1 - (A_kerr / A) sqrt(B C / (B_kerr C_kerr)).
    """
    c, t = spec.control, spec.target
    args = (spec.delta_ct, c.params.alpha_mhz, t.params.alpha_mhz)
    energy = lowest_order_coefficients(*args, matrix_nu(spec, c, False), matrix_nu(spec, t, False))
    kerr = lowest_order_coefficients(*args, matrix_nu(spec, c, True), matrix_nu(spec, t, True))
    ratio = (energy.zz * energy.zi) / (kerr.zz * kerr.zi)
    if ratio < 0:
        raise ValueError("ZZ*ZI changes sign between the two models")
    return float(1.0 - (kerr.zx / energy.zx) * np.sqrt(ratio))


def matrix_nu(spec: DeviceSpec, qubit, kerr: bool) -> dict:
    return replace(spec, kerr_mode=kerr).elements(qubit).nu


def zx_zz_ratio(params: GateParams) -> float:
    return abs(params.zx / params.zz) if params.zz else float("inf")


__all__ = [
    "GateParams", "RegionLabel", "pauli_decompose", "pauli_reconstruct", "pauli_labels", "pauli_matrix",
    "standard_labels", "gate_params", "closed_form_params", "lowest_order_coefficients",
    "zx_fourth_order_coefficient", "zx_fourth_order_kerr_coefficient", "classify_region",
    "region_boundaries", "kerr_vs_energy_zx_error", "zx_zz_ratio",
]
