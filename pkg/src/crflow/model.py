"""Cross-resonance Hamiltonians in the transmon energy basis.

Qubits are truncated transmons on the Kerr ladder E_n = n*omega + n(n-1)/2*alpha
whose charge operator y = -i (y^- - y^+) carries the energy-basis matrix elements
(or harmonic sqrt(n) elements in Kerr mode). The drive on the control qubit is
Omega * y_c * sin(w_d t + phi_d); phi_d = pi gives a pure ZX interaction.

Hamiltonians are stored in graded form: ``sectors[p]`` multiplies exp(i p w_d t)
in the lab frame, so p is the number of drive photons absorbed (+) or emitted (-).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import reduce

import numpy as np

from .errors import LabelAmbiguity
from .opalg import BlockStructure, FourierOperator, GradedOperator
from .transmon import MatrixElements, TransmonParams, harmonic_elements, matrix_elements

ROLES = ("control", "target", "spectator")
FREQUENCY_MODES = ("bare_target", "dressed_target", "explicit")
TOPOLOGIES = ("control_spectator", "target_spectator")


@dataclass(frozen=True)
class Qubit:
    name: str
    role: str
    params: TransmonParams

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")


@dataclass(frozen=True)
class Drive:
    amplitude_mhz: float = 0.0
    phase: float = np.pi
    mode: str = "dressed_target"
    frequency_mhz: float | None = None

    def __post_init__(self):
        if self.mode not in FREQUENCY_MODES:
            raise ValueError(f"unknown drive frequency mode {self.mode!r}")
        if self.mode == "explicit" and self.frequency_mhz is None:
            raise ValueError("explicit drive mode needs frequency_mhz")


@dataclass(frozen=True)
class Crosstalk:
    a_c: float = 0.0
    a_t: float = 0.0
    phi_t: float = 0.0

    def __post_init__(self):
        for name in ("a_c", "a_t"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class Coupling:
    a: str
    b: str
    j_mhz: float

    def __post_init__(self):
        if self.j_mhz <= 0:
            raise ValueError("coupling strength must be positive")


@dataclass(frozen=True)
class DeviceSpec:
    qubits: tuple[Qubit, ...]
    couplings: tuple[Coupling, ...]
    drive: Drive = field(default_factory=Drive)
    crosstalk: Crosstalk | None = None
    rwa: bool = True
    kerr_mode: bool = False
    include_beta: bool = False
    include_03: bool = False

    def __post_init__(self):
        roles = [q.role for q in self.qubits]
        if roles.count("control") != 1 or roles.count("target") != 1:
            raise ValueError("need exactly one control and one target")
        if roles.count("spectator") > 1:
            raise ValueError("at most one spectator is supported")
        names = [q.name for q in self.qubits]
        if len(set(names)) != len(names):
            raise ValueError("qubit names must be unique")
        for q in self.qubits:
            if q.params.cutoff not in (2, 3, 4):
                raise ValueError("cutoffs must be 2, 3 or 4")
        if not self.couplings:
            raise ValueError("at least one coupling is required")
        for c in self.couplings:
            if c.a not in names or c.b not in names or c.a == c.b:
                raise ValueError(f"coupling {c.a}-{c.b} references unknown qubits")

    def by_role(self, role: str) -> Qubit | None:
        for q in self.qubits:
            if q.role == role:
                return q
        return None

    @property
    def control(self) -> Qubit:
        return self.by_role("control")

    @property
    def target(self) -> Qubit:
        return self.by_role("target")

    @property
    def spectator(self) -> Qubit | None:
        return self.by_role("spectator")

    def coupling(self, a: str, b: str) -> float:
        for c in self.couplings:
            if {c.a, c.b} == {a, b}:
                return c.j_mhz
        return 0.0

    @property
    def topology(self) -> str | None:
        s = self.spectator
        if s is None:
            return None
        if self.coupling(s.name, self.control.name) > 0:
            return "control_spectator"
        if self.coupling(s.name, self.target.name) > 0:
            return "target_spectator"
        raise ValueError("spectator is not coupled to control or target")

    @property
    def delta_ct(self) -> float:
        return self.control.params.omega_mhz - self.target.params.omega_mhz

    def elements(self, qubit: Qubit) -> MatrixElements:
        return harmonic_elements() if self.kerr_mode else matrix_elements(qubit.params.epsilon)

    def with_drive(self, **changes) -> "DeviceSpec":
        return replace(self, drive=replace(self.drive, **changes))

    def with_qubit(self, role: str, **changes) -> "DeviceSpec":
        """Copy with one qubit's frequency/anharmonicity/cutoff changed (epsilon recomputed)."""
        qubits = []
        for q in self.qubits:
            if q.role == role:
                omega = changes.get("omega_mhz", q.params.omega_mhz)
                alpha = changes.get("alpha_mhz", q.params.alpha_mhz)
                cutoff = changes.get("cutoff", q.params.cutoff)
                q = replace(q, params=TransmonParams.from_frequencies(omega, alpha, cutoff))
            qubits.append(q)
        return replace(self, qubits=tuple(qubits))

    def with_coupling_strength(self, j_mhz: float) -> "DeviceSpec":
        return replace(self, couplings=tuple(replace(c, j_mhz=j_mhz) for c in self.couplings))


def two_qubit_spec(omega_c: float, omega_t: float, alpha_c: float, alpha_t: float, j_mhz: float,
                   omega_mhz: float, *, cutoff: int = 4, phase: float = np.pi,
                   mode: str = "bare_target", frequency_mhz: float | None = None, **options) -> DeviceSpec:
    qubits = (Qubit("c", "control", TransmonParams.from_frequencies(omega_c, alpha_c, cutoff)),
              Qubit("t", "target", TransmonParams.from_frequencies(omega_t, alpha_t, cutoff)))
    return DeviceSpec(qubits=qubits, couplings=(Coupling("c", "t", j_mhz),),
                      drive=Drive(omega_mhz, phase, mode, frequency_mhz), **options)


def three_qubit_spec(base: DeviceSpec, omega_s: float, alpha_s: float, j_mhz: float,
                     topology: str, cutoff: int = 4) -> DeviceSpec:
    if topology not in TOPOLOGIES:
        raise ValueError(f"unknown topology {topology!r}")
    partner = base.control.name if topology == "control_spectator" else base.target.name
    spectator = Qubit("s", "spectator", TransmonParams.from_frequencies(omega_s, alpha_s, cutoff))
    return replace(base, qubits=base.qubits + (spectator,),
                   couplings=base.couplings + (Coupling("s", partner, j_mhz),))


def reference_spec(**options) -> DeviceSpec:
    """Reference device: 5114/4914 MHz, alpha = -330 MHz, J = 3.8 MHz, Omega = 50 MHz."""
    return two_qubit_spec(5114.0, 4914.0, -330.0, -330.0, 3.8, 50.0, **options)


def qubit_order(spec: DeviceSpec) -> tuple[Qubit, ...]:
    """Tensor ordering: control x target, spectator x control x target, or control x target x spectator."""
    topo = spec.topology
    if topo is None:
        return (spec.control, spec.target)
    if topo == "control_spectator":
        return (spec.spectator, spec.control, spec.target)
    return (spec.control, spec.target, spec.spectator)


def _embed(op: np.ndarray, index: int, dims: tuple[int, ...]) -> np.ndarray:
    mats = [op if k == index else np.eye(d) for k, d in enumerate(dims)]
    return reduce(np.kron, mats)


def drive_frequency(spec: DeviceSpec) -> float:
    """Drive frequency in MHz for the spec's frequency mode.

    The dressed mode tunes to the mean of the two control-conditioned dressed
    target transitions at second order in J, which removes the static IZ rate.
    """
    mode = spec.drive.mode
    w_t = spec.target.params.omega_mhz
    if mode == "bare_target":
        return w_t
    if mode == "explicit":
        return float(spec.drive.frequency_mhz)
    c, t = spec.control, spec.target
    j = spec.coupling(c.name, t.name)
    nc, nt = spec.elements(c).nu, spec.elements(t).nu
    delta = spec.delta_ct
    a_c, a_t = c.params.alpha_mhz, t.params.alpha_mhz
    shift = 0.5 * (nc["01"] ** 2 * nt["12"] ** 2 / (delta - a_t)
                   - nc["12"] ** 2 * nt["01"] ** 2 / (delta + a_c)
                   - 2 * nc["01"] ** 2 * nt["01"] ** 2 / delta) * j**2
    return w_t + shift


@dataclass(frozen=True)
class CRModel:
    """A built Hamiltonian H0 + Hint(t) with its tensor layout and frames."""

    order: tuple[Qubit, ...]
    dims: tuple[int, ...]
    energies: np.ndarray
    drive_freq: float
    sectors: dict
    target_index: int

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def blocks(self) -> BlockStructure:
        return BlockStructure(self.dims, self.target_index)

    def levels(self) -> np.ndarray:
        return self.blocks.levels()

    def h0(self) -> np.ndarray:
        return np.diag(self.energies)

    def hint(self) -> FourierOperator:
        return FourierOperator([(p * self.drive_freq, m) for p, m in self.sectors.items()], dim=self.dim)

    def interaction(self) -> GradedOperator:
        return GradedOperator(self.energies, self.drive_freq, self.sectors)

    @property
    def detuning(self) -> float:
        """Drive minus bare target frequency."""
        return self.drive_freq - self.order[self.target_index].params.omega_mhz

    def drive_frame_energies(self) -> np.ndarray:
        """Energies of the frame rotating with the drive on the target factor."""
        return self.energies + self.detuning * self.levels()[:, self.target_index]

    def computational_indices(self) -> np.ndarray:
        lv = self.levels()
        return np.nonzero(np.all(lv < 2, axis=1))[0]

    def rotating_hamiltonian(self) -> np.ndarray:
        """Static Hamiltonian in the frame rotating at the drive on every qubit (RWA only)."""
        if set(self.sectors) - {-1, 0, 1}:
            raise ValueError("unexpected drive harmonics")
        total = self.levels().sum(axis=1)
        h = np.diag(self.energies - self.drive_freq * total).astype(complex)
        for p, m in self.sectors.items():
            h += m
        return h


def build_model(spec: DeviceSpec) -> CRModel:
    order = qubit_order(spec)
    dims = tuple(q.params.cutoff for q in order)
    index = {q.name: k for k, q in enumerate(order)}
    ladders = [q.params.ladder(spec.include_beta) for q in order]
    energies = reduce(lambda a, b: (a[:, None] + b[None, :]).ravel(), ladders)
    lowers = [_embed(spec.elements(q).lowering(q.params.cutoff, "charge", spec.include_03), index[q.name], dims)
              for q in order]
    dim = int(np.prod(dims))
    sectors = {p: np.zeros((dim, dim), dtype=complex) for p in (-1, 0, 1)}

    for c in spec.couplings:
        ya, yb = lowers[index[c.a]], lowers[index[c.b]]
        sectors[0] += c.j_mhz * (ya @ yb.T + ya.T @ yb)
        if not spec.rwa:
            sectors[0] -= c.j_mhz * (ya @ yb + ya.T @ yb.T)

    w_d = drive_frequency(spec)
    omega = spec.drive.amplitude_mhz
    xt = spec.crosstalk or Crosstalk()
    drives = [(index[spec.control.name], (1.0 - xt.a_c) * omega, spec.drive.phase)]
    if xt.a_t:
        drives.append((index[spec.target.name], xt.a_t * omega, spec.drive.phase + xt.phi_t))
    for k, amp, phase in drives:
        if amp == 0:
            continue
        y_minus = lowers[k]
        # Omega y sin(w t + phi): co-rotating part is -(Omega/2) e^{i phi} y^- e^{i w t} + h.c.
        co = -0.5 * amp * np.exp(1j * phase)
        sectors[1] += co * y_minus
        sectors[-1] += np.conj(co) * y_minus.T
        if not spec.rwa:
            sectors[-1] += -co * y_minus
            sectors[1] += -np.conj(co) * y_minus.T

    sectors = {p: m for p, m in sectors.items() if np.any(m)}
    return CRModel(order=order, dims=dims, energies=energies, drive_freq=w_d, sectors=sectors,
                   target_index=index[spec.target.name])


def build_two_qubit(spec: DeviceSpec) -> tuple[np.ndarray, FourierOperator]:
    if spec.spectator is not None:
        raise ValueError("spec has a spectator; use build_three_qubit")
    model = build_model(spec)
    return model.h0(), model.hint()


def build_three_qubit(spec: DeviceSpec, topology: str | None = None) -> tuple[np.ndarray, FourierOperator]:
    if spec.spectator is None:
        raise ValueError("spec has no spectator")
    if topology is not None and topology != spec.topology:
        raise ValueError(f"spec couplings describe {spec.topology}, not {topology}")
    model = build_model(spec)
    return model.h0(), model.hint()


def apply_crosstalk(spec: DeviceSpec, a_c: float, a_t: float, phi_t: float) -> FourierOperator:
    """Interaction Hamiltonian with the control drive scaled by (1 - a_c) and a target drive a_t*Omega."""
    return build_model(replace(spec, crosstalk=Crosstalk(a_c, a_t, phi_t))).hint()


@dataclass(frozen=True)
class DressedBasis:
    energies: np.ndarray
    states: np.ndarray
    labels: tuple[tuple[int, int], ...]
    zz: float
    iz: float
    zi: float


def _static_rates(shifts: np.ndarray, dims: tuple[int, int]) -> tuple[float, float, float]:
    e = shifts.reshape(dims)
    zz = 0.5 * (e[0, 0] - e[0, 1] - e[1, 0] + e[1, 1])
    iz = 0.5 * (e[0, 0] - e[0, 1] + e[1, 0] - e[1, 1])
    zi = 0.5 * (e[0, 0] + e[0, 1] - e[1, 0] - e[1, 1])
    return float(zz), float(iz), float(zi)


def dressed_basis(spec: DeviceSpec, method: str = "perturbative") -> DressedBasis:
    """Eigenbasis of the undriven two-qubit Hamiltonian H0 + H_J.

    Static rates are reported for the shifts E_bar - E, i.e. in the frame of the
    bare qubit frequencies.
    """
    if spec.spectator is not None:
        raise ValueError("dressed basis is implemented for two qubits")
    undriven = spec.with_drive(amplitude_mhz=0.0)
    model = build_model(replace(undriven, crosstalk=None))
    hj = model.sectors.get(0, np.zeros((model.dim, model.dim)))
    e0 = model.energies
    labels = tuple(tuple(int(v) for v in row) for row in model.levels())
    if method == "perturbative":
        gaps = e0[:, None] - e0[None, :]
        offdiag = ~np.eye(model.dim, dtype=bool) & (np.abs(hj) > 0)
        safe = np.where(offdiag, gaps, 1.0)
        shifts = np.sum(np.where(offdiag, np.abs(hj) ** 2 / safe, 0.0), axis=1)
        coeff = np.where(offdiag, hj / (-safe), 0.0)  # <k|psi_m> = V_km / (E_m - E_k)
        states = np.eye(model.dim, dtype=complex) + coeff
        energies = e0 + shifts
    elif method == "numeric":
        vals, vecs = np.linalg.eigh(np.diag(e0) + hj)
        overlap = np.abs(vecs) ** 2
        assign = np.argmax(overlap, axis=1)
        if len(set(assign)) != model.dim or np.min(np.max(overlap, axis=1)) < 0.5:
            raise LabelAmbiguity("dressed states cannot be matched to bare states")
        energies = vals[assign]
        states = vecs[:, assign]
        # phase convention: positive overlap with the bare state
        phases = np.diag(states) / np.abs(np.diag(states))
        states = states / phases
    else:
        raise ValueError(f"unknown method {method!r}")
    zz, iz, zi = _static_rates(energies - e0, model.dims)
    return DressedBasis(energies=energies, states=states, labels=labels, zz=zz, iz=iz, zi=zi)
