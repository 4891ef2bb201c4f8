"""Transmon spectrum and charge/flux matrix elements in the energy basis.

The dimensionless transmon Hamiltonian is

    H = (omega_h / 4) * [y^2 - (2 / eps) * cos(sqrt(eps) * x)],

with x = b + b^dag and y = -i (b - b^dag). Energies and matrix elements are
available as series truncated at O(eps^3) and, as an independent check, from
dense diagonalization in the oscillator number basis.

All frequencies are ordinary frequencies in MHz.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoPhysicalRoot, NotConverged, UnsupportedCutoff

SERIES_MAX_LEVELS = 4


@dataclass(frozen=True)
class TransmonParams:
    omega_mhz: float
    alpha_mhz: float
    epsilon: float
    omega_h_mhz: float
    cutoff: int = 4

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.alpha_mhz >= 0:
            raise ValueError("anharmonicity must be negative")
        if self.omega_mhz <= 0:
            raise ValueError("qubit frequency must be positive")
        if self.cutoff < 2:
            raise ValueError("cutoff must be at least 2")

    @classmethod
    def from_frequencies(cls, omega_mhz: float, alpha_mhz: float, cutoff: int = 4) -> "TransmonParams":
        eps, omega_h = epsilon_from_spectrum(omega_mhz, alpha_mhz)
        return cls(float(omega_mhz), float(alpha_mhz), eps, omega_h, int(cutoff))

    def beta_mhz(self) -> float:
        return -(6.0 / 64.0) * self.epsilon**2 * self.omega_h_mhz

    def ladder(self, include_beta: bool = False, levels: int | None = None) -> np.ndarray:
        """Kerr ladder E_n = n*omega + n(n-1)/2 * alpha, optionally with beta on E_3."""
        n = np.arange(self.cutoff if levels is None else levels, dtype=float)
        energies = n * self.omega_mhz + 0.5 * n * (n - 1) * self.alpha_mhz
        if include_beta and energies.size > 3:
            energies[3] += self.beta_mhz()
        return energies


@dataclass(frozen=True)
class TransmonSpectrum:
    energies: np.ndarray
    beta_mhz: float

    @property
    def alpha_mhz(self) -> float:
        return float(self.energies[2] - 2 * self.energies[1])


@dataclass(frozen=True)
class MatrixElements:
    """Lowering-part elements keyed by transition: '01', '12', '23', '03'."""

    nu: dict[str, float]
    mu: dict[str, float]

    def lowering(self, cutoff: int, kind: str = "charge", include_03: bool = False) -> np.ndarray:
        """Lowering part of the charge (``y``) or flux (``x``) operator on ``cutoff`` levels."""
        if cutoff > SERIES_MAX_LEVELS:
            raise UnsupportedCutoff(f"series elements exist for at most {SERIES_MAX_LEVELS} levels")
        elements = self.nu if kind == "charge" else self.mu
        op = np.zeros((cutoff, cutoff))
        for k in range(cutoff - 1):
            op[k, k + 1] = elements[f"{k}{k + 1}"]
        if include_03 and cutoff == 4:
            op[0, 3] = elements["03"]
        return op


def epsilon_from_spectrum(omega_mhz: float, alpha_mhz: float) -> tuple[float, float]:
    """Recover (epsilon, omega_h) from the qubit frequency and anharmonicity.

    Solves [9 - 4r] eps^2 + 16 [1 - r] eps + 64 r = 0 with r = alpha/omega and keeps
    the root in (0, 1). omega_h follows from E_1 - E_0 = omega_h (1 - eps/4 - eps^2/16).
    """
    if omega_mhz <= 0 or alpha_mhz >= 0:
        raise NoPhysicalRoot("need omega > 0 and alpha < 0")
    r = alpha_mhz / omega_mhz
    if abs(r) >= 0.25:
        raise NoPhysicalRoot(f"|alpha/omega| = {abs(r):.3f} is outside the transmon regime")
    a, b, c = 9.0 - 4.0 * r, 16.0 * (1.0 - r), 64.0 * r
    disc = b * b - 4 * a * c
    roots = [(-b + s * np.sqrt(disc)) / (2 * a) for s in (1.0, -1.0)] if disc >= 0 else []
    physical = [x for x in roots if 0.0 < x < 1.0]
    if len(physical) != 1:
        raise NoPhysicalRoot(f"no unique root in (0, 1) for alpha/omega = {r}")
    eps = float(physical[0])
    omega_h = omega_mhz / (1.0 - eps / 4.0 - eps**2 / 16.0)
    return eps, float(omega_h)


def perturbative_spectrum(epsilon: float, omega_h_mhz: float, cutoff: int = 4,
                          include_beta: bool = False) -> TransmonSpectrum:
    """Energies E_n - E_0 from the O(eps^3) series.

    The third level is returned on the Kerr ladder 3*omega + 3*alpha unless
    ``include_beta`` is set, in which case the full series value (which differs
    by beta = -(6/64) eps^2 omega_h) is used.
    """
    if cutoff > SERIES_MAX_LEVELS:
        raise UnsupportedCutoff("series energies exist for at most 4 levels; use numerical_spectrum")
    if not 0.0 <= epsilon < 0.4:
        raise ValueError("series path requires 0 <= epsilon < 0.4")
    e = epsilon
    e1 = 1 - e / 4 - e**2 / 16
    e2 = 2 - 3 * e / 4 - 17 * e**2 / 64
    e3 = 3 - 3 * e / 2 - 45 * e**2 / 64
    beta = -(6.0 / 64.0) * e**2
    if not include_beta:
        e3 -= beta
    energies = omega_h_mhz * np.array([0.0, e1, e2, e3])[:cutoff]
    return TransmonSpectrum(energies=energies, beta_mhz=beta * omega_h_mhz)


def anharmonicity_ratio(epsilon: float) -> float:
    """alpha / omega_h to second order."""
    return -epsilon / 4 - 9 * epsilon**2 / 64


def matrix_elements(epsilon: float) -> MatrixElements:
    if not 0.0 <= epsilon < 0.4:
        raise ValueError("series path requires 0 <= epsilon < 0.4")
    e = epsilon
    s2, s3, s6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)
    mu = {
        "01": 1 + e / 8 + 13 * e**2 / 256,
        "12": s2 * (1 + e / 4 + 95 * e**2 / 512),
        "23": s3 * (1 + 3 * e / 8 + 105 * e**2 / 256),
        "03": -(s6 / 48) * e - (3 * s6 / 128) * e**2,
    }
    nu = {
        "01": 1 - e / 8 - 11 * e**2 / 256,
        "12": s2 * (1 - e / 4 - 73 * e**2 / 512),
        "23": s3 * (1 - 3 * e / 8 - 79 * e**2 / 256),
        "03": -(s6 / 16) * e - (5 * s6 / 128) * e**2,
    }
    return MatrixElements(nu={k: float(v) for k, v in nu.items()},
                          mu={k: float(v) for k, v in mu.items()})


def harmonic_elements() -> MatrixElements:
    """Kerr-limit elements: sqrt(n) ladders and no 0-3 coupling."""
    return matrix_elements(0.0)


def _diagonalize(epsilon: float, basis_size: int, omega_h: float, pad: int = 300):
    n = basis_size + pad
    b = np.diag(np.sqrt(np.arange(1, n)), 1)
    x = b + b.T
    y = -1j * (b - b.T)
    # The potential is built in a padded basis so truncation only cuts clean rows.
    # Beyond one period it is held at the barrier top: the unbounded coordinate
    # would otherwise host copies of the well at sqrt(eps) x = 2 pi k.
    xv, xw = np.linalg.eigh(x)
    phase = np.sqrt(epsilon) * xv
    well = np.where(np.abs(phase) <= np.pi, -np.cos(phase), 1.0)
    potential = (xw * ((2.0 / epsilon) * well)) @ xw.T
    h = 0.25 * omega_h * ((y @ y).real + potential)
    h = h[:basis_size, :basis_size]
    vals, vecs = np.linalg.eigh(h)
    # real eigenvectors with positive diagonal overlap <n|psi_n>
    signs = np.sign(np.diag(vecs)[: min(basis_size, vecs.shape[1])])
    signs[signs == 0] = 1.0
    vecs = vecs * signs
    return vals - vals[0], vecs, x[:basis_size, :basis_size], y[:basis_size, :basis_size]


def numerical_spectrum(epsilon: float, basis_size: int = 40, omega_h_mhz: float = 1.0,
                       levels: int = 4, tol: float = 1e-7):
    """Dense diagonalization of the transmon in a truncated number basis.

    Returns ``(energies, eigenvectors, nu, mu)``. ``nu[m, n] = i <m|y|n>`` and
    ``mu[m, n] = <m|x|n>`` for m, n < ``levels``; energies are relative to the
    ground state and scale with ``omega_h_mhz``. The lowest ``levels`` energies
    must agree with a run at ``basis_size + 10`` to ``tol`` relative change.

    The cosine is confined to a single period, so the result is the single-well
    spectrum the series describes. The kink at the barrier top limits basis
    convergence to roughly 1e-8 near eps = 0.2; below eps = 0.15 it reaches 1e-12.
    """
    if basis_size < 20:
        raise ValueError("basis_size must be at least 20")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    vals, vecs, x, y = _diagonalize(epsilon, basis_size, omega_h_mhz)
    check, *_ = _diagonalize(epsilon, basis_size + 10, omega_h_mhz)
    scale = np.maximum(np.abs(vals[1:levels]), 1e-300)
    if np.max(np.abs(vals[1:levels] - check[1:levels]) / scale) > tol:
        raise NotConverged(f"basis {basis_size} not converged to {tol}")
    low = vecs[:, :levels]
    mu = (low.conj().T @ x @ low).real
    nu = (1j * (low.conj().T @ y @ low)).real
    return vals, vecs, nu, mu
