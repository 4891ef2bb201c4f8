"""Time-dependent Schrieffer-Wolff engine and a time-domain propagation oracle.

With H_I(t) the interaction-frame coupling and G(t) = sum_n G_n the generator,
the transformed Hamiltonian is

    e^{iG} H_I e^{-iG} + i (d/dt e^{iG}) e^{-iG}
        = sum_k i^k/k! ad_G^k(H_I) - sum_k i^k/(k+1)! ad_G^k(dG/dt).

At each order n every term except -dG_n/dt is already known. Its block-diagonal
part is the effective Hamiltonian at that order, and dG_n/dt is set to cancel
its off-block part. Generators are zero-DC antiderivatives, so an off-block
entry at zero frequency is a resonance and is raised, never integrated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import least_squares
from scipy.spatial.transform import Rotation

from .errors import FitFailed, OrderUnsupported, ResonancePole
from .model import CRModel, DeviceSpec, build_model
from .opalg import POLE_TOL, FourierOperator, GradedOperator, interaction_frame

MAX_ORDER = 4
SCOPES = ("computational", "full")


@dataclass
class EffectiveSeries:
    """Per-order effective Hamiltonians and generators (expansion parameter set to 1)."""

    model: CRModel
    max_order: int
    effective: dict[int, GradedOperator]
    generators: dict[int, GradedOperator]
    scope: str = "computational"
    poles: list = field(default_factory=list)

    def effective_fourier(self, n: int) -> FourierOperator:
        return self.effective[n].to_fourier()

    def generator_fourier(self, n: int) -> FourierOperator:
        return self.generators[n].to_fourier()

    def static(self, order: int | None = None) -> np.ndarray:
        """Static effective Hamiltonian in the frame rotating with the drive on the target.

        With the drive on the bare target frequency this is the sum of the DC
        parts; otherwise the residual detuning -(w_d - w_t) N_t is included.
        """
        order = self.max_order if order is None else order
        frame = self.model.drive_frame_energies()
        out = np.zeros((self.model.dim, self.model.dim), dtype=complex)
        for n in range(1, order + 1):
            out += self.effective[n].static(frame)
        n_target = self.model.levels()[:, self.model.target_index]
        out -= self.model.detuning * np.diag(n_target)
        return out


def _hop_distance(model: CRModel) -> np.ndarray:
    """Number of interaction hops from the computational subspace to each state."""
    pattern = np.zeros((model.dim, model.dim), dtype=bool)
    for m in model.sectors.values():
        pattern |= np.abs(m) > 0
    pattern |= pattern.T
    dist = np.full(model.dim, np.iinfo(np.int32).max // 4, dtype=int)
    frontier = list(model.computational_indices())
    dist[frontier] = 0
    while frontier:
        nxt = []
        for a in frontier:
            for b in np.nonzero(pattern[a])[0]:
                if dist[b] > dist[a] + 1:
                    dist[b] = dist[a] + 1
                    nxt.append(b)
        frontier = nxt
    return dist


def _label_pole(err: ResonancePole, model: CRModel, order: int) -> ResonancePole:
    levels = model.levels()
    for e in err.entries:
        e.row_levels = tuple(int(v) for v in levels[e.row])
        e.col_levels = tuple(int(v) for v in levels[e.col])
    err.order = order
    err.args = (f"resonance pole at {err.frequency:.3e} MHz (generator order {order})",)
    return err


def run_swpt(spec: DeviceSpec | CRModel, max_order: int = 4, scope: str = "computational",
             pole_tol: float = POLE_TOL) -> EffectiveSeries:
    """Effective Hamiltonians H_eff^(1..max_order), block-diagonal in the target factor.

    With ``scope="computational"`` only entries that can still reach the
    computational block by ``max_order`` are kept: a generator entry at order k
    survives if the hop distances of its two states sum to at most
    ``max_order - k``. Entries further out cannot feed the computational block
    at the orders kept, so that block is exact while unrelated high-level
    resonances are never evaluated.
    """
    if max_order > MAX_ORDER:
        raise OrderUnsupported(f"orders above {MAX_ORDER} are not implemented")
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    model = spec if isinstance(spec, CRModel) else build_model(spec)
    h_int = model.interaction()
    blocks = model.blocks
    block_mask = blocks.mask()

    if scope == "computational":
        dist = _hop_distance(model)
        reach = dist[:, None] + dist[None, :]
        keep = {k: reach <= max_order - k for k in range(0, max_order + 1)}
    else:
        full = np.ones((model.dim, model.dim), dtype=bool)
        keep = {k: full for k in range(0, max_order + 1)}

    gens: dict[int, GradedOperator] = {}
    gen_dots: dict[int, GradedOperator] = {}
    nested: dict[tuple, GradedOperator] = {}

    def ad_chain(chain: tuple[int, ...], base) -> GradedOperator:
        # ad_{G_chain[0]} ad_{G_chain[1]} ... (base)
        key = (chain, base)
        if key not in nested:
            if not chain:
                nested[key] = h_int if base == "H" else gen_dots[base]
            else:
                inner = ad_chain(chain[1:], base)
                nested[key] = gens[chain[0]].commutator(inner)
        return nested[key]

    effective: dict[int, GradedOperator] = {}
    for n in range(1, max_order + 1):
        total = h_int if n == 1 else h_int.like({})
        # i^k/k! ad_G^k(H_I): generator orders sum to n - 1
        for k in range(1, n):
            for chain in _compositions(n - 1, k):
                total = total + ad_chain(chain, "H").scale(1j**k / factorial(k))
        # -i^k/(k+1)! ad_G^k(dG_m/dt) with k >= 1: generator orders plus m sum to n
        for m in range(1, n):
            for k in range(1, n - m + 1):
                for chain in _compositions(n - m, k):
                    total = total - ad_chain(chain, m).scale(1j**k / factorial(k + 1))
        total = total.masked(keep[n])
        effective[n] = total.masked(block_mask)
        if n == max_order:
            break
        off_block = total.masked(~block_mask & keep[n])
        scale = max(off_block.max_abs(), 1.0)
        try:
            gens[n] = off_block.antiderivative(pole_tol, zero_tol=1e-13 * scale)
        except ResonancePole as err:
            raise _label_pole(err, model, n) from None
        gen_dots[n] = gens[n].derivative()

    for n in range(1, max_order + 1):
        effective.setdefault(n, h_int.like({}))
    return EffectiveSeries(model=model, max_order=max_order, effective=effective,
                           generators=gens, scope=scope)


def _compositions(total: int, parts: int):
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def effective_static(spec: DeviceSpec, max_order: int = 4, scope: str = "computational") -> np.ndarray:
    """Static effective Hamiltonian summed through ``max_order``."""
    return run_swpt(spec, max_order, scope).static()


def _bloch(target_amplitudes: np.ndarray) -> np.ndarray:
    a0, a1 = target_amplitudes[..., 0], target_amplitudes[..., 1]
    norm = np.abs(a0) ** 2 + np.abs(a1) ** 2
    rho01 = a0 * np.conj(a1)
    return np.stack([2 * rho01.real, -2 * rho01.imag, np.abs(a0) ** 2 - np.abs(a1) ** 2], axis=-1) / norm[..., None]


def _rotated_z(rate: np.ndarray, times: np.ndarray) -> np.ndarray:
    return Rotation.from_rotvec(np.outer(times, rate)).apply([0.0, 0.0, 1.0])


def _initial_rate(times: np.ndarray, r: np.ndarray) -> np.ndarray:
    # r(t) = c0 + cos(wt) u + sin(wt) v with v = axis x z; w from the spectrum of the z component
    dt = times[1] - times[0]
    spec = np.abs(np.fft.rfft(r[:, 2] - r[:, 2].mean()))
    freqs = 2 * np.pi * np.fft.rfftfreq(times.size, dt)
    w = freqs[1 + np.argmax(spec[1:])]
    basis = np.column_stack([np.ones_like(times), np.cos(w * times), np.sin(w * times)])
    coef, *_ = np.linalg.lstsq(basis, r, rcond=None)
    c0, v = coef[0], coef[2]
    ax, ay = -v[1], v[0]
    az2 = max(1.0 - ax**2 - ay**2, 0.0)
    lateral = ax * c0[0] + ay * c0[1]
    az = np.sqrt(az2) * (1.0 if lateral >= 0 else -1.0)
    return w * np.array([ax, ay, az])


def fit_rotation(times: np.ndarray, r: np.ndarray, max_rms: float = 0.05) -> np.ndarray:
    """Rotation-rate vector a such that r(t) ~ exp(a t) applied to +z."""
    if np.max(np.linalg.norm(r - [0.0, 0.0, 1.0], axis=1)) < 1e-9:
        return np.zeros(3)
    guess = _initial_rate(times, r)
    fit = least_squares(lambda a: (_rotated_z(a, times) - r).ravel(), guess, xtol=1e-12, ftol=1e-12)
    rms = np.sqrt(np.mean(fit.fun**2))
    if rms > max_rms:
        raise FitFailed(f"rotation fit residual {rms:.3g} exceeds {max_rms}")
    return fit.x


@dataclass(frozen=True)
class OracleResult:
    zx: float
    ix: float
    rates: np.ndarray  # fitted rotation vectors for control 0 and 1


def time_domain_oracle(spec: DeviceSpec, duration: float = 100.0, samples: int = 2001,
                       rtol: float = 1e-10, max_rms: float = 0.05) -> OracleResult:
    """Conditional target rotation rates from direct propagation of the driven model.

    Propagates the RWA Hamiltonian in the frame rotating at the drive frequency on
    every qubit (time-independent there) from |c, 0> for c = 0, 1, reads the target
    Bloch vector conditioned on the control level and fits a constant rotation.
    """
    if not spec.rwa:
        raise ValueError("the propagation oracle requires the rotating-wave model")
    if spec.spectator is not None:
        raise ValueError("the propagation oracle is implemented for two qubits")
    model = build_model(spec)
    h = model.rotating_hamiltonian()
    times = np.linspace(0.0, duration, samples)
    n_c, n_t = model.dims
    rates = []
    for c in (0, 1):
        psi0 = np.zeros(model.dim, dtype=complex)
        psi0[np.ravel_multi_index((c, 0), model.dims)] = 1.0
        sol = solve_ivp(lambda t, y: -1j * (h @ y), (0.0, duration), psi0, method="DOP853",
                        t_eval=times, rtol=rtol, atol=rtol * 1e-2)
        if not sol.success:
            raise FitFailed(f"propagation failed: {sol.message}")
        states = sol.y.T.reshape(samples, n_c, n_t)
        r = _bloch(states[:, c, :2])
        rates.append(fit_rotation(times, r, max_rms))
    rates = np.array(rates)
    return OracleResult(zx=float((rates[0, 0] - rates[1, 0]) / 2),
                        ix=float((rates[0, 0] + rates[1, 0]) / 2), rates=rates)


__all__ = ["EffectiveSeries", "run_swpt", "effective_static", "time_domain_oracle", "fit_rotation",
           "interaction_frame", "OracleResult"]
