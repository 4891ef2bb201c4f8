"""Frequency-collision catalogue, device scanner and pole labelling.

Every collision condition is an integer linear form in the qubit frequencies
w_q, anharmonicities a_q and the drive frequency w_d that vanishes on resonance.
Forms are stored as ``{("w", q): k, ("a", q): k, ("d",): k}`` with qubit names q.

Type I rules involve the driven qubit and the drive; type II rules a pair of
coupled qubits (m, n); type III rules a chain m - n - l whose ends m and l are
not directly coupled.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Callable

from .errors import ResonancePole
from .model import DeviceSpec, drive_frequency, qubit_order

Form = dict


def _w(q, k=1):
    return {("w", q): k}


def _a(q, k=1):
    return {("a", q): k}


def _d(k=1):
    return {("d",): k}


def _sum(*parts: dict) -> Form:
    out: dict = {}
    for part in parts:
        for key, k in part.items():
            out[key] = out.get(key, 0) + k
    return {key: k for key, k in out.items() if k != 0}


@dataclass(frozen=True)
class CollisionRule:
    label: str
    kind: str  # "I", "II" or "III"
    photons: int
    roles: tuple[str, ...]
    states: str
    build: Callable[..., Form]

    @property
    def severity(self) -> tuple[int, int]:
        """Lower sorts first: nearest-neighbour before next-nearest, then fewer drive photons."""
        return (2 if self.kind == "III" else 1, self.photons)


_RULES = (
    CollisionRule("I_A", "I", 2, ("driven",), "|c0>|n+2> ~ |c2>|n>",
                  lambda c: _sum(_w(c, 2), _a(c), _d(-2))),
    CollisionRule("I_B", "I", 3, ("driven",), "|c0>|n+3> ~ |c3>|n>",
                  lambda c: _sum(_w(c, 3), _a(c, 3), _d(-3))),
    CollisionRule("I_C", "I", 1, ("driven",), "|c1>|n+1> ~ |c2>|n>",
                  lambda c: _sum(_w(c), _a(c), _d(-1))),
    CollisionRule("I_D", "I", 2, ("driven",), "|c1>|n+2> ~ |c3>|n>",
                  lambda c: _sum(_w(c, 2), _a(c, 3), _d(-2))),
    CollisionRule("I_E", "I", 1, ("driven",), "|c2>|n+1> ~ |c3>|n>",
                  lambda c: _sum(_w(c), _a(c, 2), _d(-1))),
    CollisionRule("II_A", "II", 0, ("m", "n"), "m 0-1 ~ n 0-1",
                  lambda m, n: _sum(_w(m), _w(n, -1))),
    CollisionRule("II_B", "II", 0, ("m", "n"), "m 0-1 ~ n 1-2",
                  lambda m, n: _sum(_w(m), _w(n, -1), _a(n, -1))),
    CollisionRule("II_C", "II", 0, ("m", "n"), "m 0-2 ~ n 0-2",
                  lambda m, n: _sum(_w(m, 2), _a(m), _w(n, -2), _a(n, -1))),
    CollisionRule("II_D", "II", 0, ("m", "n"), "m 1-2 ~ n 1-2",
                  lambda m, n: _sum(_w(m), _a(m), _w(n, -1), _a(n, -1))),
    CollisionRule("II_E", "II", 0, ("m", "n"), "m 2-3 ~ n 0-1",
                  lambda m, n: _sum(_w(m), _a(m, 2), _w(n, -1))),
    CollisionRule("III_A", "III", 0, ("m", "n", "l"), "m 0-1 ~ l 0-1",
                  lambda m, n, l: _sum(_w(m), _w(l, -1))),
    CollisionRule("III_B", "III", 0, ("m", "n", "l"), "m 0-1 ~ l 1-2",
                  lambda m, n, l: _sum(_w(m), _w(l, -1), _a(l, -1))),
    CollisionRule("III_C", "III", 0, ("m", "n", "l"), "m 1-2 ~ l 1-2",
                  lambda m, n, l: _sum(_w(m), _a(m), _w(l, -1), _a(l, -1))),
    CollisionRule("III_D", "III", 0, ("m", "n", "l"), "m 0-1 + l 0-1 ~ n 0-2",
                  lambda m, n, l: _sum(_w(m), _w(l), _w(n, -2), _a(n, -1))),
    CollisionRule("III_E", "III", 0, ("m", "n", "l"), "m 0-1 + n 0-1 + l 0-1 ~ n 0-3",
                  lambda m, n, l: _sum(_w(m), _w(l), _w(n, -2), _a(n, -3))),
)


def enumerate_rules() -> list[CollisionRule]:
    return list(_RULES)


def rule(label: str) -> CollisionRule:
    for r in _RULES:
        if r.label == label:
            return r
    raise KeyError(label)


@dataclass(frozen=True)
class CollisionInstance:
    rule: CollisionRule
    qubits: tuple[str, ...]
    form: tuple  # sorted (key, coefficient) pairs

    @property
    def label(self) -> str:
        return self.rule.label

    def as_dict(self) -> Form:
        return dict(self.form)

    def evaluate(self, freqs: dict, alphas: dict, drive: float, betas: dict | None = None) -> float:
        total = 0.0
        for key, k in self.form:
            if key[0] == "w":
                total += k * freqs[key[1]]
            elif key[0] == "a":
                total += k * alphas[key[1]]
            else:
                total += k * drive
        if betas and self.rule.label == "I_B":
            # the 0-3 transition carries the level-3 correction beta
            total += betas.get(self.qubits[0], 0.0)
        return total

    def describe(self) -> str:
        terms = []
        for key, k in self.form:
            name = "w_d" if key[0] == "d" else f"{'w' if key[0] == 'w' else 'alpha'}_{key[1]}"
            terms.append(f"{k:+d}*{name}")
        return " ".join(terms) + " = 0"


def _freeze(form: Form) -> tuple:
    return tuple(sorted(form.items()))


def _negate(form: Form) -> Form:
    return {key: -k for key, k in form.items()}


def coupled_pairs(spec: DeviceSpec) -> list[tuple[str, str]]:
    return [(c.a, c.b) for c in spec.couplings]


def chains(spec: DeviceSpec) -> list[tuple[str, str, str]]:
    """Unordered chains (m, n, l) with m-n and n-l coupled and m, l not coupled."""
    names = [q.name for q in spec.qubits]
    out = []
    for m, n, l in permutations(names, 3):
        if m < l and spec.coupling(m, n) > 0 and spec.coupling(n, l) > 0 and spec.coupling(m, l) == 0:
            out.append((m, n, l))
    return out


def instantiate(spec: DeviceSpec) -> list[CollisionInstance]:
    """All rule instances for the device, deduplicated up to overall sign."""
    seen: set = set()
    out = []

    def add(r: CollisionRule, qubits: tuple[str, ...]):
        form = r.build(*qubits)
        key = (r.label, _freeze(form))
        neg = (r.label, _freeze(_negate(form)))
        if key in seen or neg in seen:
            return
        seen.add(key)
        out.append(CollisionInstance(r, qubits, _freeze(form)))

    driven = spec.control.name
    for r in _RULES:
        if r.kind == "I":
            add(r, (driven,))
        elif r.kind == "II":
            for a, b in coupled_pairs(spec):
                add(r, (a, b))
                add(r, (b, a))
        else:
            for m, n, l in chains(spec):
                add(r, (m, n, l))
                add(r, (l, n, m))
    return out


@dataclass(frozen=True)
class CollisionReport:
    instance: CollisionInstance
    distance_mhz: float
    flagged: bool

    @property
    def label(self) -> str:
        return self.instance.label

    @property
    def severity(self) -> tuple[int, int]:
        return self.instance.rule.severity


def _device_values(spec: DeviceSpec):
    freqs = {q.name: q.params.omega_mhz for q in spec.qubits}
    alphas = {q.name: q.params.alpha_mhz for q in spec.qubits}
    betas = {q.name: q.params.beta_mhz() for q in spec.qubits} if spec.include_beta else None
    return freqs, alphas, betas


def scan_device(spec: DeviceSpec, guard_band_mhz: float = 10.0) -> list[CollisionReport]:
    """Distance of the device from every collision, most severe and closest first."""
    freqs, alphas, betas = _device_values(spec)
    w_d = drive_frequency(spec)
    reports = []
    for inst in instantiate(spec):
        dist = abs(inst.evaluate(freqs, alphas, w_d, betas))
        reports.append(CollisionReport(inst, dist, dist <= guard_band_mhz))
    reports.sort(key=lambda r: (not r.flagged, r.severity, r.distance_mhz))
    return reports


@dataclass(frozen=True)
class ResonanceRow:
    """A collision instance solved for the detuning of one qubit from the target."""

    label: str
    qubits: tuple[str, ...]
    detuning_mhz: float
    condition: str


def resonance_table(spec: DeviceSpec, qubit: str, window: tuple[float, float] | None = None,
                    drive_on_target: bool = True) -> list[ResonanceRow]:
    """Detunings w_qubit - w_target at which each collision involving ``qubit`` is met.

    Other frequencies are held at their spec values; with ``drive_on_target`` the
    drive frequency follows the bare target frequency.
    """
    freqs, alphas, betas = _device_values(spec)
    target = spec.target.name
    if qubit == target:
        raise ValueError("solve for a non-target qubit")
    rows = []
    for inst in instantiate(spec):
        form = inst.as_dict()
        k = form.get(("w", qubit), 0)
        if k == 0:
            continue
        trial = dict(freqs)
        trial[qubit] = freqs[target]
        w_d = freqs[target] if drive_on_target else drive_frequency(spec)
        rest = inst.evaluate(trial, alphas, w_d, betas)
        # rest + k * (w_qubit - w_target) = 0
        detuning = -rest / k
        if window and not window[0] <= detuning <= window[1]:
            continue
        rows.append(ResonanceRow(inst.label, inst.qubits, float(detuning) + 0.0, inst.describe()))  # no -0.0
    rows.sort(key=lambda r: (r.detuning_mhz, r.label))
    return rows


@dataclass(frozen=True)
class Unclassified:
    frequency_mhz: float
    form: tuple | None = None

    label = "Unclassified"


def pole_form(spec: DeviceSpec, row_levels, col_levels, photons: int) -> Form:
    """Integer form of E_row - E_col + photons * w_d on the Kerr ladder."""
    names = [q.name for q in qubit_order(spec)]
    parts = [_d(photons)]
    for name, a, b in zip(names, row_levels, col_levels):
        parts.append(_w(name, a - b))
        parts.append(_a(name, (a * (a - 1) - b * (b - 1)) // 2))
    return _sum(*parts)


def _drive_on_target(form: Form, target: str) -> Form:
    k = form.get(("d",), 0)
    return _sum({key: v for key, v in form.items() if key != ("d",)}, _w(target, k))


def _proportional(a: Form, b: Form) -> bool:
    if set(a) != set(b) or not a:
        return False
    key = next(iter(a))
    ratio = a[key] / b[key]
    return all(abs(a[k] - ratio * b[k]) < 1e-12 for k in a)


def label_form(spec: DeviceSpec, form: Form, frequency: float = 0.0):
    instances = instantiate(spec)
    target = spec.target.name
    exact = [(inst, inst.as_dict()) for inst in instances]
    for inst, f in exact:
        if f == form or f == _negate(form):
            return inst
    shifted = _drive_on_target(form, target)
    for inst, f in exact:
        g = _drive_on_target(f, target)
        if g == shifted or g == _negate(shifted):
            return inst
    for inst, f in exact:
        if _proportional(_drive_on_target(f, target), shifted):
            return inst
    return Unclassified(frequency, _freeze(form))


def label_pole(pole: ResonancePole, spec: DeviceSpec):
    """Collision instance behind an engine pole, or Unclassified."""
    best = None
    for entry in pole.entries:
        if entry.row_levels is None or entry.photons is None:
            continue
        form = pole_form(spec, entry.row_levels, entry.col_levels, entry.photons)
        found = label_form(spec, form, pole.frequency)
        if isinstance(found, CollisionInstance):
            if best is None or found.rule.severity < best.rule.severity:
                best = found
    return best if best is not None else Unclassified(pole.frequency)


def catalogue_text() -> str:
    """Plain-text table of the rule catalogue."""
    lines = [f"{'type':6} {'photons':7} {'roles':10} states"]
    for r in _RULES:
        lines.append(f"{r.label:6} {r.photons:7d} {','.join(r.roles):10} {r.states}")
    return "\n".join(lines)


__all__ = ["CollisionRule", "CollisionInstance", "CollisionReport", "ResonanceRow", "Unclassified",
           "enumerate_rules", "rule", "instantiate", "scan_device", "resonance_table", "label_pole",
           "label_form", "pole_form", "catalogue_text"]
