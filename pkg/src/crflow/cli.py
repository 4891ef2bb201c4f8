"""Command-line front end: device-spec files, sweeps and CSV/JSON output.

Device specs are JSON documents with the sections ``qubits``, ``couplings``,
``drive``, ``crosstalk``, ``options`` and an optional ``units`` block.
Frequencies are in MHz and phases in radians; see the README for the schema.

Exit codes: 0 on success, 1 on error, 2 when more than half of the output
rows are masked by resonance poles.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .collisions import label_pole, resonance_table, scan_device
from .echo import echo_report, echo_unitary
from .errors import CRFlowError, OutOfRange, ResonancePole, SchemaError, UnitError
from .gates import GateParams, classify_region, gate_params, standard_labels
from .model import (FREQUENCY_MODES, ROLES, Coupling, Crosstalk, DeviceSpec, Drive, Qubit,
                    qubit_order, reference_spec)
from .opalg import POLE_TOL
from .saturation import saturation_curve
from .transmon import TransmonParams, epsilon_from_spectrum

COMMANDS = ("params", "sweep", "echo-error", "collisions", "saturation", "spectator", "verify")
SIG_DIGITS = 12
POLE_DOMINATED = 0.5

# ---------------------------------------------------------------- device specs

_FIELDS = {
    "": {"qubits", "couplings", "drive", "crosstalk", "options", "units"},
    "qubits": {"name", "role", "omega_mhz", "alpha_mhz", "cutoff"},
    "couplings": {"a", "b", "j_mhz"},
    "drive": {"amplitude_mhz", "phase_rad", "frequency_mode", "frequency_mhz"},
    "crosstalk": {"a_c", "a_t", "phi_t_rad"},
    "options": {"rwa", "kerr_mode", "include_beta", "include_03"},
    "units": {"frequency", "phase"},
}
_UNIT_SUFFIX = re.compile(r"^(?P<base>.+)_(?P<unit>ghz|khz|hz|mhz|deg|degrees|rad)$")
_CANONICAL_UNIT = {"frequency": "MHz", "phase": "rad"}


def _check_keys(section: str, obj, path: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path or 'document'}: expected an object")
    allowed = _FIELDS[section]
    for key in obj:
        if key in allowed:
            continue
        m = _UNIT_SUFFIX.match(key)
        if m and any(a.startswith(m["base"] + "_") for a in allowed):
            raise UnitError(f"{path}{'.' if path else ''}{key}: use MHz for frequencies and radians for phases")
        raise SchemaError(f"unknown field {path}{'.' if path else ''}{key}")


def _number(obj: dict, key: str, path: str, default=None, required: bool = False) -> float | None:
    if key not in obj or obj[key] is None:
        if required:
            raise SchemaError(f"missing field {path}.{key}")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}.{key}: expected a number")
    return float(value)


def _flag(obj: dict, key: str, path: str, default: bool) -> bool:
    value = obj.get(key, default)
    if not isinstance(value, bool):
        raise SchemaError(f"{path}.{key}: expected true or false")
    return value


def spec_from_dict(doc: dict) -> DeviceSpec:
    """Validate a parsed device-spec document and build the DeviceSpec."""
    _check_keys("", doc, "")
    units = doc.get("units", {})
    _check_keys("units", units, "units")
    for kind, unit in units.items():
        if str(unit).lower() != _CANONICAL_UNIT[kind].lower():
            raise UnitError(f"units.{kind}: expected {_CANONICAL_UNIT[kind]}, got {unit!r}")

    raw_qubits = doc.get("qubits")
    if not isinstance(raw_qubits, list) or not raw_qubits:
        raise SchemaError("qubits: expected a non-empty list")
    qubits = []
    for k, q in enumerate(raw_qubits):
        path = f"qubits[{k}]"
        _check_keys("qubits", q, path)
        if q.get("role") not in ROLES:
            raise SchemaError(f"{path}.role: expected one of {ROLES}")
        if not isinstance(q.get("name"), str) or not q["name"]:
            raise SchemaError(f"{path}.name: expected a non-empty string")
        cutoff = q.get("cutoff", 4)
        if isinstance(cutoff, bool) or not isinstance(cutoff, int):
            raise SchemaError(f"{path}.cutoff: expected an integer")
        try:
            params = TransmonParams.from_frequencies(_number(q, "omega_mhz", path, required=True),
                                                     _number(q, "alpha_mhz", path, required=True), cutoff)
        except (CRFlowError, ValueError) as exc:
            raise SchemaError(f"{path}: {exc}") from None
        qubits.append(Qubit(q["name"], q["role"], params))

    raw_couplings = doc.get("couplings")
    if not isinstance(raw_couplings, list) or not raw_couplings:
        raise SchemaError("couplings: expected a non-empty list")
    couplings = []
    for k, c in enumerate(raw_couplings):
        path = f"couplings[{k}]"
        _check_keys("couplings", c, path)
        try:
            couplings.append(Coupling(str(c.get("a")), str(c.get("b")), _number(c, "j_mhz", path, required=True)))
        except ValueError as exc:
            raise SchemaError(f"{path}: {exc}") from None

    d = doc.get("drive", {})
    _check_keys("drive", d, "drive")
    mode = d.get("frequency_mode", "dressed_target")
    if mode not in FREQUENCY_MODES:
        raise SchemaError(f"drive.frequency_mode: expected one of {FREQUENCY_MODES}")
    try:
        drive = Drive(_number(d, "amplitude_mhz", "drive", 0.0), _number(d, "phase_rad", "drive", np.pi),
                      mode, _number(d, "frequency_mhz", "drive"))
    except ValueError as exc:
        raise SchemaError(f"drive: {exc}") from None

    crosstalk = None
    if "crosstalk" in doc:
        x = doc["crosstalk"]
        _check_keys("crosstalk", x, "crosstalk")
        try:
            crosstalk = Crosstalk(_number(x, "a_c", "crosstalk", 0.0), _number(x, "a_t", "crosstalk", 0.0),
                                  _number(x, "phi_t_rad", "crosstalk", 0.0))
        except ValueError as exc:
            raise SchemaError(f"crosstalk: {exc}") from None

    o = doc.get("options", {})
    _check_keys("options", o, "options")
    try:
        return DeviceSpec(qubits=tuple(qubits), couplings=tuple(couplings), drive=drive, crosstalk=crosstalk,
                          rwa=_flag(o, "rwa", "options", True), kerr_mode=_flag(o, "kerr_mode", "options", False),
                          include_beta=_flag(o, "include_beta", "options", False),
                          include_03=_flag(o, "include_03", "options", False))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def spec_to_dict(spec: DeviceSpec) -> dict:
    doc = {
        "qubits": [{"name": q.name, "role": q.role, "omega_mhz": q.params.omega_mhz,
                    "alpha_mhz": q.params.alpha_mhz, "cutoff": q.params.cutoff} for q in spec.qubits],
        "couplings": [{"a": c.a, "b": c.b, "j_mhz": c.j_mhz} for c in spec.couplings],
        "drive": {"amplitude_mhz": spec.drive.amplitude_mhz, "phase_rad": spec.drive.phase,
                  "frequency_mode": spec.drive.mode, "frequency_mhz": spec.drive.frequency_mhz},
        "options": {"rwa": spec.rwa, "kerr_mode": spec.kerr_mode, "include_beta": spec.include_beta,
                    "include_03": spec.include_03},
    }
    if spec.crosstalk is not None:
        x = spec.crosstalk
        doc["crosstalk"] = {"a_c": x.a_c, "a_t": x.a_t, "phi_t_rad": x.phi_t}
    return doc


def parse_device_spec(path) -> DeviceSpec:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"device spec {path} does not exist")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    return spec_from_dict(doc)


def fixture_path(name: str = "reference.json") -> Path:
    return Path(str(resources.files("crflow") / "data" / name))


def spec_hash(spec: DeviceSpec) -> str:
    return hashlib.sha256(json.dumps(spec_to_dict(spec), sort_keys=True).encode()).hexdigest()


# ---------------------------------------------------------------- sweeps

@dataclass(frozen=True)
class SweepAxis:
    variable: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise SchemaError(f"unknown sweep variable {self.variable!r}; expected one of {sorted(SWEEP_VARIABLES)}")
        if not self.step > 0:
            raise SchemaError("sweep step must be positive")
        if self.stop < self.start:
            raise SchemaError("sweep stop must not be below start")

    @classmethod
    def parse(cls, text: str) -> "SweepAxis":
        parts = text.split(":")
        if len(parts) != 4:
            raise SchemaError("sweep must read VAR:MIN:MAX:STEP")
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), float(parts[3]))
        except ValueError:
            raise SchemaError(f"bad sweep bounds in {text!r}") from None

    def values(self) -> np.ndarray:
        count = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        # rounding keeps grid points such as 165 exact instead of 164.99999999999997
        return np.round(self.start + self.step * np.arange(count), 9)


def _with_role_frequency(role: str, offset_from_target: bool = False):
    def apply(spec: DeviceSpec, value: float) -> DeviceSpec:
        if spec.by_role(role) is None:
            raise SchemaError(f"sweep needs a {role} qubit in the device spec")
        omega = spec.target.params.omega_mhz + value if offset_from_target else value
        return spec.with_qubit(role, omega_mhz=omega)
    return apply


def _with_alpha(role: str):
    def apply(spec: DeviceSpec, value: float) -> DeviceSpec:
        if spec.by_role(role) is None:
            raise SchemaError(f"sweep needs a {role} qubit in the device spec")
        return spec.with_qubit(role, alpha_mhz=value)
    return apply


SWEEP_VARIABLES = {
    "delta_ct": _with_role_frequency("control", True),
    "delta_st": _with_role_frequency("spectator", True),
    "omega_c": _with_role_frequency("control"),
    "omega_t": lambda s, v: s.with_qubit("target", omega_mhz=v),
    "omega_s": _with_role_frequency("spectator"),
    "alpha_c": _with_alpha("control"),
    "alpha_t": _with_alpha("target"),
    "alpha_s": _with_alpha("spectator"),
    "amplitude": lambda s, v: s.with_drive(amplitude_mhz=v),
    "phase": lambda s, v: s.with_drive(phase=v),
    "j": lambda s, v: s.with_coupling_strength(v),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec_path: str | None = None
    sweep: SweepAxis | None = None
    order: int = 2
    basis: str | None = None
    fmt: str = "csv"
    out: str | None = None
    guard_band: float = 1.0
    pole_tol: float = POLE_TOL
    zz_convention: str = "half"
    include_beta: bool = False
    no_rwa: bool = False
    kerr_mode: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SchemaError(f"unknown command {self.command!r}")
        if self.order not in (2, 3, 4):
            raise SchemaError("order must be 2, 3 or 4")
        if self.guard_band < 0:
            raise SchemaError("guard band must be non-negative")


def load_spec(config: RunConfig) -> DeviceSpec:
    spec = parse_device_spec(config.spec_path or fixture_path())
    changes = {}
    if config.include_beta:
        changes["include_beta"] = True
    if config.no_rwa:
        changes["rwa"] = False
    if config.kerr_mode or config.basis == "kerr":
        changes["kerr_mode"] = True
    if config.basis == "energy" and not config.kerr_mode:
        changes["kerr_mode"] = False
    return replace(spec, **changes) if changes else spec


def _region(spec: DeviceSpec) -> str:
    c, t = spec.control.params, spec.target.params
    try:
        label = classify_region(spec.delta_ct, c.alpha_mhz, t.alpha_mhz)
    except (OutOfRange, ValueError):
        return "out"
    return label.region or f"pole:{label.pole}"


def _zz_scale(convention: str) -> float:
    # half: coefficient of ZZ/2; full: ZZ frequency shift E11 - E10 - E01 + E00
    return 2.0 if convention == "full" else 1.0


def rate_columns(spec: DeviceSpec) -> list[str]:
    order = qubit_order(spec)
    if len(order) == 2:
        return ["IX", "IY", "IZ", "ZI", "ZX", "ZY", "ZZ"]
    return standard_labels(len(order), [q.role for q in order].index("target"))


def _rates_row(params: GateParams, labels: list[str], zz_scale: float) -> dict:
    row = {}
    for lab in labels:
        value = params.rate(lab)
        if lab.count("Z") == 2 and set(lab) <= {"Z", "I"}:
            value *= zz_scale
        row[lab] = value
    return row


def _guard(spec: DeviceSpec, guard_band: float) -> str | None:
    flagged = [r for r in scan_device(spec, guard_band) if r.flagged]
    return f"pole:{flagged[0].label}" if flagged else None


def evaluate_point(command: str, spec: DeviceSpec, config: RunConfig) -> dict:
    """One output row (without the axis column); parallel-safe."""
    labels = rate_columns(spec)
    row: dict = {"region": _region(spec)}
    masked = _guard(spec, config.guard_band) if config.guard_band > 0 else None
    if masked:
        row["status"] = masked
        return row
    try:
        params = gate_params(spec, config.order, pole_tol=config.pole_tol)
        if command == "echo-error":
            report = echo_report(params)
            row.update(ZX=params.zx, IX=params.ix, IZ=params.iz, ZZ=params.zz * _zz_scale(config.zz_convention),
                       tau_p=report.result.tau_p, error=report.error, nonlocal_error=report.nonlocal_error,
                       echo_ZX=report.rates.zx, echo_IY=report.rates.iy, echo_IZ=report.rates.iz)
        else:
            row.update(_rates_row(params, labels, _zz_scale(config.zz_convention)))
        row["status"] = "ok"
    except ResonancePole as pole:
        row["status"] = f"pole:{label_pole(pole, spec).label}"
    except CRFlowError as exc:
        row["status"] = f"error:{type(exc).__name__}"
    return row


def _columns(command: str, spec: DeviceSpec, axis: str | None) -> list[str]:
    head = [axis] if axis else []
    if command == "echo-error":
        body = ["ZX", "IX", "IZ", "ZZ", "tau_p", "error", "nonlocal_error", "echo_ZX", "echo_IY", "echo_IZ"]
    elif command == "saturation":
        body = ["ZX", "IX", "ZY", "IY", "a0_re", "a0_im", "a1_re", "a1_im"]
    elif command == "collisions":
        return ["label", "qubits", "detuning_mhz", "distance_mhz", "flagged", "condition"]
    else:
        body = rate_columns(spec)
    return head + body + ["region", "status"]


def _worker_count(config: RunConfig) -> int:
    env = os.environ.get("CRFLOW_THREADS")
    if env:
        try:
            return max(int(env), 1)
        except ValueError:
            raise SchemaError("CRFLOW_THREADS must be an integer") from None
    return max(config.threads, 1)


def _sweep_rows(command: str, spec: DeviceSpec, config: RunConfig, axis: SweepAxis) -> list[dict]:
    apply = SWEEP_VARIABLES[axis.variable]
    values = axis.values()
    specs = []
    for v in values:
        try:
            specs.append(apply(spec, float(v)))
        except (CRFlowError, ValueError) as exc:
            specs.append(exc)
    workers = _worker_count(config)

    def job(s):
        if isinstance(s, Exception):
            return {"region": "out", "status": f"error:{type(s).__name__}"}
        return evaluate_point(command, s, config)

    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            futures = [None if isinstance(s, Exception) else pool.submit(evaluate_point, command, s, config)
                       for s in specs]
            results = [job(s) if f is None else f.result() for s, f in zip(specs, futures)]
    else:
        results = [job(s) for s in specs]
    return [{axis.variable: float(v), **r} for v, r in zip(values, results)]


def _saturation_rows(spec: DeviceSpec, axis: SweepAxis | None) -> list[dict]:
    grid = axis.values() if axis else np.arange(0.0, 501.0, 10.0)
    curve = saturation_curve(spec, grid)
    region = curve.region_name or "out"
    rows = []
    for k, omega in enumerate(curve.omega_mhz):
        rows.append({"amplitude": float(omega), "ZX": float(curve.zx[k]), "IX": float(curve.ix[k]),
                     "ZY": float(curve.zy[k]), "IY": float(curve.iy[k]),
                     "a0_re": float(curve.a0[k].real), "a0_im": float(curve.a0[k].imag),
                     "a1_re": float(curve.a1[k].real), "a1_im": float(curve.a1[k].imag),
                     "region": region, "status": "label-crossing" if curve.flagged[k] else "ok"})
    return rows


def _collision_rows(spec: DeviceSpec, guard_band: float) -> list[dict]:
    if spec.spectator is not None:
        qubit, window = spec.spectator.name, None
    else:
        # the detuning range spanned by the five operating regions
        a_c, a_t = spec.control.params.alpha_mhz, spec.target.params.alpha_mhz
        qubit, window = spec.control.name, (a_t, -2 * a_c)
    actual = {q.name: q.params.omega_mhz - spec.target.params.omega_mhz for q in spec.qubits}[qubit]
    rows = []
    for r in resonance_table(spec, qubit, window):
        distance = abs(r.detuning_mhz - actual)
        rows.append({"label": r.label, "qubits": "-".join(r.qubits), "detuning_mhz": r.detuning_mhz,
                     "distance_mhz": distance, "flagged": distance <= guard_band, "condition": r.condition})
    return rows


# ---------------------------------------------------------------- output

def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{SIG_DIGITS}g}"
    return str(value)


def to_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format(row.get(c)) for c in columns])
    return buf.getvalue()


def to_json(columns: list[str], rows: list[dict], metadata: dict) -> str:
    body = {"metadata": metadata, "columns": columns,
            "rows": [{c: row.get(c) for c in columns} for row in rows]}
    return json.dumps(body, indent=1, allow_nan=True) + "\n"


def _masked_fraction(rows: list[dict]) -> float:
    if not rows:
        return 0.0
    return sum(str(r.get("status", "")).startswith("pole:") for r in rows) / len(rows)


def _params_table(spec: DeviceSpec, config: RunConfig) -> tuple[list[str], list[dict], str]:
    bases = [config.basis] if config.basis else ["energy", "kerr"]
    labels = rate_columns(spec)
    rows, text_cols = [], {}
    for basis in bases:
        s = replace(spec, kerr_mode=(basis == "kerr") or config.kerr_mode)
        row = {"basis": basis, **evaluate_point("params", s, config)}
        rows.append(row)
        text_cols[basis] = row
    zz_name = "ZZ" if config.zz_convention == "half" else "ZZ(full)"
    lines = [f"{'rate (MHz)':12}" + "".join(f"{b:>20}" for b in bases)]
    for lab in labels:
        name = zz_name if lab == "ZZ" else lab
        lines.append(f"{name:12}" + "".join(f"{_format(text_cols[b].get(lab)):>20}" for b in bases))
    lines.append(f"{'status':12}" + "".join(f"{text_cols[b]['status']:>20}" for b in bases))
    return ["basis"] + labels + ["region", "status"], rows, "\n".join(lines) + "\n"


def run(config: RunConfig, stdout=None) -> int:
    """Execute one command; returns the process exit code."""
    stdout = stdout or sys.stdout
    if config.command == "verify":
        return _verify(stdout)
    spec = load_spec(config)
    axis_name = config.sweep.variable if config.sweep else None
    text = None
    if config.command == "params":
        if config.sweep:
            raise SchemaError("params takes no sweep; use the sweep command")
        columns, rows, text = _params_table(spec, config)
    elif config.command in ("sweep", "echo-error", "spectator"):
        if config.command == "spectator" and spec.spectator is None:
            raise SchemaError("spectator needs a device spec with a spectator qubit")
        axis = config.sweep
        if axis is None:
            if config.command == "spectator":
                axis = SweepAxis("delta_st", -1100.0, 1100.0, 10.0)
            elif config.command == "sweep":
                raise SchemaError("sweep needs --sweep VAR:MIN:MAX:STEP")
        columns = _columns(config.command, spec, axis.variable if axis else None)
        if axis is None:
            rows = [evaluate_point(config.command, spec, config)]
        else:
            rows = _sweep_rows(config.command, spec, config, axis)
    elif config.command == "saturation":
        if config.sweep and config.sweep.variable != "amplitude":
            raise SchemaError("saturation sweeps the drive amplitude only")
        columns, rows = _columns("saturation", spec, "amplitude"), _saturation_rows(spec, config.sweep)
    else:
        columns, rows = _columns("collisions", spec, None), _collision_rows(spec, config.guard_band)

    metadata = {"command": config.command, "spec_hash": spec_hash(spec), "order": config.order,
                "basis": config.basis or ("energy+kerr" if config.command == "params" else "kerr" if spec.kerr_mode else "energy"),
                "zz_convention": config.zz_convention, "tool_version": __version__,
                "sweep": None if not config.sweep else [config.sweep.variable, config.sweep.start,
                                                        config.sweep.stop, config.sweep.step]}
    payload = to_json(columns, rows, metadata) if config.fmt == "json" else to_csv(columns, rows)
    if config.out:
        Path(config.out).write_text(payload)
        if text:
            stdout.write(text)
    else:
        stdout.write(text if text and config.fmt == "csv" and config.command == "params" else payload)
    return 2 if _masked_fraction(rows) > POLE_DOMINATED else 0


# ---------------------------------------------------------------- verify

def _verify(stdout) -> int:
    checks = []
    reference_rates = {"energy": (1.250, -14.371, -2.118, 0.114), "kerr": (1.462, -15.865, -2.411, 0.138)}
    for basis, expected in reference_rates.items():
        p = gate_params(reference_spec(kerr_mode=basis == "kerr"), 2)
        got = (p.ix, p.zi, p.zx, p.zz)
        checks.append((f"reference rates ({basis})", all(abs(g - e) <= 0.002 for g, e in zip(got, expected))))
    eps = (epsilon_from_spectrum(5114, -330)[0], epsilon_from_spectrum(4914, -330)[0])
    checks.append(("epsilon recovery", abs(eps[0] - 0.217) <= 1e-3 and abs(eps[1] - 0.224) <= 1e-3))
    poles = {round(r.detuning_mhz, 9) for r in resonance_table(reference_spec(), "c", (-330.0, 660.0))}
    checks.append(("two-qubit collision detunings", poles == {-330.0, 0.0, 165.0, 330.0, 495.0, 660.0}))
    try:
        echo_unitary(GateParams.two_qubit(ix=0.3, iz=0.05, zi=-1.0, zx=-2.0, zz=0.1))
        checks.append(("echo closed form", True))
    except CRFlowError:
        checks.append(("echo closed form", False))
    for name, ok in checks:
        stdout.write(f"{'PASS' if ok else 'FAIL'}  {name}\n")
    return 0 if all(ok for _, ok in checks) else 1


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crflow", description="Cross-resonance gate parameters and sweeps.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--spec", help="device spec JSON (default: the shipped reference device)")
    parser.add_argument("--order", type=int, choices=(2, 3, 4), default=2)
    parser.add_argument("--basis", choices=("energy", "kerr"))
    parser.add_argument("--sweep", help="VAR:MIN:MAX:STEP with VAR in " + ", ".join(sorted(SWEEP_VARIABLES)))
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    parser.add_argument("--guard-band", type=float, default=1.0, help="collision guard band in MHz")
    parser.add_argument("--pole-tol", type=float, default=POLE_TOL, help="resonance tolerance in MHz")
    parser.add_argument("--include-beta", action="store_true")
    parser.add_argument("--no-rwa", action="store_true")
    parser.add_argument("--kerr-mode", action="store_true")
    parser.add_argument("--zz-convention", choices=("half", "full"), default="half",
                        help="half: coefficient of ZZ/2; full: E11 - E10 - E01 + E00")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(command=args.command, spec_path=args.spec,
                           sweep=SweepAxis.parse(args.sweep) if args.sweep else None, order=args.order,
                           basis=args.basis, fmt=args.fmt, out=args.out, guard_band=args.guard_band,
                           pole_tol=args.pole_tol, zz_convention=args.zz_convention,
                           include_beta=args.include_beta, no_rwa=args.no_rwa, kerr_mode=args.kerr_mode)
        return run(config)
    except (CRFlowError, OSError, ValueError) as exc:
        print(f"crflow: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
