"""Command line front end: simulate, verify, scan.

One JSON config drives everything; outputs are CSV and/or JSON files
with bit-reproducible bytes (17-significant-digit floats, '.' decimal,
LF line endings, no wall-clock or ambient randomness anywhere).

Exit codes: 0 success (and, for verify, all checks passed), 2 malformed
config or usage, 3 numeric-domain failure during computation, 4 verify
ran but at least one check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .checks import run_checks
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import ConfigError, FiberphaseError
from .evolution import phase_curve
from .fiber_geometry import (
    Arc,
    Helix,
    Line,
    SampledPath,
    SegmentPath,
    _angles_of,
    trajectory_from_path,
)
from .helicity import helicity_expectation_closed, inversion_scan, zeta

__all__ = ["main", "run"]

SIMULATE_COLUMNS = (
    "t",
    "khat_x",
    "khat_y",
    "khat_z",
    "lambda",
    "gamma",
    "dPhi_dt",
    "Phi",
    "phase_sigma_plus",
    "phase_sigma_minus",
    "vac_phase_plus",
    "vac_phase_minus",
    "zeta",
    "helicity_plus",
    "helicity_minus",
)

_THREADS_ENV = "FIBERPHASE_THREADS"


# ---------------------------------------------------------------------------
# strict config parsing

def _reject_unknown(block: dict, allowed: set[str], where: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _as_number(block: dict, key: str, where: str, default=None, *, minimum=None, exclusive=False):
    if key not in block:
        if default is None:
            raise ConfigError(f"{where}: missing required key {key!r}")
        return default
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{where}: {key} must be a finite number")
    value = float(value)
    if minimum is not None and (value <= minimum if exclusive else value < minimum):
        op = ">" if exclusive else ">="
        raise ConfigError(f"{where}: {key} must be {op} {minimum}")
    return value


def _as_int(block: dict, key: str, where: str, default=None, *, minimum=1) -> int:
    value = _as_number(block, key, where, default, minimum=minimum)
    if int(value) != value:
        raise ConfigError(f"{where}: {key} must be an integer")
    return int(value)


def _parse_path(block, wavenumber: float):
    if not isinstance(block, dict):
        raise ConfigError("path must be an object")
    kind = block.get("kind")
    try:
        if kind == "helix":
            _reject_unknown(block, {"kind", "radius", "pitch", "turns", "omega_convention"}, "path")
            return Helix(
                radius=_as_number(block, "radius", "path"),
                pitch=_as_number(block, "pitch", "path"),
                turns=_as_number(block, "turns", "path", 1.0),
                omega_convention=block.get("omega_convention", "geometric"),
                wavenumber=wavenumber,
            )
        if kind == "samples":
            _reject_unknown(block, {"kind", "points", "closed"}, "path")
            if "points" not in block:
                raise ConfigError("path: missing required key 'points'")
            closed = block.get("closed", False)
            if not isinstance(closed, bool):
                raise ConfigError("path: closed must be a boolean")
            return SampledPath(points=block["points"], closed=closed, wavenumber=wavenumber)
        if kind == "segments":
            _reject_unknown(
                block, {"kind", "start_point", "start_tangent", "pieces"}, "path"
            )
            pieces = block.get("pieces")
            if not isinstance(pieces, list) or not pieces:
                raise ConfigError("path: pieces must be a non-empty list")
            parsed = []
            for i, piece in enumerate(pieces):
                where = f"path.pieces[{i}]"
                if not isinstance(piece, dict):
                    raise ConfigError(f"{where}: must be an object")
                pk = piece.get("kind")
                if pk == "line":
                    _reject_unknown(piece, {"kind", "length"}, where)
                    parsed.append(Line(length=_as_number(piece, "length", where)))
                elif pk == "arc":
                    _reject_unknown(piece, {"kind", "radius", "angle", "axis"}, where)
                    if "axis" not in piece:
                        raise ConfigError(f"{where}: missing required key 'axis'")
                    parsed.append(
                        Arc(
                            radius=_as_number(piece, "radius", where),
                            angle=_as_number(piece, "angle", where),
                            axis=piece["axis"],
                        )
                    )
                else:
                    raise ConfigError(f"{where}: kind must be 'line' or 'arc'")
            return SegmentPath(
                pieces=tuple(parsed),
                start_point=block.get("start_point", (0.0, 0.0, 0.0)),
                start_tangent=block.get("start_tangent", (0.0, 0.0, 1.0)),
                wavenumber=wavenumber,
            )
    except FiberphaseError as exc:
        # construction-time rejection is a config problem, not a runtime one
        raise ConfigError(str(exc)) from exc
    raise ConfigError("path: kind must be 'helix', 'samples', or 'segments'")


def _parse_tolerances(block) -> Tolerances:
    if block is None:
        return DEFAULT_TOLERANCES
    if not isinstance(block, dict):
        raise ConfigError("tolerances must be an object")
    fields = {f.name for f in Tolerances.__dataclass_fields__.values()}
    _reject_unknown(block, fields, "tolerances")
    overrides = {}
    for key, value in block.items():
        overrides[key] = _as_number({key: value}, key, "tolerances", minimum=0.0, exclusive=True)
    return Tolerances(**{**DEFAULT_TOLERANCES.__dict__, **overrides})


def _parse_axis(block, where: str, default_spacing: str) -> np.ndarray:
    if isinstance(block, list):
        block = {"values": block}
    if not isinstance(block, dict):
        raise ConfigError(f"{where}: axis must be an object or a list of values")
    if "values" in block:
        _reject_unknown(block, {"values"}, where)
        values = block["values"]
        if not isinstance(values, list) or not values:
            raise ConfigError(f"{where}: values must be a non-empty list")
        arr = np.array(
            [_as_number({"v": v}, "v", where) for v in values], dtype=float
        )
        return arr
    _reject_unknown(block, {"start", "stop", "count", "spacing"}, where)
    start = _as_number(block, "start", where)
    stop = _as_number(block, "stop", where)
    count = _as_int(block, "count", where, minimum=1)
    spacing = block.get("spacing", default_spacing)
    if spacing == "linear":
        return np.linspace(start, stop, count)
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError(f"{where}: log spacing needs positive start and stop")
        return np.geomspace(start, stop, count)
    raise ConfigError(f"{where}: spacing must be 'linear' or 'log'")


_TOP_KEYS = {
    "path",
    "spin_j",
    "wavenumber_k",
    "n_samples",
    "oracle_steps",
    "align",
    "outputs",
    "tolerances",
    "simulate",
    "scan",
}


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "config")

    cfg: dict = {}
    cfg["wavenumber"] = _as_number(raw, "wavenumber_k", "config", 1.0, minimum=0.0, exclusive=True)
    spin = _as_number(raw, "spin_j", "config", 1.0, minimum=0.0, exclusive=True)
    if round(2 * spin) != 2 * spin:
        raise ConfigError("config: spin_j must be a half-integer")
    cfg["spin_j"] = spin
    cfg["n_samples"] = _as_int(raw, "n_samples", "config", 4096, minimum=16)
    cfg["oracle_steps"] = _as_int(raw, "oracle_steps", "config", 65536, minimum=1)
    align = raw.get("align", "initial_tangent")
    if align not in ("initial_tangent", "none"):
        raise ConfigError("config: align must be 'initial_tangent' or 'none'")
    cfg["align"] = align
    outputs = raw.get("outputs", ["csv"])
    if not isinstance(outputs, list) or not outputs or any(o not in ("csv", "json") for o in outputs):
        raise ConfigError("config: outputs must be a non-empty list drawn from ['csv', 'json']")
    cfg["outputs"] = list(dict.fromkeys(outputs))
    cfg["tolerances"] = _parse_tolerances(raw.get("tolerances"))
    if "path" not in raw:
        raise ConfigError("config: missing required key 'path'")
    cfg["path"] = _parse_path(raw["path"], cfg["wavenumber"])

    sim = raw.get("simulate", {})
    if not isinstance(sim, dict):
        raise ConfigError("simulate block must be an object")
    _reject_unknown(sim, {"n_times"}, "simulate")
    cfg["n_times"] = _as_int(sim, "n_times", "simulate", 129, minimum=2)

    scan = raw.get("scan")
    if scan is not None:
        if not isinstance(scan, dict):
            raise ConfigError("scan block must be an object")
        mode = scan.get("mode", "angle_rate")
        if mode == "angle_rate":
            _reject_unknown(scan, {"mode", "lambda", "gamma_dot_over_k"}, "scan")
            if "lambda" not in scan or "gamma_dot_over_k" not in scan:
                raise ConfigError("scan: angle_rate mode needs 'lambda' and 'gamma_dot_over_k'")
            cfg["scan"] = {
                "mode": mode,
                "lam": _parse_axis(scan["lambda"], "scan.lambda", "linear"),
                "x": _parse_axis(scan["gamma_dot_over_k"], "scan.gamma_dot_over_k", "log"),
            }
        elif mode == "helix_dimensions":
            _reject_unknown(scan, {"mode", "radius", "pitch", "omega_convention"}, "scan")
            if "radius" not in scan or "pitch" not in scan:
                raise ConfigError("scan: helix_dimensions mode needs 'radius' and 'pitch'")
            convention = scan.get("omega_convention", "geometric")
            if convention not in ("geometric", "four_pi"):
                raise ConfigError("scan: omega_convention must be 'geometric' or 'four_pi'")
            cfg["scan"] = {
                "mode": mode,
                "radius": _parse_axis(scan["radius"], "scan.radius", "linear"),
                "pitch": _parse_axis(scan["pitch"], "scan.pitch", "linear"),
                "omega_convention": convention,
            }
        else:
            raise ConfigError("scan: mode must be 'angle_rate' or 'helix_dimensions'")
    return cfg


def _thread_count() -> int:
    raw = os.environ.get(_THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{_THREADS_ENV} must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError(f"{_THREADS_ENV} must be >= 1, got {n}")
    return n


# ---------------------------------------------------------------------------
# deterministic serialization

def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    number = float(value)
    if number == 0.0:
        number = 0.0  # fold -0.0 into one spelling
    return format(number, ".17g")


def _write_csv(path: str, columns, rows) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    with open(path, "wb") as fh:
        fh.write(("\n".join(lines) + "\n").encode("utf-8"))


def _jsonable(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, str):
        return value
    value = float(value)
    return value if math.isfinite(value) else None


def _write_json(path: str, payload: dict) -> None:
    with open(path, "wb") as fh:
        fh.write((json.dumps(payload, indent=2, allow_nan=False) + "\n").encode("utf-8"))


def _emit(out_dir: str, stem: str, formats, columns, rows, extra=None) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for fmt in formats:
        target = os.path.join(out_dir, f"{stem}.{fmt}")
        if fmt == "csv":
            _write_csv(target, columns, rows)
        else:
            payload = {
                "command": stem,
                "columns": list(columns),
                "rows": [[_jsonable(v) for v in row] for row in rows],
            }
            if extra:
                payload.update(extra)
            _write_json(target, payload)
        written.append(target)
    return written


# ---------------------------------------------------------------------------
# subcommands

def cmd_simulate(cfg: dict, out_dir: str, formats) -> int:
    tol = cfg["tolerances"]
    traj = trajectory_from_path(
        cfg["path"], cfg["n_samples"], align=cfg["align"], tolerances=tol
    )
    curve = phase_curve(traj, None, cfg["n_times"], tolerances=tol)
    ts = curve.times
    k = np.atleast_2d(traj.khat_at(ts))
    kd = np.atleast_2d(traj.khat_dot_at(ts))
    lam, gamma = _angles_of(k, kd)
    gamma = np.unwrap(gamma)
    perp2 = k[:, 0] ** 2 + k[:, 1] ** 2
    spin = k[:, 0] * kd[:, 1] - k[:, 1] * kd[:, 0]
    gamma_dot = np.where(perp2 >= 1e-24, spin / np.maximum(perp2, 1e-300), 0.0)

    wavenumber = cfg["wavenumber"]
    x = gamma_dot / wavenumber
    z = zeta(lam, gamma_dot, wavenumber)
    hel_plus = helicity_expectation_closed(lam, x, +1)
    hel_minus = helicity_expectation_closed(lam, x, -1)

    table = np.column_stack(
        [
            ts,
            k[:, 0],
            k[:, 1],
            k[:, 2],
            lam,
            gamma,
            curve.rate,
            curve.phi,
            curve.phi,
            -curve.phi,
            0.5 * curve.phi,
            -0.5 * curve.phi,
            z,
            hel_plus,
            hel_minus,
        ]
    )
    written = _emit(out_dir, "simulate", formats, SIMULATE_COLUMNS, table.tolist())
    for target in written:
        print(f"wrote {target}")
    return 0


def cmd_verify(cfg: dict, out_dir: str, formats) -> int:
    results = run_checks(
        cfg["path"],
        n_samples=cfg["n_samples"],
        oracle_steps=cfg["oracle_steps"],
        align=cfg["align"],
        tolerances=cfg["tolerances"],
    )
    width = max(len(r.name) for r in results)
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {r.residual:>12.5e}  <= {r.bound:<9.3e}  {status}")
    rows = [[r.name, r.residual, r.bound, r.passed, r.detail] for r in results]
    all_passed = all(r.passed for r in results)
    written = _emit(
        out_dir,
        "verify",
        formats,
        ("name", "residual", "bound", "passed", "detail"),
        rows,
        extra={"all_passed": all_passed},
    )
    for target in written:
        print(f"wrote {target}")
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return 0 if all_passed else 4


def _scan_chunks(scan_cfg: dict, wavenumber: float, threads: int):
    if scan_cfg["mode"] == "angle_rate":
        outer, inner = scan_cfg["lam"], scan_cfg["x"]

        def job(block):
            return inversion_scan(lam=block, gamma_dot_over_k=inner)

    else:
        outer, inner = scan_cfg["radius"], scan_cfg["pitch"]
        convention = scan_cfg["omega_convention"]

        def job(block):
            return inversion_scan(
                radius=block,
                pitch=inner,
                wavenumber=wavenumber,
                omega_convention=convention,
            )

    n_chunks = min(threads, len(outer))
    blocks = np.array_split(outer, n_chunks)
    if threads == 1:
        return [job(b) for b in blocks], [len(b) * len(inner) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(job, blocks))
    return parts, [len(b) * len(inner) for b in blocks]


def cmd_scan(cfg: dict, out_dir: str, formats) -> int:
    if "scan" not in cfg:
        raise ConfigError("scan command needs a 'scan' block in the config")
    parts, sizes = _scan_chunks(cfg["scan"], cfg["wavenumber"], _thread_count())
    columns = parts[0].columns
    diag_cols = parts[0].diagnostic_columns
    values = {
        name: np.concatenate([p.values[name] for p in parts])
        for name in columns + diag_cols
    }
    brackets = []
    crossing: dict[float, float] = {}
    offset = 0
    for part, size in zip(parts, sizes):
        brackets.extend((lo + offset, hi + offset) for lo, hi in part.crossing_brackets)
        crossing.update(part.analytic_crossing)
        offset += size

    rows = list(zip(*(values[name] for name in columns)))
    extra = {
        "diagnostics": {
            "columns": list(diag_cols),
            "rows": [
                [_jsonable(v) for v in row]
                for row in zip(*(values[name] for name in diag_cols))
            ],
            "crossing_brackets": [list(b) for b in brackets],
            "analytic_crossing_rate": [
                {"lambda": ang, "gamma_dot_over_k": _jsonable(rate)}
                for ang, rate in sorted(crossing.items())
            ],
        }
    }
    written = _emit(out_dir, "scan", formats, columns, rows, extra=extra)
    for target in written:
        print(f"wrote {target}")
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiberphase",
        description="Polarization phase and helicity of light along a bent fiber.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "time series of direction, phases, and helicity"),
        ("verify", "run the property-check catalog and report pass/fail"),
        ("scan", "closed-form helicity inversion scan over a parameter grid"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory (default: .)")
        p.add_argument(
            "--format",
            choices=("csv", "json"),
            default=None,
            help="override the config's output format list",
        )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _thread_count()  # validate the env contract up front
        cfg = _load_config(args.config)
        formats = [args.format] if args.format else cfg["outputs"]
        if args.command == "simulate":
            return cmd_simulate(cfg, args.out, formats)
        if args.command == "verify":
            return cmd_verify(cfg, args.out, formats)
        return cmd_scan(cfg, args.out, formats)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FiberphaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())
