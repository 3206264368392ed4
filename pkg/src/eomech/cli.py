"""
Command-line entry point: ``eomech solve | sweep | wigner``.

Exit codes: 0 on success, 2 when the configuration is dynamically unstable
(a report is still written for ``solve``), 1 on any other error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import gaussian as gs
from .config import RunConfig, load_config
from .errors import EomechError
from .steady import QUADRATURE_LABELS, SteadyStateReport, steady_state_report
from .sweep import PRESET_NAMES, SweepResult, default_workers, figure_preset, run_sweep

EXIT_OK, EXIT_ERROR, EXIT_UNSTABLE = 0, 1, 2


def fmt(x, precision: int = 9) -> str:
    """Locale-independent decimal text with ``precision`` significant digits."""
    if x is None:
        return "nan"
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x + 0.0, f".{precision}g")


def _round(x, precision: int):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(format(x, f".{precision}g")) + 0.0


def _params_dict(params, precision):
    return {k: _round(getattr(params, k), precision)
            for k in ("omega_m", "omega_c", "omega_a", "kappa_a", "kappa_c", "gamma_m", "T")}


def report_to_dict(report: SteadyStateReport, precision: int = 9) -> dict:
    ka = report.params.kappa_a
    d = report.drives
    out = {
        "stable": report.stable,
        "max_eig_real": _round(report.max_eig_real, precision),
        "params": _params_dict(report.params, precision),
        "drives": {
            "g_minus": _round(d.g_minus, precision),
            "g_plus": _round(d.g_plus, precision),
            "g_c": _round(d.g_c, precision),
            "g_minus_over_kappa": _round(d.g_minus / ka, precision),
            "g_plus_over_kappa": _round(d.g_plus / ka, precision),
            "g_c_over_kappa": _round(d.g_c / ka, precision),
        },
    }
    for name in SteadyStateReport.OBSERVABLES:
        out[name] = _round(getattr(report, name), precision)
    if report.stable:
        out["squeezing_db"] = {k: _round(v, precision) for k, v in report.squeezing.items()}
        out["covariance"] = [[_round(v, precision) for v in row] for row in report.covariance.entries]
    else:
        out["squeezing_db"] = None
        out["covariance"] = None
    return out


def report_to_csv(report: SteadyStateReport, precision: int = 9) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "value"])
    w.writerow(["stable", fmt(report.stable)])
    w.writerow(["max_eig_real", fmt(report.max_eig_real, precision)])
    for name in SteadyStateReport.OBSERVABLES:
        w.writerow([name, fmt(getattr(report, name), precision)])
    for label in QUADRATURE_LABELS:
        v = report.squeezing[label] if report.stable else None
        w.writerow([f"squeezing_db_{label}", fmt(v, precision)])
    return buf.getvalue()


def sweep_to_csv(result: SweepResult, precision: int = 9) -> str:
    """One row per grid point in row-major order: axes, observables, stable."""
    spec = result.spec
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    obs = [o for o in spec.observables if o != "stable"]
    w.writerow([a.name for a in spec.axes] + obs + ["stable"])
    for index in np.ndindex(*spec.shape):
        row = [fmt(axis.values[i], precision) for axis, i in zip(spec.axes, index)]
        for o in obs:
            cell = result.data[o][index]
            row.append("nan" if cell is np.ma.masked else fmt(cell, precision))
        row.append(fmt(result.stable[index]))
        w.writerow(row)
    return buf.getvalue()


def sweep_to_dict(result: SweepResult, precision: int = 9) -> dict:
    """JSON-ready sweep: masked cells become null. No timestamp, so output is reproducible."""
    spec = result.spec

    def grid(arr):
        filled = np.ma.filled(np.ma.masked_array(arr, dtype=float), np.nan)
        return np.vectorize(lambda v: _round(v, precision), otypes=[object])(filled).tolist()

    return {
        "axes": [{"name": a.name, "values": [_round(v, precision) for v in a.values]} for a in spec.axes],
        "observables": {o: grid(result.data[o]) for o in spec.observables},
        "stable": result.stable.tolist(),
        "metadata": {
            "name": spec.name,
            "code_version": __version__,
            "params": _params_dict(spec.params, precision),
            "drives": {k: v for k, v in vars(spec.drives).items() if v is not None},
        },
    }


def wigner_to_csv(field: gs.WignerField, precision: int = 9) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["X", "Y", "W"])
    for i, y in enumerate(field.y_grid):
        for j, x in enumerate(field.x_grid):
            w.writerow([fmt(x, precision), fmt(y, precision), fmt(field.values[i, j], precision)])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _output_opts(config: RunConfig | None, args):
    fmt_ = args.format or (config.output.format if config else "csv")
    out = args.out or (config.output.path if config else None)
    precision = config.output.precision if config else 9
    return fmt_, out, precision


def cmd_solve(args) -> int:
    config = load_config(args.config)
    report = steady_state_report(config.params(), config.drive_settings().to_config(config.params()))
    fmt_, out, precision = _output_opts(config, args)
    text = _dumps(report_to_dict(report, precision)) if fmt_ == "json" else report_to_csv(report, precision)
    _emit(text, out)
    return EXIT_OK if report.stable else EXIT_UNSTABLE


def cmd_sweep(args) -> int:
    if (args.config is None) == (args.figure is None):
        raise EomechError("give exactly one of --config and --figure")
    config = None
    if args.figure is not None:
        try:
            spec = figure_preset(args.figure, resolution=args.resolution)
        except KeyError:
            raise EomechError(f"unknown figure preset {args.figure!r}; valid presets: {', '.join(PRESET_NAMES)}") from None
    else:
        config = load_config(args.config)
        spec = config.sweep_spec()
    workers = args.threads if args.threads is not None else default_workers()
    result = run_sweep(spec, workers=workers)
    fmt_, out, precision = _output_opts(config, args)
    text = _dumps(sweep_to_dict(result, precision)) if fmt_ == "json" else sweep_to_csv(result, precision)
    _emit(text, out)
    return EXIT_OK


def parse_grid(text: str) -> np.ndarray:
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise EomechError(f"grid must look like min:max:count, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi and count >= 2):
        raise EomechError(f"invalid grid {text!r}: need finite min < max and count >= 2")
    return np.linspace(lo, hi, count)


def cmd_wigner(args) -> int:
    config = load_config(args.config)
    grid = parse_grid(args.grid)
    params = config.params()
    report = steady_state_report(params, config.drive_settings().to_config(params))
    if not report.stable:
        sys.stderr.write(f"unstable configuration (max Re eig = {report.max_eig_real:.6g}); no Wigner function\n")
        return EXIT_UNSTABLE
    mode = {"a": 0, "b": 1, "c": 2}[args.mode]
    field = gs.wigner_single_mode(gs.reduced_cm(report.covariance, [mode]), grid)
    _emit(wigner_to_csv(field, config.output.precision), args.out or config.output.path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eomech", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version=f"eomech {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="steady-state report for one parameter point")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"))
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", help="parameter sweep from a config file or a figure preset")
    s.add_argument("--config")
    s.add_argument("--figure", help=f"one of {', '.join(PRESET_NAMES)}")
    s.add_argument("--resolution", type=int, default=101, help="points per continuous axis of a preset")
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--threads", type=int, help="worker processes (default: $EOMECH_THREADS or 1)")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("wigner", help="Wigner function of one mode on a grid")
    s.add_argument("--config", required=True)
    s.add_argument("--mode", choices=("a", "b", "c"), default="b")
    s.add_argument("--grid", default="-4:4:201", help="min:max:count, write as --grid=-4:4:201")
    s.add_argument("--out")
    s.set_defaults(func=cmd_wigner)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EomechError, OSError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"eomech: error: {msg}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
