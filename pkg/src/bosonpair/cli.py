"""Command-line front end.

Exit codes: 0 on success, 1 on usage errors (bad flags, unreadable input,
failed validation), 2 on physics-domain errors such as a supercritical mode
or a field without turning points.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import fields, scan
from .errors import ModeError, PairProductionError, PhysicsDomainError
from .fermion import fermion_spectrum
from .fields import FieldConfig, MomentumPoint
from .qve import qve_distribution
from .riccati import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, QuadratureSettings, SolverSettings, number_density, solve_mode
from .semiclassical import find_turning_points, singulant
from .table import read_csv, write_csv

log = logging.getLogger("bosonpair")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PHYSICS = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# Helpers


def load_config(path) -> FieldConfig:
    """Field from JSON: a serialized FieldConfig (``pulses``), a constructor
    reference (``constructor`` + ``params``) or a recipe (``field``)."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if "field" in data:
        data = data["field"]
    try:
        if "constructor" in data:
            return fields.build(data["constructor"], **data.get("params", {}))
        if "pulses" in data:
            return FieldConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid config {path}: {exc}") from None
    raise UsageError(f"config {path} has neither 'pulses' nor 'constructor'")


def _grid(args) -> list[MomentumPoint]:
    if args.kpar_steps < 1:
        raise UsageError("--kpar-steps must be positive")
    if args.kpar_steps > 1 and not args.kpar_max > args.kpar_min:
        raise UsageError("--kpar-max must exceed --kpar-min")
    ks = np.linspace(args.kpar_min, args.kpar_max, args.kpar_steps)
    return [MomentumPoint(float(k), args.kperp) for k in ks]


def _settings(args, config: FieldConfig) -> SolverSettings:
    try:
        return SolverSettings.for_field(config, args.rel_tol, args.abs_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_spectrum(args) -> int:
    if args.recipe:
        tables = scan.run_recipe(args.recipe, args.workers)
        if isinstance(tables, scan.SweepResult):
            _emit(tables.to_csv(), args.out)
            return EXIT_OK
    else:
        cfg = _require_config(args)
        tables = [scan.method_spectrum(cfg, _grid(args), args.method, _settings(args, cfg), args.workers)]
    _emit(write_csv(tables), args.out)
    return EXIT_OK


def cmd_density(args) -> int:
    cfg = _require_config(args)
    try:
        quad = QuadratureSettings(args.kpar_min, args.kpar_max, args.n_kpar, args.n_kperp, args.kperp_scale)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = number_density(cfg, quad, _settings(args, cfg), args.workers)
    _emit(json.dumps(res.report(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_sweep_delay(args) -> int:
    try:
        data = json.loads(Path(args.spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read sweep spec {args.spec}: {exc}") from None
    data = data.get("sweep", data)
    if args.values:
        data["values"] = [float(v) for v in args.values.split(",")]
    try:
        spec = scan.SweepSpec.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid sweep spec: {exc}") from None
    cfg0 = spec.config_for(spec.values[0])
    res = scan.sweep_delay(spec, _settings(args, cfg0), args.workers)
    _emit(res.to_csv(), args.out)
    return EXIT_OK


def cmd_turning_points(args) -> int:
    cfg = _require_config(args)
    lines = ["k_parallel,re_t,im_t,residual,vartheta"]
    for k in _grid(args):
        for tp in find_turning_points(cfg, k):
            v = singulant(cfg, k, tp)
            lines.append(f"{k.k_parallel:.17g},{tp.t.real:.17g},{tp.t.imag:.17g},{tp.residual:.17g},{v:.17g}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _require_config(args)
    grid = _grid(args)
    s = _settings(args, cfg)
    boson = scan.method_spectrum(cfg, grid, "riccati", s, args.workers)
    fermion = fermion_spectrum(cfg, grid, s, args.workers)
    _emit(write_csv([boson, fermion], interleave=True), args.out)
    return EXIT_OK


def validation_suite(rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL, tolerance=1e-3,
                     n_modes=21, workers=None) -> dict:
    """Riccati against the kinetic solver on a single pulse and the
    alternating two-pulse field."""
    cases = {
        "single_pulse": (fields.make_single_pulse(0.1, 0.05, gauge=0.0), [MomentumPoint(0.0)]),
        "alternating_2pulse": (
            fields.make_pulse_train(2, "alternating", 0.1, 0.05, 180.32, gauge=fields.GAUGE_FIRST_PULSE),
            [MomentumPoint(float(k)) for k in np.linspace(-0.5, 0.5, n_modes)]),
    }
    report = {"tolerance": tolerance, "cases": {}}
    ok_all = True
    for name, (cfg, pts) in cases.items():
        s = SolverSettings.for_field(cfg, rel_tol, abs_tol)

        def pair(k, cfg=cfg, s=s):
            return solve_mode(cfg, k, s).f, qve_distribution(cfg, k, s)

        vals = scan.parallel_map(pair, pts, workers)
        rel = [abs(q - r) / r if r > 0 else abs(q - r) for r, q in vals]
        passed = bool(max(rel) < tolerance)
        ok_all &= passed
        report["cases"][name] = {
            "passed": passed,
            "max_rel_diff": max(rel),
            "modes": [{"k_parallel": k.k_parallel, "f_riccati": r, "f_qve": q, "rel_diff": d}
                      for k, (r, q), d in zip(pts, vals, rel)],
        }
    report["passed"] = ok_all
    return report


def cmd_validate(args) -> int:
    report = validation_suite(args.rel_tol, args.abs_tol, args.tolerance, workers=args.workers)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if report["passed"] else EXIT_USAGE


def cmd_render(args) -> int:
    tables = []
    for path in args.inputs:
        try:
            tables.extend(read_csv(Path(path)))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        svg = scan.render_plot(tables, logy=args.logy, title=args.title)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(svg, args.out)
    return EXIT_OK


def _require_config(args) -> FieldConfig:
    if not args.config:
        raise UsageError("--config is required")
    return load_config(args.config)


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="field JSON file")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--kpar-min", type=float, default=-1.0)
    common.add_argument("--kpar-max", type=float, default=1.0)
    common.add_argument("--kpar-steps", type=int, default=201)
    common.add_argument("--kperp", type=float, default=0.0)
    common.add_argument("--method", choices=scan.METHODS, default="riccati")
    common.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL)
    common.add_argument("--abs-tol", type=float, default=DEFAULT_ABS_TOL)
    common.add_argument("--workers", type=int, default=None, help="thread count for mode fan-out")

    p = _Parser(prog="bosonpair", description="Vacuum pair production in pulsed electric fields.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", parents=[common], help="momentum spectrum f(k) as CSV")
    sp.add_argument("--recipe", help="JSON figure recipe (overrides --config and grid flags)")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("density", parents=[common], help="number density as JSON")
    sp.add_argument("--n-kpar", type=int, default=61)
    sp.add_argument("--n-kperp", type=int, default=31)
    sp.add_argument("--kperp-scale", type=float, default=0.5)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("sweep-delay", parents=[common], help="observable against delay or pulse count")
    sp.add_argument("--spec", required=True, help="sweep JSON (template, params, variable, values, observable)")
    sp.add_argument("--values", help="comma-separated override of the swept values")
    sp.set_defaults(func=cmd_sweep_delay)

    sp = sub.add_parser("turning-points", parents=[common], help="complex turning points per k as CSV")
    sp.set_defaults(func=cmd_turning_points)

    sp = sub.add_parser("compare", parents=[common], help="boson and fermion spectra, interleaved CSV")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("validate", parents=[common], help="Riccati vs kinetic cross-check, JSON report")
    sp.add_argument("--tolerance", type=float, default=1e-3)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("render", parents=[common], help="SVG plot of one or more spectrum CSVs")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("--logy", action="store_true")
    sp.add_argument("--title")
    sp.set_defaults(func=cmd_render)
    return p


def _physics_cause(exc: BaseException) -> bool:
    return isinstance(exc, PhysicsDomainError) or (
        isinstance(exc, ModeError) and isinstance(exc.cause, PhysicsDomainError))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PairProductionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS if _physics_cause(exc) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
