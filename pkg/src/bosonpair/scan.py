"""Experiment drivers: time-delay sweeps, envelope and fringe analysis,
declarative figure recipes and SVG rendering."""

from __future__ import annotations

import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import fields
from .errors import InsufficientOscillationError, PairProductionError
from .fermion import fermion_spectrum, solve_fermion_mode
from .fields import FieldConfig, MomentumPoint
from .qve import qve_distribution, qve_spectrum
from .riccati import (QuadratureSettings, SolverSettings, as_grid, born_spectrum, mode_values,
                      number_density, parallel_map, solve_mode, spectrum)
from .semiclassical import semiclassical_f
from .table import SpectrumTable

log = logging.getLogger(__name__)

NOISE_FLOOR = 1e-3
METHODS = ("riccati", "born", "semiclassical", "qve", "fermion")
OBSERVABLES = ("spectrum", "density", "f_at_k0")
_VARIABLE_PARAM = {"T": "delay", "N": "n"}


# ---------------------------------------------------------------------------
# Method dispatch


def method_spectrum(config: FieldConfig, k_grid, method: str = "riccati",
                    settings: SolverSettings | None = None, workers=None) -> SpectrumTable:
    """Spectrum with any of the supported methods, tagged accordingly."""
    if method == "riccati":
        return spectrum(config, k_grid, settings, workers)
    if method == "born":
        return born_spectrum(config, k_grid, settings, workers)
    if method == "qve":
        return qve_spectrum(config, k_grid, settings, workers)
    if method == "fermion":
        return fermion_spectrum(config, k_grid, settings, workers)
    if method == "semiclassical":
        pts = as_grid(k_grid)
        f = mode_values(lambda k: semiclassical_f(config, k), pts, workers)
        return SpectrumTable([p.k_parallel for p in pts], [p.k_perp for p in pts], f, "semiclassical")
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def mode_f(config: FieldConfig, k: MomentumPoint, method: str = "riccati",
           settings: SolverSettings | None = None) -> float:
    if method == "riccati":
        return solve_mode(config, k, settings).f
    if method == "fermion":
        return solve_fermion_mode(config, k, settings).f
    if method == "qve":
        return qve_distribution(config, k, settings)
    if method == "semiclassical":
        return semiclassical_f(config, k)
    if method == "born":
        return method_spectrum(config, [k], "born", settings, 1).f[0]
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Sweeps


@dataclass(frozen=True)
class SweepSpec:
    template: str
    params: dict
    variable: str
    values: tuple
    observable: str = "f_at_k0"
    method: str = "riccati"
    k_grid: tuple = ()
    quad: QuadratureSettings | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) if self.variable == "T" else int(v)
                                                 for v in self.values))
        if self.variable not in _VARIABLE_PARAM:
            raise ValueError(f"variable must be one of {sorted(_VARIABLE_PARAM)}")
        if self.observable not in OBSERVABLES:
            raise ValueError(f"observable must be one of {OBSERVABLES}")
        if not self.values:
            raise ValueError("sweep values are empty")
        d = np.diff(np.asarray(self.values, dtype=float))
        if d.size and not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("sweep values must be strictly ordered")
        if self.template not in fields.CONSTRUCTORS:
            raise ValueError(f"unknown template {self.template!r}")
        if self.observable == "spectrum" and not self.k_grid:
            raise ValueError("a spectrum sweep needs k_grid")
        if self.observable == "density" and self.quad is None:
            raise ValueError("a density sweep needs quadrature settings")

    def config_for(self, value) -> FieldConfig:
        params = dict(self.params)
        params[_VARIABLE_PARAM[self.variable]] = value
        return fields.build(self.template, **params)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        data = dict(data)
        if data.get("quad") is not None:
            data["quad"] = QuadratureSettings(**data["quad"])
        if "k_grid" in data:
            data["k_grid"] = tuple(data["k_grid"])
        data["values"] = tuple(data["values"])
        return cls(**data)


@dataclass
class SweepResult:
    variable: str
    values: np.ndarray
    columns: dict
    status: list
    tables: list = field(default_factory=list)
    references: dict = field(default_factory=dict)

    @property
    def failed(self) -> list:
        return [i for i, s in enumerate(self.status) if s != "ok"]

    def to_csv(self, path=None) -> str:
        names = list(self.columns)
        buf = io.StringIO()
        buf.write(",".join([self.variable, *names, "status"]) + "\n")
        for i, v in enumerate(self.values):
            cells = [f"{v:.17g}"] + [f"{self.columns[n][i]:.17g}" for n in names]
            buf.write(",".join(cells + [self.status[i].replace(",", ";")]) + "\n")
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


def _component_configs(config: FieldConfig) -> list[FieldConfig]:
    """Each pulse alone, vacuum-gauged."""
    return [FieldConfig((p,), fields.resolve_gauge((p,), fields.GAUGE_VANISH), f"{config.label}[{i}]",
                        config.charge, config.mass)
            for i, p in enumerate(config.pulses)]


def sweep_delay(spec: SweepSpec, settings: SolverSettings | None = None, workers=None) -> SweepResult:
    """Evaluate ``spec.observable`` for every swept value.

    Rows keep the input order; a failing row is marked and the sweep goes on.
    Density sweeps also report the single-pulse densities and their sum.
    """
    n_rows = len(spec.values)
    status = ["ok"] * n_rows
    columns: dict[str, np.ndarray] = {}
    tables: list = [None] * n_rows
    references: dict = {}

    def settings_for(cfg):
        if settings is None:
            return None
        return SolverSettings.for_field(cfg, settings.rel_tol, settings.abs_tol)

    if spec.observable == "f_at_k0":
        k0 = MomentumPoint(0.0, 0.0)

        def row(v):
            cfg = spec.config_for(v)
            try:
                return mode_f(cfg, k0, spec.method, settings_for(cfg)), "ok"
            except PairProductionError as exc:
                return np.nan, f"failed: {exc}"

        out = parallel_map(row, list(spec.values), workers)
        columns["f"] = np.array([o[0] for o in out], dtype=float)
        status = [o[1] for o in out]

    elif spec.observable == "spectrum":
        for i, v in enumerate(spec.values):
            cfg = spec.config_for(v)
            try:
                tables[i] = method_spectrum(cfg, spec.k_grid, spec.method, settings_for(cfg), workers)
            except PairProductionError as exc:
                status[i] = f"failed: {exc}"
        columns["f_max"] = np.array([np.nan if t is None else float(np.max(t.f)) for t in tables])

    else:
        n = np.full(n_rows, np.nan)
        err = np.full(n_rows, np.nan)
        for i, v in enumerate(spec.values):
            cfg = spec.config_for(v)
            try:
                res = number_density(cfg, spec.quad, settings_for(cfg), workers)
                n[i], err[i] = res.n, res.error_estimate
            except PairProductionError as exc:
                status[i] = f"failed: {exc}"
            log.info("density %s=%s: n=%.6g", spec.variable, v, n[i])
        columns["n"] = n
        columns["error_estimate"] = err
        # single-pulse densities are independent of their relative delay
        parts = _component_configs(spec.config_for(spec.values[0]))
        ref = [number_density(c, spec.quad, settings_for(c), workers).n for c in parts]
        for j, r in enumerate(ref, start=1):
            columns[f"n_pulse{j}"] = np.full(n_rows, r)
            references[f"n_pulse{j}"] = r
        columns["n_sum"] = np.full(n_rows, float(sum(ref)))
        references["n_sum"] = float(sum(ref))

    return SweepResult(spec.variable, np.asarray(spec.values, dtype=float), columns, status,
                       tables if spec.observable == "spectrum" else [], references)


# ---------------------------------------------------------------------------
# Peaks and envelopes


def local_maxima(f: np.ndarray, floor: float = 0.0) -> np.ndarray:
    """Indices of strict interior local maxima with value above ``floor``."""
    f = np.asarray(f, dtype=float)
    if f.size < 3:
        return np.array([], dtype=int)
    inner = (f[1:-1] > f[:-2]) & (f[1:-1] > f[2:]) & (f[1:-1] > floor)
    return np.flatnonzero(inner) + 1


def local_minima(f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.size < 3:
        return np.array([], dtype=int)
    return np.flatnonzero((f[1:-1] < f[:-2]) & (f[1:-1] < f[2:])) + 1


def _windowed(table: SpectrumTable, window) -> SpectrumTable:
    return table if window is None else table.window(*window)


def count_local_maxima(table: SpectrumTable, window=None, noise_floor: float = NOISE_FLOOR) -> int:
    """Strict local maxima above ``noise_floor`` x the global maximum."""
    t = _windowed(table, window)
    if len(t) == 0:
        return 0
    return int(local_maxima(t.f, noise_floor * float(np.max(t.f))).size)


@dataclass(frozen=True)
class EnvelopeReport:
    k_window: tuple
    envelope_max: float
    reference_max: float
    ratio: float
    n_maxima: int = 0


def envelope(table: SpectrumTable, window=None) -> tuple[np.ndarray, np.ndarray]:
    """Upper hull through the strict local maxima: (k, f) of the hull vertices."""
    t = _windowed(table, window)
    idx = local_maxima(t.f)
    k, f = t.k_parallel[idx], t.f[idx]
    # drop maxima lying below the chord of their neighbours (side lobes)
    keep = np.ones(k.size, dtype=bool)
    changed = True
    while changed and keep.sum() > 2:
        changed = False
        ii = np.flatnonzero(keep)
        for a, b, c in zip(ii[:-2], ii[1:-1], ii[2:]):
            chord = f[a] + (f[c] - f[a]) * (k[b] - k[a]) / (k[c] - k[a])
            if f[b] < chord:
                keep[b] = False
                changed = True
                break
    return k[keep], f[keep]


def envelope_ratio(spectrum_multi: SpectrumTable, spectrum_single: SpectrumTable, k_window) -> EnvelopeReport:
    """Ratio of the envelope maximum of an oscillating spectrum to the
    maximum of a reference spectrum inside ``k_window``."""
    multi = spectrum_multi.window(*k_window)
    single = spectrum_single.window(*k_window)
    if len(multi) == 0 or len(single) == 0:
        raise ValueError(f"tables do not cover the window {k_window}")
    n_max = local_maxima(multi.f).size
    if n_max < 3:
        raise InsufficientOscillationError(f"only {n_max} local maxima in {k_window}")
    _, env_f = envelope(multi)
    env_max = float(np.max(env_f))
    ref_idx = local_maxima(single.f)
    ref_max = float(np.max(single.f[ref_idx])) if ref_idx.size else float(np.max(single.f))
    if not ref_max > 0:
        raise ValueError("reference spectrum vanishes in the window")
    return EnvelopeReport(tuple(k_window), env_max, ref_max, env_max / ref_max, int(n_max))


def periodic_peaks(x: np.ndarray, y: np.ndarray, main_fraction: float = 0.5):
    """Split local maxima of y(x) into main peaks (above ``main_fraction`` of
    the global maximum) and side peaks; returns (main_idx, side_counts) where
    side_counts[i] is the number of side peaks between main peaks i and i+1."""
    idx = local_maxima(y, NOISE_FLOOR * float(np.max(y)))
    main = idx[y[idx] >= main_fraction * float(np.max(y))]
    side = idx[y[idx] < main_fraction * float(np.max(y))]
    counts = [int(np.sum((side > a) & (side < b))) for a, b in zip(main[:-1], main[1:])]
    return main, counts


def refine_peak(x: np.ndarray, y: np.ndarray, i: int) -> float:
    """Vertex of the parabola through the three samples around index i."""
    if i <= 0 or i >= len(x) - 1:
        return float(x[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    den = y0 - 2 * y1 + y2
    if den == 0:
        return float(x[i])
    return float(x[i] + 0.5 * (y0 - y2) / den * (x[i + 1] - x[i]))


# ---------------------------------------------------------------------------
# Rendering


def render_plot(tables: Sequence[SpectrumTable], logy: bool = False, title: str | None = None,
                path=None) -> str:
    """Deterministic SVG line plot of f against k_parallel, one series per table."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    tables = list(tables)
    if not tables or any(len(t) == 0 for t in tables):
        raise ValueError("render_plot needs non-empty tables")
    with matplotlib.rc_context({"svg.hashsalt": "bosonpair", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 4))
        styles = ["-", "--", ":", "-."]
        for i, t in enumerate(tables):
            ax.plot(t.k_parallel, t.f, styles[i % len(styles)], lw=1.0, label=t.method)
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(r"$k_\parallel$")
        ax.set_ylabel(r"$f(k_\parallel)$")
        if title:
            ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


# ---------------------------------------------------------------------------
# Recipes


def load_recipe(path) -> dict:
    return json.loads(Path(path).read_text())


def recipe_config(recipe: dict) -> FieldConfig:
    fld = recipe["field"]
    return fields.build(fld["constructor"], **fld.get("params", {}))


def recipe_grid(recipe: dict) -> np.ndarray:
    g = recipe["grid"]
    return np.linspace(g["kpar_min"], g["kpar_max"], int(g["steps"]))


def run_recipe(recipe, workers=None) -> list[SpectrumTable] | SweepResult:
    """Execute a declarative recipe (dict or JSON path)."""
    if not isinstance(recipe, dict):
        recipe = load_recipe(recipe)
    if recipe.get("kind", "spectrum") == "sweep":
        return sweep_delay(SweepSpec.from_dict(recipe["sweep"]), workers=workers)
    cfg = recipe_config(recipe)
    kperp = float(recipe["grid"].get("kperp", 0.0))
    grid = [MomentumPoint(float(k), kperp) for k in recipe_grid(recipe)]
    tol = recipe.get("solver", {})
    settings = SolverSettings.for_field(cfg, **tol) if tol else None
    return [method_spectrum(cfg, grid, m, settings, workers) for m in recipe.get("methods", ["riccati"])]
