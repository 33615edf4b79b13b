"""Exact mode numerics for scalar QED: Riccati reflection amplitude,
distribution function, first-order (Born) amplitude, spectra and the
pair number density.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import _kernels as K
from .errors import (DomainTooSmallError, ModeError, PairProductionError, StiffnessError,
                     SupercriticalError, VacuumConditionError)
from .fields import FieldConfig, MomentumPoint, e_field
from .table import SpectrumTable

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12
WINDOW_WIDTHS = 12.0
FIELD_CUTOFF = 1e-10
MAX_STEPS = 50_000_000


@dataclass(frozen=True)
class SolverSettings:
    t_start: float
    t_end: float
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL
    max_step: float = 1.0
    field_cutoff: float = FIELD_CUTOFF

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError(f"t_start={self.t_start} must be < t_end={self.t_end}")
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.max_step > 0):
            raise ValueError("tolerances and max_step must be positive")

    @classmethod
    def for_field(cls, config: FieldConfig, rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL,
                  max_step=None, field_cutoff=FIELD_CUTOFF) -> "SolverSettings":
        """Window = outermost centers -/+ 12 slowest widths, widened until the
        field at both ends is below ``field_cutoff * max amplitude``."""
        if not config.pulses:
            return cls(-1.0, 1.0, rel_tol, abs_tol, max_step or 1.0, field_cutoff)
        centers = [p.center for p in config.pulses]
        width = 1.0 / config.slowest_inverse_width
        t0 = min(centers) - WINDOW_WIDTHS * width
        t1 = max(centers) + WINDOW_WIDTHS * width
        limit = field_cutoff * config.max_amplitude
        while abs(e_field(config, t0)) > limit:
            t0 -= width
        while abs(e_field(config, t1)) > limit:
            t1 += width
        if max_step is None:
            max_step = min(1.0, 0.25 / config.fastest_inverse_width)
        return cls(t0, t1, rel_tol, abs_tol, max_step, field_cutoff)

    def tightened(self, factor: float = 0.5) -> "SolverSettings":
        return replace(self, rel_tol=self.rel_tol * factor, abs_tol=self.abs_tol * factor)

    def check_vacuum(self, config: FieldConfig) -> None:
        limit = self.field_cutoff * config.max_amplitude
        for t in (self.t_start, self.t_end):
            e = abs(e_field(config, t))
            if e > limit:
                raise VacuumConditionError(
                    f"|E({t:g})|={e:.3g} exceeds the vacuum cutoff {limit:.3g}; widen the time window")


@dataclass(frozen=True)
class ReflectionResult:
    R_final: complex
    f: float
    n_steps: int
    max_abs_R: float
    settings_echo: SolverSettings
    theta_final: float = 0.0
    #: |Delta R| / max|R| between this solve and one at halved tolerances, if requested.
    convergence_delta: float | None = None


def resolve_settings(config: FieldConfig, settings: SolverSettings | None) -> SolverSettings:
    if settings is None:
        return SolverSettings.for_field(config)
    return settings


def integrate_mode(kind: int, config: FieldConfig, k: MomentumPoint, s: SolverSettings,
                   t_end: float | None = None, abs_tol: float | None = None):
    """Run one compiled integration and translate failure codes into exceptions."""
    signed, widths, centers = config.kernel_arrays()
    eperp2 = config.mass**2 + k.k_perp**2
    y, n, max_r, status, t_fail, h_fail = K.integrate(
        kind, float(s.t_start), float(s.t_end if t_end is None else t_end), float(k.k_parallel),
        float(eperp2), float(config.charge), signed, widths, centers, float(config.gauge_constant),
        float(s.rel_tol), float(s.abs_tol if abs_tol is None else abs_tol), float(s.max_step), MAX_STEPS)
    if status == K.STATUS_SUPERCRITICAL:
        raise SupercriticalError(t_fail, max_r)
    if status in (K.STATUS_UNDERFLOW, K.STATUS_MAX_STEPS):
        raise StiffnessError(t_fail, h_fail)
    return y, int(n), float(max_r)


def distribution_from_R(R: complex) -> float:
    r2 = abs(R) ** 2
    return r2 / (1.0 - r2)


def solve_mode(config: FieldConfig, k: MomentumPoint, settings: SolverSettings | None = None,
               check_convergence: bool = False) -> ReflectionResult:
    """Integrate the Riccati equation from R=0 in the far past.

    Returns R at ``t_end`` and f = |R|^2 / (1 - |R|^2).  With
    ``check_convergence`` the mode is solved again with halved tolerances and
    the change in R, measured against max|R| along the trajectory, is stored
    in ``convergence_delta``.
    """
    s = resolve_settings(config, settings)
    s.check_vacuum(config)
    if not config.pulses:
        return ReflectionResult(0j, 0.0, 0, 0.0, s)
    y, n, max_r = integrate_mode(K.BOSON, config, k, s)
    R = complex(y[0], y[1])
    delta = None
    if check_convergence:
        y2, _, _ = integrate_mode(K.BOSON, config, k, s.tightened())
        scale = max(max_r, np.finfo(float).tiny)
        delta = abs(complex(y2[0], y2[1]) - R) / scale
    return ReflectionResult(R, distribution_from_R(R), n, max_r, s, float(y[2]), delta)


def born_reflection(config: FieldConfig, k: MomentumPoint, settings: SolverSettings | None = None) -> complex:
    """First-order amplitude: integral of (dOmega/dt / 2 Omega) e^{-2i Theta} dt."""
    s = resolve_settings(config, settings)
    s.check_vacuum(config)
    if not config.pulses:
        return 0j
    y, _, _ = integrate_mode(K.BORN, config, k, s)
    return complex(y[0], y[1])


# ---------------------------------------------------------------------------
# Spectra


def _default_workers() -> int:
    return max(1, os.cpu_count() or 1)


def parallel_map(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    """Ordered map; the compiled kernels release the GIL so threads scale."""
    workers = _default_workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def as_grid(k_grid) -> list[MomentumPoint]:
    pts = [k if isinstance(k, MomentumPoint) else MomentumPoint(float(k)) for k in k_grid]
    if not pts:
        raise ValueError("momentum grid is empty")
    kp = np.array([p.k_parallel for p in pts])
    d = np.diff(kp)
    if kp.size > 1 and not (np.all(d > 0) or np.all(d < 0)):
        raise ValueError("momentum grid must be strictly ordered in k_parallel")
    return pts


def mode_values(fn: Callable[[MomentumPoint], float], pts: list[MomentumPoint], workers=None) -> np.ndarray:
    def wrapped(k):
        try:
            return fn(k)
        except PairProductionError as exc:
            raise ModeError(k, exc) from exc
    return np.array(parallel_map(wrapped, pts, workers), dtype=float)


def spectrum(config: FieldConfig, k_grid, settings: SolverSettings | None = None,
             workers: int | None = None) -> SpectrumTable:
    """Distribution f(k) on a k_parallel-ordered grid via ``solve_mode``."""
    pts = as_grid(k_grid)
    s = resolve_settings(config, settings)
    f = mode_values(lambda k: solve_mode(config, k, s).f, pts, workers)
    return SpectrumTable([p.k_parallel for p in pts], [p.k_perp for p in pts], f, "riccati")


def born_spectrum(config: FieldConfig, k_grid, settings: SolverSettings | None = None,
                  workers: int | None = None) -> SpectrumTable:
    pts = as_grid(k_grid)
    s = resolve_settings(config, settings)
    f = mode_values(lambda k: abs(born_reflection(config, k, s)) ** 2, pts, workers)
    return SpectrumTable([p.k_parallel for p in pts], [p.k_perp for p in pts], f, "born")


# ---------------------------------------------------------------------------
# Number density


@dataclass(frozen=True)
class QuadratureSettings:
    """Trapezoid grids for the density integral.

    k_parallel is uniform on [kpar_min, kpar_max].  k_perp uses the map
    k_perp = kperp_scale * u / (1 - u) on a uniform u grid over [0, 1]; the
    u = 1 node (k_perp = infinity) carries zero weight.  Both point counts
    must be odd so the half-resolution rule (every other node) exists.
    """
    kpar_min: float
    kpar_max: float
    n_kpar: int = 61
    n_kperp: int = 31
    kperp_scale: float = 0.5
    tail_eps: float = 1e-4

    def __post_init__(self):
        if not self.kpar_min < self.kpar_max:
            raise ValueError("kpar_min must be < kpar_max")
        for n in (self.n_kpar, self.n_kperp):
            if n < 5 or n % 2 == 0:
                raise ValueError("grid sizes must be odd and >= 5")

    def kpar_nodes(self) -> np.ndarray:
        return np.linspace(self.kpar_min, self.kpar_max, self.n_kpar)

    def u_nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_kperp)

    def refined(self) -> "QuadratureSettings":
        return replace(self, n_kpar=2 * self.n_kpar - 1, n_kperp=2 * self.n_kperp - 1)

    def to_dict(self) -> dict:
        return {"kpar_min": self.kpar_min, "kpar_max": self.kpar_max, "n_kpar": self.n_kpar,
                "n_kperp": self.n_kperp, "kperp_scale": self.kperp_scale, "tail_eps": self.tail_eps}


@dataclass(frozen=True)
class DensityResult:
    n: float
    error_estimate: float
    quad: QuadratureSettings
    f_grid: np.ndarray = field(repr=False, compare=False)

    def report(self) -> dict:
        return {"n": self.n, "error_estimate": self.error_estimate, "grid": self.quad.to_dict()}


def _trapezoid_density(kpar, u, f, scale, stride=1):
    kpar = kpar[::stride]
    u = u[::stride]
    f = f[::stride, ::stride]
    finite = u < 1.0
    kperp = np.zeros_like(u)
    jac = np.zeros_like(u)
    kperp[finite] = scale * u[finite] / (1.0 - u[finite])
    jac[finite] = scale / (1.0 - u[finite]) ** 2
    integrand = f * (2.0 * np.pi * kperp * jac)[None, :]
    inner = np.trapezoid(integrand, u, axis=1)
    return float(np.trapezoid(inner, kpar)) / (2.0 * np.pi) ** 3


def density_grid(config: FieldConfig, quad: QuadratureSettings, settings: SolverSettings | None = None,
                 workers=None, mode_f: Callable | None = None) -> np.ndarray:
    """f on the (k_parallel, u) quadrature grid; the u = 1 column is zero."""
    s = resolve_settings(config, settings)
    mode_f = mode_f or (lambda k: solve_mode(config, k, s).f)
    kpar = quad.kpar_nodes()
    u = quad.u_nodes()
    pts = [MomentumPoint(float(a), float(quad.kperp_scale * b / (1.0 - b)))
           for a in kpar for b in u[:-1]]
    vals = mode_values(mode_f, pts, workers).reshape(kpar.size, u.size - 1)
    return np.concatenate([vals, np.zeros((kpar.size, 1))], axis=1)


def number_density(config: FieldConfig, quad: QuadratureSettings, settings: SolverSettings | None = None,
                   workers: int | None = None, check_tails: bool = True) -> DensityResult:
    """n = (2 pi)^-3 int dk_par int 2 pi k_perp dk_perp f(k_par, k_perp).

    The error estimate is |I(full) - I(half)| with the half rule using every
    other node in both directions.
    """
    if not config.pulses:
        return DensityResult(0.0, 0.0, quad, np.zeros((quad.n_kpar, quad.n_kperp)))
    f = density_grid(config, quad, settings, workers)
    if check_tails:
        check_tail_coverage(f, quad)
    kpar, u = quad.kpar_nodes(), quad.u_nodes()
    full = _trapezoid_density(kpar, u, f, quad.kperp_scale)
    half = _trapezoid_density(kpar, u, f, quad.kperp_scale, stride=2)
    return DensityResult(full, abs(full - half), quad, f)


def check_tail_coverage(f: np.ndarray, quad: QuadratureSettings) -> None:
    peak = float(np.max(f))
    if peak <= 0:
        return
    bounds = {
        "kpar_min": float(np.max(f[0, :])),
        "kpar_max": float(np.max(f[-1, :])),
        "kperp_max": float(np.max(f[:, -2])),
    }
    bad = {k: v for k, v in bounds.items() if v >= quad.tail_eps * peak}
    if bad:
        raise DomainTooSmallError(
            f"f at the quadrature boundary exceeds {quad.tail_eps:g} x peak ({peak:.3g}): {bad}", bounds)


__all__ = [
    "SolverSettings", "ReflectionResult", "QuadratureSettings", "DensityResult",
    "solve_mode", "born_reflection", "spectrum", "born_spectrum", "number_density",
    "distribution_from_R", "parallel_map", "as_grid", "mode_values", "density_grid",
    "integrate_mode", "resolve_settings", "check_tail_coverage",
]
