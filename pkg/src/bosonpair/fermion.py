"""Spin-1/2 reference spectra for boson/fermion comparisons.

The fermionic amplitude obeys

    dR/dt = q E eps_perp / (2 Omega^2) [e^{-2i Theta} + R^2 e^{2i Theta}],

the unitary (|alpha|^2 + |beta|^2 = 1) counterpart of the bosonic Riccati
equation, so f = |R|^2 / (1 + |R|^2) never exceeds one.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels as K
from .fields import FieldConfig, MomentumPoint
from .riccati import SolverSettings, as_grid, integrate_mode, mode_values, resolve_settings
from .table import SpectrumTable


@dataclass(frozen=True)
class FermionReflectionResult:
    R_final: complex
    f: float
    n_steps: int = 0


def fermion_distribution_from_R(R: complex) -> float:
    r2 = abs(R) ** 2
    return r2 / (1.0 + r2)


def solve_fermion_mode(config: FieldConfig, k: MomentumPoint,
                       settings: SolverSettings | None = None) -> FermionReflectionResult:
    s = resolve_settings(config, settings)
    s.check_vacuum(config)
    if not config.pulses:
        return FermionReflectionResult(0j, 0.0)
    y, n, _ = integrate_mode(K.FERMION, config, k, s)
    R = complex(y[0], y[1])
    return FermionReflectionResult(R, fermion_distribution_from_R(R), n)


def fermion_spectrum(config: FieldConfig, k_grid, settings: SolverSettings | None = None,
                     workers: int | None = None) -> SpectrumTable:
    pts = as_grid(k_grid)
    s = resolve_settings(config, settings)
    f = mode_values(lambda k: solve_fermion_mode(config, k, s).f, pts, workers)
    return SpectrumTable([p.k_parallel for p in pts], [p.k_perp for p in pts], f, "fermion")
