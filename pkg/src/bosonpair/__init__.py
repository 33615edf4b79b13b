"""Vacuum boson pair production in sequences of Sauter pulses.

Mode-by-mode Riccati solver for the reflection amplitude, complex
turning-point semiclassics, a fermionic counterpart, a quantum kinetic
cross-check and sweep/plot drivers.
"""

from .errors import (BranchError, ContourError, DomainTooSmallError, InsufficientOscillationError,
                     ModeError, NoTurningPointError, PairProductionError, PhysicsDomainError, PoleError,
                     StiffnessError, SupercriticalError, VacuumConditionError)
from .fermion import FermionReflectionResult, fermion_spectrum, solve_fermion_mode
from .fields import (GAUGE_FIRST_PULSE, GAUGE_VANISH, FieldConfig, MomentumPoint, PulseSpec, a_potential, e_field,
                     make_alternating_assist, make_equal_sign_assist, make_pulse_train, make_single_pulse,
                     omega_squared)
from .qve import qve_distribution, qve_spectrum
from .riccati import (DensityResult, QuadratureSettings, ReflectionResult, SolverSettings, born_reflection,
                      born_spectrum, number_density, solve_mode, spectrum)
from .scan import EnvelopeReport, SweepSpec, count_local_maxima, envelope_ratio, render_plot, sweep_delay
from .semiclassical import (TurningPoint, approx_spectrum_2pulse, approx_spectrum_general,
                            approx_spectrum_npulse, exact_turning_points_2pulse, find_turning_points,
                            singulant)
from .table import SpectrumTable, read_csv, write_csv

__version__ = "0.1.0"
