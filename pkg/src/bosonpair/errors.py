"""Exception hierarchy.

``PhysicsDomainError`` subclasses signal that the requested computation lies
outside the regime the model describes (exit code 2 on the command line);
everything else is a usage or numerical failure.
"""


class PairProductionError(Exception):
    pass


class PhysicsDomainError(PairProductionError):
    pass


class PoleError(PairProductionError, ValueError):
    """Complex time too close to a sech^2/tanh pole."""

    def __init__(self, t, pole):
        self.t = t
        self.pole = pole
        super().__init__(f"t={t} lies within the exclusion radius of the pole at {pole}")


class SupercriticalError(PhysicsDomainError):
    def __init__(self, t, abs_r):
        self.t = t
        self.abs_r = abs_r
        super().__init__(f"|R|={abs_r:.6g} >= 1 at t={t:.6g}; the subcritical scattering model does not apply")


class StiffnessError(PairProductionError):
    def __init__(self, t, h):
        self.t = t
        self.h = h
        super().__init__(f"step size underflow (h={h:.3g}) at t={t:.9g}")


class VacuumConditionError(PairProductionError, ValueError):
    """The integration window does not start/end in field-free vacuum."""


class NoTurningPointError(PhysicsDomainError):
    pass


class ContourError(PairProductionError):
    pass


class BranchError(PairProductionError, ValueError):
    pass


class DomainTooSmallError(PairProductionError):
    def __init__(self, message, boundary_values=None):
        self.boundary_values = boundary_values or {}
        super().__init__(message)


class InsufficientOscillationError(PairProductionError, ValueError):
    pass


class ModeError(PairProductionError):
    """Wraps a per-mode failure inside a spectrum scan with the offending momentum."""

    def __init__(self, k, cause):
        self.k = k
        self.cause = cause
        super().__init__(f"mode k_parallel={k.k_parallel:.17g}, k_perp={k.k_perp:.17g}: {cause}")
