"""Signed sums of Sauter pulses: electric field, vector potential and the
kinematic frequency of a charged scalar mode.

Units are natural (hbar = c = 1) with charge and mass stored on the config
(both default to 1).  A configuration describes

    E(t) = sum_i s_i E_i sech^2[w_i (t - c_i)]
    A(t) = g - sum_i s_i (E_i / w_i) tanh[w_i (t - c_i)]

so that E = -dA/dt.  All evaluators accept real or complex scalars or arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .errors import PoleError

#: Minimum distance (in time units) a complex argument must keep from a pole.
POLE_EXCLUSION = 1e-3

GaugeSpec = Union[float, str]
GAUGE_VANISH = "vanish_at_minus_infinity"
GAUGE_FIRST_PULSE = "first_pulse"


@dataclass(frozen=True)
class PulseSpec:
    amplitude: float
    inverse_width: float
    center: float = 0.0
    sign: int = 1

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if not self.inverse_width > 0:
            raise ValueError(f"inverse_width must be positive, got {self.inverse_width}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class MomentumPoint:
    k_parallel: float
    k_perp: float = 0.0

    def __post_init__(self):
        if self.k_perp < 0:
            raise ValueError(f"k_perp must be >= 0, got {self.k_perp}")


@dataclass(frozen=True)
class FieldConfig:
    pulses: tuple[PulseSpec, ...] = ()
    gauge_constant: float = 0.0
    label: str = ""
    charge: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))

    # -- derived quantities -------------------------------------------------
    @property
    def max_amplitude(self) -> float:
        return max((p.amplitude for p in self.pulses), default=0.0)

    @property
    def slowest_inverse_width(self) -> float:
        return min(p.inverse_width for p in self.pulses)

    @property
    def fastest_inverse_width(self) -> float:
        return max(p.inverse_width for p in self.pulses)

    def potential_limits(self) -> tuple[float, float]:
        """A(-inf) and A(+inf)."""
        step = sum(p.sign * p.amplitude / p.inverse_width for p in self.pulses)
        return self.gauge_constant + step, self.gauge_constant - step

    def with_gauge(self, gauge: GaugeSpec) -> "FieldConfig":
        return replace(self, gauge_constant=resolve_gauge(self.pulses, gauge))

    def shifted_gauge(self, c: float) -> "FieldConfig":
        return replace(self, gauge_constant=self.gauge_constant + c)

    def kernel_arrays(self):
        """Flat float arrays consumed by the compiled integrators."""
        signed = np.array([p.sign * p.amplitude for p in self.pulses], dtype=float)
        widths = np.array([p.inverse_width for p in self.pulses], dtype=float)
        centers = np.array([p.center for p in self.pulses], dtype=float)
        return signed, widths, centers

    # -- serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "gauge_constant": self.gauge_constant,
            "pulses": [
                {"amplitude": p.amplitude, "inverse_width": p.inverse_width,
                 "center": p.center, "sign": p.sign}
                for p in self.pulses
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FieldConfig":
        pulses = tuple(
            PulseSpec(float(p["amplitude"]), float(p["inverse_width"]),
                      float(p.get("center", 0.0)), int(p.get("sign", 1)))
            for p in data.get("pulses", [])
        )
        gauge = data.get("gauge_constant", GAUGE_VANISH)
        return cls(pulses, resolve_gauge(pulses, gauge), str(data.get("label", "")))

    def to_json(self, path=None, **kwargs) -> str:
        text = json.dumps(self.to_dict(), indent=2, **kwargs)
        if path is not None:
            Path(path).write_text(text + "\n")
        return text

    @classmethod
    def from_json(cls, source) -> "FieldConfig":
        """Load from a JSON string or a path to a JSON file."""
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            source = Path(source).read_text()
        return cls.from_dict(json.loads(source))


def resolve_gauge(pulses: Sequence[PulseSpec], gauge: GaugeSpec) -> float:
    """Turn a gauge token or number into the additive constant of A(t)."""
    if isinstance(gauge, str):
        if gauge == GAUGE_VANISH:
            return -float(sum(p.sign * p.amplitude / p.inverse_width for p in pulses))
        if gauge == GAUGE_FIRST_PULSE:
            if not pulses:
                return 0.0
            return pulses[0].amplitude / pulses[0].inverse_width
        raise ValueError(f"unknown gauge token {gauge!r}")
    return float(gauge)


# ---------------------------------------------------------------------------
# Evaluators


def _check_poles(config: FieldConfig, t) -> None:
    if not np.iscomplexobj(t):
        return
    t = np.asarray(t)
    for p in config.pulses:
        x = p.inverse_width * (t - p.center)
        # sech/tanh poles at x = i*pi*(n + 1/2)
        n = np.round(x.imag / np.pi - 0.5)
        pole_x = 1j * np.pi * (n + 0.5)
        dist = np.abs(x - pole_x) / p.inverse_width
        bad = dist < POLE_EXCLUSION
        if np.any(bad):
            idx = np.flatnonzero(np.ravel(bad))[0]
            t_bad = np.ravel(t)[idx]
            pole = p.center + np.ravel(pole_x)[idx] / p.inverse_width
            raise PoleError(complex(t_bad), complex(pole))


def _scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def e_field(config: FieldConfig, t):
    """Electric field E(t); real for real t."""
    _check_poles(config, t)
    t = np.asarray(t)
    out = np.zeros_like(t, dtype=np.result_type(t, float))
    with np.errstate(over="ignore"):
        for p in config.pulses:
            out = out + p.sign * p.amplitude / np.cosh(p.inverse_width * (t - p.center)) ** 2
    return _scalar(out)


def a_potential(config: FieldConfig, t):
    """Vector potential A(t) including the gauge constant."""
    _check_poles(config, t)
    t = np.asarray(t)
    out = np.full_like(t, config.gauge_constant, dtype=np.result_type(t, float))
    for p in config.pulses:
        out = out - p.sign * p.amplitude / p.inverse_width * np.tanh(p.inverse_width * (t - p.center))
    return _scalar(out)


def omega_squared(config: FieldConfig, k: MomentumPoint, t):
    """Omega^2 = m^2 + k_perp^2 + (k_par - q A(t))^2, analytic in t."""
    p = k.k_parallel - config.charge * np.asarray(a_potential(config, t))
    return _scalar(config.mass**2 + k.k_perp**2 + p * p)


def omega_real(config: FieldConfig, k: MomentumPoint, t):
    """Positive frequency on the real time axis."""
    if np.iscomplexobj(t):
        raise TypeError("omega_real takes real times; use omega_squared for complex t")
    return _scalar(np.sqrt(np.asarray(omega_squared(config, k, t))))


def transverse_energy(config: FieldConfig, k: MomentumPoint) -> float:
    return float(np.sqrt(config.mass**2 + k.k_perp**2))


# ---------------------------------------------------------------------------
# Named constructors


def make_single_pulse(amplitude, inverse_width, center=0.0, sign=1, gauge: GaugeSpec = GAUGE_VANISH,
                      label="single") -> FieldConfig:
    pulses = (PulseSpec(amplitude, inverse_width, center, sign),)
    return FieldConfig(pulses, resolve_gauge(pulses, gauge), label)


def _assist(e1, w1, e2, w2, delay, sign2, gauge, label):
    pulses = (PulseSpec(e1, w1, -delay / 2, 1), PulseSpec(e2, w2, delay / 2, sign2))
    return FieldConfig(pulses, resolve_gauge(pulses, gauge), label)


def make_equal_sign_assist(e1=0.25, w1=0.02, e2=0.025, w2=1.0, delay=0.0,
                           gauge: GaugeSpec = GAUGE_VANISH) -> FieldConfig:
    """Strong slow pulse at -T/2 plus a weak fast pulse at +T/2."""
    return _assist(e1, w1, e2, w2, delay, 1, gauge, f"equal_sign_assist_T={delay:g}")


def make_alternating_assist(e1=0.25, w1=0.02, e2=0.025, w2=1.0, delay=0.0,
                            gauge: GaugeSpec = GAUGE_VANISH) -> FieldConfig:
    """Strong slow pulse at -T/2 minus a weak fast pulse at +T/2."""
    return _assist(e1, w1, e2, w2, delay, -1, gauge, f"alternating_assist_T={delay:g}")


def make_pulse_train(n: int, sign_mode: str, amplitude=0.1, inverse_width=0.05, delay=180.32,
                     gauge: GaugeSpec = GAUGE_VANISH) -> FieldConfig:
    """N identical Sauter pulses spaced by ``delay``.

    Pulse ``i = 1..N`` sits at ``-(i - (N+1)/2) * delay`` with sign ``(+1)^i``
    (``sign_mode="equal"``) or ``(-1)^i`` (``sign_mode="alternating"``).
    """
    if n < 1:
        raise ValueError("a pulse train needs at least one pulse")
    if sign_mode not in ("equal", "alternating"):
        raise ValueError(f"sign_mode must be 'equal' or 'alternating', got {sign_mode!r}")
    base = -1 if sign_mode == "alternating" else 1
    pulses = tuple(
        PulseSpec(amplitude, inverse_width, -(i - (n + 1) / 2) * delay, base**i)
        for i in range(1, n + 1)
    )
    return FieldConfig(pulses, resolve_gauge(pulses, gauge), f"{sign_mode}_train_N={n}_T={delay:g}")


CONSTRUCTORS = {
    "single_pulse": make_single_pulse,
    "equal_sign_assist": make_equal_sign_assist,
    "alternating_assist": make_alternating_assist,
    "pulse_train": make_pulse_train,
}


def build(name: str, **params) -> FieldConfig:
    """Construct a field from a constructor name and keyword parameters."""
    try:
        ctor = CONSTRUCTORS[name]
    except KeyError:
        raise ValueError(f"unknown field constructor {name!r}; choose from {sorted(CONSTRUCTORS)}") from None
    return ctor(**params)


ZERO_FIELD = FieldConfig((), 0.0, "zero")
