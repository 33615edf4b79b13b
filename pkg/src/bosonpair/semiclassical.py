"""Complex turning points and the interference approximation to f(k).

Each upper-half-plane zero t_P of Omega^2 contributes an amplitude of modulus
exp(-vartheta_P), where vartheta_P = |int_{t_P*}^{t_P} Omega dt|; pairs of
turning points interfere through the real-axis phase
theta = int_{Re t_P}^{Re t_P'} Omega dt.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np
from numba import njit

from .errors import BranchError, ContourError, NoTurningPointError, PoleError
from .fields import FieldConfig, MomentumPoint, a_potential, omega_real, omega_squared
from .riccati import SolverSettings

RESIDUAL_TOL = 1e-8
DEDUP_TOL = 1e-6


@dataclass(frozen=True)
class TurningPoint:
    t: complex
    residual: float
    sheet_index: int = 0

    def __post_init__(self):
        if not self.t.imag > 0:
            raise ValueError(f"turning points are stored by their upper-half-plane member, got {self.t}")


@dataclass(frozen=True)
class PairIntegrals:
    vartheta: float
    re_t: float


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float


# ---------------------------------------------------------------------------
# Turning points


def exact_turning_points_2pulse(amplitude, inverse_width, delay, k: MomentumPoint, sheet: int = 0,
                                charge: float = 1.0, mass: float = 1.0):
    """Closed-form zeros (t_plus, t_minus) of Omega^2 for the alternating pair

        A(t) = (E0/w0) {1 + tanh[w0 (t - T/2)] - tanh[w0 (t + T/2)]}.

    With b = tanh(w0 T/2) and kappa = (k_par -/+ i eps_perp)/q the zeros obey

        tanh^2(w0 t) = (w0 kappa - E0 + 2 E0 b) / ((w0 kappa - E0) b^2 + 2 E0 b).

    Both returned points lie in the upper half plane; ``t_plus`` has the larger
    real part.  ``sheet`` adds i*sheet*pi/w0.
    """
    if k.k_perp != 0 and mass == 0:
        raise ValueError("massless modes need k_perp > 0")
    e0, w0 = amplitude, inverse_width
    eps = np.sqrt(mass**2 + k.k_perp**2)
    b = np.tanh(w0 * delay / 2)
    roots = []
    for sgn in (1, -1):
        kappa = complex(k.k_parallel, sgn * eps) / charge
        num = w0 * kappa - e0 + 2 * e0 * b
        den = (w0 * kappa - e0) * b * b + 2 * e0 * b
        z = np.sqrt(num / den)
        if abs(z.imag) < 1e-14 * max(1.0, abs(z)) and abs(z.real) >= 1.0:
            raise BranchError(f"arctanh argument {z} lies on the branch cut")
        s = np.arctanh(z) / w0
        roots.append(s if s.imag > 0 else -s)
    roots.sort(key=lambda t: t.real)
    shift = 1j * sheet * np.pi / w0
    return complex(roots[1] + shift), complex(roots[0] + shift)


def default_region(config: FieldConfig) -> Rectangle:
    """Seed rectangle: the default solver window times the strip below the
    first row of potential poles."""
    if not config.pulses:
        raise NoTurningPointError("a zero field has no turning points")
    s = SolverSettings.for_field(config)
    return Rectangle(s.t_start, s.t_end, 0.0, np.pi / (2 * config.fastest_inverse_width))


def _newton(config: FieldConfig, k: MomentumPoint, t: np.ndarray, max_iter: int = 60) -> np.ndarray:
    """Vectorized Newton iteration on Omega^2; diverged seeds come back as nan."""
    q = config.charge
    eps2 = config.mass**2 + k.k_perp**2
    t = np.array(t, dtype=complex)
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            a = np.full_like(t, config.gauge_constant)
            e = np.zeros_like(t)
            for p in config.pulses:
                th = np.tanh(p.inverse_width * (t - p.center))
                a -= p.sign * p.amplitude / p.inverse_width * th
                e += p.sign * p.amplitude * (1.0 - th * th)
            mom = k.k_parallel - q * a
            # d(Omega^2)/dt = 2 q p E
            step = (eps2 + mom * mom) / (2.0 * q * mom * e)
            t = t - step
            if np.all(~np.isfinite(step) | (np.abs(step) < 1e-14 * np.maximum(1.0, np.abs(t)))):
                break
    t[~np.isfinite(t)] = np.nan
    return t


def find_turning_points(config: FieldConfig, k: MomentumPoint, region: Rectangle | None = None,
                        n_re: int = 40, n_im: int = 20) -> list[TurningPoint]:
    """Newton-polish a seed grid over ``region`` and keep certified roots.

    Roots are de-duplicated within 1e-6, restricted to ``region`` with
    Im t > 0 and |Omega^2| < 1e-8, and returned sorted by real part.
    """
    region = region or default_region(config)
    res = np.linspace(region.re_min, region.re_max, n_re)
    ims = np.linspace(region.im_min, region.im_max, n_im + 2)[1:-1]
    seeds = (res[:, None] + 1j * ims[None, :]).ravel()
    roots = _newton(config, k, seeds)
    ok = (np.isfinite(roots) & (roots.real >= region.re_min) & (roots.real <= region.re_max)
          & (roots.imag > region.im_min) & (roots.imag < region.im_max))
    found: list[complex] = []
    for t in roots[ok]:
        if any(abs(t - u) < DEDUP_TOL for u in found):
            continue
        try:
            r = abs(omega_squared(config, k, t))
        except PoleError:
            continue
        if r < RESIDUAL_TOL:
            found.append(complex(t))
    if not found:
        raise NoTurningPointError(f"no turning points in {region} for {k}")
    found.sort(key=lambda t: t.real)
    return [TurningPoint(t, float(abs(omega_squared(config, k, t)))) for t in found]


def dominant_turning_points(tps: list[TurningPoint], rel_tol: float = 0.05) -> list[TurningPoint]:
    """Turning points whose distance from the real axis is within ``rel_tol``
    of the closest one."""
    if not tps:
        raise NoTurningPointError("empty turning point list")
    y0 = min(tp.t.imag for tp in tps)
    return [tp for tp in tps if tp.t.imag <= y0 * (1 + rel_tol)]


# ---------------------------------------------------------------------------
# Contour integrals


@lru_cache(maxsize=32)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@njit(cache=True)
def _track_branch(w, param):
    """In-place sign continuation; returns the index where continuity is
    lost, or -1."""
    if w[0].real < 0:
        w[0] = -w[0]
    if w.size > 1 and abs(w[1] + w[0]) < abs(w[1] - w[0]):
        w[1] = -w[1]
    for j in range(2, w.size):
        ds0 = param[j - 1] - param[j - 2]
        ratio = (param[j] - param[j - 1]) / ds0 if ds0 > 0 else 0.0
        pred = w[j - 1] + (w[j - 1] - w[j - 2]) * ratio
        if abs(w[j] + pred) < abs(w[j] - pred):
            w[j] = -w[j]
        if abs(w[j] - pred) > 0.25 * (abs(w[j]) + abs(pred)):
            return j
    return -1


def _tracked_sqrt(w2: np.ndarray, param: np.ndarray) -> np.ndarray:
    """Square roots of samples along a smooth path (parameter ``param``),
    continuing the branch of the first sample's principal root by linear
    extrapolation."""
    w = np.sqrt(np.asarray(w2, dtype=complex))
    bad = _track_branch(w, np.asarray(param, dtype=float))
    if bad >= 0:
        raise ContourError(f"branch tracking lost continuity near Omega={w[bad]:.6g}")
    return w


def _half_segment_integral(config, k, tp: TurningPoint, n: int, n_track: int = 4096) -> float:
    x, Y = tp.t.real, tp.t.imag
    # y = Y (2s - s^2) removes the sqrt(t - t_P) endpoint behaviour
    s, w = _gauss_legendre(n)
    s = 0.5 * (s + 1.0)
    w = 0.5 * w
    # track the branch on a fine path that contains the quadrature nodes
    fine = np.linspace(0.0, 1.0, n_track, endpoint=False)
    path = np.concatenate([fine, s])
    order = np.argsort(path, kind="stable")
    path = path[order]
    om = _tracked_sqrt(np.asarray(omega_squared(config, k, x + 1j * Y * (2 * path - path * path))), path)
    if not om[0].real > 0:
        raise ContourError("Omega is not positive where the contour crosses the real axis")
    om_nodes = np.empty(n, dtype=complex)
    om_nodes[order[order >= n_track] - n_track] = om[order >= n_track]
    jac = 2 * Y * (1 - s)
    return float(np.sum(w * jac * om_nodes.real))


def singulant(config: FieldConfig, k: MomentumPoint, tp: TurningPoint, rtol: float = 1e-12) -> float:
    """vartheta = |int_{t*}^{t} Omega dt| along the vertical segment through
    Re t; conjugate symmetry reduces it to 2 int_0^{Im t} Re Omega(Re t + i y) dy."""
    if not config.pulses:
        raise NoTurningPointError("a zero field has no turning points")
    n = 64
    prev = 2 * _half_segment_integral(config, k, tp, n)
    while n < 4096:
        n *= 2
        cur = 2 * _half_segment_integral(config, k, tp, n)
        if abs(cur - prev) <= rtol * abs(cur):
            return abs(cur)
        prev = cur
    raise ContourError(f"singulant quadrature did not converge (last change {abs(cur - prev):.3g})")


def _real_axis_integral(config, k, lo, hi, n_panels, order=16):
    x, w = _gauss_legendre(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = np.asarray(omega_real(config, k, nodes)).reshape(n_panels, order)
    return float(np.sum(half[:, None] * w[None, :] * vals))


def phase_between(config: FieldConfig, k: MomentumPoint, tp_a: TurningPoint, tp_b: TurningPoint,
                  rtol: float = 1e-12) -> float:
    """Real-axis integral of Omega from Re t_a to Re t_b (antisymmetric)."""
    a, b = tp_a.t.real, tp_b.t.real
    if a == b:
        return 0.0
    lo, hi = min(a, b), max(a, b)
    scale = 1.0 / config.fastest_inverse_width if config.pulses else hi - lo
    n = max(4, int(np.ceil((hi - lo) / scale)))
    prev = _real_axis_integral(config, k, lo, hi, n)
    for _ in range(12):
        n *= 2
        val = _real_axis_integral(config, k, lo, hi, n)
        if abs(val - prev) <= rtol * abs(val):
            break
        prev = val
    else:
        raise ContourError("real-axis phase integral did not converge")
    return val if b > a else -val


def _segment_integral(config, k, za: complex, zb: complex, n: int, n_track: int = 4096) -> complex:
    # s = (1 - cos(pi u)) / 2 makes the sqrt endpoint zeros analytic in u
    u, w = _gauss_legendre(n)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    s = 0.5 * (1.0 - np.cos(np.pi * u))
    jac = 0.5 * np.pi * np.sin(np.pi * u) * (zb - za)
    om = np.empty(n, dtype=complex)
    # the branch is fixed at the midpoint (principal root) and continued to both ends
    # track in u, where Omega is smooth up to the endpoints
    fine = np.linspace(0.0, 0.5, n_track // 2, endpoint=False)
    for side, sign in ((u < 0.5, -1.0), (u >= 0.5, 1.0)):
        dist = np.concatenate([fine, np.abs(u[side] - 0.5)])
        order = np.argsort(dist, kind="stable")
        path = 0.5 * (1.0 - np.cos(np.pi * (0.5 + sign * dist[order])))
        root = _tracked_sqrt(np.asarray(omega_squared(config, k, za + (zb - za) * path)), dist[order])
        pick = order >= fine.size
        om[np.flatnonzero(side)[order[pick] - fine.size]] = root[pick]
    return complex(np.sum(w * jac * om))


def contour_phase(config: FieldConfig, k: MomentumPoint, tp_a: TurningPoint, tp_b: TurningPoint,
                  rtol: float = 1e-12) -> float:
    """Re of the Omega integral along the straight segment from t_a to t_b.

    Unlike :func:`phase_between` this runs between the complex turning points
    themselves, which keeps the fringe positions accurate away from k = 0.
    """
    if tp_a.t == tp_b.t:
        return 0.0
    n = 64
    prev = _segment_integral(config, k, tp_a.t, tp_b.t, n)
    while n < 4096:
        n *= 2
        cur = _segment_integral(config, k, tp_a.t, tp_b.t, n)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur.real
        prev = cur
    raise ContourError(f"contour phase did not converge (last change {abs(cur - prev):.3g})")


PHASE_RULES = ("real_axis", "contour")


def _phase_rule(name: str):
    if name == "real_axis":
        return phase_between
    if name == "contour":
        return contour_phase
    raise ValueError(f"phase must be one of {PHASE_RULES}")


def pair_integrals(config, k, tp: TurningPoint) -> PairIntegrals:
    return PairIntegrals(singulant(config, k, tp), tp.t.real)


# ---------------------------------------------------------------------------
# Approximate spectra


@dataclass
class ApproxDetails:
    f: float
    raw: float
    clamped: bool
    varthetas: list = field(default_factory=list)
    phases: list = field(default_factory=list)
    phase_spread: float = 0.0


def interference_sum(varthetas, phase_of_pair) -> float:
    """sum_P e^{-2 v_P} + sum_{P<P'} 2 cos(2 theta_PP') e^{-v_P - v_P'}."""
    v = np.asarray(varthetas, dtype=float)
    total = float(np.sum(np.exp(-2 * v)))
    for i, j in combinations(range(v.size), 2):
        total += 2 * np.cos(2 * phase_of_pair(i, j)) * np.exp(-v[i] - v[j])
    return total


def approx_spectrum_general(config: FieldConfig, k: MomentumPoint, tps: list[TurningPoint],
                            return_details: bool = False):
    """Interference sum over all supplied turning points; negative
    truncation undershoot is clamped to zero and flagged."""
    if not tps:
        raise NoTurningPointError("approx_spectrum_general needs at least one turning point")
    tps = sorted(tps, key=lambda tp: tp.t.real)
    v = [singulant(config, k, tp) for tp in tps]
    # phases relative to the first point; theta_ij = theta_0j - theta_0i
    rel = [0.0] + [phase_between(config, k, tps[0], tp) for tp in tps[1:]]
    raw = interference_sum(v, lambda i, j: rel[j] - rel[i])
    details = ApproxDetails(max(raw, 0.0), raw, raw < 0, v, rel)
    return details if return_details else details.f


def _two_pulse_parameters(config: FieldConfig):
    if len(config.pulses) != 2:
        raise ValueError("approx_spectrum_2pulse needs an alternating two-pulse field")
    p1, p2 = sorted(config.pulses, key=lambda p: p.center)
    if (p1.amplitude != p2.amplitude or p1.inverse_width != p2.inverse_width
            or p1.sign != 1 or p2.sign != -1 or not np.isclose(p1.center, -p2.center)):
        raise ValueError("expected +E0 at -T/2 and -E0 at +T/2 with equal widths")
    e0, w0, delay = p1.amplitude, p1.inverse_width, p2.center - p1.center
    # offset of this config's gauge from the closed-form gauge A(-inf) = E0/w0
    shift = config.gauge_constant - e0 / w0
    return e0, w0, delay, shift


def turning_points_2pulse(config: FieldConfig, k: MomentumPoint) -> tuple[TurningPoint, TurningPoint]:
    e0, w0, delay, shift = _two_pulse_parameters(config)
    k_eff = MomentumPoint(k.k_parallel - config.charge * shift, k.k_perp)
    tp, tm = exact_turning_points_2pulse(e0, w0, delay, k_eff, charge=config.charge, mass=config.mass)
    return (TurningPoint(tp, float(abs(omega_squared(config, k, tp)))),
            TurningPoint(tm, float(abs(omega_squared(config, k, tm)))))


def approx_spectrum_2pulse(config: FieldConfig, k: MomentumPoint, return_details: bool = False,
                           phase: str = "real_axis"):
    """4 cos^2(theta) e^{-2 vartheta} from the closed-form turning points.

    vartheta is the mean of the two singulants (they coincide for this
    field). ``phase`` selects how theta is integrated: ``"real_axis"``
    between the real parts of the turning points, or ``"contour"`` between
    the turning points themselves.
    """
    rule = _phase_rule(phase)
    tp, tm = turning_points_2pulse(config, k)
    v = [singulant(config, k, tm), singulant(config, k, tp)]
    theta = rule(config, k, tm, tp)
    f = 4 * np.cos(theta) ** 2 * np.exp(-2 * (0.5 * (v[0] + v[1])))
    if return_details:
        return ApproxDetails(f, f, False, v, [theta])
    return f


def fabry_perot(theta, n: int):
    """sin^2(N theta) / sin^2(theta), with the N^2 limit at sin(theta) = 0."""
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    small = np.abs(s) < 1e-8
    safe = np.where(small, 1.0, s)
    out = np.where(small, float(n * n), np.sin(n * theta) ** 2 / safe**2)
    return out.item() if out.ndim == 0 else out


def approx_spectrum_npulse(config: FieldConfig, k: MomentumPoint, n: int | None = None,
                           tps: list[TurningPoint] | None = None, return_details: bool = False,
                           phase: str = "real_axis"):
    """sin^2(N theta)/sin^2(theta) e^{-2 vartheta} for an alternating train.

    theta and vartheta come from the innermost adjacent pair of turning
    points (vartheta as the mean of its two singulants); the largest
    deviation of any other adjacent phase is reported as ``phase_spread``.
    ``phase`` is as in :func:`approx_spectrum_2pulse`.
    """
    rule = _phase_rule(phase)
    n = len(config.pulses) if n is None else n
    if tps is None:
        tps = dominant_turning_points(find_turning_points(config, k))
        if n == 1:
            tps = tps[:1]
    if len(tps) != n:
        raise NoTurningPointError(f"expected {n} dominant turning points, found {len(tps)}")
    tps = sorted(tps, key=lambda tp: tp.t.real)
    if n == 1:
        v = [singulant(config, k, tps[0])]
        f = float(np.exp(-2 * v[0]))
        return ApproxDetails(f, f, False, v, []) if return_details else f
    i = n // 2 - 1
    a, b = tps[i], tps[i + 1]
    va, vb = singulant(config, k, a), singulant(config, k, b)
    theta = rule(config, k, a, b)
    f = float(fabry_perot(theta, n) * np.exp(-2 * (0.5 * (va + vb))))
    if not return_details:
        return f
    phases = [rule(config, k, x, y) for x, y in zip(tps[:-1], tps[1:])]
    v = [singulant(config, k, tp) for tp in tps]
    spread = float(np.max(np.abs(np.asarray(phases) - theta)))
    return ApproxDetails(f, f, False, v, phases, spread)


def semiclassical_f(config: FieldConfig, k: MomentumPoint) -> float:
    """Dispatch: closed form for alternating pairs, Fabry-Perot form for
    alternating trains, the general sum over dominant points otherwise."""
    try:
        return approx_spectrum_2pulse(config, k)
    except ValueError:
        pass
    tps = dominant_turning_points(find_turning_points(config, k))
    signs = [p.sign for p in sorted(config.pulses, key=lambda p: p.center)]
    alternating = len(signs) > 1 and all(a == -b for a, b in zip(signs[:-1], signs[1:]))
    if alternating and len(tps) == len(signs):
        return approx_spectrum_npulse(config, k, len(signs), tps)
    return approx_spectrum_general(config, k, tps)
