"""Compiled mode integrators.

One adaptive Dormand-Prince 8(5,3) stepper (coefficients taken from SciPy's
DOP853 tables) drives four three-component real systems that share the field
evaluation:

    BOSON    (Re R, Im R, Theta)  dR = c_b [e^{-2i Th} - R^2 e^{2i Th}],  dTh = Omega
    FERMION  (Re R, Im R, Theta)  dR = c_f [e^{-2i Th} + R^2 e^{2i Th}],  dTh = Omega
    BORN     (Re R, Im R, Theta)  dR = c_b e^{-2i Th},                    dTh = Omega
    QVE_RAW  (f, u, v)            df = W v / 2, du = 2 Omega v, dv = W (1 + 2 f) - 2 Omega u

QVE integrates the same kinetic system after subtracting its two leading
adiabatic orders exactly:  with a = W / (2 Omega) and c = a' / (2 Omega),
f = a^2/4 + g, u = a + U, v = c + V, so that

    dg = Omega a V,   dU = 2 Omega V,   dV = 2 W f - 2 Omega U - c'.

a and c vanish once the field is off, so g there equals f.  The transient
that f carries while the field is on is then never formed numerically,
which keeps deep interference minima above the rounding floor.

with c_b = dOmega/dt / (2 Omega) = q E p / (2 Omega^2), p = k_par - q A,
c_f = q E eps_perp / (2 Omega^2) and W = q E p / Omega^2.
"""

import numpy as np
from numba import njit
from scipy.integrate._ivp import dop853_coefficients as _dop

BOSON = 0
FERMION = 1
BORN = 2
QVE = 3
QVE_RAW = 4

STATUS_OK = 0
STATUS_SUPERCRITICAL = 1
STATUS_UNDERFLOW = 2
STATUS_MAX_STEPS = 3

_NS = _dop.N_STAGES
_A = np.ascontiguousarray(_dop.A[:_NS, :_NS])
_B = np.ascontiguousarray(_dop.B)
_C = np.ascontiguousarray(_dop.C[:_NS])
_E3 = np.ascontiguousarray(_dop.E3)
_E5 = np.ascontiguousarray(_dop.E5)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_ORDER_EXP = -1.0 / 8.0
_PI = np.pi


@njit(cache=True, nogil=True)
def _field(t, signed, widths, centers, gauge):
    a = gauge
    e = 0.0
    for i in range(signed.size):
        th = np.tanh(widths[i] * (t - centers[i]))
        a -= signed[i] / widths[i] * th
        e += signed[i] * (1.0 - th * th)
    return a, e


@njit(cache=True, nogil=True)
def _field_derivs(t, signed, widths, centers, gauge):
    """A, E, dE/dt, d2E/dt2."""
    a = gauge
    e = 0.0
    de = 0.0
    d2e = 0.0
    for i in range(signed.size):
        w = widths[i]
        th = np.tanh(w * (t - centers[i]))
        s2 = 1.0 - th * th
        a -= signed[i] / w * th
        e += signed[i] * s2
        de -= 2.0 * signed[i] * w * s2 * th
        d2e += signed[i] * w * w * (4.0 * s2 * th * th - 2.0 * s2 * s2)
    return a, e, de, d2e


@njit(cache=True, nogil=True)
def _qve_subtracted(t, y, kpar, eperp2, q, signed, widths, centers, gauge, out):
    a_pot, e, de, d2e = _field_derivs(t, signed, widths, centers, gauge)
    p = kpar - q * a_pot
    dp = q * e
    d2p = q * de
    om2 = eperp2 + p * p
    om = np.sqrt(om2)
    dom = p * dp / om
    d2om = (dp * dp + p * d2p - dom * dom) / om
    n0 = e * p
    n1 = de * p + e * dp
    n2 = d2e * p + 2.0 * de * dp + e * d2p
    i3 = 1.0 / (om2 * om)
    r = dom / om
    a0 = 0.5 * q * n0 * i3
    a1 = 0.5 * q * i3 * (n1 - 3.0 * n0 * r)
    a2 = 0.5 * q * i3 * (n2 - 6.0 * n1 * r + 12.0 * n0 * r * r - 3.0 * n0 * d2om / om)
    dc = a2 / (2.0 * om) - a1 * dom / (2.0 * om2)
    w = q * e * p / om2
    f = 0.25 * a0 * a0 + y[0]
    out[0] = om * a0 * y[2]
    out[1] = 2.0 * om * y[2]
    out[2] = 2.0 * w * f - 2.0 * om * y[1] - dc


@njit(cache=True, nogil=True)
def _rhs(kind, t, y, kpar, eperp2, q, signed, widths, centers, gauge, out):
    if kind == QVE:
        _qve_subtracted(t, y, kpar, eperp2, q, signed, widths, centers, gauge, out)
        return
    a, e = _field(t, signed, widths, centers, gauge)
    p = kpar - q * a
    om2 = eperp2 + p * p
    om = np.sqrt(om2)
    if kind == QVE_RAW:
        w = q * e * p / om2
        out[0] = 0.5 * w * y[2]
        out[1] = 2.0 * om * y[2]
        out[2] = w * (1.0 + 2.0 * y[0]) - 2.0 * om * y[1]
        return
    c2 = np.cos(2.0 * y[2])
    s2 = np.sin(2.0 * y[2])
    if kind == FERMION:
        coup = q * e * np.sqrt(eperp2) / (2.0 * om2)
    else:
        coup = q * e * p / (2.0 * om2)
    # e^{-2i Th}
    mr = c2
    mi = -s2
    if kind != BORN:
        r2r = y[0] * y[0] - y[1] * y[1]
        r2i = 2.0 * y[0] * y[1]
        # R^2 e^{2i Th}
        qr = r2r * c2 - r2i * s2
        qi = r2r * s2 + r2i * c2
        if kind == FERMION:
            mr += qr
            mi += qi
        else:
            mr -= qr
            mi -= qi
    out[0] = coup * mr
    out[1] = coup * mi
    out[2] = om


@njit(cache=True, nogil=True)
def _restore(y, wraps, amp_system):
    if amp_system:
        y[2] += wraps * _PI
    return y


@njit(cache=True, nogil=True)
def integrate(kind, t0, t1, kpar, eperp2, q, signed, widths, centers, gauge,
              rtol, atol, max_step, max_steps):
    """Integrate from vacuum at t0 to t1.

    Returns (y, n_steps, max_abs_r, status, t_status, h_status).  For the
    amplitude systems the phase component is controlled with an absolute
    tolerance of ``rtol`` radians; the R components with ``atol + rtol*|R|``.
    """
    n = 3
    y = np.zeros(n)
    ynew = np.zeros(n)
    incr = np.zeros(n)
    comp = np.zeros(n)
    tmp = np.zeros(n)
    K = np.zeros((_NS + 1, n))
    t = t0
    span = t1 - t0
    h = min(max_step, 1e-2 * span)
    steps = 0
    max_r = 0.0
    amp_system = kind != QVE and kind != QVE_RAW
    # Theta only enters through e^{2i Theta}; it is kept reduced modulo pi so
    # its rounding does not grow with elapsed phase, and restored on return.
    wraps = 0.0
    _rhs(kind, t, y, kpar, eperp2, q, signed, widths, centers, gauge, K[0])
    while t < t1:
        if steps >= max_steps:
            return _restore(y, wraps, amp_system), steps, max_r, STATUS_MAX_STEPS, t, h
        if h > max_step:
            h = max_step
        last = False
        if t + h >= t1:
            h = t1 - t
            last = True
        if h < 1e-14 * max(1.0, abs(t)):
            return _restore(y, wraps, amp_system), steps, max_r, STATUS_UNDERFLOW, t, h
        for s in range(1, _NS):
            for j in range(n):
                acc = 0.0
                for r in range(s):
                    acc += _A[s, r] * K[r, j]
                tmp[j] = y[j] + h * acc
            _rhs(kind, t + _C[s] * h, tmp, kpar, eperp2, q, signed, widths, centers, gauge, K[s])
        for j in range(n):
            acc = 0.0
            for r in range(_NS):
                acc += _B[r] * K[r, j]
            incr[j] = h * acc
            ynew[j] = y[j] + incr[j]
        t_new = t1 if last else t + h
        _rhs(kind, t_new, ynew, kpar, eperp2, q, signed, widths, centers, gauge, K[_NS])

        err5 = 0.0
        err3 = 0.0
        for j in range(n):
            if amp_system and j == 2:
                sc = rtol
            else:
                sc = atol + rtol * max(abs(y[j]), abs(ynew[j]))
            e5 = 0.0
            e3 = 0.0
            for r in range(_NS + 1):
                e5 += _E5[r] * K[r, j]
                e3 += _E3[r] * K[r, j]
            err5 += (e5 / sc) ** 2
            err3 += (e3 / sc) ** 2
        den = err5 + 0.01 * err3
        if den > 0.0:
            err = h * err5 / np.sqrt(den * n)
        else:
            err = 0.0

        if err <= 1.0:
            t = t_new
            for j in range(n):
                # compensated (Kahan) accumulation of the state
                d = incr[j] - comp[j]
                tot = y[j] + d
                comp[j] = (tot - y[j]) - d
                y[j] = tot
                K[0, j] = K[_NS, j]
            steps += 1
            if amp_system:
                while y[2] >= _PI:
                    y[2] -= _PI
                    wraps += 1.0
                ar = np.sqrt(y[0] * y[0] + y[1] * y[1])
                if ar > max_r:
                    max_r = ar
                if ar >= 1.0:
                    return _restore(y, wraps, amp_system), steps, max_r, STATUS_SUPERCRITICAL, t, h
            if err == 0.0:
                h *= _MAX_FACTOR
            else:
                h *= min(_MAX_FACTOR, _SAFETY * err ** _ORDER_EXP)
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err ** _ORDER_EXP)
    return _restore(y, wraps, amp_system), steps, max_r, STATUS_OK, t, h
