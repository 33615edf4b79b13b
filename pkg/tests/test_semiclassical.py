import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonpair import semiclassical as sc
from bosonpair.errors import BranchError, NoTurningPointError
from bosonpair.fields import (ZERO_FIELD, MomentumPoint, make_pulse_train, make_single_pulse, omega_real,
                              omega_squared)
from bosonpair.semiclassical import (TurningPoint, approx_spectrum_2pulse, approx_spectrum_general,
                                     approx_spectrum_npulse, contour_phase, dominant_turning_points,
                                     exact_turning_points_2pulse, fabry_perot, find_turning_points,
                                     phase_between, singulant, turning_points_2pulse)

E0, W0, T = 0.1, 0.05, 180.32


def trapezoid_singulant(config, k, tp, n=100_001):
    """Brute-force 2 int_0^Y Re Omega(x + i y) dy, branch by phase unwrapping."""
    y = np.linspace(0.0, tp.t.imag, n)
    w2 = np.asarray(omega_squared(config, k, tp.t.real + 1j * y))
    phase = np.unwrap(np.angle(w2)) / 2
    om = np.sqrt(np.abs(w2)) * np.exp(1j * phase)
    return 2 * np.trapezoid(om.real, y)


@pytest.mark.parametrize("kp", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_closed_form_points_are_roots(alt2, kp):
    k = MomentumPoint(kp)
    tp, tm = exact_turning_points_2pulse(E0, W0, T, k)
    for t in (tp, tm):
        assert t.imag > 0
        assert abs(omega_squared(alt2, k, t)) < 1e-8


def test_closed_form_symmetry_at_k0(alt2):
    tp, tm = exact_turning_points_2pulse(E0, W0, T, MomentumPoint(0.0))
    assert tp.real == pytest.approx(-tm.real, rel=1e-12)
    assert tp.imag == pytest.approx(tm.imag, rel=1e-12)


def test_newton_matches_closed_form_on_101_points(alt2):
    for kp in np.linspace(-1, 1, 101):
        k = MomentumPoint(float(kp))
        exact = sorted(exact_turning_points_2pulse(E0, W0, T, k), key=lambda t: t.real)
        found = find_turning_points(alt2, k)
        assert len(found) == 2
        for a, b in zip(exact, found):
            assert abs(a - b.t) < 1e-9
            assert b.residual < 1e-8


def test_closed_form_respects_gauge_shift(alt2):
    k = MomentumPoint(0.2)
    shifted = alt2.shifted_gauge(0.5)
    a = turning_points_2pulse(alt2, k)
    b = turning_points_2pulse(shifted, MomentumPoint(0.7))
    for x, y in zip(a, b):
        assert abs(x.t - y.t) < 1e-9


def test_branch_error_on_cut():
    # a massless mode with real kappa = 5 puts the arctanh argument on (1, inf)
    with pytest.raises(BranchError):
        exact_turning_points_2pulse(E0, W0, T, MomentumPoint(5.0, 0.0), mass=0.0)
    with pytest.raises(ValueError):
        exact_turning_points_2pulse(E0, W0, T, MomentumPoint(0.0, 1.0), mass=0.0)


def test_turning_point_counts(alt6):
    tps6 = find_turning_points(alt6, MomentumPoint(0.0))
    assert len(tps6) == 6
    ims = [tp.t.imag for tp in tps6]
    assert max(ims) - min(ims) < 1e-6
    eq2 = make_pulse_train(2, "equal")
    dom = dominant_turning_points(find_turning_points(eq2, MomentumPoint(-2.0)))
    assert len(dom) == 1


def test_no_turning_points_in_zero_field():
    with pytest.raises(NoTurningPointError):
        find_turning_points(ZERO_FIELD, MomentumPoint(0.0))
    with pytest.raises(NoTurningPointError):
        singulant(ZERO_FIELD, MomentumPoint(0.0), TurningPoint(1j, 0.0))
    with pytest.raises(NoTurningPointError):
        approx_spectrum_general(ZERO_FIELD, MomentumPoint(0.0), [])


def test_turning_point_validation():
    with pytest.raises(ValueError):
        TurningPoint(1.0 - 1j, 0.0)


@pytest.mark.parametrize("kp", [0.0, 0.3])
def test_singulant_against_trapezoid_oracle(alt2, kp):
    k = MomentumPoint(kp)
    for tp in turning_points_2pulse(alt2, k):
        v = singulant(alt2, k, tp)
        assert v > 0
        assert abs(v - trapezoid_singulant(alt2, k, tp)) < 1e-6 * v


def test_singulants_equal_at_k0(alt2):
    k = MomentumPoint(0.0)
    a, b = turning_points_2pulse(alt2, k)
    assert abs(singulant(alt2, k, a) - singulant(alt2, k, b)) < 1e-9


def test_single_sauter_singulant_gives_exponent(sauter):
    # e^{-2 vartheta} tracks the exact distribution up to the usual O(1) prefactor
    k = MomentumPoint(0.0)
    tps = dominant_turning_points(find_turning_points(sauter, k))
    assert len(tps) == 1
    v = singulant(sauter, k, tps[0])
    from conftest import sauter_boson_exact
    ratio = np.exp(-2 * v) / sauter_boson_exact(0.1, 0.05, 0.0)
    assert 0.5 < ratio < 2.0


def test_phase_properties(alt2):
    k = MomentumPoint(0.0)
    tp, tm = turning_points_2pulse(alt2, k)
    assert phase_between(alt2, k, tp, tp) == 0.0
    fwd = phase_between(alt2, k, tm, tp)
    assert phase_between(alt2, k, tp, tm) == -fwd
    from scipy.integrate import quad
    ref, _ = quad(lambda t: omega_real(alt2, k, t), tm.t.real, tp.t.real, epsabs=0, epsrel=1e-12, limit=400)
    assert abs(fwd - ref) < 1e-9 * ref


@settings(max_examples=60, deadline=None)
@given(theta=st.floats(-10, 10), n=st.integers(1, 8))
def test_fabry_perot_bounds_and_identities(theta, n):
    val = fabry_perot(theta, n)
    assert 0.0 <= val <= n * n * (1 + 1e-12)
    if n == 2:
        assert val == pytest.approx(4 * np.cos(theta) ** 2, rel=1e-12, abs=1e-12)
    if n == 1:
        assert val == pytest.approx(1.0)


def test_fabry_perot_limit():
    assert fabry_perot(0.0, 6) == 36.0
    assert fabry_perot(np.pi, 3) == 9.0
    assert fabry_perot(1e-9, 4) == 16.0


def test_two_pulse_forms_agree(alt2):
    for kp in (0.0, 0.05, 0.1, 0.5):
        k = MomentumPoint(kp)
        tps = list(turning_points_2pulse(alt2, k))
        d = approx_spectrum_2pulse(alt2, k, return_details=True)
        envelope = 4 * np.exp(-2 * d.varthetas[0])
        assert abs(approx_spectrum_npulse(alt2, k, 2, tps) - d.f) < 1e-14 * envelope
        assert abs(approx_spectrum_general(alt2, k, tps) - d.f) < 1e-13 * envelope


def test_general_single_pair_is_plain_exponential(sauter):
    k = MomentumPoint(0.1)
    tps = dominant_turning_points(find_turning_points(sauter, k))
    assert approx_spectrum_general(sauter, k, tps) == pytest.approx(np.exp(-2 * singulant(sauter, k, tps[0])))
    assert approx_spectrum_npulse(sauter, k, 1) == pytest.approx(np.exp(-2 * singulant(sauter, k, tps[0])))


def test_npulse_envelope_bound(alt6):
    for kp in (0.0, 0.02):
        d = approx_spectrum_npulse(alt6, MomentumPoint(kp), return_details=True)
        assert d.f <= 36 * np.exp(-2 * min(d.varthetas)) * (1 + 1e-9)
    # adjacent phases are equal only at k = 0, where the potential between
    # pulses alternates symmetrically about k
    assert approx_spectrum_npulse(alt6, MomentumPoint(0.0), return_details=True).phase_spread < 1e-6
    assert d.phase_spread > 1.0


def test_node_when_theta_is_half_pi(monkeypatch, alt2):
    monkeypatch.setattr(sc, "phase_between", lambda *a, **kw: np.pi / 2)
    assert approx_spectrum_2pulse(alt2, MomentumPoint(0.0)) < 1e-40


def test_semiclassical_dispatch(alt2, alt6):
    k = MomentumPoint(0.01)
    assert sc.semiclassical_f(alt2, k) == approx_spectrum_2pulse(alt2, k)
    assert sc.semiclassical_f(alt6, k) == approx_spectrum_npulse(alt6, k)
    eq = make_pulse_train(2, "equal")
    assert sc.semiclassical_f(eq, MomentumPoint(-2.0)) > 0
    with pytest.raises(ValueError):
        approx_spectrum_2pulse(make_single_pulse(0.1, 0.05), k)


def mapped_trapezoid_phase(config, k, a, b, n=20_001):
    """Trapezoid in u with s = (1 - cos pi u)/2, branch by unwrapping."""
    u = np.linspace(0.0, 1.0, n)
    z = a + (b - a) * 0.5 * (1 - np.cos(np.pi * u))
    w2 = np.asarray(omega_squared(config, k, z[1:-1]))
    om = np.sqrt(np.abs(w2)) * np.exp(0.5j * np.unwrap(np.angle(w2)))
    if om[om.size // 2].real < 0:
        om = -om
    om = np.concatenate([[0], om, [0]])
    return np.trapezoid(om * 0.5 * np.pi * np.sin(np.pi * u) * (b - a), u).real


@pytest.mark.parametrize("kp", [-0.09, 0.3])
def test_contour_phase_against_oracle(alt2, kp):
    k = MomentumPoint(kp)
    tp, tm = turning_points_2pulse(alt2, k)
    c = contour_phase(alt2, k, tm, tp)
    assert abs(c - mapped_trapezoid_phase(alt2, k, tm.t, tp.t)) < 1e-10 * c
    assert contour_phase(alt2, k, tp, tm) == -c
    assert contour_phase(alt2, k, tp, tp) == 0.0


def test_contour_and_real_axis_phases_meet_at_k0(alt2):
    k = MomentumPoint(0.0)
    tp, tm = turning_points_2pulse(alt2, k)
    assert abs(contour_phase(alt2, k, tm, tp) - phase_between(alt2, k, tm, tp)) < 1e-6
    d2 = approx_spectrum_2pulse(alt2, MomentumPoint(0.05), phase="contour")
    d6 = approx_spectrum_npulse(alt2, MomentumPoint(0.05), 2, phase="contour")
    assert d2 == pytest.approx(d6, rel=1e-12)
    with pytest.raises(ValueError):
        approx_spectrum_2pulse(alt2, k, phase="imaginary")
