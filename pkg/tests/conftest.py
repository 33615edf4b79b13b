import numpy as np
import pytest

from bosonpair import MomentumPoint, make_pulse_train, make_single_pulse
from bosonpair.fields import GAUGE_FIRST_PULSE

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion."""
    def record(number: int, passed: bool, detail: str):
        _ACCEPTANCE_LINES.append(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def sauter():
    """E0 = 0.1, w0 = 0.05, centred potential so the spectrum peaks at k = 0."""
    return make_single_pulse(0.1, 0.05, gauge=0.0)


@pytest.fixture(scope="session")
def alt2():
    return make_pulse_train(2, "alternating", 0.1, 0.05, 180.32, gauge=GAUGE_FIRST_PULSE)


@pytest.fixture(scope="session")
def alt6():
    return make_pulse_train(6, "alternating", 0.1, 0.05, 180.32, gauge=GAUGE_FIRST_PULSE)


@pytest.fixture(scope="session")
def k0():
    return MomentumPoint(0.0, 0.0)


def sauter_boson_exact(amplitude, inverse_width, k_par, k_perp=0.0):
    """Closed-form scalar distribution for A = -(E/w) tanh(w t), m = q = 1."""
    import mpmath as mp
    with mp.workdps(40):
        lam = amplitude / inverse_width**2
        wp = mp.sqrt(1 + k_perp**2 + (k_par + amplitude / inverse_width) ** 2)
        wm = mp.sqrt(1 + k_perp**2 + (k_par - amplitude / inverse_width) ** 2)
        num = mp.cosh(2 * mp.pi * mp.sqrt(lam**2 - mp.mpf(1) / 4)) + mp.cosh(mp.pi * (wp - wm) / inverse_width)
        return float(num / (2 * mp.sinh(mp.pi * wp / inverse_width) * mp.sinh(mp.pi * wm / inverse_width)))


def sauter_fermion_exact(amplitude, inverse_width, k_par, k_perp=0.0):
    import mpmath as mp
    with mp.workdps(40):
        lam = amplitude / inverse_width**2
        wp = mp.sqrt(1 + k_perp**2 + (k_par + amplitude / inverse_width) ** 2)
        wm = mp.sqrt(1 + k_perp**2 + (k_par - amplitude / inverse_width) ** 2)
        num = mp.cosh(2 * mp.pi * lam) - mp.cosh(mp.pi * (wp - wm) / inverse_width)
        return float(num / (2 * mp.sinh(mp.pi * wp / inverse_width) * mp.sinh(mp.pi * wm / inverse_width)))


def rel(a, b):
    return abs(a - b) / abs(b)

