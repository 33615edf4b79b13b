import numpy as np
import pytest

from bosonpair.fermion import fermion_distribution_from_R, fermion_spectrum, solve_fermion_mode
from bosonpair.fields import ZERO_FIELD, MomentumPoint, make_single_pulse
from bosonpair.riccati import spectrum

from conftest import rel, sauter_fermion_exact


@pytest.mark.parametrize("amp,width,kp,kt", [
    (0.1, 0.05, 0.0, 0.0), (0.1, 0.05, 0.7, 0.3), (0.2, 0.2, -0.4, 0.5), (0.5, 0.5, 0.3, 0.0),
])
def test_closed_form_sauter(amp, width, kp, kt):
    # the closed form fixes the sign in front of the R^2 term independently
    cfg = make_single_pulse(amp, width, gauge=0.0)
    f = solve_fermion_mode(cfg, MomentumPoint(kp, kt)).f
    assert rel(f, sauter_fermion_exact(amp, width, kp, kt)) < 2e-5


def test_pauli_bound_and_mapping():
    assert fermion_distribution_from_R(0j) == 0.0
    assert fermion_distribution_from_R(1e3 + 0j) < 1.0
    f = fermion_distribution_from_R(0.5 + 0.5j)
    assert f / (1 - f) == pytest.approx(0.5)


def test_zero_field():
    assert solve_fermion_mode(ZERO_FIELD, MomentumPoint(0.1, 0.2)).f == 0.0


def test_gauge_covariance(alt2):
    ks = np.linspace(-0.2, 0.2, 9)
    base = fermion_spectrum(alt2, ks).f
    shifted = fermion_spectrum(alt2.shifted_gauge(-0.4), ks - 0.4).f
    assert np.max(np.abs(base - shifted)) < 1e-8 * np.max(base)


def test_method_tag_and_difference_from_boson(alt2):
    ks = np.linspace(-0.05, 0.05, 5)
    ft = fermion_spectrum(alt2, ks)
    bt = spectrum(alt2, ks)
    assert ft.method == "fermion"
    assert not np.allclose(ft.f, bt.f, rtol=1e-2, atol=0.0)
