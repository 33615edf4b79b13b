"""The k = 0 yield of a six-pulse train as a function of the pulse spacing.

Each adjacent pair of turning points contributes a phase theta(T); the
Fabry-Perot factor sin^2(6 theta)/sin^2(theta) then produces one tall peak
whenever theta is a multiple of pi, with four small side peaks in between.
The numerical solve follows the same pattern with the main peaks in the
same places.

Run: python3 demos/02_fabry_perot_in_delay.py  (about 40 s)
"""

import numpy as np

from bosonpair import MomentumPoint, make_pulse_train, solve_mode
from bosonpair.scan import periodic_peaks, refine_peak
from bosonpair.semiclassical import approx_spectrum_npulse

delays = np.round(175.0 + 0.02 * np.arange(300), 10)
k0 = MomentumPoint(0.0)
semi, exact = [], []
for T in delays:
    cfg = make_pulse_train(6, "alternating", 0.1, 0.05, float(T), gauge="first_pulse")
    semi.append(approx_spectrum_npulse(cfg, k0))
    exact.append(solve_mode(cfg, k0).f)
semi, exact = np.array(semi), np.array(exact)

main, side = periodic_peaks(delays, semi)
print("semiclassical main peaks at T =", [round(refine_peak(delays, semi, i), 3) for i in main])
print("side peaks between them:", side)
main_n, _ = periodic_peaks(delays, exact)
print("numerical main peaks at     T =", [round(refine_peak(delays, exact, i), 3) for i in main_n])
print(f"peak heights: semiclassical {semi.max():.3e}, numerical {exact.max():.3e}")
