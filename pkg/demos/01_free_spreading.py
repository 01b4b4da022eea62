"""Ballistic spreading of a single-site excitation on an untilted chain.

With no tilt the packet spreads inside a light cone |n| <= v_max t, where
v_max = coupling * spacing / 2 is the largest group velocity in the band.
The site amplitudes are Bessel functions of the first kind, which the
closed-form propagator reproduces to machine precision.
"""

import numpy as np

from blochqst import (
    ChainSpec,
    bessel_jn,
    build_free_hamiltonian,
    evolve,
    free_propagator_element,
    group_velocity,
    position_variance,
)
from blochqst.transfer import sharp_state

coupling = 1.0
chain = ChainSpec(coupling=coupling, force=0.0, left=-60, right=60, target=0)
h = build_free_hamiltonian(chain)
psi0 = sharp_state(chain)

v_max = group_velocity(np.pi / 2, coupling)  # band centre, kappa d = pi/2
print(f"chain of {chain.n_sites} sites, coupling {coupling}, no tilt")
print(f"maximum group velocity v_max = {v_max} sites per unit time")
print()

for t in (5.0, 10.0, 20.0):
    psi = evolve(psi0, h, t)
    profile = np.abs(psi.amplitudes) ** 2

    # measured cone edge: outermost site holding more than 1e-6 probability
    occupied = chain.sites[profile > 1e-6]
    spread = float(np.sqrt(position_variance(psi)))
    print(f"t = {t:5.1f}:  cone edge predicted {v_max * t:5.1f}, "
          f"occupied out to |n| = {np.max(np.abs(occupied))}, "
          f"rms width {spread:6.3f} (ballistic estimate {t * coupling / (2 * np.sqrt(2)):6.3f})")

print()

# amplitudes at t = 20 next to the exact propagator column
t = 20.0
psi = evolve(psi0, h, t)
print("site   |amplitude|    |J_n(t coupling / 2)|   propagator error")
for n in (0, 5, 10, 14):
    measured = abs(psi.amplitudes[n - chain.left])
    bessel = abs(bessel_jn(n, 0.5 * t * coupling))
    exact = free_propagator_element(n, 0, t, coupling)
    err = abs(psi.amplitudes[n - chain.left] - exact)
    print(f"{n:4d}   {measured:.10f}   {bessel:.10f}          {err:.2e}")
