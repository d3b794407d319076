"""Phonon-dependent qubit shift of the electron / cavity / transmon chain.

Run with ``python3 demos/01_dispersive_coupling.py``.
"""

# %% [markdown]
# The electron phonon couples to the microwave cavity, which couples to a
# transmon.  Eliminating the cavity leaves a cross-Kerr term zeta between
# phonon number and qubit state.  Three estimates are compared: the full
# closed form, its near-pole reduction -g_ec^2/delta, and exact
# diagonalization of the truncated three-mode Hamiltonian.

# %%
import warnings

import numpy as np

from ehybrid.dispersive import zeta_poles, zeta_sweep
from ehybrid.params import TWO_PI, CircuitParams

p = CircuitParams.table1()
lo, hi = zeta_poles(p)
print(f"closed-form poles: {lo / TWO_PI / 1e6:.3f} MHz and {hi / TWO_PI / 1e6:.3f} MHz")
print(f"second-order cavity shift chi/2pi = {p.chi / TWO_PI / 1e6:.3f} MHz")

# %% [markdown]
# A coarse sweep across both poles.  Near a pole the second-order closed
# form diverges while the exact value stays finite; the regime column flags
# those points.

# %%
grid = TWO_PI * np.array([900, 950, 980, 985, 986.5, 988, 1000, 1010, 1013, 1016, 1050]) * 1e6
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    points = zeta_sweep(p, grid)
print(f"{'f_e (MHz)':>10} {'analytic':>12} {'approx':>12} {'numeric':>12}  regime   (Hz)")
for pt in points:
    r = pt.row()
    print(f"{r['omega_e_hz'] / 1e6:10.1f} {r['zeta_analytic_hz']:12.4g} {r['zeta_approx_hz']:12.4g} "
          f"{r['zeta_numeric_hz']:12.4g}  {r['regime']}")

# %% [markdown]
# The exact pole positions differ from the closed form because the true
# dressed cavity shift carries fourth-order corrections in g_sc/Delta_sc.
# For the transmon in |e> the exact Jaynes-Cummings shift is

# %%
d = p.delta_sc
shift_e = (d - np.sqrt(d**2 + 8 * p.g_sc**2)) / 2 + (np.sqrt(d**2 + 4 * p.g_sc**2) - d) / 2
print(f"exact |e> cavity shift: {-shift_e / TWO_PI / 1e6:.4f} MHz vs {abs(p.chi) / TWO_PI / 1e6:.4f} MHz")
