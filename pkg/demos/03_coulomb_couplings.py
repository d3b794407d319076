"""Electron-ion Coulomb coupling constants and the comparison table.

Run with ``python3 demos/03_coulomb_couplings.py``.
"""

# %% [markdown]
# Expanding -k/(L - y + x) in the electron and ion displacements gives the
# optomechanical coupling g0 (x^2 y term) and the electron self-Kerr alpha
# (x^4 term).  The expansion coefficients are checked against a
# finite-difference oracle evaluated in extended precision.

# %%
import sys

from ehybrid.coulomb import (
    analytic_coeff,
    calibrate_beta_from_alpha,
    coupling_constants,
    table2_report,
    taylor_oracle,
    write_table_csv,
)
from ehybrid.params import TWO_PI, ElectronIonParams

p = ElectronIonParams(TWO_PI * 800e6, TWO_PI * 2e6, 10e-6)
c = taylor_oracle(p)
worst = max(abs(c[i, j] / analytic_coeff(i, j, p.L) - 1) for i in range(5) for j in range(5 - i))
print(f"x_zpf = {p.x_zpf * 1e9:.1f} nm, y_zpf = {p.y_zpf * 1e9:.2f} nm")
print(f"worst oracle / closed-form mismatch up to 4th order: {worst:.2e}")

# %% [markdown]
# With no trap nonlinearity (beta = alpha_K = 0) only the Coulomb terms
# remain.

# %%
cs = coupling_constants(p)
print(f"g0/2pi = {cs.g0 / TWO_PI / 1e3:.2f} kHz, alpha_C/2pi = {cs.alpha_c / TWO_PI / 1e3:.2f} kHz")

# %% [markdown]
# A trap nonlinearity beta shifts both g0 and alpha.  Choosing beta so that
# alpha matches a target of -2pi x 33 kHz also moves g0 close to 33 kHz.

# %%
beta = calibrate_beta_from_alpha(p, TWO_PI * -33e3)
cb = coupling_constants(ElectronIonParams(p.omega_e, p.omega_i, p.L, beta=beta))
print(f"beta/2pi = {beta / TWO_PI / 1e6:.3f} MHz -> g0/2pi = {cb.g0 / TWO_PI / 1e3:.2f} kHz, "
      f"alpha/2pi = {cb.alpha / TWO_PI / 1e3:.2f} kHz")

# %% [markdown]
# Side-by-side comparison with the published values (beta = 0 column).

# %%
write_table_csv(table2_report(), sys.stdout)
