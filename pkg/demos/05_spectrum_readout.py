"""Resonator characterization and the electrical readout budget.

Run with ``python3 demos/05_spectrum_readout.py``.
"""

# %% [markdown]
# A transmission trace through a lambda/4 resonator is a Lorentzian whose
# peak height fixes the split of the total Q into internal and external
# parts.

# %%
import numpy as np

from ehybrid.dispersive import noise_temperature_from_dbm, readout_budget
from ehybrid.params import TWO_PI
from ehybrid.spectra import SpectrumTrace, find_modes, fit_lorentzian, lorentzian, synthetic_trace

trace = synthetic_trace(1.2e9, 1.8e4, 1.8e4, noise=0.01, rng=np.random.default_rng(0))
fit = fit_lorentzian(trace)
print(f"f0 = {fit.f0 / 1e9:.6f} GHz, Q_tot = {fit.q_tot:.0f}, Q_int = {fit.q_int:.0f}, Q_ext = {fit.q_ext:.0f}")

# %% [markdown]
# A wide scan shows the odd harmonics of the quarter-wave line.

# %%
f = np.linspace(0.5e9, 7e9, 20001)
wide = SpectrumTrace(f, sum(lorentzian(f, f0, 4e6, 2e6) for f0 in (1.2e9, 3.7e9, 6.1e9)))
for m in sorted(find_modes(wide, 0.1), key=lambda m: m.frequency):
    print(f"{m.frequency / 1e9:.3f} GHz  n = {m.harmonic}  {m.label}")

# %% [markdown]
# Detecting a single motional quantum through the cavity: the amplifier
# noise, expressed in quanta at the cavity frequency, sets how many
# phonons must be emitted per unit bandwidth.

# %%
T_N = noise_temperature_from_dbm(-195.0)
kappa_ext = TWO_PI * 1.2e9 / 1e5
for q_int in (np.inf, 1e5, 1e4):
    kappa_int = 0.0 if np.isinf(q_int) else TWO_PI * 1.2e9 / q_int
    b = readout_budget(TWO_PI * 1.2e9, TWO_PI * 33e3, kappa_int, kappa_ext, T_N)
    print(f"Q_int = {q_int:>7}: eta = {b.extraction_efficiency:.3f}, n_min = {b.n_min:.1f}")
print(f"T_N at -195 dBm/Hz: {T_N:.3f} K")
