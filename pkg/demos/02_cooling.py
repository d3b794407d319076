"""Cooling the electron's readout mode: passive, measurement-based, sympathetic.

Run with ``python3 demos/02_cooling.py``.
"""

# %% [markdown]
# Passive cooling through the cavity line only reaches the bath occupation;
# anomalous heating adds Lambda/Gamma_c on top.

# %%
import numpy as np

from ehybrid.cooling import (
    CoolingProtocolParams,
    PopulationState,
    SympatheticParams,
    bose_einstein,
    cavity_cooling_equilibrium,
    geometric_tail,
    run_cooling_protocol,
    sympathetic_steady_state,
)
from ehybrid.params import TWO_PI, ThermalEnv

omega = TWO_PI * 1e9
env = ThermalEnv(0.3, heating_rate=140.0)
print(f"bath occupation at 1 GHz, 300 mK: {bose_einstein(omega, 0.3):.3f}")
print(f"with 140 /s heating and 2pi x 33 kHz coupling: {cavity_cooling_equilibrium(TWO_PI * 33e3, env, omega):.5f}")

# %% [markdown]
# The transmon protocol removes one quantum per cycle from every Fock
# state, so with perfect pulses a thermal state loses its geometric tail:
# after k cycles the mean is nbar (nbar/(nbar+1))^k.

# %%
ideal = CoolingProtocolParams(pulse_error=0.0, readout_error=0.0)
traj = run_cooling_protocol(ideal, PopulationState.thermal(6.0, ideal.n_cavity_max), 30)
print(f"cycle time {ideal.cycle_time * 1e6:.3f} us")
for k in (0, 5, 10, 20, 30):
    print(f"cycle {k:2d}: mean n = {traj[k].mean_n:.5f}  (oracle {geometric_tail(6.0, k):.5f})  p(g,0) = {traj[k].p_g0:.4f}")

# %% [markdown]
# With 1% pulse and readout errors and the cavity rethermalizing at
# omega/Q for Q = 1e6, the protocol settles to a small steady occupation.

# %%
noisy = CoolingProtocolParams(refill=ThermalEnv(0.3, gamma_th=omega / 1e6), n_cavity_max=60)
traj = run_cooling_protocol(noisy, PopulationState.thermal(6.0, 60), 200)
print(f"steady state after 200 cycles: mean n = {traj[-1].mean_n:.4f}")

# %% [markdown]
# Sympathetic cooling through a laser-cooled ion: the electron sees an
# extra damping 4 g^2 / Gamma_i.  The validity flag records whether the
# weak-coupling assumption Gamma_i > g holds.

# %%
n_th = bose_einstein(TWO_PI * 800e6, 0.3)
for g_khz in (1, 5, 10, 33, 100):
    res = sympathetic_steady_state(SympatheticParams(TWO_PI * g_khz * 1e3, TWO_PI * 10e3, 10.0, n_th))
    print(f"g/2pi = {g_khz:4d} kHz: n_e = {res.n_e:.4g}  weak coupling: {res.weak_coupling_valid}")
