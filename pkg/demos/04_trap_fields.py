"""Two-frequency surface trap for an electron and a beryllium ion.

Run with ``python3 demos/04_trap_fields.py``.
"""

# %% [markdown]
# Thin strips on a grounded plane have closed-form potentials.  The
# microwave strips confine the electron, the RF rails the ion; each species
# averages out the other drive.

# %%
import numpy as np

from ehybrid.trapfields import (
    Species,
    characterize_trap,
    coax_field_map,
    five_rail_layout,
    strip_potential,
)

lay = five_rail_layout()
for s in lay.strips:
    print(f"{s.role.value:>3}: {s.x_min * 1e6:7.1f} .. {s.x_max * 1e6:7.1f} um  {s.voltage:6.2f} V")

z = np.array([10e-6, 50e-6, 100e-6])
print("MW potential above centre [V]:", np.round(strip_potential(lay, 0.0, z, "MW"), 3))

# %% [markdown]
# Pseudopotential minima, secular frequencies and depths for both species.

# %%
for name, species in (("electron", Species.electron()), ("Be+", Species.beryllium_ion())):
    res = characterize_trap(lay, species)
    pos = res.min_position * 1e6
    print(f"{name:>8}: min at ({pos[0]:.1f}, {pos[1]:.1f}) um, "
          f"f_sec = {np.round(res.secular_freq_hz / 1e6, 2)} MHz, depth = {res.depth_ev * 1e3:.1f} meV, "
          f"q = {np.round(res.q, 3)}")

# %% [markdown]
# A coaxial microwave trap is represented by a gridded quadrupole field
# map, the same format an external solver would export.  Its Mathieu q
# lies beyond the usual adiabatic range, which the result notes.

# %%
res = characterize_trap(coax_field_map(), Species.electron())
print(f"coax: f_sec = {np.round(res.secular_freq_hz / 1e9, 3)} GHz, q = {np.round(res.q, 3)}")
for note in res.notes:
    print("  note:", note)
