"""CODATA 2018 physical constants (SI).

Values are frozen here instead of taken from :mod:`scipy.constants`, whose
recommended set changes between releases.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Constants:
    hbar: float = 1.054571817e-34        # J s
    h: float = 6.62607015e-34            # J s
    e: float = 1.602176634e-19           # C
    epsilon_0: float = 8.8541878128e-12  # F/m
    k_B: float = 1.380649e-23            # J/K
    m_e: float = 9.1093837015e-31        # kg
    u: float = 1.66053906660e-27         # kg
    c: float = 299792458.0               # m/s

    @property
    def hc_ev_nm(self) -> float:
        """h*c in eV nm."""
        return self.h * self.c / self.e * 1e9

    @property
    def coulomb_k(self) -> float:
        """e^2 / (4 pi eps0) in J m."""
        from math import pi
        return self.e**2 / (4 * pi * self.epsilon_0)


CONST = Constants()

HBAR = CONST.hbar
E_CHARGE = CONST.e
K_B = CONST.k_B
M_E = CONST.m_e
AMU = CONST.u
M_BE9 = 9.012 * AMU
