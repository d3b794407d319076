"""Parameter records for the electron-circuit and electron-ion systems.

All frequencies and couplings are angular (rad/s); rates are 1/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .constants import HBAR, M_BE9, M_E
from .errors import ContractError, SingularityError

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class CircuitParams:
    """Electron phonon, readout cavity and transmon (frequencies in rad/s)."""

    omega_e: float
    omega_mw: float
    omega_q: float
    g_ec: float
    g_sc: float

    def __post_init__(self):
        for name in ("omega_e", "omega_mw", "omega_q"):
            if not getattr(self, name) > 0:
                raise ContractError(f"{name} must be positive")
        if self.g_ec < 0 or self.g_sc < 0:
            raise ContractError("couplings must be non-negative")

    @classmethod
    def table1(cls, omega_e: float = TWO_PI * 1e9) -> CircuitParams:
        return cls(
            omega_e=omega_e,
            omega_mw=TWO_PI * 1e9,
            omega_q=TWO_PI * 4e9,
            g_ec=TWO_PI * 33e3,
            g_sc=TWO_PI * 200e6,
        )

    def with_omega_e(self, omega_e: float) -> CircuitParams:
        return replace(self, omega_e=omega_e)

    @property
    def delta_sc(self) -> float:
        return self.omega_mw - self.omega_q

    @property
    def delta_ec(self) -> float:
        return self.omega_mw - self.omega_e

    @property
    def chi(self) -> float:
        if self.delta_sc == 0:
            raise SingularityError("chi diverges: transmon resonant with the cavity")
        return self.g_sc**2 / self.delta_sc

    @property
    def delta(self) -> float:
        """Phonon detuning from the qubit-shifted cavity, delta_ec - chi."""
        return self.delta_ec - self.chi

    def is_dispersive(self) -> bool:
        return abs(self.delta_sc) >= 10 * self.g_sc


@dataclass(frozen=True)
class ElectronIonParams:
    """Electron-ion pair at separation `L`; `beta` and `alpha_k` in rad/s."""

    omega_e: float
    omega_i: float
    L: float
    m_e: float = M_E
    m_i: float = M_BE9
    beta: float = 0.0
    alpha_k: float = 0.0

    def __post_init__(self):
        if not self.L > 0:
            raise ContractError("separation L must be positive")
        if not (self.omega_e > 0 and self.omega_i > 0):
            raise ContractError("secular frequencies must be positive")
        if self.omega_e == self.omega_i:
            raise ContractError("omega_e and omega_i must differ")
        if max(self.x_zpf, self.y_zpf) >= self.L / 10:
            raise ContractError("zero-point motion is not small compared with L")

    @property
    def x_zpf(self) -> float:
        return math.sqrt(HBAR / (2 * self.m_e * self.omega_e))

    @property
    def y_zpf(self) -> float:
        return math.sqrt(HBAR / (2 * self.m_i * self.omega_i))


@dataclass(frozen=True)
class ThermalEnv:
    """Bath temperature, bath coupling rate and anomalous heating rate."""

    T: float
    gamma_th: float = 0.0
    heating_rate: float = 0.0

    def __post_init__(self):
        if self.T < 0 or self.gamma_th < 0 or self.heating_rate < 0:
            raise ContractError("temperature and rates must be non-negative")
