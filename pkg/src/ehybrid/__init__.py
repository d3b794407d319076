"""Feasibility toolkit for trapped-electron hybrid quantum systems.

Submodules
----------
qcore
    Truncated Fock-space operators and a labelled Hermitian eigensolver.
hamiltonians
    Readout and electron-ion Hamiltonians (returned as H/hbar in rad/s).
dispersive
    Phonon-transmon dispersive coupling and the electrical readout budget.
cooling
    Thermal occupations, the measurement-based protocol, sympathetic cooling.
coulomb
    Electron-ion Coulomb expansion and coupling constants.
trapfields
    Strip-electrode fields, field-map ingestion, pseudopotential analysis.
spectra
    Lorentzian fitting and mode finding for transmission traces.
"""

from .errors import (
    ConfigError,
    ContractError,
    DimensionError,
    EHybridError,
    FitError,
    ParseError,
    RangeWarning,
    SchemaError,
    ShapeError,
    SingularityError,
    TruncationWarning,
)
from .params import TWO_PI, CircuitParams, ElectronIonParams, ThermalEnv

__version__ = "0.1.0"

__all__ = [
    "CircuitParams",
    "ConfigError",
    "ContractError",
    "DimensionError",
    "EHybridError",
    "ElectronIonParams",
    "FitError",
    "ParseError",
    "RangeWarning",
    "SchemaError",
    "ShapeError",
    "SingularityError",
    "TWO_PI",
    "ThermalEnv",
    "TruncationWarning",
]
