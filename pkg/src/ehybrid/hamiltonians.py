"""Hamiltonian builders.

Builders return H/hbar, i.e. operators whose eigenvalues are angular
frequencies in rad/s.  Counter-rotating terms are dropped throughout.
"""

from __future__ import annotations

from .constants import CONST
from .errors import ContractError, DimensionError
from .params import CircuitParams, ElectronIonParams
from .qcore import HilbertOp, embed, ladder, qubit_ops

#: ionization threshold of the 1P1 state of calcium
IONIZATION_THRESHOLD_NM = 389.81


def _check_truncation(*ns: int) -> None:
    for n in ns:
        if int(n) != n or n < 2:
            raise DimensionError(f"Fock truncation must be an integer >= 2, got {n}")


def build_H_ec(p: CircuitParams, n_fock_e: int, n_fock_mw: int) -> HilbertOp:
    """Phonon-cavity beam splitter on dims [n_fock_e, n_fock_mw]."""
    _check_truncation(n_fock_e, n_fock_mw)
    dims = (n_fock_e, n_fock_mw)
    a, ad = (embed(op, 0, dims) for op in ladder(n_fock_e))
    b, bd = (embed(op, 1, dims) for op in ladder(n_fock_mw))
    return (
        p.omega_e * (ad @ a)
        + p.omega_mw * (bd @ b)
        + p.g_ec * (ad @ b + a @ bd)
    )


def build_H_read(p: CircuitParams, n_fock_e: int, n_fock_mw: int) -> HilbertOp:
    """Phonon + cavity + two-level transmon on dims [n_fock_e, n_fock_mw, 2].

    Qubit basis is (g, e) with sigma_z|e> = +|e>.
    """
    _check_truncation(n_fock_e, n_fock_mw)
    dims = (n_fock_e, n_fock_mw, 2)
    a, ad = (embed(op, 0, dims) for op in ladder(n_fock_e))
    b, bd = (embed(op, 1, dims) for op in ladder(n_fock_mw))
    sz, sm, sp = (embed(op, 2, dims) for op in qubit_ops())
    h_ec = p.omega_e * (ad @ a) + p.g_ec * (ad @ b + a @ bd)
    h_sc = p.omega_mw * (bd @ b) + 0.5 * p.omega_q * sz + p.g_sc * (bd @ sm + b @ sp)
    return h_ec + h_sc


def excitation_number(n_fock_e: int, n_fock_mw: int) -> HilbertOp:
    """a^dag a + b^dag b + (sigma_z + 1)/2, conserved by :func:`build_H_read`."""
    dims = (n_fock_e, n_fock_mw, 2)
    a, ad = (embed(op, 0, dims) for op in ladder(n_fock_e))
    b, bd = (embed(op, 1, dims) for op in ladder(n_fock_mw))
    sz = embed(qubit_ops()[0], 2, dims)
    return ad @ a + bd @ b + 0.5 * (sz + sz @ sz)


def build_H_electron_ion(
    p: ElectronIonParams, g0: float, alpha: float, n_e: int, n_i: int
) -> HilbertOp:
    """Optomechanical-type electron-ion Hamiltonian on dims [n_e, n_i]."""
    _check_truncation(n_e, n_i)
    dims = (n_e, n_i)
    a, ad = (embed(op, 0, dims) for op in ladder(n_e))
    c, cd = (embed(op, 1, dims) for op in ladder(n_i))
    n_el = ad @ a
    return (
        p.omega_e * n_el
        + p.omega_i * (cd @ c)
        - g0 * (n_el @ (cd + c))
        - 0.5 * alpha * (ad @ ad @ a @ a)
    )


def photoionization_excess_energy(wavelength: float) -> float:
    """Photon energy above the 1P1 ionization threshold, in joules.

    `wavelength` is in metres.  Negative below threshold.
    """
    if not wavelength > 0:
        raise ContractError("wavelength must be positive")
    hc = CONST.h * CONST.c
    return hc / wavelength - hc / (IONIZATION_THRESHOLD_NM * 1e-9)


def photoionization_excess_energy_mev(wavelength: float) -> float:
    return photoionization_excess_energy(wavelength) / CONST.e * 1e3
