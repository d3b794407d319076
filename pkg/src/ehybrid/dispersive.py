"""Phonon-transmon dispersive coupling and the electrical readout budget.

Three estimates of the dispersive coupling zeta (coefficient of
a^dag a sigma_z) are provided: the second-order closed form, its near-pole
reduction -g_ec^2/delta, and exact diagonalization of the readout
Hamiltonian.  The numerical value is the shift of the qubit transition per
phonon,

    zeta_num = [E(e,1) - E(e,0)] - [E(g,1) - E(g,0)],

using dressed energies of the zero-photon states.  This is the quantity the
closed form describes (both reduce to -g_ec^2/delta next to a pole).
"""

from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import mpmath
import numpy as np

from .constants import HBAR, K_B
from .errors import ContractError, SingularityError, TruncationWarning
from .hamiltonians import build_H_read
from .params import TWO_PI, CircuitParams
from .qcore import HilbertOp, eig_hermitian, product_labels

POLE_RTOL = 1e-9
RAYLEIGH_DPS = 40


class Regime(str, enum.Enum):
    DISPERSIVE = "dispersive"
    NEAR_RESONANT = "near-resonant"


def zeta_poles(p: CircuitParams) -> tuple[float, float]:
    """Phonon frequencies (rad/s) where the closed form diverges, ascending."""
    shift = abs(p.chi)
    return tuple(sorted((p.omega_mw - shift, p.omega_mw + shift)))


def pole_detuning(p: CircuitParams) -> float:
    """Distance (rad/s) from omega_e to the nearest pole of the closed form."""
    return min(abs(p.omega_e - w) for w in zeta_poles(p))


def zeta_analytic(p: CircuitParams) -> float:
    """2 g_ec^2 g_sc^2 D_sc / (g_sc^4 - D_ec^2 D_sc^2), rad/s."""
    g4 = p.g_sc**4
    dd = (p.delta_ec * p.delta_sc) ** 2
    denom = g4 - dd
    if abs(denom) <= POLE_RTOL * max(g4, dd):
        lo, hi = zeta_poles(p)
        raise SingularityError(
            "dispersive coupling diverges: omega_e/2pi is at a pole "
            f"({lo / TWO_PI:.9g} Hz or {hi / TWO_PI:.9g} Hz)"
        )
    return 2 * p.g_ec**2 * p.g_sc**2 * p.delta_sc / denom


def zeta_approx(p: CircuitParams) -> float:
    """-g_ec^2 / delta, valid for g_ec << |delta| << |chi|."""
    if abs(p.delta) <= POLE_RTOL * max(abs(p.delta_ec), abs(p.chi)):
        raise SingularityError("delta = 0: phonon resonant with the shifted cavity")
    return -p.g_ec**2 / p.delta


@dataclass(frozen=True)
class ZetaPoint:
    omega_e: float
    zeta_analytic: float
    zeta_approx: float
    zeta_numeric: float
    regime: Regime
    delta: float
    pole_detuning: float
    ambiguous: bool = False
    converged: bool = True

    def row(self) -> dict:
        return {
            "omega_e_hz": self.omega_e / TWO_PI,
            "zeta_analytic_hz": self.zeta_analytic / TWO_PI,
            "zeta_approx_hz": self.zeta_approx / TWO_PI,
            "zeta_numeric_hz": self.zeta_numeric / TWO_PI,
            "regime": self.regime.value,
        }


# bare labels are (n_phonon, n_photon, qubit) with qubit 0 = g, 1 = e
_G0, _G1 = (0, 0, 0), (1, 0, 0)
_E0, _E1 = (0, 0, 1), (1, 0, 1)


def _rayleigh(block: np.ndarray, v: np.ndarray) -> mpmath.mpf:
    """v^dag B v / v^dag v with exact products (float inputs, 40 digits)."""
    with mpmath.workdps(RAYLEIGH_DPS):
        vm = [mpmath.mpc(complex(x)) for x in v]
        num = mpmath.mpc(0)
        for i, j in zip(*np.nonzero(block)):
            num += mpmath.conj(vm[i]) * mpmath.mpc(complex(block[i, j])) * vm[j]
        den = mpmath.fsum(abs(x) ** 2 for x in vm)
        return num.real / den


def _block_energies(H: HilbertOp, offset_per_excitation: float):
    """Dressed energies of the four zero-photon reference states.

    `H` conserves the excitation number, so each block is diagonalized
    separately; subtracting offset*N inside block N keeps the eigenproblem
    well conditioned.  The eigenvalue of each reference state is then
    re-evaluated as the Rayleigh quotient of its eigenvector on the original
    block with exact products, which removes the eps*|H| round-off of the
    dense solver (the error left is second order in the eigenvector error).
    """
    labels = product_labels(H.dims)
    n_exc = np.array([ne + nb + q for ne, nb, q in labels])
    energies, ambiguous = {}, False
    for n, refs in ((0, [_G0]), (1, [_G1, _E0]), (2, [_E1])):
        idx = np.flatnonzero(n_exc == n)
        raw = H.data[np.ix_(idx, idx)]
        block = raw - offset_per_excitation * n * np.eye(len(idx))
        res = eig_hermitian(HilbertOp((len(idx),), block), [labels[i] for i in idx])
        for ref in refs:
            energies[ref] = _rayleigh(raw, res.eigenvectors[:, res.assignments[ref]])
            ambiguous |= res.is_ambiguous(ref)
    return energies, ambiguous


def zeta_from_hamiltonian(H: HilbertOp, offset_per_excitation: float = 0.0):
    """(zeta, ambiguous) from a readout Hamiltonian on dims [n_e, n_mw, 2]."""
    E, ambiguous = _block_energies(H, offset_per_excitation)
    with mpmath.workdps(RAYLEIGH_DPS):
        zeta = (E[_E1] - E[_E0]) - (E[_G1] - E[_G0])
    return float(zeta), ambiguous


def phonon_shift_numeric(p: CircuitParams, n_fock: int = 6, qubit: int = 0) -> float:
    """Dressed phonon frequency minus omega_e for the given qubit state."""
    E, _ = _block_energies(build_H_read(p, n_fock, n_fock), p.omega_mw)
    hi, lo = (_G1, _G0) if qubit == 0 else (_E1, _E0)
    with mpmath.workdps(RAYLEIGH_DPS):
        return float(E[hi] - E[lo] - p.omega_e)


def _safe(f, p):
    try:
        return f(p)
    except SingularityError:
        return math.nan


def zeta_numeric(p: CircuitParams, n_fock: int = 6, check_convergence: bool = True) -> ZetaPoint:
    """Dispersive coupling from exact diagonalization at Fock truncation `n_fock`.

    The result is compared against truncation ``n_fock + 2``; a relative
    change above 1% emits :class:`TruncationWarning`.
    """
    if int(n_fock) != n_fock or n_fock < 4:
        raise ContractError("n_fock must be an integer >= 4")
    zeta, ambiguous = zeta_from_hamiltonian(build_H_read(p, n_fock, n_fock), p.omega_mw)
    converged = True
    if check_convergence:
        z2, _ = zeta_from_hamiltonian(build_H_read(p, n_fock + 2, n_fock + 2), p.omega_mw)
        floor = 1e-9 * max(p.g_ec, 1.0)
        if abs(z2 - zeta) > 0.01 * abs(z2) + floor:
            converged = False
            warnings.warn(
                f"zeta not converged at n_fock={n_fock}: {zeta:.6g} vs {z2:.6g} rad/s",
                TruncationWarning,
                stacklevel=2,
            )
    detuning = _safe(pole_detuning, p)
    near = ambiguous or not detuning >= 3 * p.g_ec
    return ZetaPoint(
        omega_e=p.omega_e,
        zeta_analytic=_safe(zeta_analytic, p),
        zeta_approx=_safe(zeta_approx, p),
        zeta_numeric=zeta,
        regime=Regime.NEAR_RESONANT if near else Regime.DISPERSIVE,
        delta=_safe(lambda q: q.delta, p),
        pole_detuning=detuning,
        ambiguous=ambiguous,
        converged=converged,
    )


def zeta_sweep(
    p: CircuitParams, omega_e_grid: Sequence[float], n_fock: int = 6
) -> list[ZetaPoint]:
    """Evaluate all three estimates at every phonon frequency of the grid."""
    grid = np.asarray(omega_e_grid, dtype=float)
    if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
        raise ContractError("omega_e grid must be one-dimensional and strictly increasing")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        points = [zeta_numeric(p.with_omega_e(float(w)), n_fock) for w in grid]
    if not all(pt.converged for pt in points):
        warnings.warn("zeta not converged at some sweep points", TruncationWarning, stacklevel=2)
    return points


SWEEP_COLUMNS = ("omega_e_hz", "zeta_analytic_hz", "zeta_approx_hz", "zeta_numeric_hz", "regime")


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return f"{x:.12g}"


def write_sweep_csv(points: Iterable[ZetaPoint], fh: IO[str], params: CircuitParams | None = None):
    if params is not None:
        fh.write(
            "# omega_mw_hz={} omega_q_hz={} g_ec_hz={} g_sc_hz={}\n".format(
                *(_fmt(v / TWO_PI) for v in (params.omega_mw, params.omega_q, params.g_ec, params.g_sc))
            )
        )
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for pt in points:
        r = pt.row()
        w.writerow([_fmt(r[c]) for c in SWEEP_COLUMNS])


# -- electrical readout --------------------------------------------------------


@dataclass(frozen=True)
class ReadoutBudget:
    noise_density: float          # W/Hz
    noise_density_dbm: float      # dBm/Hz
    noise_temperature: float      # K
    emission_rate: float          # 1/s
    extraction_efficiency: float
    n_min: float
    n_min_unit_efficiency: float

    def to_dict(self) -> dict:
        return {
            "noise_density_w_per_hz": self.noise_density,
            "noise_density_dbm_per_hz": self.noise_density_dbm,
            "noise_temperature_k": self.noise_temperature,
            "emission_rate_per_s": self.emission_rate,
            "extraction_efficiency": self.extraction_efficiency,
            "n_min": self.n_min,
            "n_min_unit_efficiency": self.n_min_unit_efficiency,
        }


def noise_temperature_from_dbm(dbm_per_hz: float) -> float:
    """Amplifier noise temperature for a noise density in dBm/Hz."""
    return 10 ** (dbm_per_hz / 10) * 1e-3 / K_B


def readout_budget(
    omega_mw: float, g_ec: float, kappa_int: float, kappa_ext: float, T_N: float
) -> ReadoutBudget:
    """Phonon-number sensitivity of cavity-assisted electrical detection.

    A phonon leaks into the cavity at 4 g_ec^2/kappa; a fraction
    kappa_ext/kappa reaches the amplifier, whose noise k_B T_N per unit
    bandwidth equals this many quanta hbar omega_mw.
    """
    if kappa_ext <= 0 or kappa_int < 0 or T_N <= 0 or omega_mw <= 0:
        raise ContractError("rates, noise temperature and frequency must be positive")
    kappa = kappa_int + kappa_ext
    eta = kappa_ext / kappa
    density = K_B * T_N
    quanta = density / (HBAR * omega_mw)
    return ReadoutBudget(
        noise_density=density,
        noise_density_dbm=10 * math.log10(density / 1e-3),
        noise_temperature=T_N,
        emission_rate=4 * g_ec**2 / kappa,
        extraction_efficiency=eta,
        n_min=quanta / eta,
        n_min_unit_efficiency=quanta,
    )
