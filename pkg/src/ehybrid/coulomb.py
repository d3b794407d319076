"""Electron-ion Coulomb coupling constants.

The interaction V(x, y) = -k / (L - y + x), k = e^2/(4 pi eps0), is expanded
about the two trap centres.  Closed forms for the optomechanical coupling
g0, the self-Kerr coefficient alpha and the drive-saturation limit g_max
are evaluated here.  A finite-difference Taylor oracle, run in extended
precision, provides an independent check of every expansion coefficient.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import IO, Sequence

import mpmath
import numpy as np

from .constants import CONST, HBAR
from .cooling import SympatheticParams, bose_einstein, sympathetic_steady_state
from .errors import ContractError, SingularityError
from .params import TWO_PI, ElectronIonParams

K_COULOMB = CONST.coulomb_k
ORACLE_DPS = 60


def analytic_coeff(i: int, j: int, L: float, k: float = K_COULOMB) -> float:
    """Coefficient of x^i y^j in the expansion of V."""
    n = i + j
    return -(k / L ** (n + 1)) * math.comb(n, i) * (-1) ** i


@dataclass(frozen=True)
class TaylorCoeffs:
    c: np.ndarray   # c[i, j], NaN where i + j > order
    order: int
    L: float

    def __getitem__(self, ij):
        return float(self.c[ij])


def _central_weights(m: int):
    """Offsets (in units of h) and weights of the m-th central difference."""
    return [(m / 2 - r, (-1) ** r * math.comb(m, r)) for r in range(m + 1)]


def taylor_oracle(p: ElectronIonParams, order: int = 4, step: float | None = None) -> TaylorCoeffs:
    """Expansion coefficients of V by central finite differences.

    Mixed derivatives use the tensor product of 1-D central difference
    stencils with step h = 1e-4 L, followed by one Richardson step
    (h, h/2).  Arithmetic runs at 60 significant digits so that the
    fourth-order stencils are not swamped by round-off.
    """
    if order < 4:
        raise ContractError("order must be >= 4")
    L = p.L
    h = L * 1e-4 if step is None else step
    if not (h > 0 and order * h < 0.5 * L):
        raise ContractError(f"finite-difference step {h!r} is unusable for L = {L!r}")

    with mpmath.workdps(ORACLE_DPS):
        k = mpmath.mpf(K_COULOMB)
        Lm = mpmath.mpf(L)

        def V(x, y):
            return -k / (Lm - y + x)

        def deriv(i, j, hh):
            total = mpmath.mpf(0)
            for ox, wx in _central_weights(i):
                for oy, wy in _central_weights(j):
                    total += wx * wy * V(ox * hh, oy * hh)
            return total / hh ** (i + j)

        hm = mpmath.mpf(h)
        c = np.full((order + 1, order + 1), np.nan)
        for i in range(order + 1):
            for j in range(order + 1 - i):
                d1, d2 = deriv(i, j, hm), deriv(i, j, hm / 2)
                d = (4 * d2 - d1) / 3
                c[i, j] = float(d / (mpmath.factorial(i) * mpmath.factorial(j)))
    return TaylorCoeffs(c, order, L)


@dataclass(frozen=True)
class CouplingSet:
    g0: float
    g_c: float
    alpha: float
    alpha_c: float
    g_max: float
    x_zpf: float
    y_zpf: float
    g0_coulomb: float
    provenance: dict = field(default_factory=dict, compare=False)


def g0_coulomb_term(p: ElectronIonParams) -> float:
    return K_COULOMB * 6 * p.x_zpf**2 * p.y_zpf / (HBAR * p.L**4)


def alpha_coulomb(p: ElectronIonParams) -> float:
    return K_COULOMB * 12 * p.x_zpf**4 / (HBAR * p.L**5)


def coupling_constants(p: ElectronIonParams, coeffs: TaylorCoeffs | None = None) -> CouplingSet:
    """g0, g_C, alpha, alpha_C and g_max = g0^2/|alpha| (all rad/s).

    The cross coupling g_C uses the xy coefficient from :func:`taylor_oracle`.
    """
    if coeffs is None:
        coeffs = taylor_oracle(p)
    g_c = coeffs[1, 1] * p.x_zpf * p.y_zpf / HBAR
    g0c = g0_coulomb_term(p)
    g0 = g0c - 2 * g_c * p.beta / (p.omega_e - p.omega_i)
    a_c = alpha_coulomb(p)
    alpha = a_c + p.alpha_k - 6 * p.beta**2 / p.omega_e
    if alpha == 0:
        raise SingularityError("alpha = 0: g_max is undefined")
    return CouplingSet(
        g0=g0,
        g_c=g_c,
        alpha=alpha,
        alpha_c=a_c,
        g_max=g0**2 / abs(alpha),
        x_zpf=p.x_zpf,
        y_zpf=p.y_zpf,
        g0_coulomb=g0c,
        provenance={
            "g0": "closed-form", "g_c": "oracle", "alpha": "closed-form",
            "alpha_c": "closed-form", "g_max": "closed-form",
        },
    )


def calibrate_beta(p: ElectronIonParams, target_g0: float) -> float:
    """Trap nonlinearity beta that makes g0 equal `target_g0` (rad/s)."""
    g_c = analytic_coeff(1, 1, p.L) * p.x_zpf * p.y_zpf / HBAR
    return (g0_coulomb_term(p) - target_g0) * (p.omega_e - p.omega_i) / (2 * g_c)


def calibrate_beta_from_alpha(p: ElectronIonParams, target_alpha: float) -> float:
    """Non-negative beta reproducing `target_alpha` for the given alpha_K."""
    rest = alpha_coulomb(p) + p.alpha_k - target_alpha
    if rest < 0:
        raise ContractError("target alpha exceeds alpha_C + alpha_K; no real beta")
    return math.sqrt(rest * p.omega_e / 6)


class Sideband(str, enum.Enum):
    TWO_MODE_SQUEEZE = "two-mode-squeeze"   # drive at omega_e + omega_i
    BEAM_SPLITTER = "beam-splitter"         # drive at omega_e - omega_i

    def drive_frequency(self, omega_e: float, omega_i: float) -> float:
        if self is Sideband.TWO_MODE_SQUEEZE:
            return omega_e + omega_i
        return omega_e - omega_i


def linearized_coupling(g0: float, n_d: float, mode: Sideband | str = Sideband.BEAM_SPLITTER) -> float:
    """Drive-enhanced coupling g0 sqrt(n_d); `mode` only labels the sideband."""
    Sideband(mode)
    if n_d < 0:
        raise ContractError("n_d must be non-negative")
    return g0 * math.sqrt(n_d)


def saturation_phonon_number(g0: float, g_max: float) -> float:
    """Drive occupation at which g0 sqrt(n_d) reaches g_max."""
    return (g_max / g0) ** 2


# -- published table comparison ---------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    """One electron-ion configuration plus the published comparison values (Hz)."""

    omega_e: float
    L: float
    omega_i: float = TWO_PI * 2e6
    g0_paper: float = math.nan
    alpha_paper: float = math.nan
    ne_paper: float = math.nan
    beta: float = 0.0
    alpha_k: float = 0.0
    gamma_i: float = TWO_PI * 10e3
    gamma_th: float = 10.0
    temperature: float = 0.3


TABLE2_ROWS = (
    TableRow(TWO_PI * 800e6, 10e-6, g0_paper=TWO_PI * 33e3, alpha_paper=TWO_PI * -33e3, ne_paper=5.3e-2),
    TableRow(TWO_PI * 800e6, 50e-6, g0_paper=TWO_PI * 0.39e3, alpha_paper=TWO_PI * -34e3, ne_paper=5.9),
    TableRow(TWO_PI * 500e6, 10e-6, g0_paper=TWO_PI * 39e3, alpha_paper=TWO_PI * -2.6e6, ne_paper=3.8e-2),
    TableRow(TWO_PI * 500e6, 7e-6, g0_paper=TWO_PI * 1.6e6, alpha_paper=TWO_PI * -2.5e6, ne_paper=2.2e-3),
)


@dataclass(frozen=True)
class TableReportRow:
    row: TableRow
    couplings: CouplingSet
    g_max_paper: float
    n_th: float
    ne_calc: float
    weak_coupling_valid: bool

    def record(self) -> dict:
        kHz = TWO_PI * 1e3
        r = self.row
        return {
            "omega_e_hz": r.omega_e / TWO_PI,
            "L_um": r.L * 1e6,
            "g0_calc_khz": self.couplings.g0 / kHz,
            "g0_paper_khz": r.g0_paper / kHz,
            "alpha_calc_khz": self.couplings.alpha / kHz,
            "alpha_paper_khz": r.alpha_paper / kHz,
            "gmax_khz": self.g_max_paper / kHz,
            "ne_calc": self.ne_calc,
            "ne_paper": r.ne_paper,
        }


def table2_report(rows: Sequence[TableRow] = TABLE2_ROWS) -> list[TableReportRow]:
    """Computed couplings next to published values, row by row.

    The computed alpha uses the supplied beta and alpha_K (zero by default),
    so its g_max is not comparable with the published one.  The drive-limited
    coupling for the sympathetic-cooling column is therefore g_max from the
    published g0 and alpha; n_th is the Bose-Einstein occupation at
    omega_e and the row temperature.  Nothing is adjusted to force agreement.
    """
    out = []
    for r in rows:
        p = ElectronIonParams(r.omega_e, r.omega_i, r.L, beta=r.beta, alpha_k=r.alpha_k)
        cs = coupling_constants(p)
        g_max_paper = r.g0_paper**2 / abs(r.alpha_paper)
        n_th = bose_einstein(r.omega_e, r.temperature)
        res = sympathetic_steady_state(SympatheticParams(g_max_paper, r.gamma_i, r.gamma_th, n_th))
        out.append(TableReportRow(r, cs, g_max_paper, n_th, res.n_e, res.weak_coupling_valid))
    return out


TABLE_COLUMNS = (
    "omega_e_hz", "L_um", "g0_calc_khz", "g0_paper_khz", "alpha_calc_khz",
    "alpha_paper_khz", "gmax_khz", "ne_calc", "ne_paper",
)


def write_table_csv(report: Sequence[TableReportRow], fh: IO[str]):
    fh.write("# calc: beta, alpha_K as configured; gmax and ne_calc use the published g0, alpha\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for rr in report:
        rec = rr.record()
        w.writerow([f"{rec[c]:.12g}" for c in TABLE_COLUMNS])
