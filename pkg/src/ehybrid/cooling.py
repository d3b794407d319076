"""Thermal occupations and cooling schemes for the electron phonon mode.

The measurement-based transmon protocol is simulated on diagonal
populations p[xi, n] over qubit level xi in (g, e, f) and cavity Fock number
n.  Every step is a pi pulse, a projective measurement, or incoherent
thermalization, so coherences never enter the populations.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np
from scipy.linalg import expm

from .constants import HBAR, K_B
from .errors import ContractError, SingularityError
from .params import TWO_PI, ThermalEnv

G, E, F = 0, 1, 2
NORM_TOL = 1e-9


def bose_einstein(omega: float, T: float) -> float:
    """Mean thermal occupation of a mode at angular frequency `omega`."""
    if not omega > 0:
        raise ContractError("omega must be positive")
    if T < 0:
        raise ContractError("temperature must be non-negative")
    if T == 0:
        return 0.0
    return 1.0 / math.expm1(HBAR * omega / (K_B * T))


def cavity_cooling_equilibrium(gamma_c: float, env: ThermalEnv, omega: float) -> float:
    """Occupation when a bath coupling `gamma_c` competes with anomalous heating."""
    if gamma_c <= 0:
        raise SingularityError("cavity coupling rate must be positive")
    return (gamma_c * bose_einstein(omega, env.T) + env.heating_rate) / gamma_c


# -- measurement-based cooling protocol ----------------------------------------


@dataclass(frozen=True)
class CoolingProtocolParams:
    """Pulse rates (rad/s), error probabilities and refill bath of one cycle.

    With ``ladder=True`` the |g,1> <-> |f,0> pulse is assumed to act on every
    |g,n> <-> |f,n-1> pair with the same fidelity; otherwise only on n = 1.
    ``pulses=False`` leaves only the refill step (thermalization check).
    """

    rabi_gf: float = TWO_PI * 3e6
    rabi_ef: float = TWO_PI * 3e6
    rabi_ge: float = TWO_PI * 10e6
    pulse_error: float = 0.01
    t_meas: float = 1e-6
    readout_error: float = 0.01
    n_cavity_max: int = 200
    mode_frequency: float = TWO_PI * 1e9
    refill: ThermalEnv | None = None
    ladder: bool = True
    pulses: bool = True

    def __post_init__(self):
        if not (0 <= self.pulse_error < 1 and 0 <= self.readout_error < 1):
            raise ContractError("error probabilities must lie in [0, 1)")
        if min(self.rabi_gf, self.rabi_ef, self.rabi_ge) <= 0 or self.t_meas < 0:
            raise ContractError("Rabi rates must be positive and t_meas non-negative")
        if self.n_cavity_max < 1:
            raise ContractError("n_cavity_max must be >= 1")
        if self.cycle_time <= 0:
            raise ContractError("cycle time must be positive")

    @property
    def cycle_time(self) -> float:
        return (
            math.pi / self.rabi_gf
            + math.pi / self.rabi_ef
            + self.t_meas
            + math.pi / self.rabi_ge
        )


@dataclass(frozen=True)
class PopulationState:
    p: np.ndarray = field(repr=False)
    time: float = 0.0

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 2 or p.shape[0] != 3:
            raise ContractError("populations must have shape (3, n_cavity_max + 1)")
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @classmethod
    def thermal(cls, mean_n: float, n_cavity_max: int, qubit: int = G) -> PopulationState:
        """Geometric cavity distribution, renormalized on the truncated ladder."""
        p = np.zeros((3, n_cavity_max + 1))
        n = np.arange(n_cavity_max + 1)
        if mean_n == 0:
            p[qubit, 0] = 1.0
        else:
            ratio = mean_n / (mean_n + 1)
            w = ratio**n
            p[qubit] = w / w.sum()
        return cls(p)

    @classmethod
    def ground(cls, n_cavity_max: int) -> PopulationState:
        return cls.thermal(0.0, n_cavity_max)

    @property
    def n_cavity_max(self) -> int:
        return self.p.shape[1] - 1

    @property
    def cavity_distribution(self) -> np.ndarray:
        return self.p.sum(axis=0)

    @property
    def mean_n(self) -> float:
        return float(self.cavity_distribution @ np.arange(self.p.shape[1]))

    @property
    def p_g0(self) -> float:
        return float(self.p[G, 0])

    @property
    def purity_proxy(self) -> float:
        return float((self.p**2).sum())

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return bool(np.all(self.p >= -tol) and abs(self.p.sum() - 1) <= tol)


def _swap(p, a, b, success):
    """Exchange populations of the index sets `a` and `b` with probability `success`."""
    pa, pb = p[a].copy(), p[b].copy()
    p[a] = (1 - success) * pa + success * pb
    p[b] = (1 - success) * pb + success * pa


def refill_generator(n_max: int, omega: float, env: ThermalEnv) -> np.ndarray:
    """Birth-death rate matrix on Fock states 0..n_max (columns = source state).

    Thermal exchange with the bath at rate gamma_th obeys detailed balance
    with the Bose-Einstein occupation; anomalous heating adds symmetric
    up/down rates heating_rate*(n+1) and heating_rate*n, i.e. +heating_rate
    quanta per second.
    """
    nbar = bose_einstein(omega, env.T)
    n = np.arange(n_max + 1)
    up = env.gamma_th * nbar * (n + 1) + env.heating_rate * (n + 1)
    down = env.gamma_th * (nbar + 1) * n + env.heating_rate * n
    up[-1] = 0.0
    Q = np.diag(up[:-1], k=-1) + np.diag(down[1:], k=1)
    Q -= np.diag(Q.sum(axis=0))
    return Q


def protocol_steps(p: CoolingProtocolParams):
    """Return a function applying one full cycle to a population array."""
    s = 1 - p.pulse_error
    r = p.readout_error
    nmax = p.n_cavity_max
    if p.ladder:
        g_idx = (np.full(nmax, G), np.arange(1, nmax + 1))
        f_idx = (np.full(nmax, F), np.arange(0, nmax))
    else:
        g_idx, f_idx = (np.array([G]), np.array([1])), (np.array([F]), np.array([0]))
    all_n = np.arange(nmax + 1)
    propagator = None
    if p.refill is not None:
        propagator = expm(refill_generator(nmax, p.mode_frequency, p.refill) * p.cycle_time)

    def cycle(pop: np.ndarray) -> np.ndarray:
        pop = pop.copy()
        if p.pulses:
            _pulses(pop)
        # (iv) thermal refill of the cavity during the cycle
        if propagator is not None:
            pop = pop @ propagator.T
        np.clip(pop, 0.0, None, out=pop)
        return pop / pop.sum()

    def _pulses(pop: np.ndarray):
        # (i) |g,n> <-> |f,n-1>
        _swap(pop, g_idx, f_idx, s)
        # (ii) |f,n> <-> |e,n>
        _swap(pop, (np.full(nmax + 1, F), all_n), (np.full(nmax + 1, E), all_n), s)
        # (iii) measure; outcome "e" (prob 1-r from e, r from g or f) triggers the
        # e <-> g reset pulse, which only moves population between e and g
        pg, pe = pop[G].copy(), pop[E].copy()
        from_e = (1 - r) * s * pe
        from_g = r * s * pg
        pop[G] = pg - from_g + from_e
        pop[E] = pe - from_e + from_g

    return cycle


def run_cooling_protocol(
    p: CoolingProtocolParams, init: PopulationState, n_cycles: int
) -> list[PopulationState]:
    """Trajectory of populations; element 0 is `init`, element k after k cycles."""
    if not init.is_normalized():
        raise ContractError("initial populations are not normalized")
    if init.n_cavity_max != p.n_cavity_max:
        raise ContractError("initial state truncation does not match n_cavity_max")
    cycle = protocol_steps(p)
    traj = [init]
    pop = init.p
    for k in range(1, n_cycles + 1):
        pop = cycle(pop)
        traj.append(PopulationState(pop, k * p.cycle_time))
    return traj


def geometric_tail(mean_n: float, k: int) -> float:
    """E[(N - k)^+] for a thermal distribution: mean_n * (mean_n/(mean_n+1))^k."""
    return mean_n * (mean_n / (mean_n + 1)) ** k


def write_trajectory_csv(traj: Sequence[PopulationState], fh: IO[str]):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(("cycle", "time_s", "mean_n_cavity", "p_g0", "purity_proxy"))
    for k, st in enumerate(traj):
        w.writerow([k] + [f"{v:.12g}" for v in (st.time, st.mean_n, st.p_g0, st.purity_proxy)])


# -- sympathetic cooling with a trapped ion -------------------------------------


@dataclass(frozen=True)
class SympatheticParams:
    """Beam-splitter coupling g and ion cooling rate (rad/s), bath rate (1/s)."""

    g: float
    gamma_i: float
    gamma_th_e: float
    n_th: float

    def __post_init__(self):
        if min(self.g, self.gamma_i, self.gamma_th_e, self.n_th) < 0:
            raise ContractError("rates and occupations must be non-negative")


@dataclass(frozen=True)
class SympatheticResult:
    n_e: float
    cooling_rate: float
    gamma_prime: float
    weak_coupling_valid: bool

    def __float__(self):
        return self.n_e


def sympathetic_steady_state(p: SympatheticParams) -> SympatheticResult:
    """Electron occupation under ion-mediated cooling at rate 4 g^2 / gamma_i.

    The formula assumes gamma_i > g; the result carries that check instead
    of refusing to evaluate.
    """
    if p.gamma_i == 0:
        raise SingularityError("ion cooling rate must be positive")
    down = 4 * p.g**2 / p.gamma_i
    gp = p.gamma_th_e + p.gamma_i
    return SympatheticResult(
        n_e=p.n_th * gp / (down + gp),
        cooling_rate=down,
        gamma_prime=gp,
        weak_coupling_valid=p.gamma_i > p.g,
    )
