"""Lorentzian analysis of two-port resonator transmission traces.

The model for the transmitted power is

    |S21(f)|^2 = A (kappa_ext/2)^2 / ((f - f0)^2 + (kappa/2)^2) + b

with kappa the total linewidth (FWHM, Hz) and kappa_ext the combined
leakage through both ports.  On resonance |S21| = sqrt(A) kappa_ext/kappa,
which is what separates the internal and external quality factors.  The
calibration amplitude A is fixed (1 for a de-embedded trace), leaving four
free parameters.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

import numpy as np
from scipy.optimize import least_squares
from scipy.signal import find_peaks

from .errors import ContractError, FitError, ParseError, RangeWarning

MIN_SAMPLES = 16
XTOL = 1e-8
MAX_NFEV = 200


@dataclass(frozen=True)
class SpectrumTrace:
    f: np.ndarray
    s: np.ndarray
    units: str = "linear"   # "linear" (power |S21|^2) or "db" (10 log10 power)

    def __post_init__(self):
        f = np.asarray(self.f, float).copy()
        s = np.asarray(self.s, float).copy()
        if self.units not in ("linear", "db"):
            raise ContractError(f"units must be 'linear' or 'db', got {self.units!r}")
        if f.ndim != 1 or f.shape != s.shape:
            raise ContractError("frequency and magnitude arrays must be 1-D and of equal length")
        if len(f) < MIN_SAMPLES:
            raise ContractError(f"a trace needs at least {MIN_SAMPLES} samples")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(s))):
            raise ContractError("trace contains NaN or infinite values")
        if np.any(np.diff(f) <= 0):
            raise ContractError("frequencies must be strictly increasing")
        f.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "s", s)

    @property
    def power(self) -> np.ndarray:
        """Linear transmitted power."""
        return self.s if self.units == "linear" else 10 ** (self.s / 10)

    def to_db(self) -> SpectrumTrace:
        if self.units == "db":
            return self
        if np.any(self.s <= 0):
            raise ContractError("non-positive power has no dB representation")
        return SpectrumTrace(self.f, 10 * np.log10(self.s), "db")

    def to_linear(self) -> SpectrumTrace:
        return self if self.units == "linear" else SpectrumTrace(self.f, self.power, "linear")


def lorentzian(f, f0, kappa, kappa_ext, baseline=0.0, amplitude=1.0):
    f = np.asarray(f, float)
    return amplitude * (kappa_ext / 2) ** 2 / ((f - f0) ** 2 + (kappa / 2) ** 2) + baseline


def synthetic_trace(
    f0: float,
    q_int: float,
    q_ext: float,
    n: int = 400,
    span_linewidths: float = 10.0,
    noise: float = 0.0,
    rng: np.random.Generator | None = None,
    baseline: float = 0.0,
) -> SpectrumTrace:
    """Noiseless or noisy trace; `noise` is the Gaussian sigma relative to the peak height."""
    kappa_ext = f0 / q_ext
    kappa = kappa_ext + f0 / q_int
    f = np.linspace(f0 - span_linewidths * kappa / 2, f0 + span_linewidths * kappa / 2, n)
    s = lorentzian(f, f0, kappa, kappa_ext, baseline)
    if noise:
        rng = rng if rng is not None else np.random.default_rng()
        s = s + rng.normal(0.0, noise * (kappa_ext / kappa) ** 2, n)
    return SpectrumTrace(f, s, "linear")


@dataclass(frozen=True)
class LorentzianFit:
    f0: float
    kappa: float
    kappa_ext: float
    baseline: float
    amplitude: float
    residual_rms: float
    covariance: np.ndarray = field(repr=False)
    n_evaluations: int = 0

    @property
    def q_tot(self) -> float:
        return self.f0 / self.kappa

    @property
    def q_ext(self) -> float:
        return self.f0 / self.kappa_ext

    @property
    def q_int(self) -> float:
        return 1.0 / (1.0 / self.q_tot - 1.0 / self.q_ext)

    @property
    def kappa_int(self) -> float:
        return self.kappa - self.kappa_ext

    @property
    def stderr(self) -> np.ndarray:
        """One-sigma errors of (f0, kappa, kappa_ext, baseline)."""
        return np.sqrt(np.clip(np.diag(self.covariance), 0, None))

    @property
    def params(self) -> np.ndarray:
        return np.array([self.f0, self.kappa, self.kappa_ext, self.baseline])

    def to_json(self) -> dict:
        r12 = lambda v: float(f"{v:.12g}")
        return {
            "f0_hz": r12(self.f0),
            "q_tot": r12(self.q_tot),
            "q_int": r12(self.q_int),
            "q_ext": r12(self.q_ext),
            "kappa_hz": r12(self.kappa),
            "residual_rms": r12(self.residual_rms),
        }


def _seed(f: np.ndarray, y: np.ndarray, amplitude: float) -> np.ndarray:
    """Peak position, half-max width, on-resonance depth and edge baseline."""
    edge = max(2, len(y) // 20)
    b = float(np.median(np.concatenate([y[:edge], y[-edge:]])))
    k = int(np.argmax(y))
    h = y[k] - b
    half = b + h / 2
    lo = k
    while lo > 0 and y[lo] > half:
        lo -= 1
    hi = k
    while hi < len(y) - 1 and y[hi] > half:
        hi += 1

    def cross(i, j):
        if y[j] == y[i]:
            return f[i]
        return f[i] + (half - y[i]) * (f[j] - f[i]) / (y[j] - y[i])

    width = cross(hi - 1, hi) - cross(lo, lo + 1) if hi > lo + 1 else 2 * (f[1] - f[0])
    width = max(width, f[1] - f[0])
    kext = width * math.sqrt(max(h, 0.0) / amplitude)
    return np.array([f[k], width, kext, b])


def _noise_scale(y: np.ndarray) -> float:
    """Robust point-to-point noise estimate."""
    d = np.diff(y)
    return float(1.4826 * np.median(np.abs(d - np.median(d))) / math.sqrt(2))


def fit_lorentzian(
    trace: SpectrumTrace, init: np.ndarray | None = None, amplitude: float = 1.0
) -> LorentzianFit:
    """Least-squares Lorentzian fit of the transmitted power.

    Parameters
    ----------
    trace
        Linear or dB trace; residuals are always taken in linear power.
    init
        Optional seed (f0, kappa, kappa_ext, baseline); otherwise the peak
        sample and the half-maximum width are used.
    amplitude
        Calibration amplitude A of the model.

    Raises
    ------
    FitError
        No resolvable peak, non-convergence within 200 evaluations, or a
        fit with kappa_ext >= kappa.  The last iterate is attached.
    """
    f, y = trace.f, trace.power
    if init is None:
        spread = float(np.ptp(y))
        if spread == 0 or spread <= 5 * _noise_scale(y):
            raise FitError("trace shows no resolvable peak", last_iterate=None)
        p0 = _seed(f, y, amplitude)
    else:
        p0 = np.asarray(init, float).copy()
        if p0.shape != (4,):
            raise ContractError("init must be (f0, kappa, kappa_ext, baseline)")

    # normalized variables: frequencies in units of the seed width, baseline and
    # power in units of the seed peak height
    fs = abs(p0[1]) if p0[1] else f[1] - f[0]
    ys = max(amplitude * (p0[2] / p0[1]) ** 2 if p0[1] else 0.0, float(np.ptp(y)), 1e-300)
    u = (f - p0[0]) / fs
    yn = y / ys
    a = amplitude / ys

    def unpack(x):
        return x[0], x[1], x[2], x[3]

    def resid(x):
        x0, k, ke, b = unpack(x)
        return a * (ke / 2) ** 2 / ((u - x0) ** 2 + (k / 2) ** 2) + b - yn

    def jac(x):
        x0, k, ke, b = unpack(x)
        d = (u - x0) ** 2 + (k / 2) ** 2
        num = a * (ke / 2) ** 2
        return np.column_stack([
            num * 2 * (u - x0) / d**2,
            -num * (k / 2) / d**2,
            a * ke / (2 * d),
            np.ones_like(u),
        ])

    x0 = np.array([0.0, p0[1] / fs, p0[2] / fs, p0[3] / ys])
    sol = least_squares(resid, x0, jac=jac, method="lm", xtol=XTOL, ftol=1e-15, gtol=1e-15,
                        max_nfev=MAX_NFEV, x_scale=1.0)
    xs = sol.x
    phys = np.array([p0[0] + xs[0] * fs, abs(xs[1]) * fs, abs(xs[2]) * fs, xs[3] * ys])
    if sol.status <= 0 or not np.all(np.isfinite(phys)):
        raise FitError(f"Lorentzian fit did not converge: {sol.message}", last_iterate=phys)
    f0, kappa, kext, b = phys
    if not kext < kappa:
        raise FitError("fitted external coupling exceeds the total linewidth", last_iterate=phys)

    r = sol.fun * ys
    rms = float(np.sqrt(np.mean(r**2)))
    dof = max(len(f) - 4, 1)
    J = sol.jac * np.array([1 / fs, 1 / fs, 1 / fs, 1 / ys]) * ys
    try:
        cov = np.linalg.inv(J.T @ J) * float(r @ r) / dof
    except np.linalg.LinAlgError:
        cov = np.full((4, 4), np.nan)

    height = amplitude * (kext / kappa) ** 2
    if height <= 3 * max(rms, _noise_scale(y)):
        raise FitError("fitted peak is not above the residual noise", last_iterate=phys)
    if not (f[0] <= f0 - 1.5 * kappa and f0 + 1.5 * kappa <= f[-1]):
        warnings.warn(
            "trace does not span 3 linewidths around the peak; fit may be biased",
            RangeWarning,
            stacklevel=2,
        )
    return LorentzianFit(f0, kappa, kext, b, amplitude, rms, cov, int(sol.nfev))


@dataclass(frozen=True)
class ModeCandidate:
    frequency: float
    height: float
    prominence: float
    harmonic: int

    @property
    def label(self) -> str:
        return f"{2 * self.harmonic + 1}/4 wavelength"


def harmonic_index(frequency: float, base_frequency: float) -> int:
    """Nearest n for a (2n+1) quarter-wave resonance of the given fundamental."""
    return max(0, int(round((frequency / base_frequency - 1) / 2)))


def find_modes(
    trace: SpectrumTrace, threshold: float, base_frequency: float | None = None
) -> list[ModeCandidate]:
    """Local maxima above `threshold` (trace units), most prominent first.

    The harmonic guess uses `base_frequency`, or the lowest detected peak.
    """
    idx, props = find_peaks(trace.s, height=threshold, prominence=0)
    if len(idx) == 0:
        return []
    base = base_frequency if base_frequency is not None else float(trace.f[idx].min())
    out = [
        ModeCandidate(float(trace.f[i]), float(h), float(pr), harmonic_index(trace.f[i], base))
        for i, h, pr in zip(idx, props["peak_heights"], props["prominences"])
    ]
    return sorted(out, key=lambda m: -m.prominence)


def read_trace_csv(path: str | Path) -> SpectrumTrace:
    """Trace CSV with columns ``freq_hz,mag`` and a ``# units=db|linear`` line."""
    units = "linear"
    f, s = [], []
    header_seen = False
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                body = text[1:].strip().replace(" ", "")
                if body.startswith("units="):
                    units = body.split("=", 1)[1].lower()
                    if units not in ("db", "linear"):
                        raise ParseError(f"unknown units flag {units!r}", lineno)
                continue
            cells = [c.strip() for c in next(csv.reader([text]))]
            if not header_seen:
                if cells != ["freq_hz", "mag"]:
                    raise ParseError("expected header freq_hz,mag", lineno)
                header_seen = True
                continue
            if len(cells) != 2:
                raise ParseError(f"expected 2 columns, found {len(cells)}", lineno)
            try:
                fv, sv = float(cells[0]), float(cells[1])
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            if not (math.isfinite(fv) and math.isfinite(sv)):
                raise ParseError("non-finite value", lineno)
            f.append(fv)
            s.append(sv)
    return SpectrumTrace(np.array(f), np.array(s), units)


def write_trace_csv(trace: SpectrumTrace, fh: IO[str]):
    fh.write(f"# units={trace.units}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(("freq_hz", "mag"))
    for fv, sv in zip(trace.f, trace.s):
        w.writerow((repr(float(fv)), repr(float(sv))))
