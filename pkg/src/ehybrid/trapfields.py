"""Pseudopotential analysis of Paul traps.

Two field sources are supported: analytic strip electrodes in a gapless
grounded plane (cross-section of a surface trap), and field maps exported
from an external field solver.  Both feed :func:`characterize_trap`, which
locates the pseudopotential minimum, its secular frequencies, the escape
depth and the Mathieu q parameter of each principal axis.
"""

from __future__ import annotations

import csv
import enum
import heapq
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.ndimage import minimum_filter

from .constants import E_CHARGE, M_BE9, M_E
from .errors import ContractError, ParseError, SchemaError, SingularityError
from .params import TWO_PI

Q_VALIDITY = 0.4


class Role(str, enum.Enum):
    RF = "RF"
    MW = "MW"
    GND = "GND"
    DC = "DC"


@dataclass(frozen=True)
class Species:
    mass: float
    charge: float
    role: Role = Role.MW

    @classmethod
    def electron(cls) -> Species:
        return cls(M_E, -E_CHARGE, Role.MW)

    @classmethod
    def beryllium_ion(cls) -> Species:
        return cls(M_BE9, E_CHARGE, Role.RF)


# -- analytic strip electrodes ---------------------------------------------------


@dataclass(frozen=True)
class Strip:
    x_min: float
    x_max: float
    voltage: float   # drive amplitude, V
    role: Role

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ContractError("strip width must be positive")
        object.__setattr__(self, "role", Role(self.role))


@dataclass(frozen=True)
class ElectrodeLayout:
    strips: tuple[Strip, ...]
    drive: dict = field(default_factory=dict)   # Role -> angular drive frequency
    ceiling: float | None = None

    def __post_init__(self):
        strips = tuple(sorted(self.strips, key=lambda s: s.x_min))
        for a, b in zip(strips, strips[1:]):
            if b.x_min < a.x_max:
                raise ContractError("strips overlap")
        object.__setattr__(self, "strips", strips)
        object.__setattr__(self, "drive", {Role(k): v for k, v in self.drive.items()})

    @property
    def span(self) -> tuple[float, float]:
        return self.strips[0].x_min, self.strips[-1].x_max

    def scaled(self, voltage_factor: float = 1.0, frequency_factor: float = 1.0) -> ElectrodeLayout:
        strips = tuple(
            Strip(s.x_min, s.x_max, s.voltage * voltage_factor, s.role) for s in self.strips
        )
        drive = {k: v * frequency_factor for k, v in self.drive.items()}
        return ElectrodeLayout(strips, drive, self.ceiling)

    def translated(self, dx: float) -> ElectrodeLayout:
        strips = tuple(Strip(s.x_min + dx, s.x_max + dx, s.voltage, s.role) for s in self.strips)
        return ElectrodeLayout(strips, self.drive, self.ceiling)


def five_rail_layout(
    gnd_width: float = 160e-6,
    rf_width: float = 80e-6,
    mw_width: float = 30e-6,
    mw_voltage: float = 20.0 * math.sqrt(2),
    rf_voltage: float = 30.0 * math.sqrt(2),
    mw_frequency: float = TWO_PI * 4e9,
    rf_frequency: float = TWO_PI * 40e6,
) -> ElectrodeLayout:
    """Cross-section of the five-rail electron/ion surface trap.

    The centre ground rail carries two microwave strips at its outer edges,
    flanked by the RF rails.  Voltages are amplitudes; the defaults are the
    quoted 20 V and 30 V read as RMS values.
    """
    half = gnd_width / 2
    strips = [
        Strip(-half - rf_width, -half, rf_voltage, Role.RF),
        Strip(-half, -half + mw_width, mw_voltage, Role.MW),
        Strip(-half + mw_width, half - mw_width, 0.0, Role.GND),
        Strip(half - mw_width, half, mw_voltage, Role.MW),
        Strip(half, half + rf_width, rf_voltage, Role.RF),
    ]
    return ElectrodeLayout(tuple(strips), {Role.RF: rf_frequency, Role.MW: mw_frequency})


def strip_potential(layout: ElectrodeLayout, x, z, role: Role | str) -> np.ndarray:
    """Potential amplitude of the strips driven in `role` (gapless plane)."""
    role = Role(role)
    x, z = np.broadcast_arrays(np.asarray(x, float), np.asarray(z, float))
    _check_domain(layout, z)
    phi = np.zeros(x.shape)
    for s in layout.strips:
        if s.role is role and s.voltage:
            phi += (s.voltage / np.pi) * (np.arctan((s.x_max - x) / z) - np.arctan((s.x_min - x) / z))
    return phi


def strip_field(layout: ElectrodeLayout, x, z, role: Role | str) -> np.ndarray:
    """Field amplitude (Ex, Ez) in V/m, stacked on the last axis."""
    role = Role(role)
    x, z = np.broadcast_arrays(np.asarray(x, float), np.asarray(z, float))
    _check_domain(layout, z)
    ex = np.zeros(x.shape)
    ez = np.zeros(x.shape)
    for s in layout.strips:
        if s.role is not role or not s.voltage:
            continue
        k = s.voltage / np.pi
        db, da = s.x_max - x, s.x_min - x
        rb, ra = z**2 + db**2, z**2 + da**2
        ex -= k * (-z / rb + z / ra)
        ez -= k * (-db / rb + da / ra)
    return np.stack([ex, ez], axis=-1)


def _check_domain(layout, z):
    if layout.ceiling is not None:
        raise ContractError("grounded-ceiling layouts are not supported analytically")
    if np.any(z <= 0):
        raise ContractError("field points must lie above the electrode plane (z > 0)")


def pseudopotential(E_amp, m: float, Omega: float, charge: float) -> np.ndarray:
    """Ponderomotive energy q^2 |E|^2 / (4 m Omega^2) in joules.

    `E_amp` is the field amplitude magnitude (V/m), scalar or array.
    """
    if Omega == 0:
        raise SingularityError("pseudopotential diverges at zero drive frequency")
    if Omega < 0 or m <= 0:
        raise ContractError("drive frequency and mass must be positive")
    E_amp = np.asarray(E_amp, float)
    return charge**2 * E_amp**2 / (4 * m * Omega**2)


def pseudopotential_ev(E_amp, m: float, Omega: float, charge: float) -> np.ndarray:
    return pseudopotential(E_amp, m, Omega, charge) / E_CHARGE


# -- field maps -------------------------------------------------------------------


@dataclass(frozen=True)
class FieldMap:
    """Field amplitude sampled on a rectilinear grid.

    `axes` holds the coordinates of every axis that has more than one
    sample, `axis_names` their names; `E` has shape (*grid, 3).
    """

    axes: tuple[np.ndarray, ...]
    axis_names: tuple[str, ...]
    E: np.ndarray
    Omega: float | None = None

    def __post_init__(self):
        for ax in self.axes:
            if ax.ndim != 1 or len(ax) < 2 or np.any(np.diff(ax) <= 0):
                raise SchemaError("grid axes must be strictly increasing")
        shape = tuple(len(a) for a in self.axes)
        if self.E.shape != shape + (3,):
            raise SchemaError(f"field shape {self.E.shape} does not match grid {shape}")
        if not np.all(np.isfinite(self.E)):
            raise SchemaError("field map contains non-finite values")

    @property
    def dimensionality(self) -> int:
        return len(self.axes)

    def with_drive(self, Omega: float) -> FieldMap:
        return FieldMap(self.axes, self.axis_names, self.E, Omega)

    def translated(self, offsets: Sequence[float]) -> FieldMap:
        axes = tuple(a + o for a, o in zip(self.axes, offsets))
        return FieldMap(axes, self.axis_names, self.E, self.Omega)


FIELDMAP_HEADER = ("x_m", "y_m", "z_m", "Ex_Vpm", "Ey_Vpm", "Ez_Vpm")


def ingest_field_map(path: str | Path, Omega: float | None = None) -> FieldMap:
    """Read a field-map CSV (header ``x_m,y_m,z_m,Ex_Vpm,Ey_Vpm,Ez_Vpm``).

    Rows are in lexicographic grid order (z fastest).  Lines starting with
    ``#`` are ignored.  Axes with a single sample are dropped.
    """
    rows: list[list[float]] = []
    header_seen = False
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            cells = [c.strip() for c in next(csv.reader([text]))]
            if not header_seen:
                if tuple(cells) != FIELDMAP_HEADER:
                    raise ParseError(f"expected header {','.join(FIELDMAP_HEADER)}", lineno)
                header_seen = True
                continue
            if len(cells) != 6:
                raise ParseError(f"expected 6 columns, found {len(cells)}", lineno)
            try:
                vals = [float(c) for c in cells]
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            if not all(math.isfinite(v) for v in vals):
                raise ParseError("non-finite value", lineno)
            rows.append(vals)
    if not header_seen or not rows:
        raise SchemaError("field map has no data rows")

    data = np.array(rows)
    coords = [np.unique(data[:, k]) for k in range(3)]
    shape = tuple(len(c) for c in coords)
    if int(np.prod(shape)) != len(data):
        raise SchemaError(f"{len(data)} rows do not form a rectilinear {shape} grid")
    mesh = np.stack(np.meshgrid(*coords, indexing="ij"), axis=-1).reshape(-1, 3)
    if not np.array_equal(mesh, data[:, :3]):
        raise SchemaError("rows are not in lexicographic (x, y, z) grid order")
    E = data[:, 3:].reshape(shape + (3,))
    keep = [k for k in range(3) if shape[k] > 1]
    if len(keep) < 2:
        raise SchemaError("field map must span at least two axes")
    E = E.reshape(tuple(shape[k] for k in keep) + (3,))
    names = tuple(("x", "y", "z")[k] for k in keep)
    return FieldMap(tuple(coords[k] for k in keep), names, E, Omega)


def write_field_map(fmap: FieldMap, path: str | Path, constant: float = 0.0):
    """Inverse of :func:`ingest_field_map`; dropped axes are written as `constant`."""
    full = []
    for name in ("x", "y", "z"):
        full.append(fmap.axes[fmap.axis_names.index(name)] if name in fmap.axis_names else np.array([constant]))
    mesh = np.stack(np.meshgrid(*full, indexing="ij"), axis=-1).reshape(-1, 3)
    E = fmap.E.reshape(-1, 3)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(FIELDMAP_HEADER) + "\n")
        for xyz, e in zip(mesh, E):
            fh.write(",".join(repr(float(v)) for v in (*xyz, *e)) + "\n")


def quadrupole_field_map(
    gradient: float,
    half_width: float,
    n: int = 41,
    Omega: float | None = None,
    center: tuple[float, float] = (0.0, 0.0),
) -> FieldMap:
    """Ideal 2-D quadrupole E = G (x, 0, -z) sampled in the x-z plane."""
    x = np.linspace(-half_width, half_width, n) + center[0]
    z = np.linspace(-half_width, half_width, n) + center[1]
    X, Z = np.meshgrid(x - center[0], z - center[1], indexing="ij")
    E = np.stack([gradient * X, np.zeros_like(X), -gradient * Z], axis=-1)
    return FieldMap((x, z), ("x", "z"), E, Omega)


def quadrupole_secular_frequency(gradient: float, m: float, Omega: float, charge: float) -> float:
    """|q| G / (sqrt(2) m Omega) for a linear field gradient G."""
    return abs(charge) * gradient / (math.sqrt(2) * m * Omega)


# -- characterization ---------------------------------------------------------------


@dataclass(frozen=True)
class TrapCharacter:
    min_position: np.ndarray          # m
    secular_freqs: np.ndarray         # rad/s, ascending
    depth: float                      # J
    q: np.ndarray
    axes: np.ndarray = field(repr=False, default=None)   # principal directions (columns)
    hessian: np.ndarray = field(repr=False, default=None)
    notes: tuple[str, ...] = ()
    trapped: bool = True

    @property
    def depth_ev(self) -> float:
        return self.depth / E_CHARGE

    @property
    def secular_freq_hz(self) -> np.ndarray:
        return self.secular_freqs / TWO_PI

    def to_json(self) -> dict:
        r12 = lambda v: float(f"{v:.12g}")
        return {
            "min_position_m": [r12(v) for v in self.min_position],
            "secular_freq_hz": [r12(v) for v in self.secular_freq_hz],
            "depth_ev": r12(self.depth_ev),
            "q": [r12(v) for v in self.q],
        }


@dataclass(frozen=True)
class NoTrap:
    reason: str
    trapped: bool = False

    def to_json(self) -> dict:
        return {"trapped": False, "reason": self.reason}


def default_window(layout: ElectrodeLayout) -> tuple[tuple[float, float], tuple[float, float]]:
    """Lateral window 4x the electrode span, heights 2 um to 400 um."""
    lo, hi = layout.span
    c, w = 0.5 * (lo + hi), hi - lo
    return (c - 2 * w, c + 2 * w), (2e-6, 400e-6)


def _energy_from_layout(layout, species):
    Omega = layout.drive.get(species.role)
    if Omega is None:
        raise ContractError(f"layout has no drive frequency for role {species.role.value}")

    def U(points):
        pts = np.asarray(points, float)
        E = strip_field(layout, pts[..., 0], pts[..., 1], species.role)
        return pseudopotential(np.linalg.norm(E, axis=-1), species.mass, Omega, species.charge)

    return U, Omega


def _energy_from_map(fmap, species):
    if fmap.Omega is None:
        raise ContractError("field map has no drive frequency")
    method = "cubic" if min(len(a) for a in fmap.axes) >= 4 else "linear"
    interp = RegularGridInterpolator(fmap.axes, fmap.E, method=method)

    def U(points):
        pts = np.asarray(points, float)
        E = interp(pts.reshape(-1, pts.shape[-1])).reshape(pts.shape[:-1] + (3,))
        return pseudopotential(np.linalg.norm(E, axis=-1), species.mass, fmap.Omega, species.charge)

    return U, fmap.Omega


def _hessian(U, x0, steps):
    """Central-difference Hessian with one Richardson step."""

    def fd(h):
        d = len(x0)
        H = np.empty((d, d))
        u0 = U(x0)
        for i in range(d):
            ei = np.zeros(d)
            ei[i] = h[i]
            H[i, i] = (U(x0 + ei) - 2 * u0 + U(x0 - ei)) / h[i] ** 2
            for j in range(i):
                ej = np.zeros(d)
                ej[j] = h[j]
                H[i, j] = H[j, i] = (
                    U(x0 + ei + ej) - U(x0 + ei - ej) - U(x0 - ei + ej) + U(x0 - ei - ej)
                ) / (4 * h[i] * h[j])
        return H

    return (4 * fd(steps / 2) - fd(steps)) / 3


def _gradient(U, x0, steps):
    g = np.empty(len(x0))
    for i in range(len(x0)):
        e = np.zeros(len(x0))
        e[i] = steps[i]
        g[i] = (U(x0 + e) - U(x0 - e)) / (2 * steps[i])
    return g


def _escape_level(Ugrid: np.ndarray, start: tuple[int, ...]) -> float:
    """Lowest energy at which the basin of `start` spills over the grid boundary.

    Priority flood: cells are visited in order of the highest energy on the
    cheapest path from the start, so the first boundary cell reached sets the
    escape level.
    """
    shape = Ugrid.shape
    seen = np.zeros(shape, bool)
    heap = [(Ugrid[start], start)]
    seen[start] = True
    level = -np.inf
    offsets = []
    for k in range(len(shape)):
        for s in (-1, 1):
            o = [0] * len(shape)
            o[k] = s
            offsets.append(tuple(o))
    while heap:
        u, idx = heapq.heappop(heap)
        level = max(level, u)
        if any(i == 0 or i == n - 1 for i, n in zip(idx, shape)):
            return level
        for o in offsets:
            nb = tuple(i + d for i, d in zip(idx, o))
            if not seen[nb]:
                seen[nb] = True
                heapq.heappush(heap, (Ugrid[nb], nb))
    return level


def characterize_trap(
    source: ElectrodeLayout | FieldMap,
    species: Species,
    window: Sequence[tuple[float, float]] | None = None,
    n_grid: int = 201,
) -> TrapCharacter | NoTrap:
    """Minimum, secular frequencies, depth and q of the pseudopotential.

    The minimum is found by a grid scan followed by Newton refinement; the
    Hessian is taken by finite differences with step 1e-3 of each window
    span.  Depth is the watershed escape level on the grid minus the
    refined minimum.  Returns :class:`NoTrap` when there is no interior
    minimum or the curvature is not positive definite.
    """
    if isinstance(source, ElectrodeLayout):
        U, Omega = _energy_from_layout(source, species)
        bounds = window if window is not None else default_window(source)
    else:
        U, Omega = _energy_from_map(source, species)
        bounds = window if window is not None else [(a[0], a[-1]) for a in source.axes]
    bounds = np.array(bounds, float)
    dim = len(bounds)
    n = n_grid if dim == 2 else max(41, n_grid // 4)
    grids = [np.linspace(lo, hi, n) for lo, hi in bounds]
    mesh = np.stack(np.meshgrid(*grids, indexing="ij"), axis=-1)
    Ugrid = U(mesh)

    interior = tuple(slice(1, -1) for _ in range(dim))
    local_min = (Ugrid == minimum_filter(Ugrid, size=3, mode="nearest"))
    mask = np.zeros_like(local_min)
    mask[interior] = local_min[interior]
    if not mask.any():
        return NoTrap("no interior minimum of the pseudopotential in the analysis window")
    cand = np.argwhere(mask)
    start = tuple(cand[np.argmin(Ugrid[mask])])

    span = bounds[:, 1] - bounds[:, 0]
    cell = span / (n - 1)
    steps = 1e-3 * span
    x = np.array([g[i] for g, i in zip(grids, start)])
    lo_box, hi_box = x - cell, x + cell
    for _ in range(50):
        H = _hessian(U, x, steps)
        g = _gradient(U, x, steps)
        try:
            dx = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            break
        x_new = np.clip(x + dx, lo_box, hi_box)
        if np.all(np.abs(x_new - x) <= 1e-12 * span):
            x = x_new
            break
        x = x_new

    H = _hessian(U, x, steps)
    H = 0.5 * (H + H.T)
    lam, vecs = np.linalg.eigh(H)
    if np.any(lam <= 0):
        return NoTrap("pseudopotential curvature is not positive definite at the minimum")
    omega = np.sqrt(lam / species.mass)
    q = 2 * math.sqrt(2) * omega / Omega
    depth = _escape_level(Ugrid, start) - float(U(x))
    notes = tuple(
        f"q = {qk:.3g} exceeds {Q_VALIDITY}: pseudopotential approximation is marginal"
        for qk in q if qk > Q_VALIDITY
    )
    return TrapCharacter(
        min_position=x,
        secular_freqs=omega,
        depth=max(depth, 0.0),
        q=q,
        axes=vecs,
        hessian=H,
        notes=notes,
    )


def trap_json(result: TrapCharacter | NoTrap) -> str:
    return json.dumps(result.to_json(), indent=2, sort_keys=True)


def coax_field_map(
    secular_frequency: float = TWO_PI * 1.2e9,
    drive_frequency: float = TWO_PI * 6.0e9,
    half_width: float = 20e-6,
    species: Species | None = None,
) -> FieldMap:
    """Quadrupole stand-in for the coaxial-cavity trap field.

    The gradient is chosen so that the ideal quadrupole gives
    `secular_frequency`; the real cavity field has to be ingested from a
    field-solver export.
    """
    species = species or Species.electron()
    G = math.sqrt(2) * species.mass * drive_frequency * secular_frequency / abs(species.charge)
    return quadrupole_field_map(G, half_width, Omega=drive_frequency)
