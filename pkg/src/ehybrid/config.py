"""Sectioned key/value configuration with unit-aware quantities.

Documents are INI files whose sections are named after the analysis they
configure.  Quantities are written as ``<number> <unit>`` and stored in the
canonical unit (Hz, s, K, m, V, eV, W).  Frequencies marked *angular* are
ordinary frequencies in the file and become rad/s only when parameter
records are built, so :func:`dump_config` reproduces every stored value
exactly.
"""

from __future__ import annotations

import configparser
import copy
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cooling import CoolingProtocolParams
from .coulomb import TABLE2_ROWS
from .errors import ConfigError
from .params import TWO_PI, CircuitParams, ThermalEnv
from .units import UnitError, parse_quantity

CANONICAL = {
    "frequency": "Hz", "time": "s", "temperature": "K", "length": "m",
    "voltage": "V", "energy": "eV", "power": "W",
}


@dataclass(frozen=True)
class Key:
    kind: str                  # quantity | int | float | bool | str
    dimension: str | None = None
    angular: bool = False      # frequency stored in Hz, used as rad/s

    def parse(self, text: str):
        text = text.strip()
        if self.kind == "quantity":
            return parse_quantity(text, self.dimension)
        if self.kind == "int":
            try:
                return int(text)
            except ValueError:
                raise UnitError(f"expected an integer, got {text!r}") from None
        if self.kind == "float":
            try:
                return float(text)
            except ValueError:
                raise UnitError(f"expected a number, got {text!r}") from None
        if self.kind == "bool":
            low = text.lower()
            if low not in ("true", "false", "yes", "no", "1", "0"):
                raise UnitError(f"expected a boolean, got {text!r}")
            return low in ("true", "yes", "1")
        return text

    def format(self, value) -> str:
        if self.kind == "quantity":
            # shortest repr round-trips exactly in the canonical unit
            return f"{float(value)!r} {CANONICAL[self.dimension]}"
        if self.kind == "bool":
            return "true" if value else "false"
        if self.kind == "float":
            return repr(float(value))
        return str(value)


def _q(dim, angular=False):
    return Key("quantity", dim, angular)


FREQ = _q("frequency", angular=True)
RATE = _q("frequency")          # plain 1/s
TIME = _q("time")
TEMP = _q("temperature")
LENGTH = _q("length")
VOLT = _q("voltage")
INT, FLOAT, BOOL, STR = Key("int"), Key("float"), Key("bool"), Key("str")

SCHEMA: dict[str, dict[str, Key]] = {
    "dispersive": {
        "omega_mw": FREQ, "omega_q": FREQ, "g_ec": FREQ, "g_sc": FREQ,
        "sweep_start": FREQ, "sweep_stop": FREQ, "sweep_points": INT, "n_fock": INT,
    },
    "cooling": {
        "rabi_gf": FREQ, "rabi_ef": FREQ, "rabi_ge": FREQ,
        "pulse_error": FLOAT, "readout_error": FLOAT, "t_meas": TIME,
        "n_cavity_max": INT, "mode_frequency": FREQ, "ladder": BOOL,
        "initial_mean_n": FLOAT, "n_cycles": INT,
        "refill": BOOL, "refill_temperature": TEMP, "refill_rate": RATE, "heating_rate": RATE,
        "cavity_rate": FREQ, "cavity_temperature": TEMP, "cavity_heating_rate": RATE,
    },
    "sympathetic": {
        "g": FREQ, "gamma_i": FREQ, "gamma_th": RATE,
        "omega_e": FREQ, "temperature": TEMP, "n_e_reference": FLOAT,
    },
    "coulomb": {
        "rows": STR, "omega_i": FREQ, "beta": FREQ, "alpha_k": FREQ,
        "gamma_i": FREQ, "gamma_th": RATE, "temperature": TEMP,
    },
    "trap": {
        "layout": STR, "species": STR, "grid_points": INT,
        "gnd_width": LENGTH, "rf_width": LENGTH, "mw_width": LENGTH,
        "mw_voltage": VOLT, "rf_voltage": VOLT, "voltage_convention": STR,
        "mw_frequency": FREQ, "rf_frequency": FREQ,
        "coax_secular": FREQ, "coax_drive": FREQ, "coax_half_width": LENGTH,
        "fieldmap_drive": FREQ,
    },
    "spectra": {"amplitude": FLOAT, "threshold": FLOAT, "base_frequency": RATE},
    "readout": {
        "omega_mw": FREQ, "g_ec": FREQ, "q_int": FLOAT, "q_ext": FLOAT,
        "noise_dbm_per_hz": FLOAT,
    },
}

DEFAULTS: dict[str, dict] = {
    "dispersive": {
        "omega_mw": 1e9, "omega_q": 4e9, "g_ec": 33e3, "g_sc": 200e6,
        "sweep_start": 950e6, "sweep_stop": 1050e6, "sweep_points": 500, "n_fock": 6,
    },
    "cooling": {
        "rabi_gf": 3e6, "rabi_ef": 3e6, "rabi_ge": 10e6,
        "pulse_error": 0.0, "readout_error": 0.0, "t_meas": 1e-6,
        "n_cavity_max": 200, "mode_frequency": 1e9, "ladder": True,
        "initial_mean_n": 6.0, "n_cycles": 30,
        "refill": False, "refill_temperature": 0.3, "refill_rate": 0.0, "heating_rate": 0.0,
        "cavity_rate": 33e3, "cavity_temperature": 0.3, "cavity_heating_rate": 140.0,
    },
    "sympathetic": {
        "g": 33e3, "gamma_i": 10e3, "gamma_th": 10.0,
        "omega_e": 800e6, "temperature": 0.3, "n_e_reference": 5.3e-2,
    },
    "coulomb": {
        "rows": "1,2,3,4", "omega_i": 2e6, "beta": 0.0, "alpha_k": 0.0,
        "gamma_i": 10e3, "gamma_th": 10.0, "temperature": 0.3,
    },
    "trap": {
        "layout": "fiverail", "species": "electron", "grid_points": 201,
        "gnd_width": 160e-6, "rf_width": 80e-6, "mw_width": 30e-6,
        "mw_voltage": 20.0, "rf_voltage": 30.0, "voltage_convention": "rms",
        "mw_frequency": 4e9, "rf_frequency": 40e6,
        "coax_secular": 1.2e9, "coax_drive": 6e9, "coax_half_width": 20e-6,
        "fieldmap_drive": 6e9,
    },
    "spectra": {"amplitude": 1.0, "threshold": 0.05, "base_frequency": 1.2e9},
    "readout": {
        "omega_mw": 1.2e9, "g_ec": 33e3, "q_int": math.inf, "q_ext": 1e5,
        "noise_dbm_per_hz": -195.0,
    },
}


def _table2_preset(k: int) -> dict:
    row = TABLE2_ROWS[k - 1]
    g_max = row.g0_paper**2 / abs(row.alpha_paper)
    return {
        "coulomb": {"rows": str(k)},
        "sympathetic": {
            "g": g_max / TWO_PI,
            "gamma_i": row.gamma_i / TWO_PI,
            "gamma_th": row.gamma_th,
            "omega_e": row.omega_e / TWO_PI,
            "temperature": row.temperature,
            "n_e_reference": row.ne_paper,
        },
    }


PRESETS: dict[str, dict] = {
    "table1": {},
    **{f"table2-row{k}": _table2_preset(k) for k in range(1, 5)},
    "fiverail": {"trap": {"layout": "fiverail", "species": "both"}},
    "coax": {"trap": {"layout": "coax", "species": "electron"}},
    "protocol-ideal": {"cooling": {"pulse_error": 0.0, "readout_error": 0.0, "refill": False}},
    # 1% pulse and readout errors; Q = 1e6 cavity at 1 GHz thermalizing with 300 mK
    "protocol-refill": {
        "cooling": {
            "pulse_error": 0.01, "readout_error": 0.01, "refill": True,
            "refill_temperature": 0.3, "refill_rate": TWO_PI * 1e9 / 1e6, "n_cycles": 200,
        }
    },
}


@dataclass(frozen=True)
class Config:
    values: dict
    preset: str | None = None

    def __getitem__(self, section: str) -> dict:
        return self.values[section]

    def get(self, section: str, key: str):
        return self.values[section][key]

    def angular(self, section: str, key: str) -> float:
        return TWO_PI * self.values[section][key]


def _line_index(text: str) -> dict:
    """(section, key) -> 1-based line number, from a plain scan of the text."""
    index, section = {}, None
    header = re.compile(r"^\s*\[([^\]]+)\]\s*$")
    entry = re.compile(r"^\s*([^=:#;\s][^=:]*?)\s*[=:]")
    for n, line in enumerate(text.splitlines(), start=1):
        m = header.match(line)
        if m:
            section = m.group(1).strip()
            index.setdefault((section, None), n)
            continue
        m = entry.match(line)
        if m and section is not None:
            index.setdefault((section, m.group(1).strip().lower()), n)
    return index


def parse_config(text: str, preset: str | None = None) -> Config:
    """Resolve a config document on top of the defaults and an optional preset."""
    values = copy.deepcopy(DEFAULTS)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        for section, entries in PRESETS[preset].items():
            values[section].update(entries)

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(exc.message.splitlines()[0], getattr(exc, "lineno", None)) from None
    lines = _line_index(text)
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]", lines.get((section, None)))
        for key, raw in parser.items(section):
            line = lines.get((section, key))
            spec = SCHEMA[section].get(key)
            if spec is None:
                raise ConfigError(f"unknown key {key!r} in [{section}]", line)
            try:
                values[section][key] = spec.parse(raw)
            except UnitError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}", line) from None
    return Config(values, preset)


def load_config(path: str | Path | None = None, preset: str | None = None) -> Config:
    text = ""
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text, preset)


def dump_config(cfg: Config) -> str:
    """Fully resolved document in canonical units; parses back to `cfg`."""
    out = []
    if cfg.preset:
        out.append(f"# preset: {cfg.preset}")
    for section, keys in SCHEMA.items():
        out.append(f"[{section}]")
        for key, spec in keys.items():
            out.append(f"{key} = {spec.format(cfg.values[section][key])}")
        out.append("")
    return "\n".join(out)


# -- parameter records -----------------------------------------------------------


def circuit_params(cfg: Config, omega_e: float | None = None) -> CircuitParams:
    return CircuitParams(
        omega_e=omega_e if omega_e is not None else cfg.angular("dispersive", "omega_mw"),
        omega_mw=cfg.angular("dispersive", "omega_mw"),
        omega_q=cfg.angular("dispersive", "omega_q"),
        g_ec=cfg.angular("dispersive", "g_ec"),
        g_sc=cfg.angular("dispersive", "g_sc"),
    )


def sweep_grid(cfg: Config) -> np.ndarray:
    d = cfg["dispersive"]
    return TWO_PI * np.linspace(d["sweep_start"], d["sweep_stop"], d["sweep_points"])


def protocol_params(cfg: Config) -> CoolingProtocolParams:
    c = cfg["cooling"]
    refill = None
    if c["refill"]:
        refill = ThermalEnv(c["refill_temperature"], c["refill_rate"], c["heating_rate"])
    return CoolingProtocolParams(
        rabi_gf=cfg.angular("cooling", "rabi_gf"),
        rabi_ef=cfg.angular("cooling", "rabi_ef"),
        rabi_ge=cfg.angular("cooling", "rabi_ge"),
        pulse_error=c["pulse_error"],
        t_meas=c["t_meas"],
        readout_error=c["readout_error"],
        n_cavity_max=c["n_cavity_max"],
        mode_frequency=cfg.angular("cooling", "mode_frequency"),
        refill=refill,
        ladder=c["ladder"],
    )
