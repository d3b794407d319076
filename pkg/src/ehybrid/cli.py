"""Command-line entry point.

Every subcommand resolves a configuration (defaults, then ``--preset``,
then ``--config``), runs one analysis and writes CSV or JSON to ``--out``
(stdout when omitted).  Exit status: 0 success, 2 configuration or input
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .config import Config, ConfigError
from .cooling import (
    PopulationState,
    SympatheticParams,
    bose_einstein,
    cavity_cooling_equilibrium,
    run_cooling_protocol,
    sympathetic_steady_state,
    write_trajectory_csv,
)
from .coulomb import TABLE2_ROWS, table2_report, write_table_csv
from .dispersive import noise_temperature_from_dbm, readout_budget, write_sweep_csv, zeta_sweep
from .errors import (
    ContractError,
    EHybridError,
    FitError,
    ParseError,
    SchemaError,
    SingularityError,
)
from .params import TWO_PI, ThermalEnv
from .spectra import find_modes, fit_lorentzian, read_trace_csv
from .trapfields import (
    Species,
    characterize_trap,
    coax_field_map,
    five_rail_layout,
    ingest_field_map,
)
from .units import UnitError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _g(x) -> str:
    return f"{x:.12g}"


def _csv_rows(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else _g(v) for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- subcommands ------------------------------------------------------------------


def cmd_dispersive_sweep(cfg: Config, args) -> str:
    p = cfgmod.circuit_params(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        points = zeta_sweep(p, cfgmod.sweep_grid(cfg), n_fock=cfg.get("dispersive", "n_fock"))
    buf = io.StringIO()
    write_sweep_csv(points, buf, p)
    return buf.getvalue()


def cmd_cooling(cfg: Config, args) -> str:
    c = cfg["cooling"]
    if args.cavity:
        env = ThermalEnv(c["cavity_temperature"], heating_rate=c["cavity_heating_rate"])
        omega = cfg.angular("cooling", "mode_frequency")
        gamma_c = cfg.angular("cooling", "cavity_rate")
        n_eq = cavity_cooling_equilibrium(gamma_c, env, omega)
        return _csv_rows(
            ("gamma_c_per_s", "heating_rate_per_s", "omega_hz", "temperature_k", "n_bath", "n_eq"),
            [(gamma_c, env.heating_rate, omega / TWO_PI, env.T, bose_einstein(omega, env.T), n_eq)],
        )
    if args.sympathetic:
        s = cfg["sympathetic"]
        n_th = bose_einstein(cfg.angular("sympathetic", "omega_e"), s["temperature"])
        res = sympathetic_steady_state(
            SympatheticParams(cfg.angular("sympathetic", "g"), cfg.angular("sympathetic", "gamma_i"),
                              s["gamma_th"], n_th)
        )
        return _csv_rows(
            ("g_hz", "gamma_i_hz", "gamma_th_per_s", "n_th", "n_e_calc", "n_e_paper", "weak_coupling_valid"),
            [(s["g"], s["gamma_i"], s["gamma_th"], n_th, res.n_e, s["n_e_reference"],
              "true" if res.weak_coupling_valid else "false")],
        )
    p = cfgmod.protocol_params(cfg)
    init = PopulationState.thermal(c["initial_mean_n"], p.n_cavity_max)
    traj = run_cooling_protocol(p, init, c["n_cycles"])
    buf = io.StringIO()
    write_trajectory_csv(traj, buf)
    return buf.getvalue()


def _table_rows(cfg: Config):
    c = cfg["coulomb"]
    try:
        idx = [int(t) for t in c["rows"].split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"[coulomb] rows must be a comma-separated list of 1..4, got {c['rows']!r}") from None
    if not idx or any(not 1 <= k <= len(TABLE2_ROWS) for k in idx):
        raise ConfigError(f"[coulomb] rows must be a comma-separated list of 1..4, got {c['rows']!r}")
    return [
        replace(
            TABLE2_ROWS[k - 1],
            omega_i=cfg.angular("coulomb", "omega_i"),
            beta=cfg.angular("coulomb", "beta"),
            alpha_k=cfg.angular("coulomb", "alpha_k"),
            gamma_i=cfg.angular("coulomb", "gamma_i"),
            gamma_th=c["gamma_th"],
            temperature=c["temperature"],
        )
        for k in idx
    ]


def cmd_coulomb_table(cfg: Config, args) -> str:
    buf = io.StringIO()
    write_table_csv(table2_report(_table_rows(cfg)), buf)
    return buf.getvalue()


def _species(name: str) -> list[tuple[str, Species]]:
    table = {"electron": Species.electron(), "ion": Species.beryllium_ion()}
    if name == "both":
        return list(table.items())
    if name not in table:
        raise ConfigError(f"[trap] species must be electron, ion or both, got {name!r}")
    return [(name, table[name])]


def _trap_source(cfg: Config, layout: str | None, fieldmap: str | None):
    t = cfg["trap"]
    if fieldmap is not None:
        return ingest_field_map(fieldmap, Omega=cfg.angular("trap", "fieldmap_drive"))
    layout = layout or t["layout"]
    if layout == "fiverail":
        conv = t["voltage_convention"]
        if conv not in ("rms", "amplitude"):
            raise ConfigError(f"[trap] voltage_convention must be rms or amplitude, got {conv!r}")
        scale = math.sqrt(2) if conv == "rms" else 1.0
        return five_rail_layout(
            gnd_width=t["gnd_width"], rf_width=t["rf_width"], mw_width=t["mw_width"],
            mw_voltage=scale * t["mw_voltage"], rf_voltage=scale * t["rf_voltage"],
            mw_frequency=cfg.angular("trap", "mw_frequency"),
            rf_frequency=cfg.angular("trap", "rf_frequency"),
        )
    if layout == "coax":
        return coax_field_map(
            cfg.angular("trap", "coax_secular"), cfg.angular("trap", "coax_drive"), t["coax_half_width"]
        )
    raise ConfigError(f"unknown trap layout {layout!r}; choose fiverail or coax")


def cmd_trap(cfg: Config, args) -> str:
    source = _trap_source(cfg, args.layout, args.fieldmap)
    species = _species(cfg.get("trap", "species"))
    n = cfg.get("trap", "grid_points")
    out = {name: characterize_trap(source, sp, n_grid=n).to_json() for name, sp in species}
    if len(out) == 1:
        return _json(next(iter(out.values())))
    return _json(out)


def cmd_fit_spectrum(cfg: Config, args) -> str:
    trace = read_trace_csv(args.trace)
    s = cfg["spectra"]
    if args.modes:
        modes = find_modes(trace, s["threshold"], s["base_frequency"])
        return _csv_rows(
            ("freq_hz", "height", "prominence", "harmonic"),
            [(m.frequency, m.height, m.prominence, m.harmonic) for m in modes],
        )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fit = fit_lorentzian(trace, amplitude=s["amplitude"])
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return _json(fit.to_json())


def cmd_readout_budget(cfg: Config, args) -> str:
    r = cfg["readout"]
    omega = cfg.angular("readout", "omega_mw")
    kappa_ext = omega / r["q_ext"]
    kappa_int = 0.0 if math.isinf(r["q_int"]) else omega / r["q_int"]
    budget = readout_budget(
        omega, cfg.angular("readout", "g_ec"), kappa_int, kappa_ext,
        noise_temperature_from_dbm(r["noise_dbm_per_hz"]),
    )
    return _json({k: float(_g(v)) for k, v in budget.to_dict().items()})


COMMANDS = {
    "dispersive-sweep": (cmd_dispersive_sweep, "dispersive coupling versus phonon frequency (CSV)"),
    "cooling": (cmd_cooling, "cooling protocol trajectory or steady states (CSV)"),
    "coulomb-table": (cmd_coulomb_table, "electron-ion coupling table (CSV)"),
    "trap": (cmd_trap, "pseudopotential characterization (JSON)"),
    "fit-spectrum": (cmd_fit_spectrum, "Lorentzian fit of a transmission trace (JSON)"),
    "readout-budget": (cmd_readout_budget, "electrical readout sensitivity (JSON)"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ehybrid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", type=Path, help="INI configuration file")
        sp.add_argument("--preset", help=f"named preset: {', '.join(cfgmod.PRESETS)}")
        sp.add_argument("--out", type=Path, help="output file (default: stdout)")
        sp.add_argument("--echo-config", action="store_true",
                        help="print the resolved configuration and exit")
        if name == "cooling":
            mode = sp.add_mutually_exclusive_group()
            mode.add_argument("--protocol", action="store_true", help="measurement-based protocol (default)")
            mode.add_argument("--sympathetic", action="store_true", help="ion-mediated steady state")
            mode.add_argument("--cavity", action="store_true", help="cavity-cooling equilibrium")
        elif name == "trap":
            src = sp.add_mutually_exclusive_group()
            src.add_argument("--layout", choices=("fiverail", "coax"))
            src.add_argument("--fieldmap", help="field-map CSV exported from a field solver")
        elif name == "fit-spectrum":
            sp.add_argument("trace", nargs="?", help="trace CSV (freq_hz,mag)")
            sp.add_argument("--modes", action="store_true", help="list candidate resonances instead")
    return parser


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = cfgmod.load_config(args.config, args.preset)
        if args.echo_config:
            _emit(cfgmod.dump_config(cfg), args.out)
            return EXIT_OK
        if args.command == "fit-spectrum" and args.trace is None:
            raise ConfigError("fit-spectrum needs a trace CSV")
        func = COMMANDS[args.command][0]
        text = func(cfg, args)
    except (ConfigError, UnitError, ParseError, SchemaError, ContractError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularityError, FitError, ArithmeticError, np.linalg.LinAlgError, EHybridError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
