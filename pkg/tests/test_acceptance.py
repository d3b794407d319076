"""Acceptance criteria, each at its stated tolerance.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; the
terminal summary prints one PASS/FAIL line per criterion.  Criteria that
the model cannot meet are left failing.
"""

import math
import sys
import time
import warnings

import numpy as np
import pytest

from ehybrid.cli import EXIT_OK, main
from ehybrid.constants import E_CHARGE, M_E
from ehybrid.cooling import (
    CoolingProtocolParams,
    PopulationState,
    bose_einstein,
    geometric_tail,
    run_cooling_protocol,
)
from ehybrid.coulomb import (
    TABLE2_ROWS,
    alpha_coulomb,
    analytic_coeff,
    g0_coulomb_term,
    table2_report,
    taylor_oracle,
    write_table_csv,
)
from ehybrid.dispersive import (
    noise_temperature_from_dbm,
    readout_budget,
    zeta_analytic,
    zeta_approx,
    zeta_sweep,
)
from ehybrid.params import TWO_PI, CircuitParams, ElectronIonParams, ThermalEnv
from ehybrid.spectra import fit_lorentzian, synthetic_trace
from ehybrid.trapfields import (
    Species,
    characterize_trap,
    coax_field_map,
    five_rail_layout,
    quadrupole_field_map,
    quadrupole_secular_frequency,
    strip_field,
    strip_potential,
)

T1 = CircuitParams.table1()


def criterion(n, title):
    return pytest.mark.criterion(n, title)


# -- 1. dispersive cross-check ----------------------------------------------------

C1 = criterion(1, "numeric vs closed-form dispersive coupling")


@pytest.fixture(scope="module")
def sweep():
    grid = TWO_PI * np.linspace(950e6, 1050e6, 500)
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        points = zeta_sweep(T1, grid, n_fock=6)
    return points, time.perf_counter() - t0


@C1
def test_c1_agreement_where_dispersive(sweep):
    points, _ = sweep
    eligible = [
        pt for pt in points
        if abs(pt.delta) >= 10 * T1.g_ec and not pt.ambiguous and math.isfinite(pt.zeta_analytic)
    ]
    dev = np.array([abs(pt.zeta_numeric / pt.zeta_analytic - 1) for pt in eligible])
    worst = eligible[int(np.argmax(dev))]
    print(f"{len(eligible)} eligible points, {int((dev > 0.05).sum())} beyond 5%, "
          f"worst {dev.max():.3g} at {worst.omega_e / TWO_PI / 1e6:.3f} MHz")
    assert len(eligible) > 0 and np.all(dev <= 0.05)


@C1
def test_c1_maxima_bracket_poles(sweep):
    points, _ = sweep
    f = np.array([pt.omega_e for pt in points]) / TWO_PI
    z = np.abs([pt.zeta_numeric for pt in points])
    for lo, hi, pole in [(975e6, 1000e6, 986.7e6), (1000e6, 1025e6, 1013.3e6)]:
        sel = (f >= lo) & (f <= hi)
        peak = f[sel][np.argmax(z[sel])]
        assert abs(peak - pole) <= 0.5e6, (peak, pole)


@C1
def test_c1_runtime(sweep):
    _, elapsed = sweep
    print(f"500-point sweep at n_fock=6: {elapsed:.2f} s")
    assert elapsed < 60.0


# -- 2. approximate-form validity window ------------------------------------------


@criterion(2, "approximate dispersive coupling within its validity window")
def test_c2_validity_window():
    lo, hi = 10 * T1.g_ec, 0.1 * abs(T1.g_sc**2 / T1.delta_sc)
    assert lo < hi
    worst = 0.0
    for sign in (-1.0, 1.0):
        for d in np.geomspace(lo, hi, 200):
            p = T1.with_omega_e(T1.omega_mw - T1.chi - sign * d)
            assert abs(p.delta) == pytest.approx(d, rel=1e-6)
            worst = max(worst, abs(zeta_approx(p) / zeta_analytic(p) - 1))
    print(f"worst |approx/analytic - 1| = {worst:.4f}")
    assert worst <= 0.15


# -- 3. thermal occupations ---------------------------------------------------------

C3 = criterion(3, "Bose-Einstein occupations")


@C3
def test_c3_500mhz():
    assert abs(bose_einstein(TWO_PI * 500e6, 0.3) - 12.0) <= 0.2


@C3
def test_c3_1ghz():
    assert abs(bose_einstein(TWO_PI * 1e9, 0.3) - 5.76) <= 0.05


# -- 4. cooling protocol ------------------------------------------------------------

C4 = criterion(4, "measurement-based cooling protocol")


@C4
def test_c4_ideal_protocol_and_oracle():
    p = CoolingProtocolParams(pulse_error=0.0, readout_error=0.0)
    traj = run_cooling_protocol(p, PopulationState.thermal(6.0, p.n_cavity_max), 30)
    final = traj[-1].mean_n
    assert final <= 0.06
    assert abs(final - geometric_tail(6.0, 30)) <= 1e-6


@C4
def test_c4_cycle_time():
    assert CoolingProtocolParams().cycle_time <= 1.5e-6


@C4
def test_c4_refill_steady_state():
    # Q = 1e6 cavity at 1 GHz thermalizing with a 300 mK bath, 1% errors
    omega = TWO_PI * 1e9
    p = CoolingProtocolParams(refill=ThermalEnv(0.3, gamma_th=omega / 1e6), n_cavity_max=60)
    traj = run_cooling_protocol(p, PopulationState.thermal(6.0, 60), 200)
    print(f"refill steady state mean_n = {traj[-1].mean_n:.4f}")
    assert traj[-1].mean_n <= 0.1


# -- 5. Coulomb oracle -------------------------------------------------------------

C5 = criterion(5, "Coulomb expansion oracle and scaling laws")


@C5
@pytest.mark.parametrize("L", [7e-6, 10e-6, 50e-6])
def test_c5_oracle(L):
    c = taylor_oracle(ElectronIonParams(TWO_PI * 800e6, TWO_PI * 2e6, L))
    for i in range(5):
        for j in range(5 - i):
            exact = analytic_coeff(i, j, L)
            assert abs(c[i, j] / exact - 1) <= 1e-6, (i, j)


@C5
def test_c5_scaling_exponents():
    Ls = np.geomspace(5e-6, 100e-6, 12)
    ps = [ElectronIonParams(TWO_PI * 800e6, TWO_PI * 2e6, L) for L in Ls]
    s_g0 = np.polyfit(np.log(Ls), np.log([g0_coulomb_term(p) for p in ps]), 1)[0]
    s_ac = np.polyfit(np.log(Ls), np.log([alpha_coulomb(p) for p in ps]), 1)[0]
    assert abs(s_g0 + 4) <= 1e-3 and abs(s_ac + 5) <= 1e-3


# -- 6. published coupling table -----------------------------------------------------

C6 = criterion(6, "coupling table reproduction (order of magnitude)")


@pytest.fixture(scope="module")
def report():
    rep = table2_report()
    write_table_csv(rep, sys.stdout)
    return rep


@C6
@pytest.mark.parametrize("k", range(len(TABLE2_ROWS)))
def test_c6_g0_within_factor_two(report, k):
    r = report[k]
    ratio = r.couplings.g0 / r.row.g0_paper
    print(f"row {k + 1}: g0 computed/published = {ratio:.3g}")
    assert 0.5 <= ratio <= 2.0


@C6
def test_c6_gmax_row4(report):
    g_max = report[3].g_max_paper / TWO_PI
    print(f"row 4 g_max = {g_max:.6g} Hz")
    assert abs(g_max - 1.02e6) <= 1e3


@C6
@pytest.mark.parametrize("k", range(len(TABLE2_ROWS)))
def test_c6_ne_within_decade(report, k):
    r = report[k]
    ratio = r.ne_calc / r.row.ne_paper
    print(f"row {k + 1}: n_e computed/published = {ratio:.3g}")
    assert 0.1 <= ratio <= 10.0


# -- 7. readout budget ---------------------------------------------------------------

C7 = criterion(7, "electrical readout budget")


@C7
def test_c7_noise_temperature():
    assert abs(noise_temperature_from_dbm(-195.0) - 2.29) <= 0.01


@C7
def test_c7_n_min_unit_efficiency():
    omega = TWO_PI * 1.2e9
    b = readout_budget(omega, TWO_PI * 33e3, 0.0, omega / 1e5, noise_temperature_from_dbm(-195.0))
    assert b.extraction_efficiency == 1.0
    assert abs(b.n_min - 40) <= 1


# -- 8. trap fields ------------------------------------------------------------------

C8 = criterion(8, "pseudopotential trap characterization")
ELECTRON, ION = Species.electron(), Species.beryllium_ion()


@C8
def test_c8_quadrupole_oracle():
    Omega, G = TWO_PI * 6e9, 5e9
    res = characterize_trap(quadrupole_field_map(G, 20e-6, Omega=Omega), ELECTRON)
    expected = quadrupole_secular_frequency(G, M_E, Omega, E_CHARGE)
    assert np.all(np.abs(res.secular_freqs / expected - 1) <= 5e-3)


@C8
def test_c8_laplace_residual():
    lay = five_rail_layout()
    X, Z = np.meshgrid(np.linspace(-200e-6, 200e-6, 41), np.linspace(5e-6, 300e-6, 31))
    h = 1e-4 * Z
    E = lambda a, b: strip_field(lay, a, b, "MW")
    div = (E(X + h, Z)[..., 0] - E(X - h, Z)[..., 0] + E(X, Z + h)[..., 1] - E(X, Z - h)[..., 1]) / (2 * h)
    phi = np.abs(strip_potential(lay, X, Z, "MW"))
    assert np.all(np.abs(div) <= 1e-6 * phi / Z**2)


@pytest.fixture(scope="module")
def five_rail():
    lay = five_rail_layout()
    return characterize_trap(lay, ELECTRON), characterize_trap(lay, ION)


def _within3(value, target):
    return target / 3 <= value <= 3 * target


@C8
def test_c8_five_rail_electron(five_rail):
    e, _ = five_rail
    print(f"electron: depth {e.depth_ev * 1e3:.1f} meV, secular {e.secular_freq_hz.max() / 1e6:.0f} MHz")
    assert _within3(e.depth_ev, 40e-3) and _within3(e.secular_freq_hz.max(), 800e6)


@C8
def test_c8_five_rail_ion(five_rail):
    _, i = five_rail
    print(f"ion: depth {i.depth_ev * 1e3:.1f} meV, secular {i.secular_freq_hz.max() / 1e6:.2f} MHz")
    assert _within3(i.depth_ev, 20e-3) and _within3(i.secular_freq_hz.max(), 3e6)


@C8
def test_c8_coax_q():
    res = characterize_trap(coax_field_map(), ELECTRON)
    assert np.all(np.abs(res.q - 0.566) <= 1e-3)


# -- 9. spectrum fitting -------------------------------------------------------------

C9 = criterion(9, "Lorentzian fit round trip")
F0, QI, QE = 1.2e9, 1.8e4, 1.8e4


@C9
def test_c9_noiseless():
    fit = fit_lorentzian(synthetic_trace(F0, QI, QE))
    for got, want in [(fit.f0, F0), (fit.q_int, QI), (fit.q_ext, QE)]:
        assert abs(got / want - 1) <= 1e-3


@C9
def test_c9_noisy_median():
    errs = []
    for seed in range(100):
        fit = fit_lorentzian(synthetic_trace(F0, QI, QE, noise=0.01, rng=np.random.default_rng(seed)))
        assert abs(fit.f0 / F0 - 1) <= 1e-6
        errs.append(abs(fit.q_int / QI - 1))
    print(f"median |Q_int error| = {np.median(errs):.4f}")
    assert np.median(errs) <= 0.03


# -- 10. determinism -----------------------------------------------------------------

PRESET_RUNS = {
    "table1": [["dispersive-sweep"], ["readout-budget"]],
    "table2-row1": [["coulomb-table"], ["cooling", "--sympathetic"]],
    "table2-row2": [["coulomb-table"], ["cooling", "--sympathetic"]],
    "table2-row3": [["coulomb-table"], ["cooling", "--sympathetic"]],
    "table2-row4": [["coulomb-table"], ["cooling", "--sympathetic"]],
    "fiverail": [["trap"]],
    "coax": [["trap"]],
    "protocol-ideal": [["cooling", "--protocol"], ["cooling", "--cavity"]],
    "protocol-refill": [["cooling", "--protocol"]],
}


@criterion(10, "byte-identical CLI output per preset")
@pytest.mark.parametrize("preset", sorted(PRESET_RUNS))
def test_c10_determinism(preset, tmp_path):
    for k, cmd in enumerate(PRESET_RUNS[preset]):
        outputs = []
        for rep in range(2):
            out = tmp_path / f"{k}_{rep}.out"
            assert main(cmd + ["--preset", preset, "--out", str(out)]) == EXIT_OK
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] and outputs[0]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-rN"]))
