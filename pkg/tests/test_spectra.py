import io
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ehybrid.errors import ContractError, FitError, ParseError, RangeWarning
from ehybrid.spectra import (
    SpectrumTrace,
    find_modes,
    fit_lorentzian,
    harmonic_index,
    lorentzian,
    read_trace_csv,
    synthetic_trace,
    write_trace_csv,
)

F0, QI, QE = 1.2e9, 1.8e4, 1.8e4


def test_noiseless_round_trip():
    fit = fit_lorentzian(synthetic_trace(F0, QI, QE))
    assert fit.f0 == pytest.approx(F0, rel=1e-3)
    assert fit.q_int == pytest.approx(QI, rel=1e-3)
    assert fit.q_ext == pytest.approx(QE, rel=1e-3)
    assert fit.q_tot == pytest.approx(QI / 2, rel=1e-3)
    assert fit.residual_rms < 1e-9


def test_q_split_identity():
    fit = fit_lorentzian(synthetic_trace(F0, 3e4, 1e4))
    assert 1 / fit.q_tot == pytest.approx(1 / fit.q_int + 1 / fit.q_ext, rel=1e-12)
    assert fit.kappa == pytest.approx(fit.f0 / fit.q_tot, rel=1e-15)
    assert fit.kappa_int == pytest.approx(fit.kappa - fit.kappa_ext)
    assert min(fit.q_tot, fit.q_int, fit.q_ext, fit.kappa) > 0


def test_noisy_fit_single_seed():
    fit = fit_lorentzian(synthetic_trace(F0, QI, QE, noise=0.01, rng=np.random.default_rng(1)))
    assert fit.f0 == pytest.approx(F0, rel=1e-6)
    assert fit.q_int == pytest.approx(QI, rel=0.05)
    assert np.all(fit.stderr > 0)


def test_refit_is_idempotent():
    trace = synthetic_trace(F0, QI, QE, noise=0.01, rng=np.random.default_rng(7))
    first = fit_lorentzian(trace)
    second = fit_lorentzian(trace, init=first.params)
    np.testing.assert_allclose(second.params, first.params, rtol=1e-10, atol=1e-10 * abs(first.baseline) + 1e-14)


def test_db_and_linear_agree():
    lin = synthetic_trace(F0, QI, QE, baseline=1e-3)
    a = fit_lorentzian(lin)
    b = fit_lorentzian(lin.to_db())
    np.testing.assert_allclose(b.params, a.params, rtol=1e-6)
    assert lin.to_db().to_linear().s == pytest.approx(lin.s, rel=1e-12)


def test_baseline_recovered():
    fit = fit_lorentzian(synthetic_trace(F0, QI, QE, baseline=0.02))
    assert fit.baseline == pytest.approx(0.02, rel=1e-6)


def test_flat_trace_raises():
    f = np.linspace(1e9, 1.1e9, 100)
    with pytest.raises(FitError):
        fit_lorentzian(SpectrumTrace(f, np.full(100, 0.3)))
    noise = np.random.default_rng(0).normal(0.0, 1e-3, 100)
    with pytest.raises(FitError):
        fit_lorentzian(SpectrumTrace(f, 0.5 + noise))


def test_peak_at_edge_warns():
    kappa = F0 / QI + F0 / QE
    f = np.linspace(F0 - 0.3 * kappa, F0 + 8 * kappa, 300)
    trace = SpectrumTrace(f, lorentzian(f, F0, kappa, F0 / QE))
    with pytest.warns(RangeWarning):
        fit_lorentzian(trace)


def test_full_span_does_not_warn():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fit_lorentzian(synthetic_trace(F0, QI, QE))


def test_trace_validation():
    f = np.linspace(0, 1, 20)
    with pytest.raises(ContractError):
        SpectrumTrace(f[:10], f[:10])
    with pytest.raises(ContractError):
        SpectrumTrace(f[::-1], f)
    bad = f.copy()
    bad[3] = np.nan
    with pytest.raises(ContractError):
        SpectrumTrace(f, bad)
    with pytest.raises(ContractError):
        SpectrumTrace(f, f, "volts")
    with pytest.raises(ContractError):
        SpectrumTrace(f, f - 0.5).to_db()


def three_mode_trace(noise=0.0, rng=None):
    f = np.linspace(0.5e9, 7e9, 20001)
    s = sum(lorentzian(f, f0, 4e6, 2e6) for f0 in (1.2e9, 3.7e9, 6.1e9))
    if noise:
        s = s + rng.normal(0.0, noise, len(f))
    return SpectrumTrace(f, s)


def test_find_three_modes():
    modes = find_modes(three_mode_trace(), threshold=0.1, base_frequency=1.2e9)
    assert len(modes) == 3
    by_freq = sorted(modes, key=lambda m: m.frequency)
    np.testing.assert_allclose([m.frequency for m in by_freq], [1.2e9, 3.7e9, 6.1e9], rtol=1e-3)
    assert [m.harmonic for m in by_freq] == [0, 1, 2]
    assert by_freq[1].label == "3/4 wavelength"
    assert all(a.prominence >= b.prominence for a, b in zip(modes, modes[1:]))


def test_find_modes_defaults_to_lowest_peak():
    assert sorted(m.harmonic for m in find_modes(three_mode_trace(), 0.1)) == [0, 1, 2]


def test_find_single_and_no_modes():
    trace = synthetic_trace(F0, QI, QE)
    assert len(find_modes(trace, 0.1)) == 1
    noise = SpectrumTrace(np.linspace(0, 1, 200), np.random.default_rng(3).normal(0, 0.01, 200))
    assert find_modes(noise, 0.5) == []


@pytest.mark.parametrize("f, n", [(1.2e9, 0), (3.7e9, 1), (6.1e9, 2), (0.3e9, 0), (8.4e9, 3)])
def test_harmonic_index(f, n):
    assert harmonic_index(f, 1.2e9) == n


def test_csv_round_trip(tmp_path):
    trace = synthetic_trace(F0, QI, QE, baseline=1e-3).to_db()
    buf = io.StringIO()
    write_trace_csv(trace, buf)
    path = tmp_path / "t.csv"
    path.write_text(buf.getvalue())
    back = read_trace_csv(path)
    assert back.units == "db"
    np.testing.assert_array_equal(back.f, trace.f)
    np.testing.assert_array_equal(back.s, trace.s)


def test_csv_errors(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("# units=volts\nfreq_hz,mag\n")
    with pytest.raises(ParseError) as err:
        read_trace_csv(p)
    assert err.value.line == 1
    rows = "".join(f"{i},{i}\n" for i in range(20))
    p.write_text("freq_hz,mag\n" + rows + "21,nan\n")
    with pytest.raises(ParseError) as err:
        read_trace_csv(p)
    assert err.value.line == 22
    p.write_text("f,m\n" + rows)
    with pytest.raises(ParseError):
        read_trace_csv(p)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5e9, 7e9), st.floats(5e3, 1e5), st.floats(5e3, 1e5))
def test_noiseless_recovery_property(f0, q_int, q_ext):
    fit = fit_lorentzian(synthetic_trace(f0, q_int, q_ext))
    assert fit.f0 == pytest.approx(f0, rel=1e-6)
    assert fit.q_int == pytest.approx(q_int, rel=1e-3)
    assert fit.q_ext == pytest.approx(q_ext, rel=1e-3)
    assert 1 / fit.q_tot == pytest.approx(1 / fit.q_int + 1 / fit.q_ext, rel=1e-12)
    assert math.isfinite(fit.residual_rms)
