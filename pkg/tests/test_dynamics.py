"""Survival dynamics against closed forms and the dense oracle."""

import numpy as np
import pytest

from qladder import (
    ModelParams,
    moment,
    oracle_survival,
    rabi_survival,
    solve_spectrum,
    solve_truncated_spectrum,
    survival_amplitude,
    survival_series,
)
from qladder.presets import continuum_params
from tests.conftest import BETA05_A20


def test_amplitude_at_time_zero(spectrum_a20):
    amp = survival_amplitude(spectrum_a20, 0.0)
    wsum = float(np.sum(spectrum_a20.weights))
    assert amp.imag == 0.0
    assert amp.real == pytest.approx(wsum, abs=1e-14)
    assert amp.real == pytest.approx(1.0 - spectrum_a20.norm_deficit, abs=1e-12)


def test_amplitude_real_for_centered_model(spectrum_a20):
    t = np.linspace(0.0, 20.0, 64)
    amps = survival_amplitude(spectrum_a20, t)
    assert float(np.max(np.abs(amps.imag))) < 1e-9


def test_amplitude_bounded_by_weight_sum(spectrum_a20):
    t = np.linspace(0.0, 40.0, 257)
    amps = survival_amplitude(spectrum_a20, t)
    assert float(np.max(np.abs(amps))) <= float(np.sum(spectrum_a20.weights)) + 1e-12


def test_series_grid_and_initial_value(spectrum_a20):
    ts = survival_series(spectrum_a20, 5.0, 100)
    assert ts.times.size == 101
    assert ts.times[0] == 0.0 and ts.times[-1] == 5.0
    wsum = float(np.sum(spectrum_a20.weights))
    assert ts.probs[0] == pytest.approx(wsum**2, abs=1e-12)
    assert np.all(ts.probs <= 1.0 + 1e-9) and np.all(ts.probs >= 0.0)


def test_series_renormalized(spectrum_a20):
    ts = survival_series(spectrum_a20, 5.0, 50, renormalize=True)
    assert ts.probs[0] == pytest.approx(1.0, abs=1e-12)
    assert ts.meta["renormalize"] is True
    np.testing.assert_allclose(np.abs(ts.amps) ** 2, ts.probs, rtol=1e-13)


def test_series_validation(spectrum_a20):
    with pytest.raises(ValueError):
        survival_series(spectrum_a20, -1.0, 10)
    with pytest.raises(ValueError):
        survival_series(spectrum_a20, 1.0, 0)


def test_golden_rule_regime_decay():
    # flat wide coupling at small spacing: exponential decay at rate Gamma
    p = continuum_params(big_gamma=0.5, gamma=300.0, delta=0.01)
    s = solve_spectrum(p, target_deficit=1e-6, max_half_width=400000)
    ts = survival_series(s, 6.0, 300)
    assert float(np.max(np.abs(ts.probs - np.exp(-0.5 * ts.times)))) < 0.02


def test_narrow_width_matches_two_state_oscillation():
    p = ModelParams(v=0.16, delta=1.0, a=0.01)
    s = solve_spectrum(p)
    ts = survival_series(s, 10.0, 500)
    ref = rabi_survival(0.0, 0.16, ts.times)
    assert float(np.max(np.abs(ts.probs - ref))) < 1e-3


def test_matched_truncation_agrees_with_oracle(oracle_300):
    st = solve_truncated_spectrum(BETA05_A20, 300)
    ts = survival_series(st, 20.0, 400)
    ref = oracle_survival(BETA05_A20, 300, 20.0, 400)
    assert float(np.max(np.abs(ts.probs - ref.probs))) < 1e-3


def test_moments(spectrum_a20):
    assert moment(spectrum_a20, 0) == pytest.approx(1.0 - spectrum_a20.norm_deficit, abs=1e-14)
    assert abs(moment(spectrum_a20, 1)) < 1e-9
    direct = float(np.sum(spectrum_a20.weights * spectrum_a20.eps**2))
    assert moment(spectrum_a20, 2) == pytest.approx(direct, rel=1e-15)
    with pytest.raises(ValueError):
        moment(spectrum_a20, 3)


def test_decay_steepens_after_first_recurrence_time(spectrum_a20):
    # the flat-ladder kink at t = 2 pi survives the Lorentzian smoothing:
    # pure exponential before, faster decay after
    ts = survival_series(spectrum_a20, 12.0, 1200)
    gam = spectrum_a20.params.big_gamma
    before = (ts.times > 1.0) & (ts.times < 2.0 * np.pi - 0.3)
    after = (ts.times > 2.0 * np.pi + 0.5) & (ts.times < 9.0)
    ref = np.exp(-gam * ts.times)
    assert float(np.max(np.abs(ts.probs[before] - ref[before]))) < 0.02
    assert np.all(ts.probs[after] < ref[after])
