"""Survival amplitude and probability of the initial discrete state."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .solver import Spectrum

# Eigenvalue block size for the phase-sum accumulation; bounds the size of
# the complex temporary at ~4096 * len(times) entries.
_EIG_CHUNK = 4096


@dataclass(frozen=True)
class TimeSeries:
    """Uniform time grid with survival probabilities (hbar = 1 units)."""

    times: np.ndarray
    probs: np.ndarray
    amps: np.ndarray | None
    meta: dict[str, Any] = field(default_factory=dict)


def _phase_sum(energies: np.ndarray, weights: np.ndarray, times: np.ndarray) -> np.ndarray:
    """sum_mu w_mu exp(-i E_mu t) for every t, chunked over eigenvalues."""
    out = np.zeros(times.size, dtype=complex)
    for i0 in range(0, energies.size, _EIG_CHUNK):
        e = energies[i0 : i0 + _EIG_CHUNK]
        w = weights[i0 : i0 + _EIG_CHUNK]
        out += np.exp(-1j * np.outer(times, e)) @ w
    return out


def survival_amplitude(s: Spectrum, t):
    """Survival amplitude sum_mu w_mu exp(-i eps_mu delta t) at time t."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    amps = _phase_sum(s.energies, s.weights, t_arr)
    return amps if np.ndim(t) else complex(amps[0])


def survival_series(
    s: Spectrum,
    t_max: float,
    n_steps: int = 2000,
    renormalize: bool = False,
) -> TimeSeries:
    """Survival probability on the uniform grid of n_steps+1 points over [0, t_max].

    With renormalize the series is divided by (sum of weights)^2, hiding
    the window-truncation deficit; the default leaves the deficit visible
    because it is the truncation-accuracy indicator.
    """
    if not t_max > 0.0:
        raise ValueError(f"t_max must be positive, got {t_max!r}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be a positive integer, got {n_steps!r}")
    times = np.linspace(0.0, float(t_max), int(n_steps) + 1)
    amps = _phase_sum(s.energies, s.weights, times)
    wsum = float(np.sum(s.weights))
    if renormalize and wsum > 0.0:
        amps = amps / wsum
    probs = np.abs(amps) ** 2
    meta = {
        "params": s.params,
        "norm_deficit": s.norm_deficit,
        "renormalize": renormalize,
        "n_eigenvalues": len(s),
    }
    return TimeSeries(times=times, probs=probs, amps=amps, meta=meta)


def moment(s: Spectrum, order: int) -> float:
    """Weighted spectral moment sum_mu w_mu eps_mu**order, order in {0, 1, 2}."""
    if order not in (0, 1, 2):
        raise ValueError(f"moment order must be 0, 1 or 2, got {order!r}")
    if order == 0:
        return float(np.sum(s.weights))
    return float(np.sum(s.weights * s.eps**order))
