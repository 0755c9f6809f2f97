"""Closed-form reference models the full system reduces to in its limits.

Four independent implementations used for validation and figure overlays:
the two-state (Rabi) system, the flat-coupling ladder (Bixon-Jortner), the
flat-coupling true continuum (Wigner-Weisskopf exponential decay), and the
Lorentzian-coupling true continuum solved by Fano's technique.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
import numpy as np

from . import solver
from .errors import DegenerateParameterError

_FANO_DEGENERATE_TOL = 1e-9


# ---------------------------------------------------------------------------
# Rabi (two-state) system


def rabi_eigenvalues(e1: float, v: float) -> tuple[float, float]:
    """Eigenvalues e1/2 +- sqrt(e1^2/4 + v^2) of [[e1, v], [v, 0]]."""
    root = math.sqrt(0.25 * e1 * e1 + v * v)
    return 0.5 * e1 + root, 0.5 * e1 - root


def rabi_eigenvector(e_pm: float, v: float) -> tuple[float, float]:
    """Unit eigenvector (E, v)/sqrt(E^2 + v^2) for eigenvalue E of [[e1,v],[v,0]]."""
    norm = math.hypot(e_pm, v)
    if norm == 0.0:
        raise DegenerateParameterError("eigenvector undefined for e_pm = v = 0")
    return e_pm / norm, v / norm


def rabi_survival(e_phi: float, v: float, t):
    """Survival probability 1 - [4v^2/(e_phi^2+4v^2)] sin^2(Omega t / 2).

    Omega = sqrt(e_phi^2 + 4 v^2) is the Rabi frequency of [[e_phi, v], [v, 0]]
    started in the first basis state.  For e_phi = 0 this is cos^2(v t).
    """
    t = np.asarray(t, dtype=float)
    omega_sq = e_phi * e_phi + 4.0 * v * v
    if omega_sq == 0.0:
        out = np.ones_like(t)
        return out if out.ndim else float(out)
    omega = math.sqrt(omega_sq)
    out = 1.0 - (4.0 * v * v / omega_sq) * np.sin(0.5 * omega * t) ** 2
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Bixon-Jortner (flat-coupling ladder) system


@dataclass(frozen=True)
class BJParams:
    """Parameter carrier for the flat-coupling ladder spectrum."""

    v: float
    delta: float
    e_phi: float = 0.0

    @property
    def eps_phi(self) -> float:
        return self.e_phi / self.delta

    @property
    def big_gamma(self) -> float:
        return 2.0 * math.pi * self.v * self.v / self.delta


class _BJModel:
    """Secular function of the flat-coupling ladder in local coordinates."""

    def __init__(self, bp: BJParams):
        self.bp = bp
        self.pref = math.pi * (bp.v / bp.delta) ** 2

    def _trig(self, t):
        s = np.sin(np.pi * t)
        c = np.cos(np.pi * t)
        with np.errstate(divide="ignore", over="ignore"):
            return c / s, 1.0 / (s * s)

    def g(self, base, t):
        cot, _ = self._trig(t)
        return self.bp.eps_phi + self.pref * cot - (base + t)

    def gprime(self, base, t):
        _, csc2 = self._trig(t)
        return -math.pi * self.pref * csc2 - 1.0

    def weight(self, base, t):
        e = (base + t) * self.bp.delta
        half_g = 0.5 * self.bp.big_gamma
        v2 = self.bp.v * self.bp.v
        return v2 / (v2 + half_g * half_g + (e - self.bp.e_phi) ** 2)


def bj_spectrum(
    v: float,
    delta: float,
    e_phi: float = 0.0,
    window: tuple[float, float] | None = None,
    *,
    target_deficit: float = 1e-6,
    max_half_width: float = 60000.0,
) -> solver.Spectrum:
    """Spectrum of the flat-coupling ladder (one root per unit interval).

    Roots of (pi v^2/delta^2) cot(pi eps) = eps - eps_phi with the closed
    weight formula w = v^2 / (v^2 + (Gamma/2)^2 + (E - E_phi)^2).  Weights
    fall off like 1/eps^2, so wide windows are needed for small deficits.
    The returned Spectrum carries a BJParams in its params slot.
    """
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    if v == 0.0:
        raise ValueError("flat-coupling spectrum needs a nonzero coupling")
    bp = BJParams(v=float(v), delta=float(delta), e_phi=float(e_phi))
    model = _BJModel(bp)

    if window is not None:
        lo, hi = float(window[0]), float(window[1])
        if lo >= hi:
            raise ValueError("window must satisfy lo < hi")
        base, t, res, intervals = solver._solve_range(model, math.floor(lo), math.ceil(hi), 8, False)
        eps = base + t
        inside = (eps >= lo) & (eps <= hi)
        return solver._assemble(bp, model, base[inside], t[inside], res[inside], intervals[inside], (lo, hi))

    half = int(max(10, math.ceil(abs(bp.eps_phi)) + 5, math.ceil(3.0 * abs(v) / delta) + 5))
    half = min(half, int(max_half_width))
    base, t, res, intervals = solver._solve_range(model, -half, half, 8, False)
    wsum = float(np.sum(model.weight(base, t)))
    while 1.0 - wsum >= target_deficit and half < max_half_width:
        new_half = min(2 * half, int(max_half_width))
        b2, t2, r2, i2 = solver._solve_range(model, -new_half, -half, 8, False)
        b3, t3, r3, i3 = solver._solve_range(model, half, new_half, 8, False)
        base = np.concatenate([b2, base, b3])
        t = np.concatenate([t2, t, t3])
        res = np.concatenate([r2, res, r3])
        intervals = np.concatenate([i2, intervals, i3])
        wsum += float(np.sum(model.weight(b2, t2))) + float(np.sum(model.weight(b3, t3)))
        half = new_half
    return solver._assemble(bp, model, base, t, res, intervals, (-float(half), float(half)))


# ---------------------------------------------------------------------------
# Wigner-Weisskopf (flat-coupling continuum)


def ww_survival(big_gamma: float, t):
    """Golden-rule exponential decay exp(-Gamma t)."""
    if big_gamma <= 0.0:
        raise ValueError(f"decay rate must be positive, got {big_gamma!r}")
    t = np.asarray(t, dtype=float)
    out = np.exp(-big_gamma * t)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Lorentzian continuum (Fano technique)


def fano_F(e, w: float, gamma: float):
    """Level-shift function F(E) = W^2 E / (E^2 + gamma^2)."""
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    e = np.asarray(e, dtype=float)
    out = w * w * e / (e * e + gamma * gamma)
    return out if out.ndim else float(out)


def fano_alpha_sq(e, w: float, gamma: float, e_phi: float = 0.0):
    """Discrete-state weight density of the Lorentzian continuum.

    |alpha(E)|^2 = (W^2 gamma/pi) / [(E(E - E_phi) - W^2)^2
                                     + gamma^2 (E - E_phi)^2],
    normalized to unit integral over the real line.
    """
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    e = np.asarray(e, dtype=float)
    shifted = e - e_phi
    denom = (e * shifted - w * w) ** 2 + gamma * gamma * shifted * shifted
    out = (w * w * gamma / np.pi) / denom
    return out if out.ndim else float(out)


def fano_poles(w: float, gamma: float) -> tuple[complex, complex]:
    """Resolvent poles E_pm = (-i gamma +- sqrt(4W^2 - gamma^2)) / 2.

    Underdamped (2W > gamma): real parts +-sqrt(4W^2-gamma^2)/2, both with
    imaginary part -gamma/2.  Overdamped: both purely imaginary.  At
    gamma = 2W the two poles merge into a double pole at -iW.
    """
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    root = cmath.sqrt(complex(4.0 * w * w - gamma * gamma, 0.0))
    return (-1j * gamma + root) / 2.0, (-1j * gamma - root) / 2.0


def fano_is_degenerate(w: float, gamma: float) -> bool:
    """True when the two resolvent poles collide (gamma = 2W)."""
    return abs(gamma - 2.0 * w) < _FANO_DEGENERATE_TOL


def fano_survival(w: float, gamma: float, t):
    """Closed-form survival probability of the Lorentzian continuum (E_phi = 0).

    W^4 gamma^2 |exp(-iE+t)/(E+[2(E+^2-W^2)+gamma^2])
                 + exp(-iE-t)/(E-[2(E-^2-W^2)+gamma^2])|^2;
    the partial fractions collapse at gamma = 2W, which raises instead.
    """
    if fano_is_degenerate(w, gamma):
        raise DegenerateParameterError(
            f"pole collision at gamma = 2W (gamma={gamma!r}, W={w!r}); closed form invalid"
        )
    ep, em = fano_poles(w, gamma)
    t = np.asarray(t, dtype=float)
    dp = ep * (2.0 * (ep * ep - w * w) + gamma * gamma)
    dm = em * (2.0 * (em * em - w * w) + gamma * gamma)
    amp = np.exp(-1j * ep * t) / dp + np.exp(-1j * em * t) / dm
    out = (w**4 * gamma**2) * np.abs(amp) ** 2
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Tagged limit selection (CLI and figure overlays)

_KIND_FIELDS = {
    "rabi": ("e1", "v"),
    "bj": ("v", "delta", "e_phi"),
    "ww": ("big_gamma",),
    "fano": ("w", "gamma", "e_phi"),
}


@dataclass(frozen=True)
class LimitSpec:
    """Tagged parameter set selecting one reference model."""

    kind: str
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in _KIND_FIELDS:
            raise ValueError(f"unknown limit kind {self.kind!r}")
        missing = [f for f in _KIND_FIELDS[self.kind] if f not in self.params]
        if missing:
            raise ValueError(f"limit {self.kind!r} missing parameters {missing}")
        if self.kind == "bj" and self.params["delta"] <= 0.0:
            raise ValueError("bj limit needs delta > 0")
        if self.kind == "ww" and self.params["big_gamma"] <= 0.0:
            raise ValueError("ww limit needs big_gamma > 0")
        if self.kind == "fano" and self.params["gamma"] <= 0.0:
            raise ValueError("fano limit needs gamma > 0")


def limit_survival(spec: LimitSpec, times) -> np.ndarray:
    """Survival curve of the selected reference model on the given times."""
    times = np.asarray(times, dtype=float)
    q = spec.params
    if spec.kind == "rabi":
        return np.asarray(rabi_survival(q["e1"], q["v"], times))
    if spec.kind == "ww":
        return np.asarray(ww_survival(q["big_gamma"], times))
    if spec.kind == "fano":
        if q.get("e_phi", 0.0) != 0.0:
            raise ValueError("closed-form fano survival is defined for e_phi = 0")
        return np.asarray(fano_survival(q["w"], q["gamma"], times))
    s = bj_spectrum(q["v"], q["delta"], q.get("e_phi", 0.0))
    from .dynamics import _phase_sum

    return np.abs(_phase_sum(s.energies, s.weights, times)) ** 2
