"""Transcendental eigenvalue solver for the Lorentzian-coupled ladder.

The dimensionless eigenvalues eps_mu are the roots of

    g(eps) = eps_phi + (pi v^2/delta^2) [cot(pi eps) + alpha(a) eps]
             / (1 + (eps/a)^2) - eps,

which has a pole at every integer and, for a nonzero coupling, exactly one
root in every unit interval (n, n+1).  Roots are located by sign sampling
and refined in a local coordinate t = eps - m relative to the nearest
integer m, where cot(pi eps) = cot(pi t) is exactly periodic; this keeps
roots that sit within 1e-9 of a ladder level (the narrow-resonance regime)
at full relative precision instead of drowning in the double-precision
granularity of eps itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import sums
from .errors import BracketError, PoleError
from .params import ModelParams

# Sampling offset from the integer poles of g.
POLE_OFFSET = 1e-9
# Roots closer than this are considered duplicates.
DEDUP_TOL = 1e-10
# Lower edge for pinned-root brackets in local coordinates.
_T_FLOOR = 1e-300
# Fast asymptotic path is used when the predicted offset is below this.
_FAST_SHIFT_MAX = 1e-3

_BISECT_ITERS = 54
_NEWTON_ITERS = 4
_CHUNK = 1 << 19


@dataclass(frozen=True)
class EigenPair:
    """One dimensionless eigenvalue with its discrete-state weight."""

    eps: float
    weight: float
    interval_index: int | None
    residual: float


@dataclass(frozen=True)
class Spectrum:
    """Solved eigenvalues over a finite window, sorted ascending.

    Arrays are the primary storage; ``pairs`` materializes EigenPair
    records on demand.  norm_deficit = 1 - sum(weights) measures how much
    discrete-state weight the window misses.
    """

    params: ModelParams
    eps: np.ndarray
    weights: np.ndarray
    interval_index: np.ndarray
    residuals: np.ndarray
    window: tuple[float, float]
    norm_deficit: float

    def __len__(self) -> int:
        return self.eps.size

    @property
    def energies(self) -> np.ndarray:
        """Dimensionful eigenvalues E_mu = eps_mu * delta."""
        return self.eps * self.params.delta

    @property
    def pairs(self) -> list[EigenPair]:
        return [
            EigenPair(float(e), float(w), int(n), float(r))
            for e, w, n, r in zip(self.eps, self.weights, self.interval_index, self.residuals)
        ]


class _LadderModel:
    """g and its derivative in local coordinates eps = base + t, base integer."""

    def __init__(self, p: ModelParams):
        self.p = p
        self.alpha = sums.alpha(p.a)
        self.vd2 = (p.v / p.delta) ** 2
        self.pref = math.pi * self.vd2

    def _trig(self, t):
        s = np.sin(np.pi * t)
        c = np.cos(np.pi * t)
        with np.errstate(divide="ignore", over="ignore"):
            return c / s, 1.0 / (s * s)

    def g(self, base, t):
        eps = base + t
        cot, _ = self._trig(t)
        q = 1.0 + (eps / self.p.a) ** 2
        return self.p.eps_phi + self.pref * (cot + self.alpha * eps) / q - eps

    def s2(self, base, t):
        eps = base + t
        cot, csc2 = self._trig(t)
        a = self.p.a
        q = 1.0 + (eps / a) ** 2
        with np.errstate(over="ignore", invalid="ignore"):
            return (np.pi / q) * (np.pi * csc2 - self.alpha + (2.0 * eps / a**2) * (cot + self.alpha * eps) / q)

    def gprime(self, base, t):
        return -1.0 - self.vd2 * self.s2(base, t)

    def weight(self, base, t):
        with np.errstate(over="ignore", invalid="ignore"):
            w = 1.0 / (1.0 + self.vd2 * self.s2(base, t))
        return np.where(np.isfinite(w), w, 0.0)

    def asymptotic_shift(self, m):
        """Predicted root offset from integer m when the root hugs the pole."""
        m = np.asarray(m, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            denom = (1.0 + (m / self.p.a) ** 2) * (m - self.p.eps_phi) - math.pi * self.vd2 * self.alpha * m
            return self.vd2 / denom


class _TruncatedLadderModel:
    """Same interface as _LadderModel for the ladder truncated to |k| <= n_cut."""

    def __init__(self, p: ModelParams, n_cut: int):
        self.p = p
        self.n_cut = int(n_cut)
        self.k = np.arange(-self.n_cut, self.n_cut + 1, dtype=float)
        self.c = 1.0 / (1.0 + (self.k / p.a) ** 2)
        self.vd2 = (p.v / p.delta) ** 2

    def _denoms(self, base, t):
        base = np.atleast_1d(np.asarray(base, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        # (base - k) is an exact integer difference, so the k = base term
        # reduces to t itself and keeps pinned roots fully resolved.
        return (base[:, None] - self.k[None, :]) + t[:, None]

    def g(self, base, t):
        d = self._denoms(base, t)
        s1 = np.sum(self.c[None, :] / d, axis=1)
        out = self.p.eps_phi + self.vd2 * s1 - (np.asarray(base, dtype=float) + np.asarray(t, dtype=float))
        return out if np.ndim(base) or np.ndim(t) else float(out[0])

    def s2(self, base, t):
        d = self._denoms(base, t)
        out = np.sum(self.c[None, :] / (d * d), axis=1)
        return out if np.ndim(base) or np.ndim(t) else float(out[0])

    def gprime(self, base, t):
        return -1.0 - self.vd2 * self.s2(base, t)

    def weight(self, base, t):
        with np.errstate(over="ignore", invalid="ignore"):
            w = 1.0 / (1.0 + self.vd2 * self.s2(base, t))
        return np.where(np.isfinite(w), w, 0.0)


def residual_g(eps, p: ModelParams):
    """Eigenvalue-equation residual; zero exactly at the eigenvalues."""
    eps = np.asarray(eps, dtype=float)
    sums._check_poles(eps)
    base = np.round(eps)
    out = _LadderModel(p).g(base, eps - base)
    return out if out.ndim else float(out)


def residual_g_truncated(eps, p: ModelParams, n_cut: int):
    """Residual of the finite-ladder (|k| <= n_cut) eigenvalue equation."""
    eps = np.asarray(eps, dtype=float)
    near = np.abs(eps - np.round(eps)) < sums.POLE_GUARD
    onpole = near & (np.abs(np.round(eps)) <= n_cut)
    if np.any(onpole):
        raise PoleError(f"eps within {sums.POLE_GUARD} of a truncated-ladder level: {eps!r}")
    model = _TruncatedLadderModel(p, n_cut)
    flat = np.atleast_1d(eps)
    base = np.round(flat)
    out = model.g(base, flat - base)
    return out.reshape(eps.shape) if eps.ndim else float(out[0])


def monotonicity_certificate(p: ModelParams) -> bool:
    """True iff coth(pi a) <= pi a, which certifies one root per interval."""
    return sums.coth(math.pi * p.a) <= math.pi * p.a


@lru_cache(maxsize=1)
def critical_width_a0() -> float:
    """Root a0 of coth(pi a) = pi a, the certificate threshold, by bisection."""
    f = lambda a: sums.coth(math.pi * a) - math.pi * a
    lo, hi = 0.1, 1.0
    if not (f(lo) > 0.0 > f(hi)):
        raise BracketError("a0 bisection bracket lost")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def near_integer_shift(n: int, p: ModelParams) -> float:
    """Predicted O(a^2) eigenvalue displacement from the ladder level n.

    Delta = (v^2 a^2 / (delta^2 n^2)) / (n - eps_phi - v^2/(n delta^2)),
    valid in the narrow-resonance regime a -> 0 for n != 0.
    """
    if n == 0:
        raise ValueError("shift formula applies to nonzero ladder indices")
    vd2 = (p.v / p.delta) ** 2
    denom = n - p.eps_phi - vd2 / n
    if abs(denom) < 1e-12 * max(1.0, abs(n)):
        from .errors import DegenerateParameterError

        raise DegenerateParameterError(f"degenerate shift denominator at n={n}")
    return (vd2 * p.a**2 / n**2) / denom


def bracket_roots(p: ModelParams, window: tuple[float, float], subsamples: int = 64) -> list[tuple[float, float]]:
    """Sign-change brackets of g on every unit interval intersecting window.

    Each interval is sampled at ``subsamples`` points spanning it, offset
    POLE_OFFSET from the poles; every adjacent sign-change pair is
    returned.  Roots hiding closer than the offset to a pole produce no
    bracket here; solve_spectrum recovers them in local coordinates.
    """
    lo, hi = float(window[0]), float(window[1])
    if lo >= hi:
        raise ValueError("window must satisfy lo < hi")
    if lo == math.floor(lo) or hi == math.floor(hi):
        raise ValueError("window endpoints must not be integers")
    if subsamples < 8:
        raise ValueError("subsamples must be at least 8")
    model = _LadderModel(p)
    brackets: list[tuple[float, float]] = []
    for n in range(math.floor(lo), math.ceil(hi)):
        x = np.linspace(n + POLE_OFFSET, n + 1 - POLE_OFFSET, subsamples)
        base = np.round(x)
        gv = model.g(base, x - base)
        pos = gv > 0.0
        change = np.nonzero(pos[:-1] != pos[1:])[0]
        for j in change:
            brackets.append((float(x[j]), float(x[j + 1])))
    return brackets


def _bisect_newton(model, base, t_lo, t_hi):
    """Vectorized bisection plus Newton polish on g(base + t) = 0.

    Expects g(t_lo) > 0 > g(t_hi) elementwise (g decreases through the
    root).  Returns (t, residual).
    """
    t_lo = np.array(t_lo, dtype=float, copy=True)
    t_hi = np.array(t_hi, dtype=float, copy=True)
    for _ in range(_BISECT_ITERS):
        tm = 0.5 * (t_lo + t_hi)
        gm = model.g(base, tm)
        pos = gm > 0.0
        t_lo = np.where(pos, tm, t_lo)
        t_hi = np.where(pos, t_hi, tm)
    t = 0.5 * (t_lo + t_hi)
    for _ in range(_NEWTON_ITERS):
        gv = model.g(base, t)
        gp = model.gprime(base, t)
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            step = gv / gp
        step = np.where(np.isfinite(step), step, 0.0)
        t = np.clip(t - step, t_lo, t_hi)
    res = np.abs(model.g(base, t))
    return t, res


def _solve_intervals(model, n_arr: np.ndarray, subsamples: int):
    """Solve g = 0 on each unit interval (n, n+1); returns (base, t, residual).

    Classification: a sampled sign change gives a regular bracket; an
    all-negative (all-positive) sample row means the root hides within
    POLE_OFFSET of the left (right) pole and is bracketed in local
    coordinates instead.
    """
    m = n_arr.size
    nodes = max(int(subsamples), 2)
    n_f = n_arr.astype(float)
    x = n_f[:, None] + np.linspace(POLE_OFFSET, 1.0 - POLE_OFFSET, nodes)[None, :]
    xb = np.round(x)
    gv = model.g(xb.ravel(), (x - xb).ravel()).reshape(m, nodes)
    pos = gv > 0.0
    change = pos[:, :-1] & ~pos[:, 1:]
    has = change.any(axis=1)
    first = np.argmax(change, axis=1)

    base = np.empty(m)
    t_lo = np.empty(m)
    t_hi = np.empty(m)

    idx = np.nonzero(has)[0]
    if idx.size:
        x_lo = x[idx, first[idx]]
        x_hi = x[idx, first[idx] + 1]
        b = np.round(0.5 * (x_lo + x_hi))
        base[idx] = b
        t_lo[idx] = x_lo - b
        t_hi[idx] = x_hi - b

    rest = np.nonzero(~has)[0]
    if rest.size:
        all_neg = ~pos[rest, 0]
        # all negative: root in (n, n + offset); all positive: in (n+1 - offset, n+1)
        base[rest] = np.where(all_neg, n_f[rest], n_f[rest] + 1.0)
        t_lo[rest] = np.where(all_neg, _T_FLOOR, -POLE_OFFSET)
        t_hi[rest] = np.where(all_neg, POLE_OFFSET, -_T_FLOOR)

    t, res = _bisect_newton(model, base, t_lo, t_hi)
    return base, t, res


def _fast_asymptotic(model, base: np.ndarray, t0: np.ndarray):
    """Newton iteration from the predicted near-pole offset; returns (t, res, ok)."""
    t = np.array(t0, dtype=float, copy=True)
    lo = np.minimum(0.25 * t0, 4.0 * t0)
    hi = np.maximum(0.25 * t0, 4.0 * t0)
    last = np.full_like(t, np.inf)
    for _ in range(8):
        gv = model.g(base, t)
        gp = model.gprime(base, t)
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            step = gv / gp
        step = np.where(np.isfinite(step), step, 0.0)
        last = np.abs(step)
        t = np.clip(t - step, lo, hi)
    res = np.abs(model.g(base, t))
    ok = (last <= 1e-12 * np.abs(t)) & (t != lo) & (t != hi) & (np.abs(t) < 0.5)
    return t, res, ok


def _solve_interval_block(model, n_arr: np.ndarray, subsamples: int, use_fast: bool):
    """Roots for a block of intervals, with the asymptotic fast path when safe."""
    n_f = n_arr.astype(float)
    base = np.empty(n_arr.size)
    t = np.empty(n_arr.size)
    res = np.empty(n_arr.size)
    slow = np.ones(n_arr.size, dtype=bool)

    if use_fast:
        sh_l = model.asymptotic_shift(n_f)
        sh_r = model.asymptotic_shift(n_f + 1.0)
        left_ok = (sh_l > 0.0) & (sh_l < _FAST_SHIFT_MAX)
        right_ok = (sh_r < 0.0) & (sh_r > -_FAST_SHIFT_MAX) & ~left_ok
        fast = left_ok | right_ok
        if np.any(fast):
            fb = np.where(left_ok, n_f, n_f + 1.0)[fast]
            ft0 = np.where(left_ok, sh_l, sh_r)[fast]
            ft, fres, ok = _fast_asymptotic(model, fb, ft0)
            fi = np.nonzero(fast)[0]
            good = fi[ok]
            base[good] = fb[ok]
            t[good] = ft[ok]
            res[good] = fres[ok]
            slow[good] = False

    si = np.nonzero(slow)[0]
    if si.size:
        # dense sampling is only needed for the handful of central intervals
        sub_chunk = max(1, (1 << 21) // max(subsamples, 2))
        for s0 in range(0, si.size, sub_chunk):
            sel = si[s0 : s0 + sub_chunk]
            b, tt, rr = _solve_intervals(model, n_arr[sel], subsamples)
            base[sel] = b
            t[sel] = tt
            res[sel] = rr
    return base, t, res


def _default_subsamples(p: ModelParams, subsamples: int | None) -> int:
    if subsamples is not None:
        return int(subsamples)
    return 8 if monotonicity_certificate(p) else 64


def _solve_range(model, n_lo: int, n_hi: int, subsamples: int, use_fast: bool):
    """All roots for intervals (n, n+1), n in [n_lo, n_hi); chunked."""
    bases, ts, residuals, intervals = [], [], [], []
    for c0 in range(n_lo, n_hi, _CHUNK):
        c1 = min(c0 + _CHUNK, n_hi)
        n_arr = np.arange(c0, c1, dtype=np.int64)
        b, t, r = _solve_interval_block(model, n_arr, subsamples, use_fast)
        bases.append(b)
        ts.append(t)
        residuals.append(r)
        intervals.append(n_arr)
    return (
        np.concatenate(bases),
        np.concatenate(ts),
        np.concatenate(residuals),
        np.concatenate(intervals),
    )


def _assemble(p, model, base, t, res, intervals, window) -> Spectrum:
    eps = base + t
    weights = model.weight(base, t)
    order = np.argsort(eps, kind="stable")
    eps, weights, res, intervals = eps[order], weights[order], res[order], intervals[order]
    if eps.size > 1:
        keep = np.ones(eps.size, dtype=bool)
        keep[1:] = np.diff(eps) > DEDUP_TOL
        eps, weights, res, intervals = eps[keep], weights[keep], res[keep], intervals[keep]
    deficit = max(0.0, 1.0 - float(np.sum(weights)))
    return Spectrum(
        params=p,
        eps=eps,
        weights=weights,
        interval_index=intervals.astype(np.int64),
        residuals=res,
        window=(float(window[0]), float(window[1])),
        norm_deficit=deficit,
    )


def solve_spectrum(
    p: ModelParams,
    window: tuple[float, float] | None = None,
    *,
    target_deficit: float = 1e-6,
    max_half_width: float = 1000.0,
    subsamples: int | None = None,
) -> Spectrum:
    """Solve the eigenvalue problem over a window of dimensionless energy.

    With an explicit ``window`` every unit interval intersecting it is
    solved and roots outside the window are dropped.  With ``window=None``
    a symmetric window is grown (doubling) until the missed discrete-state
    weight falls below ``target_deficit`` or the width reaches
    2*max_half_width.
    """
    if p.v == 0.0:
        eps = np.array([p.eps_phi])
        return Spectrum(
            params=p,
            eps=eps,
            weights=np.array([1.0]),
            interval_index=np.array([math.floor(p.eps_phi)], dtype=np.int64),
            residuals=np.array([0.0]),
            window=(p.eps_phi - 1.0, p.eps_phi + 1.0),
            norm_deficit=0.0,
        )
    model = _LadderModel(p)
    nsub = _default_subsamples(p, subsamples)

    if window is not None:
        lo, hi = float(window[0]), float(window[1])
        if lo >= hi:
            raise ValueError("window must satisfy lo < hi")
        base, t, res, intervals = _solve_range(model, math.floor(lo), math.ceil(hi), nsub, True)
        eps = base + t
        inside = (eps >= lo) & (eps <= hi)
        return _assemble(p, model, base[inside], t[inside], res[inside], intervals[inside], (lo, hi))

    half = int(max(10, math.ceil(abs(p.eps_phi)) + 5, math.ceil(3.0 * abs(p.v) / p.delta) + 5))
    half = min(half, int(max_half_width))
    base, t, res, intervals = _solve_range(model, -half, half, nsub, True)
    wsum = float(np.sum(model.weight(base, t)))
    while 1.0 - wsum >= target_deficit and half < max_half_width:
        new_half = min(2 * half, int(max_half_width))
        b2, t2, r2, i2 = _solve_range(model, -new_half, -half, nsub, True)
        b3, t3, r3, i3 = _solve_range(model, half, new_half, nsub, True)
        base = np.concatenate([b2, base, b3])
        t = np.concatenate([t2, t, t3])
        res = np.concatenate([r2, res, r3])
        intervals = np.concatenate([i2, intervals, i3])
        wsum += float(np.sum(model.weight(b2, t2))) + float(np.sum(model.weight(b3, t3)))
        half = new_half
    return _assemble(p, model, base, t, res, intervals, (-float(half), float(half)))


def solve_truncated_spectrum(p: ModelParams, n_cut: int, subsamples: int | None = None) -> Spectrum:
    """All 2*n_cut + 2 eigenvalues of the ladder truncated to |k| <= n_cut.

    This is the same finite model the dense oracle diagonalizes, solved
    through the secular equation instead; the two outermost eigenvalues
    (beyond the truncated ladder edges) are bracketed by expansion.
    """
    if n_cut < 1:
        raise ValueError("n_cut must be a positive integer")
    if p.v == 0.0:
        raise ValueError("truncated secular equation needs a nonzero coupling")
    model = _TruncatedLadderModel(p, n_cut)
    nsub = _default_subsamples(p, subsamples)
    base, t, res, intervals = _solve_range(model, -n_cut, n_cut, nsub, False)

    outer_b, outer_t, outer_r, outer_i = [], [], [], []
    for side in (+1, -1):
        edge = side * n_cut
        width = 1.0
        while True:
            probe = side * width
            if (model.g(float(edge), probe) > 0.0) != (side > 0):
                break
            width *= 2.0
            if width > 1e6:
                raise BracketError("outer eigenvalue escaped the search range")
        if side > 0:
            t_lo, t_hi = POLE_OFFSET, width
        else:
            t_lo, t_hi = -width, -POLE_OFFSET
        tt, rr = _bisect_newton(model, np.array([float(edge)]), np.array([t_lo]), np.array([t_hi]))
        outer_b.append(float(edge))
        outer_t.append(float(tt[0]))
        outer_r.append(float(rr[0]))
        outer_i.append(math.floor(edge + tt[0]))

    base = np.concatenate([base, np.array(outer_b)])
    t = np.concatenate([t, np.array(outer_t)])
    res = np.concatenate([res, np.array(outer_r)])
    intervals = np.concatenate([intervals, np.array(outer_i, dtype=np.int64)])
    lo = float(np.min(base + t)) - 0.5
    hi = float(np.max(base + t)) + 0.5
    return _assemble(p, model, base, t, res, intervals, (lo, hi))


def stream_moments(p: ModelParams, half_width: int, subsamples: int | None = None) -> tuple[float, float, float]:
    """Weighted moment sums (sum w, sum w*eps, sum w*eps^2) over (-H, H).

    Accumulates chunk by chunk without materializing a Spectrum, so the
    very wide windows needed by the slowly converging second moment
    (tail ~ 2 v^2 a^2 / (delta^2 H)) stay within flat memory.
    """
    model = _LadderModel(p)
    nsub = _default_subsamples(p, subsamples)
    m0 = m1 = m2 = 0.0
    for c0 in range(-int(half_width), int(half_width), _CHUNK):
        c1 = min(c0 + _CHUNK, int(half_width))
        n_arr = np.arange(c0, c1, dtype=np.int64)
        b, t, _ = _solve_interval_block(model, n_arr, nsub, True)
        w = model.weight(b, t)
        eps = b + t
        m0 += float(np.sum(w))
        m1 += float(np.sum(w * eps))
        m2 += float(np.sum(w * eps * eps))
    return m0, m1, m2


def refine_root(bracket: tuple[float, float], p: ModelParams, tol: float = 1e-12) -> float:
    """Refine a sign-change bracket of g to a root.

    Bisection in the local coordinate with a Newton polish; stops at
    |g| < tol or when the bracket is exhausted at double precision.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise BracketError(f"invalid bracket ordering: {bracket!r}")
    model = _LadderModel(p)
    g_lo = float(residual_g(lo, p))
    g_hi = float(residual_g(hi, p))
    if not (g_lo > 0.0 > g_hi):
        if g_lo * g_hi > 0.0:
            raise BracketError(f"no sign change over bracket {bracket!r}")
        raise BracketError("bracket must run from positive to negative g")
    b = float(np.round(0.5 * (lo + hi)))
    t, res = _bisect_newton(model, np.array([b]), np.array([lo - b]), np.array([hi - b]))
    # success at |g| < tol, or at the residual floor a width-1e-13 bracket implies
    floor = 1e-13 * abs(float(model.gprime(b, t)[0]))
    if res[0] >= tol and res[0] >= floor:
        from .errors import ConvergenceError

        raise ConvergenceError(f"refinement stalled at |g|={res[0]:.3e} for bracket {bracket!r}")
    return float(b + t[0])


def k_component(eps: float, k: int, p: ModelParams):
    """Ladder component <k|psi> = sqrt(w) * v_k / (delta (eps - k)) at an eigenvalue."""
    eps_arr = np.asarray(eps, dtype=float)
    k_arr = np.asarray(k, dtype=float)
    if np.any(np.abs(eps_arr - k_arr) < 1e-12):
        raise PoleError(f"eps coincides with ladder index k={k!r}")
    w = 1.0 / (1.0 + (p.v / p.delta) ** 2 * sums.s2_trig(eps, p.a))
    out = np.sqrt(w) * p.coupling(k_arr) / (p.delta * (eps_arr - k_arr))
    return out if out.ndim else float(out)
