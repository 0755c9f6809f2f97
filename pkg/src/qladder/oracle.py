"""Dense truncated-matrix oracle: build, diagonalize, evolve.

Brute-force counterpart of the semi-analytic solver.  The Hamiltonian is
truncated to ladder indices |k| <= n_cut, stored as a dense symmetric
matrix in the basis [phi, k = -n_cut .. n_cut], and diagonalized with an
in-house cyclic Jacobi plane-rotation sweep (JIT-compiled); no library
eigensolver is involved, which keeps the oracle an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .dynamics import TimeSeries
from .errors import ConvergenceError
from .params import ModelParams

DEFAULT_MAX_SWEEPS = 100


@dataclass(frozen=True)
class DenseSystem:
    """Dense symmetric Hamiltonian over [phi, k=-n_cut..n_cut]."""

    params: ModelParams
    n_cut: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.n_cut + 2


def build_hamiltonian(p: ModelParams, n_cut: int) -> DenseSystem:
    """Arrowhead matrix: diagonal [E_phi, k*delta], couplings v_k in row/col 0."""
    if n_cut < 1:
        raise ValueError(f"n_cut must be a positive integer, got {n_cut!r}")
    k = np.arange(-n_cut, n_cut + 1, dtype=float)
    vk = np.asarray(p.coupling(k), dtype=float)
    dim = 2 * n_cut + 2
    h = np.zeros((dim, dim))
    h[0, 0] = p.e_phi
    idx = np.arange(1, dim)
    h[idx, idx] = k * p.delta
    h[0, 1:] = vk
    h[1:, 0] = vk
    return DenseSystem(params=p, n_cut=int(n_cut), matrix=h)


@njit(cache=True)
def _jacobi_cyclic(a, v, max_sweeps, off_thresh):
    """Cyclic Jacobi sweeps on symmetric a, accumulating rotations into v.

    Returns the number of sweeps used, or -1 if the off-diagonal norm is
    still above off_thresh after max_sweeps.
    """
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if np.sqrt(2.0 * off) <= off_thresh:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                app = a[p, p]
                aqq = a[q, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    if i != p and i != q:
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = aip * c - aiq * s
                        a[p, i] = a[i, p]
                        a[i, q] = aiq * c + aip * s
                        a[q, i] = a[i, q]
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = vip * c - viq * s
                    v[i, q] = viq * c + vip * s
    # final convergence check after the last sweep
    off = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            off += a[i, j] * a[i, j]
    if np.sqrt(2.0 * off) <= off_thresh:
        return max_sweeps
    return -1


def diagonalize(
    d: DenseSystem,
    off_tol: float = 1e-12,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of d.matrix.

    Sweeps run until the off-diagonal Frobenius norm drops below
    off_tol * max|H|; exceeding the sweep budget raises ConvergenceError.
    """
    if not off_tol > 0.0:
        raise ValueError(f"off_tol must be positive, got {off_tol!r}")
    a = np.array(d.matrix, dtype=float, copy=True)
    v = np.eye(a.shape[0])
    scale = float(np.max(np.abs(d.matrix)))
    thresh = off_tol * scale if scale > 0.0 else off_tol
    sweeps = _jacobi_cyclic(a, v, int(max_sweeps), thresh)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi sweeps did not converge within {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def oracle_survival(
    p: ModelParams,
    n_cut: int,
    t_max: float,
    n_steps: int,
    off_tol: float = 1e-12,
) -> TimeSeries:
    """Survival probability from the dense eigendecomposition.

    P(t) = |sum_j exp(-i lambda_j t) Q[0,j]^2|^2 over the complete finite
    eigenbasis, so P(0) = 1 up to rounding.
    """
    if not t_max > 0.0:
        raise ValueError(f"t_max must be positive, got {t_max!r}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be a positive integer, got {n_steps!r}")
    d = build_hamiltonian(p, n_cut)
    lam, q = diagonalize(d, off_tol=off_tol)
    w = q[0, :] ** 2
    times = np.linspace(0.0, float(t_max), int(n_steps) + 1)
    amps = np.exp(-1j * np.outer(times, lam)) @ w
    meta = {
        "params": p,
        "n_cut": int(n_cut),
        "engine": "oracle",
        "norm_deficit": max(0.0, 1.0 - float(np.sum(w))),
    }
    return TimeSeries(times=times, probs=np.abs(amps) ** 2, amps=amps, meta=meta)
