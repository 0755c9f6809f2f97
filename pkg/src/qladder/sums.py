"""Closed forms and brute-force partial sums for the ladder spectral sums.

The eigenvalue and eigenvector formulas of the model are built from two
infinite sums over the ladder index k,

    S1(eps, a) = sum_k [1 + (k/a)^2]^(-1) / (eps - k)
    S2(eps, a) = sum_k [1 + (k/a)^2]^(-1) / (eps - k)^2 = -dS1/deps,

evaluated here both in closed form (Mittag-Leffler partial fractions, with
the symmetric principal-value convention for the conditionally convergent
piece) and as raw symmetric partial sums that serve as an independent
oracle in the tests.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateParameterError, PoleError
from .params import ModelParams

# |eps - nearest integer| below this is treated as sitting on a pole.
POLE_GUARD = 1e-12

# coth(x) is 1.0 to double precision beyond this argument.
_COTH_SATURATION = 19.0


def coth(x):
    """Hyperbolic cotangent for x > 0, via coth(x) = 1 + 2/(e^(2x) - 1)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise ValueError("coth is evaluated for positive arguments only")
    small = np.minimum(x, _COTH_SATURATION)
    out = np.where(x > _COTH_SATURATION, 1.0, 1.0 + 2.0 / np.expm1(2.0 * small))
    return out if out.ndim else float(out)


def alpha(a):
    """Energy-independent eigenvalue-equation coefficient coth(pi a)/a."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0.0):
        raise ValueError(f"resonance width a must be positive, got {a!r}")
    out = coth(np.pi * a) / a
    return out if np.ndim(out) else float(out)


def lorentz_sum(a):
    """Closed form of sum_k 1/(a^2 + k^2), equal to (pi/a) coth(pi a)."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0.0):
        raise ValueError(f"resonance width a must be positive, got {a!r}")
    out = (np.pi / a) * coth(np.pi * a)
    return out if np.ndim(out) else float(out)


def lorentz_sum_partial(a: float, n_cut: int) -> float:
    """Symmetric partial sum of 1/(a^2 + k^2) over k = -n_cut .. n_cut."""
    if a <= 0.0:
        raise ValueError(f"resonance width a must be positive, got {a!r}")
    k = np.arange(-int(n_cut), int(n_cut) + 1, dtype=float)
    return float(np.sum(1.0 / (a * a + k * k)))


def _check_poles(eps) -> None:
    frac = eps - np.round(eps)
    if np.any(np.abs(frac) < POLE_GUARD):
        raise PoleError(f"eps within {POLE_GUARD} of an integer: {eps!r}")


def cot_pi(eps):
    """cot(pi*eps), argument-reduced so near-integer eps stay well conditioned."""
    eps = np.asarray(eps, dtype=float)
    _check_poles(eps)
    frac = eps - np.round(eps)
    out = np.cos(np.pi * frac) / np.sin(np.pi * frac)
    return out if out.ndim else float(out)


def csc2_pi(eps):
    """csc^2(pi*eps) with the same argument reduction as cot_pi."""
    eps = np.asarray(eps, dtype=float)
    _check_poles(eps)
    s = np.sin(np.pi * (eps - np.round(eps)))
    out = 1.0 / (s * s)
    return out if out.ndim else float(out)


def s1_partial(eps: float, a: float, n_cut: int) -> float:
    """Brute-force symmetric partial sum of S1 over k = -n_cut .. n_cut.

    This is the principal-value prescription taken literally at finite
    cutoff, with no tail acceleration; it is the oracle the closed form
    is checked against.
    """
    eps = float(eps)
    if a <= 0.0:
        raise ValueError(f"resonance width a must be positive, got {a!r}")
    if n_cut < 1:
        raise ValueError(f"n_cut must be a positive integer, got {n_cut!r}")
    _check_poles(eps)
    # summed as the symmetric pairs (k, -k) the principal value is built
    # from; this keeps the sum exactly odd in eps at double precision
    k = np.arange(1, int(n_cut) + 1, dtype=float)
    c = 1.0 + (k / a) ** 2
    pairs = 1.0 / (c * (eps - k)) + 1.0 / (c * (eps + k))
    return float(1.0 / eps + np.sum(pairs))


def s1_closed(eps, a):
    """Closed form of S1: pi * [cot(pi eps) + eps*alpha(a)] / (1 + (eps/a)^2)."""
    eps = np.asarray(eps, dtype=float)
    al = alpha(a)
    out = np.pi * (cot_pi(eps) + eps * al) / (1.0 + (eps / a) ** 2)
    return out if out.ndim else float(out)


def s2_trig(eps, a):
    """Closed form of S2 = -dS1/deps, in terms of cot and csc^2.

    S2 is a sum of strictly positive terms, so the returned value is
    positive for every non-integer eps.
    """
    eps = np.asarray(eps, dtype=float)
    a = float(a)
    al = alpha(a)
    q = 1.0 + (eps / a) ** 2
    cot = cot_pi(eps)
    csc2 = csc2_pi(eps)
    out = (np.pi / q) * (np.pi * csc2 - al + (2.0 * eps / a**2) * (cot + al * eps) / q)
    return out if out.ndim else float(out)


def cot_rational(eps, p: ModelParams):
    """Rational stand-in for cot(pi*eps), exact only on the eigenvalue set.

    Solving the eigenvalue equation for the cotangent gives

        C(eps) = (delta^2/(pi v^2)) * (1 + (eps/a)^2) * (eps - eps_phi)
                 - eps * alpha(a),

    which equals cot(pi*eps) when eps is an eigenvalue and is otherwise
    just a rational function of eps.
    """
    if p.v == 0.0:
        raise DegenerateParameterError("cot_rational needs a nonzero coupling v")
    eps = np.asarray(eps, dtype=float)
    al = alpha(p.a)
    coeff = p.delta**2 / (np.pi * p.v**2)
    out = coeff * (1.0 + (eps / p.a) ** 2) * (eps - p.eps_phi) - eps * al
    return out if out.ndim else float(out)


def s2_rational(eps, p: ModelParams):
    """S2 with cot(pi*eps) replaced by its rational form cot_rational.

    Agrees with s2_trig on the eigenvalue solution set; off that set the
    two deliberately differ.
    """
    eps = np.asarray(eps, dtype=float)
    al = alpha(p.a)
    q = 1.0 + (eps / p.a) ** 2
    c = cot_rational(eps, p)
    out = (np.pi / q) * (np.pi * (1.0 + c * c) - al + (2.0 * eps / p.a**2) * (eps * al + c) / q)
    return out if out.ndim else float(out)
