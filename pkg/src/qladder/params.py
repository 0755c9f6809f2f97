"""Parameter bundle for the Lorentzian-coupled ladder Hamiltonian."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """Inputs of the discrete-state / ladder model.

    v      coupling amplitude (energy units); only v**2 enters the spectrum
    delta  ladder spacing, > 0 (energy units)
    a      dimensionless resonance half-width, > 0
    e_phi  energy of the discrete state (energy units)

    The coupling to ladder state k is v_k = v / sqrt(1 + (k/a)**2), so the
    profile has half-width a in units of the spacing (gamma = a*delta in
    energy units).
    """

    v: float
    delta: float
    a: float
    e_phi: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta > 0.0):
            raise ValueError(f"delta must be positive and finite, got {self.delta!r}")
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise ValueError(f"a must be positive and finite, got {self.a!r}")
        if not (math.isfinite(self.v) and math.isfinite(self.e_phi)):
            raise ValueError("v and e_phi must be finite")

    @property
    def eps_phi(self) -> float:
        """Discrete-state energy in units of the spacing."""
        return self.e_phi / self.delta

    @property
    def gamma(self) -> float:
        """Dimensionful resonance width, gamma = a * delta."""
        return self.a * self.delta

    @property
    def big_gamma(self) -> float:
        """Golden-rule decay rate, Gamma = 2 pi v**2 / delta."""
        return 2.0 * math.pi * self.v * self.v / self.delta

    @property
    def w(self) -> float:
        """Continuum coupling scale, W**2 = Gamma * gamma / 2."""
        return math.sqrt(self.big_gamma * self.gamma / 2.0)

    def coupling(self, k):
        """Coupling v_k = v / sqrt(1 + (k/a)**2) to ladder state k."""
        k = np.asarray(k, dtype=float)
        return self.v / np.sqrt(1.0 + (k / self.a) ** 2)
