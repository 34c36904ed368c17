"""Closed-form reference solutions.

Two exactly solvable cases back the numerical tests:

* the constant-index Gaussian pair eps = n0^2 exp(alpha x^2), mu = exp(-alpha x^2),
  whose TE/TM effective potentials are shifted harmonic oscillators
  ``alpha^2 x^2 +/- alpha`` below the offset ``-n0^2 k0^2``;
* the Poschl-Teller well ``-k0^2 - lam(lam+1) sech^2 x`` produced by
  :class:`~gradmode.profiles.SechSquaredEps` with mu = 1.

Both polarizations of the oscillator share the Hermite functions; only the
eigenvalues differ, by 2*alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profiles import GaussianSusyPair, SechSquaredEps
from .reduction import Polarization

__all__ = [
    "OscillatorOracle",
    "oscillator_spectrum",
    "oscillator_wavefunction",
    "hermite_function",
    "poschl_teller_bound_state",
    "poschl_teller_profile",
    "poschl_teller_ground_state",
]


@dataclass(frozen=True)
class OscillatorOracle:
    alpha: float
    n0: float
    k0: float

    def __post_init__(self):
        for name in ("alpha", "n0", "k0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def profile(self) -> GaussianSusyPair:
        return GaussianSusyPair(self.n0, self.alpha)

    @property
    def shift(self) -> float:
        """n0^2 k0^2, the offset between Schrodinger and SUSY eigenvalues."""
        return self.n0**2 * self.k0**2


def oscillator_spectrum(o: OscillatorOracle, pol: Polarization, n_max: int) -> list[tuple[float, float]]:
    """``(E_susy, beta^2)`` for levels ``0..n_max``.

    E_susy is ``2 alpha (n+1)`` for TE and ``2 alpha n`` for TM, and
    ``beta^2 = n0^2 k0^2 - E_susy``.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    extra = 1 if Polarization(pol) is Polarization.TE else 0
    out = []
    for n in range(n_max + 1):
        e = 2.0 * o.alpha * (n + extra)
        out.append((e, o.shift - e))
    return out


def hermite_function(n: int, xi) -> np.ndarray:
    """Normalized Hermite function in the dimensionless coordinate ``xi``.

    Uses the recurrence on the normalized functions, which never forms H_n or
    n! explicitly and therefore cannot overflow.
    """
    xi = np.asarray(xi, dtype=float)
    prev = np.zeros_like(xi)
    cur = np.pi**-0.25 * np.exp(-0.5 * xi * xi)
    for k in range(n):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * xi * cur - math.sqrt(k / (k + 1)) * prev
    return cur


def oscillator_wavefunction(o: OscillatorOracle, pol: Polarization, n: int, x):
    """Unit-norm level ``n`` of the TE or TM oscillator Hamiltonian at ``x``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    Polarization(pol)
    s = math.sqrt(o.alpha)
    out = math.sqrt(s) * hermite_function(n, s * np.asarray(x, dtype=float))
    return float(out) if np.ndim(x) == 0 else out


def poschl_teller_bound_state(k0: float, depth_levels: int) -> list[tuple[float, float]]:
    """``(E_schr, beta^2)`` of the well ``-k0^2 - lam(lam+1) sech^2 x``, deepest first."""
    lam = int(depth_levels)
    if lam < 1:
        raise ValueError("depth_levels must be >= 1")
    out = []
    for j in range(lam):
        e = -(k0**2) - (lam - j) ** 2
        out.append((float(e), float(-e)))
    return out


def poschl_teller_profile(k0: float, depth_levels: int) -> SechSquaredEps:
    """eps = 1 + lam(lam+1) sech^2(x)/k0^2, mu = 1."""
    lam = int(depth_levels)
    return SechSquaredEps(1.0, lam * (lam + 1) / k0**2, 1.0)


def poschl_teller_ground_state(depth_levels: int, x):
    """Unit-norm ``sech(x)**lam``."""
    lam = int(depth_levels)
    norm2 = math.sqrt(math.pi) * math.gamma(lam) / math.gamma(lam + 0.5)
    return np.cosh(np.asarray(x, dtype=float)) ** -lam / math.sqrt(norm2)
