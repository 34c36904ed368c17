"""Reduction of the TE/TM mode equations to Schrodinger form.

The TE equation for E_y and the TM equation for H_y,

    -f (1/f E')' - eps mu k0^2 E + beta^2 E = 0,   f = mu (TE) or eps (TM),

become ``-psi'' + V psi = -beta^2 psi`` after ``E = sqrt(f) psi`` with

    V = -eps mu k0^2 + (f'/2f)^2 - (f'/2f)'.

The derivative term is expanded as ``(f'/2f)' = f''/2f - f'^2/2f^2`` and
evaluated from closed-form (or spline) derivatives, never by differencing the
sampled ratio.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .profiles import Grid, MaterialProfile, ProfileSample, sample_on_grid

__all__ = [
    "Polarization",
    "PotentialForm",
    "EffectivePotential",
    "effective_potential",
    "potential_terms",
    "field_from_wavefunction",
    "wavefunction_from_field",
    "beta_squared_from_eigenvalue",
    "guided_threshold",
    "mode_equation_residual",
    "schrodinger_residual",
]


class Polarization(str, enum.Enum):
    TE = "TE"
    TM = "TM"

    def __str__(self):
        return self.value


class PotentialForm(str, enum.Enum):
    FULL = "Full"
    WEAK_GRADIENT = "WeakGradient"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class EffectivePotential:
    polarization: Polarization
    grid: Grid
    v: np.ndarray
    k0: float
    form: PotentialForm = PotentialForm.FULL

    def __post_init__(self):
        if len(self.v) != self.grid.n_points:
            raise LengthMismatch(f"potential has {len(self.v)} samples, grid has {self.grid.n_points}")


def _weight(sample: ProfileSample, pol: Polarization):
    """(f, f', f'') for the field-carrying material function."""
    if Polarization(pol) is Polarization.TE:
        return sample.mu, sample.dmu, sample.d2mu
    return sample.eps, sample.deps, sample.d2eps


def potential_terms(sample: ProfileSample, k0: float, pol: Polarization):
    """Return ``(-eps mu k0^2, (f'/2f)^2, (f'/2f)')`` as separate arrays."""
    f, df, d2f = _weight(sample, pol)
    ratio = df / (2.0 * f)
    dratio = d2f / (2.0 * f) - df * df / (2.0 * f * f)
    return -sample.eps * sample.mu * k0 * k0, ratio * ratio, dratio


def effective_potential(
    profile: MaterialProfile,
    grid: Grid,
    k0: float,
    pol: Polarization,
    form: PotentialForm = PotentialForm.FULL,
) -> EffectivePotential:
    if not k0 > 0:
        raise ValueError(f"k0 must be positive, got {k0}")
    pol = Polarization(pol)
    form = PotentialForm(form)
    sample = sample_on_grid(profile, grid)
    base, square, slope = potential_terms(sample, k0, pol)
    if form is PotentialForm.WEAK_GRADIENT:
        v = base
    else:
        v = base + square - slope
    return EffectivePotential(pol, grid, np.asarray(v, dtype=float), float(k0), form)


def field_from_wavefunction(psi, profile: MaterialProfile, grid: Grid, pol: Polarization) -> np.ndarray:
    """E_y = sqrt(mu) psi for TE, H_y = sqrt(eps) psi for TM (amplitude constant 1)."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (grid.n_points,):
        raise LengthMismatch(f"psi has {psi.size} samples, grid has {grid.n_points}")
    f, _, _ = _weight(sample_on_grid(profile, grid), pol)
    return np.sqrt(f) * psi


def wavefunction_from_field(fld, profile: MaterialProfile, grid: Grid, pol: Polarization) -> np.ndarray:
    fld = np.asarray(fld, dtype=float)
    if fld.shape != (grid.n_points,):
        raise LengthMismatch(f"field has {fld.size} samples, grid has {grid.n_points}")
    f, _, _ = _weight(sample_on_grid(profile, grid), pol)
    return fld / np.sqrt(f)


def beta_squared_from_eigenvalue(e_schr: float, k0: float | None = None) -> float:
    """beta^2 = -E. ``k0`` is accepted for symmetry with the inverse mapping and unused."""
    return -e_schr


def guided_threshold(pot: EffectivePotential) -> float:
    """Smallest beta^2 for which a state lies below both effective-potential walls.

    A mode is reported as guided when beta^2 exceeds this value and is positive.
    """
    return float(max(-pot.v[0], -pot.v[-1]))


def mode_equation_residual(fld, profile, grid, k0, beta_sq, pol) -> np.ndarray:
    """Interior residual of ``-f (1/f F')' - eps mu k0^2 F + beta^2 F`` (conservative 3-point form).

    ``1/f`` is sampled at the half nodes from the profile itself.
    """
    fld = np.asarray(fld, dtype=float)
    x = grid.x
    h = grid.h
    pol = Polarization(pol)
    s = sample_on_grid(profile, grid)
    f, _, _ = _weight(s, pol)
    half = profile.evaluate(0.5 * (x[1:] + x[:-1]))
    f_half, _, _ = _weight(half, pol)
    flux = (fld[1:] - fld[:-1]) / (h * f_half)
    div = (flux[1:] - flux[:-1]) / h
    inner = slice(1, -1)
    return -f[inner] * div + (beta_sq - s.eps[inner] * s.mu[inner] * k0 * k0) * fld[inner]


def schrodinger_residual(psi, pot: EffectivePotential, beta_sq: float) -> np.ndarray:
    """Interior residual of ``-psi'' + V psi + beta^2 psi``."""
    psi = np.asarray(psi, dtype=float)
    h = pot.grid.h
    lap = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / (h * h)
    return -lap + (pot.v[1:-1] + beta_sq) * psi[1:-1]
