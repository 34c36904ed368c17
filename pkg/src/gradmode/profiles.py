"""Material profiles eps(x), mu(x) and the uniform grid they are sampled on.

All lengths are in arbitrary but consistent units and c = 1, so the free-space
wavenumber ``k0`` plays the role of omega/c everywhere in the package.

Every profile exposes :meth:`MaterialProfile.evaluate`, which returns eps, mu
and their first and second derivatives. Analytic kinds use closed forms;
:class:`Tabulated` uses a natural cubic spline through the samples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import GradmodeError, NonPositiveMaterial, OutOfDomain

__all__ = [
    "Grid",
    "ProfileSample",
    "MaterialProfile",
    "Constant",
    "GaussianSusyPair",
    "SechSquaredEps",
    "Tabulated",
    "evaluate",
    "sample_on_grid",
    "load_tabulated",
]


@dataclass(frozen=True)
class Grid:
    """Uniform grid on ``[x_min, x_max]`` with ``n_points`` nodes (endpoints included)."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min ({self.x_min}) must be < x_max ({self.x_max})")
        if int(self.n_points) != self.n_points or self.n_points < 16:
            raise ValueError(f"n_points must be an integer >= 16, got {self.n_points}")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    def refined(self) -> "Grid":
        """Grid with half the spacing whose even nodes coincide with this one."""
        return Grid(self.x_min, self.x_max, 2 * self.n_points - 1)

    def scaled(self, s: float) -> "Grid":
        return Grid(self.x_min * s, self.x_max * s, self.n_points)


@dataclass(frozen=True)
class ProfileSample:
    """eps, mu and their derivatives at one point or on an array of points."""

    eps: np.ndarray | float
    mu: np.ndarray | float
    deps: np.ndarray | float
    dmu: np.ndarray | float
    d2eps: np.ndarray | float
    d2mu: np.ndarray | float

    def __len__(self):
        return np.size(self.eps)

    def __getitem__(self, i) -> "ProfileSample":
        return ProfileSample(
            *(float(np.asarray(getattr(self, f))[i]) for f in _FIELDS)
        )

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f) for f in _FIELDS)


_FIELDS = ("eps", "mu", "deps", "dmu", "d2eps", "d2mu")


class MaterialProfile:
    """Base class. Subclasses implement :meth:`_evaluate` on float arrays."""

    kind: str = ""

    def evaluate(self, x) -> ProfileSample:
        scalar = np.ndim(x) == 0
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        sample = self._evaluate(xa)
        bad = (sample.eps <= 0) | (sample.mu <= 0) | ~np.isfinite(sample.eps) | ~np.isfinite(sample.mu)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise NonPositiveMaterial(
                f"{self.kind}: eps={sample.eps[i]!r}, mu={sample.mu[i]!r} at x={xa[i]!r}",
                index=i,
                x=float(xa[i]),
            )
        if scalar:
            return sample[0]
        return sample

    def _evaluate(self, x: np.ndarray) -> ProfileSample:
        raise NotImplementedError

    def swapped(self) -> "MaterialProfile":
        """The dual profile with eps and mu exchanged."""
        return _Swapped(self)

    def scaled(self, s: float) -> "MaterialProfile":
        """Profile stretched along x by the factor ``s`` (x -> x/s)."""
        raise NotImplementedError(f"{self.kind} profiles cannot be stretched")

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(MaterialProfile):
    eps: float = 1.0
    mu: float = 1.0
    kind = "Constant"

    def _evaluate(self, x):
        one = np.ones_like(x)
        zero = np.zeros_like(x)
        return ProfileSample(self.eps * one, self.mu * one, zero, zero.copy(), zero.copy(), zero.copy())

    def scaled(self, s):
        return self

    def to_dict(self):
        return {"kind": self.kind, "eps": self.eps, "mu": self.mu}


@dataclass(frozen=True)
class GaussianSusyPair(MaterialProfile):
    """eps = n0**2 * exp(alpha x**2), mu = exp(-alpha x**2); eps*mu = n0**2 exactly."""

    n0: float = 1.0
    alpha: float = 1.0
    kind = "GaussianSusyPair"

    def _evaluate(self, x):
        a = self.alpha
        g = np.exp(a * x * x)
        eps = self.n0**2 * g
        mu = 1.0 / g
        return ProfileSample(
            eps,
            mu,
            2 * a * x * eps,
            -2 * a * x * mu,
            (2 * a + 4 * a * a * x * x) * eps,
            (-2 * a + 4 * a * a * x * x) * mu,
        )

    def scaled(self, s):
        return GaussianSusyPair(self.n0, self.alpha / (s * s))

    def to_dict(self):
        return {"kind": self.kind, "n0": self.n0, "alpha": self.alpha}


@dataclass(frozen=True)
class SechSquaredEps(MaterialProfile):
    """eps = eps_b + delta * sech(x/width)**2 with mu = 1.

    With ``delta = lam*(lam+1)/(k0**2 width**2)`` the TE effective potential is a
    Poschl-Teller well holding ``lam`` bound states.
    """

    eps_b: float = 1.0
    delta: float = 1.0
    width: float = 1.0
    kind = "SechSquaredEps"

    def _evaluate(self, x):
        u = x / self.width
        s2 = 1.0 / np.cosh(u) ** 2
        t = np.tanh(u)
        w = self.width
        one = np.ones_like(x)
        zero = np.zeros_like(x)
        return ProfileSample(
            self.eps_b + self.delta * s2,
            one,
            self.delta * (-2.0 * s2 * t) / w,
            zero,
            self.delta * (4.0 * s2 * t * t - 2.0 * s2 * s2) / (w * w),
            zero.copy(),
        )

    def scaled(self, s):
        return SechSquaredEps(self.eps_b, self.delta, self.width * s)

    def to_dict(self):
        return {"kind": self.kind, "eps_b": self.eps_b, "delta": self.delta, "width": self.width}


@dataclass(frozen=True, eq=False)
class Tabulated(MaterialProfile):
    """Sampled eps(x), mu(x) interpolated by natural cubic splines.

    Evaluation outside ``[x[0], x[-1]]`` raises :class:`OutOfDomain`.
    """

    x: np.ndarray
    eps: np.ndarray
    mu: np.ndarray
    source: str | None = None
    _eps_spline: CubicSpline = field(init=False, repr=False)
    _mu_spline: CubicSpline = field(init=False, repr=False)
    kind = "Tabulated"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        eps = np.asarray(self.eps, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        if x.ndim != 1 or eps.shape != x.shape or mu.shape != x.shape:
            raise GradmodeError("tabulated x, eps, mu must be 1-D arrays of equal length")
        if x.size < 4:
            raise GradmodeError(f"tabulated profile needs >= 4 points, got {x.size}")
        if np.any(np.diff(x) <= 0):
            raise GradmodeError("tabulated positions must be strictly increasing")
        if np.any(eps <= 0) or np.any(mu <= 0):
            i = int(np.argmax((eps <= 0) | (mu <= 0)))
            raise NonPositiveMaterial(f"tabulated sample {i} is not positive", index=i, x=float(x[i]))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "_eps_spline", CubicSpline(x, eps, bc_type="natural"))
        object.__setattr__(self, "_mu_spline", CubicSpline(x, mu, bc_type="natural"))

    @classmethod
    def from_profile(cls, profile: MaterialProfile, x) -> "Tabulated":
        s = profile.evaluate(np.asarray(x, dtype=float))
        return cls(np.asarray(x, dtype=float), s.eps, s.mu)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.x[0]), float(self.x[-1])

    def _evaluate(self, x):
        lo, hi = self.domain
        # tolerate round-off from linspace endpoints
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        outside = (x < lo - slack) | (x > hi + slack)
        if np.any(outside):
            i = int(np.argmax(outside))
            raise OutOfDomain(f"x = {x[i]!r} outside tabulated range [{lo!r}, {hi!r}]")
        x = np.clip(x, lo, hi)
        e, m = self._eps_spline, self._mu_spline
        return ProfileSample(e(x), m(x), e(x, 1), m(x, 1), e(x, 2), m(x, 2))

    def swapped(self):
        return Tabulated(self.x, self.mu, self.eps)

    def to_dict(self):
        d = {"kind": self.kind, "n_samples": int(self.x.size)}
        if self.source is not None:
            d["path"] = self.source
        return d


@dataclass(frozen=True, eq=False)
class _Swapped(MaterialProfile):
    inner: MaterialProfile
    kind = "Swapped"

    def _evaluate(self, x):
        s = self.inner._evaluate(x)
        return ProfileSample(s.mu, s.eps, s.dmu, s.deps, s.d2mu, s.d2eps)

    def swapped(self):
        return self.inner

    def to_dict(self):
        return {"kind": self.kind, "inner": self.inner.to_dict()}


def evaluate(profile: MaterialProfile, x) -> ProfileSample:
    return profile.evaluate(x)


def sample_on_grid(profile: MaterialProfile, grid: Grid) -> ProfileSample:
    """Evaluate ``profile`` at every grid node; element ``i`` equals ``evaluate(profile, x_i)``."""
    return profile.evaluate(grid.x)


def load_tabulated(path) -> Tabulated:
    """Read a three-column ``x eps mu`` text file (``#`` starts a comment line)."""
    path = Path(path)
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 3:
        raise GradmodeError(f"{path}: expected 3 columns (x eps mu), found {data.shape[1]}")
    return Tabulated(data[:, 0], data[:, 1], data[:, 2], source=str(path))
