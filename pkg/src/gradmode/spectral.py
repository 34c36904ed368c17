"""Finite-difference bound states of ``-psi'' + V psi = E psi`` on a Dirichlet box.

The operator is discretized with the three-point Laplacian on the interior
nodes, giving a symmetric tridiagonal matrix. Its lowest eigenvalues come from
Sturm-sequence bisection and the vectors from inverse iteration; both inner
loops live in :mod:`gradmode.kernels`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConvergenceFailure
from .profiles import Grid, MaterialProfile
from .reduction import (
    EffectivePotential,
    Polarization,
    PotentialForm,
    beta_squared_from_eigenvalue,
    effective_potential,
    guided_threshold,
)

log = logging.getLogger(__name__)

__all__ = [
    "DiscreteHamiltonian",
    "Mode",
    "ModeSpectrum",
    "build_hamiltonian",
    "eigenvalues",
    "solve_bound_states",
    "compute_spectrum",
    "count_nodes",
    "normalize",
]

# a mode whose boundary value exceeds this fraction of its peak is box-limited
BOUNDARY_WARN = 1e-8
_MAX_RESTARTS = 50
_ITER_PER_RESTART = 6


@dataclass(frozen=True, eq=False)
class DiscreteHamiltonian:
    grid: Grid
    diag: np.ndarray
    offdiag: float

    @property
    def dim(self) -> int:
        return self.diag.size

    @property
    def off(self) -> np.ndarray:
        return np.full(self.dim - 1, self.offdiag)

    @property
    def norm(self) -> float:
        """Gershgorin bound on the spectral radius."""
        return float(np.max(np.abs(self.diag)) + 2 * abs(self.offdiag))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + self.offdiag * (np.eye(self.dim, k=1) + np.eye(self.dim, k=-1))


@dataclass(eq=False)
class Mode:
    e_schr: float
    beta_sq: float
    psi: np.ndarray
    mode_index: int
    e_schr_raw: float
    boundary_ratio: float
    guided: bool = True

    @property
    def nodes(self) -> int:
        return self.mode_index

    @property
    def box_limited(self) -> bool:
        return self.boundary_ratio > BOUNDARY_WARN


@dataclass(eq=False)
class ModeSpectrum:
    polarization: Polarization
    k0: float
    grid: Grid
    potential: EffectivePotential
    modes: list[Mode] = field(default_factory=list)
    rejected: list[Mode] = field(default_factory=list)
    extrapolated: bool = True

    @property
    def e_schr(self) -> np.ndarray:
        return np.array([m.e_schr for m in self.modes])

    @property
    def beta_sq(self) -> np.ndarray:
        return np.array([m.beta_sq for m in self.modes])

    def __len__(self):
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)


def build_hamiltonian(pot: EffectivePotential) -> DiscreteHamiltonian:
    h = pot.grid.h
    return DiscreteHamiltonian(pot.grid, 2.0 / (h * h) + np.asarray(pot.v[1:-1], dtype=float), -1.0 / (h * h))


def _bracket(H: DiscreteHamiltonian):
    r = 2 * abs(H.offdiag)
    lo = float(H.diag.min()) - r
    hi = float(H.diag.max()) + r
    pad = 4 * np.finfo(float).eps * max(H.norm, 1.0) + 1e-300
    return lo - pad, hi + pad


def _pivmin(H: DiscreteHamiltonian) -> float:
    return np.finfo(float).tiny * max(1.0, H.offdiag**2)


def eigenvalues(H: DiscreteHamiltonian, count: int) -> np.ndarray:
    """The ``count`` lowest eigenvalues, ascending."""
    count = min(int(count), H.dim)
    lo, hi = _bracket(H)
    e2 = np.full(H.dim - 1, H.offdiag**2)
    return kernels.bisect_eigenvalues(H.diag, e2, 0, count, lo, hi, _pivmin(H))


def normalize(psi: np.ndarray, h: float) -> np.ndarray:
    """Scale to unit discrete L2 norm with the largest-magnitude entry positive."""
    psi = psi / np.sqrt(np.sum(psi * psi) * h)
    if psi[np.argmax(np.abs(psi))] < 0:
        psi = -psi
    return psi


def count_nodes(psi, rel_floor: float = 1e-8) -> int:
    """Sign changes of ``psi``, ignoring entries below ``rel_floor`` of the peak."""
    psi = np.asarray(psi)
    peak = np.max(np.abs(psi))
    if peak == 0:
        return 0
    signs = np.sign(psi[np.abs(psi) > rel_floor * peak])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _inverse_iteration(H, lam, previous, rng):
    """Eigenvector for the eigenvalue ``lam``, orthogonal to ``previous``."""
    norm = H.norm
    off = H.off
    pivmin = _pivmin(H)
    eps = np.finfo(float).eps
    target = 1e-10 * norm
    best, best_res = None, np.inf
    for attempt in range(_MAX_RESTARTS):
        # perturbed shifts only after a failed attempt
        shift = lam + (attempt // 2 + 1) * (-1) ** attempt * 10 * eps * norm if attempt else lam
        v = rng.uniform(-1.0, 1.0, H.dim)
        for _ in range(_ITER_PER_RESTART):
            v = kernels.shifted_solve(H.diag, off, shift, v, pivmin)
            for _ in range(2):
                for u in previous:
                    v = v - np.dot(u, v) * u
            nrm = np.linalg.norm(v)
            if not np.isfinite(nrm) or nrm == 0.0:
                break
            v = v / nrm
            res = np.linalg.norm(H.matvec(v) - lam * v)
            if res < best_res:
                best, best_res = v, res
            if res <= target:
                return v
        if best_res <= 1e-8 * norm:
            return best
    raise ConvergenceFailure(
        f"inverse iteration for eigenvalue {lam!r} failed after {_MAX_RESTARTS} restarts "
        f"(best residual {best_res:.3e})"
    )


def solve_bound_states(H: DiscreteHamiltonian, max_modes: int) -> list[tuple[float, np.ndarray]]:
    """Lowest ``max_modes`` eigenpairs; vectors span the full grid (zero endpoints), unit L2 norm."""
    if max_modes < 1:
        raise ValueError("max_modes must be >= 1")
    lams = eigenvalues(H, max_modes)
    h = H.grid.h
    cluster_gap = 1e-9 * H.norm
    rng = np.random.default_rng(20130529)
    out = []
    cluster: list[np.ndarray] = []
    prev_lam = None
    for lam in lams:
        if prev_lam is None or lam - prev_lam >= cluster_gap:
            cluster = []
        v = _inverse_iteration(H, float(lam), cluster, rng)
        cluster.append(v)
        prev_lam = lam
        psi = np.zeros(H.dim + 2)
        psi[1:-1] = v
        out.append((float(lam), normalize(psi, h)))
    return out


def _boundary_ratio(psi: np.ndarray) -> float:
    peak = np.max(np.abs(psi))
    return float(max(abs(psi[1]), abs(psi[-2])) / peak) if peak else 0.0


def compute_spectrum(
    profile: MaterialProfile,
    grid: Grid,
    k0: float,
    pol: Polarization,
    max_modes: int,
    form: PotentialForm = PotentialForm.FULL,
    extrapolate: bool = True,
) -> ModeSpectrum:
    """Guided modes of one polarization, ordered by eigenvalue (beta^2 descending).

    With ``extrapolate`` the eigenvalues are Richardson-corrected using a second
    solve on the grid with half the spacing, which removes the O(h^2) error
    term; wavefunctions always come from ``grid``.
    """
    pol = Polarization(pol)
    pot = effective_potential(profile, grid, k0, pol, form)
    H = build_hamiltonian(pot)
    pairs = solve_bound_states(H, max_modes)
    raw = np.array([lam for lam, _ in pairs])
    corrected = raw
    if extrapolate:
        fine = build_hamiltonian(effective_potential(profile, grid.refined(), k0, pol, form))
        lam_fine = eigenvalues(fine, len(raw))
        corrected = (4.0 * lam_fine - raw) / 3.0
    threshold = guided_threshold(pot)
    spec = ModeSpectrum(pol, float(k0), grid, pot, extrapolated=extrapolate)
    for lam, lam_raw, (_, psi) in zip(corrected, raw, pairs):
        beta_sq = beta_squared_from_eigenvalue(float(lam), k0)
        guided = beta_sq > 0 and beta_sq > threshold
        mode = Mode(float(lam), float(beta_sq), psi, count_nodes(psi), float(lam_raw), _boundary_ratio(psi), guided)
        (spec.modes if guided else spec.rejected).append(mode)
        if guided and mode.box_limited:
            log.warning(
                "%s mode %d at k0=%g touches the box (|psi| boundary/peak = %.2e); enlarge the domain",
                pol, mode.mode_index, k0, mode.boundary_ratio,
            )
    return spec
