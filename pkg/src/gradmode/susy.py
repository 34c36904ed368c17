"""Supersymmetric structure of TE/TM modes for constant-index profiles.

When eps(x) mu(x) = n0^2 the TE and TM effective potentials become the partner
pair ``W^2 + W'`` and ``W^2 - W'`` (offset by ``-n0^2 k0^2``) with superpotential
W = eps'/(2 eps) = -mu'/(2 mu). With the ladder operators
``B- = d/dx + W`` and ``B+ = d/dx - W`` one has

    H_TE = -B- B+,    H_TM = -B+ B-,

(``-B-`` is the adjoint of ``B+``), so B+ carries a TE state of eigenvalue E
to a TM state of the same E with norm sqrt(E), and B- does the reverse.
Zero modes solve the first-order equations B+ psi_E = 0 and B- psi_H = 0, i.e.
psi_E ~ sqrt(eps) and psi_H ~ 1/sqrt(eps).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatch, NotConstantIndex, ShiftMismatch
from .profiles import Grid, MaterialProfile, Tabulated, sample_on_grid
from .reduction import EffectivePotential, Polarization, PotentialForm
from .spectral import ModeSpectrum, compute_spectrum, normalize

__all__ = [
    "Ladder",
    "SusyClass",
    "Superpotential",
    "ZeroModes",
    "SusyPair",
    "SusyReport",
    "default_constancy_tol",
    "check_constant_index",
    "superpotential",
    "partner_potentials",
    "apply_ladder",
    "partner_hamiltonian",
    "zero_modes",
    "verify_susy",
    "analyze",
]

ANALYTIC_CONSTANCY_TOL = 1e-9
TABULATED_CONSTANCY_TOL = 1e-4
DECAY_RATIO = 1e-4
NORM_CONVERGENCE = 1e-4


class Ladder(str, enum.Enum):
    B_PLUS = "BPlus"
    B_MINUS = "BMinus"


class SusyClass(str, enum.Enum):
    EXACT_TM = "ExactTMZeroMode"
    EXACT_TE = "ExactTEZeroMode"
    BROKEN = "Broken"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class Superpotential:
    grid: Grid
    w: np.ndarray
    dw: np.ndarray
    n0: float
    constancy_residual: float = 0.0


def default_constancy_tol(profile: MaterialProfile) -> float:
    return TABULATED_CONSTANCY_TOL if isinstance(profile, Tabulated) else ANALYTIC_CONSTANCY_TOL


def _index_product(profile, grid):
    s = sample_on_grid(profile, grid)
    prod = s.eps * s.mu
    n0_sq = float(np.mean(prod))
    dev = np.abs(prod - n0_sq) / n0_sq
    return s, math.sqrt(n0_sq), dev


def check_constant_index(profile: MaterialProfile, grid: Grid, tol: float | None = None) -> float:
    """Return n0 = sqrt(mean(eps mu)); raise :class:`NotConstantIndex` if it varies by more than ``tol``."""
    tol = default_constancy_tol(profile) if tol is None else tol
    if not tol > 0:
        raise ValueError("tol must be positive")
    _, n0, dev = _index_product(profile, grid)
    i = int(np.argmax(dev))
    if dev[i] > tol:
        raise NotConstantIndex(float(dev[i]), float(grid.x[i]))
    return n0


def superpotential(profile: MaterialProfile, grid: Grid, tol: float | None = None) -> Superpotential:
    tol = default_constancy_tol(profile) if tol is None else tol
    n0 = check_constant_index(profile, grid, tol)
    s, _, dev = _index_product(profile, grid)
    w = s.deps / (2.0 * s.eps)
    w_mu = -s.dmu / (2.0 * s.mu)
    scale = max(1.0, float(np.max(np.abs(w))))
    mismatch = np.abs(w - w_mu) / scale
    if np.max(mismatch) > tol:
        i = int(np.argmax(mismatch))
        raise NotConstantIndex(float(mismatch[i]), float(grid.x[i]))
    dw = s.d2eps / (2.0 * s.eps) - s.deps**2 / (2.0 * s.eps**2)
    return Superpotential(grid, w, dw, n0, float(np.max(dev)))


def partner_potentials(w: Superpotential, k0: float) -> tuple[EffectivePotential, EffectivePotential]:
    offset = -(w.n0**2) * k0 * k0
    te = EffectivePotential(Polarization.TE, w.grid, offset + w.w**2 + w.dw, float(k0), PotentialForm.FULL)
    tm = EffectivePotential(Polarization.TM, w.grid, offset + w.w**2 - w.dw, float(k0), PotentialForm.FULL)
    return te, tm


def apply_ladder(direction: Ladder, psi, w: Superpotential) -> np.ndarray:
    """``B+ psi = psi' - W psi`` or ``B- psi = psi' + W psi`` (second-order differences)."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != w.w.shape:
        raise LengthMismatch(f"psi has {psi.size} samples, superpotential has {w.w.size}")
    d = np.gradient(psi, w.grid.h, edge_order=2)
    if Ladder(direction) is Ladder.B_PLUS:
        return d - w.w * psi
    return d + w.w * psi


def partner_hamiltonian(pol: Polarization, psi, w: Superpotential) -> np.ndarray:
    """``(-d^2/dx^2 + W^2 +/- W') psi`` on interior nodes, three-point Laplacian."""
    psi = np.asarray(psi, dtype=float)
    h = w.grid.h
    lap = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / (h * h)
    sign = 1.0 if Polarization(pol) is Polarization.TE else -1.0
    return -lap + (w.w[1:-1] ** 2 + sign * w.dw[1:-1]) * psi[1:-1]


@dataclass(eq=False)
class ZeroModes:
    classification: SusyClass
    psi_e: np.ndarray
    psi_h: np.ndarray
    te_normalizable: bool
    tm_normalizable: bool
    zero_mode: np.ndarray | None = None

    @property
    def sector(self) -> Polarization | None:
        if self.classification is SusyClass.EXACT_TE:
            return Polarization.TE
        if self.classification is SusyClass.EXACT_TM:
            return Polarization.TM
        return None


def _decays(psi) -> bool:
    peak = np.max(np.abs(psi))
    return bool(np.isfinite(peak) and peak > 0 and max(abs(psi[0]), abs(psi[-1])) < DECAY_RATIO * peak)


def _norm_converges(profile, grid, power) -> bool:
    """Does the integral of eps**power change by < NORM_CONVERGENCE when the box grows 25%?"""
    if isinstance(profile, Tabulated):
        return True
    pad = 0.125 * grid.length
    n_pad = int(round(pad / grid.h))
    big = Grid(grid.x_min - n_pad * grid.h, grid.x_max + n_pad * grid.h, grid.n_points + 2 * n_pad)
    try:
        with np.errstate(over="ignore"):
            inner = np.sum(sample_on_grid(profile, grid).eps ** power) * grid.h
            outer = np.sum(sample_on_grid(profile, big).eps ** power) * grid.h
    except (ArithmeticError, ValueError):
        return False
    if not (np.isfinite(inner) and np.isfinite(outer)) or inner <= 0:
        return False
    return abs(outer - inner) / inner < NORM_CONVERGENCE


def zero_modes(w: Superpotential, profile: MaterialProfile, grid: Grid) -> ZeroModes:
    """Build both zero-mode candidates and decide which (if any) is normalizable."""
    eps = sample_on_grid(profile, grid).eps
    with np.errstate(over="ignore"):
        psi_e = np.sqrt(eps) / w.n0
        psi_h = w.n0 / np.sqrt(eps)
    te_ok = _decays(psi_e) and _norm_converges(profile, grid, 1.0)
    tm_ok = _decays(psi_h) and _norm_converges(profile, grid, -1.0)
    if tm_ok and not te_ok:
        cls, zm = SusyClass.EXACT_TM, normalize(psi_h, grid.h)
    elif te_ok and not tm_ok:
        cls, zm = SusyClass.EXACT_TE, normalize(psi_e, grid.h)
    else:
        cls, zm = SusyClass.BROKEN, None
    return ZeroModes(cls, psi_e, psi_h, te_ok, tm_ok, zm)


@dataclass(frozen=True)
class SusyPair:
    te_index: int
    tm_index: int
    gap: float
    e_susy: float


@dataclass(eq=False)
class SusyReport:
    n0: float
    k0: float
    constancy_residual: float
    classification: SusyClass | None
    zero_mode: np.ndarray | None
    pairing: list[SusyPair] = field(default_factory=list)
    unpaired_te: list[int] = field(default_factory=list)
    unpaired_tm: list[int] = field(default_factory=list)
    beyond_range: list[tuple[str, int]] = field(default_factory=list)
    zero_states: list[tuple[str, int, float]] = field(default_factory=list)
    intertwining_residuals: list[float] = field(default_factory=list)
    reverse_intertwining_residuals: list[float] = field(default_factory=list)
    norm_ratios: list[float] = field(default_factory=list)
    factorization_residuals: tuple[float, float] = (0.0, 0.0)

    def partner_of(self, pol: Polarization, index: int) -> int | None:
        for p in self.pairing:
            if Polarization(pol) is Polarization.TE and p.te_index == index:
                return p.tm_index
            if Polarization(pol) is Polarization.TM and p.tm_index == index:
                return p.te_index
        return None

    def to_dict(self) -> dict:
        return {
            "n0": self.n0,
            "k0": self.k0,
            "constancy_residual": self.constancy_residual,
            "classification": None if self.classification is None else str(self.classification),
            "has_zero_mode": self.zero_mode is not None,
            "zero_states": [{"polarization": p, "mode_index": i, "e_susy": e} for p, i, e in self.zero_states],
            "pairing": [
                {"te_index": p.te_index, "tm_index": p.tm_index, "gap": p.gap, "e_susy": p.e_susy}
                for p in self.pairing
            ],
            "unpaired_te": list(self.unpaired_te),
            "unpaired_tm": list(self.unpaired_tm),
            "beyond_range": [{"polarization": p, "mode_index": i} for p, i in self.beyond_range],
            "intertwining_residuals": list(self.intertwining_residuals),
            "reverse_intertwining_residuals": list(self.reverse_intertwining_residuals),
            "norm_ratios": list(self.norm_ratios),
            "factorization_residuals": {"te": self.factorization_residuals[0], "tm": self.factorization_residuals[1]},
        }


def _l2(v, h):
    return float(np.sqrt(np.sum(v * v) * h))


def _sqrt_clamped(e):
    if abs(e) < 1e-12 or e < 0:
        return 0.0
    return math.sqrt(e)


def verify_susy(
    te: ModeSpectrum,
    tm: ModeSpectrum,
    w: Superpotential,
    pair_tol: float = 1e-6,
    zero: ZeroModes | None = None,
) -> SusyReport:
    """Factorization, degeneracy pairing and intertwining checks for two computed spectra."""
    if te.k0 != tm.k0:
        raise ShiftMismatch(f"TE spectrum at k0={te.k0}, TM at k0={tm.k0}")
    if te.grid != tm.grid or te.grid != w.grid:
        raise ShiftMismatch("spectra and superpotential must share one grid")
    h = w.grid.h
    shift = w.n0**2 * te.k0**2
    report = SusyReport(
        n0=w.n0,
        k0=te.k0,
        constancy_residual=w.constancy_residual,
        classification=None if zero is None else zero.classification,
        zero_mode=None if zero is None else zero.zero_mode,
    )

    def factorization(spec, pol, outer, inner):
        worst = 0.0
        for m in spec.modes:
            lhs = -apply_ladder(outer, apply_ladder(inner, m.psi, w), w)[1:-1]
            worst = max(worst, _l2(lhs - partner_hamiltonian(pol, m.psi, w), h))
        return worst

    report.factorization_residuals = (
        factorization(te, Polarization.TE, Ladder.B_MINUS, Ladder.B_PLUS),
        factorization(tm, Polarization.TM, Ladder.B_PLUS, Ladder.B_MINUS),
    )

    te_e = {m.mode_index: m.e_schr + shift for m in te.modes}
    tm_e = {m.mode_index: m.e_schr + shift for m in tm.modes}
    for pol, table in (("TE", te_e), ("TM", tm_e)):
        for i, e in table.items():
            if abs(e) < pair_tol:
                report.zero_states.append((pol, i, e))
    te_free = {i: e for i, e in te_e.items() if abs(e) >= pair_tol}
    tm_free = {i: e for i, e in tm_e.items() if abs(e) >= pair_tol}

    candidates = sorted(
        (abs(a - b), i, j) for i, a in te_free.items() for j, b in tm_free.items() if abs(a - b) <= pair_tol
    )
    used_te, used_tm = set(), set()
    for gap, i, j in candidates:
        if i in used_te or j in used_tm:
            continue
        used_te.add(i)
        used_tm.add(j)
        report.pairing.append(SusyPair(i, j, gap, te_free[i]))
    report.pairing.sort(key=lambda p: p.te_index)
    # states above the other sector's highest computed level have no partner to find
    te_top = max(tm_e.values(), default=-np.inf) + pair_tol
    tm_top = max(te_e.values(), default=-np.inf) + pair_tol
    report.unpaired_te = sorted(i for i in set(te_free) - used_te if te_free[i] <= te_top)
    report.unpaired_tm = sorted(i for i in set(tm_free) - used_tm if tm_free[i] <= tm_top)
    report.beyond_range = sorted(
        [("TE", i) for i in set(te_free) - used_te if te_free[i] > te_top]
        + [("TM", i) for i in set(tm_free) - used_tm if tm_free[i] > tm_top]
    )

    te_psi = {m.mode_index: m.psi for m in te.modes}
    tm_psi = {m.mode_index: m.psi for m in tm.modes}
    for p in report.pairing:
        psi_e, psi_h = te_psi[p.te_index], tm_psi[p.tm_index]
        root = _sqrt_clamped(p.e_susy)
        up = apply_ladder(Ladder.B_PLUS, psi_e, w)
        sign = 1.0 if np.dot(up, psi_h) >= 0 else -1.0
        report.intertwining_residuals.append(_l2(sign * up - root * psi_h, h))
        down = apply_ladder(Ladder.B_MINUS, psi_h, w)
        sign = 1.0 if np.dot(down, psi_e) >= 0 else -1.0
        report.reverse_intertwining_residuals.append(_l2(sign * down - root * psi_e, h))
        report.norm_ratios.append(_l2(up, h) / root if root else float("nan"))
    return report


def analyze(
    profile: MaterialProfile,
    grid: Grid,
    k0: float,
    max_modes: int,
    constancy_tol: float | None = None,
    pair_tol: float = 1e-6,
) -> tuple[SusyReport, ModeSpectrum, ModeSpectrum]:
    """Full pipeline: superpotential, zero modes, both spectra and their verification."""
    w = superpotential(profile, grid, constancy_tol)
    zero = zero_modes(w, profile, grid)
    te = compute_spectrum(profile, grid, k0, Polarization.TE, max_modes)
    tm = compute_spectrum(profile, grid, k0, Polarization.TM, max_modes)
    return verify_susy(te, tm, w, pair_tol, zero), te, tm
