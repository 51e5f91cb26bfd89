"""Spectral-statistics and post-processing diagnostics.

Level-spacing/population correlations, quadratic level-sampling fits,
power-law envelope extraction from survival-probability revivals, smoothed
level densities, the smoothed-density participation estimate, and Peres
lattices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quench import QuenchResult, TimeSeries
from .spectral import EigenSystem


@dataclass(frozen=True)
class SpacingRecord:
    """Consecutive level spacing paired with the mean population of the pair."""

    l: int
    spacing: float
    mean_pop: float


def spacing_population_table(
    result: QuenchResult, *, floor: float = 0.0
) -> list[SpacingRecord]:
    """Spacings E_fl - E_f(l-1) with mean weights (w_l + w_{l-1})/2.

    With `floor` > 0 the table is filtered to pairs whose mean population
    reaches the floor (the populated ensemble).
    """
    e = result.final_energies
    w = result.weights
    if e.size < 2:
        raise ValueError("need at least two levels for a spacing table")
    records = []
    for l in range(1, e.size):
        mean_pop = 0.5 * (w[l] + w[l - 1])
        if mean_pop >= floor:
            records.append(
                SpacingRecord(l=l, spacing=float(e[l] - e[l - 1]), mean_pop=float(mean_pop))
            )
    return records


def quadratic_sampling_fit(
    result: QuenchResult, floor: float = 0.005
) -> tuple[float, float, float, float]:
    """Least-squares fit E_fl ~ e0 + e1*l + e2*l^2 over populated levels.

    Levels with weight >= floor are re-indexed contiguously before the fit.
    Returns (e0, e1, e2, rms_residual); a spectrum following the quadratic
    sampling law gives |e2| << |e1| and a small residual, the regime in which
    revivals acquire their power-law envelope.
    """
    keep = np.flatnonzero(result.weights >= floor)
    if keep.size < 4:
        raise ValueError(f"need >= 4 populated levels, found {keep.size}")
    e = result.final_energies[keep]
    idx = np.arange(keep.size, dtype=float)
    vand = np.vander(idx, 3, increasing=True)
    gram = vand.T @ vand
    if np.linalg.cond(gram) > 1e14:
        raise ValueError("degenerate quadratic fit (singular normal equations)")
    coef, *_ = np.linalg.lstsq(vand, e, rcond=None)
    resid = e - vand @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return float(coef[0]), float(coef[1]), float(coef[2]), rms


@dataclass(frozen=True)
class EnvelopeFit:
    """Power-law fit of revival peak heights: P_max(t) ~ t^-alpha.

    `alpha` refers to the peaks of P(t) itself; `alpha_amplitude` is the
    equivalent exponent for the survival amplitude |A| = sqrt(P).  `defined`
    is False when fewer than five local maxima were found in the window.
    """

    alpha: float
    alpha_amplitude: float
    fit_quality: float
    n_peaks: int
    defined: bool


def envelope_exponent(series: TimeSeries, window: tuple[float, float]) -> EnvelopeFit:
    """Fit the decay exponent of strict local maxima of P(t) inside a window.

    The series should be sampled densely enough to resolve the shortest beat
    period among strongly populated level pairs (>= 40 points per period);
    `fit_quality` is the R^2 of the log-log fit.
    """
    t_a, t_b = window
    t = series.times
    v = series.values
    inside = (t >= t_a) & (t <= t_b)
    idx = np.flatnonzero(inside[1:-1]) + 1
    peaks = idx[(v[idx] > v[idx - 1]) & (v[idx] > v[idx + 1])]
    if peaks.size < 5:
        return EnvelopeFit(math.nan, math.nan, math.nan, int(peaks.size), False)
    x = np.log(t[peaks])
    y = np.log(v[peaks])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return EnvelopeFit(
        alpha=float(-slope),
        alpha_amplitude=float(-slope) / 2.0,
        fit_quality=r2,
        n_peaks=int(peaks.size),
        defined=True,
    )


def beat_resolved_grid(
    result: QuenchResult,
    window: tuple[float, float],
    *,
    points_per_period: int = 40,
    top: int = 10,
    max_points: int = 400_000,
) -> np.ndarray:
    """Linear grid resolving the fastest beat among the top populated levels.

    The shortest beat period is 2 pi / max |E_l - E_l'| over the `top` most
    populated levels; aliasing in peak detection is avoided by spending at
    least `points_per_period` samples on it.
    """
    t_a, t_b = window
    if not 0 <= t_a < t_b:
        raise ValueError("window must satisfy 0 <= t_a < t_b")
    order = np.argsort(result.weights)[::-1][:top]
    e = result.final_energies[order]
    de_max = float(np.max(e) - np.min(e))
    if de_max <= 0:
        return np.linspace(t_a, t_b, 1001)
    dt = 2.0 * math.pi / de_max / points_per_period
    n = min(max_points, max(1001, int(math.ceil((t_b - t_a) / dt)) + 1))
    return np.linspace(t_a, t_b, n)


@dataclass(frozen=True)
class SmoothedDensity:
    """Gaussian-kernel level density on a uniform grid, normalized to the count."""

    grid: np.ndarray
    values: np.ndarray
    kernel_width: float

    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.grid))

    def at(self, energy) -> np.ndarray:
        return np.interp(energy, self.grid, self.values)


def smoothed_density(
    energies, kernel_width: float, *, n_grid: int = 2048, pad_sigmas: float = 5.0
) -> SmoothedDensity:
    """Kernel estimate of the level density rho(E); integrates to the count."""
    if kernel_width <= 0:
        raise ValueError("kernel_width must be positive")
    e = np.sort(np.asarray(energies, dtype=float))
    lo = e[0] - pad_sigmas * kernel_width
    hi = e[-1] + pad_sigmas * kernel_width
    grid = np.linspace(lo, hi, n_grid)
    norm = 1.0 / (kernel_width * math.sqrt(2.0 * math.pi))
    values = np.zeros(n_grid)
    chunk = max(1, int(4_000_000 // n_grid))
    for a in range(0, e.size, chunk):
        z = (grid[None, :] - e[a : a + chunk, None]) / kernel_width
        values += norm * np.sum(np.exp(-0.5 * z * z), axis=0)
    return SmoothedDensity(grid=grid, values=values, kernel_width=kernel_width)


def default_kernel_width(result: QuenchResult, *, spacing_multiple: float = 5.0) -> float:
    """Default smoothing width: 5x the mean level spacing in the strength support."""
    keep = np.flatnonzero(result.weights >= 1e-6)
    if keep.size < 2:
        keep = np.arange(result.n_levels)
    e = result.final_energies[keep]
    mean_spacing = float(e[-1] - e[0]) / max(keep.size - 1, 1)
    return spacing_multiple * max(mean_spacing, 1e-12)


def approx_participation(result: QuenchResult, kernel_width: float) -> float:
    """Participation ratio estimated from smoothed densities.

    1/N ~ integral rho_f(E)^-1 Sbar(E)^2 dE, with Sbar the kernel-smoothed
    strength function and rho_f the smoothed density of the full final
    spectrum.  Requires the dense route (the Lanczos route does not resolve
    unpopulated levels, which biases rho_f).
    """
    if result.method != "dense":
        raise ValueError("approx_participation requires a dense-route result")
    e, w = result.strength_function()
    rho = smoothed_density(e, kernel_width)
    lo = float(e[w >= 1e-8].min() - 3 * kernel_width)
    hi = float(e[w >= 1e-8].max() + 3 * kernel_width)
    grid = np.linspace(lo, hi, 4096)
    norm = 1.0 / (kernel_width * math.sqrt(2.0 * math.pi))
    sbar = np.zeros(grid.size)
    chunk = max(1, int(4_000_000 // grid.size))
    for a in range(0, e.size, chunk):
        z = (grid[None, :] - e[a : a + chunk, None]) / kernel_width
        sbar += norm * (w[a : a + chunk] @ np.exp(-0.5 * z * z))
    rho_on_grid = rho.at(grid)
    support = sbar > 1e-12 * float(np.max(sbar))
    if np.any(rho_on_grid[support] <= 0):
        raise ValueError("smoothed level density vanishes inside the strength support")
    integrand = np.where(support, sbar**2 / np.maximum(rho_on_grid, 1e-300), 0.0)
    inv_part = float(np.trapezoid(integrand, grid))
    if inv_part <= 0:
        raise ValueError("degenerate smoothed participation estimate")
    return 1.0 / inv_part


@dataclass(frozen=True)
class PeresPoint:
    """One eigenstate in the E x <O> plane, with its quench population."""

    l: int
    energy: float
    expectation: float
    population: float


def peres_lattice(
    eigensystem: EigenSystem,
    observable,
    overlay: QuenchResult | None = None,
) -> list[PeresPoint]:
    """Per-eigenstate expectation values <O>_l versus energy.

    Orderly point patterns indicate regular eigenstates, disordered patterns
    chaotic ones.  With a quench `overlay`, each point carries its strength
    weight |s_l|^2 (zero otherwise).
    """
    obs = np.asarray(observable, dtype=float)
    v = eigensystem.vectors
    if obs.ndim == 1:
        expect = np.einsum("il,il->l", v, obs[:, None] * v)
    else:
        expect = np.einsum("il,il->l", v, obs @ v)
    pops = np.zeros(eigensystem.dim)
    if overlay is not None:
        if overlay.n_levels != eigensystem.dim:
            raise ValueError("overlay result does not match the eigensystem level count")
        pops = overlay.weights
    return [
        PeresPoint(l=l, energy=float(eigensystem.energies[l]), expectation=float(expect[l]),
                   population=float(pops[l]))
        for l in range(eigensystem.dim)
    ]
