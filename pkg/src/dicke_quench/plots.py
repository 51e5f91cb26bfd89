"""Figure rendering for the CLI report path.

Each command that writes CSV data can also render a matplotlib figure next
to it.  Figures are diagnostic companions of the delimited output, not the
primary artifact; plotting is headless (Agg) and file-based.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def _finish(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_levels(path, lambdas, energies_scaled, curves: dict[str, np.ndarray]):
    """Level dynamics with the analytic critical borderlines overlaid."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(lambdas, energies_scaled, color="0.35", lw=0.5)
    for name, vals in curves.items():
        ax.plot(lambdas, vals, lw=1.8, label=name)
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel(r"$E/(\omega_0 j)$")
    lo = np.nanmin(energies_scaled)
    hi = np.nanmax(energies_scaled)
    pad = 0.05 * (hi - lo + 1e-12)
    ax.set_ylim(lo - pad, min(hi + pad, 3.0))
    ax.legend(fontsize=8, ncol=2)
    return _finish(fig, path)


def plot_quench(path, survival, gaussian, strength_e, strength_w, markers: dict[str, float]):
    """Survival probability (log-log) beside the discrete strength function."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.8))
    t = survival.times
    pos = t > 0
    ax1.plot(t[pos], survival.values[pos], "k-", lw=0.8, label=r"$P(t)$")
    ax1.plot(gaussian.times[pos], gaussian.values[pos], "c--", lw=1.0, label="Gaussian ref.")
    for name, tval in markers.items():
        if np.isfinite(tval) and tval > 0:
            ax1.axvline(tval, color="r", ls=":", lw=0.8)
            ax1.annotate(name, (tval, 0.5), rotation=90, fontsize=7, color="r")
    ax1.set_xscale("log")
    ax1.set_yscale("log")
    ax1.set_ylim(1e-6, 2)
    ax1.set_xlabel(r"$t$")
    ax1.set_ylabel(r"$P(t)$")
    ax1.legend(fontsize=8)
    ax2.vlines(strength_e, 0, strength_w, color="C0", lw=1.0)
    ax2.set_xlabel(r"$E/(\omega_0 j)$")
    ax2.set_ylabel(r"$|s_l|^2$")
    ax2.set_yscale("log")
    ax2.set_ylim(1e-8, 2)
    return _finish(fig, path)


def plot_sweep(path, lam_f, t_h, t_h_mod, participation):
    """Heisenberg times and participation ratio across final couplings."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(5.5, 5.5), sharex=True)
    ax1.plot(lam_f, t_h, "o-", ms=3, label=r"$t_H$")
    ax1.plot(lam_f, t_h_mod, "s-", ms=3, label=r"$t_H'$")
    ax1.set_ylabel("time")
    ax1.set_yscale("log")
    ax1.legend(fontsize=8)
    ax2.plot(lam_f, participation, "o-", ms=3, color="C2")
    ax2.set_ylabel(r"$\mathcal{N}$")
    ax2.set_xlabel(r"$\lambda_f$")
    return _finish(fig, path)


def plot_peres(path, energies_scaled, expectations, populations):
    """Peres lattice; populated states highlighted with size-coded dots."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.scatter(energies_scaled, expectations, s=2, c="0.6", lw=0)
    pop = populations > 1e-6
    if np.any(pop):
        sizes = 4 + 400 * populations[pop]
        ax.scatter(energies_scaled[pop], expectations[pop], s=sizes,
                   c="C0", alpha=0.7, lw=0)
    ax.set_xlabel(r"$E/(\omega_0 j)$")
    ax.set_ylabel(r"$\langle n\rangle_l$")
    return _finish(fig, path)


def plot_observable(path, series_times, series_values, saturation):
    """Post-quench observable evolution against its saturation value."""
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    pos = series_times > 0
    ax.plot(series_times[pos], series_values[pos], "k-", lw=0.8)
    ax.axhline(saturation, color="C3", ls="--", lw=1.0, label="diagonal average")
    ax.set_xscale("log")
    ax.set_xlabel(r"$t$")
    ax.set_ylabel(r"$\langle n\rangle(t)$")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def plot_dispersion(path, energies_scaled, dispersions, m_values):
    """Interaction dispersion of lowest subspace states against their energies."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    sc = ax.scatter(energies_scaled, dispersions, c=m_values, s=14, cmap="viridis", lw=0)
    fig.colorbar(sc, ax=ax, label=r"$M$")
    ax.set_xlabel(r"$E/(\omega_0 j)$")
    ax.set_ylabel(r"$\langle\Delta V^2\rangle$")
    return _finish(fig, path)
