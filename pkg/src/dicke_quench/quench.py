"""Sudden quench protocols and their time- and spectral-domain observables.

A quench holds the state fixed while the coupling jumps from lambda_i to
lambda_f.  Everything downstream derives from the decomposition of the
initial state over the final eigenbasis: the amplitudes s_l = <psi_i|phi_fl>
with final energies E_fl define the strength function (local density of
states), the survival probability P(t), the characteristic times t_s and
t_H, and the participation ratio.

Two execution routes provide the decomposition:

* "dense"   -- full symmetric eigensolve; amplitudes over all final
               eigenstates.  The default at desk scale.
* "lanczos" -- Krylov decomposition seeded by psi_i (see `krylov`); recovers
               every populated eigenpair to machine precision and is the only
               tractable route for superradiant initial states whose photon
               content pushes the parity basis beyond dense reach.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Union

import numpy as np

from .krylov import LanczosSpectrum, lanczos_shift_invert, lowest_eigenpairs
from .model import (
    Basis,
    BasisSpec,
    FullParity,
    HamiltonianSplit,
    ModelParams,
    MSubspace,
    assemble,
    audit_truncation,
)
from .spectral import diagonalize_split, ground_state_energy_analytic

DENSE_LIMIT = 4600  # largest basis the dense route accepts by default


class DegenerateInitialStateError(RuntimeError):
    """Eigenstate-index selection fell inside a degenerate cluster."""


class QuenchConsistencyError(RuntimeError):
    """A sum rule or moment identity failed beyond tolerance."""


@dataclass(frozen=True)
class EigenstateIndex:
    """Select the k-th eigenstate of H(lambda_i), counted from the bottom."""

    k: int


@dataclass(frozen=True)
class ExplicitBasisState:
    """Select a bare basis state |n>|m>; only meaningful at lambda_i = 0."""

    n: int
    two_m: int


InitialSelector = Union[EigenstateIndex, ExplicitBasisState]


@dataclass(frozen=True)
class QuenchSpec:
    lambda_i: float
    lambda_f: float
    initial: InitialSelector
    basis: BasisSpec

    @property
    def delta_lambda(self) -> float:
        return self.lambda_f - self.lambda_i


@dataclass(frozen=True)
class QuenchResult:
    """Amplitudes of the initial state over the final eigenstates.

    `amplitudes` are real and signed; their squares are the strength-function
    weights.  On the dense route the levels exhaust the sector; on the
    Lanczos route they are the Ritz pairs seen from psi_i (which carry the
    entire weight: the squares still sum to one exactly).
    """

    params: ModelParams
    spec: QuenchSpec
    amplitudes: np.ndarray
    final_energies: np.ndarray
    initial_energy: float
    method: str = "dense"

    @property
    def weights(self) -> np.ndarray:
        return self.amplitudes**2

    @property
    def n_levels(self) -> int:
        return self.final_energies.size

    def strength_function(self) -> tuple[np.ndarray, np.ndarray]:
        """Discrete S(E): (final energies ascending, weights |s_l|^2)."""
        return self.final_energies, self.weights


@dataclass(frozen=True)
class FinalStates:
    """Final eigenvectors available for observable evaluation.

    `vector_levels[j]` is the level index whose eigenvector is column j of
    `vectors`.  The dense route provides all levels; the Lanczos route the
    populated subset.
    """

    basis: Basis
    energies: np.ndarray
    vectors: np.ndarray
    vector_levels: np.ndarray


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have equal lengths")
        if self.times.size and (
            np.any(np.diff(self.times) <= 0) or self.times[0] < 0
        ):
            raise ValueError("times must be non-negative and strictly increasing")


# ---------------------------------------------------------------------------
# Quench execution
# ---------------------------------------------------------------------------

def _degeneracy_gap_tol(energies: np.ndarray) -> float:
    spread = float(energies[-1] - energies[0]) if energies.size > 1 else 1.0
    return max(1e-12, 1e-9 * max(spread, 1.0))


def _check_isolated(energies: np.ndarray, k: int, lambda_i: float) -> None:
    tol = _degeneracy_gap_tol(energies)
    neighbors = []
    if k > 0:
        neighbors.append(energies[k] - energies[k - 1])
    if k + 1 < energies.size:
        neighbors.append(energies[k + 1] - energies[k])
    if neighbors and min(neighbors) <= tol:
        raise DegenerateInitialStateError(
            f"eigenstate {k} at lambda_i={lambda_i} sits in a degenerate cluster "
            f"(gap <= {tol:.2e}); shift lambda_i slightly or use a "
            "cluster-invariant analysis"
        )


def _initial_state_dense(
    split: HamiltonianSplit, spec: QuenchSpec
) -> tuple[np.ndarray, float]:
    if isinstance(spec.initial, ExplicitBasisState):
        if spec.lambda_i != 0.0:
            raise ValueError("explicit basis-state initial selection requires lambda_i = 0")
        i = split.basis.index_of(spec.initial.n, spec.initial.two_m)
        psi = np.zeros(split.dim)
        psi[i] = 1.0
        return psi, float(split.h0_diag[i])
    eig_i = diagonalize_split(split, spec.lambda_i)
    k = spec.initial.k
    if not 0 <= k < eig_i.dim:
        raise ValueError(f"eigenstate index {k} outside 0..{eig_i.dim - 1}")
    _check_isolated(eig_i.energies, k, spec.lambda_i)
    return eig_i.vectors[:, k].copy(), float(eig_i.energies[k])


def _initial_state_sparse(
    split: HamiltonianSplit, spec: QuenchSpec
) -> tuple[np.ndarray, float]:
    if isinstance(spec.initial, ExplicitBasisState):
        return _initial_state_dense(split, spec)
    if spec.initial.k != 0:
        raise ValueError(
            "beyond-dense bases support only the ground state as an "
            "eigenstate-index initial selection"
        )
    params = split.basis.params
    scale = params.energy_scale
    sigma = ground_state_energy_analytic(params, abs(spec.lambda_i)) * scale
    sigma -= max(1.0, 0.05 * abs(sigma)) + 1.0  # strictly below the spectrum
    h_i = split.hamiltonian_sparse(spec.lambda_i)
    w, v = lowest_eigenpairs(h_i, k=2, sigma=sigma)
    if w[1] - w[0] <= _degeneracy_gap_tol(np.array([w[0], w[0] + 4 * scale])):
        raise DegenerateInitialStateError(
            f"ground state at lambda_i={spec.lambda_i} is quasi-degenerate in this sector"
        )
    psi = v[:, 0]
    return psi / np.linalg.norm(psi), float(w[0])


def _consistency_checks(
    split: HamiltonianSplit,
    spec: QuenchSpec,
    psi: np.ndarray,
    amplitudes: np.ndarray,
    energies: np.ndarray,
    rtol: float = 1e-9,
) -> None:
    total = float(np.sum(amplitudes**2))
    if abs(total - 1.0) > 1e-10:
        raise QuenchConsistencyError(f"sum rule violated: sum s^2 = {total!r}")
    h_f = split.hamiltonian_sparse(spec.lambda_f)
    mean_direct = float(psi @ (h_f @ psi))
    mean_moments = float(np.sum(amplitudes**2 * energies))
    norm = max(np.max(np.abs(energies)), 1.0)
    if abs(mean_direct - mean_moments) > rtol * norm:
        raise QuenchConsistencyError(
            f"moment mismatch: sum s^2 E = {mean_moments!r}, "
            f"<psi|Hf|psi> = {mean_direct!r}"
        )


def _audit_quench(basis: Basis, psi: np.ndarray, strength_edge: float) -> None:
    """Truncation audit on the initial state and the populated final states."""
    if isinstance(basis.spec, MSubspace):
        return
    audit_truncation(basis, psi**2, what="initial state")
    if strength_edge >= 1e-8:
        from .model import TruncationError

        raise TruncationError(
            f"strength-function weight {strength_edge:.3e} >= 1e-08 sits on basis "
            f"states with n > n_max - 3 (n_max = {basis.params.n_max}); increase n_max"
        )


def _edge_rows(basis: Basis) -> np.ndarray:
    return np.flatnonzero(basis.n_values > basis.params.n_max - 3)


def _strength_edge_dense(basis: Basis, vectors: np.ndarray, weights: np.ndarray) -> float:
    edge = _edge_rows(basis)
    return float(np.sum((vectors[edge, :] ** 2) @ weights))


def _strength_edge_lanczos(basis: Basis, lan: LanczosSpectrum, weights: np.ndarray) -> float:
    occ = lan.projected_occupancy(_edge_rows(basis))
    return float(weights @ occ)


def run_quench(
    params: ModelParams,
    spec: QuenchSpec,
    *,
    method: str = "auto",
    return_final: bool = False,
    audit: bool = True,
    dense_limit: int = DENSE_LIMIT,
    lanczos_max_steps: int = 3500,
    vector_floor: float = 1e-8,
):
    """Execute a sudden quench and decompose psi_i over the final eigenbasis.

    Returns a QuenchResult, or (QuenchResult, FinalStates) when
    `return_final` is set.  The dense route returns amplitudes over every
    final eigenstate; the Lanczos route returns the Ritz decomposition seeded
    by psi_i, which carries the full weight (the sum rule holds exactly) and
    reproduces all populated eigenpairs.  With `audit`, parity bases are
    checked for photon-truncation leakage at the 1e-8 level.
    """
    if method not in ("auto", "dense", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    split = assemble(params, spec.basis)
    if method == "auto":
        method = "dense" if split.dim <= dense_limit else "lanczos"

    if method == "dense":
        psi, e_i = _initial_state_dense(split, spec)
        eig_f = diagonalize_split(split, spec.lambda_f)
        amplitudes = eig_f.vectors.T @ psi
        energies = eig_f.energies
        _consistency_checks(split, spec, psi, amplitudes, energies)
        if audit:
            edge = _strength_edge_dense(split.basis, eig_f.vectors, amplitudes**2)
            _audit_quench(split.basis, psi, edge)
        result = QuenchResult(
            params=params,
            spec=spec,
            amplitudes=amplitudes,
            final_energies=energies,
            initial_energy=e_i,
            method="dense",
        )
        if return_final:
            final = FinalStates(
                basis=split.basis,
                energies=energies,
                vectors=eig_f.vectors,
                vector_levels=np.arange(energies.size),
            )
            return result, final
        return result

    psi, e_i = _initial_state_sparse(split, spec)
    h_f = split.hamiltonian_sparse(spec.lambda_f)
    lan = lanczos_shift_invert(
        h_f, psi, float(psi @ (h_f @ psi)), max_steps=lanczos_max_steps
    )
    amplitudes = lan.weights
    energies = lan.energies
    # stray weight on unresolved tail pairs loosens the exact moment identity
    _consistency_checks(split, spec, psi, amplitudes, energies, rtol=1e-5)
    kept = np.flatnonzero(amplitudes**2 >= vector_floor)
    vectors = lan.ritz_vectors(kept)
    if audit:
        _audit_quench(
            split.basis, psi, _strength_edge_lanczos(split.basis, lan, amplitudes**2)
        )
    result = QuenchResult(
        params=params,
        spec=spec,
        amplitudes=amplitudes,
        final_energies=energies,
        initial_energy=e_i,
        method="lanczos",
    )
    if return_final:
        final = FinalStates(
            basis=split.basis,
            energies=energies,
            vectors=vectors,
            vector_levels=kept,
        )
        return result, final
    return result


# ---------------------------------------------------------------------------
# Survival probability, three computation routes
# ---------------------------------------------------------------------------

def survival_probability(result: QuenchResult, times) -> TimeSeries:
    """P(t) = |sum_l s_l^2 exp(-i E_fl t)|^2 by direct summation."""
    t = np.asarray(times, dtype=float)
    e = result.final_energies
    w = result.weights
    p = np.empty(t.size)
    chunk = max(1, int(4_000_000 // max(e.size, 1)))
    for a in range(0, t.size, chunk):
        amp = np.exp(-1j * np.outer(t[a : a + chunk], e)) @ w
        p[a : a + chunk] = amp.real**2 + amp.imag**2
    return TimeSeries(times=t, values=p)


def survival_cosine_form(result: QuenchResult, times) -> TimeSeries:
    """P(t) via the pairwise cosine expansion 1/N + 2 sum w_l w_l' cos(dE t).

    Algebraically identical to the direct route but follows a genuinely
    different arithmetic path; O(levels^2) per time sample, so meant for
    cross-validation on modest grids.
    """
    t = np.asarray(times, dtype=float)
    e = result.final_energies
    w = result.weights
    base = float(np.sum(w**2))
    iu, ju = np.triu_indices(e.size, k=1)
    de = e[ju] - e[iu]
    ww = w[ju] * w[iu]
    p = np.full(t.size, base)
    if de.size:
        tchunk = max(1, int(8_000_000 // de.size))
        for a in range(0, t.size, tchunk):
            p[a : a + tchunk] += 2.0 * (np.cos(np.outer(t[a : a + tchunk], de)) @ ww)
    return TimeSeries(times=t, values=p)


def survival_via_fourier(result: QuenchResult, times) -> TimeSeries:
    """P(t) = |integral S(E) exp(-iEt) dE|^2 over the discrete strength function."""
    t = np.asarray(times, dtype=float)
    e, w = result.strength_function()
    re = np.empty(t.size)
    im = np.empty(t.size)
    chunk = max(1, int(4_000_000 // max(e.size, 1)))
    for a in range(0, t.size, chunk):
        phase = np.outer(t[a : a + chunk], e)
        re[a : a + chunk] = np.cos(phase) @ w
        im[a : a + chunk] = np.sin(phase) @ w
    return TimeSeries(times=t, values=re**2 + im**2)


def survival_from_autocorrelation(result: QuenchResult, times) -> TimeSeries:
    """P(t) = sum_{l,l'} w_l w_l' exp(+i (E_l' - E_l) t), the autocorrelation route."""
    t = np.asarray(times, dtype=float)
    e, w = result.strength_function()
    p = np.zeros(t.size)
    for i in range(e.size):  # exact pair sum; coarse grids only
        p += w[i] * (np.cos(np.outer(t, e - e[i])) @ w)
    return TimeSeries(times=t, values=p)


def gaussian_reference(t_s: float, times) -> TimeSeries:
    """Survival exp(-t^2/t_s^2) of a Gaussian strength function of width 1/t_s."""
    t = np.asarray(times, dtype=float)
    return TimeSeries(times=t, values=np.exp(-((t / t_s) ** 2)))


@dataclass(frozen=True)
class EnergyHistogram:
    centers: np.ndarray
    mass: np.ndarray
    bin_width: float


def autocorrelation(result: QuenchResult, bin_width: float) -> EnergyHistogram:
    """Binned C(E) = sum_{l,l'} w_l w_l' delta(E_l' - E_l - E); total mass one."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    e, w = result.strength_function()
    span = float(e[-1] - e[0]) if e.size > 1 else 0.0
    k_max = int(math.ceil(span / bin_width)) + 1
    edges = (np.arange(-k_max, k_max + 2) - 0.5) * bin_width
    mass = np.zeros(edges.size - 1)
    chunk = max(1, int(4_000_000 // max(e.size, 1)))
    for a in range(0, e.size, chunk):
        diffs = e[None, :] - e[a : a + chunk, None]
        pw = w[a : a + chunk, None] * w[None, :]
        hist, _ = np.histogram(diffs.ravel(), bins=edges, weights=pw.ravel())
        mass += hist
    centers = 0.5 * (edges[:-1] + edges[1:])
    return EnergyHistogram(centers=centers, mass=mass, bin_width=bin_width)


# ---------------------------------------------------------------------------
# Scalar diagnostics
# ---------------------------------------------------------------------------

def weighted_mean_spacing(energies: np.ndarray, weights_sq: np.ndarray) -> float:
    """Population-weighted mean level spacing, the denominator of t_H."""
    if energies.size < 2:
        return math.nan
    mid = 0.5 * (weights_sq[1:] + weights_sq[:-1])
    return float(np.sum(mid * np.diff(energies)))


def heisenberg_time(energies: np.ndarray, weights_sq: np.ndarray) -> float:
    """2 pi over the population-weighted mean spacing of consecutive levels."""
    d = weighted_mean_spacing(energies, weights_sq)
    if math.isnan(d):
        return math.nan
    return 2.0 * math.pi / d if d > 0 else math.inf


def _reduced_threshold(weights_sq: np.ndarray, threshold: float) -> np.ndarray:
    return np.flatnonzero(weights_sq >= threshold)


def _reduced_cumulative(weights_sq: np.ndarray, removed_mass: float) -> np.ndarray:
    """Drop lowest-weight levels while the removed mass stays <= removed_mass."""
    order = np.argsort(weights_sq, kind="stable")
    cum = np.cumsum(weights_sq[order])
    n_drop = int(np.searchsorted(cum, removed_mass, side="right"))
    keep = np.ones(weights_sq.size, dtype=bool)
    keep[order[:n_drop]] = False
    return np.flatnonzero(keep)


@dataclass(frozen=True)
class QuenchScalars:
    """Moments, time scales and saturation statistics of one quench.

    t_H_mod keeps levels with weight >= the 0.5% threshold; t_H_mod_alt is
    the alternative reading that removes lowest-weight levels until 0.5% of
    the total mass is gone.  Either is NaN when fewer than two levels remain
    (the initial state is then effectively stationary).
    """

    mean_Ef: float
    var_Ef: float
    t_s: float
    t_H: float
    t_H_mod: float
    t_H_mod_alt: float
    participation: float
    p_infinity: float
    p_variance: float
    n_levels: int
    n_retained: int
    n_retained_alt: int


def scalars(result: QuenchResult, *, mod_threshold: float = 0.005) -> QuenchScalars:
    """Moments (centroid/width), t_s, t_H, modified t_H and saturation statistics."""
    e = result.final_energies
    w = result.weights
    mean = float(np.sum(w * e))
    var = float(np.sum(w * (e - mean) ** 2))
    var = max(var, 0.0)
    t_s = 1.0 / math.sqrt(var) if var > 0 else math.inf
    inv_part = float(np.sum(w**2))
    participation = 1.0 / inv_part
    p_var = inv_part**2 - float(np.sum(w**4))

    keep = _reduced_threshold(w, mod_threshold)
    keep_alt = _reduced_cumulative(w, mod_threshold)
    return QuenchScalars(
        mean_Ef=mean,
        var_Ef=var,
        t_s=t_s,
        t_H=heisenberg_time(e, w),
        t_H_mod=heisenberg_time(e[keep], w[keep]) if keep.size >= 2 else math.nan,
        t_H_mod_alt=(
            heisenberg_time(e[keep_alt], w[keep_alt]) if keep_alt.size >= 2 else math.nan
        ),
        participation=participation,
        p_infinity=inv_part,
        p_variance=p_var,
        n_levels=e.size,
        n_retained=int(keep.size),
        n_retained_alt=int(keep_alt.size),
    )


# ---------------------------------------------------------------------------
# Observable evolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObservableEvolution:
    """<O>(t) over the populated final levels plus its saturation diagnostics.

    `saturation` is the diagonal (infinite-time average) term; `error_bound`
    bounds the contribution dropped by the population floor.
    """

    times: np.ndarray
    values: np.ndarray
    saturation: float
    retained_weight: float
    dropped_weight: float
    error_bound: float


def observable_evolution(
    result: QuenchResult,
    final_states: FinalStates,
    observable,
    times,
    population_floor: float = 1e-6,
) -> ObservableEvolution:
    """Post-quench evolution of an observable, restricted to populated levels.

    <O>(t) = sum_l w_l O_ll + 2 sum_{l>l'} s_l s_l' cos((E_l - E_l') t) O_ll'
    over the levels with w_l >= population_floor.  `observable` is either the
    1-D basis diagonal of a basis-diagonal operator or a dense matrix in the
    sector basis.
    """
    if population_floor >= 1.0:
        raise ValueError("population_floor must be < 1")
    t = np.asarray(times, dtype=float)
    w = result.weights
    keep = np.flatnonzero(w >= population_floor)
    available = {int(i) for i in final_states.vector_levels}
    missing = [int(i) for i in keep if int(i) not in available]
    if missing:
        raise ValueError(
            f"final-state vectors missing for {len(missing)} populated levels; "
            "lower the run's vector floor or raise population_floor"
        )
    pos = {int(level): j for j, level in enumerate(final_states.vector_levels)}
    cols = np.array([pos[int(i)] for i in keep], dtype=np.intp)
    vecs = final_states.vectors[:, cols]

    obs = np.asarray(observable, dtype=float)
    if obs.ndim == 1:
        o_small = vecs.T @ (obs[:, None] * vecs)
        obs_norm = float(np.max(np.abs(obs)))
    elif obs.ndim == 2:
        o_small = vecs.T @ obs @ vecs
        obs_norm = float(np.max(np.sum(np.abs(obs), axis=1)))
    else:
        raise ValueError("observable must be a basis diagonal or a matrix")

    s = result.amplitudes[keep]
    e = result.final_energies[keep]
    saturation = float(np.sum(s**2 * np.diag(o_small)))
    retained = float(np.sum(s**2))
    dropped = max(0.0, 1.0 - retained)

    values = np.empty(t.size)
    chunk = max(1, int(2_000_000 // max(e.size, 1)))
    for a in range(0, t.size, chunk):
        c = np.exp(-1j * np.outer(t[a : a + chunk], e)) * s
        values[a : a + chunk] = np.einsum("ti,ij,tj->t", c.conj(), o_small, c).real
    return ObservableEvolution(
        times=t,
        values=values,
        saturation=saturation,
        retained_weight=retained,
        dropped_weight=dropped,
        error_bound=dropped * obs_norm,
    )


# ---------------------------------------------------------------------------
# Grids, averages, sweeps
# ---------------------------------------------------------------------------

def default_time_grid(t_s: float, t_h: float, n: int = 2000) -> np.ndarray:
    """Logarithmic grid from 0.01*t_s to 1000*t_H (2000 points) plus t = 0."""
    lo = 0.01 * t_s
    hi = 1000.0 * (t_h if math.isfinite(t_h) else t_s)
    hi = max(hi, 10.0 * lo)
    grid = np.geomspace(lo, hi, n)
    return np.concatenate(([0.0], grid))


def linear_time_grid(t_lo: float, t_hi: float, n: int) -> np.ndarray:
    return np.linspace(t_lo, t_hi, n)


def long_time_average(
    result: QuenchResult, t_lo: float, t_hi: float, n: int = 10_001
) -> float:
    """Mean of P(t) over a linear window, for saturation checks."""
    series = survival_probability(result, linear_time_grid(t_lo, t_hi, n))
    return float(np.mean(series.values))


def sweep_scalars(
    params: ModelParams,
    basis_spec: BasisSpec,
    lambda_i: float,
    initial: InitialSelector,
    lambda_f_grid,
    *,
    method: str = "auto",
    threads: int = 1,
    mod_threshold: float = 0.005,
    audit: bool = True,
    dense_limit: int = DENSE_LIMIT,
    lanczos_max_steps: int = 3500,
) -> list[tuple[float, QuenchScalars]]:
    """Quench scalars over a grid of final couplings, sharing one initial state.

    Grid points may be evaluated concurrently; rows are ordered by lambda_f
    regardless of scheduling.
    """
    grid = [float(x) for x in lambda_f_grid]
    if sorted(grid) != grid:
        raise ValueError("lambda_f_grid must be sorted ascending")
    split = assemble(params, basis_spec)
    if method == "auto":
        method = "dense" if split.dim <= dense_limit else "lanczos"

    probe = QuenchSpec(lambda_i=lambda_i, lambda_f=grid[0], initial=initial, basis=basis_spec)
    if method == "dense":
        psi, e_i = _initial_state_dense(split, probe)
    else:
        psi, e_i = _initial_state_sparse(split, probe)
    if audit and isinstance(basis_spec, FullParity):
        audit_truncation(split.basis, psi**2, what="initial state")

    def one(lam_f: float) -> tuple[float, QuenchScalars]:
        spec = QuenchSpec(lambda_i=lambda_i, lambda_f=lam_f, initial=initial, basis=basis_spec)
        if method == "dense":
            eig_f = diagonalize_split(split, lam_f)
            amplitudes = eig_f.vectors.T @ psi
            energies = eig_f.energies
            if audit:
                edge = _strength_edge_dense(split.basis, eig_f.vectors, amplitudes**2)
                _audit_quench(split.basis, psi, edge)
        else:
            h_f = split.hamiltonian_sparse(lam_f)
            lan = lanczos_shift_invert(
                h_f, psi, float(psi @ (h_f @ psi)), max_steps=lanczos_max_steps
            )
            amplitudes, energies = lan.weights, lan.energies
            if audit:
                _audit_quench(
                    split.basis, psi, _strength_edge_lanczos(split.basis, lan, amplitudes**2)
                )
        result = QuenchResult(
            params=params,
            spec=spec,
            amplitudes=amplitudes,
            final_energies=energies,
            initial_energy=e_i,
            method=method,
        )
        return lam_f, scalars(result, mod_threshold=mod_threshold)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, grid))
    else:
        rows = [one(lam_f) for lam_f in grid]
    rows.sort(key=lambda r: r[0])
    return rows
