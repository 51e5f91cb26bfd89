"""Eigendecomposition, coupling sweeps and the analytic critical structure.

The closed-form critical couplings and borderlines are exact statements about
the infinite-size limit; they are evaluated from their closed forms only,
never re-fitted from numerics.  All reduced energies are in units of
omega0 * j.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .model import Basis, BasisSpec, ModelParams, assemble, build_basis


class DiagonalizationError(RuntimeError):
    """The dense eigensolver failed to converge."""


def _matrix_fingerprint(h: np.ndarray) -> str:
    digest = hashlib.sha1(np.ascontiguousarray(h).tobytes()).hexdigest()[:12]
    return f"shape={h.shape}, fro={np.linalg.norm(h):.6e}, sha1={digest}"


def fix_eigenvector_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column positive.

    Ties are broken by the lowest basis index (argmax returns the first
    maximum), which makes eigenvectors deterministic across runs.
    """
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


@dataclass(frozen=True)
class EigenSystem:
    """Full spectrum of H(lam) on one basis, with a fixed sign convention."""

    energies: np.ndarray
    vectors: np.ndarray  # columns aligned with energies
    basis: Basis
    lam: float

    @property
    def dim(self) -> int:
        return self.energies.size

    def residual_norm(self, h: np.ndarray) -> float:
        """max_l ||H v_l - E_l v_l||, for validation."""
        r = h @ self.vectors - self.vectors * self.energies
        return float(np.max(np.linalg.norm(r, axis=0)))


def diagonalize(h: np.ndarray, basis: Basis, lam: float) -> EigenSystem:
    """Dense symmetric eigensolve with ascending energies and fixed signs."""
    if not np.all(np.isfinite(h)):
        raise ValueError("Hamiltonian contains non-finite entries")
    try:
        energies, vectors = scipy.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise DiagonalizationError(
            f"eigensolver did not converge for {_matrix_fingerprint(h)}"
        ) from exc
    vectors = fix_eigenvector_signs(vectors)
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(energies=energies, vectors=vectors, basis=basis, lam=lam)


def diagonalize_split(split, lam: float) -> EigenSystem:
    """Diagonalize H(lam) = H0 + lam V of an assembled split."""
    return diagonalize(split.hamiltonian(lam), split.basis, lam)


# ---------------------------------------------------------------------------
# Analytic critical structure
# ---------------------------------------------------------------------------

def lambda_critical(params: ModelParams) -> float:
    """Ground-state QPT coupling sqrt(omega*omega0)/(1+delta)."""
    return math.sqrt(params.omega * params.omega0) / (1.0 + params.delta)


def lambda_zero(params: ModelParams) -> float:
    """Coupling sqrt(omega*omega0)/(1-delta) where the saddle line bends; inf at delta=1."""
    if params.delta == 1.0:
        return math.inf
    return math.sqrt(params.omega * params.omega0) / (1.0 - params.delta)


def lambda_bar_critical(params: ModelParams) -> float:
    """QPT coupling (omega-omega0)/2 of the critical M = N subspace (omega > omega0)."""
    if params.omega <= params.omega0:
        raise ValueError(
            "the critical-subspace coupling is derived for omega > omega0; "
            f"got omega={params.omega}, omega0={params.omega0}"
        )
    return (params.omega - params.omega0) / 2.0


def ground_state_energy_analytic(params: ModelParams, lam: float) -> float:
    """Infinite-size ground-state energy over omega0*j.

    -1 in the normal phase (lam < lambda_c), then
    -(lambda_c^2/lam^2 + lam^2/lambda_c^2)/2 in the superradiant phase.
    """
    lam_c = lambda_critical(params)
    if lam < lam_c:
        return -1.0
    r = (lam_c / lam) ** 2
    return -0.5 * (r + 1.0 / r)


def _two_branch_curve(lam: np.ndarray, knee: float) -> np.ndarray:
    """-1 below `knee`, then -(knee^2/lam^2 + lam^2/knee^2)/2."""
    lam = np.asarray(lam, dtype=np.float64)
    out = np.full(lam.shape, -1.0)
    if math.isfinite(knee):
        hi = lam >= knee
        r = (knee / lam[hi]) ** 2
        out[hi] = -0.5 * (r + 1.0 / r)
    return out


def _g_of_lambda(lam: np.ndarray, lam_bar: float) -> np.ndarray:
    q = lam_bar / lam
    return 2.0 / 3.0 - (2.0 / 9.0) * q * q - (2.0 / 9.0) * q * np.sqrt(q * q + 3.0)


@dataclass(frozen=True)
class CriticalStructure:
    """Critical couplings and reduced borderline curves E/(omega0 j).

    Curves return NaN outside their validity range.  The stationary-point
    classification labels (f, r) of each borderline are carried in
    `esqpt_types`; the M = N subspace line has no (f, r) label because its
    stationary point is non-analytic.
    """

    params: ModelParams
    lambda_c: float
    lambda_0: float
    lambda_bar_c: float | None
    esqpt_types: dict[str, str] = field(
        default_factory=lambda: {
            "e_c1": "(2,1)",
            "e_c2": "(2,2)",
            "e_c3": "(2,2)",
            "e_c4": "M=N critical (non-analytic stationary point)",
        }
    )

    def e_gs(self, lam) -> np.ndarray:
        """Ground-state energy; valid for all lam >= 0."""
        return _two_branch_curve(np.asarray(lam, dtype=float), self.lambda_c)

    def e_c1(self, lam) -> np.ndarray:
        """Saddle-point borderline, valid lam >= lambda_c."""
        lam = np.asarray(lam, dtype=float)
        out = _two_branch_curve(lam, self.lambda_0)
        return np.where(lam >= self.lambda_c, out, np.nan)

    def e_c2(self, lam) -> np.ndarray:
        """Reduced energy -1 for lam >= lambda_0."""
        lam = np.asarray(lam, dtype=float)
        return np.where(lam >= self.lambda_0, -1.0, np.nan)

    def e_c3(self, lam) -> np.ndarray:
        """Reduced energy +1, valid everywhere."""
        lam = np.asarray(lam, dtype=float)
        return np.full(lam.shape, 1.0)

    def _require_hierarchy(self) -> float:
        if self.lambda_bar_c is None:
            raise ValueError(
                "critical-subspace curves require omega > omega0; "
                f"got omega={self.params.omega}, omega0={self.params.omega0}"
            )
        return self.lambda_bar_c

    def e_ls(self, lam) -> np.ndarray:
        """Lowest state of the M = N subspace (omega > omega0 hierarchy)."""
        lam_bar = self._require_hierarchy()
        lam = np.asarray(lam, dtype=float)
        out = np.full(lam.shape, 1.0)
        hi = lam > lam_bar
        if np.any(hi):
            g = _g_of_lambda(lam[hi], lam_bar)
            out[hi] = 1.0 - (4.0 / self.params.omega0) * g * (
                lam[hi] * np.sqrt(1.0 - g) - lam_bar
            )
        return out

    def e_c4(self, lam) -> np.ndarray:
        """Reduced energy +1 in the M = N subspace for lam >= lambda_bar_c."""
        lam_bar = self._require_hierarchy()
        lam = np.asarray(lam, dtype=float)
        return np.where(lam >= lam_bar, 1.0, np.nan)

    def curves(self) -> dict[str, tuple]:
        """Name -> (callable, validity description) for tabulation."""
        entries: dict[str, tuple] = {
            "e_gs": (self.e_gs, "lam >= 0"),
            "e_c1": (self.e_c1, f"lam >= {self.lambda_c:.6g}"),
            "e_c2": (self.e_c2, f"lam >= {self.lambda_0:.6g}"),
            "e_c3": (self.e_c3, "lam >= 0"),
        }
        if self.lambda_bar_c is not None:
            entries["e_ls"] = (self.e_ls, "lam >= 0, M = N subspace")
            entries["e_c4"] = (self.e_c4, f"lam >= {self.lambda_bar_c:.6g}, M = N subspace")
        return entries


def esqpt_lines(params: ModelParams) -> CriticalStructure:
    """All analytic critical couplings and borderlines of the model."""
    lam_bar: float | None
    try:
        lam_bar = lambda_bar_critical(params)
    except ValueError:
        lam_bar = None
    return CriticalStructure(
        params=params,
        lambda_c=lambda_critical(params),
        lambda_0=lambda_zero(params),
        lambda_bar_c=lam_bar,
    )


# ---------------------------------------------------------------------------
# Sweeps and classification
# ---------------------------------------------------------------------------

def level_dynamics(
    params: ModelParams,
    spec: BasisSpec,
    lambda_grid,
    threads: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Full spectra on a monotone coupling grid.

    Each grid point is solved independently (no continuation), so level
    crossings need no tracking.  Returns (lambdas, energies) with one
    ascending row of energies per coupling.
    """
    lambdas = np.asarray(lambda_grid, dtype=float)
    if lambdas.ndim != 1 or lambdas.size == 0 or np.any(np.diff(lambdas) <= 0):
        raise ValueError("lambda_grid must be a non-empty strictly increasing 1-D grid")
    split = assemble(params, spec)

    def solve(lam: float) -> np.ndarray:
        return diagonalize_split(split, lam).energies

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(solve, lambdas))
    else:
        rows = [solve(lam) for lam in lambdas]
    return lambdas, np.vstack(rows)


def ground_state_curve(
    params: ModelParams,
    spec: BasisSpec,
    lambda_grid,
) -> np.ndarray:
    """Lowest eigenvalue per coupling, via a sparse extremal solve.

    Fast path for QPT finite-difference studies; falls back to the dense
    solver on tiny sectors where the iterative solver cannot run.
    """
    split = assemble(params, spec)
    out = np.empty(len(lambda_grid))
    for i, lam in enumerate(lambda_grid):
        if split.dim < 40:
            out[i] = np.linalg.eigvalsh(split.hamiltonian(lam))[0]
        else:
            h = split.hamiltonian_sparse(lam)
            val = scipy.sparse.linalg.eigsh(
                h, k=1, which="SA", return_eigenvectors=False, tol=0
            )
            out[i] = val[0]
    return out


_BOUNDARY_TOL = 1e-9  # in units of omega0 * j


def phase_label(
    params: ModelParams,
    lam: float,
    energy: float,
    *,
    critical_subspace: bool = False,
) -> str:
    """Classify a (coupling, raw energy) point into a quantum phase.

    Full model: N (normal), D (Dicke superradiant), TC (Tavis-Cummings band)
    and S (saturated).  With `critical_subspace=True` the M = N subspace
    labels A (atomic) and F (field) are used instead.  Points within
    1e-9 * omega0 * j of a borderline are labeled "critical".
    """
    cs = esqpt_lines(params)
    e = energy / params.energy_scale

    if critical_subspace:
        e_ls = float(cs.e_ls(lam))
        if e < e_ls - _BOUNDARY_TOL:
            raise ValueError(f"reduced energy {e:.6g} lies below the lowest state {e_ls:.6g}")
        e_c4 = float(cs.e_c4(lam))
        if not math.isnan(e_c4):
            if abs(e - e_c4) <= _BOUNDARY_TOL:
                return "critical"
            return "F" if e > e_c4 else "A"
        return "A"

    e_gs = float(cs.e_gs(lam))
    if e < e_gs - _BOUNDARY_TOL:
        raise ValueError(f"reduced energy {e:.6g} lies below the ground state {e_gs:.6g}")
    boundaries = [e_gs, float(cs.e_c3(lam))]
    e_c1 = float(cs.e_c1(lam))
    e_c2 = float(cs.e_c2(lam))
    for b in (e_c1, e_c2):
        if not math.isnan(b):
            boundaries.append(b)
    if any(abs(e - b) <= _BOUNDARY_TOL for b in boundaries):
        return "critical"
    if e > 1.0:
        return "S"
    if not math.isnan(e_c1) and e < e_c1:
        return "D"
    if not math.isnan(e_c2) and e < e_c2:
        return "TC"
    return "N"
