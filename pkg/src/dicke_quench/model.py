"""Bases and matrix representations of the extended Dicke Hamiltonian.

The model couples a single bosonic mode (energy ``omega``) to a collective
quasi-spin of N = 2j two-level atoms (excitation energy ``omega0``).  The
interaction splits into a co-rotating part and a counter-rotating part scaled
by ``delta`` in [0, 1]; ``delta = 0`` is the integrable Tavis-Cummings limit,
``delta = 1`` the full Dicke model.  The Hamiltonian is kept in the linear
form ``H(lam) = H0 + lam * V`` so that a single (H0, V) pair serves entire
coupling sweeps.

Supported Hilbert-space sectors:

* ``FullParity`` -- all states |n>|m> with n <= n_max and fixed parity of
  M = n + m + j (parity is conserved for every delta).
* ``MSubspace`` -- the eigenspace of the conserved M = n + m + j at
  delta = 0; exact, no photon truncation.

Quasi-spin projections are stored as integers 2m to keep half-integer labels
exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Union

import numpy as np
import scipy.sparse as sp


class TruncationError(RuntimeError):
    """Photon truncation is too small for the requested computation."""


@dataclass(frozen=True)
class ModelParams:
    """Physical constants and the photon truncation of one model instance.

    The coupling strength lam is deliberately not a field: it is supplied per
    Hamiltonian assembly, H(lam) = H0 + lam * V.

    Attributes
    ----------
    omega : float
        Boson energy (hbar = 1), > 0.
    omega0 : float
        Atomic excitation energy, > 0.
    delta : float
        Counter-rotating scale in [0, 1].
    two_j : int
        Twice the collective quasi-spin, >= 1; N = 2j atoms.
    n_max : int
        Largest boson number retained in FullParity bases; ignored for
        MSubspace bases.
    """

    omega: float
    omega0: float
    delta: float
    two_j: int
    n_max: int = 0

    def __post_init__(self) -> None:
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must be in [0, 1], got {self.delta}")
        if int(self.two_j) != self.two_j or self.two_j < 1:
            raise ValueError(f"two_j must be an integer >= 1, got {self.two_j}")
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ValueError(f"n_max must be an integer >= 0, got {self.n_max}")

    @property
    def j(self) -> float:
        return self.two_j / 2.0

    @property
    def n_atoms(self) -> int:
        return self.two_j

    @property
    def energy_scale(self) -> float:
        """omega0 * j, the unit used for all reduced energies E/(omega0 j)."""
        return self.omega0 * self.two_j / 2.0


@dataclass(frozen=True)
class BasisState:
    """One basis ket |n>|m>, with the spin projection stored as 2m."""

    n: int
    two_m: int

    @property
    def m(self) -> float:
        return self.two_m / 2.0

    def m_total(self, two_j: int) -> int:
        """Conserved quantum number M = n + m + j (integer for physical states)."""
        twice = 2 * self.n + self.two_m + two_j
        if twice % 2:
            raise ValueError(f"state {self} has non-integer M for two_j={two_j}")
        return twice // 2


@dataclass(frozen=True)
class FullParity:
    """Sector of fixed parity (-1)^M with photon truncation from ModelParams."""

    parity: str  # "even" | "odd"

    def __post_init__(self) -> None:
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")


@dataclass(frozen=True)
class MSubspace:
    """Sector of fixed M = n + m + j (conserved at delta = 0); no truncation."""

    m_total: int

    def __post_init__(self) -> None:
        if int(self.m_total) != self.m_total or self.m_total < 0:
            raise ValueError(f"M must be an integer >= 0, got {self.m_total}")


BasisSpec = Union[FullParity, MSubspace]


@dataclass(frozen=True)
class Basis:
    """Deterministic enumeration of one Hilbert-space sector.

    States are ordered lexicographically by (n, then m ascending), which makes
    every downstream matrix reproducible across runs and platforms.
    """

    params: ModelParams
    spec: BasisSpec
    states: tuple[BasisState, ...]

    @property
    def dim(self) -> int:
        return len(self.states)

    @cached_property
    def n_values(self) -> np.ndarray:
        arr = np.array([s.n for s in self.states], dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def two_m_values(self) -> np.ndarray:
        arr = np.array([s.two_m for s in self.states], dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {(s.n, s.two_m): i for i, s in enumerate(self.states)}

    def index_of(self, n: int, two_m: int) -> int:
        try:
            return self.index[(n, two_m)]
        except KeyError:
            raise KeyError(
                f"state (n={n}, 2m={two_m}) is not in the {self.spec} basis"
            ) from None

    def m_totals(self) -> np.ndarray:
        """M = n + m + j per state."""
        return (2 * self.n_values + self.two_m_values + self.params.two_j) // 2


def build_basis(params: ModelParams, spec: BasisSpec) -> Basis:
    """Enumerate the sector `spec` in lexicographic (n, m) order.

    MSubspace bases are exact: n runs over max(0, M - 2j) .. M and the
    dimension is min(M, 2j) + 1.  FullParity bases keep n <= params.n_max.
    """
    two_j = params.two_j
    states: list[BasisState] = []
    if isinstance(spec, MSubspace):
        m_tot = spec.m_total
        for n in range(max(0, m_tot - two_j), m_tot + 1):
            two_m = 2 * (m_tot - n) - two_j
            states.append(BasisState(n, two_m))
    elif isinstance(spec, FullParity):
        want = 0 if spec.parity == "even" else 1
        for n in range(params.n_max + 1):
            for two_m in range(-two_j, two_j + 1, 2):
                m_tot2 = 2 * n + two_m + two_j  # = 2M, always even
                if (m_tot2 // 2) % 2 == want:
                    states.append(BasisState(n, two_m))
    else:
        raise TypeError(f"unsupported basis spec {spec!r}")
    if not states:
        raise ValueError(f"basis {spec} is empty for {params}")
    return Basis(params=params, spec=spec, states=tuple(states))


def _ladder_factor(two_j: int, two_m_from: int, raising: bool) -> float:
    """j(j+1) - m(m +/- 1) evaluated exactly from integer labels 2j, 2m."""
    step = 2 if raising else -2
    num = two_j * (two_j + 2) - two_m_from * (two_m_from + step)
    return num / 4.0


@dataclass(frozen=True)
class HamiltonianSplit:
    """Matrices of H0 = omega b'b + omega0 Jz and the interaction V.

    H0 is diagonal with entries omega*n + omega0*m.  V couples states with
    (dn, dm) = (+-1, -+1) (co-rotating) and (+-1, +-1) (counter-rotating,
    scaled by delta) and carries the 1/sqrt(N) prefactor.  V is held sparse
    (at most four off-diagonal couplings per state); dense views are
    materialized on demand so the full matrices stay available at desk scale.
    """

    basis: Basis
    h0_diag: np.ndarray
    v_sparse: sp.csr_matrix

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def h0(self) -> np.ndarray:
        return np.diag(self.h0_diag)

    @cached_property
    def v(self) -> np.ndarray:
        return self.v_sparse.toarray()

    def hamiltonian(self, lam: float) -> np.ndarray:
        """Dense H(lam) = H0 + lam * V."""
        h = lam * self.v
        h[np.diag_indices(self.dim)] += self.h0_diag
        return h

    def hamiltonian_sparse(self, lam: float) -> sp.csr_matrix:
        return (sp.diags(self.h0_diag) + lam * self.v_sparse).tocsr()


def assemble(params: ModelParams, spec: BasisSpec) -> HamiltonianSplit:
    """Build (H0, V) on the sector `spec`.

    Matrix elements use <n+1|b'|n> = sqrt(n+1) and
    <m+-1|J+-|m> = sqrt(j(j+1) - m(m+-1)).  In an MSubspace basis the
    counter-rotating terms map out of the sector and are dropped (they vanish
    physically only at delta = 0).
    """
    basis = build_basis(params, spec)
    two_j = params.two_j
    inv_sqrt_n = 1.0 / math.sqrt(two_j)
    h0_diag = params.omega * basis.n_values + params.omega0 * (basis.two_m_values / 2.0)
    h0_diag = np.ascontiguousarray(h0_diag, dtype=np.float64)

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    index = basis.index
    for i, s in enumerate(basis.states):
        # co-rotating b'J-: (n, m) -> (n+1, m-1)
        t = index.get((s.n + 1, s.two_m - 2))
        if t is not None:
            val = math.sqrt((s.n + 1) * _ladder_factor(two_j, s.two_m, raising=False))
            rows += [i, t]
            cols += [t, i]
            vals += [val * inv_sqrt_n] * 2
        # counter-rotating b'J+: (n, m) -> (n+1, m+1)
        if params.delta != 0.0:
            t = index.get((s.n + 1, s.two_m + 2))
            if t is not None:
                val = params.delta * math.sqrt(
                    (s.n + 1) * _ladder_factor(two_j, s.two_m, raising=True)
                )
                rows += [i, t]
                cols += [t, i]
                vals += [val * inv_sqrt_n] * 2

    v = sp.coo_matrix(
        (np.asarray(vals), (np.asarray(rows), np.asarray(cols))),
        shape=(basis.dim, basis.dim),
    ).tocsr()
    h0_diag.setflags(write=False)
    return HamiltonianSplit(basis=basis, h0_diag=h0_diag, v_sparse=v)


@lru_cache(maxsize=8)
def assemble_cached(params: ModelParams, spec: BasisSpec) -> HamiltonianSplit:
    """Memoized assemble(); safe because results are immutable."""
    return assemble(params, spec)


_OPERATORS = ("photon_number", "Jz", "M", "parity")


def operator_diagonal(basis: Basis, which: str) -> np.ndarray:
    """Diagonal of a basis-diagonal observable: n, m, M or (-1)^M."""
    if which == "photon_number":
        return basis.n_values.astype(np.float64)
    if which == "Jz":
        return basis.two_m_values / 2.0
    if which == "M":
        return basis.m_totals().astype(np.float64)
    if which == "parity":
        return np.where(basis.m_totals() % 2 == 0, 1.0, -1.0)
    raise ValueError(f"unknown operator {which!r}; expected one of {_OPERATORS}")


def operator_matrix(params: ModelParams, spec: BasisSpec, which: str) -> np.ndarray:
    """Dense matrix of a conserved-structure observable on the sector `spec`."""
    return np.diag(operator_diagonal(build_basis(params, spec), which))


def interaction_dispersion_analytic(params: ModelParams, n: int, m: float) -> float:
    """Closed-form dispersion <V^2> - <V>^2 in the bare state |n>|m>.

    [(1 + d^2)(j^2 - m^2 + j)(2n + 1) + (1 - d^2) m] / (2j); exact for pure
    basis states of the detuned system.
    """
    j = params.two_j / 2.0
    d2 = params.delta**2
    return ((1 + d2) * (j * j - m * m + j) * (2 * n + 1) + (1 - d2) * m) / params.two_j


def interaction_dispersion_numeric(params: ModelParams, n: int, two_m: int) -> float:
    """Brute-force dispersion of V in |n>|m> from an assembled matrix.

    Builds the parity sector of the state with the truncation enlarged so the
    basis contains V|n>|m> exactly; the result is then free of truncation
    error and serves as an independent oracle for the closed form.
    """
    enlarged = ModelParams(
        omega=params.omega,
        omega0=params.omega0,
        delta=params.delta,
        two_j=params.two_j,
        n_max=n + 2,
    )
    m_tot = (2 * n + two_m + params.two_j) // 2
    sector = FullParity("even" if m_tot % 2 == 0 else "odd")
    split = assemble(enlarged, sector)
    i = split.basis.index_of(n, two_m)
    col = split.v_sparse.getcol(i).toarray().ravel()
    return float(col @ col - col[i] ** 2)


def edge_weight(basis: Basis, weights_by_state: np.ndarray, margin: int = 3) -> float:
    """Total weight sitting on states with n within `margin` of n_max."""
    if isinstance(basis.spec, MSubspace):
        return 0.0
    edge = basis.n_values > basis.params.n_max - margin
    return float(np.sum(weights_by_state[edge]))


def audit_truncation(
    basis: Basis,
    weights_by_state: np.ndarray,
    *,
    tol: float = 1e-8,
    margin: int = 3,
    what: str = "state",
) -> float:
    """Raise TruncationError if `weights_by_state` leaks onto the photon edge.

    The audit requires the total weight on states with n within `margin` of
    n_max to stay below `tol`; MSubspace bases are exact and always pass.
    """
    w = edge_weight(basis, weights_by_state, margin=margin)
    if w >= tol:
        raise TruncationError(
            f"{what} has weight {w:.3e} >= {tol:.1e} on basis states with "
            f"n > n_max - {margin} (n_max = {basis.params.n_max}); increase n_max"
        )
    return w


def suggest_n_max(params: ModelParams, lambdas: tuple[float, ...] | list[float]) -> int:
    """Heuristic photon truncation covering ground states at the given couplings.

    Uses the classical superradiant occupation <n> ~ j lam^2 (1+delta)^2 /
    (2 omega^2) plus a generous fluctuation margin; final adequacy is always
    established by audit_truncation, not by this estimate.
    """
    lam_max = max(abs(float(x)) for x in lambdas) if lambdas else 0.0
    base = (
        params.two_j / 2.0 * lam_max**2 * (1.0 + params.delta) ** 2
        / (2.0 * params.omega**2)
    )
    return int(math.ceil(base + 12.0 * math.sqrt(base + 9.0) + 30.0))
