"""Two-boson basis and Hamiltonian assembly for a driven extended Bose-Hubbard chain.

Everything works in the symmetric two-particle sector spanned by the
configurations ``(i, j)`` with ``1 <= i <= j <= n_sites``.  Hamiltonians are
real-symmetric sparse matrices in that basis; states are plain complex numpy
vectors of matching dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import sparse

SQRT2 = float(np.sqrt(2.0))

#: tolerance used when an operation requires a normalized state
NORM_ATOL = 1e-8


class Boundary(str, Enum):
    OPEN = "open"
    RING = "ring"


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the chain.

    ``kappa`` is the hopping amplitude, ``u`` the on-site interaction, ``v``
    the nearest-neighbour interaction and ``field`` the strength of the
    linear potential ``field * sum_j j n_j`` (site labels start at 1).  A
    linear potential has no consistent meaning on a ring, so ``field`` must
    vanish for ring boundary conditions.
    """

    n_sites: int
    kappa: float
    u: float
    v: float = 0.0
    field: float = 0.0
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if self.n_sites < 2:
            raise ValueError(f"need at least 2 sites, got {self.n_sites}")
        if self.kappa < 0:
            raise ValueError(f"hopping amplitude must be non-negative, got {self.kappa}")
        if self.boundary is Boundary.RING:
            if self.field != 0.0:
                raise ValueError("a linear field is incompatible with ring boundary conditions")
            if self.n_sites < 3:
                raise ValueError("ring boundary needs at least 3 sites")

    def replace(self, **changes) -> "ModelParams":
        values = {
            "n_sites": self.n_sites,
            "kappa": self.kappa,
            "u": self.u,
            "v": self.v,
            "field": self.field,
            "boundary": self.boundary,
        }
        values.update(changes)
        return ModelParams(**values)


@dataclass(frozen=True)
class TwoBosonBasis:
    """Lexicographically ordered configurations (i, j), 1 <= i <= j <= n_sites."""

    n_sites: int
    pairs: tuple[tuple[int, int], ...]
    index: dict[tuple[int, int], int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.pairs)

    def rank(self, i: int, j: int) -> int:
        return self.index[(i, j)]

    def unrank(self, k: int) -> tuple[int, int]:
        return self.pairs[k]

    def unit_state(self, i: int, j: int) -> np.ndarray:
        """State vector of the single configuration (i, j)."""
        psi = np.zeros(self.dim, dtype=complex)
        psi[self.rank(i, j)] = 1.0
        return psi


def build_basis(n_sites: int) -> TwoBosonBasis:
    """Enumerate all two-boson configurations on ``n_sites`` sites."""
    if n_sites < 2:
        raise ValueError(f"need at least 2 sites, got {n_sites}")
    pairs = tuple(
        (i, j) for i in range(1, n_sites + 1) for j in range(i, n_sites + 1)
    )
    index = {p: k for k, p in enumerate(pairs)}
    return TwoBosonBasis(n_sites=n_sites, pairs=pairs, index=index)


def _neighbours(site: int, n_sites: int, boundary: Boundary) -> list[int]:
    if boundary is Boundary.RING:
        return [((site - 2) % n_sites) + 1, (site % n_sites) + 1]
    out = []
    if site > 1:
        out.append(site - 1)
    if site < n_sites:
        out.append(site + 1)
    return out


def build_h0(params: ModelParams, basis: TwoBosonBasis | None = None) -> sparse.csr_array:
    """Field-free Hamiltonian: hopping plus on-site and nearest-neighbour interaction.

    Bosonic enhancement applies whenever a hop connects a doubly occupied
    site to a singly occupied pair: those elements carry ``sqrt(2) * kappa``.
    """
    if basis is None:
        basis = build_basis(params.n_sites)
    n = params.n_sites
    ring = params.boundary is Boundary.RING
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for a, (i, j) in enumerate(basis.pairs):
        adjacent = (j - i == 1) or (ring and (i, j) == (1, n))
        diag = (params.u if i == j else 0.0) + (params.v if adjacent else 0.0)
        rows.append(a)
        cols.append(a)
        vals.append(diag)
        moves = [(i, j)] if i == j else [(i, j), (j, i)]
        for src, other in moves:
            for dst in _neighbours(src, n, params.boundary):
                new = (dst, other) if dst <= other else (other, dst)
                amp = SQRT2 if (i == j or new[0] == new[1]) else 1.0
                rows.append(basis.index[new])
                cols.append(a)
                vals.append(-params.kappa * amp)
    mat = sparse.coo_array((vals, (rows, cols)), shape=(basis.dim, basis.dim))
    return mat.tocsr()


def build_stark(n_sites: int, field: float, basis: TwoBosonBasis | None = None) -> sparse.csr_array:
    """Linear-potential term: diagonal ``field * (i + j)`` per configuration."""
    if basis is None:
        basis = build_basis(n_sites)
    diag = field * site_sums(basis)
    return sparse.dia_array((diag[np.newaxis, :], [0]), shape=(basis.dim, basis.dim)).tocsr()


def build_hamiltonian(params: ModelParams, basis: TwoBosonBasis | None = None) -> sparse.csr_array:
    """Full Hamiltonian including the linear field (open boundary enforced by params)."""
    if basis is None:
        basis = build_basis(params.n_sites)
    h = build_h0(params, basis)
    if params.field != 0.0:
        h = h + build_stark(params.n_sites, params.field, basis)
    return h.tocsr()


def separations(basis: TwoBosonBasis) -> np.ndarray:
    """Particle separation j - i per configuration (0 for a same-site pair)."""
    return np.array([j - i for (i, j) in basis.pairs], dtype=float)


def site_sums(basis: TwoBosonBasis) -> np.ndarray:
    """Sum of occupied site labels i + j per configuration."""
    return np.array([i + j for (i, j) in basis.pairs], dtype=float)


def _check_normalized(state: np.ndarray) -> None:
    nrm = np.linalg.norm(state)
    if abs(nrm - 1.0) > NORM_ATOL:
        raise ValueError(f"state is not normalized: |psi| = {nrm!r}")


def mean_distance(basis: TwoBosonBasis, state: np.ndarray) -> float:
    """Average separation of the two particles in a normalized state.

    A same-site pair contributes distance 0; the value lies in
    ``[0, n_sites - 1]``.
    """
    state = np.asarray(state)
    if state.shape != (basis.dim,):
        raise ValueError(f"state dimension {state.shape} does not match basis dim {basis.dim}")
    _check_normalized(state)
    return float(separations(basis) @ np.abs(state) ** 2)


def expectation(op, state: np.ndarray) -> float:
    """Real expectation value <psi|A|psi> of a Hermitian operator.

    Raises if dimensions mismatch, the state is not normalized, or the
    quadratic form carries a non-real residue above 1e-10.
    """
    state = np.asarray(state)
    dim = op.shape[0]
    if op.shape != (dim, dim) or state.shape != (dim,):
        raise ValueError(f"dimension mismatch: operator {op.shape}, state {state.shape}")
    _check_normalized(state)
    val = np.vdot(state, op @ state)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"expectation value has non-real residue {val.imag!r}")
    return float(val.real)
