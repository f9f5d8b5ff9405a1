"""Bound two-boson pairs: center-of-momentum reduction and exponentially localized states.

For total quasi-momentum ``K`` on a ring the relative motion of the pair maps
onto a semi-infinite single-particle chain with hopping ``J_K = 2 kappa
cos(K/2)`` (enhanced by ``sqrt(2)`` on the first link) and the interaction
acting on the first two sites.  A bound pair is a solution whose relative
wave function decays as ``psi_r = y**r`` with ``0 < |y| < 1``; the decay
ratio satisfies the cubic

    u * y**3 + (u**2 - 1) * y**2 + 2*u*y + 1 = 0,      u = U / J_K,

and carries energy ``eps = -J_K * (y + 1/y)``, automatically outside the
two-particle scattering continuum ``[-2 J_K, 2 J_K]``.  Written in terms of
``x = 1/|y| = exp(beta)`` and the sign ``s = sign(y)`` this is the alternating
cubic ``s x^3 + 2u x^2 + s (u^2 - 1) x + u = 0``.

For attractive interaction the cubic has one such root always (the deeply
bound branch) and a second root -- the upper branch -- exactly when
``|u| > 3``, i.e. ``|U / kappa| > 6`` at the band center.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.linalg import eigh_tridiagonal

from .model import SQRT2, TwoBosonBasis, build_basis

BRANCH_LOWER = "-"
BRANCH_UPPER = "+"

_GRID_ATOL = 1e-9


def momentum_grid(n_sites: int) -> np.ndarray:
    """Ring momenta 2*pi*m/n for m = -(n-1)/2 .. (n-1)/2 (odd n, excludes +-pi)."""
    if n_sites % 2 == 0:
        raise ValueError("momentum grid needs an odd site count so that +-pi is excluded")
    half = (n_sites - 1) // 2
    return 2.0 * np.pi * np.arange(-half, half + 1) / n_sites


@dataclass(frozen=True)
class MomentumSector:
    """One center-of-momentum sector: K, its hopping J_K and reduced interaction U/J_K."""

    momentum: float
    hop: float
    reduced_u: float

    @classmethod
    def build(cls, momentum: float, kappa: float, interaction: float) -> "MomentumSector":
        hop = 2.0 * kappa * np.cos(momentum / 2.0)
        if abs(hop) < 1e-12:
            raise ValueError(f"sector at K={momentum} is flat (J_K = 0)")
        return cls(momentum=momentum, hop=hop, reduced_u=interaction / hop)

    @property
    def interaction(self) -> float:
        return self.reduced_u * self.hop


@dataclass(frozen=True)
class BoundState:
    """One bound-pair solution at momentum K.

    ``alternation`` is the sign of the decay ratio y = alternation *
    exp(-beta); ``branch`` labels the energy ordering within the sector
    ("-" lower, "+" upper).
    """

    momentum: float
    branch: str
    beta: float
    energy: float
    alternation: int
    hop: float
    reduced_u: float

    @property
    def decay_ratio(self) -> float:
        return self.alternation * np.exp(-self.beta)

    @property
    def interaction(self) -> float:
        return self.reduced_u * self.hop


def cubic_residual(state: BoundState) -> float:
    """Residual of the decay-ratio cubic, scaled by its largest monomial.

    The raw polynomial value at large ``exp(beta)`` is dominated by float
    round-off of huge terms, so the scale-free quantity is what a solver can
    actually drive to zero.
    """
    u = state.reduced_u
    y = state.decay_ratio
    terms = np.array([u * y**3, (u * u - 1.0) * y**2, 2.0 * u * y, 1.0])
    return float(abs(terms.sum()) / np.max(np.abs(terms)))


def _decay_roots(reduced_u: float) -> list[float]:
    """Real roots of the decay cubic with 0 < |y| < 1, Newton-polished."""
    u = reduced_u
    coeffs = [u, u * u - 1.0, 2.0 * u, 1.0]
    out = []
    for y in np.roots(coeffs):
        if abs(y.imag) > 1e-9 * max(1.0, abs(y.real)):
            continue
        y = float(y.real)
        if not 1e-14 < abs(y) < 1.0 - 1e-12:
            continue
        for _ in range(4):
            p = u * y**3 + (u * u - 1.0) * y**2 + 2.0 * u * y + 1.0
            dp = 3.0 * u * y**2 + 2.0 * (u * u - 1.0) * y + 2.0 * u
            y -= p / dp
        out.append(y)
    return sorted(set(out))


def build_heq(momentum: float, kappa: float, interaction: float, length: int) -> sparse.csr_array:
    """Truncated relative-motion chain of the K sector, dimension ``length + 1``.

    Sites are relative separations r = 0 .. length; the 0-1 link carries
    ``-sqrt(2) J_K``, every further link ``-J_K``, and the interaction sits
    on r = 0 and r = 1.
    """
    if length < 1:
        raise ValueError("chain length must be at least 1")
    hop = 2.0 * kappa * np.cos(momentum / 2.0)
    diag, off = _chain_bands(hop, interaction, length)
    return sparse.diags_array([off, diag, off], offsets=[-1, 0, 1]).tocsr()


def _chain_bands(hop: float, interaction: float, length: int) -> tuple[np.ndarray, np.ndarray]:
    diag = np.zeros(length + 1)
    diag[0] = interaction
    diag[1] = interaction
    off = -hop * np.ones(length)
    off[0] *= SQRT2
    return diag, off


def _isolated_chain_energies(hop: float, interaction: float, length: int) -> np.ndarray:
    """Eigenvalues of the truncated chain lying outside the scattering band."""
    diag, off = _chain_bands(hop, interaction, length)
    vals = eigh_tridiagonal(diag, off, eigvals_only=True)
    edge = 2.0 * abs(hop)
    return vals[np.abs(vals) > edge + 1e-12]


def solve_bound_states(
    momentum: float,
    kappa: float,
    interaction: float,
    *,
    validate: bool = True,
    chain_length: int = 400,
    match_tol: float = 1e-6,
) -> list[BoundState]:
    """Bound-pair solutions of one momentum sector, sorted by energy.

    Returns an empty list for a flat sector (K = +-pi) or vanishing
    interaction.  With ``validate`` on, every root must reproduce an isolated
    eigenvalue of the truncated relative chain; roots without a partner are
    discarded.
    """
    hop = 2.0 * kappa * np.cos(momentum / 2.0)
    if abs(hop) < 1e-12 or interaction == 0.0:
        return []
    reduced_u = interaction / hop
    found = []
    for y in _decay_roots(reduced_u):
        energy = -hop * (y + 1.0 / y)
        found.append((y, energy))
    found.sort(key=lambda t: t[1])
    if validate and found:
        reference = _isolated_chain_energies(hop, interaction, chain_length)
        found = [
            (y, e)
            for (y, e) in found
            if reference.size and np.min(np.abs(reference - e)) < match_tol
        ]
    states = []
    for y, energy in found:
        if len(found) == 2:
            branch = BRANCH_LOWER if energy == found[0][1] else BRANCH_UPPER
        else:
            branch = BRANCH_LOWER if energy < 0 else BRANCH_UPPER
        states.append(
            BoundState(
                momentum=float(momentum),
                branch=branch,
                beta=float(-np.log(abs(y))),
                energy=float(energy),
                alternation=1 if y > 0 else -1,
                hop=float(hop),
                reduced_u=float(reduced_u),
            )
        )
    return states


def bound_state_realspace(
    state: BoundState, n_sites: int, basis: TwoBosonBasis | None = None
) -> np.ndarray:
    """Normalized two-boson vector of a bound state on an ``n_sites`` ring.

    The relative amplitudes are ``psi_0`` fixed by the first row of the chain
    eigenproblem and ``psi_r = y**r`` up to the maximal ring separation
    (n-1)/2; each separation is spread over the ring with phases
    ``exp(i K (j + r/2))``.
    """
    if n_sites % 2 == 0:
        raise ValueError("real-space reconstruction needs an odd ring")
    steps = state.momentum * n_sites / (2.0 * np.pi)
    if abs(steps - round(steps)) > _GRID_ATOL:
        raise ValueError(
            f"momentum {state.momentum} is not on the {n_sites}-site grid"
        )
    if basis is None:
        basis = build_basis(n_sites)
    elif basis.n_sites != n_sites:
        raise ValueError("basis does not match n_sites")

    y = state.decay_ratio
    psi0 = SQRT2 * state.hop * y / (state.interaction - state.energy)
    reach = (n_sites - 1) // 2
    k = state.momentum
    site_phase = np.exp(1j * k * np.arange(1, n_sites + 1))

    amp = np.zeros(basis.dim, dtype=complex)
    for j in range(1, n_sites + 1):
        amp[basis.index[(j, j)]] += psi0 * site_phase[j - 1]
    for r in range(1, reach + 1):
        pref = (y**r) * np.exp(1j * k * r / 2.0)
        for j in range(1, n_sites + 1):
            other = ((j + r - 1) % n_sites) + 1
            key = (j, other) if j <= other else (other, j)
            amp[basis.index[key]] += pref * site_phase[j - 1]
    return amp / np.linalg.norm(amp)


@dataclass
class BandStructure:
    """Bound-pair band over the full momentum grid of an odd ring."""

    kappa: float
    interaction: float
    n_sites: int
    momenta: np.ndarray
    states: tuple[tuple[BoundState, ...], ...]
    _matrix_cache: dict = field(default_factory=dict, repr=False)

    def states_at(self, momentum: float) -> tuple[BoundState, ...]:
        idx = int(np.argmin(np.abs(self.momenta - momentum)))
        if abs(self.momenta[idx] - momentum) > _GRID_ATOL:
            raise ValueError(f"momentum {momentum} is not on the grid")
        return self.states[idx]

    def select(self, branch: str) -> list[BoundState | None]:
        out = []
        for group in self.states:
            hit = [s for s in group if s.branch == branch]
            out.append(hit[0] if hit else None)
        return out

    def branch_complete(self, branch: str) -> bool:
        return all(s is not None for s in self.select(branch))

    def missing_momenta(self, branch: str) -> np.ndarray:
        mask = np.array([s is None for s in self.select(branch)])
        return self.momenta[mask]

    def continuum_halfwidth(self, momentum: float) -> float:
        return 2.0 * abs(2.0 * self.kappa * np.cos(momentum / 2.0))

    def all_states(self) -> list[BoundState]:
        return [s for group in self.states for s in group]

    def bound_matrix(self, basis: TwoBosonBasis | None = None) -> tuple[np.ndarray, list[BoundState]]:
        """Column matrix of all real-space bound vectors (cached per basis dim)."""
        if basis is None:
            basis = build_basis(self.n_sites)
        key = basis.dim
        if key not in self._matrix_cache:
            states = self.all_states()
            cols = np.empty((basis.dim, len(states)), dtype=complex)
            for c, s in enumerate(states):
                cols[:, c] = bound_state_realspace(s, self.n_sites, basis)
            self._matrix_cache[key] = (cols, states)
        return self._matrix_cache[key]


def band_scan(
    kappa: float,
    interaction: float,
    n_sites: int,
    *,
    validate: bool = True,
    chain_length: int = 400,
) -> BandStructure:
    """Solve every momentum sector of the ring grid."""
    momenta = momentum_grid(n_sites)
    groups = tuple(
        tuple(
            solve_bound_states(
                k, kappa, interaction, validate=validate, chain_length=chain_length
            )
        )
        for k in momenta
    )
    return BandStructure(
        kappa=kappa,
        interaction=interaction,
        n_sites=n_sites,
        momenta=momenta,
        states=groups,
    )
