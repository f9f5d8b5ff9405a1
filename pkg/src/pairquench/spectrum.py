"""Eigenvalue spectra versus field, pair-correlation labels and avoided crossings.

Levels are tracked across the field grid by maximal eigenvector overlap
(sorted-index continuity mixes branches near an anticrossing); gap minima of
energy-adjacent tracked pairs are reported as avoided crossings, with
near-degenerate minima split out as true crossings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import linear_sum_assignment
from scipy.sparse.linalg import eigsh

from .model import ModelParams, TwoBosonBasis, build_basis, build_hamiltonian, separations

LABEL_CORRELATED = "correlated"
LABEL_UNCORRELATED = "uncorrelated"

#: gaps below this (relative to the local energy scale) count as true crossings
TRUE_CROSSING_TOL = 1e-8


@dataclass
class SpectrumSlice:
    """Eigenpairs of one field value, optionally restricted to an energy window."""

    field: float
    energies: np.ndarray
    correlations: np.ndarray
    vectors: np.ndarray
    window: tuple[float, float] | None = None


def _window_eigenpairs(h: sparse.csr_array, window: tuple[float, float], k_start: int):
    """All eigenpairs inside the window via shift-invert around its center."""
    lo, hi = window
    center = 0.5 * (lo + hi)
    dim = h.shape[0]
    v0 = np.ones(dim) / np.sqrt(dim)
    k = min(max(k_start, 8), dim - 2)
    while True:
        vals, vecs = eigsh(h, k=k, sigma=center, v0=v0)
        covered = vals.min() < lo and vals.max() > hi
        if covered or k >= dim - 2:
            break
        k = min(2 * k, dim - 2)
    keep = (vals >= lo) & (vals <= hi)
    order = np.argsort(vals[keep])
    return vals[keep][order], vecs[:, keep][:, order]


def spectrum_vs_field(
    f_values,
    params: ModelParams,
    window: tuple[float, float] | None = None,
    *,
    basis: TwoBosonBasis | None = None,
    dense_limit: int = 2048,
    k_start: int = 32,
) -> list[SpectrumSlice]:
    """Diagonalize the driven chain on a grid of field values.

    Small problems (or no window) are solved densely; large windowed ones use
    sparse shift-invert around the window center.
    """
    if basis is None:
        basis = build_basis(params.n_sites)
    sep = separations(basis)
    slices = []
    for f in np.asarray(f_values, dtype=float):
        h = build_hamiltonian(params.replace(field=float(f)), basis)
        if window is None or basis.dim <= dense_limit:
            vals, vecs = np.linalg.eigh(h.toarray())
            if window is not None:
                keep = (vals >= window[0]) & (vals <= window[1])
                vals, vecs = vals[keep], vecs[:, keep]
        else:
            vals, vecs = _window_eigenpairs(h, window, k_start)
        corr = sep @ (np.abs(vecs) ** 2)
        slices.append(
            SpectrumSlice(
                field=float(f),
                energies=vals,
                correlations=corr,
                vectors=vecs,
                window=window,
            )
        )
    return slices


def classify_levels(slc: SpectrumSlice, r_threshold: float = 1.0) -> list[str]:
    """Label each level correlated (pair-like) or uncorrelated by its mean separation."""
    return [
        LABEL_CORRELATED if r <= r_threshold else LABEL_UNCORRELATED
        for r in slc.correlations
    ]


@dataclass(frozen=True)
class AvoidedCrossing:
    """Local gap minimum of two tracked levels."""

    f_center: float
    gap: float
    level_pair: tuple[int, int]
    classification: tuple[str, str]


@dataclass(frozen=True)
class AmbiguousSegment:
    """Grid interval where eigenvector overlap was too small to track a level."""

    f_from: float
    f_to: float
    track: int
    overlap: float


@dataclass
class CrossingScan:
    """Tracked levels plus every detected gap minimum."""

    avoided: list[AvoidedCrossing]
    true_crossings: list[AvoidedCrossing]
    ambiguous: list[AmbiguousSegment]
    track_ids: list[np.ndarray]


def _track_levels(slices: list[SpectrumSlice], overlap_min: float):
    """Assign persistent ids to levels by maximal-overlap matching."""
    ids = [np.arange(slices[0].energies.size)]
    next_id = slices[0].energies.size
    ambiguous: list[AmbiguousSegment] = []
    for a, b in zip(slices[:-1], slices[1:]):
        overlap = np.abs(a.vectors.conj().T @ b.vectors)
        rows, cols = linear_sum_assignment(-overlap)
        new_ids = np.full(b.energies.size, -1)
        for r, c in zip(rows, cols):
            new_ids[c] = ids[-1][r]
            if overlap[r, c] < overlap_min:
                ambiguous.append(
                    AmbiguousSegment(
                        f_from=a.field,
                        f_to=b.field,
                        track=int(ids[-1][r]),
                        overlap=float(overlap[r, c]),
                    )
                )
        for c in np.nonzero(new_ids < 0)[0]:
            new_ids[c] = next_id
            next_id += 1
        ids.append(new_ids)
    return ids, ambiguous


def detect_avoided_crossings(
    slices: list[SpectrumSlice],
    *,
    overlap_min: float = 0.5,
    r_threshold: float = 1.0,
) -> CrossingScan:
    """Find local gap minima of energy-adjacent tracked level pairs.

    Each pair of levels that are neighbours in the sorted spectrum anywhere
    on the grid contributes one gap series; interior local minima become
    avoided crossings (or true crossings when the gap is numerically zero).
    Classification pairs the correlation labels of the two tracks on the
    early side of the minimum, where they are still unmixed.
    """
    if len(slices) < 3:
        raise ValueError("crossing detection needs at least 3 field slices")
    ids, ambiguous = _track_levels(slices, overlap_min)

    energy_of: list[dict[int, float]] = []
    corr_of: list[dict[int, float]] = []
    for slc, slice_ids in zip(slices, ids):
        energy_of.append(dict(zip(slice_ids.tolist(), slc.energies.tolist())))
        corr_of.append(dict(zip(slice_ids.tolist(), slc.correlations.tolist())))

    pairs: set[tuple[int, int]] = set()
    for slc, slice_ids in zip(slices, ids):
        order = np.argsort(slc.energies)
        sorted_ids = slice_ids[order]
        for x, y in zip(sorted_ids[:-1], sorted_ids[1:]):
            pairs.add((min(int(x), int(y)), max(int(x), int(y))))

    avoided: list[AvoidedCrossing] = []
    exact: list[AvoidedCrossing] = []
    for ida, idb in sorted(pairs):
        gaps = []
        for s in range(len(slices)):
            ea = energy_of[s].get(ida)
            eb = energy_of[s].get(idb)
            gaps.append(abs(ea - eb) if ea is not None and eb is not None else np.nan)
        gaps = np.asarray(gaps)
        for s in range(1, len(slices) - 1):
            trio = gaps[s - 1 : s + 2]
            if np.any(np.isnan(trio)):
                continue
            if trio[1] <= trio[0] and trio[1] <= trio[2]:
                scale = max(1.0, abs(energy_of[s][ida]), abs(energy_of[s][idb]))
                label_a = (
                    LABEL_CORRELATED if corr_of[s - 1][ida] <= r_threshold else LABEL_UNCORRELATED
                )
                label_b = (
                    LABEL_CORRELATED if corr_of[s - 1][idb] <= r_threshold else LABEL_UNCORRELATED
                )
                event = AvoidedCrossing(
                    f_center=slices[s].field,
                    gap=float(trio[1]),
                    level_pair=(ida, idb),
                    classification=(label_a, label_b),
                )
                if trio[1] <= TRUE_CROSSING_TOL * scale:
                    exact.append(event)
                else:
                    avoided.append(event)
    return CrossingScan(
        avoided=avoided, true_crossings=exact, ambiguous=ambiguous, track_ids=ids
    )
