"""Symmetric eigendecomposition plus degeneracy and gap-class bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import Hamiltonian

DEFAULT_TAU = 1e-8
SYMMETRY_TOL = 1e-12


class SpectralError(ValueError):
    pass


@dataclass(frozen=True)
class GapClasses:
    """Pairs (m, n), m < n, sorted by gap and grouped by single linkage within tau.

    ``first``/``second`` are 0-based positions into the value list the classes
    were built from. Pairs of class ``c`` occupy ``starts[c]:starts[c + 1]``.
    """

    first: np.ndarray
    second: np.ndarray
    gaps: np.ndarray
    starts: np.ndarray
    values: np.ndarray
    chained: bool

    @property
    def n_classes(self) -> int:
        return len(self.values)

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(np.append(self.starts, len(self.gaps)))

    def pairs(self, c: int) -> list[tuple[int, int]]:
        end = self.starts[c + 1] if c + 1 < self.n_classes else len(self.gaps)
        sl = slice(self.starts[c], end)
        return list(zip(self.first[sl].tolist(), self.second[sl].tolist()))


def _runs(sorted_values: np.ndarray, tau: float) -> np.ndarray:
    """Start offsets of maximal runs whose consecutive differences are <= tau."""
    if sorted_values.size == 0:
        return np.zeros(0, dtype=np.int64)
    breaks = np.flatnonzero(np.diff(sorted_values) > tau) + 1
    return np.concatenate(([0], breaks)).astype(np.int64)


def degeneracy_classes(eigenvalues, tau: float = DEFAULT_TAU) -> list[np.ndarray]:
    """Partition ascending eigenvalues into maximal runs within tau (0-based indices)."""
    lam = np.asarray(eigenvalues, dtype=float)
    if np.any(np.diff(lam) < 0):
        raise SpectralError("eigenvalues must be ascending")
    starts = _runs(lam, tau)
    return np.split(np.arange(lam.size), starts[1:]) if lam.size else []


def gap_classes(eigenvalues, tau: float = DEFAULT_TAU) -> GapClasses:
    lam = np.asarray(eigenvalues, dtype=float)
    if np.any(np.diff(lam) < 0):
        raise SpectralError("eigenvalues must be ascending")
    first, second = np.triu_indices(lam.size, 1)
    gaps = lam[second] - lam[first]
    order = np.lexsort((second, first, gaps))
    first, second, gaps = first[order], second[order], gaps[order]
    starts = _runs(gaps, tau)
    ends = np.append(starts[1:], gaps.size)
    values = np.array([gaps[s:e].mean() for s, e in zip(starts, ends)])
    chained = bool(np.any(gaps[ends - 1] - gaps[starts] > tau)) if gaps.size else False
    return GapClasses(first, second, gaps, starts, values, chained)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    tau: float = DEFAULT_TAU

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @cached_property
    def degeneracy(self) -> list[np.ndarray]:
        return degeneracy_classes(self.eigenvalues, self.tau)

    @cached_property
    def distinct_eigenvalues(self) -> np.ndarray:
        return np.array([self.eigenvalues[c].mean() for c in self.degeneracy])

    @cached_property
    def gaps(self) -> GapClasses:
        """Gap classes over eigenvector-index pairs."""
        return gap_classes(self.eigenvalues, self.tau)

    @cached_property
    def distinct_gaps(self) -> GapClasses:
        """Gap classes over pairs of degeneracy classes (no zero gaps)."""
        return gap_classes(self.distinct_eigenvalues, self.tau)

    @cached_property
    def chained(self) -> bool:
        """True if some degeneracy class spans more than tau end to end."""
        return any(self.eigenvalues[c[-1]] - self.eigenvalues[c[0]] > self.tau for c in self.degeneracy)

    def projector(self, c: int) -> np.ndarray:
        v = self.eigenvectors[:, self.degeneracy[c]]
        return v @ v.T

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def _fix_signs(vectors: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Flip columns so their first component with magnitude > tol is positive."""
    out = vectors.copy()
    for m in range(out.shape[1]):
        nz = np.flatnonzero(np.abs(out[:, m]) > tol)
        if nz.size and out[nz[0], m] < 0:
            out[:, m] = -out[:, m]
    return out


def eig_sym(h, tau: float = DEFAULT_TAU) -> SpectralDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of ``h``.

    Accepts a :class:`Hamiltonian` or a real symmetric array.
    """
    mat = np.asarray(h.matrix if isinstance(h, Hamiltonian) else h, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise SpectralError(f"expected a square matrix, got shape {mat.shape}")
    asym = np.max(np.abs(mat - mat.T)) if mat.size else 0.0
    if asym > SYMMETRY_TOL:
        raise SpectralError(f"matrix is not symmetric (max |H - H^T| = {asym:.3e})")
    lam, vec = np.linalg.eigh(mat)
    vec = _fix_signs(vec)
    lam.setflags(write=False)
    vec.setflags(write=False)
    return SpectralDecomposition(lam, vec, tau)
