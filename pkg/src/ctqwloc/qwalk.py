"""Continuous-time quantum walk dynamics and localization observables.

All functions take a :class:`~ctqwloc.spectral.SpectralDecomposition` of the
Hamiltonian and 1-based node labels. Long-time means are evaluated in closed
form from degeneracy and gap classes; :func:`time_average_oracle` and the
``*_naive`` functions exist as independent cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .spectral import SpectralDecomposition

NORM_TOL = 1e-10
# bytes budget for the blocked long-time kernels
_BLOCK_BYTES = 128 * 2**20


class WalkError(ValueError):
    pass


@dataclass(frozen=True)
class AmplitudeVector:
    values: np.ndarray
    time: float = 0.0

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True)
class LongTimeResult:
    pi_bar: np.ndarray
    ipr_bar: np.ndarray
    delta_abs: float
    delta_rel: float
    tolerance_used: float
    warnings: list[str] = field(default_factory=list)


def _node(decomp: SpectralDecomposition, label: int) -> int:
    label = int(label)
    if not 1 <= label <= decomp.n:
        raise WalkError(f"node {label} out of range [1, {decomp.n}]")
    return label - 1


def basis_state(n: int, j: int) -> AmplitudeVector:
    """The walker fully localized on node ``j``."""
    if not 1 <= j <= n:
        raise WalkError(f"node {j} out of range [1, {n}]")
    psi = np.zeros(n, dtype=complex)
    psi[j - 1] = 1.0
    return AmplitudeVector(psi, 0.0)


def propagator(decomp: SpectralDecomposition, t: float) -> np.ndarray:
    """exp(-iHt) assembled from the spectrum."""
    v = decomp.eigenvectors
    return (v * np.exp(-1j * decomp.eigenvalues * t)) @ v.T


def evolve(decomp: SpectralDecomposition, psi0, t: float) -> AmplitudeVector:
    psi = np.asarray(psi0.values if isinstance(psi0, AmplitudeVector) else psi0, dtype=complex)
    t0 = psi0.time if isinstance(psi0, AmplitudeVector) else 0.0
    if psi.shape != (decomp.n,):
        raise WalkError(f"state has shape {psi.shape}, expected ({decomp.n},)")
    v = decomp.eigenvectors
    coeffs = v.T @ psi
    return AmplitudeVector(v @ (np.exp(-1j * decomp.eigenvalues * t) * coeffs), t0 + t)


def _amplitudes_from(decomp: SpectralDecomposition, j: int, times) -> np.ndarray:
    """<i|exp(-iHt)|j> for all i; shape (len(times), N)."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    v = decomp.eigenvectors
    phases = np.exp(-1j * np.outer(t, decomp.eigenvalues))
    amp = (phases * v[j]) @ v.T
    # the propagator is exactly the identity at t = 0
    amp[t == 0] = 0.0
    amp[t == 0, j] = 1.0
    return amp


def transition_probability(decomp: SpectralDecomposition, i: int, j: int, t):
    """pi_ij(t): probability of finding at ``i`` a walk started at ``j``."""
    a = _amplitudes_from(decomp, _node(decomp, j), t)[:, _node(decomp, i)]
    p = np.abs(a) ** 2
    return float(p[0]) if np.ndim(t) == 0 else p


def transition_matrix(decomp: SpectralDecomposition, t: float) -> np.ndarray:
    """Full matrix pi(t); column j is the distribution of a walk started at j."""
    return np.abs(propagator(decomp, t)) ** 2


def ipr(decomp: SpectralDecomposition, j: int, t):
    """IPR_j(t) = sum_i pi_ij(t)^2."""
    p = np.abs(_amplitudes_from(decomp, _node(decomp, j), t)) ** 2
    values = np.sum(p * p, axis=1)
    return float(values[0]) if np.ndim(t) == 0 else values


def ipr_of_state(psi) -> float:
    p = np.abs(np.asarray(psi)) ** 2
    return float(np.sum(p * p))


def probability_trajectory(decomp: SpectralDecomposition, j: int, t_grid) -> np.ndarray:
    """|psi_i(t)|^2 with shape (N, len(t_grid)) for a walk started at ``j``."""
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or np.any(np.diff(t) < 0):
        raise WalkError("t_grid must be a 1-D ascending array")
    return (np.abs(_amplitudes_from(decomp, _node(decomp, j), t)) ** 2).T


# --- long-time means -------------------------------------------------------


def _class_amplitudes(decomp: SpectralDecomposition, cols: np.ndarray) -> np.ndarray:
    """Projector entries (P_a)_{i j} for j in ``cols``; shape (N, len(cols), D)."""
    v = decomp.eigenvectors
    starts = np.array([c[0] for c in decomp.degeneracy])
    z = v[:, None, :] * v[cols][None, :, :]
    return np.add.reduceat(z, starts, axis=2)


def _column_blocks(n: int, width: int):
    per_col = max(1, 8 * n * max(width, 1))
    size = int(max(1, min(n, _BLOCK_BYTES // per_col)))
    for start in range(0, n, size):
        yield np.arange(start, min(n, start + size))


def _nonsingleton_pairs(decomp: SpectralDecomposition):
    gc = decomp.distinct_gaps
    sizes = gc.sizes
    keep = np.flatnonzero(sizes > 1)
    if keep.size == 0:
        return None
    idx = np.concatenate([np.arange(gc.starts[c], gc.starts[c] + sizes[c]) for c in keep])
    starts = np.concatenate(([0], np.cumsum(sizes[keep])[:-1]))
    return gc.first[idx], gc.second[idx], starts


def _longtime_kernel(decomp: SpectralDecomposition, want_ipr: bool):
    """Blocked evaluation of pi_bar and (optionally) every IPR_bar_j.

    With X_a = (P_a)_{ij} over distinct eigenvalues a, pi_ij(t) has constant
    term c0 = sum_a X_a^2 and cosine coefficient c_g = 2 sum_{(a,b) in g} X_a X_b
    per nonzero gap class g, so mean(pi_ij^2) = c0^2 + sum_g c_g^2 / 2.
    If every gap class were a single pair this is 2 s2^2 - s4 (s_k = sum_a X_a^k);
    classes with several pairs add their cross terms on top.
    """
    n = decomp.n
    pi_bar = np.empty((n, n))
    ipr_bar = np.zeros(n)
    extra = _nonsingleton_pairs(decomp) if want_ipr else None
    width = max(n, 0 if extra is None else len(extra[0]))
    for cols in _column_blocks(n, width):
        x = _class_amplitudes(decomp, cols)
        x2 = x * x
        s2 = x2.sum(axis=2)
        pi_bar[:, cols] = s2
        if not want_ipr:
            continue
        s4 = (x2 * x2).sum(axis=2)
        ipr_bar[cols] = (2.0 * s2 * s2 - s4).sum(axis=0)
        if extra is not None:
            fa, fb, starts = extra
            prod = x[:, :, fa] * x[:, :, fb]
            sums = np.add.reduceat(prod, starts, axis=2)
            ipr_bar[cols] += 2.0 * ((sums * sums).sum(axis=(0, 2)) - (prod * prod).sum(axis=(0, 2)))
    return pi_bar, ipr_bar


def longtime_transition_matrix(decomp: SpectralDecomposition) -> np.ndarray:
    """pi_bar_ij = sum over degeneracy classes of (P_a)_ij^2."""
    return _longtime_kernel(decomp, want_ipr=False)[0]


def longtime_ipr_all(decomp: SpectralDecomposition) -> np.ndarray:
    return _longtime_kernel(decomp, want_ipr=True)[1]


def longtime_ipr(decomp: SpectralDecomposition, j: int) -> float:
    col = np.array([_node(decomp, j)])
    x = _class_amplitudes(decomp, col)[:, 0, :]
    c0 = (x * x).sum(axis=1)
    gc = decomp.distinct_gaps
    total = float((c0 * c0).sum())
    if gc.n_classes:
        prod = 2.0 * x[:, gc.first] * x[:, gc.second]
        cg = np.add.reduceat(prod, gc.starts, axis=1)
        total += 0.5 * float((cg * cg).sum())
    return total


def ipr_gaps(ipr_bar) -> tuple[float, float]:
    """Absolute and relative gaps (max - min, (max - min) / min)."""
    v = np.asarray(ipr_bar, dtype=float)
    if v.size == 0:
        raise WalkError("ipr_bar is empty")
    lo, hi = float(v.min()), float(v.max())
    if lo <= 0:
        raise WalkError("relative gap undefined: minimum IPR is not positive")
    return hi - lo, (hi - lo) / lo


def longtime(decomp: SpectralDecomposition, warnings: list[str] | None = None) -> LongTimeResult:
    pi_bar, ipr_bar = _longtime_kernel(decomp, want_ipr=True)
    delta_abs, delta_rel = ipr_gaps(ipr_bar)
    notes = list(warnings or [])
    if decomp.chained or decomp.distinct_gaps.chained:
        notes.append("chained near-degeneracies merged by single linkage within tau")
    return LongTimeResult(pi_bar, ipr_bar, delta_abs, delta_rel, decomp.tau, notes)


# --- direct enumeration oracles (small N) ----------------------------------


def _pair_terms(decomp: SpectralDecomposition):
    v = decomp.eigenvectors
    n = decomp.n
    w = v[:, None, :] * v[None, :, :]  # w[i, j, m] = <i|e_m><e_m|j>
    m, k = np.triu_indices(n, 1)
    a_terms = w * w
    b_terms = 2.0 * w[:, :, m] * w[:, :, k]
    gaps = decomp.eigenvalues[k] - decomp.eigenvalues[m]
    return a_terms, b_terms, gaps


def longtime_transition_matrix_naive(decomp: SpectralDecomposition) -> np.ndarray:
    """Sum of A terms plus B terms over equal-eigenvalue pairs, enumerated directly."""
    a_terms, b_terms, gaps = _pair_terms(decomp)
    degenerate = np.abs(gaps) <= decomp.tau
    return a_terms.sum(axis=2) + b_terms[:, :, degenerate].sum(axis=2)


def longtime_ipr_naive(decomp: SpectralDecomposition, j: int) -> float:
    """Four-term A/B/C quadruplet sum with gap equalities tested pair by pair."""
    col = _node(decomp, j)
    a_terms, b_terms, gaps = _pair_terms(decomp)
    a = a_terms[:, col, :]
    b = b_terms[:, col, :]
    tau = decomp.tau
    degenerate = np.abs(gaps) <= tau
    # lambda_m - lambda_n == lambda_r - lambda_s  <=>  gap_mn == gap_rs
    same = np.abs(gaps[:, None] - gaps[None, :]) <= tau
    # lambda_m - lambda_n == lambda_s - lambda_r  <=>  gap_mn == -gap_rs
    opposite = np.abs(gaps[:, None] + gaps[None, :]) <= tau
    sum_a = a.sum(axis=1)
    sum_b = b[:, degenerate].sum(axis=1)
    c_same = 0.5 * np.einsum("ip,pq,iq->i", b, same, b)
    c_opp = 0.5 * np.einsum("ip,pq,iq->i", b, opposite, b)
    return float(np.sum(sum_a**2 + 2.0 * sum_a * sum_b + c_same + c_opp))


def time_average_oracle(
    decomp: SpectralDecomposition,
    observable: Callable[[np.ndarray], np.ndarray],
    T: float = 1e4,
    dt: float = 0.05,
    chunk: int = 4096,
):
    """(1/T) * trapezoid integral of ``observable`` over [0, T].

    ``observable`` maps a 1-D time array to values with leading axis over
    time. Converges to the long-time mean with an O(1/T) bias.
    """
    if T <= 0 or dt <= 0:
        raise WalkError("T and dt must be positive")
    steps = int(round(T / dt))
    h = T / steps
    total = None
    for start in range(0, steps + 1, chunk):
        k = np.arange(start, min(steps + 1, start + chunk))
        vals = np.asarray(observable(k * h), dtype=float)
        weights = np.where((k == 0) | (k == steps), 0.5, 1.0)
        part = np.tensordot(weights, vals, axes=(0, 0))
        total = part if total is None else total + part
    return total * h / T


def pi_observable(decomp: SpectralDecomposition, i: int | None = None, j: int | None = None):
    """Observable for the oracle: pi_ij(t), or the whole pi(t) when i and j are None."""
    if i is None and j is None:
        v = decomp.eigenvectors
        lam = decomp.eigenvalues

        def full(t):
            phases = np.exp(-1j * np.outer(t, lam))
            u = np.einsum("im,tm,jm->tij", v, phases, v)
            return np.abs(u) ** 2

        return full
    return lambda t: transition_probability(decomp, i, j, t)


def ipr_observable(decomp: SpectralDecomposition, j: int):
    return lambda t: ipr(decomp, j, t)
