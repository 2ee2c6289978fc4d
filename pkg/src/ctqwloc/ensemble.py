"""Seeded multi-instantiation IPR curves.

Run ``r`` uses the seed ``mix_seed(master_seed, r)`` (SplitMix64 finalizer
applied to ``master_seed + r * golden_gamma``), so runs are independent of
worker scheduling and results are reduced in run order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import DegenerateGraphError, hamiltonian
from .netgen import GeneratorSpec, generate
from .spectral import eig_sym

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
# give up on a run after this many consecutive unusable graphs
MAX_REGENERATIONS = 1000


class EnsembleError(ValueError):
    pass


def mix_seed(master_seed: int, index: int) -> int:
    """SplitMix64 output for state ``master_seed + (index + 1) * gamma``."""
    z = (int(master_seed) + (int(index) + 1) * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def default_t_grid(t_max: float = 100.0, dt: float = 0.1) -> np.ndarray:
    steps = int(round(t_max / dt))
    return np.arange(steps + 1) * (t_max / steps)


@dataclass
class EnsembleCurve:
    t_grid: np.ndarray
    mean_ipr: np.ndarray
    stderr: np.ndarray
    n_runs: int
    spec: GeneratorSpec
    start_node: int
    regenerations: int = 0
    # per-run IPR curves, shape (n_runs, len(t_grid)); not serialized
    runs: np.ndarray | None = field(default=None, repr=False)


def _ipr_curve(graph, start: int, t: np.ndarray) -> np.ndarray:
    dec = eig_sym(hamiltonian(graph))
    v = dec.eigenvectors
    amp = (np.exp(-1j * np.outer(t, dec.eigenvalues)) * v[start - 1]) @ v.T
    p = amp.real**2 + amp.imag**2
    out = np.sum(p * p, axis=1)
    # exp(-iH*0) is the identity; avoid V V^T rounding at t = 0
    out[t == 0] = 1.0
    return out


def _run_block(args):
    spec, master_seed, indices, start, t = args
    curves = np.empty((len(indices), t.size))
    regenerations = 0
    # seeds for run r are drawn from the stream r, r + n_total, r + 2 n_total, ...
    # so a regeneration never collides with another run's seed
    for row, (r, n_total) in enumerate(indices):
        attempt = 0
        while True:
            seed = mix_seed(master_seed, r + attempt * n_total) if spec.stochastic else None
            try:
                curves[row] = _ipr_curve(generate(spec, seed), start, t)
                break
            except DegenerateGraphError:
                attempt += 1
                regenerations += 1
                if attempt > MAX_REGENERATIONS:
                    raise EnsembleError(f"run {r}: no usable graph after {attempt} attempts")
    return curves, regenerations


def ensemble_mean_ipr(
    spec: GeneratorSpec,
    n_runs: int,
    master_seed: int,
    start_node: int,
    t_grid,
    workers: int = 1,
) -> EnsembleCurve:
    """Sample mean and standard error of IPR_start(t) over seeded instantiations.

    Deterministic models always use a single run.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0 or np.any(np.diff(t) < 0):
        raise EnsembleError("t_grid must be a non-empty ascending 1-D array")
    if not 1 <= start_node <= spec.n_nodes:
        raise EnsembleError(f"start node {start_node} out of range [1, {spec.n_nodes}]")
    if not spec.stochastic:
        n_runs = 1
    if n_runs < 1:
        raise EnsembleError("n_runs must be >= 1")

    indices = [(r, n_runs) for r in range(n_runs)]
    workers = max(1, min(int(workers), n_runs))
    chunks = [indices[k::workers] for k in range(workers)]
    jobs = [(spec, master_seed, c, start_node, t) for c in chunks]
    if workers == 1:
        results = [_run_block(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_block, jobs))

    runs = np.empty((n_runs, t.size))
    regenerations = 0
    for k, (curves, regen) in enumerate(results):
        runs[k::workers] = curves
        regenerations += regen
    if regenerations:
        log.info("%s: regenerated %d graphs", spec.model, regenerations)

    mean = runs.mean(axis=0)
    if n_runs > 1:
        stderr = runs.std(axis=0, ddof=1) / np.sqrt(n_runs)
    else:
        stderr = np.zeros_like(mean)
    return EnsembleCurve(t, mean, stderr, n_runs, spec, start_node, regenerations, runs)


def _tail_slice(n_points: int, tail_fraction: float) -> slice:
    if not 0 < tail_fraction <= 1:
        raise EnsembleError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    if n_points == 0:
        raise EnsembleError("empty time grid")
    k = max(1, int(round(tail_fraction * n_points)))
    return slice(n_points - k, n_points)


def plateau(curve: EnsembleCurve, tail_fraction: float = 0.2) -> float:
    """Mean of ``mean_ipr`` over the trailing ``tail_fraction`` of the grid."""
    sl = _tail_slice(len(curve.mean_ipr), tail_fraction)
    return float(np.mean(curve.mean_ipr[sl]))


def plateau_stderr(curve: EnsembleCurve, tail_fraction: float = 0.2) -> float:
    """Standard error of the plateau across runs (0 for a single run)."""
    if curve.runs is None or curve.n_runs < 2:
        return 0.0
    sl = _tail_slice(curve.runs.shape[1], tail_fraction)
    per_run = curve.runs[:, sl].mean(axis=1)
    return float(per_run.std(ddof=1) / np.sqrt(curve.n_runs))
