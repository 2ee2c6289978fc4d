"""Acceptance checks, grouped into suites and reported one line per criterion.

Suites: ``golden`` (exact small-network values, structure, localization,
gap curves), ``properties`` (oracle equivalence, dynamics invariants,
determinism) and ``ensemble`` (sample-mean IPR plateaus on N = 100 models).
"""

from __future__ import annotations

import filecmp
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import qwalk
from .ensemble import default_t_grid, ensemble_mean_ipr, plateau, plateau_stderr
from .graph import Graph, build_graph, hamiltonian, is_connected, mean_clustering
from .netgen import GeneratorSpec, recursive_triangle, ring
from .spectral import eig_sym

SUITES = ("golden", "properties", "ensemble")
PROPERTY_SEED = 20240611
ENSEMBLE_SEED = 20240612

D1_PI_BAR = np.array(
    [
        [11, 2, 2, 4, 4, 4],
        [2, 11, 2, 4, 4, 4],
        [2, 2, 11, 4, 4, 4],
        [4, 4, 4, 11, 2, 2],
        [4, 4, 4, 2, 11, 2],
        [4, 4, 4, 2, 2, 11],
    ]
) / 27.0
D1_SPECTRUM = np.array([0, 0.75, 0.75, 1.5, 1.5, 1.5])
D1_IPR = np.array([269, 269, 269, 301, 301, 301]) / 729.0
MEAN_CLUSTERING = {1: 0.75, 2: 17 / 24, 3: 16.75 / 24}


@dataclass
class CheckResult:
    id: str
    name: str
    passed: bool
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.id} {self.name} ({self.seconds:.2f}s)"


def _timed(fn: Callable[[], tuple[bool, dict]], cid: str, name: str, limit: float | None = None):
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    if limit is not None:
        detail["runtime_limit_s"] = limit
        ok = ok and elapsed < limit
    return CheckResult(cid, name, bool(ok), elapsed, detail)


def decompose(g: Graph, tau: float = 1e-8):
    return eig_sym(hamiltonian(g), tau)


def random_connected_graph(rng: np.random.Generator, n: int, p: float | None = None) -> Graph:
    """G(n, p) conditioned on connectivity by rejection."""
    while True:
        prob = rng.uniform(0.25, 0.7) if p is None else p
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < prob]
        g = build_graph(n, pairs)
        if is_connected(g):
            return g


# --- golden ----------------------------------------------------------------


def check_d1_golden() -> CheckResult:
    def run():
        dec = decompose(recursive_triangle(1)[0])
        res = qwalk.longtime(dec)
        err_pi = float(np.max(np.abs(res.pi_bar - D1_PI_BAR)))
        err_spec = float(np.max(np.abs(dec.eigenvalues - D1_SPECTRUM)))
        err_ipr = float(np.max(np.abs(res.ipr_bar - D1_IPR)))
        ok = max(err_pi, err_spec, err_ipr) <= 1e-9
        return ok, {"max_err_pi_bar": err_pi, "max_err_spectrum": err_spec, "max_err_ipr_bar": err_ipr}

    return _timed(run, "1", "d=1 exact pi_bar, spectrum and IPR_bar", limit=1.0)


def check_triangle_structure() -> CheckResult:
    def run():
        counts_ok = True
        for d in range(9):
            g = recursive_triangle(d)[0]
            counts_ok &= g.n_nodes == 3 * 2**d and g.n_edges == 3 * (2 ** (d + 1) - 1)
        clust = {d: mean_clustering(recursive_triangle(d)[0]) for d in (1, 2, 3, 8)}
        small_ok = all(abs(clust[d] - v) <= 1e-10 for d, v in MEAN_CLUSTERING.items())
        big_ok = 0.685 <= clust[8] <= 0.695
        return counts_ok and small_ok and big_ok, {
            "counts_ok": counts_ok,
            "mean_clustering": clust,
        }

    return _timed(run, "2", "recursive-triangle N, M and mean clustering")


def _argmax_set(values: np.ndarray, tol: float = 1e-9) -> list[int]:
    return [int(i) + 1 for i in np.flatnonzero(values >= values.max() - tol)]


def _diagonal_dominant(pi_bar: np.ndarray, nodes) -> bool:
    for j in nodes:
        col = pi_bar[:, j - 1]
        off = np.delete(col, j - 1)
        if not col[j - 1] > off.max():
            return False
    return True


def check_localized_nodes() -> CheckResult:
    def run():
        detail = {}
        ok = True
        for d, expected in ((2, [4, 5, 6]), (3, list(range(7, 13)))):
            res = qwalk.longtime(decompose(recursive_triangle(d)[0]))
            top = _argmax_set(res.ipr_bar)
            detail[f"argmax_d{d}"] = top
            ok &= top == expected
            ok &= _diagonal_dominant(res.pi_bar, top)
        res6 = qwalk.longtime(decompose(recursive_triangle(6)[0]))
        ipr61 = float(res6.ipr_bar[60])
        top6 = _argmax_set(res6.ipr_bar)
        dominant = _diagonal_dominant(res6.pi_bar, sorted(set(top6) | {61}))
        detail.update(ipr61=ipr61, argmax_d6=top6, diagonal_dominance_d6=dominant)
        ok &= abs(ipr61 - 0.11) <= 0.01 and dominant
        return ok, detail

    return _timed(run, "3", "localized nodes (d=2,3) and d=6 node 61", limit=60.0)


def gap_table(max_depth: int = 8) -> dict[int, tuple[float, float]]:
    out = {}
    for d in range(1, max_depth + 1):
        res = qwalk.longtime(decompose(recursive_triangle(d)[0]))
        out[d] = (res.delta_abs, res.delta_rel)
    return out


def check_gap_curves(table=None) -> list[CheckResult]:
    t0 = time.perf_counter()
    table = table or gap_table(8)
    elapsed = time.perf_counter() - t0
    depths = sorted(table)
    da = np.array([table[d][0] for d in depths])
    dr = np.array([table[d][1] for d in depths])
    results = []
    mono = bool(np.all(np.diff(da) > 0) and np.all(np.diff(dr) > 0))
    results.append(
        CheckResult("4a", "gaps strictly increase over d=1..8", mono, elapsed, {"delta_abs": da, "delta_rel": dr})
    )
    exact_abs = float(Fraction(32, 729))
    exact_rel = float(Fraction(32, 269))
    ok1 = abs(da[0] - exact_abs) <= 1e-9 and abs(dr[0] - exact_rel) <= 1e-9
    results.append(
        CheckResult("4b", "d=1 gaps equal 32/729 and 32/269", ok1, 0.0, {"delta_abs": da[0], "delta_rel": dr[0]})
    )
    results.append(
        CheckResult(
            "4c",
            "d=8 absolute gap 0.10 +- 0.02 (runtime < 10 min)",
            abs(da[-1] - 0.10) <= 0.02 and elapsed < 600,
            elapsed,
            {"delta_abs": da[-1], "runtime_s": elapsed},
        )
    )
    results.append(
        CheckResult("4d", "d=8 relative gap 15.3 +- 1.0", abs(dr[-1] - 15.3) <= 1.0, 0.0, {"delta_rel": dr[-1]})
    )
    return results


def golden_suite() -> list[CheckResult]:
    return [
        check_d1_golden(),
        check_triangle_structure(),
        check_localized_nodes(),
        *check_gap_curves(),
    ]


# --- properties ------------------------------------------------------------


def check_oracle_equivalence(n_graphs: int = 20, seed: int = PROPERTY_SEED, T: float = 1e4, dt: float = 0.05):
    def run():
        rng = np.random.default_rng(seed)
        worst = {"pi_naive": 0.0, "ipr_naive": 0.0, "pi_oracle": 0.0, "ipr_oracle": 0.0}
        for _ in range(n_graphs):
            g = random_connected_graph(rng, int(rng.integers(3, 13)))
            dec = decompose(g)
            pi_fast = qwalk.longtime_transition_matrix(dec)
            ipr_fast = qwalk.longtime_ipr_all(dec)
            pi_naive = qwalk.longtime_transition_matrix_naive(dec)
            ipr_naive = np.array([qwalk.longtime_ipr_naive(dec, j) for j in g.labels])
            pi_orc = qwalk.time_average_oracle(dec, qwalk.pi_observable(dec), T, dt)
            ipr_orc = np.array(
                [qwalk.time_average_oracle(dec, qwalk.ipr_observable(dec, j), T, dt) for j in g.labels]
            )
            worst["pi_naive"] = max(worst["pi_naive"], float(np.max(np.abs(pi_fast - pi_naive))))
            worst["ipr_naive"] = max(worst["ipr_naive"], float(np.max(np.abs(ipr_fast - ipr_naive))))
            worst["pi_oracle"] = max(worst["pi_oracle"], float(np.max(np.abs(pi_fast - pi_orc))))
            worst["ipr_oracle"] = max(worst["ipr_oracle"], float(np.max(np.abs(ipr_fast - ipr_orc))))
        ok = (
            worst["pi_naive"] <= 1e-10
            and worst["ipr_naive"] <= 1e-10
            and worst["pi_oracle"] <= 5e-3
            and worst["ipr_oracle"] <= 5e-3
        )
        return ok, {"worst_abs_error": worst, "n_graphs": n_graphs, "seed": seed, "T": T, "dt": dt}

    return _timed(run, "5", "long-time closed forms vs enumeration and time average")


def rk4_evolve(h: np.ndarray, psi0: np.ndarray, t: float, step: float = 1e-4) -> np.ndarray:
    """Classical RK4 integration of dpsi/dt = -i H psi (batched over leading axes)."""
    steps = int(round(t / step))
    step = t / steps
    psi = np.asarray(psi0, dtype=complex)

    def f(y):
        return -1j * np.einsum("...ij,...j->...i", h, y)

    for _ in range(steps):
        k1 = f(psi)
        k2 = f(psi + 0.5 * step * k1)
        k3 = f(psi + 0.5 * step * k2)
        k4 = f(psi + step * k3)
        psi = psi + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def check_dynamics(n_cases: int = 100, seed: int = PROPERTY_SEED + 1) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = dict(norm=0.0, stochastic=0.0, symmetry=0.0, ipr_low=0.0, ipr_high=0.0, ode=0.0, ring=0.0)
        hs, psis, spectral_states = [], [], []
        for _ in range(n_cases):
            g = random_connected_graph(rng, int(rng.integers(3, 31)))
            dec = decompose(g)
            t = float(rng.uniform(0, 50))
            psi0 = rng.normal(size=g.n_nodes) + 1j * rng.normal(size=g.n_nodes)
            psi0 /= np.linalg.norm(psi0)
            worst["norm"] = max(worst["norm"], abs(qwalk.evolve(dec, psi0, t).norm - 1))
            pi_t = qwalk.transition_matrix(dec, t)
            worst["stochastic"] = max(worst["stochastic"], float(np.max(np.abs(pi_t.sum(axis=0) - 1))))
            worst["symmetry"] = max(worst["symmetry"], float(np.max(np.abs(pi_t - pi_t.T))))
            iprs = (pi_t**2).sum(axis=0)
            worst["ipr_low"] = max(worst["ipr_low"], float(np.max(1.0 / g.n_nodes - iprs)))
            worst["ipr_high"] = max(worst["ipr_high"], float(np.max(iprs - 1.0)))

            g20 = random_connected_graph(rng, 20)
            dec20 = decompose(g20)
            phi = rng.normal(size=20) + 1j * rng.normal(size=20)
            phi /= np.linalg.norm(phi)
            hs.append(hamiltonian(g20).matrix)
            psis.append(phi)
            spectral_states.append(qwalk.evolve(dec20, phi, 1.0).values)

            n = int(rng.integers(3, 41))
            rdec = decompose(ring(n))
            tr = float(rng.uniform(0, 50))
            pr = qwalk.transition_matrix(rdec, tr)
            k = int(rng.integers(1, n))
            shifted = np.roll(np.roll(pr, k, axis=0), k, axis=1)
            worst["ring"] = max(worst["ring"], float(np.max(np.abs(shifted - pr))))
        ode = rk4_evolve(np.array(hs), np.array(psis), 1.0, 1e-4)
        worst["ode"] = float(np.max(np.abs(ode - np.array(spectral_states))))
        ok = (
            worst["norm"] <= 1e-10
            and worst["stochastic"] <= 1e-10
            and worst["symmetry"] <= 1e-12
            and worst["ipr_low"] <= 1e-12
            and worst["ipr_high"] <= 1e-12
            and worst["ode"] <= 1e-6
            and worst["ring"] <= 1e-10
        )
        return ok, {"worst": worst, "n_cases": n_cases, "seed": seed}

    return _timed(run, "6", "dynamics invariants and spectral-vs-ODE agreement")


def check_determinism() -> CheckResult:
    from .cli import main

    commands = [
        ["netgen", "--model", "nws", "--n", "100", "--p", "0.1", "--seed", "7", "--out", "{d}/g.edges"],
        ["netgen", "--model", "kleinberg", "--n", "60", "--q", "2", "--alpha", "2", "--seed", "7", "--out", "{d}/k.edges"],
        ["netgen", "--model", "holme-kim", "--n", "80", "--p-triangle", "0.5", "--seed", "7", "--out", "{d}/h.edges"],
        [
            "ensemble", "--model", "nws", "--n", "30", "--p", "0.2", "--runs", "8", "--seed", "11",
            "--start", "5", "--t-max", "5", "--dt", "0.5", "--out", "{d}/curve.csv", "--summary", "{d}/summary.json",
        ],
    ]

    def run():
        with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
            for argv in commands:
                for d in (a, b):
                    status = main([x.format(d=d) for x in argv])
                    if status != 0:
                        return False, {"failed_command": argv[0]}
            names = sorted(p.name for p in Path(a).iterdir())
            match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
            return not mismatch and not errors and len(match) == len(names), {
                "files": names,
                "mismatch": mismatch,
            }

    return _timed(run, "8", "stochastic commands are byte-reproducible")


def properties_suite() -> list[CheckResult]:
    return [check_oracle_equivalence(), check_dynamics(), check_determinism()]


# --- ensemble ----------------------------------------------------------------


def ensemble_plateaus(
    n_runs: int = 1000,
    seed: int = ENSEMBLE_SEED,
    workers: int = 1,
    tail: float = 0.2,
    t_max: float = 100.0,
    dt: float = 0.1,
) -> dict[str, tuple[float, float]]:
    """Plateau and its standard error for every configuration used in the checks."""
    t = default_t_grid(t_max, dt)
    configs = {f"nws p={p}": GeneratorSpec("nws", n=100, p=p) for p in (0.01, 0.02, 0.05, 1.0)}
    for alpha in (2, 3):
        for q in (1, 2, 3, 4):
            configs[f"kleinberg alpha={alpha} q={q}"] = GeneratorSpec("kleinberg_ring", n=100, q=q, alpha=alpha)
    for pt in (0.0, 0.25, 0.5, 0.75, 1.0):
        configs[f"holme_kim p'={pt}"] = GeneratorSpec("holme_kim", n=100, p_triangle=pt)
    out = {}
    for key, spec in configs.items():
        curve = ensemble_mean_ipr(spec, n_runs, seed, 50, t, workers=workers)
        out[key] = (plateau(curve, tail), plateau_stderr(curve, tail))
    return out


def check_ensemble(n_runs: int = 1000, seed: int = ENSEMBLE_SEED, workers: int = 1) -> list[CheckResult]:
    t0 = time.perf_counter()
    pl = ensemble_plateaus(n_runs, seed, workers)
    elapsed = time.perf_counter() - t0
    val = {k: v[0] for k, v in pl.items()}
    se = {k: v[1] for k, v in pl.items()}
    meta = {"n_runs": n_runs, "seed": seed, "runtime_s": elapsed}

    def pick(prefix):
        return {k: v for k, v in val.items() if k.startswith(prefix)}

    nws_vals = pick("nws")
    k2q1 = val["kleinberg alpha=2 q=1"]
    k2q4 = val["kleinberg alpha=2 q=4"]
    k3 = pick("kleinberg alpha=3")
    hk = [val[f"holme_kim p'={p}"] for p in (0.0, 0.25, 0.5, 0.75, 1.0)]
    hk_se = [se[f"holme_kim p'={p}"] for p in (0.0, 0.25, 0.5, 0.75, 1.0)]
    hk_mono = all(hk[i + 1] >= hk[i] - max(hk_se[i], hk_se[i + 1]) for i in range(4))
    return [
        CheckResult("7a", "NWS plateaus in [0.015, 0.035]", all(0.015 <= v <= 0.035 for v in nws_vals.values()), elapsed, {**meta, "plateaus": nws_vals}),
        CheckResult("7b", "Kleinberg alpha=2 q=1 plateau 0.05 +- 0.015", abs(k2q1 - 0.05) <= 0.015, 0.0, {"plateau": k2q1}),
        CheckResult("7c", "Kleinberg alpha=2 plateau(q=1) > plateau(q=4)", k2q1 > k2q4, 0.0, {"q1": k2q1, "q4": k2q4}),
        CheckResult("7d", "Kleinberg alpha=3 plateaus in [0.04, 0.07]", all(0.04 <= v <= 0.07 for v in k3.values()), 0.0, {"plateaus": k3}),
        CheckResult("7e", "Holme-Kim p'=1 plateau in [0.08, 0.12]", 0.08 <= hk[-1] <= 0.12, 0.0, {"plateau": hk[-1]}),
        CheckResult("7f", "Holme-Kim plateau nondecreasing in p' within 1 s.e.", hk_mono, 0.0, {"plateaus": hk, "stderr": hk_se}),
        CheckResult("7g", "ensemble runtime < 15 min", elapsed < 900, elapsed, meta),
    ]


def run_suites(suites=("golden", "properties"), n_runs: int = 1000, workers: int = 1) -> list[CheckResult]:
    results: list[CheckResult] = []
    for suite in suites:
        if suite == "golden":
            results += golden_suite()
        elif suite == "properties":
            results += properties_suite()
        elif suite == "ensemble":
            results += check_ensemble(n_runs=n_runs, workers=workers)
        else:
            raise ValueError(f"unknown suite {suite!r}")
    return results


def report(results: list[CheckResult], suites) -> dict:
    return {
        "suites": list(suites),
        "passed": all(r.passed for r in results),
        "seeds": {"properties": PROPERTY_SEED, "ensemble": ENSEMBLE_SEED},
        "checks": [
            {"id": r.id, "name": r.name, "passed": r.passed, "seconds": r.seconds, "detail": r.detail}
            for r in results
        ],
    }
