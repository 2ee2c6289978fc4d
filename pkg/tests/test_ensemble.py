import numpy as np
import pytest

from conftest import decompose
from ctqwloc import ensemble, qwalk
from ctqwloc.ensemble import EnsembleCurve, EnsembleError, ensemble_mean_ipr, mix_seed, plateau, plateau_stderr
from ctqwloc.graph import DegenerateGraphError
from ctqwloc.netgen import GeneratorSpec

T_SHORT = ensemble.default_t_grid(10.0, 0.5)


def test_mix_seed_is_splitmix64():
    # reference outputs of SplitMix64 seeded with 0
    assert mix_seed(0, 0) == 0xE220A8397B1DCDAF
    assert mix_seed(0, 1) == 0x6E789E6AA1B965F4
    assert len({mix_seed(7, r) for r in range(10_000)}) == 10_000


def test_default_grid():
    t = ensemble.default_t_grid()
    assert t.size == 1001 and t[0] == 0 and t[-1] == 100.0


def test_ring_is_single_run():
    curve = ensemble_mean_ipr(GeneratorSpec("ring", n=100), 1000, 1, 50, ensemble.default_t_grid())
    assert curve.n_runs == 1
    assert curve.mean_ipr[0] == 1.0
    assert np.all(curve.stderr == 0)
    # the walk spreads around the ring and never refocuses to a single node
    assert curve.mean_ipr[curve.t_grid >= 20].max() < 0.5
    assert plateau(curve) < 0.1


def test_nws_curve_invariants():
    spec = GeneratorSpec("nws", n=40, p=0.1)
    curve = ensemble_mean_ipr(spec, 30, 5, 20, T_SHORT)
    assert curve.mean_ipr[0] == 1.0
    assert np.all(curve.mean_ipr >= 1 / 40) and np.all(curve.mean_ipr <= 1)
    assert np.all(curve.stderr >= 0)
    assert curve.runs.shape == (30, T_SHORT.size)


def test_workers_do_not_change_result():
    spec = GeneratorSpec("holme_kim", n=40, p_triangle=0.5)
    a = ensemble_mean_ipr(spec, 9, 3, 20, T_SHORT, workers=1)
    b = ensemble_mean_ipr(spec, 9, 3, 20, T_SHORT, workers=3)
    assert np.array_equal(a.mean_ipr, b.mean_ipr)
    assert np.array_equal(a.stderr, b.stderr)


def test_run_seeds_match_direct_generation():
    spec = GeneratorSpec("nws", n=30, p=0.3)
    curve = ensemble_mean_ipr(spec, 4, 77, 10, T_SHORT)
    from ctqwloc.netgen import generate

    for r in range(4):
        dec = decompose(generate(spec, mix_seed(77, r)))
        assert np.allclose(curve.runs[r][1:], qwalk.ipr(dec, 10, T_SHORT[1:]), atol=1e-12)


def test_regeneration_counted(monkeypatch):
    calls = []
    real = ensemble.generate

    def flaky(spec, seed):
        calls.append(seed)
        if len(calls) % 3 == 1:
            raise DegenerateGraphError(1, "node 1 has degree 0")
        return real(spec, seed)

    monkeypatch.setattr(ensemble, "generate", flaky)
    curve = ensemble_mean_ipr(GeneratorSpec("nws", n=20, p=0.2), 3, 1, 5, T_SHORT)
    # calls 1 and 4 fail: one retry each for runs 0 and 2
    assert curve.regenerations == 2
    assert len(set(calls)) == len(calls)


def test_validation():
    with pytest.raises(EnsembleError):
        ensemble_mean_ipr(GeneratorSpec("nws", n=20, p=0.2), 3, 1, 21, T_SHORT)
    with pytest.raises(EnsembleError):
        ensemble_mean_ipr(GeneratorSpec("nws", n=20, p=0.2), 0, 1, 2, T_SHORT)
    with pytest.raises(EnsembleError):
        ensemble_mean_ipr(GeneratorSpec("nws", n=20, p=0.2), 2, 1, 2, [1.0, 0.0])


def _curve(values, t=None):
    values = np.asarray(values, dtype=float)
    t = np.arange(values.size, dtype=float) if t is None else t
    return EnsembleCurve(t, values, np.zeros_like(values), 1, GeneratorSpec("ring", n=3), 1)


def test_plateau_basics():
    assert plateau(_curve(np.full(50, 0.3))) == pytest.approx(0.3)
    v = np.linspace(0, 1, 11)
    assert plateau(_curve(v), 1.0) == pytest.approx(v.mean())
    assert plateau(_curve(v), 0.2) == pytest.approx(np.mean(v[-2:]))
    with pytest.raises(EnsembleError):
        plateau(_curve(v), 0.0)
    with pytest.raises(EnsembleError):
        plateau(_curve([]), 0.5)


def test_plateau_path2_closed_form(path2):
    # cos^4 + sin^4 = 3/4 + cos(4t)/4 averages to 3/4
    t = np.linspace(0, 1000, 100_001)
    curve = _curve(qwalk.ipr(decompose(path2), 1, t), t)
    assert plateau(curve, 0.2) == pytest.approx(0.75, abs=1e-2)


def test_plateau_stderr():
    spec = GeneratorSpec("nws", n=30, p=0.3)
    curve = ensemble_mean_ipr(spec, 12, 2, 5, T_SHORT)
    per_run = curve.runs[:, -4:].mean(axis=1)
    assert plateau_stderr(curve, 0.2) == pytest.approx(per_run.std(ddof=1) / np.sqrt(12))
    assert plateau_stderr(_curve(np.ones(5))) == 0.0
