import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctqwloc.graph import hamiltonian
from ctqwloc.spectral import SpectralError, degeneracy_classes, eig_sym, gap_classes
from ctqwloc.verify import random_connected_graph

D1_SPECTRUM = [0, 0.75, 0.75, 1.5, 1.5, 1.5]


def test_eig_k3(k3):
    assert np.allclose(eig_sym(hamiltonian(k3)).eigenvalues, [0, 1.5, 1.5], atol=1e-12)


def test_eig_d1(d1_decomp):
    assert np.allclose(d1_decomp.eigenvalues, D1_SPECTRUM, atol=1e-9)


def test_eig_path2(path2):
    dec = eig_sym(hamiltonian(path2))
    assert np.allclose(dec.eigenvalues, [0, 2], atol=1e-14)
    s = 1 / np.sqrt(2)
    assert np.allclose(dec.eigenvectors, [[s, s], [s, -s]], atol=1e-14)


def test_sign_convention_deterministic(small_graphs):
    for g in small_graphs:
        a = eig_sym(hamiltonian(g))
        b = eig_sym(hamiltonian(g).matrix.copy())
        assert np.array_equal(a.eigenvectors, b.eigenvectors)
        for m in range(g.n_nodes):
            col = a.eigenvectors[:, m]
            assert col[np.flatnonzero(np.abs(col) > 1e-10)[0]] > 0


def test_rejects_nonsymmetric():
    with pytest.raises(SpectralError):
        eig_sym(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(SpectralError):
        eig_sym(np.ones((2, 3)))


def test_reconstruction_and_orthonormality():
    rng = np.random.default_rng(7)
    for _ in range(100):
        g = random_connected_graph(rng, int(rng.integers(2, 51)))
        h = hamiltonian(g)
        dec = eig_sym(h)
        v = dec.eigenvectors
        assert np.max(np.abs(dec.reconstruct() - h.matrix)) <= 1e-8
        assert np.max(np.abs(v.T @ v - np.eye(g.n_nodes))) <= 1e-10
        assert abs(dec.eigenvalues[0]) <= 1e-10
        ground = np.sqrt(g.degrees) / np.linalg.norm(np.sqrt(g.degrees))
        assert np.max(np.abs(v[:, 0] - ground)) <= 1e-8


def test_degeneracy_classes_d1():
    classes = degeneracy_classes(D1_SPECTRUM, 1e-8)
    assert [len(c) for c in classes] == [1, 2, 3]
    assert [c.tolist() for c in classes] == [[0], [1, 2], [3, 4, 5]]


def test_degeneracy_singletons():
    assert len(degeneracy_classes(np.linspace(0, 2, 10), 1e-8)) == 10
    assert degeneracy_classes([], 1e-8) == []
    with pytest.raises(SpectralError):
        degeneracy_classes([1.0, 0.0])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_degeneracy_stable_under_small_perturbation(seed):
    tau = 1e-8
    rng = np.random.default_rng(seed)
    base = np.sort(np.repeat(rng.choice(np.linspace(0, 2, 41), size=6, replace=False), rng.integers(1, 4, size=6)))
    noisy = np.sort(base + rng.uniform(-tau / 10, tau / 10, size=base.size))
    a = [c.tolist() for c in degeneracy_classes(base, tau)]
    b = [c.tolist() for c in degeneracy_classes(noisy, tau)]
    assert a == b


def _enumerate_gaps(values):
    """Brute force: exact-fraction gaps of every pair m < n, counted."""
    fr = [Fraction(v).limit_denominator(1000) for v in values]
    return Counter(fr[n] - fr[m] for m, n in itertools.combinations(range(len(fr)), 2))


def test_gap_classes_d1_against_enumeration():
    oracle = _enumerate_gaps(D1_SPECTRUM)
    assert oracle == {Fraction(0): 4, Fraction(3, 4): 8, Fraction(3, 2): 3}
    gc = gap_classes(D1_SPECTRUM, 1e-8)
    got = {Fraction(v).limit_denominator(1000): int(s) for v, s in zip(gc.values, gc.sizes)}
    assert got == oracle
    zero_pairs = set(gc.pairs(0))
    assert zero_pairs == {(1, 2), (3, 4), (3, 5), (4, 5)}


def test_gap_classes_trivial():
    assert gap_classes([0.3], 1e-8).n_classes == 0
    gc = gap_classes([0.0, 1.0], 1e-8)
    assert gc.n_classes == 1 and gc.pairs(0) == [(0, 1)]


def test_gap_classes_cover_all_pairs(small_graphs):
    for g in small_graphs:
        dec = eig_sym(hamiltonian(g))
        gc = dec.gaps
        n = g.n_nodes
        assert gc.sizes.sum() == n * (n - 1) // 2
        pairs = [p for c in range(gc.n_classes) for p in gc.pairs(c)]
        assert len(set(pairs)) == len(pairs)
        # zero-gap group is exactly the within-degeneracy-class pairs
        within = {(int(a), int(b)) for c in dec.degeneracy for a, b in itertools.combinations(c, 2)}
        zero = set(gc.pairs(0)) if gc.n_classes and gc.values[0] <= dec.tau else set()
        assert zero == within


def test_chained_flag():
    values = [0.0, 0.9e-8, 1.8e-8, 2.7e-8]
    gc = gap_classes(values, 1e-8)
    assert gc.chained and gc.n_classes == 1
    assert not gap_classes([0.0, 0.5, 1.5], 1e-8).chained
    dec = eig_sym(np.diag(values))
    assert dec.chained and len(dec.degeneracy) == 1
