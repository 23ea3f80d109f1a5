import numpy as np
import pytest

from cpdp_bench import kernels
from cpdp_bench.kernels import _pykernels

from helpers import knn_brute, sq_dists_brute, tomek_links_brute


def _fixtures(rng, count=20):
    out = []
    for _ in range(count):
        na = int(rng.integers(2, 60))
        nb = int(rng.integers(2, 80))
        p = int(rng.integers(1, 21))
        a = rng.normal(size=(na, p))
        b = rng.normal(size=(nb, p))
        out.append((a, b))
    # duplicate-heavy integer fixture to force exact distance ties
    grid = rng.integers(0, 3, size=(40, 4)).astype(float)
    out.append((grid, grid.copy()))
    return out


def test_pairwise_matches_bruteforce(rng):
    for a, b in _fixtures(rng):
        d = kernels.pairwise_sq_dists(a, b)
        assert np.allclose(d, sq_dists_brute(a, b), rtol=1e-12, atol=1e-12)
        assert (d >= 0).all()


def test_knn_matches_bruteforce_with_ties(rng):
    for a, b in _fixtures(rng):
        k = int(rng.integers(1, b.shape[0] + 2))
        assert np.array_equal(kernels.knn_indices(a, b, k), knn_brute(a, b, k))


def test_knn_self_exclusion(rng):
    x = rng.normal(size=(30, 5))
    idx = np.arange(30)
    got = kernels.knn_indices(x, x, 3, exclude=idx)
    assert (got != idx[:, None]).all()
    assert np.array_equal(got, knn_brute(x, x, 3, exclude=idx))


def test_knn_k_clamped():
    x = np.array([[0.0], [1.0], [2.0]])
    assert kernels.knn_indices(x, x, 10).shape == (3, 3)
    assert kernels.knn_indices(x, x, 10, exclude=np.arange(3)).shape == (3, 2)


def test_tomek_mask_matches_bruteforce(rng):
    for _ in range(25):
        n = int(rng.integers(4, 80))
        p = int(rng.integers(1, 8))
        x = rng.normal(size=(n, p))
        if rng.random() < 0.4:  # force exact-distance ties
            x = np.round(x)
        minority = rng.random(n) < 0.3
        mask = kernels.tomek_majority_mask(x, minority)
        links = tomek_links_brute(x, minority)
        expected = np.zeros(n, dtype=bool)
        for i, j in links:
            if not minority[i]:
                expected[i] = True
            if not minority[j]:
                expected[j] = True
        assert np.array_equal(mask, expected)


def test_tomek_mask_single_class(rng):
    x = rng.normal(size=(10, 3))
    assert not kernels.tomek_majority_mask(x, np.ones(10, dtype=bool)).any()
    assert not kernels.tomek_majority_mask(x, np.zeros(10, dtype=bool)).any()


@pytest.mark.skipif(not kernels.using_compiled(), reason="compiled backend unavailable")
def test_backends_bitwise_identical(rng):
    for a, b in _fixtures(rng):
        dc = kernels.pairwise_sq_dists(a, b)
        dp = _pykernels.pairwise_sq_dists(
            np.ascontiguousarray(a), np.ascontiguousarray(b)
        )
        assert np.array_equal(dc, dp)
        k = int(rng.integers(1, b.shape[0] + 1))
        assert np.array_equal(
            kernels.knn_indices(a, b, k),
            _pykernels.knn_indices(np.ascontiguousarray(a), np.ascontiguousarray(b), k, None),
        )
    x = np.round(rng.normal(size=(60, 4)) * 2)
    minority = rng.random(60) < 0.3
    assert np.array_equal(
        kernels.tomek_majority_mask(x, minority),
        _pykernels.tomek_majority_mask(np.ascontiguousarray(x), minority),
    )


def test_input_validation():
    with pytest.raises(ValueError):
        kernels.pairwise_sq_dists(np.zeros((2, 3)), np.zeros((2, 4)))
    with pytest.raises(ValueError):
        kernels.knn_indices(np.zeros((2, 3)), np.zeros((2, 3)), 0)
    with pytest.raises(ValueError):
        kernels.knn_indices(np.zeros((2, 3)), np.zeros((2, 3)), 1, exclude=np.array([0, 5]))
