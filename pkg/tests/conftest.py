import numpy as np
import pytest


def make_zipf_counts(scale: float = 196.0) -> dict:
    """Rank-frequency profile k_r = round(scale/r), padded with one extra
    singleton so the total is exactly 1338 observations over 392 states."""
    counts = {}
    r = 1
    while True:
        k = round(scale / r)
        if k < 1:
            break
        counts[f"z{r}"] = k
        r += 1
    counts[f"z{r}"] = 1
    return counts


def make_uniform_counts(n: int = 1338, m: int = 2676, seed: int = 20260826) -> dict:
    """A frozen random sample of n draws from the uniform distribution over
    m states (the 'random sample' counterpart of the Zipf profile)."""
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, m, size=n)
    states, counts = np.unique(draws, return_counts=True)
    return {f"u{s}": int(c) for s, c in zip(states, counts)}


@pytest.fixture(scope="session")
def zipf_counts() -> dict:
    counts = make_zipf_counts()
    assert sum(counts.values()) == 1338
    return counts


@pytest.fixture(scope="session")
def uniform_counts() -> dict:
    counts = make_uniform_counts()
    assert sum(counts.values()) == 1338
    return counts


@pytest.fixture(scope="session")
def iris_data() -> np.ndarray:
    sklearn_datasets = pytest.importorskip("sklearn.datasets")
    return sklearn_datasets.load_iris().data


@pytest.fixture(scope="session")
def iris_truth() -> np.ndarray:
    sklearn_datasets = pytest.importorskip("sklearn.datasets")
    return sklearn_datasets.load_iris().target


def random_counts(rng: np.random.Generator, n_max: int = 1000, s_max: int = 1000) -> dict:
    """Random frequency profile with N <= n_max over at most s_max states."""
    n = int(rng.integers(1, n_max + 1))
    s = int(rng.integers(1, s_max + 1))
    draws = rng.integers(0, s, size=n)
    states, counts = np.unique(draws, return_counts=True)
    return {int(a): int(c) for a, c in zip(states, counts)}
