"""Shared helpers for the test suite: random graph generators and dense
oracles kept independent of the banded production code paths."""

import numpy as np
import pytest

from pathsum.graph import EpgGraph
from pathsum.unfold import PathLaplacian


def rand_epg(rng, n: int, m: int) -> EpgGraph:
    """Random banded graph with weights in (0, 1]."""
    diagonals = tuple(
        rng.uniform(np.finfo(float).tiny, 1.0, size=n - k) for k in range(1, m + 1)
    )
    return EpgGraph(n=n, diagonals=diagonals)


def rand_path(rng, n: int, loops: bool) -> PathLaplacian:
    w = rng.uniform(0.05, 1.0, size=n - 1)
    u = rng.uniform(0.0, 1.0, size=n) if loops else np.zeros(n)
    return PathLaplacian(sub_weights=w, self_loops=u)


def dense_b(l: PathLaplacian, mu: float, h) -> np.ndarray:
    """Dense diag(h) + mu * L, the sampling coefficient matrix."""
    return np.diag(np.asarray(h, dtype=np.float64)) + mu * l.to_dense()


def dense_lambda_min(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(m)[0])


def disc_left_ends(m: np.ndarray) -> np.ndarray:
    """Gershgorin disc left-ends, row by row."""
    radii = np.sum(np.abs(m), axis=1) - np.abs(np.diag(m))
    return np.diag(m) - radii


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
