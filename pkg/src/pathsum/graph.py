"""Banded similarity graph over consecutive video frames.

Each frame connects to the frames within ``m_hops`` time steps; edge weights
come from an exponential kernel of squared Euclidean feature distance. The
band is stored as one array per hop distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from pathsum.features import FeatureMatrix


def edge_weight(f_i, f_j, sigma: float) -> float:
    """exp(-||f_i - f_j||^2 / sigma^2), in (0, 1]."""
    f_i = np.asarray(f_i, dtype=np.float64)
    f_j = np.asarray(f_j, dtype=np.float64)
    if f_i.shape != f_j.shape:
        raise ValueError(f"dimension mismatch: {f_i.shape} vs {f_j.shape}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    d2 = float(np.sum((f_i - f_j) ** 2))
    return float(np.exp(-d2 / sigma**2))


@dataclass(frozen=True)
class EpgGraph:
    """Symmetric banded nonnegative adjacency, no self-loops.

    ``diagonals[k]`` holds the weights of all edges (i, i+k+1), so
    diagonals[0] has length n-1, diagonals[1] length n-2, and so on.
    """

    n: int
    diagonals: tuple  # tuple of float64 arrays

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("graph needs at least 2 nodes")
        if not 0 < self.m_hops < self.n:
            raise ValueError(f"need 0 < m_hops < n, got M={self.m_hops}, n={self.n}")
        diags = []
        for k, diag in enumerate(self.diagonals, start=1):
            arr = np.asarray(diag, dtype=np.float64)
            if arr.shape != (self.n - k,):
                raise ValueError(f"hop-{k} diagonal must have length {self.n - k}")
            if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
                raise ValueError(f"hop-{k} weights must be finite and in [0, 1]")
            diags.append(arr)
        if np.any(diags[0] <= 0):
            raise ValueError("1-hop weights must be strictly positive (connectivity)")
        object.__setattr__(self, "diagonals", tuple(diags))

    @property
    def m_hops(self) -> int:
        return len(self.diagonals)

    def weight(self, i: int, j: int) -> float:
        """Weight of edge (i, j), 0-based; 0.0 outside the band or on the diagonal."""
        lo, hi = min(i, j), max(i, j)
        k = hi - lo
        if k == 0 or k > self.m_hops:
            return 0.0
        return float(self.diagonals[k - 1][lo])

    def n_edges(self) -> int:
        return sum(len(d) for d in self.diagonals)

    def adjacency(self) -> np.ndarray:
        """Dense symmetric adjacency matrix (test/oracle use)."""
        w = np.zeros((self.n, self.n))
        for k, diag in enumerate(self.diagonals, start=1):
            idx = np.arange(self.n - k)
            w[idx, idx + k] = diag
            w[idx + k, idx] = diag
        return w

    def laplacian(self) -> np.ndarray:
        """Dense combinatorial Laplacian D - W (test/oracle use)."""
        w = self.adjacency()
        return np.diag(w.sum(axis=1)) - w

    def dump_edges(self, path) -> None:
        """Text edge list ``i j w`` with 1-based indices."""
        with Path(path).open("w") as fh:
            for k, diag in enumerate(self.diagonals, start=1):
                for i, w in enumerate(diag):
                    fh.write(f"{i + 1} {i + 1 + k} {float(w)!r}\n")


def build_epg(feats: FeatureMatrix, m_hops: int, sigma: float) -> EpgGraph:
    """Build the M-hop banded graph from frame features.

    Every pair of frames at temporal distance 1..m_hops is connected with
    kernel weight; runtime is O(M * N * dim).
    """
    n = feats.n_frames
    if not 0 < m_hops < n:
        raise ValueError(f"need 0 < m_hops < n_frames, got M={m_hops}, N={n}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = feats.data.astype(np.float64)
    diagonals = []
    for k in range(1, m_hops + 1):
        d2 = np.sum((x[k:] - x[:-k]) ** 2, axis=1)
        diagonals.append(np.exp(-d2 / sigma**2))
    return EpgGraph(n=n, diagonals=tuple(diagonals))
