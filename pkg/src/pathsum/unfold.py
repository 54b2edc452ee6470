"""Reduction of a banded M-hop graph to a 1-hop path with self-loops.

Every edge spanning more than one hop is replaced, step by step, by 1-hop
edges and self-loops so that the quadratic form of the new tridiagonal
Laplacian dominates the original one (the difference stays PSD). The
replacement family is parameterized by beta:

* beta = 2: multi-hop weight is pushed onto the hop edges, no self-loops;
* beta = 0: multi-hop weight becomes endpoint self-loops, hop edges untouched;
* other beta: both, with possibly negative self-loop weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pathsum.graph import EpgGraph


@dataclass(frozen=True)
class PathLaplacian:
    """Tridiagonal generalized Laplacian of a 1-hop path, with self-loops.

    L[i, i] = w[i-1] + w[i] + u[i] and L[i, i+1] = -w[i], where w are the
    1-hop edge weights (sub_weights) and u the self-loop weights.
    """

    sub_weights: np.ndarray  # length n-1, all > 0
    self_loops: np.ndarray  # length n

    def __post_init__(self):
        w = np.asarray(self.sub_weights, dtype=np.float64)
        u = np.asarray(self.self_loops, dtype=np.float64)
        if w.ndim != 1 or u.ndim != 1 or len(u) != len(w) + 1:
            raise ValueError("self_loops must be one entry longer than sub_weights")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(u))):
            raise ValueError("non-finite weights")
        if np.any(w <= 0):
            raise ValueError("1-hop edge weights must be strictly positive")
        object.__setattr__(self, "sub_weights", w)
        object.__setattr__(self, "self_loops", u)

    @property
    def n(self) -> int:
        return len(self.self_loops)

    @property
    def has_self_loops(self) -> bool:
        return bool(np.any(self.self_loops != 0.0))

    def diag(self) -> np.ndarray:
        d = np.copy(self.self_loops)
        d[:-1] += self.sub_weights
        d[1:] += self.sub_weights
        return d

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag())
        idx = np.arange(self.n - 1)
        m[idx, idx + 1] = -self.sub_weights
        m[idx + 1, idx] = -self.sub_weights
        return m

    def quadratic_form(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(
            np.sum(self.sub_weights * (x[:-1] - x[1:]) ** 2) + np.sum(self.self_loops * x**2)
        )


def unfold(g: EpgGraph, beta: float) -> PathLaplacian:
    """Reduce a banded graph to a 1-hop path Laplacian.

    Each edge (i, j) with j - i >= 2 is eliminated right-to-left: one step
    replaces it by edges (i, j-1) and (j-1, j) of weight beta*w, self-loops
    (2-beta)*w at i and j, and a self-loop (beta^2-2*beta)*w at j-1; the new
    (i, j-1) edge is reduced in the same way until it is 1-hop. beta = 0 is a
    single-step special case (no new edges, endpoint self-loops of 2*w only).
    """
    sub = np.copy(g.diagonals[0])
    loops = np.zeros(g.n)
    end_gain = 2.0 - beta
    mid_gain = beta * beta - 2.0 * beta
    for k in range(2, g.m_hops + 1):
        diag = g.diagonals[k - 1]
        for i in range(g.n - k):
            w = diag[i]
            if w == 0.0:
                continue
            j = i + k
            if beta == 0.0:
                loops[i] += 2.0 * w
                loops[j] += 2.0 * w
                continue
            w_cur = w
            jj = j
            while jj - i >= 2:
                sub[jj - 1] += beta * w_cur
                loops[i] += end_gain * w_cur
                loops[jj] += end_gain * w_cur
                loops[jj - 1] += mid_gain * w_cur
                w_cur *= beta
                jj -= 1
            sub[i] += w_cur
    return PathLaplacian(sub_weights=sub, self_loops=loops)


def psd_gap_min_eig(g: EpgGraph, l: PathLaplacian) -> float:
    """Smallest eigenvalue of (unfolded Laplacian - original Laplacian).

    Dense O(n^3) eigensolve; test oracle for the domination guarantee,
    intended for n <= 500.
    """
    if g.n != l.n:
        raise ValueError("node counts differ")
    gap = l.to_dense() - g.laplacian()
    return float(np.linalg.eigvalsh(gap)[0])
