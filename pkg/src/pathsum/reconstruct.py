"""Smooth-signal reconstruction from samples and the synthetic MSE benchmark.

Reconstruction solves (diag(h) + mu*L) x = H^T y, the normal equations of a
quadratic data-fidelity term plus the Laplacian smoothness prior, with a
banded direct solver. Synthetic signals (bandlimited and GMRF) are generated
on the original banded graph while reconstruction runs on the unfolded path.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from pathsum.graph import EpgGraph
from pathsum.sampler import sample_budget
from pathsum.unfold import PathLaplacian, unfold


def glr_reconstruct(l: PathLaplacian, mu: float, h: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve (diag(h) + mu*L) x = H^T y on the path, O(n).

    h is the binary selection vector; y holds the observed values at the
    selected nodes in index order.
    """
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    h = np.asarray(h)
    y = np.asarray(y, dtype=np.float64)
    idx = np.flatnonzero(h)
    if len(idx) == 0:
        raise ValueError("at least one sample is required (system is singular without)")
    if len(idx) != len(y):
        raise ValueError(f"{len(y)} observations for {len(idx)} selected nodes")
    n = l.n
    rhs = np.zeros(n)
    rhs[idx] = y
    ab = np.zeros((3, n))
    ab[0, 1:] = -mu * l.sub_weights
    ab[1] = mu * l.diag()
    ab[1, idx] += 1.0
    ab[2, :-1] = -mu * l.sub_weights
    return scipy.linalg.solve_banded((1, 1), ab, rhs)


def _dense_laplacian(graph) -> np.ndarray:
    if isinstance(graph, EpgGraph):
        return graph.laplacian()
    if isinstance(graph, PathLaplacian):
        return graph.to_dense()
    return np.asarray(graph, dtype=np.float64)


def _normalize(x: np.ndarray) -> np.ndarray:
    x = x - x.mean()
    s = x.std()
    if s < 1e-12:  # degenerate constant signal (e.g. bandwidth 1)
        return x
    return x / s


def gen_bl_signal(graph, bandwidth: int, seed) -> np.ndarray:
    """Bandlimited signal spanned by the lowest-frequency eigenvectors.

    Coefficients are N(1, 0.5^2); the result is normalized to zero mean and
    unit standard deviation. Dense eigendecomposition, so n <= 5000.
    """
    lap = _dense_laplacian(graph)
    n = lap.shape[0]
    if not 1 <= bandwidth <= n:
        raise ValueError(f"bandwidth must be in [1, {n}], got {bandwidth}")
    rng = np.random.default_rng(seed)
    _, vecs = scipy.linalg.eigh(lap, subset_by_index=(0, bandwidth - 1))
    g = rng.normal(1.0, 0.5, size=bandwidth)
    return _normalize(vecs @ g)


def gen_gmrf_signal(graph, delta: float, seed, normalize: bool = True) -> np.ndarray:
    """Draw from N(0, (L + delta*I)^-1) via a banded Cholesky factor.

    normalize=False returns the raw draw (covariance checks in tests).
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    rng = np.random.default_rng(seed)
    if isinstance(graph, EpgGraph):
        m = graph.m_hops
        n = graph.n
        w = graph.adjacency()
        ab = np.zeros((m + 1, n))
        ab[m] = w.sum(axis=1) + delta
        for k in range(1, m + 1):
            ab[m - k, k:] = -np.asarray(graph.diagonals[k - 1])
        bw = m
    else:
        lap = _dense_laplacian(graph)
        n = lap.shape[0]
        bw = 1 if isinstance(graph, PathLaplacian) else n - 1
        ab = np.zeros((bw + 1, n))
        for k in range(bw + 1):
            ab[bw - k, k:] = np.diagonal(lap, k)
        ab[bw] += delta
    r_upper = scipy.linalg.cholesky_banded(ab, lower=False)
    z = rng.standard_normal(n)
    x = scipy.linalg.solve_banded((0, bw), r_upper, z)
    return _normalize(x) if normalize else x


def add_noise_snr(x: np.ndarray, snr_db: float, seed) -> np.ndarray:
    """Add white Gaussian noise at the given SNR; snr_db = inf means none."""
    x = np.asarray(x, dtype=np.float64)
    energy = float(np.sum(x**2))
    if not energy > 0:
        raise ValueError("signal must have positive energy")
    if math.isinf(snr_db):
        return x.copy()
    rng = np.random.default_rng(seed)
    sigma2 = energy / (len(x) * 10.0 ** (snr_db / 10.0))
    return x + rng.normal(0.0, math.sqrt(sigma2), size=len(x))


@dataclass(frozen=True)
class BenchRow:
    signal_class: str
    snr_db: float
    beta: float
    budget: int
    method: str
    mean_mse: float
    stderr: float
    trials: int
    seed: int


@dataclass
class BenchReport:
    """Per (beta, budget, method) MSE summary of a Monte-Carlo run."""

    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["signal_class", "snr_db", "beta", "C", "method", "mean_mse", "stderr", "trials", "seed"]
        )
        for r in self.rows:
            writer.writerow(
                [r.signal_class, r.snr_db, r.beta, r.budget, r.method,
                 repr(r.mean_mse), repr(r.stderr), r.trials, r.seed]
            )
        return buf.getvalue()


def run_bench(
    g: EpgGraph,
    betas,
    budgets,
    signal_class: str,
    snr_db: float,
    trials: int,
    mu: float,
    eps: float,
    seed: int,
    delta: float = 1e-4,
) -> BenchReport:
    """Monte-Carlo MSE of GDA sampling vs uniform-random sampling.

    Signals are generated on the original banded graph; sampling and
    reconstruction run on the unfolded path Laplacian for each beta. The
    same per-trial signals and noise are shared by both methods.
    """
    if signal_class not in ("BL", "GMRF"):
        raise ValueError(f"signal_class must be BL or GMRF, got {signal_class!r}")
    budgets = list(budgets)
    if not budgets:
        raise ValueError("budgets must be non-empty")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = g.n
    bandwidth = max(n // 20, 1)
    root = np.random.SeedSequence(seed)
    signal_seeds, noise_seeds, pick_seeds = root.spawn(3)
    signal_ss = signal_seeds.spawn(trials)
    noise_ss = noise_seeds.spawn(trials)
    pick_rng = np.random.default_rng(pick_seeds)

    signals = []
    for t in range(trials):
        if signal_class == "BL":
            x = gen_bl_signal(g, bandwidth, signal_ss[t])
        else:
            x = gen_gmrf_signal(g, delta, signal_ss[t])
        y = add_noise_snr(x, snr_db, noise_ss[t]) if np.sum(x**2) > 0 else x.copy()
        signals.append((x, y))

    report = BenchReport()
    for beta in betas:
        l = unfold(g, beta)
        for budget in budgets:
            gda_h = sample_budget(l, mu, budget, eps).h
            random_hs = []
            for _ in range(trials):
                h = np.zeros(n, dtype=np.int8)
                h[pick_rng.choice(n, size=budget, replace=False)] = 1
                random_hs.append(h)
            for method, hs in (("gda", [gda_h] * trials), ("random", random_hs)):
                mses = np.empty(trials)
                for t, (x, y) in enumerate(signals):
                    h = hs[t]
                    x_hat = glr_reconstruct(l, mu, h, y[np.flatnonzero(h)])
                    mses[t] = np.mean((x - x_hat) ** 2)
                stderr = float(mses.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
                report.rows.append(
                    BenchRow(
                        signal_class=signal_class,
                        snr_db=snr_db,
                        beta=float(beta),
                        budget=int(budget),
                        method=method,
                        mean_mse=float(mses.mean()),
                        stderr=stderr,
                        trials=trials,
                        seed=seed,
                    )
                )
    return report
