"""Budgeted sample selection on a path Laplacian via Gershgorin disc alignment.

The coefficient matrix whose smallest eigenvalue we push up is
B = diag(h) + mu * L for a binary selection vector h. Sampling a node lifts
its disc center by 1; a positive diagonal similarity transform then trades
radius between neighboring discs. The algorithm greedily places one sample
per partition so that every disc left-end in the partition clears a
threshold T, and binary-searches T to meet the sample budget.

For Laplacians with self-loops the disc left-ends are first aligned at
lambda_min(L) by the similarity transform built from the (strictly positive)
first eigenvector, computed here through its consecutive-entry ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from pathsum.errors import AlignmentError, ThresholdInfeasibleError
from pathsum.unfold import PathLaplacian

__all__ = [
    "GdpaAlignment",
    "SampleResult",
    "ScaledOperator",
    "build_operator",
    "gdpa_align",
    "lambda_min_tridiag",
    "max_sample_scalar",
    "sample_budget",
    "sample_with_threshold",
    "select_one",
]


def lambda_min_tridiag(l: PathLaplacian) -> float:
    """Smallest eigenvalue of the tridiagonal Laplacian.

    Bisection on Sturm sequence counts (LAPACK *stebz via scipy), exact to
    machine precision and O(n) per bisection step.
    """
    if l.n == 1:
        return float(l.self_loops[0])
    vals = scipy.linalg.eigvalsh_tridiagonal(
        l.diag(), -l.sub_weights, select="i", select_range=(0, 0), lapack_driver="stebz"
    )
    return float(vals[0])


@dataclass(frozen=True)
class GdpaAlignment:
    """First-eigenvector ratio transform aligning all disc left-ends.

    alphas[i] = v1[i+1] / v1[i] where v1 is the strictly positive first
    eigenvector; applying diag(1/v1) . L . diag(v1) puts every disc left-end
    at lambda_min.
    """

    lambda_min: float
    alphas: np.ndarray  # length n-1, all > 0


def _alignment_ratios(d, w, lam):
    """Eigenvector ratio recursions at shift lam, shot from both ends.

    A one-sided recursion satisfies every visited row exactly but is
    numerically explosive when the first eigenvector is localized, so the
    forward ratios (rows 0..m-1) and backward ratios (rows m+1..n-1) are
    joined at the row m minimizing the one remaining residual.

    Returns (alphas, residual); alphas is None when no junction with all
    ratios positive exists.
    """
    n = len(d)
    fwd = np.empty(n - 1)  # fwd[i] = v[i+1]/v[i], valid for i < f_ok
    prev_inv_term = 0.0
    f_ok = n - 1
    for i in range(n - 1):
        a = (d[i] - prev_inv_term - lam) / w[i]
        if not (a > 0 and math.isfinite(a)):
            f_ok = i
            break
        fwd[i] = a
        prev_inv_term = w[i] / a
    bwd = np.empty(n - 1)  # bwd[i] = v[i]/v[i+1], valid for i >= b_lo
    b_lo = 0
    nxt_inv_term = 0.0
    for i in range(n - 2, -1, -1):
        r = (d[i + 1] - nxt_inv_term - lam) / w[i]
        if not (r > 0 and math.isfinite(r)):
            b_lo = i + 1
            break
        bwd[i] = r
        nxt_inv_term = w[i] / r
    best = None
    for m in range(n):
        if m - 1 >= f_ok or m < b_lo:
            continue
        res = d[m] - lam
        if m > 0:
            res -= w[m - 1] / fwd[m - 1]
        if m < n - 1:
            res -= w[m] / bwd[m]
        if best is None or abs(res) < abs(best[1]):
            best = (m, res)
    if best is None:
        return None, -math.inf
    m, res = best
    alphas = np.empty(n - 1)
    alphas[:m] = fwd[:m]
    alphas[m:] = 1.0 / bwd[m:] if m < n - 1 else alphas[m:]
    return alphas, res


def gdpa_align(l: PathLaplacian, row_tol: float = 1e-6) -> GdpaAlignment:
    """Compute the aligning transform for a self-loop path Laplacian.

    The ratios are recovered iteratively from the row equations
    L[i,i] - alphas[i-1]^-1 * |L[i,i-1]| - alphas[i] * |L[i,i+1]| = lambda_min.
    All rows except the junction row hold by construction of the ratios;
    that one remaining residual serves as the consistency check, refined
    over machine-precision shifts of lambda_min.
    """
    if not l.has_self_loops:
        raise ValueError("gdpa_align expects a Laplacian with self-loops")
    if np.any(l.self_loops < 0):
        raise AlignmentError("negative self-loop weights violate the positive-graph precondition")
    d = l.diag()
    w = l.sub_weights
    n = l.n
    lam = lambda_min_tridiag(l)
    if n == 1:
        return GdpaAlignment(lambda_min=lam, alphas=np.empty(0))
    scale = max(float(np.max(np.abs(d))), 1.0)
    best = None
    for k in (0.0, 1.0, -1.0, 4.0, -4.0, 16.0, -16.0, 64.0, -64.0):
        shifted = lam + k * 1e-15 * scale
        alphas, res = _alignment_ratios(d, w, shifted)
        if alphas is not None and (best is None or abs(res) < abs(best[2])):
            best = (shifted, alphas, res)
        if best is not None and abs(best[2]) <= 1e-12 * scale:
            break
    if best is None:
        raise AlignmentError(
            "no positive ratio assignment near lambda_min; degenerate first "
            "eigenvector or violated positivity precondition"
        )
    shifted, alphas, res = best
    if abs(res) > row_tol:
        raise AlignmentError(
            f"alignment junction residual {abs(res):.3e} exceeds {row_tol:.1e}"
        )
    return GdpaAlignment(lambda_min=shifted, alphas=alphas)


@dataclass(frozen=True)
class ScaledOperator:
    """mu-scaled disc geometry of B = diag(h) + mu * L on a path.

    c[i] is the disc center before sampling (mu * L[i,i]); w_right[i] and
    w_left[i] are the magnitudes of the (i, i+1) and (i+1, i) entries, which
    differ once the self-loop aligning transform has been applied. adj[i] is
    the mu-scaled untransformed edge weight (i, i+1), needed to drop a cut
    edge from a partition-boundary disc center. base is the common disc
    left-end before sampling: 0 without self-loops, mu * lambda_min(L) after
    alignment.
    """

    n: int
    c: np.ndarray
    w_right: np.ndarray
    w_left: np.ndarray
    adj: np.ndarray
    mu: float
    base: float
    alphas: np.ndarray | None = None


def build_operator(l: PathLaplacian, mu: float) -> ScaledOperator:
    """Build the disc-geometry view of diag(h) + mu * L.

    Self-loop Laplacians are aligned first so that all disc left-ends start
    at mu * lambda_min(L).
    """
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    adj = mu * l.sub_weights
    c = mu * l.diag()
    if l.has_self_loops:
        alignment = gdpa_align(l)
        a = alignment.alphas
        return ScaledOperator(
            n=l.n,
            c=c,
            w_right=adj * a,
            w_left=adj / a,
            adj=adj,
            mu=mu,
            base=mu * alignment.lambda_min,
            alphas=a,
        )
    return ScaledOperator(
        n=l.n, c=c, w_right=adj.copy(), w_left=adj.copy(), adj=adj, mu=mu, base=0.0
    )


@dataclass(frozen=True)
class SampleResult:
    """Outcome of one thresholded sampling sweep."""

    h: np.ndarray  # binary selection vector, length n
    samples: list  # selected node indices, ascending, 0-based
    partitions: list  # (start, end, k) inclusive triples covering 0..n-1
    scalars: np.ndarray  # per-node diagonal transform entries, > 0
    threshold: float
    exhausted: bool  # all nodes covered within budget


def max_sample_scalar(op: ScaledOperator, k: int, T: float, s_left: float = 1.0) -> float:
    """Largest disc-k scalar keeping the sampled disc's left-end at >= T.

    The left neighbor is assumed already scaled by s_left and the right
    neighbor by 1; off-path neighbors contribute nothing.
    """
    wl = op.w_left[k - 1] / s_left if k > 0 else 0.0
    wr = op.w_right[k] if k < op.n - 1 else 0.0
    denom = wl + wr
    if denom == 0.0:
        return math.inf
    return (op.c[k] + 1.0 - T) / denom


def select_one(op: ScaledOperator, start: int, T: float) -> tuple[int, int, np.ndarray]:
    """Place one sample on the suffix starting at ``start``.

    Walks upstream from ``start`` accumulating the minimal scalars that keep
    each passed disc's left-end at T, until the candidate sample can no
    longer supply them; the sample lands on the last feasible node k. A
    downstream sweep from k then extends coverage while the running scalar
    stays >= 1. Returns (k, d, scalars) where d is the last covered node and
    scalars are the diagonal transform entries for start..d, normalized so
    the first equals 1.

    The guarantee is stated on the partition's own subgraph, so the disc
    centers at both boundaries drop the weight of their cut edges: start
    loses the edge to start-1, and the final node d loses the edge to d+1.
    The latter is an extra feasibility condition per candidate end node
    (vacuous without self-loops, where it coincides with the interior one).

    Raises ThresholdInfeasibleError when not even the sampled node's own
    subgraph disc can clear T, which can happen on aligned self-loop
    operators near the top of the threshold range.
    """
    n = op.n
    if not op.base < T:
        raise ValueError(f"threshold {T} must exceed base {op.base}")
    if not 0 <= start < n:
        raise ValueError(f"start {start} out of range")
    c = op.c
    w_right = op.w_right
    w_left = op.w_left
    c_start = c[start] - (op.adj[start - 1] if start > 0 else 0.0)

    def c_eff(j: int) -> float:
        return c_start if j == start else c[j]

    def adj_right(j: int) -> float:
        return op.adj[j] if j < n - 1 else 0.0

    sl = [1.0]  # minimal scalars, local index 0 = start
    wr0 = w_right[start] if start < n - 1 else 0.0
    su_i = (c_start + 1.0 - T) / wr0 if wr0 > 0.0 else math.inf
    i = start
    sl_i = 1.0
    while True:
        if i == n - 1:
            k = i
            break
        ci = c_eff(i)
        wl_i = 0.0 if i == start else w_left[i - 1]
        denom = ci - sl_i * wl_i - T
        sl_next = (sl_i * w_right[i] / denom) if denom > 0.0 else math.inf
        wr_next = w_right[i + 1] if i + 1 < n - 1 else 0.0
        su_next = (c[i + 1] + 1.0 - T) / (w_left[i] / sl_i + wr_next)
        if su_next < sl_next or sl_next < 1.0:
            k = i
            break
        sl.append(sl_next)
        sl_i = sl_next
        su_i = su_next
        i += 1

    sl_min_k = sl[-1]  # minimum required by the row left of k (1.0 at start)
    s_prev_k = sl[-2] if len(sl) >= 2 else 1.0
    s_k = su_i if math.isfinite(su_i) else 1.0
    scal = sl
    scal[-1] = s_k  # the sampled node takes its maximal interior scalar

    def end_scalar(j: int, s_prev: float, sampled: bool) -> float:
        """Max scalar keeping row j's left-end >= T when j ends the block."""
        num = c_eff(j) + (1.0 if sampled else 0.0) - adj_right(j) - T
        den = w_left[j - 1] / s_prev if j > start else 0.0
        if den == 0.0:
            return math.inf if num >= 0.0 else -math.inf
        return num / den

    # downstream sweep: chain interior scalars, remembering the last node at
    # which the block may validly end
    best = None  # (d, final scalar for row d)
    e_k = end_scalar(k, s_prev_k, sampled=True)
    if min(e_k, s_k) >= max(sl_min_k, 1.0):
        best = (k, min(e_k, s_k))
    j = k
    s_j = s_k
    down = []
    while j + 1 < n:
        wr_next = w_right[j + 1] if j + 1 < n - 1 else 0.0
        su_next = (c[j + 1] - T) / (w_left[j] / s_j + wr_next)
        if su_next < 1.0:
            break
        down.append(su_next)
        e_next = end_scalar(j + 1, s_j, sampled=False)
        if e_next >= 1.0:
            best = (j + 1, min(su_next, e_next))
        s_j = su_next
        j += 1
    if best is None:
        raise ThresholdInfeasibleError(
            f"no subgraph block starting at node {start} clears threshold {T}"
        )
    d, s_d = best
    scal.extend(down[: d - k])
    scal[-1] = s_d  # the end row takes its end-feasible scalar

    scalars = np.asarray(scal)
    if op.alphas is not None:
        # fold in the alignment ratios so the scalars act on the raw Laplacian
        p = np.empty(len(scalars))
        p[0] = 1.0
        for j in range(1, len(scalars)):
            p[j] = p[j - 1] / op.alphas[start + j - 1]
        scalars = scalars * p
    scalars /= scalars[0]
    return k, d, scalars


def sample_with_threshold(op: ScaledOperator, T: float, budget: int) -> SampleResult:
    """Greedy left-to-right partition sweep at a fixed threshold.

    Each partition gets exactly one sample covering it; the sweep stops when
    all nodes are covered (exhausted) or the budget is spent first.
    """
    n = op.n
    h = np.zeros(n, dtype=np.int8)
    samples: list[int] = []
    partitions: list[tuple[int, int, int]] = []
    scalars = np.ones(n)
    pos = 0
    while pos < n and len(samples) < budget:
        try:
            k, d, s = select_one(op, pos, T)
        except ThresholdInfeasibleError:
            break
        samples.append(k)
        h[k] = 1
        partitions.append((pos, d, k))
        scalars[pos : d + 1] = s
        pos = d + 1
    return SampleResult(
        h=h,
        samples=samples,
        partitions=partitions,
        scalars=scalars,
        threshold=T,
        exhausted=pos >= n,
    )


def sample_budget(
    l: PathLaplacian, mu: float, budget: int, eps: float, trace: list | None = None
) -> SampleResult:
    """Largest-threshold sampling under a budget.

    Binary-searches T over (base, base + 1] for the largest threshold whose
    sweep covers every node with at most ``budget`` samples, stopping when
    the bracket is narrower than eps. Sample count is checked to be
    non-decreasing in T across the evaluated thresholds.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if budget > l.n:
        raise ValueError(f"budget {budget} exceeds node count {l.n}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    op = build_operator(l, mu)
    evaluated: list[tuple[float, float]] = []  # (T, effective count)

    def run(T: float) -> SampleResult:
        r = sample_with_threshold(op, T, budget)
        evaluated.append((T, len(r.samples) if r.exhausted else math.inf))
        if trace is not None:
            trace.append((T, list(r.samples), list(r.partitions)))
        return r

    lo, hi = op.base, op.base + 1.0
    best = run(hi)
    if not best.exhausted:
        result = best
        best = None
        while hi - lo > eps:
            mid = 0.5 * (lo + hi)
            r = run(mid)
            if r.exhausted:
                lo, best = mid, r
            else:
                hi = mid
        if best is None:
            best = run(lo + min(eps, 0.5 * (hi - lo)))
            if not best.exhausted:
                best = result if len(result.samples) >= len(best.samples) else best
    counts = sorted(evaluated)
    for (t1, c1), (t2, c2) in zip(counts, counts[1:]):
        if c1 > c2:
            raise AssertionError(
                f"sample count not monotone in T: {c1} at T={t1} vs {c2} at T={t2}"
            )
    return best
