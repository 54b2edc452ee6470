"""Agreement between automatic and user keyframe summaries.

Matching is one-to-one under a temporal window: an automatic frame may match
a user frame only if their timestamps differ by at most window_sec, and each
frame is used at most once. For sorted sequences on a line the greedy
two-pointer scan below attains the maximum matching cardinality.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from pathsum.errors import FormatError
from pathsum.sampler import sample_budget
from pathsum.unfold import PathLaplacian


@dataclass(frozen=True)
class Summary:
    """Selected frame indices, in original-video frame numbering."""

    frame_indices: tuple
    fps: float

    def __post_init__(self):
        idx = tuple(int(i) for i in self.frame_indices)
        if any(i < 0 for i in idx):
            raise ValueError("frame indices must be non-negative")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("frame indices must be strictly increasing")
        if not self.fps > 0:
            raise ValueError(f"fps must be positive, got {self.fps}")
        object.__setattr__(self, "frame_indices", idx)

    def times(self) -> np.ndarray:
        return np.asarray(self.frame_indices, dtype=np.float64) / self.fps

    def __len__(self) -> int:
        return len(self.frame_indices)


@dataclass(frozen=True)
class SummaryEval:
    per_user: tuple  # (precision, recall, f1) per user
    mean_p: float
    mean_r: float
    mean_f1: float


def match_summaries(
    a: Summary,
    u: Summary,
    window_sec: float,
    feat_a=None,
    feat_u=None,
    sigma: float | None = None,
    theta: float | None = None,
) -> int:
    """Maximum number of one-to-one matches within the temporal window.

    When per-frame features and a gate (sigma, theta) are supplied, a pair
    additionally requires kernel similarity >= theta to match. The gated
    problem is solved as an exact maximum bipartite matching, since the
    two-pointer scan is only optimal for the pure window criterion.
    """
    if not window_sec > 0:
        raise ValueError(f"window_sec must be positive, got {window_sec}")
    if a.fps != u.fps:
        raise ValueError(f"fps mismatch: {a.fps} vs {u.fps}")
    ta, tu = a.times(), u.times()
    gated = theta is not None
    if gated:
        if feat_a is None or feat_u is None or sigma is None:
            raise ValueError("similarity gate requires feat_a, feat_u and sigma")
        from scipy.sparse import csr_matrix
        from scipy.sparse.csgraph import maximum_bipartite_matching

        from pathsum.graph import edge_weight

        adm = np.zeros((len(ta), len(tu)), dtype=bool)
        for i in range(len(ta)):
            for j in range(len(tu)):
                if abs(ta[i] - tu[j]) <= window_sec:
                    adm[i, j] = edge_weight(feat_a[i], feat_u[j], sigma) >= theta
        if not adm.any():
            return 0
        perm = maximum_bipartite_matching(csr_matrix(adm), perm_type="column")
        return int(np.count_nonzero(perm >= 0))
    i = j = matches = 0
    while i < len(ta) and j < len(tu):
        if abs(ta[i] - tu[j]) <= window_sec:
            matches += 1
            i += 1
            j += 1
        elif ta[i] < tu[j]:
            i += 1
        else:
            j += 1
    return matches


def prf(a: Summary, u: Summary, window_sec: float) -> tuple[float, float, float]:
    """Precision, recall, F1 of summary a against user summary u (0/0 -> 0)."""
    m = match_summaries(a, u, window_sec)
    p = m / len(a) if len(a) else 0.0
    r = m / len(u) if len(u) else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f1


def eval_video(a: Summary, users, window_sec: float) -> SummaryEval:
    """Per-user precision/recall/F1 plus unweighted means."""
    users = list(users)
    if not users:
        raise ValueError("at least one user summary is required")
    per_user = tuple(prf(a, u, window_sec) for u in users)
    arr = np.asarray(per_user)
    return SummaryEval(
        per_user=per_user,
        mean_p=float(arr[:, 0].mean()),
        mean_r=float(arr[:, 1].mean()),
        mean_f1=float(arr[:, 2].mean()),
    )


def nodes_to_frames(nodes, node_rate: float, source_fps: float):
    """Map node indices at the sampling rate back to source frame numbers."""
    return [round(i * source_fps / node_rate) for i in nodes]


def budget_search(
    l: PathLaplacian,
    mu: float,
    users,
    budgets,
    eps: float,
    node_rate: float,
    source_fps: float,
    window_sec: float,
) -> tuple[int, SummaryEval]:
    """Pick the budget maximizing mean F1; ties go to the smaller budget."""
    budgets = sorted(set(int(b) for b in budgets))
    if not budgets:
        raise ValueError("budgets must be non-empty")
    best = None
    for c in budgets:
        result = sample_budget(l, mu, c, eps)
        frames = nodes_to_frames(result.samples, node_rate, source_fps)
        auto = Summary(frame_indices=tuple(sorted(set(frames))), fps=source_fps)
        ev = eval_video(auto, users, window_sec)
        if best is None or ev.mean_f1 > best[1].mean_f1:
            best = (c, ev)
    return best


def load_summary(path, default_fps: float | None = None) -> Summary:
    """Read a summary file: one frame index per line, optional fps= header.

    Lines starting with '#' are comments; an ``fps=<value>`` line sets the
    frame rate used to convert indices to seconds.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"summary file not found: {path}")
    fps = default_fps
    frames = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if text.startswith("fps="):
            try:
                fps = float(text[4:])
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno} has unparseable fps") from exc
            continue
        try:
            frames.append(int(text))
        except ValueError as exc:
            raise FormatError(f"{path}: line {lineno} is not a frame index") from exc
    if fps is None:
        raise FormatError(f"{path}: no fps= line and no default fps given")
    return Summary(frame_indices=tuple(sorted(set(frames))), fps=fps)
