"""Linear-time keyframe selection for short videos via path-graph sampling."""

from pathsum.features import FeatureMatrix, load_features, write_features
from pathsum.graph import EpgGraph, build_epg, edge_weight
from pathsum.unfold import PathLaplacian, psd_gap_min_eig, unfold
from pathsum.sampler import (
    GdpaAlignment,
    SampleResult,
    ScaledOperator,
    build_operator,
    gdpa_align,
    lambda_min_tridiag,
    sample_budget,
    sample_with_threshold,
    select_one,
)
from pathsum.reconstruct import (
    add_noise_snr,
    gen_bl_signal,
    gen_gmrf_signal,
    glr_reconstruct,
    run_bench,
)
from pathsum.evaluate import (
    Summary,
    SummaryEval,
    budget_search,
    eval_video,
    match_summaries,
    prf,
)

__version__ = "0.1.0"
