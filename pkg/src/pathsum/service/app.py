"""HTTP service exposing the sampling pipeline."""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from pathsum import evaluate, reconstruct
from pathsum.errors import PathsumError
from pathsum.features import FeatureMatrix
from pathsum.graph import EpgGraph, build_epg
from pathsum.sampler import build_operator, sample_budget, sample_with_threshold
from pathsum.service import models
from pathsum.unfold import PathLaplacian, unfold


def _features(payload: models.FeaturesPayload) -> FeatureMatrix:
    return FeatureMatrix(data=np.asarray(payload.data, dtype=np.float32), fps=payload.fps)


def _laplacian(payload: models.PathLaplacianPayload) -> PathLaplacian:
    return PathLaplacian(
        sub_weights=np.asarray(payload.sub_weights),
        self_loops=np.asarray(payload.self_loops),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="pathsum", version="0.1.0")

    @app.exception_handler(ValueError)
    async def value_error(request, exc):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(PathsumError)
    async def domain_error(request, exc):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.post("/graph/build", response_model=models.BuildGraphResponse)
    def graph_build(req: models.BuildGraphRequest):
        g = build_epg(_features(req.features), req.m_hops, req.sigma)
        edges = [
            models.Edge(i=i + 1, j=i + 1 + k, w=float(w))
            for k, diag in enumerate(g.diagonals, start=1)
            for i, w in enumerate(diag)
        ]
        return models.BuildGraphResponse(n=g.n, m_hops=g.m_hops, edges=edges)

    @app.post("/unfold", response_model=models.PathLaplacianPayload)
    def unfold_graph(req: models.UnfoldRequest):
        g = build_epg(_features(req.features), req.m_hops, req.sigma)
        l = unfold(g, req.beta)
        return models.PathLaplacianPayload(
            sub_weights=l.sub_weights.tolist(), self_loops=l.self_loops.tolist()
        )

    @app.post("/sample", response_model=models.SampleResponse)
    def sample(req: models.SampleRequest):
        l = _laplacian(req.laplacian)
        if req.budget is None and req.threshold is None:
            raise HTTPException(status_code=422, detail="either budget or threshold is required")
        if req.threshold is not None:
            op = build_operator(l, req.mu)
            result = sample_with_threshold(op, req.threshold, req.budget or l.n)
        else:
            result = sample_budget(l, req.mu, req.budget, req.eps)
        return models.SampleResponse(
            samples=result.samples,
            h=result.h.tolist(),
            partitions=result.partitions,
            scalars=result.scalars.tolist(),
            threshold=result.threshold,
            exhausted=result.exhausted,
        )

    @app.post("/keyframes", response_model=models.KeyframesResponse)
    def keyframes(req: models.KeyframesRequest):
        feats = _features(req.features)
        g = build_epg(feats, req.m_hops, req.sigma)
        l = unfold(g, req.beta)
        budget = min(req.budget, l.n)
        result = sample_budget(l, req.mu, budget, req.eps)
        source_fps = req.source_fps if req.source_fps is not None else feats.fps
        frames = evaluate.nodes_to_frames(result.samples, feats.fps, source_fps)
        kfs = [
            models.Keyframe(node=node, frame=frame, time_sec=node / feats.fps)
            for node, frame in zip(result.samples, frames)
        ]
        return models.KeyframesResponse(
            keyframes=kfs, threshold=result.threshold, exhausted=result.exhausted
        )

    @app.post("/bench", response_model=models.BenchResponse)
    def bench(req: models.BenchRequest):
        if req.features is not None:
            g = build_epg(_features(req.features), req.m_hops, req.sigma)
        elif req.n_synthetic is not None:
            rng = np.random.default_rng(req.seed)
            feats = FeatureMatrix(
                data=rng.normal(size=(req.n_synthetic, 8)).astype(np.float32), fps=2.0
            )
            g = build_epg(feats, req.m_hops, req.sigma)
        else:
            raise HTTPException(status_code=422, detail="provide features or n_synthetic")
        snr = math.inf if req.snr_db is None else req.snr_db
        report = reconstruct.run_bench(
            g, req.betas, req.budgets, req.signal_class, snr, req.trials,
            req.mu, req.eps, req.seed,
        )
        rows = []
        for r in report.rows:
            fields = dict(vars(r))
            if math.isinf(fields["snr_db"]):
                fields["snr_db"] = None  # JSON has no Infinity
            rows.append(models.BenchRowModel(**fields))
        return models.BenchResponse(rows=rows, csv=report.to_csv())

    @app.post("/eval", response_model=models.EvalResponse)
    def eval_summaries(req: models.EvalRequest):
        auto = evaluate.Summary(
            frame_indices=tuple(sorted(set(req.automatic.frame_indices))),
            fps=req.automatic.fps,
        )
        users = [
            evaluate.Summary(frame_indices=tuple(sorted(set(u.frame_indices))), fps=u.fps)
            for u in req.users
        ]
        ev = evaluate.eval_video(auto, users, req.window_sec)
        per_user = [
            models.UserScore(
                precision=p, recall=r, f1=f, degenerate=(len(auto) == 0 or len(u) == 0)
            )
            for (p, r, f), u in zip(ev.per_user, users)
        ]
        return models.EvalResponse(
            per_user=per_user, mean_p=ev.mean_p, mean_r=ev.mean_r, mean_f1=ev.mean_f1
        )

    return app
