"""Command-line client for the sampling service.

Every subcommand is a thin client over the HTTP API: by default requests are
served by an in-process application instance, while --server routes them to
a running deployment instead.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from pathsum.errors import FormatError
from pathsum.evaluate import load_summary
from pathsum.features import load_features


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from pathsum.service import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail")
        except Exception:
            detail = resp.text
        raise click.ClickException(f"{path} failed ({resp.status_code}): {detail}")
    return resp.json()


def _features_payload(path: str, format: str) -> dict:
    p = Path(path)
    if not p.exists():
        click.echo(f"error: feature file not found: {p}", err=True)
        sys.exit(2)
    try:
        m = load_features(p, format=format)
    except FormatError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    return {"data": m.data.tolist(), "fps": m.fps}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("--server", default=None, help="Base URL of a running service; default in-process.")
@click.pass_context
def main(ctx, server):
    """Keyframe selection via path-graph sampling."""
    ctx.obj = server


@main.command("build-graph")
@click.option("--features", "features_path", required=True)
@click.option("--format", default="binary", type=click.Choice(["binary", "csv"]))
@click.option("--m-hops", default=2, show_default=True)
@click.option("--sigma", default=6.0, show_default=True)
@click.option("--out", default=None, help="Output edge-list path (default stdout).")
@click.pass_obj
def build_graph(server, features_path, format, m_hops, sigma, out):
    """Build the banded frame-similarity graph; emit a 1-based edge list."""
    with _client(server) as client:
        data = _post(client, "/graph/build", {
            "features": _features_payload(features_path, format),
            "m_hops": m_hops, "sigma": sigma,
        })
    lines = [f"{e['i']} {e['j']} {e['w']!r}" for e in data["edges"]]
    _emit("\n".join(lines) + "\n", out)


@main.command("unfold")
@click.option("--features", "features_path", required=True)
@click.option("--format", default="binary", type=click.Choice(["binary", "csv"]))
@click.option("--m-hops", default=2, show_default=True)
@click.option("--sigma", default=6.0, show_default=True)
@click.option("--beta", default=2.0, show_default=True)
@click.option("--out", default=None)
@click.pass_obj
def unfold_cmd(server, features_path, format, m_hops, sigma, beta, out):
    """Unfold the banded graph to a 1-hop path Laplacian (JSON)."""
    with _client(server) as client:
        data = _post(client, "/unfold", {
            "features": _features_payload(features_path, format),
            "m_hops": m_hops, "sigma": sigma, "beta": beta,
        })
    _emit(json.dumps(data, indent=2) + "\n", out)


@main.command("sample")
@click.option("--laplacian", "laplacian_path", required=True,
              help="JSON file with sub_weights and self_loops (see `unfold`).")
@click.option("--mu", default=0.05, show_default=True)
@click.option("--budget", default=None, type=int)
@click.option("--threshold", default=None, type=float)
@click.option("--eps", default=1e-9, show_default=True)
@click.option("--out", default=None)
@click.pass_obj
def sample_cmd(server, laplacian_path, mu, budget, threshold, eps, out):
    """Sample a path Laplacian under a budget or at a fixed threshold."""
    p = Path(laplacian_path)
    if not p.exists():
        click.echo(f"error: laplacian file not found: {p}", err=True)
        sys.exit(2)
    with _client(server) as client:
        data = _post(client, "/sample", {
            "laplacian": json.loads(p.read_text()),
            "mu": mu, "budget": budget, "threshold": threshold, "eps": eps,
        })
    _emit(json.dumps(data, indent=2) + "\n", out)


@main.command("keyframes")
@click.option("--features", "features_path", required=True)
@click.option("--format", default="binary", type=click.Choice(["binary", "csv"]))
@click.option("--m-hops", default=2, show_default=True)
@click.option("--sigma", default=6.0, show_default=True)
@click.option("--beta", default=2.0, show_default=True)
@click.option("--mu", default=0.05, show_default=True)
@click.option("--budget", required=True, type=int)
@click.option("--eps", default=1e-9, show_default=True)
@click.option("--fps", "source_fps", default=None, type=float,
              help="Source-video fps for frame mapping (default: feature fps).")
@click.option("--out", default=None)
@click.pass_obj
def keyframes_cmd(server, features_path, format, m_hops, sigma, beta, mu, budget, eps,
                  source_fps, out):
    """Select keyframes: node index, source frame, timestamp per line."""
    with _client(server) as client:
        data = _post(client, "/keyframes", {
            "features": _features_payload(features_path, format),
            "m_hops": m_hops, "sigma": sigma, "beta": beta, "mu": mu,
            "budget": budget, "eps": eps, "source_fps": source_fps,
        })
    lines = ["node\tframe\ttime_sec"]
    for kf in data["keyframes"]:
        lines.append(f"{kf['node']}\t{kf['frame']}\t{kf['time_sec']:.3f}")
    lines.append(f"# threshold={data['threshold']!r} exhausted={data['exhausted']}")
    _emit("\n".join(lines) + "\n", out)


@main.command("bench")
@click.option("--features", "features_path", default=None)
@click.option("--format", default="binary", type=click.Choice(["binary", "csv"]))
@click.option("--n-synthetic", default=None, type=int,
              help="Node count for a synthetic random-feature graph.")
@click.option("--m-hops", default=2, show_default=True)
@click.option("--sigma", default=6.0, show_default=True)
@click.option("--beta", "betas", multiple=True, type=float, default=(2.0, 0.0),
              show_default=True)
@click.option("--budget", "budgets", multiple=True, type=int, required=True)
@click.option("--signal-class", default="BL", type=click.Choice(["BL", "GMRF"]))
@click.option("--snr-db", default=None, type=float, help="Omit for noise-free.")
@click.option("--trials", default=100, show_default=True)
@click.option("--mu", default=0.05, show_default=True)
@click.option("--eps", default=1e-9, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None)
@click.pass_obj
def bench_cmd(server, features_path, format, n_synthetic, m_hops, sigma, betas, budgets,
              signal_class, snr_db, trials, mu, eps, seed, out):
    """Monte-Carlo reconstruction benchmark; emits CSV."""
    payload = {
        "m_hops": m_hops, "sigma": sigma, "betas": list(betas), "budgets": list(budgets),
        "signal_class": signal_class, "snr_db": snr_db, "trials": trials,
        "mu": mu, "eps": eps, "seed": seed, "n_synthetic": n_synthetic,
    }
    if features_path is not None:
        payload["features"] = _features_payload(features_path, format)
    with _client(server) as client:
        data = _post(client, "/bench", payload)
    _emit(data["csv"], out)


@main.command("eval")
@click.option("--auto", "auto_path", required=True, help="Automatic summary file.")
@click.option("--user", "user_paths", multiple=True, required=True,
              help="User summary file; repeatable.")
@click.option("--fps", default=None, type=float, help="Fallback fps for summary files.")
@click.option("--window-sec", default=2.5, show_default=True)
@click.option("--out", default=None)
@click.pass_obj
def eval_cmd(server, auto_path, user_paths, fps, window_sec, out):
    """Score an automatic summary against user summaries (CSV)."""
    def read(path):
        p = Path(path)
        if not p.exists():
            click.echo(f"error: summary file not found: {p}", err=True)
            sys.exit(2)
        try:
            s = load_summary(p, default_fps=fps)
        except FormatError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        return {"frame_indices": list(s.frame_indices), "fps": s.fps}

    payload = {
        "automatic": read(auto_path),
        "users": [read(p) for p in user_paths],
        "window_sec": window_sec,
    }
    with _client(server) as client:
        data = _post(client, "/eval", payload)
    lines = ["user,precision,recall,f1,degenerate"]
    for idx, score in enumerate(data["per_user"], start=1):
        lines.append(
            f"{idx},{score['precision']!r},{score['recall']!r},{score['f1']!r},"
            f"{score['degenerate']}"
        )
    lines.append(f"mean,{data['mean_p']!r},{data['mean_r']!r},{data['mean_f1']!r},")
    _emit("\n".join(lines) + "\n", out)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve_cmd(host, port):
    """Run the HTTP service."""
    import uvicorn

    from pathsum.service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
