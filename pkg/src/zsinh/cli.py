"""Thin command-line client for the zsinh service.

By default the commands call the FastAPI app in-process, so no server needs
to run; ``--server URL`` points them at a remote instance instead.  Numeric
output is deterministic for a given config; timings are informative only.

Exit codes: 0 success, 2 configuration/domain error, 3 numerical failure.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from typing import Optional

import click
import httpx

from .config import (
    KobolModel,
    MixtureModel,
    NTSModel,
    Overrides,
    RationalPSDModel,
    RunConfig,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

CSV_COLUMNS = ("n", "value", "abs_err_est", "rel_err_vs_oracle", "nodes", "method")


def _client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(server: Optional[str], path: str, payload: dict) -> dict:
    try:
        with _client(server) as client:
            resp = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        click.echo(f"error: cannot reach service: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    if resp.status_code == 200:
        return resp.json()
    detail = {}
    try:
        detail = resp.json().get("detail", {})
    except Exception:
        pass
    if isinstance(detail, dict) and detail.get("error_kind") == "numerical":
        click.echo(f"numerical failure: {detail.get('message')}", err=True)
        sys.exit(EXIT_NUMERICAL)
    message = detail.get("message") if isinstance(detail, dict) else detail
    click.echo(f"config/domain error: {message}", err=True)
    sys.exit(EXIT_CONFIG)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _write_csv(path: Optional[str], rows: list[dict]) -> None:
    if path is None:
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in CSV_COLUMNS])
    text = buf.getvalue()
    if path == "-":
        click.echo(text, nl=False)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _model_from_flags(model: str, params: dict):
    try:
        if model == "kobol":
            return KobolModel(c=params["c"], nu=params["nu"], lam=params["lam"], mu=params["mu"])
        if model == "nts":
            if params.get("delta") is None:
                raise KeyError("delta")
            return NTSModel(
                delta=params["delta"], nu=params["nu"], lam=params["lam"], mu=params["mu"]
            )
        if model == "mixture":
            base = KobolModel(c=params["c"], nu=params["nu"], lam=params["lam"], mu=0.0)
            return MixtureModel(w=params["w"], mu=params["mu"], base=base)
    except KeyError as exc:
        click.echo(f"config/domain error: missing parameter {exc} for model {model}", err=True)
        sys.exit(EXIT_CONFIG)
    click.echo(f"config/domain error: unknown model '{model}'", err=True)
    sys.exit(EXIT_CONFIG)


def _overrides_from_flags(kw: dict) -> Overrides:
    data = {k: v for k, v in kw.items() if v is not None}
    return Overrides(**data)


_model_options = [
    click.option("--model", default="kobol", show_default=True,
                 type=click.Choice(["kobol", "nts", "mixture"])),
    click.option("--c", type=float, default=0.1, show_default=True),
    click.option("--nu", type=float, default=0.5, show_default=True),
    click.option("--lambda", "lam", type=float, default=1.01, show_default=True),
    click.option("--mu", type=float, default=0.0, show_default=True),
    click.option("--delta", type=float, default=None, help="NTS scale"),
    click.option("--w", type=float, default=0.3, show_default=True, help="mixture atom weight"),
]

_grid_options = [
    click.option("--r-minus", type=float, default=None),
    click.option("--r-plus", type=float, default=None),
    click.option("--reduce", "reduce_", type=float, default=None),
    click.option("--trap-N", "trap_n", type=int, default=None),
    click.option("--trap-r", type=float, default=None),
    click.option("--N", "n_override", type=int, default=None),
]


def _add_options(options):
    def wrap(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return wrap


@click.group()
@click.option("--server", default=None, help="remote service URL (default: in-process)")
@click.pass_context
def main(ctx, server):
    """Inverse Z-transform and Wiener-Hopf filter toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command()
@_add_options(_model_options)
@_add_options(_grid_options)
@click.option("--n", type=int, required=False)
@click.option("--method", default="auto", show_default=True,
              type=click.Choice(["trap", "sinh1", "sinh2", "sinh3", "log", "auto"]))
@click.option("--eps", type=float, default=1e-15, show_default=True)
@click.option("--no-oracle", is_flag=True, default=False, help="skip the oracle comparison")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--csv", "csv_path", default=None, help="write a CSV row ('-' for stdout)")
@click.pass_context
def moment(ctx, model, c, nu, lam, mu, delta, w, r_minus, r_plus, reduce_, trap_n, trap_r,
           n_override, n, method, eps, no_oracle, config_path, csv_path):
    """Invert the transform at a single index n."""
    if config_path:
        cfg = RunConfig.from_json(open(config_path).read())
        model_spec, n, method, eps = cfg.model, cfg.require_n(), cfg.method, cfg.eps
        overrides = cfg.overrides
    else:
        if n is None:
            click.echo("config/domain error: --n is required", err=True)
            sys.exit(EXIT_CONFIG)
        model_spec = _model_from_flags(
            model, dict(c=c, nu=nu, lam=lam, mu=mu, delta=delta, w=w)
        )
        overrides = _overrides_from_flags(
            dict(r_minus=r_minus, r_plus=r_plus, reduce=reduce_,
                 trap_N=trap_n, trap_r=trap_r, N=n_override)
        )
    payload = {
        "model": json.loads(model_spec.model_dump_json(by_alias=True)),
        "n": n,
        "method": method,
        "eps": eps,
        "overrides": json.loads(overrides.model_dump_json(exclude_none=True)),
        "with_oracle": not no_oracle,
    }
    out = _post(ctx.obj["server"], "/moment", payload)
    click.echo(
        f"u_{out['n']} = {out['value']!r}  method={out['method']} nodes={out['nodes']} "
        f"est_disc={out['est_discretization_error']:.2e} est_trunc={out['est_truncation_error']:.2e}"
    )
    if out.get("rel_err_vs_oracle") is not None:
        click.echo(f"oracle check: rel err {out['rel_err_vs_oracle']:.3e}")
    click.echo(f"wall time: {out['wall_time_ms']:.3f} ms (informative only)")
    _write_csv(csv_path, [{
        "n": out["n"], "value": out["value"],
        "abs_err_est": out["est_discretization_error"] + out["est_truncation_error"],
        "rel_err_vs_oracle": out.get("rel_err_vs_oracle"),
        "nodes": out["nodes"], "method": out["method"],
    }])


@main.command()
@click.option("--a-plus", type=float, required=True)
@click.option("--a-minus", type=float, required=True)
@click.option("--m-plus", type=float, required=True)
@click.option("--m-minus", type=float, required=True)
@click.option("--n-lo", type=int, required=True)
@click.option("--n-hi", type=int, required=True)
@click.option("--eps", type=float, default=1e-15, show_default=True)
@click.option("--N", "n_outer", type=int, default=None, help="outer grid half-count")
@click.option("--N1", "n_inner", type=int, default=None, help="inner grid half-count")
@click.option("--r-plus-contour", type=float, default=None)
@click.option("--csv", "csv_path", default=None)
@click.pass_context
def filter(ctx, a_plus, a_minus, m_plus, m_minus, n_lo, n_hi, eps, n_outer, n_inner,
           r_plus_contour, csv_path):
    """Factorize a rational PSD and emit its impulse response."""
    model_spec = RationalPSDModel(
        a_plus=a_plus, a_minus=a_minus, m_plus=m_plus, m_minus=m_minus
    )
    overrides = Overrides(N=n_outer, N1=n_inner, r_plus=r_plus_contour)
    payload = {
        "model": json.loads(model_spec.model_dump_json(by_alias=True)),
        "n_lo": n_lo,
        "n_hi": n_hi,
        "eps": eps,
        "overrides": json.loads(overrides.model_dump_json(exclude_none=True)),
    }
    out = _post(ctx.obj["server"], "/filter", payload)
    rows = [{
        "n": row["n"], "value": row["value"],
        "abs_err_est": (abs(row["value"]) * row["rel_err_vs_oracle"]
                        if row.get("rel_err_vs_oracle") is not None else None),
        "rel_err_vs_oracle": row.get("rel_err_vs_oracle"),
        "nodes": out["outer_nodes"], "method": "whf",
    } for row in out["rows"]]
    _write_csv(csv_path, rows)
    max_rel = out.get("max_rel_err_vs_oracle")
    click.echo(
        f"h[{n_lo}..{n_hi}]: grids (N={out['outer_nodes']}, N1={out['inner_nodes']}) "
        f"d={out['d_constant']!r}"
    )
    if max_rel is not None:
        click.echo(f"max rel err vs series oracle: {max_rel:.3e}")
    click.echo(f"wall time: {out['wall_time_ms']:.1f} ms (informative only)")


@main.command()
@_add_options(_model_options)
@_add_options(_grid_options)
@click.option("--n", type=int, required=True)
@click.option("--methods", default=None, help="comma-separated; default: all applicable")
@click.option("--eps", type=float, default=1e-15, show_default=True)
@click.option("--repeats", type=int, default=5, show_default=True)
@click.option("--csv", "csv_path", default=None)
@click.pass_context
def bench(ctx, model, c, nu, lam, mu, delta, w, r_minus, r_plus, reduce_, trap_n, trap_r,
          n_override, n, methods, eps, repeats, csv_path):
    """Compare applicable methods: nodes, error vs oracle, median wall time."""
    model_spec = _model_from_flags(model, dict(c=c, nu=nu, lam=lam, mu=mu, delta=delta, w=w))
    overrides = _overrides_from_flags(
        dict(r_minus=r_minus, r_plus=r_plus, reduce=reduce_,
             trap_N=trap_n, trap_r=trap_r, N=n_override)
    )
    payload = {
        "model": json.loads(model_spec.model_dump_json(by_alias=True)),
        "n": n,
        "methods": methods.split(",") if methods else None,
        "eps": eps,
        "repeats": repeats,
        "overrides": json.loads(overrides.model_dump_json(exclude_none=True)),
    }
    out = _post(ctx.obj["server"], "/bench", payload)
    click.echo(f"{'method':8s} {'nodes':>7s} {'abs err vs oracle':>18s} {'median ms':>10s}")
    for row in out["rows"]:
        click.echo(
            f"{row['method']:8s} {row['nodes']:7d} {row['abs_err_vs_oracle']:18.3e} "
            f"{row['median_wall_ms']:10.3f}"
        )
    click.echo(f"oracle: {out['oracle_value']!r} (N={out['oracle_nodes']})")
    _write_csv(csv_path, [{
        "n": n, "value": row["value"], "abs_err_est": row["abs_err_vs_oracle"],
        "rel_err_vs_oracle": None, "nodes": row["nodes"], "method": row["method"],
    } for row in out["rows"]])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8711, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
