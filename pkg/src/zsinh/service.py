"""FastAPI service exposing the toolkit.

Three POST endpoints mirror the CLI tasks: /moment inverts a transform at
one index, /filter runs the factorization pipeline over a lag range, and
/bench compares the applicable methods against the brute-force oracle.
Domain/config errors map to HTTP 422, numerical failures to HTTP 500, both
with an ``error_kind`` the thin client translates into exit codes.
"""

from __future__ import annotations

import time
from statistics import median
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import __version__
from .config import ModelSpec, Overrides, RunConfig, build_function, build_psd
from .errors import DomainError, NumericalError
from .invz import applicable_methods, invert
from .oracle import binomial_series_h, trapezoid_oracle
from .wienerhopf import factorize, impulse_response

app = FastAPI(title="zsinh", version=__version__)


class MomentRequest(BaseModel):
    model: ModelSpec
    n: int
    method: str = "auto"
    eps: float = 1e-15
    overrides: Overrides = Overrides()
    with_oracle: bool = True


class MomentResponse(BaseModel):
    n: int
    value: float
    method: str
    nodes: int
    est_discretization_error: float
    est_truncation_error: float
    rel_err_vs_oracle: Optional[float] = None
    oracle_value: Optional[float] = None
    wall_time_ms: float


class FilterRequest(BaseModel):
    model: ModelSpec
    n_lo: int
    n_hi: int
    eps: float = 1e-15
    overrides: Overrides = Overrides()


class FilterRow(BaseModel):
    n: int
    value: float
    rel_err_vs_oracle: Optional[float] = None


class FilterResponse(BaseModel):
    rows: list[FilterRow]
    max_rel_err_vs_oracle: Optional[float]
    outer_nodes: int
    inner_nodes: int
    d_constant: float
    wall_time_ms: float


class BenchRequest(BaseModel):
    model: ModelSpec
    n: int
    methods: Optional[list[str]] = None
    eps: float = 1e-15
    repeats: int = 5
    overrides: Overrides = Overrides()


class BenchRow(BaseModel):
    method: str
    nodes: int
    value: float
    abs_err_vs_oracle: float
    median_wall_ms: float


class BenchResponse(BaseModel):
    rows: list[BenchRow]
    oracle_value: float
    oracle_nodes: int


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except DomainError as exc:
        raise HTTPException(
            status_code=422, detail={"error_kind": "domain", "message": str(exc)}
        ) from exc
    except NumericalError as exc:
        raise HTTPException(
            status_code=500, detail={"error_kind": "numerical", "message": str(exc)}
        ) from exc


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/moment", response_model=MomentResponse)
def moment(req: MomentRequest) -> MomentResponse:
    u = _guard(build_function, req.model)
    kwargs = req.overrides.engine_kwargs()
    t0 = time.perf_counter()
    rep = _guard(invert, u, req.n, req.method, req.eps, **kwargs)
    wall = (time.perf_counter() - t0) * 1e3
    rel = None
    oracle_value = None
    if req.with_oracle:
        orc = _guard(trapezoid_oracle, u, req.n)
        oracle_value = orc.value
        rel = abs(complex(rep.value).real - orc.value) / max(1.0, abs(orc.value))
    return MomentResponse(
        n=req.n,
        value=complex(rep.value).real,
        method=rep.method,
        nodes=rep.nodes_used,
        est_discretization_error=rep.est_discretization_error,
        est_truncation_error=rep.est_truncation_error,
        rel_err_vs_oracle=rel,
        oracle_value=oracle_value,
        wall_time_ms=wall,
    )


@app.post("/filter", response_model=FilterResponse)
def filter_(req: FilterRequest) -> FilterResponse:
    psd, transfer = _guard(build_psd, req.model)
    kwargs = req.overrides.filter_kwargs()
    t0 = time.perf_counter()
    fact = _guard(factorize, psd, req.n_lo, req.n_hi, req.eps, **kwargs)
    h = _guard(impulse_response, psd, req.n_lo, req.n_hi, req.eps, factorization=fact)
    wall = (time.perf_counter() - t0) * 1e3
    rel = None
    rels: list[Optional[float]] = [None] * len(h)
    if psd.rational is not None:
        ap, am = psd.rational
        href = binomial_series_h(ap, am, psd.m_plus, psd.m_minus, req.n_hi)[req.n_lo:]
        errs = np.abs(h - href) / np.abs(href)
        rels = [float(e) for e in errs]
        rel = float(np.max(errs))
    rows = [
        FilterRow(n=n, value=float(v), rel_err_vs_oracle=r)
        for n, v, r in zip(range(req.n_lo, req.n_hi + 1), h, rels)
    ]
    return FilterResponse(
        rows=rows,
        max_rel_err_vs_oracle=rel,
        outer_nodes=fact.outer_grid.N_half,
        inner_nodes=fact.inner_grid.N_half,
        d_constant=fact.d,
        wall_time_ms=wall,
    )


@app.post("/bench", response_model=BenchResponse)
def bench(req: BenchRequest) -> BenchResponse:
    u = _guard(build_function, req.model)
    methods = req.methods or list(applicable_methods(u))
    kwargs = req.overrides.engine_kwargs()
    orc = _guard(trapezoid_oracle, u, req.n)
    rows = []
    for method in methods:
        rep = _guard(invert, u, req.n, method, req.eps, **kwargs)
        times = []
        for _ in range(max(1, req.repeats)):
            t0 = time.perf_counter()
            invert(u, req.n, method, req.eps, **kwargs)
            times.append((time.perf_counter() - t0) * 1e3)
        rows.append(
            BenchRow(
                method=method,
                nodes=rep.nodes_used,
                value=complex(rep.value).real,
                abs_err_vs_oracle=abs(complex(rep.value).real - orc.value),
                median_wall_ms=median(times),
            )
        )
    return BenchResponse(rows=rows, oracle_value=orc.value, oracle_nodes=orc.N_used)


def run_config(cfg: RunConfig):
    """Execute a RunConfig against the in-process endpoints (used by tests)."""
    if cfg.task == "moment":
        return moment(
            MomentRequest(
                model=cfg.model, n=cfg.require_n(), method=cfg.method,
                eps=cfg.eps, overrides=cfg.overrides,
            )
        )
    if cfg.task == "filter":
        lo, hi = cfg.require_n_range()
        return filter_(
            FilterRequest(model=cfg.model, n_lo=lo, n_hi=hi, eps=cfg.eps, overrides=cfg.overrides)
        )
    lo = cfg.require_n()
    return bench(
        BenchRequest(
            model=cfg.model, n=lo, methods=cfg.bench_methods, eps=cfg.eps,
            repeats=cfg.bench_repeats, overrides=cfg.overrides,
        )
    )
