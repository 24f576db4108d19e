"""HTTP facade over the experiment drivers.

One POST endpoint per command under /v1; request carries raw config
sections, a root seed and a thread count, and the response carries the
resolved config echo plus every output table with cells already formatted
to their canonical CSV text.  The CLI is a thin client of this service
(in-process by default, remote with --server).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .config import config_from_sections
from .csvio import format_rows
from .experiments import COMMANDS, run_command
from .regvar import DomainError, SpecError


class RunRequest(BaseModel):
    config: dict[str, dict[str, str]] = Field(default_factory=dict)
    seed: int = 0
    threads: int = 1


class TablePayload(BaseModel):
    name: str
    columns: list[str]
    rows: list[list[str]]
    meta: dict[str, str] = Field(default_factory=dict)


class RunResponse(BaseModel):
    command: str
    seed: int
    config: dict[str, dict[str, str]]
    tables: list[TablePayload]


app = FastAPI(title="thinprimes", version=__version__)


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


def _run(command: str, req: RunRequest) -> RunResponse:
    try:
        cfg = config_from_sections(req.config)
        tables = run_command(command, cfg, seed=req.seed, threads=req.threads)
    except (ValueError, SpecError, DomainError) as exc:
        raise HTTPException(status_code=400, detail={
            "error_type": type(exc).__name__, "message": str(exc)})
    except ArithmeticError as exc:
        raise HTTPException(status_code=500, detail={
            "error_type": type(exc).__name__, "message": str(exc)})
    payloads = [TablePayload(name=t.name, columns=list(t.columns),
                             rows=format_rows(t.rows), meta=dict(t.meta))
                for t in tables]
    return RunResponse(command=command, seed=req.seed,
                       config=cfg.to_sections(), tables=payloads)


def _make_endpoint(command: str):
    def endpoint(req: RunRequest) -> RunResponse:
        return _run(command, req)
    endpoint.__name__ = f"run_{command}"
    return endpoint


for _command in COMMANDS:
    app.post(f"/v1/{_command}", response_model=RunResponse)(
        _make_endpoint(_command))
