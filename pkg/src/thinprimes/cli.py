"""Command-line driver: thin client of the HTTP service.

Run commands post to the service (an in-process instance unless --server
names a remote one) and write the returned tables as CSV files plus a
run_meta.json manifest.  verify replays the manifest through the module
APIs and compares a deterministic random sample of cells against the
stored files.  Exit code 0 means every step completed; any failure writes
error_manifest.json into the output directory and returns 1.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

import numpy as np

from .config import config_from_sections, dump_config
from .csvio import format_rows, read_csv, write_csv
from .experiments import COMMANDS, run_command, seed_sequence

_META_NAME = "run_meta.json"
_ERROR_NAME = "error_manifest.json"
_VERIFY_NAME = "verify_report.json"


def _read_sections(path: str | None) -> dict:
    if path is None:
        return {}
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        parser.read_file(fh)
    return {name: dict(parser.items(name)) for name in parser.sections()}


def _write_error(out_dir: Path, command: str, error_type: str,
                 message: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"command": command, "error_type": error_type,
                "message": message}
    with open(out_dir / _ERROR_NAME, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"error: {error_type}: {message}", file=sys.stderr)


def _post(command: str, payload: dict, server: str | None):
    if server is None:
        from fastapi.testclient import TestClient

        from .service import app
        with TestClient(app) as client:
            return client.post(f"/v1/{command}", json=payload).json(), None
    import httpx
    resp = httpx.post(f"{server.rstrip('/')}/v1/{command}", json=payload,
                      timeout=None)
    if resp.status_code >= 400:
        return resp.json(), resp.status_code
    return resp.json(), None


def _cmd_run(command: str, args) -> int:
    out_dir = Path(args.out)
    try:
        sections = _read_sections(args.config)
    except (OSError, configparser.Error) as exc:
        _write_error(out_dir, command, type(exc).__name__,
                     f"config {args.config}: {exc}")
        return 1
    payload = {"config": sections, "seed": args.seed, "threads": args.threads}
    try:
        body, status = _post(command, payload, args.server)
    except Exception as exc:  # connection failures and transport errors
        _write_error(out_dir, command, type(exc).__name__, str(exc))
        return 1
    if status is not None or "detail" in body:
        detail = body.get("detail", body)
        if isinstance(detail, dict):
            _write_error(out_dir, command,
                         detail.get("error_type", "HTTPError"),
                         detail.get("message", json.dumps(detail)))
        else:
            _write_error(out_dir, command, "HTTPError", str(detail))
        return 1

    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / _ERROR_NAME).unlink(missing_ok=True)
    files = []
    for table in body["tables"]:
        name = f"{table['name']}.csv"
        write_csv(out_dir / name, table["columns"], table["rows"])
        files.append(name)
        print(f"wrote {out_dir / name}")
    meta = {"command": command, "seed": args.seed, "threads": args.threads,
            "config": body["config"], "files": files,
            "table_meta": {t["name"]: t["meta"] for t in body["tables"]}}
    with open(out_dir / _META_NAME, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out_dir / "run_config.ini", "w", encoding="utf-8") as fh:
        fh.write(dump_config(config_from_sections(body["config"])))
    return 0


def _cmd_verify(args) -> int:
    out_dir = Path(args.out)
    try:
        with open(out_dir / _META_NAME, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
        cfg = config_from_sections(meta["config"])
        tables = run_command(meta["command"], cfg, seed=meta["seed"],
                             threads=args.threads)
    except Exception as exc:
        _write_error(out_dir, "verify", type(exc).__name__, str(exc))
        return 1

    checked = 0
    mismatches = []
    for table in tables:
        path = out_dir / f"{table.name}.csv"
        try:
            file_columns, file_rows = read_csv(path)
        except (OSError, ValueError) as exc:
            mismatches.append({"table": table.name, "row": -1, "column": "",
                               "file_value": "", "recomputed": "",
                               "note": f"unreadable: {exc}"})
            continue
        fresh = format_rows(table.rows)
        if file_columns != list(table.columns) or len(file_rows) != len(fresh):
            mismatches.append({"table": table.name, "row": -1, "column": "",
                               "file_value": f"{len(file_rows)} rows",
                               "recomputed": f"{len(fresh)} rows",
                               "note": "shape or header drift"})
            continue
        total = len(fresh) * len(table.columns)
        sample = max(1, round(args.fraction * total))
        rng = np.random.default_rng(
            seed_sequence(meta["seed"], "verify", table.name))
        picks = rng.choice(total, size=min(sample, total), replace=False)
        for flat in sorted(int(p) for p in picks):
            i, j = divmod(flat, len(table.columns))
            checked += 1
            if file_rows[i][j] != fresh[i][j]:
                mismatches.append({"table": table.name, "row": i,
                                   "column": table.columns[j],
                                   "file_value": file_rows[i][j],
                                   "recomputed": fresh[i][j]})

    report = {"command": meta["command"], "checked_cells": checked,
              "mismatches": mismatches}
    with open(out_dir / _VERIFY_NAME, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if not mismatches:
        (out_dir / _ERROR_NAME).unlink(missing_ok=True)
    print(f"verify: checked {checked} cells, "
          f"{len(mismatches)} mismatch(es)")
    if mismatches:
        _write_error(out_dir, "verify", "VerificationError",
                     f"{len(mismatches)} sampled cell(s) disagree")
        return 1
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="thinprimes",
        description="thin-prime set experiments: counting, exponential sums, "
                    "Vaughan pieces, Z_N transference and majorant ratios")
    sub = parser.add_subparsers(dest="command", required=True)

    for command in COMMANDS:
        p = sub.add_parser(command, help=f"run the {command} experiment")
        p.add_argument("--config", default=None, help="INI config path")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=0, help="64-bit root seed")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--server", default=None,
                       help="base URL of a running service; default in-process")

    pv = sub.add_parser("verify", help="recompute a cell sample from run_meta.json")
    pv.add_argument("--out", default="out", help="directory of a previous run")
    pv.add_argument("--fraction", type=float, default=0.01,
                    help="fraction of cells to recheck")
    pv.add_argument("--threads", type=int, default=1)

    ps = sub.add_parser("serve", help="start the HTTP service")
    ps.add_argument("--host", default="127.0.0.1")
    ps.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "serve":
        return _cmd_serve(args)
    return _cmd_run(args.command, args)


if __name__ == "__main__":
    sys.exit(main())
