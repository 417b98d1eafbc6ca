"""Command-line entry point.

Subcommands mirror the HTTP routes one to one.  By default requests are
served in-process; pass --server to talk to a running instance instead.
Exit codes: 0 success, 1 verification failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from pydantic import ValidationError

from .service import handlers
from .service.models import (
    FieldRequest,
    MatrixJSON,
    MubsRequest,
    RingRequest,
    TomoRequest,
    VerifyRequest,
)


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mubkit",
        description="Construct and verify complete sets of mutually unbiased bases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", metavar="URL", help="send the request to a running service")

    dim = argparse.ArgumentParser(add_help=False)
    dim.add_argument("--p", type=int, required=True, help="field characteristic (prime)")
    dim.add_argument("--m", type=int, default=1, help="extension degree (default 1)")

    p_field = sub.add_parser("field", parents=[common, dim], help="export arithmetic tables")
    p_field.add_argument("--format", choices=("json", "csv", "pretty"), default="json")

    p_mubs = sub.add_parser("mubs", parents=[common, dim], help="emit the N+1 bases")
    p_mubs.add_argument("--phase-k", type=int, default=0, help="state labeling choice")

    p_verify = sub.add_parser("verify", parents=[common, dim], help="run verification sweeps")
    p_verify.add_argument("--phase-k", type=int, default=0)
    p_verify.add_argument("--dense-cap", type=int, default=None, help="largest N for dense checks")
    p_verify.add_argument(
        "--checks", default=None, help="comma-separated subset of sweeps to run"
    )
    p_verify.add_argument(
        "--inject-phase-error",
        action="store_true",
        help="corrupt one amplitude first; verification must then fail",
    )

    p_tomo = sub.add_parser("tomo", parents=[common, dim], help="tomography round trips")
    p_tomo.add_argument("--phase-k", type=int, default=0)
    p_tomo.add_argument("--seeds", type=int, default=10, help="number of random states")
    p_tomo.add_argument("--tol", type=float, default=1e-9)
    p_tomo.add_argument("--rho", metavar="FILE", help="JSON file with re/im arrays to reconstruct")

    p_ring = sub.add_parser("ring", parents=[common], help="scan shift/clock classes over Z_n")
    p_ring.add_argument("--n", type=int, required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_rho(path: str) -> MatrixJSON:
    with open(path) as fh:
        return MatrixJSON(**json.load(fh))


def _request_for(args: argparse.Namespace):
    if args.command == "field":
        return FieldRequest(p=args.p, m=args.m, format=args.format)
    if args.command == "mubs":
        return MubsRequest(p=args.p, m=args.m, phase_k=args.phase_k)
    if args.command == "verify":
        checks = args.checks.split(",") if args.checks else None
        return VerifyRequest(
            p=args.p,
            m=args.m,
            phase_k=args.phase_k,
            dense_cap=args.dense_cap,
            inject_phase_error=args.inject_phase_error,
            checks=checks,
        )
    if args.command == "tomo":
        rho = _load_rho(args.rho) if args.rho else None
        return TomoRequest(
            p=args.p, m=args.m, phase_k=args.phase_k, seeds=args.seeds, tol=args.tol, rho=rho
        )
    if args.command == "ring":
        return RingRequest(n=args.n)
    raise AssertionError(f"unroutable command {args.command}; unreachable")


def _dispatch_local(command: str, req) -> tuple[Any, str | None]:
    # returns (json document, plain text); exactly one is set
    if command == "field":
        if req.format == "json":
            return handlers.handle_field(req).model_dump(mode="json"), None
        return None, handlers.handle_field_text(req)
    table = {
        "mubs": handlers.handle_mubs,
        "verify": handlers.handle_verify,
        "tomo": handlers.handle_tomo,
        "ring": handlers.handle_ring,
    }
    return table[command](req).model_dump(mode="json"), None


def _dispatch_server(server: str, command: str, req) -> tuple[Any, str | None]:
    import httpx

    url = server.rstrip("/") + "/" + command
    resp = httpx.post(url, json=req.model_dump(mode="json"), timeout=300.0)
    if resp.status_code == 422:
        raise ValueError(resp.json().get("detail", resp.text))
    resp.raise_for_status()
    if resp.headers.get("content-type", "").startswith("application/json"):
        return resp.json(), None
    return None, resp.text


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0
    try:
        req = _request_for(args)
        if args.server:
            doc, text = _dispatch_server(args.server, args.command, req)
        else:
            doc, text = _dispatch_local(args.command, req)
    except (ValueError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # httpx errors and friends: config problem, not a crash
        if type(exc).__module__.startswith("httpx"):
            print(f"error: {exc}", file=sys.stderr)
            return 2
        raise
    if text is not None:
        sys.stdout.write(text)
    else:
        sys.stdout.write(canonical_json(doc))
    if isinstance(doc, dict) and doc.get("passed") is False:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
