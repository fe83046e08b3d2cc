"""Command-line front end: a thin HTTP client for the census service.

Without --server the app is mounted in-process (same request/response
path as a deployed service, no socket); with --server URL requests go
over the network.  All JSON files are written through one canonical
serializer, so identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from contextlib import contextmanager

import httpx

from .census import canonical_json


class _InProcessClient:
    """Runs requests through the ASGI app without a socket."""

    def __init__(self):
        from .service.app import create_app

        self._transport = httpx.ASGITransport(app=create_app())

    def post(self, path: str, json: dict) -> httpx.Response:
        async def go():
            async with httpx.AsyncClient(
                transport=self._transport,
                base_url="http://mmcbrace.local",
                timeout=None,
            ) as client:
                return await client.post(path, json=json)

        return asyncio.run(go())


@contextmanager
def _client(server: str | None):
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            yield client
    else:
        yield _InProcessClient()


def _call(client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            doc = resp.json()
            msg = f"{doc.get('error', resp.status_code)}: {doc.get('detail', '')}"
        except json.JSONDecodeError:
            msg = resp.text
        print(f"error: {msg}", file=sys.stderr)
        raise SystemExit(1)
    return resp.json()


def _write(path: str | None, doc) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(doc))


def _parse_shape(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}; expected e.g. 2,16")


def cmd_aut(args) -> int:
    with _client(args.server) as client:
        doc = _call(client, "/aut", {"shape": args.shape, "bound": args.bound})
    print(f"N = {'x'.join(f'Z/{q}' for q in doc['shape'])}")
    print(f"|Aut(N)| = {doc['aut_order']}")
    print(f"|Sylow-2| = {doc['sylow2_order']}")
    _write(args.out, doc)
    return 0


def cmd_census(args) -> int:
    payload = {
        "m": args.m,
        "shape": args.shape,
        "unpruned_oracle": args.unpruned_oracle,
        "workers": args.workers,
        "time_budget_seconds": args.time_budget,
        "bound": args.bound,
    }
    with _client(args.server) as client:
        doc = _call(client, "/census", payload)
    summary = doc["summary"]
    print(
        f"m={args.m} shape={','.join(map(str, args.shape))}: "
        f"{summary['subgroup_count']} subgroups, "
        f"{summary['iso_class_count']} iso classes"
    )
    if summary["oracle_match"] is not None:
        print(f"completeness oracle: {'match' if summary['oracle_match'] else 'MISMATCH'}")
    print(doc["table"])
    _write(args.out, doc["census"])
    if summary["oracle_match"] is False:
        return 1
    return 0


def cmd_scan_additive(args) -> int:
    payload = {"m": args.m, "time_budget_seconds": args.time_budget, "bound": args.bound}
    with _client(args.server) as client:
        doc = _call(client, "/scan-additive", payload)
    print(f"{'shape':<16}{'exists':>8}{'subgroups':>11}{'classes':>9}")
    for row in doc["rows"]:
        name = "x".join(f"Z/{q}" for q in row["shape"])
        print(
            f"{name:<16}{('yes' if row['exists'] else 'no'):>8}"
            f"{row['subgroup_count']:>11}{row['iso_class_count']:>9}"
        )
    _write(args.out, doc)
    return 0


def cmd_families(args) -> int:
    with _client(args.server) as client:
        doc = _call(client, "/families", {"m": args.m})
    print(f"m={args.m}: {len(doc['descriptors'])} descriptors, "
          f"{doc['class_count']} iso classes")
    print(f"{'socle':<12}{'classes':>8}")
    for label, k in doc["per_socle_classes"].items():
        print(f"{label:<12}{k:>8}")
    _write(args.out, doc)
    return 0


def cmd_verify(args) -> int:
    payload = {
        "m": args.m,
        "unpruned_oracle": args.unpruned_oracle,
        "workers": args.workers,
        "time_budget_seconds": args.time_budget,
        "bound": args.bound,
    }
    with _client(args.server) as client:
        doc = _call(client, "/verify", payload)
    for item in doc["items"]:
        status = "PASS" if item["passed"] else "FAIL"
        print(f"{status}  {item['name']:22s} {item['seconds']:8.2f}s")
    print(f"{'PASS' if doc['passed'] else 'FAIL'}  overall (m={args.m})")
    _write(args.out, doc)
    return 0 if doc["passed"] else 1


def cmd_export(args) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        census = json.load(fh)
    with _client(args.server) as client:
        doc = _call(client, "/census/normalize", {"census": census})
    _write(args.out, doc["census"])
    print(f"wrote canonical census to {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("mmcbrace.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmcbrace",
        description="Census of right braces with modular maximal-cyclic adjoint group",
    )
    parser.add_argument("--server", default=None,
                        help="URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_m=True):
        if with_m:
            p.add_argument("--m", type=int, default=3)
        p.add_argument("--out", default=None, help="write JSON result here")
        p.add_argument("--workers", type=int, default=None,
                       help="parallelism hint (never affects output)")
        p.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")
        p.add_argument("--bound", type=int, default=None,
                       help="override enumeration bound (also: BRACE_CENSUS_BOUND)")

    p = sub.add_parser("aut", help="|Aut(N)| and Sylow-2 size")
    p.add_argument("--shape", type=_parse_shape, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(fn=cmd_aut)

    p = sub.add_parser("census", help="regular-subgroup census of Hol(N)")
    p.add_argument("--shape", type=_parse_shape, required=True)
    p.add_argument("--unpruned-oracle", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_census)

    p = sub.add_parser("scan-additive", help="all five candidate additive shapes")
    common(p)
    p.set_defaults(fn=cmd_scan_additive)

    p = sub.add_parser("families", help="build and classify the descriptor braces")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_families)

    p = sub.add_parser("verify", help="run the full theorem suite")
    p.add_argument("--unpruned-oracle", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("export", help="re-serialize a census file canonically")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
