"""Thin command-line client for the tracekit service.

Every subcommand builds a request, sends it to the service, and renders the
response.  By default the requests run against an in-process copy of the
application (no socket involved); pass ``--url`` to talk to a running
server instead, and use ``serve`` to start one.

Exit codes: 0 success / all checks passed; 1 a check failed, machines are
inequivalent, or the computation itself failed; 2 usage, parse, shape or
workspace errors.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

from .workspace import canonical_json

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _call(url: str | None, path: str, payload: dict) -> httpx.Response:
    if url:
        with httpx.Client(base_url=url, timeout=600.0) as client:
            return client.post(path, json=payload)

    from .service.app import app

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://tracekit.internal") as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _fail_from(resp: httpx.Response) -> int:
    try:
        err = resp.json()["error"]
        print(f"error ({err['kind']}): {err['message']}", file=sys.stderr)
        if resp.status_code == 409:
            return EXIT_FAIL
    except (KeyError, ValueError):
        print(f"error: service returned {resp.status_code}: {resp.text}", file=sys.stderr)
    return EXIT_USAGE


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    except json.JSONDecodeError as exc:
        print(f"error: {path} is not valid JSON: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def cmd_eval(args) -> int:
    payload = {"workspace": _load_json(args.workspace), "term": args.term,
               "instance": args.instance}
    if args.run:
        payload["run"] = _load_json(args.run)
    resp = _call(args.url, "/eval", payload)
    if resp.status_code != 200:
        return _fail_from(resp)
    body = resp.json()
    if args.json:
        print(canonical_json(body["morphism"]["payload"]))
    else:
        print(body["morphism"]["text"])
    if body.get("outputs") is not None:
        print(canonical_json(body["outputs"]))
    return EXIT_OK


def cmd_check(args) -> int:
    payload = {"instance": args.instance, "axiom": args.axiom,
               "samples": args.samples, "seed": args.seed}
    resp = _call(args.url, "/check", payload)
    if resp.status_code != 200:
        return _fail_from(resp)
    body = resp.json()
    for rep in body["reports"]:
        if rep["skipped"]:
            verdict = f"skipped ({rep['skipped']})"
        elif rep["passed"]:
            verdict = f"pass ({rep['samples']} samples)"
        else:
            verdict = f"FAIL ({len(rep['failures'])} failures / {rep['samples']} samples)"
        print(f"{args.instance} {rep['axiom']}: {verdict}")
        for f in rep["failures"][:3]:
            print(f"  sample {f['sample']}: {f['description']}", file=sys.stderr)
            print(f"  lhs:\n{f['lhs']}\n  rhs:\n{f['rhs']}", file=sys.stderr)
    return EXIT_OK if body["passed"] else EXIT_FAIL


def cmd_bisim(args) -> int:
    payload = {"left": _load_json(args.left), "right": _load_json(args.right)}
    resp = _call(args.url, "/bisim", payload)
    if resp.status_code != 200:
        return _fail_from(resp)
    body = resp.json()
    if body["equivalent"]:
        print("equivalent")
        return EXIT_OK
    word = " ".join(f"{w}:{lab}" for w, lab in body["witness"])
    print(f"inequivalent, witness input word: {word}")
    return EXIT_FAIL


def cmd_plays(args) -> int:
    payload = {"workspace": _load_json(args.workspace), "term": args.term,
               "instance": args.instance, "depth": args.depth}
    resp = _call(args.url, "/plays", payload)
    if resp.status_code != 200:
        return _fail_from(resp)
    for line in resp.json()["plays"]:
        print(line)
    return EXIT_OK


def cmd_trace_log(args) -> int:
    payload = {"workspace": _load_json(args.workspace), "term": args.term,
               "instance": args.instance}
    resp = _call(args.url, "/trace-log", payload)
    if resp.status_code != 200:
        return _fail_from(resp)
    for line in resp.json()["lines"]:
        print(line)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tracekit", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--url", default=None,
                   help="base URL of a running service (default: in-process)")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a diagram term in a workspace")
    ev.add_argument("--instance", default=None)
    ev.add_argument("--workspace", required=True)
    ev.add_argument("--term", required=True)
    ev.add_argument("--run", default=None, help="JSON file of inputs to apply the result to")
    fmt = ev.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--text", action="store_true", default=True)
    ev.set_defaults(func=cmd_eval)

    ck = sub.add_parser("check", help="run the feedback-law suite")
    ck.add_argument("--instance", required=True)
    ck.add_argument("--axiom", default="all")
    ck.add_argument("--samples", type=int, default=100)
    ck.add_argument("--seed", type=int, default=0)
    ck.set_defaults(func=cmd_check)

    bs = sub.add_parser("bisim", help="decide behavioural equivalence of two machines")
    bs.add_argument("left")
    bs.add_argument("right")
    bs.set_defaults(func=cmd_bisim)

    pl = sub.add_parser("plays", help="enumerate the plays of a machine term")
    pl.add_argument("--instance", default=None)
    pl.add_argument("--workspace", required=True)
    pl.add_argument("--term", required=True)
    pl.add_argument("--depth", type=int, required=True)
    pl.set_defaults(func=cmd_plays)

    tl = sub.add_parser("trace-log", help="log token paths through a feedback term")
    tl.add_argument("--instance", default=None)
    tl.add_argument("--workspace", required=True)
    tl.add_argument("--term", required=True)
    tl.set_defaults(func=cmd_trace_log)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    sv.set_defaults(func=cmd_serve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other exits
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
