"""Command-line client for the build/certify/compare/degrees pipeline.

By default every command runs in-process; pass --server URL to post the
same request to a running service instead.  With --format structured (or
--out) the report is emitted as JSON with sorted keys, so a fixed request
and seed always produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request

from pydantic import ValidationError

from .schemas import (
    BuildRequest,
    CertifyRequest,
    CompareRequest,
    DegreesRequest,
    run_build,
    run_certify,
    run_compare,
    run_degrees,
)

_RUNNERS = {
    "build": (BuildRequest, run_build),
    "certify": (CertifyRequest, run_certify),
    "compare": (CompareRequest, run_compare),
    "degrees": (DegreesRequest, run_degrees),
}


def _load_spec(path):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    # a build report written with --out is itself a valid module source
    if isinstance(obj, dict) and obj.get("command") == "build" and "module" in obj:
        return obj["module"]
    return obj


def _csv(text):
    return [part.strip() for part in text.split(",") if part.strip()]


def _window_payload(args):
    window = {"base": _csv(args.window_base[0])}
    if args.window_radius is not None:
        window["radius"] = args.window_radius
    return window


def _request_payload(args):
    if args.command in ("build", "certify") and len(args.spec) != 1:
        raise ValueError("%s takes exactly one --spec file" % args.command)
    if args.command == "build":
        return {"spec": _load_spec(args.spec[0])}
    if args.command == "certify":
        if len(args.window_base) != 1:
            raise ValueError("certify takes exactly one --window-base")
        payload = {"spec": _load_spec(args.spec[0]), "window": _window_payload(args)}
        if args.probes:
            payload["probes"] = _csv(args.probes)
        return payload
    if args.command == "compare":
        if len(args.spec) != 2:
            raise ValueError("compare needs exactly two --spec files")
        payload = {
            "left": _load_spec(args.spec[0]),
            "right": _load_spec(args.spec[1]),
            "window": _window_payload(args),
        }
        if len(args.window_base) == 2:
            payload["right_base"] = _csv(args.window_base[1])
        elif len(args.window_base) > 2:
            raise ValueError("--window-base may be given at most twice")
        if args.probes:
            payload["probes"] = _csv(args.probes)
        return payload
    payload = {
        "algebra": {"family": args.family, "n": args.n},
        "count": args.count,
        "seed": args.seed,
    }
    if args.weights:
        payload["weights"] = [_csv(row) for row in args.weights.split(";")]
    return payload


def _post(server, command, payload):
    body = json.dumps(payload).encode("utf-8")
    req = urllib.request.Request(
        server.rstrip("/") + "/" + command,
        data=body,
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return json.loads(resp.read().decode("utf-8"))
    except urllib.error.HTTPError as err:
        detail = err.read().decode("utf-8", errors="replace")
        try:
            detail = json.loads(detail).get("detail", detail)
        except ValueError:
            pass
        raise ValueError("server rejected request: %s" % detail) from None


def _structured(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hfree", description="Build, certify, and compare weight families."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, specs=0, window=False):
        if specs:
            p.add_argument(
                "--spec",
                action="append",
                required=True,
                metavar="FILE",
                help="module spec JSON file%s" % (" (twice)" if specs == 2 else ""),
            )
        if window:
            p.add_argument(
                "--window-base",
                action="append",
                required=True,
                metavar="C1,C2,...",
                help="base weight coordinates, exact rationals like 1/2,-3"
                " (compare accepts a second one for the right module)",
            )
            p.add_argument("--window-radius", type=int, default=None)
            p.add_argument(
                "--probes",
                default=None,
                metavar="NAME,NAME,...",
                help="subset of the default probe catalog",
            )
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, metavar="FILE")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--server", default=None, metavar="URL")

    common(sub.add_parser("build", help="construct a module and check its relations"), specs=1)
    common(
        sub.add_parser("certify", help="fit trace polynomials over a weight window"),
        specs=1,
        window=True,
    )
    common(
        sub.add_parser("compare", help="test two modules for almost-equivalence"),
        specs=2,
        window=True,
    )
    deg = sub.add_parser("degrees", help="tabulate degree polynomials deg_k")
    deg.add_argument("--family", choices=("A", "C"), default="A")
    deg.add_argument("-n", type=int, required=True)
    deg.add_argument(
        "--weights",
        default=None,
        metavar="W;W;...",
        help="semicolon-separated weights, each C1,C2,...; sampled when omitted",
    )
    deg.add_argument("--count", type=int, default=10)
    common(deg)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    model, runner = _RUNNERS[args.command]
    try:
        payload = _request_payload(args)
        if args.server:
            report = _post(args.server, args.command, payload)
        else:
            report = runner(model.model_validate(payload))
    except (ValueError, ValidationError, OSError) as err:
        print("error: %s" % err, file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(_structured(report))
    if args.format == "structured":
        sys.stdout.write(_structured(report))
    else:
        sys.stdout.write(report["human"])
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
