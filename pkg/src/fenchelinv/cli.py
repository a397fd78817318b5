"""Command-line front end.

Every subcommand writes one record per grid point, either as JSON lines or
as CSV.  Numbers carry 12 significant digits and infinities are spelled
``inf`` / ``-inf`` in both formats.

Exit codes: 0 on success, 2 for an invalid specification or argument,
3 when a solver fails to converge.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .bounds import sum_quantile_bound
from .convolve import holder_convolve_detail
from .errors import FenchelError, IndeterminateSum, InvalidParam, NonConvergence
from .extreal import format_ext
from .ratefn import distribution_from_json, make_ratefn, parse_spec
from .transform import (
    SolverConfig,
    conjugate_detail,
    lower_inverse_detail,
    profile,
    upper_inverse_detail,
)
from .verify import verify_bound

__all__ = ["main", "run", "parse_grid"]


def parse_grid(text: str) -> list[float]:
    """``"0.5,1,2"`` or ``"start:stop:count"`` (inclusive, evenly spaced)."""
    text = text.strip()
    if not text:
        raise InvalidParam("empty grid")
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise InvalidParam(f"range grid must be start:stop:count, got {text!r}")
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
            if count < 1:
                raise InvalidParam("grid count must be at least 1")
            return [start] if count == 1 else np.linspace(start, stop, count).tolist()
        values = [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise InvalidParam(f"bad grid {text!r}: {exc}") from exc
    if not values or any(math.isnan(v) for v in values):
        raise InvalidParam(f"bad grid {text!r}")
    return values


def _load_json(text: str, opener: str) -> Any:
    source = text.strip()
    if not source.startswith(opener):
        path = Path(source)
        if not path.is_file():
            raise InvalidParam(f"no such spec file: {source}")
        source = path.read_text()
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise InvalidParam(f"malformed JSON: {exc}") from exc


def _spec_list(text: str) -> list:
    """Accepts a JSON array of specs, or a single spec object."""
    obj = _load_json(text, "[" if text.strip().startswith("[") else "{")
    items = obj if isinstance(obj, list) else [obj]
    if not items:
        raise InvalidParam("the spec list is empty")
    return items


def _ratefns(args) -> list:
    if args.dists is not None:
        items = _spec_list(args.dists)
    elif args.dist is not None:
        items = [_load_json(args.dist, "{")]
    else:
        raise InvalidParam("--dist or --dists is required")
    return [make_ratefn(parse_spec(o)) for o in items]


def _distributions(args) -> list:
    text = args.dists if args.dists is not None else args.dist
    if text is None:
        raise InvalidParam("--dists is required")
    return [distribution_from_json(o) for o in _spec_list(text)]


def _one_ratefn(args):
    fns = _ratefns(args)
    if len(fns) != 1:
        raise InvalidParam("this subcommand takes exactly one --dist")
    return fns[0]


# ---------------------------------------------------------------- records


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return format_ext(v) if math.isinf(v) else float(format_ext(v))
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _csv_cell(value: Any) -> str:
    if isinstance(value, float):
        return format_ext(value)
    return str(value)


def _flatten(record: dict) -> dict:
    out = {}
    for key, value in record.items():
        if key == "flags":
            out[key] = ";".join(value)
        elif isinstance(value, list):
            for i, v in enumerate(value):
                out[f"{key}_{i}"] = _csv_cell(v)
        else:
            out[key] = _csv_cell(value)
    return out


def emit(records: Iterable[dict], fmt: str, stream) -> None:
    records = [{k: _plain(v) for k, v in r.items()} for r in records]
    if fmt == "json":
        for r in records:
            stream.write(json.dumps(r) + "\n")
        return
    rows = [_flatten(r) for r in records]
    fields: list[str] = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    writer = csv.DictWriter(stream, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def _record(obj) -> dict:
    return asdict(obj) if is_dataclass(obj) else dict(obj)


# ------------------------------------------------------------ subcommands


def _cmd_conjugate(args, cfg):
    L = _one_ratefn(args)
    for x in parse_grid(args.x):
        est = conjugate_detail(L, x, cfg)
        yield {"x": x, "value": est.value, "flags": list(est.flags)}


def _cmd_inverse(args, cfg):
    L = _one_ratefn(args)
    fn = lower_inverse_detail if args.which == "lower" else upper_inverse_detail
    for u in parse_grid(args.u):
        est = fn(L, u, cfg)
        yield {"u": u, "which": args.which, "value": est.value, "flags": list(est.flags)}


def _cmd_convolve(args, cfg):
    parts = _ratefns(args)
    for t in parse_grid(args.t):
        est = holder_convolve_detail(parts, t, cfg)
        yield {"t": t, "value": est.value, "flags": list(est.flags)}


def _cmd_bound(args, cfg):
    dists = _distributions(args)
    for u in parse_grid(args.u):
        yield _record(sum_quantile_bound(dists, u, cfg))


def _cmd_verify(args, cfg):
    dists = _distributions(args)
    n = int(args.samples)
    if n < 1000:
        raise InvalidParam("--samples must be at least 1000")
    for u in parse_grid(args.u):
        rep = verify_bound(
            dists, u, n, args.seed, cfg, event=args.event, workers=args.workers
        )
        yield _record(rep)


def _cmd_profile(args, cfg):
    prof = profile(_one_ratefn(args), cfg)
    yield _record(prof)


_COMMANDS = {
    "conjugate": _cmd_conjugate,
    "inverse": _cmd_inverse,
    "convolve": _cmd_convolve,
    "bound": _cmd_bound,
    "verify": _cmd_verify,
    "profile": _cmd_profile,
}


def _samples(text: str) -> int:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not value.is_integer() or value < 1:
        raise argparse.ArgumentTypeError("samples must be a positive integer")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dist", help="one spec: inline JSON object or a file path")
    common.add_argument("--dists", help="JSON array of specs, inline or a file path")
    common.add_argument("--tol", type=float, default=1e-10, help="relative tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=_samples, default=10**6)
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(
        prog="fenchelinv",
        description="Conjugates, generalized inverses, Hölder convolutions "
        "and Cramér-Chernoff quantile bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("conjugate", parents=[common], help="L*(x) on an x-grid")
    p.add_argument("--x", required=True)
    p = sub.add_parser("inverse", parents=[common], help="li L(u) or tli L(u)")
    p.add_argument("--u", required=True)
    p.add_argument("--which", choices=("lower", "upper"), default="lower")
    p = sub.add_parser("convolve", parents=[common], help="Hölder convolution on a t-grid")
    p.add_argument("--t", required=True)
    p = sub.add_parser("bound", parents=[common], help="quantile bound for a sum")
    p.add_argument("--u", required=True)
    p = sub.add_parser("verify", parents=[common], help="Monte Carlo check of the bound")
    p.add_argument("--u", required=True)
    p.add_argument("--event", choices=("strict", "weak"), default="strict")
    p.add_argument("--workers", type=int, default=1)
    sub.add_parser("profile", parents=[common], help="landmarks of L*")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if not args.tol > 0:
            raise InvalidParam("--tol must be positive")
        cfg = SolverConfig(rel_tol=args.tol)
        records = list(_COMMANDS[args.command](args, cfg))
    except InvalidParam as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (NonConvergence, IndeterminateSum) as exc:
        print(f"error: {exc}", file=stderr)
        return 3
    except FenchelError as exc:  # pragma: no cover - every subclass is handled above
        print(f"error: {exc}", file=stderr)
        return 3
    emit(records, args.format, stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
