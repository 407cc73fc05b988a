"""Command-line interface.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 usage or
parse error, 3 internal invariant violation. Data goes to stdout, logs to
stderr. Output is JSON when stdout is not a terminal unless ``--format``
says otherwise.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__
from .canon import canonicalize
from .errors import InputError, InvariantViolation, SpectraError
from .search import MAX_N, VERIFY_MAX_N, enumerate_classes, verify_conant
from .spectrum import equivalent, format_spectrum, parse_spectrum, profile

log = logging.getLogger("spectra")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3
LONG_RUN_N = 7


@dataclass
class RunConfig:
    command: str
    jobs: int = 1
    output_path: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.format not in ("json", "text"):
            raise ValueError(f"unknown format {self.format!r}")


class UsageError(Exception):
    pass


def _dumps(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":"))


def _emit(cfg: RunConfig, doc: dict, text: str) -> None:
    print(_dumps(doc) if cfg.format == "json" else text)


def _default_jobs() -> int:
    raw = os.environ.get("SPECTRA_JOBS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning("ignoring SPECTRA_JOBS=%r, not an integer", raw)
        return 1


def cmd_profile(cfg: RunConfig, args) -> int:
    p = profile(parse_spectrum(args.spectrum))
    doc = {**p.to_json(), "version": __version__}
    text = f"n={p.n} " + (" ".join(f"({i},{j},{k})" for i, j, k in p.triples) or "(none)")
    _emit(cfg, doc, text)
    return EXIT_OK


def cmd_equiv(cfg: RunConfig, args) -> int:
    same = equivalent(parse_spectrum(args.a), parse_spectrum(args.b))
    verdict = "equivalent" if same else "inequivalent"
    _emit(cfg, {"verdict": verdict, "version": __version__}, verdict)
    return EXIT_OK if same else EXIT_NEGATIVE


def cmd_canon(cfg: RunConfig, args) -> int:
    x = parse_spectrum(args.spectrum)
    report = canonicalize(x)
    if args.band:
        doc = {
            "version": __version__,
            "input": [str(v) for v in x.entries],
            "conant_band": list(report.conant_band.entries),
        }
        _emit(cfg, doc, str(report.conant_band))
        return EXIT_OK
    doc = report.to_json()
    text = "\n".join([
        f"input:  {format_spectrum(x)}",
        f"vertex: {','.join(doc['vertex']['point'])} (basis det {report.vertex.basis_det})",
        f"lifted: {report.lifted}",
        f"band:   {report.conant_band}",
        "checks: " + ", ".join(f"{k}={'ok' if v else 'FAILED'}" for k, v in doc["bounds_checked"].items()),
    ])
    _emit(cfg, doc, text)
    return EXIT_OK


def _write_atlas(cfg: RunConfig, atlas) -> None:
    if cfg.output_path:
        atlas.write(cfg.output_path)
        log.info("wrote %d atlas records to %s", len(atlas.records), cfg.output_path)


def cmd_verify_conant(cfg: RunConfig, args) -> int:
    n = args.n
    if not 1 <= n <= VERIFY_MAX_N:
        raise UsageError(f"unsupported n={n}; verify-conant handles 1..{VERIFY_MAX_N}")
    if n >= LONG_RUN_N and not args.long:
        raise UsageError(f"n={n} is beyond desk scale; pass --long (and ideally --checkpoint) to proceed")
    report = verify_conant(n, jobs=cfg.jobs, checkpoint_path=args.checkpoint)
    _write_atlas(cfg, report.atlas)
    doc = report.to_json()
    text = (
        f"n={n}: {report.class_count} classes, {report.satisfied} satisfied, "
        f"{report.no_witness} without a witness in Conant's box ({report.wall_time:.2f}s)"
    )
    _emit(cfg, doc, text)
    return EXIT_OK if report.no_witness == 0 else EXIT_NEGATIVE


def cmd_enumerate(cfg: RunConfig, args) -> int:
    n = args.n
    if not 1 <= n <= MAX_N:
        raise UsageError(f"unsupported n={n}; enumerate handles 1..{MAX_N}")
    atlas = enumerate_classes(n, jobs=cfg.jobs, strategy=args.strategy)
    if cfg.output_path:
        _write_atlas(cfg, atlas)
        _emit(cfg, {"version": __version__, "n": n, "classes": len(atlas.records)},
              f"n={n}: {len(atlas.records)} classes")
    else:
        sys.stdout.write(atlas.dumps())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", choices=("json", "text"), help="output format (default: text on a terminal, json otherwise)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="triangle profile of a spectrum")
    p.add_argument("spectrum", help='comma separated entries, e.g. "1/2,0.75,2"')
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("equiv", help="are two spectra equivalent (exit 0) or not (exit 1)")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("canon", help="vertex, bounded integral representative and band representative")
    p.add_argument("spectrum")
    p.add_argument("--band", action="store_true", help="print only the representative with 2^i <= y_i <= 2^(n+1)")
    p.set_defaults(func=cmd_canon)

    for name, func, help_ in (
        ("verify-conant", cmd_verify_conant, "check Conant's box for every class of length n"),
        ("enumerate", cmd_enumerate, "list every class of length n with its least witness"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $SPECTRA_JOBS or 1)")
        p.add_argument("--out", help="write the line-delimited atlas to this path")
        p.set_defaults(func=func)
        if name == "verify-conant":
            p.add_argument("--checkpoint", help="append-only progress log; rerun with the same path to resume")
            p.add_argument("--long", action="store_true", help=f"allow n >= {LONG_RUN_N}")
        else:
            p.add_argument("--strategy", choices=("box", "profile"), default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    fmt = args.format or ("text" if sys.stdout.isatty() else "json")
    jobs = getattr(args, "jobs", None)
    try:
        cfg = RunConfig(args.command, jobs if jobs is not None else _default_jobs(), getattr(args, "out", None), fmt)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return args.func(cfg, args)
    except (InputError, UsageError) as exc:
        print(f"spectra: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"spectra: internal invariant violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except SpectraError as exc:
        print(f"spectra: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
