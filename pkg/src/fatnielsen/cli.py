"""Command-line entry point: ``fatnielsen <command> ...``.

Exit codes are stable and meant for scripts:

== ==========================================================
0  success
1  certificate failed verification
2  usage error (bad flags, genus mismatch)
3  boundary word not fixed by the automorphism
4  reduction got stuck before the basepoint (not an automorphism)
5  file could not be read or written
6  malformed input file
7  some generator maps to the identity
8  step cap reached
9  resource cap reached (census too large)
10 internal invariant broken or random generation gave up
== ==========================================================
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import pairings, render
from .diagram import MarkedDiagram
from .errors import (
    BoundaryNotFixed,
    FatgraphNielsenError,
    GuidedInvariantViolated,
    IdentityLabel,
    InvalidBasepoint,
    InvalidDiagram,
    ParseError,
    ShapeRecurrenceTimeout,
    StepLimitExceeded,
    StuckNotAtBasepoint,
)
from .factor import Certificate, _loads, factor, parse_images, random_mapping_class, validate_automorphism, verify
from .fatgraph import boundary_cycles, from_shape
from .freegroup import Basepoint
from .reduction import Strategy, reduction_states

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_BOUNDARY = 3
EXIT_STUCK = 4
EXIT_IO = 5
EXIT_PARSE = 6
EXIT_IDENTITY = 7
EXIT_STEP_LIMIT = 8
EXIT_RESOURCE = 9
EXIT_INTERNAL = 10

# order matters: subclasses before their bases
_EXIT_FOR = [
    (BoundaryNotFixed, EXIT_BOUNDARY),
    (IdentityLabel, EXIT_IDENTITY),
    (StuckNotAtBasepoint, EXIT_STUCK),
    (StepLimitExceeded, EXIT_STEP_LIMIT),
    (ParseError, EXIT_PARSE),
    (InvalidBasepoint, EXIT_PARSE),
    (InvalidDiagram, EXIT_PARSE),
    (ShapeRecurrenceTimeout, EXIT_INTERNAL),
    (GuidedInvariantViolated, EXIT_INTERNAL),
]


class UsageError(Exception):
    pass


class ResourceCap(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    genus: int | None
    base: Basepoint | None
    strategy: Strategy
    seed: int
    max_steps: int | None
    out: Path | None

    def basepoint(self, genus: int) -> Basepoint:
        if self.genus is not None and self.genus != genus:
            raise UsageError(f"--genus {self.genus} does not match input genus {genus}")
        if self.base is None:
            return Basepoint.standard(genus)
        if self.base.genus != genus:
            raise UsageError(f"basepoint has genus {self.base.genus}, input has genus {genus}")
        return self.base


def _read(path: str) -> str:
    try:
        return Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    cfg.out.write_text(text)


def _config(args) -> RunConfig:
    if args.genus is not None and args.genus < 1:
        raise UsageError("--genus must be positive")
    base = Basepoint.from_text(_read(args.basepoint)) if args.basepoint else None
    if base is not None and args.genus is not None and base.genus != args.genus:
        raise UsageError(f"basepoint has genus {base.genus}, --genus is {args.genus}")
    return RunConfig(args.genus, base, Strategy(args.strategy), args.seed, args.max_steps,
                     Path(args.out) if args.out else None)


# -- commands ----------------------------------------------------------------

def cmd_factor(cfg: RunConfig, path: str) -> int:
    rec = _loads(_read(path))
    if not isinstance(rec, dict):
        raise ParseError("automorphism file must hold one JSON object")
    genus, images = parse_images(rec)
    base = cfg.basepoint(genus)
    phi = validate_automorphism(images, base)
    cert = factor(phi, base, cfg.strategy, cfg.max_steps)
    _emit(cfg, cert.dumps())
    return EXIT_OK


def cmd_verify(cfg: RunConfig, path: str) -> int:
    cert = Certificate.loads(_read(path))
    verdict = verify(cert)
    if verdict:
        print(f"ok: {len(cert.trace.slides)} slides, energy {cert.trace.initial_energy} -> {cert.trace.final_energy}")
        return EXIT_OK
    print(f"verification failed: {verdict.reason}", file=sys.stderr)
    return EXIT_VERIFY_FAILED


def cmd_generate(cfg: RunConfig, walk_length: int) -> int:
    if cfg.genus is None and cfg.base is None:
        raise UsageError("generate needs --genus or --basepoint")
    genus = cfg.genus if cfg.genus is not None else cfg.base.genus
    phi = random_mapping_class(genus, walk_length, cfg.seed, base=cfg.basepoint(genus))
    _emit(cfg, phi.to_json())
    return EXIT_OK


def census(genus: int, limit: int) -> dict:
    """Brute-force count of pairings of 4g ends by boundary cycles and genus.

    Two tracers run on every pairing: the position-walk in ``pairings`` and
    the half-edge walk on the fatgraph built from the pairing.
    """
    n = 4 * genus
    total = pairings.double_factorial(n - 1)
    if total > limit:
        raise ResourceCap(f"{total} pairings exceed the limit {limit}")
    by_boundary: dict[int, int] = {}
    by_genus: dict[int, int] = {}
    disagreements = 0
    one_boundary_fatgraph = 0
    for partner in pairings.all_pairings(n):
        b = pairings.boundary_count(partner)
        # the smoothed last end leaves the boundary count of the closed-up graph unchanged
        b_fat = len(boundary_cycles(from_shape(partner)))
        disagreements += b != b_fat
        one_boundary_fatgraph += b_fat == 1
        by_boundary[b] = by_boundary.get(b, 0) + 1
        g = (n // 2 + 1 - b) // 2
        by_genus[g] = by_genus.get(g, 0) + 1
    return {
        "genus": genus,
        "ends": n,
        "pairings": total,
        "by_boundary_cycles": {str(k): by_boundary[k] for k in sorted(by_boundary)},
        "by_genus": {str(k): by_genus[k] for k in sorted(by_genus)},
        "one_boundary_cycle": by_boundary.get(1, 0),
        "one_boundary_cycle_fatgraph": one_boundary_fatgraph,
        "tracers_agree": disagreements == 0,
    }


def cmd_census(cfg: RunConfig, limit: int) -> int:
    if cfg.genus is None:
        raise UsageError("census needs --genus")
    report = census(cfg.genus, limit)
    _emit(cfg, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report["tracers_agree"] else EXIT_INTERNAL


def _bench_one(job) -> dict:
    genus, walk, seed, base_text, max_steps, timings = job
    base = Basepoint.from_text(base_text)
    phi = random_mapping_class(genus, walk, seed, base=base)
    row = {}
    for strategy in Strategy:
        t0 = time.perf_counter()
        cert = factor(phi, base, strategy, max_steps)
        elapsed = time.perf_counter() - t0
        if not verify(cert):
            raise AssertionError(f"bench certificate failed to verify (genus {genus}, seed {seed})")
        row[strategy.value] = (len(cert.trace.slides), elapsed if timings else None)
    return row


def bench(genera, walks, count: int, seed: int, max_steps: int | None = None,
          timings: bool = False, jobs: int = 1, base: Basepoint | None = None) -> dict:
    """Median trace length (and optionally wall time) per genus, walk length and strategy.

    Inputs are seeded; with ``timings`` off the report is byte-reproducible.
    """
    plan = []
    for g in genera:
        b = base if base is not None and base.genus == g else Basepoint.standard(g)
        for w in walks:
            for k in range(count):
                plan.append((g, w, seed * 1_000_003 + k, b.to_text(), max_steps, timings))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_bench_one, plan, chunksize=8))
    else:
        rows = [_bench_one(job) for job in plan]
    results = []
    for g in genera:
        for w in walks:
            mine = [r for job, r in zip(plan, rows) if job[0] == g and job[1] == w]
            entry = {"genus": g, "walk_length": w, "samples": len(mine)}
            for strategy in Strategy:
                steps = [r[strategy.value][0] for r in mine]
                entry[strategy.value] = {
                    "median_steps": statistics.median(steps),
                    "max_steps": max(steps),
                    "total_steps": sum(steps),
                }
                if timings:
                    entry[strategy.value]["median_seconds"] = round(
                        statistics.median(r[strategy.value][1] for r in mine), 6)
            results.append(entry)
    return {"seed": seed, "count": count, "results": results}


def cmd_bench(cfg: RunConfig, walks, count: int, timings: bool, jobs: int) -> int:
    genera = [cfg.genus] if cfg.genus is not None else [1, 2, 3]
    report = bench(genera, walks, count, cfg.seed, cfg.max_steps, timings, jobs, cfg.base)
    _emit(cfg, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _render_input(cfg: RunConfig, text: str) -> tuple[list[MarkedDiagram], list[str]]:
    first = text.lstrip().splitlines()[0] if text.strip() else ""
    head = _loads(first) if first else None
    if isinstance(head, dict) and "format" in head:
        cert = Certificate.loads(text)
        start = cert.start()
        states = reduction_states(start, cert.trace)
        captions = [f"state 0: energy {start.total_energy}"]
        for k, rec in enumerate(cert.trace.slides, 1):
            captions.append(f"state {k}: after {rec.slide}, energy {rec.energy_after}")
        return states, captions
    rec = _loads(text)
    if not isinstance(rec, dict):
        raise ParseError("expected a diagram record or a certificate")
    d = MarkedDiagram.from_record(rec, cfg.base)
    return [d], [f"energy {d.total_energy}"]


def cmd_render(cfg: RunConfig, path: str, fmt: str) -> int:
    frames, captions = _render_input(cfg, _read(path))
    if fmt == "svg":
        _emit(cfg, render.svg(frames, captions))
    else:
        _emit(cfg, render.ascii_frames(frames, captions))
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def _walks(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad walk-length list {text!r}") from None
    if not out or min(out) < 0:
        raise argparse.ArgumentTypeError("walk lengths must be nonnegative")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genus", type=int)
    common.add_argument("--basepoint", metavar="FILE", help="basepoint file: genus line, then sigma")
    common.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.EXHAUSTIVE.value)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-steps", type=int, default=None)
    common.add_argument("--out", metavar="FILE")

    p = argparse.ArgumentParser(prog="fatnielsen", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("factor", parents=[common], help="factor an automorphism into chord slides")
    s.add_argument("automorphism", help="automorphism file ('-' for stdin)")

    s = sub.add_parser("verify", parents=[common], help="replay a certificate")
    s.add_argument("certificate")

    s = sub.add_parser("generate", parents=[common], help="random mapping class from a seeded slide walk")
    s.add_argument("--walk-length", type=int, default=10)

    s = sub.add_parser("census", parents=[common], help="count pairings by boundary cycles")
    s.add_argument("--limit", type=int, default=2_000_000, help="refuse more pairings than this")

    s = sub.add_parser("bench", parents=[common], help="compare strategies on random mapping classes")
    s.add_argument("--walk-lengths", type=_walks, default=[0, 5, 10, 20, 30])
    s.add_argument("--count", type=int, default=20)
    s.add_argument("--timings", action="store_true", help="include wall times (output is then not reproducible)")
    s.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("render", parents=[common], help="draw a diagram or every state of a certificate")
    s.add_argument("input")
    s.add_argument("--format", choices=["svg", "ascii"], default="svg")
    return p


def run(args) -> int:
    cfg = _config(args)
    if args.command == "factor":
        return cmd_factor(cfg, args.automorphism)
    if args.command == "verify":
        return cmd_verify(cfg, args.certificate)
    if args.command == "generate":
        if args.walk_length < 0:
            raise UsageError("--walk-length must be nonnegative")
        return cmd_generate(cfg, args.walk_length)
    if args.command == "census":
        return cmd_census(cfg, args.limit)
    if args.command == "bench":
        if args.count < 1 or args.jobs < 1:
            raise UsageError("--count and --jobs must be positive")
        return cmd_bench(cfg, args.walk_lengths, args.count, args.timings, args.jobs)
    return cmd_render(cfg, args.input, args.format)


def main(argv=None) -> int:
    # energies of long words print as huge decimals
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCap as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FatgraphNielsenError as exc:
        for kind, code in _EXIT_FOR:
            if isinstance(exc, kind):
                print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
                return code
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
