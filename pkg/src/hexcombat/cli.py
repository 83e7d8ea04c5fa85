"""Command line entry points: `hexcombat eval` and `hexcombat serve`."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import evalharness
from .envservice.server import ServeConfig, serve_forever
from .scenario import MAX_SIZE, MIN_SIZE


def parse_sizes(text: str) -> list[int]:
    """Sizes as a range "3..12" or a comma list "3,5,7"."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        sizes = list(range(int(lo), int(hi) + 1))
    else:
        sizes = [int(t) for t in text.split(",") if t]
    for n in sizes:
        if not (MIN_SIZE <= n <= MAX_SIZE):
            raise argparse.ArgumentTypeError(f"size {n} outside [{MIN_SIZE}, {MAX_SIZE}]")
    if not sizes:
        raise argparse.ArgumentTypeError("no sizes given")
    return sizes


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hexcombat")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="run an agent-vs-agent evaluation")
    ev.add_argument("--blue", required=True, help="blue agent: passagg, random, external:HOST:PORT[:local|global]")
    ev.add_argument("--red", required=True, help="red agent spec")
    ev.add_argument("--sizes", type=parse_sizes, default=list(range(MIN_SIZE, MAX_SIZE + 1)),
                    help='board sizes, e.g. "3..12" or "5,7" (default 3..12)')
    ev.add_argument("--games", type=int, default=1000, help="games per size (default 1000)")
    ev.add_argument("--seed", type=int, default=0, help="base seed; game i uses seed+i")
    ev.add_argument("--out", required=True, help="write the JSON report here")
    ev.add_argument("--csv", help="also write a CSV summary here")
    ev.add_argument("--replay-dir", help="dump one replay document per game into this directory")
    ev.add_argument("--workers", type=int, default=os.cpu_count(), help="parallel game workers")
    ev.add_argument("--baseline", help="JSON report to normalize against")
    ev.add_argument("--allow-failures", action="store_true",
                    help="tolerate failed games instead of aborting the run")

    sv = sub.add_parser("serve", help="host the environment service")
    sv.add_argument("--host", default=os.environ.get("HEXCOMBAT_HOST", "127.0.0.1"))
    sv.add_argument("--port", type=int, default=int(os.environ.get("HEXCOMBAT_PORT", "8000")),
                    help="HTTP port for UI endpoints and replays")
    sv.add_argument("--learner-port", type=int,
                    default=int(os.environ.get("HEXCOMBAT_LEARNER_PORT", "8001")),
                    help="TCP port for the JSON-lines learner protocol")
    sv.add_argument("--replay-dir", default=os.environ.get("HEXCOMBAT_REPLAY_DIR"),
                    help="directory for persisted replays")
    sv.add_argument("--frontend-dir", default=os.environ.get("HEXCOMBAT_FRONTEND_DIR"),
                    help="serve a built web client from this directory")
    return parser


def _load_baseline(path: str) -> evalharness.EvalReport:
    data = json.loads(Path(path).read_text())
    report = evalharness.EvalReport(
        blue=data["blue"], red=data["red"], games=data["games"], base_seed=data["base_seed"]
    )
    for key, frag in data["levels"].items():
        report.levels[int(key)] = evalharness.MatchupResult(
            blue=frag["blue"], red=frag["red"], size=frag["size"], games=frag["games"],
            mean=frag["mean"], sem=frag["sem"], raw_scores=frag["raw_scores"],
            base_seed=frag["base_seed"], failures=frag.get("failures", 0),
            normalized_mean=frag.get("normalized_mean"),
        )
    return report


def cmd_eval(args) -> int:
    baseline = _load_baseline(args.baseline) if args.baseline else None

    def progress(frag):
        print(
            f"size {frag.size:>2}: games={frag.games} mean={frag.mean:9.2f} "
            f"sem={frag.sem:7.2f} elapsed={frag.elapsed:6.1f}s",
            flush=True,
        )

    report = evalharness.run_eval(
        args.blue, args.red, args.sizes, args.games, args.seed,
        workers=args.workers, replay_dir=args.replay_dir,
        baseline=baseline, allow_failures=args.allow_failures, progress=progress,
    )
    Path(args.out).write_text(json.dumps(report.to_json(), indent=2) + "\n")
    print(f"report written to {args.out}")
    if args.csv:
        Path(args.csv).write_text("\n".join(report.csv_lines()) + "\n")
        print(f"csv written to {args.csv}")
    return 0


def cmd_serve(args) -> int:
    serve_forever(
        ServeConfig(
            host=args.host,
            http_port=args.port,
            learner_port=args.learner_port,
            replay_dir=args.replay_dir,
            frontend_dir=args.frontend_dir,
        )
    )
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "eval":
        return cmd_eval(args)
    if args.command == "serve":
        return cmd_serve(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())
