"""Batch evaluation: agent-vs-agent matchups across complexity levels.

Game i of a matchup uses scenario seed base_seed + i, so reports are
reproducible bit-for-bit and games can run in parallel workers and merge by
index. Scores are always from the blue player's perspective; the evaluated
agent plays blue, its opponent red.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field
from multiprocessing import Pool

from .agents import Agent, ExternalPolicyAgent, PassAggAgent, PolicyClient, RandomAgent
from .scenario import generate, instantiate
from .simcore import (
    Faction,
    GameState,
    apply_action,
    current_unit_id,
    end_phase,
    is_terminal,
    total_score,
)
from .envservice.replay import ReplayRecorder, ReplayStore


class EvalRunError(RuntimeError):
    """A matchup had failed games and failures were not explicitly allowed."""


def make_agent(spec: str, seed_key: str) -> Agent:
    """Build an agent from a CLI-style spec string.

    Supported: "passagg", "random", "external:HOST:PORT[:local|global]".
    The seed key pins the agent's private RNG stream for one game.
    """
    import random

    if spec == "passagg":
        return PassAggAgent(random.Random(seed_key))
    if spec == "random":
        return RandomAgent(random.Random(seed_key))
    if spec.startswith("external:"):
        parts = spec.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"bad external agent spec {spec!r}")
        host, port = parts[1], int(parts[2])
        mode = parts[3] if len(parts) == 4 else "local"
        return ExternalPolicyAgent(PolicyClient(host, port), obs_mode=mode)
    raise ValueError(f"unknown agent {spec!r} (expected passagg, random, or external:...)")


def play_game(
    state: GameState,
    blue: Agent,
    red: Agent,
    recorder: ReplayRecorder | None = None,
) -> GameState:
    """Advance a game to its terminal state with the two agents."""
    s = state
    terminal, _ = is_terminal(s)
    while not terminal:
        uid = current_unit_id(s)
        if uid is None:
            s, _ = end_phase(s)
            if recorder is not None:
                recorder.record_phase_end(s.score)
        else:
            agent = blue if s.on_move is Faction.BLUE else red
            action = agent.decide(s, uid)
            phase = s.phase
            s, _ = apply_action(s, uid, action)
            if recorder is not None:
                recorder.record_action(phase, uid, action)
        terminal, _ = is_terminal(s)
    return s


def _run_single(args) -> tuple[int, int | None, str | None]:
    """Play one seeded game; returns (index, score or None, error or None)."""
    blue_spec, red_spec, n, base_seed, index, replay_dir = args
    seed = base_seed + index
    try:
        spec = generate(n, seed)
        blue = make_agent(blue_spec, f"{seed}:blue")
        red = make_agent(red_spec, f"{seed}:red")
        recorder = ReplayRecorder(spec) if replay_dir else None
        final = play_game(instantiate(spec), blue, red, recorder)
        if replay_dir:
            ReplayStore(replay_dir).save(recorder.build(final))
        return index, total_score(final), None
    except Exception as exc:  # noqa: BLE001 - failures are tallied, not silenced
        return index, None, f"{type(exc).__name__}: {exc}"


@dataclass
class MatchupResult:
    """Aggregate for one (blue, red, size) cell."""

    blue: str
    red: str
    size: int
    games: int
    mean: float
    sem: float
    raw_scores: list[int]
    base_seed: int
    failures: int = 0
    elapsed: float = 0.0
    normalized_mean: float | None = None

    def stddev(self) -> float:
        return statistics.stdev(self.raw_scores)

    def to_json(self) -> dict:
        return {
            "blue": self.blue,
            "red": self.red,
            "size": self.size,
            "games": self.games,
            "mean": self.mean,
            "sem": self.sem,
            "normalized_mean": self.normalized_mean,
            "failures": self.failures,
            "base_seed": self.base_seed,
            "elapsed_seconds": self.elapsed,
            "raw_scores": self.raw_scores,
        }


def sem(scores: list[int] | list[float]) -> float:
    """Standard error of the mean: sample stddev (n-1) over sqrt(n)."""
    if len(scores) < 2:
        raise ValueError("sem needs at least 2 scores")
    return statistics.stdev(scores) / math.sqrt(len(scores))


def normalize(report: MatchupResult, baseline: MatchupResult) -> float:
    """Mean in units of the baseline's spread: (mean - baseline mean) / baseline stddev."""
    if baseline.games < 2:
        raise ValueError("baseline needs at least 2 games")
    sigma = baseline.stddev()
    if sigma == 0:
        raise ValueError("baseline stddev is zero")
    value = (report.mean - baseline.mean) / sigma
    report.normalized_mean = value
    return value


def run_matchup(
    blue: str,
    red: str,
    n: int,
    games: int,
    base_seed: int,
    workers: int | None = None,
    replay_dir: str | None = None,
    allow_failures: bool = False,
) -> MatchupResult:
    """Run a seeded batch of games and aggregate mean and SEM.

    Agents are named by spec string so games can run in parallel worker
    processes. Failed games are excluded from the scores and counted; any
    failure aborts the run unless explicitly allowed.
    """
    if games < 1:
        raise ValueError("games must be >= 1")
    start = time.perf_counter()
    jobs = [(blue, red, n, base_seed, i, replay_dir) for i in range(games)]
    if workers is not None and workers > 1:
        with Pool(workers) as pool:
            results = pool.map(_run_single, jobs, chunksize=max(1, games // (workers * 8)))
    else:
        results = [_run_single(job) for job in jobs]

    results.sort(key=lambda r: r[0])
    scores = [score for _, score, err in results if err is None]
    errors = [err for _, _, err in results if err is not None]
    if errors and not allow_failures:
        raise EvalRunError(
            f"{len(errors)} of {games} games failed; first error: {errors[0]}"
        )
    mean = statistics.fmean(scores) if scores else float("nan")
    return MatchupResult(
        blue=blue,
        red=red,
        size=n,
        games=len(scores),
        mean=mean,
        sem=sem(scores) if len(scores) >= 2 else 0.0,
        raw_scores=scores,
        base_seed=base_seed,
        failures=len(errors),
        elapsed=time.perf_counter() - start,
    )


@dataclass
class EvalReport:
    """Per-complexity aggregates for one matchup across board sizes."""

    blue: str
    red: str
    games: int
    base_seed: int
    levels: dict[int, MatchupResult] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "blue": self.blue,
            "red": self.red,
            "games": self.games,
            "base_seed": self.base_seed,
            "levels": {str(size): frag.to_json() for size, frag in sorted(self.levels.items())},
        }

    def csv_lines(self) -> list[str]:
        lines = ["size,games,mean,sem,normalized_mean"]
        for size, frag in sorted(self.levels.items()):
            norm = "" if frag.normalized_mean is None else repr(frag.normalized_mean)
            lines.append(f"{size},{frag.games},{frag.mean!r},{frag.sem!r},{norm}")
        return lines


def run_eval(
    blue: str,
    red: str,
    sizes: list[int],
    games: int,
    base_seed: int,
    workers: int | None = None,
    replay_dir: str | None = None,
    baseline: EvalReport | None = None,
    allow_failures: bool = False,
    progress=None,
) -> EvalReport:
    """Run a matchup at every requested size; optionally normalize to a baseline run."""
    report = EvalReport(blue=blue, red=red, games=games, base_seed=base_seed)
    for n in sizes:
        frag = run_matchup(
            blue, red, n, games, base_seed,
            workers=workers, replay_dir=replay_dir, allow_failures=allow_failures,
        )
        if baseline is not None and n in baseline.levels:
            normalize(frag, baseline.levels[n])
        report.levels[n] = frag
        if progress is not None:
            progress(frag)
    return report


__all__ = [
    "EvalRunError",
    "make_agent",
    "play_game",
    "MatchupResult",
    "EvalReport",
    "sem",
    "normalize",
    "run_matchup",
    "run_eval",
]
