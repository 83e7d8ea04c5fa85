"""Shared test utilities: random game states via seeded playouts."""

from __future__ import annotations

import random

from hexcombat.agents import random_decide
from hexcombat.scenario import generate, instantiate
from hexcombat.simcore import (
    GameState,
    apply_action,
    current_unit_id,
    end_phase,
    is_terminal,
)


def random_state(n: int, seed: int, max_steps: int | None = None) -> GameState:
    """A mid-game state reached by a seeded random playout."""
    rng = random.Random(seed)
    s = instantiate(generate(n, seed))
    steps = rng.randrange(max_steps if max_steps is not None else 3 * n)
    for _ in range(steps):
        terminal, _ = is_terminal(s)
        if terminal:
            break
        uid = current_unit_id(s)
        if uid is None:
            s, _ = end_phase(s)
            continue
        s, _ = apply_action(s, uid, random_decide(s, uid, rng))
    return s


def random_states(sizes, per_size: int, seed: int = 0):
    """Yield (size, state) pairs across sizes, mid-playout, deterministic."""
    for n in sizes:
        for i in range(per_size):
            yield n, random_state(n, seed * 1_000_003 + n * 10_000 + i)


def playout_decisions(n: int, seed: int):
    """Yield (state, unit_id) at every decision point of one random game."""
    rng = random.Random(seed)
    s = instantiate(generate(n, seed))
    while True:
        terminal, _ = is_terminal(s)
        if terminal:
            return
        uid = current_unit_id(s)
        if uid is None:
            s, _ = end_phase(s)
            continue
        yield s, uid
        s, _ = apply_action(s, uid, random_decide(s, uid, rng))
