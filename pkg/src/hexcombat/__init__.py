"""hexcombat: deterministic hex-grid combat simulation for agent research.

The suite covers the game engine (odd-r hex boards, phase-based play,
deterministic combat and city-control scoring), the 18-channel global
observation and its localized 18x7x7 abstraction with piecewise linear
spatial decay, scripted baseline agents, random scenario generation across
complexity levels 3-12, a batch evaluation harness, and a network service
exposing the environment to external learners and a browser UI.
"""

__version__ = "0.1.0"

from . import agents, evalharness, hexgrid, observation, scenario, simcore
from .scenario import ScenarioSpec, generate, instantiate
from .simcore import Faction, GameState, Terrain, Unit, UnitType

__all__ = [
    "__version__",
    "agents",
    "evalharness",
    "hexgrid",
    "observation",
    "scenario",
    "simcore",
    "ScenarioSpec",
    "generate",
    "instantiate",
    "Faction",
    "GameState",
    "Terrain",
    "Unit",
    "UnitType",
]
