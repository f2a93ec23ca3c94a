"""Cost-minimizing CPU/GPU instance planner for camera-stream analysis.

Inputs may be given as already-parsed JSON values (dicts or lists) or as
paths to JSON files. Results come back as parsed JSON values.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any

from . import _core
from ._core import (
    ContractError,
    Error,
    InfeasibleError,
    ParseError,
    RefusalError,
    ResourceExhaustedError,
    ValidationError,
    default_headroom,
)

__all__ = [
    "ContractError",
    "Error",
    "InfeasibleError",
    "ParseError",
    "RefusalError",
    "ResourceExhaustedError",
    "ValidationError",
    "capacity_vector",
    "compare",
    "default_headroom",
    "demand_fraction",
    "fit_profile",
    "lower_bound",
    "plan",
    "simulate",
    "solve",
    "speedup",
    "synth_run",
]

JsonLike = Any


def _text(value: JsonLike) -> str:
    if isinstance(value, (str, os.PathLike)):
        return Path(value).read_text()
    return json.dumps(value)


def plan(catalog: JsonLike, profiles: JsonLike, workload: JsonLike, strategy: str = "st3",
         headroom: float = default_headroom, **limits: Any) -> dict:
    """Minimum-cost plan. Raises InfeasibleError when some stream cannot be placed."""
    return json.loads(_core.plan(_text(catalog), _text(profiles), _text(workload), strategy,
                                 headroom, **limits))


def compare(catalog: JsonLike, profiles: JsonLike, workload: JsonLike,
            headroom: float = default_headroom, **limits: Any) -> list[dict]:
    """One row per strategy (ST1, ST2, ST3); infeasible strategies have status "fail"."""
    doc = json.loads(_core.compare(_text(catalog), _text(profiles), _text(workload), headroom,
                                   **limits))
    return doc["rows"]


def simulate(catalog: JsonLike, profiles: JsonLike, workload: JsonLike, plan: JsonLike,
             headroom: float = default_headroom) -> dict:
    """Utilization, per-stream performance and headroom violations of a plan."""
    return json.loads(_core.simulate(_text(catalog), _text(profiles), _text(workload),
                                     _text(plan), headroom))


def fit_profile(samples: JsonLike, program: str, device: str, frame_size: str = "640x480",
                reference_machine: str = "8,15,1536,4", max_rate: float | None = None) -> dict:
    return json.loads(_core.fit_profile(_text(samples), program, device, frame_size,
                                        reference_machine, max_rate))


def capacity_vector(catalog: JsonLike, instance_type: str) -> list[float]:
    return _core.capacity_vector(_text(catalog), instance_type)


def demand_fraction(profile: JsonLike, rate: float) -> list[float]:
    """[cpu, memory, gpu, gpu_memory] fractions of the reference machine at `rate`."""
    return _core.demand_fraction(_text(profile), rate)


def speedup(cpu_profile: JsonLike, gpu_profile: JsonLike) -> float:
    return _core.speedup(_text(cpu_profile), _text(gpu_profile))


def solve(instance: JsonLike, method: str = "exact", **limits: Any) -> dict:
    """Solve a raw packing instance with "exact", "heuristic" or "brute_force"."""
    return json.loads(_core.solve(_text(instance), method, **limits))


def lower_bound(instance: JsonLike) -> float:
    return _core.lower_bound(_text(instance))


def synth_run(profile: JsonLike, rate: float, count: int, noise: float = 0.0, seed: int = 0) -> dict:
    return json.loads(_core.synth_run(_text(profile), rate, count, noise, seed))
