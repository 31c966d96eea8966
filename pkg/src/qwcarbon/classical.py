"""Exact classical random-walk baselines by probability-vector propagation.

The walker is position-only: at each step the probability at a node splits
equally over its d neighbors, or over the neighbors plus the node itself when
the stay option is on (the "d+1-sided coin").  Absorption bookkeeping matches
the quantum engine so the records share one CSV schema.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .engine import TransportRecord, _avg_level
from .graphs import LevelMap, PortGraph, compute_levels

__all__ = [
    "ClassicalState",
    "uniform_distribution",
    "classical_step",
    "classical_evolve_absorbing",
]


@dataclass
class ClassicalState:
    probabilities: np.ndarray
    absorbed: float
    t: int


def uniform_distribution(g: PortGraph, nodes: Iterable[int]) -> np.ndarray:
    nodes = sorted(set(int(v) for v in nodes))
    if not nodes:
        raise ValueError("initial node set must not be empty")
    p = np.zeros(g.n)
    p[nodes] = 1.0 / len(nodes)
    return p


def _propagate(p: np.ndarray, g: PortGraph, stay: bool) -> np.ndarray:
    w = 1.0 / (g.d + 1 if stay else g.d)
    out = p * w if stay else np.zeros_like(p)
    share = p * w
    for a in range(g.d):
        np.add.at(out, g.nbr[:, a], share)
    return out


def classical_step(state: ClassicalState, g: PortGraph, stay: bool = False) -> ClassicalState:
    """One step of the unbiased walk; `stay` adds the self-loop option."""
    return ClassicalState(
        probabilities=_propagate(state.probabilities, g, stay),
        absorbed=state.absorbed,
        t=state.t + 1,
    )


def classical_evolve_absorbing(
    initial_dist: np.ndarray,
    g: PortGraph,
    targets: Iterable[int],
    stay: bool,
    steps: int,
    levelmap: LevelMap | None = None,
) -> TransportRecord:
    """Propagate with target-node probability moved into the sink each step."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    p = np.asarray(initial_dist, dtype=float).copy()
    if p.shape != (g.n,):
        raise ValueError("initial distribution has the wrong length")
    if abs(p.sum() - 1.0) > 1e-9 or np.any(p < 0):
        raise ValueError("initial distribution must be normalized and nonnegative")
    tgt = np.array(sorted(set(int(v) for v in targets)), dtype=np.int64)
    if levelmap is None:
        levelmap = compute_levels(g, np.flatnonzero(p > 0))
    levels = np.asarray(levelmap.level, dtype=float)

    absorbed = 0.0
    arrival = np.empty(steps + 1)
    avg = np.empty(steps + 1)

    def absorb_and_record(t: int) -> None:
        nonlocal absorbed
        absorbed += float(p[tgt].sum())
        p[tgt] = 0.0
        arrival[t] = absorbed
        avg[t] = _avg_level(p, levels)

    absorb_and_record(0)
    for t in range(1, steps + 1):
        p[:] = _propagate(p, g, stay)
        absorb_and_record(t)
    return TransportRecord(arrival=arrival, avg_level=avg, params={"mode": "classical"})
