"""Walk evolution: coin-then-shift steps, in unitary or absorbing mode.

The state lives on the (node, coin) basis.  With coin dimension d the shift
routes every port through the edge map (flip-flop); with dimension d+1 the
extra coin index is a wait state whose port is fixed by the shift.  Absorbing
mode implements the sink: after every step the probability on the target set
is accumulated into the arrival total and those amplitudes are reset to zero.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .coins import CoinOperator
from .graphs import LevelMap, PortGraph, compute_levels

__all__ = [
    "WalkState",
    "TransportRecord",
    "make_initial_state",
    "shift",
    "step",
    "evolve_absorbing",
    "evolve_unitary",
]


@dataclass
class WalkState:
    """Complex amplitudes over the (node, coin) basis plus sink bookkeeping."""

    amplitudes: np.ndarray  # (n, cdim) complex128
    absorbed: float
    t: int

    @property
    def cdim(self) -> int:
        return self.amplitudes.shape[1]

    def norm_squared(self) -> float:
        a = self.amplitudes
        return float(np.real(np.vdot(a, a)))

    def node_probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2 @ np.ones(self.cdim)


@dataclass(frozen=True, eq=False)
class TransportRecord:
    """Time series of the transport observables, one entry per step 0..T."""

    arrival: np.ndarray
    avg_level: np.ndarray
    params: dict = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return len(self.arrival) - 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("step,arrival,avg_level\n")
        for t in range(len(self.arrival)):
            buf.write(f"{t},{float(self.arrival[t])!r},{float(self.avg_level[t])!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, params: dict | None = None) -> "TransportRecord":
        lines = [ln for ln in text.strip().splitlines() if ln]
        if lines[0] != "step,arrival,avg_level":
            raise ValueError("unexpected transport CSV header")
        arrival, avg = [], []
        for expected, ln in enumerate(lines[1:]):
            t_s, a_s, x_s = ln.split(",")
            if int(t_s) != expected:
                raise ValueError("non-contiguous step column")
            arrival.append(float(a_s))
            avg.append(float(x_s))
        return cls(np.array(arrival), np.array(avg), params or {})


def make_initial_state(g: PortGraph, nodes: Iterable[int], cdim: int) -> WalkState:
    """Unbiased symmetric start: equal real positive amplitude on every
    (node, coin) basis state of the given node set."""
    nodes = sorted(set(int(v) for v in nodes))
    if not nodes:
        raise ValueError("initial node set must not be empty")
    if cdim not in (g.d, g.d + 1):
        raise ValueError(f"coin dimension must be {g.d} or {g.d + 1}, got {cdim}")
    amp = np.zeros((g.n, cdim), dtype=np.complex128)
    amp[nodes, :] = 1.0 / np.sqrt(len(nodes) * cdim)
    return WalkState(amplitudes=amp, absorbed=0.0, t=0)


def shift_permutation(g: PortGraph, cdim: int) -> np.ndarray:
    """Flat permutation over (node, coin) indices realizing the flip-flop
    shift; the wait port (coin index d, if present) maps to itself."""
    if cdim not in (g.d, g.d + 1):
        raise ValueError(f"coin dimension must be {g.d} or {g.d + 1}, got {cdim}")
    perm = np.arange(g.n * cdim, dtype=np.int64)
    for a in range(g.d):
        u = np.arange(g.n)
        perm[u * cdim + a] = g.nbr[:, a] * cdim + g.nbr_port[:, a]
    return perm


def shift(state: WalkState, g: PortGraph) -> WalkState:
    """Apply the flip-flop shift alone (no coin, no time increment)."""
    perm = shift_permutation(g, state.cdim)
    flat = state.amplitudes.reshape(-1)
    return WalkState(
        amplitudes=flat[perm].reshape(state.amplitudes.shape).copy(),
        absorbed=state.absorbed,
        t=state.t,
    )


def step(state: WalkState, g: PortGraph, coin: CoinOperator) -> WalkState:
    """One walk step: coin on every node, then shift; increments t."""
    if coin.dim != state.cdim:
        raise ValueError(
            f"coin dimension {coin.dim} does not match state dimension {state.cdim}"
        )
    perm = shift_permutation(g, state.cdim)
    coined = state.amplitudes @ coin.entries.T
    shifted = coined.reshape(-1)[perm].reshape(state.amplitudes.shape)
    return WalkState(amplitudes=shifted.copy(), absorbed=state.absorbed, t=state.t + 1)


def _avg_level(prob: np.ndarray, levels: np.ndarray) -> float:
    total = float(prob.sum())
    if total <= 0.0:
        return 0.0
    return float(np.dot(levels, prob) / total)


def _resolve_levels(
    g: PortGraph, state: WalkState, levelmap: LevelMap | None
) -> np.ndarray:
    if levelmap is not None:
        return np.asarray(levelmap.level, dtype=float)
    support = np.flatnonzero(state.node_probabilities() > 0.0)
    return np.asarray(compute_levels(g, support).level, dtype=float)


def evolve_absorbing(
    state: WalkState,
    g: PortGraph,
    coin: CoinOperator,
    targets: Iterable[int],
    steps: int,
    levelmap: LevelMap | None = None,
) -> TransportRecord:
    """Evolve with a sink on `targets` for `steps` steps.

    After each step (and once at t=0) the target-set probability is added to
    the accumulated arrival and those amplitudes are zeroed.  The average
    level is recorded on the post-absorption state, normalized by the
    remaining norm.  Entry t of the record is the state of affairs after t
    steps, so the arrival sequence has steps+1 entries and is nondecreasing.
    """
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    if coin.dim != state.cdim:
        raise ValueError(
            f"coin dimension {coin.dim} does not match state dimension {state.cdim}"
        )
    tgt = np.array(sorted(set(int(v) for v in targets)), dtype=np.int64)
    levels = _resolve_levels(g, state, levelmap)
    perm = shift_permutation(g, state.cdim)
    coin_t = coin.entries.T.copy()

    psi = state.amplitudes.copy()
    absorbed = state.absorbed
    arrival = np.empty(steps + 1)
    avg = np.empty(steps + 1)

    def absorb_and_record(t: int) -> None:
        nonlocal absorbed
        hit = float(np.sum(np.abs(psi[tgt, :]) ** 2))
        absorbed += hit
        psi[tgt, :] = 0.0
        arrival[t] = absorbed
        prob = np.abs(psi) ** 2 @ np.ones(psi.shape[1])
        avg[t] = _avg_level(prob, levels)

    absorb_and_record(0)
    shape = psi.shape
    for t in range(1, steps + 1):
        psi = (psi @ coin_t).reshape(-1)[perm].reshape(shape)
        absorb_and_record(t)

    return TransportRecord(arrival=arrival, avg_level=avg, params={"mode": "absorbing"})


def evolve_unitary(
    state: WalkState,
    g: PortGraph,
    coin: CoinOperator,
    levelmap: LevelMap | None,
    steps: int,
) -> TransportRecord:
    """Evolve without measurement, recording the average level each step."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    if coin.dim != state.cdim:
        raise ValueError(
            f"coin dimension {coin.dim} does not match state dimension {state.cdim}"
        )
    levels = _resolve_levels(g, state, levelmap)
    perm = shift_permutation(g, state.cdim)
    coin_t = coin.entries.T.copy()

    psi = state.amplitudes.copy()
    arrival = np.zeros(steps + 1)
    avg = np.empty(steps + 1)
    ones = np.ones(psi.shape[1])
    avg[0] = _avg_level(np.abs(psi) ** 2 @ ones, levels)
    shape = psi.shape
    for t in range(1, steps + 1):
        psi = (psi @ coin_t).reshape(-1)[perm].reshape(shape)
        avg[t] = _avg_level(np.abs(psi) ** 2 @ ones, levels)
    return TransportRecord(arrival=arrival, avg_level=avg, params={"mode": "unitary"})
