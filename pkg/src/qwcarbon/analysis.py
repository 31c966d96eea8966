"""Hitting metrics and scaling fits: N_0.5 extraction, least-squares lines,
and the structure-family sweeps behind the transport-rate table."""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .coins import coin_by_name
from .engine import TransportRecord, evolve_absorbing, make_initial_state
from .graphs import (
    PortGraph,
    build_capped_nanotube,
    build_cycle,
    build_nanotube_loop,
    compute_levels,
)

__all__ = [
    "ThresholdNotReached",
    "FitResult",
    "n_half",
    "linear_fit",
    "scaling_sweep",
    "SWEEP_FAMILIES",
    "DEFAULT_SWEEP_SIZES",
    "format_fit_table",
]


class ThresholdNotReached(RuntimeError):
    """The arrival record never reached the 50% threshold."""

    def __init__(self, max_arrival: float):
        super().__init__(
            f"arrival probability peaked at {max_arrival:.6f} < 0.5 within the record"
        )
        self.max_arrival = max_arrival


def n_half(record: TransportRecord) -> int:
    """Smallest step count with accumulated arrival >= 0.5."""
    hits = np.flatnonzero(record.arrival >= 0.5)
    if hits.size == 0:
        raise ThresholdNotReached(float(record.arrival.max()))
    return int(hits[0])


@dataclass(frozen=True, eq=False)
class FitResult:
    """Linear fit y = m*x + b with the coefficient of determination
    r2 = 1 - sum((y_i - f_i)^2) / sum((y_i - ybar)^2)."""

    m: float
    b: float
    r2: float
    points: tuple[tuple[float, float], ...]
    excluded: tuple[tuple[int, str], ...] = ()


def linear_fit(points: Sequence[tuple[float, float]]) -> FitResult:
    """Least-squares line through (x, y) points; needs >= 2 distinct x."""
    pts = tuple((float(x), float(y)) for x, y in points)
    if len(pts) < 2:
        raise ValueError(f"linear fit needs at least 2 points, got {len(pts)}")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.ptp(x) == 0.0:
        raise ValueError("linear fit needs at least 2 distinct x values")
    xm, ym = x.mean(), y.mean()
    m = float(np.sum((x - xm) * (y - ym)) / np.sum((x - xm) ** 2))
    b = float(ym - m * xm)
    f = m * x + b
    ss_res = float(np.sum((y - f) ** 2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return FitResult(m=m, b=b, r2=r2, points=pts)


# --- structure families for the scaling sweeps -----------------------------
#
# Each family maps a requested level count to a concrete structure and its
# canonical initial node set.  Zig-zag loops only close with an even number
# of repeats (odd level counts) and zig-zag caps only take even insertions,
# so those families use the nearest achievable level count; the fit abscissa
# is always the actual level count of the built structure.


def _cycle_family(levels: int) -> tuple[PortGraph, tuple[int, ...]]:
    if levels < 3:
        raise ValueError(f"cycle family needs at least 3 levels, got {levels}")
    g = build_cycle(2 * (levels - 1))
    return g, (0,)


def _loop_zigzag_family(levels: int) -> tuple[PortGraph, tuple[int, ...]]:
    repeats = levels - 1 if levels % 2 == 1 else levels
    if repeats < 2:
        raise ValueError(f"zigzag loop family needs more levels than {levels}")
    g = build_nanotube_loop("zigzag", 6, repeats)
    return g, g.metadata["ring"]


def _loop_armchair_family(levels: int) -> tuple[PortGraph, tuple[int, ...]]:
    if levels < 3:
        raise ValueError(f"armchair loop family needs at least 3 levels, got {levels}")
    g = build_nanotube_loop("armchair", 6, levels - 1)
    return g, g.metadata["ring"]


def _capped_family(kind: str) -> Callable[[int], tuple[PortGraph, tuple[int, ...]]]:
    def build(levels: int) -> tuple[PortGraph, tuple[int, ...]]:
        length = levels - 8
        if kind == "zigzag" and length % 2 == 1:
            length += 1
        if length < 0:
            raise ValueError(f"capped family needs at least 8 levels, got {levels}")
        g = build_capped_nanotube(kind, length)
        return g, g.metadata["apex"]

    return build


SWEEP_FAMILIES: dict[str, tuple[Callable[[int], tuple[PortGraph, tuple[int, ...]]], str]] = {
    "cycle": (_cycle_family, "H"),
    "loop-zigzag": (_loop_zigzag_family, "G3"),
    "loop-armchair": (_loop_armchair_family, "G3"),
    "capped-zigzag": (_capped_family("zigzag"), "G3"),
    "capped-armchair": (_capped_family("armchair"), "G3"),
}

DEFAULT_SWEEP_SIZES = (10, 14, 20, 30, 40)


def _sweep_point(
    family: str, levels: int, coin_name: str | None, steps_budget: int | None
) -> tuple[int, int]:
    """One sweep run: build the structure, evolve with a sink, scan for N_0.5.

    Returns (actual level count, N_0.5).  Top-level so worker pools can call it.
    """
    builder, default_coin = SWEEP_FAMILIES[family]
    g, init = builder(levels)
    coin = coin_by_name(coin_name or default_coin)
    lm = compute_levels(g, init)
    budget = steps_budget if steps_budget is not None else 6 * lm.num_levels + 60
    state = make_initial_state(g, init, coin.dim)
    record = evolve_absorbing(state, g, coin, lm.target_set, budget, lm)
    return lm.num_levels, n_half(record)


def scaling_sweep(
    family: str,
    sizes: Iterable[int] | None = None,
    coin: str | None = None,
    steps_budget: int | None = None,
    workers: int | None = None,
) -> FitResult:
    """Sweep a structure family over level counts and fit N_0.5 against the
    number of levels.

    Structures whose arrival never reaches 50% within the step budget are
    excluded with a warning and recorded in the result's `excluded`
    provenance.  `workers` > 1 fans the runs out over a process pool.
    """
    if family not in SWEEP_FAMILIES:
        raise ValueError(
            f"unknown family {family!r}; available: {', '.join(SWEEP_FAMILIES)}"
        )
    sizes = list(sizes) if sizes is not None else list(DEFAULT_SWEEP_SIZES)
    if len(sizes) < 2:
        raise ValueError("sweep needs at least 2 sizes to fit a line")

    args = [(family, int(s), coin, steps_budget) for s in sizes]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_sweep_point_safe, args))
    else:
        outcomes = [_sweep_point_safe(a) for a in args]

    points: list[tuple[float, float]] = []
    excluded: list[tuple[int, str]] = []
    for size, outcome in zip(sizes, outcomes):
        if isinstance(outcome, tuple):
            points.append((float(outcome[0]), float(outcome[1])))
        else:
            warnings.warn(
                f"{family} at {size} levels excluded from fit: {outcome}",
                stacklevel=2,
            )
            excluded.append((int(size), outcome))
    fit = linear_fit(points)
    return FitResult(
        m=fit.m, b=fit.b, r2=fit.r2, points=fit.points, excluded=tuple(excluded)
    )


def _sweep_point_safe(args: tuple) -> tuple[int, int] | str:
    family, levels, coin_name, budget = args
    try:
        return _sweep_point(family, levels, coin_name, budget)
    except ThresholdNotReached as exc:
        return str(exc)


def format_fit_table(rows: Sequence[tuple[str, FitResult]]) -> str:
    """Fit-table CSV matching the transport-rate table layout."""
    lines = ["structure,m,b,r2"]
    for name, fit in rows:
        lines.append(f"{name},{float(fit.m)!r},{float(fit.b)!r},{float(fit.r2)!r}")
    return "\n".join(lines) + "\n"
