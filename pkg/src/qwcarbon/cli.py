"""Experiment runner: paper-style transport runs as reproducible commands.

Structures are compact slugs (``cycle:18``, ``c60``, ``loop:zigzag:6:90``,
``capped:armchair:12``), coins are selected by name, and every command emits
deterministic CSV files.  A plain-text ``key=value`` config file can supply
any option; explicit command-line flags win over the file.
"""

from __future__ import annotations

import os
import sys
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from .analysis import (
    DEFAULT_SWEEP_SIZES,
    SWEEP_FAMILIES,
    format_fit_table,
    scaling_sweep,
)
from .classical import classical_evolve_absorbing, uniform_distribution
from .coins import COIN_NAMES, coin_by_name
from .engine import evolve_absorbing, evolve_unitary, make_initial_state
from .graphs import (
    PortGraph,
    antipodal_target,
    build_capped_nanotube,
    build_cycle,
    build_nanotube_loop,
    build_c60,
    compute_levels,
    face_nodes,
    format_graph,
    format_levels,
)

INIT_CHOICES = ("auto", "node", "pentagon-face", "hexagon-face", "ring", "apex-face")


def build_structure(spec: str) -> PortGraph:
    """Parse a structure slug and build the graph."""
    parts = spec.split(":")
    try:
        if parts[0] == "cycle" and len(parts) == 2:
            return build_cycle(int(parts[1]))
        if parts[0] == "c60" and len(parts) == 1:
            return build_c60()
        if parts[0] == "loop" and len(parts) == 4:
            return build_nanotube_loop(parts[1], int(parts[2]), int(parts[3]))
        if parts[0] == "capped" and len(parts) == 3:
            return build_capped_nanotube(parts[1], int(parts[2]))
    except ValueError as exc:
        raise click.ClickException(f"invalid structure {spec!r}: {exc}") from None
    raise click.ClickException(
        f"unrecognized structure {spec!r}; expected cycle:N, c60, "
        "loop:KIND:CIRCUMFERENCE:REPEATS, or capped:KIND:LENGTH"
    )


def resolve_initial_nodes(g: PortGraph, init: str) -> tuple[int, ...]:
    """Turn an initial-state spec into a concrete node set."""
    kind = g.metadata.get("kind", "")
    if init == "auto":
        if "loop" in kind:
            init = "ring"
        elif "capped" in kind:
            init = "apex-face"
        else:
            init = "node"
    try:
        if init == "node":
            return (0,)
        if init == "pentagon-face":
            return face_nodes(g, 5)
        if init == "hexagon-face":
            return face_nodes(g, 6)
        if init == "ring":
            ring = g.metadata.get("ring")
            if ring is None:
                raise ValueError(f"structure {kind!r} has no canonical ring")
            return tuple(ring)
        if init == "apex-face":
            apex = g.metadata.get("apex")
            if apex is None:
                raise ValueError(f"structure {kind!r} has no apex face")
            return tuple(apex)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    raise click.ClickException(f"unknown initial-state spec {init!r}")


def _slug(structure: str) -> str:
    return structure.replace(":", "-")


def _write_atomic(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _worker_count(tasks: int) -> int:
    env = os.environ.get("QWCARBON_WORKERS", "")
    if env:
        return max(1, min(tasks, int(env)))
    return max(1, min(tasks, os.cpu_count() or 1))


def _load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    cfg = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.ClickException(f"config line not key=value: {raw.strip()!r}")
            key, val = line.split("=", 1)
            cfg[key.strip().replace("-", "_")] = val.strip()
    return cfg


def _merge_config(ctx: click.Context, cfg: dict[str, str], **values):
    """Config file fills in every option the command line left at its default."""
    out = dict(values)
    for name, val in cfg.items():
        if name not in out:
            raise click.ClickException(f"unknown config key {name!r}")
        src = ctx.get_parameter_source(name)
        if src is not None and src.name != "COMMANDLINE":
            current = out[name]
            if isinstance(current, bool):
                out[name] = val.lower() in ("1", "true", "yes", "on")
            elif isinstance(current, int) and not isinstance(current, bool):
                out[name] = int(val)
            else:
                out[name] = val
    return out


@click.group()
def main() -> None:
    """Coined quantum-walk transport experiments on carbon-structure graphs."""


@main.command()
@click.option("--structure", default="cycle:18", show_default=True)
@click.option("--coin", default="H", show_default=True)
@click.option("--init", default="auto", type=click.Choice(INIT_CHOICES), show_default=True)
@click.option("--steps", default=180, type=click.IntRange(min=0), show_default=True)
@click.option(
    "--mode", default="absorbing", type=click.Choice(["absorbing", "unitary"]), show_default=True
)
@click.option("--classical/--no-classical", default=False, show_default=True,
              help="Also emit the classical baselines (without and with the stay option).")
@click.option("--out", default=".", type=click.Path(file_okay=False), show_default=True)
@click.option("--config", default=None, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def run(ctx, structure, coin, init, steps, mode, classical, out, config):
    """Run one walk and write one CSV per curve (step,arrival,avg_level)."""
    opts = _merge_config(
        ctx, _load_config(config), structure=structure, coin=coin, init=init,
        steps=steps, mode=mode, classical=classical, out=out,
    )
    structure, coin_name, init = opts["structure"], opts["coin"], opts["init"]
    steps, mode, classical, out = opts["steps"], opts["mode"], opts["classical"], opts["out"]
    if steps < 0:
        raise click.ClickException(f"steps must be >= 0, got {steps}")

    g = build_structure(structure)
    init_nodes = resolve_initial_nodes(g, init)
    try:
        coin = coin_by_name(coin_name)
        lm = compute_levels(g, init_nodes)
        state = make_initial_state(g, init_nodes, coin.dim)
        if mode == "absorbing":
            record = evolve_absorbing(state, g, coin, lm.target_set, steps, lm)
        else:
            record = evolve_unitary(state, g, coin, lm, steps)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None

    os.makedirs(out, exist_ok=True)
    slug = _slug(structure)
    paths = []
    qpath = os.path.join(out, f"{slug}_{coin_name}_{mode}.csv")
    _write_atomic(qpath, record.to_csv())
    paths.append(qpath)
    if classical:
        dist = uniform_distribution(g, init_nodes)
        targets = lm.target_set if mode == "absorbing" else ()
        for stay in (False, True):
            sides = g.d + 1 if stay else g.d
            crec = classical_evolve_absorbing(dist, g, targets, stay, steps, lm)
            cpath = os.path.join(out, f"{slug}_classical-{sides}sided_{mode}.csv")
            _write_atomic(cpath, crec.to_csv())
            paths.append(cpath)
    for p in paths:
        click.echo(p)


@main.command()
@click.option("--families", default="all", show_default=True,
              help="Comma-separated family names, or 'all'.")
@click.option("--sizes", default=",".join(str(s) for s in DEFAULT_SWEEP_SIZES),
              show_default=True, help="Comma-separated level counts.")
@click.option("--coin", default=None, help="Override the per-family default coin.")
@click.option("--budget", default=None, type=int, help="Step budget per run.")
@click.option("--out", default=".", type=click.Path(file_okay=False), show_default=True)
@click.option("--config", default=None, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def sweep(ctx, families, sizes, coin, budget, out, config):
    """Sweep structure families and write the structure,m,b,r2 fit table."""
    opts = _merge_config(ctx, _load_config(config), families=families, sizes=sizes,
                         coin=coin, budget=budget, out=out)
    families, sizes, coin, budget, out = (
        opts["families"], opts["sizes"], opts["coin"], opts["budget"], opts["out"])
    names = list(SWEEP_FAMILIES) if families == "all" else [
        f.strip() for f in str(families).split(",") if f.strip()]
    try:
        size_list = [int(s) for s in str(sizes).split(",") if s.strip()]
    except ValueError:
        raise click.ClickException(f"bad sizes list {sizes!r}") from None
    if budget is not None and isinstance(budget, str):
        budget = int(budget)

    rows, failures = [], []
    workers = _worker_count(len(size_list))
    for name in names:
        try:
            fit = scaling_sweep(name, size_list, coin, budget, workers=workers)
            rows.append((name, fit))
        except (ValueError, RuntimeError) as exc:
            failures.append((name, str(exc)))
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "scaling_fits.csv")
    if rows:
        _write_atomic(path, format_fit_table(rows))
        click.echo(path)
        plines = ["structure,levels,n_half"]
        for name, fit in rows:
            for x, y in fit.points:
                plines.append(f"{name},{int(x)},{int(y)}")
        ppath = os.path.join(out, "scaling_points.csv")
        _write_atomic(ppath, "\n".join(plines) + "\n")
        click.echo(ppath)
    for name, fit in rows:
        click.echo(f"{name}: m={fit.m:.3f} b={fit.b:.3f} r2={fit.r2:.5f}")
        for size, reason in fit.excluded:
            click.echo(f"  excluded {size} levels: {reason}", err=True)
    if failures:
        for name, msg in failures:
            click.echo(f"sweep failed for {name}: {msg}", err=True)
        sys.exit(1)
    if not rows:
        raise click.ClickException("no families requested")


def _compare_task(args: tuple[str, str, str, int]) -> np.ndarray:
    structure, coin_name, init, steps = args
    g = build_structure(structure)
    init_nodes = resolve_initial_nodes(g, init)
    coin = coin_by_name(coin_name)
    lm = compute_levels(g, init_nodes)
    state = make_initial_state(g, init_nodes, coin.dim)
    return evolve_absorbing(state, g, coin, lm.target_set, steps, lm).arrival


@main.command("compare-coins")
@click.option("--structure", default="c60", show_default=True)
@click.option("--coins", default="G3,G4,F3,F4,HxH", show_default=True)
@click.option("--init", default="auto", type=click.Choice(INIT_CHOICES), show_default=True)
@click.option("--steps", default=700, type=click.IntRange(min=0), show_default=True)
@click.option("--classical/--no-classical", default=False, show_default=True)
@click.option("--out", default=".", type=click.Path(file_okay=False), show_default=True)
@click.option("--config", default=None, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def compare_coins(ctx, structure, coins, init, steps, classical, out, config):
    """Run several coins on one structure; one arrival column per coin."""
    opts = _merge_config(ctx, _load_config(config), structure=structure, coins=coins,
                         init=init, steps=steps, classical=classical, out=out)
    structure, coins, init = opts["structure"], opts["coins"], opts["init"]
    steps, classical, out = opts["steps"], opts["classical"], opts["out"]
    coin_names = [c.strip() for c in str(coins).split(",") if c.strip()]
    if not coin_names:
        raise click.ClickException("empty coin list")
    for name in coin_names:
        if name not in COIN_NAMES:
            raise click.ClickException(
                f"unknown coin {name!r}; available: {', '.join(COIN_NAMES)}")

    g = build_structure(structure)
    init_nodes = resolve_initial_nodes(g, init)
    try:
        for name in coin_names:
            if coin_by_name(name).dim not in (g.d, g.d + 1):
                raise ValueError(
                    f"coin {name} has dimension {coin_by_name(name).dim}, "
                    f"structure degree is {g.d}")
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None

    tasks = [(structure, name, init, steps) for name in coin_names]
    workers = _worker_count(len(tasks))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            curves = list(pool.map(_compare_task, tasks))
    else:
        curves = [_compare_task(t) for t in tasks]

    columns = dict(zip(coin_names, curves))
    if classical:
        lm = compute_levels(g, init_nodes)
        dist = uniform_distribution(g, init_nodes)
        for stay in (False, True):
            sides = g.d + 1 if stay else g.d
            rec = classical_evolve_absorbing(dist, g, lm.target_set, stay, steps, lm)
            columns[f"classical-{sides}sided"] = rec.arrival

    header = "step," + ",".join(columns)
    lines = [header]
    for t in range(steps + 1):
        lines.append(f"{t}," + ",".join(repr(float(col[t])) for col in columns.values()))
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, f"{_slug(structure)}_compare_absorbing.csv")
    _write_atomic(path, "\n".join(lines) + "\n")
    click.echo(path)


@main.command("export-graph")
@click.option("--structure", required=True)
@click.option("--init", default=None, type=click.Choice(INIT_CHOICES),
              help="Also export the level map from this initial-state spec.")
@click.option("--out", default=".", type=click.Path(file_okay=False), show_default=True)
def export_graph(structure, init, out):
    """Write the adjacency-with-ports text export (and optionally levels)."""
    g = build_structure(structure)
    os.makedirs(out, exist_ok=True)
    slug = _slug(structure)
    gpath = os.path.join(out, f"{slug}_graph.txt")
    _write_atomic(gpath, format_graph(g))
    click.echo(gpath)
    if init is not None:
        lm = compute_levels(g, resolve_initial_nodes(g, init))
        lpath = os.path.join(out, f"{slug}_levels.csv")
        _write_atomic(lpath, format_levels(lm))
        click.echo(lpath)


if __name__ == "__main__":  # pragma: no cover
    main()
