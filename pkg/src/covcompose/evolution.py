"""(mu+1) steady-state GA over pixel-provenance masks.

Each iteration builds one offspring, by crossover with probability p_c
(a coin picks random-walk crossover or rectangular crossover) and otherwise
by random-walk mutation (a coin picks whether the walk repaints pixels from
S or from T). The offspring competes only against its first parent; ties go
to the offspring. The mutation walk length self-adapts between t_lb and
t_ub: multiply by F on acceptance, by F^(-1/k) on rejection, so k rejections
cancel one acceptance.

One shared RNG stream keeps runs reproducible. Draw order: initialisation
takes mu coins (u < 0.5 -> copy of S); each iteration then draws the branch
coin, the slot index, the partner index (crossover only), the operator coin
(walk/rectangle, or S/T with u < 0.5 -> S), and the operator's variates
(walk: start cell then step directions 0..3 = up/down/left/right; rectangle:
corner cell, row extent, column extent).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadValue
from .fitness import (
    FROM_S,
    FROM_T,
    FitnessContext,
    Individual,
    evaluate_incremental,
    lex_key,
    new_individual,
    rebuild_stats,
)

OPERATORS = ("walkX", "rectX", "mutS", "mutT")

_STEP_I = np.array([-1, 1, 0, 0], dtype=np.int64)
_STEP_J = np.array([0, 0, -1, 1], dtype=np.int64)


@dataclass
class GaConfig:
    mu: int = 4
    generations: int = 2000
    p_c: float = 0.2
    t_cr: int = 10000
    t_lb: float = 50.0
    t_ub: float = 5000.0
    adapt_factor: float = 2.0  # F
    adapt_k: int = 8
    t_init: float = 5000.0
    seed: int = 0
    rebuild_every: int = 200  # full stats rebuild cadence (0 disables)


@dataclass
class TraceRow:
    """One GA iteration: the surviving slot state after selection."""

    generation: int
    slot: int
    operator: str
    accepted: bool
    fitness: float
    constraint: int
    t_max: float


def _validate(cfg: GaConfig) -> None:
    if cfg.mu < 1 or (cfg.p_c > 0 and cfg.mu < 2):
        raise BadValue("population size must be >= 2 when crossover is enabled")
    if not 0.0 <= cfg.p_c <= 1.0:
        raise BadValue("p_c must lie in [0, 1]")
    if cfg.generations < 0:
        raise BadValue("generations must be >= 0")
    if not 0 < cfg.t_lb <= cfg.t_ub:
        raise BadValue("walk-length bounds need 0 < t_lb <= t_ub")
    if cfg.adapt_factor <= 1.0:
        raise BadValue("adaptation factor must be > 1")
    if cfg.adapt_k < 1:
        raise BadValue("adaptation k must be >= 1")
    if cfg.t_cr < 0:
        raise BadValue("t_cr must be >= 0")


def adapt_t_max(t_max: float, accepted: bool, cfg: GaConfig) -> float:
    """Multiplicative 1/(k+1)-rule update of the walk length, clamped."""
    if accepted:
        return min(cfg.adapt_factor * t_max, cfg.t_ub)
    return max(cfg.adapt_factor ** (-1.0 / cfg.adapt_k) * t_max, cfg.t_lb)


def random_walk(start, steps: int, m: int, n: int, rng) -> np.ndarray:
    """(steps+1, 2) positions of a uniform 4-neighbour walk on the m x n torus."""
    dirs = rng.integers(0, 4, size=int(steps))
    ii = (start[0] + np.concatenate(([0], np.cumsum(_STEP_I[dirs])))) % m
    jj = (start[1] + np.concatenate(([0], np.cumsum(_STEP_J[dirs])))) % n
    return np.stack((ii, jj), axis=1)


def _draw_cell(rng, m: int, n: int) -> tuple[int, int]:
    flat = int(rng.integers(m * n))
    return flat // n, flat % n


def _unique_positions(positions: np.ndarray, n: int) -> np.ndarray:
    flat = np.unique(positions[:, 0] * n + positions[:, 1])
    return np.stack((flat // n, flat % n), axis=1)


def _paint(parent: Individual, ctx: FitnessContext, positions: np.ndarray, values) -> Individual:
    """Offspring = parent with mask[positions] := values, caches updated."""
    off = parent.copy()
    rr, cc = positions[:, 0], positions[:, 1]
    vals = np.broadcast_to(values, rr.shape)
    flip = off.mask[rr, cc] != vals
    changed = positions[flip]
    if changed.shape[0]:
        off.mask[changed[:, 0], changed[:, 1]] = vals[flip]
    evaluate_incremental(off, ctx, changed)
    return off


def random_walk_mutation(parent: Individual, ctx: FitnessContext, paint_to_t: bool, steps: int, rng) -> Individual:
    """Repaint the pixels visited by a `steps`-step walk from S or from T."""
    m, n = parent.mask.shape
    walk = random_walk(_draw_cell(rng, m, n), steps, m, n, rng)
    positions = _unique_positions(walk, n)
    return _paint(parent, ctx, positions, np.bool_(paint_to_t))


def random_walk_crossover(p_i: Individual, p_j: Individual, ctx: FitnessContext, t_cr: int, rng) -> Individual:
    """Copy p_j's mask onto p_i along a t_cr-step walk."""
    m, n = p_i.mask.shape
    walk = random_walk(_draw_cell(rng, m, n), t_cr, m, n, rng)
    positions = _unique_positions(walk, n)
    return _paint(p_i, ctx, positions, p_j.mask[positions[:, 0], positions[:, 1]])


def _draw_rect(rng, m: int, n: int) -> tuple[int, int, int, int]:
    """Corner uniform over all pixels; extents uniform in {1..m//10} / {1..n//10},
    clipped at the image boundary."""
    i0, j0 = _draw_cell(rng, m, n)
    ext_i = int(rng.integers(1, max(1, m // 10) + 1))
    ext_j = int(rng.integers(1, max(1, n // 10) + 1))
    return i0, min(m, i0 + ext_i), j0, min(n, j0 + ext_j)


def rectangular_crossover(p_i: Individual, p_j: Individual, ctx: FitnessContext, rng) -> Individual:
    """Copy p_j's mask onto p_i inside a random clipped rectangle."""
    m, n = p_i.mask.shape
    r0, r1, c0, c1 = _draw_rect(rng, m, n)
    rr, cc = np.mgrid[r0:r1, c0:c1]
    positions = np.stack((rr.ravel(), cc.ravel()), axis=1)
    return _paint(p_i, ctx, positions, p_j.mask[positions[:, 0], positions[:, 1]])


def selection(parent: Individual, offspring: Individual, bound: int) -> tuple[Individual, bool]:
    """Feasibility-first comparison against the first parent; ties accept."""
    accepted = lex_key(offspring, bound) <= lex_key(parent, bound)
    return (offspring if accepted else parent), accepted


def initial_tags(rng, mu: int) -> list[bool]:
    """Per-slot source coin: True -> the slot starts as a copy of S."""
    return [bool(rng.random() < 0.5) for _ in range(mu)]


def init_population(ctx: FitnessContext, cfg: GaConfig, rng) -> list[Individual]:
    m, n = ctx.s_pixels.shape[0], ctx.s_pixels.shape[1]
    population = []
    for take_s in initial_tags(rng, cfg.mu):
        mask = np.full((m, n), FROM_S if take_s else FROM_T, dtype=bool)
        population.append(new_individual(mask, ctx))
    return population


def run_ga(ctx: FitnessContext, cfg: GaConfig, on_iteration=None) -> list[Individual]:
    """Run the GA for cfg.generations iterations (one offspring each).

    on_iteration, if given, receives a TraceRow after every iteration.
    Returns the final population of mu individuals.
    """
    _validate(cfg)
    rng = np.random.default_rng(cfg.seed)
    population = init_population(ctx, cfg, rng)
    t_max = min(max(cfg.t_init, cfg.t_lb), cfg.t_ub)
    for gen in range(1, cfg.generations + 1):
        do_crossover = rng.random() < cfg.p_c
        slot = int(rng.integers(cfg.mu))
        parent = population[slot]
        if do_crossover:
            other = int(rng.integers(cfg.mu - 1))
            if other >= slot:
                other += 1
            if rng.random() < 0.5:
                operator = "walkX"
                offspring = random_walk_crossover(parent, population[other], ctx, cfg.t_cr, rng)
            else:
                operator = "rectX"
                offspring = rectangular_crossover(parent, population[other], ctx, rng)
            survivor, accepted = selection(parent, offspring, ctx.bound)
        else:
            paint_to_t = not (rng.random() < 0.5)
            operator = "mutT" if paint_to_t else "mutS"
            offspring = random_walk_mutation(parent, ctx, paint_to_t, math.floor(t_max), rng)
            survivor, accepted = selection(parent, offspring, ctx.bound)
            t_max = adapt_t_max(t_max, accepted, cfg)
        population[slot] = survivor
        if on_iteration is not None:
            on_iteration(
                TraceRow(
                    generation=gen,
                    slot=slot,
                    operator=operator,
                    accepted=accepted,
                    fitness=survivor.fitness,
                    constraint=survivor.constraint,
                    t_max=t_max,
                )
            )
        if cfg.rebuild_every and gen % cfg.rebuild_every == 0:
            for ind in population:
                rebuild_stats(ind, ctx)
    return population
