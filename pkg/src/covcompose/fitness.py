"""Fitness of a composite image against two sources, via region covariance
descriptors, maintained incrementally over dirty regions.

f(X) = sum over regions of w_s * dist(cov_X, cov_S) + w_t * dist(cov_X, cov_T),
minimised subject to |c_s - c_t| <= bound, where c_s / c_t count the pixels of
X that equal the corresponding pixel of S / T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import regions as _regions
from . import spd
from .errors import BadValue, DimensionMismatch
from .features import (
    STENCIL_RADIUS,
    clamp_rect,
    dilate_rect,
    feature_tensor,
    recompute_feature_window,
    resolve_spec,
)
from .saliency import WeightMap

METRICS = ("euclidean", "logeuclidean", "affine")

# Mask values: which source a pixel is taken from.
FROM_S = False
FROM_T = True


@dataclass
class FitnessContext:
    """Read-only per-run data shared by every individual."""

    s_pixels: np.ndarray
    t_pixels: np.ndarray
    spec: tuple[str, ...]
    grid: _regions.RegionGrid
    metric: str
    w_s: np.ndarray
    w_t: np.ndarray
    desc_s: np.ndarray  # (R, p, p) regularized descriptors of S
    desc_t: np.ndarray
    log_desc_s: np.ndarray | None  # cached logs for the log-Euclidean metric
    log_desc_t: np.ndarray | None
    bound: int


def _descriptors(pixels, spec, grid):
    tensor = feature_tensor(pixels, spec)
    stats = _regions.init_stats(tensor, grid)
    p = tensor.shape[2]
    out = np.empty((grid.n_regions, p, p))
    for idx in range(grid.n_regions):
        out[idx] = _regions.covariance_from_stats(stats, idx)
    return out


def make_context(s_pixels, t_pixels, spec, l, metric, weights: WeightMap, bound=None) -> FitnessContext:
    """Precompute grid, descriptors, and weights for one run."""
    if metric not in METRICS:
        raise BadValue(f"metric must be one of {METRICS}, got {metric!r}")
    s_pixels = np.ascontiguousarray(s_pixels)
    t_pixels = np.ascontiguousarray(t_pixels)
    if s_pixels.shape != t_pixels.shape:
        raise DimensionMismatch("source and target images must have identical dimensions")
    names = resolve_spec(spec)
    m, n = s_pixels.shape[0], s_pixels.shape[1]
    grid = _regions.build_grid(m, n, l)
    if len(weights.w_s) != grid.n_regions or len(weights.w_t) != grid.n_regions:
        raise DimensionMismatch("weight map does not match the region grid")
    desc_s = _descriptors(s_pixels, names, grid)
    desc_t = _descriptors(t_pixels, names, grid)
    log_s = log_t = None
    if metric == "logeuclidean":
        log_s = np.stack([spd.spd_log(d) for d in desc_s])
        log_t = np.stack([spd.spd_log(d) for d in desc_t])
    if bound is None:
        bound = (m * n) // 4
    if bound < 0:
        raise BadValue("constraint bound must be >= 0")
    return FitnessContext(
        s_pixels=s_pixels,
        t_pixels=t_pixels,
        spec=names,
        grid=grid,
        metric=metric,
        w_s=np.asarray(weights.w_s, dtype=np.float64),
        w_t=np.asarray(weights.w_t, dtype=np.float64),
        desc_s=desc_s,
        desc_t=desc_t,
        log_desc_s=log_s,
        log_desc_t=log_t,
        bound=int(bound),
    )


@dataclass
class Individual:
    """A composite image: provenance mask plus the caches its fitness needs."""

    mask: np.ndarray  # (m, n) bool, True -> pixel taken from T
    pixels: np.ndarray  # (m, n, 3) uint8 rendered image
    tensor: np.ndarray  # (m, n, p) feature tensor of the rendered image
    stats: _regions.RegionStats
    dist_s: np.ndarray  # (R,) cached dist(cov_X, cov_S) per region
    dist_t: np.ndarray
    fitness: float
    c_s: int
    c_t: int

    @property
    def constraint(self) -> int:
        return abs(self.c_s - self.c_t)

    def copy(self) -> "Individual":
        return Individual(
            mask=self.mask.copy(),
            pixels=self.pixels.copy(),
            tensor=self.tensor.copy(),
            stats=self.stats.copy(),
            dist_s=self.dist_s.copy(),
            dist_t=self.dist_t.copy(),
            fitness=self.fitness,
            c_s=self.c_s,
            c_t=self.c_t,
        )


def render(mask, s_pixels, t_pixels) -> np.ndarray:
    return np.where(mask[:, :, None], t_pixels, s_pixels)


def _region_distances(stats, ctx, idx):
    cov = _regions.covariance_from_stats(stats, idx)
    if ctx.metric == "euclidean":
        return spd.dist_euclidean(cov, ctx.desc_s[idx]), spd.dist_euclidean(cov, ctx.desc_t[idx])
    if ctx.metric == "logeuclidean":
        lg = spd.spd_log(cov)
        return (
            float(np.linalg.norm(lg - ctx.log_desc_s[idx], "fro")),
            float(np.linalg.norm(lg - ctx.log_desc_t[idx], "fro")),
        )
    return (
        spd.dist_affineinvariant(cov, ctx.desc_s[idx]),
        spd.dist_affineinvariant(cov, ctx.desc_t[idx]),
    )


def _weighted_total(ind, ctx) -> float:
    return float(ctx.w_s @ ind.dist_s + ctx.w_t @ ind.dist_t)


def new_individual(mask, ctx: FitnessContext) -> Individual:
    ind = Individual(
        mask=np.asarray(mask, dtype=bool).copy(),
        pixels=None,
        tensor=None,
        stats=None,
        dist_s=np.zeros(ctx.grid.n_regions),
        dist_t=np.zeros(ctx.grid.n_regions),
        fitness=0.0,
        c_s=0,
        c_t=0,
    )
    evaluate_full(ind, ctx)
    return ind


def evaluate_full(ind: Individual, ctx: FitnessContext) -> float:
    """Rebuild every cache of `ind` from its mask and return the fitness."""
    ind.pixels = render(ind.mask, ctx.s_pixels, ctx.t_pixels)
    ind.tensor = feature_tensor(ind.pixels, ctx.spec)
    ind.stats = _regions.init_stats(ind.tensor, ctx.grid)
    for idx in range(ctx.grid.n_regions):
        ind.dist_s[idx], ind.dist_t[idx] = _region_distances(ind.stats, ctx, idx)
    ind.c_s = int(np.count_nonzero((ind.pixels == ctx.s_pixels).all(axis=2)))
    ind.c_t = int(np.count_nonzero((ind.pixels == ctx.t_pixels).all(axis=2)))
    ind.fitness = _weighted_total(ind, ctx)
    return ind.fitness


def evaluate_incremental(ind: Individual, ctx: FitnessContext, changed) -> float:
    """Refresh caches after the mask flipped at `changed` (k, 2) pixels.

    Only the feature window around pixels whose rendered value actually moved
    is recomputed, only the regions containing changed features get fresh
    distances, and c_s / c_t are updated by counting value changes.
    """
    changed = np.asarray(changed, dtype=np.int64).reshape(-1, 2)
    if changed.shape[0]:
        rr, cc = changed[:, 0], changed[:, 1]
        new_vals = np.where(ind.mask[rr, cc, None], ctx.t_pixels[rr, cc], ctx.s_pixels[rr, cc])
        old_vals = ind.pixels[rr, cc]
        moved = (new_vals != old_vals).any(axis=1)
        if moved.any():
            rr, cc = rr[moved], cc[moved]
            new_vals, old_vals = new_vals[moved], old_vals[moved]
            s_vals, t_vals = ctx.s_pixels[rr, cc], ctx.t_pixels[rr, cc]
            ind.c_s += int(np.count_nonzero((new_vals == s_vals).all(axis=1))) - int(
                np.count_nonzero((old_vals == s_vals).all(axis=1))
            )
            ind.c_t += int(np.count_nonzero((new_vals == t_vals).all(axis=1))) - int(
                np.count_nonzero((old_vals == t_vals).all(axis=1))
            )
            ind.pixels[rr, cc] = new_vals
            m, n = ind.mask.shape
            rect = clamp_rect((rr.min(), rr.max() + 1, cc.min(), cc.max() + 1), m, n)
            w0, w1, x0, x1 = dilate_rect(rect, STENCIL_RADIUS, m, n)
            before = ind.tensor[w0:w1, x0:x1].copy()
            recompute_feature_window(ind.tensor, ind.pixels, ctx.spec, rect)
            after = ind.tensor[w0:w1, x0:x1]
            touched = (after != before).any(axis=2)
            if touched.any():
                pos = np.argwhere(touched)
                old_phi = before[touched]
                new_phi = after[touched]
                pos[:, 0] += w0
                pos[:, 1] += x0
                dirty = _regions.apply_pixel_deltas(ind.stats, ctx.grid, pos, old_phi, new_phi)
                for idx in dirty:
                    ind.dist_s[idx], ind.dist_t[idx] = _region_distances(ind.stats, ctx, int(idx))
    ind.fitness = _weighted_total(ind, ctx)
    return ind.fitness


def rebuild_stats(ind: Individual, ctx: FitnessContext) -> None:
    """Rebuild the running sums from scratch to bound floating-point drift.

    Cached distances and fitness are kept: they only move when an offspring is
    accepted, which preserves the elitist monotonicity of the search.
    """
    ind.stats = _regions.init_stats(ind.tensor, ctx.grid)


def constraint_value(ind: Individual) -> int:
    return ind.constraint


def lex_key(ind: Individual, bound: int) -> tuple[int, float]:
    """(constraint violation, fitness); smaller is better."""
    return max(0, ind.constraint - bound), ind.fitness


def lex_compare(a: Individual, b: Individual, bound: int) -> int:
    """-1 if a is better than b, 0 on a tie, +1 if b is better."""
    ka, kb = lex_key(a, bound), lex_key(b, bound)
    return -1 if ka < kb else (1 if ka > kb else 0)
