"""Half-overlapping square region grid with running-sum covariance accumulators.

Regions are (2l+1) x (2l+1) squares whose centers step by l along each axis,
so neighbouring regions overlap by half. Pixels past the last center's reach
(a bottom/right margin of up to 2l-1 pixels) belong to no region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ImageTooSmall
from .spd import regularize, symmetrize


def _axis_centers(extent: int, l: int) -> np.ndarray:
    # 1-based centers are (l+1) + p*l; keep only those whose region fits,
    # which trims one trailing center whenever l divides the extent.
    count = (extent - l - 1) // l
    return l + l * np.arange(count, dtype=np.int64)


@dataclass(frozen=True)
class RegionGrid:
    """Centers (0-based) of the half-overlapping square regions."""

    l: int
    m: int
    n: int
    rows: np.ndarray
    cols: np.ndarray

    @property
    def n_regions(self) -> int:
        return len(self.rows) * len(self.cols)

    @property
    def region_size(self) -> int:
        return (2 * self.l + 1) ** 2

    def center(self, idx: int) -> tuple[int, int]:
        a, b = divmod(int(idx), len(self.cols))
        return int(self.rows[a]), int(self.cols[b])

    def bounds(self, idx: int) -> tuple[int, int, int, int]:
        """(r0, r1, c0, c1) half-open pixel bounds of region `idx`."""
        c, d = self.center(idx)
        return c - self.l, c + self.l + 1, d - self.l, d + self.l + 1


def build_grid(m: int, n: int, l: int) -> RegionGrid:
    if l < 1 or m < 2 * l + 1 or n < 2 * l + 1:
        raise ImageTooSmall(
            f"grid with half-width l={l} needs at least {2 * l + 1} pixels per side, image is {m}x{n}"
        )
    return RegionGrid(l=int(l), m=int(m), n=int(n), rows=_axis_centers(m, l), cols=_axis_centers(n, l))


def regions_containing(grid: RegionGrid, i: int, j: int) -> list[int]:
    """Flat indices of every region whose square contains pixel (i, j), 0-based.

    O(1) arithmetic: center index p contains row i iff ceil((i-2l)/l) <= p <= floor(i/l).
    """
    l = grid.l
    gi, gj = len(grid.rows), len(grid.cols)
    plo = max(0, -(-(i - 2 * l) // l))
    phi = min(gi - 1, i // l)
    qlo = max(0, -(-(j - 2 * l) // l))
    qhi = min(gj - 1, j // l)
    return [a * gj + b for a in range(plo, phi + 1) for b in range(qlo, qhi + 1)]


@dataclass
class RegionStats:
    """Running sums per region: pixel count, sum of phi, sum of phi phi^T."""

    count: int
    sum_vec: np.ndarray  # (R, p)
    sum_outer: np.ndarray  # (R, p, p)

    def copy(self) -> "RegionStats":
        return RegionStats(self.count, self.sum_vec.copy(), self.sum_outer.copy())


def init_stats(tensor: np.ndarray, grid: RegionGrid) -> RegionStats:
    p = tensor.shape[2]
    sum_vec = np.empty((grid.n_regions, p))
    sum_outer = np.empty((grid.n_regions, p, p))
    for idx in range(grid.n_regions):
        r0, r1, c0, c1 = grid.bounds(idx)
        v = tensor[r0:r1, c0:c1].reshape(-1, p)
        sum_vec[idx] = v.sum(axis=0)
        sum_outer[idx] = v.T @ v
    return RegionStats(count=grid.region_size, sum_vec=sum_vec, sum_outer=sum_outer)


def covariance_from_stats(stats: RegionStats, idx: int, regularized: bool = True) -> np.ndarray:
    """(sum phi phi^T - count mu mu^T) / (count - 1), symmetrized."""
    cnt = stats.count
    mu = stats.sum_vec[idx] / cnt
    cov = symmetrize((stats.sum_outer[idx] - cnt * np.outer(mu, mu)) / (cnt - 1))
    return regularize(cov) if regularized else cov


def region_covariance(tensor: np.ndarray, center, l: int, regularized: bool = True) -> np.ndarray:
    """Covariance of the features over the square centred at (c, d), 0-based."""
    c, d = center
    r0, r1, c0, c1 = c - l, c + l + 1, d - l, d + l + 1
    if r0 < 0 or c0 < 0 or r1 > tensor.shape[0] or c1 > tensor.shape[1]:
        raise ImageTooSmall(f"region centred at {(c, d)} with l={l} exceeds the image")
    v = tensor[r0:r1, c0:c1].reshape(-1, tensor.shape[2])
    cnt = v.shape[0]
    mu = v.sum(axis=0) / cnt
    cov = symmetrize((v.T @ v - cnt * np.outer(mu, mu)) / (cnt - 1))
    return regularize(cov) if regularized else cov


def apply_pixel_deltas(stats: RegionStats, grid: RegionGrid, positions, old_phi, new_phi) -> np.ndarray:
    """Fold per-pixel feature deltas into every region containing each pixel.

    positions: (k, 2) 0-based pixel coordinates; old_phi/new_phi: (k, p) feature
    rows before and after the change. Regions not containing any delta pixel
    are untouched. Returns the sorted flat indices of the regions updated.
    """
    positions = np.asarray(positions, dtype=np.int64)
    if positions.size == 0:
        return np.empty(0, dtype=np.int64)
    ii, jj = positions[:, 0], positions[:, 1]
    l = grid.l
    gi, gj = len(grid.rows), len(grid.cols)
    plo = np.maximum(0, -(-(ii - 2 * l) // l))
    phi = np.minimum(gi - 1, ii // l)
    qlo = np.maximum(0, -(-(jj - 2 * l) // l))
    qhi = np.minimum(gj - 1, jj // l)
    reg_parts, pix_parts = [], []
    # a pixel can sit in up to 3 row-intervals and 3 column-intervals
    for da in range(3):
        aa = plo + da
        row_ok = aa <= phi
        for db in range(3):
            bb = qlo + db
            ok = row_ok & (bb <= qhi)
            if np.any(ok):
                reg_parts.append(aa[ok] * gj + bb[ok])
                pix_parts.append(np.nonzero(ok)[0])
    if not reg_parts:
        return np.empty(0, dtype=np.int64)
    regs = np.concatenate(reg_parts)
    pix = np.concatenate(pix_parts)
    order = np.argsort(regs, kind="stable")
    regs, pix = regs[order], pix[order]
    dirty, starts = np.unique(regs, return_index=True)
    stops = np.append(starts[1:], len(regs))
    old_phi = np.asarray(old_phi, dtype=np.float64)
    new_phi = np.asarray(new_phi, dtype=np.float64)
    for r, a, b in zip(dirty, starts, stops):
        sel = pix[a:b]
        old = old_phi[sel]
        new = new_phi[sel]
        stats.sum_vec[r] += (new - old).sum(axis=0)
        stats.sum_outer[r] += new.T @ new - old.T @ old
    return dirty
