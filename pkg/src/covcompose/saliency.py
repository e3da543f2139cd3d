"""DCT image-signature saliency and per-region weight maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dctn, idctn
from scipy.ndimage import gaussian_filter

from .errors import DegenerateImage, DimensionMismatch, WeightOutOfRange
from .regions import RegionGrid


def image_signature_saliency(pixels, sigma_frac: float = 0.04) -> np.ndarray:
    """Saliency map in [0, 1] built from the sign of the per-channel DCT.

    Per channel: forward 2-D type-II DCT, keep only the sign of each
    coefficient (the DC sign is dropped, so structureless images come out
    identically zero), inverse transform, square. Channel maps are summed,
    blurred with sigma = sigma_frac * min(m, n), and scaled to peak at 1.

    Raises DegenerateImage when the pre-normalization map is identically 0
    (e.g. a constant image).
    """
    if not 0.0 < sigma_frac < 0.5:
        raise ValueError(f"sigma_frac must lie in (0, 0.5), got {sigma_frac}")
    px = np.asarray(pixels, dtype=np.float64)
    if px.ndim == 2:
        px = px[:, :, None]
    m, n = px.shape[0], px.shape[1]
    acc = np.zeros((m, n))
    for k in range(px.shape[2]):
        spec = np.sign(dctn(px[:, :, k], type=2, norm="ortho"))
        spec[0, 0] = 0.0
        acc += idctn(spec, type=2, norm="ortho") ** 2
    blurred = gaussian_filter(acc, sigma=sigma_frac * min(m, n))
    peak = float(blurred.max())
    if peak <= 0.0:
        raise DegenerateImage("saliency map is identically zero (structureless image)")
    return blurred / peak


@dataclass
class WeightMap:
    """Per-region weights toward the source (w_s) and target (w_t) descriptors."""

    w_s: np.ndarray  # (R,)
    w_t: np.ndarray  # (R,)


def uniform_weights(grid: RegionGrid, w_s: float, w_t: float) -> WeightMap:
    for name, w in (("w_s", w_s), ("w_t", w_t)):
        if not 0.0 <= w <= 1.0:
            raise WeightOutOfRange(f"{name}={w} lies outside [0, 1]")
    return WeightMap(
        np.full(grid.n_regions, float(w_s)),
        np.full(grid.n_regions, float(w_t)),
    )


def _region_means(grid: RegionGrid, sal: np.ndarray) -> np.ndarray:
    out = np.empty(grid.n_regions)
    for idx in range(grid.n_regions):
        r0, r1, c0, c1 = grid.bounds(idx)
        out[idx] = sal[r0:r1, c0:c1].mean()
    return out


def saliency_weights(grid: RegionGrid, sal_s, sal_t) -> WeightMap:
    """Weights as the mean of each saliency map over every region."""
    sal_s = np.asarray(sal_s, dtype=np.float64)
    sal_t = np.asarray(sal_t, dtype=np.float64)
    for sal in (sal_s, sal_t):
        if sal.shape != (grid.m, grid.n):
            raise DimensionMismatch(
                f"saliency map shape {sal.shape} does not match image {grid.m}x{grid.n}"
            )
    return WeightMap(_region_means(grid, sal_s), _region_means(grid, sal_t))
