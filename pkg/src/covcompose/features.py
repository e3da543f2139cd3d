"""Per-pixel feature evaluation: intensity, derivatives, edge response, HSV.

Requested feature grids are stacked into an (m, n, p) tensor. Spatial
coordinates are 1-based (i = row, j = column); colour and HSV channels live
in [0, 255]; derivative features are absolute magnitudes of central
differences with replicate borders.
"""

from __future__ import annotations

import numpy as np

from .errors import BadValue, DimensionTooSmall

# Catalogue of per-pixel features. di..dij are |first/second differences|.
FEATURE_NAMES = (
    "i", "j",
    "r", "g", "b",
    "di", "dj", "dii", "djj", "dij",
    "edge_mag", "edge_ori",
    "h", "s", "v",
)

# Named presets used throughout the experiments.
FEATURE_SETS = {
    "1": ("i", "j", "r", "g", "b", "edge_mag", "edge_ori"),
    "2": ("i", "j", "h", "s", "v"),
    "3": ("h", "s", "v", "edge_mag", "edge_ori"),
}

_DERIVATIVE_FEATURES = frozenset(("di", "dj", "dii", "djj", "dij", "edge_mag", "edge_ori"))
_HSV_FEATURES = frozenset(("h", "s", "v"))
_CHANNEL_INDEX = {"r": 0, "g": 1, "b": 2}

# Chebyshev radius of the derivative stencils: a pixel change can move
# feature values at most this far.
STENCIL_RADIUS = 2

INTENSITY_WEIGHTS = (0.2989, 0.5870, 0.1140)


def resolve_spec(spec) -> tuple[str, ...]:
    """Normalize a feature spec (preset id, comma list, or iterable of names)."""
    if isinstance(spec, int):
        spec = str(spec)
    if isinstance(spec, str):
        key = spec.strip()
        if key in FEATURE_SETS:
            return FEATURE_SETS[key]
        names = tuple(part.strip() for part in key.split(",") if part.strip())
    else:
        names = tuple(spec)
    unknown = [name for name in names if name not in FEATURE_NAMES]
    if unknown:
        raise BadValue(f"unknown feature name(s): {', '.join(unknown)}")
    if len(set(names)) != len(names):
        raise BadValue("feature list contains duplicates")
    if len(names) < 2:
        raise BadValue("a feature spec needs at least two features")
    return names


def needs_derivatives(names) -> bool:
    return any(name in _DERIVATIVE_FEATURES for name in names)


def intensity(pixels) -> np.ndarray:
    """Luma-weighted intensity, kept in double precision (not rounded)."""
    px = np.asarray(pixels, dtype=np.float64)
    wr, wg, wb = INTENSITY_WEIGHTS
    return wr * px[..., 0] + wg * px[..., 1] + wb * px[..., 2]


def derivatives(grid):
    """Signed central differences (d/di, d/dj, d2/di2, d2/dj2, d2/didj).

    First differences are (f(x+1) - f(x-1)) / 2, second differences are
    f(x+1) - 2 f(x) + f(x-1), the mixed term chains the two first-difference
    stencils; borders use replicate padding.
    """
    a = np.asarray(grid, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 3 or a.shape[1] < 3:
        raise DimensionTooSmall("derivative stencils need at least a 3x3 grid")
    p = np.pad(a, 1, mode="edge")
    d_i = 0.5 * (p[2:, 1:-1] - p[:-2, 1:-1])
    d_j = 0.5 * (p[1:-1, 2:] - p[1:-1, :-2])
    d_ii = p[2:, 1:-1] - 2.0 * a + p[:-2, 1:-1]
    d_jj = p[1:-1, 2:] - 2.0 * a + p[1:-1, :-2]
    q = np.pad(d_i, 1, mode="edge")
    d_ij = 0.5 * (q[1:-1, 2:] - q[1:-1, :-2])
    return d_i, d_j, d_ii, d_jj, d_ij


def edge_features(d_i, d_j):
    """Edge magnitude and orientation; orientation is 0 where both vanish."""
    mag = np.hypot(d_i, d_j)
    ori = np.arctan2(np.abs(d_i), np.abs(d_j))
    return mag, ori


def rgb_to_hsv(pixels):
    """Hexcone RGB -> HSV with every channel scaled to [0, 255].

    Grey pixels (zero chroma) get h = 0 by convention; black gets s = 0.
    """
    px = np.asarray(pixels, dtype=np.float64) / 255.0
    r, g, b = px[..., 0], px[..., 1], px[..., 2]
    v = np.max(px, axis=-1)
    c = v - np.min(px, axis=-1)
    safe_v = np.where(v > 0.0, v, 1.0)
    s = np.where(v > 0.0, c / safe_v, 0.0)
    safe_c = np.where(c > 0.0, c, 1.0)
    hr = np.mod((g - b) / safe_c, 6.0)
    hg = (b - r) / safe_c + 2.0
    hb = (r - g) / safe_c + 4.0
    h = np.where(v == r, hr, np.where(v == g, hg, hb))
    h = np.where(c > 0.0, h / 6.0, 0.0)
    return 255.0 * h, 255.0 * s, 255.0 * v


def feature_tensor(pixels, spec, origin=(1, 1)) -> np.ndarray:
    """Stack the requested feature grids into an (m, n, p) float tensor.

    origin gives the 1-based coordinates of pixel (0, 0); window recomputation
    passes the window offset so spatial features stay global.
    """
    names = resolve_spec(spec)
    px = np.asarray(pixels)
    m, n = px.shape[0], px.shape[1]
    grids = {}
    if needs_derivatives(names):
        d_i, d_j, d_ii, d_jj, d_ij = derivatives(intensity(px))
        grids["di"] = np.abs(d_i)
        grids["dj"] = np.abs(d_j)
        grids["dii"] = np.abs(d_ii)
        grids["djj"] = np.abs(d_jj)
        grids["dij"] = np.abs(d_ij)
        grids["edge_mag"], grids["edge_ori"] = edge_features(d_i, d_j)
    if any(name in _HSV_FEATURES for name in names):
        grids["h"], grids["s"], grids["v"] = rgb_to_hsv(px)
    if "i" in names:
        rows = np.arange(origin[0], origin[0] + m, dtype=np.float64)
        grids["i"] = np.broadcast_to(rows[:, None], (m, n))
    if "j" in names:
        cols = np.arange(origin[1], origin[1] + n, dtype=np.float64)
        grids["j"] = np.broadcast_to(cols[None, :], (m, n))
    for name in names:
        if name in _CHANNEL_INDEX:
            grids[name] = np.asarray(px[..., _CHANNEL_INDEX[name]], dtype=np.float64)
    out = np.empty((m, n, len(names)), dtype=np.float64)
    for k, name in enumerate(names):
        out[:, :, k] = grids[name]
    return out


def clamp_rect(rect, m, n):
    """Clamp a (r0, r1, c0, c1) half-open rectangle to the image."""
    r0, r1, c0, c1 = rect
    r0 = min(max(int(r0), 0), m)
    r1 = min(max(int(r1), r0), m)
    c0 = min(max(int(c0), 0), n)
    c1 = min(max(int(c1), c0), n)
    return r0, r1, c0, c1


def dilate_rect(rect, radius, m, n):
    r0, r1, c0, c1 = rect
    return clamp_rect((r0 - radius, r1 + radius, c0 - radius, c1 + radius), m, n)


def recompute_feature_window(tensor, pixels, spec, rect):
    """Refresh `tensor` over `rect` dilated by the stencil radius.

    Only the dilated window is rewritten, and its values match a from-scratch
    feature_tensor exactly: the computation runs on a buffer window two pixels
    wider so every stencil sees the same neighbours as the full-image pass.
    Returns the (r0, r1, c0, c1) window that was rewritten (empty rect is a
    no-op).
    """
    m, n = tensor.shape[0], tensor.shape[1]
    r0, r1, c0, c1 = clamp_rect(rect, m, n)
    if r1 <= r0 or c1 <= c0:
        return r0, r0, c0, c0
    w0, w1, x0, x1 = dilate_rect((r0, r1, c0, c1), STENCIL_RADIUS, m, n)
    u0, u1, y0, y1 = dilate_rect((w0, w1, x0, x1), STENCIL_RADIUS, m, n)
    sub = feature_tensor(pixels[u0:u1, y0:y1], spec, origin=(u0 + 1, y0 + 1))
    tensor[w0:w1, x0:x1] = sub[w0 - u0 : w1 - u0, x0 - y0 : x1 - y0]
    return w0, w1, x0, x1
