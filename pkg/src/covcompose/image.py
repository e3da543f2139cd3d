"""8-bit RGB image I/O and validation helpers."""

from __future__ import annotations

import hashlib

import numpy as np
from PIL import Image

from .errors import DimensionMismatch, MissingInput


def as_rgb_array(pixels) -> np.ndarray:
    """Validate an (m, n, 3) pixel grid and return it as contiguous uint8."""
    arr = np.ascontiguousarray(pixels)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (m, n, 3) pixel grid, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must contain at least one pixel")
    if arr.dtype != np.uint8:
        if np.any(arr < 0) or np.any(arr > 255):
            raise ValueError("channel values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def load_png(path) -> np.ndarray:
    """Load an image file as 8-bit RGB, stripping any alpha channel."""
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except FileNotFoundError as exc:
        raise MissingInput(f"cannot read image: {path}") from exc


def save_png(path, pixels) -> None:
    Image.fromarray(as_rgb_array(pixels), mode="RGB").save(path, format="PNG")


def save_grey_png(path, grid) -> None:
    """Save a [0, 1] real grid as an 8-bit greyscale PNG."""
    g = np.clip(np.asarray(grid, dtype=np.float64), 0.0, 1.0)
    Image.fromarray(np.round(255.0 * g).astype(np.uint8), mode="L").save(path, format="PNG")


def require_same_size(a, b) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(
            f"images differ in size: {a.shape[0]}x{a.shape[1]} vs {b.shape[0]}x{b.shape[1]}"
        )


def is_mixture(x, s, t) -> bool:
    """True if every pixel of x equals the corresponding pixel of s or of t."""
    from_s = (x == s).all(axis=2)
    from_t = (x == t).all(axis=2)
    return bool(np.all(from_s | from_t))


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()
