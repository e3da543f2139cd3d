"""Shared fixtures-in-functions for the test suite: image generators,
independent oracles, and small geometry utilities."""

from __future__ import annotations

import numpy as np


def random_image(rng, m, n):
    return rng.integers(0, 256, (m, n, 3), dtype=np.uint8)


def textured_image(m, n, phase=0.0):
    """Smooth, structured test image (saliency-friendly)."""
    ii, jj = np.indices((m, n), dtype=np.float64)
    r = 128 + 100 * np.sin(ii / 9.0 + phase) * np.cos(jj / 13.0 + 0.5 * phase)
    g = 128 + 100 * np.cos(ii / 17.0 + 2.0 * phase) * np.sin(jj / 11.0)
    b = 128 + 100 * np.sin((ii + jj) / 7.0 + 3.0 * phase)
    return np.clip(np.stack([r, g, b], axis=-1), 0, 255).astype(np.uint8)


def distinct_pair(m, n, rng=None, textured=True):
    """An (S, T) pair differing at every pixel (red channel parity differs)."""
    if textured:
        s = textured_image(m, n, 0.0)
        t = textured_image(m, n, 2.3)
    else:
        s = random_image(rng, m, n)
        t = random_image(rng, m, n)
    s = s.copy()
    t = t.copy()
    s[..., 0] &= 0xFE
    t[..., 0] |= 1
    return s, t


def random_spd(rng, p, log_cond=2.0):
    """Random SPD matrix with eigenvalues log-uniform over ~10**(+-log_cond/2)."""
    q, _ = np.linalg.qr(rng.normal(size=(p, p)))
    evals = 10.0 ** rng.uniform(-log_cond / 2.0, log_cond / 2.0, size=p)
    a = (q * evals) @ q.T
    return 0.5 * (a + a.T)


def two_pass_covariance(v):
    """Textbook covariance of row vectors with the 1/(N-1) normaliser."""
    v = np.asarray(v, dtype=np.float64)
    mu = v.mean(axis=0)
    dev = v - mu
    cov = dev.T @ dev / (v.shape[0] - 1)
    return 0.5 * (cov + cov.T)


def region_vectors(tensor, grid, idx):
    r0, r1, c0, c1 = grid.bounds(idx)
    return tensor[r0:r1, c0:c1].reshape(-1, tensor.shape[2])


def brute_regions_containing(grid, i, j):
    """Region membership by scanning every region (oracle for the O(1) path)."""
    out = []
    for idx in range(grid.n_regions):
        r0, r1, c0, c1 = grid.bounds(idx)
        if r0 <= i < r1 and c0 <= j < c1:
            out.append(idx)
    return out


def rel_frobenius(a, b):
    denom = max(np.linalg.norm(b, "fro"), 1e-30)
    return np.linalg.norm(a - b, "fro") / denom


def connected_on_torus(points, m, n):
    """True if the pixel set is 4-connected under toroidal wraparound."""
    pts = {(int(i), int(j)) for i, j in points}
    if not pts:
        return True
    start = next(iter(pts))
    seen = {start}
    stack = [start]
    while stack:
        i, j = stack.pop()
        for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            q = ((i + di) % m, (j + dj) % n)
            if q in pts and q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(pts)
