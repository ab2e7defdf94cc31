"""Seeded instance generators for tests, benchmarks, and the CLI.

Every generator is deterministic in its seed (numpy default_rng), so
fixtures can be regenerated byte-identically from the provenance sidecar the
CLI writes next to generated files.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import InvalidParams
from .space import FiniteMetricSpace, space_from_points, validate_space

RANDOM_STYLES = ("uniform_cube", "random_semimetric")


def gen_model(
    k: int,
    pts_per_cluster: int,
    r: float,
    separation: float,
    seed: int,
    allow_weak_separation: bool = False,
) -> FiniteMetricSpace:
    """Planted structure: k blobs of diameter <= r/2, all cross distances
    equal to `separation`.

    Each blob is a uniform 1-D embedding, so the matrix is a genuine metric.
    By default separation must clear the long-edge boundary (> 3r), which
    makes alpha_min = beta_min = 0 at scale r for k >= 2; pass
    allow_weak_separation to drop the requirement to separation > r.
    """
    if k < 1:
        raise InvalidParams("k must be >= 1")
    if pts_per_cluster < 1:
        raise InvalidParams("pts_per_cluster must be >= 1")
    if r <= 0:
        raise InvalidParams("r must be positive")
    floor = r if allow_weak_separation else 3.0 * r
    if not separation > floor:
        raise InvalidParams(f"separation must exceed {floor} (got {separation})")
    rng = np.random.default_rng(seed)
    m = pts_per_cluster
    n = k * m
    dist = np.full((n, n), float(separation))
    for b in range(k):
        u = rng.uniform(0.0, r / 2.0, size=m)
        block = np.abs(u[:, None] - u[None, :])
        dist[b * m : (b + 1) * m, b * m : (b + 1) * m] = block
    np.fill_diagonal(dist, 0.0)
    return validate_space(dist)


def gen_adversarial(s: int, m: int, r: float, r_prime: float) -> FiniteMetricSpace:
    """Tightness family: s groups of m points, within-group distance 2r',
    cross-group distance r'.

    Group-major indexing (group of point i is i // m). Any set with more
    than one point per group has diameter 2r', so for r' <= 2r the largest
    2r-cluster is a transversal of size s; ordered pairs with distance > r'
    number exactly s*m*(m-1).
    """
    if s < 1 or m < 1:
        raise InvalidParams("s and m must be >= 1")
    if r <= 0:
        raise InvalidParams("r must be positive")
    if not r_prime > r:
        raise InvalidParams("r_prime must exceed r")
    n = s * m
    dist = np.full((n, n), float(r_prime))
    for g in range(s):
        dist[g * m : (g + 1) * m, g * m : (g + 1) * m] = 2.0 * r_prime
    np.fill_diagonal(dist, 0.0)
    return validate_space(dist)


def _lattice_centers(count: int, dim: int) -> np.ndarray:
    """First `count` integer lattice points, nearest to the origin first."""
    side = max(1, math.ceil(count ** (1.0 / dim)))
    while side**dim < count:
        side += 1
    pts = sorted(
        itertools.product(range(side), repeat=dim),
        key=lambda t: (sum(x * x for x in t), t),
    )
    return np.asarray(pts[:count], dtype=np.float64)


def gen_blobs(
    blobs: int,
    pts_per_blob: int,
    dim: int,
    spread: float,
    separation: float,
    seed: int,
) -> np.ndarray:
    """Gaussian point blobs with centers at least `separation` apart.

    Centers sit on distinct integer lattice points scaled by separation;
    returns the raw (blobs * pts_per_blob, dim) coordinate array.
    """
    if blobs < 1 or pts_per_blob < 1:
        raise InvalidParams("blobs and pts_per_blob must be >= 1")
    if dim < 1:
        raise InvalidParams("dim must be >= 1")
    if spread < 0 or separation <= 0:
        raise InvalidParams("spread must be >= 0 and separation positive")
    rng = np.random.default_rng(seed)
    centers = _lattice_centers(blobs, dim) * separation
    chunks = []
    for b in range(blobs):
        chunks.append(centers[b] + rng.normal(0.0, spread, size=(pts_per_blob, dim)))
    return np.vstack(chunks)


def gen_random(n: int, seed: int, style: str = "uniform_cube", dim: int = 3) -> FiniteMetricSpace:
    """Random instance: Euclidean points in the unit cube, or an i.i.d.
    uniform semimetric (symmetric matrix, zero diagonal, no triangle
    guarantee)."""
    if n < 1:
        raise InvalidParams("n must be >= 1")
    if style not in RANDOM_STYLES:
        raise InvalidParams(f"style must be one of {RANDOM_STYLES}, got {style!r}")
    rng = np.random.default_rng(seed)
    if style == "uniform_cube":
        if dim < 1:
            raise InvalidParams("dim must be >= 1")
        return space_from_points(rng.random((n, dim)))
    dist = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    dist[iu] = rng.random(iu[0].size)
    dist[(iu[1], iu[0])] = dist[iu]
    return validate_space(dist)
