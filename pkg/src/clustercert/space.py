"""Finite weighted semimetric spaces and elementary geometric queries.

A space is a full n x n distance matrix (symmetric, zero diagonal,
non-negative entries) with strictly positive point weights. The triangle
inequality is *not* required; it is checked once and exposed as a
diagnostic flag, because several downstream guarantees only hold for
genuine metrics.

Distances are split into three classes relative to a scale r:

    short   d <= r
    medium  r < d <= m*r    (m = medium multiplier, default 3)
    long    d > m*r

The classes partition [0, inf) exactly; an optional tolerance shifts both
boundaries by the same additive amount.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    EmptySet,
    IndexOutOfRange,
    InvalidParams,
    NegativeDistance,
    NonpositiveWeight,
    NonzeroDiagonal,
)

POINT_METRICS = ("euclidean", "manhattan", "chebyshev")


class EdgeClass(Enum):
    SHORT = "short"
    MEDIUM = "medium"
    LONG = "long"


@dataclass(frozen=True)
class ScaleParams:
    """Scale r and structure order k driving every downstream computation.

    medium_multiplier widens or narrows the medium band (r, m*r]; values
    other than 3 are for exploration only and downstream certification
    refuses to certify with them.
    """

    r: float
    k: int
    medium_multiplier: float = 3.0

    def __post_init__(self):
        if not (isinstance(self.k, int) and self.k >= 2):
            raise InvalidParams(f"k must be an integer >= 2, got {self.k!r}")
        if not (self.r > 0 and np.isfinite(self.r)):
            raise InvalidParams(f"r must be a positive finite real, got {self.r!r}")
        if not (self.medium_multiplier > 1 and np.isfinite(self.medium_multiplier)):
            raise InvalidParams("medium_multiplier must be > 1")

    @property
    def medium_hi(self) -> float:
        return self.medium_multiplier * self.r


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Validated immutable space: distances, weights, optional labels."""

    dist: np.ndarray
    weights: np.ndarray
    labels: tuple[str, ...] | None
    triangle_ok: bool

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def total_measure(self) -> float:
        return float(self.weights.sum())

    @property
    def uniform_weights(self) -> bool:
        return bool(np.all(self.weights == self.weights[0]))


def _check_triangle(dist: np.ndarray) -> bool:
    """Diagnostic only: does d(i,k) <= d(i,j) + d(j,k) hold for all triples?

    A tiny relative slack absorbs float rounding in matrices derived from
    coordinates (collinear points can violate by one ulp).
    """
    n = dist.shape[0]
    tol = 1e-12 * float(dist.max(initial=0.0))
    for j in range(n):
        if (dist > dist[:, j][:, None] + dist[j, :][None, :] + tol).any():
            return False
    return True


def validate_space(
    dist: Sequence | np.ndarray,
    weights: Sequence | np.ndarray | None = None,
    labels: Sequence[str] | None = None,
) -> FiniteMetricSpace:
    """Validate raw inputs and freeze them into a FiniteMetricSpace.

    Raises DimensionMismatch, NonzeroDiagonal, AsymmetricMatrix,
    NegativeDistance, or NonpositiveWeight naming the offending entry.
    """
    d = np.asarray(dist, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DimensionMismatch(f"distance matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    if n == 0:
        raise DimensionMismatch("space must contain at least one point")

    bad = ~np.isfinite(d) | (d < 0)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NegativeDistance(int(i), int(j))
    diag = np.diagonal(d)
    if (diag != 0).any():
        raise NonzeroDiagonal(int(np.nonzero(diag != 0)[0][0]))
    asym = d != d.T
    if asym.any():
        i, j = np.argwhere(asym)[0]
        raise AsymmetricMatrix(int(i), int(j))

    if weights is None:
        w = np.ones(n, dtype=np.float64)
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (n,):
            raise DimensionMismatch(f"expected {n} weights, got shape {w.shape}")
        bad_w = ~np.isfinite(w) | (w <= 0)
        if bad_w.any():
            raise NonpositiveWeight(int(np.nonzero(bad_w)[0][0]))

    lab: tuple[str, ...] | None = None
    if labels is not None:
        lab = tuple(str(x) for x in labels)
        if len(lab) != n:
            raise DimensionMismatch(f"expected {n} labels, got {len(lab)}")

    d = d.copy()
    w = w.copy()
    d.flags.writeable = False
    w.flags.writeable = False
    return FiniteMetricSpace(dist=d, weights=w, labels=lab, triangle_ok=_check_triangle(d))


def classify_edge(d: float, params: ScaleParams, tol: float = 0.0) -> EdgeClass:
    """Assign a distance to its class; boundaries shift together by tol."""
    if not (d >= 0):
        raise InvalidParams(f"distance must be >= 0, got {d!r}")
    if d <= params.r + tol:
        return EdgeClass.SHORT
    if d <= params.medium_hi + tol:
        return EdgeClass.MEDIUM
    return EdgeClass.LONG


def _check_indices(space: FiniteMetricSpace, idx: Iterable[int]) -> list[int]:
    out = []
    n = space.n
    for i in idx:
        ii = int(i)
        if not 0 <= ii < n:
            raise IndexOutOfRange(ii, n)
        out.append(ii)
    return out


def diameter(space: FiniteMetricSpace, subset: Iterable[int]) -> float:
    """Largest pairwise distance within subset; 0 for singletons and empty."""
    a = _check_indices(space, subset)
    if len(a) <= 1:
        return 0.0
    return float(space.dist[np.ix_(a, a)].max())


def set_distance(space: FiniteMetricSpace, a: Iterable[int], b: Iterable[int]) -> float:
    """Smallest cross distance between two non-empty disjoint index sets."""
    aa = _check_indices(space, a)
    bb = _check_indices(space, b)
    if not aa:
        raise EmptySet("first index set")
    if not bb:
        raise EmptySet("second index set")
    if set(aa) & set(bb):
        raise InvalidParams("index sets must be disjoint")
    return float(space.dist[np.ix_(aa, bb)].min())


# ---------------------------------------------------------------------------
# serialization


def _condense(d: np.ndarray) -> list[float]:
    n = d.shape[0]
    iu = np.triu_indices(n, 1)
    return [float(x) for x in d[iu]]


def _expand_condensed(vals: Sequence[float], n: int) -> np.ndarray:
    need = n * (n - 1) // 2
    if len(vals) != need:
        raise DimensionMismatch(
            f"condensed vector needs {need} entries for n={n}, got {len(vals)}"
        )
    d = np.zeros((n, n), dtype=np.float64)
    iu = np.triu_indices(n, 1)
    d[iu] = np.asarray(vals, dtype=np.float64)
    d[(iu[1], iu[0])] = d[iu]
    return d


def space_to_json_dict(space: FiniteMetricSpace, condensed: bool = False) -> dict:
    """Plain-dict form of a space; weights omitted when uniform 1.0."""
    out: dict = {"n": space.n}
    if not np.all(space.weights == 1.0):
        out["weights"] = [float(x) for x in space.weights]
    if space.labels is not None:
        out["labels"] = list(space.labels)
    if condensed:
        out["distances"] = {"condensed": _condense(space.dist)}
    else:
        out["distances"] = [[float(x) for x in row] for row in space.dist]
    return out


def space_from_json_dict(payload: dict) -> FiniteMetricSpace:
    if not isinstance(payload, dict):
        raise DimensionMismatch("space document must be a JSON object")
    try:
        n = int(payload["n"])
    except (KeyError, TypeError, ValueError):
        raise DimensionMismatch("space document needs an integer field 'n'") from None
    dist = payload.get("distances")
    if isinstance(dist, dict):
        if "condensed" not in dist:
            raise DimensionMismatch("distance object must carry a 'condensed' list")
        d = _expand_condensed(dist["condensed"], n)
    elif isinstance(dist, list):
        d = np.asarray(dist, dtype=np.float64)
        if d.shape != (n, n):
            raise DimensionMismatch(f"expected {n}x{n} distance matrix, got {d.shape}")
    else:
        raise DimensionMismatch("space document needs a 'distances' field")
    return validate_space(d, payload.get("weights"), payload.get("labels"))


def load_space_json(path: str) -> FiniteMetricSpace:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return space_from_json_dict(payload)


def dump_space_json(space: FiniteMetricSpace, path: str, condensed: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(space_to_json_dict(space, condensed=condensed), fh, indent=2, sort_keys=True)
        fh.write("\n")


def pairwise_distances(points: np.ndarray, metric: str = "euclidean") -> np.ndarray:
    """Symmetric distance matrix of a point cloud under a named metric."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise DimensionMismatch(f"point cloud must be 2-D, got shape {pts.shape}")
    if metric not in POINT_METRICS:
        raise InvalidParams(f"metric must be one of {POINT_METRICS}, got {metric!r}")
    n = pts.shape[0]
    d = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        delta = pts[i + 1 :] - pts[i]
        if metric == "euclidean":
            row = np.sqrt((delta * delta).sum(axis=1))
        elif metric == "manhattan":
            row = np.abs(delta).sum(axis=1)
        else:
            row = np.abs(delta).max(axis=1) if delta.size else np.zeros(0)
        d[i, i + 1 :] = row
        d[i + 1 :, i] = row
    return d


def space_from_points(
    points: np.ndarray,
    metric: str = "euclidean",
    weights: Sequence | None = None,
    labels: Sequence[str] | None = None,
) -> FiniteMetricSpace:
    return validate_space(pairwise_distances(points, metric), weights, labels)


def load_points_csv(path: str) -> np.ndarray:
    """Read a point cloud: one header row, one row of coordinates per point."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise DimensionMismatch("point CSV needs a header row and at least one point")
    width = len(rows[0])
    pts = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise DimensionMismatch(f"row {lineno} has {len(row)} fields, expected {width}")
        try:
            pts.append([float(x) for x in row])
        except ValueError as exc:
            raise DimensionMismatch(f"row {lineno}: {exc}") from None
    return np.asarray(pts, dtype=np.float64)


def points_to_csv_text(points: np.ndarray) -> str:
    pts = np.asarray(points, dtype=np.float64)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{i}" for i in range(pts.shape[1])])
    for row in pts:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def save_points_csv(points: np.ndarray, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(points_to_csv_text(points))
