"""Self-similar square sets with exact integer corners.

A ``SquareSet`` of generation n over base b stores integer numerators (i, j);
square (i, j) is ``[i/b^n, (i+1)/b^n] x [j/b^n, (j+1)/b^n]``. Floats appear
only when a consumer asks for coordinates.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

MAX_GENERATION = 12


@dataclass(frozen=True, eq=False)
class SquareSet:
    n: int
    squares: np.ndarray
    base: int = 4

    def __post_init__(self):
        sq = np.asarray(self.squares, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "squares", sq)
        d = self.scale_denominator
        if sq.size and (sq.min() < 0 or sq.max() > d - 1):
            raise ValueError("square numerators must lie in [0, base**n - 1]")

    @property
    def scale_denominator(self) -> int:
        return self.base ** self.n

    @property
    def side(self) -> float:
        return 1.0 / self.scale_denominator

    def __len__(self) -> int:
        return len(self.squares)

    def bounds(self) -> np.ndarray:
        """(k, 4) float array of x0, x1, y0, y1."""
        h = self.side
        i = self.squares[:, 0].astype(float)
        j = self.squares[:, 1].astype(float)
        return np.stack([i * h, (i + 1) * h, j * h, (j + 1) * h], axis=1)

    def keys(self) -> np.ndarray:
        """Sorted int64 codes i * b^n + j, used for membership lookups."""
        return np.sort(self.squares[:, 0] * self.scale_denominator + self.squares[:, 1])

    def contains(self, x, y) -> np.ndarray:
        """Closed-square membership: a point on a cell edge also checks the cell below/left."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        d = self.scale_denominator
        inside = (x >= 0) & (x <= 1) & (y >= 0) & (y <= 1)
        keys = self.keys()
        if len(keys) == 0:
            return np.zeros(np.broadcast(x, y).shape, dtype=bool)
        fx, fy = np.floor(x * d), np.floor(y * d)
        hit = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        for di in (0, 1):
            for dj in (0, 1):
                # step back only when the coordinate sits exactly on a grid line
                i = fx - np.where(x * d == fx, di, 0) if di else fx
                j = fy - np.where(y * d == fy, dj, 0) if dj else fy
                ok = (i >= 0) & (i < d) & (j >= 0) & (j < d)
                code = np.clip(i, 0, d - 1).astype(np.int64) * d + np.clip(j, 0, d - 1).astype(np.int64)
                pos = np.clip(np.searchsorted(keys, code), 0, len(keys) - 1)
                hit |= ok & (keys[pos] == code)
        return inside & hit

    def __eq__(self, other):
        return (isinstance(other, SquareSet) and self.n == other.n and self.base == other.base
                and np.array_equal(self.squares, other.squares))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SegmentSet:
    """Axis-aligned segments with integer endpoints over ``denominator``.

    Rows are (x0, y0, x1, y1) numerators.
    """

    segments: np.ndarray
    denominator: int = 1
    parent: SquareSet | None = field(default=None, repr=False)

    def __post_init__(self):
        seg = np.asarray(self.segments, dtype=np.int64).reshape(-1, 4)
        object.__setattr__(self, "segments", seg)
        if seg.size and np.any((seg[:, 0] != seg[:, 2]) & (seg[:, 1] != seg[:, 3])):
            raise ValueError("segments must be horizontal or vertical")

    def __len__(self) -> int:
        return len(self.segments)

    def coords(self) -> np.ndarray:
        return self.segments.astype(float) / self.denominator

    def lengths(self) -> np.ndarray:
        s = self.coords()
        return np.hypot(s[:, 2] - s[:, 0], s[:, 3] - s[:, 1])

    @property
    def total_length(self) -> float:
        return float(self.lengths().sum())


# the boundary of a square set is a SegmentSet with the parent recorded
BoundarySet = SegmentSet


def digit_values(n: int, digit_set, base: int) -> np.ndarray:
    """All integers with n base-``base`` digits drawn from ``digit_set``, ascending."""
    digits = sorted(set(int(d) for d in digit_set))
    if not digits:
        raise ValueError("digit set is empty")
    if digits[0] < 0 or digits[-1] >= base:
        raise ValueError(f"digits must lie in 0..{base - 1}")
    vals = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        vals = (vals[:, None] * base + np.asarray(digits, dtype=np.int64)[None, :]).ravel()
    return np.sort(vals)


def corner_ifs_generation(n: int, digit_set, base: int, max_generation: int = MAX_GENERATION) -> SquareSet:
    if n < 0 or n > max_generation:
        raise ValueError(f"generation n={n} outside 0..{max_generation}")
    if base < 2:
        raise ValueError("base must be at least 2")
    v = digit_values(n, digit_set, base)
    ii, jj = np.meshgrid(v, v, indexing="ij")
    return SquareSet(n, np.stack([ii.ravel(), jj.ravel()], axis=1), base)


def cantor_generation(n: int, max_generation: int = MAX_GENERATION) -> SquareSet:
    """K_n: the 4^n squares of side 4^-n whose base-4 digits lie in {0, 3}."""
    return corner_ifs_generation(n, (0, 3), 4, max_generation)


def cantor_interval_generation(n: int) -> list[tuple[float, float]]:
    """C_n as a list of 2^n closed intervals."""
    h = 4.0 ** -n
    return [(float(i) * h, float(i + 1) * h) for i in digit_values(n, (0, 3), 4)]


def boundary(s: SquareSet) -> SegmentSet:
    """All four sides of every square, no deduplication."""
    i = s.squares[:, 0]
    j = s.squares[:, 1]
    bottom = np.stack([i, j, i + 1, j], axis=1)
    top = np.stack([i, j + 1, i + 1, j + 1], axis=1)
    left = np.stack([i, j, i, j + 1], axis=1)
    right = np.stack([i + 1, j, i + 1, j + 1], axis=1)
    segs = np.stack([bottom, top, left, right], axis=1).reshape(-1, 4)
    return SegmentSet(segs, s.scale_denominator, parent=s)


def unit_segment() -> SegmentSet:
    return SegmentSet(np.array([[0, 0, 1, 0]]), 1)


@dataclass(frozen=True, eq=False)
class WeightedPointCloud:
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float).reshape(-1, 2)
        w = np.asarray(self.weights, dtype=float).ravel()
        if len(p) != len(w):
            raise ValueError("points and weights differ in length")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @classmethod
    def empty(cls) -> "WeightedPointCloud":
        return cls(np.zeros((0, 2)), np.zeros(0))

    def concat(self, other: "WeightedPointCloud") -> "WeightedPointCloud":
        return WeightedPointCloud(np.vstack([self.points, other.points]),
                                  np.concatenate([self.weights, other.weights]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "w"])
        for (x, y), wt in zip(self.points.tolist(), self.weights.tolist()):
            w.writerow([f"{x:.17g}", f"{y:.17g}", f"{wt:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "WeightedPointCloud":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            return cls.empty()
        pts = [(float(r["x"]), float(r["y"])) for r in rows]
        w = [float(r.get("w") or 1.0) for r in rows]
        return cls(np.array(pts), np.array(w))


def sample_points(s, per_component: int, seed=None) -> WeightedPointCloud:
    """Stratified uniform samples of H^1 on segments or on square perimeters.

    Each component (a segment, or the perimeter of a square) gets
    ``per_component`` points, one per equal-length stratum, carrying weight
    component length / per_component.
    """
    if per_component < 1:
        raise ValueError("per_component must be >= 1")
    if isinstance(s, SquareSet):
        s = boundary(s)
        group = 4
    else:
        group = 1
    seg = s.coords()
    if len(seg) == 0:
        return WeightedPointCloud.empty()
    rng = np.random.default_rng(seed)
    comps = len(seg) // group
    u = (np.arange(per_component)[None, :] + rng.random((comps, per_component))) / per_component
    # position along a component's concatenated sides, in units of sides
    pos = u * group
    side = np.minimum(pos.astype(np.int64), group - 1)
    frac = pos - side
    rows = np.arange(comps)[:, None] * group + side
    p0 = seg[rows, 0:2]
    p1 = seg[rows, 2:4]
    pts = p0 + frac[..., None] * (p1 - p0)
    lengths = s.lengths().reshape(comps, group).sum(axis=1)
    w = np.repeat(lengths / per_component, per_component)
    return WeightedPointCloud(pts.reshape(-1, 2), w)


def squares_to_csv(s: SquareSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "i", "j"])
    for i, j in s.squares.tolist():
        w.writerow([s.n, i, j])
    return buf.getvalue()


def squares_from_csv(text: str, base: int = 4) -> SquareSet:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty square table")
    n = int(rows[0]["n"])
    return SquareSet(n, np.array([(int(r["i"]), int(r["j"])) for r in rows]), base)

