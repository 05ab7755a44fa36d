"""Finite unions of closed intervals on the real line, with exact Lebesgue measure.

Every projection in the package lands in this type. Floating point endpoints
are merged when separated by at most ``MERGE_EPSILON``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MERGE_EPSILON = 1e-12


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted, pairwise disjoint closed intervals ``(lo, hi)``.

    Build instances through :func:`normalize` unless the input is already
    known to be normalized.
    """

    intervals: tuple[tuple[float, float], ...] = ()

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    @property
    def measure(self) -> float:
        return measure(self)

    def contains(self, x: float) -> bool:
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return True
            if lo > x:
                break
        return False

    def shift(self, c: float) -> "IntervalUnion":
        return IntervalUnion(tuple((lo + c, hi + c) for lo, hi in self.intervals))

    def to_csv(self) -> str:
        return to_csv(self)


def normalize(raw: Iterable[Sequence[float]], merge_epsilon: float = MERGE_EPSILON) -> IntervalUnion:
    """Sort and merge intervals; gaps of width <= ``merge_epsilon`` are closed."""
    pairs = [(float(lo), float(hi)) for lo, hi in raw]
    for lo, hi in pairs:
        if not lo <= hi:
            raise ValueError(f"inverted interval ({lo!r}, {hi!r})")
    if not pairs:
        return IntervalUnion()
    pairs.sort()
    merged = [list(pairs[0])]
    for lo, hi in pairs[1:]:
        last = merged[-1]
        if lo <= last[1] + merge_epsilon:
            if hi > last[1]:
                last[1] = hi
        else:
            merged.append([lo, hi])
    return IntervalUnion(tuple((lo, hi) for lo, hi in merged))


def measure(u: IntervalUnion) -> float:
    return float(sum(hi - lo for lo, hi in u.intervals))


def dilate(center: float, half_width: float, factor: float) -> tuple[float, float]:
    """The interval with the same center and ``factor`` times the radius."""
    if half_width < 0 or factor < 0:
        raise ValueError("half_width and factor must be nonnegative")
    return (center - factor * half_width, center + factor * half_width)


def intersect(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    out = []
    i = j = 0
    A, B = a.intervals, b.intervals
    while i < len(A) and j < len(B):
        lo = max(A[i][0], B[j][0])
        hi = min(A[i][1], B[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if A[i][1] < B[j][1]:
            i += 1
        else:
            j += 1
    return normalize(out)


def union(*parts: IntervalUnion) -> IntervalUnion:
    return normalize([iv for p in parts for iv in p.intervals])


def from_arrays(lo: np.ndarray, hi: np.ndarray, valid: np.ndarray | None = None) -> IntervalUnion:
    lo = np.asarray(lo, dtype=float).ravel()
    hi = np.asarray(hi, dtype=float).ravel()
    if valid is not None:
        keep = np.asarray(valid, dtype=bool).ravel()
        lo, hi = lo[keep], hi[keep]
    return normalize(zip(lo.tolist(), hi.tolist()))


def union_measure(lo: np.ndarray, hi: np.ndarray, valid: np.ndarray | None = None,
                  merge_epsilon: float = MERGE_EPSILON) -> np.ndarray:
    """Measure of the union of intervals along the last axis.

    Vectorized counterpart of ``measure(normalize(...))``: rows are
    independent unions, entries with ``valid == False`` are empty sets.
    Gap merging follows :func:`normalize` exactly.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    if valid is not None:
        valid = np.broadcast_to(np.asarray(valid, dtype=bool), lo.shape)
        lo[~valid] = np.inf
        hi[~valid] = -np.inf
    order = np.argsort(lo, axis=-1, kind="stable")
    lo_s = np.take_along_axis(lo, order, axis=-1)
    hi_s = np.take_along_axis(hi, order, axis=-1)
    reach = np.maximum.accumulate(hi_s, axis=-1)
    prev = np.empty_like(reach)
    prev[..., 0] = -np.inf
    prev[..., 1:] = reach[..., :-1]
    live = np.isfinite(lo_s)
    with np.errstate(invalid="ignore"):
        fresh = lo_s > prev + merge_epsilon
        gain = np.where(fresh, hi_s - lo_s, np.maximum(hi_s - prev, 0.0))
    gain = np.where(live, gain, 0.0)
    return gain.sum(axis=-1)


def to_csv(u: IntervalUnion) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lo", "hi"])
    for lo, hi in u.intervals:
        w.writerow([f"{lo:.17g}", f"{hi:.17g}"])
    return buf.getvalue()


def from_csv(text: str) -> IntervalUnion:
    rows = list(csv.DictReader(io.StringIO(text)))
    return normalize((float(r["lo"]), float(r["hi"])) for r in rows)
