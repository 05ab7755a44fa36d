"""Linear projections and curve projections of squares and segments.

For the curve translate through p, the curve projection at parameter alpha
is the single value ``p2 - phi(p1 - alpha)`` when ``p1 - alpha`` lies in the
curve's domain, and empty otherwise. A rectangle maps to one interval whose
endpoints come from the extrema of phi over the clipped parameter range;
those extrema are exact because phi' is strictly monotone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .curves import ExtendedGraphCurve
from .fractals import SegmentSet, SquareSet
from .intervals import IntervalUnion, from_arrays, union_measure


@dataclass(frozen=True)
class ProjectionQuery:
    curve: ExtendedGraphCurve
    alpha: float
    use_extension: bool = False

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")


def parameter_domain(curve: ExtendedGraphCurve) -> tuple[float, float]:
    """A = [0, 1] - I = [-b, 1 - a]: the alphas for which a subset of the unit square can project."""
    a, b = curve.domain
    return (-b, 1.0 - a)


def rects_of(s) -> np.ndarray:
    """(k, 4) float array of x0, x1, y0, y1; segments are degenerate rectangles."""
    if isinstance(s, SquareSet):
        return s.bounds()
    if isinstance(s, SegmentSet):
        c = s.coords()
        return np.stack([np.minimum(c[:, 0], c[:, 2]), np.maximum(c[:, 0], c[:, 2]),
                         np.minimum(c[:, 1], c[:, 3]), np.maximum(c[:, 1], c[:, 3])], axis=1)
    arr = np.asarray(s, dtype=float)
    return arr.reshape(-1, 4)


@lru_cache(maxsize=64)
def _critical(curve: ExtendedGraphCurve) -> float:
    t = curve.critical_point()
    if t is not None:
        return t
    # phi' keeps one sign: the minimizer of a convex phi sits at the left end when phi' > 0
    increasing = float(curve.dphi_plus(curve.domain_plus[0])) > 0
    return -np.inf if increasing == (curve.base.convexity > 0) else np.inf


def curve_image_bounds(curve: ExtendedGraphCurve, alphas, rects, extended: bool = False):
    """Image intervals of rectangles under the curve projections.

    Returns ``lo, hi, valid`` of shape ``(len(alphas), len(rects))``.
    """
    alphas = np.asarray(alphas, dtype=float).reshape(-1, 1)
    r = np.asarray(rects, dtype=float).reshape(-1, 4)
    x0, x1, y0, y1 = (r[:, k][None, :] for k in range(4))
    L, R = curve.domain_plus if extended else curve.domain
    t_lo = np.maximum(x0 - alphas, L)
    t_hi = np.minimum(x1 - alphas, R)
    valid = t_lo <= t_hi
    t_hi = np.where(valid, t_hi, t_lo)
    f_lo = curve.phi_plus(t_lo)
    f_hi = curve.phi_plus(t_hi)
    f_crit = curve.phi_plus(np.clip(_critical(curve), t_lo, t_hi))
    ends_max = np.maximum(f_lo, f_hi)
    ends_min = np.minimum(f_lo, f_hi)
    if curve.base.convexity > 0:
        phi_min, phi_max = np.minimum(f_crit, ends_min), ends_max
    else:
        phi_min, phi_max = ends_min, np.maximum(f_crit, ends_max)
    return y0 - phi_max, y1 - phi_min, valid


def linear_image_bounds(omegas, rects):
    """Images under proj_w(x, y) = x cos w + y sin w, shape ``(len(omegas), len(rects))``."""
    w = np.asarray(omegas, dtype=float).reshape(-1, 1)
    r = np.asarray(rects, dtype=float).reshape(-1, 4)
    c, s = np.cos(w), np.sin(w)
    x0, x1, y0, y1 = (r[:, k][None, :] for k in range(4))
    lo = np.minimum(x0 * c, x1 * c) + np.minimum(y0 * s, y1 * s)
    hi = np.maximum(x0 * c, x1 * c) + np.maximum(y0 * s, y1 * s)
    return lo, hi


def project_point(q: ProjectionQuery, p) -> float | None:
    t = p[0] - q.alpha
    if not q.curve.in_domain(t, extended=q.use_extension):
        return None
    return float(p[1] - q.curve.phi_plus(t))


def project_linear(omega: float, s) -> IntervalUnion:
    lo, hi = linear_image_bounds([omega], rects_of(s))
    return from_arrays(lo, hi)


def project_square(q: ProjectionQuery, square) -> IntervalUnion:
    """Image of one rectangle ``(x0, x1, y0, y1)``."""
    lo, hi, ok = curve_image_bounds(q.curve, [q.alpha], [square], q.use_extension)
    return from_arrays(lo, hi, ok)


def project_set(q: ProjectionQuery, s) -> IntervalUnion:
    lo, hi, ok = curve_image_bounds(q.curve, [q.alpha], rects_of(s), q.use_extension)
    return from_arrays(lo, hi, ok)


def projection_measure(q: ProjectionQuery, s) -> float:
    lo, hi, ok = curve_image_bounds(q.curve, [q.alpha], rects_of(s), q.use_extension)
    return float(union_measure(lo, hi, ok)[0])


def multiplicity_at(q: ProjectionQuery, beta: float, s) -> int:
    """Number of components whose image interval contains beta."""
    lo, hi, ok = curve_image_bounds(q.curve, [q.alpha], rects_of(s), q.use_extension)
    return int(np.count_nonzero(ok & (lo <= beta) & (beta <= hi)))
