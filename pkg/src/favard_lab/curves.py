"""Graph curves ``{(t, phi(t)) : t in I}`` with bilipschitz derivative.

A curve is a closed-form record (phi, phi', convexity sign) checked by dense
sampling. ``extend_curve`` appends quadratic caps of width ``DELTA`` on both
ends so that every point of the original curve sits at least ``DELTA``
(horizontally) away from an endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

# 2**-100 is far below one ulp of 1e-5, so the float sum equals 1e-5.
DELTA = 1e-5 + 2.0 ** -100
LAMBDA_MAX = 2.0 ** 35
VALIDATION_SAMPLES = 4096
_REL_SLACK = 1e-9

RealFn = Callable[[np.ndarray], np.ndarray]


class CurveError(ValueError):
    """A curve record violates one of the graph-curve hypotheses."""


@dataclass(frozen=True)
class GraphCurve:
    phi: RealFn
    dphi: RealFn
    convexity: int
    domain: tuple[float, float]
    lam: float
    slope_bound: float
    kind: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        validate_curve(self)

    @property
    def a(self) -> float:
        return self.domain[0]

    @property
    def b(self) -> float:
        return self.domain[1]

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    def describe(self) -> str:
        inner = ",".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.kind}:{inner},I=[{self.a!r},{self.b!r}]"


def validate_curve(c: GraphCurve, samples: int = VALIDATION_SAMPLES, delta: float = DELTA) -> None:
    a, b = c.domain
    if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
        raise CurveError(f"domain [{a}, {b}] must have nonempty interior")
    if c.convexity not in (1, -1):
        raise CurveError("convexity must be +1 or -1")
    if not 1.0 <= c.lam <= LAMBDA_MAX:
        raise CurveError(f"lambda={c.lam} outside [1, 2**35]")
    t = np.linspace(a, b, samples)
    d = np.asarray(c.dphi(t), dtype=float)
    worst = int(np.argmax(np.abs(d)))
    if abs(d[worst]) > 1.0 - delta:
        raise CurveError(f"|phi'({t[worst]!r})| = {abs(d[worst])!r} exceeds 1 - delta")
    if abs(d[worst]) > c.slope_bound * (1 + _REL_SLACK):
        raise CurveError(f"|phi'({t[worst]!r})| = {abs(d[worst])!r} exceeds slope_bound {c.slope_bound!r}")
    # phi' monotone, so consecutive difference quotients bound every pair.
    q = c.convexity * np.diff(d) / np.diff(t)
    if np.any(q < (1.0 / c.lam) * (1 - _REL_SLACK)) or np.any(q > c.lam * (1 + _REL_SLACK)):
        k = int(np.argmin(np.minimum(q * c.lam, c.lam / np.maximum(q, 1e-300))))
        raise CurveError(
            f"phi' is not {c.lam}-bilipschitz with sign {c.convexity} near t={t[k]!r} (quotient {q[k]!r})")
    p = np.asarray(c.phi(t), dtype=float)
    if np.any(np.abs(np.diff(p)) >= np.abs(np.diff(t))):
        raise CurveError("phi is not 1-Lipschitz on sampled pairs")


def make_parabola(half_curvature: float, domain: tuple[float, float]) -> GraphCurve:
    """``phi(t) = half_curvature * t**2``."""
    h = float(half_curvature)
    if h == 0.0:
        raise CurveError("half_curvature must be nonzero")
    a, b = map(float, domain)
    if not a < b:
        raise CurveError(f"domain [{a}, {b}] must have nonempty interior")
    t_far = a if abs(a) >= abs(b) else b
    slope = abs(2 * h * t_far)
    if slope > 1 - DELTA:
        raise CurveError(f"|phi'({t_far!r})| = {slope!r} exceeds 1 - delta")
    k = abs(2 * h)
    return GraphCurve(
        phi=lambda t: h * np.asarray(t, dtype=float) ** 2,
        dphi=lambda t: 2 * h * np.asarray(t, dtype=float),
        convexity=1 if h > 0 else -1,
        domain=(a, b),
        lam=max(k, 1 / k),
        slope_bound=slope,
        kind="parabola",
        params={"h": h},
    )


def make_circle_arc(radius: float, domain: tuple[float, float]) -> GraphCurve:
    """Lower arc ``phi(t) = R - sqrt(R**2 - t**2)`` of the circle centered at (0, R)."""
    R = float(radius)
    a, b = map(float, domain)
    if R <= 0:
        raise CurveError("radius must be positive")
    if not a < b:
        raise CurveError(f"domain [{a}, {b}] must have nonempty interior")
    t_far = a if abs(a) >= abs(b) else b
    if abs(t_far) >= R:
        raise CurveError(f"|t|={abs(t_far)!r} reaches the radius; phi' is unbounded")
    slope = abs(t_far) / math.sqrt(R * R - t_far * t_far)
    if slope > 1 - DELTA:
        raise CurveError(f"|phi'({t_far!r})| = {slope!r} exceeds 1 - delta")
    # phi'' = R^2 (R^2 - t^2)^{-3/2} grows with |t|
    t_near = 0.0 if a <= 0.0 <= b else min(abs(a), abs(b))
    k_min = R * R / (R * R - t_near ** 2) ** 1.5
    k_max = R * R / (R * R - t_far ** 2) ** 1.5
    return GraphCurve(
        phi=lambda t: R - np.sqrt(R * R - np.asarray(t, dtype=float) ** 2),
        dphi=lambda t: np.asarray(t, dtype=float) / np.sqrt(R * R - np.asarray(t, dtype=float) ** 2),
        convexity=1,
        domain=(a, b),
        lam=max(k_max, 1 / k_min, 1.0),
        slope_bound=slope,
        kind="circle-arc",
        params={"R": R},
    )


@dataclass(frozen=True)
class ExtendedGraphCurve:
    """``phi_plus`` on ``I_+ = [a - delta, b + delta]``."""

    base: GraphCurve
    delta: float = DELTA

    @property
    def domain(self) -> tuple[float, float]:
        return self.base.domain

    @property
    def domain_plus(self) -> tuple[float, float]:
        return (self.base.a - self.delta, self.base.b + self.delta)

    @property
    def lam(self) -> float:
        return self.base.lam

    def _caps(self):
        c = self.base
        a, b = c.domain
        k = c.convexity / (2 * c.lam)
        pa, pb = float(c.phi(np.array(a))), float(c.phi(np.array(b)))
        da, db = float(c.dphi(np.array(a))), float(c.dphi(np.array(b)))
        return a, b, k, pa, pb, da, db

    def phi_plus(self, t):
        t = np.asarray(t, dtype=float)
        a, b, k, pa, pb, da, db = self._caps()
        mid = np.clip(t, a, b)
        out = np.asarray(self.base.phi(mid), dtype=float)
        left = pa + da * (t - a) + k * (t - a) ** 2
        right = pb + db * (t - b) + k * (t - b) ** 2
        out = np.where(t < a, left, np.where(t > b, right, out))
        return out[()] if out.ndim == 0 else out

    def dphi_plus(self, t):
        t = np.asarray(t, dtype=float)
        a, b, k, pa, pb, da, db = self._caps()
        mid = np.clip(t, a, b)
        out = np.asarray(self.base.dphi(mid), dtype=float)
        out = np.where(t < a, da + 2 * k * (t - a), np.where(t > b, db + 2 * k * (t - b), out))
        return out[()] if out.ndim == 0 else out

    def in_domain(self, t, extended: bool = True):
        lo, hi = self.domain_plus if extended else self.domain
        t = np.asarray(t, dtype=float)
        return (t >= lo) & (t <= hi)

    def critical_point(self) -> float | None:
        """Zero of phi_plus' on I_+ by bisection, or None when phi_plus' keeps its sign."""
        lo, hi = self.domain_plus
        flo, fhi = float(self.dphi_plus(lo)), float(self.dphi_plus(hi))
        if flo == 0.0:
            return lo
        if fhi == 0.0:
            return hi
        if (flo > 0) == (fhi > 0):
            return None
        while hi - lo > 1e-14:
            mid = 0.5 * (lo + hi)
            fm = float(self.dphi_plus(mid))
            if fm == 0.0:
                return mid
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        return 0.5 * (lo + hi)


def extend_curve(curve: GraphCurve, delta: float = DELTA) -> ExtendedGraphCurve:
    return ExtendedGraphCurve(curve, delta)


@dataclass(frozen=True)
class TranslatedCurve:
    """The curve ``(alpha + t, beta + phi_plus(t))`` for ``t`` in ``I_+``."""

    parent: ExtendedGraphCurve
    anchor_alpha: float
    anchor_beta: float

    @classmethod
    def through(cls, curve: ExtendedGraphCurve, e, alpha: float) -> "TranslatedCurve":
        """``C_{e,alpha}``: the translate meeting the vertical line x = alpha at the projection of e."""
        t = e[0] - alpha
        if not curve.in_domain(t):
            raise ValueError(f"e1 - alpha = {t!r} lies outside I_+")
        return cls(curve, float(alpha), float(e[1] - curve.phi_plus(t)))

    def points(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.stack([self.anchor_alpha + t, self.anchor_beta + self.parent.phi_plus(t)], axis=-1)

    def vertical_offset(self, z) -> np.ndarray:
        """Signed vertical distance from points z to the curve (NaN outside the x-range)."""
        z = np.asarray(z, dtype=float)
        t = z[..., 0] - self.anchor_alpha
        ok = self.parent.in_domain(t)
        off = z[..., 1] - self.anchor_beta - self.parent.phi_plus(np.where(ok, t, 0.0))
        return np.where(ok, off, np.nan)


@dataclass(frozen=True)
class Frame:
    omega1: tuple[float, float]
    omega2: tuple[float, float]


def frame_at(curve: ExtendedGraphCurve, e, alpha: float) -> Frame:
    """Unit tangent of C_{e,alpha} at e and its clockwise quarter-turn (the normal)."""
    t = e[0] - alpha
    if not curve.in_domain(t):
        raise ValueError(f"e1 - alpha = {t!r} lies outside I_+")
    s = float(curve.dphi_plus(t))
    n = math.hypot(1.0, s)
    w1 = (1.0 / n, s / n)
    return Frame(w1, (w1[1], -w1[0]))
