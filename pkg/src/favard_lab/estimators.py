"""Favard length, Favard curve length, the Buffon curve experiment and decay fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _mc_kernel
from .curves import ExtendedGraphCurve
from .fractals import SegmentSet, SquareSet
from .intervals import union_measure
from .parallel import ordered_map
from .projection import curve_image_bounds, linear_image_bounds, parameter_domain, rects_of

# entries per evaluation chunk (nodes x components); fixed so results never depend on the pool
_CHUNK_ELEMENTS = 1 << 20
# largest grid side for which membership uses a dense occupancy table
_DENSE_TABLE_MAX = 4096


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-4
    max_refinements: int = 14
    initial_panels: int = 64
    min_refinements: int = 2

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.initial_panels < 2 or self.initial_panels % 2:
            raise ValueError("initial_panels must be a positive even number")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float          # |S_k - S_{k-1}| at the last level
    converged: bool
    panels: int

    @property
    def rel_error(self) -> float:
        return self.error / abs(self.value) if self.value else 0.0


def simpson(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
            quad: QuadratureSpec = QuadratureSpec(), workers: int | None = None) -> QuadratureResult:
    """Composite Simpson with uniform panel doubling.

    ``f`` maps an array of nodes to an array of values. Each level only
    evaluates the new midpoints; convergence is declared once two consecutive
    level differences are below ``rel_tol`` relative to the newer sum. A single
    passing difference is not trusted: on dyadic sets the uniform grid can
    alias with the set and two coarse sums may agree by accident.
    """
    n = quad.initial_panels
    x = np.linspace(a, b, n + 1)
    y = _evaluate(f, x, workers)
    prev = _simpson_sum(y, (b - a) / n)
    err = math.inf
    passes = 0
    for level in range(1, quad.max_refinements + 1):
        n *= 2
        mids = a + (b - a) * (np.arange(1, n, 2) / n)
        ym = _evaluate(f, mids, workers)
        y_new = np.empty(n + 1)
        y_new[0::2] = y
        y_new[1::2] = ym
        y = y_new
        cur = _simpson_sum(y, (b - a) / n)
        err = abs(cur - prev)
        passes = passes + 1 if err <= quad.rel_tol * abs(cur) else 0
        if level >= quad.min_refinements and passes >= 2:
            return QuadratureResult(cur, err, True, n)
        prev = cur
    return QuadratureResult(prev, err, err <= quad.rel_tol * abs(prev), n)


def _simpson_sum(y: np.ndarray, h: float) -> float:
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def _evaluate(f, x: np.ndarray, workers) -> np.ndarray:
    per = max(1, getattr(f, "chunk_nodes", 256))
    chunks = [x[i:i + per] for i in range(0, len(x), per)]
    return np.concatenate(ordered_map(f, chunks, workers))


class _LinearIntegrand:
    def __init__(self, rects: np.ndarray):
        self.rects = rects
        self.chunk_nodes = max(1, _CHUNK_ELEMENTS // max(len(rects), 1))

    def __call__(self, omegas: np.ndarray) -> np.ndarray:
        lo, hi = linear_image_bounds(omegas, self.rects)
        return union_measure(lo, hi)


class _CurveIntegrand:
    def __init__(self, curve: ExtendedGraphCurve, rects: np.ndarray, extended: bool = False):
        self.curve = curve
        self.rects = rects
        self.extended = extended
        self.chunk_nodes = max(1, _CHUNK_ELEMENTS // max(len(rects), 1))

    def __call__(self, alphas: np.ndarray) -> np.ndarray:
        lo, hi, ok = curve_image_bounds(self.curve, alphas, self.rects, self.extended)
        return union_measure(lo, hi, ok)


def linear_projection_measure(omegas, s) -> np.ndarray:
    return _LinearIntegrand(rects_of(s))(np.atleast_1d(np.asarray(omegas, dtype=float)))


def curve_projection_measure(curve: ExtendedGraphCurve, alphas, s, extended: bool = False) -> np.ndarray:
    return _CurveIntegrand(curve, rects_of(s), extended)(np.atleast_1d(np.asarray(alphas, dtype=float)))


def favard_length(s, quad: QuadratureSpec = QuadratureSpec(), workers: int | None = None) -> QuadratureResult:
    """Integral over w in [0, 2 pi) of |proj_w(s)|."""
    rects = rects_of(s)
    if len(rects) == 0:
        return QuadratureResult(0.0, 0.0, True, 0)
    return simpson(_LinearIntegrand(rects), 0.0, 2.0 * math.pi, quad, workers)


def favard_curve_length(curve, s, quad: QuadratureSpec = QuadratureSpec(),
                        workers: int | None = None) -> QuadratureResult:
    """Integral over alpha in A = [-b, 1 - a] of |Phi_alpha(s)|.

    ``curve`` may be a sequence of pieces; the result is the sum over pieces.
    """
    if isinstance(curve, (list, tuple)):
        parts = [favard_curve_length(c, s, quad, workers) for c in curve]
        return QuadratureResult(float(sum(p.value for p in parts)), float(sum(p.error for p in parts)),
                                all(p.converged for p in parts), max((p.panels for p in parts), default=0))
    rects = rects_of(s)
    if len(rects) == 0:
        return QuadratureResult(0.0, 0.0, True, 0)
    a, b = parameter_domain(curve)
    return simpson(_CurveIntegrand(curve, rects), a, b, quad, workers)


@dataclass(frozen=True)
class McSpec:
    samples: int
    seed: int = 0
    batch: int = 1 << 16
    t_nodes: int = 512
    refine_levels: int = 12

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")


@dataclass(frozen=True)
class McResult:
    estimate: float
    std_error: float
    hits: int
    samples: int
    area: float


# element budget per callable evaluation, keeps memory bounded for large t grids
_CALLABLE_BLOCK = 1 << 20


def difference_bounding_box(curve: ExtendedGraphCurve, bbox=(0.0, 1.0, 0.0, 1.0), samples: int = 4097):
    """Bounding box of E - C for E inside ``bbox`` = (x0, x1, y0, y1)."""
    a, b = curve.domain
    t = np.linspace(a, b, samples)
    ph = np.asarray(curve.base.phi(t))
    crit = curve.critical_point()
    extra = [float(curve.phi_plus(crit))] if crit is not None and a <= crit <= b else []
    pmin = min(float(ph.min()), *extra) if extra else float(ph.min())
    pmax = max(float(ph.max()), *extra) if extra else float(ph.max())
    x0, x1, y0, y1 = bbox
    return (x0 - b, x1 - a), (y0 - pmax, y1 - pmin)


def _batch_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _batches(mc: McSpec):
    full, rest = divmod(mc.samples, mc.batch)
    sizes = [mc.batch] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def buffon_curve_mc(curve: ExtendedGraphCurve, member, mc: McSpec, alpha_range=None, beta_range=None,
                    workers: int | None = None) -> McResult:
    """Monte Carlo area of {(alpha, beta) : ((alpha, beta) + C) meets E}.

    ``member`` is either a ``SquareSet`` (compiled cell-walk with bisection
    refinement) or a vectorized callable ``member(x, y) -> bool array``
    (plain node test on the t-grid).
    """
    if alpha_range is None or beta_range is None:
        ar, br = difference_bounding_box(curve)
        alpha_range = alpha_range or ar
        beta_range = beta_range or br
    (a0, a1), (b0, b1) = alpha_range, beta_range
    area = (a1 - a0) * (b1 - b0)
    lo, hi = curve.domain
    coarse = mc.t_nodes
    if isinstance(member, SquareSet):
        stride = 1 << mc.refine_levels
        t_fine = np.linspace(lo, hi, (coarse - 1) * stride + 1)
        phi_fine = np.asarray(curve.base.phi(t_fine), dtype=float)
        keys = member.keys()
        denom = member.scale_denominator
        table = np.zeros((1, 1), dtype=np.uint8)
        if denom <= _DENSE_TABLE_MAX:
            table = np.zeros((denom, denom), dtype=np.uint8)
            table[member.squares[:, 0], member.squares[:, 1]] = 1

        def run(job):
            idx, size = job
            rng = _batch_rng(mc.seed, idx)
            al = rng.uniform(a0, a1, size)
            be = rng.uniform(b0, b1, size)
            if len(keys) == 0:
                return 0
            return int(_mc_kernel.count_hits(al, be, t_fine, phi_fine, stride, keys, table, denom, 0.0, 1.0))
    elif isinstance(member, SegmentSet):
        raise TypeError("segment sets have zero area; sample their square parent instead")
    else:
        t = np.linspace(lo, hi, coarse)
        ph = np.asarray(curve.base.phi(t), dtype=float)

        def run(job):
            idx, size = job
            rng = _batch_rng(mc.seed, idx)
            al = rng.uniform(a0, a1, size)
            be = rng.uniform(b0, b1, size)
            rows = max(1, _CALLABLE_BLOCK // len(t))
            hits = 0
            for i in range(0, size, rows):
                x = al[i:i + rows, None] + t[None, :]
                y = be[i:i + rows, None] + ph[None, :]
                hits += int(np.count_nonzero(np.asarray(member(x, y), dtype=bool).any(axis=1)))
            return hits

    hits = sum(ordered_map(run, _batches(mc), workers))
    p = hits / mc.samples
    return McResult(area * p, area * math.sqrt(p * (1 - p) / mc.samples), hits, mc.samples, area)


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    log_intercept: float
    residual: float


def fit_decay(values: Sequence[tuple[float, float]]) -> DecayFit:
    """Least squares fit of log v = log c - p log n."""
    pts = [(float(n), float(v)) for n, v in values]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(v <= 0 for _, v in pts):
        raise ValueError("values must be positive")
    if any(n < 1 for n, _ in pts):
        raise ValueError("indices must be >= 1")
    x = np.log([n for n, _ in pts])
    y = np.log([v for _, v in pts])
    A = np.stack([np.ones_like(x), x], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return DecayFit(float(-coef[1]), float(coef[0]), float(np.sqrt(np.mean(resid ** 2))))


def log_star(x: float) -> int:
    """Least m >= 0 with the m-fold natural logarithm of x at most 1."""
    if not x > 0:
        raise ValueError("log_star needs x > 0")
    m = 0
    while x > 1.0:
        x = math.log(x)
        m += 1
    return m


@dataclass(frozen=True)
class ReferenceBounds:
    npv_upper: float
    bv_lower: float
    cdt_upper: float
    cdt_lower: float
    tower_upper: float


def reference_bounds(n: float) -> ReferenceBounds:
    """Unit-constant shapes of the known decay bounds for generation n."""
    if n < 2:
        raise ValueError("reference bounds need n >= 2")
    return ReferenceBounds(
        npv_upper=n ** (-1 / 6),
        bv_lower=math.log(n) / n,
        cdt_upper=n ** (-1 / 6),
        cdt_lower=1.0 / n,
        tower_upper=log_star(n) ** (-1 / 100),
    )
