"""Multiscale tools: content covers, rectifiability constants, double-sectors,
the sliding pigeonhole selector and the pointwise detectors.

Point membership tests are vectorized: ``z`` may be a single point or an
``(m, 2)`` array, and the result has the matching shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _rect_kernel
from .curves import DELTA, ExtendedGraphCurve, TranslatedCurve, frame_at
from .fractals import SegmentSet, SquareSet, WeightedPointCloud
from .parallel import ordered_map

DEFAULT_BAND = 1e-9
ROOT_TOL = 1e-13
SUB_BRACKETS = 8
_SAMPLE_CHUNK = 4096
# Gauss-Legendre rule on [0, 1] for mean slopes over short spans
_GL_NODES, _GL_WEIGHTS = (0.5 * (np.polynomial.legendre.leggauss(6)[0] + 1.0),
                          0.5 * np.polynomial.legendre.leggauss(6)[1])
_NEAR_SPAN = 1e-4


class PreconditionError(ValueError):
    """Parameters fall outside the hypotheses of the statement being checked."""


# ---------------------------------------------------------------- scales

@dataclass(frozen=True)
class ScaleSequence:
    """Scale pairs ``(r_minus_n, r_plus_n)`` for n = 1..N, separated by a factor 2."""

    radii: tuple

    def __post_init__(self):
        pairs = tuple((float(lo), float(hi)) for lo, hi in self.radii)
        if not pairs:
            raise ValueError("need at least one scale pair")
        for n, (lo, hi) in enumerate(pairs, start=1):
            if not 0 < lo <= hi:
                raise ValueError(f"scale {n}: need 0 < r_minus <= r_plus, got ({lo}, {hi})")
        for n in range(len(pairs) - 1):
            if pairs[n + 1][1] > pairs[n][0] / 2:
                raise ValueError(f"scales {n + 1} and {n + 2} are not separated: "
                                 f"r_plus_{n + 2} = {pairs[n + 1][1]} > r_minus_{n + 1} / 2")
        object.__setattr__(self, "radii", pairs)

    @property
    def N(self) -> int:
        return len(self.radii)

    def _check(self, n: int) -> None:
        if not 1 <= n <= self.N:
            raise IndexError(f"scale index {n} outside 1..{self.N}")

    def r_minus(self, n: int) -> float:
        self._check(n)
        return self.radii[n - 1][0]

    def r_plus(self, n: int) -> float:
        self._check(n)
        return self.radii[n - 1][1]

    @classmethod
    def geometric(cls, N: int, first_plus: float, ratio: float = 0.25, spread: float = 0.5) -> "ScaleSequence":
        """``r_plus_n = first_plus * ratio**(n-1)`` and ``r_minus_n = spread * r_plus_n``."""
        return cls(tuple((spread * first_plus * ratio ** k, first_plus * ratio ** k) for k in range(N)))


# ---------------------------------------------------------------- content covers

@dataclass(frozen=True)
class CoverResult:
    centers: np.ndarray
    radius: float
    content_upper: float

    @property
    def radii(self) -> np.ndarray:
        return np.full(len(self.centers), self.radius)

    def covers(self, pts) -> np.ndarray:
        """Whether each point lies in some (open) ball of the cover."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        out = np.zeros(len(pts), dtype=bool)
        if len(self.centers) == 0:
            return out
        # centers sit on a grid of pitch radius/sqrt(2); only nearby nodes can contain a point
        pitch = self.radius / math.sqrt(2.0)
        grid = np.rint(self.centers / pitch - 0.5).astype(np.int64)
        known = {tuple(g) for g in grid.tolist()}
        base = np.floor(pts / pitch).astype(np.int64)
        for di in range(-2, 3):
            for dj in range(-2, 3):
                cand = base + np.array([di, dj])
                hit = np.array([tuple(c) in known for c in cand.tolist()], dtype=bool)
                ctr = (cand + 0.5) * pitch
                out |= hit & (np.linalg.norm(pts - ctr, axis=1) < self.radius)
        return out


def _pieces(s, pitch: float):
    """Split a set into cell-sized convex pieces.

    Returns the (i, j) cell of each piece and its extreme points, an array of
    shape (k, 4, 2) (points repeated when a piece has fewer than four).
    """
    if isinstance(s, WeightedPointCloud):
        s = s.points
    if isinstance(s, SquareSet):
        rects = s.bounds()
    elif isinstance(s, SegmentSet):
        c = s.coords()
        rects = np.stack([np.minimum(c[:, 0], c[:, 2]), np.maximum(c[:, 0], c[:, 2]),
                          np.minimum(c[:, 1], c[:, 3]), np.maximum(c[:, 1], c[:, 3])], axis=1)
    else:
        pts = np.asarray(s, dtype=float).reshape(-1, 2)
        rects = np.stack([pts[:, 0], pts[:, 0], pts[:, 1], pts[:, 1]], axis=1)
    cells, corners = [], []
    for x0, x1, y0, y1 in rects.tolist():
        i0, i1 = math.floor(x0 / pitch), math.floor(x1 / pitch)
        j0, j1 = math.floor(y0 / pitch), math.floor(y1 / pitch)
        for i in range(i0, i1 + 1):
            px0, px1 = max(x0, i * pitch), min(x1, (i + 1) * pitch)
            for j in range(j0, j1 + 1):
                py0, py1 = max(y0, j * pitch), min(y1, (j + 1) * pitch)
                cells.append((i, j))
                corners.append(((px0, py0), (px1, py0), (px0, py1), (px1, py1)))
    if not cells:
        return np.zeros((0, 2), dtype=np.int64), np.zeros((0, 4, 2))
    return np.array(cells, dtype=np.int64), np.array(corners, dtype=float)


def hausdorff_content_cover(s, r_minus: float, r_plus: float) -> CoverResult:
    """Greedy ball cover giving an upper bound on the restricted Hausdorff content.

    Balls of radius ``r_plus`` sit at the centers of a grid of pitch
    ``r_plus / sqrt(2)`` (so a ball contains its whole cell). Cells meeting
    the set are visited in lexicographic order and a ball is kept unless every
    piece of the set in its cell already lies inside a previously kept
    neighbouring ball.
    """
    if not 0 <= r_minus < r_plus:
        raise ValueError(f"need 0 <= r_minus < r_plus, got ({r_minus}, {r_plus})")
    pitch = r_plus / math.sqrt(2.0)
    cells, corners = _pieces(s, pitch)
    if len(cells) == 0:
        return CoverResult(np.zeros((0, 2)), float(r_plus), 0.0)
    order = np.lexsort((cells[:, 1], cells[:, 0]))
    cells, corners = cells[order], corners[order]
    starts = np.flatnonzero(np.r_[True, np.any(np.diff(cells, axis=0) != 0, axis=1)])
    ends = np.r_[starts[1:], len(cells)]
    kept: dict[tuple[int, int], np.ndarray] = {}
    for a, b in zip(starts.tolist(), ends.tolist()):
        i, j = int(cells[a, 0]), int(cells[a, 1])
        near = [kept[(i + di, j + dj)] for di in (-1, 0, 1) for dj in (-1, 0, 1) if (i + di, j + dj) in kept]
        if near:
            ctr = np.array(near)
            pts = corners[a:b].reshape(-1, 2)
            d = np.linalg.norm(pts[:, None, :] - ctr[None, :, :], axis=2)
            inside = (d < r_plus).reshape(b - a, 4, len(ctr)).all(axis=1).any(axis=1)
            if inside.all():
                continue
        kept[(i, j)] = np.array([(i + 0.5) * pitch, (j + 0.5) * pitch])
    centers = np.array(list(kept.values()))
    return CoverResult(centers, float(r_plus), float(2.0 * r_plus * len(centers)))


# ---------------------------------------------------------------- rectifiability constant

@dataclass(frozen=True)
class RectSearch:
    """Search family for the rectifiability-constant lower bound.

    Frames use ``angles`` equally spaced directions in [0, pi). Intervals J
    have lengths ``r * lengths`` and left ends on the absolute lattice
    ``r * anchor_step * Z``. Graphs F are piecewise linear with nodes every
    ``r / nodes_per_r`` and node values on the same lattice pitch.
    """

    angles: int = 64
    lengths: tuple = (1, 2, 4)
    anchor_step: float = 0.25
    cells: int = 4096
    nodes_per_r: int = 64
    max_levels: int = 1 << 14

    def __post_init__(self):
        if self.angles < 1 or self.cells < 1 or self.nodes_per_r < 1:
            raise ValueError("search sizes must be positive")
        for ell in self.lengths:
            if ell < 1 or self.cells % (self.nodes_per_r * ell):
                raise ValueError(f"length factor {ell}: nodes must split the {self.cells} cells evenly")
        if not self.anchor_step > 0:
            raise ValueError("anchor_step must be positive")


def rectifiability_constant_lower(cloud, eps: float, r: float, M: float,
                                  budget: RectSearch = RectSearch(), workers: int | None = None) -> float:
    """Lower bound on the rectifiability constant R_E(eps, r, M) of a point cloud.

    For every frame and interval J in the search family, the piecewise linear
    M-Lipschitz F maximizing the number of covered cells of J is found
    exactly by dynamic programming; a cell is covered when it contains a
    point within ``eps`` of the graph along the second frame vector. The
    result is the best covered fraction. Because the candidate family does
    not depend on ``eps`` or ``M`` and only grows with the cloud, the bound
    is monotone in ``eps``, ``M`` and the cloud.

    Node values live on a lattice of pitch ``r / nodes_per_r``, so a sampled
    graph is only followed reliably when ``eps`` exceeds half that pitch;
    below it the bound stays valid but can be far from the true constant.
    """
    if not (eps > 0 and r > 0 and M > 0):
        raise ValueError("eps, r and M must be positive")
    pts = cloud.points if isinstance(cloud, WeightedPointCloud) else np.asarray(cloud, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return 0.0
    h = r / budget.nodes_per_r
    K = int(math.floor(M))

    def per_angle(k):
        th = math.pi * k / budget.angles
        c, s = math.cos(th), math.sin(th)
        u = pts[:, 0] * c + pts[:, 1] * s
        v = -pts[:, 0] * s + pts[:, 1] * c
        order = np.argsort(u, kind="stable")
        u, v = u[order], v[order]
        best = 0.0
        for ell in budget.lengths:
            length = ell * r
            step = budget.anchor_step * r
            n_seg = budget.nodes_per_r * ell
            per_seg = budget.cells // n_seg
            m_lo = math.floor((u[0] - length) / step)
            m_hi = math.ceil(u[-1] / step)
            for m in range(m_lo, m_hi + 1):
                s0 = m * step
                a, b = np.searchsorted(u, s0, "left"), np.searchsorted(u, s0 + length, "right")
                if a == b:
                    continue
                uu, vv = u[a:b], v[a:b]
                cell = np.minimum(np.floor((uu - s0) / length * budget.cells).astype(np.int64), budget.cells - 1)
                cell = np.maximum(cell, 0)
                seg = cell // per_seg
                frac = np.clip((uu - s0 - seg * h) / h, 0.0, 1.0)
                level0 = math.floor(vv.min() / h) - 1
                n_levels = math.floor(vv.max() / h) + 2 - level0
                if n_levels > budget.max_levels:
                    raise ValueError(f"{n_levels} levels exceed the budget of {budget.max_levels}; "
                                     "raise max_levels or use a larger r")
                kk = min(K, n_levels - 1)
                got = _rect_kernel.best_coverage(seg, cell, frac, vv, n_seg, level0, n_levels, h, kk, float(eps))
                best = max(best, got / budget.cells)
                if best >= 1.0:
                    return 1.0
        return best

    return float(max(ordered_map(per_angle, list(range(budget.angles)), workers)))


# ---------------------------------------------------------------- double-sectors

@dataclass(frozen=True)
class SectorSpec:
    """Parameters of the curve double-sector around ``e`` at parameter ``alpha``."""

    e: tuple
    alpha: float
    r: float
    M: float
    curve: ExtendedGraphCurve

    def __post_init__(self):
        object.__setattr__(self, "e", (float(self.e[0]), float(self.e[1])))
        if not self.r > 0:
            raise ValueError("r must be positive")
        if not self.M * self.curve.delta >= 1.0 - 1e-12:
            raise ValueError(f"M = {self.M} is below 1/delta")
        t = self.e[0] - self.alpha
        a, b = self.curve.domain
        if not a <= t <= b:
            raise ValueError(f"e1 - alpha = {t!r} lies outside I = [{a}, {b}]")

    @property
    def normal(self) -> np.ndarray:
        return np.array(frame_at(self.curve, self.e, self.alpha).omega2)

    @property
    def center_projection(self) -> float:
        return float(self.e[1] - self.curve.phi_plus(self.e[0] - self.alpha))


def _as_points(z):
    z = np.asarray(z, dtype=float)
    return z.reshape(-1, 2), z.ndim == 1


def _sector_parameter(curve: ExtendedGraphCurve, e, alpha: float, r: float, M: float, z: np.ndarray) -> np.ndarray:
    """alpha' in [alpha - 1/M, alpha + 1/M] with z on C_{e,alpha'}, or NaN."""
    e1, e2 = float(e[0]), float(e[1])
    z1, z2 = z[:, 0], z[:, 1]
    L, R = curve.domain_plus
    lo = np.maximum.reduce([np.full(len(z), alpha - 1.0 / M), np.full(len(z), e1 - R), z1 - R])
    hi = np.minimum.reduce([np.full(len(z), alpha + 1.0 / M), np.full(len(z), e1 - L), z1 - L])
    ok = (lo <= hi) & (np.hypot(z1 - e1, z2 - e2) <= r)
    hi = np.where(ok, hi, lo)

    d1, d2 = z1 - e1, z2 - e2
    # for z close to e the plain difference of phi values cancels; there the
    # difference is the mean slope over [e1 - ap, z1 - ap] times d1
    near = np.abs(d1) < _NEAR_SPAN

    def g(ap):
        t0 = e1 - ap
        mean_slope = sum(w * curve.dphi_plus(t0 + x * d1) for x, w in zip(_GL_NODES, _GL_WEIGHTS))
        direct = (z2 - curve.phi_plus(z1 - ap)) - (e2 - curve.phi_plus(t0))
        return np.where(near, d2 - d1 * mean_slope, direct)

    edges = lo[:, None] + (hi - lo)[:, None] * (np.arange(SUB_BRACKETS + 1) / SUB_BRACKETS)[None, :]
    ge = np.stack([g(edges[:, k]) for k in range(SUB_BRACKETS + 1)], axis=1)
    change = ge[:, :-1] * ge[:, 1:] <= 0
    found = ok & change.any(axis=1)
    k = np.argmax(change, axis=1)
    rows = np.arange(len(z))
    a, b = edges[rows, k], edges[rows, k + 1]
    ga = ge[rows, k]
    for _ in range(100):
        if np.all(~found | (b - a <= ROOT_TOL)):
            break
        mid = 0.5 * (a + b)
        gm = g(mid)
        left = ga * gm <= 0
        b = np.where(left, mid, b)
        a = np.where(left, a, mid)
        ga = np.where(left, ga, gm)
    root = 0.5 * (a + b)
    same = (z1 == e1) & (z2 == e2)
    root = np.where(same, alpha, root)
    return np.where(found | (same & ok), root, np.nan)


def curve_sector_parameter(spec: SectorSpec, z):
    """The alpha' whose curve through e carries z (NaN when z is outside the sector)."""
    pts, single = _as_points(z)
    out = _sector_parameter(spec.curve, spec.e, spec.alpha, spec.r, spec.M, pts)
    return float(out[0]) if single else out


def curve_sector_member(spec: SectorSpec, z, r: float | None = None, M: float | None = None):
    """Membership in the curve double-sector; ``r`` and ``M`` override the spec's values."""
    pts, single = _as_points(z)
    out = ~np.isnan(_sector_parameter(spec.curve, spec.e, spec.alpha,
                                      spec.r if r is None else r, spec.M if M is None else M, pts))
    return bool(out[0]) if single else out


def straight_sector_member(e, omega, r: float, M: float, z):
    """``|(z - e) . omega| <= |z - e| / M`` and ``|z - e| <= r``."""
    if not (r > 0 and M > 0):
        raise ValueError("r and M must be positive")
    pts, single = _as_points(z)
    d = pts - np.asarray(e, dtype=float)[None, :]
    dist = np.hypot(d[:, 0], d[:, 1])
    dot = d @ np.asarray(omega, dtype=float)
    out = (np.abs(dot) <= dist / M) & (dist <= r)
    return bool(out[0]) if single else out


def comparability_constant(lam: float, M: float) -> float:
    """c1 = lam * sqrt(8 * (1 + (1 + 2 lam / M)**2))."""
    return lam * math.sqrt(8.0 * (1.0 + (1.0 + 2.0 * lam / M) ** 2))


def _sample_ball(spec: SectorSpec, samples: int, seed, workers):
    """Half uniform in B_r(e), half concentrated around the tangent line at e."""
    e = np.asarray(spec.e)
    tangent = math.atan(float(spec.curve.dphi_plus(spec.e[0] - spec.alpha)))
    spread = min(math.pi / 2, 3.0 * math.asin(min(1.0, spec.curve.lam * (1.0 / spec.M + spec.r))))
    sizes = [min(_SAMPLE_CHUNK, samples - i) for i in range(0, samples, _SAMPLE_CHUNK)]

    def chunk(job):
        idx, size = job
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(idx,)))
        rho = spec.r * np.sqrt(rng.random(size))
        theta = rng.uniform(0, 2 * math.pi, size)
        near = rng.random(size) < 0.5
        cone = tangent + math.pi * rng.integers(0, 2, size) + rng.uniform(-spread, spread, size)
        theta = np.where(near, cone, theta)
        return e[None, :] + rho[:, None] * np.stack([np.cos(theta), np.sin(theta)], axis=1)

    parts = ordered_map(chunk, list(enumerate(sizes)), workers)
    return np.vstack(parts) if parts else np.zeros((0, 2))


@dataclass(frozen=True)
class ComparabilityReport:
    checked: int
    inner_violations: int
    outer_violations: int
    slice_violations: int
    curve_members: int
    inner_members: int
    c1: float
    max_slice: float
    slice_bound: float


def _slice_extent(e, omega, r: float, M: float, bound: float, columns: int = 65, rows: int = 4097):
    """Largest vertical extent of straight-sector members over a grid of vertical lines.

    Each vertical line is sampled on a window of half-height ``2 * bound``
    around the line through e orthogonal to ``omega``; a member on the window
    edge means the slice may be longer than the window and is reported as
    infinite.
    """
    slope = -omega[0] / omega[1]
    offsets = np.linspace(-2.0 * bound, 2.0 * bound, rows)
    worst = 0.0
    for s in r * np.linspace(-1, 1, columns):
        ys = e[1] + slope * s + offsets
        z = np.stack([np.full(rows, e[0] + s), ys], axis=1)
        inside = straight_sector_member(e, omega, r, M, z)
        if inside[0] or inside[-1]:
            return math.inf
        if inside.any():
            worst = max(worst, float(ys[inside].max() - ys[inside].min()))
    return worst


def verify_sector_comparability(spec: SectorSpec, samples: int = 10_000, seed: int = 0,
                                strict: bool = True, workers: int | None = None) -> ComparabilityReport:
    """Check both inclusions between curve and straight double-sectors on random points.

    With ``strict`` the hypotheses ``delta >= 1/M + r`` and
    ``r <= 1/(2 lam**2 M)`` are enforced; otherwise the check runs anyway.
    The vertical-slice bound for the outer straight sector is also checked.
    """
    lam, M, r, delta = spec.curve.lam, spec.M, spec.r, spec.curve.delta
    if strict:
        if not delta >= 1.0 / M + r:
            raise PreconditionError(f"delta >= 1/M + r fails: {delta!r} < {1.0 / M + r!r}")
        if not r <= 1.0 / (2.0 * lam ** 2 * M):
            raise PreconditionError(f"r <= 1/(2 lam^2 M) fails: {r!r} > {1.0 / (2.0 * lam ** 2 * M)!r}")
    z = _sample_ball(spec, samples, seed, workers)
    omega = spec.normal
    c1 = comparability_constant(lam, M)
    curve_in = curve_sector_member(spec, z)
    inner = straight_sector_member(spec.e, omega, r, c1 * M, z)
    outer = straight_sector_member(spec.e, omega, r, M / (lam * (1.0 + M * r)), z)
    mu = lam * (1.0 / M + r)
    bound = math.sqrt(8.0) * mu * r
    extent = _slice_extent(np.asarray(spec.e), omega, r, 1.0 / mu, bound) if mu < 1 / math.sqrt(2) else math.nan
    slice_bad = int(extent > bound * (1 + 1e-12)) if mu < 1 / math.sqrt(2) else 0
    return ComparabilityReport(
        checked=len(z),
        inner_violations=int(np.count_nonzero(inner & ~curve_in)),
        outer_violations=int(np.count_nonzero(curve_in & ~outer)),
        slice_violations=slice_bad,
        curve_members=int(np.count_nonzero(curve_in)),
        inner_members=int(np.count_nonzero(inner)),
        c1=c1,
        max_slice=extent,
        slice_bound=bound,
    )


@dataclass(frozen=True)
class StripReport:
    checked: int
    members: int
    violations: int
    J: tuple


def strip_interval(spec: SectorSpec) -> tuple[float, float]:
    """J centered at the projection of e with half-width sqrt(8) lam (1/M + r) r."""
    w = math.sqrt(8.0) * spec.curve.lam * (1.0 / spec.M + spec.r) * spec.r
    c = spec.center_projection
    return (c - w, c + w)


def verify_strip_containment(spec: SectorSpec, samples: int = 10_000, seed: int = 0,
                             strict: bool = True, workers: int | None = None) -> StripReport:
    """Check that curve double-sector points project into the strip interval J."""
    lam, M, r, delta = spec.curve.lam, spec.M, spec.r, spec.curve.delta
    limit = min(1.0 / (math.sqrt(2.0) * lam), delta)
    if strict and not 1.0 / M + r < limit:
        raise PreconditionError(f"1/M + r < min(1/(sqrt(2) lam), delta) fails: {1.0 / M + r!r} >= {limit!r}")
    z = _sample_ball(spec, samples, seed, workers)
    inside = curve_sector_member(spec, z)
    J = strip_interval(spec)
    proj = z[:, 1] - spec.curve.phi_plus(z[:, 0] - spec.alpha)
    slack = 4 * np.finfo(float).eps * (abs(spec.center_projection) + 1.0)
    bad = inside & ((proj < J[0] - slack) | (proj > J[1] + slack))
    return StripReport(len(z), int(np.count_nonzero(inside)), int(np.count_nonzero(bad)), J)


# ---------------------------------------------------------------- pigeonhole

@dataclass(frozen=True)
class PigeonholeResult:
    n: int
    m: int
    deficiency: float
    bound: float


def sliding_pigeonhole(masses: Sequence[float], eps: float) -> PigeonholeResult:
    """Window [n, n + k], k = ceil(eps N), with the least mass increment (smallest n on ties)."""
    x = np.asarray(masses, dtype=float)
    N = len(x) - 1
    if N < 2:
        raise ValueError("need at least three masses")
    if np.any(np.diff(x) < 0):
        raise ValueError("masses must be nondecreasing")
    if x[0] < 0:
        raise ValueError("masses must be nonnegative")
    if not 1.0 / N - 1e-12 <= eps <= 0.5:
        raise ValueError(f"eps = {eps} outside [1/N, 1/2] with N = {N}")
    # ceiling of the float product, so m - n >= eps * N holds as evaluated in floats
    k = math.ceil(eps * N)
    inc = x[k:] - x[:-k]
    n = int(np.argmin(inc))
    return PigeonholeResult(n, n + k, float(inc[n]), k / (N - k) * float(x[N]))


# ---------------------------------------------------------------- detectors

def _cloud(cloud) -> WeightedPointCloud:
    if isinstance(cloud, WeightedPointCloud):
        return cloud
    pts = np.asarray(cloud, dtype=float).reshape(-1, 2)
    return WeightedPointCloud(pts, np.ones(len(pts)))


def on_curve(curve: ExtendedGraphCurve, e, alpha: float, pts, band: float = DEFAULT_BAND) -> np.ndarray:
    """Points within vertical distance ``band`` of C_{e,alpha}."""
    if band < 0:
        raise ValueError("band must be nonnegative")
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    off = TranslatedCurve.through(curve, e, alpha).vertical_offset(pts)
    return np.abs(np.nan_to_num(off, nan=np.inf)) <= band


def separated_subset(pts, r_sep: float) -> np.ndarray:
    """Greedy left-to-right selection of points pairwise at distance >= r_sep."""
    if not r_sep > 0:
        raise ValueError("r_sep must be positive")
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    kept: list[np.ndarray] = []
    for p in pts[order]:
        if not kept or np.min(np.linalg.norm(np.array(kept) - p, axis=1)) >= r_sep:
            kept.append(p)
    return np.array(kept).reshape(-1, 2)


def detect_high_multiplicity(curve: ExtendedGraphCurve, e, alpha: float, cloud, r_sep: float,
                             threshold: int, band: float = DEFAULT_BAND) -> bool:
    c = _cloud(cloud)
    if len(c) == 0:
        return False
    pts = c.points[on_curve(curve, e, alpha, c.points, band)]
    return len(separated_subset(pts, r_sep)) >= threshold


def detect_positive_multiplicity(curve: ExtendedGraphCurve, e, alpha: float, cloud, scales: ScaleSequence,
                                 n: int, k: int, band: float = DEFAULT_BAND) -> bool:
    if not (1 <= n - k and n + k <= scales.N):
        raise IndexError(f"n - k = {n - k} and n + k = {n + k} must lie in 1..{scales.N}")
    lo, hi = scales.r_minus(n + k), scales.r_plus(n - k)
    c = _cloud(cloud)
    if len(c) == 0:
        return False
    pts = c.points[on_curve(curve, e, alpha, c.points, band)]
    d = np.hypot(pts[:, 0] - e[0], pts[:, 1] - e[1])
    return bool(np.any((d >= lo) & (d <= hi)))


def strip_weight(curve: ExtendedGraphCurve, alpha: float, J, cloud) -> float:
    """Total weight of cloud points whose extended curve projection lies in J."""
    lo, hi = map(float, J)
    if not hi > lo:
        raise ValueError(f"degenerate interval J = [{lo}, {hi}]")
    c = _cloud(cloud)
    if len(c) == 0:
        return 0.0
    t = c.points[:, 0] - alpha
    ok = curve.in_domain(t, extended=True)
    proj = c.points[:, 1] - curve.phi_plus(np.where(ok, t, curve.domain[0]))
    return float(c.weights[ok & (proj >= lo) & (proj <= hi)].sum())


def detect_high_density_strip(curve: ExtendedGraphCurve, alpha: float, J, cloud, threshold_ratio: float) -> bool:
    w = strip_weight(curve, alpha, J, cloud)
    return w >= threshold_ratio * (float(J[1]) - float(J[0]))


def curve_pair_weight(spec: SectorSpec, cloud, r_inner: float) -> float:
    """Weight in the curve double-sector at amplitude M/1e4 between radii r_inner and r."""
    if not r_inner < spec.r:
        raise ValueError(f"r_inner = {r_inner} must be below r = {spec.r}")
    c = _cloud(cloud)
    if len(c) == 0:
        return 0.0
    Mp = spec.M / 1e4
    outer = curve_sector_member(spec, c.points, r=spec.r, M=Mp)
    inner = curve_sector_member(spec, c.points, r=r_inner, M=Mp) if r_inner > 0 else np.zeros(len(c), bool)
    return float(c.weights[outer & ~inner].sum())


def detect_curve_pair(spec: SectorSpec, cloud, r_inner: float, threshold: float) -> bool:
    return curve_pair_weight(spec, cloud, r_inner) > threshold


def in_neighborhood(pairs, point, eps: float) -> bool:
    """Whether (e1, e2, alpha) lies within eps (Euclidean, open) of one of ``pairs``."""
    pairs = np.asarray(pairs, dtype=float).reshape(-1, 3)
    if len(pairs) == 0:
        return False
    return bool(np.any(np.linalg.norm(pairs - np.asarray(point, dtype=float)[None, :], axis=1) < eps))
