"""Worked channels with closed-form capacity regions.

Two families: the ternary-input Blackwell channel with state, whose region
has closed-form corner sweeps in two input-law parameters, and the
finite-field channel built from a full-rank 2x2 matrix over GF(K), whose
region is an explicit four-point hull. Both serve as ground truth for the
numerical region builders, plus the degrees-of-freedom formula the
finite-field sum capacity reproduces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSpec
from .infotheory import binary_entropy
from .regions import RatePair, RegionPolygon, make_polygon

# Input labeling of the Blackwell channel: input 0 maps to (0, 0), input 1 to
# (1, 0), input 2 to (1, 1). With alpha0 = P(X=0) and alpha1 = P(X=2) this
# labeling reproduces the closed-form corner formulas exactly (validated in
# the test suite), which pins down the otherwise arbitrary label order.
BLACKWELL_F1 = (0, 1, 1)
BLACKWELL_F2 = (0, 0, 1)


@dataclass(frozen=True)
class BlackwellParams:
    """Input-law parameters (alpha0, alpha1) = (P(X=0), P(X=2)) of the
    Blackwell channel; non-negative with alpha0 + alpha1 <= 1."""

    alpha0: float
    alpha1: float

    def __post_init__(self):
        a0, a1 = float(self.alpha0), float(self.alpha1)
        if a0 < 0.0 or a1 < 0.0 or a0 + a1 > 1.0 + 1e-12:
            raise ValueError("require alpha0, alpha1 >= 0 and alpha0 + alpha1 <= 1")
        object.__setattr__(self, "alpha0", a0)
        object.__setattr__(self, "alpha1", a1)


def blackwell_channel(p1: float, p2: float) -> ChannelSpec:
    """The Blackwell channel with state: ternary input, two binary components."""
    return ChannelSpec(3, BLACKWELL_F1, BLACKWELL_F2, p1, p2)


def _safe_ratio(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    out = np.where(den > 1e-15, num / np.maximum(den, 1e-15), 0.0)
    return np.clip(out, 0.0, 1.0)


def _blackwell_corners(alpha0, alpha1, p1: float, p2: float):
    """Vectorized closed-form corner rates; returns (r1_mid, r2_mid,
    r1_high, r2_high) for the two sweep branches."""
    a0 = np.asarray(alpha0, dtype=float)
    a1 = np.asarray(alpha1, dtype=float)
    ab0 = 1.0 - a0
    ab1 = 1.0 - a1
    h01 = binary_entropy(_safe_ratio(a0, ab1))
    h10 = binary_entropy(_safe_ratio(a1, ab0))
    r1_mid = binary_entropy(np.clip(a0, 0.0, 1.0)) - (1.0 - p1) * ab1 * h01
    r2_mid = (1.0 - p2) * ab0 * h10
    r1_high = p1 * ab1 * h01
    r2_high = binary_entropy(np.clip(a1, 0.0, 1.0)) - p2 * ab0 * h10
    clamp = lambda v: np.maximum(v, 0.0)
    return clamp(r1_mid), clamp(r2_mid), clamp(r1_high), clamp(r2_high)


def blackwell_closed_form(params: BlackwellParams, p1: float, p2: float, branch: int) -> RatePair:
    """Closed-form rate-rectangle corner of the Blackwell region.

    branch 3 is the sweep matching the mid-weight case (R1-heavy corner),
    branch 4 the above-1 case (R2-heavy corner). Ratio 0/0 counts as 0.
    """
    if branch not in (3, 4):
        raise ValueError("branch must be 3 or 4")
    r1_mid, r2_mid, r1_high, r2_high = _blackwell_corners(params.alpha0, params.alpha1, p1, p2)
    if branch == 3:
        return RatePair(float(r1_mid), float(r2_mid))
    return RatePair(float(r1_high), float(r2_high))


def blackwell_sweep_hull(p1: float, p2: float, grid: int = 101) -> RegionPolygon:
    """Capacity region of the Blackwell channel as the hull of the closed-form
    corner sweep over a grid x grid lattice of (alpha0, alpha1).

    Requires the canonical order p1 >= p2 (the closed forms are stated in
    that orientation).
    """
    if p1 < p2:
        raise ValueError("require p1 >= p2; swap receivers first")
    if grid < 2:
        raise ValueError("grid must be >= 2")
    steps = np.linspace(0.0, 1.0, grid)
    a0, a1 = np.meshgrid(steps, steps, indexing="ij")
    mask = a0 + a1 <= 1.0 + 1e-12
    a0, a1 = a0[mask], a1[mask]
    r1m, r2m, r1h, r2h = _blackwell_corners(a0, a1, p1, p2)
    pts = np.vstack(
        [
            np.column_stack([r1m, r2m]),
            np.column_stack([r1h, r2h]),
            [[0.0, 0.0]],
            [[float(np.max(r1m)), 0.0]],
            [[0.0, float(np.max(r2h))]],
        ]
    )
    return make_polygon(pts, "blackwell")


def _is_prime(k: int) -> bool:
    if k < 2:
        return False
    d = 2
    while d * d <= k:
        if k % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FiniteFieldSpec:
    """A 2x2 channel matrix over GF(K), K prime; must be full-rank mod K."""

    field_size: int
    h: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        k = int(self.field_size)
        if not _is_prime(k):
            raise ValueError(f"field_size must be prime, got {k}")
        object.__setattr__(self, "field_size", k)
        rows = tuple(tuple(int(v) % k for v in row) for row in self.h)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("h must be a 2x2 matrix")
        object.__setattr__(self, "h", rows)
        det = (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]) % k
        if det == 0:
            raise ValueError("channel matrix is singular over GF(K)")


def finite_field_channel(ff: FiniteFieldSpec, p1: float, p2: float) -> ChannelSpec:
    """Channel on K^2 inputs (index x = x1*K + x2) whose components are the
    two rows of the matrix applied over GF(K)."""
    k = ff.field_size
    (h11, h12), (h21, h22) = ff.h
    f1 = []
    f2 = []
    for x in range(k * k):
        x1, x2 = divmod(x, k)
        f1.append((h11 * x1 + h12 * x2) % k)
        f2.append((h21 * x1 + h22 * x2) % k)
    return ChannelSpec(k * k, tuple(f1), tuple(f2), p1, p2)


def finite_field_region(ff: FiniteFieldSpec, p1: float, p2: float) -> RegionPolygon:
    """Analytic capacity region of the finite-field channel, in bits:
    hull of (0,0), (log2 K, 0), (0, log2 K) and (p1 log2 K, (1-p2) log2 K).

    The fourth point is a proper vertex exactly when p1 > p2; at p1 = p2 it
    sits on the time-division edge and the hull is the triangle.
    """
    if p1 < p2:
        raise ValueError("require p1 >= p2; swap receivers first")
    log_k = math.log2(ff.field_size)
    pts = [
        (0.0, 0.0),
        (log_k, 0.0),
        (0.0, log_k),
        (p1 * log_k, (1.0 - p2) * log_k),
    ]
    return make_polygon(pts, "capacity")


def dof(p1: float, p2: float) -> float:
    """High-power degrees of freedom of the matching fading channel: p1 + (1 - p2).

    Reproduced here symbolically; the finite-field sum capacity equals this
    value times log2 K, which the test suite checks against the computed
    regions.
    """
    if not (0.0 <= p2 <= p1 <= 1.0):
        raise ValueError("require 0 <= p2 <= p1 <= 1 (canonical order)")
    return p1 + (1.0 - p2)
