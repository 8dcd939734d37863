"""Deterministic global maximization over probability simplices.

Strategy: exhaustive evaluation on the rational lattice {k/m : sum k = m},
then local ascent seeded from the best lattice points. The ascent repeatedly
moves mass between one pair of coordinates: a vectorized scan over all pairs
and a geometric step grid picks the most promising move, and a golden-section
line search polishes its size, so simplex feasibility is preserved exactly.

Everything is deterministic. Lattice points are generated in ascending
lexicographic order and ties break toward the earliest point; candidate
comparisons use first-maximum semantics throughout.

Objectives must be vectorized: they take an array whose trailing axis (for
maximize_simplex) or trailing two axes (for maximize_joint) hold the
distribution, and return values over the leading axes. A bare 1-D (or 2-D
joint) input must yield a scalar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_CHUNK = 1_500_000
_MEMO_POINT_LIMIT = 200_000
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_GOLDEN_ITERS = 24
_FRACS = np.array([0.03125, 0.125, 0.25, 0.5, 0.75, 1.0])


@dataclass(frozen=True)
class OptConfig:
    """Search resolution knobs.

    grid_denominator is the lattice resolution m; refine_starts the number of
    top lattice points seeding local ascent; refine_iters the mass-move budget
    per seed; step_tolerance the per-move improvement (bits) below which a
    seed is considered converged; value_tolerance the advertised accuracy of
    returned values (bits), used by callers when comparing optima.
    """

    grid_denominator: int
    refine_starts: int = 8
    refine_iters: int = 300
    step_tolerance: float = 1e-9
    value_tolerance: float = 1e-4

    def __post_init__(self):
        if self.grid_denominator < 2:
            raise ValueError("grid_denominator must be >= 2")
        if self.refine_starts < 1:
            raise ValueError("refine_starts must be a positive integer")
        if self.refine_iters < 1:
            raise ValueError("refine_iters must be a positive integer")
        if self.step_tolerance <= 0.0 or self.value_tolerance <= 0.0:
            raise ValueError("tolerances must be positive")


def default_grid(dim: int) -> int:
    """Default lattice denominator; shrinks with dimension to keep the point
    count near 1e5 or below."""
    if dim <= 4:
        return 48
    if dim <= 6:
        return 24
    if dim <= 9:
        return 12
    if dim <= 12:
        return 6
    if dim <= 16:
        return 5
    return 4


def default_config(dim: int) -> OptConfig:
    return OptConfig(grid_denominator=default_grid(dim))


@dataclass
class OptResult:
    """Best point found, its objective value (bits) and the number of
    objective evaluations spent."""

    argmax: np.ndarray
    value: float
    evaluations: int


def lattice_size(denominator: int, dim: int) -> int:
    return math.comb(denominator + dim - 1, dim - 1)


def _build_block(total: int, parts: int, memo: dict) -> np.ndarray:
    if parts == 1:
        return np.array([[total]], dtype=np.int32)
    key = (total, parts)
    hit = memo.get(key)
    if hit is not None:
        return hit
    blocks = []
    for k in range(total + 1):
        sub = _build_block(total - k, parts - 1, memo)
        lead = np.full((sub.shape[0], 1), k, dtype=np.int32)
        blocks.append(np.hstack((lead, sub)))
    out = np.vstack(blocks) if len(blocks) > 1 else blocks[0]
    if out.shape[0] <= _MEMO_POINT_LIMIT and parts <= 8:
        memo[key] = out
    return out


@lru_cache(maxsize=48)
def _cached_lattice(denominator: int, dim: int) -> np.ndarray:
    block = _build_block(denominator, dim, {})
    block.setflags(write=False)
    return block


def iter_lattice(denominator: int, dim: int, chunk_limit: int = DEFAULT_CHUNK):
    """Yield integer blocks jointly covering every composition of
    `denominator` into `dim` parts exactly once, in ascending lexicographic
    order. Large lattices are split on leading coordinates so no block
    exceeds chunk_limit rows; small ones are cached across calls."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if denominator < 0:
        raise ValueError("denominator must be non-negative")
    if lattice_size(denominator, dim) <= _MEMO_POINT_LIMIT:
        yield _cached_lattice(denominator, dim)
        return
    memo: dict = {}

    def emit(total, parts, prefix):
        if lattice_size(total, parts) <= chunk_limit or parts == 1:
            block = _build_block(total, parts, memo)
            if prefix:
                lead = np.broadcast_to(
                    np.array(prefix, dtype=np.int32), (block.shape[0], len(prefix))
                )
                block = np.hstack((lead, block))
            yield block
        else:
            for k in range(total + 1):
                yield from emit(total - k, parts - 1, prefix + (k,))

    yield from emit(denominator, dim, ())


def _check_values(vals: np.ndarray, pts: np.ndarray) -> None:
    if vals.shape != (pts.shape[0],):
        raise ValueError("objective must return one value per input point")
    if np.isnan(vals).any():
        i = int(np.flatnonzero(np.isnan(vals))[0])
        raise ValueError(f"objective returned NaN at point {pts[i].tolist()}")


def _scan_lattice(objective, dim: int, m: int, top_k: int):
    """Evaluate the objective on the full lattice, tracking the top_k points.
    Ties break toward the earlier generation index."""
    top_vals = np.empty(0)
    top_pts = np.empty((0, dim))
    top_ord = np.empty(0, dtype=np.int64)
    offset = 0
    evals = 0
    for block in iter_lattice(m, dim):
        pts = block.astype(float) / m
        vals = np.asarray(objective(pts), dtype=float)
        _check_values(vals, pts)
        evals += pts.shape[0]
        k_here = min(top_k, vals.shape[0])
        if k_here < vals.shape[0]:
            idx = np.argpartition(-vals, k_here - 1)[:k_here]
        else:
            idx = np.arange(vals.shape[0])
        cand_vals = np.concatenate([top_vals, vals[idx]])
        cand_pts = np.vstack([top_pts, pts[idx]])
        cand_ord = np.concatenate([top_ord, offset + idx])
        order = np.lexsort((cand_ord, -cand_vals))[:top_k]
        top_vals, top_pts, top_ord = cand_vals[order], cand_pts[order], cand_ord[order]
        offset += pts.shape[0]
    return top_vals, top_pts, evals


def _pair_deltas(dim: int):
    i_idx, j_idx = np.where(~np.eye(dim, dtype=bool))
    delta = np.zeros((i_idx.size, dim))
    rows = np.arange(i_idx.size)
    delta[rows, i_idx] -= 1.0
    delta[rows, j_idx] += 1.0
    return i_idx, delta


def _golden_polish(objective, base: np.ndarray, delta: np.ndarray, hi: np.ndarray, iters: int = _GOLDEN_ITERS):
    """Per-row golden-section maximum of t -> objective(base + t*delta) on
    [0, hi]; returns the best (t, value) seen including the probes."""
    n = base.shape[0]
    a = np.zeros(n)
    b = hi.astype(float).copy()

    def probe(t):
        pts = np.maximum(base + t[:, None] * delta, 0.0)
        return np.asarray(objective(pts), dtype=float)

    best_t = np.zeros(n)
    best_v = np.full(n, -np.inf)
    evals = 0
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1 = probe(x1)
    f2 = probe(x2)
    evals += 2 * n
    for _ in range(iters):
        better = np.where(f1 >= f2, x1, x2)
        better_v = np.maximum(f1, f2)
        upd = better_v > best_v
        best_t = np.where(upd, better, best_t)
        best_v = np.maximum(best_v, better_v)
        go_right = f2 > f1
        a = np.where(go_right, x1, a)
        b = np.where(go_right, b, x2)
        x1 = b - _GOLDEN * (b - a)
        x2 = a + _GOLDEN * (b - a)
        f1 = probe(x1)
        f2 = probe(x2)
        evals += 2 * n
    better = np.where(f1 >= f2, x1, x2)
    better_v = np.maximum(f1, f2)
    upd = better_v > best_v
    best_t = np.where(upd, better, best_t)
    best_v = np.maximum(best_v, better_v)
    return best_t, best_v, evals


def _full_pair_polish(objective, S, V, rows, i_idx, delta, step_tolerance, iters):
    """Golden-section line search over every ordered pair for the given state
    rows; the rigorous stall check before a state is frozen. The coarse step
    grid of the main scan can miss pairs whose optimal move is tiny, so a
    state only freezes once no pair improves it. Applies improving moves in
    place and returns (rescued mask, evals)."""
    evals = 0
    rescued = np.zeros(len(rows), dtype=bool)
    for pos, s in enumerate(rows):
        hi = S[s][i_idx]
        live = hi > 0.0
        if not live.any():
            continue
        base = np.broadcast_to(S[s], (int(live.sum()), S.shape[1]))
        t_g, v_g, e = _golden_polish(objective, base, delta[live], hi[live], iters)
        evals += e
        b = int(np.argmax(v_g))
        if v_g[b] > V[s] + step_tolerance:
            S[s] = np.maximum(S[s] + t_g[b] * delta[live][b], 0.0)
            V[s] = v_g[b]
            rescued[pos] = True
    return rescued, evals


def _pattern_step(objective, S, V, rows, snap, step_tolerance, iters):
    """Line search along the accumulated move direction (current minus
    snapshot) for the given state rows; de-zigzags ridge-shaped objectives.
    Returns (gain per row, evals); applies improving steps in place."""
    base = S[rows]
    D = base - snap[rows]
    span = np.abs(D).max(axis=1)
    live = span > 1e-15
    gain = np.zeros(len(rows))
    if not live.any():
        return gain, 0
    sub = rows[live]
    base = S[sub]
    D = D[live]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(D < -1e-18, base / np.maximum(-D, 1e-300), np.inf)
    t_lim = np.minimum(ratio.min(axis=1), 8.0)
    ok = t_lim > 0.0
    if not ok.any():
        return gain, 0
    sub = sub[ok]
    base = base[ok]
    D = D[ok]
    t_lim = t_lim[ok]
    t_g, v_g, evals = _golden_polish(objective, base, D, t_lim, iters)
    improve = v_g > V[sub] + step_tolerance
    tgt = sub[improve]
    S[tgt] = np.maximum(base[improve] + t_g[improve, None] * D[improve], 0.0)
    full_gain = np.zeros(len(rows))
    lookup = {int(r): i for i, r in enumerate(rows)}
    for r, v in zip(sub[improve], v_g[improve] - V[sub][improve]):
        full_gain[lookup[int(r)]] = v
    V[tgt] = v_g[improve]
    return full_gain, evals


def _refine(objective, starts: np.ndarray, cfg: OptConfig):
    """Two-phase refinement: ascend every start at a coarse tolerance, then
    polish only the leaders (within 1e-4 bits of the best, at most three) at
    the configured tolerance. Laggard starts cannot win, so the tail cost is
    spent where it matters."""
    S = np.array(starts, dtype=float)
    k, _ = S.shape
    if k == 0:
        return S, np.empty(0), 0
    coarse_tol = max(cfg.step_tolerance, 1e-6)
    S, V, evals = _ascend(objective, S, coarse_tol, min(cfg.refine_iters, 80), polish=False)
    if coarse_tol > cfg.step_tolerance:
        order = np.argsort(-V, kind="stable")
        lead = order[: max(1, min(3, k))]
        lead = lead[V[lead] >= V[order[0]] - 1e-4]
        S2, V2, e2 = _ascend(objective, S[lead], cfg.step_tolerance, cfg.refine_iters, polish=True)
        S[lead], V[lead] = S2, V2
        evals += e2
    # Renormalize accumulated float drift exactly onto the simplex, then
    # re-evaluate so returned values match returned points.
    S = S / S.sum(axis=1, keepdims=True)
    V = np.asarray(objective(S), dtype=float)
    evals += k
    return S, V, evals


def _ascend(objective, starts: np.ndarray, step_tolerance: float, max_iters: int, polish: bool = True):
    """Greedy pairwise-exchange ascent, batched over start points. Each
    iteration applies to every still-active start its single best mass move
    (pair scan over a geometric step grid, then golden-section polish); a
    periodic pattern step along the accumulated direction accelerates
    convergence along ridges where single-pair moves zigzag, and a state only
    freezes after a full per-pair line search fails to improve it."""
    S = np.array(starts, dtype=float)
    k, dim = S.shape
    V = np.asarray(objective(S), dtype=float)
    _check_values(V, S)
    evals = k
    if dim == 1 or k == 0:
        return S, V, evals
    i_idx, delta = _pair_deltas(dim)
    active = np.ones(k, dtype=bool)
    snap = S.copy()
    age = np.zeros(k, dtype=int)
    # Near-tied landscapes can sustain microscopic gains for hundreds of
    # moves; a state that stops making appreciable progress is cut off after
    # a bounded number of such iterations.
    stall = np.zeros(k, dtype=int)
    stall_budget = 3 * dim + 8
    for _ in range(max_iters):
        if not active.any():
            break
        act = np.flatnonzero(active)
        v_before = V[act].copy()
        base = S[act]
        t_max = base[:, i_idx]
        T = t_max[:, :, None] * _FRACS
        C = base[:, None, None, :] + T[..., None] * delta[None, :, None, :]
        np.maximum(C, 0.0, out=C)
        vals = np.asarray(objective(C), dtype=float)
        evals += vals.size
        flat = vals.reshape(len(act), -1)
        pick = flat.argmax(axis=1)
        pair_pick, frac_pick = np.unravel_index(pick, (i_idx.size, _FRACS.size))
        rows = np.arange(len(act))
        v_grid = flat[rows, pick]
        t_grid = t_max[rows, pair_pick] * _FRACS[frac_pick]
        dsel = delta[pair_pick]
        if polish:
            t_gold, v_gold, e_gold = _golden_polish(objective, base, dsel, t_max[rows, pair_pick])
            evals += e_gold
            take_gold = v_gold > v_grid
            t_new = np.where(take_gold, t_gold, t_grid)
            v_new = np.maximum(v_grid, v_gold)
        else:
            t_new = t_grid
            v_new = v_grid
        improved = v_new > V[act] + step_tolerance
        moved = np.maximum(base + t_new[:, None] * dsel, 0.0)
        S[act[improved]] = moved[improved]
        V[act[improved]] = v_new[improved]
        age[act] += 1
        due = act[(age[act] >= dim) | ~improved]
        if due.size:
            g_iters = _GOLDEN_ITERS if polish else 12
            gain, e_pat = _pattern_step(objective, S, V, due, snap, step_tolerance, g_iters)
            evals += e_pat
            snap[due] = S[due]
            age[due] = 0
            pair_failed = np.isin(due, act[~improved])
            stalled = due[pair_failed & (gain <= step_tolerance)]
            if stalled.size:
                rescued, e_res = _full_pair_polish(
                    objective, S, V, stalled, i_idx, delta, step_tolerance, g_iters
                )
                evals += e_res
                snap[stalled] = S[stalled]
                active[stalled[~rescued]] = False
        it_gain = V[act] - v_before
        stall[act] = np.where(it_gain > 1e3 * step_tolerance, 0, stall[act] + 1)
        active[act[stall[act] > stall_budget]] = False
    return S, V, evals


def _dedupe_rows(rows: list[np.ndarray]) -> list[np.ndarray]:
    seen = set()
    out = []
    for r in rows:
        key = np.round(r, 12).tobytes()
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def _maximize_flat(objective, dim: int, cfg: OptConfig, extra_starts, orbit_key=None) -> OptResult:
    if dim == 1:
        pt = np.ones(1)
        return OptResult(pt, float(objective(pt)), 1)
    top_vals, top_pts, evals = _scan_lattice(objective, dim, cfg.grid_denominator, cfg.refine_starts)
    starts = list(top_pts)
    if orbit_key is not None:
        seen = set()
        kept = []
        for p in starts:
            key = orbit_key(p)
            if key not in seen:
                seen.add(key)
                kept.append(p)
        starts = kept
    for s in extra_starts:
        arr = np.asarray(s, dtype=float).reshape(-1)
        if arr.shape[0] != dim:
            raise ValueError(f"extra start has dimension {arr.shape[0]}, expected {dim}")
        starts.append(arr)
    starts = _dedupe_rows(starts)
    ref_pts, ref_vals, ev2 = _refine(objective, np.array(starts), cfg)
    evals += ev2
    cand_vals = np.concatenate([[top_vals[0]], ref_vals])
    cand_pts = [top_pts[0], *ref_pts]
    best = int(np.argmax(cand_vals))
    point = np.asarray(cand_pts[best])
    value = float(cand_vals[best])
    check = float(objective(point))
    evals += 1
    if abs(check - value) > 1e-12:
        raise AssertionError(f"optimizer value {value} failed re-evaluation ({check})")
    return OptResult(point, value, evals)


def maximize_simplex(objective, dim: int, cfg: OptConfig | None = None, extra_starts=()) -> OptResult:
    """Global maximum of a vectorized objective over the dim-simplex.

    Returns the best of (a) an exhaustive lattice scan at cfg.grid_denominator
    and (b) pairwise-exchange ascent from the cfg.refine_starts best lattice
    points plus any extra_starts. Deterministic for a fixed cfg.
    """
    if dim < 1:
        raise ValueError("dim must be a positive integer")
    cfg = cfg or default_config(dim)
    return _maximize_flat(objective, dim, cfg, extra_starts)


def maximize_joint(
    objective,
    dims: tuple[int, int],
    cfg: OptConfig | None = None,
    extra_starts=(),
    symmetric_u: bool = False,
) -> OptResult:
    """Global maximum over joint mass functions on a u_size x x_size grid.

    Same search strategy as maximize_simplex on the flattened simplex. With
    symmetric_u=True (declaring the objective invariant under relabeling of
    the first coordinate) refinement starts are deduplicated up to row
    permutation, which removes redundant ascent runs.
    """
    u_size, x_size = int(dims[0]), int(dims[1])
    if u_size < 1 or x_size < 1:
        raise ValueError("joint dims must be positive integers")
    dim = u_size * x_size
    cfg = cfg or default_config(dim)

    def flat_obj(arr):
        a = np.asarray(arr, dtype=float)
        return objective(a.reshape(a.shape[:-1] + (u_size, x_size)))

    orbit_key = None
    if symmetric_u:
        def orbit_key(pt):
            rows = np.round(pt.reshape(u_size, x_size), 12)
            return tuple(sorted(map(tuple, rows.tolist())))

    extras = [np.asarray(s, dtype=float).reshape(-1) for s in extra_starts]
    res = _maximize_flat(flat_obj, dim, cfg, extras, orbit_key=orbit_key)
    res.argmax = res.argmax.reshape(u_size, x_size)
    return res
