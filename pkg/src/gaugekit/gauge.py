"""Gauge (Minkowski functional) evaluation for star-shaped oracles.

For a star-shaped S the feasible scales {mu >= 0 : mu*x in S} form an
interval anchored at 0, so the gauge p(x) = 1/sup{mu : mu*x in S} is found
by multiplicative bracketing (factor 2) followed by bisection.  The search
truncates at max_bracket: a sup beyond it reports gauge 0 (cutoff note), an
empty feasible set below 1/max_bracket reports +inf.  Conventions
1/0 = +inf and 1/inf = 0 keep the value total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_TOL,
    INF,
    ContractError,
    InputError,
    SampleStream,
    ToleranceProfile,
    Verdict,
    as_points,
    as_vector,
    falsified,
    supported,
)
from .sets import STAR_HULL, SetOracle, hull_oracle, sample_members

BRACKETED, SUP_UNBOUNDED, NO_MEMBER = 0, 1, 2


def radial_brackets(member_fn, X, tol: ToleranceProfile, bisect_scale: float = 1.0):
    """Bracket and bisect the exit scale of each ray {mu*x : mu > 0}.

    Returns (mu_in, mu_out, status) with status per point: BRACKETED when
    mu_in is the last member scale and mu_out the first non-member one,
    SUP_UNBOUNDED when membership persists beyond max_bracket, NO_MEMBER when
    no member scale above 1/max_bracket exists.  ``bisect_scale`` > 1 loosens
    the bisection target (used before family-specific polishing).

    Excludes zero vectors; callers handle x = 0 separately.
    """
    X = np.asarray(X, dtype=np.float64)
    n = len(X)
    kmax = int(math.ceil(math.log2(tol.max_bracket))) + 1
    mu_in = np.full(n, np.nan)
    mu_out = np.full(n, np.nan)
    status = np.full(n, BRACKETED, dtype=np.int8)

    m1 = np.asarray(member_fn(X), dtype=bool)
    mu_in[m1] = 1.0
    mu_out[~m1] = 1.0

    # expand upward for points that start inside
    active = np.where(m1)[0]
    mu = 1.0
    for _ in range(kmax):
        if len(active) == 0:
            break
        mu *= 2.0
        hit = np.asarray(member_fn(mu * X[active]), dtype=bool)
        mu_in[active[hit]] = mu
        mu_out[active[~hit]] = mu
        active = active[hit]
        if mu > tol.max_bracket:
            break
    status[active] = SUP_UNBOUNDED

    # shrink downward for points that start outside
    active = np.where(~m1)[0]
    mu = 1.0
    for _ in range(kmax):
        if len(active) == 0:
            break
        mu *= 0.5
        hit = np.asarray(member_fn(mu * X[active]), dtype=bool)
        mu_in[active[hit]] = mu
        mu_out[active[hit]] = 2.0 * mu
        active = active[~hit]
        if mu < 1.0 / tol.max_bracket:
            break
    status[active] = NO_MEMBER

    # bisect the bracketed points; stop per point once the width implies a
    # gauge error below eps_bisect*max(1, gauge)
    live = np.where(status == BRACKETED)[0]
    target = tol.eps_bisect * bisect_scale
    for _ in range(tol.max_iter):
        if len(live) == 0:
            break
        lo = mu_in[live]
        hi = mu_out[live]
        done = (hi - lo) <= target * np.maximum(lo * lo, lo)
        live = live[~done]
        if len(live) == 0:
            break
        mid = 0.5 * (mu_in[live] + mu_out[live])
        hit = np.asarray(member_fn(mid[:, None] * X[live]), dtype=bool)
        mu_in[live[hit]] = mid[hit]
        mu_out[live[~hit]] = mid[~hit]
    return mu_in, mu_out, status


@dataclass(frozen=True)
class GaugeEvaluator:
    """Gauge of a star-shaped oracle under a tolerance profile.

    The oracle must be flagged star_shaped; callers holding an arbitrary set
    should pass its star-shaped hull (see sets.hull_oracle), which has the
    same gauge.
    """

    set: SetOracle
    tol: ToleranceProfile = field(default=DEFAULT_TOL)

    def __post_init__(self):
        if "star_shaped" not in self.set.flags:
            raise ContractError(
                "gauge evaluation requires a star_shaped oracle; pass the star-shaped hull"
            )

    def value(self, x) -> float:
        return gauge_value(self, x)

    def values(self, X) -> np.ndarray:
        return gauge_values(self, X)


def gauge_values_checked(g: GaugeEvaluator, X):
    """Batched gauge values plus diagnostics.

    Returns (values, info) where info carries ``truncated`` (sup search hit
    max_bracket: value reported as 0) and ``star_violation`` (membership at
    half the located exit scale failed, contradicting the star_shaped claim).
    """
    oracle, tol = g.set, g.tol
    X = as_points(X, oracle.dim)
    n = len(X)
    out = np.empty(n)
    norms = np.linalg.norm(X, axis=1)
    zero = norms == 0.0
    truncated = np.zeros(n, dtype=bool)
    star_violation = np.zeros(n, dtype=bool)
    if np.any(zero):
        out[zero] = 0.0 if oracle.contains_point(np.zeros(oracle.dim)) else INF
    nz = np.where(~zero)[0]
    if len(nz):
        mu_in, mu_out, status = radial_brackets(oracle.contains_points, X[nz], tol)
        vals = np.empty(len(nz))
        br = status == BRACKETED
        vals[br] = 2.0 / (mu_in[br] + mu_out[br])
        vals[status == SUP_UNBOUNDED] = 0.0
        vals[status == NO_MEMBER] = INF
        truncated[nz[status == SUP_UNBOUNDED]] = True
        if np.any(br):
            half = 0.5 * mu_in[br]
            ok = oracle.contains_points(half[:, None] * X[nz[br]])
            star_violation[nz[br]] = ~ok
        out[nz] = vals
    return out, {"truncated": truncated, "star_violation": star_violation}


def gauge_values(g: GaugeEvaluator, X) -> np.ndarray:
    """Batched gauge values (0 for x=0 on non-empty S, +inf when nothing absorbs x)."""
    return gauge_values_checked(g, X)[0]


def gauge_value(g: GaugeEvaluator, x) -> float:
    """Gauge of a single point: inf{lam >= 0 : x in lam*S} = 1/sup{mu : mu*x in S}."""
    x = as_vector(x, g.set.dim)
    vals, info = gauge_values_checked(g, x[None, :])
    if info["star_violation"][0]:
        raise ContractError(
            "membership along the ray is not an interval: oracle violates its star_shaped claim"
        )
    return float(vals[0])


def gauge_sublevel(g: GaugeEvaluator, bound: float, strict: bool) -> SetOracle:
    """The sublevel oracle {x : p(x) < bound} (strict) or {x : p(x) <= bound}.

    Always star-shaped; convex is inherited from the source flag (the gauge
    of a convex set is convex).
    """
    if bound < 0:
        raise InputError("gauge sublevel bound must be >= 0")
    src = g.set

    def pred(P):
        vals = gauge_values(g, P)
        return vals < bound if strict else vals <= bound

    flags = {"star_shaped"}
    if "convex" in src.flags:
        flags.add("convex")
    if bool(pred(np.zeros((1, src.dim)))[0]):
        flags.add("contains_origin")
    outer = None
    inner = None
    if bound > 0.0:
        if src.outer_radius is not None:
            outer = bound * src.outer_radius * (1.0 + 1e-9)
            flags.add("bounded")
        if src.inner_radius is not None:
            inner = bound * src.inner_radius * (1.0 - 1e-9)
    return SetOracle(dim=src.dim, contains=pred, flags=frozenset(flags),
                     outer_radius=outer, inner_radius=inner)


def sandwich_check(g: GaugeEvaluator, n_samples: int, stream: SampleStream) -> Verdict:
    """Check p^-1([0,1)) within S within p^-1([0,1]), and p_S = p_of_star_hull.

    Samples ambient points plus points rescaled to hover around the unit
    sphere of p, where the sandwich bites.
    """
    oracle, tol = g.set, g.tol
    if "star_shaped" not in oracle.flags:
        raise ContractError("sandwich_check requires the star_shaped flag")
    n = max(8, n_samples)
    dirs = stream.directions(n, oracle.dim)
    radii = stream.log_uniform(2.0 ** -6, 2.0 ** 6, n)
    pts = dirs * radii[:, None]
    members, eff = sample_members(oracle, n // 2, stream, tol)
    if len(members):
        pts = np.concatenate([pts, members])
    vals = gauge_values(g, pts)
    finite = np.isfinite(vals) & (vals > 0.0)
    if np.any(finite):
        scale = stream.uniform(0.8, 1.2, int(np.sum(finite)))
        near = pts[finite] / vals[finite][:, None] * scale[:, None]
        pts = np.concatenate([pts, near])
        vals = np.concatenate([vals, gauge_values(g, near)])
    in_s = oracle.contains_points(pts)
    effort = eff + 2 * len(pts)

    low = vals < 1.0 - tol.eps_strict
    bad_low = low & ~in_s
    if np.any(bad_low):
        i = int(np.argmax(bad_low))
        return falsified({"x": pts[i], "gauge": float(vals[i])}, effort=effort,
                         note="p(x) < 1 but x not in S")
    high = vals > 1.0 + tol.eps_strict
    bad_high = in_s & high
    if np.any(bad_high):
        i = int(np.argmax(bad_high))
        return falsified({"x": pts[i], "gauge": float(vals[i])}, effort=effort,
                         note="x in S but p(x) > 1")

    # hull invariance p_S = p_of_star_hull on a subsample
    k = min(len(pts), 64)
    idx = stream.integers(0, len(pts), k)
    hull_eval = GaugeEvaluator(hull_oracle(oracle, STAR_HULL, tol), tol)
    hv = gauge_values(hull_eval, pts[idx])
    pv = vals[idx]
    both_inf = np.isinf(hv) & np.isinf(pv)
    diff = np.where(both_inf, 0.0, np.abs(hv - pv))
    lim = g.tol.eps_eq * (1.0 + np.where(np.isfinite(pv), pv, 0.0))
    if np.any(diff > lim):
        i = int(np.argmax(diff > lim))
        return falsified({"x": pts[idx[i]], "gauge": float(pv[i]), "hull_gauge": float(hv[i])},
                         effort=effort + k, note="gauge differs from star-hull gauge")
    margin_pool = np.abs(vals[np.isfinite(vals)] - 1.0)
    margin = float(np.min(margin_pool)) if margin_pool.size else None
    return supported(effort=effort + k, margin=margin)


def continuity_probe(g: GaugeEvaluator, x, n_approach: int, stream: SampleStream) -> dict:
    """Empirical liminf/limsup of p along points shrinking onto x.

    Approach points sit at geometric radii 2^-k in random directions plus the
    +-axis directions (counterexamples tend to fail along specific axes).
    This is a probe, not a decision procedure.
    """
    if n_approach < 8:
        raise InputError("n_approach must be >= 8")
    x = as_vector(x, g.set.dim)
    d = g.set.dim
    axis = np.concatenate([np.eye(d), -np.eye(d)])
    rand = stream.directions(max(4, n_approach), d)
    dirs = np.concatenate([axis, rand])
    r0 = 1.0 + float(np.linalg.norm(x))
    value = gauge_value(g, x)
    eps = g.tol.eps_strict * (1.0 + (abs(value) if math.isfinite(value) else 0.0))

    # at a finite approach radius h even a Lipschitz gauge shows a gap ~ L*h,
    # so a semicontinuity failure is a gap that does NOT shrink with h
    shells = [2.0 ** -k for k in (4, 6, 8, 10, 12)]
    mins, maxs = [], []
    for h in shells:
        vals = gauge_values(g, x[None, :] + (r0 * h) * dirs)
        mins.append(float(np.min(vals)))
        maxs.append(float(np.max(vals)))

    def gap(a, b):  # max(0, a - b) with inf == inf treated as closed
        if math.isinf(a) and math.isinf(b):
            return 0.0
        if math.isinf(a):
            return INF
        if math.isinf(b):
            return 0.0
        return max(0.0, a - b)

    def side_ok(gaps):
        if gaps[-1] <= eps:
            return True
        if math.isinf(gaps[-1]):
            return False
        return gaps[-1] <= 0.67 * gaps[0] + eps  # shrinking toward closure

    lsc_gaps = [gap(value, m) for m in mins]
    usc_gaps = [gap(M, value) for M in maxs]
    return {
        "value": value,
        "liminf": mins[-1],
        "limsup": maxs[-1],
        "lsc_ok": side_ok(lsc_gaps),
        "usc_ok": side_ok(usc_gaps),
    }
