"""Convexity-taxonomy certifiers and the theorem cross-check harnesses.

Chord tests are batched: a budget of n_samples draws pairs (x, y) and chord
parameters t, evaluates both sides of the defining inequality, and falsifies
on a reproducible witness.  Strictness tests additionally append structured
probes (collinear pairs and level-set pairs) because flat pieces are measure
zero for random chords.

Numerics of strictness: a chord at relative separation s on a smooth
strictly convex function has slack ~ curvature * s^2, so a fixed absolute
margin would misread curvature as flatness for close pairs.  Strictness
verdicts therefore (a) skip pairs closer than SEP_FLOOR, below which double
precision carries no strictness information, and (b) scale the flatness
threshold by t*(1-t)*s^2.  Exact flats (slack ~ 1e-12 and below) are still
caught; smooth curvature never is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    FALSIFIED,
    INCONCLUSIVE,
    InputError,
    SampleStream,
    ToleranceProfile,
    Verdict,
    as_points,
    combine_verdicts,
    falsified,
    inconclusive,
    proven,
    supported,
)
from .norms import MinkowskiNormSpec, PointSeparationError
from .sets import (
    SEP_FLOOR,
    SetOracle,
    midpoint_interior_check,
    probe_strictly_convex,
    rel_sep,
    sample_members,
    segment_boundary,
)


@dataclass(frozen=True)
class HomogeneousFunctionSpec:
    """An evaluable function f: C -> R with optional homogeneity metadata.

    ``domain`` is a cone oracle, or None for the whole space.  ``degree`` is
    the declared positive-homogeneity degree (sample-checked when built
    through the factories); non-homogeneous functions leave it None.
    ``continuity`` is "proven" for closed-form built-ins and "probe"
    otherwise.
    """

    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    domain: Optional[SetOracle] = None
    degree: Optional[float] = None
    continuity: str = "probe"
    nonneg: Optional[bool] = None
    name: str = ""

    def eval(self, X) -> np.ndarray:
        return np.asarray(self.evaluator(as_points(X, self.dim)), dtype=np.float64)

    def eval_point(self, x) -> float:
        return float(self.eval(np.asarray(x, dtype=float)[None, :])[0])

    def in_domain(self, X) -> np.ndarray:
        X = as_points(X, self.dim)
        if self.domain is None:
            return np.ones(len(X), dtype=bool)
        return self.domain.contains_points(X)


def _check_homogeneity(spec: HomogeneousFunctionSpec, tol: ToleranceProfile):
    stream = SampleStream(0x407, 0)
    pts, _ = _domain_points(spec, 64, stream, tol)
    if len(pts) == 0:
        return
    ts = stream.log_uniform(2.0 ** -4, 2.0 ** 4, len(pts))
    f0 = spec.eval(pts)
    ft = spec.eval(ts[:, None] * pts)
    want = ts ** spec.degree * f0
    err = np.abs(ft - want)
    lim = tol.eps_eq * (1.0 + np.abs(want))
    if np.any(err > lim):
        i = int(np.argmax(err - lim))
        raise InputError(
            f"declared degree {spec.degree} fails at x={pts[i].tolist()}, t={ts[i]:.4g}: "
            f"f(tx)={ft[i]:.6g} vs t^a*f(x)={want[i]:.6g}"
        )


def function_spec(evaluator, dim, domain=None, degree=None, continuity="probe",
                  nonneg=None, name="", tol: ToleranceProfile = DEFAULT_TOL,
                  check=True) -> HomogeneousFunctionSpec:
    """Build a function spec; a declared degree is sample-checked."""
    spec = HomogeneousFunctionSpec(dim, evaluator, domain, degree, continuity, nonneg, name)
    if check and degree is not None:
        _check_homogeneity(spec, tol)
    return spec


def from_norm(n: MinkowskiNormSpec, name="") -> HomogeneousFunctionSpec:
    """A norm spec as a degree-1 non-negative whole-space function."""
    analytic = n.analytic_class is not None
    return HomogeneousFunctionSpec(
        n.dim, n.evaluator, None, 1.0,
        "proven" if analytic or n.family in ("polyhedral", "gauge") else "probe",
        True if analytic else None,
        name or f"{n.family}-norm",
    )


def from_expression(source, dim, domain=None, degree=None, continuity="probe",
                    name="", tol: ToleranceProfile = DEFAULT_TOL) -> HomogeneousFunctionSpec:
    from .expr import evaluate_ast, parse_expression

    ast = parse_expression(source, dim) if isinstance(source, str) else source
    label = name or (source if isinstance(source, str) else ast.source)
    return function_spec(lambda X: evaluate_ast(ast, X), dim, domain, degree,
                         continuity, None, label, tol)


def power_transform(f: HomogeneousFunctionSpec, alpha: float,
                    tol: ToleranceProfile = DEFAULT_TOL) -> HomogeneousFunctionSpec:
    """Pointwise alpha-th power; the declared degree scales by alpha.

    The base must be non-negative: a negative value at evaluation time is a
    domain error carrying the witness point.
    """
    if not alpha > 0.0:
        raise InputError("power_transform needs alpha > 0")

    def ev(X):
        vals = f.eval(X)
        if np.any(vals < 0.0):
            i = int(np.argmin(vals))
            raise InputError(
                f"power transform of a negative value {vals[i]:.6g} at {X[i].tolist()}"
            )
        return vals ** alpha

    return HomogeneousFunctionSpec(
        f.dim, ev, f.domain,
        None if f.degree is None else alpha * f.degree,
        f.continuity, f.nonneg, f"{f.name}^{alpha:g}" if f.name else "",
    )


def sublevel_oracle(f: HomogeneousFunctionSpec, level: float, strict: bool = False) -> SetOracle:
    """The sublevel set {x in C : f(x) <= level} (or < level) as an oracle.

    f is only evaluated inside the domain; points outside are non-members.
    """

    def pred(P):
        P = as_points(P, f.dim)
        mask = f.in_domain(P)
        out = np.zeros(len(P), dtype=bool)
        if np.any(mask):
            vals = f.eval(P[mask])
            out[mask] = vals < level if strict else vals <= level
        return out

    flags = set()
    if f.degree is not None and level > 0.0:
        if f.domain is None or f.domain.contains_point(np.zeros(f.dim)):
            flags.add("star_shaped")
    return SetOracle(dim=f.dim, contains=pred, flags=frozenset(flags))


# domain sampling ---------------------------------------------------------------


def _domain_points(f: HomogeneousFunctionSpec, n: int, stream: SampleStream,
                   tol: ToleranceProfile):
    """n points of the domain (whole space: direction x log-uniform radius)."""
    if f.domain is None:
        dirs = stream.directions(n, f.dim)
        radii = stream.log_uniform(2.0 ** -4, 2.0 ** 4, n)
        return dirs * radii[:, None], n
    pts, eff = sample_members(f.domain, n, stream, tol)
    return pts, eff


def _ambient_outsiders(f: HomogeneousFunctionSpec, n: int, stream: SampleStream):
    """Ambient points used to find the exterior of sublevel sets and domains."""
    dirs = stream.directions(n, f.dim)
    radii = stream.log_uniform(2.0 ** -4, 2.0 ** 6, n)
    return dirs * radii[:, None]


def _require_convex_domain(f: HomogeneousFunctionSpec, stream: SampleStream,
                           tol: ToleranceProfile):
    if f.domain is None or "convex" in f.domain.flags:
        return
    pts, _ = _domain_points(f, 128, stream.substream("domain-convexity"), tol)
    if len(pts) < 2:
        return
    idx = np.arange(len(pts))
    x = pts[idx % len(pts)]
    y = pts[(idx * 7 + 3) % len(pts)]
    t = stream.substream("domain-convexity-t").uniform(0.0, 1.0, len(pts))
    chords = x + t[:, None] * (y - x)
    if not np.all(f.domain.contains_points(chords)):
        raise InputError("domain oracle failed a convexity probe")


# chord tests -------------------------------------------------------------------


def _chord_batch(f, n_samples, stream, tol):
    m = max(8, n_samples)
    X, _ = _domain_points(f, m, stream.substream("x"), tol)
    Y, _ = _domain_points(f, m, stream.substream("y"), tol)
    k = min(len(X), len(Y))
    if k == 0:
        return None
    X, Y = X[:k], Y[:k]
    t = stream.substream("t").uniform(1e-6, 1.0 - 1e-6, k)
    return X, Y, t


def _level_pairs(f, X, tol):
    """Structured strictness probes: level-set pairs and collinear pairs."""
    pairs = []
    if f.degree is not None:
        vals = f.eval(X)
        good = vals > tol.eps_strict
        if np.any(good):
            scaled = X[good] / (vals[good] ** (1.0 / f.degree))[:, None]
            if len(scaled) >= 2:
                pairs.append((scaled, np.roll(scaled, 1, axis=0)))
                pairs.append((scaled, np.roll(scaled, max(1, len(scaled) // 3), axis=0)))
    pairs.append((X, 2.0 * X))  # collinear probes: flat for degree-1 functions
    return pairs


def test_convex(f: HomogeneousFunctionSpec, n_samples: int, stream: SampleStream,
                tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Chord test of f((1-t)x + ty) <= (1-t)f(x) + tf(y) on sampled x, y, t."""
    _require_convex_domain(f, stream, tol)
    batch = _chord_batch(f, n_samples, stream, tol)
    if batch is None:
        return inconclusive("could not sample the domain")
    X, Y, t = batch
    fx, fy = f.eval(X), f.eval(Y)
    mid = X + t[:, None] * (Y - X)
    fm = f.eval(mid)
    rhs = (1.0 - t) * fx + t * fy
    scale = 1.0 + np.abs(fx) + np.abs(fy)
    viol = fm - rhs > tol.eps_strict * scale
    effort = 3 * len(X)
    if np.any(viol):
        i = int(np.argmax((fm - rhs) / scale))
        return falsified({"x": X[i], "y": Y[i], "t": float(t[i]),
                          "lhs": float(fm[i]), "rhs": float(rhs[i])}, effort=effort,
                         margin=float(np.min(rhs - fm)))
    return supported(effort=effort, margin=float(np.min(rhs - fm)))


_STRUCT_CAP = 20000  # structured probe pairs per scan; flats are dense, more adds nothing


def _cached_chord_groups(f, n_samples, stream, tol):
    """Chord samples with their function values, shared by strictness scans.

    Each group holds random or structured pairs with endpoint and chord
    values precomputed, so several inequalities (e.g. all harness exponents)
    can be checked on the exact same evidence at one evaluation cost.
    """
    batch = _chord_batch(f, n_samples, stream, tol)
    if batch is None:
        return None
    X, Y, t = batch
    raw = [(X, Y, t)]
    cap = max(2, min(len(X) // 2, _STRUCT_CAP))
    for (A, B) in _level_pairs(f, X[:cap], tol):
        raw.append((A, B, np.full(len(A), 0.5)))
        raw.append((A, B, stream.substream("struct-t").uniform(0.05, 0.95, len(A))))
    groups = []
    for (A, B, tt) in raw:
        inside = f.in_domain(A) & f.in_domain(B)
        A, B, tt = A[inside], B[inside], tt[inside]
        if len(A) == 0:
            continue
        fa, fb = f.eval(A), f.eval(B)
        mid = A + tt[:, None] * (B - A)
        fm = f.eval(mid)
        sep = rel_sep(A, B)
        distinct = np.linalg.norm(A - B, axis=1) >= tol.eps_eq * (
            1.0 + np.linalg.norm(A, axis=1) + np.linalg.norm(B, axis=1))
        groups.append({"A": A, "B": B, "t": tt, "fa": fa, "fb": fb, "fm": fm,
                       "sep": sep, "informative": distinct & (sep >= SEP_FLOOR)})
    return groups


def _scan_groups(groups, tol, right_side, value_map=None):
    """Strict chord verdict over cached groups.

    right_side(fa, fb, t) bounds the chord value; value_map transforms the
    cached values first (identity when None).  A pair with no strict slack
    falsifies.
    """
    worst = None  # (witness dict, badness)
    margin = math.inf
    effort = 0
    for g in groups:
        fa, fb, fm = g["fa"], g["fb"], g["fm"]
        if value_map is not None:
            fa, fb, fm = value_map(fa), value_map(fb), value_map(fm)
        tt = g["t"]
        rhs = right_side(fa, fb, tt)
        slack = rhs - fm
        scale = 1.0 + np.abs(fa) + np.abs(fb)
        informative = g["informative"]
        thr = tol.eps_strict * tt * (1.0 - tt) * np.minimum(1.0, g["sep"] ** 2) * scale
        viol = informative & (slack <= thr)
        effort += 3 * len(tt)
        if np.any(informative):
            margin = min(margin, float(np.min(slack[informative] / scale[informative])))
        if np.any(viol):
            j = int(np.argmin(np.where(viol, slack - thr, np.inf)))
            badness = float(thr[j] - slack[j])
            if worst is None or badness > worst[1]:
                worst = ({"x": g["A"][j], "y": g["B"][j], "t": float(tt[j]),
                          "lhs": float(fm[j]), "rhs": float(rhs[j])}, badness)
    if worst is not None:
        return falsified(worst[0], effort=effort,
                         margin=None if margin is math.inf else margin)
    return supported(effort=effort, margin=None if margin is math.inf else margin)


def _strictness_scan(f, n_samples, stream, tol, right_side):
    groups = _cached_chord_groups(f, n_samples, stream, tol)
    if groups is None:
        return None
    return _scan_groups(groups, tol, right_side)


def _rhs_convex(fa, fb, t):
    return (1.0 - t) * fa + t * fb


def _rhs_max(fa, fb, t):
    return np.maximum(fa, fb)


def _nonneg_guard(groups):
    for g in groups:
        for key in ("fa", "fb", "fm"):
            if np.any(g[key] < 0.0):
                i = int(np.argmin(g[key]))
                raise InputError(
                    f"power transform of a negative value {g[key][i]:.6g}"
                )


def _power_scans(groups, alphas, tol):
    """Strict-convexity verdicts of f^alpha for every alpha on shared chords.

    Equivalent to test_strictly_convex(power_transform(f, a)) per exponent,
    but the base values are evaluated once; f must be non-negative on the
    samples (power-transform contract).
    """
    _nonneg_guard(groups)
    return {a: _scan_groups(groups, tol, _rhs_convex, value_map=lambda v, a=a: v ** a)
            for a in alphas}


def test_strictly_convex(f: HomogeneousFunctionSpec, n_samples: int, stream: SampleStream,
                         tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Strict chord test; falsified by an eps-distinct pair with no strict slack.

    Collinear and level-set probe pairs are always included: that is where
    positively homogeneous functions are exactly flat.
    """
    _require_convex_domain(f, stream, tol)
    v = _strictness_scan(f, n_samples, stream, tol,
                         lambda fa, fb, t: (1.0 - t) * fa + t * fb)
    return v if v is not None else inconclusive("could not sample the domain")


def test_quasi_convex(f: HomogeneousFunctionSpec, n_samples: int, stream: SampleStream,
                      tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Chord test of f((1-t)x + ty) <= max(f(x), f(y))."""
    _require_convex_domain(f, stream, tol)
    batch = _chord_batch(f, n_samples, stream, tol)
    if batch is None:
        return inconclusive("could not sample the domain")
    X, Y, t = batch
    fx, fy = f.eval(X), f.eval(Y)
    mid = X + t[:, None] * (Y - X)
    fm = f.eval(mid)
    rhs = np.maximum(fx, fy)
    scale = 1.0 + np.abs(fx) + np.abs(fy)
    viol = fm - rhs > tol.eps_strict * scale
    effort = 3 * len(X)
    if np.any(viol):
        i = int(np.argmax((fm - rhs) / scale))
        return falsified({"x": X[i], "y": Y[i], "t": float(t[i]),
                          "lhs": float(fm[i]), "rhs": float(rhs[i])}, effort=effort,
                         margin=float(np.min(rhs - fm)))
    return supported(effort=effort, margin=float(np.min(rhs - fm)))


def test_strictly_quasi_convex(f: HomogeneousFunctionSpec, n_samples: int,
                               stream: SampleStream,
                               tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Strict max-chord test with the same flatness thresholds as strict convexity."""
    _require_convex_domain(f, stream, tol)
    v = _strictness_scan(f, n_samples, stream, tol,
                         lambda fa, fb, t: np.maximum(fa, fb))
    return v if v is not None else inconclusive("could not sample the domain")


def test_sub_convex(f: HomogeneousFunctionSpec, n_samples: int, stream: SampleStream,
                    tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Convexity of sublevel sets, chord-sampled at levels drawn from observed values.

    Also runs the quasi-convexity test: the two notions coincide, so a
    disagreement on the same budget is reported as a distinct diagnostic.
    """
    _require_convex_domain(f, stream, tol)
    pts, _ = _domain_points(f, max(64, min(n_samples, 8192)), stream.substream("levels"), tol)
    if len(pts) == 0:
        return inconclusive("could not sample the domain")
    vals = f.eval(pts)
    levels = np.unique(np.quantile(vals, [0.25, 0.5, 0.75, 0.95]))
    effort = len(pts)
    worst = None
    margin = math.inf
    per_level = max(16, n_samples // max(1, len(levels)))
    for r in levels:
        members = pts[vals <= r]
        if len(members) < 2:
            continue
        k = min(per_level, 4 * len(members))
        ii = stream.substream(f"sub-i-{r}").integers(0, len(members), k)
        jj = stream.substream(f"sub-j-{r}").integers(0, len(members), k)
        t = stream.substream(f"sub-t-{r}").uniform(1e-6, 1.0 - 1e-6, k)
        A, B = members[ii], members[jj]
        chord = A + t[:, None] * (B - A)
        fc = f.eval(chord)
        effort += k
        bound = r + tol.eps_strict * (1.0 + abs(r))
        margin = min(margin, float(np.min(bound - fc)))
        if np.any(fc > bound):
            i = int(np.argmax(fc - bound))
            if worst is None:
                worst = {"x": A[i], "y": B[i], "t": float(t[i]), "level": float(r),
                         "f_chord": float(fc[i])}
    sub = (falsified(worst, effort=effort) if worst is not None
           else supported(effort=effort, margin=None if margin is math.inf else margin))
    quasi = test_quasi_convex(f, n_samples, stream.substream("quasi-crosscheck"), tol)
    if (sub.status == FALSIFIED) != (quasi.status == FALSIFIED):
        bad = sub if sub.status == FALSIFIED else quasi
        return falsified(bad.witness, effort=sub.effort + quasi.effort,
                         note="sub-convex/quasi-convex equivalence diagnostic: "
                              "the two tests disagreed on this sample budget")
    return Verdict(sub.status, witness=sub.witness, margin=sub.margin,
                   effort=sub.effort + quasi.effort, note=sub.note)


# strict sub-convexity ----------------------------------------------------------


def _locate_level_boundary(f, r, inside, outside, stream, tol, budget):
    """Boundary points of {f <= r}: radial scaling for homogeneous specs at
    r > 0, chord bisection between inside and outside points in general."""
    member_fn = sublevel_oracle(f, r).contains_points
    chunks = []
    if f.degree is not None and r > 0.0 and (len(inside) + len(outside)) > 0:
        cand = np.concatenate([c for c in (inside, outside) if len(c)])
        norms = np.linalg.norm(cand, axis=1)
        cand = cand[norms > 0.0]
        if len(cand):
            dirs = cand / np.linalg.norm(cand, axis=1)[:, None]
            dirs = dirs[f.in_domain(dirs)]
            if len(dirs):
                fv = f.eval(dirs)
                ok = fv > tol.eps_strict
                if np.any(ok):
                    t = (r / fv[ok]) ** (1.0 / f.degree)
                    pts = t[:, None] * dirs[ok]
                    keep = f.in_domain(pts)
                    pts = pts[keep]
                    if len(pts):
                        check = np.abs(f.eval(pts) - r) <= tol.eps_eq * (1.0 + abs(r))
                        chunks.append(pts[check])
    if len(inside) and len(outside):
        k = int(min(budget, 2048))
        ii = stream.substream(f"bnd-i-{r}").integers(0, len(inside), k)
        jj = stream.substream(f"bnd-j-{r}").integers(0, len(outside), k)
        chunks.append(segment_boundary(member_fn, inside[ii], outside[jj], tol))
    if not chunks:
        return np.empty((0, f.dim)), member_fn
    return np.concatenate(chunks), member_fn


def _strict_level_verdict(f, r, samples, vals, stream, tol, n_pairs):
    inside = samples[vals <= r]
    if f.domain is None or f.domain.contains_point(np.zeros(f.dim)):
        if f.eval_point(np.zeros(f.dim)) <= r:
            inside = np.concatenate([inside, np.zeros((1, f.dim))])
    outside = samples[vals > r]
    member_probe = sublevel_oracle(f, r).contains_points
    amb = _ambient_outsiders(f, 512, stream.substream(f"amb-{r}"))
    amb_out = amb[~member_probe(amb)]
    if len(amb_out):
        outside = np.concatenate([outside, amb_out]) if len(outside) else amb_out
    if len(inside) == 0:
        return supported(note=f"level {r:.6g}: no member found (empty or singleton sublevel)")
    if len(outside) == 0:
        return supported(note=f"level {r:.6g}: no exterior point found; sublevel covers all probes")

    boundary, member_fn = _locate_level_boundary(f, r, inside, outside, stream, tol, n_pairs)
    if len(boundary) < 2:
        return inconclusive(f"level {r:.6g}: boundary location failed along all probes")

    k = max(8, n_pairs)
    pi = stream.substream(f"pair-i-{r}").integers(0, len(boundary), k)
    pj = stream.substream(f"pair-j-{r}").integers(0, len(boundary), k)
    b1, b2 = boundary[pi], boundary[pj]
    # structured pairs: sort along a random projection and pair at strides,
    # which makes points on a common boundary flat likely partners
    u = stream.substream(f"sortdir-{r}").directions(1, f.dim)[0]
    sub = boundary if len(boundary) <= 2048 else \
        boundary[stream.substream(f"sortsub-{r}").integers(0, len(boundary), 2048)]
    order = np.argsort(sub @ u)
    Bs = sub[order]
    extra1, extra2 = [], []
    for stride in (1, 3, 7, max(1, len(Bs) // 16)):
        if stride < len(Bs):
            extra1.append(Bs[:-stride])
            extra2.append(Bs[stride:])
    if extra1:
        b1 = np.concatenate([b1] + extra1)
        b2 = np.concatenate([b2] + extra2)
    sep = rel_sep(b1, b2)
    distinct = np.linalg.norm(b1 - b2, axis=1) >= tol.eps_eq * (
        1.0 + np.linalg.norm(b1, axis=1) + np.linalg.norm(b2, axis=1))
    keep = distinct & (sep >= SEP_FLOOR)
    if not np.any(keep):
        return supported(note=f"level {r:.6g}: boundary has no eps-distinct pairs")
    b1, b2, sep = b1[keep], b2[keep], sep[keep]
    mids = 0.5 * (b1 + b2)
    member = member_fn(mids)
    dom = f.in_domain(mids)
    fmid = np.full(len(mids), np.nan)
    if np.any(dom):
        fmid[dom] = f.eval(mids[dom])

    thr = tol.eps_strict * np.minimum(1.0, sep ** 2) * (1.0 + abs(r))
    sitting = dom & member & (np.abs(fmid - r) <= thr)
    escaped = ~member
    # midpoints on a *domain*-boundary flat keep f well below r, so also
    # flag members with a non-member within eps_eq in a random direction
    u = stream.substream(f"probe-{r}").directions(len(mids), f.dim)
    radius = (tol.eps_eq * (1.0 + np.linalg.norm(mids, axis=1)))[:, None]
    near_boundary = member & (~member_fn(mids + radius * u) | ~member_fn(mids - radius * u))
    candidates = sitting | escaped | near_boundary
    effort = len(mids) * 4
    if np.any(candidates):
        idx = np.where(candidates)[0]
        interior, _ = midpoint_interior_check(member_fn, mids[idx], tol)
        confirmed = idx[~interior]
        effort += len(idx) * (2 * f.dim + 1)
        if len(confirmed):
            i = int(confirmed[0])
            return falsified(
                {"x": b1[i], "y": b2[i], "midpoint": mids[i], "level": float(r),
                 "f_mid": None if math.isnan(fmid[i]) else float(fmid[i])},
                effort=effort,
                note=f"level {r:.6g}: boundary chord midpoint is not interior",
            )
    depth = np.where(dom & member, (r - fmid) / (1.0 + abs(r)), np.nan)
    finite = depth[np.isfinite(depth)]
    return supported(effort=effort,
                     margin=float(np.min(finite)) if finite.size else None)


def test_strictly_sub_convex(f: HomogeneousFunctionSpec, n_samples: int,
                             stream: SampleStream, tol: ToleranceProfile = DEFAULT_TOL,
                             extra_levels: Sequence[float] = ()) -> Verdict:
    """Strict convexity of the sublevel sets.

    Levels probed: positive quantiles of observed values, level 0, one
    negative level (an observed negative quantile when values go negative),
    plus any ``extra_levels``.  Per level, boundary points located by radial
    scaling (homogeneous) or chord bisection are paired; their midpoints
    must clear the interior checks.  Empty and singleton sublevels hold by
    definition.
    """
    samples, _ = _domain_points(f, max(512, min(n_samples, 8192)),
                                stream.substream("samples"), tol)
    if len(samples) == 0:
        return inconclusive("could not sample the domain")
    vals = f.eval(samples)
    levels = [0.0]
    pos = vals[vals > tol.eps_strict]
    if pos.size:
        levels.extend(np.unique(np.quantile(pos, [0.3, 0.6, 0.9])).tolist())
    neg = vals[vals < -tol.eps_strict]
    if neg.size:
        levels.append(float(np.quantile(neg, 0.5)))
    else:
        levels.append(-(1.0 + float(np.median(np.abs(vals)))))
    levels.extend(float(r) for r in extra_levels)
    per_level = max(16, n_samples // len(levels))
    parts = [
        _strict_level_verdict(f, r, samples, vals, stream, tol, per_level)
        for r in sorted(set(levels))
    ]
    solid = [p for p in parts if p.status != INCONCLUSIVE]
    return combine_verdicts(solid if solid else parts)


# norm-level criteria -----------------------------------------------------------


def _sign_vector_pairs(dim: int):
    """Pairs of sign vectors differing in one coordinate: axis-aligned chords
    across the faces of cube-like unit balls."""
    if dim > 6:
        return np.empty((0, dim)), np.empty((0, dim))
    base = np.array(np.meshgrid(*([[-1.0, 1.0]] * dim))).T.reshape(-1, dim)
    A, B = [], []
    for v in base:
        for j in range(dim):
            w = v.copy()
            w[j] = -w[j]
            A.append(v)
            B.append(w)
    return np.array(A), np.array(B)


def _structured_direction_pairs(n: MinkowskiNormSpec):
    d = n.dim
    eye = np.eye(d)
    A = [eye[i] for i in range(d) for j in range(d) if i != j]
    B = [eye[j] for i in range(d) for j in range(d) if i != j]
    A += [eye[i] for i in range(d) for j in range(d) if i != j]
    B += [-eye[j] for i in range(d) for j in range(d) if i != j]
    if not A:  # dim = 1
        A, B = [eye[0]], [-eye[0]]
    A, B = np.array(A), np.array(B)
    SA, SB = _sign_vector_pairs(d)
    if len(SA):
        A = np.concatenate([A, SA])
        B = np.concatenate([B, SB])
    if n.family == "polyhedral":
        V = n.params["vertices"]
        A = np.concatenate([A, V])
        B = np.concatenate([B, np.roll(V, 1, axis=0)])
    return A, B


def midpoint_criterion(n: MinkowskiNormSpec, n_pairs: int, stream: SampleStream,
                       tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Rotundity via midpoints: N((x+y)/2) < 1 for distinct unit vectors x, y.

    Sampled direction pairs are normalized onto the unit sphere of N;
    structured probes (basis pairs, cube sign pairs, adjacent polytope
    vertices) are always included since flat faces hide from random chords.
    Built-in families report Proven per their analytic class.
    """
    if n_pairs < 1:
        raise InputError("n_pairs must be >= 1")
    U = stream.directions(max(8, n_pairs), n.dim)
    V = stream.directions(max(8, n_pairs), n.dim)
    SA, SB = _structured_direction_pairs(n)
    U = np.concatenate([SA, U])
    V = np.concatenate([SB, V])
    NU = n.evaluator(U)
    NV = n.evaluator(V)
    if np.any(NU < tol.eps_strict) or np.any(NV < tol.eps_strict):
        alldirs = np.concatenate([U, V])
        allvals = np.concatenate([NU, NV])
        raise PointSeparationError(alldirs[int(np.argmin(allvals))])
    X = U / NU[:, None]
    Y = V / NV[:, None]
    sep = rel_sep(X, Y)
    distinct = np.linalg.norm(X - Y, axis=1) >= tol.eps_eq * (
        1.0 + np.linalg.norm(X, axis=1) + np.linalg.norm(Y, axis=1))
    keep = distinct & (sep >= SEP_FLOOR)
    effort = 2 * len(U)
    if not np.any(keep):
        return inconclusive("no eps-distinct normalized pairs", effort=effort)
    X, Y, sep = X[keep], Y[keep], sep[keep]
    Nmid = n.evaluator(0.5 * (X + Y))
    effort += len(X)
    thr = 0.25 * tol.eps_strict * np.minimum(1.0, sep ** 2)
    flat = Nmid >= 1.0 - thr
    margin = float(np.min(1.0 - Nmid))
    analytic = n.analytic_class
    if np.any(flat):
        i = int(np.argmax(Nmid))
        return falsified({"x": X[i], "y": Y[i], "n_mid": float(Nmid[i])},
                         effort=effort, margin=margin)
    if analytic is not None and analytic.get("rotund"):
        return proven(effort=effort, margin=margin)
    if analytic is not None and not analytic.get("rotund"):
        return inconclusive(
            "analytic class says non-rotund but probes found no flat chord",
            effort=effort)
    return supported(effort=effort, margin=margin)


def rotundity_equivalence_check(n: MinkowskiNormSpec, n_samples: int,
                                stream: SampleStream,
                                tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Cross-check the four equivalent rotundity statements on shared samples:

    strict subadditivity off collinear pairs, the midpoint criterion, some-s
    strictness, and all-t strictness.  The four must classify the norm the
    same way; any disagreement on the shared evidence is reported as an
    equivalence-violation diagnostic (for a correct implementation that
    points at a tolerance artifact).
    """
    U = stream.directions(max(8, n_samples), n.dim)
    V = stream.directions(max(8, n_samples), n.dim)
    SA, SB = _structured_direction_pairs(n)
    U = np.concatenate([SA, U])
    V = np.concatenate([SB, V])
    NU, NV = n.evaluator(U), n.evaluator(V)
    if np.any(NU < tol.eps_strict) or np.any(NV < tol.eps_strict):
        raise PointSeparationError(U[int(np.argmin(NU))])
    X, Y = U / NU[:, None], V / NV[:, None]
    sep = rel_sep(X, Y)
    dots = np.abs(np.einsum("ij,ij->i", X, Y))
    lens = np.linalg.norm(X, axis=1) * np.linalg.norm(Y, axis=1)
    collinear = np.abs(dots - lens) <= tol.eps_eq * (1.0 + lens)
    keep = sep >= SEP_FLOOR
    X, Y, sep, collinear = X[keep], Y[keep], sep[keep], collinear[keep]
    if len(X) == 0:
        return inconclusive("no usable pairs")
    thr = tol.eps_strict * np.minimum(1.0, sep ** 2)
    effort = 2 * len(U)

    NS = n.evaluator(X + Y)
    p1_flat = ~collinear & ((2.0 - NS) <= thr)  # N(x) = N(y) = 1 here
    Nmid = n.evaluator(0.5 * (X + Y))
    p2_flat = Nmid >= 1.0 - 0.25 * thr
    grid = np.linspace(0.1, 0.9, 9)
    chord_flat = np.zeros((len(X), len(grid)), dtype=bool)
    for k, s in enumerate(grid):
        Nc = n.evaluator((1.0 - s) * X + s * Y)
        chord_flat[:, k] = Nc >= 1.0 - s * (1.0 - s) * thr
    p3_flat = np.all(chord_flat, axis=1)  # no s gives a strict chord point
    p4_flat = np.any(chord_flat, axis=1)  # some t fails strictness
    effort += len(X) * (2 + len(grid))

    found = [bool(np.any(p1_flat)), bool(np.any(p2_flat)),
             bool(np.any(p3_flat)), bool(np.any(p4_flat))]
    if all(found) or not any(found):
        note = "not rotund on shared samples" if found[1] else "rotund on shared samples"
        if any(found):
            i = int(np.argmax(p2_flat))
            return supported(effort=effort, note=note, witness={"x": X[i], "y": Y[i]})
        return supported(effort=effort, note=note)
    i = int(np.argmax(p1_flat | p2_flat | p3_flat | p4_flat))
    return falsified(
        {"x": X[i], "y": Y[i], "properties": found},
        effort=effort,
        note="rotundity equivalence diagnostic: the four criteria disagree on shared samples",
    )


# continuity and zero-set probes --------------------------------------------------


def continuity_verdict(f: HomogeneousFunctionSpec, n_samples: int, stream: SampleStream,
                       tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Local-oscillation continuity probe (Proven for closed-form specs).

    Oscillation of f is sampled over shrinking neighbourhoods at domain
    points including the origin when admissible; approach sets include
    quadratic axis paths (x + h^2 e_i + h e_j), which catch discontinuities
    invisible along every straight ray.  A probe, not a decision procedure.
    """
    if f.continuity == "proven":
        return proven(note="closed-form continuity")
    pts, _ = _domain_points(f, 12, stream.substream("cont-base"), tol)
    if f.domain is None or f.domain.contains_point(np.zeros(f.dim)):
        origin = np.zeros((1, f.dim))
        pts = np.concatenate([origin, pts]) if len(pts) else origin
    if len(pts) == 0:
        return inconclusive("could not sample the domain")
    d = f.dim
    eye = np.eye(d)
    base_dirs = np.concatenate([eye, -eye, stream.substream("cont-dirs").directions(8, d)])
    quad = []
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    quad.append((si, i, sj, j))
    worst = None
    effort = 0
    final_osc = 0.0
    for x in pts:
        fx = f.eval_point(x)
        scale = 1.0 + abs(fx)
        last = None
        for h in (2.0 ** -k for k in (6, 9, 12, 15)):
            P = [x[None, :] + h * base_dirs]
            for (si, i, sj, j) in quad:
                P.append((x + si * h * h * eye[i] + sj * h * eye[j])[None, :])
            P = np.concatenate(P)
            mask = f.in_domain(P)
            if not np.any(mask):
                continue
            vals = f.eval(P[mask])
            dev = np.abs(vals - fx)
            last = float(np.max(dev)) / scale
            effort += int(np.sum(mask))
            if last >= 1e-2 and h <= 2.0 ** -15:
                ib = int(np.argmax(dev))
                worst = {"x": x, "probe": P[mask][ib], "f_x": fx,
                         "f_probe": float(vals[ib])}
        if last is not None:
            final_osc = max(final_osc, last)
    if worst is not None:
        return falsified(worst, effort=effort, note="oscillation does not vanish")
    if final_osc <= 1e-4:
        return supported(effort=effort, margin=float(final_osc))
    return inconclusive(f"oscillation probe ambiguous (final {final_osc:.3g})", effort=effort)


def zero_set_verdict(f: HomogeneousFunctionSpec, n_samples: int, stream: SampleStream,
                     tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Probe of f^-1(0) within {0}: f >= eps_strict on sampled unit directions."""
    if f.domain is None:
        dirs = np.concatenate([np.eye(f.dim), -np.eye(f.dim),
                               stream.directions(max(8, n_samples), f.dim)])
    else:
        pts, _ = _domain_points(f, max(8, n_samples), stream, tol)
        norms = np.linalg.norm(pts, axis=1)
        pts = pts[norms > 0.0]
        if len(pts) == 0:
            return inconclusive("could not sample unit directions of the domain")
        dirs = pts / np.linalg.norm(pts, axis=1)[:, None]
        dirs = dirs[f.in_domain(dirs)]
        if len(dirs) == 0:
            return inconclusive("domain has no unit-sphere points among probes")
    vals = f.eval(dirs)
    effort = len(dirs)
    if np.any(vals < tol.eps_strict):
        i = int(np.argmin(vals))
        return falsified({"direction": dirs[i], "value": float(vals[i])}, effort=effort,
                         note="f vanishes away from the origin")
    if f.domain is None or f.domain.contains_point(np.zeros(f.dim)):
        f0 = f.eval_point(np.zeros(f.dim))
        if abs(f0) > tol.eps_eq:
            return falsified({"direction": np.zeros(f.dim), "value": f0}, effort=effort + 1,
                             note="f(0) is not 0")
    return supported(effort=effort, margin=float(np.min(vals)))


# harnesses -----------------------------------------------------------------------


def _vb(v: Verdict) -> Optional[bool]:
    return None if v.status == INCONCLUSIVE else v.ok


def main_equivalence_harness(f: HomogeneousFunctionSpec, alphas: Sequence[float],
                             n_samples: int, stream: SampleStream,
                             tol: ToleranceProfile = DEFAULT_TOL) -> dict:
    """Three-way characterization for degree-1 non-negative whole-space functions:

    (1) continuity plus strict convexity of every f^alpha, (2) continuity
    plus strict quasi-convexity, (3) strict sub-convexity plus a trivial
    zero set.  The three booleans must agree.
    """
    if f.domain is not None:
        raise InputError("main harness needs a whole-space function; see cone_equivalence_harness")
    if f.degree is None or abs(f.degree - 1.0) > tol.eps_eq:
        raise InputError("main harness needs a declared degree-1 function")
    if any(a <= 1.0 for a in alphas):
        raise InputError("harness exponents must exceed 1")
    cont = continuity_verdict(f, n_samples, stream.substream("continuity"), tol)
    groups = _cached_chord_groups(f, n_samples, stream.substream("chords"), tol)
    if groups is None:
        missing = inconclusive("could not sample the domain")
        scans, sqc = {}, missing
        sc = [missing]
    else:
        scans = _power_scans(groups, alphas, tol)
        sc = list(scans.values())
        sqc = _scan_groups(groups, tol, _rhs_max)
    cond1 = combine_verdicts([cont] + sc)
    cond2 = combine_verdicts([cont, sqc])
    ssc = test_strictly_sub_convex(f, n_samples, stream.substream("ssc"), tol)
    zs = zero_set_verdict(f, n_samples, stream.substream("zero"), tol)
    cond3 = combine_verdicts([ssc, zs])
    b = [_vb(cond1), _vb(cond2), _vb(cond3)]
    agree = None if any(x is None for x in b) else (b[0] == b[1] == b[2])
    return {
        "cond1": cond1, "cond2": cond2, "cond3": cond3,
        "bools": b, "agree": agree, "alphas": list(alphas),
        "parts": {"continuity": cont, "strictly_convex_powers": scans,
                  "strictly_quasi_convex": sqc, "strictly_sub_convex": ssc,
                  "zero_set": zs},
    }


def cone_equivalence_harness(f: HomogeneousFunctionSpec, alphas: Sequence[float],
                             n_samples: int, stream: SampleStream,
                             tol: ToleranceProfile = DEFAULT_TOL) -> dict:
    """The same three conditions for a function on a cone domain.

    The zero-set condition weakens to the inclusion f^-1(0) within {0}.
    Agreement is asserted only when the domain cone passes the
    strict-convexity probe; on other cones the three verdicts are reported
    without an agreement claim, since they can genuinely differ there.
    """
    if f.domain is None:
        raise InputError("cone harness needs an explicit cone domain")
    if "cone" not in f.domain.flags:
        raise InputError("domain oracle must be flagged as a cone")
    cont = continuity_verdict(f, n_samples, stream.substream("continuity"), tol)
    groups = _cached_chord_groups(f, n_samples, stream.substream("chords"), tol)
    if groups is None:
        missing = inconclusive("could not sample the domain")
        scans, sqc = {}, missing
        sc = [missing]
    else:
        scans = _power_scans(groups, alphas, tol)
        sc = list(scans.values())
        sqc = _scan_groups(groups, tol, _rhs_max)
    cond1 = combine_verdicts([cont] + sc)
    cond2 = combine_verdicts([cont, sqc])
    ssc = test_strictly_sub_convex(f, n_samples, stream.substream("ssc"), tol)
    zs = zero_set_verdict(f, n_samples, stream.substream("zero"), tol)
    cond3 = combine_verdicts([ssc, zs])
    domain_sc = probe_strictly_convex(f.domain, max(64, n_samples // 8),
                                      stream.substream("domain-sc"), tol)
    b = [_vb(cond1), _vb(cond2), _vb(cond3)]
    if domain_sc.ok and not any(x is None for x in b):
        agree = b[0] == b[1] == b[2]
    else:
        agree = None  # not asserted on non-strictly-convex cones
    return {
        "cond1": cond1, "cond2": cond2, "cond3": cond3,
        "bools": b, "agree": agree, "alphas": list(alphas),
        "domain_strictly_convex": domain_sc,
        "parts": {"continuity": cont, "strictly_convex_powers": scans,
                  "strictly_quasi_convex": sqc, "strictly_sub_convex": ssc,
                  "zero_set": zs},
    }


# composition ---------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarTransform:
    """A scalar post-composition phi with declared monotonicity/semi-continuity.

    ``level_hints`` are extra sublevel levels worth probing in compositions,
    typically the (possibly unattained) supremum of phi: sublevels at such
    levels are exactly where strictness collapses to the whole domain.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    non_decreasing: bool = True
    lower_semicontinuous: bool = True
    name: str = ""
    level_hints: tuple = ()

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=np.float64))


def composition_check(f: HomogeneousFunctionSpec, phi: ScalarTransform, n_samples: int,
                      stream: SampleStream, tol: ToleranceProfile = DEFAULT_TOL,
                      strict: bool = True) -> Verdict:
    """Build g = phi(f) and test its (strict) sub-convexity.

    phi's declared monotonicity is probed on the observed range of f first;
    a failure there is an input error, not a falsification of g.
    """
    if not phi.non_decreasing:
        raise InputError("composition_check requires a non-decreasing transform")
    pts, _ = _domain_points(f, 256, stream.substream("phi-probe"), tol)
    if len(pts):
        ts = np.sort(f.eval(pts))
        ys = phi(ts)
        drops = np.diff(ys) < -tol.eps_eq * (1.0 + np.abs(ys[:-1]))
        if np.any(drops):
            i = int(np.argmax(drops))
            raise InputError(
                f"transform is not non-decreasing: phi({ts[i]:.6g})={ys[i]:.6g} > "
                f"phi({ts[i + 1]:.6g})={ys[i + 1]:.6g}")

    g = HomogeneousFunctionSpec(
        f.dim, lambda X: phi(f.eval(X)), f.domain, None, "probe", None,
        f"{phi.name or 'phi'}({f.name or 'f'})",
    )
    if strict:
        return test_strictly_sub_convex(g, n_samples, stream.substream("g"), tol,
                                        extra_levels=phi.level_hints)
    return test_sub_convex(g, n_samples, stream.substream("g"), tol)


# taxonomy ------------------------------------------------------------------------


@dataclass
class TaxonomyReport:
    """Verdicts for the six taxonomy properties plus the zero-set probe."""

    convex: Verdict
    strictly_convex: Verdict
    quasi_convex: Verdict
    strictly_quasi_convex: Verdict
    sub_convex: Verdict
    strictly_sub_convex: Verdict
    zero_set_trivial: Verdict

    _FIELDS = ("convex", "strictly_convex", "quasi_convex", "strictly_quasi_convex",
               "sub_convex", "strictly_sub_convex", "zero_set_trivial")

    def to_dict(self):
        return {k: getattr(self, k).to_dict() for k in self._FIELDS}

    def implication_violations(self):
        """Pairs (stronger, weaker) where a Supported stronger property sits
        next to a Falsified weaker one; any entry is a certifier bug."""
        chain = [
            ("strictly_convex", "convex"),
            ("strictly_convex", "strictly_quasi_convex"),
            ("convex", "quasi_convex"),
            ("convex", "sub_convex"),
            ("strictly_quasi_convex", "quasi_convex"),
            ("sub_convex", "quasi_convex"),
            ("quasi_convex", "sub_convex"),
        ]
        bad = []
        for strong, weak in chain:
            vs, vw = getattr(self, strong), getattr(self, weak)
            if vs.ok and vw.status == FALSIFIED:
                bad.append((strong, weak))
        return bad


def taxonomy(f: HomogeneousFunctionSpec, n_samples: int, stream: SampleStream,
             tol: ToleranceProfile = DEFAULT_TOL) -> TaxonomyReport:
    """Run all six taxonomy certifiers on independent substreams."""
    return TaxonomyReport(
        convex=test_convex(f, n_samples, stream.substream("c"), tol),
        strictly_convex=test_strictly_convex(f, n_samples, stream.substream("sc"), tol),
        quasi_convex=test_quasi_convex(f, n_samples, stream.substream("qc"), tol),
        strictly_quasi_convex=test_strictly_quasi_convex(
            f, n_samples, stream.substream("sqc"), tol),
        sub_convex=test_sub_convex(f, n_samples, stream.substream("sb"), tol),
        strictly_sub_convex=test_strictly_sub_convex(
            f, n_samples, stream.substream("ssb"), tol),
        zero_set_trivial=zero_set_verdict(f, n_samples, stream.substream("z"), tol),
    )
