"""Membership oracles for subsets of R^n and their hull/absorption operations.

An oracle is a pure batched predicate plus structural metadata.  Hull
membership is decided by radial search: a geometric grid of scalings
(ratio sqrt(2)) locates a member, and bisection then refines the witness
scalar toward the minimal one.  Unbounded searches truncate at
``max_bracket``, so a negative answer is always Supported, never Proven.

Thin sets (rays, singletons) defeat blind radial search; oracles may carry
``seed_points`` (known members) which the searches always probe, including
exact collinearity witnesses along seed rays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import (
    DEFAULT_TOL,
    InputError,
    SampleStream,
    ToleranceProfile,
    Verdict,
    as_points,
    as_vector,
    falsified,
    inconclusive,
    proven,
    supported,
)

KNOWN_FLAGS = frozenset({"star_shaped", "cone", "convex", "contains_origin", "bounded"})

STAR_HULL = "star_hull"
POINTED_CONE = "pointed_cone"
BLUNT_CONE = "blunt_cone"
HULL_KINDS = (STAR_HULL, POINTED_CONE, BLUNT_CONE)

# Relative separation below which a pair of points carries no strictness
# information at double precision; strictness tests skip closer pairs.
SEP_FLOOR = 1e-2


@dataclass(frozen=True)
class SetOracle:
    """A subset of R^dim given by a pure batched membership predicate.

    ``contains`` maps an (n, dim) array to an (n,) boolean array and must be
    deterministic.  Flags record *claimed* structure (star_shaped, cone,
    convex, contains_origin, bounded); probes exist to stress those claims.
    ``outer_radius``/``inner_radius`` bound the set between Euclidean balls
    when known.  ``seed_points`` are known members used to seed searches on
    thin sets.
    """

    dim: int
    contains: Callable[[np.ndarray], np.ndarray]
    flags: frozenset = frozenset()
    outer_radius: Optional[float] = None
    inner_radius: Optional[float] = None
    seed_points: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("oracle dimension must be >= 1")
        unknown = set(self.flags) - KNOWN_FLAGS
        if unknown:
            raise InputError(f"unknown oracle flags: {sorted(unknown)}")
        if "bounded" in self.flags and self.outer_radius is None:
            raise InputError("bounded oracles must declare outer_radius")
        if self.seed_points is not None:
            object.__setattr__(self, "seed_points", as_points(self.seed_points, self.dim))
        if "contains_origin" in self.flags and not self.contains_point(np.zeros(self.dim)):
            raise InputError("contains_origin flagged but contains(0) is false")

    @classmethod
    def from_predicate(cls, dim, predicate, flags=(), vectorized=True, **kw):
        """Wrap a predicate; set vectorized=False for one-point-at-a-time callables."""
        if vectorized:
            fn = predicate
        else:
            def fn(P):
                P = as_points(P, dim)
                return np.fromiter((bool(predicate(p)) for p in P), dtype=bool, count=len(P))

        return cls(dim=dim, contains=fn, flags=frozenset(flags), **kw)

    def contains_points(self, P) -> np.ndarray:
        P = as_points(P, self.dim)
        out = np.asarray(self.contains(P), dtype=bool)
        if out.shape != (len(P),):
            raise InputError("oracle predicate returned a mis-shaped mask")
        return out

    def contains_point(self, x) -> bool:
        return bool(self.contains_points(as_vector(x, self.dim)[None, :])[0])

    def with_flags(self, *extra) -> "SetOracle":
        return SetOracle(
            self.dim, self.contains, frozenset(self.flags) | set(extra),
            self.outer_radius, self.inner_radius, self.seed_points,
        )


def rel_sep(X, Y) -> np.ndarray:
    """Separation of point pairs relative to their scale."""
    X = np.atleast_2d(X)
    Y = np.atleast_2d(Y)
    d = np.linalg.norm(X - Y, axis=1)
    return d / (1.0 + np.linalg.norm(X, axis=1) + np.linalg.norm(Y, axis=1))


def _scaling_grid(tol: ToleranceProfile, downward: bool) -> np.ndarray:
    """Geometric grid of scalings, ratio sqrt(2), from 1 out to max_bracket."""
    kmax = int(math.ceil(2.0 * math.log2(tol.max_bracket)))
    ks = np.arange(0, kmax + 1, dtype=np.float64)
    up = np.power(2.0, ks / 2.0)
    if not downward:
        return up
    down = np.power(2.0, -ks[1:] / 2.0)
    out = np.empty(up.size + down.size)
    out[0::2] = up
    out[1::2] = down  # interleave so small and large scales are probed early
    return out


def _seed_ray_scalar(s: SetOracle, x: np.ndarray, tol: ToleranceProfile):
    """If x lies on a ray through a seed point, return c with x = c * seed."""
    if s.seed_points is None or len(s.seed_points) == 0:
        return None
    nx = np.linalg.norm(x)
    for seed in s.seed_points:
        ns = np.linalg.norm(seed)
        if ns <= 0.0 or nx <= 0.0:
            continue
        dot = float(np.dot(x, seed))
        if dot <= 0.0:
            continue
        if abs(dot - nx * ns) <= tol.eps_eq * (1.0 + nx * ns):
            return nx / ns
    return None


def _refine_min_scalar(member, lo, hi, tol: ToleranceProfile):
    """Shrink toward the minimal feasible scalar in (lo, hi], hi feasible."""
    for _ in range(tol.max_iter):
        if hi - lo <= tol.eps_bisect * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if member(mid):
            hi = mid
        else:
            lo = mid
    return hi


def hull_contains(s: SetOracle, kind: str, x, tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Membership of x in the star-shaped hull or the pointed/blunt conic hull of S.

    A true answer is exact: the verdict is Proven and carries the witness
    scalar (mu with mu*x in S for the star hull, lambda with x/lambda in S
    for conic hulls), refined toward the minimal one when the feasible set is
    an interval.  A false answer is Supported at the search effort.
    """
    if kind not in HULL_KINDS:
        raise InputError(f"unknown hull kind {kind!r}")
    x = as_vector(x, s.dim)
    nx = float(np.linalg.norm(x))
    effort = 0

    if nx == 0.0:
        if kind == BLUNT_CONE:
            return supported(note="blunt cones exclude the origin", effort=1)
        nonempty, eff = _probe_nonempty(s, tol)
        effort += eff
        if kind == POINTED_CONE:
            return proven(witness={"scalar": None, "note": "origin"}, effort=effort)
        if nonempty:
            return proven(witness={"scalar": 0.0, "note": "origin; S is non-empty"}, effort=effort)
        return supported(note="no member of S found; empty star hull excludes 0", effort=effort)

    # exact witnesses along seed rays
    c = _seed_ray_scalar(s, x, tol)
    if c is not None and c > 0.0:
        if kind == STAR_HULL and c <= 1.0 + tol.eps_eq:
            mu = 1.0 / c
            if s.contains_point(mu * x):
                return proven(witness={"scalar": mu}, effort=1)
        if kind in (POINTED_CONE, BLUNT_CONE) and s.contains_point(x / c):
            return proven(witness={"scalar": c}, effort=1)

    if kind == STAR_HULL:
        grid = _scaling_grid(tol, downward=False)  # mu >= 1
        member = lambda mu: s.contains_point(mu * x)
    else:
        grid = _scaling_grid(tol, downward=True)  # lambda > 0 both ways
        member = lambda lam: s.contains_point(x / lam)

    probes = np.stack([g * x for g in grid]) if kind == STAR_HULL else np.stack([x / g for g in grid])
    hits = s.contains_points(probes)
    effort += len(grid)
    if not np.any(hits):
        return supported(note="radial search exhausted", effort=effort)

    i = int(np.argmax(hits))
    scalar = float(grid[i])
    # refine toward the minimal witness when the previous grid point failed
    lo = None
    if kind == STAR_HULL:
        lo = float(grid[i - 1]) if i > 0 else None
    else:
        smaller = grid[grid < scalar]
        if smaller.size:
            prev = float(np.max(smaller))
            lo = prev if not hits[np.where(grid == prev)[0][0]] else None
    if lo is not None:
        scalar = _refine_min_scalar(member, lo, scalar, tol)
        effort += tol.max_iter
    return proven(witness={"scalar": scalar}, effort=effort)


def _probe_nonempty(s: SetOracle, tol: ToleranceProfile):
    if s.seed_points is not None and len(s.seed_points):
        if np.any(s.contains_points(s.seed_points)):
            return True, 1
    if s.contains_point(np.zeros(s.dim)):
        return True, 1
    stream = SampleStream(0x5E7, 0)
    pts = _ambient_points(s, 256, stream)
    return bool(np.any(s.contains_points(pts))), 257


def absorbs(s: SetOracle, x, tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Does S absorb x, i.e. does x lie in lambda*S for some lambda > 0?

    For x = 0 this reduces to membership of the origin in S; otherwise it is
    blunt-conic-hull membership, witnessed by the scalar lambda.
    """
    x = as_vector(x, s.dim)
    if float(np.linalg.norm(x)) == 0.0:
        if s.contains_point(x):
            return proven(witness={"scalar": 1.0, "note": "0 in S"}, effort=1)
        return supported(note="S does not contain the origin, so it does not absorb 0", effort=1)
    return hull_contains(s, BLUNT_CONE, x, tol)


def _ambient_points(s: SetOracle, n: int, stream: SampleStream) -> np.ndarray:
    """Candidate points: direction x log-uniform radius, adapted to radius hints."""
    dirs = stream.directions(n, s.dim)
    if s.outer_radius is not None:
        radii = stream.uniform(0.0, 1.0, n) ** (1.0 / s.dim) * s.outer_radius * 1.25
    else:
        lo = s.inner_radius * 1e-2 if s.inner_radius else 2.0 ** -10
        radii = stream.log_uniform(lo, 2.0 ** 10, n)
    return dirs * radii[:, None]


def sample_members(s: SetOracle, n: int, stream: SampleStream, tol: ToleranceProfile = DEFAULT_TOL,
                   rounds: int = 8):
    """Up to n members of S: rejection over ambient candidates plus seed rays.

    Returns (members, effort); members may be empty when the oracle is too
    thin for blind sampling and carries no seeds.
    """
    chunks = []
    effort = 0
    if s.seed_points is not None and len(s.seed_points):
        mask = s.contains_points(s.seed_points)
        effort += len(mask)
        seeds = s.seed_points[mask]
        if len(seeds):
            chunks.append(seeds)
            # walk each seed ray inward/outward for diversity
            ts = stream.log_uniform(2.0 ** -6, 2.0 ** 6, 8)
            ray = np.concatenate([t * seeds for t in ts])
            rmask = s.contains_points(ray)
            effort += len(ray)
            chunks.append(ray[rmask])
    for _ in range(rounds):
        have = sum(len(c) for c in chunks)
        if have >= n:
            break
        cand = _ambient_points(s, max(n, 64), stream)
        mask = s.contains_points(cand)
        effort += len(cand)
        chunks.append(cand[mask])
    if not chunks:
        return np.empty((0, s.dim)), effort
    members = np.concatenate(chunks)
    return members[:n], effort


def probe_star_shaped(s: SetOracle, n_samples: int, stream: SampleStream,
                      tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Stress the star-shape claim: t*x must stay in S for members x, t in [0,1]."""
    if n_samples < 1:
        raise InputError("n_samples must be >= 1")
    members, effort = sample_members(s, n_samples, stream, tol)
    if len(members) == 0:
        return inconclusive("could not sample S", effort=effort)
    idx = stream.integers(0, len(members), n_samples)
    xs = members[idx]
    ts = stream.uniform(0.0, 1.0, n_samples)
    pts = xs * ts[:, None]
    ok = s.contains_points(pts)
    effort += n_samples
    if np.all(ok):
        return supported(effort=effort)
    i = int(np.argmax(~ok))
    return falsified({"x": xs[i], "t": float(ts[i])}, effort=effort)


def probe_cone(s: SetOracle, n_samples: int, stream: SampleStream,
               tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Stress the cone claim: lambda*x must stay in S for members x, lambda > 0."""
    if n_samples < 1:
        raise InputError("n_samples must be >= 1")
    members, effort = sample_members(s, n_samples, stream, tol)
    if len(members) == 0:
        return inconclusive("could not sample S", effort=effort)
    idx = stream.integers(0, len(members), n_samples)
    xs = members[idx]
    lams = stream.log_uniform(1.0 / tol.max_bracket, tol.max_bracket, n_samples)
    pts = xs * lams[:, None]
    ok = s.contains_points(pts)
    effort += n_samples
    if np.all(ok):
        return supported(effort=effort)
    i = int(np.argmax(~ok))
    return falsified({"x": xs[i], "lambda": float(lams[i])}, effort=effort)


def hull_oracle(s: SetOracle, kind: str, tol: ToleranceProfile = DEFAULT_TOL) -> SetOracle:
    """The hull of S as a new oracle (membership by batched radial grid scan)."""
    if kind not in HULL_KINDS:
        raise InputError(f"unknown hull kind {kind!r}")
    grid = _scaling_grid(tol, downward=(kind != STAR_HULL))
    origin_member = None  # resolved lazily, cached

    def member(P):
        nonlocal origin_member
        P = as_points(P, s.dim)
        out = np.zeros(len(P), dtype=bool)
        norms = np.linalg.norm(P, axis=1)
        zero = norms == 0.0
        if np.any(zero):
            if kind == POINTED_CONE:
                out[zero] = True
            elif kind == STAR_HULL:
                if origin_member is None:
                    origin_member = _probe_nonempty(s, tol)[0]
                out[zero] = origin_member
        live = ~zero
        for g in grid:
            if not np.any(live):
                break
            probes = P[live] * g if kind == STAR_HULL else P[live] / g
            hit = s.contains_points(probes)
            li = np.where(live)[0]
            out[li[hit]] = True
            live[li[hit]] = False
        if s.seed_points is not None:
            for i in np.where(~out)[0]:
                if norms[i] == 0.0:
                    continue
                c = _seed_ray_scalar(s, P[i], tol)
                if c is None or c <= 0.0:
                    continue
                if kind == STAR_HULL and c <= 1.0 + tol.eps_eq:
                    out[i] = s.contains_point(P[i] / c)
                elif kind in (POINTED_CONE, BLUNT_CONE):
                    out[i] = s.contains_point(P[i] / c)
        return out

    if kind == STAR_HULL:
        flags = {"star_shaped"}
    elif kind == POINTED_CONE:
        flags = {"cone", "contains_origin"}
    else:
        flags = {"cone"}
    return SetOracle(
        dim=s.dim, contains=member, flags=frozenset(flags),
        outer_radius=s.outer_radius if kind == STAR_HULL else None,
        inner_radius=s.inner_radius, seed_points=s.seed_points,
    )


def affine_dimension(samples, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    """Dimension of the affine hull of the samples (rank of centered differences).

    Singular values below eps_eq times the largest count as zero.
    """
    X = as_points(samples)
    if len(X) == 0:
        raise InputError("affine_dimension needs at least one sample")
    if len(X) == 1:
        return 0
    diffs = X[1:] - X[0]
    sv = np.linalg.svd(diffs, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol.eps_eq * sv[0]))


def affine_summary(samples, tol: ToleranceProfile = DEFAULT_TOL) -> dict:
    """Affine dimension plus whether the origin sits on the affine fit.

    The sampled rank estimator cannot tell Aff from Vect when 0 is near
    Aff(S), so both facts are reported instead of guessed.
    """
    X = as_points(samples)
    dim = affine_dimension(X, tol)
    if len(X) == 1:
        resid = float(np.linalg.norm(X[0]))
    else:
        diffs = (X[1:] - X[0]).T
        sol, *_ = np.linalg.lstsq(diffs, -X[0], rcond=None)
        resid = float(np.linalg.norm(diffs @ sol + X[0]))
    scale = 1.0 + float(np.max(np.linalg.norm(X, axis=1)))
    origin_in_aff = resid <= tol.eps_eq * scale
    return {"dim": dim, "origin_in_aff": bool(origin_in_aff), "residual": resid}


def segment_boundary(member_fn, inside, outside, tol: ToleranceProfile = DEFAULT_TOL,
                     iters: int = 45):
    """Boundary points located by bisection along inside->outside segments.

    member_fn maps (n, d) points to a boolean mask.  Returns the bisected
    points (parameter midpoint of the final bracket, within ~eps_bisect of
    the true crossing for segments of unit-scale length).
    """
    A = as_points(inside)
    B = as_points(outside)
    if A.shape != B.shape:
        raise InputError("inside/outside arrays must pair up")
    lo = np.zeros(len(A))
    hi = np.ones(len(A))
    for _ in range(iters):
        t = 0.5 * (lo + hi)
        pts = A + t[:, None] * (B - A)
        m = np.asarray(member_fn(pts), dtype=bool)
        lo = np.where(m, t, lo)
        hi = np.where(m, hi, t)
    t = 0.5 * (lo + hi)
    return A + t[:, None] * (B - A)


def midpoint_interior_check(member_fn, mids, tol: ToleranceProfile = DEFAULT_TOL):
    """Full-dimensional interior probe: the 2*dim axis neighbours of each
    midpoint (radius eps_eq, scale-relative) must all be members.

    Returns (interior_mask, first_failing_probe_or_None).  This approximates
    'lies in the relative interior' for full-dimensional sets; properly
    lower-dimensional sets are out of scope.
    """
    M = as_points(mids)
    n, d = M.shape
    ok = np.asarray(member_fn(M), dtype=bool)
    radius = tol.eps_eq * (1.0 + np.linalg.norm(M, axis=1))
    witness = None
    for j in range(d):
        for sign in (1.0, -1.0):
            probes = M.copy()
            probes[:, j] += sign * radius
            good = np.asarray(member_fn(probes), dtype=bool)
            newly_bad = ok & ~good
            if witness is None and np.any(newly_bad):
                witness = probes[int(np.argmax(newly_bad))]
            ok &= good
    return ok, witness


def probe_strictly_convex(oracle: SetOracle, n_samples: int, stream: SampleStream,
                          tol: ToleranceProfile = DEFAULT_TOL) -> Verdict:
    """Boundary-chord probe of strict convexity of a set oracle.

    Locates boundary points by bisection along member->non-member segments,
    then requires midpoints of eps-distinct boundary pairs to pass the
    full-dimensional interior probe.  Empty-looking sets and sets with no
    reachable exterior are Supported by definition.
    """
    members, effort = sample_members(oracle, max(64, n_samples // 4), stream, tol)
    if len(members) == 0:
        return supported(note="no member found: empty set is strictly convex", effort=effort)
    ambient = _ambient_points(oracle, max(256, n_samples // 2), stream)
    mask = oracle.contains_points(ambient)
    effort += len(ambient)
    outsiders = ambient[~mask]
    if len(outsiders) == 0:
        return supported(note="no exterior point found at this effort", effort=effort)

    n_b = int(min(max(n_samples, 8), 4096))
    ii = stream.integers(0, len(members), n_b)
    jj = stream.integers(0, len(outsiders), n_b)
    boundary = segment_boundary(oracle.contains_points, members[ii], outsiders[jj], tol)
    effort += n_b * 45

    n_pairs = max(n_samples, 8)
    pi = stream.integers(0, len(boundary), n_pairs)
    pj = stream.integers(0, len(boundary), n_pairs)
    b1, b2 = boundary[pi], boundary[pj]
    seps = rel_sep(b1, b2)
    keep = seps >= SEP_FLOOR
    if not np.any(keep):
        return supported(note="no eps-distinct boundary pairs (trivial boundary)", effort=effort)
    b1, b2 = b1[keep], b2[keep]
    mids = 0.5 * (b1 + b2)
    interior, probe_witness = midpoint_interior_check(oracle.contains_points, mids, tol)
    effort += len(mids) * (2 * oracle.dim + 1)
    if np.all(interior):
        return supported(effort=effort, margin=float(np.min(rel_sep(b1, b2))))
    i = int(np.argmax(~interior))
    return falsified(
        {"x": b1[i], "y": b2[i], "midpoint": mids[i]},
        effort=effort,
        note="boundary chord midpoint fails the interior probe",
    )
