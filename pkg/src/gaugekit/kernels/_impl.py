"""Hot kernels, one source for both backends.

:func:`make_kernels` builds the kernel set under a decorator: ``numba.njit``
for the compiled backend, identity for the pure-numpy fallback.  The code is
loop-based and object-free so the two builds execute the same IEEE operations
and produce bit-identical results.

The central kernel is Wolfe's min-norm-point method for the distance from a
query point to the convex hull of a small vertex set.  The corral (active
affinely-independent subset) never exceeds d+2 points and its affine
least-norm subproblem is solved exactly by Gaussian elimination, so computed
projections are accurate to machine precision.  That accuracy is what lets
polytope gauges resolve boundary chords to ~1e-12.
"""

import numpy as np


def make_kernels(decorate, decorate_parallel=None, prange=range):
    """Build the kernel functions under the given decorators.

    ``decorate_parallel`` (defaulting to ``decorate``) wraps the batch
    kernels whose outer loop runs under ``prange``; every point writes only
    its own slot, so results are identical at any thread count.
    """
    if decorate_parallel is None:
        decorate_parallel = decorate

    @decorate
    def solve_linear(A, b):
        """Gaussian elimination with partial pivoting; returns (x, ok)."""
        n = A.shape[0]
        M = np.empty((n, n + 1), dtype=np.float64)
        for i in range(n):
            for j in range(n):
                M[i, j] = A[i, j]
            M[i, n] = b[i]
        for col in range(n):
            piv = col
            best = abs(M[col, col])
            for r in range(col + 1, n):
                v = abs(M[r, col])
                if v > best:
                    best = v
                    piv = r
            if best < 1e-300:
                return np.zeros(n, dtype=np.float64), False
            if piv != col:
                for j in range(col, n + 1):
                    tmp = M[col, j]
                    M[col, j] = M[piv, j]
                    M[piv, j] = tmp
            inv = 1.0 / M[col, col]
            for r in range(col + 1, n):
                f = M[r, col] * inv
                if f != 0.0:
                    for j in range(col, n + 1):
                        M[r, j] -= f * M[col, j]
        x = np.zeros(n, dtype=np.float64)
        for i in range(n - 1, -1, -1):
            s = M[i, n]
            for j in range(i + 1, n):
                s -= M[i, j] * x[j]
            x[i] = s / M[i, i]
        return x, True

    @decorate
    def affine_min_norm(P, idx, k):
        """Least-norm point of aff(P[idx[:k]]) as barycentric coordinates.

        Solves the bordered Gram system [[G, 1], [1^T, 0]] [b; nu] = [0; 1];
        a singular system gets one retry with a tiny ridge.
        """
        n = k + 1
        A = np.zeros((n, n), dtype=np.float64)
        rhs = np.zeros(n, dtype=np.float64)
        rhs[k] = 1.0
        scale = 0.0
        for a in range(k):
            pa = idx[a]
            for b in range(k):
                pb = idx[b]
                s = 0.0
                for j in range(P.shape[1]):
                    s += P[pa, j] * P[pb, j]
                A[a, b] = s
            if A[a, a] > scale:
                scale = A[a, a]
            A[a, k] = 1.0
            A[k, a] = 1.0
        x, ok = solve_linear(A, rhs)
        if not ok:
            ridge = 1e-13 * (scale + 1.0)
            for a in range(k):
                A[a, a] += ridge
            x, ok = solve_linear(A, rhs)
        return x[:k], ok

    @decorate
    def hull_project(V, q):
        """Distance and nearest point of conv(V) from q, via Wolfe's method."""
        m, d = V.shape
        P = np.empty((m, d), dtype=np.float64)
        for i in range(m):
            for j in range(d):
                P[i, j] = V[i, j] - q[j]

        best = 0
        bestn = np.inf
        for i in range(m):
            s = 0.0
            for j in range(d):
                s += P[i, j] * P[i, j]
            if s < bestn:
                bestn = s
                best = i

        cap = d + 3
        idx = np.empty(cap, dtype=np.int64)
        lam = np.empty(cap, dtype=np.float64)
        idx[0] = best
        lam[0] = 1.0
        k = 1
        y = np.empty(d, dtype=np.float64)
        for j in range(d):
            y[j] = P[best, j]

        max_outer = 16 * m + 64
        for _ in range(max_outer):
            yy = 0.0
            for j in range(d):
                yy += y[j] * y[j]
            jbest = -1
            vbest = np.inf
            for i in range(m):
                s = 0.0
                for j in range(d):
                    s += y[j] * P[i, j]
                if s < vbest:
                    vbest = s
                    jbest = i
            if vbest >= yy - 1e-14 * (yy + 1.0):
                break  # optimality gap closed
            already = False
            for a in range(k):
                if idx[a] == jbest:
                    already = True
            if already or k >= cap:
                break
            idx[k] = jbest
            lam[k] = 0.0
            k += 1

            # minor cycle: pull the affine minimizer back into the corral
            for _ in range(4 * cap):
                b, ok = affine_min_norm(P, idx, k)
                if not ok:
                    k -= 1
                    break
                neg = False
                for a in range(k):
                    if b[a] <= 1e-14:
                        neg = True
                if not neg:
                    for a in range(k):
                        lam[a] = b[a]
                    break
                theta = 1.0
                for a in range(k):
                    if b[a] <= 1e-14 and lam[a] - b[a] > 1e-300:
                        t = lam[a] / (lam[a] - b[a])
                        if t < theta:
                            theta = t
                kept = 0
                for a in range(k):
                    nl = (1.0 - theta) * lam[a] + theta * b[a]
                    if nl > 1e-14:
                        idx[kept] = idx[a]
                        lam[kept] = nl
                        kept += 1
                if kept == 0:
                    idx[0] = idx[k - 1]
                    lam[0] = 1.0
                    kept = 1
                k = kept
            for j in range(d):
                y[j] = 0.0
            for a in range(k):
                w = lam[a]
                p = idx[a]
                for j in range(d):
                    y[j] += w * P[p, j]

        dist = 0.0
        for j in range(d):
            dist += y[j] * y[j]
        dist = np.sqrt(dist)
        proj = np.empty(d, dtype=np.float64)
        for j in range(d):
            proj[j] = y[j] + q[j]
        return dist, proj

    @decorate_parallel
    def hull_distances(V, Q):
        """Distances from each row of Q to conv(V)."""
        n = Q.shape[0]
        out = np.empty(n, dtype=np.float64)
        for i in prange(n):
            dist, _ = hull_project(V, Q[i])
            out[i] = dist
        return out

    @decorate_parallel
    def hull_projections(V, Q):
        """Distances and nearest hull points for each row of Q."""
        n = Q.shape[0]
        d = Q.shape[1]
        dists = np.empty(n, dtype=np.float64)
        projs = np.empty((n, d), dtype=np.float64)
        for i in prange(n):
            dist, proj = hull_project(V, Q[i])
            dists[i] = dist
            for j in range(d):
                projs[i, j] = proj[j]
        return dists, projs

    @decorate_parallel
    def polytope_gauge(V, X, eps_bisect, max_iter):
        """Gauge of conv(V) (origin interior) at each row of X.

        Fuses the radial search that the gauge module performs through a
        hull-membership oracle: bracket the exit scale mu* = sup{mu : mu*x
        in hull} starting from the guaranteed-outside scale Rmax/|x|, bisect
        coarsely, then solve the exact ray/facet crossing from the projection
        of a just-outside probe and verify it; unverified points (rays out a
        degenerate feature) fall back to full-precision bisection.
        Membership uses the same tolerance as the batched oracle:
        dist <= 0.1 * eps_bisect * (1 + |q|).
        """
        n, d = X.shape
        m = V.shape[0]
        rmax = 0.0
        for i in range(m):
            s = 0.0
            for j in range(d):
                s += V[i, j] * V[i, j]
            if s > rmax:
                rmax = s
        rmax = np.sqrt(rmax)
        out = np.empty(n, dtype=np.float64)
        for i in prange(n):
            q = np.empty(d, dtype=np.float64)
            nx = 0.0
            for j in range(d):
                nx += X[i, j] * X[i, j]
            nx = np.sqrt(nx)
            if nx == 0.0:
                out[i] = 0.0
                continue
            # mu_hi * x lies on the sphere of radius rmax*(1+1e-9): outside
            mu_hi = (rmax / nx) * (1.0 + 1e-9)
            mu_lo = mu_hi
            member = False
            for _ in range(max_iter):
                mu_lo = 0.5 * mu_lo
                for j in range(d):
                    q[j] = mu_lo * X[i, j]
                dist, _ = hull_project(V, q)
                qn = mu_lo * nx
                if dist <= 0.1 * eps_bisect * (1.0 + qn):
                    member = True
                    break
            if not member:
                out[i] = np.inf  # no interior: caller validates against this
                continue
            # coarse bisection to ~1e-3 relative width
            for _ in range(max_iter):
                if mu_hi - mu_lo <= 1e-3 * mu_lo:
                    break
                mid = 0.5 * (mu_lo + mu_hi)
                for j in range(d):
                    q[j] = mid * X[i, j]
                dist, _ = hull_project(V, q)
                if dist <= 0.1 * eps_bisect * (1.0 + mid * nx):
                    mu_lo = mid
                else:
                    mu_hi = mid
            # polish: supporting hyperplane of the exit facet
            for j in range(d):
                q[j] = mu_hi * X[i, j]
            dist, proj = hull_project(V, q)
            polished = False
            if dist > 0.0:
                denom = 0.0
                offset = 0.0
                for j in range(d):
                    a = (q[j] - proj[j]) / dist
                    denom += a * X[i, j]
                    offset += a * proj[j]
                if denom > 0.0:
                    mu_star = offset / denom
                    if mu_star > 0.0 and np.isfinite(mu_star):
                        delta = 4.0 * eps_bisect
                        okin = False
                        okout = False
                        for j in range(d):
                            q[j] = mu_star * (1.0 - delta) * X[i, j]
                        din, _ = hull_project(V, q)
                        if din <= 0.1 * eps_bisect * (1.0 + mu_star * nx):
                            okin = True
                        for j in range(d):
                            q[j] = mu_star * (1.0 + delta) * X[i, j]
                        dout, _ = hull_project(V, q)
                        if dout > 0.1 * eps_bisect * (1.0 + mu_star * nx):
                            okout = True
                        if okin and okout:
                            out[i] = 1.0 / mu_star
                            polished = True
            if not polished:
                for _ in range(max_iter):
                    if mu_hi - mu_lo <= eps_bisect * max(mu_lo, mu_lo * mu_lo):
                        break
                    mid = 0.5 * (mu_lo + mu_hi)
                    for j in range(d):
                        q[j] = mid * X[i, j]
                    dist, _ = hull_project(V, q)
                    if dist <= 0.1 * eps_bisect * (1.0 + mid * nx):
                        mu_lo = mid
                    else:
                        mu_hi = mid
                out[i] = 2.0 / (mu_lo + mu_hi)
        return out

    return {
        "solve_linear": solve_linear,
        "affine_min_norm": affine_min_norm,
        "hull_project": hull_project,
        "hull_distances": hull_distances,
        "hull_projections": hull_projections,
        "polytope_gauge": polytope_gauge,
    }
