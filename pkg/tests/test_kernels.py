import os
import subprocess
import sys

import numpy as np
import pytest

from gaugekit import kernels
from gaugekit.kernels import numpy_kernels
from gaugekit.kernels._impl import make_kernels


def hexagon():
    ang = np.linspace(0, 2 * np.pi, 7)[:-1]
    return np.stack([np.cos(ang), np.sin(ang)], axis=1)


def exact_polygon_distance(V, q):
    """Independent point-to-convex-polygon distance via edge projections."""
    q = np.asarray(q, dtype=float)
    # inside test via cross products (vertices are counterclockwise)
    inside = True
    m = len(V)
    for i in range(m):
        a, b = V[i], V[(i + 1) % m]
        e, w = b - a, q - a
        if e[0] * w[1] - e[1] * w[0] < 0:
            inside = False
    if inside:
        return 0.0
    best = np.inf
    for i in range(m):
        a, b = V[i], V[(i + 1) % m]
        t = np.clip(np.dot(q - a, b - a) / np.dot(b - a, b - a), 0.0, 1.0)
        best = min(best, np.linalg.norm(q - (a + t * (b - a))))
    return best


def test_hull_distances_match_exact_polygon():
    V = hexagon()
    rng = np.random.default_rng(0)
    Q = rng.normal(size=(300, 2)) * 1.5
    got = kernels.hull_distances(V, Q)
    want = np.array([exact_polygon_distance(V, q) for q in Q])
    assert np.max(np.abs(got - want)) < 1e-12


def test_hull_project_returns_nearest_point():
    V = hexagon()
    d, p = kernels.hull_project(V, np.array([2.0, 0.0]))
    assert abs(d - 1.0) < 1e-13
    assert np.allclose(p, [1.0, 0.0], atol=1e-13)


def test_degenerate_vertex_sets():
    single = np.array([[1.0, 1.0]])
    d, p = kernels.hull_project(single, np.array([1.0, 0.0]))
    assert abs(d - 1.0) < 1e-12
    dup = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    d, _ = kernels.hull_project(dup, np.array([0.5, 0.5]))
    assert d < 1e-12  # on the segment


def test_backends_bit_identical():
    V = hexagon()
    rng = np.random.default_rng(1)
    Q = rng.normal(size=(500, 2)) * 2.0
    a = kernels.hull_distances(V, Q)
    b = numpy_kernels()["hull_distances"](V, Q)
    assert np.array_equal(a, b)
    ga = kernels.polytope_gauge(V, Q, 1e-12, 200)
    gb = numpy_kernels()["polytope_gauge"](V, Q, 1e-12, 200)
    assert np.array_equal(ga, gb)


def test_polytope_gauge_exact_on_boundary():
    V = hexagon()
    mids = 0.5 * (V + np.roll(V, 1, axis=0))
    vals = kernels.polytope_gauge(V, np.concatenate([V, mids]), 1e-12, 200)
    assert np.max(np.abs(vals - 1.0)) < 1e-12


def test_polytope_gauge_homogeneous():
    V = hexagon()
    rng = np.random.default_rng(2)
    X = rng.normal(size=(100, 2))
    g1 = kernels.polytope_gauge(V, X, 1e-12, 200)
    g3 = kernels.polytope_gauge(V, 3.0 * X, 1e-12, 200)
    assert np.max(np.abs(g3 - 3.0 * g1) / (1 + g3)) < 1e-11


def test_env_flag_selects_backend():
    code = ("import gaugekit.kernels as k; print(k.backend_name())")
    for flag, expect in (("numpy", "numpy"), ("numba", "numba")):
        env = dict(os.environ, GAUGEKIT_BACKEND=flag)
        out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                             text=True, env=env)
        assert out.returncode == 0, out.stderr
        assert out.stdout.strip().splitlines()[-1] == expect


def test_make_kernels_with_plain_decorators():
    ks = make_kernels(lambda f: f)
    d, _ = ks["hull_project"](hexagon(), np.array([0.0, 0.0]))
    assert d < 1e-12
