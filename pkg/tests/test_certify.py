import math

import numpy as np
import pytest

from gaugekit.core import (
    FALSIFIED,
    INCONCLUSIVE,
    PROVEN,
    SUPPORTED,
    InputError,
    SampleStream,
    ToleranceProfile,
)
from gaugekit import certify as C
from gaugekit.certify import (
    HomogeneousFunctionSpec,
    ScalarTransform,
    composition_check,
    cone_equivalence_harness,
    from_expression,
    from_norm,
    function_spec,
    main_equivalence_harness,
    midpoint_criterion,
    power_transform,
    rotundity_equivalence_check,
    sublevel_oracle,
    taxonomy,
    zero_set_verdict,
)

check_convex = C.test_convex
check_quasi = C.test_quasi_convex
check_strictly_convex = C.test_strictly_convex
check_strictly_quasi = C.test_strictly_quasi_convex
check_strictly_sub = C.test_strictly_sub_convex
check_sub = C.test_sub_convex
from gaugekit.norms import funk_norm, lp_norm, polyhedral_norm
from gaugekit.sets import SetOracle
from gaugekit.fixtures import (
    cone_ratio_function,
    half_plane_cone_oracle,
    hexagon_vertices,
    open_cone_oracle,
    sqrt2_max_function,
    sqrt2_min_function,
    square_in_disk_function,
    step_function,
)

from _oracles import chord_scan_strict, midpoint_scan, unit_sphere_points

TOL = ToleranceProfile()
N = 2000


def s(k=1):
    return SampleStream(k)


# --- plain convexity ------------------------------------------------------


def test_convex_l2():
    assert check_convex(from_norm(lp_norm(2, 2.0)), N, s(), TOL).status == SUPPORTED


def test_convex_sqrt_abs_falsified():
    f = from_expression("sqrt(abs(x1))", 1, degree=0.5)
    v = check_convex(f, N, s(), TOL)
    assert v.status == FALSIFIED
    w = v.witness
    x, y, t = np.asarray(w["x"]), np.asarray(w["y"]), w["t"]
    z = (1 - t) * x + t * y
    fz = math.sqrt(abs(z[0]))
    bound = (1 - t) * math.sqrt(abs(x[0])) + t * math.sqrt(abs(y[0]))
    assert fz > bound  # witness replays


def test_convex_cone_ratio_supported():
    f = cone_ratio_function()
    assert check_convex(f, N, s(), TOL).status == SUPPORTED


# --- strict convexity -----------------------------------------------------


def test_strictly_convex_l2_squared():
    f = power_transform(from_norm(lp_norm(2, 2.0)), 2.0)
    assert check_strictly_convex(f, N, s(), TOL).status == SUPPORTED


def test_strictly_convex_l1_falsified_collinear():
    v = check_strictly_convex(from_norm(lp_norm(2, 1.0)), N, s(), TOL)
    assert v.status == FALSIFIED


def test_any_norm_fails_strict_convexity_on_rays():
    for p in (1.5, 2.0, 3.0):
        v = check_strictly_convex(from_norm(lp_norm(2, p)), N, s(), TOL)
        assert v.status == FALSIFIED  # homogeneity forces equality along rays


# --- quasi-convexity ------------------------------------------------------


def test_quasi_sqrt_abs_supported():
    f = from_expression("sqrt(abs(x1))", 1, degree=0.5)
    assert check_quasi(f, N, s(), TOL).status == SUPPORTED


def test_strictly_quasi_abs_supported_zero_falsified():
    absf = from_expression("abs(x1)", 1, degree=1.0)
    assert check_strictly_quasi(absf, N, s(), TOL).status == SUPPORTED
    zero = function_spec(lambda X: np.zeros(len(X)), 1, degree=1.0)
    v = check_strictly_quasi(zero, N, s(), TOL)
    assert v.status == FALSIFIED


# --- sub-convexity --------------------------------------------------------


def test_sub_convex_step_function():
    f = step_function()
    assert check_sub(f, N, s(), TOL).status == SUPPORTED
    assert check_convex(f, N, s(), TOL).status == FALSIFIED


def test_sub_convex_sqrt2_max():
    assert check_sub(sqrt2_max_function(), N, s(), TOL).status == SUPPORTED


def test_sub_convex_negative_slope_tail():
    # 0 for t < 0, -t for t >= 0: sub-convex but not convex
    f = HomogeneousFunctionSpec(1, lambda X: np.where(X[:, 0] >= 0, -X[:, 0], 0.0))
    assert check_sub(f, N, s(), TOL).status == SUPPORTED
    assert check_convex(f, N, s(), TOL).status == FALSIFIED


def test_sub_equals_quasi_across_specs():
    specs = [from_norm(lp_norm(2, 2.0)), sqrt2_max_function(), step_function(),
             from_expression("sqrt(abs(x1))", 1, degree=0.5)]
    for f in specs:
        sub = check_sub(f, N, s(3), TOL)
        quasi = check_quasi(f, N, s(4), TOL)
        assert (sub.status == FALSIFIED) == (quasi.status == FALSIFIED)


# --- strict sub-convexity -------------------------------------------------


def test_strictly_sub_l2_and_linf():
    assert check_strictly_sub(from_norm(lp_norm(2, 2.0)), N, s(), TOL).status == SUPPORTED
    v = check_strictly_sub(from_norm(lp_norm(2, np.inf)), N, s(), TOL)
    assert v.status == FALSIFIED
    mid = np.asarray(v.witness["midpoint"])
    r = v.witness["level"]
    assert abs(np.max(np.abs(mid)) - r) <= 1e-6 * (1 + r)  # midpoint on a flat face


def test_strictly_sub_sqrt2_max_at_level_zero():
    v = check_strictly_sub(sqrt2_max_function(), N, s(), TOL)
    assert v.status == FALSIFIED
    assert v.witness["level"] == 0.0
    mid = np.asarray(v.witness["midpoint"])
    assert abs(abs(mid[0]) - mid[1]) <= 1e-9


def test_strictly_sub_sqrt2_min_supported():
    assert check_strictly_sub(sqrt2_min_function(), N, s(), TOL).status == SUPPORTED


def test_power_transform():
    f = power_transform(from_norm(lp_norm(2, 2.0)), 2.0)
    X = np.array([[3.0, 4.0], [1.0, 0.0]])
    assert np.allclose(f.eval(X), [25.0, 1.0])
    assert f.degree == 2.0
    neg = function_spec(lambda X: X[:, 0], 1, check=False)
    with pytest.raises(InputError):
        power_transform(neg, 2.0).eval(np.array([[-1.0]]))
    with pytest.raises(InputError):
        power_transform(f, 0.0)


def test_power_invariance_of_strict_quasi_and_strict_sub():
    base = [from_norm(lp_norm(2, 2.0)), from_norm(lp_norm(2, 1.0)), sqrt2_max_function()]
    for f in base:
        for a in (0.5, 2.0):
            fa = power_transform(f, a)
            q1 = check_strictly_quasi(f, N, s(5), TOL)
            q2 = check_strictly_quasi(fa, N, s(5), TOL)
            assert (q1.status == FALSIFIED) == (q2.status == FALSIFIED)
            s1 = check_strictly_sub(f, N, s(6), TOL)
            s2 = check_strictly_sub(fa, N, s(6), TOL)
            assert (s1.status == FALSIFIED) == (s2.status == FALSIFIED)


def test_sublevel_scaling_of_homogeneous_specs():
    for f, alpha in ((from_norm(lp_norm(2, 1.5)), 1.0),
                     (power_transform(from_norm(lp_norm(2, 2.0)), 2.0), 2.0)):
        stream = s(7)
        X = stream.directions(200, 2) * stream.log_uniform(0.1, 4.0, 200)[:, None]
        for r in (0.5, 2.0):
            member_r = sublevel_oracle(f, r).contains_points(X)
            scaled = X / r ** (1.0 / alpha)
            member_1 = sublevel_oracle(f, 1.0).contains_points(scaled)
            vals = f.eval(X)
            clear = np.abs(vals - r) > 1e-9 * (1 + r)
            assert np.array_equal(member_r[clear], member_1[clear])


# --- midpoint criterion and rotundity equivalences -------------------------


def test_midpoint_l1_flat_pair():
    v = midpoint_criterion(lp_norm(2, 1.0), N, s(), TOL)
    assert v.status == FALSIFIED
    assert abs(v.witness["n_mid"] - 1.0) <= 1e-12


def test_midpoint_l2_strict_value():
    v = midpoint_criterion(lp_norm(2, 2.0), N, s(), TOL)
    assert v.status == PROVEN
    x, y = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    nmid = lp_norm(2, 2.0).evaluator((0.5 * (x + y))[None, :])[0]
    assert abs(nmid - math.sqrt(2) / 2) <= 1e-12


def test_midpoint_funk_unit_pair():
    n = funk_norm(lp_norm(2, 2.0), [0.5, 0.0])
    for x in ([2.0 / 3.0, 0.0], [-2.0, 0.0]):
        assert abs(n.evaluator(np.array([x]))[0] - 1.0) <= 1e-12
    assert abs(n.evaluator(np.array([[-2.0 / 3.0, 0.0]]))[0] - 1.0 / 3.0) <= 1e-12
    assert midpoint_criterion(n, N, s(), TOL).status == PROVEN


def test_midpoint_brute_force_confirms():
    dirs = SampleStream(9).directions(60, 2)
    for p, rotund in ((1.5, True), (2.0, True), (np.inf, False)):
        n = lp_norm(2, p)
        fn = lambda u: float(n.evaluator(np.asarray(u, dtype=float)[None, :])[0])
        sphere = unit_sphere_points(fn, dirs)
        worst = midpoint_scan(fn, sphere)
        if rotund:
            assert worst > 0.0
        # for sup norm include the corner pair, the flat chord
        if not rotund:
            flat = midpoint_scan(fn, np.array([[1.0, 1.0], [1.0, -1.0]]))
            assert abs(flat) <= 1e-12


def test_rotundity_equivalence_examples():
    assert rotundity_equivalence_check(lp_norm(2, 2.0), N, s(), TOL).status == SUPPORTED
    v = rotundity_equivalence_check(lp_norm(2, np.inf), N, s(), TOL)
    assert v.status == SUPPORTED and "not rotund" in v.note
    v = rotundity_equivalence_check(polyhedral_norm(hexagon_vertices()), 400, s(), TOL)
    assert v.status == SUPPORTED and "not rotund" in v.note


def test_midpoint_supported_implies_all_t_strict():
    for p in (1.5, 2.0, 3.0):
        n = lp_norm(2, p)
        assert midpoint_criterion(n, N, s(), TOL).ok
        stream = s(10)
        U = stream.directions(100, 2)
        V = stream.directions(100, 2)
        X = U / n.evaluator(U)[:, None]
        Y = V / n.evaluator(V)[:, None]
        keep = np.linalg.norm(X - Y, axis=1) > 0.05
        X, Y = X[keep], Y[keep]
        for t in (0.1, 0.3, 0.7, 0.9):
            vals = n.evaluator((1 - t) * X + t * Y)
            assert np.all(vals < 1.0 - 1e-7 * 0.01)


# --- zero set and continuity ----------------------------------------------


def test_zero_set_verdicts():
    assert zero_set_verdict(from_norm(lp_norm(2, 2.0)), 400, s(), TOL).status == SUPPORTED
    v = zero_set_verdict(sqrt2_max_function(), 400, s(), TOL)
    assert v.status == FALSIFIED  # vanishes on the whole cone y >= |x|


def test_continuity_probe_catches_parabolic_jump():
    f = cone_ratio_function()
    v = C.continuity_verdict(f, 200, s(), TOL)
    assert v.status == FALSIFIED
    seq = np.array([[1e-8, 1e-4]])
    assert abs(f.eval(seq)[0] - 0.5) < 1e-3


# --- harnesses --------------------------------------------------------------


def test_main_harness_l2_all_true():
    rec = main_equivalence_harness(from_norm(lp_norm(2, 2.0)), (1.5, 2.0, 3.0), N, s(), TOL)
    assert rec["bools"] == [True, True, True] and rec["agree"] is True


def test_main_harness_l1_all_false():
    rec = main_equivalence_harness(from_norm(lp_norm(2, 1.0)), (1.5, 2.0, 3.0), N, s(), TOL)
    assert rec["bools"] == [False, False, False] and rec["agree"] is True
    assert rec["parts"]["strictly_sub_convex"].status == FALSIFIED


def test_main_harness_zero_function():
    zero = function_spec(lambda X: np.zeros(len(X)), 2, degree=1.0, continuity="proven")
    rec = main_equivalence_harness(zero, (2.0,), N, s(), TOL)
    assert rec["bools"] == [False, False, False] and rec["agree"] is True
    # strict sub-convexity itself holds; the zero-set condition is what fails
    assert rec["parts"]["strictly_sub_convex"].ok
    assert rec["parts"]["zero_set"].status == FALSIFIED


def test_main_harness_input_checks():
    with pytest.raises(InputError):
        main_equivalence_harness(cone_ratio_function(), (2.0,), 100, s(), TOL)
    with pytest.raises(InputError):
        main_equivalence_harness(from_norm(lp_norm(2, 2.0)), (0.5,), 100, s(), TOL)


def test_cone_harness_open_cone():
    f = HomogeneousFunctionSpec(2, lambda X: np.linalg.norm(X, axis=1),
                                open_cone_oracle(), 1.0, "proven", True)
    rec = cone_equivalence_harness(f, (1.5, 2.0), N, s(), TOL)
    assert rec["bools"][1] is True and rec["bools"][2] is False
    assert rec["agree"] is None
    assert rec["domain_strictly_convex"].status == FALSIFIED


def test_cone_harness_ray_linear():
    ray = SetOracle(1, lambda P: P[:, 0] >= 0.0,
                    frozenset({"cone", "convex", "contains_origin"}),
                    seed_points=np.array([[1.0]]))
    f = HomogeneousFunctionSpec(1, lambda X: 2.0 * X[:, 0], ray, 1.0, "proven", True)
    rec = cone_equivalence_harness(f, (1.5, 2.0), N, s(), TOL)
    assert rec["bools"] == [True, True, True] and rec["agree"] is True


def test_cone_harness_ray_zero_function():
    ray = SetOracle(1, lambda P: P[:, 0] >= 0.0,
                    frozenset({"cone", "convex", "contains_origin"}),
                    seed_points=np.array([[1.0]]))
    f = HomogeneousFunctionSpec(1, lambda X: np.zeros(len(X)), ray, 1.0, "proven", True)
    rec = cone_equivalence_harness(f, (1.5, 2.0), N, s(), TOL)
    assert rec["bools"] == [False, False, False]


# --- composition ------------------------------------------------------------


def test_composition_smooth_transform_preserves():
    phi = ScalarTransform(lambda t: t / (t + 1.0), name="t/(t+1)")
    v = composition_check(from_norm(lp_norm(2, 2.0)), phi, N, s(), TOL, strict=True)
    assert v.status == SUPPORTED


def test_composition_needs_strictly_convex_domain():
    from gaugekit.fixtures import product_barrier
    f, phi = product_barrier()
    v = composition_check(f, phi, N, s(), TOL, strict=True)
    assert v.status == FALSIFIED
    assert abs(v.witness["level"] - 1.0) <= 1e-9


def test_composition_needs_lower_semicontinuity():
    f = sqrt2_min_function()
    phi = ScalarTransform(lambda t: np.where(t < 0.0, -1.0, 0.0),
                          non_decreasing=True, lower_semicontinuous=False,
                          name="-indicator(t<0)", level_hints=(-1.0,))
    v = composition_check(f, phi, N, s(), TOL, strict=True)
    assert v.status == FALSIFIED
    mid = np.asarray(v.witness["midpoint"])
    assert abs(abs(mid[0]) - mid[1]) <= 1e-6  # witness chord on the open cone boundary


def test_composition_rejects_decreasing_transform():
    phi = ScalarTransform(lambda t: -t, non_decreasing=True, name="-t")
    with pytest.raises(InputError):
        composition_check(from_norm(lp_norm(2, 2.0)), phi, 200, s(), TOL)


# --- taxonomy coherence ------------------------------------------------------


def test_taxonomy_implication_chain_across_specs():
    specs = [
        from_norm(lp_norm(2, 2.0)),
        from_norm(lp_norm(2, 1.0)),
        from_norm(lp_norm(2, np.inf)),
        power_transform(from_norm(lp_norm(2, 2.0)), 2.0),
        sqrt2_max_function(),
        step_function(),
        square_in_disk_function(),
    ]
    for f in specs:
        rep = taxonomy(f, 800, s(11), TOL)
        assert rep.implication_violations() == [], (f.name, rep.to_dict())


def test_strictly_convex_witness_independent_scan():
    # brute-force confirmation of the l1 strict-convexity failure
    pts = [np.array([1.0, 0.0]), np.array([2.0, 0.0]), np.array([0.0, 1.0])]
    n = lp_norm(2, 1.0)
    fn = lambda u: float(n.evaluator(np.asarray(u, dtype=float)[None, :])[0])
    hit = chord_scan_strict(fn, pts)
    assert hit is not None


def test_homogeneity_declaration_checked():
    with pytest.raises(InputError):
        function_spec(lambda X: np.linalg.norm(X, axis=1) + 1.0, 2, degree=1.0)
