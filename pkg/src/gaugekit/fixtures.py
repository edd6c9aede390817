"""The built-in example corpus: named subjects with replayable expectations.

Each fixture packages a subject (set oracle, norm spec, function spec, or a
composition triple) with assertions that pin its known behaviour: gauge
values, axiom verdicts, rotundity, taxonomy entries, harness agreement.
They are the regression anchor for the whole toolkit and part of the CLI
contract: expected-Falsified assertions re-check their witness numerically,
so a passing corpus means every stored counterexample still bites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .certify import (
    HomogeneousFunctionSpec,
    ScalarTransform,
    composition_check,
    cone_equivalence_harness,
    from_expression,
    from_norm,
    function_spec,
    main_equivalence_harness,
    midpoint_criterion,
    rotundity_equivalence_check,
    sublevel_oracle,
    test_convex,
    test_quasi_convex,
    test_strictly_convex,
    test_strictly_quasi_convex,
    test_strictly_sub_convex,
    test_sub_convex,
    zero_set_verdict,
    continuity_verdict,
)
from .core import (
    DEFAULT_TOL,
    FALSIFIED,
    InputError,
    SampleStream,
    ToleranceProfile,
    Verdict,
    falsified,
    supported,
)
from .gauge import GaugeEvaluator, continuity_probe, gauge_value, gauge_values, sandwich_check
from .norms import (
    MinkowskiNormSpec,
    asymmetry_constant,
    evaluate,
    funk_norm,
    lp_norm,
    norm_from_gauge,
    polyhedral_norm,
    symmetric_part,
    truncated_phi_norm,
    validate_axioms,
)
from .sets import SetOracle, probe_star_shaped, probe_strictly_convex


@dataclass(frozen=True)
class Fixture:
    """A named subject plus its expected, replayable assertions."""

    name: str
    kind: str  # set | norm | function | composition
    provenance: str
    build: Callable[..., object]
    assertions: tuple  # of (assertion_name, fn(subject, stream, tol, n) -> (ok, detail))
    params: dict = field(default_factory=dict)

    @property
    def expected(self) -> dict:
        return {name: "pass" for name, _ in self.assertions}


def _ok(detail=""):
    return True, detail


def _fail(detail):
    return False, detail


# ---------------------------------------------------------------- subjects


def disk_union_ray_oracle() -> SetOracle:
    def pred(P):
        r = np.linalg.norm(P, axis=1)
        on_axis = (P[:, 1] == 0.0) & (P[:, 0] >= 0.0)
        return (r < 1.0) | on_axis

    return SetOracle(2, pred, frozenset({"star_shaped", "contains_origin"}),
                     seed_points=np.array([[2.0, 0.0], [0.0, 0.5]]))


_RAY_COUNT = 720


def rational_rays_surrogate_oracle() -> SetOracle:
    """Open unit disk plus a finite fan of closed rays to radius 2.

    Stands in for a dense fan of rational-angle rays; with finitely many
    rays the closure adds nothing, so only the three inner inclusions of
    the interior/gauge/set sandwich stay strict (see the assertions).
    """
    step = 2.0 * math.pi / _RAY_COUNT

    def pred(P):
        r = np.linalg.norm(P, axis=1)
        ang = np.arctan2(P[:, 1], P[:, 0])
        near = np.abs(ang / step - np.round(ang / step)) * step <= 1e-9
        return (r < 1.0) | (near & (r <= 2.0))

    seeds = np.array([[2.0 * math.cos(step * k), 2.0 * math.sin(step * k)]
                      for k in (0, 37, 180)])
    return SetOracle(2, pred, frozenset({"star_shaped", "contains_origin"}),
                     seed_points=seeds)


def sqrt2_max_function() -> HomogeneousFunctionSpec:
    return from_expression("max(0, sqrt(2*(x1^2+x2^2)) - 2*x2)", 2, degree=1.0,
                           name="sqrt2_max_cone_function")


def sqrt2_min_function() -> HomogeneousFunctionSpec:
    return from_expression("min(0, sqrt(2*(x1^2+x2^2)) - 2*x2)", 2, degree=1.0,
                           name="sqrt2_min_cone_function")


def half_plane_cone_oracle() -> SetOracle:
    def pred(P):
        origin = (P[:, 0] == 0.0) & (P[:, 1] == 0.0)
        return (P[:, 0] > 0.0) | origin

    return SetOracle(2, pred, frozenset({"cone", "convex", "contains_origin"}),
                     seed_points=np.array([[1.0, 0.0], [1.0, 1.0], [1.0, -1.0]]))


def cone_ratio_function() -> HomogeneousFunctionSpec:
    def ev(X):
        out = np.zeros(len(X))
        pos = X[:, 0] > 0.0
        out[pos] = (X[pos, 0] ** 2 + X[pos, 1] ** 2) / (2.0 * X[pos, 0])
        return out

    return function_spec(ev, 2, domain=half_plane_cone_oracle(), degree=1.0,
                         continuity="probe", nonneg=True, name="cone_ratio_function")


def square_in_disk_function() -> HomogeneousFunctionSpec:
    """Discontinuous jump across the unit square, inside an open disk of radius 2.

    Inside the square the value is |u|^2; outside it is 2 + a strictly
    quasi-convex barrier whose sublevels interpolate between the square and
    the disk.  Strictly quasi-convex, lower semi-continuous, S_2 = the
    square (flat boundary): not strictly sub-convex.
    """

    def ev(X):
        ninf = np.max(np.abs(X), axis=1)
        n2 = np.linalg.norm(X, axis=1)
        inside = ninf <= 1.0
        out = np.empty(len(X))
        out[inside] = n2[inside] ** 2
        o = ~inside
        out[o] = 2.0 + (ninf[o] - 1.0) / (2.0 - n2[o])
        return out

    domain = SetOracle(
        2, lambda P: np.linalg.norm(P, axis=1) < 2.0,
        frozenset({"convex", "contains_origin", "bounded"}), outer_radius=2.0,
    )
    return HomogeneousFunctionSpec(2, ev, domain, None, "probe", True,
                                   "square_in_disk_discontinuous")


def open_cone_oracle() -> SetOracle:
    return SetOracle(
        2, lambda P: P[:, 1] > np.abs(P[:, 0]), frozenset({"cone", "convex"}),
        seed_points=np.array([[0.0, 1.0], [0.5, 1.0], [-0.5, 1.0]]),
    )


def open_cone_euclidean_function() -> HomogeneousFunctionSpec:
    return HomogeneousFunctionSpec(2, lambda X: np.linalg.norm(X, axis=1),
                                   open_cone_oracle(), 1.0, "proven", True,
                                   "open_cone_euclidean")


def product_barrier() -> tuple:
    domain = SetOracle(
        2, lambda P: np.max(np.abs(P), axis=1) < 1.0,
        frozenset({"convex", "contains_origin", "bounded"}), outer_radius=math.sqrt(2.0),
    )
    f = from_expression("1/((1-x1^2)*(1-x2^2))", 2, domain=domain,
                        name="product_barrier")
    phi = ScalarTransform(lambda t: t / (t + 1.0), non_decreasing=True,
                          lower_semicontinuous=True, name="t/(t+1)",
                          level_hints=(1.0,))
    return f, phi


def step_function() -> HomogeneousFunctionSpec:
    return HomogeneousFunctionSpec(
        1, lambda X: np.where(X[:, 0] > 0.0, 1.0, 0.0), None, None, "probe", True,
        "step_function",
    )


def hexagon_vertices() -> np.ndarray:
    angles = np.linspace(0.0, 2.0 * math.pi, 7)[:-1]
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


def square_gauge_pair() -> tuple:
    """The non-convex set S = (-1,1)^2 plus two corners, and T = [-1,1]^2.

    Both share the pointed conic hull R^2 and the same gauge, the sup norm:
    a gauge can be convex although the set it came from is not.
    """

    def pred_s(P):
        open_sq = np.max(np.abs(P), axis=1) < 1.0
        c1 = (np.abs(P[:, 0] - 1.0) <= 1e-12) & (np.abs(P[:, 1] - 1.0) <= 1e-12)
        c2 = (np.abs(P[:, 0] - 1.0) <= 1e-12) & (np.abs(P[:, 1] + 1.0) <= 1e-12)
        return open_sq | c1 | c2

    s = SetOracle(2, pred_s, frozenset({"star_shaped", "contains_origin"}),
                  seed_points=np.array([[1.0, 1.0], [1.0, -1.0]]))
    t = SetOracle(2, lambda P: np.max(np.abs(P), axis=1) <= 1.0,
                  frozenset({"star_shaped", "convex", "contains_origin", "bounded"}),
                  outer_radius=math.sqrt(2.0))
    return s, t


# ---------------------------------------------------------------- assertion helpers


def _assert_close(value, want, atol, label):
    if math.isinf(want) and math.isinf(value):
        return _ok(f"{label} = {value}")
    if abs(value - want) <= atol:
        return _ok(f"{label} = {value:.12g}")
    return _fail(f"{label} = {value!r}, wanted {want!r} within {atol:g}")


def _assert_status(verdict: Verdict, want, label):
    wanted = (want,) if isinstance(want, str) else tuple(want)
    if verdict.status in wanted:
        return _ok(f"{label}: {verdict.status}")
    return _fail(f"{label}: {verdict.status} (wanted {'/'.join(wanted)}; note={verdict.note!r})")


def _midpoint_matches_ssc(norm_spec, stream, tol, n):
    """The rotundity midpoint criterion and strict sub-convexity must agree."""
    mc = midpoint_criterion(norm_spec, n, stream.substream("mc"), tol)
    ssc = test_strictly_sub_convex(from_norm(norm_spec), n, stream.substream("ssc"), tol)
    if mc.ok == ssc.ok:
        return _ok(f"midpoint {mc.status} == strictly_sub_convex {ssc.status}")
    return _fail(f"midpoint {mc.status} but strictly_sub_convex {ssc.status}")


# ---------------------------------------------------------------- fixture bodies


def _fx_disk_union_ray():
    def a_gauge_ray(s, stream, tol, n):
        g = GaugeEvaluator(s, tol)
        v = gauge_value(g, [2.0, 0.0])
        if v != 0.0:
            return _fail(f"gauge(2,0) = {v!r}, wanted exactly 0")
        return _ok("gauge(2,0) = 0 exactly")

    def a_gauge_disk(s, stream, tol, n):
        return _assert_close(gauge_value(GaugeEvaluator(s, tol), [0.0, 0.5]),
                             0.5, 1e-9, "gauge(0,0.5)")

    def a_usc_fails(s, stream, tol, n):
        rep = continuity_probe(GaugeEvaluator(s, tol), [2.0, 0.0], 16, stream)
        if rep["usc_ok"]:
            return _fail(f"usc unexpectedly holds at (2,0): {rep}")
        if rep["limsup"] < 2.0 - 1e-6:
            return _fail(f"limsup {rep['limsup']} < 2 - 1e-6")
        if not rep["lsc_ok"]:
            return _fail("lsc should hold at (2,0)")
        return _ok(f"usc fails, limsup={rep['limsup']:.9f}")

    def a_star(s, stream, tol, n):
        return _assert_status(probe_star_shaped(s, n, stream, tol), "Supported", "star probe")

    def a_sandwich(s, stream, tol, n):
        return _assert_status(sandwich_check(GaugeEvaluator(s, tol), min(n, 400), stream),
                              "Supported", "sandwich")

    return Fixture(
        "disk_union_ray", "set",
        "open unit disk with a trailing half-axis: the gauge vanishes along the "
        "ray, so upper semi-continuity fails there although the set is a "
        "neighborhood of the origin",
        disk_union_ray_oracle,
        (
            ("gauge_zero_on_ray", a_gauge_ray),
            ("gauge_on_disk", a_gauge_disk),
            ("usc_fails_on_ray", a_usc_fails),
            ("star_shaped", a_star),
            ("sandwich", a_sandwich),
        ),
    )


def _fx_rational_rays():
    step = 2.0 * math.pi / _RAY_COUNT

    def ray_pt(k, r):
        return np.array([r * math.cos(step * k), r * math.sin(step * k)])

    def a_chain(s, stream, tol, n):
        g = GaugeEvaluator(s, tol)
        w1 = ray_pt(37, 1.5)
        p1 = gauge_value(g, w1)
        if not (p1 < 1.0 - 1e-6):
            return _fail(f"gauge at on-ray r=1.5 is {p1}, wanted < 1")
        probe = w1 + 1e-6 * np.array([-math.sin(step * 37), math.cos(step * 37)])
        if s.contains_point(probe):
            return _fail("perturbed ray point unexpectedly inside: ray not thin")
        w2 = ray_pt(37, 2.0)
        if not s.contains_point(w2):
            return _fail("ray endpoint should belong to S")
        p2 = gauge_value(g, w2)
        if not (abs(p2 - 1.0) <= 1e-9):
            return _fail(f"gauge at ray endpoint is {p2}, wanted 1")
        w3 = 1.0 * np.array([math.cos(step * 41.5), math.sin(step * 41.5)])
        if s.contains_point(w3):
            return _fail("off-ray unit point should not belong to S")
        p3 = gauge_value(g, w3)
        if not (abs(p3 - 1.0) <= 1e-9):
            return _fail(f"gauge at off-ray unit point is {p3}, wanted 1")
        return _ok("interior < gauge-open < S < gauge-closed witnesses hold")

    def a_star(s, stream, tol, n):
        return _assert_status(probe_star_shaped(s, n, stream, tol), "Supported", "star probe")

    return Fixture(
        "rational_rays_surrogate", "set",
        "open unit disk plus 720 equally spaced closed rays to radius 2; finite "
        "surrogate for a dense fan of rays (closure-side strictness needs density "
        "and is deliberately not asserted)",
        rational_rays_surrogate_oracle,
        (("strict_inclusion_witnesses", a_chain), ("star_shaped", a_star)),
    )


def _fx_sqrt2_max():
    def a_ssc(f, stream, tol, n):
        v = test_strictly_sub_convex(f, n, stream, tol)
        if v.status != FALSIFIED:
            return _fail(f"expected Falsified, got {v.status}")
        w = v.witness
        if w.get("level") != 0.0:
            return _fail(f"expected a level-0 witness, got level {w.get('level')}")
        mid = np.asarray(w["midpoint"])
        if abs(abs(mid[0]) - mid[1]) > 1e-9:
            return _fail(f"witness midpoint {mid.tolist()} not on the ray y=|x|")
        fm = f.eval_point(mid)
        if abs(fm) > tol.eps_strict:
            return _fail(f"witness replay: f(mid)={fm} not on level 0")
        return _ok(f"falsified at level 0, midpoint {mid.tolist()} on y=|x|")

    def a_sub(f, stream, tol, n):
        return _assert_status(test_sub_convex(f, n, stream, tol), "Supported", "sub_convex")

    def a_sqc(f, stream, tol, n):
        return _assert_status(test_strictly_quasi_convex(f, n, stream, tol),
                              "Falsified", "strictly_quasi_convex")

    def a_harness(f, stream, tol, n):
        rec = main_equivalence_harness(f, (1.5, 2.0, 3.0), n, stream, tol)
        if rec["bools"] != [False, False, False]:
            return _fail(f"expected all-false conditions, got {rec['bools']}")
        if rec["agree"] is not True:
            return _fail(f"expected agreement, got {rec['agree']}")
        return _ok("all three conditions false, in agreement")

    return Fixture(
        "sqrt2_max_cone_function", "function",
        "max(0, sqrt(2(x^2+y^2)) - 2y): its zero sublevel is the closed cone "
        "y >= |x|, which is not strictly convex, although every strict sublevel "
        "f < r is",
        sqrt2_max_function,
        (
            ("strictly_sub_falsified_at_level_0", a_ssc),
            ("sub_convex", a_sub),
            ("strictly_quasi_falsified", a_sqc),
            ("harness_all_false_agree", a_harness),
        ),
    )


def _fx_sqrt2_min():
    def a_ssc(f, stream, tol, n):
        return _assert_status(test_strictly_sub_convex(f, n, stream, tol),
                              "Supported", "strictly_sub_convex")

    def a_strict_sublevel(f, stream, tol, n):
        oracle = sublevel_oracle(f, 0.0, strict=True)
        oracle = SetOracle(oracle.dim, oracle.contains, oracle.flags,
                           seed_points=np.array([[0.0, 1.0], [0.25, 1.0]]))
        v = probe_strictly_convex(oracle, n, stream, tol)
        if v.status != FALSIFIED:
            return _fail(f"{{f < 0}} should fail strict convexity, got {v.status}")
        mid = np.asarray(v.witness["midpoint"])
        if abs(abs(mid[0]) - mid[1]) > 1e-6:
            return _fail(f"witness midpoint {mid.tolist()} not on the cone boundary")
        return _ok("strict sublevel {f<0} = open cone falsified with boundary chord")

    return Fixture(
        "sqrt2_min_cone_function", "function",
        "min(0, sqrt(2(x^2+y^2)) - 2y) is strictly sub-convex, yet its strict "
        "sublevel {f < 0} is the open cone y > |x|, which is not strictly "
        "convex: strict sub-convexity cannot be characterized via strict sublevels",
        sqrt2_min_function,
        (
            ("strictly_sub_convex", a_ssc),
            ("strict_sublevel_not_strictly_convex", a_strict_sublevel),
        ),
    )


def _fx_cone_ratio():
    def a_convex(f, stream, tol, n):
        return _assert_status(test_convex(f, n, stream, tol), ("Supported",), "convex")

    def a_discont(f, stream, tol, n):
        seq = np.array([[1.0 / k, 1.0 / math.sqrt(k)] for k in (10 ** 4, 10 ** 6, 10 ** 8)])
        vals = f.eval(seq)
        if abs(vals[-1] - 0.5) > 1e-3:
            return _fail(f"f(1/n, 1/sqrt(n)) tail = {vals[-1]}, wanted ~1/2")
        if abs(f.eval_point(np.zeros(2))) > tol.eps_eq:
            return _fail("f(0) should be 0")
        v = continuity_verdict(f, n, stream, tol)
        if v.status != FALSIFIED:
            return _fail(f"continuity probe should falsify at the apex, got {v.status}")
        return _ok("parabolic approach keeps the value near 1/2 while f(0)=0")

    def a_ssc(f, stream, tol, n):
        return _assert_status(test_strictly_sub_convex(f, n, stream, tol),
                              "Supported", "strictly_sub_convex")

    def a_harness(f, stream, tol, n):
        rec = cone_equivalence_harness(f, (1.5, 2.0), n, stream, tol)
        if rec["bools"][2] is not True:
            return _fail(f"cond3 should hold, got {rec['bools']}")
        if rec["bools"][1] is not False:
            return _fail(f"cond2 should fail (discontinuity), got {rec['bools']}")
        if rec["agree"] is not None:
            return _fail("agreement must not be asserted on a non-strictly-convex cone")
        return _ok("cond3 true, cond2 false; agreement not asserted")

    return Fixture(
        "cone_ratio_function", "function",
        "(x^2+y^2)/(2x) on the half-plane cone with a pointed apex: convex and "
        "strictly sub-convex (sublevels are disks through the origin) yet "
        "discontinuous at the apex along parabolic approaches",
        cone_ratio_function,
        (
            ("convex_on_cone", a_convex),
            ("discontinuous_at_apex", a_discont),
            ("strictly_sub_convex", a_ssc),
            ("cone_harness_reports_only", a_harness),
        ),
    )


def _fx_square_in_disk():
    def a_sqc(f, stream, tol, n):
        return _assert_status(test_strictly_quasi_convex(f, n, stream, tol),
                              "Supported", "strictly_quasi_convex")

    def a_sub(f, stream, tol, n):
        return _assert_status(test_sub_convex(f, n, stream, tol), "Supported", "sub_convex")

    def a_ssc(f, stream, tol, n):
        v = test_strictly_sub_convex(f, n, stream, tol, extra_levels=(2.0,))
        if v.status != FALSIFIED:
            return _fail(f"expected Falsified, got {v.status}")
        mid = np.asarray(v.witness["midpoint"])
        if abs(np.max(np.abs(mid)) - 1.0) > 1e-6:
            return _fail(f"witness midpoint {mid.tolist()} not on a square edge")
        return _ok(f"falsified at level {v.witness['level']:.4g} on a square edge")

    return Fixture(
        "square_in_disk_discontinuous", "function",
        "|u|^2 on the unit square with a jump of 2 across its edges, inside the "
        "open disk of radius 2 (outside branch 2 + (|u|_inf - 1)/(2 - |u|_2), "
        "whose sublevels blend square into disk): strictly quasi-convex and lsc, "
        "but S_2 is the square, so not strictly sub-convex",
        square_in_disk_function,
        (
            ("strictly_quasi_convex", a_sqc),
            ("sub_convex", a_sub),
            ("strictly_sub_falsified_on_square", a_ssc),
        ),
    )


def _fx_open_cone():
    def a_harness(f, stream, tol, n):
        rec = cone_equivalence_harness(f, (1.5, 2.0), n, stream, tol)
        if rec["bools"][1] is not True:
            return _fail(f"cond2 should hold, got {rec['bools']}")
        if rec["bools"][2] is not False:
            return _fail(f"cond3 should fail, got {rec['bools']}")
        if rec["agree"] is not None:
            return _fail("agreement must not be asserted (cone is not strictly convex)")
        if rec["domain_strictly_convex"].status != FALSIFIED:
            return _fail("the open cone should fail the strict-convexity probe")
        return _ok("cond2 true, cond3 false on the open cone")

    def a_ssc_witness(f, stream, tol, n):
        v = test_strictly_sub_convex(f, n, stream, tol)
        if v.status != FALSIFIED:
            return _fail(f"expected Falsified, got {v.status}")
        mid = np.asarray(v.witness["midpoint"])
        if abs(abs(mid[0]) - mid[1]) > 1e-6:
            return _fail(f"witness midpoint {mid.tolist()} not on the cone boundary")
        return _ok("unit-ball boundary inside the cone contains a segment of a ray")

    return Fixture(
        "open_cone_euclidean", "function",
        "the Euclidean norm restricted to the open cone y > |x|: continuous and "
        "strictly quasi-convex, but its unit sublevel has straight boundary "
        "segments along the cone's edges, so not strictly sub-convex; shows the "
        "three-way equivalence can fail on a non-strictly-convex cone",
        open_cone_euclidean_function,
        (("cone_harness_2_true_3_false", a_harness),
         ("strictly_sub_falsified_on_ray", a_ssc_witness)),
    )


def _fx_product_barrier():
    def build():
        return product_barrier()

    def a_f_ssc(subject, stream, tol, n):
        f, _ = subject
        return _assert_status(test_strictly_sub_convex(f, n, stream, tol),
                              "Supported", "barrier strictly_sub_convex")

    def a_composition(subject, stream, tol, n):
        f, phi = subject
        v = composition_check(f, phi, n, stream, tol, strict=True)
        if v.status != FALSIFIED:
            return _fail(f"expected Falsified, got {v.status} ({v.note})")
        if abs(v.witness["level"] - 1.0) > 1e-9:
            return _fail(f"expected the level-1 sublevel, got {v.witness['level']}")
        mid = np.asarray(v.witness["midpoint"])
        if abs(np.max(np.abs(mid)) - 1.0) > 1e-6:
            return _fail(f"witness chord midpoint {mid.tolist()} not on the square boundary")
        return _ok("S_1 of the composition is the whole open square; boundary chord found")

    return Fixture(
        "product_barrier_composition", "composition",
        "f = 1/((1-x^2)(1-y^2)) on the open square is strictly sub-convex, and "
        "phi(t) = t/(t+1) is non-decreasing and continuous, yet phi(f) is not "
        "strictly sub-convex: its level-1 sublevel is the whole (non-strictly-"
        "convex) open square, so strict convexity of the domain matters",
        build,
        (("barrier_strictly_sub_convex", a_f_ssc),
         ("composition_falsified_at_level_1", a_composition)),
    )


def _fx_truncated_phi(d=4):
    def build(d=d):
        return truncated_phi_norm(d)

    def a_axioms(nspec, stream, tol, n):
        rep = validate_axioms(nspec, n, stream, tol)
        return _assert_status(rep.overall, ("Supported", "Proven"), "axioms")

    def a_asym(nspec, stream, tol, n):
        dd = nspec.params["d"]
        rec = asymmetry_constant(nspec, n, stream, tol)
        want = 2.0 * dd + 1.0
        if abs(rec["estimate"] - want) > 1e-6:
            return _fail(f"asymmetry {rec['estimate']!r}, wanted {want} within 1e-6")
        arg = np.abs(np.asarray(rec["argmax"]))
        if not (abs(arg[dd - 1] - 1.0) <= 1e-9 and np.all(arg[: dd - 1] <= 1e-9)):
            return _fail(f"argmax {rec['argmax']!r} is not the last basis direction")
        return _ok(f"asymmetry constant {rec['estimate']:.9f} at the last basis vector")

    def a_phi_ratio(nspec, stream, tol, n):
        dd = nspec.params["d"]
        coeffs = nspec.params["drift"]
        dirs = np.concatenate([np.eye(dd), stream.directions(max(16, n), dd)])
        phi = dirs @ coeffs
        l1 = np.sum(np.abs(dirs), axis=1)
        ratio = phi / l1
        bound = dd / (dd + 1.0)
        if np.max(ratio) > bound + 1e-12:
            return _fail(f"phi/l1 ratio {np.max(ratio)} exceeds {bound}")
        if abs(np.max(ratio) - bound) > 1e-12:
            return _fail(f"ratio never attains {bound} (max {np.max(ratio)})")
        return _ok(f"sup phi/l1 = {np.max(ratio):.12f} = d/(d+1), attained at e_d")

    return Fixture(
        "truncated_phi_norm", "norm",
        "l1 plus the linear functional with coefficients (k+1)/(k+2): the "
        "asymmetry constant equals 2d+1 and grows without bound in d, the "
        "finite-dimensional face of an asymmetry constant that cannot exist "
        "in the full sequence space",
        build,
        (
            ("axioms", a_axioms),
            ("asymmetry_2d_plus_1", a_asym),
            ("phi_ratio_bound", a_phi_ratio),
        ),
        params={"d": d},
    )


def _fx_step():
    def a_tax(f, stream, tol, n):
        checks = [
            ("convex", test_convex, FALSIFIED),
            ("strictly_convex", test_strictly_convex, FALSIFIED),
            ("quasi_convex", test_quasi_convex, "Supported"),
            ("strictly_quasi_convex", test_strictly_quasi_convex, FALSIFIED),
            ("sub_convex", test_sub_convex, "Supported"),
            ("strictly_sub_convex", test_strictly_sub_convex, "Supported"),
        ]
        for name, fn, want in checks:
            v = fn(f, n, stream.substream(name), tol)
            if v.status != want:
                return _fail(f"{name}: {v.status}, wanted {want}")
        return _ok("step function: strictly sub-convex without being convex")

    return Fixture(
        "step_function", "function",
        "0 for t <= 0 and 1 for t > 0 on the line: every sublevel is an "
        "interval, hence strictly convex, although the function itself is "
        "neither convex nor strictly quasi-convex",
        step_function,
        (("taxonomy", a_tax),),
    )


def _fx_lp(p):
    label = "inf" if math.isinf(p) else f"{p:g}"

    def build(p=p):
        return lp_norm(2, p)

    rotund = 1.0 < p < math.inf

    def a_axioms(nspec, stream, tol, n):
        rep = validate_axioms(nspec, n, stream, tol)
        return _assert_status(rep.overall, "Proven", "axioms")

    def a_midpoint(nspec, stream, tol, n):
        v = midpoint_criterion(nspec, n, stream, tol)
        if rotund:
            return _assert_status(v, "Proven", "midpoint criterion")
        if v.status != FALSIFIED:
            return _fail(f"midpoint: {v.status}, wanted Falsified")
        if abs(v.witness["n_mid"] - 1.0) > 1e-12:
            return _fail(f"witness N(mid) = {v.witness['n_mid']!r} not within 1e-12 of 1")
        return _ok(f"flat chord witness with N(mid) = {v.witness['n_mid']!r}")

    def a_equiv(nspec, stream, tol, n):
        return _assert_status(rotundity_equivalence_check(nspec, n, stream, tol),
                              "Supported", "rotundity equivalences")

    def a_match(nspec, stream, tol, n):
        return _midpoint_matches_ssc(nspec, stream, tol, n)

    def a_harness(nspec, stream, tol, n):
        rec = main_equivalence_harness(from_norm(nspec), (1.5, 2.0, 3.0), n, stream, tol)
        want = [rotund] * 3
        if rec["bools"] != want:
            return _fail(f"harness bools {rec['bools']}, wanted {want}")
        if rec["agree"] is not True:
            return _fail(f"harness did not agree: {rec}")
        return _ok(f"harness bools {rec['bools']} in agreement")

    return Fixture(
        f"lp({label})", "norm",
        f"the l^{label} norm on the plane: rotund exactly when 1 < p < inf",
        build,
        (
            ("axioms", a_axioms),
            ("midpoint_criterion", a_midpoint),
            ("rotundity_equivalences", a_equiv),
            ("midpoint_matches_strict_subconvexity", a_match),
            ("main_harness", a_harness),
        ),
        params={"p": p},
    )


def _fx_funk():
    def build():
        return funk_norm(lp_norm(2, 2.0), [0.5, 0.0])

    def a_values(nspec, stream, tol, n):
        for x, want in (([1.0, 0.0], 1.5), ([-1.0, 0.0], 0.5), ([2.0 / 3.0, 0.0], 1.0),
                        ([-2.0, 0.0], 1.0)):
            got = evaluate(nspec, x)
            if abs(got - want) > 1e-12:
                return _fail(f"N({x}) = {got!r}, wanted {want}")
        if abs(symmetric_part(nspec, [1.0, 0.0]) - 1.0) > 1e-12:
            return _fail("symmetric part at (1,0) should be 1")
        mid = evaluate(nspec, [-2.0 / 3.0, 0.0])
        if abs(mid - 1.0 / 3.0) > 1e-12:
            return _fail(f"N(-2/3,0) = {mid!r}, wanted 1/3")
        return _ok("closed-form values check out, including the unit pair with N(mid)=1/3")

    def a_asym(nspec, stream, tol, n):
        rec = asymmetry_constant(nspec, n, stream, tol)
        if abs(rec["estimate"] - 3.0) > 1e-9:
            return _fail(f"asymmetry {rec['estimate']!r}, wanted 3")
        if np.linalg.norm(np.asarray(rec["argmax"]) - np.array([-1.0, 0.0])) > 1e-9:
            return _fail(f"argmax {rec['argmax']!r}, wanted (-1, 0)")
        return _ok("asymmetry constant 3 attained at (-1, 0)")

    def a_midpoint(nspec, stream, tol, n):
        return _assert_status(midpoint_criterion(nspec, n, stream, tol), "Proven",
                              "midpoint criterion")

    def a_match(nspec, stream, tol, n):
        return _midpoint_matches_ssc(nspec, stream, tol, n)

    def a_harness(nspec, stream, tol, n):
        rec = main_equivalence_harness(from_norm(nspec), (1.5, 2.0, 3.0), n, stream, tol)
        if rec["bools"] != [True, True, True] or rec["agree"] is not True:
            return _fail(f"harness {rec['bools']}, agree={rec['agree']}")
        return _ok("all three conditions hold, in agreement")

    return Fixture(
        "funk_disk_norm", "norm",
        "Euclidean norm plus the linear drift (1/2, 0): an asymmetric rotund "
        "norm whose unit ball is a shifted ellipse; asymmetry constant 3",
        build,
        (
            ("closed_form_values", a_values),
            ("asymmetry_constant_3", a_asym),
            ("midpoint_criterion", a_midpoint),
            ("midpoint_matches_strict_subconvexity", a_match),
            ("main_harness", a_harness),
        ),
    )


def _fx_hexagon():
    def build():
        return polyhedral_norm(hexagon_vertices())

    def a_vertices_unit(nspec, stream, tol, n):
        V = nspec.params["vertices"]
        vals = nspec.evaluator(V)
        if np.max(np.abs(vals - 1.0)) > 1e-12:
            return _fail(f"vertex gauges deviate by {np.max(np.abs(vals - 1.0))}")
        mids = 0.5 * (V + np.roll(V, 1, axis=0))
        mvals = nspec.evaluator(mids)
        if np.max(np.abs(mvals - 1.0)) > 1e-12:
            return _fail(f"edge-midpoint gauges deviate by {np.max(np.abs(mvals - 1.0))}")
        return _ok("vertices and edge midpoints evaluate to 1 within 1e-12")

    def a_axioms(nspec, stream, tol, n):
        rep = validate_axioms(nspec, n, stream, tol)
        return _assert_status(rep.overall, "Proven", "axioms")

    def a_midpoint(nspec, stream, tol, n):
        v = midpoint_criterion(nspec, n, stream, tol)
        if v.status != FALSIFIED:
            return _fail(f"midpoint: {v.status}, wanted Falsified")
        if abs(v.witness["n_mid"] - 1.0) > 1e-12:
            return _fail(f"witness N(mid) = {v.witness['n_mid']!r} not within 1e-12 of 1")
        return _ok(f"edge chord witness, N(mid) = {v.witness['n_mid']!r}")

    def a_equiv(nspec, stream, tol, n):
        return _assert_status(rotundity_equivalence_check(nspec, n, stream, tol),
                              "Supported", "rotundity equivalences")

    def a_match(nspec, stream, tol, n):
        return _midpoint_matches_ssc(nspec, stream, tol, n)

    return Fixture(
        "hexagon_polyhedral_norm", "norm",
        "gauge of the regular hexagon: a symmetric polyhedral norm, hence not "
        "rotund; every edge is a flat chord of the unit sphere",
        build,
        (
            ("vertices_and_edges_unit", a_vertices_unit),
            ("axioms", a_axioms),
            ("midpoint_falsified", a_midpoint),
            ("rotundity_equivalences", a_equiv),
            ("midpoint_matches_strict_subconvexity", a_match),
        ),
    )


def _fx_square_gauge():
    def build():
        return square_gauge_pair()

    def a_identity(subject, stream, tol, n):
        s, t = subject
        gs = GaugeEvaluator(s, tol)
        gt = GaugeEvaluator(t, tol)
        dirs = np.concatenate([
            np.array([[1.0, 1.0], [1.0, -1.0], [1.0, 0.3], [0.2, -1.0], [-0.7, 0.4]]),
            stream.directions(min(n, 256), 2) * stream.log_uniform(0.25, 4.0, min(n, 256))[:, None],
        ])
        ps = gauge_values(gs, dirs)
        pt = gauge_values(gt, dirs)
        linf = np.max(np.abs(dirs), axis=1)
        if np.max(np.abs(ps - linf)) > 1e-9:
            return _fail(f"gauge of S deviates from sup norm by {np.max(np.abs(ps - linf))}")
        if np.max(np.abs(pt - linf)) > 1e-9:
            return _fail(f"gauge of T deviates from sup norm by {np.max(np.abs(pt - linf))}")
        return _ok("p_S = p_T = sup norm at all probes, although S is not convex")

    def a_norm_from_gauge(subject, stream, tol, n):
        _, t = subject
        nspec = norm_from_gauge(t, tol)
        rep = validate_axioms(nspec, min(n, 300), stream, tol)
        if not rep.overall.ok:
            return _fail(f"axioms of the recovered norm: {rep.overall.status}")
        v = midpoint_criterion(nspec, min(n, 300), stream.substream("mc"), tol)
        if v.status != FALSIFIED:
            return _fail(f"recovered sup norm should fail rotundity, got {v.status}")
        ssc = test_strictly_sub_convex(from_norm(nspec), min(n, 300),
                                       stream.substream("ssc"), tol)
        if ssc.status != FALSIFIED:
            return _fail(f"strict sub-convexity should fail, got {ssc.status}")
        return _ok("gauge-recovered sup norm validates and fails rotundity, consistently")

    return Fixture(
        "square_gauge_identity", "set",
        "the open square plus two opposite corners is not convex, yet its gauge "
        "equals the gauge of the closed square, the sup norm: a convex gauge "
        "can come from a non-convex set",
        build,
        (("gauges_match_sup_norm", a_identity),
         ("norm_from_gauge_consistent", a_norm_from_gauge)),
    )


# ---------------------------------------------------------------- registry


def _registry():
    fixtures = [
        _fx_disk_union_ray(),
        _fx_rational_rays(),
        _fx_sqrt2_max(),
        _fx_sqrt2_min(),
        _fx_cone_ratio(),
        _fx_square_in_disk(),
        _fx_open_cone(),
        _fx_product_barrier(),
        _fx_truncated_phi(),
        _fx_step(),
        _fx_lp(1.0),
        _fx_lp(1.5),
        _fx_lp(2.0),
        _fx_lp(3.0),
        _fx_lp(math.inf),
        _fx_funk(),
        _fx_hexagon(),
        _fx_square_gauge(),
    ]
    return {f.name: f for f in fixtures}


def list_fixtures():
    """The corpus, in registration order; names are part of the CLI contract."""
    return list(_registry().values())


def get_fixture(name: str, **params) -> Fixture:
    reg = _registry()
    if name == "truncated_phi_norm" and params.get("d"):
        return _fx_truncated_phi(int(params["d"]))
    if name not in reg:
        raise InputError(f"unknown fixture {name!r}; known: {sorted(reg)}")
    return reg[name]


def run_fixture(name: str, stream: SampleStream, tol: ToleranceProfile = DEFAULT_TOL,
                n_samples: int = 1500, **params) -> Verdict:
    """Execute all assertions of a fixture: Supported iff every one passes,
    otherwise Falsified with the first mismatch."""
    fx = get_fixture(name, **params)
    subject = fx.build()
    details = []
    effort = 0
    for aname, fn in fx.assertions:
        ok, detail = fn(subject, stream.substream(aname), tol, n_samples)
        effort += n_samples
        details.append(f"{aname}: {detail}")
        if not ok:
            return falsified({"assertion": aname, "detail": detail}, effort=effort,
                             note=f"fixture {name} failed {aname}")
    return supported(effort=effort, note="; ".join(details))
