"""gaugekit: gauges of oracle-defined sets, Minkowski norms, convexity certification.

The toolkit works on finite-dimensional real vector spaces (numpy vectors).
It evaluates the gauge (Minkowski functional) of star-shaped membership
oracles, validates the four Minkowski-norm axioms on built-in and
user-defined norm families, classifies functions along the convexity
taxonomy (convex / strictly convex / quasi- / strictly quasi- / sub- /
strictly sub-convex), and cross-checks the characterization theorems that
tie those notions together on a built-in fixture corpus.

Sampling-based checks never claim proof: every certifier returns a
four-valued Verdict (Proven / Supported / Falsified / Inconclusive) where
Proven is reserved for analytic classifications of built-in families.
"""

__version__ = "0.1.0"

from .core import (
    ToleranceProfile,
    SampleStream,
    Verdict,
    PROVEN,
    SUPPORTED,
    FALSIFIED,
    INCONCLUSIVE,
    combine_verdicts,
    sample_direction,
)
from .sets import SetOracle, hull_contains, absorbs, probe_star_shaped, probe_cone, affine_dimension
from .gauge import GaugeEvaluator, gauge_value, gauge_values, gauge_sublevel, sandwich_check, continuity_probe
from .norms import (
    MinkowskiNormSpec,
    lp_norm,
    weighted_lp_norm,
    ellipsoid_norm,
    funk_norm,
    polyhedral_norm,
    expression_norm,
    truncated_phi_norm,
    evaluate,
    validate_axioms,
    symmetric_part,
    asymmetry_constant,
    norm_from_gauge,
)
from .certify import (
    HomogeneousFunctionSpec,
    test_convex,
    test_strictly_convex,
    test_quasi_convex,
    test_strictly_quasi_convex,
    test_sub_convex,
    test_strictly_sub_convex,
    power_transform,
    midpoint_criterion,
    rotundity_equivalence_check,
    main_equivalence_harness,
    cone_equivalence_harness,
    composition_check,
)
from .fixtures import list_fixtures, run_fixture
