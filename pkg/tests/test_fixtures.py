import numpy as np
import pytest

from gaugekit.core import InputError, SampleStream, ToleranceProfile
from gaugekit.fixtures import Fixture, get_fixture, list_fixtures, run_fixture

TOL = ToleranceProfile()

REQUIRED_NAMES = {
    "disk_union_ray",
    "rational_rays_surrogate",
    "sqrt2_max_cone_function",
    "sqrt2_min_cone_function",
    "cone_ratio_function",
    "square_in_disk_discontinuous",
    "open_cone_euclidean",
    "product_barrier_composition",
    "truncated_phi_norm",
    "step_function",
    "lp(1)",
    "lp(1.5)",
    "lp(2)",
    "lp(3)",
    "lp(inf)",
    "funk_disk_norm",
    "hexagon_polyhedral_norm",
    "square_gauge_identity",
}


def test_corpus_names_stable():
    names = {fx.name for fx in list_fixtures()}
    assert REQUIRED_NAMES <= names
    assert len(names) >= 14


def test_fixture_metadata():
    for fx in list_fixtures():
        assert isinstance(fx, Fixture)
        assert fx.kind in ("set", "norm", "function", "composition")
        assert fx.provenance
        assert fx.expected  # every assertion is named and replayable


def test_unknown_fixture_rejected():
    with pytest.raises(InputError):
        run_fixture("no_such_fixture", SampleStream(1))


def test_truncated_phi_parameterized():
    fx = get_fixture("truncated_phi_norm", d=16)
    assert fx.params["d"] == 16
    v = run_fixture("truncated_phi_norm", SampleStream(1), n_samples=300, d=16)
    assert v.status == "Supported"


@pytest.mark.parametrize("seed", [1, 2, 3])
@pytest.mark.parametrize("name", sorted(REQUIRED_NAMES))
def test_corpus_stability(name, seed):
    v = run_fixture(name, SampleStream(seed), TOL, n_samples=700)
    assert v.status == "Supported", v.witness


def test_run_fixture_deterministic():
    a = run_fixture("lp(2)", SampleStream(42), n_samples=300)
    b = run_fixture("lp(2)", SampleStream(42), n_samples=300)
    assert a.status == b.status and a.note == b.note
