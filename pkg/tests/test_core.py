import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaugekit.core import (
    FALSIFIED,
    INCONCLUSIVE,
    PROVEN,
    SUPPORTED,
    InputError,
    SampleStream,
    ToleranceProfile,
    Verdict,
    combine_verdicts,
    extended_reciprocal,
    sample_direction,
)


def test_tolerance_defaults():
    tol = ToleranceProfile()
    assert tol.eps_eq == 1e-9
    assert tol.eps_strict == 1e-7
    assert tol.eps_bisect == 1e-12
    assert tol.max_bracket == 1e12
    assert tol.max_iter == 200


def test_tolerance_invariants():
    with pytest.raises(InputError):
        ToleranceProfile(eps_bisect=1e-6, eps_strict=1e-7)  # bisect >= strict
    with pytest.raises(InputError):
        ToleranceProfile(eps_strict=1e-6, eps_eq=1e-9)  # strict > 100*eq
    with pytest.raises(InputError):
        ToleranceProfile(max_bracket=0.5)


def test_extended_reciprocal_conventions():
    assert extended_reciprocal(0.0) == float("inf")
    assert extended_reciprocal(float("inf")) == 0.0
    assert extended_reciprocal(4.0) == 0.25
    # lam * inf = inf for lam > 0 comes free with floats
    assert 2.5 * float("inf") == float("inf")


def test_sample_direction_unit_and_deterministic():
    u = sample_direction(SampleStream(7), 2)
    assert abs(np.linalg.norm(u) - 1.0) <= 1e-9
    again = sample_direction(SampleStream(7), 2)
    assert np.array_equal(u, again)


def test_sample_direction_dim1_is_sign():
    for seed in range(20):
        u = sample_direction(SampleStream(seed), 1)
        assert u[0] in (-1.0, 1.0)


def test_sample_direction_rejects_dim0():
    with pytest.raises(InputError):
        sample_direction(SampleStream(1), 0)


@given(st.integers(min_value=0, max_value=2 ** 63), st.integers(min_value=1, max_value=6))
@settings(max_examples=25, deadline=None)
def test_stream_determinism(seed, dim):
    a = SampleStream(seed).directions(8, dim)
    b = SampleStream(seed).directions(8, dim)
    assert np.array_equal(a, b)


def test_stream_operations_advance():
    s = SampleStream(3)
    first = s.normals(4)
    second = s.normals(4)
    assert not np.array_equal(first, second)
    assert s.counter == 2


def test_substreams_are_disjoint_and_stable():
    s = SampleStream(5)
    a = s.substream("alpha").normals(16)
    b = s.substream("beta").normals(16)
    a2 = SampleStream(5).substream("alpha").normals(16)
    assert np.array_equal(a, a2)
    assert not np.array_equal(a, b)


_STATUSES = [PROVEN, SUPPORTED, FALSIFIED, INCONCLUSIVE]


def test_combine_verdict_examples():
    assert combine_verdicts([Verdict(PROVEN), Verdict(PROVEN)]).status == PROVEN
    assert combine_verdicts([Verdict(PROVEN), Verdict(FALSIFIED, witness=1)]).status == FALSIFIED
    assert combine_verdicts([Verdict(SUPPORTED), Verdict(PROVEN)]).status == SUPPORTED
    assert combine_verdicts([Verdict(INCONCLUSIVE), Verdict(SUPPORTED)]).status == INCONCLUSIVE


def test_combine_empty_rejected():
    with pytest.raises(InputError):
        combine_verdicts([])


@given(st.lists(st.sampled_from(_STATUSES), min_size=1, max_size=8))
@settings(max_examples=200, deadline=None)
def test_combine_lattice(statuses):
    order = {PROVEN: 0, SUPPORTED: 1, INCONCLUSIVE: 2, FALSIFIED: 3}
    out = combine_verdicts([Verdict(s, effort=1) for s in statuses])
    assert out.status == max(statuses, key=lambda s: order[s])
    assert out.effort == len(statuses)


@given(st.lists(st.floats(min_value=-10, max_value=10), min_size=1, max_size=6))
@settings(max_examples=100, deadline=None)
def test_combine_margin_is_min(margins):
    out = combine_verdicts([Verdict(SUPPORTED, margin=m) for m in margins])
    assert out.margin == min(margins)


def test_verdict_ok_and_unknown_status():
    assert Verdict(PROVEN).ok and Verdict(SUPPORTED).ok
    assert not Verdict(FALSIFIED, witness=0).ok and not Verdict(INCONCLUSIVE).ok
    with pytest.raises(InputError):
        Verdict("Maybe")
