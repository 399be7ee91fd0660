import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdei.efficiency import (
    EfficiencyInputs,
    delta_loss,
    efficiency_from_losses,
    efficiency_record,
    efficiency_score,
    proportion_reduced,
    should_stop,
)

# 100 - 50 / (1 + ln 2) computed with mpmath at 40 digits
HALF_PROGRESS_UNIT_DELTA = 70.469194542517937513


def test_proportion_reduced():
    assert proportion_reduced(10, 10) == 0
    assert proportion_reduced(10, 0) == 1
    assert proportion_reduced(8, 2) == 0.75
    assert proportion_reduced(4, 6) == -0.5
    with pytest.raises(ValueError):
        proportion_reduced(0, 1)


def test_delta_loss():
    assert delta_loss(5, 5) == 0
    assert delta_loss(5, 3) == delta_loss(3, 5) == 2
    assert delta_loss(0.1, 0.4) == pytest.approx(0.3, abs=1e-15)


def test_efficiency_score_pinned_cases():
    assert efficiency_score(1.0, 0.0) == 0.0
    assert efficiency_score(0.0, 3.0) == 99.0
    assert efficiency_score(-2.0, 0.0) == 99.0
    assert efficiency_score(0.5, 1.0) == pytest.approx(HALF_PROGRESS_UNIT_DELTA, abs=1e-9)


def test_efficiency_score_rejects_negative_delta():
    with pytest.raises(ValueError):
        efficiency_score(0.5, -1.0)


def test_efficiency_from_losses_examples():
    assert efficiency_from_losses(EfficiencyInputs(10, 10, 10)) == 99.0
    assert efficiency_from_losses(EfficiencyInputs(10, 0, 0)) == 0.0
    assert efficiency_from_losses(EfficiencyInputs(10, 6, 5)) == pytest.approx(
        HALF_PROGRESS_UNIT_DELTA, abs=1e-9
    )


def test_substituted_form_agrees():
    # the fully substituted single-fraction form of the index
    def substituted(l0, lp, lk):
        inner = 100 * (l0 - lk) / (l0 * (1 + math.log(1 + (lp - lk) ** 2)))
        return 100 - min(100, max(1, inner))

    rng = np.random.default_rng(4)
    for _ in range(1000):
        l0 = rng.uniform(0.1, 50)
        lp, lk = rng.uniform(0, 60, size=2)
        assert efficiency_from_losses(EfficiencyInputs(l0, lp, lk)) == pytest.approx(
            substituted(l0, lp, lk), abs=1e-10
        )


def test_inputs_validation():
    with pytest.raises(ValueError):
        EfficiencyInputs(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        EfficiencyInputs(1.0, math.inf, 1.0)


def test_efficiency_record_fields():
    r = efficiency_record(7, 10.0, 6.0, 5.0)
    assert (r.k, r.p_k, r.delta_k) == (7, 0.5, 1.0)
    assert r.e_k == efficiency_from_losses(EfficiencyInputs(10.0, 6.0, 5.0))


@settings(max_examples=300, deadline=None)
@given(p=st.floats(-10, 10), d=st.floats(0, 1e6))
def test_score_range(p, d):
    assert 0.0 <= efficiency_score(p, d) <= 99.0


def test_score_range_extremes():
    for p in (-1e300, -10.0, 0.0, 1e-300, 1.0, 10.0, 1e300):
        for d in (0.0, 1e-300, 1.0, 1e6, 1e200, math.inf):
            assert 0.0 <= efficiency_score(p, d) <= 99.0


@settings(max_examples=200, deadline=None)
@given(d=st.floats(0, 1e3), p1=st.floats(-10, 10), p2=st.floats(-10, 10))
def test_monotone_in_progress(d, p1, p2):
    lo, hi = sorted((p1, p2))
    assert efficiency_score(hi, d) <= efficiency_score(lo, d)


@settings(max_examples=200, deadline=None)
@given(p=st.floats(1e-6, 10), d1=st.floats(0, 1e6), d2=st.floats(0, 1e6))
def test_monotone_in_instability(p, d1, d2):
    lo, hi = sorted((d1, d2))
    assert efficiency_score(p, hi) >= efficiency_score(p, lo)


@settings(max_examples=200, deadline=None)
@given(p=st.floats(1e-3, 1), d=st.floats(1e-3, 1e3))
def test_stability_damping_closed_form(p, d):
    # keep the ratio strictly inside the clamps so the score is the raw formula
    inner_d = 100 * p / (1 + math.log(1 + d * d))
    inner_2d = 100 * p / (1 + math.log(1 + d * d) + math.log((1 + 4 * d * d) / (1 + d * d)))
    if not (1 < inner_2d and inner_d < 100):
        return
    assert efficiency_score(p, 2 * d) == pytest.approx(100 - inner_2d, abs=1e-12)
    assert efficiency_score(p, d) == pytest.approx(100 - inner_d, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    l0=st.floats(1e-6, 1e6),
    lp=st.floats(0, 1e6),
    lk=st.floats(0, 1e6),
)
def test_composition_bit_exact(l0, lp, lk):
    composed = efficiency_score(proportion_reduced(l0, lk), delta_loss(lp, lk))
    assert efficiency_from_losses(EfficiencyInputs(l0, lp, lk)) == composed


@pytest.mark.parametrize(
    "scores,threshold,patience,expected",
    [
        ((99, 99, 99), 5, 3, False),
        ((4, 3, 2), 5, 3, True),
        ((4, 3), 5, 3, False),
        ((9, 4, 3, 2), 5, 3, True),
        ((4, 9, 3, 2), 5, 3, False),
        ((5, 5), 5, 2, True),
        ((), 5, 1, False),
    ],
)
def test_should_stop(scores, threshold, patience, expected):
    assert should_stop(list(scores), threshold, patience) is expected


def test_should_stop_rejects_bad_patience():
    with pytest.raises(ValueError):
        should_stop([1.0], 5, 0)
