import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ecoval.errors import DegenerateWeightsError, DomainError
from ecoval.mcda import (GradeScale, IndicatorPanel, defuzzify, entropy_weights,
                         fuzzy_composite, normalize_weights, reweight_yearly)

CITY_L_R = [[0.7723, 0.5383, 0.5443, 0.032, 0.733],
           [0.0024, 0.0, 0.7742, 0.042, 0.134],
           [0.8932, 0.2234, 0.2574, 0.045, 0.356],
           [0.3334, 0.1595, 0.1241, 0.024, 0.251],
           [0.1672, 0.4325, 0.0004, 0.234, 0.001]]
CITY_L_W = [0.452, 0.675, 0.986, 0.463, 0.523]
# exact rational matrix product of W/3.099 with R, rounded to double
CITY_L_B = [0.4753806389157793, 0.24641174572442723, 0.34852291061632784,
           0.07120942239432075, 0.28703388189738627]
CITY_L_THETA_DEFAULT_SCALE = 0.5965826388818458


def test_constant_column_gets_zero_weight():
    w = entropy_weights(IndicatorPanel.of([[5.0, 1.0], [5.0, 2.0], [5.0, 7.0]]))
    assert w.weights == (0.0, 1.0)


def test_identical_columns_split_evenly():
    w = entropy_weights(IndicatorPanel.of([[1.0, 1.0], [3.0, 3.0], [2.0, 2.0]]))
    assert w.weights == (0.5, 0.5)


def test_two_by_two_against_hand_pass():
    # min-max leaves [[1,0],[0,1]]; p is one-hot per column, so e = 0 and w = (0.5, 0.5)
    w = entropy_weights(IndicatorPanel.of([[1.0, 0.0], [0.0, 1.0]]))
    assert w.weights == pytest.approx(oracles.entropy([[1.0, 0.0], [0.0, 1.0]]))
    assert w.weights == (0.5, 0.5)


def test_cost_orientation_matches_oracle():
    mat = [[3.0, 10.0, 0.2], [1.0, 14.0, 0.9], [2.0, 11.0, 0.4], [6.0, 12.0, 0.1]]
    panel = IndicatorPanel.of(mat, ["benefit", "cost", "benefit"])
    assert entropy_weights(panel).weights == pytest.approx(
        oracles.entropy(mat, cost_columns=(1,)), rel=1e-12)


def test_entropy_errors():
    with pytest.raises(DegenerateWeightsError):
        entropy_weights(IndicatorPanel.of([[1.0, 2.0], [1.0, 2.0]]))
    with pytest.raises(DomainError, match="all-zero"):
        entropy_weights(IndicatorPanel.of([[0.0, 2.0], [0.0, 3.0]]))
    with pytest.raises(DomainError, match="at least 2"):
        entropy_weights(IndicatorPanel.of([[1.0, 2.0]]))


def test_normalize_examples():
    assert normalize_weights([1, 1, 1, 1]).weights == (0.25,) * 4
    assert normalize_weights([2, 0]).weights == (1.0, 0.0)
    w = normalize_weights(CITY_L_W).weights
    assert w == pytest.approx([v / 3.099 for v in CITY_L_W], rel=1e-15)
    assert math.fsum(w) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        normalize_weights([0, 0])


def test_city_l_composition_matches_matrix_oracle():
    w = normalize_weights(CITY_L_W)
    b = fuzzy_composite(w, CITY_L_R)
    assert b == pytest.approx(CITY_L_B, rel=1e-12)
    assert b == pytest.approx(oracles.matvec_left(list(w.weights), CITY_L_R), rel=1e-12)
    assert defuzzify(b) == pytest.approx(CITY_L_THETA_DEFAULT_SCALE, rel=1e-12)


def test_composite_mismatch_and_unnormalized():
    with pytest.raises(DomainError):
        fuzzy_composite([0.5, 0.5], CITY_L_R)
    with pytest.raises(DomainError, match="normalized"):
        fuzzy_composite(CITY_L_W, CITY_L_R)


def test_defuzzify_examples():
    assert defuzzify([0, 0, 1, 0, 0]) == 0.5
    assert defuzzify([1, 0, 0, 0, 0]) == 1.0
    assert defuzzify([0.2] * 5, GradeScale((1, 0.75, 0.5, 0.25, 0))) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        defuzzify([0] * 5)


def test_grade_scale_validation():
    assert GradeScale().violations() == []
    assert GradeScale((0.1, 0.1, 0.3)).violations()
    assert GradeScale((0.1, 1.5)).violations()


def test_reweight_yearly():
    a = IndicatorPanel.of([[1.0, 4.0], [2.0, 1.0], [3.0, 3.0]])
    same = reweight_yearly({2019: a, 2018: a})
    assert list(same) == [2018, 2019] and same[2018] == same[2019]
    assert reweight_yearly({2019: a}) == {2019: entropy_weights(a)}
    # 2019 has the second indicator's values bunched together, so weight moves to the first
    spread = IndicatorPanel.of([[1.0, 1.0], [2.0, 5.0], [3.0, 9.0], [4.0, 2.0]])
    bunched = IndicatorPanel.of([[1.0, 1.0], [2.0, 9.0], [3.0, 9.0], [4.0, 9.0]])
    out = reweight_yearly({2018: spread, 2019: bunched})
    assert out[2018].weights == pytest.approx(oracles.entropy(spread.matrix))
    assert out[2019].weights == pytest.approx(oracles.entropy(bunched.matrix))
    assert out[2019].weights[0] > out[2018].weights[0]


def test_reweight_tags_year():
    bad = IndicatorPanel.of([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(DegenerateWeightsError, match="year 2017"):
        reweight_yearly({2017: bad})


panels = st.integers(2, 7).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.floats(0.1, 100), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@settings(max_examples=200)
@given(panels, st.floats(0.01, 1e3))
def test_benefit_column_scaling_invariance(mat, k):
    panel = IndicatorPanel.of(mat)
    try:
        w = entropy_weights(panel)
    except DegenerateWeightsError:
        return
    scaled = [[row[0] * k] + list(row[1:]) for row in mat]
    assert entropy_weights(IndicatorPanel.of(scaled)).weights == pytest.approx(
        w.weights, rel=1e-12, abs=1e-12)


@given(st.lists(st.floats(0, 1), min_size=3, max_size=3).filter(lambda v: sum(v) > 0),
       st.lists(st.floats(0, 1), min_size=3, max_size=3).filter(lambda v: sum(v) > 0),
       st.floats(0, 1),
       st.lists(st.lists(st.floats(0, 1), min_size=4, max_size=4), min_size=3, max_size=3))
def test_composition_linear_in_weights(w1, w2, alpha, r):
    w1, w2 = normalize_weights(w1).as_array(), normalize_weights(w2).as_array()
    mixed = fuzzy_composite(alpha * w1 + (1 - alpha) * w2, r)
    expect = alpha * fuzzy_composite(w1, r) + (1 - alpha) * fuzzy_composite(w2, r)
    assert mixed == pytest.approx(expect, rel=1e-12, abs=1e-12)


@given(st.lists(st.floats(0, 1), min_size=5, max_size=5).filter(lambda v: sum(v) > 0),
       st.lists(st.floats(0.0, 1.0), min_size=5, max_size=5).map(sorted))
def test_defuzzify_within_scale(b, grades):
    if len(set(grades)) < 5:
        return
    theta = defuzzify(b, GradeScale(tuple(grades)))
    assert min(grades) <= theta <= max(grades)


def test_entropy_permutations_on_random_panels():
    rng = np.random.default_rng(11)
    for _ in range(100):
        mat = rng.uniform(0, 10, size=(rng.integers(2, 8), rng.integers(1, 6)))
        w = entropy_weights(IndicatorPanel.of(mat)).weights
        rows = rng.permutation(mat.shape[0])
        cols = rng.permutation(mat.shape[1])
        assert entropy_weights(IndicatorPanel.of(mat[rows])).weights == w
        permuted = entropy_weights(IndicatorPanel.of(mat[:, cols])).weights
        assert permuted == tuple(w[c] for c in cols)
