import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from btcluster.features import (
    FeatureVector,
    btc_features,
    btc_split,
    color_moments,
    extract,
    moments_of,
)
from btcluster.imagery import ChannelValues, RgbImage, split_channels

SQRT3 = 1.7320508075688772
CBRT6 = 1.8171205928321397


def image(height, width, red=None, green=None, blue=None):
    n = height * width
    planes = [np.asarray(p if p is not None else [0] * n) for p in (red, green, blue)]
    return RgbImage(np.stack(planes, axis=1).reshape(height, width, 3))


@pytest.mark.parametrize(
    "values, fallback, expected",
    [
        ([5, 5, 5, 5], 0, (5, 0, 0)),
        ([0, 0, 0, 4], 0, (1, SQRT3, CBRT6)),
        ([], 25, (25, 0, 0)),
        ([0, 4, 4, 0], 0, (2, 2, 0)),
    ],
)
def test_moments_examples(values, fallback, expected):
    got = moments_of(values, fallback_mean=fallback)
    assert got == pytest.approx(expected, abs=1e-15)


def test_hand_values_agree_with_oracle():
    # the frozen constants above came from this computation
    assert oracles.moments([0, 0, 0, 4]) == pytest.approx((1, math.sqrt(3), 6 ** (1 / 3)), abs=1e-15)


def test_negative_skew_is_real():
    m = moments_of([4, 4, 4, 0])
    assert m.skewness == pytest.approx(-CBRT6, abs=1e-15)


def test_float_path_matches_oracle():
    vals = [0.5, 1.25, 7.75, 3.0, 3.0]
    assert moments_of(vals) == pytest.approx(oracles.moments(vals), abs=1e-12)


def test_symmetric_levels_have_exactly_zero_skew():
    # {0, 128, 255}-style data where rounding in a naive float pass would leave
    # a tiny third moment, which the cube root inflates to ~1e-4
    m = moments_of([0, 127, 254, 0, 127, 254, 0, 127, 254])
    assert m.skewness == 0.0


def test_color_moments_constant():
    fv = color_moments(image(2, 2, [10] * 4, [20] * 4, [30] * 4))
    assert fv.method == "moments"
    assert fv.values == (10, 0, 0, 20, 0, 0, 30, 0, 0)


def test_color_moments_red_ramp():
    fv = color_moments(image(1, 4, red=[0, 0, 0, 4]))
    assert fv.values[:3] == pytest.approx((1, SQRT3, CBRT6), abs=1e-15)
    assert fv.values[3:] == (0,) * 6


def test_btc_split_examples():
    p = btc_split(ChannelValues(np.array([10, 20, 30, 40]), "R"))
    assert p.threshold == 25
    assert p.high.values.tolist() == [30, 40] and p.high.source == "RH"
    assert p.low.values.tolist() == [10, 20] and p.low.source == "RL"

    p = btc_split(ChannelValues(np.array([5, 5, 5, 5]), "G"))
    assert p.threshold == 5 and len(p.high) == 0 and p.low.values.tolist() == [5, 5, 5, 5]

    p = btc_split(ChannelValues(np.array([1, 2]), "B"))
    assert p.threshold == 1.5 and p.high.values.tolist() == [2] and p.low.values.tolist() == [1]


def test_btc_split_keeps_order_and_ties_low():
    p = btc_split(ChannelValues(np.array([3, 1, 2, 0, 4, 2]), "R"))
    assert p.threshold == 2
    assert p.high.values.tolist() == [3, 4]
    assert p.low.values.tolist() == [1, 2, 0, 2]


def test_btc_features_example():
    fv = btc_features(image(2, 2, red=[10, 20, 30, 40]))
    assert fv.method == "btc" and len(fv.values) == 18
    assert fv.values[0:3] == (35, 5, 0)
    assert fv.values[3:6] == (15, 5, 0)
    assert fv.values[6:] == (0,) * 12


def test_btc_features_constant_uses_threshold_fallback():
    fv = btc_features(image(2, 2, [5] * 4, [5] * 4, [5] * 4))
    assert fv.values == (5, 0, 0) * 6


def test_partition_moments_use_partition_size():
    # high partition {30, 40}: normalizing by 4 pixels instead of 2 would halve the mean
    fv = btc_features(image(2, 2, red=[10, 20, 30, 40]))
    assert fv.values[0] == 35


@pytest.mark.parametrize("method", ["moments", "btc"])
def test_permuted_pixels_give_identical_vector(method, rng):
    px = rng.integers(0, 256, size=(9, 11, 3), dtype=np.uint8)
    flat = px.reshape(-1, 3)[rng.permutation(99)]
    a = extract(RgbImage(px), method)
    b = extract(RgbImage(flat.reshape(9, 11, 3)), method)
    assert a.values == b.values


@settings(max_examples=60)
@given(st.lists(st.integers(0, 255), min_size=1, max_size=40))
def test_moments_match_oracle(values):
    got = moments_of(values)
    want = oracles.moments(values)
    assert got == pytest.approx(want, abs=1e-12, rel=1e-12)
    assert got.stddev >= 0
    third = oracles.moments(values)[2]
    assert np.sign(got.skewness) == np.sign(third)


def test_feature_vector_checks_length():
    with pytest.raises(ValueError):
        FeatureVector("a", None, "btc", [0.0] * 9)
    with pytest.raises(ValueError):
        FeatureVector("a", None, "hist", [0.0] * 9)
    with pytest.raises(ValueError):
        extract(image(1, 1), "hist")


def test_partition_completeness(rng):
    px = rng.integers(0, 4, size=(13, 7, 3), dtype=np.uint8)
    for plane in split_channels(RgbImage(px)):
        part = btc_split(plane)
        assert len(part.high) + len(part.low) == 91
        assert np.all(part.high.values > part.threshold)
        assert np.all(part.low.values <= part.threshold)
