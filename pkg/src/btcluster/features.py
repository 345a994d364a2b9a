"""Color-moment (9-d) and block-truncation-coding (18-d) image descriptors.

Channel samples are 8-bit integers, so moments of integral data are
computed from exact integer power sums: every central moment is a ratio of
two integers and comes out correctly rounded. This keeps the skewness, a
cube root that magnifies tiny errors near zero, stable and makes the
descriptors exactly invariant to pixel order. Non-integral input falls back
to compensated (``math.fsum``) two-pass float sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .imagery import ChannelValues, RgbImage, split_channels

METHODS = ("moments", "btc")
DIMENSIONS = {"moments": 9, "btc": 18}


class Moments(NamedTuple):
    mean: float
    stddev: float
    skewness: float


@dataclass(frozen=True)
class FeatureVector:
    """One image's descriptor plus its id and optional class label."""

    image_id: str
    label: Optional[str]
    method: str
    values: tuple

    def __post_init__(self):
        if self.method not in DIMENSIONS:
            raise ValueError(f"unknown feature method {self.method!r}")
        values = tuple(float(v) for v in self.values)
        if len(values) != DIMENSIONS[self.method]:
            raise ValueError(
                f"{self.method} vectors have {DIMENSIONS[self.method]} values, got {len(values)}"
            )
        object.__setattr__(self, "values", values)

    def with_values(self, values):
        return FeatureVector(self.image_id, self.label, self.method, values)


@dataclass(frozen=True)
class BtcPartition:
    high: ChannelValues
    low: ChannelValues
    threshold: float


def signed_cbrt(x: float) -> float:
    return float(np.cbrt(x))


def _as_array(values):
    if isinstance(values, ChannelValues):
        return values.values
    return np.asarray(values).reshape(-1)


def _integral(arr):
    """Return ``arr`` as int64 if every value is a whole number, else None."""
    if arr.dtype.kind in "iu":
        return arr.astype(np.int64, copy=False)
    if arr.dtype.kind == "f" and np.all(np.isfinite(arr)) and np.all(arr == np.floor(arr)):
        if np.all(np.abs(arr) < 2**31):
            return arr.astype(np.int64)
    return None


def _power_sums(ints):
    """Exact ``(n, sum v, sum v**2, sum v**3)`` as Python ints."""
    n = int(ints.size)
    lo = int(ints.min())
    if lo >= 0 and int(ints.max()) < 65536:
        counts = np.bincount(ints).astype(object)
        levels = np.arange(counts.size, dtype=object)
        weighted = counts * levels
        return n, int(weighted.sum()), int((weighted * levels).sum()), int((weighted * levels * levels).sum())
    vals = [int(v) for v in ints.tolist()]
    return n, sum(vals), sum(v * v for v in vals), sum(v * v * v for v in vals)


def moments_of(values, fallback_mean: float = 0.0) -> Moments:
    """Mean, standard deviation and signed-cube-root skewness of ``values``.

    All three are population moments (divide by the number of values). An
    empty input yields ``(fallback_mean, 0, 0)``.
    """
    arr = _as_array(values)
    n = arr.size
    if n == 0:
        return Moments(float(fallback_mean), 0.0, 0.0)

    ints = _integral(arr)
    if ints is not None:
        n, s1, s2, s3 = _power_sums(ints)
        # int / int is correctly rounded in Python
        mean = s1 / n
        var = (n * s2 - s1 * s1) / (n * n)
        third = (n * n * s3 - 3 * n * s1 * s2 + 2 * s1**3) / n**3
    else:
        vals = arr.astype(np.float64)
        mean = math.fsum(vals) / n
        dev = vals - mean
        var = math.fsum(dev * dev) / n
        third = math.fsum(dev * dev * dev) / n
    return Moments(mean, math.sqrt(var), signed_cbrt(third))


def btc_split(plane: ChannelValues) -> BtcPartition:
    """Split a plane at its mean: strictly-above goes high, the rest low."""
    arr = plane.values
    if arr.size == 0:
        raise ValueError("cannot split an empty plane")
    ints = _integral(arr)
    if ints is not None:
        n = ints.size
        total = int(ints.sum(dtype=np.int64))
        threshold = total / n
        # v > total/n  <=>  v*n > total, decided without rounding
        above = ints * n > total
    else:
        threshold = math.fsum(arr.astype(np.float64)) / arr.size
        above = arr > threshold
    tag = plane.source
    return BtcPartition(
        high=ChannelValues(arr[above], tag + "H"),
        low=ChannelValues(arr[~above], tag + "L"),
        threshold=threshold,
    )


def partition_moments(part: ChannelValues, threshold: float) -> Moments:
    """Moments of one BTC partition, normalized by the partition's own size.

    Empty partitions (a constant channel has nothing strictly above its
    mean) report the threshold as their mean.
    """
    return moments_of(part, fallback_mean=threshold)


def color_moments(image: RgbImage, image_id: str = "", label: Optional[str] = None) -> FeatureVector:
    values = []
    for plane in split_channels(image):
        values.extend(moments_of(plane))
    return FeatureVector(image_id, label, "moments", values)


def btc_features(image: RgbImage, image_id: str = "", label: Optional[str] = None) -> FeatureVector:
    """18 values: mean, sd, skew for RH, RL, GH, GL, BH, BL in that order."""
    values = []
    for plane in split_channels(image):
        part = btc_split(plane)
        values.extend(partition_moments(part.high, part.threshold))
        values.extend(partition_moments(part.low, part.threshold))
    return FeatureVector(image_id, label, "btc", values)


EXTRACTORS = {"moments": color_moments, "btc": btc_features}


def extract(image: RgbImage, method: str, image_id: str = "", label: Optional[str] = None) -> FeatureVector:
    try:
        fn = EXTRACTORS[method]
    except KeyError:
        raise ValueError(f"unknown feature method {method!r}; expected one of {METHODS}") from None
    return fn(image, image_id=image_id, label=label)
