"""Cluster color images by color-moment or block-truncation-coding features."""

__version__ = "0.1.0"

from .clustering import KMeansConfig, KMeansModel, kmeans, nearest_centroid, init_centroids
from .evaluation import EvaluationReport, LabeledAssignment, map_clusters, score
from .features import FeatureVector, Moments, btc_features, btc_split, color_moments, moments_of
from .imagery import ChannelValues, RgbImage, decode_ppm, encode_ppm, load_image, split_channels

__all__ = [
    "ChannelValues",
    "EvaluationReport",
    "FeatureVector",
    "KMeansConfig",
    "KMeansModel",
    "LabeledAssignment",
    "Moments",
    "RgbImage",
    "btc_features",
    "btc_split",
    "color_moments",
    "decode_ppm",
    "encode_ppm",
    "init_centroids",
    "kmeans",
    "load_image",
    "map_clusters",
    "moments_of",
    "nearest_centroid",
    "score",
    "split_channels",
]
