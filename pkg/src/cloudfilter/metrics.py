"""Evaluation metrics between a ground-truth and a predicted point set."""

import numpy as np
from dataclasses import dataclass
from scipy.spatial import cKDTree

from .core import as_points

MSE_VARIANTS = ("described", "printed")


@dataclass
class MetricReport:
    chamfer: float
    mse: float
    s1_count: int
    s2_count: int

    def to_text(self):
        return (
            f"chamfer={self.chamfer:.12g}\n"
            f"mse={self.mse:.12g}\n"
            f"s1_count={self.s1_count}\n"
            f"s2_count={self.s2_count}\n"
        )

    def to_csv_row(self):
        return f"{self.chamfer:.12g},{self.mse:.12g},{self.s1_count},{self.s2_count}"

    @staticmethod
    def csv_header():
        return "chamfer,mse,s1_count,s2_count"


def chamfer_distance(s1, s2):
    """Symmetric mean of squared nearest-neighbor distances between two sets."""
    a = as_points(s1)
    b = as_points(s2)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("empty point set")
    d_ab, _ = cKDTree(b).query(a)
    d_ba, _ = cKDTree(a).query(b)
    return float(np.mean(d_ab**2) + np.mean(d_ba**2))


def mean_square_error(s1, s2, m=10, variant="described"):
    """Mean squared distance from each predicted point in s2 to its m
    nearest ground-truth points in s1.

    variant="described" (default) averages over the predicted set:
    1/(|S2| m) sum_y sum_{x in NN_m(y)} |x - y|^2. variant="printed"
    replaces the 1/|S2| prefactor with 1/|S1|.
    """
    a = as_points(s1)
    b = as_points(s2)
    if m < 1:
        raise ValueError("m must be >= 1")
    if len(a) < m:
        raise ValueError("too few ground-truth points")
    if len(b) == 0:
        raise ValueError("empty point set")
    if variant not in MSE_VARIANTS:
        raise ValueError("unknown mse variant")
    dist, _ = cKDTree(a).query(b, k=m)
    dist = np.atleast_2d(dist.reshape(len(b), m))
    total = float(np.sum(dist**2))
    denom = len(a) if variant == "printed" else len(b)
    return total / (denom * m)


def evaluate(ground_truth, predicted, m=10, variant="described"):
    """Full metric report for a predicted set against ground truth."""
    a = as_points(ground_truth)
    b = as_points(predicted)
    return MetricReport(
        chamfer=chamfer_distance(a, b),
        mse=mean_square_error(a, b, m=m, variant=variant),
        s1_count=len(a),
        s2_count=len(b),
    )
