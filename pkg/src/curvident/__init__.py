"""Exact verification of dimensional curvature identities."""

from .curvature_identities import (
    IdentityJob,
    IdentityReport,
    critical_dimension,
    s_tensor,
    verify_vanishing,
)
from .metric_geometry import MetricJet, random_metric_jet, riemann
from .tensor_core import Permutation, Tensor

__all__ = [
    "IdentityJob",
    "IdentityReport",
    "MetricJet",
    "Permutation",
    "Tensor",
    "critical_dimension",
    "random_metric_jet",
    "riemann",
    "s_tensor",
    "verify_vanishing",
]

__version__ = "0.1.0"
