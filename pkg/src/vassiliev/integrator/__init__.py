"""Configuration-space integrals and the truncated series."""

from .forms import CONVENTIONS, ConfigPoint, DiagramPlan, integrand
from .mc import DEFAULT_CHUNK, MCEstimate, mc_integrate, run_chunks
from .sampling import cauchy_density, sample_cauchy, sample_cyclic_legs
from .tripod import TripodIntegrator, segment_fields, tripod_sign
from .zseries import (
    Budget,
    ZResult,
    Z_DEGREE_CAP,
    assemble_Z,
    correct_anomaly,
    estimate_class,
    reduce_series,
    z2_knot,
    z_series,
)

__all__ = [
    "CONVENTIONS",
    "ConfigPoint",
    "DiagramPlan",
    "integrand",
    "DEFAULT_CHUNK",
    "MCEstimate",
    "mc_integrate",
    "run_chunks",
    "cauchy_density",
    "sample_cauchy",
    "sample_cyclic_legs",
    "TripodIntegrator",
    "segment_fields",
    "tripod_sign",
    "Budget",
    "ZResult",
    "Z_DEGREE_CAP",
    "assemble_Z",
    "correct_anomaly",
    "estimate_class",
    "reduce_series",
    "z2_knot",
    "z_series",
]
