"""Numerical laboratory for holomorphic self-maps of the unit disc."""

from .maps import (
    BlaschkeProduct,
    DiscMapHandle,
    MobiusAutomorphism,
    blaschke_compose,
    blaschke_critical_points,
    blaschke_eval,
    blaschke_handle,
    blaschke_preimages,
    identity_handle,
    mobius_eval,
    mobius_handle,
    mobius_inverse,
    mobius_recover,
)
from .numerics import (
    Polynomial,
    RootSet,
    aberth_roots,
    derivative_consistency,
    poly_eval,
    poly_from_roots,
)
from .valence import (
    HeatmapGrid,
    ValenceReport,
    default_schedule,
    heatmap_to_csv,
    heatmap_to_pgm,
    valence_at,
    valence_heatmap,
    valence_profile,
    winding_number,
)

__all__ = [
    "BlaschkeProduct",
    "DiscMapHandle",
    "HeatmapGrid",
    "MobiusAutomorphism",
    "Polynomial",
    "RootSet",
    "ValenceReport",
    "aberth_roots",
    "blaschke_compose",
    "blaschke_critical_points",
    "blaschke_eval",
    "blaschke_handle",
    "blaschke_preimages",
    "default_schedule",
    "derivative_consistency",
    "heatmap_to_csv",
    "heatmap_to_pgm",
    "identity_handle",
    "mobius_eval",
    "mobius_handle",
    "mobius_inverse",
    "mobius_recover",
    "poly_eval",
    "poly_from_roots",
    "valence_at",
    "valence_heatmap",
    "valence_profile",
    "winding_number",
]

__version__ = "0.1.0"
