"""Projective-derivative Möbius cocycles of circle diffeomorphisms.

Circle maps are expression trees (:mod:`projcocycle.maps`) with exact 2-jets.
:func:`projective_derivative` osculates them by Möbius maps of the disk, the
3-point cocycle lives in :mod:`projcocycle.enlarged`, and drift diagnostics in
:mod:`projcocycle.analysis`.
"""

from projcocycle.analysis import (
    DriftRecord,
    ReductionRecord,
    boundedness_bounds,
    drift_grid,
    drift_sequence,
    enlarged_drift_sequence,
    hyperbolic_drift_lower_bound,
    reduce_with_conjugacy,
)
from projcocycle.conjugators import averaging_conjugator, finite_order_conjugator
from projcocycle.enlarged import Triple, diagonal_probe, enlarged_cocycle, tau
from projcocycle.geometry import (
    IDENTITY,
    Jet2,
    MobiusMap,
    NumericalError,
    disk_distance_to_origin,
    mobius_apply,
    mobius_compose,
    mobius_invert,
    mobius_jet,
)
from projcocycle.mapspec import MapSpecError, format_map_spec, parse_map_spec
from projcocycle.maps import (
    Arnold,
    CircleMap,
    Compose,
    Conjugate,
    Inverse,
    Mobius,
    Power,
    Rotation,
    identity,
    inverse_eval,
    iterate_jet,
    jet,
    rotation_number,
)
from projcocycle.projective import (
    cocycle_iterates,
    jet_to_mobius,
    oracle_fit_mobius,
    projective_derivative,
)

__version__ = "0.1.0"

__all__ = [
    "Arnold",
    "CircleMap",
    "Compose",
    "Conjugate",
    "DriftRecord",
    "IDENTITY",
    "Inverse",
    "Jet2",
    "MapSpecError",
    "Mobius",
    "MobiusMap",
    "NumericalError",
    "Power",
    "ReductionRecord",
    "Rotation",
    "Triple",
    "averaging_conjugator",
    "boundedness_bounds",
    "cocycle_iterates",
    "diagonal_probe",
    "disk_distance_to_origin",
    "drift_grid",
    "drift_sequence",
    "enlarged_cocycle",
    "enlarged_drift_sequence",
    "finite_order_conjugator",
    "format_map_spec",
    "hyperbolic_drift_lower_bound",
    "identity",
    "inverse_eval",
    "iterate_jet",
    "jet",
    "jet_to_mobius",
    "mobius_apply",
    "mobius_compose",
    "mobius_invert",
    "mobius_jet",
    "oracle_fit_mobius",
    "parse_map_spec",
    "projective_derivative",
    "reduce_with_conjugacy",
    "rotation_number",
    "tau",
]
