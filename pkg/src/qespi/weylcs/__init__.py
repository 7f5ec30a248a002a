"""Calogero-Sutherland models of type A: rational rank N and trigonometric A_1."""

from .gauge import (
    AlgebraicOperator,
    CharacteristicVectorError,
    GaugedAction,
    InvariantExpander,
    TriangularSpace,
    build_rational_model,
    cs_pi_integral,
    detect_characteristic_vector,
    euler_cartan,
    gauge_rotate,
    model_to_json,
    verify_cs_commutant,
)
from .roots import (
    AlgebraicityError,
    GroundState,
    InvariantChart,
    RationalHamiltonian,
    RootRational,
    RootSystemModel,
    ground_state_rational,
    invariants_rational,
    rational_hamiltonian,
)
from .trig import SutherlandA1, ZFrac, sutherland_a1_model

__all__ = [
    "AlgebraicOperator", "CharacteristicVectorError", "GaugedAction", "InvariantExpander",
    "TriangularSpace", "build_rational_model", "cs_pi_integral", "detect_characteristic_vector",
    "euler_cartan", "gauge_rotate", "model_to_json", "verify_cs_commutant",
    "AlgebraicityError", "GroundState", "InvariantChart", "RationalHamiltonian", "RootRational",
    "RootSystemModel", "ground_state_rational", "invariants_rational", "rational_hamiltonian",
    "SutherlandA1", "ZFrac", "sutherland_a1_model",
]
