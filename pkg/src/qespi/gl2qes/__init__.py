"""gl(2) hidden algebra, particular integrals and the sextic QES oscillator."""

from .algebra import (
    BlockSpectrum,
    CommutantReport,
    FlagEntry,
    Gl2Generators,
    HeunCoeffs,
    HeunData,
    NotQESError,
    flag_preservation_report,
    gl2_generators,
    h2_operator,
    heun_operator,
    pi_integral_gl2,
    poly_space,
    qes_block_spectrum,
    verify_commutant,
)
from .sextic import (
    QuantumPiIntegral,
    QuasiPoly,
    SexticModel,
    apply_to_quasipoly,
    gauge_intertwining_witness,
    hamiltonian_x,
    quasipoly_basis,
    sextic_model,
    sextic_pi_integral_quantum,
)

__all__ = [
    "BlockSpectrum", "CommutantReport", "FlagEntry", "Gl2Generators", "HeunCoeffs", "HeunData",
    "NotQESError", "flag_preservation_report", "gl2_generators", "h2_operator", "heun_operator",
    "pi_integral_gl2", "poly_space", "qes_block_spectrum", "verify_commutant",
    "QuantumPiIntegral", "QuasiPoly", "SexticModel", "apply_to_quasipoly",
    "gauge_intertwining_witness", "hamiltonian_x", "quasipoly_basis", "sextic_model",
    "sextic_pi_integral_quantum",
]
