from .specs import (
    EquationSpec,
    entropy_functionals,
    flux_matrices,
    flux_matrix_fields,
    iee,
    swe,
    cee,
    inse,
    make_spec,
    validate_state,
    viscous_flux,
    ViscousFlux,
)
from .rotations import (
    BoundaryRotation,
    CharacteristicSplit,
    VARIANTS,
    boundary_rotation,
    characteristic_split,
    extended_rotation_viscous,
    psi_factor,
    psi_root_msq,
    rotate_to_face,
    rotate_from_face,
)

__all__ = [
    "EquationSpec",
    "ViscousFlux",
    "entropy_functionals",
    "flux_matrices",
    "flux_matrix_fields",
    "iee",
    "swe",
    "cee",
    "inse",
    "make_spec",
    "validate_state",
    "viscous_flux",
    "BoundaryRotation",
    "CharacteristicSplit",
    "VARIANTS",
    "boundary_rotation",
    "characteristic_split",
    "extended_rotation_viscous",
    "psi_factor",
    "psi_root_msq",
    "rotate_to_face",
    "rotate_from_face",
]
