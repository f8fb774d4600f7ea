"""Dependency structures with choice: lattices, antimatroids and categories.

The most used names are re-exported here; submodules hold the rest.
"""

from .antimatroid import Antimatroid, phi, psi, validate_antimatroid
from .completion import bruns_lakser, distributive_ideals, is_dsnc, merkle_dsnc, merkle_hashes
from .core import Dsc, PreDsc, discrete, is_complete, rdp, validate_dsc
from .errors import (
    ContractError,
    DepChoiceError,
    DomainError,
    ResolutionError,
    SizeCapError,
    ValidationError,
)
from .morphisms import DscMorphism, enumerate_morphisms
from .versions import higher_version, v_closure, vers

__version__ = "0.1.0"

__all__ = [
    "Antimatroid",
    "ContractError",
    "DepChoiceError",
    "DomainError",
    "Dsc",
    "DscMorphism",
    "PreDsc",
    "ResolutionError",
    "SizeCapError",
    "ValidationError",
    "bruns_lakser",
    "discrete",
    "distributive_ideals",
    "enumerate_morphisms",
    "higher_version",
    "is_complete",
    "is_dsnc",
    "merkle_dsnc",
    "merkle_hashes",
    "phi",
    "psi",
    "rdp",
    "validate_antimatroid",
    "validate_dsc",
    "v_closure",
    "vers",
]
