"""Quasi-photon spectra and two-photon entanglement in an electron medium."""

from .params import ModelParams, PhysicalInput, from_physical, validate
from .spectrum import free_roots_closed, free_roots_numeric, magnetic_roots
from .entangle import free_measures, magnetic_measures

__all__ = [
    "ModelParams",
    "PhysicalInput",
    "free_measures",
    "free_roots_closed",
    "free_roots_numeric",
    "from_physical",
    "magnetic_measures",
    "magnetic_roots",
    "validate",
]
__version__ = "0.1.0"
