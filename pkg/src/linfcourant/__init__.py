"""Exact verification of higher Courant and multisymplectic L-infinity structures."""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
