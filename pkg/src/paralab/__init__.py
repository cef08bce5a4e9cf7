"""Numerical verification of indefinite almost paracontact metric structures."""

from . import _backend
from .jets import Jet, ScalarField, eval_jet, fd_residual

BACKEND = _backend.NAME

__version__ = "0.1.0"
