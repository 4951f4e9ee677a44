"""Exact computations with finite-dimensional Jacobi and Poisson algebras."""

from .field import Field, Q, GF
from .algebra import JacobiAlgebra, AxiomReport
from .tensor import Tensor
from .extensions import ExtendingDatum, FlagDatum
from .factorization import MatchedPair
from .isoclass import IsoMode

__all__ = ["Field", "Q", "GF", "JacobiAlgebra", "AxiomReport", "Tensor", "ExtendingDatum", "FlagDatum",
           "MatchedPair", "IsoMode"]
