"""Exact arithmetic for sl_2 over a quantum torus and its Verma-type modules."""

from __future__ import annotations

from .scalars import Backend, ScalarConfig
from .lattice import Lattice, in_lambda_lattice, lex_compare, neg_order_compare
from .torus import TorusElement, center_split, epsilon, torus_multiply
from .algebra import AlgebraElement, BasisKey, Kind, Root, Sl2Cq
from .heisenberg import HeisenbergModule, HeisVector, SupportBox, degree_of, enumerate_basis
from .imaginary import ImaginaryModule, MVector, Weight

__version__ = "0.1.0"

__all__ = [
    "Backend", "ScalarConfig", "Lattice", "in_lambda_lattice", "lex_compare", "neg_order_compare",
    "TorusElement", "center_split", "epsilon", "torus_multiply", "AlgebraElement", "BasisKey", "Kind",
    "Root", "Sl2Cq", "HeisenbergModule", "HeisVector", "SupportBox", "degree_of", "enumerate_basis",
    "ImaginaryModule", "MVector", "Weight",
]
