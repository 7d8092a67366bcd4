"""Exact-arithmetic solver and verification workbench for promise valued
constraint satisfaction over finite structures: the combined BLP + AIP
relaxation, the BLP-only variant, and the algebraic machinery (fractional
homomorphisms, promise fractional polymorphisms, multiset structures) with
brute-force oracles for differential testing.
"""

from .core import (
    FiniteMeasure,
    Instance,
    OperationTable,
    PromiseTemplate,
    Signature,
    Term,
    ValuedStructure,
    brute_force_min,
    evaluate_cost,
    pvcsp_oracle,
)
from .relax import blp_only_solve, combined_solve
from .values import MINUS_INF, PLUS_INF

__all__ = [
    "FiniteMeasure",
    "Instance",
    "OperationTable",
    "PromiseTemplate",
    "Signature",
    "Term",
    "ValuedStructure",
    "brute_force_min",
    "evaluate_cost",
    "pvcsp_oracle",
    "blp_only_solve",
    "combined_solve",
    "MINUS_INF",
    "PLUS_INF",
]
