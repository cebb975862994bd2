"""Minimal transpiler: lower to {u3, cx}, rebase to a device basis, route.

Not an optimizing compiler.  It exists so circuits can be scored consistently
on device profiles; the only cleanup it does is dropping identity-angle
rotations.
"""

from .lower import lower_to_canonical
from .pipeline import (
    CompiledCircuit,
    compile_for,
    compiled_from_circuit,
    compiled_from_json,
    compiled_to_json,
)
from .rebase import RebaseError, rebase
from .route import RouteError, route
from .unitary import circuit_unitary, gate_matrix, phase_aligned_distance

__all__ = [
    "CompiledCircuit",
    "RebaseError",
    "RouteError",
    "circuit_unitary",
    "gate_matrix",
    "compile_for",
    "compiled_from_circuit",
    "compiled_from_json",
    "compiled_to_json",
    "lower_to_canonical",
    "phase_aligned_distance",
    "rebase",
    "route",
]
