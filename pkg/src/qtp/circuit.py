"""Flat circuit intermediate representation.

A circuit is an ordered list of gate applications on qubits 0..n-1.  Register
structure from source files is flattened away at parse time; classical bits,
measurements and barriers never reach this layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gates import GateKind


class CircuitError(ValueError):
    """Raised when a gate application or circuit is malformed."""


@dataclass(frozen=True)
class GateInstance:
    """One gate applied to a tuple of distinct qubits."""

    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is GateKind.INPUT:
            raise CircuitError("INPUT is reserved for DAG source nodes")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.qubits) != self.kind.arity:
            raise CircuitError(
                f"{self.kind.value} expects {self.kind.arity} qubit(s), "
                f"got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.kind.value} applied to duplicate qubits {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self.qubits}")
        if len(self.params) != self.kind.param_count:
            raise CircuitError(
                f"{self.kind.value} expects {self.kind.param_count} parameter(s), "
                f"got {len(self.params)}"
            )


@dataclass
class Circuit:
    """Ordered gate list over a fixed number of qubits."""

    num_qubits: int
    ops: list[GateInstance] = field(default_factory=list)
    name: str = ""

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise CircuitError(f"num_qubits must be positive, got {self.num_qubits}")
        for op in self.ops:
            self._check(op)

    def _check(self, op: GateInstance) -> None:
        for q in op.qubits:
            if q >= self.num_qubits:
                raise CircuitError(
                    f"qubit {q} out of range for {self.num_qubits}-qubit circuit"
                )

    def append(self, op: GateInstance) -> None:
        self._check(op)
        self.ops.append(op)

    def add(self, kind: GateKind, qubits: tuple[int, ...], params: tuple[float, ...] = ()) -> None:
        self.append(GateInstance(kind, qubits, params))

    @property
    def gate_count(self) -> int:
        return len(self.ops)

    def __len__(self) -> int:
        return len(self.ops)


def circuit_depth(circ: Circuit | list[GateInstance]) -> int:
    """Longest chain of ops linked by shared qubits (the usual layered depth).

    Empty circuits have depth 0.  Single-qubit layers count: depth is over
    all ops, not just entangling ones.
    """
    ops = circ.ops if isinstance(circ, Circuit) else circ
    level: dict[int, int] = {}
    depth = 0
    for op in ops:
        layer = 1 + max((level.get(q, 0) for q in op.qubits), default=0)
        for q in op.qubits:
            level[q] = layer
        if layer > depth:
            depth = layer
    return depth
