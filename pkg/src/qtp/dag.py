"""Circuit DAGs and their fixed-width feature encoding.

Every circuit becomes a directed acyclic graph: one source node per qubit
(the reserved INPUT kind) plus one node per gate, with edges following qubit
wires from each op to the next op touching that wire.

Node features are 66 floats:
  0..35   gate-type one-hot (35 gates + INPUT)
  36..62  qubit participation multi-hot, one slot per qubit up to 27
  63..65  up to three angle parameters, normalized to [0, 1) by 2*pi
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .circuit import Circuit
from .gates import ONE_HOT_INDEX, VOCABULARY_SIZE, GateKind, gate_by_name
from .jsonio import dumps as json_dumps

MAX_FEATURE_QUBITS = 27
GATE_SLOTS = VOCABULARY_SIZE  # 36
ANGLE_SLOTS = 3
FEATURE_DIM = GATE_SLOTS + MAX_FEATURE_QUBITS + ANGLE_SLOTS  # 66

_TWO_PI = 2.0 * math.pi

GRAPH_SUFFIX = ".dag.json"


class FeaturizeError(ValueError):
    """Circuit cannot be encoded (too many qubits, bad graph file, ...)."""


@dataclass(frozen=True)
class DagNode:
    id: int
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()


@dataclass
class CircuitDag:
    name: str
    num_qubits: int
    nodes: list[DagNode]
    edges: list[tuple[int, int]]
    label: int | None = None


def build_dag(circ: Circuit) -> CircuitDag:
    """Wire-following DAG: INPUT sources, then one node per op in order."""
    if circ.num_qubits > MAX_FEATURE_QUBITS:
        raise FeaturizeError(
            f"{circ.num_qubits} qubits exceed the {MAX_FEATURE_QUBITS}-qubit feature layout"
        )
    nodes = [DagNode(q, GateKind.INPUT, (q,)) for q in range(circ.num_qubits)]
    edges: list[tuple[int, int]] = []
    last = list(range(circ.num_qubits))  # qubit -> newest node on its wire
    for op in circ.ops:
        nid = len(nodes)
        nodes.append(DagNode(nid, op.kind, op.qubits, op.params))
        seen: set[int] = set()
        for q in op.qubits:
            pred = last[q]
            if pred not in seen:
                seen.add(pred)
                edges.append((pred, nid))
            last[q] = nid
    return CircuitDag(circ.name, circ.num_qubits, nodes, edges)


def encode_angle(theta: float) -> float:
    """Map an angle onto [0, 1) with period 2*pi."""
    frac = math.fmod(theta, _TWO_PI)
    if frac < 0.0:
        frac += _TWO_PI
    frac /= _TWO_PI
    return frac if frac < 1.0 else 0.0


def encode_features(dag: CircuitDag) -> np.ndarray:
    """(num_nodes, 66) float64 feature matrix in node-id order."""
    feats = np.zeros((len(dag.nodes), FEATURE_DIM), dtype=np.float64)
    for node in dag.nodes:
        feats[node.id, ONE_HOT_INDEX[node.kind]] = 1.0
        for q in node.qubits:
            feats[node.id, GATE_SLOTS + q] = 1.0
        for j, theta in enumerate(node.params):
            feats[node.id, GATE_SLOTS + MAX_FEATURE_QUBITS + j] = encode_angle(theta)
    return feats


@dataclass
class GraphData:
    """A stored graph: features plus edge list, ready for batching."""

    name: str
    num_qubits: int
    features: np.ndarray  # (n, 66)
    edges: np.ndarray  # (m, 2) int64, possibly empty
    label: int | None = None

    @property
    def num_nodes(self) -> int:
        return int(self.features.shape[0])


def graph_from_dag(dag: CircuitDag, label: int | None = None) -> GraphData:
    edges = np.asarray(dag.edges, dtype=np.int64).reshape(-1, 2)
    return GraphData(dag.name, dag.num_qubits, encode_features(dag), edges,
                     dag.label if label is None else label)


def graph_to_json(graph: GraphData) -> str:
    doc: dict = {"name": graph.name, "num_qubits": graph.num_qubits}
    if graph.label is not None:
        doc["label"] = int(graph.label)
    doc["nodes"] = [[float(x) for x in row] for row in graph.features]
    doc["edges"] = [[int(s), int(d)] for s, d in graph.edges]
    return json_dumps(doc)


def write_graph(graph: GraphData, path: str | Path) -> Path:
    path = Path(path)
    if not path.name.endswith(GRAPH_SUFFIX):
        path = path.with_name(path.name + GRAPH_SUFFIX)
    path.write_text(graph_to_json(graph))
    return path


def load_graph(path: str | Path) -> GraphData:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FeaturizeError(f"{path}: invalid graph JSON ({exc})") from None
    try:
        feats = np.asarray(raw["nodes"], dtype=np.float64)
        edges = np.asarray(raw["edges"], dtype=np.int64).reshape(-1, 2)
        graph = GraphData(
            name=str(raw["name"]),
            num_qubits=int(raw["num_qubits"]),
            features=feats.reshape(-1, FEATURE_DIM),
            edges=edges,
            label=None if raw.get("label") is None else int(raw["label"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FeaturizeError(f"{path}: malformed graph file ({exc})") from None
    if graph.edges.size and (graph.edges.min() < 0 or graph.edges.max() >= graph.num_nodes):
        raise FeaturizeError(f"{path}: edge endpoint out of range")
    return graph


def featurize_circuit(circ: Circuit, label: int | None = None) -> GraphData:
    return graph_from_dag(build_dag(circ), label)
