import pytest

from qtp.circuit import GateInstance
from qtp.devices import (
    DeviceError,
    TECHNOLOGY_CLASS,
    bundled_profile,
    bundled_profile_names,
    bundled_profiles,
    heavy_hex_coupling,
    load_profile,
    save_profile,
)
from qtp.gates import GateKind


def _line3(**overrides):
    spec = {
        "name": "line3",
        "technology": "superconducting",
        "num_qubits": 3,
        "basis_gates": ["ecr", "id", "rz", "sx", "x"],
        "coupling": [[0, 1], [1, 2]],
        "fidelity_1q": {"id": 0.999, "rz": 1.0, "sx": 0.999, "x": 0.999},
        "fidelity_2q": 0.99,
    }
    spec.update(overrides)
    return load_profile(spec)


class TestValidation:
    def test_technology_class_map(self):
        assert TECHNOLOGY_CLASS == {"trapped-ion": 0, "superconducting": 1}

    def test_unknown_technology(self):
        with pytest.raises(DeviceError):
            _line3(technology="photonics")

    def test_basis_outside_vocabulary(self):
        with pytest.raises(DeviceError):
            _line3(basis_gates=["frob"])

    def test_self_coupling(self):
        with pytest.raises(DeviceError):
            _line3(coupling=[[0, 0]])

    def test_coupling_out_of_range(self):
        with pytest.raises(DeviceError):
            _line3(coupling=[[0, 3]])

    def test_fidelity_must_be_probability_like(self):
        with pytest.raises(DeviceError):
            _line3(fidelity_2q=0.0)
        with pytest.raises(DeviceError):
            _line3(fidelity_2q=1.5)
        with pytest.raises(DeviceError):
            _line3(fidelity_1q={"rz": -0.1, "id": 0.9, "sx": 0.9, "x": 0.9})


class TestCoupling:
    def test_line_adjacency(self):
        p = _line3()
        assert p.is_coupled(0, 1) and p.is_coupled(1, 0)
        assert not p.is_coupled(0, 2)
        assert not p.is_coupled(1, 1)
        assert p.neighbors(1) == (0, 2)

    def test_all_to_all(self):
        p = load_profile(
            {
                "name": "aa",
                "technology": "trapped-ion",
                "num_qubits": 4,
                "basis_gates": ["rx", "ry", "rz", "rxx"],
                "coupling": "all-to-all",
                "fidelity_1q": {"rx": 0.999, "ry": 0.999, "rz": 0.999},
                "fidelity_2q": 0.99,
            }
        )
        assert all(p.is_coupled(a, b) for a in range(4) for b in range(4) if a != b)
        assert p.qubit_distance(0, 3) == 1

    def test_distance_bfs(self):
        p = _line3()
        assert p.qubit_distance(0, 0) == 0
        assert p.qubit_distance(0, 1) == 1
        assert p.qubit_distance(0, 2) == 2

    def test_distance_disconnected(self):
        p = _line3(num_qubits=4, coupling=[[0, 1], [2, 3]])
        with pytest.raises(DeviceError):
            p.qubit_distance(0, 3)

    def test_distance_range_check(self):
        with pytest.raises(DeviceError):
            _line3().qubit_distance(0, 5)


class TestFidelity:
    def test_one_qubit_lookup(self):
        p = _line3()
        assert p.gate_fidelity(GateInstance(GateKind.RZ, (0,), (0.5,))) == 1.0
        assert p.gate_fidelity(GateInstance(GateKind.X, (2,))) == 0.999

    def test_two_qubit_scalar(self):
        p = _line3()
        assert p.gate_fidelity(GateInstance(GateKind.ECR, (0, 1))) == 0.99

    def test_two_qubit_per_pair(self):
        p = _line3(fidelity_2q={"0-1": 0.98, "1-2": 0.97})
        assert p.gate_fidelity(GateInstance(GateKind.ECR, (0, 1))) == 0.98
        # order-insensitive lookup
        assert p.gate_fidelity(GateInstance(GateKind.ECR, (2, 1))) == 0.97

    def test_uncoupled_pair_rejected(self):
        with pytest.raises(DeviceError):
            _line3().gate_fidelity(GateInstance(GateKind.ECR, (0, 2)))

    def test_gate_outside_basis_rejected(self):
        with pytest.raises(DeviceError):
            _line3().gate_fidelity(GateInstance(GateKind.H, (0,)))


class TestRoundTrip:
    def test_save_load_identity(self):
        p = _line3(fidelity_2q={"0-1": 0.98, "1-2": 0.97})
        assert load_profile(save_profile(p)) == p


class TestHeavyHex:
    def test_127_qubit_lattice(self):
        n, edges = heavy_hex_coupling(7, 15, limit=127)
        assert n == 127
        assert len(edges) == 142
        seen = {q for e in edges for q in e}
        assert seen == set(range(127))

    def test_rungs_bridge_adjacent_rows(self):
        n, edges = heavy_hex_coupling(2, 5)
        adj = {q: set() for q in range(n)}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        rungs = [q for q in range(10, n)]
        for r in rungs:
            ends = sorted(adj[r])
            assert len(ends) == 2
            assert ends[0] < 5 <= ends[1]  # one endpoint per row


class TestBundled:
    def test_names(self):
        assert bundled_profile_names() == ("ibm-eagle-like", "ionq-forte-like")

    def test_ion_profile(self):
        p = bundled_profile("ionq-forte-like")
        assert p.technology == "trapped-ion"
        assert p.coupling == "all-to-all"
        assert set(p.basis_gates) == {"rx", "ry", "rz", "rxx"}

    def test_sc_profile(self):
        p = bundled_profile("ibm-eagle-like")
        assert p.technology == "superconducting"
        assert p.num_qubits == 127
        assert len(p.coupling) == 142
        assert set(p.basis_gates) == {"ecr", "id", "rz", "sx", "x"}
        # every edge must be a usable two-qubit link
        for a, b in p.coupling:
            assert p.gate_fidelity(GateInstance(GateKind.ECR, (a, b))) > 0.9

    def test_unknown_bundled_name(self):
        with pytest.raises(DeviceError):
            bundled_profile("nope")

    def test_bundled_profiles_all_load(self):
        assert len(bundled_profiles()) == 2
