import numpy as np
import pytest

from qtp.corpus import CorpusParams, gen_corpus
from qtp.devices import bundled_profile, load_profile
from qtp.labeling import build_manifest
from qtp.qasm import serialize_qasm


@pytest.fixture(scope="session")
def ion_profile():
    return bundled_profile("ionq-forte-like")


@pytest.fixture(scope="session")
def sc_profile():
    return bundled_profile("ibm-eagle-like")


@pytest.fixture(scope="session")
def sc_line3():
    """3-qubit superconducting line; forces routing for cx(0, 2)."""
    return load_profile(
        {
            "name": "sc-line3",
            "technology": "superconducting",
            "num_qubits": 3,
            "basis_gates": ["ecr", "id", "rz", "sx", "x"],
            "coupling": [[0, 1], [1, 2]],
            "fidelity_1q": {"id": 0.9999, "rz": 1.0, "sx": 0.9999, "x": 0.9999},
            "fidelity_2q": 0.99,
        }
    )


@pytest.fixture(scope="session")
def ion_aa3():
    return load_profile(
        {
            "name": "ion-aa3",
            "technology": "trapped-ion",
            "num_qubits": 3,
            "basis_gates": ["rx", "ry", "rz", "rxx"],
            "coupling": "all-to-all",
            "fidelity_1q": {"rx": 0.9998, "ry": 0.9998, "rz": 0.9998},
            "fidelity_2q": 0.996,
        }
    )


@pytest.fixture(scope="session")
def corpus200():
    """The shared 200-circuit synthetic corpus used by the acceptance gate."""
    return gen_corpus(200, seed=11, params=CorpusParams())


@pytest.fixture(scope="session")
def labeled_manifest(tmp_path_factory, corpus200, ion_profile, sc_profile):
    """corpus200 written to disk and labeled against both bundled profiles.

    Returns (manifest_path, manifest).  Built once per session; labeling 200
    circuits costs a few seconds.
    """
    root = tmp_path_factory.mktemp("labeled")
    circuits_dir = root / "circuits"
    circuits_dir.mkdir()
    for circ in corpus200:
        (circuits_dir / f"{circ.name}.qasm").write_text(serialize_qasm(circ))
    manifest_path = root / "manifest.json"
    manifest = build_manifest(circuits_dir, [ion_profile, sc_profile], manifest_path)
    return manifest_path, manifest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
