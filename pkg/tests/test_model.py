"""Model: grid enumeration, sparse layers vs dense oracles, checkpoints."""

import numpy as np
import pytest

from qtp import autodiff as ad
from qtp.dag import FEATURE_DIM, GraphData
from qtp.model import (
    BLOCK_CHOICES,
    CHECKPOINT_MAGIC,
    CheckpointError,
    GraphBatch,
    ModelConfig,
    ModelError,
    _ffnn_tuples,
    batch_graphs,
    gat_forward,
    gcn_forward,
    global_mean_pool,
    init_weights,
    iter_grid,
    load_checkpoint,
    model_forward,
    normalize_adjacency,
    param_shapes,
    predict_proba,
    residual_gcn,
    save_checkpoint,
    spmm,
)

# --- oracles -------------------------------------------------------------------


def _dense(adj):
    out = np.zeros((adj.num_nodes, adj.num_nodes))
    out[adj.rows, adj.cols] = adj.vals[:, 0]
    return out


def _dense_normalized(edges, n):
    a = np.eye(n)
    for s, d in np.asarray(edges).reshape(-1, 2):
        a[s, d] = 1.0
        a[d, s] = 1.0
    inv_sqrt = 1.0 / np.sqrt(a.sum(axis=1))
    return a * inv_sqrt[:, None] * inv_sqrt[None, :]


def _leaky(x, alpha):
    return np.where(x > 0, x, alpha * x)


def _gcn_oracle(x, edges, n, w, b):
    return _leaky(_dense_normalized(edges, n) @ x @ w + b, 0.01)


def _gat_oracle(x, edges, n, heads):
    """Per-node attention over in-neighbors plus self, heads concatenated."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    src = list(edges[:, 0]) + list(range(n))
    dst = list(edges[:, 1]) + list(range(n))
    outs = []
    for w, a_dst, a_src in heads:
        wh = x @ w
        s_dst = (wh @ a_dst)[:, 0]
        s_src = (wh @ a_src)[:, 0]
        out = np.zeros_like(wh)
        for i in range(n):
            js = [s for s, d in zip(src, dst) if d == i]
            logits = _leaky(np.array([s_dst[i] + s_src[j] for j in js]), 0.2)
            e = np.exp(logits - logits.max())
            alpha = e / e.sum()
            out[i] = sum(a * wh[j] for a, j in zip(alpha, js))
        outs.append(out)
    return np.concatenate(outs, axis=1)


def _random_edges(rng, n, m):
    """m distinct directed edges, no self-loops."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    take = min(m, len(pairs))
    idx = rng.choice(len(pairs), size=take, replace=False) if take else []
    return np.array([pairs[i] for i in idx], dtype=np.int64).reshape(-1, 2)


def _random_graph(rng, dim=FEATURE_DIM, label=None):
    n = int(rng.integers(1, 9))
    edges = _random_edges(rng, n, int(rng.integers(0, 2 * n + 1)))
    return GraphData(
        name=f"g{n}",
        num_qubits=int(rng.integers(2, 28)),
        features=rng.standard_normal((n, dim)),
        edges=edges,
        label=label,
    )


# --- grid ----------------------------------------------------------------------


class TestGrid:
    def test_ffnn_tuple_census(self):
        tuples = _ffnn_tuples()
        assert len(tuples) == 154
        assert sum(1 for t in tuples if len(t) == 2) == 35
        assert sum(1 for t in tuples if len(t) == 3) == 119
        assert tuples == sorted(tuples)
        assert tuples[0] == (32, 16)
        assert tuples[-1] == (2048, 2048, 2048)

    def test_grid_size_and_membership(self):
        configs = list(iter_grid())
        assert len(configs) == 2156
        assert all(c.in_grid() for c in configs)
        gat = [c for c in configs if c.first_layer == "gat"]
        gcn = [c for c in configs if c.first_layer == "gcn"]
        assert len(gat) == 2 * 2 * 2 * 154
        assert len(gcn) == 3 * 2 * 154

    def test_names_unique(self):
        names = [c.name for c in iter_grid()]
        assert len(set(names)) == 2156

    def test_canonical_order_endpoints(self):
        configs = list(iter_grid())
        assert configs[0].name == "GAT_1GCN_1FFNN_32_4_32_16"
        assert configs[-1].name == "GCN_2GCN_2FFNN_128_2048_2048_2048"

    def test_blocks_cover_choices(self):
        assert {c.blocks for c in iter_grid()} == set(BLOCK_CHOICES)


class TestConfig:
    def test_reference_name(self):
        cfg = ModelConfig("gat", 32, 1, (2048, 2048, 32), heads=4)
        assert cfg.name == "GAT_1GCN_2FFNN_32_4_2048_2048_32"
        assert cfg.in_grid()

    def test_gcn_name(self):
        assert ModelConfig("gcn", 64, 2, (128, 32)).name == "GCN_2GCN_1FFNN_64_128_32"

    def test_width(self):
        assert ModelConfig("gat", 32, 1, (64,), heads=4).width == 128
        assert ModelConfig("gcn", 64, 1, (64,)).width == 64

    def test_off_grid_config_is_usable(self):
        small = ModelConfig("gat", 4, 1, (8, 4), heads=2)
        assert not small.in_grid()
        assert param_shapes(small, in_dim=5)["first.h0.w"] == (5, 4)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(first_layer="mlp", hidden=32, blocks=1, ffnn=(32,)),
            dict(first_layer="gcn", hidden=0, blocks=1, ffnn=(32,)),
            dict(first_layer="gat", hidden=32, blocks=1, ffnn=(32,), heads=0),
            dict(first_layer="gcn", hidden=32, blocks=1, ffnn=(32,), heads=4),
            dict(first_layer="gcn", hidden=32, blocks=-1, ffnn=(32,)),
            dict(first_layer="gcn", hidden=32, blocks=1, ffnn=()),
            dict(first_layer="gcn", hidden=32, blocks=1, ffnn=(32, 0)),
        ],
    )
    def test_structural_rejects(self, kwargs):
        with pytest.raises(ModelError):
            ModelConfig(**kwargs)

    @pytest.mark.parametrize(
        "cfg",
        [
            ModelConfig("gat", 16, 1, (32, 16), heads=4),  # hidden off-grid
            ModelConfig("gat", 32, 1, (32, 16), heads=3),  # heads off-grid
            ModelConfig("gcn", 96, 1, (32, 16)),  # hidden off-grid
            ModelConfig("gcn", 32, 3, (32, 16)),  # blocks off-grid
            ModelConfig("gcn", 32, 1, (32,)),  # ffnn too short
            ModelConfig("gcn", 32, 1, (32, 16, 16, 16)),  # ffnn too long
            ModelConfig("gcn", 32, 1, (24, 16)),  # first width off-menu
            ModelConfig("gcn", 32, 1, (32, 64)),  # non-increasing violated
            ModelConfig("gcn", 32, 1, (64, 48)),  # not a power of two
            ModelConfig("gcn", 32, 1, (32, 8)),  # below the floor
        ],
    )
    def test_in_grid_rejects(self, cfg):
        assert not cfg.in_grid()

    def test_json_round_trip(self):
        for cfg in [
            ModelConfig("gat", 64, 2, (256, 64, 16), heads=8),
            ModelConfig("gcn", 128, 1, (512, 32)),
        ]:
            assert ModelConfig.from_json(cfg.to_json()) == cfg

    def test_json_missing_field(self):
        with pytest.raises(ModelError, match="missing"):
            ModelConfig.from_json({"first_layer": "gcn"})


# --- adjacency -------------------------------------------------------------------


class TestAdjacency:
    def test_single_node(self):
        adj = normalize_adjacency(np.zeros((0, 2), np.int64), 1)
        assert np.array_equal(_dense(adj), [[1.0]])

    def test_two_nodes_one_edge(self):
        adj = normalize_adjacency(np.array([[0, 1]]), 2)
        assert np.allclose(_dense(adj), 0.5)

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            n = int(rng.integers(1, 9))
            edges = _random_edges(rng, n, int(rng.integers(0, 2 * n + 1)))
            got = _dense(normalize_adjacency(edges, n))
            assert np.max(np.abs(got - _dense_normalized(edges, n))) < 1e-12

    def test_duplicate_edges_collapse(self):
        once = normalize_adjacency(np.array([[0, 1]]), 3)
        thrice = normalize_adjacency(np.array([[0, 1], [0, 1], [1, 0]]), 3)
        assert np.array_equal(_dense(once), _dense(thrice))

    def test_empty_graph_rejected(self):
        with pytest.raises(ModelError, match="no nodes"):
            normalize_adjacency(np.zeros((0, 2), np.int64), 0)

    def test_row_normalization(self):
        # symmetric operator with unit spectral radius: rows of D^1/2 Â D^-1/2
        # sum to 1; equivalently Â v = v for v = sqrt(deg)
        edges = np.array([[0, 1], [1, 2], [0, 3]])
        dense = _dense(normalize_adjacency(edges, 4))
        deg = np.array([3.0, 3.0, 2.0, 2.0])
        v = np.sqrt(deg)
        assert np.allclose(dense @ v, v, atol=1e-12)


# --- layers ----------------------------------------------------------------------


class TestLayers:
    def test_spmm_matches_dense(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = int(rng.integers(1, 9))
            edges = _random_edges(rng, n, int(rng.integers(0, 2 * n + 1)))
            x = rng.standard_normal((n, 4))
            adj = normalize_adjacency(edges, n)
            tape = ad.Tape()
            got = spmm(adj, tape.const(x)).data
            assert np.max(np.abs(got - _dense(adj) @ x)) < 1e-12

    def test_gcn_forward_matches_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            n = int(rng.integers(1, 9))
            edges = _random_edges(rng, n, int(rng.integers(0, 2 * n + 1)))
            x = rng.standard_normal((n, 5))
            w = rng.standard_normal((5, 3))
            b = rng.standard_normal(3)
            tape = ad.Tape()
            got = gcn_forward(
                tape.const(x), normalize_adjacency(edges, n), tape.const(w), tape.const(b)
            ).data
            assert np.max(np.abs(got - _gcn_oracle(x, edges, n, w, b))) < 1e-10

    def test_residual_gcn_matches_oracle(self):
        rng = np.random.default_rng(17)
        n, d = 6, 4
        edges = _random_edges(rng, n, 7)
        x = rng.standard_normal((n, d))
        w = rng.standard_normal((d, d))
        b = rng.standard_normal(d)
        tape = ad.Tape()
        got = residual_gcn(
            tape.const(x), normalize_adjacency(edges, n), tape.const(w), tape.const(b)
        ).data
        assert np.max(np.abs(got - (x + _gcn_oracle(x, edges, n, w, b)))) < 1e-10

    def test_residual_rejects_non_square(self):
        tape = ad.Tape()
        adj = normalize_adjacency(np.zeros((0, 2), np.int64), 2)
        with pytest.raises(ModelError, match="square"):
            residual_gcn(
                tape.const(np.ones((2, 3))), adj,
                tape.const(np.ones((3, 2))), tape.const(np.ones(2)),
            )

    def test_gat_matches_oracle(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            n = int(rng.integers(1, 9))
            edges = _random_edges(rng, n, int(rng.integers(0, 2 * n + 1)))
            x = rng.standard_normal((n, 5))
            heads_np = [
                (
                    rng.standard_normal((5, 3)),
                    rng.standard_normal((3, 1)),
                    rng.standard_normal((3, 1)),
                )
                for _ in range(2)
            ]
            tape = ad.Tape()
            heads = [tuple(tape.const(p) for p in head) for head in heads_np]
            got = gat_forward(tape.const(x), edges, n, heads).data
            assert got.shape == (n, 6)
            assert np.max(np.abs(got - _gat_oracle(x, edges, n, heads_np))) < 1e-10

    def test_gat_isolated_node_keeps_projection(self):
        rng = np.random.default_rng(23)
        x = rng.standard_normal((1, 4))
        w = rng.standard_normal((4, 3))
        tape = ad.Tape()
        head = (tape.const(w), tape.const(rng.standard_normal((3, 1))),
                tape.const(rng.standard_normal((3, 1))))
        got = gat_forward(tape.const(x), np.zeros((0, 2), np.int64), 1, [head]).data
        assert np.array_equal(got, x @ w)

    def test_gat_zero_attention_is_mean(self):
        rng = np.random.default_rng(29)
        n = 5
        edges = np.array([[0, 2], [1, 2], [3, 2]])
        x = rng.standard_normal((n, 4))
        w = rng.standard_normal((4, 3))
        tape = ad.Tape()
        head = (tape.const(w), tape.const(np.zeros((3, 1))), tape.const(np.zeros((3, 1))))
        got = gat_forward(tape.const(x), edges, n, [head]).data
        wh = x @ w
        assert np.allclose(got[2], wh[[0, 1, 3, 2]].mean(axis=0), atol=1e-12)
        assert np.allclose(got[4], wh[4], atol=1e-15)

    def test_gat_attention_rows_normalized(self):
        # identical embeddings make the output expose sum(alpha) directly
        rng = np.random.default_rng(31)
        n = 6
        edges = _random_edges(rng, n, 9)
        x = np.ones((n, 4))
        w = rng.standard_normal((4, 3))
        tape = ad.Tape()
        head = (tape.const(w), tape.const(rng.standard_normal((3, 1))),
                tape.const(rng.standard_normal((3, 1))))
        got = gat_forward(tape.const(x), edges, n, [head]).data
        assert np.allclose(got, (x @ w), atol=1e-12)

    def test_global_mean_pool(self):
        tape = ad.Tape()
        h = tape.const(np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]))
        out = global_mean_pool(h, np.array([0, 0, 1]), 2).data
        assert np.array_equal(out, [[2.0, 3.0], [5.0, 6.0]])


# --- batching ---------------------------------------------------------------------


class TestBatch:
    def test_offsets_and_ids(self):
        g1 = GraphData("a", 2, np.ones((2, 3)), np.array([[0, 1]]), label=0)
        g2 = GraphData("b", 3, np.zeros((3, 3)), np.array([[1, 2]]), label=1)
        batch = batch_graphs([g1, g2])
        assert np.array_equal(batch.edges, [[0, 1], [3, 4]])
        assert np.array_equal(batch.graph_ids, [0, 0, 1, 1, 1])
        assert batch.num_graphs == 2
        assert np.array_equal(batch.labels, [0, 1])
        assert np.array_equal(batch.qubit_counts, [2, 3])

    def test_missing_label_drops_labels(self):
        g1 = GraphData("a", 2, np.ones((1, 3)), np.zeros((0, 2), np.int64), label=0)
        g2 = GraphData("b", 2, np.ones((1, 3)), np.zeros((0, 2), np.int64))
        assert batch_graphs([g1, g2]).labels is None

    def test_empty_batch_rejected(self):
        with pytest.raises(ModelError, match="empty"):
            batch_graphs([])


# --- forward ---------------------------------------------------------------------


def _small_configs():
    return [
        ModelConfig("gat", 3, 1, (6, 4), heads=2),
        ModelConfig("gcn", 5, 2, (6,)),
    ]


class TestForward:
    @pytest.mark.parametrize("config", _small_configs(), ids=lambda c: c.first_layer)
    def test_rows_are_probabilities(self, config):
        rng = np.random.default_rng(37)
        graphs = [_random_graph(rng, dim=7) for _ in range(5)]
        weights = init_weights(config, seed=1, in_dim=7)
        probs = predict_proba(config, weights, graphs)
        assert probs.shape == (5, 2)
        assert np.all(probs > 0)
        assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-12)

    @pytest.mark.parametrize("config", _small_configs(), ids=lambda c: c.first_layer)
    def test_batch_of_one_matches_joint(self, config):
        rng = np.random.default_rng(41)
        graphs = [_random_graph(rng, dim=7) for _ in range(4)]
        weights = init_weights(config, seed=2, in_dim=7)
        joint = predict_proba(config, weights, graphs)
        for i, g in enumerate(graphs):
            solo = predict_proba(config, weights, [g])
            assert np.max(np.abs(joint[i] - solo[0])) < 1e-12

    @pytest.mark.parametrize("config", _small_configs(), ids=lambda c: c.first_layer)
    def test_node_permutation_invariance(self, config):
        rng = np.random.default_rng(43)
        g = _random_graph(rng, dim=7)
        n = g.num_nodes
        perm = rng.permutation(n)
        inv = np.empty(n, dtype=np.int64)
        inv[perm] = np.arange(n)
        permuted = GraphData(
            g.name, g.num_qubits, g.features[perm],
            inv[g.edges] if g.edges.size else g.edges, g.label,
        )
        weights = init_weights(config, seed=3, in_dim=7)
        a = predict_proba(config, weights, [g])
        b = predict_proba(config, weights, [permuted])
        assert np.max(np.abs(a - b)) < 1e-10

    def test_param_set_mismatch(self):
        config = ModelConfig("gcn", 5, 1, (4,))
        weights = init_weights(config, seed=0, in_dim=7)
        weights.pop("out.b")
        rng = np.random.default_rng(47)
        with pytest.raises(ModelError, match="parameter set"):
            predict_proba(config, weights, [_random_graph(rng, dim=7)])

    def test_param_shape_mismatch(self):
        config = ModelConfig("gcn", 5, 1, (4,))
        weights = init_weights(config, seed=0, in_dim=7)
        weights["out.w"] = np.zeros((3, 3))
        rng = np.random.default_rng(53)
        with pytest.raises(ModelError, match="shape"):
            predict_proba(config, weights, [_random_graph(rng, dim=7)])

    def test_accepts_prebuilt_batch(self):
        rng = np.random.default_rng(59)
        graphs = [_random_graph(rng, dim=7) for _ in range(3)]
        config = ModelConfig("gcn", 5, 1, (4,))
        weights = init_weights(config, seed=4, in_dim=7)
        assert np.array_equal(
            predict_proba(config, weights, batch_graphs(graphs)),
            predict_proba(config, weights, graphs),
        )


# --- init ------------------------------------------------------------------------


class TestInit:
    def test_param_order_gat(self):
        config = ModelConfig("gat", 8, 2, (16, 4), heads=2)
        assert list(param_shapes(config, in_dim=6)) == [
            "first.h0.w", "first.h0.a_dst", "first.h0.a_src",
            "first.h1.w", "first.h1.a_dst", "first.h1.a_src",
            "res1.w", "res1.b", "res2.w", "res2.b",
            "ffnn1.w", "ffnn1.b", "ffnn2.w", "ffnn2.b",
            "out.w", "out.b",
        ]

    def test_shapes_gat(self):
        config = ModelConfig("gat", 8, 1, (16,), heads=2)
        shapes = param_shapes(config, in_dim=6)
        assert shapes["first.h0.w"] == (6, 8)
        assert shapes["first.h1.a_src"] == (8, 1)
        assert shapes["res1.w"] == (16, 16)  # heads concatenate before the block
        assert shapes["ffnn1.w"] == (16, 16)
        assert shapes["out.w"] == (16, 2)
        assert shapes["out.b"] == (2,)

    def test_default_in_dim_is_feature_dim(self):
        shapes = param_shapes(ModelConfig("gcn", 32, 1, (32,)))
        assert shapes["first.w"] == (FEATURE_DIM, 32)

    def test_zero_biases_and_bounds(self):
        config = ModelConfig("gat", 8, 1, (16,), heads=2)
        weights = init_weights(config, seed=5, in_dim=6)
        assert np.array_equal(weights["first.b"], np.zeros(8)) if "first.b" in weights else True
        for name, arr in weights.items():
            if name.endswith(".b"):
                assert np.array_equal(arr, np.zeros_like(arr))
            elif name.endswith((".a_dst", ".a_src")):
                assert np.max(np.abs(arr)) <= np.sqrt(6.0 / (2 * 8 + 1))
            else:
                fan_in, fan_out = param_shapes(config, in_dim=6)[name]
                assert np.max(np.abs(arr)) <= np.sqrt(6.0 / (fan_in + fan_out))

    def test_deterministic_per_seed(self):
        config = ModelConfig("gcn", 8, 1, (16,))
        a = init_weights(config, seed=6, in_dim=6)
        b = init_weights(config, seed=6, in_dim=6)
        c = init_weights(config, seed=7, in_dim=6)
        assert all(np.array_equal(a[k], b[k]) for k in a)
        assert any(not np.array_equal(a[k], c[k]) for k in a)

    def test_seed_sequences(self):
        config = ModelConfig("gcn", 8, 1, (16,))
        a = init_weights(config, seed=[3, 0], in_dim=6)
        b = init_weights(config, seed=[3, 1], in_dim=6)
        assert any(not np.array_equal(a[k], b[k]) for k in a)


# --- checkpoints -------------------------------------------------------------------


class TestCheckpoint:
    def _roundtrip(self, tmp_path, config, in_dim=9):
        weights = init_weights(config, seed=8, in_dim=in_dim)
        path = tmp_path / "model.ckpt"
        save_checkpoint(path, config, weights, seed=8, metadata={"fold": 2})
        return path, weights

    def test_round_trip(self, tmp_path):
        config = ModelConfig("gat", 8, 1, (16, 4), heads=2)
        path, weights = self._roundtrip(tmp_path, config)
        got_config, got_weights, seed, meta = load_checkpoint(path)
        assert got_config == config
        assert seed == 8
        assert meta == {"fold": 2}
        assert set(got_weights) == set(weights)
        for name in weights:
            assert np.array_equal(got_weights[name], weights[name])

    def test_save_is_byte_stable(self, tmp_path):
        config = ModelConfig("gcn", 8, 2, (16,))
        weights = init_weights(config, seed=9, in_dim=9)
        a, b = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
        save_checkpoint(a, config, weights, seed=9)
        save_checkpoint(b, config, weights, seed=9)
        assert a.read_bytes() == b.read_bytes()

    def test_load_save_round_trip_is_identity(self, tmp_path):
        config = ModelConfig("gat", 8, 1, (16,), heads=2)
        path, _ = self._roundtrip(tmp_path, config)
        cfg, weights, seed, meta = load_checkpoint(path)
        again = tmp_path / "again.ckpt"
        save_checkpoint(again, cfg, weights, seed, meta)
        assert again.read_bytes() == path.read_bytes()

    def test_magic_is_stable(self, tmp_path):
        config = ModelConfig("gcn", 8, 1, (16,))
        path, _ = self._roundtrip(tmp_path, config)
        assert path.read_bytes()[:8] == CHECKPOINT_MAGIC == b"QTPCKPT1"

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bogus.ckpt"
        path.write_bytes(b"NOTCKPT0" + b"\x00" * 16)
        with pytest.raises(CheckpointError, match="not a checkpoint"):
            load_checkpoint(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "trunc.ckpt"
        path.write_bytes(CHECKPOINT_MAGIC + b"\x00\x00")
        with pytest.raises(CheckpointError, match="truncated"):
            load_checkpoint(path)

    def test_corrupt_header_json(self, tmp_path):
        import struct

        path = tmp_path / "badjson.ckpt"
        path.write_bytes(CHECKPOINT_MAGIC + struct.pack("<I", 4) + b"xxxx")
        with pytest.raises(CheckpointError, match="bad header"):
            load_checkpoint(path)

    def test_truncated_payload(self, tmp_path):
        config = ModelConfig("gcn", 8, 1, (16,))
        path, _ = self._roundtrip(tmp_path, config)
        data = path.read_bytes()
        path.write_bytes(data[:-8])
        with pytest.raises(CheckpointError, match="payload"):
            load_checkpoint(path)

    def test_save_rejects_wrong_names(self, tmp_path):
        config = ModelConfig("gcn", 8, 1, (16,))
        weights = init_weights(config, seed=10, in_dim=9)
        weights.pop("out.b")
        with pytest.raises(CheckpointError, match="names"):
            save_checkpoint(tmp_path / "x.ckpt", config, weights, seed=10)

    def test_save_rejects_wrong_shape(self, tmp_path):
        config = ModelConfig("gcn", 8, 1, (16,))
        weights = init_weights(config, seed=11, in_dim=9)
        weights["out.w"] = np.zeros((5, 5))
        with pytest.raises(CheckpointError, match="shape"):
            save_checkpoint(tmp_path / "x.ckpt", config, weights, seed=11)

    def test_in_dim_inferred_from_weights(self, tmp_path):
        config = ModelConfig("gcn", 8, 1, (16,))
        path, _ = self._roundtrip(tmp_path, config, in_dim=7)
        _, weights, _, _ = load_checkpoint(path)
        assert weights["first.w"].shape == (7, 8)
