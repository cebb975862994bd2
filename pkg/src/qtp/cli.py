"""Command-line pipeline driver.

Every subcommand is a batch operation writing files; the only console output
besides logging is predict's single result line.  Exit codes: 0 success,
1 usage error, 2 bad input data, 3 internal failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import random
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .circuit import CircuitError
from .corpus import CorpusError, CorpusParams, FAMILIES, gen_corpus
from .dag import FeaturizeError, GraphData, featurize_circuit, load_graph, write_graph
from .devices import (
    DeviceError,
    DeviceProfile,
    bundled_profile,
    bundled_profile_names,
    load_profile,
)
from .labeling import (
    LabelError,
    build_manifest,
    load_manifest,
    resolve_dag_paths,
    write_stats,
)
from .model import (
    CheckpointError,
    ModelConfig,
    ModelError,
    iter_grid,
    load_checkpoint,
    predict_proba,
    save_checkpoint,
)
from .qasm import QasmError, parse_qasm, serialize_qasm
from .training import TrainingError, TrainResult, evaluate, train
from .transpile import RebaseError, RouteError

log = logging.getLogger("qtp")

DATA_ERRORS = (
    CircuitError,
    QasmError,
    FeaturizeError,
    DeviceError,
    LabelError,
    CorpusError,
    ModelError,
    CheckpointError,
    TrainingError,
    RebaseError,
    RouteError,
    OSError,
    json.JSONDecodeError,
)

TABLE_COLUMNS = (
    "model",
    "f1_class0",
    "f1_class1",
    "accuracy",
    "f1_class0_std",
    "f1_class1_std",
    "accuracy_std",
)


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def _load_profiles(specs: list[str]) -> list[DeviceProfile]:
    profiles = []
    for spec in specs:
        if Path(spec).exists():
            profiles.append(load_profile(spec))
        elif spec in bundled_profile_names():
            profiles.append(bundled_profile(spec))
        else:
            raise DeviceError(f"{spec}: not a profile file or bundled profile name")
    return profiles


def _load_config(spec: str) -> ModelConfig:
    text = spec if spec.lstrip().startswith("{") else Path(spec).read_text()
    try:
        obj = json.loads(text)
    except ValueError as exc:
        raise ModelError(f"bad model config {spec!r}: {exc}") from exc
    return ModelConfig.from_json(obj)


def _load_dataset(manifest_path: str) -> list[GraphData]:
    manifest = load_manifest(manifest_path)
    if not manifest.entries:
        raise LabelError(f"{manifest_path}: manifest has no usable entries")
    graphs = []
    for entry, dag_path in zip(manifest.entries, resolve_dag_paths(manifest_path, manifest)):
        graph = load_graph(dag_path)
        graph.label = entry.label
        graphs.append(graph)
    return graphs


def _table_row(name: str, agg: dict) -> dict:
    return {
        "model": name,
        "f1_class0": _g17(agg["f1_class0"]["mean"]),
        "f1_class1": _g17(agg["f1_class1"]["mean"]),
        "accuracy": _g17(agg["accuracy"]["mean"]),
        "f1_class0_std": _g17(agg["f1_class0"]["std"]),
        "f1_class1_std": _g17(agg["f1_class1"]["std"]),
        "accuracy_std": _g17(agg["accuracy"]["std"]),
    }


def _write_table(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=TABLE_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


# --- subcommand handlers ---------------------------------------------------------


def _cmd_featurize(args) -> int:
    targets: list[Path] = []
    for spec in args.circuits:
        p = Path(spec)
        if p.is_dir():
            targets.extend(sorted(p.glob("*.qasm")))
        elif p.exists():
            targets.append(p)
        else:
            raise FeaturizeError(f"{spec}: no such file or directory")
    if not targets:
        raise FeaturizeError("no circuits to featurize")
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for path in targets:
        circ = parse_qasm(path.read_text(), name=path.stem)
        graph = featurize_circuit(circ)
        dest_dir = out_dir if out_dir else path.parent
        dest = write_graph(graph, dest_dir / f"{path.stem}.dag.json")
        log.info("featurize %s -> %s", path, dest)
    return 0


def _cmd_label(args) -> int:
    profiles = _load_profiles(args.profiles)
    manifest = build_manifest(
        args.circuits,
        profiles,
        args.out,
        precompiled_dir=args.precompiled_dir,
    )
    log.info(
        "label %s: %d entries, class counts %s, %d skipped",
        args.circuits,
        len(manifest.entries),
        manifest.class_counts,
        len(manifest.skipped),
    )
    return 0


def _cmd_gen_corpus(args) -> int:
    params = CorpusParams(
        qubit_range=(args.qubits[0], args.qubits[1]),
        depth_range=(args.depth[0], args.depth[1]),
        mix=_parse_mix(args.mix) if args.mix else CorpusParams().mix,
    )
    circuits = gen_corpus(args.n, args.seed, params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for circ in circuits:
        (out / f"{circ.name}.qasm").write_text(serialize_qasm(circ))
    log.info("gen-corpus: wrote %d circuits to %s", len(circuits), out)
    return 0


def _parse_mix(spec: str) -> tuple[tuple[str, float], ...]:
    mix = []
    for part in spec.split(","):
        fam, _, weight = part.partition("=")
        if fam not in FAMILIES or not weight:
            raise CorpusError(f"bad mix entry {part!r}; want family=weight")
        mix.append((fam, float(weight)))
    return tuple(mix)


def _cmd_stats(args) -> int:
    manifest = load_manifest(args.manifest)
    paths = write_stats(manifest, args.out)
    log.info("stats: wrote %s", ", ".join(str(p) for p in paths))
    return 0


def _train_one(
    config: ModelConfig, manifest_path: str, args
) -> TrainResult:
    graphs = _load_dataset(manifest_path)
    return train(
        config,
        graphs,
        k=args.folds,
        epochs=args.epochs,
        seed=args.seed,
        batch_size=args.batch_size,
        split_mode=args.split_mode,
    )


def _cmd_train(args) -> int:
    config = _load_config(args.config)
    result = _train_one(config, args.manifest, args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for report, weights in zip(result.folds, result.weights):
        save_checkpoint(
            out / f"fold{report.fold_id}.ckpt",
            config,
            weights,
            seed=args.seed,
            metadata={
                "fold_id": report.fold_id,
                "epochs": args.epochs,
                "folds": args.folds,
                "batch_size": args.batch_size,
                "split_mode": args.split_mode,
            },
        )
    report_json = {
        "name": config.name,
        "config": config.to_json(),
        "seed": args.seed,
        "epochs": args.epochs,
        "folds": args.folds,
        "batch_size": args.batch_size,
        "split_mode": args.split_mode,
        "fold_reports": [r.to_json() for r in result.folds],
        "aggregate": result.aggregate,
    }
    (out / "run_report.json").write_text(json.dumps(report_json, indent=2) + "\n")
    _write_table(out / "results.csv", [_table_row(config.name, result.aggregate)])
    log.info("train %s: accuracy %.4f", config.name, result.aggregate["accuracy"]["mean"])
    return 0


def _grid_configs(budget: int | None, seed: int) -> list[ModelConfig]:
    configs = list(iter_grid())
    if budget is None or budget >= len(configs):
        return configs
    if budget < 1:
        raise ModelError("budget must be positive")
    picked = sorted(random.Random(seed).sample(range(len(configs)), budget))
    return [configs[i] for i in picked]


_WORKER_DATASETS: dict[str, list[GraphData]] = {}


def _grid_worker(payload: tuple) -> tuple[dict, dict]:
    cfg_json, manifest_path, folds, epochs, seed, batch_size, split_mode = payload
    config = ModelConfig.from_json(cfg_json)
    graphs = _WORKER_DATASETS.get(manifest_path)
    if graphs is None:
        graphs = _WORKER_DATASETS[manifest_path] = _load_dataset(manifest_path)
    result = train(
        config,
        graphs,
        k=folds,
        epochs=epochs,
        seed=seed,
        batch_size=batch_size,
        split_mode=split_mode,
    )
    return cfg_json, result.aggregate


def _cmd_grid(args) -> int:
    configs = _grid_configs(args.budget, args.seed)
    payloads = [
        (
            c.to_json(),
            args.manifest,
            args.folds,
            args.epochs,
            args.seed,
            args.batch_size,
            args.split_mode,
        )
        for c in configs
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_grid_worker, payloads))
    else:
        outcomes = [_grid_worker(p) for p in payloads]
    scored = [(ModelConfig.from_json(cfg), agg) for cfg, agg in outcomes]
    # the selection rule: minority-class F1, class 0
    scored.sort(key=lambda item: (-item[1]["f1_class0"]["mean"], item[0].name))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_table(out / "grid.csv", [_table_row(c.name, agg) for c, agg in scored])
    report = {
        "seed": args.seed,
        "budget": args.budget,
        "folds": args.folds,
        "epochs": args.epochs,
        "batch_size": args.batch_size,
        "split_mode": args.split_mode,
        "results": [{"name": c.name, "config": c.to_json(), "aggregate": agg} for c, agg in scored],
    }
    (out / "grid_report.json").write_text(json.dumps(report, indent=2) + "\n")
    log.info("grid: ranked %d configs into %s", len(scored), out / "grid.csv")
    return 0


def _cmd_evaluate(args) -> int:
    config, weights, _, _ = load_checkpoint(args.checkpoint)
    graphs = _load_dataset(args.manifest)
    body, _ = evaluate(config, weights, graphs)
    payload = {
        "checkpoint": str(args.checkpoint),
        "model": config.name,
        "num_graphs": len(graphs),
        "metrics": body,
    }
    Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    log.info("evaluate %s: accuracy %.4f", config.name, body["accuracy"])
    return 0


def _cmd_predict(args) -> int:
    config, weights, _, _ = load_checkpoint(args.checkpoint)
    path = Path(args.circuit)
    circ = parse_qasm(path.read_text(), name=path.stem)
    graph = featurize_circuit(circ)
    probs = predict_proba(config, weights, [graph])[0]
    cls = int(probs.argmax())
    print(f"class={cls} p0={_g17(probs[0])} p1={_g17(probs[1])}")
    return 0


# --- parser -----------------------------------------------------------------------


def _add_train_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="base RNG seed")
    sub.add_argument("--epochs", type=int, default=50, help="training epochs per fold")
    sub.add_argument("--folds", type=int, default=5, help="number of folds / splits")
    sub.add_argument("--batch-size", type=int, default=32, help="minibatch size")
    sub.add_argument(
        "--split-mode",
        choices=("cv", "shuffle"),
        default="cv",
        help="k-fold partition or repeated stratified draws",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qtp", description="Circuit-to-hardware match prediction pipeline.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("featurize", parents=[], help="encode circuits as graph files")
    sub.add_argument("circuits", nargs="+", help="QASM files or directories")
    sub.add_argument("--out", help="output directory (default: next to each input)")
    sub.set_defaults(handler=_cmd_featurize)

    sub = subs.add_parser("label", help="compile, score and label a circuit directory")
    sub.add_argument("--circuits", required=True, help="directory of .qasm files")
    sub.add_argument(
        "--profiles",
        nargs="+",
        default=list(bundled_profile_names()),
        help="profile JSON paths or bundled profile names",
    )
    sub.add_argument("--out", required=True, help="manifest output path")
    sub.add_argument("--precompiled-dir", help="directory of precompiled circuit variants")
    sub.set_defaults(handler=_cmd_label)

    sub = subs.add_parser("gen-corpus", help="generate a synthetic circuit corpus")
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--n", type=int, required=True, help="number of circuits")
    sub.add_argument("--seed", type=int, default=0, help="corpus RNG seed")
    sub.add_argument("--qubits", type=int, nargs=2, default=(2, 27), metavar=("LO", "HI"))
    sub.add_argument("--depth", type=int, nargs=2, default=(3, 32), metavar=("LO", "HI"))
    sub.add_argument("--mix", help="family weights, e.g. ghz=0.2,layered=0.3,random=0.5")
    sub.set_defaults(handler=_cmd_gen_corpus)

    sub = subs.add_parser("stats", help="summarize a manifest into CSV tables")
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--out", required=True, help="output directory")
    sub.set_defaults(handler=_cmd_stats)

    sub = subs.add_parser("train", help="train one model config over stratified folds")
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--config", required=True, help="model config JSON (path or literal)")
    sub.add_argument("--out", required=True, help="output directory")
    _add_train_flags(sub)
    sub.set_defaults(handler=_cmd_train)

    sub = subs.add_parser("grid", help="train the hyper-parameter grid and rank configs")
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--budget", type=int, help="sample this many grid configs")
    sub.add_argument("--jobs", type=int, default=1, help="parallel training processes")
    _add_train_flags(sub)
    sub.set_defaults(handler=_cmd_grid)

    sub = subs.add_parser("evaluate", help="score a checkpoint against a labeled manifest")
    sub.add_argument("--checkpoint", required=True)
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--out", default="evaluation.json", help="metrics JSON path")
    sub.set_defaults(handler=_cmd_evaluate)

    sub = subs.add_parser("predict", help="predict the better platform for one circuit")
    sub.add_argument("circuit", help="QASM file")
    sub.add_argument("--checkpoint", required=True)
    sub.set_defaults(handler=_cmd_predict)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("QTP_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except DATA_ERRORS as exc:
        print(f"qtp {args.command}: {exc}", file=sys.stderr)
        return 2
    except Exception:
        print(f"qtp {args.command}: internal error", file=sys.stderr)
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
