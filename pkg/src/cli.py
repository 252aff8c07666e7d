"""
grnf command-line interface

Exit codes: 0 on success, 2 on invalid arguments or input data.
"""

import argparse
import csv
import io
import json
import logging
import sys
from typing import List, Optional

import uvicorn
from pydantic import ValidationError

from src.experiments.accuracy import accuracy_csv, corpus_channels, run_accuracy_vs_M
from src.experiments.config import ExperimentConfig
from src.features.distribution import DistributionConfig
from src.features.grnf import build_grnf, build_weighted_grnf, embed_many
from src.features.serialization import load_map_file, save_map_file
from src.graphio.delaunay import DelaunayParams, delaunay_generate
from src.graphio.json_io import read_corpus, read_graph_file, write_corpus
from src.graphio.sbm import SbmParams, sbm_generate
from src.graphio.tu_dataset import parse_tu_dataset
from src.metrics.bounds import embedding_dim_for
from src.metrics.diagnostics import convergence_diagnostics, diagnostics_csv
from src.metrics.estimators import distance_estimate, gram_matrix
from src.database.database import record_run_finish, record_run_start
from src.utils.errors import ArgumentError, GrnfError
from src.utils.logging_config import configure_logging
from src.utils.seeds import derive_seed
from src.utils.settings import get_settings

logger = logging.getLogger(__name__)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _write_output(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"✅ Wrote {path}")


def _add_distribution_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kmax", type=int, default=3, help="Largest tensor order (1..3)")
    parser.add_argument("--lambda", dest="lam", type=float, default=1.0, help="Poisson rate of the tensor order")
    parser.add_argument("--sigma", type=float, default=1.0, help="Std of the Gaussian coefficients")
    parser.add_argument("--norm", choices=["mean", "sum"], default="mean", help="Basis normalization")
    parser.add_argument("--activation", choices=["sigmoid", "tanh", "relu"], default="sigmoid", help="Invariant-layer activation")


def _distribution(args, channels: int = 1) -> DistributionConfig:
    return DistributionConfig(
        lam=args.lam,
        k_max=args.kmax,
        sigma=args.sigma,
        normalization=args.norm,
        activation_i=args.activation,
        channels=channels,
    )


# gen


def cmd_gen_sbm(args) -> int:
    params = SbmParams(n=args.n, communities=args.blocks, p_in=args.p_in, p_out=args.p_out)
    graphs = sbm_generate(params, args.count, args.seed)
    write_corpus(args.out, [(g, args.label) for g in graphs], append=args.append)
    return 0


def cmd_gen_delaunay(args) -> int:
    records = []
    for label in range(args.classes):
        params = DelaunayParams(
            points_per_graph=args.points,
            seeds_per_class=args.seeds_per_class,
            noise_sigma=args.noise,
        )
        graphs = delaunay_generate(params, args.count, derive_seed(args.seed, "class", label))
        records.extend((g, label) for g in graphs)
    write_corpus(args.out, records, append=args.append)
    return 0


def cmd_gen_tu(args) -> int:
    write_corpus(args.out, parse_tu_dataset(args.directory, args.name), append=args.append)
    return 0


# embeddings and estimators


def cmd_embed(args) -> int:
    records = read_corpus(args.input)
    if not records:
        raise ArgumentError(f"Corpus {args.input} is empty")
    graphs = [g for g, _ in records]
    config = _distribution(args, corpus_channels(graphs))
    if args.weighted:
        if args.proposal_sigma is None:
            raise ArgumentError("--weighted needs --proposal-sigma")
        proposal = config.model_copy(update={"sigma": args.proposal_sigma})
        grnf = build_weighted_grnf(args.M, config, proposal, args.seed)
    else:
        grnf = build_grnf(args.M, config, args.seed)
    Z = embed_many(grnf, graphs, args.workers or get_settings().workers)
    if args.map_out:
        save_map_file(grnf, args.map_out)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["label"] + [f"z{m}" for m in range(grnf.M)])
    for (_, label), row in zip(records, Z):
        writer.writerow([label] + [repr(float(v)) for v in row])
    _write_output(buffer.getvalue(), args.out)
    return 0


def cmd_dim(args) -> int:
    print(embedding_dim_for(args.epsilon, args.delta, args.kind))
    return 0


def cmd_distance(args) -> int:
    grnf = load_map_file(args.map)
    Z = embed_many(grnf, [read_graph_file(args.g1), read_graph_file(args.g2)])
    print(json.dumps(distance_estimate(Z[0], Z[1]).to_dict()))
    return 0


def cmd_gram(args) -> int:
    grnf = load_map_file(args.map)
    records = read_corpus(args.input)
    gram = gram_matrix(grnf, [g for g, _ in records], workers=args.workers or get_settings().workers)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["id"] + gram.ids)
    for graph_id, row in zip(gram.ids, gram.values):
        writer.writerow([graph_id] + [repr(float(v)) for v in row])
    _write_output(buffer.getvalue(), args.out)
    logger.info(f"✅ Gram matrix {gram.size}x{gram.size}, min eigenvalue {gram.min_eigenvalue:.3e}")
    return 0


# experiments


def _tracked(command: str, args, run) -> int:
    parameters = {k: v for k, v in vars(args).items() if k != "handler"}
    run_id = record_run_start(command, parameters, getattr(args, "out", None))
    try:
        rows = run()
    except Exception as e:
        record_run_finish(run_id, "failed", error=str(e))
        raise
    record_run_finish(run_id, "completed", rows=rows)
    return 0


def cmd_experiment_convergence(args) -> int:
    def run() -> int:
        g1, g2 = read_graph_file(args.g1), read_graph_file(args.g2)
        config = _distribution(args, corpus_channels([g1, g2]))
        rows = convergence_diagnostics(
            g1,
            g2,
            args.mgrid,
            reference_M=args.ref_m,
            trials=args.trials,
            seed=args.seed,
            epsilon=args.epsilon,
            config=config,
            workers=args.workers or get_settings().workers,
        )
        _write_output(diagnostics_csv(rows), args.out)
        return len(rows)

    return _tracked("experiment convergence", args, run)


def cmd_experiment_accuracy(args) -> int:
    def run() -> int:
        config = ExperimentConfig(
            input=args.input,
            m_grid=args.mgrid,
            reps=args.reps,
            seed=args.seed,
            split=args.split,
            folds=args.folds,
            classifier=args.classifier,
            knn_k=args.knn_k,
            ridge_lambda=args.ridge_lambda,
            ref_m=args.ref_m or None,
            distribution=_distribution(args),
            workers=args.workers or get_settings().workers,
        )
        rows = run_accuracy_vs_M(config)
        _write_output(accuracy_csv(rows), args.out)
        return len(rows)

    return _tracked("experiment accuracy", args, run)


def cmd_serve(args) -> int:
    settings = get_settings()
    uvicorn.run("main:app", host=args.host or settings.api_host, port=args.port or settings.api_port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grnf", description="Graph Random Neural Features")
    parser.add_argument("--log-level", default=None, help="Overrides GRNF_LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="Generate or convert graph corpora").add_subparsers(dest="generator", required=True)

    sbm = gen.add_parser("sbm", help="Stochastic block model graphs")
    sbm.add_argument("--n", type=int, default=12)
    sbm.add_argument("--blocks", type=_int_list, default=[12], help="Comma-separated block sizes")
    sbm.add_argument("--p-in", type=float, default=0.4)
    sbm.add_argument("--p-out", type=float, default=0.0)
    sbm.add_argument("--count", type=int, default=300)
    sbm.add_argument("--seed", type=int, default=0)
    sbm.add_argument("--label", type=int, default=0, help="Class label written with every graph")
    sbm.add_argument("--append", action="store_true", help="Append to an existing corpus")
    sbm.add_argument("--out", required=True)
    sbm.set_defaults(handler=cmd_gen_sbm)

    dela = gen.add_parser("delaunay", help="Delaunay triangulations of perturbed seed points")
    dela.add_argument("--points", type=int, default=12)
    dela.add_argument("--seeds-per-class", type=int, default=12)
    dela.add_argument("--noise", type=float, default=1.0)
    dela.add_argument("--classes", type=int, default=2)
    dela.add_argument("--count", type=int, default=300, help="Graphs per class")
    dela.add_argument("--seed", type=int, default=0)
    dela.add_argument("--append", action="store_true")
    dela.add_argument("--out", required=True)
    dela.set_defaults(handler=cmd_gen_delaunay)

    tu = gen.add_parser("tu", help="Convert a TU benchmark dataset to a corpus")
    tu.add_argument("directory")
    tu.add_argument("name")
    tu.add_argument("--append", action="store_true")
    tu.add_argument("--out", required=True)
    tu.set_defaults(handler=cmd_gen_tu)

    emb = commands.add_parser("embed", help="Embed a corpus with a freshly sampled map")
    emb.add_argument("--input", required=True)
    emb.add_argument("--M", type=int, required=True)
    emb.add_argument("--seed", type=int, default=0)
    _add_distribution_options(emb)
    emb.add_argument("--weighted", action="store_true", help="Sample from a proposal and reweight")
    emb.add_argument("--proposal-sigma", type=float, default=None)
    emb.add_argument("--map-out", default=None, help="Also save the map document")
    emb.add_argument("--workers", type=int, default=None)
    emb.add_argument("--out", required=True)
    emb.set_defaults(handler=cmd_embed)

    dim = commands.add_parser("dim", help="Embedding dimension for an (epsilon, delta) guarantee")
    dim.add_argument("--epsilon", type=float, required=True)
    dim.add_argument("--delta", type=float, required=True)
    dim.add_argument("--kind", choices=["distance", "kernel"], default="distance")
    dim.set_defaults(handler=cmd_dim)

    dist = commands.add_parser("distance", help="Estimated distance between two graphs")
    dist.add_argument("--map", required=True)
    dist.add_argument("--g1", required=True)
    dist.add_argument("--g2", required=True)
    dist.set_defaults(handler=cmd_distance)

    gram = commands.add_parser("gram", help="Centred-kernel Gram matrix of a corpus")
    gram.add_argument("--map", required=True)
    gram.add_argument("--input", required=True)
    gram.add_argument("--workers", type=int, default=None)
    gram.add_argument("--out", required=True)
    gram.set_defaults(handler=cmd_gram)

    experiment = commands.add_parser("experiment", help="Monte-Carlo experiments").add_subparsers(dest="experiment", required=True)

    conv = experiment.add_parser("convergence", help="Concentration of the distance estimate")
    conv.add_argument("--g1", required=True)
    conv.add_argument("--g2", required=True)
    conv.add_argument("--mgrid", type=_int_list, default=[16, 64, 256, 1024, 4096])
    conv.add_argument("--ref-m", type=int, default=100_000)
    conv.add_argument("--trials", type=int, default=500)
    conv.add_argument("--epsilon", type=float, default=None, help="Defaults to 25%% of the reference squared distance")
    conv.add_argument("--seed", type=int, default=0)
    conv.add_argument("--workers", type=int, default=None)
    _add_distribution_options(conv)
    conv.add_argument("--out", required=True)
    conv.set_defaults(handler=cmd_experiment_convergence)

    acc = experiment.add_parser(
        "accuracy",
        help="Accuracy against M (ridge readout stands in for an SVM)",
    )
    acc.add_argument("--input", required=True)
    acc.add_argument("--mgrid", type=_int_list, default=[8, 32, 128, 512, 2048, 4096])
    acc.add_argument("--reps", type=int, default=10)
    acc.add_argument("--classifier", choices=["knn", "ridge"], default="knn")
    acc.add_argument("--knn-k", type=int, default=5)
    acc.add_argument("--ridge-lambda", type=float, default=1e-3)
    acc.add_argument("--split", type=float, default=0.8)
    acc.add_argument("--folds", type=int, default=None)
    acc.add_argument("--ref-m", type=int, default=10_000, help="Reference dimension, 0 disables")
    acc.add_argument("--seed", type=int, default=0)
    acc.add_argument("--workers", type=int, default=None)
    _add_distribution_options(acc)
    acc.add_argument("--out", required=True)
    acc.set_defaults(handler=cmd_experiment_accuracy)

    serve = commands.add_parser("serve", help="Start the HTTP API")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.set_defaults(handler=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level or get_settings().log_level)
    try:
        return args.handler(args)
    except (GrnfError, ValidationError) as e:
        message = " ".join(str(e).split()) or type(e).__name__
        print(f"❌ {message}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
