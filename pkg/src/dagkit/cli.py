"""Command-line pipelines: ingest, analyze, null, simulate, report.

Every command writes its artifacts plus a ``manifest.json`` under the
directory given by ``--out``.  All randomness flows from the command's
single ``--seed``; sub-seeds are derived with the documented base+i rule
and recorded in the manifest, so a rerun with identical inputs reproduces
every CSV/JSON byte for byte (the manifest's ``created_at`` stamp is the
one exception).
"""

from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__, backend, disruption, genmodel, graph, ingest, metamath, metrics
from . import nullmodel, stats
from .genmodel import CalibrationError
from .metamath import MetamathError
from .nullmodel import RandomizationError

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2


class InputError(Exception):
    """Bad or missing input; maps to exit code 2."""


def f6(x) -> str:
    """Floats in CSV carry 6 significant digits, locale-independent."""
    if x is None:
        return ""
    return f"{x:.6g}"


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def _digest_tree(path: str) -> dict[str, str]:
    if os.path.isfile(path):
        return {path: _sha256(path)}
    out = {}
    for name in sorted(os.listdir(path)):
        full = os.path.join(path, name)
        if os.path.isfile(full):
            out[full] = _sha256(full)
    return out


def write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(out_dir: str, command: str, args: argparse.Namespace, inputs: list[str],
                   seeds: dict, extra: dict | None = None) -> None:
    # the output path is not a computational input; keep it out of the hash
    config = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("func", "out") and not callable(v)
    }
    config_json = json.dumps(config, sort_keys=True, default=str)
    digests: dict[str, str] = {}
    for p in inputs:
        digests.update(_digest_tree(p))
    manifest = {
        "command": command,
        "argv": sys.argv[1:],
        "version": __version__,
        "kernel_backend": backend.implementation(),
        "config": json.loads(config_json),
        "config_hash": "sha256:" + hashlib.sha256(config_json.encode()).hexdigest(),
        "inputs": digests,
        "seeds": seeds,
        "created_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if extra:
        manifest.update(extra)
    write_json(os.path.join(out_dir, "manifest.json"), manifest)


def _require_file(path: str) -> str:
    if not os.path.isfile(path):
        raise InputError(f"input file not found: {path}")
    return path


def _require_network_dir(path: str) -> str:
    if not os.path.isdir(path) or not os.path.isfile(os.path.join(path, "edges.txt")):
        raise InputError(f"not a network directory (missing edges.txt): {path}")
    return path


def _load_two_column_csv(path: str) -> dict[str, str]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 2:
            raise InputError(f"{path}: expected a two-column CSV with a header")
        return {row[0].strip(): row[1].strip() for row in reader if row and row[0].strip()}


# ----------------------------------------------------------------- ingest


def cmd_ingest(args) -> int:
    _require_file(args.input)
    if args.metadata:
        _require_file(args.metadata)
    if args.fields:
        _require_file(args.fields)

    cleaning_info: dict = {}
    if args.format == "metamath":
        try:
            statements = metamath.parse_metamath_file(args.input)
        except MetamathError as exc:
            raise InputError(f"{args.input}: {exc}") from exc
        fields = _load_two_column_csv(args.fields) if args.fields else None
        g = metamath.theorem_network(statements, fields=fields)
        cleaning_info["statements"] = metamath.kind_counts(statements)
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            try:
                g = ingest.load_edge_list(fh)
            except ValueError as exc:
                raise InputError(f"{args.input}: {exc}") from exc
    cleaning_info["raw"] = {"nodes": g.node_count, "links": g.edge_count}
    cleaning_info["build_diagnostics"] = {
        "duplicate_edges_dropped": g.diagnostics.duplicate_edges_dropped,
        "self_loops_rejected": len(g.diagnostics.self_loops_rejected),
    }
    if args.metadata:
        with open(args.metadata, "r", encoding="utf-8", newline="") as fh:
            try:
                g, meta_report = ingest.load_csv_metadata(fh, g)
            except ValueError as exc:
                raise InputError(f"{args.metadata}: {exc}") from exc
        cleaning_info["metadata"] = {
            "rows_applied": meta_report.rows_applied,
            "unknown_ids": list(meta_report.unknown_ids),
        }
    if args.clean:
        g, report = ingest.clean(g)
        cleaning_info["cleaning"] = report.to_dict()
    cleaning_info["final"] = {"nodes": g.node_count, "links": g.edge_count}

    os.makedirs(args.out, exist_ok=True)
    ingest.save_network(g, args.out)
    write_json(os.path.join(args.out, "cleaning.json"), cleaning_info)
    inputs = [args.input] + [p for p in (args.metadata, args.fields) if p]
    write_manifest(args.out, "ingest", args, inputs, seeds={})
    return EXIT_OK


# ---------------------------------------------------------------- analyze


def _write_ccdf(path: str, ccdf) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "value"])
        for k, v in ccdf.points:
            writer.writerow([k, f6(v)])


def _write_disruption_csv(path: str, records) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "disruption", "citations", "mode"])
        for r in records:
            writer.writerow([r.node, f6(r.disruption), r.citations, r.mode])


def _write_bootstrap_csv(path: str, dist: stats.BootstrapDistribution) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["replicate", "mean"])
        for i, m in enumerate(dist.replicate_means):
            writer.writerow([i, f6(float(m))])


def _disruption_records(g, gen, args):
    if args.disruption == "full":
        return disruption.disruption_full(g, gen)
    if args.disruption == "windowed":
        return disruption.disruption_windowed(g, gen, window=args.window)
    try:
        return disruption.disruption_by_date(g, window_years=args.window_years)
    except ValueError as exc:
        raise InputError(f"date-based disruption: {exc}") from exc


def cmd_analyze(args) -> int:
    _require_network_dir(args.network)
    g = ingest.load_network(args.network)
    if g.node_count == 0:
        raise InputError(f"{args.network}: network is empty")
    os.makedirs(args.out, exist_ok=True)
    doc: dict = {"network": args.network, "nodes": g.node_count, "links": g.edge_count}

    gen = None
    if args.metrics or args.disruption or args.groups or args.self_degree:
        gen = graph.topological_generations(g)
        doc["generations"] = {
            "count": gen.generation_count,
            "zeroth_size": int(gen.sizes()[0]) if gen.generation_count else 0,
        }

    if args.metrics:
        report = metrics.summary(g, seed=args.seed)
        doc["structural"] = report.to_dict()
        for kind in ("total", "in", "out"):
            _write_ccdf(os.path.join(args.out, f"ccdf_{kind}.csv"), metrics.degree_ccdf(g, kind))

    if args.self_degree or args.metrics:
        sd = metrics.self_degree_correlation(g)
        doc["self_degree"] = {
            "spearman": sd.spearman,
            "p_value": sd.p_value,
            "first_bin_mean_in_degree": sd.curve.bin_means[0],
        }
        with open(os.path.join(args.out, "self_degree.csv"), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["bin_left", "bin_right", "mean", "stderr", "count"])
            curve = sd.curve
            for i in range(len(curve.bin_counts)):
                writer.writerow([
                    f6(curve.bin_edges[i]),
                    f6(curve.bin_edges[i + 1]),
                    f6(curve.bin_means[i]),
                    f6(curve.bin_stderrs[i]),
                    curve.bin_counts[i],
                ])

    records = None
    if args.disruption:
        records = _disruption_records(g, gen, args)
        _write_disruption_csv(os.path.join(args.out, "disruption.csv"), records)
        _, values, cites = disruption.defined_values(records)
        functional = {
            "mode": records[0].mode if records else args.disruption,
            "exclusion_rule": disruption.EXCLUSION_RULE,
            "defined_count": int(values.size),
            "undefined_count": g.node_count - int(values.size),
            "mean_disruption": float(values.mean()) if values.size else None,
        }
        if values.size >= 3:
            try:
                corr = stats.correlate(values, cites.astype(float), kind="pearson")
                functional["disruption_citations_pearson"] = corr.coefficient
                functional["disruption_citations_p"] = corr.p_value
            except ValueError:
                functional["disruption_citations_pearson"] = None
        if args.gini:
            try:
                functional["gini"] = disruption.gini_of_disruption(records)
            except ValueError:
                functional["gini"] = None
        doc["functional"] = functional

    if args.groups:
        prefs = disruption.reference_metrics(g, gen)
        if records is None:
            raise InputError("--groups requires --disruption")
        if "evolution" in args.groups:
            rows = disruption.grouped_evolution(g, gen, records)
            with open(os.path.join(args.out, "groups_evolution.csv"), "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["group", "lower", "upper", "count", "mean_disruption", "pearson", "p_value"])
                for i, row in enumerate(rows):
                    corr = row.correlation
                    writer.writerow([
                        i, f6(row.lower), f6(row.upper), row.count, f6(row.mean_disruption),
                        f6(corr.coefficient if corr else None),
                        f6(corr.p_value if corr else None),
                    ])
        for key in ("popularity", "age"):
            if key not in args.groups:
                continue
            rows = disruption.grouped_by_preference(records, prefs, key=key)
            with open(os.path.join(args.out, f"groups_{key}.csv"), "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["group", "key_low", "key_high", "count", "pearson", "p_value"])
                for i, row in enumerate(rows):
                    corr = row.correlation
                    writer.writerow([
                        i, f6(row.key_low), f6(row.key_high), row.count,
                        f6(corr.coefficient if corr else None),
                        f6(corr.p_value if corr else None),
                    ])
        if {"popularity", "age"} & set(args.groups):
            with open(os.path.join(args.out, "reference_metrics.csv"), "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["node", "ref_popularity", "ref_age"])
                for p in prefs:
                    writer.writerow([p.node, f6(p.reference_popularity), f6(p.reference_age)])

    if args.bootstrap:
        doc["bootstrap"] = _bootstrap_groups(g, records, args)

    write_json(os.path.join(args.out, "metrics.json"), doc)
    write_manifest(args.out, "analyze", args, [args.network], seeds={"seed": args.seed})
    return EXIT_OK


def _bootstrap_groups(g, records, args) -> dict:
    """Bootstrap the mean of a quantity over the top vs bottom 20% groups
    and test the difference; feeds the histogram-overlay panels."""
    if args.bootstrap == "in-degree":
        kout = g.out_degrees()
        kin = g.in_degrees()
        pairs = [(i, float(kout[i])) for i in range(g.node_count)]
        top, bottom = stats.top_bottom_split(pairs, fraction=0.2)
        value = lambda node: float(kin[node])  # noqa: E731
        label = "mean in-degree by out-degree group"
    else:
        if records is None:
            raise InputError("--bootstrap disruption requires --disruption")
        nodes, values, cites = disruption.defined_values(records)
        by_node = dict(zip(nodes.tolist(), values.tolist()))
        pairs = [(int(n), float(c)) for n, c in zip(nodes, cites)]
        top, bottom = stats.top_bottom_split(pairs, fraction=0.2)
        value = lambda node: by_node[node]  # noqa: E731
        label = "mean disruption by citation group"
    a = [value(node) for node, _ in top]
    b = [value(node) for node, _ in bottom]
    test = stats.bootstrap_two_sample_test(a, b, B=args.replicates, seed=args.seed)
    _write_bootstrap_csv(os.path.join(args.out, "bootstrap_top.csv"), test.dist_a)
    _write_bootstrap_csv(os.path.join(args.out, "bootstrap_bottom.csv"), test.dist_b)
    return {
        "quantity": label,
        "replicates": args.replicates,
        "t_statistic": test.t_statistic,
        "p_value": test.p_value,
        "method": test.method,
    }


# ------------------------------------------------------------------- null


def _null_metric(name: str, window: int):
    if name == "clustering":
        return lambda dag: metrics.clustering_directed(dag)[1]
    if name == "disruption-corr":
        def corr(dag):
            gen = graph.topological_generations(dag)
            records = disruption.disruption_windowed(dag, gen, window=window)
            _, values, cites = disruption.defined_values(records)
            return stats.correlate(values, cites.astype(float), kind="pearson").coefficient
        return corr
    if name == "mean-disruption":
        def mean_d(dag):
            gen = graph.topological_generations(dag)
            records = disruption.disruption_windowed(dag, gen, window=window)
            _, values, _ = disruption.defined_values(records)
            return float(values.mean())
        return mean_d
    raise InputError(f"unknown metric {name!r}")


def cmd_null(args) -> int:
    _require_network_dir(args.network)
    g = ingest.load_network(args.network)
    metric = _null_metric(args.metric, args.window)
    real_value = float(metric(g))
    ens = nullmodel.ensemble(
        g, metric, size=args.ensemble, base_seed=args.seed, metric_name=args.metric
    )
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, f"null_{args.metric}.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["realization", "seed", "metric", "value"])
        for i, (s, v) in enumerate(zip(ens.seeds, ens.values)):
            writer.writerow([i, s, args.metric, f6(v)])
    values = np.asarray(ens.values)
    z = nullmodel.zscore(real_value, values)
    write_json(os.path.join(args.out, "zscores.json"), {
        "metric": args.metric,
        "real": real_value,
        "null_mean": float(values.mean()),
        "null_std": float(np.std(values, ddof=1)) if values.size >= 2 else None,
        "zscore": z,
        "ensemble": args.ensemble,
        "base_seed": args.seed,
    })
    write_manifest(args.out, "null", args, [args.network],
                   seeds={"base_seed": args.seed, "realization_seeds": list(ens.seeds)})
    return EXIT_OK


# --------------------------------------------------------------- simulate


def cmd_simulate(args) -> int:
    if args.seed_graph:
        _require_network_dir(args.seed_graph)
        seed_graph = ingest.load_network(args.seed_graph)
        if seed_graph.field_vectors is None:
            raise InputError(f"{args.seed_graph}: seed graph has no vectors.csv")
    else:
        # documented default: a synthetic 100-node seed using --seed + 1
        seed_graph = genmodel.synthetic_seed_graph(100, seed=args.seed + 1, dims=args.dims)

    if args.calibrate:
        if args.target_m is None:
            raise InputError("--calibrate requires --target-m")
        result = genmodel.calibrate(
            q=args.q, target_n=args.n, seed_graph=seed_graph, m_target=args.target_m,
            p_range=tuple(args.p_range), w_range=tuple(args.w_range),
            a_range=tuple(args.a_range), base_seed=args.seed, dims=args.dims,
            vector_density=args.vector_density,
        )
        params = genmodel.GenParams(**{**result.params.to_dict(), "seed": args.seed})
        calibration = {"achieved_mean_m": result.achieved_mean_m,
                       "evaluations": result.evaluations, "target_m": args.target_m}
    else:
        if None in (args.p, args.w, args.a):
            raise InputError("simulate needs --p --w --a --q --n (or --calibrate)")
        params = genmodel.GenParams(
            p=args.p, w=args.w, a=args.a, q=args.q, target_n=args.n,
            seed=args.seed, dims=args.dims, vector_density=args.vector_density,
        )
        calibration = None

    labeled = genmodel.generate(params, seed_graph)
    lstats = genmodel.link_type_stats(labeled)
    os.makedirs(args.out, exist_ok=True)
    ingest.save_network(labeled.dag, args.out)
    with open(os.path.join(args.out, "edges_labeled.txt"), "w", encoding="utf-8") as fh:
        fh.write("# source\ttarget\ttype\tbirth\n")
        for i in range(labeled.edge_count):
            kind = "L" if labeled.labels[i] == genmodel.LOGICAL else "S"
            fh.write(f"{labeled.sources[i]}\t{labeled.targets[i]}\t{kind}\t{labeled.birth[i]}\n")
    write_json(os.path.join(args.out, "linkstats.json"), {
        **lstats.to_dict(),
        "nodes": labeled.dag.node_count,
        "links": labeled.edge_count,
    })
    extra = {
        "params": params.to_dict(),
        "achieved": {"n": labeled.dag.node_count, "m": labeled.edge_count},
    }
    if calibration:
        extra["calibration"] = calibration
    write_manifest(args.out, "simulate", args,
                   [args.seed_graph] if args.seed_graph else [], seeds={"seed": args.seed},
                   extra=extra)
    return EXIT_OK


# ----------------------------------------------------------------- report


def cmd_report(args) -> int:
    if len(args.inputs) < 2:
        raise InputError("report needs at least 2 analyzed network directories")
    columns = []
    docs = []
    for path in args.inputs:
        metrics_path = os.path.join(path, "metrics.json")
        manifest_path = os.path.join(path, "manifest.json")
        if not os.path.isfile(metrics_path):
            raise InputError(f"{path}: missing metrics.json (run analyze first)")
        with open(metrics_path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        if "structural" not in doc:
            raise InputError(f"{path}: metrics.json lacks a structural block (run analyze --metrics)")
        provenance = "unknown"
        if os.path.isfile(manifest_path):
            with open(manifest_path, "r", encoding="utf-8") as fh:
                manifest = json.load(fh)
            network_dir = manifest.get("config", {}).get("network", "")
            origin_manifest = os.path.join(network_dir, "manifest.json") if network_dir else ""
            if origin_manifest and os.path.isfile(origin_manifest):
                with open(origin_manifest, "r", encoding="utf-8") as fh:
                    provenance = {"ingest": "real", "simulate": "simulated"}.get(
                        json.load(fh).get("command"), "unknown"
                    )
        columns.append({"path": path, "provenance": provenance})
        docs.append(doc)
    keys = sorted(docs[0]["structural"].keys())
    for path, doc in zip(args.inputs[1:], docs[1:]):
        if sorted(doc["structural"].keys()) != keys:
            raise InputError(f"{path}: structural metrics schema differs from the first input")
    structural = {}
    for key in keys:
        structural[key] = [doc["structural"][key] for doc in docs]
    functional = {}
    if all("functional" in doc for doc in docs):
        fkeys = set.intersection(*(set(doc["functional"].keys()) for doc in docs))
        for key in sorted(fkeys):
            functional[key] = [doc["functional"][key] for doc in docs]
    os.makedirs(args.out, exist_ok=True)
    write_json(os.path.join(args.out, "report.json"), {
        "columns": columns,
        "structural": structural,
        "functional": functional,
    })
    write_manifest(args.out, "report", args, list(args.inputs), seeds={})
    return EXIT_OK


# ------------------------------------------------------------------ main


def _default_threads() -> int:
    """Thread cap, defaulting from DAGKIT_THREADS; execution is currently
    serial, so the cap only documents intent in the manifest."""
    try:
        return max(1, int(os.environ.get("DAGKIT_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dagkit",
        description="Build and analyse directed acyclic knowledge networks.",
    )
    parser.add_argument("--version", action="version", version=f"dagkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ing = sub.add_parser("ingest", help="parse inputs into a network directory")
    p_ing.add_argument("--format", choices=["metamath", "edgelist"], required=True)
    p_ing.add_argument("--input", required=True)
    p_ing.add_argument("--metadata", help="id,label,date CSV to attach")
    p_ing.add_argument("--fields", help="label,field CSV for one-hot field vectors")
    p_ing.add_argument("--clean", action="store_true", help="run the cleaning pipeline")
    p_ing.add_argument("--out", required=True)
    p_ing.add_argument("--threads", type=int, default=_default_threads())
    p_ing.set_defaults(func=cmd_ingest)

    p_an = sub.add_parser("analyze", help="structural and functional metrics")
    p_an.add_argument("--network", required=True)
    p_an.add_argument("--metrics", action="store_true")
    p_an.add_argument("--disruption", choices=["full", "windowed", "date"])
    p_an.add_argument("--window", type=int, default=10)
    p_an.add_argument("--window-years", type=int, default=None)
    p_an.add_argument("--gini", action="store_true")
    p_an.add_argument("--self-degree", action="store_true")
    p_an.add_argument("--groups", action="append", default=[],
                      choices=["evolution", "popularity", "age"])
    p_an.add_argument("--bootstrap", choices=["in-degree", "disruption"])
    p_an.add_argument("--replicates", type=int, default=1000)
    p_an.add_argument("--seed", type=int, default=0)
    p_an.add_argument("--out", required=True)
    p_an.add_argument("--threads", type=int, default=_default_threads())
    p_an.set_defaults(func=cmd_analyze)

    p_null = sub.add_parser("null", help="degree-preserving null ensembles and Z-scores")
    p_null.add_argument("--network", required=True)
    p_null.add_argument("--ensemble", type=int, default=10)
    p_null.add_argument("--seed", type=int, default=0)
    p_null.add_argument("--metric", required=True,
                        choices=["clustering", "disruption-corr", "mean-disruption"])
    p_null.add_argument("--window", type=int, default=10)
    p_null.add_argument("--out", required=True)
    p_null.add_argument("--threads", type=int, default=_default_threads())
    p_null.set_defaults(func=cmd_null)

    p_sim = sub.add_parser("simulate", help="run the generative model")
    p_sim.add_argument("--p", type=float)
    p_sim.add_argument("--w", type=float)
    p_sim.add_argument("--a", type=float)
    p_sim.add_argument("--q", type=float, required=True)
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--dims", type=int, default=10)
    p_sim.add_argument("--vector-density", type=float, default=0.3)
    p_sim.add_argument("--seed-graph", help="network directory with vectors.csv")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--calibrate", action="store_true")
    p_sim.add_argument("--target-m", type=int)
    p_sim.add_argument("--p-range", nargs=2, type=float, default=[0.005, 1.0])
    p_sim.add_argument("--w-range", nargs=2, type=float, default=[0.0, 0.0])
    p_sim.add_argument("--a-range", nargs=2, type=float, default=[1.0, 1.0])
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--threads", type=int, default=_default_threads())
    p_sim.set_defaults(func=cmd_simulate)

    p_rep = sub.add_parser("report", help="align metrics across analyzed networks")
    p_rep.add_argument("--inputs", nargs="+", required=True)
    p_rep.add_argument("--out", required=True)
    p_rep.add_argument("--threads", type=int, default=_default_threads())
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"dagkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CalibrationError, RandomizationError, graph.CycleError) as exc:
        print(f"dagkit: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except ValueError as exc:
        print(f"dagkit: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
