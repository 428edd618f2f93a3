"""Command-line interface.

Configuration precedence: explicit flags > GRATIS_* environment variables >
JSON config file (--config / GRATIS_CONFIG) > defaults. All commands are
deterministic given --seed.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .features import canonical_names, compute_feature_vector
from .forecast import (
    averaging_weights,
    build_training_table,
    fit_meta_models,
    predict_and_select,
)
from .ga import GAConfig, TargetSpec, tune_to_target
from .generator import GeneratorConfig, MultiSeasonalSpec, generate_batch, generate_multiseasonal
from .instance_space import coverage_grid, pca_embed, scale_feature_matrix, tsne_embed
from .serialize import (
    coverage_report,
    dump_json,
    load_json,
    meta_model_from_dict,
    meta_model_to_dict,
    model_to_dict,
    read_embedding_csv,
    read_feature_csv,
    read_series_file,
    write_embedding_csv,
    write_feature_csv,
    write_series_csv,
    write_series_jsonl,
)


def _load_config(ctx, param, value):
    """Populate click's default_map from a JSON config file, so the
    precedence is flags > environment > file > built-in defaults."""
    if value is None:
        return None
    path = Path(value)
    if not path.exists():
        raise click.UsageError(f"config file not found: {value}")
    with path.open() as fh:
        data = json.load(fh)
    ctx.default_map = ctx.default_map or {}
    for command, overrides in data.items():
        ctx.default_map.setdefault(command, {}).update(overrides)
    return value


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--config",
    envvar="GRATIS_CONFIG",
    callback=_load_config,
    expose_value=False,
    is_eager=True,
    help="JSON config file with per-command defaults.",
)
def main():
    """Synthetic time series workbench."""


def _write_series(series, out, fmt, ids=None):
    if fmt == "csv":
        write_series_csv(series, out, ids=ids)
    else:
        write_series_jsonl(series, out, ids=ids)


@main.command()
@click.option("--period", type=int, default=1, show_default=True, envvar="GRATIS_PERIOD")
@click.option("--count", type=int, required=True)
@click.option("--length", type=int, default=None)
@click.option("--length-pool", type=str, default=None, help="Comma-separated lengths.")
@click.option("--multi-period", type=str, default=None,
              help="Comma-separated periods for multi-seasonal aggregation.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--k-max", type=int, default=5, show_default=True)
@click.option("-o", "--out", type=click.Path(), required=True)
@click.option("--format", "fmt", type=click.Choice(["jsonl", "csv"]), default="jsonl",
              show_default=True)
def generate(period, count, length, length_pool, multi_period, seed, k_max, out, fmt):
    """Generate random MAR series."""
    if count < 1:
        raise click.UsageError("--count must be >= 1")
    try:
        if multi_period:
            periods = tuple(int(p) for p in multi_period.split(","))
            series = [
                generate_multiseasonal(
                    MultiSeasonalSpec(
                        periods=periods, length=length or max(periods) * 4
                    ),
                    GeneratorConfig(k_max=k_max),
                    seed=(seed, i),
                )
                for i in range(count)
            ]
        else:
            cfg = GeneratorConfig(
                period=period,
                length=length,
                length_pool=tuple(int(v) for v in length_pool.split(",")) if length_pool else None,
                k_max=k_max,
            )
            series = generate_batch(cfg, count, seed=seed)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _write_series(series, out, fmt)
    click.echo(f"wrote {count} series (period {multi_period or period}, seed {seed}) to {out}")


@main.command()
@click.argument("series_file", type=click.Path(exists=True))
@click.option("-o", "--out", type=click.Path(), required=True)
def features(series_file, out):
    """Compute feature vectors for a series file (JSONL or long CSV)."""
    series = read_series_file(series_file)
    if not series:
        raise click.UsageError(f"no series found in {series_file}")
    vectors = [compute_feature_vector(ts) for ts in series]
    ids = [str(ts.origin_meta.get("id", i)) if ts.origin_meta else str(i)
           for i, ts in enumerate(series)]
    write_feature_csv(vectors, out, ids=ids)
    click.echo(f"wrote {len(vectors)} feature rows to {out}")


@main.command()
@click.argument("features_file", type=click.Path(exists=True))
@click.option("--method", type=click.Choice(["pca", "tsne"]), default="tsne",
              show_default=True)
@click.option("--perplexity", type=float, default=30.0, show_default=True)
@click.option("--iterations", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--out", type=click.Path(), required=True)
def embed(features_file, method, perplexity, iterations, seed, out):
    """Embed a feature CSV into two dimensions."""
    fm = read_feature_csv(features_file)
    scaled = scale_feature_matrix(fm)
    if method == "pca":
        emb = pca_embed(scaled)
    else:
        emb = tsne_embed(scaled, perplexity=perplexity, iterations=iterations, seed=seed)
    write_embedding_csv(emb, out, ids=fm.ids)
    click.echo(f"wrote {method} embedding of {fm.n_rows} rows to {out}")


@main.command()
@click.option("--a", "file_a", type=click.Path(exists=True), required=True)
@click.option("--b", "file_b", type=click.Path(exists=True), required=True)
@click.option("--nb", type=int, default=30, show_default=True)
@click.option("-o", "--out", type=click.Path(), default=None)
def coverage(file_a, file_b, nb, out):
    """Miscoverage of embedding A over B (and B over A)."""
    emb_a = read_embedding_csv(file_a)
    emb_b = read_embedding_csv(file_b)
    grid = coverage_grid(emb_a.points, emb_b.points, nb=nb)
    report = coverage_report(grid)
    click.echo(f"miscoverage(A over B) = {report['miscoverage_ab']:.6f}")
    click.echo(f"miscoverage(B over A) = {report['miscoverage_ba']:.6f}")
    if out:
        dump_json(report, out)


def _parse_feature_args(pairs):
    targets = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"--feature expects name=value, got {pair!r}")
        name, _, raw = pair.partition("=")
        try:
            targets[name.strip()] = float(raw)
        except ValueError:
            raise click.UsageError(f"target for {name!r} must be numeric, got {raw!r}")
    return targets


@main.command()
@click.option("--period", type=int, default=1, show_default=True)
@click.option("--length", type=int, default=60, show_default=True)
@click.option("--count", type=int, default=1, show_default=True)
@click.option("--feature", "feature_pairs", multiple=True, required=True,
              help="Target as name=value; repeatable.")
@click.option("--population", type=int, default=30, show_default=True)
@click.option("--generations", type=int, default=100, show_default=True)
@click.option("--tolerance", type=float, default=-0.05, show_default=True)
@click.option("--crossover-prob", type=float, default=0.8, show_default=True)
@click.option("--mutation-prob", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--out", type=click.Path(), required=True)
def tune(period, length, count, feature_pairs, population, generations, tolerance,
         crossover_prob, mutation_prob, seed, out):
    """Tune MAR models toward target features with the GA."""
    targets = _parse_feature_args(feature_pairs)
    try:
        target = TargetSpec(
            feature_names=tuple(targets.keys()),
            target_values=tuple(targets.values()),
            period=period,
            length=length,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    results = []
    for i in range(count):
        cfg = GAConfig(
            population=population,
            max_generations=generations,
            tolerance=tolerance,
            crossover_prob=crossover_prob,
            mutation_prob=mutation_prob,
            seed=(seed, i) if count > 1 else seed,
        )
        res = tune_to_target(target, cfg)
        results.append(res)
        click.echo(f"series {i}: fitness {res.fitness:.4f} after {res.generations} generations")
    bundle = {
        "target": {"features": targets, "period": period, "length": length},
        "results": [
            {
                "id": str(i),
                "values": [float(v) for v in res.series.values],
                "periods": list(res.series.periods),
                "model": model_to_dict(res.model),
                "trace": list(res.trace),
                "fitness": res.fitness,
                "generations": res.generations,
                "feature_values": res.feature_values,
            }
            for i, res in enumerate(results)
        ],
    }
    dump_json(bundle, out)
    click.echo(f"wrote tuning bundle to {out}")


@main.command("train-meta")
@click.argument("series_file", type=click.Path(exists=True))
@click.option("--tau", type=float, default=0.5, show_default=True)
@click.option("--lambdas", type=str, default="0.0,0.01,0.1,1.0", show_default=True)
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("-o", "--out", type=click.Path(), required=True)
def train_meta(series_file, tau, lambdas, folds, out):
    """Train per-method MASE meta-models on a generated corpus."""
    corpus = read_series_file(series_file)
    if not corpus:
        raise click.UsageError(f"no series found in {series_file}")
    grid = tuple(float(v) for v in lambdas.split(","))
    table = build_training_table(corpus)
    meta = fit_meta_models(table, tau=tau, lambdas=grid, folds=folds)
    dump_json(meta_model_to_dict(meta), out)
    click.echo(
        f"trained on {table.features.n_rows} series "
        f"(skipped {len(table.skipped)}), wrote {out}"
    )


@main.command()
@click.argument("features_file", type=click.Path(exists=True))
@click.option("--meta", "meta_file", type=click.Path(exists=True), required=True)
@click.option("-o", "--out", type=click.Path(), required=True)
def recommend(features_file, meta_file, out):
    """Select methods and averaging weights from a feature CSV."""
    fm = read_feature_csv(features_file)
    meta = meta_model_from_dict(load_json(meta_file))
    rows = []
    for i, sid in enumerate(fm.ids):
        mapping = {
            name: (None if np.isnan(fm.data[i, j]) else float(fm.data[i, j]))
            for j, name in enumerate(fm.columns)
        }
        selected, predicted = predict_and_select(meta, mapping)
        weights = averaging_weights([predicted[m] for m in meta.methods])
        rows.append(
            {
                "id": sid,
                "selected": selected,
                "predicted_mase": {m: predicted[m] for m in meta.methods},
                "averaging_weights": {
                    m: float(w) for m, w in zip(meta.methods, weights)
                },
            }
        )
    dump_json({"recommendations": rows}, out)
    click.echo(f"wrote {len(rows)} recommendations to {out}")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True, envvar="GRATIS_PORT")
@click.option("--host", type=str, default="127.0.0.1", show_default=True,
              envvar="GRATIS_HOST")
@click.option("--data-dir", type=click.Path(), default="./gratis-data",
              show_default=True, envvar="GRATIS_DATA_DIR")
@click.option("--workers", type=int, default=None, envvar="GRATIS_WORKERS")
def serve(port, host, data_dir, workers):
    """Run the HTTP job service."""
    import uvicorn

    from .service import ServiceSettings, create_app

    app = create_app(ServiceSettings(data_dir=data_dir, workers=workers))
    uvicorn.run(app, host=host, port=port)


@main.command("feature-names")
def feature_names():
    """Print the canonical feature names."""
    for name in canonical_names(1):
        click.echo(name)


if __name__ == "__main__":
    sys.exit(main())
