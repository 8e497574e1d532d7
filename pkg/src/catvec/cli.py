"""Command-line front end: stats, run, synth, and classify subcommands.

Option resolution order everywhere: explicit flags, then CATVEC_*
environment variables, then the ``--config`` key=value file, then
built-in defaults (which reproduce the standard Reuters-22173 protocol).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import click

from .categorizers import (
    Approach,
    CategoryModel,
    DEFAULT_MAX_TRAINING_TERMS,
    build_direct,
    build_integrated,
    build_lexicon,
    build_training,
    load_model,
    save_model,
    score_documents,
)
from .corpus import (
    Collection,
    ParseError,
    collection_stats,
    load_raw,
    parse_collection,
    render_stats_table,
    split_collection,
    stats_to_json,
)
from .evaluation import (
    DEFAULT_K_MAX,
    Strategy,
    gold_from_collection,
    render_report,
    reports_to_dict,
    scores_to_csv,
    sweep,
)
from .lexicon import LexiconFormatError, load_lexicon
from .synth import generate
from .vsm import build_df_table, terms_present

DEFAULT_TRAIN_COUNT = 21_450

ENV_CORPUS = "CATVEC_CORPUS"
ENV_LEXICON = "CATVEC_LEXICON"


class IOFailure(click.ClickException):
    exit_code = 2


class EvalFailure(click.ClickException):
    exit_code = 1


@dataclass
class RunConfig:
    """Resolved settings for a comparison run."""

    corpus_paths: tuple[str, ...]
    lexicon_path: str | None = None
    categories_path: str | None = None
    train_count: int = DEFAULT_TRAIN_COUNT
    approaches: tuple[Approach, ...] = tuple(Approach)
    strategy: Strategy = Strategy.THRESHOLD
    k_max: int = DEFAULT_K_MAX
    max_training_terms: int = DEFAULT_MAX_TRAINING_TERMS
    out_path: str | None = None
    cache_dir: str | None = None
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)


def _read_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    if not Path(path).is_file():
        raise IOFailure(f"config file not found: {path}")
    out: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise IOFailure(f"bad config line (expected key=value): {line!r}")
        out[key.strip()] = value.strip()
    return out


def _split_paths(value: str) -> tuple[str, ...]:
    return tuple(p for p in value.split(os.pathsep) if p)


def _resolve_corpus_paths(
    flag_paths: tuple[str, ...], cfg: dict[str, str]
) -> tuple[str, ...]:
    paths = flag_paths
    if not paths and os.environ.get(ENV_CORPUS):
        paths = _split_paths(os.environ[ENV_CORPUS])
    if not paths and cfg.get("corpus"):
        paths = _split_paths(cfg["corpus"])
    if not paths:
        raise IOFailure(
            f"no corpus given (use --corpus, {ENV_CORPUS}, or a config file)"
        )
    for p in paths:
        if not Path(p).exists():
            raise IOFailure(f"corpus path not found: {p}")
    return paths


def _resolve_lexicon_path(flag: str | None, cfg: dict[str, str]) -> str | None:
    return flag or os.environ.get(ENV_LEXICON) or cfg.get("lexicon") or None


def _load_collection(
    paths: tuple[str, ...], categories_path: str | None
) -> Collection:
    categories = None
    if categories_path:
        if not Path(categories_path).is_file():
            raise IOFailure(f"categories file not found: {categories_path}")
        categories = [
            line.strip().lower()
            for line in Path(categories_path).read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.startswith("#")
        ]
    try:
        return parse_collection(load_raw(paths), categories)
    except ParseError as exc:
        raise IOFailure(f"corpus parse failed: {exc}") from exc


def _parse_approaches(text: str) -> tuple[Approach, ...]:
    names = [n.strip().lower() for n in text.split(",") if n.strip()]
    if not names:
        raise click.UsageError("no approaches requested")
    out = []
    for name in names:
        try:
            approach = Approach(name)
        except ValueError:
            valid = ", ".join(a.value for a in Approach)
            raise click.UsageError(f"unknown approach {name!r} (valid: {valid})")
        if approach not in out:
            out.append(approach)
    return tuple(out)


def build_approach_models(
    config: RunConfig, train: Collection, train_tokens: list[list[str]]
) -> dict[Approach, CategoryModel]:
    """Build every requested model, sharing intermediate builds."""
    synsets = None
    if {Approach.LEXICON, Approach.INTEGRATED} & set(config.approaches):
        if not config.lexicon_path:
            raise IOFailure(
                "a lexicon is required for the lexicon/integrated approaches "
                f"(use --lexicon or {ENV_LEXICON})"
            )
        if not Path(config.lexicon_path).is_file():
            raise IOFailure(f"lexicon file not found: {config.lexicon_path}")
        try:
            synsets = load_lexicon(config.lexicon_path)
        except LexiconFormatError as exc:
            raise IOFailure(f"lexicon parse failed: {exc}") from exc

    built: dict[Approach, CategoryModel] = {}

    def get(approach: Approach) -> CategoryModel:
        if approach not in built:
            if approach is Approach.DIRECT:
                built[approach] = build_direct(train.categories)
            elif approach is Approach.LEXICON:
                built[approach] = build_lexicon(train.categories, synsets)
            elif approach is Approach.TRAINING:
                built[approach] = build_training(train, config.max_training_terms)
            else:
                lex = get(Approach.LEXICON)
                trn = get(Approach.TRAINING)
                built[approach] = build_integrated(
                    lex, trn, terms_present(lex.vocab.terms, train_tokens)
                )
        return built[approach]

    return {a: get(a) for a in config.approaches}


def execute_run(config: RunConfig):
    """Full comparison pipeline; returns (reports, rendered table)."""
    collection = _load_collection(config.corpus_paths, config.categories_path)
    train_count = min(config.train_count, len(collection.documents))
    train, test = split_collection(collection, train_count)
    if not test.documents:
        raise EvalFailure(
            "no test documents after the split; lower --train-count"
        )
    train_tokens = [d.tokens for d in train.documents]
    gold = gold_from_collection(test)

    models = build_approach_models(config, train, train_tokens)

    cache_dir = Path(config.cache_dir) if config.cache_dir else None
    if cache_dir is not None:
        cache_dir.mkdir(parents=True, exist_ok=True)

    reports = []
    for approach in config.approaches:
        model = models[approach]
        cache_file = (
            cache_dir / f"{approach.value}.model.json" if cache_dir else None
        )
        dft = None
        if cache_file is not None and cache_file.is_file():
            model, dft = load_model(cache_file)
        if dft is None:
            dft = build_df_table(train_tokens, model.vocab)
            if cache_file is not None:
                save_model(cache_file, model, dft)
        scores = score_documents(test.documents, model, dft, config.jobs)
        reports.append(
            sweep(
                scores,
                gold,
                collection.categories,
                strategy=config.strategy,
                k_max=config.k_max,
                approach=approach.value,
            )
        )
    return reports, render_report(reports)


@click.group()
def main():
    """Vector-space text categorization over tagged newswire corpora."""


@main.command()
@click.option("--corpus", "corpus_paths", multiple=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option(
    "--train-count",
    type=int,
    default=None,
    help=f"Positional split point (default {DEFAULT_TRAIN_COUNT:,}, clamped).",
)
@click.option(
    "--json",
    "json_path",
    type=click.Path(),
    default=None,
    help="Also write the stats as JSON ('-' for stdout).",
)
def stats(corpus_paths, config_path, train_count, json_path):
    """Collection statistics for the training/test/total subcollections."""
    cfg = _read_config(config_path)
    paths = _resolve_corpus_paths(corpus_paths, cfg)
    if train_count is None:
        train_count = int(cfg.get("train_count", DEFAULT_TRAIN_COUNT))
    collection = _load_collection(paths, None)
    train_count = min(train_count, len(collection.documents))
    train, test = split_collection(collection, train_count)
    columns = {
        "Training": collection_stats(train),
        "Test": collection_stats(test),
        "Total": collection_stats(collection),
    }
    click.echo(render_stats_table(columns), nl=False)
    if json_path:
        payload = stats_to_json(columns)
        if json_path == "-":
            click.echo(payload)
        else:
            Path(json_path).write_text(payload + "\n", encoding="utf-8")


@main.command()
@click.option("--corpus", "corpus_paths", multiple=True, type=click.Path())
@click.option("--lexicon", "lexicon_path", type=click.Path(), default=None)
@click.option(
    "--categories",
    "categories_path",
    type=click.Path(),
    default=None,
    help="Declared category list, one name per line (default: observed topics).",
)
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--train-count", type=int, default=None)
@click.option(
    "--approaches",
    default=None,
    help="Comma-separated subset of: direct, lexicon, training, integrated.",
)
@click.option(
    "--strategy",
    type=click.Choice([s.value for s in Strategy]),
    default=None,
)
@click.option("--k-max", type=int, default=None)
@click.option("--max-training-terms", type=int, default=None)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the full report (all sweep points) as JSON.")
@click.option("--cache", "cache_dir", type=click.Path(), default=None,
              help="Directory for model caching between invocations.")
@click.option("--jobs", type=int, default=None, help="Scoring worker count.")
def run(
    corpus_paths,
    lexicon_path,
    categories_path,
    config_path,
    train_count,
    approaches,
    strategy,
    k_max,
    max_training_terms,
    out_path,
    cache_dir,
    jobs,
):
    """Build the requested models, score the test split, and compare."""
    cfg = _read_config(config_path)
    config = RunConfig(
        corpus_paths=_resolve_corpus_paths(corpus_paths, cfg),
        lexicon_path=_resolve_lexicon_path(lexicon_path, cfg),
        categories_path=categories_path or cfg.get("categories"),
        train_count=(
            train_count
            if train_count is not None
            else int(cfg.get("train_count", DEFAULT_TRAIN_COUNT))
        ),
        approaches=_parse_approaches(
            approaches or cfg.get("approaches", "direct,lexicon,training,integrated")
        ),
        strategy=Strategy(strategy or cfg.get("strategy", "threshold")),
        k_max=k_max if k_max is not None else int(cfg.get("k_max", DEFAULT_K_MAX)),
        max_training_terms=(
            max_training_terms
            if max_training_terms is not None
            else int(cfg.get("max_training_terms", DEFAULT_MAX_TRAINING_TERMS))
        ),
        out_path=out_path,
        cache_dir=cache_dir,
        jobs=jobs if jobs is not None else int(cfg.get("jobs", os.cpu_count() or 1)),
    )
    reports, table = execute_run(config)
    click.echo(table, nl=False)
    if config.out_path:
        Path(config.out_path).write_text(
            json.dumps(reports_to_dict(reports), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )


@main.command()
@click.option("--seed", type=int, required=True)
@click.option("--docs", "n_docs", type=int, default=1000, show_default=True)
@click.option("--categories", "n_categories", type=int, default=20, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option(
    "--lexicon-out",
    type=click.Path(),
    default=None,
    help="Also write the matching synonym map.",
)
def synth(seed, n_docs, n_categories, out_path, lexicon_out):
    """Generate a deterministic synthetic corpus (and optional lexicon)."""
    if n_docs < 1 or n_categories < 1:
        raise click.UsageError("--docs and --categories must be >= 1")
    corpus = generate(seed, n_docs, n_categories)
    Path(out_path).write_text(corpus.corpus_text, encoding="utf-8")
    if lexicon_out:
        Path(lexicon_out).write_text(corpus.lexicon_text, encoding="utf-8")
    click.echo(
        f"wrote {n_docs} docs ({corpus.train_count} train / "
        f"{n_docs - corpus.train_count} test) to {out_path}"
    )
    if lexicon_out:
        click.echo(f"wrote lexicon for {n_categories} categories to {lexicon_out}")
    click.echo(
        f"undertrained category: {corpus.undertrained_category} "
        f"(suggested --train-count {corpus.train_count})"
    )


@main.command()
@click.option("--model", "model_path", type=click.Path(), required=True)
@click.option("--corpus", "corpus_paths", multiple=True, type=click.Path())
@click.option("--top", type=int, default=5, show_default=True)
@click.option(
    "--csv",
    "csv_path",
    type=click.Path(),
    default=None,
    help="Dump the full (doc_id, category, score) matrix as CSV.",
)
def classify(model_path, corpus_paths, top, csv_path):
    """Score ad-hoc documents against a cached model."""
    if not Path(model_path).is_file():
        raise IOFailure(f"model file not found: {model_path}")
    try:
        model, dft = load_model(model_path)
    except (ValueError, KeyError) as exc:
        raise IOFailure(f"cannot load model: {exc}") from exc
    if dft is None:
        raise IOFailure(
            "model file carries no df table; re-cache it with 'catvec run --cache'"
        )
    paths = _resolve_corpus_paths(corpus_paths, {})
    collection = _load_collection(paths, None)
    scores = score_documents(collection.documents, model, dft)
    by_doc: dict[int, list] = {}
    for s in scores:
        by_doc.setdefault(s.doc_id, []).append(s)
    for doc in collection.documents:
        best = [s for s in by_doc[doc.doc_id] if s.score > 0.0][:top]
        if best:
            shown = " ".join(f"{s.category}={s.score:.6f}" for s in best)
        else:
            shown = "(no category shares terms with this document)"
        click.echo(f"doc {doc.doc_id}: {shown}")
    if csv_path:
        Path(csv_path).write_text(scores_to_csv(scores), encoding="utf-8")


if __name__ == "__main__":
    main()
