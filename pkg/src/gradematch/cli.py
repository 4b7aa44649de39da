"""Command-line entry point: chunk, featurize, profile, select, fewshot,
report, and evaluate subcommands.

Every run writes a ``run.json`` manifest (version, effective config, seeds,
input digests) next to its primary output. Outputs are written atomically
and contain no timestamps, so reruns with the same inputs are byte-identical.
"""

from __future__ import annotations

import csv
import functools
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import click

from . import __version__
from ._util import atomic_write_text, sha256_file
from .chunking import DEFAULT_MAX_WORDS, DEFAULT_MIN_WORDS, ChunkParams, chunk_documents
from .corpus import load_corpus
from .embeddings import load_embeddings
from .exceptions import GradematchError
from .features import (
    FEATURE_NAMES,
    build_idf_model,
    featurize,
    read_features_tsv,
    write_features_tsv,
)
from .postag import LexiconPosTagger, PrecomputedPosTagger, load_tags_file
from .selection import (
    DEFAULT_FEWSHOT_PER_DOMAIN,
    DEFAULT_FRACTION,
    DEFAULT_RANK_NEIGHBORS,
    DEFAULT_REPRESENTATIVES,
    build_profile,
    load_profile,
    load_selection,
    sample_fewshot,
    save_profile,
    save_selection,
    select_by_label_mean,
    select_by_reference_rank,
    select_by_representatives,
)
from .stats import (
    PairedAccuracySeries,
    balanced_accuracy,
    feature_mean_diff_report,
    quadratic_weighted_kappa,
    wilcoxon_signed_rank,
)


@dataclass(frozen=True)
class RunConfig:
    """Method parameters with their canonical defaults."""

    fraction: float = DEFAULT_FRACTION
    k: int = DEFAULT_REPRESENTATIVES
    m: int = DEFAULT_RANK_NEIGHBORS
    per_domain: int = DEFAULT_FEWSHOT_PER_DOMAIN
    min_words: int = DEFAULT_MIN_WORDS
    max_words: int = DEFAULT_MAX_WORDS


RUN_DEFAULTS = asdict(RunConfig())

_in_path = click.Path(exists=True, dir_okay=False, path_type=Path)
_out_path = click.Path(dir_okay=False, path_type=Path)


def _fail(exc: BaseException) -> None:
    click.echo(json.dumps({"error": type(exc).__name__, "message": str(exc)}), err=True)
    sys.exit(1)


def guarded(fn):
    """Turn module failures into a single machine-parseable stderr line."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (GradematchError, ValueError, AssertionError, OSError) as exc:
            _fail(exc)

    return wrapper


def _write_manifest(
    subcommand: str,
    config: dict,
    inputs: dict[str, Path],
    outputs: list[str],
    anchor: Path,
) -> None:
    """Write run.json next to ``anchor`` (the primary output, or the primary
    input for commands that print to stdout)."""
    manifest = {
        "tool": "gradematch",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "defaults": RUN_DEFAULTS,
        "inputs": {name: sha256_file(path) for name, path in sorted(inputs.items())},
        "outputs": sorted(outputs),
    }
    target = anchor.parent / "run.json"
    atomic_write_text(target, json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def _read_jsonl_records(path: Path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise GradematchError(f"{path.name}:{lineno}: invalid JSON ({exc.msg})") from exc
    return records


@click.group()
@click.version_option(__version__)
@click.option(
    "--config",
    type=_in_path,
    default=None,
    help="JSON file with per-subcommand option defaults.",
)
@click.option(
    "--threads",
    type=int,
    default=1,
    envvar="GRADEMATCH_THREADS",
    help="Worker thread cap; results are identical for any value.",
)
@click.pass_context
def main(ctx: click.Context, config: Path | None, threads: int) -> None:
    """Feature profiling and subset selection for graded short-answer data."""
    if config is not None:
        try:
            ctx.default_map = json.loads(config.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"config file is not valid JSON: {exc}")
    ctx.obj = {"threads": max(1, threads)}


@main.command("chunk")
@click.option("--in", "in_path", type=_in_path, required=True, help="Input {id, text} records.")
@click.option("--out", "out_path", type=_out_path, required=True)
@click.option("--min", "min_words", type=int, default=DEFAULT_MIN_WORDS, show_default=True)
@click.option("--max", "max_words", type=int, default=DEFAULT_MAX_WORDS, show_default=True)
@click.option("--seed", type=int, required=True)
@click.pass_context
@guarded
def chunk_cmd(ctx, in_path: Path, out_path: Path, min_words: int, max_words: int, seed: int):
    """Split documents into sentence-aligned chunks of a random word length."""
    documents = []
    for record in _read_jsonl_records(in_path):
        if "id" not in record or "text" not in record:
            raise GradematchError(f"{in_path.name}: records need 'id' and 'text' fields")
        documents.append((str(record["id"]), str(record["text"])))
    params = ChunkParams(min_words=min_words, max_words=max_words, seed=seed)
    rows = chunk_documents(documents, params, threads=ctx.obj["threads"])
    lines = [
        json.dumps({"id": doc_id, "chunk_index": index, "text": text}, ensure_ascii=False)
        for doc_id, index, text in rows
    ]
    atomic_write_text(out_path, "\n".join(lines) + ("\n" if lines else ""))
    _write_manifest(
        "chunk",
        {"min_words": min_words, "max_words": max_words, "seed": seed},
        {"in": in_path},
        [out_path.name],
        out_path,
    )


@main.command("featurize")
@click.option("--corpus", "corpus_path", type=_in_path, required=True)
@click.option("--embeddings", "embeddings_path", type=_in_path, required=True)
@click.option("--tags", "tags_path", type=_in_path, default=None, help="Precomputed answer tags.")
@click.option("--out", "out_path", type=_out_path, required=True)
@click.option("--lenient", is_flag=True, help="Skip invalid corpus records instead of aborting.")
@click.pass_context
@guarded
def featurize_cmd(ctx, corpus_path, embeddings_path, tags_path, out_path, lenient):
    """Compute the 18-component feature vector for every datapoint."""
    corpus = load_corpus(corpus_path, strict=not lenient)
    for diagnostic in corpus.skipped:
        click.echo(f"skipped: {diagnostic}", err=True)
    idf = build_idf_model(corpus)
    table = load_embeddings(embeddings_path)
    tagger = LexiconPosTagger()
    if tags_path is not None:
        tagger = PrecomputedPosTagger(load_tags_file(tags_path), fallback=tagger)
    features = featurize(corpus, idf, table, tagger, threads=ctx.obj["threads"])
    write_features_tsv(features, out_path)
    inputs = {"corpus": corpus_path, "embeddings": embeddings_path}
    if tags_path is not None:
        inputs["tags"] = tags_path
    _write_manifest(
        "featurize",
        {"lenient": lenient, "skipped": len(corpus.skipped), "tagger": tagger.implementation_id},
        inputs,
        [out_path.name],
        out_path,
    )


@main.command("profile")
@click.option("--ref", "ref_path", type=_in_path, required=True, help="Reference features TSV.")
@click.option("--k", type=int, default=DEFAULT_REPRESENTATIVES, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", type=_out_path, required=True)
@click.option("--full", is_flag=True, help="Embed the full reference matrix (needed by method 3).")
@click.option("--raw", is_flag=True, help="Cluster raw features instead of z-scored ones.")
@click.option("--restarts", type=int, default=1, show_default=True)
@click.option("--dump-centers", "dump_centers", type=_out_path, default=None)
@guarded
def profile_cmd(ref_path, k, seed, out_path, full, raw, restarts, dump_centers):
    """Summarize reference features into a shareable profile."""
    ref = read_features_tsv(ref_path)
    profile = build_profile(
        ref, k=k, seed=seed, standardized=not raw, include_full=full, restarts=restarts
    )
    save_profile(profile, out_path)
    outputs = [out_path.name]
    if dump_centers is not None:
        if profile.representatives is None:
            raise GradematchError("no centers to dump (k=0)")
        lines = ["\t".join(FEATURE_NAMES)]
        lines.extend(
            "\t".join(repr(float(v)) for v in row) for row in profile.representatives
        )
        atomic_write_text(dump_centers, "\n".join(lines) + "\n")
        outputs.append(dump_centers.name)
    _write_manifest(
        "profile",
        {"k": k, "seed": seed, "full": full, "standardized": not raw, "restarts": restarts},
        {"ref": ref_path},
        outputs,
        out_path,
    )


@main.command("select")
@click.option("--method", type=click.IntRange(1, 3), required=True)
@click.option("--profile", "profile_path", type=_in_path, required=True)
@click.option("--cand", "cand_path", type=_in_path, required=True, help="Candidate features TSV.")
@click.option("--fraction", type=float, default=DEFAULT_FRACTION, show_default=True)
@click.option("--m", type=int, default=DEFAULT_RANK_NEIGHBORS, show_default=True, help="Method 3 only.")
@click.option("--raw", is_flag=True, help="Score raw features instead of z-scored ones.")
@click.option("--include-self", is_flag=True, help="Method 3: keep the scored candidate in the pool.")
@click.option("--write-subset", "subset_path", type=_out_path, default=None, help="Also write the selected rows as a features TSV.")
@click.option("--out", "out_path", type=_out_path, required=True)
@guarded
def select_cmd(method, profile_path, cand_path, fraction, m, raw, include_self, subset_path, out_path):
    """Select the candidate subset most similar to the reference profile."""
    profile = load_profile(profile_path)
    cand = read_features_tsv(cand_path)
    standardized = not raw
    if method == 1:
        result = select_by_label_mean(profile, cand, fraction=fraction, standardized=standardized)
    elif method == 2:
        result = select_by_representatives(profile, cand, fraction=fraction, standardized=standardized)
    else:
        result = select_by_reference_rank(
            profile, cand, m=m, fraction=fraction, standardized=standardized, include_self=include_self
        )
    save_selection(result, out_path)
    outputs = [out_path.name]
    if subset_path is not None:
        write_features_tsv(cand.subset_by_ids(result.selected_ids), subset_path)
        outputs.append(subset_path.name)
    _write_manifest(
        "select",
        {
            "method": method,
            "fraction": fraction,
            "m": m if method == 3 else None,
            "standardized": standardized,
            "include_self": include_self if method == 3 else None,
        },
        {"profile": profile_path, "cand": cand_path},
        outputs,
        out_path,
    )


@main.command("fewshot")
@click.option("--selection", "selection_path", type=_in_path, required=True)
@click.option("--per-domain", "per_domain", type=int, default=DEFAULT_FEWSHOT_PER_DOMAIN, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", type=_out_path, default=None, help="Default: print to stdout.")
@guarded
def fewshot_cmd(selection_path, per_domain, seed, out_path):
    """Sample few-shot exemplar ids per domain from a selection."""
    result = load_selection(selection_path)
    ids = sample_fewshot(result, per_domain=per_domain, seed=seed)
    payload = json.dumps({"ids": ids, "per_domain": per_domain, "seed": seed}, indent=1) + "\n"
    if out_path is not None:
        atomic_write_text(out_path, payload)
    else:
        click.echo(payload, nl=False)
    _write_manifest(
        "fewshot",
        {"per_domain": per_domain, "seed": seed},
        {"selection": selection_path},
        [out_path.name] if out_path is not None else [],
        out_path if out_path is not None else selection_path,
    )


@main.command("report")
@click.option("--ref", "ref_path", type=_in_path, required=True, help="Reference profile JSON.")
@click.option("--datasets", type=_in_path, multiple=True, help="Feature TSVs to compare.")
@click.argument("more_datasets", type=_in_path, nargs=-1)
@click.option("--out", "out_path", type=_out_path, required=True)
@guarded
def report_cmd(ref_path, datasets, more_datasets, out_path):
    """Tabulate absolute feature-mean differences against the reference.

    Datasets may be given as repeated --datasets flags or listed after one.
    """
    datasets = [*datasets, *more_datasets]
    if not datasets:
        raise click.UsageError("give at least one features TSV via --datasets")
    profile = load_profile(ref_path)
    others = [(path.stem, read_features_tsv(path)) for path in datasets]
    report = feature_mean_diff_report(profile, others)
    atomic_write_text(out_path, report.to_markdown())
    _write_manifest(
        "report",
        {"datasets": [path.stem for path in datasets]},
        {"ref": ref_path, **{f"dataset_{i}": path for i, path in enumerate(datasets)}},
        [out_path.name],
        out_path,
    )


@main.group("evaluate")
def evaluate_group():
    """Evaluation statistics over externally produced predictions/accuracies."""


def _read_series(path: Path) -> tuple[list[int], list[float]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [cell.strip() for cell in header] != ["step", "accuracy"]:
            raise GradematchError(f"{path.name}: expected header 'step,accuracy'")
        steps, accs = [], []
        for row in reader:
            if not row:
                continue
            steps.append(int(row[0]))
            accs.append(float(row[1]))
    return steps, accs


def _read_pairs(path: Path) -> tuple[list[str], list[int], list[int]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [cell.strip() for cell in header] != ["id", "true", "pred"]:
            raise GradematchError(f"{path.name}: expected header 'id,true,pred'")
        ids, y_true, y_pred = [], [], []
        for row in reader:
            if not row:
                continue
            ids.append(row[0])
            y_true.append(int(row[1]))
            y_pred.append(int(row[2]))
    return ids, y_true, y_pred


@evaluate_group.command("wilcoxon")
@click.option("--series-a", "series_a", type=_in_path, required=True)
@click.option("--series-b", "series_b", type=_in_path, required=True)
@click.option("--zero-method", type=click.Choice(["wilcox", "pratt"]), default="wilcox", show_default=True)
@click.option("--mode", type=click.Choice(["auto", "exact", "approx"]), default="auto", show_default=True)
@guarded
def wilcoxon_cmd(series_a, series_b, zero_method, mode):
    """Paired two-sided Wilcoxon signed-rank test over two accuracy series."""
    steps_a, acc_a = _read_series(series_a)
    steps_b, acc_b = _read_series(series_b)
    if steps_a != steps_b:
        raise GradematchError("series steps do not align")
    series = PairedAccuracySeries(steps=tuple(steps_a), acc_a=acc_a, acc_b=acc_b)
    diffs = series.diffs()
    outcome = wilcoxon_signed_rank(diffs, zero_method=zero_method, mode=mode)
    click.echo(
        json.dumps(
            {
                "statistic": outcome.statistic,
                "n_effective": outcome.n_effective,
                "p_value": outcome.p_value,
                "mode": outcome.mode,
                "mean_diff": float(diffs.mean()),
                "n_steps": len(steps_a),
            },
            sort_keys=True,
        )
    )
    _write_manifest(
        "evaluate.wilcoxon",
        {"zero_method": zero_method, "mode": mode},
        {"series_a": series_a, "series_b": series_b},
        [],
        series_a,
    )


@evaluate_group.command("qwk")
@click.option("--pairs", "pairs_path", type=_in_path, required=True)
@guarded
def qwk_cmd(pairs_path):
    """Quadratic weighted kappa over (true, pred) label pairs."""
    _, y_true, y_pred = _read_pairs(pairs_path)
    value = quadratic_weighted_kappa(y_true, y_pred)
    click.echo(json.dumps({"qwk": value, "n": len(y_true)}, sort_keys=True))
    _write_manifest("evaluate.qwk", {}, {"pairs": pairs_path}, [], pairs_path)


@evaluate_group.command("balanced-acc")
@click.option("--pairs", "pairs_path", type=_in_path, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--mode", type=click.Choice(["resample", "macro"]), default="resample", show_default=True)
@guarded
def balanced_acc_cmd(pairs_path, seed, mode):
    """Accuracy on a class-balanced resample of (true, pred) pairs."""
    _, y_true, y_pred = _read_pairs(pairs_path)
    value = balanced_accuracy(y_true, y_pred, seed=seed, mode=mode)
    click.echo(
        json.dumps({"balanced_accuracy": value, "mode": mode, "seed": seed, "n": len(y_true)}, sort_keys=True)
    )
    _write_manifest("evaluate.balanced-acc", {"seed": seed, "mode": mode}, {"pairs": pairs_path}, [], pairs_path)


if __name__ == "__main__":
    main()
