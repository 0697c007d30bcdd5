"""Pipeline subcommands: ingest, characterize, report, review."""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import gateway as gw
from . import parsing, prompting, reporting, review
from .constraints import EnvironmentalObjective
from .ingest import CorpusError, enumerate_units, load_corpus

EXIT_USAGE = 2
EXIT_REPLAY_MISS = 3


def _corpus_hash(corpus_path: Path) -> str:
    """Digest over the corpus input files, for run metadata."""
    h = hashlib.sha256()
    if corpus_path.is_dir():
        for f in sorted(corpus_path.glob("*.csv")):
            h.update(f.name.encode())
            h.update(f.read_bytes())
    else:
        h.update(corpus_path.read_bytes())
    return h.hexdigest()


def _load(corpus_path: Path):
    fmt = "csv-set" if corpus_path.is_dir() else "corpus-json"
    return load_corpus(corpus_path, fmt)


def _write_run_metadata(out_dir: Path, config: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    config = dict(config)
    config["written_at"] = datetime.now(timezone.utc).isoformat()
    (out_dir / "run_metadata.json").write_text(
        json.dumps(config, ensure_ascii=False, indent=1) + "\n", encoding="utf-8"
    )


def _parse_objectives(raw: str | None) -> list[EnvironmentalObjective]:
    if not raw:
        return list(EnvironmentalObjective)
    by_value = {o.value: o for o in EnvironmentalObjective}
    out = []
    for name in raw.split(","):
        name = name.strip()
        if name not in by_value:
            raise click.ClickException(f"unknown objective: {name}")
        out.append(by_value[name])
    return out


@click.group()
def main() -> None:
    """Characterize regulatory screening criteria as process constraints."""


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(path_type=Path))
def ingest(corpus_path: Path) -> None:
    """Load and validate a corpus, then print a summary."""
    try:
        corpus = _load(corpus_path)
    except CorpusError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    units = enumerate_units(corpus)
    n_practices = sum(len(ps) for ps in corpus.objectives.values())
    n_objectives = sum(1 for ps in corpus.objectives.values() if ps)
    click.echo(f"{n_objectives} objectives, {n_practices} practices, {len(units)} units")
    for obj in EnvironmentalObjective:
        count = sum(1 for u in units if u.objective is obj)
        click.echo(f"  {obj.value}: {count} units")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(path_type=Path))
@click.option("--template", "template_path", type=click.Path(path_type=Path))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--mode", type=click.Choice(["live", "record", "replay"]), default="replay")
@click.option("--model", default="llama-3-8b-instruct")
@click.option("--endpoint", default=gw.DEFAULT_ENDPOINT)
@click.option("--temperature", type=float, default=0.0)
@click.option("--seed", type=int, default=42)
@click.option("--max-tokens", type=int, default=1024)
@click.option("--cache-dir", type=click.Path(path_type=Path))
@click.option("--parallelism", type=int, default=4)
@click.option("--rpm", type=int, default=0, help="live requests per minute (0 = unlimited)")
def characterize(
    corpus_path: Path,
    template_path: Path | None,
    out_dir: Path,
    mode: str,
    model: str,
    endpoint: str,
    temperature: float,
    seed: int,
    max_tokens: int,
    cache_dir: Path | None,
    parallelism: int,
    rpm: int,
) -> None:
    """Run prompt -> LLM -> parse over every unit; write the dataset JSONL."""
    gateway_mode = gw.GatewayMode(mode)
    if gateway_mode is not gw.GatewayMode.REPLAY and not os.environ.get(gw.API_KEY_ENV):
        click.echo(f"error: {gw.API_KEY_ENV} not set (required for {mode} mode)", err=True)
        sys.exit(EXIT_USAGE)

    try:
        corpus = _load(corpus_path)
    except CorpusError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    template = (
        prompting.load_template(template_path)
        if template_path
        else prompting.default_template()
    )
    violations = prompting.validate_template(template)
    if violations:
        click.echo("error: invalid template: " + "; ".join(violations), err=True)
        sys.exit(EXIT_USAGE)

    settings = gw.ModelSettings(
        model_name=model,
        temperature=temperature,
        seed=seed,
        max_tokens=max_tokens,
        endpoint_url=endpoint,
    )
    cache = gw.ResponseCache(cache_dir or out_dir / "cache")
    limiter = gw.RateLimiter(rpm)
    gateway = gw.Gateway(settings, cache, gateway_mode, rate_limiter=limiter)

    units = enumerate_units(corpus)
    prompts = [prompting.render_prompt(template, u) for u in units]

    misses: list[str] = []
    results: dict[str, parsing.ParsedCharacterization] = {}

    def run_one(prompt):
        return parsing.parse_response(gateway.complete(prompt))

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(parallelism, 1)) as pool:
        futures = {pool.submit(run_one, p): p for p in prompts}
        for fut in concurrent.futures.as_completed(futures):
            prompt = futures[fut]
            try:
                parsed = fut.result()
            except gw.ReplayCacheMiss as exc:
                misses.append(exc.unit_id)
                continue
            results[prompt.unit_id] = parsed
            click.echo(f"{prompt.unit_id}: {parsed.parse_status}")

    if misses:
        click.echo("replay cache misses:", err=True)
        for unit_id in sorted(misses):
            click.echo(f"  {unit_id}", err=True)
        sys.exit(EXIT_REPLAY_MISS)

    chars = [results[p.unit_id] for p in prompts]
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset_path = out_dir / "characterizations.jsonl"
    parsing.write_dataset(dataset_path, chars)

    failed = [c.unit_id for c in chars if c.parse_status == parsing.STATUS_FAILED]
    (out_dir / "failed_units.json").write_text(json.dumps(failed, indent=1) + "\n")
    _write_run_metadata(
        out_dir,
        {
            "command": "characterize",
            "corpus_hash": _corpus_hash(corpus_path),
            "template_id": template.id,
            "template_version": template.version,
            "settings": {
                "model_name": settings.model_name,
                "temperature": settings.temperature,
                "seed": settings.seed,
                "max_tokens": settings.max_tokens,
                "endpoint_url": settings.endpoint_url,
            },
            "mode": mode,
            "failed_units": failed,
        },
    )
    click.echo(f"wrote {dataset_path} ({len(chars)} units, {len(failed)} failed parses)")
    if not any(c.parse_status != parsing.STATUS_FAILED for c in chars) and chars:
        sys.exit(1)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(path_type=Path))
@click.option("--dataset", "dataset_path", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--formats", default="csv,json,markdown")
def report(corpus_path: Path, dataset_path: Path, out_dir: Path, formats: str) -> None:
    """Aggregate a characterization dataset into summary tables."""
    if not dataset_path.exists():
        click.echo(f"error: dataset not found: {dataset_path}", err=True)
        sys.exit(EXIT_USAGE)
    try:
        corpus = _load(corpus_path)
    except CorpusError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    chars = parsing.read_dataset(dataset_path)
    datasets = reporting.collate(chars, corpus)
    meta = {
        "command": "report",
        "corpus_hash": _corpus_hash(corpus_path),
        "dataset": str(dataset_path),
    }
    tables = {
        "type_distribution": reporting.type_distribution(datasets, meta),
        "sector_summary": reporting.sector_summary(datasets, meta),
        "objective_summary": reporting.objective_summary(datasets, meta),
    }
    fmt_set = {f.strip() for f in formats.split(",") if f.strip()}
    run_meta = {**meta, "written_at": datetime.now(timezone.utc).isoformat()}
    reporting.emit_report(tables, datasets, out_dir, fmt_set, run_metadata=run_meta)

    dist = tables["type_distribution"].rows["all"]
    total = sum(dist.values())
    relevant = total - dist["irrelevant"]
    click.echo(f"total constraints: {total}, process-relevant: {relevant}")
    click.echo(f"reports written to {out_dir}")


@main.command("review")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(path_type=Path))
@click.option("--dataset", "dataset_path", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--objectives", default=None, help="comma-separated objective filter")
@click.option("--port", type=int, default=8731)
@click.option("--host", default="127.0.0.1")
@click.option("--ui-dir", type=click.Path(path_type=Path), default=None)
def review_cmd(
    corpus_path: Path,
    dataset_path: Path,
    out_dir: Path,
    objectives: str | None,
    port: int,
    host: str,
    ui_dir: Path | None,
) -> None:
    """Serve the plausibility-review API (and UI, if built) until interrupted."""
    import uvicorn

    if not dataset_path.exists():
        click.echo(f"error: dataset not found: {dataset_path}", err=True)
        sys.exit(EXIT_USAGE)
    try:
        corpus = _load(corpus_path)
    except CorpusError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    selected = _parse_objectives(objectives)
    chars = parsing.read_dataset(dataset_path)
    queue = review.build_review_queue(chars, corpus, selected)
    out_dir.mkdir(parents=True, exist_ok=True)
    store = review.AssessmentStore(out_dir / "assessments.jsonl")

    if ui_dir is None:
        bundled = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
        if bundled.is_dir():
            ui_dir = bundled
    app = review.create_app(chars, corpus, store, ui_dir=ui_dir)

    _write_run_metadata(
        out_dir,
        {
            "command": "review",
            "corpus_hash": _corpus_hash(corpus_path),
            "dataset": str(dataset_path),
            "objectives": [o.value for o in selected],
            "queue_length": len(queue),
        },
    )
    click.echo(f"review queue: {len(queue)} items")
    click.echo(f"serving on http://{host}:{port}")
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except SystemExit:
        raise
    except OSError as exc:
        click.echo(f"error: cannot bind {host}:{port}: {exc}", err=True)
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()
