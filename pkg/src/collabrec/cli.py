"""Command line front end for the recommendation pipeline and service.

Subcommands:

    ingest      validate a raw profile table and write a canonical copy
    generate    write a synthetic profile corpus
    experiment  run vectorize / cluster / evaluate for each method, emit artifacts
    recommend   print top-k collaborator suggestions for one profile
    serve       run the matching HTTP service over a file-backed store

A JSON config file passed with ``--config`` supplies flag defaults.  Top
level scalar keys apply to every subcommand; an object keyed by a
subcommand name applies only to that subcommand.  Flags given on the
command line always win over config values.

Exit codes: 0 on success, 1 for validation problems (bad flags, bad
config, invalid corpus records, unknown targets), 2 for runtime failures
(I/O errors, pipeline errors, a port already in use).
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path
from typing import Sequence

import click
import uvicorn

from . import __version__, recommender
from .corpus import (
    DEFAULT_SKILL_POOL,
    CorpusValidationError,
    Profile,
    generate_synthetic,
    load_profiles_file,
    profile_id_for_email,
    write_profiles_csv,
    write_profiles_jsonl,
)
from .demo import DEMO_TARGET_ID, demo_embedding_provider, load_demo_profiles
from .engine import CorpusIndex, EngineConfig
from .matchsvc import FileDocumentStore, MatchService, create_app
from .pipeline import TECHNIQUES, format_report_table, run_experiment
from .vectorize import EmbeddingProvider, FileImportProvider

_COMMANDS = ("ingest", "generate", "experiment", "recommend", "serve")


def _param_lookup(command: click.Command) -> dict[str, str]:
    """Map config keys (flag or parameter spelling) to parameter names."""
    lookup: dict[str, str] = {}
    for parameter in command.params:
        if parameter.name is None:
            continue
        lookup[parameter.name] = parameter.name
        for opt in parameter.opts:
            lookup[opt.lstrip("-").replace("-", "_")] = parameter.name
    return lookup


def _configure_defaults(ctx: click.Context, param: click.Parameter, value):
    """Load a JSON config file into the click default map.

    Scalar keys at the top level apply wherever a matching flag exists;
    keys inside a subcommand section must all match that subcommand.
    """
    if not value:
        return None
    try:
        data = json.loads(Path(value).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise click.BadParameter(f"cannot read config file: {exc}", ctx=ctx, param=param)
    if not isinstance(data, dict):
        raise click.BadParameter("config must be a JSON object", ctx=ctx, param=param)
    shared = {k: v for k, v in data.items() if not isinstance(v, dict)}
    defaults: dict[str, dict] = {}
    for name in _COMMANDS:
        section = data.get(name, {})
        if not isinstance(section, dict):
            raise click.BadParameter(
                f"config section {name!r} must be an object", ctx=ctx, param=param
            )
        lookup = _param_lookup(cli.commands[name])
        merged: dict[str, object] = {}
        for key, item in shared.items():
            target = lookup.get(key.replace("-", "_"))
            if target is not None:
                merged[target] = item
        for key, item in section.items():
            target = lookup.get(key.replace("-", "_"))
            if target is None:
                raise click.BadParameter(
                    f"config key {key!r} does not match an option of {name!r}",
                    ctx=ctx,
                    param=param,
                )
            merged[target] = item
        if merged:
            defaults[name] = merged
    ctx.default_map = defaults
    return value


def _parse_methods(ctx: click.Context, param: click.Parameter, value) -> tuple[str, ...]:
    parts = value if isinstance(value, (list, tuple)) else value.split(",")
    methods = tuple(dict.fromkeys(p.strip() for p in parts if p.strip()))
    bad = [m for m in methods if m not in TECHNIQUES]
    if bad or not methods:
        raise click.BadParameter(
            f"expected a comma separated subset of {', '.join(TECHNIQUES)}",
            ctx=ctx,
            param=param,
        )
    return methods


def _parse_preference(ctx: click.Context, param: click.Parameter, value) -> float | str:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if value == "median":
        return value
    try:
        return float(value)
    except (TypeError, ValueError):
        raise click.BadParameter("expected 'median' or a number", ctx=ctx, param=param)


def _engine_options(fn):
    """Attach the flags that map onto EngineConfig."""
    options = [
        click.option(
            "--alpha",
            type=click.FloatRange(0.0, 1.0),
            default=0.5,
            show_default=True,
            help="Weight on the term-frequency channel of the hybrid score.",
        ),
        click.option(
            "--embed-dim",
            type=click.IntRange(min=1),
            default=256,
            show_default=True,
            help="Dimension of the fallback hashed-projection embeddings.",
        ),
        click.option(
            "--embed-seed",
            type=int,
            default=1337,
            show_default=True,
            help="Seed of the fallback hashed-projection embeddings.",
        ),
        click.option(
            "--damping",
            type=float,
            default=0.5,
            show_default=True,
            help="Affinity propagation damping factor, in [0.5, 1).",
        ),
        click.option(
            "--max-iter",
            type=click.IntRange(min=1),
            default=200,
            show_default=True,
            help="Affinity propagation iteration cap.",
        ),
        click.option(
            "--convergence-iter",
            type=click.IntRange(min=1),
            default=15,
            show_default=True,
            help="Stable iterations required to declare convergence.",
        ),
        click.option(
            "--preference",
            default="median",
            show_default=True,
            callback=_parse_preference,
            help="Self-similarity preference: 'median' or a number.",
        ),
        click.option(
            "--depth",
            "ndcg_depth",
            type=click.IntRange(min=1),
            default=5,
            show_default=True,
            help="Ranking depth used by the NDCG metric.",
        ),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _engine_config(
    alpha: float,
    embed_dim: int,
    embed_seed: int,
    damping: float,
    max_iter: int,
    convergence_iter: int,
    preference: float | str,
    ndcg_depth: int,
) -> EngineConfig:
    return EngineConfig(
        alpha=alpha,
        embed_dimension=embed_dim,
        embed_seed=embed_seed,
        damping=damping,
        max_iter=max_iter,
        convergence_iter=convergence_iter,
        preference=preference,
        ndcg_depth=ndcg_depth,
    )


def _load_corpus(
    corpus: str | None, embeddings: str | None
) -> tuple[list[Profile], EmbeddingProvider | None, bool]:
    """Resolve profiles and embedding source, defaulting to the bundled demo data.

    Returns (profiles, provider, using_demo).  ``provider`` is None when the
    engine should fall back to hashed projections.
    """
    if corpus is None:
        provider = (
            demo_embedding_provider()
            if embeddings is None
            else FileImportProvider.from_jsonl(embeddings)
        )
        return load_demo_profiles(), provider, True
    profiles = load_profiles_file(corpus)
    provider = FileImportProvider.from_jsonl(embeddings) if embeddings else None
    return profiles, provider, False


def _resolve_target(target: str) -> str:
    """Accept either an opaque profile id or the email it was derived from."""
    return profile_id_for_email(target) if "@" in target else target


def _write_corpus(profiles: Sequence[Profile], out: Path, fmt: str | None) -> str:
    fmt = fmt or ("jsonl" if out.suffix == ".jsonl" else "csv")
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "jsonl":
        write_profiles_jsonl(profiles, out)
    else:
        write_profiles_csv(profiles, out)
    return fmt


def _write_run_manifest(out: Path, command: str, seed: int | None, params: dict) -> None:
    """Record what produced ``out`` so the run can be repeated exactly."""
    canonical = json.dumps(
        {"command": command, "params": params, "seed": seed},
        sort_keys=True,
        separators=(",", ":"),
    )
    manifest = {
        "command": command,
        "config_hash": hashlib.sha256(canonical.encode("utf-8")).hexdigest(),
        "params": params,
        "seed": seed,
        "versions": {
            "collabrec": __version__,
            "python": ".".join(map(str, sys.version_info[:3])),
        },
    }
    path = out.with_name(out.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _render_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    header = "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()
    lines = [header, "-" * (sum(widths) + 2 * (len(widths) - 1))]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


@click.group()
@click.version_option(__version__, prog_name="collabrec")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    is_eager=True,
    expose_value=False,
    callback=_configure_defaults,
    help="JSON file with flag defaults; explicit flags win.",
)
def cli() -> None:
    """Profile recommendation pipeline and matching service."""


@cli.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Canonical output path.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(("csv", "jsonl")),
    default=None,
    help="Output format; inferred from the extension when omitted.",
)
def ingest(source: str, out: str, fmt: str | None) -> None:
    """Validate SOURCE and write a normalized copy of its profiles."""
    profiles = load_profiles_file(source)
    out_path = Path(out)
    fmt = _write_corpus(profiles, out_path, fmt)
    digest = hashlib.sha256(Path(source).read_bytes()).hexdigest()
    _write_run_manifest(
        out_path,
        "ingest",
        seed=None,
        params={"source_sha256": digest, "profile_count": len(profiles), "format": fmt},
    )
    click.echo(f"wrote {len(profiles)} profiles to {out_path}")


@cli.command()
@click.option("--count", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option(
    "--format",
    "fmt",
    type=click.Choice(("csv", "jsonl")),
    default=None,
    help="Output format; inferred from the extension when omitted.",
)
def generate(count: int, seed: int, out: str, fmt: str | None) -> None:
    """Write a synthetic corpus drawn from the built-in skill pool."""
    profiles = generate_synthetic(DEFAULT_SKILL_POOL, count, seed)
    out_path = Path(out)
    fmt = _write_corpus(profiles, out_path, fmt)
    _write_run_manifest(
        out_path,
        "generate",
        seed=seed,
        params={"count": count, "format": fmt},
    )
    click.echo(f"wrote {count} synthetic profiles to {out_path}")


@cli.command()
@click.option(
    "--corpus",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Profile CSV/JSONL; defaults to the bundled demo corpus.",
)
@click.option(
    "--embeddings",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSONL embedding table; defaults to the demo table or hashed projections.",
)
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False),
    default="experiment-out",
    show_default=True,
)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option(
    "--methods",
    default=",".join(TECHNIQUES),
    show_default=True,
    callback=_parse_methods,
    help="Comma separated subset of the vectorization methods.",
)
@click.option(
    "--target",
    "targets",
    multiple=True,
    help="Profile id or email given top-k recommendations; repeatable.",
)
@click.option("--top-k", type=click.IntRange(min=1), default=5, show_default=True)
@_engine_options
def experiment(
    corpus: str | None,
    embeddings: str | None,
    out_dir: str,
    seed: int,
    methods: tuple[str, ...],
    targets: tuple[str, ...],
    top_k: int,
    **engine_kw,
) -> None:
    """Run the full pipeline for each method and write report artifacts."""
    profiles, provider, using_demo = _load_corpus(corpus, embeddings)
    target_ids = tuple(_resolve_target(t) for t in targets)
    if not target_ids and using_demo:
        target_ids = (DEMO_TARGET_ID,)
    result = run_experiment(
        profiles,
        out_dir,
        seed=seed,
        methods=methods,
        config=_engine_config(**engine_kw),
        provider=provider,
        target_ids=target_ids,
        top_k=top_k,
    )
    click.echo(format_report_table(result.metrics, methods))
    click.echo(f"artifacts written to {result.out_dir}")


@cli.command("recommend")
@click.option(
    "--corpus",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Profile CSV/JSONL; defaults to the bundled demo corpus.",
)
@click.option(
    "--embeddings",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSONL embedding table; defaults to the demo table or hashed projections.",
)
@click.option(
    "--target",
    default=None,
    help="Profile id or email; defaults to the demo subject on the bundled corpus.",
)
@click.option(
    "--method",
    type=click.Choice(TECHNIQUES),
    default="hybrid",
    show_default=True,
)
@click.option("-k", "--top-k", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--profession", default=None, help="Keep only candidates with this profession.")
@click.option("--interest", default=None, help="Keep only candidates with this domain interest.")
@click.option(
    "--collaboration-with",
    default=None,
    help="Keep only candidates whose profession matches this collaborator kind.",
)
@_engine_options
def recommend_command(
    corpus: str | None,
    embeddings: str | None,
    target: str | None,
    method: str,
    top_k: int,
    profession: str | None,
    interest: str | None,
    collaboration_with: str | None,
    **engine_kw,
) -> None:
    """Print the top-k collaborator suggestions for one profile."""
    profiles, provider, using_demo = _load_corpus(corpus, embeddings)
    if target is None:
        if not using_demo:
            raise click.UsageError("--target is required when --corpus is given")
        target = DEMO_TARGET_ID
    index = CorpusIndex(profiles, _engine_config(**engine_kw), provider=provider)
    query = recommender.RecommendationQuery(
        target_id=_resolve_target(target),
        technique=method,
        k=top_k,
        filters=recommender.RecommendationFilters(
            profession=profession,
            interest=interest,
            collaboration_with=collaboration_with,
        ),
    )
    results = recommender.recommend(index, query)
    subject = index.by_id[query.target_id]
    click.echo(f"top {len(results)} {method} matches for {subject.name} ({subject.domain})")
    rows = []
    for item in results:
        candidate = index.by_id[item.candidate_id]
        rows.append(
            (
                candidate.name,
                f"{candidate.domain} / {candidate.skillset}",
                f"{item.similarity:.4f}",
                str(item.cluster),
            )
        )
    click.echo(_render_table(("Name", "Domain/Skillset", "Similarity score", "Cluster"), rows))


@cli.command()
@click.option(
    "--root",
    type=click.Path(file_okay=False),
    default="matchsvc-data",
    show_default=True,
    help="Directory for the document store; created if missing.",
)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=click.IntRange(min=1, max=65535), default=8000, show_default=True)
@click.option(
    "--corpus",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Seed candidate profiles from this CSV/JSONL before serving.",
)
@click.option("--demo-corpus", is_flag=True, help="Seed the bundled demo corpus before serving.")
@click.option(
    "--embeddings",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSONL embedding table used by the feed ranking.",
)
@click.option(
    "--static",
    "static_dir",
    type=click.Path(exists=True, file_okay=False),
    default=None,
    help="Serve this directory at / (a built web client).",
)
@_engine_options
def serve(
    root: str,
    host: str,
    port: int,
    corpus: str | None,
    demo_corpus: bool,
    embeddings: str | None,
    static_dir: str | None,
    **engine_kw,
) -> None:
    """Run the matching HTTP service backed by a file document store."""
    if demo_corpus and corpus:
        raise click.UsageError("--corpus and --demo-corpus are mutually exclusive")
    profiles: list[Profile] = []
    provider: EmbeddingProvider | None = None
    if demo_corpus:
        profiles, provider, _ = _load_corpus(None, embeddings)
    elif corpus:
        profiles, provider, _ = _load_corpus(corpus, embeddings)
    elif embeddings:
        provider = FileImportProvider.from_jsonl(embeddings)

    store = FileDocumentStore(root)
    service = MatchService(store, engine_config=_engine_config(**engine_kw), provider=provider)
    if profiles:
        added = service.import_profiles(profiles)
        click.echo(f"seeded {added} new profiles into {root}")
    app = create_app(service, static_dir=static_dir)
    click.echo(f"listening on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="info")


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point; maps failures onto the documented exit codes."""
    try:
        cli.main(args=argv, prog_name="collabrec", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except (
        CorpusValidationError,
        recommender.UnknownTargetError,
        recommender.NoCandidatesError,
        ValueError,
    ) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except Exception as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
