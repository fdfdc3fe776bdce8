"""Command line entry points: chat REPL, server, replay, ingest, analyze."""

from __future__ import annotations

import json
import os
import sys
from importlib import resources
from pathlib import Path

import click

from .analytics import render_table, report_to_dict, summarize_dir
from .content import ContentStore, load_pack
from .engine import Engine, EngineConfig
from .gateway import DEFAULT_CONFIDENCE, Gateway, GatewayError, create_app
from .ingest import (
    FilterConfig,
    build_pack,
    filter_posts,
    read_post_dump,
    write_reject_report,
)

LOGDIR_ENV = "PARLOR_LOGDIR"


def _load_store(packs: str | None) -> ContentStore:
    if packs is None:
        text = resources.files("parlor.data").joinpath("starter.pack.jsonl").read_text("utf-8")
        return load_pack(text)
    path = Path(packs)
    if path.is_dir():
        document = "\n".join(
            p.read_text("utf-8") for p in sorted(path.glob("*.jsonl"))
        )
        return load_pack(document)
    return load_pack(path)


def _make_gateway(packs: str | None, seed: int, logdir: str | None, max_sessions: int | None = None) -> Gateway:
    store = _load_store(packs)
    engine = Engine(store, EngineConfig(seed=seed))
    log_root = logdir or os.environ.get(LOGDIR_ENV)
    return Gateway(engine, log_root=log_root, max_sessions=max_sessions)


@click.group()
def main() -> None:
    """Social chat engine tools."""


@main.command()
@click.option("--packs", type=click.Path(exists=True), default=None, help="Pack file or directory (default: bundled starter pack).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--confidence", type=float, default=DEFAULT_CONFIDENCE, show_default=True, help="Simulated recognizer confidence for typed turns.")
@click.option("--logdir", type=click.Path(), default=None, help="Write conversation logs here (or set $PARLOR_LOGDIR).")
def chat(packs: str | None, seed: int, confidence: float, logdir: str | None) -> None:
    """Interactive terminal chat. Commands: /rate N, /quit."""
    gateway = _make_gateway(packs, seed, logdir)
    session, greeting = gateway.open_session()
    click.echo(_render_turn(greeting))
    while True:
        try:
            line = click.prompt("you", prompt_suffix="> ", default="", show_default=False)
        except (EOFError, KeyboardInterrupt, click.Abort):
            line = "/quit"
        line = line.strip()
        if not line:
            continue
        if line.startswith("/rate"):
            try:
                gateway.rate(session.session_id, int(line.split()[1]))
                click.echo("(rating recorded)")
            except (IndexError, ValueError):
                click.echo("usage: /rate <1-5>")
            except GatewayError as exc:
                click.echo(f"({exc.code}: {exc.detail})")
            continue
        if line in ("/quit", "/exit"):
            farewell = gateway.close(session.session_id)
            click.echo(_render_turn(farewell))
            break
        try:
            turn = gateway.handle_user_turn(session.session_id, line, confidence)
        except GatewayError as exc:
            click.echo(f"({exc.code}: {exc.detail})")
            continue
        click.echo(_render_turn(turn))


def _render_turn(turn) -> str:
    badge = f"[{turn.signature.activity.value} · {turn.signature.source_id}]"
    return f"{badge} {turn.text}"


@main.command()
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--packs", type=click.Path(exists=True), default=None)
@click.option("--logdir", type=click.Path(), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-sessions", type=int, default=64, show_default=True)
def serve(port: int, host: str, packs: str | None, logdir: str | None, seed: int, max_sessions: int) -> None:
    """Run the chat gateway (websocket at /ws, HTTP endpoints alongside)."""
    import uvicorn

    gateway = _make_gateway(packs, seed, logdir, max_sessions)
    uvicorn.run(create_app(gateway), host=host, port=port, log_level="info")


@main.command()
@click.option("--transcript", type=click.Path(exists=True), required=True, help="JSON file: {seed?, turns: [...]}.")
@click.option("--packs", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=None, help="Override the transcript's seed.")
@click.option("--full", is_flag=True, help="Print source ids next to activities.")
def replay(transcript: str, packs: str | None, seed: int | None, full: bool) -> None:
    """Replay a transcript of user turns and print each reply's signature."""
    with open(transcript, encoding="utf-8") as fh:
        data = json.load(fh)
    replay_seed = seed if seed is not None else data.get("seed", 0)
    gateway = _make_gateway(packs, replay_seed, logdir=None)
    signatures = gateway.replay(data["turns"], seed=replay_seed)
    for signature in signatures:
        if full:
            click.echo(f"{signature.activity.value}\t{signature.source_id}")
        else:
            click.echo(signature.activity.value)


@main.command()
@click.option("--in", "dump", type=click.Path(exists=True), required=True, help="JSONL dump of raw posts.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="Filter config JSON.")
@click.option("--out", "out_path", type=click.Path(), required=True, help="Pack file to write.")
@click.option("--report", "report_path", type=click.Path(), default=None, help="Rejects report (JSONL).")
@click.option("--keywords", type=click.Path(exists=True), default=None, help="Topic keyword map JSON (default: bundled).")
def ingest(dump: str, config_path: str | None, out_path: str, report_path: str | None, keywords: str | None) -> None:
    """Filter a raw post dump and build a loadable content pack."""
    from .registry import TopicRegistry

    posts = read_post_dump(dump)
    config = FilterConfig.load(config_path) if config_path else FilterConfig()
    accepted, rejected = filter_posts(posts, config)
    if keywords:
        with open(keywords, encoding="utf-8") as fh:
            keyword_map = json.load(fh)
    else:
        raw = resources.files("parlor.data").joinpath("ingest_keywords.json").read_text("utf-8")
        keyword_map = json.loads(raw)
    registry = TopicRegistry.default()
    build = build_pack(accepted, registry, keyword_map)
    Path(out_path).write_text(build.document, encoding="utf-8")
    if report_path:
        write_reject_report(rejected, report_path)
    click.echo(
        f"accepted {len(accepted)} / {len(posts)} posts; wrote {build.n_records} records "
        f"({build.unannotated} in the generic topic)"
    )


@main.command()
@click.option("--logs", type=click.Path(exists=True), required=True, help="Directory of conversation logs.")
@click.option("--out", "out_path", type=click.Path(), required=True, help="Machine-readable report (JSON).")
def analyze(logs: str, out_path: str) -> None:
    """Summarize conversation logs; prints the activity table, writes JSON."""
    report = summarize_dir(logs)
    Path(out_path).write_text(json.dumps(report_to_dict(report), indent=2), encoding="utf-8")
    click.echo(render_table(report))


if __name__ == "__main__":
    sys.exit(main())
