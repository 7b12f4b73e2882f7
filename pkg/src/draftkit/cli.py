"""Command-line entry point. Subcommands are thin wrappers over the package:
serve, eval, simulate, export-finetune, ablate, bounds."""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from pathlib import Path

from .agents import (
    FrequencyTable,
    LlmEndpointConfig,
    make_color_greedy_agent,
    make_frequency_agent,
    make_llm_agent,
    make_random_agent,
)
from .cards import RenderMode, load_card_set
from .datalog import ParseConfig, export_finetune_jsonl, parse_draft_csv, write_wide_csv
from .draft import simulate_pod, write_transcript
from .errors import DraftKitError
from .evaluate import compare_reports, compute_deck_space_bound, evaluate


def _mode(name: str) -> RenderMode:
    return RenderMode.FULL_TEXT if name == "text" else RenderMode.NAME_ONLY


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app, load_config

    config = load_config(args.config)
    host = args.host or config.listen_host
    port = args.port or config.listen_port
    uvicorn.run(create_app(config), host=host, port=port, log_level="info")
    return 0


def cmd_bounds(args) -> int:
    value = compute_deck_space_bound(args.pool_size, args.copies, args.deck_size)
    print(
        f"log10 C({args.pool_size} x {args.copies}, {args.deck_size}) = {value:.4f}"
        f"  (> 10^{int(value)})"
    )
    return 0


def cmd_simulate(args) -> int:
    card_set = load_card_set(args.cards, args.set_code)
    events = []
    transcript = []
    for pod in range(args.pods):
        result = simulate_pod(card_set, seed=args.seed + pod)
        events.extend(result.events)
        transcript.extend(result.transcript)
    if args.transcript:
        count = write_transcript(args.transcript, transcript)
        print(f"wrote {count} transcript rows to {args.transcript}")
    if args.csv:
        count = write_wide_csv(events, card_set, args.csv)
        print(f"wrote {count} log rows to {args.csv}")
    if not args.transcript and not args.csv:
        print(f"simulated {args.pods} pods ({len(events)} pick events); "
              "pass --transcript or --csv to keep them")
    return 0


def cmd_export_finetune(args) -> int:
    card_set = load_card_set(args.cards, args.set_code)
    events, report = parse_draft_csv(args.log, card_set, ParseConfig())
    if args.limit:
        events = itertools.islice(events, args.limit)
    count = export_finetune_jsonl(events, card_set, _mode(args.mode), args.out)
    print(f"wrote {count} prompt-completion lines to {args.out} "
          f"({report.dropped_total} rows dropped)")
    return 0


def _build_agent(args, card_set):
    if args.agent == "random":
        return make_random_agent(args.seed)
    if args.agent == "greedy":
        return make_color_greedy_agent(card_set)
    if args.agent == "frequency":
        if not args.freq_table:
            sys.exit("--freq-table is required for the frequency agent")
        return make_frequency_agent(FrequencyTable.load(args.freq_table))
    if args.agent == "llm":
        if not args.llm_base_url or not args.llm_model:
            sys.exit("--llm-base-url and --llm-model are required for the llm agent")
        config = LlmEndpointConfig(
            base_url=args.llm_base_url,
            model=args.llm_model,
            api_key=os.environ.get("DRAFTKIT_LLM_API_KEY", ""),
            max_concurrency=args.workers,
        )
        return make_llm_agent(card_set, _mode(args.mode), config)
    sys.exit(f"unknown agent {args.agent!r}")


def cmd_eval(args) -> int:
    card_set = load_card_set(args.cards, args.set_code)
    events_iter, parse_report = parse_draft_csv(args.log, card_set, ParseConfig())
    if args.limit:
        events = list(itertools.islice(events_iter, args.limit))
    else:
        events = list(events_iter)
    agent = _build_agent(args, card_set)
    report = evaluate(agent, events, card_set, _mode(args.mode), workers=args.workers)
    text, csv_text = compare_reports([report])
    print(text)
    if parse_report.dropped_total:
        print(f"(ingest dropped {parse_report.dropped_total} rows)")
    if args.csv:
        Path(args.csv).write_text(csv_text, encoding="utf-8")
        print(f"wrote CSV report to {args.csv}")
    if args.json:
        Path(args.json).write_text(
            json.dumps(report.to_dict(), indent=2), encoding="utf-8"
        )
        print(f"wrote JSON report to {args.json}")
    return 0


def cmd_ablate(args) -> int:
    from .lora import (
        TrainConfig,
        init_toy_model,
        planted_frequency_table,
        rank_ablation,
        synthetic_card_set,
        synthetic_pick_events,
        train_base_model,
    )

    source_set = synthetic_card_set("SRC", 48, seed=100)
    target_set = synthetic_card_set("TGT", 48, seed=200)
    source_events, _ = synthetic_pick_events(
        source_set, 1500, seed=101, table=planted_frequency_table(source_set, 110)
    )
    table = planted_frequency_table(target_set, 210)
    train_events, _ = synthetic_pick_events(target_set, 3000, seed=201, table=table)
    dev_events, _ = synthetic_pick_events(target_set, 500, seed=202, table=table)

    base = init_toy_model(embed_dim=16, hidden_dim=32, seed=0)
    base = train_base_model(
        base, source_events, source_set,
        steps=300, learning_rate=1.0, batch_size=32, seed=1,
    )
    config = TrainConfig(
        alpha=16.0,
        learning_rate=args.learning_rate,
        batch_size=8,
        grad_accum_steps=4,
        max_steps=args.steps,
        eval_interval=args.steps,
    )
    ranks = [int(r) for r in args.ranks.split(",")]
    seeds = list(range(args.seeds))
    result = rank_ablation(
        train_events, dev_events, ranks, seeds, config, base, target_set,
        workers=args.workers,
    )
    for rank, (mean, std) in result.summary().items():
        print(f"rank {rank:>3}: {mean:.4f} +/- {std:.4f}  ({len(seeds)} seeds)")
    if args.out:
        result.to_csv(args.out)
        print(f"wrote per-run rows to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="draftkit",
        description="Booster-draft engine, evaluation harness, and companion service",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the companion HTTP service")
    serve.add_argument("--config", required=True, help="service config JSON")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.set_defaults(func=cmd_serve)

    bounds = sub.add_parser(
        "bounds", help="log10 lower bound of constructed deck configurations"
    )
    bounds.add_argument("pool_size", type=int)
    bounds.add_argument("copies", type=int)
    bounds.add_argument("deck_size", type=int)
    bounds.set_defaults(func=cmd_bounds)

    simulate = sub.add_parser("simulate", help="run seeded 8-player pods")
    simulate.add_argument("--cards", required=True, help="card set JSON")
    simulate.add_argument("--set-code", default="NEO")
    simulate.add_argument("--pods", type=int, default=1)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--transcript", help="JSONL transcript output path")
    simulate.add_argument("--csv", help="wide-format log output path")
    simulate.set_defaults(func=cmd_simulate)

    export = sub.add_parser(
        "export-finetune", help="convert a draft log to fine-tune JSONL"
    )
    export.add_argument("--cards", required=True)
    export.add_argument("--set-code", default="NEO")
    export.add_argument("--log", required=True, help="wide-format CSV log")
    export.add_argument("--mode", choices=("name", "text"), default="name")
    export.add_argument("--out", required=True)
    export.add_argument("--limit", type=int, default=None)
    export.set_defaults(func=cmd_export_finetune)

    evaluate_cmd = sub.add_parser("eval", help="replay a log against an agent")
    evaluate_cmd.add_argument("--cards", required=True)
    evaluate_cmd.add_argument("--set-code", default="NEO")
    evaluate_cmd.add_argument("--log", required=True)
    evaluate_cmd.add_argument(
        "--agent", choices=("random", "greedy", "frequency", "llm"), required=True
    )
    evaluate_cmd.add_argument("--mode", choices=("name", "text"), default="name")
    evaluate_cmd.add_argument("--limit", type=int, default=None)
    evaluate_cmd.add_argument("--seed", type=int, default=0)
    evaluate_cmd.add_argument("--freq-table", help="frequency table JSON")
    evaluate_cmd.add_argument("--llm-base-url")
    evaluate_cmd.add_argument("--llm-model")
    evaluate_cmd.add_argument("--workers", type=int, default=4)
    evaluate_cmd.add_argument("--csv", help="CSV report output path")
    evaluate_cmd.add_argument("--json", help="JSON report output path")
    evaluate_cmd.set_defaults(func=cmd_eval)

    ablate = sub.add_parser(
        "ablate", help="rank ablation of the toy model on the synthetic task"
    )
    ablate.add_argument("--ranks", default="2,4,8,16")
    ablate.add_argument("--seeds", type=int, default=5)
    ablate.add_argument("--steps", type=int, default=2000)
    ablate.add_argument("--learning-rate", type=float, default=0.3)
    ablate.add_argument("--workers", type=int, default=1)
    ablate.add_argument("--out", help="per-run CSV output path")
    ablate.set_defaults(func=cmd_ablate)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DraftKitError as exc:
        parser.exit(2, f"error: {exc}\n")


if __name__ == "__main__":
    raise SystemExit(main())
