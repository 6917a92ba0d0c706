"""Command-line entry points.

    camadapt train --config cfg.json --out qtable.json
    camadapt compare --config cfg.json [--qtable qtable.json] --out run.csv
    camadapt compare-rewards --config cfg.json --out table.csv
    camadapt measure --image frame.png
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .harness import (
    load_experiment_config,
    run_compare,
    run_reward_comparison,
    run_train,
    write_compare_csv,
    write_reward_comparison_csv,
)
from .imaging import load_frame, measure_all
from .reward import CompositeEstimator
from .rl import load_qtable, save_qtable


def _cmd_train(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    qtable, agent_cfg = run_train(replace(cfg, output=None))
    save_qtable(qtable, agent_cfg, args.out)
    print(f"trained {cfg.train_steps} steps, {len(qtable)} table entries -> {args.out}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    qtable = None
    if args.qtable:
        qtable, _ = load_qtable(args.qtable)
    result = run_compare(cfg, qtable=qtable)
    write_compare_csv(result, args.out)
    s = result.summary
    print(
        f"frames={s.frames} fixed={s.sum_fixed} tuned={s.sum_tuned} "
        f"improvement={s.improvement_pct:.1f}% steady_state={s.steady_state_avg:.2f} "
        f"-> {args.out}"
    )
    return 0


def _cmd_compare_rewards(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    rows = run_reward_comparison(cfg, cfg.estimators)
    write_reward_comparison_csv(rows, args.out)
    for row in rows:
        print(
            f"{row.estimator}: improvement {row.mean_improvement_pct:.1f}%, "
            f"steady state {row.mean_steady_state:.2f}"
        )
    print(f"-> {args.out}")
    return 0


def _cmd_measure(args: argparse.Namespace) -> int:
    frame = load_frame(args.image)
    m = measure_all(frame)
    doc = {
        "brightness": m.brightness,
        "contrast": m.contrast,
        "colorfulness": m.colorfulness,
        "sharpness": m.sharpness,
        "score": CompositeEstimator().score_metrics(m),
    }
    print(json.dumps(doc, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camadapt",
        description="Adaptive camera parameter tuning experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="populate a Q-table on the simulated scene")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", required=True, help="output Q-table JSON path")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("compare", help="run a fixed-vs-tuned comparison")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--qtable", help="start the agent from this trained table")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("compare-rewards", help="compare candidate reward functions")
    p.add_argument("--config", required=True, help="config JSON with an 'estimators' list")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_compare_rewards)

    p = sub.add_parser("measure", help="print the measurements of one image")
    p.add_argument("--image", required=True, help="PNG or PPM file")
    p.set_defaults(func=_cmd_measure)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
