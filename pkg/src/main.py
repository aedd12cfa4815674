import os
import sys
# keep the repository root importable when run as a script
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

# Load environment variables FIRST before any other imports
from src.harness.config import load_environment
ENV = load_environment(os.path.join(os.path.dirname(os.path.dirname(__file__)), '.env'))

import argparse
import json
import logging
from dataclasses import replace
from pathlib import Path

from src.harness.config import GameConfig, Matchup, load_config
from src.harness.game_log import read_log
from src.harness.runner import replay, run_game
from src.harness.tournament import run_tournament
from src.learning.trainer import evaluate_policy, train
from src.models.errors import ConfigValidationError, CTFError

logger = logging.getLogger("ctf")


def _with_seed(config: GameConfig, seed):
    return config if seed is None else replace(config, seed=seed)


def cmd_play(args) -> int:
    config = _with_seed(load_config(args.config), args.seed)
    out = Path(args.out_dir)
    log = run_game(config, out / f"game_{config.seed}.jsonl")
    print(json.dumps(log.final["scores"]))
    return 0


def cmd_tourney(args) -> int:
    config = _with_seed(load_config(args.config), args.seed)
    matchups = list(config.matchups) or [Matchup(config.blue, config.red)]
    if args.games is not None:
        matchups = [replace(m, games=args.games) for m in matchups]
    result = run_tournament(matchups, config, args.out_dir, args.jobs)
    print(result.frame().to_string(index=False))
    for failure in result.failures:
        print(json.dumps(failure), file=sys.stderr)
    return 1 if result.failures else 0


def cmd_train(args) -> int:
    config = load_config(args.config)
    training = config.training_config(seed=args.seed, episodes=args.episodes,
                                      workers=args.jobs if args.jobs > 1 else None)
    q, curve = train(training)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    q.save(out / "qtable.jsonl", training.grid, training.seed)
    curve.to_csv(out / "learning_curve.csv", index=False)
    reports = {mode: evaluate_policy(q, training, args.eval_episodes, mode).to_dict()
               for mode in ("greedy", "random")}
    with open(out / "evaluation.json", "w") as f:
        json.dump(reports, f, indent=2)
    print(json.dumps(reports, indent=2))
    return 0


def cmd_replay(args) -> int:
    records = list(replay(read_log(args.log), verify=args.verify))
    for record in records:
        if record["type"] == "event":
            victim = f" -> {record['victim']}" if record.get("victim") is not None else ""
            print(f"t={record['time']:7.1f}  {record['kind']:<14} {record['actor']}{victim}")
    print(json.dumps(records[-1]["scores"]))
    return 0


def cmd_validate(args) -> int:
    load_config(args.config)
    print(f"{args.config}: ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctf", description="Maritime capture-the-flag simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", required=True, help="game config JSON")
        if seed:
            p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out-dir", default=ENV.out_dir, help="output directory (CTF_OUT_DIR)")

    p = sub.add_parser("play", help="play one game and write its log")
    common(p)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("tourney", help="play the configured matchups")
    common(p)
    p.add_argument("--games", type=int, help="games per matchup")
    p.add_argument("--jobs", type=int, default=ENV.jobs, help="parallel games (CTF_JOBS)")
    p.set_defaults(func=cmd_tourney)

    p = sub.add_parser("train", help="train an options policy with double Q-learning")
    common(p)
    p.add_argument("--episodes", type=int, help="override training episodes")
    p.add_argument("--eval-episodes", type=int, default=100)
    p.add_argument("--jobs", type=int, default=ENV.jobs, help="parallel training workers")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("replay", help="print a game log, optionally re-simulating it")
    p.add_argument("log")
    p.add_argument("--verify", action="store_true", help="re-simulate and compare every record")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("validate", help="check a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=getattr(logging, ENV.log_level, logging.INFO),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigValidationError as e:
        logger.error(f"{e.message}")
        print(json.dumps(e.to_dict(), indent=2), file=sys.stderr)
        return 2
    except CTFError as e:
        logger.error(f"{args.command} failed: {e.message}")
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
