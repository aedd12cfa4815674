"""
Seeded tournaments: every matchup is a series of games with alternating sides,
aggregated into per-policy metrics rows.
"""
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.harness.config import GameConfig, Matchup
from src.harness.runner import run_game
from src.models.errors import CTFError
from src.utils.rng import derive_seed

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ["policy", "opponent", "games", "mean_grabs", "mean_captures", "mean_tags", "mean_score"]


@dataclass
class MetricsRow:
    """Integer totals over a matchup; the means are derived so the score
    identity mean_score = mean_grabs + 2 * mean_captures holds exactly
    """
    policy: str
    opponent: str
    games: int = 0
    grabs: int = 0
    captures: int = 0
    tags: int = 0

    @property
    def score(self) -> int:
        return self.grabs + 2 * self.captures

    @property
    def mean_grabs(self) -> float:
        return self.grabs / self.games if self.games else 0.0

    @property
    def mean_captures(self) -> float:
        return self.captures / self.games if self.games else 0.0

    @property
    def mean_tags(self) -> float:
        return self.tags / self.games if self.games else 0.0

    @property
    def mean_score(self) -> float:
        return self.score / self.games if self.games else 0.0

    def add(self, totals: Dict[str, int]) -> None:
        self.games += 1
        self.grabs += totals["grabs"]
        self.captures += totals["captures"]
        self.tags += totals["tags"]

    def to_record(self) -> Dict[str, Any]:
        return {
            "policy": self.policy,
            "opponent": self.opponent,
            "games": self.games,
            "mean_grabs": self.mean_grabs,
            "mean_captures": self.mean_captures,
            "mean_tags": self.mean_tags,
            "mean_score": self.mean_score,
        }


@dataclass(frozen=True)
class GameResult:
    matchup: str
    index: int
    seed: int
    a_side: str
    a_totals: Dict[str, int]
    b_totals: Dict[str, int]


@dataclass
class TournamentResult:
    rows: List[MetricsRow] = field(default_factory=list)
    games: List[GameResult] = field(default_factory=list)
    failures: List[Dict[str, Any]] = field(default_factory=list)

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_record() for r in self.rows], columns=METRICS_COLUMNS)

    def scores(self, matchup: str, side: str = "a") -> List[int]:
        """Per-game scores of one side of a matchup, in game order"""
        picked = [g for g in self.games if g.matchup == matchup]
        return [(g.a_totals if side == "a" else g.b_totals)["score"] for g in sorted(picked, key=lambda g: g.index)]


def game_seed(base_seed: int, matchup: Matchup, index: int) -> int:
    seed = matchup.seed if matchup.seed is not None else base_seed
    return derive_seed(seed, matchup.key, index)


def _play(payload: Tuple[GameConfig, Matchup, int, Optional[str]]) -> Union[GameResult, Dict[str, Any]]:
    base, matchup, index, out_dir = payload
    seed = game_seed(base.seed, matchup, index)
    a_is_blue = index % 2 == 0
    blue, red = (matchup.policy_a, matchup.policy_b) if a_is_blue else (matchup.policy_b, matchup.policy_a)
    log_path = None
    if out_dir is not None:
        log_path = Path(out_dir) / matchup.key / f"game_{index:03d}.jsonl.gz"
    try:
        log = run_game(base.with_game(blue, red, seed), log_path)
    except CTFError as e:
        logger.error(f"{matchup.key} game {index} failed: {e.message}")
        return {"matchup": matchup.key, "game": index, "seed": seed, **e.to_dict()}
    except Exception as e:
        logger.exception(f"{matchup.key} game {index} (seed {seed}) crashed")
        return {"matchup": matchup.key, "game": index, "seed": seed,
                "error": "GAME_CRASHED", "message": f"{type(e).__name__}: {e}"}
    totals = log.final["totals"]
    a_side, b_side = ("blue", "red") if a_is_blue else ("red", "blue")
    return GameResult(matchup.key, index, seed, a_side, totals[a_side], totals[b_side])


def run_tournament(matchups: Sequence[Matchup],
                   base: GameConfig,
                   out_dir: Optional[Union[str, Path]] = None,
                   jobs: int = 1) -> TournamentResult:
    """Play every matchup and aggregate.

    Game seeds depend only on (base seed, matchup key, game index), and
    aggregation runs over results sorted by game, so the outcome does not
    depend on `jobs` or on matchup order. A matchup with any failed game is
    reported in `failures` and gets no metrics rows.
    """
    payloads = [(base, m, i, str(out_dir) if out_dir is not None else None)
                for m in matchups for i in range(m.games)]
    logger.info(f"tournament: {len(matchups)} matchup(s), {len(payloads)} game(s), {jobs} job(s)")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_play, payloads))
    else:
        outcomes = [_play(p) for p in payloads]

    result = TournamentResult()
    for matchup in matchups:
        mine = [o for (_, m, _, _), o in zip(payloads, outcomes) if m is matchup]
        failed = [o for o in mine if isinstance(o, dict)]
        if failed:
            result.failures.extend(failed)
            continue
        games = sorted(mine, key=lambda g: g.index)
        row_a = MetricsRow(matchup.policy_a["name"], matchup.policy_b["name"])
        row_b = MetricsRow(matchup.policy_b["name"], matchup.policy_a["name"])
        for game in games:
            row_a.add(game.a_totals)
            row_b.add(game.b_totals)
        result.games.extend(games)
        result.rows.extend([row_a, row_b])
        logger.info(f"{matchup.key}: {row_a.policy} {row_a.mean_score:.2f} vs "
                    f"{row_b.policy} {row_b.mean_score:.2f} mean score over {row_a.games} game(s)")

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        result.frame().to_csv(out / "metrics.csv", index=False)
        with open(out / "games.json", "w") as f:
            json.dump([asdict(g) for g in result.games], f, indent=2)
        if result.failures:
            with open(out / "failures.json", "w") as f:
                json.dump(result.failures, f, indent=2)
    return result


def bootstrap_mean_difference(a: Sequence[float],
                              b: Sequence[float],
                              resamples: int = 2000,
                              confidence: float = 0.95,
                              seed: int = 0) -> Tuple[float, float, float]:
    """Mean of a - b and its percentile bootstrap interval (paired by game)"""
    diffs = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if diffs.size == 0:
        return 0.0, 0.0, 0.0
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, diffs.size, size=(resamples, diffs.size))
    means = diffs[picks].mean(axis=1)
    tail = (1.0 - confidence) / 2.0 * 100.0
    low, high = np.percentile(means, [tail, 100.0 - tail])
    return float(diffs.mean()), float(low), float(high)
