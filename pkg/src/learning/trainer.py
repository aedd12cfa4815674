"""
Options-policy controller, training loop and evaluation.
"""
import hashlib
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.agents.base import (HelmDecision, PolicyContext, TeamAgent, create_policy, helm_step,
                             joint_action, policy_violations, register_policy)
from src.agents.roles import Calibration
from src.engine.rules import initial_state, step_game
from src.helm.domain import DecisionDomain
from src.helm.facts import HelmContext
from src.helm.mode_tree import ModeTree
from src.learning.observation import ObservationFeatures, ObservationGrid, discretize_observation
from src.learning.options import OptionId, option_trees, shield_point
from src.learning.qtables import QTables, Transition, double_q_update, select_option
from src.learning.rewards import RewardTable, team_reward
from src.models.errors import TrainingError
from src.models.game import EventKind, GameEvent, GameState, Team
from src.models.settings import SimulationSettings
from src.utils.rng import derive_seed, make_rng

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ["episode", "epsilon", "return", "grabs", "captures", "tags", "own_zone_fraction"]


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class _OptionRun:
    option: Optional[OptionId] = None
    start_obs: Optional[ObservationFeatures] = None
    reward: float = 0.0
    steps: int = 0


@register_policy("Options")
class OptionsAgent(TeamAgent):
    """Chooses one of the six options per agent from Q-tables and runs it through the helm.

    Policy spec: {"name": "Options", "qtable": path, "mode": "greedy" | "random"}.
    An option is held for `option_commit` steps unless a game event interrupts it.
    In "learn" mode every finished option becomes a double-Q transition.
    """

    def __init__(self, team: Team, context: PolicyContext, spec: Optional[Mapping[str, Any]] = None):
        super().__init__(team, context, spec)
        self.mode = self.spec.get("mode", "greedy")
        self.epsilon = float(self.spec.get("epsilon", 1.0 if self.mode == "random" else 0.0))
        self.rewards = context.rewards or RewardTable()
        self.rng = make_rng(context.seed, "options", team.value)
        self.q = QTables()
        self.grid = ObservationGrid()
        self.qtable_sha256 = None
        if self.spec.get("qtable"):
            path = Path(self.spec["qtable"])
            self.q, self.grid, _ = QTables.load(path)
            self.qtable_sha256 = file_sha256(path)
        self._trees: Dict[OptionId, ModeTree] = {}
        self._runs: Dict[int, _OptionRun] = {}
        self._switched = False
        self.episode_return = 0.0

    @classmethod
    def attach(cls, team: Team, context: PolicyContext, q: QTables, grid: ObservationGrid,
               mode: str, epsilon: float, rng: np.random.Generator) -> "OptionsAgent":
        """An in-process controller sharing (and in learn mode, updating) `q`"""
        agent = cls(team, context, {"name": "Options", "mode": mode, "epsilon": epsilon})
        agent.q, agent.grid, agent.rng = q, grid, rng
        return agent

    @classmethod
    def spec_violations(cls, spec: Mapping[str, Any]) -> List[str]:
        found = []
        mode = spec.get("mode", "greedy")
        if mode not in ("greedy", "random"):
            found.append(f"Options mode must be 'greedy' or 'random', got {mode!r}")
        path = spec.get("qtable")
        if mode == "greedy" and not path:
            found.append("Options policy in greedy mode needs a 'qtable' path")
        elif path and not Path(path).is_file():
            found.append(f"Q-table file {path} does not exist")
        return found

    @property
    def learning(self) -> bool:
        return self.mode == "learn"

    def reset(self, world: GameState) -> None:
        super().reset(world)
        self._trees = option_trees(world.field, self.team)
        self._runs = {a.agent_id: _OptionRun() for a in self.own_agents(world)}
        self.episode_return = 0.0

    def _credit(self, reward: float) -> None:
        for run in self._runs.values():
            if run.option is not None:
                run.reward += self.q.gamma ** run.steps * reward
                run.steps += 1

    def observe(self, world: GameState, last_events: Sequence[GameEvent]) -> None:
        if not self._trees:
            self.reset(world)
        reward = team_reward(last_events, self.team, self.rewards)
        self.episode_return += reward
        self._credit(reward)
        self._switched = False
        for agent_id, run in self._runs.items():
            if run.option is not None and run.steps < self.q.option_commit and not last_events:
                continue
            obs = discretize_observation(world, agent_id, self.grid)
            if self.learning and run.option is not None:
                double_q_update(self.q, Transition(run.start_obs, run.option, run.reward, obs, False, run.steps),
                                self.rng)
            option = select_option(self.q, obs, self.epsilon, self.rng)
            self._runs[agent_id] = _OptionRun(option, obs)
            self._switched = True

    def finish(self, world: GameState, last_events: Sequence[GameEvent]) -> None:
        """Credit the last step and close every running option as terminal"""
        reward = team_reward(last_events, self.team, self.rewards)
        self.episode_return += reward
        self._credit(reward)
        if self.learning:
            for run in self._runs.values():
                if run.option is not None:
                    double_q_update(self.q, Transition(run.start_obs, run.option, run.reward, None, True,
                                                       max(1, run.steps)), self.rng)
        self._runs = {k: _OptionRun() for k in self._runs}

    def helm_due(self, world: GameState, last_events: Sequence[GameEvent]) -> bool:
        return self._switched or super().helm_due(world, last_events)

    def current_options(self) -> Dict[int, Optional[OptionId]]:
        return {k: run.option for k, run in self._runs.items()}

    def decide(self, world: GameState) -> Dict[int, HelmDecision]:
        decisions = {}
        for own in self.own_agents(world):
            option = self._runs[own.agent_id].option or OptionId.RETREAT
            ctx = HelmContext(anchors={"shield_point": shield_point(own, world)})
            decision = helm_step(self._trees[option], own, world, self.domain, ctx)
            decisions[own.agent_id] = HelmDecision(decision.action, f"{option.value}:{decision.label}")
        return decisions

    def provenance(self) -> Dict[str, Any]:
        if not self.spec.get("qtable"):
            return {}
        return {"qtable": str(self.spec["qtable"]), "qtable_sha256": self.qtable_sha256}


@dataclass(frozen=True)
class TrainingConfig:
    episodes: int = 2000
    horizon: float = 120.0
    seed: int = 0
    team: Team = Team.BLUE
    opponent: Mapping[str, Any] = field(default_factory=lambda: {"name": "Pav01"})
    rewards: RewardTable = field(default_factory=RewardTable)
    learning_rate: float = 0.1
    gamma: float = 0.99
    option_commit: int = 10
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay: float = 0.995
    eval_every: int = 0
    eval_episodes: int = 20
    workers: int = 1
    sync_every: int = 50
    log_every: int = 100
    grid: ObservationGrid = field(default_factory=ObservationGrid)
    settings: SimulationSettings = field(default_factory=SimulationSettings)
    domain: DecisionDomain = field(default_factory=DecisionDomain)
    period_steps: int = 5
    calibration: Calibration = field(default_factory=Calibration)

    @property
    def episode_settings(self) -> SimulationSettings:
        return replace(self.settings, horizon=self.horizon)

    def policy_context(self, seed: int) -> PolicyContext:
        return PolicyContext(settings=self.episode_settings, domain=self.domain, period_steps=self.period_steps,
                             calibration=self.calibration, rewards=self.rewards, seed=seed)

    def initial_tables(self) -> QTables:
        return QTables(learning_rate=self.learning_rate, gamma=self.gamma, option_commit=self.option_commit,
                       epsilon_start=self.epsilon_start, epsilon_end=self.epsilon_end,
                       epsilon_decay=self.epsilon_decay)

    def validate(self) -> List[str]:
        violations = []
        if self.episodes < 0:
            violations.append("training: episodes must be non-negative")
        if self.horizon <= 0:
            violations.append("training: horizon must be positive")
        if self.workers < 1 or self.sync_every < 1:
            violations.append("training: workers and sync_every must be at least 1")
        if self.eval_every < 0 or self.eval_episodes < 1:
            violations.append("training: eval_every must be >= 0 and eval_episodes >= 1")
        violations += self.initial_tables().validate() + self.grid.validate() + self.rewards.validate()
        violations += policy_violations(self.opponent, "training.opponent")
        return violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "episodes": self.episodes, "horizon": self.horizon, "seed": self.seed, "team": self.team.value,
            "opponent": dict(self.opponent), "learning_rate": self.learning_rate, "gamma": self.gamma,
            "option_commit": self.option_commit, "epsilon_start": self.epsilon_start,
            "epsilon_end": self.epsilon_end, "epsilon_decay": self.epsilon_decay,
            "eval_every": self.eval_every, "eval_episodes": self.eval_episodes, "workers": self.workers,
            "sync_every": self.sync_every, "log_every": self.log_every, "grid": self.grid.to_dict(),
        }


@dataclass(frozen=True)
class EpisodeStats:
    episode_return: float
    grabs: int
    captures: int
    tags: int
    own_zone_fraction: float


def run_episode(learner: OptionsAgent, opponent: TeamAgent, settings: SimulationSettings, seed: int) -> EpisodeStats:
    world = initial_state(settings.field, settings.team_size)
    learner.reset(world)
    opponent.reset(world)
    noise = make_rng(seed, "noise")
    events: List[GameEvent] = []
    own_samples = own_inside = 0
    for _ in range(settings.horizon_steps):
        actions, _ = joint_action(world, [learner.act(world, events), opponent.act(world, events)])
        world, events = step_game(world, actions, settings, noise)
        for agent in world.team_agents(learner.team):
            own_samples += 1
            own_inside += world.field.in_zone(agent.position, learner.team)
    learner.finish(world, events)
    mine = [e for e in world.event_history if e.team is learner.team]
    return EpisodeStats(
        episode_return=learner.episode_return,
        grabs=sum(e.kind is EventKind.GRAB for e in mine),
        captures=sum(e.kind is EventKind.CAPTURE for e in mine),
        tags=sum(e.kind.has_victim for e in mine),
        own_zone_fraction=own_inside / own_samples if own_samples else 0.0,
    )


def _learn_episode(q: QTables, config: TrainingConfig, episode: int) -> Dict[str, Any]:
    seed = derive_seed(config.seed, "episode", episode)
    context = config.policy_context(seed)
    epsilon = q.epsilon(episode)
    learner = OptionsAgent.attach(config.team, context, q, config.grid, "learn", epsilon,
                                  make_rng(seed, "learner"))
    opponent = create_policy(config.opponent, config.team.opponent, context)
    stats = run_episode(learner, opponent, config.episode_settings, seed)
    return {"episode": episode, "epsilon": epsilon, "return": stats.episode_return, "grabs": stats.grabs,
            "captures": stats.captures, "tags": stats.tags, "own_zone_fraction": stats.own_zone_fraction}


def _train_chunk(payload: Tuple[QTables, TrainingConfig, List[int]]) -> Tuple[QTables, List[Dict[str, Any]]]:
    q, config, episodes = payload
    return q, [_learn_episode(q, config, e) for e in episodes]


def _log_progress(config: TrainingConfig, rows: List[Dict[str, Any]]) -> None:
    last = rows[-1]["episode"]
    if config.log_every and (last + 1) % config.log_every == 0:
        window = [r["return"] for r in rows[-config.log_every:]]
        logger.info(f"episode {last + 1}/{config.episodes}: mean return {np.mean(window):.1f} "
                    f"over the last {len(window)}, epsilon {rows[-1]['epsilon']:.3f}")


def train(config: TrainingConfig, q: Optional[QTables] = None) -> Tuple[QTables, pd.DataFrame]:
    """Double Q-learning over options against the configured opponent.

    Returns the learned tables and the per-episode learning curve. With one
    worker every episode updates the tables in order, so a run is a prefix of
    any longer run with the same seed.
    """
    violations = config.validate()
    if violations:
        raise TrainingError("; ".join(violations))
    q = q.copy() if q is not None else config.initial_tables()
    rows: List[Dict[str, Any]] = []
    logger.info(f"training {config.episodes} episode(s) vs {config.opponent.get('name')} "
                f"with seed {config.seed}, {config.workers} worker(s), "
                f"{config.grid.state_count():.3g} possible observations")
    if config.workers <= 1:
        for episode in range(config.episodes):
            rows.append(_learn_episode(q, config, episode))
            _log_progress(config, rows)
            if config.eval_every and (episode + 1) % config.eval_every == 0:
                rows[-1]["eval_return"] = evaluate_policy(q, config, config.eval_episodes).mean_return
    else:
        span = config.workers * config.sync_every
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for start in range(0, config.episodes, span):
                stop = min(start + span, config.episodes)
                chunks = [list(range(s, min(s + config.sync_every, stop)))
                          for s in range(start, stop, config.sync_every)]
                results = list(pool.map(_train_chunk, [(q.copy(), config, c) for c in chunks]))
                q = QTables.merge([tables for tables, _ in results])
                for _, chunk_rows in results:
                    rows.extend(chunk_rows)
                _log_progress(config, rows)
                if config.eval_every:
                    rows[-1]["eval_return"] = evaluate_policy(q, config, config.eval_episodes).mean_return
    curve = pd.DataFrame(rows, columns=CURVE_COLUMNS + (["eval_return"] if config.eval_every else []))
    return q, curve


@dataclass(frozen=True)
class EvaluationReport:
    mode: str
    returns: Tuple[float, ...]
    own_zone_fraction: float

    @property
    def mean_return(self) -> float:
        return float(np.mean(self.returns)) if self.returns else 0.0

    @property
    def stderr(self) -> float:
        if len(self.returns) < 2:
            return 0.0
        return float(np.std(self.returns, ddof=1) / math.sqrt(len(self.returns)))

    def to_dict(self) -> Dict[str, Any]:
        return {"mode": self.mode, "episodes": len(self.returns), "mean_return": self.mean_return,
                "stderr": self.stderr, "own_zone_fraction": self.own_zone_fraction}


def evaluate_policy(q: QTables, config: TrainingConfig, episodes: int = 100, mode: str = "greedy",
                    seed: Optional[int] = None) -> EvaluationReport:
    """Play evaluation episodes without learning: greedy options or uniform-random options"""
    if mode not in ("greedy", "random"):
        raise TrainingError(f"evaluation mode must be 'greedy' or 'random', got {mode!r}")
    base = config.seed if seed is None else seed
    epsilon = 0.0 if mode == "greedy" else 1.0
    returns, fractions = [], []
    for i in range(episodes):
        episode_seed = derive_seed(base, "eval", i)
        context = config.policy_context(episode_seed)
        learner = OptionsAgent.attach(config.team, context, q, config.grid, mode, epsilon,
                                      make_rng(episode_seed, "evaluator"))
        opponent = create_policy(config.opponent, config.team.opponent, context)
        stats = run_episode(learner, opponent, config.episode_settings, episode_seed)
        returns.append(stats.episode_return)
        fractions.append(stats.own_zone_fraction)
    report = EvaluationReport(mode, tuple(returns), float(np.mean(fractions)) if fractions else 0.0)
    logger.info(f"{mode} evaluation over {episodes} episode(s): mean return {report.mean_return:.1f} "
                f"± {report.stderr:.1f}, own-zone fraction {report.own_zone_fraction:.2f}")
    return report
