"""Tabular SARSA engine for camera parameter tuning.

State is the pair of a discretized parameter vector (each value divided by
the grid step) and a binned measurement vector (each measurement mapped to
one of N equal-width bins over [0, 1]). The nine actions nudge one of the
four parameters up or down by one grid step, or do nothing. Q-values live
in a sparse table where unvisited entries read as 0.

The on-policy update is

    Q(s, a) <- Q(s, a) + alpha * (r + gamma * Q(s', a') - Q(s, a))

with an off-policy variant that bootstraps from max_a Q(s', a) instead, kept
around for convergence comparisons.

Exploration convention (deliberately inverted from the common one): at each
step draw u uniform in [0, 1); if u > epsilon take a uniformly random action,
otherwise exploit greedily with ties broken by lowest action id. Larger
epsilon therefore means LESS exploration; epsilon = 0.9 explores about 10%
of the time and epsilon = 1.0 never explores.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .camera import CameraBackend
from .errors import DecodeError, ParseError, ProtocolError, TransportError, VersionMismatch
from .imaging import PARAM_FIELDS, MetricVector, ParamVector, measure_all
from .reward import QualityEstimator

QTABLE_FORMAT_VERSION = 1

ACTION_COUNT = 9
NO_OP_ACTION = 0

# The no-op takes id 0 deliberately: greedy selection breaks ties by lowest
# id, so in a state with no learned values the agent holds its parameters
# instead of marching them toward a grid corner. Ids 1..8 are (parameter,
# direction) pairs in declaration order.
_ACTION_TARGETS: tuple[tuple[str, int] | None, ...] = (
    None,
    ("brightness", +1),
    ("brightness", -1),
    ("contrast", +1),
    ("contrast", -1),
    ("color_saturation", +1),
    ("color_saturation", -1),
    ("sharpness", +1),
    ("sharpness", -1),
)

ACTION_NAMES = (
    "no-op",
    "brightness+",
    "brightness-",
    "contrast+",
    "contrast-",
    "color+",
    "color-",
    "sharpness+",
    "sharpness-",
)


def action_target(action: int) -> tuple[str, int] | None:
    """(parameter name, +1/-1) for a nudge action, None for the no-op."""
    return _ACTION_TARGETS[action]


class StateKey(NamedTuple):
    """Discretized state: parameter grid indices and measurement bins."""

    param_indices: tuple[int, int, int, int]
    metric_bins: tuple[int, int, int, int]

    def flatten(self) -> list[int]:
        return list(self.param_indices) + list(self.metric_bins)


@dataclass(frozen=True)
class AgentConfig:
    """Learning-rate, discount, exploration and discretization settings."""

    alpha: float = 0.1
    gamma: float = 0.9
    epsilon: float = 0.9
    step: int = 10
    metric_bins: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("alpha", "gamma", "epsilon"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v!r}")
        if self.step < 1 or 100 % self.step != 0:
            raise ValueError(f"step must divide 100, got {self.step}")
        if self.metric_bins < 1:
            raise ValueError(f"metric_bins must be >= 1, got {self.metric_bins}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")


class QTable:
    """Sparse (state, action) -> value map; absent entries read as 0."""

    def __init__(self) -> None:
        self._values: dict[tuple[StateKey, int], float] = {}

    def get(self, s: StateKey, a: int) -> float:
        return self._values.get((s, a), 0.0)

    def set(self, s: StateKey, a: int, value: float) -> None:
        if not math.isfinite(value):
            raise ValueError(f"Q-values must be finite, got {value!r}")
        self._values[(s, a)] = value

    def max_value(self, s: StateKey) -> float:
        return max(self.get(s, a) for a in range(ACTION_COUNT))

    def greedy_action(self, s: StateKey) -> int:
        """Argmax over the nine actions, ties broken by lowest action id."""
        best_action = 0
        best_value = self.get(s, 0)
        for a in range(1, ACTION_COUNT):
            v = self.get(s, a)
            if v > best_value:
                best_action, best_value = a, v
        return best_action

    def items(self):
        return self._values.items()

    def copy(self) -> "QTable":
        other = QTable()
        other._values = dict(self._values)
        return other

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QTable):
            return NotImplemented
        return self._values == other._values


def discretize(p: ParamVector, m: MetricVector, cfg: AgentConfig) -> StateKey:
    """Grid indices for the parameters, equal-width bins for the metrics.

    A metric of exactly 1.0 falls in the top bin.
    """
    param_indices = tuple(v // cfg.step for v in p.as_tuple())
    metric_bins = tuple(
        min(int(v * cfg.metric_bins), cfg.metric_bins - 1) for v in m.as_tuple()
    )
    return StateKey(param_indices, metric_bins)


def select_action(q: QTable, s: StateKey, cfg: AgentConfig, rng: np.random.Generator) -> int:
    """Epsilon rule with the inverted convention described in the module docs."""
    u = rng.random()
    if u > cfg.epsilon:
        return int(rng.integers(ACTION_COUNT))
    return q.greedy_action(s)


def apply_action(p: ParamVector, action: int, step: int) -> ParamVector:
    """Nudge one parameter by +-step, clamped to [0, 100]; no-op returns p."""
    target = _ACTION_TARGETS[action]
    if target is None:
        return p
    name, direction = target
    value = getattr(p, name) + direction * step
    return p.with_value(name, min(max(value, 0), 100))


def sarsa_update(
    q: QTable, s: StateKey, a: int, r: float, s_next: StateKey, a_next: int, cfg: AgentConfig
) -> float:
    """On-policy update toward r + gamma * Q(s', a'); returns the new Q(s, a)."""
    current = q.get(s, a)
    updated = current + cfg.alpha * (r + cfg.gamma * q.get(s_next, a_next) - current)
    q.set(s, a, updated)
    return updated


def q_learning_update(
    q: QTable, s: StateKey, a: int, r: float, s_next: StateKey, cfg: AgentConfig
) -> float:
    """Off-policy update toward r + gamma * max_a Q(s', a)."""
    current = q.get(s, a)
    updated = current + cfg.alpha * (r + cfg.gamma * q.max_value(s_next) - current)
    q.set(s, a, updated)
    return updated


@dataclass(frozen=True)
class StepLog:
    """What one tuning step saw and did."""

    t: float
    params_before: ParamVector | None
    metrics: MetricVector | None
    reward: float | None
    action: int | None
    q_delta: float
    skipped: bool = False
    actuated: bool = False


class TuningAgent:
    """Drives one camera: capture, score, update, actuate.

    The agent lazily initializes on its first step (observe and act, nothing
    to update yet) and afterwards performs the full on-policy update each
    step. Transport-level failures from the camera or the estimator leave
    the table and the current (state, action) untouched; the step comes back
    marked skipped.
    """

    def __init__(self, cfg: AgentConfig, qtable: QTable | None = None) -> None:
        self.cfg = cfg
        self.qtable = qtable if qtable is not None else QTable()
        self.rng = np.random.default_rng(cfg.seed)
        self._current: tuple[StateKey, int] | None = None

    def reset_episode(self) -> None:
        """Forget the current (state, action); the next step re-initializes."""
        self._current = None

    def step(self, camera: CameraBackend, estimator: QualityEstimator, t: float) -> StepLog:
        try:
            frame = camera.capture(t)
            metrics = measure_all(frame)
            # Metric-based estimators can reuse the measurements instead of
            # re-measuring the frame; the score is identical either way.
            score_metrics = getattr(estimator, "score_metrics", None)
            reward = score_metrics(metrics) if score_metrics else estimator.score(frame)
            params = camera.get_params()
        except (TransportError, DecodeError, ProtocolError):
            return StepLog(
                t=t,
                params_before=None,
                metrics=None,
                reward=None,
                action=None,
                q_delta=0.0,
                skipped=True,
            )

        s_next = discretize(params, metrics, self.cfg)
        a_next = select_action(self.qtable, s_next, self.cfg, self.rng)

        actuated = False
        if a_next != NO_OP_ACTION:
            name, _ = _ACTION_TARGETS[a_next]  # type: ignore[misc]
            new_params = apply_action(params, a_next, self.cfg.step)
            try:
                camera.set_param(name, getattr(new_params, name))
            except TransportError:
                return StepLog(
                    t=t,
                    params_before=params,
                    metrics=metrics,
                    reward=reward,
                    action=a_next,
                    q_delta=0.0,
                    skipped=True,
                )
            actuated = True

        q_delta = 0.0
        if self._current is not None:
            s, a = self._current
            before = self.qtable.get(s, a)
            q_delta = sarsa_update(self.qtable, s, a, reward, s_next, a_next, self.cfg) - before
        self._current = (s_next, a_next)

        return StepLog(
            t=t,
            params_before=params,
            metrics=metrics,
            reward=reward,
            action=a_next,
            q_delta=q_delta,
            actuated=actuated,
        )


def save_qtable(q: QTable, cfg: AgentConfig, path: str) -> None:
    """Persist a table with its config as versioned JSON (lossless floats)."""
    entries = [
        {"s": s.flatten(), "a": a, "q": value} for (s, a), value in sorted(q.items())
    ]
    doc = {
        "version": QTABLE_FORMAT_VERSION,
        "config": asdict(cfg),
        "entries": entries,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_qtable(path: str) -> tuple[QTable, AgentConfig]:
    """Load a persisted table; the round trip is bit-exact on Q-values."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a JSON object")
    version = doc.get("version")
    if version != QTABLE_FORMAT_VERSION:
        raise VersionMismatch(
            f"{path}: version {version!r}, expected {QTABLE_FORMAT_VERSION}"
        )
    try:
        cfg = AgentConfig(**doc["config"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: bad config block: {exc}") from exc
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise ParseError(f"{path}: missing entries list")
    q = QTable()
    for i, entry in enumerate(entries):
        where = f"{path}: entries[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: must be an object")
        flat = entry.get("s")
        action = entry.get("a")
        value = entry.get("q")
        if (
            not isinstance(flat, list)
            or len(flat) != 8
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in flat)
        ):
            raise ParseError(f"{where}: 's' must be 8 integers")
        if not isinstance(action, int) or isinstance(action, bool) or not 0 <= action < ACTION_COUNT:
            raise ParseError(f"{where}: 'a' must be an action id in [0, {ACTION_COUNT - 1}]")
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ParseError(f"{where}: 'q' must be a finite number")
        s = StateKey(tuple(flat[:4]), tuple(flat[4:]))
        q.set(s, action, float(value))
    return q, cfg
