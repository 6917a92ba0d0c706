"""Experiment runner: fixed-vs-tuned comparisons, training runs, and the
reward-function comparison table.

Time is simulated: one step per frame at the configured FPS, with the frame
period held in integer milliseconds. Tuning fires on the frames whose
nominal stream time is a multiple of the tuning interval; each actuated
parameter change additionally advances that camera's clock by the actuation
latency, so tuning cost shows up directly in the CSV t column.

A comparison run drives two simulated cameras over the same manifest and
seed. One keeps the initial preset for the whole run, the other is tuned by
the agent. Every frame from both cameras is scored by the detectability
oracle; the run summary reports the tuned camera's improvement in total
detections over the fixed one, and its average detections over the final
quarter of the run (the steady state).
"""

from __future__ import annotations

import csv
import json
import os
import statistics
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .analytics import OracleThresholds, detect_targets
from .camera import DEFAULT_ACTUATION_LATENCY_MS, SimulatedCamera
from .errors import ConfigError
from .imaging import MetricVector, ParamVector, measure_all
from .reward import estimator_name, make_estimator
from .rl import AgentConfig, QTable, StepLog, TuningAgent, save_qtable
from .scene import load_manifest

# Suboptimal starting presets used by comparison experiments.
PRESETS = {
    "S1": ParamVector(20, 20, 50, 50),
    "S2": ParamVector(80, 80, 50, 50),
    "S3": ParamVector(50, 10, 10, 50),
    "S4": ParamVector(50, 90, 90, 50),
}

CSV_COLUMNS = (
    "t",
    "camera",
    "brightness",
    "contrast",
    "color",
    "sharpness",
    "m_brightness",
    "m_contrast",
    "m_colorfulness",
    "m_sharpness",
    "reward",
    "detections",
    "ma",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run needs; mirrors the JSON config document."""

    manifest: str
    agent: AgentConfig = AgentConfig()
    estimator: dict = field(default_factory=lambda: {"kind": "composite"})
    estimators: tuple[dict, ...] = ()
    initial_setting: str | ParamVector = "S1"
    fps: float = 10.0
    duration: float = 120.0
    tuning_interval: float = 2.0
    window: int = 100
    thresholds: OracleThresholds = OracleThresholds()
    actuation_latency_ms: int = DEFAULT_ACTUATION_LATENCY_MS
    train_steps: int = 20000
    train_reset_interval: int = 50
    train_epsilon: float | None = None
    output: str | None = None

    def __post_init__(self) -> None:
        if not self.fps > 0:
            raise ConfigError(f"fps must be > 0, got {self.fps}")
        if not self.duration > 0:
            raise ConfigError(f"duration must be > 0, got {self.duration}")
        if self.tuning_interval < 1.0 / self.fps:
            raise ConfigError("tuning interval must be at least one frame period")
        if self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")
        if self.train_steps < 0 or self.train_reset_interval < 0:
            raise ConfigError("train_steps and train_reset_interval must be >= 0")
        if self.actuation_latency_ms < 0:
            raise ConfigError("actuation latency must be >= 0")
        if self.train_epsilon is not None and not 0.0 <= self.train_epsilon <= 1.0:
            raise ConfigError(f"train_epsilon must be in [0, 1], got {self.train_epsilon}")


def resolve_initial_setting(setting: str | ParamVector) -> ParamVector:
    if isinstance(setting, ParamVector):
        return setting
    try:
        return PRESETS[setting]
    except KeyError:
        raise ConfigError(f"unknown preset {setting!r}; expected one of {sorted(PRESETS)}")


def load_experiment_config(path: str) -> ExperimentConfig:
    """Read an ExperimentConfig from JSON; paths resolve relative to the file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "manifest" not in doc:
        raise ConfigError(f"{path}: config must be an object with a 'manifest' key")
    base = os.path.dirname(os.path.abspath(path))

    kwargs: dict = {"manifest": os.path.join(base, doc["manifest"])}
    if "agent" in doc:
        try:
            kwargs["agent"] = AgentConfig(**doc["agent"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}: bad agent block: {exc}") from exc
    if "estimator" in doc:
        kwargs["estimator"] = doc["estimator"]
    if "estimators" in doc:
        kwargs["estimators"] = tuple(doc["estimators"])
    if "initial_setting" in doc:
        setting = doc["initial_setting"]
        kwargs["initial_setting"] = (
            ParamVector(*setting) if isinstance(setting, list) else setting
        )
    if "thresholds" in doc:
        t = doc["thresholds"]
        try:
            kwargs["thresholds"] = OracleThresholds(
                min_contrast=t.get("min_contrast", 0.05),
                min_sharpness=t.get("min_sharpness", 0.02),
                luma_window=tuple(t.get("luma_window", (0.15, 0.9))),
            )
        except (TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(f"{path}: bad thresholds block: {exc}") from exc
    for key in (
        "fps",
        "duration",
        "tuning_interval",
        "window",
        "actuation_latency_ms",
        "train_steps",
        "train_reset_interval",
        "train_epsilon",
        "output",
    ):
        if key in doc:
            kwargs[key] = doc[key]
    return ExperimentConfig(**kwargs)


@dataclass(frozen=True)
class FrameRow:
    """One CSV row: what one camera streamed at one frame."""

    t: float
    camera: str
    params: ParamVector
    metrics: MetricVector
    reward: float
    detections: int
    ma: float

    def as_csv(self) -> list:
        return [
            repr(self.t),
            self.camera,
            self.params.brightness,
            self.params.contrast,
            self.params.color_saturation,
            self.params.sharpness,
            repr(self.metrics.brightness),
            repr(self.metrics.contrast),
            repr(self.metrics.colorfulness),
            repr(self.metrics.sharpness),
            repr(self.reward),
            self.detections,
            repr(self.ma),
        ]


@dataclass(frozen=True)
class RunSummary:
    frames: int
    sum_fixed: int
    sum_tuned: int
    improvement_pct: float
    steady_state_avg: float
    final_ma_fixed: float
    final_ma_tuned: float


@dataclass(frozen=True)
class CompareResult:
    fixed_rows: list[FrameRow]
    tuned_rows: list[FrameRow]
    steps: list[StepLog]
    summary: RunSummary


class _MovingAverage:
    """Exact windowed mean over integer detection counts."""

    def __init__(self, window: int) -> None:
        self._window = deque(maxlen=window)
        self._sum = 0

    def push(self, value: int) -> float:
        if len(self._window) == self._window.maxlen:
            self._sum -= self._window[0]
        self._window.append(value)
        self._sum += value
        return self._sum / len(self._window)


def _log_frame(
    camera: SimulatedCamera,
    name: str,
    estimator,
    thresholds: OracleThresholds,
    targets,
    ma: _MovingAverage,
) -> FrameRow:
    t = camera.clock
    frame = camera.capture(t)
    metrics = measure_all(frame)
    detections = detect_targets(frame, targets, thresholds).count
    score_metrics = getattr(estimator, "score_metrics", None)
    return FrameRow(
        t=t,
        camera=name,
        params=camera.get_params(),
        metrics=metrics,
        reward=score_metrics(metrics) if score_metrics else estimator.score(frame),
        detections=detections,
        ma=ma.push(detections),
    )


def run_compare(cfg: ExperimentConfig, qtable: QTable | None = None) -> CompareResult:
    """Side-by-side fixed-vs-tuned run on one manifest.

    Passing a trained table starts the tuned agent from a private copy of
    it, so the caller's table is left untouched by online learning.
    """
    manifest = load_manifest(cfg.manifest)
    initial = resolve_initial_setting(cfg.initial_setting)
    estimator = make_estimator(cfg.estimator)

    fixed = SimulatedCamera(manifest, initial, cfg.actuation_latency_ms)
    tuned = SimulatedCamera(manifest, initial, cfg.actuation_latency_ms)
    agent = TuningAgent(cfg.agent, qtable=qtable.copy() if qtable is not None else None)

    n_frames = int(round(cfg.duration * cfg.fps))
    frame_period_ms = int(round(1000.0 / cfg.fps))
    tune_every = max(1, int(round(cfg.tuning_interval * cfg.fps)))

    fixed_rows: list[FrameRow] = []
    tuned_rows: list[FrameRow] = []
    steps: list[StepLog] = []
    ma_fixed = _MovingAverage(cfg.window)
    ma_tuned = _MovingAverage(cfg.window)

    for i in range(n_frames):
        if i % tune_every == 0:
            steps.append(agent.step(tuned, estimator, tuned.clock))
        fixed_rows.append(
            _log_frame(fixed, "fixed", estimator, cfg.thresholds, manifest.targets, ma_fixed)
        )
        tuned_rows.append(
            _log_frame(tuned, "tuned", estimator, cfg.thresholds, manifest.targets, ma_tuned)
        )
        fixed.clock_ms += frame_period_ms
        tuned.clock_ms += frame_period_ms

    sum_fixed = sum(r.detections for r in fixed_rows)
    sum_tuned = sum(r.detections for r in tuned_rows)
    steady_n = max(1, n_frames // 4)
    summary = RunSummary(
        frames=n_frames,
        sum_fixed=sum_fixed,
        sum_tuned=sum_tuned,
        improvement_pct=(sum_tuned - sum_fixed) / max(sum_fixed, 1) * 100.0,
        steady_state_avg=statistics.fmean(r.detections for r in tuned_rows[-steady_n:]),
        final_ma_fixed=fixed_rows[-1].ma,
        final_ma_tuned=tuned_rows[-1].ma,
    )
    return CompareResult(fixed_rows, tuned_rows, steps, summary)


def write_compare_csv(result: CompareResult, path: str) -> None:
    """Interleave the two cameras frame by frame; each camera's rows are
    ordered by its own t."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row_fixed, row_tuned in zip(result.fixed_rows, result.tuned_rows):
            writer.writerow(row_fixed.as_csv())
            writer.writerow(row_tuned.as_csv())


def _random_grid_params(rng: np.random.Generator, step: int) -> ParamVector:
    values = rng.integers(0, 100 // step + 1, size=4) * step
    return ParamVector(*(int(v) for v in values))


def run_train(cfg: ExperimentConfig) -> tuple[QTable, AgentConfig]:
    """Populate a fresh Q-table by running the tuning loop on one camera.

    The camera starts from the configured initial setting and, when
    train_reset_interval is non-zero, teleports every that many steps
    (ending the agent's episode), so the table sees many starting regions
    instead of one trajectory. Teleports alternate between uniformly random
    grid points and the shipped suboptimal presets: the presets are where a
    camera is expected to start from in the field, so the table should know
    the way out of them. Conditions follow the manifest schedule at one
    tuning interval per step. When cfg.output is set the table is persisted
    there.
    """
    manifest = load_manifest(cfg.manifest)
    agent_cfg = cfg.agent
    if cfg.train_epsilon is not None:
        agent_cfg = replace(agent_cfg, epsilon=cfg.train_epsilon)

    camera = SimulatedCamera(
        manifest, resolve_initial_setting(cfg.initial_setting), cfg.actuation_latency_ms
    )
    estimator = make_estimator(cfg.estimator)
    agent = TuningAgent(agent_cfg)
    reset_rng = np.random.default_rng([agent_cfg.seed, 1])
    preset_cycle = tuple(PRESETS.values())
    interval_ms = int(round(cfg.tuning_interval * 1000.0))

    resets = 0
    for i in range(cfg.train_steps):
        if cfg.train_reset_interval and i > 0 and i % cfg.train_reset_interval == 0:
            if resets % 2 == 0:
                start = preset_cycle[(resets // 2) % len(preset_cycle)]
            else:
                start = _random_grid_params(reset_rng, agent_cfg.step)
            camera.force_params(start)
            agent.reset_episode()
            resets += 1
        agent.step(camera, estimator, camera.clock)
        camera.clock_ms += interval_ms

    if cfg.output:
        save_qtable(agent.qtable, agent_cfg, cfg.output)
    return agent.qtable, agent_cfg


@dataclass(frozen=True)
class RewardComparisonRow:
    estimator: str
    mean_improvement_pct: float
    mean_steady_state: float


def run_reward_comparison(
    cfg: ExperimentConfig, estimators: tuple[dict, ...] | list[dict]
) -> list[RewardComparisonRow]:
    """Train and evaluate each candidate reward over the S1-S4 presets.

    Every estimator gets a fresh table trained with the same seed and
    schedule, then one comparison run per preset; rows report the means.
    """
    if len(estimators) < 2:
        raise ConfigError("reward comparison needs at least 2 estimator configs")
    rows = []
    for doc in estimators:
        est_cfg = replace(cfg, estimator=doc, output=None)
        qtable, _ = run_train(est_cfg)
        improvements = []
        steady = []
        for preset in ("S1", "S2", "S3", "S4"):
            result = run_compare(replace(est_cfg, initial_setting=preset), qtable=qtable)
            improvements.append(result.summary.improvement_pct)
            steady.append(result.summary.steady_state_avg)
        rows.append(
            RewardComparisonRow(
                estimator=estimator_name(doc),
                mean_improvement_pct=statistics.fmean(improvements),
                mean_steady_state=statistics.fmean(steady),
            )
        )
    return rows


def write_reward_comparison_csv(rows: list[RewardComparisonRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["estimator", "mean_improvement_pct", "mean_steady_state"])
        for row in rows:
            writer.writerow(
                [row.estimator, repr(row.mean_improvement_pct), repr(row.mean_steady_state)]
            )
