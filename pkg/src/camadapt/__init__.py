"""Adaptive camera parameter tuning.

A tabular SARSA agent, rewarded by a no-reference frame quality estimator,
continuously nudges the four imaging parameters of a (simulated or
HTTP-controlled) camera so a downstream detectability oracle finds more
targets than under fixed settings.
"""

from .analytics import DetectionResult, OracleThresholds, detect_targets
from .camera import HttpCamera, HttpCameraConfig, SimulatedCamera
from .harness import (
    ExperimentConfig,
    PRESETS,
    run_compare,
    run_reward_comparison,
    run_train,
)
from .imaging import (
    EnhancementFactors,
    Frame,
    MetricVector,
    ParamVector,
    enhance,
    load_frame,
    measure_all,
    params_to_factors,
    save_frame,
)
from .reward import (
    CompositeEstimator,
    CompositeEstimatorConfig,
    ConstantEstimator,
    ExternalEstimator,
    ExternalEstimatorConfig,
    make_estimator,
)
from .rl import (
    AgentConfig,
    QTable,
    StateKey,
    TuningAgent,
    apply_action,
    discretize,
    load_qtable,
    q_learning_update,
    sarsa_update,
    save_qtable,
    select_action,
)
from .scene import (
    DAY,
    NIGHT,
    ConditionSchedule,
    EnvCondition,
    SceneManifest,
    TargetBox,
    apply_condition,
    condition_at,
    load_manifest,
)

__version__ = "0.1.0"
