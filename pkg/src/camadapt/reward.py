"""No-reference quality estimation used as the tuning reward.

Every estimator maps a frame to a score in [0, 1]; the tuning loop consumes
that score directly as its immediate reward, so estimators are swappable
without touching the agent.

Three kinds ship here:

* composite - a weighted mean of analytic desirability curves over the four
  frame measurements. Brightness desirability peaks at mid-gray (0.5);
  contrast, colorfulness and sharpness desirabilities rise linearly and
  saturate at configurable scales. Cheap, deterministic, hand-checkable.
* external - a wire-protocol adapter for sidecar scorers (e.g. CNN-based
  models): POST the PNG-encoded frame, read back JSON {"score": <number>},
  then affinely normalize the declared raw range onto [0, 1] with clamping.
* constant - a fixed score, useful as a no-gradient baseline.

The `make_estimator` factory builds any of them from a JSON-style mapping
with a "kind" key, which is how experiment configs choose their reward.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Protocol

import requests
from PIL import Image

from .errors import ConfigError, ProtocolError, TransportError
from .imaging import Frame, MetricVector, measure_all


class QualityEstimator(Protocol):
    """Scores a frame in [0, 1]; higher means better capture quality."""

    def score(self, frame: Frame) -> float: ...


@dataclass(frozen=True)
class CompositeEstimatorConfig:
    """Weights and desirability shapes for the analytic estimator.

    weights apply to (brightness, contrast, colorfulness, sharpness) and
    must be non-negative and sum to 1 (within 1e-9). The three scale values
    are the measurement levels at which the corresponding desirability
    saturates at 1.
    """

    weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    contrast_scale: float = 0.6
    colorfulness_scale: float = 0.5
    sharpness_scale: float = 0.2

    def __post_init__(self) -> None:
        if len(self.weights) != 4 or any(w < 0 for w in self.weights):
            raise ConfigError(f"weights must be 4 non-negative values, got {self.weights}")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ConfigError(f"weights must sum to 1, got sum {sum(self.weights)}")
        for name in ("contrast_scale", "colorfulness_scale", "sharpness_scale"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0")


class CompositeEstimator:
    """Weighted mean of desirability curves over the frame measurements."""

    raw_range = (0.0, 1.0)

    def __init__(self, config: CompositeEstimatorConfig | None = None) -> None:
        self.config = config or CompositeEstimatorConfig()

    def score_metrics(self, m: MetricVector) -> float:
        cfg = self.config
        d_brightness = 1.0 - abs(m.brightness - 0.5) / 0.5
        d_contrast = min(m.contrast / cfg.contrast_scale, 1.0)
        d_colorfulness = min(m.colorfulness / cfg.colorfulness_scale, 1.0)
        d_sharpness = min(m.sharpness / cfg.sharpness_scale, 1.0)
        w = cfg.weights
        return (
            w[0] * d_brightness
            + w[1] * d_contrast
            + w[2] * d_colorfulness
            + w[3] * d_sharpness
        )

    def score(self, frame: Frame) -> float:
        return self.score_metrics(measure_all(frame))


@dataclass(frozen=True)
class ExternalEstimatorConfig:
    """Endpoint and raw score range of a sidecar estimator."""

    endpoint: str
    lo: float
    hi: float
    timeout_ms: int = 5000

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ConfigError(f"raw range needs lo < hi, got ({self.lo}, {self.hi})")
        if self.timeout_ms <= 0:
            raise ConfigError("timeout_ms must be > 0")


class ExternalEstimator:
    """Adapter speaking the sidecar wire protocol.

    Request: HTTP POST, Content-Type image/png, body = PNG bytes.
    Response: HTTP 200, application/json, body {"score": <number>}.
    The raw score is affinely mapped from [lo, hi] onto [0, 1] and clamped.
    """

    def __init__(self, config: ExternalEstimatorConfig) -> None:
        self.config = config

    def score(self, frame: Frame) -> float:
        buf = io.BytesIO()
        Image.fromarray(frame.array, mode="RGB").save(buf, format="PNG")
        try:
            resp = requests.post(
                self.config.endpoint,
                data=buf.getvalue(),
                headers={"Content-Type": "image/png"},
                timeout=self.config.timeout_ms / 1000.0,
            )
        except requests.RequestException as exc:
            raise TransportError(f"POST {self.config.endpoint} failed: {exc}") from exc
        if resp.status_code != 200:
            raise TransportError(
                f"POST {self.config.endpoint} returned {resp.status_code}"
            )
        try:
            doc = json.loads(resp.content)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"estimator response is not JSON: {exc}") from exc
        if not isinstance(doc, dict) or "score" not in doc:
            raise ProtocolError("estimator response lacks a 'score' field")
        raw = doc["score"]
        if isinstance(raw, bool) or not isinstance(raw, (int, float)) or not math.isfinite(raw):
            raise ProtocolError(f"estimator score is not a finite number: {raw!r}")
        lo, hi = self.config.lo, self.config.hi
        return min(max((float(raw) - lo) / (hi - lo), 0.0), 1.0)


class ConstantEstimator:
    """Always the same score; a reward with no gradient."""

    def __init__(self, value: float = 0.5) -> None:
        if not 0.0 <= value <= 1.0:
            raise ConfigError(f"constant score must be in [0, 1], got {value}")
        self.value = value

    def score(self, frame: Frame) -> float:
        return self.value


def make_estimator(doc: dict) -> QualityEstimator:
    """Build an estimator from a JSON-style config mapping.

    Recognized kinds: "composite" (optional weights, contrast_scale,
    colorfulness_scale, sharpness_scale), "external" (endpoint, range
    [lo, hi], optional timeout_ms), "constant" (optional value).
    """
    if not isinstance(doc, dict):
        raise ConfigError("estimator config must be a mapping")
    kind = doc.get("kind", "composite")
    if kind == "composite":
        cfg = CompositeEstimatorConfig(
            weights=tuple(doc.get("weights", (0.25, 0.25, 0.25, 0.25))),
            contrast_scale=doc.get("contrast_scale", 0.6),
            colorfulness_scale=doc.get("colorfulness_scale", 0.5),
            sharpness_scale=doc.get("sharpness_scale", 0.2),
        )
        return CompositeEstimator(cfg)
    if kind == "external":
        if "endpoint" not in doc or "range" not in doc:
            raise ConfigError("external estimator config needs 'endpoint' and 'range'")
        lo, hi = doc["range"]
        return ExternalEstimator(
            ExternalEstimatorConfig(
                endpoint=doc["endpoint"],
                lo=float(lo),
                hi=float(hi),
                timeout_ms=int(doc.get("timeout_ms", 5000)),
            )
        )
    if kind == "constant":
        return ConstantEstimator(float(doc.get("value", 0.5)))
    raise ConfigError(f"unknown estimator kind {kind!r}")


def estimator_name(doc: dict) -> str:
    """Row label for an estimator config in comparison tables."""
    if isinstance(doc, dict) and "name" in doc:
        return str(doc["name"])
    return str(doc.get("kind", "composite")) if isinstance(doc, dict) else "composite"
