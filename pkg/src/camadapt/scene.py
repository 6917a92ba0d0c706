"""Scene simulation: a latent scene driven by a time-varying condition schedule.

A scene is a base image plus annotated target boxes. Environmental change is
modeled by a schedule of (time, condition) keyframes with step interpolation:
conditions switch abruptly at keyframe times and the last keyframe persists.
A condition scales illumination, adds per-pixel Gaussian noise (seeded by the
scene seed and the capture time, so replays are bit-identical) and blends
toward mid-gray haze. The resulting latent frame is what a camera sees
before its own parameter transforms apply.
"""

from __future__ import annotations

import bisect
import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError
from .imaging import Frame, _to_u8, load_frame


@dataclass(frozen=True)
class TargetBox:
    """An annotated target region inside the base image."""

    label: str
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        if self.w < 8 or self.h < 8:
            raise ValidationError(
                f"target {self.label!r}: boxes must be at least 8x8, got {self.w}x{self.h}"
            )
        if self.x < 0 or self.y < 0:
            raise ValidationError(f"target {self.label!r}: origin must be non-negative")


@dataclass(frozen=True)
class EnvCondition:
    """Environmental state: illumination multiplier, noise level, haze blend."""

    illumination: float
    noise_sigma: float = 0.0
    haze_alpha: float = 0.0

    def __post_init__(self) -> None:
        if not self.illumination >= 0.0:
            raise ValidationError(f"illumination must be >= 0, got {self.illumination!r}")
        if not self.noise_sigma >= 0.0:
            raise ValidationError(f"noise_sigma must be >= 0, got {self.noise_sigma!r}")
        if not 0.0 <= self.haze_alpha <= 1.0:
            raise ValidationError(f"haze_alpha must be in [0, 1], got {self.haze_alpha!r}")


@dataclass(frozen=True)
class ConditionSchedule:
    """Ordered (t, condition) keyframes with step interpolation."""

    keyframes: tuple[tuple[float, EnvCondition], ...]

    def __post_init__(self) -> None:
        if not self.keyframes:
            raise ValidationError("schedule needs at least one keyframe")
        times = [t for t, _ in self.keyframes]
        if times[0] != 0:
            raise ValidationError(f"first keyframe must be at t=0, got t={times[0]}")
        for a, b in zip(times, times[1:]):
            if not b > a:
                raise ValidationError(f"keyframe times must strictly increase ({a} -> {b})")


@dataclass(frozen=True)
class SceneManifest:
    """A loadable scene: base image, targets, schedule and noise seed."""

    base_image: str
    base_frame: Frame
    targets: tuple[TargetBox, ...]
    schedule: ConditionSchedule
    seed: int = 0

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ValidationError(f"seed must be non-negative, got {self.seed}")
        w, h = self.base_frame.width, self.base_frame.height
        if w < 3 or h < 3:
            raise ValidationError(f"base image must be at least 3x3, got {w}x{h}")
        for box in self.targets:
            if box.x + box.w > w or box.y + box.h > h:
                raise ValidationError(
                    f"target {box.label!r} extends past the {w}x{h} base image"
                )


# Default lighting presets; manifests are free to override.
DAY = EnvCondition(illumination=1.0, noise_sigma=0.0, haze_alpha=0.0)
NIGHT = EnvCondition(illumination=0.25, noise_sigma=8.0, haze_alpha=0.0)


def _require(doc: dict, key: str, kind: type | tuple[type, ...], where: str):
    if key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, kind):
        raise ParseError(f"{where}: key {key!r} has wrong type {type(value).__name__}")
    return value


def load_manifest(path: str) -> SceneManifest:
    """Parse and validate a scene manifest JSON file.

    The base image path is resolved relative to the manifest's directory.
    Structural problems (bad JSON, missing/mistyped keys) raise ParseError;
    domain violations (box outside image, non-monotone keyframes, bad
    condition values) raise ValidationError.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: manifest must be a JSON object")

    image_rel = _require(doc, "base_image", str, path)
    seed = _require(doc, "seed", int, path)

    targets_doc = _require(doc, "targets", list, path)
    targets = []
    for i, entry in enumerate(targets_doc):
        where = f"{path}: targets[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: must be an object")
        targets.append(
            TargetBox(
                label=_require(entry, "label", str, where),
                x=_require(entry, "x", int, where),
                y=_require(entry, "y", int, where),
                w=_require(entry, "w", int, where),
                h=_require(entry, "h", int, where),
            )
        )

    schedule_doc = _require(doc, "schedule", list, path)
    keyframes = []
    for i, entry in enumerate(schedule_doc):
        where = f"{path}: schedule[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: must be an object")
        t = _require(entry, "t", (int, float), where)
        keyframes.append(
            (
                float(t),
                EnvCondition(
                    illumination=float(_require(entry, "illumination", (int, float), where)),
                    noise_sigma=float(_require(entry, "noise_sigma", (int, float), where)),
                    haze_alpha=float(_require(entry, "haze_alpha", (int, float), where)),
                ),
            )
        )
    schedule = ConditionSchedule(keyframes=tuple(keyframes))

    image_path = os.path.join(os.path.dirname(os.path.abspath(path)), image_rel)
    try:
        base_frame = load_frame(image_path)
    except Exception as exc:
        raise ValidationError(f"{path}: base image {image_rel!r} not loadable: {exc}") from exc

    return SceneManifest(
        base_image=image_path,
        base_frame=base_frame,
        targets=tuple(targets),
        schedule=schedule,
        seed=seed,
    )


def condition_at(schedule: ConditionSchedule, t: float) -> EnvCondition:
    """The condition of the latest keyframe with time <= t (step semantics)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    times = [kt for kt, _ in schedule.keyframes]
    idx = bisect.bisect_right(times, t) - 1
    return schedule.keyframes[idx][1]


def _noise_rng(seed: int, t: float) -> np.random.Generator:
    # Quantize t to whole milliseconds so equal capture times reseed equally.
    return np.random.default_rng([seed, int(round(t * 1000.0))])


def apply_condition(base: Frame, c: EnvCondition, t: float, seed: int) -> Frame:
    """Render the latent frame for a condition at time t.

    Scales by illumination, adds Gaussian noise drawn per pixel per channel
    from a generator seeded by (seed, t), clamps, then blends toward mid-gray
    (128, 128, 128) by haze_alpha. Deterministic for equal arguments.
    """
    if c.illumination == 1.0 and c.noise_sigma == 0.0 and c.haze_alpha == 0.0:
        # Every step below is exact on integer input; frames are immutable,
        # so handing back the base is safe.
        return base
    a = base.array.astype(np.float64) * c.illumination
    if c.noise_sigma > 0.0:
        a = a + _noise_rng(seed, t).normal(0.0, c.noise_sigma, size=a.shape)
    a = np.clip(a, 0.0, 255.0)
    if c.haze_alpha > 0.0:
        a = (1.0 - c.haze_alpha) * a + c.haze_alpha * 128.0
    return Frame(_to_u8(a))
