"""Deterministic detectability oracle standing in for a learned detector.

A target counts as detected when the frame region under its box still
carries enough signal for a detector to work with: local contrast and
sharpness above thresholds, and mean luma inside an exposure window. The
rule is pure, order-independent over targets, and monotone in the
thresholds, which makes fixed-vs-tuned comparisons falsifiable instead of
model-dependent. It never produces false positives by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoxOutOfBounds
from .imaging import Frame, measure_brightness, measure_contrast, measure_sharpness
from .scene import TargetBox


@dataclass(frozen=True)
class OracleThresholds:
    """Minimum local signal for a target to count as detected."""

    min_contrast: float = 0.05
    min_sharpness: float = 0.02
    luma_window: tuple[float, float] = (0.15, 0.9)

    def __post_init__(self) -> None:
        lo, hi = self.luma_window
        if not 0.0 <= lo < hi <= 1.0:
            raise ValueError(f"luma window needs 0 <= lo < hi <= 1, got {self.luma_window}")
        if self.min_contrast < 0 or self.min_sharpness < 0:
            raise ValueError("thresholds must be non-negative")


@dataclass(frozen=True)
class TargetDetection:
    label: str
    detected: bool


@dataclass(frozen=True)
class DetectionResult:
    """Per-target flags plus the detected count."""

    per_target: tuple[TargetDetection, ...]

    @property
    def count(self) -> int:
        return sum(1 for d in self.per_target if d.detected)


def _crop(frame: Frame, box: TargetBox) -> Frame:
    if box.x + box.w > frame.width or box.y + box.h > frame.height:
        raise BoxOutOfBounds(
            f"target {box.label!r} ({box.x},{box.y},{box.w},{box.h}) exceeds "
            f"{frame.width}x{frame.height} frame"
        )
    return Frame(frame.array[box.y : box.y + box.h, box.x : box.x + box.w])


def detect_targets(
    frame: Frame,
    targets: tuple[TargetBox, ...] | list[TargetBox],
    thresholds: OracleThresholds = OracleThresholds(),
) -> DetectionResult:
    """Apply the detectability rule to every target box on the frame."""
    lo, hi = thresholds.luma_window
    flags = []
    for box in targets:
        sub = _crop(frame, box)
        detected = (
            measure_contrast(sub) >= thresholds.min_contrast
            and measure_sharpness(sub) >= thresholds.min_sharpness
            and lo <= measure_brightness(sub) <= hi
        )
        flags.append(TargetDetection(label=box.label, detected=detected))
    return DetectionResult(per_target=tuple(flags))
