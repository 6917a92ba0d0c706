"""Pixel-level imaging primitives: enhancement transforms and frame measures.

The four tunable camera parameters (brightness, contrast, color saturation,
sharpness) live on an integer 0-100 grid. A parameter maps linearly to an
enhancement factor via value/50, so 50 is the neutral factor 1.0, 0 is fully
degenerate and 100 is double strength. Each enhancement stage blends the
input with a fully degenerate rendition of itself:

    out = clamp(degenerate + f * (input - degenerate))

where the degenerate image is black (brightness), a flat field at the
input's mean BT.601 luma (contrast), the per-pixel grayscale (color), or a
3x3-smoothed copy (sharpness). This mirrors the blend semantics of the
classic PIL ImageEnhance operators. Stages apply in the fixed order
brightness -> contrast -> color -> sharpness; arithmetic is float64 with a
round half-away-from-zero back to 8 bits at the end of each stage, so equal
inputs always give bit-identical outputs.

Measurements (all normalized to [0, 1]):
  brightness   mean BT.601 luma / 255
  contrast     population RMS of normalized luma, rescaled by 1/0.5
  colorfulness Hasler-Suesstrunk opponent-color statistic, capped at 150
  sharpness    mean Sobel gradient magnitude over interior pixels,
               normalized by 1020*sqrt(2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from PIL import Image

from .errors import FrameTooSmall

# BT.601 luma weights for R, G, B.
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114], dtype=np.float64)

# Largest Sobel response on 8-bit data is 4*255 per axis.
_SOBEL_NORM = 1020.0 * math.sqrt(2.0)

PARAM_FIELDS = ("brightness", "contrast", "color_saturation", "sharpness")


@dataclass(frozen=True, eq=False)
class Frame:
    """An immutable 8-bit RGB raster, stored as an (h, w, 3) uint8 array."""

    array: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.array)
        if a.ndim != 3 or a.shape[2] != 3:
            raise ValueError(f"frame array must have shape (h, w, 3), got {a.shape}")
        if a.dtype != np.uint8:
            raise ValueError(f"frame array must be uint8, got {a.dtype}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("frame must be at least 1x1")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "array", a)

    @property
    def width(self) -> int:
        return self.array.shape[1]

    @property
    def height(self) -> int:
        return self.array.shape[0]

    @classmethod
    def full(cls, width: int, height: int, color: tuple[int, int, int]) -> "Frame":
        """A constant-color frame."""
        a = np.empty((height, width, 3), dtype=np.uint8)
        a[:, :] = color
        return cls(a)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return np.array_equal(self.array, other.array)


@dataclass(frozen=True)
class ParamVector:
    """The four camera parameter values, integers on the 0-100 grid."""

    brightness: int
    contrast: int
    color_saturation: int
    sharpness: int

    def __post_init__(self) -> None:
        for name in PARAM_FIELDS:
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v <= 100:
                raise ValueError(f"{name} must be an integer in [0, 100], got {v!r}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.brightness, self.contrast, self.color_saturation, self.sharpness)

    def with_value(self, name: str, value: int) -> "ParamVector":
        if name not in PARAM_FIELDS:
            raise ValueError(f"unknown parameter {name!r}")
        return replace(self, **{name: value})


@dataclass(frozen=True)
class EnhancementFactors:
    """Per-stage blend factors; 1.0 is identity for each stage."""

    brightness: float
    contrast: float
    color: float
    sharpness: float

    def __post_init__(self) -> None:
        for name in ("brightness", "contrast", "color", "sharpness"):
            v = getattr(self, name)
            if not v >= 0.0:
                raise ValueError(f"{name} factor must be >= 0, got {v!r}")


@dataclass(frozen=True)
class MetricVector:
    """Measured brightness, contrast, colorfulness and sharpness of a frame."""

    brightness: float
    contrast: float
    colorfulness: float
    sharpness: float

    def __post_init__(self) -> None:
        for name in ("brightness", "contrast", "colorfulness", "sharpness"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.brightness, self.contrast, self.colorfulness, self.sharpness)


def params_to_factors(p: ParamVector) -> EnhancementFactors:
    """Map grid parameters to blend factors (value / 50, so 50 is identity)."""
    return EnhancementFactors(
        brightness=p.brightness / 50.0,
        contrast=p.contrast / 50.0,
        color=p.color_saturation / 50.0,
        sharpness=p.sharpness / 50.0,
    )


def _to_u8(a: np.ndarray) -> np.ndarray:
    """Clamp to [0, 255] and round half away from zero to uint8.

    After the clamp all values are non-negative, so half-away-from-zero is
    floor(x + 0.5).
    """
    return np.floor(np.clip(a, 0.0, 255.0) + 0.5).astype(np.uint8)


def _luma(a: np.ndarray) -> np.ndarray:
    """BT.601 luma plane of an (h, w, 3) float array, same value scale."""
    return a @ _LUMA_WEIGHTS


def _smoothed(a: np.ndarray) -> np.ndarray:
    """3x3 smoothing [[1,1,1],[1,5,1],[1,1,1]]/13 per channel.

    The kernel is a 3x3 box plus 4x the center, so the neighborhood sum is
    built from separable row/column sums. Edge pixels are copied unchanged;
    frames without interior pixels come back as-is.
    """
    out = a.copy()
    if a.shape[0] >= 3 and a.shape[1] >= 3:
        rows = a[:, :-2] + a[:, 1:-1] + a[:, 2:]
        box = rows[:-2] + rows[1:-1] + rows[2:]
        box += 4.0 * a[1:-1, 1:-1]
        box /= 13.0
        out[1:-1, 1:-1] = box
    return out


def enhance(frame: Frame, f: EnhancementFactors) -> Frame:
    """Apply the four enhancement stages in fixed order.

    Each stage blends toward its degenerate image and rounds back to 8 bits,
    so the output of one stage is the exact 8-bit input of the next. A stage
    with factor exactly 1.0 is skipped: the blend returns its integer input
    bit-exactly there, so the shortcut changes nothing.
    """
    a = frame.array
    changed = False

    # Brightness: degenerate is black.
    if f.brightness != 1.0:
        a = _to_u8(a.astype(np.float64) * f.brightness)
        changed = True

    # Contrast: degenerate is a flat field at the stage input's mean luma.
    if f.contrast != 1.0:
        af = a.astype(np.float64)
        mean_luma = float(_luma(af).mean())
        a = _to_u8(mean_luma + f.contrast * (af - mean_luma))
        changed = True

    # Color: degenerate is the per-pixel grayscale (luma in all channels).
    if f.color != 1.0:
        af = a.astype(np.float64)
        gray = _luma(af)[:, :, np.newaxis]
        a = _to_u8(gray + f.color * (af - gray))
        changed = True

    # Sharpness: degenerate is the smoothed copy, borders kept.
    if f.sharpness != 1.0:
        af = a.astype(np.float64)
        smooth = _smoothed(af)
        a = _to_u8(smooth + f.sharpness * (af - smooth))
        changed = True

    return Frame(a) if changed else frame


def measure_brightness(frame: Frame) -> float:
    """Mean BT.601 luma, normalized to [0, 1]."""
    return float(_luma(frame.array.astype(np.float64)).mean()) / 255.0


def measure_contrast(frame: Frame) -> float:
    """Population RMS contrast of normalized luma, rescaled to [0, 1].

    The population standard deviation of values in [0, 1] tops out at 0.5
    (half the mass at each extreme), hence the rescale.
    """
    luma = _luma(frame.array.astype(np.float64)) / 255.0
    return float(luma.std()) / 0.5


def measure_colorfulness(frame: Frame) -> float:
    """Opponent-color colorfulness, capped at 150 and normalized.

    With rg = R-G and yb = (R+G)/2 - B per pixel, the raw statistic is
    sqrt(var(rg) + var(yb)) + 0.3 * sqrt(mean(rg)^2 + mean(yb)^2) using
    population variances.
    """
    a = frame.array.astype(np.float64)
    rg = a[:, :, 0] - a[:, :, 1]
    yb = 0.5 * (a[:, :, 0] + a[:, :, 1]) - a[:, :, 2]
    raw = math.sqrt(float(rg.var()) + float(yb.var())) + 0.3 * math.hypot(
        float(rg.mean()), float(yb.mean())
    )
    return min(raw / 150.0, 1.0)


def measure_sharpness(frame: Frame) -> float:
    """Mean Sobel gradient magnitude over interior luma pixels, in [0, 1].

    Raises FrameTooSmall when the frame has no interior (width or height
    below 3).
    """
    if frame.width < 3 or frame.height < 3:
        raise FrameTooSmall(
            f"sharpness needs at least 3x3, got {frame.width}x{frame.height}"
        )
    luma = _luma(frame.array.astype(np.float64))
    # Separable Sobel: (1,2,1) smoothing along one axis, difference along
    # the other.
    down = luma[:-2] + 2.0 * luma[1:-1] + luma[2:]
    gx = down[:, 2:] - down[:, :-2]
    across = luma[:, :-2] + 2.0 * luma[:, 1:-1] + luma[:, 2:]
    gy = across[2:] - across[:-2]
    magnitude = np.hypot(gx, gy)
    return min(float(magnitude.mean()) / _SOBEL_NORM, 1.0)


def measure_all(frame: Frame) -> MetricVector:
    """All four measurements; needs a frame with at least a 3x3 interior."""
    return MetricVector(
        brightness=measure_brightness(frame),
        contrast=measure_contrast(frame),
        colorfulness=measure_colorfulness(frame),
        sharpness=measure_sharpness(frame),
    )


def load_frame(path: str) -> Frame:
    """Load a PNG or PPM file as an RGB frame (alpha is dropped)."""
    with Image.open(path) as im:
        rgb = im.convert("RGB")
        return Frame(np.asarray(rgb, dtype=np.uint8))


def save_frame(frame: Frame, path: str) -> None:
    """Store a frame as PNG or raw PPM (P6), chosen by file extension."""
    Image.fromarray(frame.array, mode="RGB").save(path)
