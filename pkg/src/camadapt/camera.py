"""Camera actuation and capture backends.

Two interchangeable backends expose get_params / set_param / capture:

* SimulatedCamera renders frames from a scene manifest through the
  enhancement pipeline. It owns a logical clock in integer milliseconds;
  every successful set_param advances it by the actuation latency (200 ms by
  default), so experiments account for tuning cost without wall-clock
  sleeps. Captures are pure functions of (manifest, params, t).

* HttpCamera drives a network camera through templated GET requests, in the
  style of vendor query APIs: one URL template per parameter with a {value}
  placeholder, a parameter-readback URL whose body is `name=value` lines,
  and a snapshot URL returning a PNG or JPEG body. All URLs come from
  config; transport failures surface as TransportError so a tuning loop can
  skip the step and retry.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Mapping, Protocol

import numpy as np
import requests
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, OutOfRange, TransportError
from .imaging import PARAM_FIELDS, Frame, ParamVector, enhance, params_to_factors
from .scene import SceneManifest, apply_condition, condition_at

DEFAULT_PARAMS = ParamVector(50, 50, 50, 50)
DEFAULT_ACTUATION_LATENCY_MS = 200

# Accepted spellings for parameter names in readback bodies (the last
# dot-separated segment of the key, lowercased).
_PARAM_ALIASES = {
    "brightness": "brightness",
    "contrast": "contrast",
    "color": "color_saturation",
    "colorlevel": "color_saturation",
    "colorsaturation": "color_saturation",
    "color_saturation": "color_saturation",
    "saturation": "color_saturation",
    "sharpness": "sharpness",
}


class CameraBackend(Protocol):
    """What a tuning loop needs from a camera."""

    def get_params(self) -> ParamVector: ...

    def set_param(self, name: str, value: int) -> None: ...

    def capture(self, t: float) -> Frame: ...


def _check_param(name: str, value: int) -> None:
    if name not in PARAM_FIELDS:
        raise ValueError(f"unknown parameter {name!r}; expected one of {PARAM_FIELDS}")
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= 100:
        raise OutOfRange(f"{name}={value!r} is not an integer in [0, 100]")


class SimulatedCamera:
    """A virtual camera over a scene manifest.

    The clock is held in integer milliseconds so latency accounting stays
    exact; `clock` exposes it in seconds. The harness owns time: it reads
    the clock to time captures and advances it frame by frame.
    """

    def __init__(
        self,
        manifest: SceneManifest,
        params: ParamVector = DEFAULT_PARAMS,
        actuation_latency_ms: int = DEFAULT_ACTUATION_LATENCY_MS,
    ) -> None:
        if actuation_latency_ms < 0:
            raise ValueError("actuation latency must be >= 0")
        self.manifest = manifest
        self._params = params
        self.actuation_latency_ms = actuation_latency_ms
        self.clock_ms = 0

    @property
    def clock(self) -> float:
        return self.clock_ms / 1000.0

    def get_params(self) -> ParamVector:
        return self._params

    def set_param(self, name: str, value: int) -> None:
        _check_param(name, value)
        self._params = self._params.with_value(name, value)
        self.clock_ms += self.actuation_latency_ms

    def force_params(self, params: ParamVector) -> None:
        """Teleport the parameter vector without latency.

        Scene-rig control for training harnesses that re-randomize the
        starting point between episodes; never used by the tuning loop.
        """
        self._params = params

    def capture(self, t: float) -> Frame:
        cond = condition_at(self.manifest.schedule, t)
        latent = apply_condition(self.manifest.base_frame, cond, t, self.manifest.seed)
        return enhance(latent, params_to_factors(self._params))


@dataclass(frozen=True)
class HttpCameraConfig:
    """Endpoints for a network camera.

    set_url_templates maps each parameter name to a GET URL with exactly one
    {value} placeholder.
    """

    set_url_templates: Mapping[str, str]
    get_url: str
    capture_url: str
    timeout_ms: int = 5000

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be > 0")
        for name in PARAM_FIELDS:
            if name not in self.set_url_templates:
                raise ValueError(f"missing set URL template for {name!r}")
            template = self.set_url_templates[name]
            if template.count("{value}") != 1:
                raise ValueError(
                    f"set URL template for {name!r} must contain exactly one {{value}}"
                )


def _parse_params_body(text: str) -> ParamVector:
    values: dict[str, int] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or "=" not in line:
            continue
        key, _, raw = line.partition("=")
        name = _PARAM_ALIASES.get(key.strip().rsplit(".", 1)[-1].lower())
        if name is None:
            continue
        try:
            values[name] = int(raw.strip())
        except ValueError:
            continue
    missing = [name for name in PARAM_FIELDS if name not in values]
    if missing:
        raise TransportError(f"parameter readback missing {missing}")
    return ParamVector(**values)


class HttpCamera:
    """A network camera actuated over templated GET requests."""

    def __init__(self, config: HttpCameraConfig) -> None:
        self.config = config

    def _get(self, url: str) -> requests.Response:
        try:
            resp = requests.get(url, timeout=self.config.timeout_ms / 1000.0)
        except requests.RequestException as exc:
            raise TransportError(f"GET {url} failed: {exc}") from exc
        if resp.status_code != 200:
            raise TransportError(f"GET {url} returned {resp.status_code}")
        return resp

    def get_params(self) -> ParamVector:
        resp = self._get(self.config.get_url)
        return _parse_params_body(resp.text)

    def set_param(self, name: str, value: int) -> None:
        _check_param(name, value)
        self._get(self.config.set_url_templates[name].format(value=value))

    def capture(self, t: float) -> Frame:
        # t is ignored: a live camera is always "now".
        resp = self._get(self.config.capture_url)
        try:
            with Image.open(io.BytesIO(resp.content)) as im:
                rgb = im.convert("RGB")
                return Frame(np.asarray(rgb, dtype=np.uint8))
        except (UnidentifiedImageError, OSError, ValueError) as exc:
            raise DecodeError(f"capture body is not a decodable image: {exc}") from exc
