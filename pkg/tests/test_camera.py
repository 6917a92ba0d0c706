import io

import numpy as np
import pytest
from PIL import Image

from camadapt.camera import HttpCamera, HttpCameraConfig, SimulatedCamera
from camadapt.errors import DecodeError, OutOfRange, TransportError
from camadapt.harness import PRESETS
from camadapt.imaging import ParamVector, measure_brightness
from camadapt.scene import load_manifest

from conftest import random_frame
from httpmock import Script, fixed, serve


@pytest.fixture
def manifest(mock_scene_path):
    return load_manifest(mock_scene_path)


class TestSimulatedCamera:
    def test_read_after_write(self, manifest):
        cam = SimulatedCamera(manifest)
        cam.set_param("brightness", 70)
        assert cam.get_params().brightness == 70

    def test_out_of_range(self, manifest):
        cam = SimulatedCamera(manifest)
        with pytest.raises(OutOfRange):
            cam.set_param("contrast", 105)
        with pytest.raises(OutOfRange):
            cam.set_param("contrast", -5)

    def test_unknown_parameter(self, manifest):
        cam = SimulatedCamera(manifest)
        with pytest.raises(ValueError):
            cam.set_param("zoom", 50)

    def test_initial_preset(self, manifest):
        cam = SimulatedCamera(manifest, PRESETS["S1"])
        assert cam.get_params() == PRESETS["S1"]

    def test_set_changes_exactly_one_component(self, manifest):
        cam = SimulatedCamera(manifest, PRESETS["S1"])
        before = cam.get_params().as_tuple()
        cam.set_param("sharpness", 30)
        after = cam.get_params().as_tuple()
        assert after[3] == 30
        assert after[:3] == before[:3]

    def test_latency_advances_clock(self, manifest):
        cam = SimulatedCamera(manifest)
        assert cam.clock_ms == 0
        cam.set_param("brightness", 60)
        assert cam.clock_ms == 200
        cam.set_param("brightness", 70)
        assert cam.clock_ms == 400
        assert cam.clock == pytest.approx(0.4)

    def test_capture_identity_params_day(self, manifest):
        cam = SimulatedCamera(manifest, ParamVector(50, 50, 50, 50))
        assert cam.capture(0.0) == manifest.base_frame

    def test_capture_black_at_zero_brightness(self, manifest):
        cam = SimulatedCamera(manifest, ParamVector(0, 50, 50, 50))
        frame = cam.capture(0.0)
        assert not frame.array.any()

    def test_capture_is_pure(self, manifest):
        cam = SimulatedCamera(manifest, PRESETS["S2"])
        assert cam.capture(3.0) == cam.capture(3.0)

    def test_capture_never_mutates_manifest(self, manifest):
        cam = SimulatedCamera(manifest)
        before = manifest.base_frame.array.copy()
        cam.capture(1.0)
        assert np.array_equal(manifest.base_frame.array, before)

    def test_brightness_param_monotone(self, manifest):
        previous = -1.0
        for value in range(0, 101, 10):
            cam = SimulatedCamera(manifest, ParamVector(value, 50, 50, 50))
            measured = measure_brightness(cam.capture(0.0))
            assert measured >= previous - 1e-12
            previous = measured

    def test_night_capture_darker_than_day(self, manifest):
        from camadapt.scene import DAY, NIGHT, ConditionSchedule, SceneManifest

        cycled = SceneManifest(
            base_image=manifest.base_image,
            base_frame=manifest.base_frame,
            targets=manifest.targets,
            schedule=ConditionSchedule(keyframes=((0.0, DAY), (60.0, NIGHT))),
            seed=manifest.seed,
        )
        cam = SimulatedCamera(cycled)
        day = measure_brightness(cam.capture(0.0))
        night = measure_brightness(cam.capture(60.0))
        assert night < day


def http_config(base, timeout_ms=2000):
    return HttpCameraConfig(
        set_url_templates={
            "brightness": base + "/set?Brightness={value}",
            "contrast": base + "/set?Contrast={value}",
            "color_saturation": base + "/set?ColorLevel={value}",
            "sharpness": base + "/set?Sharpness={value}",
        },
        get_url=base + "/get",
        capture_url=base + "/capture",
        timeout_ms=timeout_ms,
    )


PARAMS_BODY = b"root.Image.Brightness=70\nroot.Image.Contrast=45\nroot.Image.ColorLevel=50\nroot.Image.Sharpness=35\n"


def png_bytes(frame):
    buf = io.BytesIO()
    Image.fromarray(frame.array, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


class TestHttpCameraConfig:
    def test_requires_value_placeholder(self):
        with pytest.raises(ValueError):
            HttpCameraConfig(
                set_url_templates={
                    "brightness": "http://c/set?b=1",
                    "contrast": "http://c/set?c={value}",
                    "color_saturation": "http://c/set?col={value}",
                    "sharpness": "http://c/set?s={value}",
                },
                get_url="http://c/get",
                capture_url="http://c/capture",
            )

    def test_requires_positive_timeout(self):
        with pytest.raises(ValueError):
            HttpCameraConfig(
                set_url_templates={
                    name: f"http://c/{name}={{value}}"
                    for name in ("brightness", "contrast", "color_saturation", "sharpness")
                },
                get_url="http://c/get",
                capture_url="http://c/capture",
                timeout_ms=0,
            )


class TestHttpCamera:
    def test_set_param_issues_templated_get(self):
        script = Script({"/set": fixed(200, "text/plain", b"OK")})
        with serve(script) as base:
            cam = HttpCamera(http_config(base))
            cam.set_param("brightness", 70)
        assert script.requests == [("GET", "/set?Brightness=70", b"")]

    def test_set_param_500_raises_transport(self):
        script = Script({"/set": fixed(500, "text/plain", b"boom")})
        with serve(script) as base:
            cam = HttpCamera(http_config(base))
            with pytest.raises(TransportError):
                cam.set_param("brightness", 70)

    def test_set_param_validates_before_sending(self):
        script = Script({"/set": fixed(200, "text/plain", b"OK")})
        with serve(script) as base:
            cam = HttpCamera(http_config(base))
            with pytest.raises(OutOfRange):
                cam.set_param("brightness", 101)
        assert script.requests == []

    def test_get_params_parses_fixture_body(self):
        script = Script({"/get": fixed(200, "text/plain", PARAMS_BODY)})
        with serve(script) as base:
            cam = HttpCamera(http_config(base))
            assert cam.get_params() == ParamVector(70, 45, 50, 35)

    def test_get_params_unparseable_body(self):
        script = Script({"/get": fixed(200, "text/plain", b"garbage")})
        with serve(script) as base:
            cam = HttpCamera(http_config(base))
            with pytest.raises(TransportError):
                cam.get_params()

    def test_capture_decodes_png(self, rng):
        frame = random_frame(rng, 8, 6)
        script = Script({"/capture": fixed(200, "image/png", png_bytes(frame))})
        with serve(script) as base:
            cam = HttpCamera(http_config(base))
            assert cam.capture(0.0) == frame

    def test_capture_decodes_jpeg(self, rng):
        frame = random_frame(rng, 8, 8)
        buf = io.BytesIO()
        Image.fromarray(frame.array, mode="RGB").save(buf, format="JPEG")
        script = Script({"/capture": fixed(200, "image/jpeg", buf.getvalue())})
        with serve(script) as base:
            cam = HttpCamera(http_config(base))
            captured = cam.capture(0.0)
        assert (captured.width, captured.height) == (8, 8)

    def test_capture_garbage_body_raises_decode_error(self):
        script = Script({"/capture": fixed(200, "image/png", b"not an image")})
        with serve(script) as base:
            cam = HttpCamera(http_config(base))
            with pytest.raises(DecodeError):
                cam.capture(0.0)

    def test_timeout_raises_transport(self):
        script = Script({"/get": "hang"})
        with serve(script) as base:
            cam = HttpCamera(http_config(base, timeout_ms=200))
            with pytest.raises(TransportError):
                cam.get_params()
