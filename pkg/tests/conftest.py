import json
import os

import numpy as np
import pytest

from camadapt.imaging import Frame

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
MOCK_SCENE_MANIFEST = os.path.join(DATA_DIR, "mock_scene", "manifest.json")


def make_frame(rows):
    """Frame from nested [[(r,g,b), ...], ...] lists."""
    return Frame(np.array(rows, dtype=np.uint8))


def random_frame(rng, width, height):
    return Frame(rng.integers(0, 256, size=(height, width, 3)).astype(np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(20240614)


@pytest.fixture
def mock_scene_path():
    return MOCK_SCENE_MANIFEST


def write_manifest(tmp_path, doc, name="manifest.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)
