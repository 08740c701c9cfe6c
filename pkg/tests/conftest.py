import logging
import os

import pytest

from rs2v.utils.scenes import roadside_frame
from rs2v.virtual_lidar import SensorSpec

RS2V_ENV_VARS = ("RS2V_CONFIG", "RS2V_THREADS", "RS2V_OUTPUT_DIR", "LOCAL_DEV")


def pytest_configure(config):
    config.addinivalue_line("markers", "expect_errors: the test logs rs2v errors on purpose")
    config.addinivalue_line("markers", "timing: asserts a wall-clock bound; deselect with -m \"not timing\" on slow hosts")


@pytest.fixture(autouse=True)
def assert_no_unexpected_errors(request, caplog):
    """Fail any test that logs an rs2v ERROR it did not ask for."""
    yield
    if request.node.get_closest_marker("expect_errors"):
        return
    errors = [r for r in caplog.records if r.name.startswith("rs2v") and r.levelno >= logging.ERROR]
    assert not errors, f"Unexpected error log: {errors[0].name}: {errors[0].getMessage()}"


@pytest.fixture(scope="session", autouse=True)
def isolate_environment():
    """Keep a developer's RS2V_* / LOCAL_DEV settings out of the tests."""
    saved = {name: os.environ.pop(name) for name in RS2V_ENV_VARS if name in os.environ}
    yield
    for name in RS2V_ENV_VARS:
        os.environ.pop(name, None)
    os.environ.update(saved)


@pytest.fixture(scope="session")
def small_sensor():
    """Coarse sensor that keeps pipeline tests fast."""
    return SensorSpec(m=256, k=16)


@pytest.fixture(scope="session")
def write_frames():
    """Factory: write n_frames synthetic roadside frames into a directory."""

    def _write(directory, n_frames=5, n_vehicles=4, seed=0, **kwargs):
        kwargs.setdefault("ground_spacing", 0.5)
        kwargs.setdefault("surface_spacing", 0.2)
        frames = []
        for k in range(n_frames):
            frame = roadside_frame(n_vehicles=n_vehicles, seed=seed + k, **kwargs)
            frame.write(directory, f"{k:06d}")
            frames.append(frame)
        return frames

    return _write
