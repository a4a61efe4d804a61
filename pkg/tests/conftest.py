import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Isolated output directory, also exported as LAYEB_OUTPUT_DIR"""
    directory = tmp_path / "results"
    monkeypatch.setenv("LAYEB_OUTPUT_DIR", str(directory))
    return directory


@pytest.fixture
def config_file(tmp_path):
    def write(text):
        path = tmp_path / "experiment.env"
        path.write_text(text)
        return str(path)
    return write
