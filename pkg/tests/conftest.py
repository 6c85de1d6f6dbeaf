import pytest
from hypothesis import settings

from tracelens import fixtures

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def sample_trace():
    return fixtures.sample_trace()


@pytest.fixture(scope="session")
def sample_model():
    return fixtures.sample_model()


@pytest.fixture()
def sample_files(tmp_path):
    """The bundled trace and model written to disk for CLI tests."""
    trace_path = tmp_path / "trace.tsv"
    model_path = tmp_path / "model.json"
    trace_path.write_text(fixtures.sample_trace_text(), encoding="utf-8")
    model_path.write_text(fixtures.sample_model_text(), encoding="utf-8")
    return trace_path, model_path
