import numpy as np
import pytest

from learnerclust import fuzzyclust as fc
from learnerclust import synth


@pytest.fixture(scope="session")
def default_corpus():
    """Default synthetic term, generated once per session."""
    return synth.generate(seed=7)


@pytest.fixture(params=fc.available_backends())
def backend(request):
    previous = fc.set_backend(request.param)
    yield request.param
    fc.set_backend(previous)


def blobs(seed=0, per_blob=20, std=0.1):
    """Three planted 2-D Gaussian blobs with their true means."""
    means = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]])
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(mu, std, size=(per_blob, 2)) for mu in means])
    labels = np.repeat(np.arange(3), per_blob)
    return X, labels, means


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion check")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    passed = call.excinfo is None
    _, ok, details = _ACCEPTANCE.get(number, (title, True, []))
    details += [str(v) for k, v in item.user_properties if k == "detail"]
    _ACCEPTANCE[number] = (title, ok and passed, details)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, details = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}  {'PASS' if passed else 'FAIL'}  {title}")
        for line in details:
            terminalreporter.write_line(f"              {line}")
