import re
import sys

import numpy as np
import pytest

from irisfuse.harness.dataset import SynthSpec, synth_dataset


def naive_dft(x):
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    k = np.arange(n)
    return np.array([np.sum(x * np.exp(-2j * np.pi * m * k / n)) for m in range(n)])


def naive_idft(X):
    X = np.asarray(X, dtype=np.complex128)
    n = X.shape[0]
    k = np.arange(n)
    return np.array([np.sum(X * np.exp(2j * np.pi * m * k / n)) for m in range(n)]) / n


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def benchmark_dataset():
    return synth_dataset(SynthSpec(seed=1, subjects=20, samples_per_eye=5, noise_sigma=0.05, rotation_max=0))


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"::test_c(\d+)_(\w+(?:\[[^\]]*\])?)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance.setdefault(int(m.group(1)), []).append((m.group(2), report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    titles = getattr(sys.modules.get("test_acceptance"), "CRITERIA", {})
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        checks = _acceptance[n]
        failed = [name for name, outcome in checks if outcome != "passed"]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {n:2d} {titles.get(n, '')}: {status} ({len(checks) - len(failed)}/{len(checks)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
