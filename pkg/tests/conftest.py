import random
import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from webcurv import WebSpec, run_pipeline  # noqa: E402
from webcurv.selftest import D3_WEBS, constant_web, sheared_web  # noqa: E402
from webgen import random_web  # noqa: E402

BOL_SLOPES = ["-1", "1", "y/(x-1)", "y/(x+1)", "2*x*y/(x^2+y^2-1)"]
SEED = 20240601


def build_corpus() -> dict[str, WebSpec]:
    rng = random.Random(SEED)
    corpus = {"bol": WebSpec.from_slopes(BOL_SLOPES)}
    for d in range(3, 7):
        corpus[f"constant-d{d}"] = constant_web(d)
    corpus.update({f"d3 {k}": v for k, v in D3_WEBS.items()})
    corpus["d3 sheared"] = sheared_web(3)
    for k in range(3):
        corpus[f"d3 random-{k}"] = random_web(rng, 3)
    for k in range(3):
        corpus[f"d4 random-{k}"] = random_web(rng, 4)
    corpus["d5 random-0"] = random_web(rng, 5, density=0.34)
    return corpus


CORPUS = build_corpus()


@lru_cache(maxsize=None)
def pipeline(name: str):
    """Each corpus web runs through the symbolic pipeline once per session."""
    return run_pipeline(CORPUS[name])


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


@pytest.fixture(scope="session")
def get_pipeline():
    return pipeline


_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key in report.keywords:
        if key.startswith("criterion_"):
            _CRITERIA.setdefault(int(key.split("_")[1]), []).append(report)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.keywords[f"criterion_{mark.args[0]}"] = True


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        reports = _CRITERIA[n]
        ok = all(r.passed for r in reports)
        passed = sum(r.passed for r in reports)
        name = reports[0].nodeid.split("::")[-1].split("[")[0]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {name} ({passed}/{len(reports)} cases)")
