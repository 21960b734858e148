from pathlib import Path

import numpy as np
import pytest

from bfpm.io import CsvSpec, load_csv, normalize_min_max

DATA = Path(__file__).parent / "data"

# criterion id -> (passed, detail); filled by test_acceptance, printed at the end
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def iris():
    return normalize_min_max(load_csv(CsvSpec(DATA / "iris.csv", label_column="species")))


@pytest.fixture(scope="session")
def iris_raw():
    return load_csv(CsvSpec(DATA / "iris.csv", label_column="species"))


@pytest.fixture(scope="session")
def pima():
    return normalize_min_max(load_csv(CsvSpec(DATA / "pima.csv", label_column="class")))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
