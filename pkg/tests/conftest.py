import functools
import warnings

import numpy as np
import pytest

from staggered_nystrom.experiments import default_config, run
from staggered_nystrom.geometry import ellipse

TWO_ELLIPSES = (ellipse((0.0, 0.0), 1.0, 2.0), ellipse((4.0, 5.0), 2.0, 1.0))
Z0 = (0.1, 0.2)


@pytest.fixture
def curves():
    return TWO_ELLIPSES


@functools.lru_cache(maxsize=None)
def cached_run(experiment, formulation, eps, Ns):
    """Runs shared by several acceptance tests are computed once per session."""
    config = default_config(experiment, formulation=formulation, eps=eps, N_list=list(Ns))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return run(config)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE = {}


def record(criterion, ok, detail):
    """Store one acceptance outcome; several checks under one criterion are AND-ed."""
    prev_ok, prev_detail = ACCEPTANCE.get(criterion, (True, ""))
    detail = f"{prev_detail}; {detail}" if prev_detail else detail
    ACCEPTANCE[criterion] = (prev_ok and bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} | {detail}")
