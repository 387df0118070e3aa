import random
from fractions import Fraction

import pytest
from hypothesis import settings

from hig import _kernels_py

try:
    from hig import _ckernels
except ImportError:  # extension not built
    _ckernels = None

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

BACKENDS = [_kernels_py] + ([_ckernels] if _ckernels is not None else [])


@pytest.fixture(params=BACKENDS, ids=lambda m: m.BACKEND)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return random.Random(20240601)


def frac(s):
    return Fraction(s)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
