from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hig import _kernels_py as ref
from conftest import BACKENDS

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(fracs, max_size=7).map(ref.trim)
nonzero = polys.filter(bool)


def test_both_backends_present():
    names = {m.BACKEND for m in BACKENDS}
    assert "python" in names


def test_selected_backend_matches_env():
    import hig.kernels as K
    assert K.BACKEND in ("python", "cython")


def test_trim_and_low_order(backend):
    assert backend.trim((Fraction(1), Fraction(0), Fraction(0))) == (Fraction(1),)
    assert backend.trim(()) == ()
    assert backend.low_order((Fraction(0), Fraction(0), Fraction(3))) == 2


def test_divmod_by_zero(backend):
    with pytest.raises(ZeroDivisionError):
        backend.divmod_((Fraction(1),), ())


def test_gcd_examples(backend):
    # (x + 1)(x - 2) and (x + 1)(x + 3)
    a = ref.mul((Fraction(1), Fraction(1)), (Fraction(-2), Fraction(1)))
    b = ref.mul((Fraction(1), Fraction(1)), (Fraction(3), Fraction(1)))
    assert backend.gcd(a, b) == (Fraction(1), Fraction(1))
    assert backend.gcd((), ()) == ()
    assert backend.gcd((Fraction(2), Fraction(4)), ()) == (Fraction(1, 2), Fraction(1))


@given(polys, polys)
def test_mul_agrees_with_reference(a, b):
    for m in BACKENDS:
        assert m.mul(a, b) == ref.mul(a, b)
        assert m.add(a, b) == ref.add(a, b)
        assert m.sub(a, b) == ref.sub(a, b)


@given(polys, nonzero)
def test_division_identity(a, b):
    for m in BACKENDS:
        q, r = m.divmod_(a, b)
        assert len(r) < len(b)
        assert ref.add(ref.mul(q, b), r) == a
        assert (q, r) == ref.divmod_(a, b)


@given(polys, polys, nonzero)
def test_gcd_divides_and_is_maximal(a, b, c):
    x, y = ref.mul(a, c), ref.mul(b, c)
    for m in BACKENDS:
        g = m.gcd(x, y)
        assert g == ref.gcd(x, y)
        if not g:
            assert not x and not y
            continue
        assert g[-1] == 1
        assert m.divmod_(x, g)[1] == ()
        assert m.divmod_(y, g)[1] == ()
        # c divides both, hence divides the gcd
        assert m.divmod_(g, c)[1] == ()


@given(polys)
def test_outputs_are_fractions(a):
    for m in BACKENDS:
        out = m.mul(a, a) + m.monic(a) + m.sub(a, a + (Fraction(1),))
        assert all(type(c) is Fraction for c in out)


def test_env_var_forces_fallback():
    import os
    import subprocess
    import sys
    code = "import hig.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, HIG_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "python"
