import os
import subprocess
import sys

import numpy as np
import pytest

from qonsager import _pykernels, kernels

compiled = kernels.compiled_backend
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@needs_compiled
def test_backends_agree_on_qpoch(rng):
    for _ in range(50):
        a = complex(*rng.normal(size=2))
        q = 0.3 + 0.6 * rng.random()
        n = int(rng.integers(0, 12))
        assert rel(compiled.qpoch(a, q, n), _pykernels.qpoch(a, q, n)) < 1e-13


@needs_compiled
def test_backends_agree_on_sums(rng):
    for _ in range(30):
        n = int(rng.integers(0, 8))
        q = complex(0.6 + 0.3 * rng.random(), 0.05 * rng.random())
        up = (q**-n,) + tuple(complex(*rng.normal(scale=0.5, size=2)) for _ in range(3))
        lo = tuple(complex(*rng.normal(scale=0.5, size=2)) for _ in range(3))
        z = complex(*rng.normal(size=2))
        a, b = compiled.qsum_divfree(up, lo, q, z, n), _pykernels.qsum_divfree(up, lo, q, z, n)
        assert abs(a - b) < 1e-11 * max(1.0, abs(b))
        up_c = (-n, 0.3, 1.7)
        lo_c = (2.5, -4.5)
        assert rel(compiled.sum_divfree(up_c, lo_c, 1.0, n), _pykernels.sum_divfree(up_c, lo_c, 1.0, n)) < 1e-13


@needs_compiled
def test_backends_agree_on_askey_wilson(rng):
    q = 0.8
    a, b, c, d = 0.5, 0.3 + 0.1j, -0.4, 0.6j
    zs = np.exp(1j * rng.uniform(0, np.pi, 20))
    for n in range(6):
        ref = np.array([_pykernels.aw_poly(n, z, a, b, c, d, q) for z in zs])
        got_scalar = np.array([compiled.aw_poly(n, z, a, b, c, d, q) for z in zs])
        got_array = np.asarray(compiled.aw_poly_array(n, zs, a, b, c, d, q))
        scale = np.abs(ref).max()
        assert np.abs(got_scalar - ref).max() < 1e-11 * scale
        assert np.abs(got_array - ref).max() < 1e-11 * scale


@needs_compiled
def test_backends_agree_on_infinite_products():
    a = np.array([0.1, -0.4 + 0.3j, 0.9j])
    got = np.asarray(compiled.qpoch_inf_array(a, 0.75, 1e-18, 20000))
    ref = np.asarray(_pykernels.qpoch_inf_array(a, 0.75, 1e-18, 20000))
    assert np.abs(got - ref).max() < 1e-13


def test_environment_forces_python_backend():
    env = dict(os.environ, QONSAGER_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from qonsager.kernels import BACKEND; print(BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_active_backend_reports_name():
    assert kernels.BACKEND in ("cython", "python")
    if compiled is not None and os.environ.get("QONSAGER_PURE_PYTHON") is None:
        assert kernels.BACKEND == "cython"
