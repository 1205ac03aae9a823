"""Backend equivalence and stream-reproducibility tests.

The compiled core and the numpy fallback must produce bit-identical exit
times, exit points, step counts and walk-on-spheres exits; source integrals
for callable forcings may differ in the last ulp (summation order) only.
"""

import math

import numpy as np
import pytest

from exitbounds import _kernels, geometry
from exitbounds._kernels import fallback

compiled = _kernels.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled core not built")

CASES = [
    (geometry.Ball(1.0, d=2), [0.0, 0.0]),
    (geometry.Ball(1.0, d=3), [0.1, -0.2, 0.3]),
    (geometry.Annulus(1.0, 2.0, d=2), [1.003, 0.0]),
    (geometry.Annulus(1.0, 2.0, d=3), [0.0, 1.5, 0.0]),
    (geometry.BallMinusCone(math.pi / 2.0, 1.0, d=2), [-0.135, 0.0]),
    (geometry.BallMinusCone(0.0, 1.0, d=2), [-0.5, 0.2]),
    (geometry.BallMinusCone(math.pi / 3.0, 1.0, d=3), [-0.3, 0.1, 0.2]),
    (geometry.CylinderMinusWedge(math.pi / 2.0, 1.0, 1.0), [-0.2, 0.1, 0.15]),
]


def _exit_args(dom, x0, n=300, seed=99, sub=5):
    kind, params = dom.kernel_encoding()
    shell = 1e-4 * dom.diameter()
    return (kind, params, dom.d, np.asarray(x0, dtype=float), n, seed, sub, 0,
            1e-3 * dom.diameter() ** 2, 0.1, True, shell, 1_000_000)


@needs_compiled
class TestBackendEquivalence:
    @pytest.mark.parametrize("dom,x0", CASES, ids=lambda v: str(v)[:24])
    def test_exit_paths_bit_identical(self, dom, x0):
        args = _exit_args(dom, x0)
        a = compiled.exit_paths(*args)
        b = fallback.exit_paths(*args)
        for u, v in zip(a[:5], b[:5]):
            assert np.array_equal(u, v)

    @pytest.mark.parametrize("dom,x0", CASES, ids=lambda v: str(v)[:24])
    def test_wos_bit_identical(self, dom, x0):
        kind, params = dom.kernel_encoding()
        args = (kind, params, dom.d, np.asarray(x0, dtype=float), 300, 7, 3, 0,
                1e-6 * dom.diameter(), 100_000)
        a = compiled.wos_paths(*args)
        b = fallback.wos_paths(*args)
        for u, v in zip(a, b):
            assert np.array_equal(u, v)

    def test_constant_source_integral_is_exact(self):
        dom, x0 = geometry.Ball(1.0, d=2), [0.0, 0.0]
        args = _exit_args(dom, x0, n=200)
        for backend in (compiled, fallback):
            taus, _, _, _, _, integ = backend.exit_paths(*args, source=2.5)
            assert np.array_equal(integ, 2.5 * taus)

    def test_callable_source_integrals_match_to_rounding(self):
        dom, x0 = geometry.Ball(1.0, d=2), [0.2, 0.1]
        f = lambda pts: 1.0 + pts[:, 0] ** 2 + 0.3 * pts[:, 1]
        args = _exit_args(dom, x0, n=100)
        ta, _, _, _, _, ia = compiled.exit_paths(*args, source=f)
        tb, _, _, _, _, ib = fallback.exit_paths(*args, source=f)
        assert np.array_equal(ta, tb)
        np.testing.assert_allclose(ia, ib, rtol=1e-12)


class TestStreams:
    def test_path_index_partitioning(self):
        # splitting a batch across start indices reproduces the same paths
        dom, x0 = geometry.Annulus(1.0, 2.0, d=2), [1.3, 0.0]
        kind, params = dom.kernel_encoding()
        base = (kind, params, 2, np.asarray(x0), 100, 5, 1, 0, 4e-3, 0.1, True, 4e-4, 1_000_000)
        whole = fallback.exit_paths(*base)
        first = fallback.exit_paths(kind, params, 2, np.asarray(x0), 60, 5, 1, 0, 4e-3, 0.1, True, 4e-4, 1_000_000)
        rest = fallback.exit_paths(kind, params, 2, np.asarray(x0), 40, 5, 1, 60, 4e-3, 0.1, True, 4e-4, 1_000_000)
        assert np.array_equal(whole[0], np.concatenate([first[0], rest[0]]))
        assert np.array_equal(whole[1], np.concatenate([first[1], rest[1]]))

    def test_fallback_chunk_size_independence(self, monkeypatch):
        dom, x0 = geometry.Ball(1.0, d=2), [0.3, 0.0]
        args = _exit_args(dom, x0, n=500)
        ref = fallback.exit_paths(*args)
        monkeypatch.setattr(fallback, "_CHUNK", 37)
        alt = fallback.exit_paths(*args)
        for u, v in zip(ref[:5], alt[:5]):
            assert np.array_equal(u, v)

    def test_seed_changes_stream(self):
        args1 = _exit_args(*CASES[0], n=50, seed=1)
        args2 = _exit_args(*CASES[0], n=50, seed=2)
        a = fallback.exit_paths(*args1)
        b = fallback.exit_paths(*args2)
        assert not np.array_equal(a[0], b[0])

    def test_substream_changes_stream(self):
        args1 = _exit_args(*CASES[0], n=50, sub=1)
        args2 = _exit_args(*CASES[0], n=50, sub=2)
        a = fallback.exit_paths(*args1)
        b = fallback.exit_paths(*args2)
        assert not np.array_equal(a[0], b[0])
