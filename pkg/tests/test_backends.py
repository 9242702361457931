"""Equivalence of the compiled kernel core and its pure-numpy fallback.

Cross-backend results agree to rounding (BLAS and pairwise summation order
differ); within one backend everything is bit-reproducible.
"""

import time

import numpy as np
import pytest

from entrodim import _kernels_py
from entrodim import backend

compiled = pytest.importorskip("entrodim._kernels")


def _setup(E=8, M=24, seed=0):
    rng = np.random.default_rng(seed)
    K = 3 * M - 1
    j = np.arange(1, M + 1, dtype=float)
    lamj = j**2
    x = np.arange(1, K + 1) * np.pi / (K + 1)
    S = np.sqrt(2.0 / np.pi) * np.sin(np.outer(x, j))
    C = 0.3 * rng.standard_normal((E, M))
    denom = 1.0 + 2e-4 * (lamj - 10.0)
    return C, S, denom, lamj


class TestImexEquivalence:
    def test_states_agree(self):
        C1, S, denom, lamj = _setup()
        C2 = C1.copy()
        args = (S, denom, 2e-4 * np.pi / (3 * 24), 1.0, 4.0, 500, 1e12, 1)
        s1 = compiled.imex_steps(C1, *args)
        s2 = _kernels_py.imex_steps(C2, *args)
        assert s1 == s2 == (0, 500)
        assert np.max(np.abs(C1 - C2)) < 1e-12

    def test_recording_agrees(self):
        C1, S, denom, lamj = _setup(E=4)
        C2 = C1.copy()
        n = 200
        w1 = np.zeros((n + 1, 2)); v1 = np.zeros((n + 1, 2))
        w2 = np.zeros((n + 1, 2)); v2 = np.zeros((n + 1, 2))
        args = dict(dt_w=2e-4 * np.pi / 71, beta=1.0, pexp=4.0, nsteps=n,
                    blow_sq=1e12, check_every=1, lamj=lamj, pair_mode=True)
        compiled.imex_steps(C1, S, denom, args["dt_w"], 1.0, 4.0, n, 1e12, 1,
                            lamj=lamj, w_out=w1, v_out=v1, pair_mode=True)
        _kernels_py.imex_steps(C2, S, denom, args["dt_w"], 1.0, 4.0, n, 1e12, 1,
                               lamj=lamj, w_out=w2, v_out=v2, pair_mode=True)
        assert np.max(np.abs(w1[1:] - w2[1:])) < 1e-12
        assert np.max(np.abs(v1[1:] - v2[1:])) < 1e-10

    def test_noninteger_power(self):
        C1, S, denom, lamj = _setup(E=2)
        C2 = C1.copy()
        args = (S, denom, 1e-4, 0.7, 3.5, 100, 1e12, 1)
        compiled.imex_steps(C1, *args)
        _kernels_py.imex_steps(C2, *args)
        assert np.max(np.abs(C1 - C2)) < 1e-13

    def test_blowup_status_agrees(self):
        C1, S, denom, lamj = _setup(E=2)
        C1 *= 40.0
        C2 = C1.copy()
        args = (S, denom, 0.5, 1.0, 4.0, 50, 1e4, 1)
        s1 = compiled.imex_steps(C1, *args)
        s2 = _kernels_py.imex_steps(C2, *args)
        assert s1 == s2
        assert s1[0] == backend.STATUS_BLOWUP


class TestFpsEquivalence:
    def test_ordering_and_radii(self):
        rng = np.random.default_rng(42)
        pts = rng.standard_normal((500, 6))
        s1, r1 = compiled.fps_radii(pts, 0.0, 0)
        s2, r2 = _kernels_py.fps_radii(pts, 0.0, 0)
        assert np.array_equal(s1, s2)
        assert np.allclose(r1[1:], r2[1:], rtol=1e-12)

    def test_early_stop(self):
        rng = np.random.default_rng(1)
        pts = rng.uniform(-1, 1, (300, 3))
        s1, r1 = compiled.fps_radii(pts, 0.4, 0)
        s2, r2 = _kernels_py.fps_radii(pts, 0.4, 0)
        assert np.array_equal(s1, s2)
        assert np.all(r1[1:] > 0.4)


def test_backend_selected():
    assert backend.BACKEND in ("compiled", "python")


def test_quick_speed_report():
    """Small timing probe; the full comparison lives in benchmarks/kernel_bench.py."""
    C, S, denom, lamj = _setup(E=16, M=64)
    args = (S, denom, 2e-5, 1.0, 4.0, 2000, 1e12, 1)
    out = {}
    for name, mod in (("compiled", compiled), ("python", _kernels_py)):
        Cw = C.copy()
        t0 = time.perf_counter()
        mod.imex_steps(Cw, *args)
        out[name] = time.perf_counter() - t0
    print(
        f"\nimex 2000 steps E=16 M=64: compiled {out['compiled']*1e3:.1f} ms, "
        f"python {out['python']*1e3:.1f} ms "
        f"(x{out['python']/out['compiled']:.2f})"
    )
    assert out["compiled"] > 0 and out["python"] > 0


def test_pure_python_fallback_end_to_end(tmp_path):
    """The package must work with the extension disabled (fallback selection)."""
    import os
    import subprocess
    import sys

    script = (
        "import entrodim, numpy as np\n"
        "from entrodim import backend\n"
        "assert backend.BACKEND == 'python', backend.BACKEND\n"
        "from entrodim.galerkin import GalerkinState, Nonlinearity, SolverConfig, evolve\n"
        "cfg = SolverConfig(modes=16)\n"
        "nl = Nonlinearity.power_law(1.0, 4.0)\n"
        "c0 = np.zeros(16); c0[0] = 0.2\n"
        "out = evolve(GalerkinState(coeffs=c0), nl, 10.0, 0.5, cfg)\n"
        "assert np.isfinite(out.coeffs).all() and out.coeffs[0] > 0.2\n"
        "print('fallback-ok')\n"
    )
    env = dict(os.environ, ENTRODIM_FORCE_PYTHON="1")
    proc = subprocess.run(
        [sys.executable, "-c", script], capture_output=True, text=True, env=env
    )
    assert proc.returncode == 0, proc.stderr
    assert "fallback-ok" in proc.stdout
