"""Pure-numpy fallback implementations of the hot kernels.

Mirrors the semantics of the compiled extension ``entrodim._kernels``:

* ``imex_steps`` -- batched IMEX-Euler time stepping of the spectral
  Galerkin system (implicit linear part, explicit power-law nonlinearity
  evaluated pseudo-spectrally through precomputed transform matrices).
* ``fps_radii`` -- farthest-point ordering of a point cloud with the
  insertion radius of every selected point.

Per-backend results are deterministic; across backends they agree to
rounding (summation orders differ).
"""

from __future__ import annotations

import numpy as np

STATUS_OK = 0
STATUS_BLOWUP = 1
STATUS_NAN = 2


def imex_steps(
    C: np.ndarray,        # (E, M) trajectory coefficients, updated in place
    S: np.ndarray,        # (K, M) synthesis matrix (nodes x modes)
    denom: np.ndarray,    # (M,) implicit factors 1 + dt*(lambda_j - lam)
    dt_w: float,          # dt * quadrature weight
    beta: float,
    pexp: float,          # growth exponent p of g(s) = beta |s|^(p-2) s
    nsteps: int,
    blow_sq: float,       # squared L2 blow-up threshold
    check_every: int,
    lamj: np.ndarray | None = None,   # (M,) eigenvalues, needed when recording
    w_out: np.ndarray | None = None,  # (rows, R) |.|_L2^2 records
    v_out: np.ndarray | None = None,  # (rows, R) |grad .|_L2^2 records
    pair_mode: bool = False,          # record differences of adjacent columns
    offset: int = 0,                  # first output row is offset+1
) -> tuple[int, int]:
    """Advance ``C`` by ``nsteps`` IMEX-Euler steps; return (status, steps_done)."""
    ST = S.T
    cubic = pexp == 4.0
    record = w_out is not None
    for n in range(1, nsteps + 1):
        v = C @ ST
        if cubic:
            g = beta * (v * v * v)
        else:
            g = beta * v * np.abs(v) ** (pexp - 2.0)
        C -= dt_w * (g @ S)
        C /= denom
        if record:
            if pair_mode:
                d = C[0::2] - C[1::2]
            else:
                d = C
            w_out[offset + n] = np.sum(d * d, axis=1)
            v_out[offset + n] = np.sum(lamj * d * d, axis=1)
        if n % check_every == 0 or n == nsteps:
            w = np.sum(C * C, axis=1)
            if not np.all(np.isfinite(w)):
                return STATUS_NAN, n
            if np.any(w > blow_sq):
                return STATUS_BLOWUP, n
    return STATUS_OK, nsteps


def fps_radii(
    points: np.ndarray,       # (n, dim)
    stop_radius: float = 0.0,
    start_index: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Greedy farthest-point ordering from a fixed start.

    Returns ``(selected, radii)`` where ``selected[k]`` is the index of the
    k-th chosen point and ``radii[k]`` its distance to the previously chosen
    set (``radii[0] = inf``).  Stops once every point lies within
    ``stop_radius`` of the selection; ties resolve to the lowest index.
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    sel = [int(start_index)]
    diff = pts - pts[start_index]
    dmin = np.sqrt(np.sum(diff * diff, axis=1))
    radii = [np.inf]
    while True:
        i = int(np.argmax(dmin))
        r = float(dmin[i])
        if r <= stop_radius:
            break
        sel.append(i)
        radii.append(r)
        diff = pts - pts[i]
        np.minimum(dmin, np.sqrt(np.sum(diff * diff, axis=1)), out=dmin)
        if len(sel) == n:
            break
    return np.asarray(sel, dtype=np.intp), np.asarray(radii, dtype=float)
