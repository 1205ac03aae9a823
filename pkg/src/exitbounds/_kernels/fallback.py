"""Pure-numpy simulation backend, vectorized across paths.

Implements the identical per-path algorithms as the compiled core: the same
per-path Philox streams, the same draw order (d normals per step, coordinate
order), and the same operation ordering inside the distance formulas, so
exit times, exit points and step counts are bit-identical to the compiled
backend.  Only the midpoint source integrals may differ in the last ulp
(different but mathematically equivalent summation order).
"""

from __future__ import annotations

import numpy as np

from .. import geometry
from ._streams import StreamPool

BACKEND_NAME = "numpy-fallback"

_CHUNK = 4096
_BLOCK_SCHEDULE = (32, 64, 128, 256)  # refill sizes; last one repeats


def _domain_from_encoding(kind: int, params: np.ndarray, d: int):
    # the kernel encoding carries cos/sin of the cone angle; install those
    # exact doubles rather than recomputing them, so absorb decisions match
    # the compiled core bit for bit
    if kind == geometry.KIND_BALL:
        return geometry.Ball(radius=params[0], d=d)
    if kind == geometry.KIND_ANNULUS:
        return geometry.Annulus(r=params[0], R=params[1], d=d)
    if kind == geometry.KIND_BALL_MINUS_CONE:
        dom = geometry.BallMinusCone(omega=0.0, r=params[0], d=d)
        object.__setattr__(dom, "cos_omega", float(params[1]))
        object.__setattr__(dom, "sin_omega", float(params[2]))
        return dom
    if kind == geometry.KIND_CYLINDER_MINUS_WEDGE:
        dom = geometry.CylinderMinusWedge(omega=0.0, r=params[0], l=2.0 * params[3])
        object.__setattr__(dom, "cos_omega", float(params[1]))
        object.__setattr__(dom, "sin_omega", float(params[2]))
        return dom
    raise ValueError(f"unknown domain kind code {kind}")


def _block_size(refill_round: int) -> int:
    if refill_round < len(_BLOCK_SCHEDULE):
        return _BLOCK_SCHEDULE[refill_round]
    return _BLOCK_SCHEDULE[-1]


class _NormalFeed:
    """Per-path blocks of standard normals, consumed one step at a time.

    All paths of a chunk share the refill schedule, so a single block cursor
    serves the whole chunk; dead paths simply drop out of the alive index.
    """

    def __init__(self, gens, d: int):
        self._gens = gens
        self._d = d
        self._round = 0
        self._block = np.empty((len(gens), 0, d))
        self._pos = 0

    def step_normals(self, alive: np.ndarray) -> np.ndarray:
        if self._pos >= self._block.shape[1]:
            size = _block_size(self._round)
            self._round += 1
            blk = np.empty((len(self._gens), size, self._d))
            for i in alive:
                blk[i] = self._gens[i].standard_normal((size, self._d))
            self._block = blk
            self._pos = 0
        z = self._block[alive, self._pos, :]
        self._pos += 1
        return z


def exit_paths(
    kind,
    params,
    d,
    x0,
    n,
    seed,
    substream,
    start_index,
    dt_base,
    kappa,
    adaptive,
    shell_eps,
    max_steps,
    source=None,
):
    """Simulate n absorbed Brownian paths started at x0 (centered coords).

    Returns (taus, exit_positions, censored, max_abs_coord1, steps,
    integrals); integrals is None unless `source` is given.  `source` is
    either a float (constant forcing) or a vectorized callable evaluated at
    the midpoint of every step.
    """
    taus = np.zeros(n)
    exits = np.tile(np.asarray(x0, dtype=np.float64), (n, 1))
    censored = np.zeros(n, dtype=bool)
    maxabs1 = np.zeros(n)
    steps = np.zeros(n, dtype=np.int64)
    f_callable = callable(source)
    integrals = np.zeros(n) if f_callable else None

    domain = _domain_from_encoding(kind, np.asarray(params, dtype=np.float64), d)
    pool = StreamPool(seed, substream, min(_CHUNK, n))
    x0 = np.asarray(x0, dtype=np.float64)

    for c0 in range(0, n, _CHUNK):
        m = min(_CHUNK, n - c0)
        gens = [pool.reset(i, start_index + c0 + i) for i in range(m)]
        feed = _NormalFeed(gens, d)

        X = np.tile(x0, (m, 1))
        TAU = np.zeros(m)
        MX = np.zeros(m)
        NST = np.zeros(m, dtype=np.int64)
        ITG = np.zeros(m)
        alive = np.arange(m)

        while alive.size:
            xa = X[alive]
            s = domain.signed_dist(xa)
            absorbed = s <= shell_eps
            out_of_steps = ~absorbed & (NST[alive] >= max_steps)
            finished = absorbed | out_of_steps
            if np.any(finished):
                fin = alive[finished]
                sl = c0 + fin
                taus[sl] = TAU[fin]
                exits[sl] = X[fin]
                maxabs1[sl] = MX[fin]
                steps[sl] = NST[fin]
                censored[sl] = out_of_steps[finished]
                if f_callable:
                    integrals[sl] = ITG[fin]
                alive = alive[~finished]
                if alive.size == 0:
                    break
                xa = X[alive]
                s = s[~finished]

            if adaptive:
                dd = s * s
                dt = np.minimum(kappa * dd, dt_base)
            else:
                dt = np.full(alive.size, dt_base)
            sq = np.sqrt(dt)
            Z = feed.step_normals(alive)
            if f_callable:
                h = 0.5 * sq
                mids = xa + h[:, None] * Z
                ITG[alive] = ITG[alive] + np.asarray(source(mids), dtype=np.float64) * dt
            X[alive] = xa + sq[:, None] * Z
            TAU[alive] = TAU[alive] + dt
            a1 = np.abs(X[alive, 0] - x0[0])
            MX[alive] = np.maximum(MX[alive], a1)
            NST[alive] += 1

    if not f_callable and source is not None:
        integrals = float(source) * taus
    return taus, exits, censored, maxabs1, steps, integrals


def wos_paths(kind, params, d, x0, n, seed, substream, start_index, wos_eps, max_steps):
    """Walk-on-spheres: repeated uniform jumps to the inscribed sphere.

    Returns (final_positions, censored, steps).  Directions are normalized
    Gaussian vectors (d normals per step).
    """
    exits = np.tile(np.asarray(x0, dtype=np.float64), (n, 1))
    censored = np.zeros(n, dtype=bool)
    steps = np.zeros(n, dtype=np.int64)

    domain = _domain_from_encoding(kind, np.asarray(params, dtype=np.float64), d)
    pool = StreamPool(seed, substream, min(_CHUNK, n))
    x0 = np.asarray(x0, dtype=np.float64)

    for c0 in range(0, n, _CHUNK):
        m = min(_CHUNK, n - c0)
        gens = [pool.reset(i, start_index + c0 + i) for i in range(m)]
        feed = _NormalFeed(gens, d)

        X = np.tile(x0, (m, 1))
        NST = np.zeros(m, dtype=np.int64)
        alive = np.arange(m)

        while alive.size:
            xa = X[alive]
            s = domain.signed_dist(xa)
            absorbed = s <= wos_eps
            out_of_steps = ~absorbed & (NST[alive] >= max_steps)
            finished = absorbed | out_of_steps
            if np.any(finished):
                fin = alive[finished]
                sl = c0 + fin
                exits[sl] = X[fin]
                steps[sl] = NST[fin]
                censored[sl] = out_of_steps[finished]
                alive = alive[~finished]
                if alive.size == 0:
                    break
                xa = X[alive]
                s = s[~finished]

            Z = feed.step_normals(alive)
            nrm = Z[:, 0] * Z[:, 0]
            for k in range(1, d):
                nrm = nrm + Z[:, k] * Z[:, k]
            nrm = np.sqrt(nrm)
            scale = np.where(nrm == 0.0, 0.0, s / np.where(nrm == 0.0, 1.0, nrm))
            X[alive] = xa + scale[:, None] * Z
            NST[alive] += 1

    return exits, censored, steps
