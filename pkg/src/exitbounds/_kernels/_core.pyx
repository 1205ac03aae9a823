# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation core: absorbed Brownian paths and walk-on-spheres.

Mirrors _kernels/fallback.py operation-for-operation (same per-path Philox
streams, same draw order, same floating-point evaluation order) so both
backends produce bit-identical exit times, exit points and step counts.
Compile with -ffp-contract=off; FMA contraction would break the mirror.
"""

import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport fabs, sqrt
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_normal

from ._streams import StreamPool

BACKEND_NAME = "compiled"

DEF MAXD = 32

KIND_BALL = 0
KIND_ANNULUS = 1
KIND_BALL_MINUS_CONE = 2
KIND_CYLINDER_MINUS_WEDGE = 3


cdef double _signed_dist(int kind, const double* pr, int d, const double* x) noexcept nogil:
    cdef double acc, rho, t, u, s2, s3, q, side, proj, sseg, dtg, dug, d_edge, r, cw, sw
    cdef int k
    if kind == 0:  # ball: pr = [R]
        acc = x[0] * x[0]
        for k in range(1, d):
            acc = acc + x[k] * x[k]
        return pr[0] - sqrt(acc)
    if kind == 1:  # annulus: pr = [r, R]
        acc = x[0] * x[0]
        for k in range(1, d):
            acc = acc + x[k] * x[k]
        rho = sqrt(acc)
        s2 = rho - pr[0]
        s3 = pr[1] - rho
        return s2 if s2 < s3 else s3
    # cone types: pr = [r, cos_omega, sin_omega, (half_l)]
    t = x[0]
    if kind == 2:
        if d == 2:
            u = fabs(x[1])
        else:
            acc = x[1] * x[1]
            for k in range(2, d):
                acc = acc + x[k] * x[k]
            u = sqrt(acc)
    else:
        u = fabs(x[1])
    r = pr[0]
    cw = pr[1]
    sw = pr[2]
    rho = sqrt(t * t + u * u)
    side = t * sw - u * cw
    proj = t * cw + u * sw
    sseg = proj
    if sseg < 0.0:
        sseg = 0.0
    elif sseg > r:
        sseg = r
    dtg = t - sseg * cw
    dug = u - sseg * sw
    d_edge = sqrt(dtg * dtg + dug * dug)
    # proj >= 0 settles the degenerate slit (omega = 0), mirroring geometry.py
    if side >= 0.0 and proj >= 0.0 and rho <= r:
        q = side if side < (r - rho) else (r - rho)
        q = -q
    elif side >= 0.0 and proj >= 0.0:
        q = rho - r
    else:
        q = d_edge
    s2 = r - rho
    if q < s2:
        s2 = q
    if kind == 2:
        return s2
    s3 = pr[3] - fabs(x[2])
    return s2 if s2 < s3 else s3


cdef int _one_exit(bitgen_t* rng, int kind, const double* pr, int d,
                   const double* x0, double dt_base, double kappa, int adaptive,
                   double shell_eps, long max_steps,
                   double* out_x, double* tau_out, double* maxabs_out,
                   long* steps_out, double* mids, double* dts, int record) noexcept nogil:
    cdef double x[MAXD]
    cdef double z[MAXD]
    cdef double tau = 0.0
    cdef double mx = 0.0
    cdef double s, dd, dt, sq, h, a1
    cdef long st = 0
    cdef int k
    cdef int censored = 0
    for k in range(d):
        x[k] = x0[k]
    while True:
        s = _signed_dist(kind, pr, d, x)
        if s <= shell_eps:
            break
        if st >= max_steps:
            censored = 1
            break
        if adaptive:
            dd = s * s
            dt = kappa * dd
            if dt > dt_base:
                dt = dt_base
        else:
            dt = dt_base
        sq = sqrt(dt)
        for k in range(d):
            z[k] = random_standard_normal(rng)
        if record:
            h = 0.5 * sq
            for k in range(d):
                mids[st * d + k] = x[k] + h * z[k]
            dts[st] = dt
        for k in range(d):
            x[k] = x[k] + sq * z[k]
        tau = tau + dt
        a1 = fabs(x[0] - x0[0])
        if a1 > mx:
            mx = a1
        st = st + 1
    for k in range(d):
        out_x[k] = x[k]
    tau_out[0] = tau
    maxabs_out[0] = mx
    steps_out[0] = st
    return censored


cdef int _one_wos(bitgen_t* rng, int kind, const double* pr, int d,
                  const double* x0, double wos_eps, long max_steps,
                  double* out_x, long* steps_out) noexcept nogil:
    cdef double x[MAXD]
    cdef double z[MAXD]
    cdef double s, acc, nrm, scale
    cdef long st = 0
    cdef int k
    cdef int censored = 0
    for k in range(d):
        x[k] = x0[k]
    while True:
        s = _signed_dist(kind, pr, d, x)
        if s <= wos_eps:
            break
        if st >= max_steps:
            censored = 1
            break
        for k in range(d):
            z[k] = random_standard_normal(rng)
        acc = z[0] * z[0]
        for k in range(1, d):
            acc = acc + z[k] * z[k]
        nrm = sqrt(acc)
        if nrm == 0.0:
            scale = 0.0
        else:
            scale = s / nrm
        for k in range(d):
            x[k] = x[k] + scale * z[k]
        st = st + 1
    for k in range(d):
        out_x[k] = x[k]
    steps_out[0] = st
    return censored


cdef bitgen_t* _bitgen_ptr(object bitgen) except NULL:
    return <bitgen_t*> PyCapsule_GetPointer(bitgen.capsule, "BitGenerator")


def exit_paths(kind, params, d, x0, n, seed, substream, start_index,
               dt_base, kappa, adaptive, shell_eps, max_steps, source=None):
    """Batch of absorbed Brownian paths; see fallback.exit_paths for contract."""
    cdef int kd = kind
    cdef int dd = d
    cdef long ms = max_steps
    cdef double dtb = dt_base
    cdef double kap = kappa
    cdef double sh = shell_eps
    cdef int adapt = 1 if adaptive else 0
    if dd > MAXD:
        raise ValueError(f"dimension {dd} exceeds the compiled kernel limit {MAXD}")

    pr_arr = np.ascontiguousarray(params, dtype=np.float64)
    x0_arr = np.ascontiguousarray(x0, dtype=np.float64)
    cdef double[::1] pr = pr_arr
    cdef double[::1] xv = x0_arr

    taus_arr = np.zeros(n)
    exits_arr = np.zeros((n, dd))
    cens_arr = np.zeros(n, dtype=np.uint8)
    maxabs_arr = np.zeros(n)
    steps_arr = np.zeros(n, dtype=np.int64)
    cdef double[::1] taus = taus_arr
    cdef double[:, ::1] exits = exits_arr
    cdef unsigned char[::1] cens = cens_arr
    cdef double[::1] maxabs = maxabs_arr
    cdef long[::1] steps = steps_arr

    f_callable = callable(source)
    integrals_arr = np.zeros(n) if f_callable else None
    cdef double[::1] mids
    cdef double[::1] dts
    mids_arr = dts_arr = None
    cdef int record = 0
    if f_callable:
        mids_arr = np.empty(ms * dd)
        dts_arr = np.empty(ms)
        mids = mids_arr
        dts = dts_arr
        record = 1
    else:
        mids = np.empty(1)
        dts = np.empty(1)

    pool = StreamPool(seed, substream, 1)
    cdef bitgen_t* rng = _bitgen_ptr(pool.bitgen(0))
    cdef long i, nst
    cdef int c
    for i in range(n):
        pool.reset(0, start_index + i)
        c = _one_exit(rng, kd, &pr[0], dd, &xv[0], dtb, kap, adapt, sh, ms,
                      &exits[i, 0], &taus[i], &maxabs[i], &steps[i],
                      &mids[0], &dts[0], record)
        cens[i] = <unsigned char> c
        if record:
            nst = steps[i]
            if nst > 0:
                vals = np.asarray(source(mids_arr[: nst * dd].reshape(nst, dd)), dtype=np.float64)
                integrals_arr[i] = float(np.dot(vals, dts_arr[:nst]))

    if not f_callable and source is not None:
        integrals_arr = float(source) * taus_arr
    return taus_arr, exits_arr, cens_arr.astype(bool), maxabs_arr, steps_arr, integrals_arr


def wos_paths(kind, params, d, x0, n, seed, substream, start_index, wos_eps, max_steps):
    """Batch of walk-on-spheres walks; see fallback.wos_paths for contract."""
    cdef int kd = kind
    cdef int dd = d
    cdef long ms = max_steps
    cdef double eps = wos_eps
    if dd > MAXD:
        raise ValueError(f"dimension {dd} exceeds the compiled kernel limit {MAXD}")

    pr_arr = np.ascontiguousarray(params, dtype=np.float64)
    x0_arr = np.ascontiguousarray(x0, dtype=np.float64)
    cdef double[::1] pr = pr_arr
    cdef double[::1] xv = x0_arr

    exits_arr = np.zeros((n, dd))
    cens_arr = np.zeros(n, dtype=np.uint8)
    steps_arr = np.zeros(n, dtype=np.int64)
    cdef double[:, ::1] exits = exits_arr
    cdef unsigned char[::1] cens = cens_arr
    cdef long[::1] steps = steps_arr

    pool = StreamPool(seed, substream, 1)
    cdef bitgen_t* rng = _bitgen_ptr(pool.bitgen(0))
    cdef long i
    for i in range(n):
        pool.reset(0, start_index + i)
        cens[i] = <unsigned char> _one_wos(rng, kd, &pr[0], dd, &xv[0], eps, ms,
                                           &exits[i, 0], &steps[i])
    return exits_arr, cens_arr.astype(bool), steps_arr
