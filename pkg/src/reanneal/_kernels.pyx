# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Metropolis kernels.

Every routine consumes caller-supplied uniforms in a fixed order, one per
attempted move, so results match ``_pykernels`` bit for bit.
"""
from libc.math cimport exp

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline double _field(const signed char[::1] z, const double[::1] h,
                          const int[::1] ptr, const int[::1] idx,
                          const double[::1] jv, int i) noexcept nogil:
    cdef double f = h[i]
    cdef int q
    for q in range(ptr[i], ptr[i + 1]):
        f += jv[q] * z[idx[q]]
    return f


def piqa_mcs(signed char[:, ::1] spins, const double[::1] h, const int[::1] ptr,
             const int[::1] idx, const double[::1] jv, double b, double jperp,
             double pt, bint do_local, bint do_global, const double[::1] uniforms,
             signed char[:, :, ::1] snaps):
    """Run Monte Carlo steps on a Trotter state in place.

    One step is a local sweep over (slice, spin) followed by one all-slice
    flip attempt per spin. The number of steps is inferred from
    ``uniforms``. When ``snaps`` has a non-zero leading dimension the state
    is copied into it after every step.
    """
    cdef int n_slices = spins.shape[0]
    cdef int n = spins.shape[1]
    cdef Py_ssize_t per_mcs = (n_slices * n if do_local else 0) + (n if do_global else 0)
    if per_mcs == 0:
        return 0, 0
    cdef Py_ssize_t n_mcs = uniforms.shape[0] // per_mcs
    cdef bint record = snaps.shape[0] > 0
    if record and snaps.shape[0] < n_mcs:
        raise ValueError("snapshot buffer too small")
    cdef Py_ssize_t u = 0, m
    cdef long local_acc = 0, global_acc = 0
    cdef int k, i, kp, km, j
    cdef double f, d, s_z
    with nogil:
        for m in range(n_mcs):
            if do_local:
                for k in range(n_slices):
                    kp = k + 1
                    if kp == n_slices:
                        kp = 0
                    km = k - 1
                    if km < 0:
                        km = n_slices - 1
                    for i in range(n):
                        f = _field(spins[k], h, ptr, idx, jv, i)
                        s_z = spins[k, i]
                        d = 2.0 * s_z * (b * f + jperp * (spins[kp, i] + spins[km, i]))
                        if d <= 0.0 or uniforms[u] < exp(-d / pt):
                            spins[k, i] = -spins[k, i]
                            local_acc += 1
                        u += 1
            if do_global:
                for i in range(n):
                    d = 0.0
                    for k in range(n_slices):
                        f = _field(spins[k], h, ptr, idx, jv, i)
                        d += 2.0 * spins[k, i] * b * f
                    if d <= 0.0 or uniforms[u] < exp(-d / pt):
                        for k in range(n_slices):
                            spins[k, i] = -spins[k, i]
                        global_acc += 1
                    u += 1
            if record:
                for k in range(n_slices):
                    for j in range(n):
                        snaps[m, k, j] = spins[k, j]
    return local_acc, global_acc


def classical_sweeps(signed char[::1] z, const double[::1] h, const int[::1] ptr,
                     const int[::1] idx, const double[::1] jv,
                     const double[::1] temps, const double[::1] uniforms):
    """Single-spin Metropolis sweeps in index order, one per entry of ``temps``.

    A zero temperature accepts strict decreases only.
    """
    cdef int n = z.shape[0]
    cdef Py_ssize_t n_sweeps = temps.shape[0]
    if uniforms.shape[0] < n_sweeps * n:
        raise ValueError("not enough uniforms")
    cdef Py_ssize_t u = 0, m
    cdef long acc = 0
    cdef int i
    cdef double d, t
    with nogil:
        for m in range(n_sweeps):
            t = temps[m]
            for i in range(n):
                d = 2.0 * z[i] * _field(z, h, ptr, idx, jv, i)
                if t <= 0.0:
                    if d < 0.0:
                        z[i] = -z[i]
                        acc += 1
                elif d <= 0.0 or uniforms[u] < exp(-d / t):
                    z[i] = -z[i]
                    acc += 1
                u += 1
    return acc
