# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step RK4 loop for i dpsi/dt = (H_static + E(t) H_drive) psi."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


cdef inline void _rhs(const cplx* hs, const cplx* hd, double e,
                      const cplx* x, cplx* out, Py_ssize_t dim) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef cplx acc
    for i in range(dim):
        acc = 0
        for j in range(dim):
            acc = acc + (hs[i * dim + j] + e * hd[i * dim + j]) * x[j]
        out[i] = -1j * acc


def rk4_propagate(cnp.ndarray[cplx, ndim=2, mode="c"] h_static,
                  cnp.ndarray[cplx, ndim=2, mode="c"] h_drive,
                  cnp.ndarray[double, ndim=1, mode="c"] field,
                  cnp.ndarray[cplx, ndim=1, mode="c"] psi0,
                  double dt, Py_ssize_t n_steps, Py_ssize_t stride):
    """Propagate psi0 over n_steps; field holds 2*n_steps+1 half-step samples.

    Returns (snapshot_steps, snapshots, psi_final); snapshots cover step 0,
    every stride-th step, and the final step.
    """
    cdef Py_ssize_t dim = psi0.shape[0]
    if h_static.shape[0] != dim or h_drive.shape[0] != dim:
        raise ValueError("matrix dimensions must match the state")
    if field.shape[0] != 2 * n_steps + 1:
        raise ValueError("field must provide 2*n_steps+1 half-step samples")
    if stride < 1:
        raise ValueError("stride must be positive")

    cdef Py_ssize_t n_snap = n_steps // stride + 1
    if n_steps % stride != 0:
        n_snap += 1
    snaps = np.empty((n_snap, dim), dtype=np.complex128)
    snap_steps = np.empty(n_snap, dtype=np.int64)
    cdef cplx[:, ::1] snaps_v = snaps
    cdef cnp.int64_t[::1] steps_v = snap_steps

    psi = psi0.copy()
    work = np.empty((5, dim), dtype=np.complex128)
    cdef cplx[::1] psi_v = psi
    cdef cplx[:, ::1] w_v = work
    cdef const cplx* hs = <const cplx*> cnp.PyArray_DATA(h_static)
    cdef const cplx* hd = <const cplx*> cnp.PyArray_DATA(h_drive)
    cdef const double* f = <const double*> cnp.PyArray_DATA(field)

    cdef cplx* p = &psi_v[0]
    cdef cplx* k1 = &w_v[0, 0]
    cdef cplx* k2 = &w_v[1, 0]
    cdef cplx* k3 = &w_v[2, 0]
    cdef cplx* k4 = &w_v[3, 0]
    cdef cplx* tmp = &w_v[4, 0]

    cdef Py_ssize_t m, i, isnap = 0
    cdef double e0, em, e1, sixth = dt / 6.0

    steps_v[isnap] = 0
    for i in range(dim):
        snaps_v[isnap, i] = p[i]
    isnap += 1

    with nogil:
        for m in range(n_steps):
            e0 = f[2 * m]
            em = f[2 * m + 1]
            e1 = f[2 * m + 2]
            _rhs(hs, hd, e0, p, k1, dim)
            for i in range(dim):
                tmp[i] = p[i] + 0.5 * dt * k1[i]
            _rhs(hs, hd, em, tmp, k2, dim)
            for i in range(dim):
                tmp[i] = p[i] + 0.5 * dt * k2[i]
            _rhs(hs, hd, em, tmp, k3, dim)
            for i in range(dim):
                tmp[i] = p[i] + dt * k3[i]
            _rhs(hs, hd, e1, tmp, k4, dim)
            for i in range(dim):
                p[i] = p[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if (m + 1) % stride == 0 or m == n_steps - 1:
                steps_v[isnap] = m + 1
                for i in range(dim):
                    snaps_v[isnap, i] = p[i]
                isnap += 1

    return snap_steps[:isnap].copy(), snaps[:isnap].copy(), psi
