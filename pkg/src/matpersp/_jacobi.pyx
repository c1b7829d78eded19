# cython: language_level=3
"""Cyclic Jacobi sweeps for complex Hermitian matrices (compiled kernel).

Mirrors :func:`matpersp._jacobi_py.jacobi_sweeps` rotation for rotation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def jacobi_sweeps(a_in, double tol, int max_sweeps):
    """Diagonalize a Hermitian matrix in place by cyclic Jacobi rotations.

    Parameters
    ----------
    a_in : ndarray of complex128, shape (n, n)
        Hermitian input. Copied; the caller's array is untouched.
    tol : float
        Stop once the off-diagonal Frobenius norm is at most ``tol * ||A||_F``.
    max_sweeps : int
        Sweep cap.

    Returns
    -------
    w : ndarray of float64
        Unsorted eigenvalues.
    v : ndarray of complex128
        Eigenvectors as columns.
    sweeps : int
        Sweeps used, or -1 if the cap was hit first.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] varr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] a = arr
    cdef double complex[:, ::1] v = varr
    cdef Py_ssize_t p, q, k
    cdef int sweep, result = -1
    cdef double fro2 = 0.0, off2, target
    cdef double apq_abs, h, g, theta, t, c, s, app, aqq
    cdef double complex e, ec, x, y

    for p in range(n):
        for q in range(n):
            fro2 += cabs2(a[p, q])
    target = tol * sqrt(fro2)

    with nogil:
        for sweep in range(max_sweeps + 1):
            off2 = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off2 += cabs2(a[p, q])
            if sqrt(off2) <= target:
                result = sweep
                break
            if sweep == max_sweeps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq_abs = sqrt(cabs2(a[p, q]))
                    if apq_abs == 0.0:
                        continue
                    app = a[p, p].real
                    aqq = a[q, q].real
                    g = 100.0 * apq_abs
                    if sweep > 3 and fabs(app) + g == fabs(app) and fabs(aqq) + g == fabs(aqq):
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    h = aqq - app
                    if fabs(h) + g == fabs(h):
                        t = apq_abs / h
                    else:
                        theta = 0.5 * h / apq_abs
                        t = 1.0 / (fabs(theta) + sqrt(1.0 + theta * theta))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    e = a[p, q] / apq_abs
                    ec = e.conjugate()
                    # A <- A J
                    for k in range(n):
                        x = a[k, p]
                        y = a[k, q]
                        a[k, p] = c * x - s * ec * y
                        a[k, q] = s * e * x + c * y
                    # A <- J* A
                    for k in range(n):
                        x = a[p, k]
                        y = a[q, k]
                        a[p, k] = c * x - s * e * y
                        a[q, k] = s * ec * x + c * y
                    a[p, p] = app - t * apq_abs
                    a[q, q] = aqq + t * apq_abs
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        x = v[k, p]
                        y = v[k, q]
                        v[k, p] = c * x - s * ec * y
                        v[k, q] = s * e * x + c * y

    w = np.empty(n, dtype=np.float64)
    for k in range(n):
        w[k] = a[k, k].real
    return w, varr, result
