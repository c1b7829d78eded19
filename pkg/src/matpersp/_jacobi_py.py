"""Pure-Python cyclic Jacobi sweeps; fallback when the compiled kernel is absent."""

import math

import numpy as np


def jacobi_sweeps(a_in, tol, max_sweeps):
    """Same contract as the compiled ``jacobi_sweeps``: returns ``(w, v, sweeps)``."""
    a = np.array(a_in, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = tol * math.sqrt(float(np.sum(np.abs(a) ** 2)))
    offdiag = ~np.eye(n, dtype=bool)

    for sweep in range(max_sweeps + 1):
        off = math.sqrt(float(np.sum(np.abs(a[offdiag]) ** 2)))
        if off <= target:
            return a.diagonal().real.copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                apq_abs = abs(apq)
                if apq_abs == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                g = 100.0 * apq_abs
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = aqq - app
                if abs(h) + g == abs(h):
                    t = apq_abs / h
                else:
                    theta = 0.5 * h / apq_abs
                    t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                e = apq / apq_abs
                ec = e.conjugate()

                x = a[:, p].copy()
                y = a[:, q]
                a[:, p] = c * x - s * ec * y
                a[:, q] = s * e * x + c * y
                x = a[p, :].copy()
                y = a[q, :]
                a[p, :] = c * x - s * e * y
                a[q, :] = s * ec * x + c * y
                a[p, p] = app - t * apq_abs
                a[q, q] = aqq + t * apq_abs
                a[p, q] = a[q, p] = 0.0

                x = v[:, p].copy()
                y = v[:, q]
                v[:, p] = c * x - s * ec * y
                v[:, q] = s * e * x + c * y

    return a.diagonal().real.copy(), v, -1
