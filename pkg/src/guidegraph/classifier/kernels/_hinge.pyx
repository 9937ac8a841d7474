# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hinge-loss SGD epoch over CSR rows.

Semantics are pinned by the pure-Python twin in ``pure.py``; the two must
apply the same update sequence (margin before regularization, lazy L2 via
a scale factor, cumulative L1 truncation on touched features).
"""


def hinge_epoch(long long[::1] indptr, long long[::1] indices,
                double[::1] data, double[:, ::1] targets,
                long long[::1] order,
                double[:, ::1] v, double[::1] b, double[::1] wscale,
                double[::1] u, double[:, ::1] q,
                double alpha, double l1_coef, double l2_coef,
                double t0, long long t):
    cdef Py_ssize_t n_classes = v.shape[0]
    cdef Py_ssize_t n_features = v.shape[1]
    cdef Py_ssize_t n_samples = order.shape[0]
    cdef Py_ssize_t oi, i, c, j, k
    cdef long long start, end
    cdef double eta, dot, score, y, upd, z, wnew, qc

    for oi in range(n_samples):
        i = <Py_ssize_t>order[oi]
        start = indptr[i]
        end = indptr[i + 1]
        eta = 1.0 / (alpha * (t0 + t))
        for c in range(n_classes):
            dot = 0.0
            for j in range(start, end):
                dot += v[c, indices[j]] * data[j]
            score = dot * wscale[c] + b[c]
            if l2_coef > 0.0:
                wscale[c] *= 1.0 - eta * alpha * l2_coef
            y = targets[c, i]
            if y * score < 1.0:
                upd = eta * y / wscale[c]
                for j in range(start, end):
                    v[c, indices[j]] += upd * data[j]
                b[c] += eta * y
            if l1_coef > 0.0:
                u[c] += eta * alpha * l1_coef
                for j in range(start, end):
                    k = <Py_ssize_t>indices[j]
                    z = v[c, k] * wscale[c]
                    qc = q[c, k]
                    if z > 0.0:
                        wnew = z - (u[c] + qc)
                        if wnew < 0.0:
                            wnew = 0.0
                    elif z < 0.0:
                        wnew = z + (u[c] - qc)
                        if wnew > 0.0:
                            wnew = 0.0
                    else:
                        wnew = z
                    q[c, k] = qc + (wnew - z)
                    v[c, k] = wnew / wscale[c]
            if wscale[c] < 1e-9:
                for k in range(n_features):
                    v[c, k] *= wscale[c]
                wscale[c] = 1.0
        t += 1
    return t
