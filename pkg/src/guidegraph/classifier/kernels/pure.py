"""Pure-Python/numpy twin of the compiled SGD epoch kernel.

Selected automatically when the compiled extension is unavailable (or when
``GUIDEGRAPH_PURE_KERNEL=1``).  Follows the exact update sequence of
``_hinge.pyx``; per-sample dot products go through BLAS, so weights can
differ from the compiled kernel in the last few ulps, but each kernel is
bit-deterministic on its own.
"""

from __future__ import annotations

import numpy as np


def hinge_epoch(indptr, indices, data, targets, order, v, b, wscale, u, q,
                alpha, l1_coef, l2_coef, t0, t):
    n_classes = v.shape[0]
    for i in order:
        start, end = indptr[i], indptr[i + 1]
        idx = indices[start:end]
        x = data[start:end]
        eta = 1.0 / (alpha * (t0 + t))
        cols = v[:, idx]
        scores = cols @ x * wscale + b
        if l2_coef > 0.0:
            wscale *= 1.0 - eta * alpha * l2_coef
        y = targets[:, i]
        active = y * scores < 1.0
        if active.any():
            upd = np.where(active, eta * y / wscale, 0.0)
            v[:, idx] += upd[:, None] * x[None, :]
            b += np.where(active, eta * y, 0.0)
        if l1_coef > 0.0:
            u += eta * alpha * l1_coef
            z = v[:, idx] * wscale[:, None]
            qs = q[:, idx]
            pos = np.maximum(0.0, z - (u[:, None] + qs))
            neg = np.minimum(0.0, z + (u[:, None] - qs))
            wnew = np.where(z > 0.0, pos, np.where(z < 0.0, neg, z))
            q[:, idx] = qs + (wnew - z)
            v[:, idx] = wnew / wscale[:, None]
        small = wscale < 1e-9
        if small.any():
            for c in range(n_classes):
                if small[c]:
                    v[c, :] *= wscale[c]
                    wscale[c] = 1.0
        t += 1
    return t
