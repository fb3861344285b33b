"""Depth-first lattice enumeration kernel.

Works on the Gram-Schmidt data of a basis: mu coefficients, squared GS norms,
the target's GS coordinates, and a per-level bound on the partial squared
norm accumulated over the already-fixed levels (levels k..n-1 fix d = n-k
coordinates; linear pruning shrinks the bound at shallow depths).

Candidates are visited in nondecreasing distance from the per-level center
(zig-zag), so the first bound violation at a level prunes its remaining
siblings.  All arithmetic is float64; callers add slack to the bounds and
re-verify candidates exactly.

The kernel is JIT-compiled with numba when available; a pure-Python twin with
identical semantics is kept as a fallback and for tiny inputs.
"""

from __future__ import annotations

import numpy as np

CAP_EXCEEDED = -1


def _enum_kernel_py(mu, bstar, t, bounds, skip_zero, shrink, out, cap, hard_cap):
    """Returns (count, nodes, best_norm).

    mu: (n, n) float64, mu[i, j] for j < i.
    bstar: (n,) squared Gram-Schmidt norms.
    t: (n,) center coordinates in the GS basis (zeros for norm enumeration).
    bounds: (n,) bounds[k] caps the partial squared norm over levels k..n-1.
    out: (cap, n) int64 buffer for accepted coefficient vectors.
    shrink: shortest-vector mode; on each accepted leaf the global bound
        shrinks to its norm (times a hair of slack), and out keeps the tail
        of improving candidates.

    Leaves beyond `cap` are counted but not written (count > cap signals a
    truncated buffer; rerun with a count-sized buffer).  The search aborts
    once count exceeds hard_cap.
    """
    n = bstar.shape[0]
    c = np.zeros(n, dtype=np.int64)
    c0 = np.zeros(n, dtype=np.int64)
    sgn = np.zeros(n, dtype=np.int64)
    j_idx = np.zeros(n, dtype=np.int64)
    center = np.zeros(n, dtype=np.float64)
    partial = np.zeros(n + 1, dtype=np.float64)
    sigma = np.zeros((n + 1, n), dtype=np.float64)
    for jj in range(n):
        sigma[n, jj] = t[jj]
    cur_bounds = bounds.copy()
    best = np.inf
    count = 0
    nodes = 0

    k = n - 1
    center[k] = sigma[k + 1, k]
    c0[k] = int(np.floor(center[k] + 0.5))
    sgn[k] = 1 if (center[k] - c0[k]) >= 0 else -1
    j_idx[k] = 0

    while True:
        j = j_idx[k]
        if j % 2 == 1:
            off = ((j + 1) // 2) * sgn[k]
        else:
            off = -(j // 2) * sgn[k]
        cand = c0[k] + off
        dist = cand - center[k]
        nodes += 1
        term = dist * dist * bstar[k]
        p_norm = partial[k + 1] + term
        if p_norm <= cur_bounds[k]:
            c[k] = cand
            if k == 0:
                take = True
                if skip_zero:
                    take = False
                    for jj in range(n):
                        if c[jj] != 0:
                            take = True
                            break
                if take and shrink and p_norm > best * (1.0 + 1e-9) + 1e-9:
                    take = False
                if take:
                    if count < cap:
                        for jj in range(n):
                            out[count, jj] = c[jj]
                    count += 1
                    if count > hard_cap:
                        return count, nodes, best
                    if shrink and p_norm < best:
                        # keep slack so exact ties are still collected and
                        # the true minimum can be picked exactly outside
                        best = p_norm
                        lim = best * (1.0 + 1e-9) + 1e-9
                        for jj in range(n):
                            if lim < cur_bounds[jj]:
                                cur_bounds[jj] = lim
                j_idx[k] = j + 1
            else:
                partial[k] = p_norm
                for jj in range(k):
                    sigma[k, jj] = sigma[k + 1, jj] - cand * mu[k, jj]
                k -= 1
                center[k] = sigma[k + 1, k]
                c0[k] = int(np.floor(center[k] + 0.5))
                sgn[k] = 1 if (center[k] - c0[k]) >= 0 else -1
                j_idx[k] = 0
        else:
            # distances are nondecreasing in j: prune the rest of this level
            k += 1
            if k == n:
                return count, nodes, best
            j_idx[k] += 1


try:  # pragma: no cover - exercised implicitly when numba is present
    from numba import njit

    _enum_kernel_jit = njit(cache=True)(_enum_kernel_py)
    HAVE_NUMBA = True
except Exception:  # pragma: no cover
    _enum_kernel_jit = None
    HAVE_NUMBA = False


def enum_kernel(mu, bstar, t, bounds, skip_zero, shrink, out, cap, hard_cap=None,
                use_numba=True):
    if hard_cap is None:
        hard_cap = cap
    if HAVE_NUMBA and use_numba:
        return _enum_kernel_jit(mu, bstar, t, bounds, skip_zero, shrink, out, cap, hard_cap)
    return _enum_kernel_py(mu, bstar, t, bounds, skip_zero, shrink, out, cap, hard_cap)
