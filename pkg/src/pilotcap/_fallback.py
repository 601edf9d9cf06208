"""Pure Python/numpy implementations of the numerical kernels.

Same call signatures and return conventions as the compiled ``_kernels``
module; :mod:`pilotcap._backend` picks one at import time.  Integer RNG
output is bit-identical between the two; floating point results agree to
rounding (summation order differs in the Monte Carlo accumulators).
"""

import numpy as np

SPLITMIX_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TWO_POW_M53 = 2.0 ** -53
_TWO_PI = 2.0 * np.pi
_CHUNK = 1 << 15


def cholesky_lower(a, tol):
    """Return ``(L, fail_index, pivot)``; ``fail_index`` is -1 on success."""
    a = np.asarray(a, dtype=np.float64)
    m = a.shape[0]
    L = np.zeros((m, m))
    for j in range(m):
        d = a[j, j] - L[j, :j] @ L[j, :j]
        if not d > tol:
            return L, j, float(d)
        L[j, j] = np.sqrt(d)
        L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L, -1, 0.0


def cho_solve(L, b):
    L = np.asarray(L, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m = L.shape[0]
    y = np.empty_like(b)
    for i in range(m):
        y[i] = (b[i] - L[i, :i] @ y[:i]) / L[i, i]
    x = np.empty_like(b)
    for i in range(m - 1, -1, -1):
        x[i] = (y[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


def jacobi_eigh(a, max_sweeps, rtol):
    """Cyclic Jacobi eigenvalue iteration.

    Returns ``(eigenvalues, eigenvectors, sweeps, converged)`` with the
    eigenvalues unsorted (diagonal order after the last rotation).
    """
    A = np.array(a, dtype=np.float64)
    m = A.shape[0]
    V = np.eye(m)
    scale = np.sqrt(np.sum(A * A))
    sweeps = 0
    while True:
        off = np.sqrt(np.sum((A - np.diag(np.diag(A))) ** 2))
        if not off > rtol * scale:
            return np.diag(A).copy(), V, sweeps, True
        if sweeps >= max_sweeps:
            return np.diag(A).copy(), V, sweeps, False
        sweeps += 1
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q]
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :]
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq


def splitmix64(seed, start, n):
    """Outputs ``start .. start+n-1`` of the SplitMix64 sequence for ``seed``."""
    with np.errstate(over="ignore"):
        k = np.arange(n, dtype=np.uint64) + np.uint64(start + 1)
        z = np.uint64(seed) + k * SPLITMIX_GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def uniforms(seed, start, n):
    """Doubles in (0, 1] from the top 53 bits of each raw draw."""
    raw = splitmix64(seed, start, n)
    return ((raw >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * _TWO_POW_M53


def normals(seed, start, n):
    """Box-Muller normals; consumes ``2 * ceil(n / 2)`` raw draws."""
    pairs = (n + 1) // 2
    u = uniforms(seed, start, 2 * pairs)
    r = np.sqrt(-2.0 * np.log(u[0::2]))
    theta = _TWO_PI * u[1::2]
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(theta)
    out[1::2] = r * np.sin(theta)
    return out[:n]


def mmse_trials(factor, gain, x_tau, t_tau, seed, start, n_trials):
    """Accumulate second moments of the MMSE estimate and its error.

    Trial ``i`` draws ``m`` normals for the channel and ``t_tau * m`` for
    the pilot noise, occupying raw counters ``start + i * stride`` onward
    with ``stride = 2 * ceil(m * (1 + t_tau) / 2)``.

    Returns ``(sum Ĥ Ĥᵀ, sum H̃ H̃ᵀ, sum Ĥ H̃ᵀ, sum (Ĥ_i H̃_j)²)``.
    """
    F = np.asarray(factor, dtype=np.float64)
    G = np.asarray(gain, dtype=np.float64)
    m = F.shape[0]
    k = m * (1 + t_tau)
    stride = k + (k & 1)
    s_hh = np.zeros((m, m))
    s_tt = np.zeros((m, m))
    s_ht = np.zeros((m, m))
    s_ht2 = np.zeros((m, m))
    done = 0
    while done < n_trials:
        n = min(_CHUNK, n_trials - done)
        Z = normals(seed, start + done * stride, n * stride).reshape(n, stride)
        H = Z[:, :m] @ F.T
        w = Z[:, m:k].reshape(n, t_tau, m)
        ybar = x_tau * H + w.sum(axis=1) * (1.0 / t_tau)
        H_hat = ybar @ G.T
        H_err = H - H_hat
        s_hh += H_hat.T @ H_hat
        s_tt += H_err.T @ H_err
        s_ht += H_hat.T @ H_err
        prod = H_hat[:, :, None] * H_err[:, None, :]
        s_ht2 += np.einsum("nij,nij->ij", prod, prod)
        done += n
    return s_hh, s_tt, s_ht, s_ht2
