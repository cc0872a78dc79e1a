"""Pure-numpy implementations of the solver's hot kernels.

These are the fallback when the compiled extension is unavailable and the
reference the compiled kernels are tested against. All functions take
C-contiguous float64 arrays and never mutate their inputs.
"""

import numpy as np

BACKEND = "pure"


def reconstruct(w, h):
    """Model matrix: row i, column j is the inner product of mixing row i
    with basis column j."""
    return w @ h


def kl_data_fit(v, v_hat, eps):
    """Poisson data-fit term: sum of v*log(v / max(v_hat, eps)) + v_hat,
    with 0*log(0/x) = 0."""
    total = float(np.sum(v_hat))
    pos = v > 0
    if np.any(pos):
        vp = v[pos]
        total += float(np.sum(vp * np.log(vp / np.maximum(v_hat[pos], eps))))
    return total


def multiplicative_update_h(v, w, h, beta, eps):
    """One fixed-point update of the basis matrix.

    h[k,j] <- h[k,j] * (sum_i w[i,k] * v[i,j]/v_hat[i,j])
                     / (sum_i w[i,k] + beta[k]*h[k,j])
    with v_hat and the denominator floored at eps, and the result floored
    at eps.
    """
    v_hat = np.maximum(w @ h, eps)
    numer = w.T @ (v / v_hat)
    denom = np.maximum(np.sum(w, axis=0)[:, None] + beta[:, None] * h, eps)
    return np.maximum(h * numer / denom, eps)


def multiplicative_update_w(v, w, h, beta, eps):
    """Mirror-image fixed-point update of the mixing matrix."""
    v_hat = np.maximum(w @ h, eps)
    numer = (v / v_hat) @ h.T
    denom = np.maximum(np.sum(h, axis=1)[None, :] + w * beta[None, :], eps)
    return np.maximum(w * numer / denom, eps)
