"""Compiled O(n) float kernels. Callers validate shapes; nothing here checks."""

import numpy as np
from numba import njit


@njit(cache=True)
def matvec_tridiag(sub, diag, sup, x):
    n = x.shape[0]
    y = np.empty(n)
    for i in range(n):
        acc = diag * x[i]
        if i > 0:
            acc += sub * x[i - 1]
        if i < n - 1:
            acc += sup * x[i + 1]
        y[i] = acc
    return y


@njit(cache=True)
def thomas(b, r):
    """Forward elimination / back substitution for V_n(b) y = r.

    Returns (y, smallest pivot). The pivots are R_{i+1}/R_i > 1 in exact
    arithmetic, so a nonpositive one signals breakdown.
    """
    n = r.shape[0]
    c = np.empty(n)
    y = np.empty(n)
    diag = b + 1.0
    piv = diag
    min_piv = piv
    c[0] = 1.0 / piv
    y[0] = r[0] * c[0]
    for i in range(1, n):
        piv = diag - b * c[i - 1]
        if piv < min_piv:
            min_piv = piv
        c[i] = 1.0 / piv
        y[i] = (r[i] - b * y[i - 1]) * c[i]
    for i in range(n - 2, -1, -1):
        y[i] -= c[i] * y[i + 1]
    return y, min_piv


@njit(cache=True)
def apply_inverse_scaled(b, r):
    """Closed-form inverse applied to r with every intermediate kept O(1).

    With q_i = 1/R_i and e_m = b**m / R_m (both from positive-only
    recurrences), the prefix and suffix sums of the repunit formula are
    tracked as sigma_i = b**i s_{i-1} / R_i and tau_i = t_i / R_{n-i+1}.
    Since R_{n+1} = R_{n-i+1} + b**(n-i+1) R_i,

        y_i = (-1)**i * (sigma_i + tau_i) / (q_i + e_{n-i+1}).
    """
    n = r.shape[0]
    # q[i] = 1/R_{i+1}, e[m] = b**(m+1)/R_{m+1}, indices shifted to 0-based
    q = np.empty(n)
    e = np.empty(n)
    q[0] = 1.0
    e[0] = b
    for m in range(1, n):
        q[m] = q[m - 1] / (b + q[m - 1])
        e[m] = b * e[m - 1] / (1.0 + e[m - 1])

    # signed rhs: (-1)**i r_i with 1-based i
    sigma = np.empty(n)
    acc = 0.0
    for i in range(n):
        sigma[i] = acc
        term = -r[i] if i % 2 == 0 else r[i]
        # b R_i / R_{i+1} = b / (1 + e_i)
        acc = b / (1.0 + e[i]) * (acc + term)

    y = np.empty(n)
    tau = 0.0
    finite = True
    for i in range(n - 1, -1, -1):
        term = -r[i] if i % 2 == 0 else r[i]
        if i < n - 1:
            # R_{n-i-1}/R_{n-i} in 1-based terms is 1/(1 + e_{n-i-1})
            tau = term + tau / (1.0 + e[n - i - 2])
        else:
            tau = term
        val = (sigma[i] + tau) / (q[i] + e[n - i - 1])
        if not np.isfinite(val):
            finite = False
        y[i] = -val if i % 2 == 0 else val
    return y, finite
