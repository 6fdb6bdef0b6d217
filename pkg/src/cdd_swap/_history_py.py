"""NumPy implementation of the trapezoidal memory convolution."""

import numpy as np


def history_convolution(kernel, ops, h):
    """Q[k] = int_0^{t_k} kernel(t_k - t') ops(t') dt' by the trapezoid rule.

    ``kernel`` has shape (K,), ``ops`` shape (K, d) sampled on the same
    uniform grid of spacing ``h``. Returns complex (K, d); Q[0] = 0.
    """
    kernel = np.ascontiguousarray(kernel, dtype=complex)
    ops = np.ascontiguousarray(ops, dtype=complex)
    n = ops.shape[0]
    if kernel.shape[0] < n:
        raise ValueError(f"kernel has {kernel.shape[0]} samples, need {n}")
    out = np.zeros_like(ops)
    for k in range(1, n):
        acc = kernel[k::-1] @ ops[: k + 1]
        acc -= 0.5 * (kernel[k] * ops[0] + kernel[0] * ops[k])
        out[k] = h * acc
    return out
