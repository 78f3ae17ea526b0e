"""NumPy implementation of the hot log-domain kernels.

Reference semantics for the compiled backend in ``_ckernels.pyx``; selected at
import time when the extension is unavailable (or forced via
``OTIMPUTE_PURE_PYTHON=1``).
"""

import numpy as np

NAME = "numpy"


def lse_update(points, support, logw, pot, eps):
    """One log-domain half sweep of the dual fixed-point system.

    Returns ``eps * logsumexp_j(logw[j] + (points[i]*support[j] - pot[j])/eps)``
    for every ``i``, with a running-max subtraction for stability.
    """
    a = logw[None, :] + (points[:, None] * support[None, :] - pot[None, :]) / eps
    m = a.max(axis=1)
    s = np.exp(a - m[:, None]).sum(axis=1)
    return eps * (m + np.log(s))


def tilt_stats(points, support, logw, pot, eps):
    """Log-normalizer, mean and variance of the tilted conditional at each point.

    The conditional at ``p`` puts mass proportional to
    ``exp(logw[j] + (p*support[j] - pot[j])/eps)`` on ``support[j]``.
    """
    a = logw[None, :] + (points[:, None] * support[None, :] - pot[None, :]) / eps
    m = a.max(axis=1)
    e = np.exp(a - m[:, None])
    z = e.sum(axis=1)
    mean = (e @ support) / z
    dev = support[None, :] - mean[:, None]
    var = np.einsum("ij,ij->i", e, dev * dev) / z
    logz = m + np.log(z)
    return logz, mean, var
