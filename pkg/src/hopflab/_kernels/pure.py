"""Pure-NumPy kernels: batched 3x3 complex matrix exponentials.

Twin of the compiled ``_fast`` extension; both expose the same functions and
must agree to near machine precision (see tests/test_kernels.py).
"""

import numpy as np

BACKEND_NAME = "python"

_TAYLOR_ORDER = 12
_SCALE_LIMIT = 0.5
_IDENTITY = np.eye(3, dtype=np.complex128)


def expm3_batch(ms):
    """exp(M) for a stack of 3x3 complex matrices, shape (..., 3, 3).

    Scaling-and-squaring with a fixed-order Taylor polynomial; exact enough
    (~1e-14 relative) for the moderate norms that arise from group sweeps.
    """
    ms = np.asarray(ms, dtype=np.complex128)
    norm = np.abs(ms).sum(axis=-1).max(axis=-1)
    k = np.zeros(norm.shape, dtype=np.int64)
    big = norm > _SCALE_LIMIT
    k[big] = np.ceil(np.log2(norm[big] / _SCALE_LIMIT)).astype(np.int64)
    a = ms / (2.0 ** k)[..., None, None]
    acc = _IDENTITY + a
    term = a
    for j in range(2, _TAYLOR_ORDER + 1):
        term = term @ a / j
        acc = acc + term
    kmax = int(k.max()) if k.size else 0
    for step in range(kmax):
        mask = k > step
        if mask.all():
            acc = acc @ acc
        else:
            acc[mask] = acc[mask] @ acc[mask]
    return acc


def expm3(m):
    """exp(M) for a single 3x3 complex matrix."""
    return expm3_batch(np.asarray(m, dtype=np.complex128)[None])[0]


def group_orbit_apply(g1, g2, s1, s2, z):
    """exp(s1[i]*G1 + s2[i]*G2) @ z[i] for each i.

    g1, g2 : (3, 3) complex generators.
    s1, s2 : (N,) real parameters.
    z      : (N, 3) complex vectors.
    """
    s1 = np.asarray(s1, dtype=np.float64)
    s2 = np.asarray(s2, dtype=np.float64)
    z = np.asarray(z, dtype=np.complex128)
    ms = s1[:, None, None] * np.asarray(g1) + s2[:, None, None] * np.asarray(g2)
    return np.einsum("nij,nj->ni", expm3_batch(ms), z)
