"""Dense matrices over GF(p) as numpy arrays.

Used by the verification paths (relative homology ranks, the perturbation
contraction); the main algorithm works on sparse columns instead.
"""

from __future__ import annotations

import numpy as np

# int64 is safe while n * (p-1)**2 stays below 2**63 for every matmul we do
_INT64_LIMIT = 2**20


class SingularMatrixError(ArithmeticError):
    pass


def dtype_for(p: int):
    return np.int64 if p < _INT64_LIMIT else object


def zeros(shape, p: int) -> np.ndarray:
    return np.zeros(shape, dtype=dtype_for(p))


def identity(n: int, p: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64).astype(dtype_for(p))


def asmatrix(a, p: int) -> np.ndarray:
    return np.array(a, dtype=dtype_for(p)).reshape(np.shape(a)) % p


def matmul(*mats: np.ndarray, p: int) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = (out @ m) % p
    return out


def is_zero(a: np.ndarray) -> bool:
    return not np.any(a)


def echelon(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` mod ``p`` and its pivot columns."""
    m = asmatrix(a, p).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        factors = m[:, c].copy()
        factors[r] = 0
        if factors.any():
            m = (m - np.outer(factors, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if 0 in np.shape(a):
        return 0
    return len(echelon(a, p)[1])


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n, m = np.shape(a)
    if n != m:
        raise SingularMatrixError(f"cannot invert a {n}x{m} matrix")
    if n == 0:
        return zeros((0, 0), p)
    aug = np.concatenate([asmatrix(a, p), identity(n, p)], axis=1)
    red, pivots = echelon(aug, p)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return red[:, n:]
