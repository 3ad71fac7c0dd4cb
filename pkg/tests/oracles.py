"""Independent reference implementations used only by the test suite.

These deliberately avoid the code paths they check: determinants by cofactor
expansion, Hermitian eigenvalues by cyclic Jacobi rotations, polynomial-matrix
determinants by the plain permutation (Leibniz) sum.
"""

from __future__ import annotations

import itertools

import numpy as np


def cofactor_determinant(a: np.ndarray) -> complex:
    m = a.shape[0]
    if m == 0:
        return 1.0 + 0.0j
    if m == 1:
        return complex(a[0, 0])
    total = 0.0 + 0.0j
    rest = a[1:]
    for j in range(m):
        minor = np.delete(rest, j, axis=1)
        total += (-1) ** j * complex(a[0, j]) * cofactor_determinant(minor)
    return total


def jacobi_eigenvalues(h: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Stops when the off-diagonal Frobenius norm drops below ``tol``.
    """
    h = np.array(h, dtype=np.complex128)
    m = h.shape[0]
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(h - np.diag(np.diagonal(h))) ** 2))
        if off <= tol:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = h[p, q]
                if abs(apq) == 0.0:
                    continue
                phase = apq / abs(apq)
                delta = (h[p, p].real - h[q, q].real) / 2.0
                denom = abs(delta) + np.hypot(delta, abs(apq))
                t = abs(apq) / denom if denom else 1.0
                if delta < 0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(m, dtype=np.complex128)
                rot[p, p] = c
                rot[p, q] = -s * phase
                rot[q, p] = s * np.conj(phase)
                rot[q, q] = c
                h = rot.conj().T @ h @ rot
    return np.sort(np.real(np.diagonal(h)))


def leibniz_determinant(mat, zero):
    """Plain permutation-sum determinant; works for scalars and series alike."""
    k = len(mat)
    total = zero
    for perm in itertools.permutations(range(k)):
        inversions = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        term = mat[0][perm[0]]
        for i in range(1, k):
            term = term * mat[i][perm[i]]
        total = total + term if inversions % 2 == 0 else total - term
    return total


def permutation_permanent(a) -> complex:
    """Permutation-sum permanent for plain numeric matrices."""
    a = np.asarray(a, dtype=np.complex128)
    m = a.shape[0]
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(m)):
        term = 1.0 + 0.0j
        for i in range(m):
            term *= a[i, perm[i]]
        total += term
    return total
