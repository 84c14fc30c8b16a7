"""Dense complex linear algebra helpers shared by every other module.

Matrices are plain ``numpy`` complex arrays; pair indices are flattened
row-major, so ``(i, j)`` with ``j`` ranging over ``n`` values maps to
``i * n + j``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

PIVOT_FLOOR = 1e-12
CLUSTER_RADIUS = 1e-7


class SingularMatrix(ValueError):
    """Raised when a matrix cannot be inverted reliably."""


def as_cmat(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product; ``(a (x) b)[i*nb + j, k*mb + l] = a[i,k] b[j,l]``."""
    return np.kron(as_cmat(a), as_cmat(b))


def flip(m: int, n: int) -> np.ndarray:
    """Permutation matrix sending ``x (x) y`` in C^m (x) C^n to ``y (x) x``."""
    if m < 1 or n < 1:
        raise ValueError("flip dimensions must be positive")
    p = np.zeros((m * n, m * n), dtype=complex)
    for i in range(m):
        for j in range(n):
            p[j * m + i, i * n + j] = 1.0
    return p


def inverse(a) -> np.ndarray:
    """Invert a square matrix by pivoted LU; refuse tiny pivots."""
    m = as_cmat(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("inverse needs a square matrix")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrix
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    pivots = np.abs(np.diag(lu))
    floor = PIVOT_FLOOR * max(1.0, np.abs(m).max())
    if pivots.size and pivots.min() < floor:
        raise SingularMatrix(f"pivot {pivots.min():.3e} below {floor:.1e}")
    return scipy.linalg.lu_solve((lu, piv), np.eye(m.shape[0], dtype=complex))


def nullspace(a, tol: float = 1e-9) -> list[np.ndarray]:
    """Orthonormal basis of the right kernel of ``a``.

    Singular values at or below ``tol * sigma_max`` count as zero.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = as_cmat(a)
    _, sv, vh = np.linalg.svd(m, full_matrices=True)
    full = np.zeros(m.shape[1])
    full[: sv.size] = sv
    top = sv.max() if sv.size else 0.0
    keep = full <= tol * top if top > 0 else np.ones_like(full, dtype=bool)
    return [vh[k].conj() for k in np.nonzero(keep)[0]]


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple
    all_real: bool
    diagonalizable: bool
    label: str = ""

    def to_json(self) -> dict:
        return {
            "t": int(self.label) if self.label.isdigit() else self.label,
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "all_real": self.all_real,
            "diagonalizable": self.diagonalizable,
        }


def _clusters(values: np.ndarray, radius: float) -> list[list[int]]:
    # single-linkage grouping of nearby eigenvalues
    parent = list(range(len(values)))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= radius:
                parent[root(i)] = root(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(values)):
        groups.setdefault(root(i), []).append(i)
    return list(groups.values())


def spectrum_report(a, tol: float = 1e-7, label: str = "") -> SpectrumReport:
    """Eigenvalues plus realness and diagonalizability flags.

    Eigenvalues closer than ``tol * scale`` are grouped; a group is
    semisimple when ``lambda - a`` loses as many ranks as the group size.
    """
    m = as_cmat(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("spectrum_report needs a square matrix")
    n = m.shape[0]
    if n == 0:
        return SpectrumReport((), True, True, label)
    ev = np.linalg.eigvals(m)
    scale = max(1.0, np.linalg.norm(m, 2))
    all_real = bool(np.abs(ev.imag).max() <= tol * scale)
    diag = True
    for group in _clusters(ev, CLUSTER_RADIUS * scale):
        if len(group) == 1:
            continue
        centre = ev[group].mean()
        sv = np.linalg.svd(m - centre * np.eye(n), compute_uv=False)
        geometric = int(np.sum(sv <= tol * scale))
        if geometric < len(group):
            diag = False
            break
    return SpectrumReport(tuple(complex(z) for z in ev), all_real, diag, label)
