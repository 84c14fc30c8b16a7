"""Closed-form per-case values of the metric, the A_i blocks and K.

These are independent transcriptions used as oracles against the
tensors assembled in :mod:`qmink.structures`.
"""

from __future__ import annotations

import numpy as np

from .catalog import CaseSpec, case7_r_varsigma, pauli


def metric(spec: CaseSpec) -> np.ndarray:
    k = spec.case
    q = 1 if k <= 4 else -1
    if k in (1, 5):
        t = spec.t
        return q * np.diag([t, -1 / t, -1 / t, -t]).astype(complex)
    if k in (2, 6):
        c2 = spec.c**2
        return 0.5 * q * np.array(
            [[2 - c2, 0, 0, -c2], [0, -2, 0, 0], [0, 0, -2, 0], [-c2, 0, 0, -2 - c2]],
            dtype=complex,
        )
    if k == 3:
        c, r = spec.c, spec.r
        c2 = c * c
        return -0.5 * np.array(
            [
                [(r + 1) * c2 - 2, 0, -2j * c, (1 + r) * c2],
                [0, 2, 0, 0],
                [2j * c, 0, 2, 2j * c],
                [(1 + r) * c2, 0, -2j * c, (r + 1) * c2 + 2],
            ]
        )
    if k == 4:
        c = spec.c
        c2 = c * c
        return -0.5 * np.array(
            [
                [3 * c2 - 2, -2 * c, -2j * c, 3 * c2],
                [-2 * c, 2, 0, -2 * c],
                [2j * c, 0, 2, 2j * c],
                [3 * c2, -2 * c, -2j * c, 3 * c2 + 2],
            ]
        )
    r, vs = case7_r_varsigma(spec.t)
    return np.diag([-r + vs, r + vs, r - vs, r + vs]).astype(complex)


def gamma_blocks(spec: CaseSpec) -> list[np.ndarray]:
    """The upper-right 2x2 blocks A_0..A_3 of the gamma matrices."""
    k = spec.case
    q = 1 if k <= 4 else -1
    s0, s1, s2, s3 = pauli()
    if k in (1, 5):
        t = spec.t
        return [q * t * s0, -q / t * s1, -q / t * s2, -q * t * s3]
    if k in (2, 6):
        c2 = spec.c**2
        return [
            q * np.diag([1 - c2, 1]).astype(complex),
            -q * s1,
            -q * s2,
            q * np.diag([-1 - c2, 1]).astype(complex),
        ]
    if k == 3:
        c, r = spec.c, spec.r
        c2 = c * c
        return [
            np.array([[c2 * (1 - r) + 1, c], [c, 1]], dtype=complex),
            np.array([[-2 * c, -1], [-1, 0]], dtype=complex),
            np.array([[0, 1j], [-1j, 0]]),
            np.array([[c2 * (1 - r) - 1, c], [c, 1]], dtype=complex),
        ]
    if k == 4:
        c = spec.c
        c2 = c * c
        return [
            np.array([[c2 + 1, 2 * c], [2 * c, 1]], dtype=complex),
            -s1,
            -s2,
            np.array([[c2 - 1, 2 * c], [2 * c, 1]], dtype=complex),
        ]
    r, vs = case7_r_varsigma(spec.t)
    return [(vs - r) * s0, (r + vs) * s1, (r - vs) * s2, (r + vs) * s3]


def spinor_metric(spec: CaseSpec) -> np.ndarray:
    """K, the lower-left block of the bispinor metric."""
    k = spec.case
    if k in (1, 2):
        return np.eye(2, dtype=complex)
    if k in (3, 4):
        return np.array([[1, -2 * spec.c], [0, 1]], dtype=complex)
    return -np.eye(2, dtype=complex)
