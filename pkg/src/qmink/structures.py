"""Numeric tensors derived from the Lorentz data of one case.

Everything here is a small dense matrix: the spinor-vector maps ``V``,
the braidings ``L``, ``L~``, ``R``, ``G``, ``G~``, the metric ``g``, the
gamma matrices and the momentum coefficient blocks ``F[t][r]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import CaseSpec, LorentzData, build_lorentz_data, pauli
from .matrixcore import flip, inverse, kron

TOL = 1e-9
I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)


class StructureInconsistent(RuntimeError):
    """A structural identity failed at tolerance."""


@dataclass(frozen=True)
class StructureSet:
    spec: CaseSpec | None
    data: LorentzData
    V: np.ndarray
    Vinv: np.ndarray
    L: np.ndarray
    Ltil: np.ndarray
    R: np.ndarray
    G: np.ndarray
    Gtil: np.ndarray
    D: np.ndarray
    g: np.ndarray
    ginv: np.ndarray
    gamma: tuple
    Ai: tuple
    K: np.ndarray
    Abisp: np.ndarray
    F: np.ndarray  # F[t, r] is the 4x4 block acting on the bispinor index

    @property
    def R4(self) -> np.ndarray:
        """R with its four indices split: ``R4[i, j, k, l] = R^{ij}_{kl}``."""
        return self.R.reshape(4, 4, 4, 4)

    def tensors(self) -> dict:
        out = {
            "V": self.V, "Vinv": self.Vinv, "L": self.L, "Ltil": self.Ltil,
            "R": self.R, "G": self.G, "Gtil": self.Gtil, "D": self.D,
            "g": self.g, "ginv": self.ginv, "K": self.K, "Abisp": self.Abisp,
            "X": self.data.X, "Qprime": self.data.Qprime,
        }
        for i in range(4):
            out[f"gamma{i}"] = self.gamma[i]
            out[f"A{i}"] = self.Ai[i]
        for t in range(4):
            for r in range(4):
                out[f"F{t}{r}"] = self.F[t, r]
        return out


def vector_maps() -> tuple[np.ndarray, np.ndarray]:
    """V[(A,B), i] = sigma_i[A,B] and Vinv[i, (A,B)] = sigma_i[B,A] / 2."""
    sig = pauli()
    v = np.zeros((4, 4), dtype=complex)
    vi = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for a in range(2):
            for b in range(2):
                v[2 * a + b, i] = sig[i][a, b]
                vi[i, 2 * a + b] = 0.5 * sig[i][b, a]
    return v, vi


def _functional_table(G4: np.ndarray, Gt4: np.ndarray, E2: np.ndarray) -> np.ndarray:
    # Xg[m, j, a, l]: the functional X_m^j applied to the (a, l) entry of
    # the 4x4 block matrix cw (+) conj(w), where cw = E^-1 w E.
    E2i = inverse(E2)
    xg = np.zeros((4, 4, 4, 4), dtype=complex)
    xg[:, :, :2, :2] = np.einsum("aC,Dl,jCDm->mjal", E2i, E2, Gt4.conj())
    xg[:, :, 2:, 2:] = np.einsum("jalm->mjal", G4.conj())
    return xg


def structures_for(spec: CaseSpec, check: bool = True) -> StructureSet:
    """Shortcut: Lorentz data and structures for a case specification."""
    return build_structures(build_lorentz_data(spec), spec.s, spec=spec, check=check)


def build_structures(
    ld: LorentzData, s: int = 1, *, spec: CaseSpec | None = None, check: bool = True
) -> StructureSet:
    """Assemble every tensor for one case and check the core identities."""
    if s not in (1, -1):
        raise ValueError("s must be +1 or -1")
    tau = flip(2, 2)
    V, Vi = vector_maps()
    X, Xi = ld.X, inverse(ld.X)
    q, qh = ld.q, ld.qhalf
    L = s * qh * (I4 + q * np.outer(ld.E4, ld.Eprime4))
    Lt = q * tau @ L @ tau
    mid = kron(kron(I2, X), I2)
    midi = kron(kron(I2, Xi), I2)
    R = kron(Vi, Vi) @ mid @ kron(L, Lt) @ midi @ kron(V, V)
    G = kron(Vi, I2) @ kron(I2, X) @ kron(L, I2) @ kron(I2, V)
    Gt = kron(Vi, I2) @ kron(I2, Lt) @ kron(Xi, I2) @ kron(I2, V)
    D = tau @ Xi @ tau
    g = (-2 * qh * kron(Vi, Vi) @ mid @ np.kron(ld.E4, tau @ ld.E4)).reshape(4, 4)
    sig = pauli()
    D4 = D.reshape(2, 2, 2, 2)
    E2 = ld.E2
    Ai = tuple(E2.T @ np.einsum("ab,abkl->kl", sig[i], D4) @ E2 / qh for i in range(4))
    z2 = np.zeros((2, 2), dtype=complex)
    gamma = tuple(np.block([[z2, Ai[i]], [sig[i], z2]]) for i in range(4))
    K = -E2 @ inverse(E2).T
    Ab = np.block([[z2, K.T], [K, z2]])

    if check:
        _check(V, Vi, R, g)
    gi = inverse(g)
    xg = _functional_table(G.reshape(4, 2, 2, 4), Gt.reshape(4, 2, 2, 4), E2)
    F = np.einsum("tm,mjal,jr->trla", g, xg, gi)

    return StructureSet(
        spec=spec, data=ld, V=V, Vinv=Vi, L=L, Ltil=Lt, R=R, G=G, Gtil=Gt, D=D,
        g=g, ginv=gi, gamma=gamma, Ai=Ai, K=K, Abisp=Ab, F=F,
    )


def _check(V, Vi, R, g) -> None:
    def need(ok, what, value):
        if not ok:
            raise StructureInconsistent(f"{what} (residual {value:.3e})")

    e = max(np.abs(Vi @ V - I4).max(), np.abs(V @ Vi - I4).max())
    need(e <= TOL, "V^-1 V != 1", e)
    e = np.abs(R @ R - np.eye(16)).max()
    need(e <= TOL, "R^2 != 1", e)
    e = np.abs(R @ g.ravel() - g.ravel()).max()
    need(e <= TOL, "Rg != g", e)
    e = np.abs(g.conj() - g.T).max()
    need(e <= TOL, "conj(g) != g^T", e)
    sv = np.linalg.svd(g, compute_uv=False)
    need(sv.min() > TOL * sv.max(), "g is singular", sv.min())


def structural_residuals(ss: StructureSet) -> dict:
    """Residuals of the identities every case should satisfy."""
    R, g = ss.R, ss.g
    one = np.eye(16)
    return {
        "Vinv_V": float(np.abs(ss.Vinv @ ss.V - I4).max()),
        "R_squared": float(np.abs(R @ R - one).max()),
        "Rg_eq_g": float(np.abs(R @ g.ravel() - g.ravel()).max()),
        "g_hermitian": float(np.abs(g.conj() - g.T).max()),
        "rank_R_minus_1": int(np.linalg.matrix_rank(R - one, tol=1e-8)),
        "rank_R_plus_1": int(np.linalg.matrix_rank(R + one, tol=1e-8)),
    }


def braid_residual(ss: StructureSet) -> float:
    """max |R12 R23 R12 - R23 R12 R23| on C^4 (x) C^4 (x) C^4."""
    r12 = np.kron(ss.R, I4)
    r23 = np.kron(I4, ss.R)
    return float(np.abs(r12 @ r23 @ r12 - r23 @ r12 @ r23).max())


def clifford_residual(ss: StructureSet, gamma=None) -> float:
    """max_{i,j} |g^i g^j + R^{ji}_{lk} g^k g^l - 2 g^{ji} 1|."""
    gam = np.array(ss.gamma if gamma is None else gamma)
    prods = np.einsum("kab,lbc->klac", gam, gam)  # gamma^k gamma^l
    lhs = prods + np.einsum("jilk,klac->ijac", ss.R4, prods)
    rhs = 2 * np.einsum("ji,ac->ijac", ss.g, I4)
    return float(np.abs(lhs - rhs).max())


def f_functional(ss: StructureSet, conjugated: bool = False) -> np.ndarray:
    """Table of f^i_j(w^C_D) (or of w^C_D*) with row (i,C), column (D,j)."""
    return (ss.Gtil if conjugated else ss.G).copy()


def f_product_residual(ss: StructureSet) -> float:
    """How far f is from respecting the defining relations of the group.

    f is a unital homomorphism, so the 4x4 matrices f(w^C_D) must obey the
    E, E' and X relations satisfied by the generators w.
    """
    G4 = ss.G.reshape(4, 2, 2, 4)
    Gt4 = ss.Gtil.reshape(4, 2, 2, 4)
    f = np.einsum("iCDj->CDij", G4)
    fs = np.einsum("iCDj->CDij", Gt4)
    E2 = ss.data.E2
    Ep2 = ss.data.Eprime4.reshape(2, 2)
    X4 = ss.data.X.reshape(2, 2, 2, 2)
    ff = np.einsum("ABik,CDkj->ABCDij", f, f)
    e1 = np.einsum("BD,ABCDij->ACij", E2, ff) - np.einsum("AC,ij->ACij", E2, I4)
    e2 = np.einsum("AC,ABCDij->BDij", Ep2, ff) - np.einsum("BD,ij->BDij", Ep2, I4)
    lhs = np.einsum("ABCD,CKik,DLkj->ABKLij", X4, f, fs)
    rhs = np.einsum("ACik,BDkj,CDKL->ABKLij", fs, f, X4)
    return float(max(np.abs(e1).max(), np.abs(e2).max(), np.abs(lhs - rhs).max()))


def momenta_coefficients(ss: StructureSet) -> np.ndarray:
    """F[t, r], the 4x4 bispinor blocks in P~^t = sum_r F[t, r] (x) P^r."""
    return ss.F.copy()


def selfadjoint_residual(ss: StructureSet) -> float:
    """max over t, r of |F^dagger Abisp - Abisp F|."""
    ab = ss.Abisp
    return float(max(
        np.abs(ss.F[t, r].conj().T @ ab - ab @ ss.F[t, r]).max()
        for t in range(4) for r in range(4)
    ))
