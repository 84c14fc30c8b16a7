"""Momentum representations, the U-matrix eigenproblem and spin-1/2 momenta.

A representation of the momentum algebra is given through the operators
A = p0 + p3, B = p1 - i p2, B* = p1 + i p2 and D = p0 - p3.  The lattice
kinds are truncated to N basis vectors; ``interior`` marks the indices
on which every shift and product of two shifts is computed exactly.

Vectors on C^4 (x) H use two layouts:

* U-layout, index ``(s, i) -> 4 s + i`` (lattice index first), used by
  :func:`build_U` and the Dirac solutions;
* spinor layout, index ``(i, s) -> dim(H) i + s``, used by the momenta
  ``P~^t = sum_r F[t, r] (x) Pi^r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import CaseSpec, InvalidParameter
from .matrixcore import SpectrumReport, nullspace, spectrum_report

KINDS = ("1a", "1b", "2a", "2b")


class UnsupportedCase(ValueError):
    """No representations or momenta tables exist for this case."""


class NotScalar(ArithmeticError):
    """The mass operator is not a multiple of the identity."""


class NegativeMassSquare(ArithmeticError):
    """The mass operator is a negative multiple of the identity."""


class TachyonicMomentum(ValueError):
    """Plane-wave momentum with negative mass square."""


@dataclass(frozen=True)
class TruncatedRep:
    kind: str
    params: dict
    N: int
    t: float
    c: float
    labels: np.ndarray  # lattice index n of each basis vector
    opA: np.ndarray
    opB: np.ndarray
    opBstar: np.ndarray
    opD: np.ndarray
    interior: np.ndarray  # bool mask over basis vectors

    @property
    def dim(self) -> int:
        return len(self.labels)

    def momenta(self) -> list[np.ndarray]:
        """p0..p3 from A, B, B*, D."""
        A, B, Bs, D = self.opA, self.opB, self.opBstar, self.opD
        return [(A + D) / 2, (B + Bs) / 2, 1j * (B - Bs) / 2, (A - D) / 2]


def _real(name, value):
    if value is None:
        raise InvalidParameter(f"missing parameter {name}")
    z = complex(value)
    if abs(z.imag) > 0 or not np.isfinite(z.real):
        raise InvalidParameter(f"{name} must be real, got {value}")
    return z.real


def build_rep(kind: str, params: dict, N: int, spec: CaseSpec) -> TruncatedRep:
    """Truncated matrices of one of the representations 1a, 1b, 2a, 2b."""
    if spec.case not in (1, 2):
        raise UnsupportedCase(f"no representations are tabulated for case {spec.case}")
    if kind not in KINDS:
        raise InvalidParameter(f"unknown representation {kind!r}")
    if kind[0] != str(spec.case):
        raise InvalidParameter(f"representation {kind} belongs to case {kind[0]}")
    if N < 4:
        raise InvalidParameter("truncation N must be at least 4")
    t = spec.t if spec.case == 1 else 1.0
    c = spec.c if spec.case == 2 else 1.0
    p = dict(params)
    if kind == "1a":
        a, d, b = _real("a", p.get("a")), _real("d", p.get("d")), _real("b", p.get("b"))
        if a == 0 and d == 0:
            raise InvalidParameter("1a needs (a, d) != (0, 0)")
        if b <= 0:
            raise InvalidParameter("1a needs b > 0")
        ns = np.arange(-(N // 2), N - N // 2)
        A = np.diag(t ** (-2.0 * ns) * a).astype(complex)
        D = np.diag(t ** (2.0 * ns) * d).astype(complex)
        B = np.diag(np.full(N - 1, b, dtype=complex), 1)  # B e_n = b e_{n-1}
        Bs = B.conj().T
        interior = np.ones(N, bool)
        interior[[0, -1]] = False
        return TruncatedRep(kind, {"a": a, "b": b, "d": d}, N, t, c, ns, A, B, Bs, D, interior)
    if kind == "2a":
        a, d = _real("a", p.get("a")), _real("d", p.get("d"))
        if d == 0:
            raise InvalidParameter("2a needs d != 0")
        ns = np.arange(N)
        A = np.diag(c * c * (a + ns * d)).astype(complex)
        D = d * np.eye(N, dtype=complex)
        B = np.diag(c * d * np.sqrt(ns[1:]).astype(complex), 1)  # B e_n = c d sqrt(n) e_{n-1}
        Bs = B.conj().T
        interior = np.ones(N, bool)
        interior[-1] = False  # the lowering side is exact because e_{-1} = 0
        return TruncatedRep(kind, {"a": a, "d": d}, N, t, c, ns, A, B, Bs, D, interior)
    # scalar representations
    b = complex(p.get("b", 0))
    a = _real("a", p.get("a"))
    if kind == "1b":
        d = _real("d", p.get("d"))
        if b != 0 and (a != 0 or d != 0):
            raise InvalidParameter("1b needs b = 0 or a = d = 0")
    else:
        d = 0.0
    one = lambda z: np.array([[z]], dtype=complex)
    out = {"a": a, "b": b, "d": d} if kind == "1b" else {"a": a, "b": b}
    return TruncatedRep(kind, out, N, t, c, np.array([1]), one(a), one(b), one(np.conj(b)), one(d), np.ones(1, bool))


def relation_residual(rep: TruncatedRep, ss) -> float:
    """max |p^k p^l - R^{lk}_{ji} p^i p^j| on interior rows and columns."""
    p = np.array(rep.momenta())
    pp = np.einsum("iab,jbc->ijac", p, p)
    rhs = np.einsum("lkji,ijac->klac", ss.R4, pp)
    lhs = np.einsum("kab,lbc->klac", p, p)
    sel = np.ix_(rep.interior, rep.interior)
    diff = (lhs - rhs)[:, :, sel[0], sel[1]]
    return float(np.abs(diff).max())


def mass_square_operator(rep: TruncatedRep, ss) -> np.ndarray:
    p = rep.momenta()
    return sum(ss.ginv[i, j] * p[j] @ p[i] for i in range(4) for j in range(4))


def mass_of(rep: TruncatedRep, ss, tol: float = 1e-9) -> float:
    """m = (g_ij p^j p^i)^(1/2) on the interior."""
    m2 = mass_square_operator(rep, ss)[np.ix_(rep.interior, rep.interior)]
    value = np.diag(m2).mean()
    scale = max(1.0, np.abs(m2).max())
    if np.abs(m2 - value * np.eye(len(m2))).max() > tol * scale:
        size = max(np.abs(q).max() for q in rep.momenta())
        hint = f" (entries reach {size:.1e}; try a smaller N)" if size > 1e4 else ""
        raise NotScalar("g_ij p^j p^i is not a multiple of the identity on the interior" + hint)
    if abs(value.imag) > tol * scale:
        raise NotScalar(f"mass square {value} is not real")
    if value.real < -tol * scale:
        raise NegativeMassSquare(f"mass square {value.real:.6g} < 0")
    if value.real <= tol * scale:
        return 0.0
    return float(np.sqrt(value.real))


def build_U(rep: TruncatedRep, ss) -> np.ndarray:
    """U[(s,i),(k,n)] = pi(p^t)[k, s] g_{at} gamma^a[i, n]."""
    p = rep.momenta()
    U = np.zeros((4 * rep.dim, 4 * rep.dim), dtype=complex)
    for t in range(4):
        ga = sum(ss.ginv[a, t] * ss.gamma[a] for a in range(4))
        U += np.kron(p[t].T, ga)
    return U


def interior_rows(rep: TruncatedRep) -> np.ndarray:
    """Mask over U-layout indices whose lattice index is interior."""
    return np.repeat(rep.interior, 4)


# -- printed solution families -----------------------------------------------
# Each family maps a base lattice index n to (spinor component, n offset,
# coefficient) triples; components are 0-based.

def _families(rep: TruncatedRep, m: float, tol: float = 1e-9) -> dict:
    t, c = rep.t, rep.c
    a, d = rep.params["a"], rep.params.get("d", 0.0)
    b = rep.params.get("b", 0.0)
    massive = m > tol
    if rep.kind == "1a":
        if massive:
            return {
                "1a m>0 first": lambda n: [(0, 0, m), (2, 0, t ** (2 * n - 1) * d), (3, -1, -t * b)],
                "1a m>0 second": lambda n: [(1, 0, m), (2, 1, -t * b), (3, 0, t ** (-2 * n - 1) * a)],
            }
        return {
            "1a m=0 first": lambda n: [(0, 0, b), (1, -1, d * t ** (2 * n - 2))],
            "1a m=0 second": lambda n: [(2, 0, b), (3, -1, -a * t ** (-2 * n))],
        }
    if rep.kind == "2a":
        if massive:
            return {
                "2a m>0 first": lambda n: [(0, 0, m), (2, 0, d), (3, -1, -c * d * np.sqrt(max(n, 0)))],
                "2a m>0 second": lambda n: [(1, 0, m), (2, 1, -c * d * np.sqrt(n + 1)), (3, 0, c * c * (a + n * d + d))],
            }
        return {
            "2a m=0 first": lambda n: [(0, 1, c * np.sqrt(n + 1)), (1, 0, 1.0)],
            "2a m=0 second": lambda n: [(2, 0, 1.0), (3, -1, -c * np.sqrt(max(n, 0)))],
        }
    if rep.kind == "1b":
        if massive and b == 0:
            return {
                "1b m>0 first": lambda n: [(0, 0, m), (2, 0, d / t)],
                "1b m>0 second": lambda n: [(1, 0, m), (3, 0, a / t)],
            }
        if not massive and b == 0 and a == 0:
            return {"1b m=0 (a=b=0) first": lambda n: [(1, 0, 1.0)], "1b m=0 (a=b=0) second": lambda n: [(2, 0, 1.0)]}
        if not massive and b == 0 and d == 0:
            return {"1b m=0 (d=b=0) first": lambda n: [(0, 0, 1.0)], "1b m=0 (d=b=0) second": lambda n: [(3, 0, 1.0)]}
        return {}
    if not massive and b == 0 and a != 0:
        return {"2b m=0 first": lambda n: [(0, 0, 1.0)], "2b m=0 second": lambda n: [(3, 0, 1.0)]}
    return {}


def _place(rep: TruncatedRep, n: int, comps) -> np.ndarray | None:
    """U-layout vector of a family member, or None if it leaves the interior."""
    pos = {int(x): k for k, x in enumerate(rep.labels)}
    v = np.zeros(4 * rep.dim, dtype=complex)
    for comp, off, coef in comps:
        k = pos.get(n + off)
        if coef == 0:
            continue  # e.g. the e_{-1} = 0 term on the half lattice
        if k is None or not rep.interior[k]:
            return None
        v[4 * k + comp] += coef
    return v


def printed_solutions(rep: TruncatedRep, m: float) -> list[tuple[str, int, np.ndarray]]:
    """(family label, base index n, U-layout vector) for every member inside the interior."""
    out = []
    for label, fam in _families(rep, m).items():
        for n in rep.labels:
            v = _place(rep, int(n), fam(int(n)))
            if v is not None and np.abs(v).max() > 0:
                out.append((label, int(n), v))
    return out


@dataclass(frozen=True)
class DiracSolution:
    mass: float
    vectors: list  # orthonormal kernel basis, U-layout
    labels: list  # printed families found inside the kernel
    residual: float  # worst |(U - m) v| / |U| over printed members
    printed_rank: int = 0
    extra: dict = field(default_factory=dict)


def solve_dirac(rep: TruncatedRep, ss, tol: float = 1e-9) -> DiracSolution:
    """Kernel of U - m on interior-supported vectors, plus the printed families."""
    m = mass_of(rep, ss)
    U = build_U(rep, ss)
    cols = interior_rows(rep)
    M = (U - m * np.eye(len(U)))[:, cols]
    kernel = []
    for v in nullspace(M, tol):
        full = np.zeros(len(U), dtype=complex)
        full[cols] = v
        kernel.append(full)
    unorm = max(np.linalg.norm(U, 2), 1e-300)
    printed = printed_solutions(rep, m)
    residual = 0.0
    labels = []
    for label, _, v in printed:
        r = np.linalg.norm((U - m * np.eye(len(U))) @ v) / (unorm * np.linalg.norm(v))
        residual = max(residual, r)
        if label not in labels:
            labels.append(label)
    rank = int(np.linalg.matrix_rank(np.array([v for _, _, v in printed]), tol=1e-9)) if printed else 0
    return DiracSolution(m, kernel, labels, float(residual), rank)


def classical_solutions(P, tol: float = 1e-12) -> DiracSolution:
    """Solutions v of P_j gamma^j v = m v for the undeformed gamma matrices."""
    P = np.asarray(P, dtype=float)
    m2 = P[0] ** 2 - P[1] ** 2 - P[2] ** 2 - P[3] ** 2
    # rounding in m^2 is of order eps * |P|^2
    floor = max(tol, 64 * np.finfo(float).eps * float(P @ P))
    if m2 < -floor:
        raise TachyonicMomentum(f"m^2 = {m2:.6g} < 0")
    m = float(np.sqrt(m2)) if m2 > floor else 0.0
    sig = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1.0, -1.0])]
    if m > 0:
        ps = sum(P[k] * sig[k] for k in range(4))
        vecs = [np.concatenate([m * phi, ps @ phi]) for phi in np.eye(2, dtype=complex)]
        return DiracSolution(m, vecs, ["m>0"], 0.0, 2)
    if np.all(np.abs(P) <= tol):
        return DiracSolution(0.0, list(np.eye(4, dtype=complex)), ["unphysical"], 0.0, 4)
    if abs(P[0] + P[3]) > tol:
        vecs = [
            np.array([P[1] - 1j * P[2], -P[0] - P[3], 0, 0], dtype=complex),
            np.array([0, 0, P[0] + P[3], P[1] + 1j * P[2]], dtype=complex),
        ]
        return DiracSolution(0.0, vecs, ["m=0, P0 != -P3"], 0.0, 2)
    vecs = [np.eye(4, dtype=complex)[0], np.eye(4, dtype=complex)[3]]
    return DiracSolution(0.0, vecs, ["m=0, P0 = -P3"], 0.0, 2)


def classical_dirac_operator(P) -> np.ndarray:
    """P_j gamma^j with the undeformed gamma matrices."""
    s = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1.0, -1.0])]
    z = np.zeros((2, 2))
    gam = [np.block([[z, s[0]], [s[0], z]])] + [np.block([[z, -s[i]], [s[i], z]]) for i in (1, 2, 3)]
    return sum(P[j] * gam[j] for j in range(4))


# -- spin-1/2 momenta ----------------------------------------------------------

def momenta_operators_raw(rep: TruncatedRep, ss) -> list[np.ndarray]:
    """P~^t = sum_r F[t, r] (x) pi(p^r)^T in spinor layout."""
    p = rep.momenta()
    return [sum(np.kron(ss.F[t, r], p[r].T) for r in range(4)) for t in range(4)]


def tilde_R_tables(rep: TruncatedRep, ss) -> list[np.ndarray]:
    """Closed-form 2x2-block operators for cases 1 and 2."""
    s = ss.spec.s if ss.spec is not None else 1
    A, B, Bs, D = rep.opA, rep.opB.T, rep.opBstar.T, rep.opD
    Z = np.zeros_like(A)
    if rep.kind.startswith("1"):
        t = rep.t
        return [
            s / 2 * np.block([[t * A + D / t, Z], [Z, A / t + t * D]]),
            s / 2 * np.block([[B / t + t * Bs, Z], [Z, Bs / t + t * B]]),
            1j * s / 2 * np.block([[B / t - t * Bs, Z], [Z, t * B - Bs / t]]),
            s / 2 * np.block([[t * A - D / t, Z], [Z, A / t - t * D]]),
        ]
    c2 = rep.c**2
    return [
        s / 2 * np.block([[A + D, -c2 * B], [Z, A + D]]),
        s / 2 * np.block([[Bs + B, -c2 * D], [Z, Bs + B]]),
        1j * s / 2 * np.block([[B - Bs, c2 * D], [Z, B - Bs]]),
        s / 2 * np.block([[A - D, -c2 * B], [Z, A - D]]),
    ]


def to_spinor_layout(v: np.ndarray, dim: int) -> np.ndarray:
    return v.reshape(dim, 4).T.ravel()


def _solution_section(rep: TruncatedRep, ss, P: np.ndarray, m: float, closure: str) -> np.ndarray:
    """Matrix of P restricted to the span of the printed solution families.

    For lattice kinds the families are indexed by n.  Members whose
    neighbours are all present form the section; the coefficients on
    the two edge members either wrap around (closure='periodic') or are
    dropped (closure='open').
    """
    fams = list(_families(rep, m).values())
    if not fams:
        raise UnsupportedCase(f"no printed solutions for {rep.kind} at m={m:g}")
    if rep.kind in ("1b", "2b"):
        S = np.array([to_spinor_layout(_place(rep, int(rep.labels[0]), f(int(rep.labels[0]))), rep.dim) for f in fams]).T
        coef, *_ = np.linalg.lstsq(S, P @ S, rcond=None)
        if np.abs(S @ coef - P @ S).max() > 1e-8 * max(1.0, np.abs(P).max()):
            raise ArithmeticError("momenta do not preserve the solution space")
        return coef
    present = [
        int(n) for n in rep.labels
        if all(_place(rep, int(n), f(int(n))) is not None for f in fams)
    ]
    ok = set(present)
    lowest = int(rep.labels[0])
    inner = [n for n in present if (n - 1 in ok or n == lowest) and n + 1 in ok]
    if closure == "periodic":
        inner = [n for n in inner if n - 1 in ok]
    big = sorted(set(inner) | {n + 1 for n in inner} | {n - 1 for n in inner if n - 1 in ok})

    def block(ns):
        return np.array([to_spinor_layout(_place(rep, n, f(n)), rep.dim) for n in ns for f in fams]).T

    S_in, S_big = block(inner), block(big)
    coef, *_ = np.linalg.lstsq(S_big, P @ S_in, rcond=None)
    resid = np.abs(S_big @ coef - P @ S_in).max()
    if resid > 1e-8 * max(1.0, np.abs(P).max()):
        raise ArithmeticError(f"momenta leave the solution span (residual {resid:.2e})")
    k = len(fams)
    row = {n: k * big.index(n) for n in big}
    C = np.zeros((k * len(inner), k * len(inner)), dtype=complex)
    for j, n in enumerate(inner):
        C[k * j:k * (j + 1), :] = coef[row[n]:row[n] + k, :]
    if closure == "periodic":
        below, above = min(inner) - 1, max(inner) + 1
        C[-k:, :] += coef[row[below]:row[below] + k, :]
        C[:k, :] += coef[row[above]:row[above] + k, :]
    return C


@dataclass(frozen=True)
class MomentaReport:
    P: list
    R_tables: list
    table_residual: float  # |P~^t - (R~^t (+) R~^t*)|
    spectra: list  # SpectrumReport per t on the solution span
    mass: float
    closure: str


def momenta_operators(rep: TruncatedRep, ss, closure: str | None = None, tol: float = 1e-7) -> MomentaReport:
    """Assemble P~^t, compare with the closed-form tables, analyse spectra.

    Spectra are taken on the span of the printed solutions.  Lattice 1a
    is translation invariant, so its section is closed periodically;
    lattice 2a has a physical edge at n = 0 and is left open.
    """
    case = ss.spec.case if ss.spec is not None else None
    if case not in (1, 2):
        raise UnsupportedCase(f"momenta tables exist only for cases 1 and 2, not {case}")
    if closure is None:
        closure = "periodic" if rep.kind == "1a" else "open"
    P = momenta_operators_raw(rep, ss)
    tables = tilde_R_tables(rep, ss)
    resid = 0.0
    for Pt, Rt in zip(P, tables):
        z = np.zeros_like(Rt)
        resid = max(resid, np.abs(Pt - np.block([[Rt, z], [z, Rt.conj().T]])).max())
    m = mass_of(rep, ss)
    spectra = []
    for t in range(4):
        C = _solution_section(rep, ss, P[t], m, closure)
        spectra.append(spectrum_report(C, tol, label=str(t)))
    return MomentaReport(P, tables, float(resid), spectra, m, closure)


def spectral_claims(case_id: int, m_regime: str) -> dict:
    """Expected spectral behaviour of P~^t on the solution span."""
    if case_id == 1:
        return {"kind": "some_nonreal", "operators": [1, 2]}
    if case_id == 2 and m_regime == "m>0":
        return {"kind": "some_nondiagonalizable", "operators": [0, 1, 2, 3]}
    if case_id == 2 and m_regime == "m=0":
        return {"kind": "all_real_diagonalizable", "operators": [0, 1, 2, 3]}
    raise UnsupportedCase(f"no spectral statement for case {case_id}, {m_regime}")


def claim_holds(claim: dict, spectra: list[SpectrumReport]) -> bool:
    ops = [spectra[t] for t in claim["operators"]]
    if claim["kind"] == "some_nonreal":
        return any(not s.all_real for s in ops)
    if claim["kind"] == "some_nondiagonalizable":
        return any(not s.diagonalizable for s in ops)
    return all(s.all_real and s.diagonalizable for s in ops)


def dirac_report(spec: CaseSpec, kind: str, params: dict, N: int, ss, tol: float = 1e-9) -> dict:
    """JSON-ready summary: mass, solutions and momenta spectra."""
    rep = build_rep(kind, params, N, spec)
    sol = solve_dirac(rep, ss, tol)
    report = {
        "case": spec.case,
        "params": {**spec.params, "s": spec.s},
        "rep": kind,
        "rep_params": {k: _jsonable(v) for k, v in rep.params.items()},
        "N": rep.dim,
        "mass": sol.mass,
        "solution_dim": len(sol.vectors),
        "printed_families": sol.labels,
        "printed_rank": sol.printed_rank,
        "max_residual": sol.residual,
        "spectra": [],
    }
    try:
        mom = momenta_operators(rep, ss)
    except UnsupportedCase:
        return report
    report["table_residual"] = mom.table_residual
    report["closure"] = mom.closure
    report["spectra"] = [s.to_json() for s in mom.spectra]
    return report


def _jsonable(v):
    if isinstance(v, complex):
        return v.real if v.imag == 0 else [v.real, v.imag]
    return v
