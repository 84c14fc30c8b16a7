"""Grid-wide numerical checks of every tabulated value and identity."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import qalgebra as qa
from . import reference
from .catalog import CaseSpec, default_grid
from .diracsolve import (
    build_rep,
    build_U,
    claim_holds,
    classical_dirac_operator,
    classical_solutions,
    mass_of,
    momenta_operators,
    relation_residual,
    solve_dirac,
    spectral_claims,
)
from .matrixcore import flip
from .structures import (
    StructureSet,
    braid_residual,
    clifford_residual,
    f_product_residual,
    selfadjoint_residual,
    structural_residuals,
    structures_for,
)

GROUPS = ("tables", "clifford", "structure", "calculus", "dirac", "spectral", "classical")


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    where: str
    value: float
    tol: float
    passed: bool
    fatal: bool = True

    def line(self) -> str:
        mark = "PASS" if self.passed else ("FAIL" if self.fatal else "NOTE")
        return f"{mark} {self.where}: {self.group}/{self.name} = {self.value:.3e} (tol {self.tol:.0e})"


class _Collector:
    def __init__(self, where: str):
        self.where = where
        self.checks: list[Check] = []

    def at_most(self, group, name, value, tol, fatal=True):
        value = float(value)
        self.checks.append(Check(group, name, self.where, value, tol, bool(value <= tol), fatal))

    def equal(self, group, name, value, expected):
        ok = value == expected
        self.checks.append(Check(group, name, self.where, float(value), 0.0, bool(ok)))


def tolerances(base: float = 1e-9) -> dict:
    return {
        "table": base,
        "calculus": 10 * base,
        "assoc_relative": 1e3 * base,
        "solution": 10 * base,
    }


def _perturbed_gamma(ss: StructureSet, size: float):
    gam = [g.copy() for g in ss.gamma]
    gam[1][0, 2] += size
    return gam


def check_tables(ss, spec, out, tol):
    out.at_most("tables", "metric", np.abs(ss.g - reference.metric(spec)).max(), tol["table"])
    err = max(np.abs(a - b).max() for a, b in zip(ss.Ai, reference.gamma_blocks(spec)))
    out.at_most("tables", "gamma_blocks", err, tol["table"])
    out.at_most("tables", "K", np.abs(ss.K - reference.spinor_metric(spec)).max(), tol["table"])


def check_structure(ss, out, tol):
    res = structural_residuals(ss)
    for key in ("Vinv_V", "R_squared", "Rg_eq_g", "g_hermitian"):
        out.at_most("structure", key, res[key], tol["table"])
    out.equal("structure", "rank_R_minus_1", res["rank_R_minus_1"], 6)
    out.equal("structure", "rank_R_plus_1", res["rank_R_plus_1"], 10)
    out.at_most("structure", "f_homomorphism", f_product_residual(ss), tol["table"])
    out.at_most("structure", "F_selfadjoint", selfadjoint_residual(ss), tol["table"])
    out.at_most("structure", "braid", braid_residual(ss), tol["table"], fatal=False)


def check_calculus(ss, out, tol, pairs=50):
    rt = qa.build_rewrite_table(ss.R)
    out.at_most("calculus", "rewrite_table", qa.table_residual(rt), tol["table"])
    for d in (2, 3, 4):
        expect = qa.classical_dimension(d)
        out.equal("calculus", f"pbw_dim_{d}", qa.pbw_dimension(ss.R, d), expect)
        out.equal("calculus", f"normal_form_span_{d}", qa.normal_form_span(rt, d), expect)
    assoc = qa.associativity_defect(rt, pairs=pairs)
    out.at_most("calculus", "assoc_triples", assoc["triples"], tol["table"])
    out.at_most("calculus", "assoc_pairs_relative", assoc["pairs_relative"], tol["assoc_relative"])
    dirac_sq, box_comm = 0.0, 0.0
    for d in range(4):
        for m in qa.monomials(d):
            f = qa.Poly({m: 1})
            box = qa.laplacian(f, ss, rt)
            for i in range(4):
                lhs = qa.laplacian(qa.derive(i, f, ss, rt), ss, rt)
                box_comm = max(box_comm, lhs.distance(qa.derive(i, box, ss, rt)))
            for a in range(4):
                phi = qa.Bispinor.basis(a, f)
                twice = qa.dirac_apply(qa.dirac_apply(phi, ss, rt), ss, rt)
                dirac_sq = max(dirac_sq, twice.distance(qa.Bispinor.basis(a, box)))
    out.at_most("calculus", "dirac_squared_is_box", dirac_sq, tol["calculus"])
    out.at_most("calculus", "box_commutes_with_d", box_comm, tol["calculus"])
    return rt


def dirac_samples(spec: CaseSpec) -> list[tuple[str, dict, float]]:
    """(kind, params, expected mass) sample points for cases 1 and 2."""
    if spec.case == 1:
        t = spec.t
        return [
            ("1a", {"a": 1.0, "d": 1.0, "b": 0.5}, np.sqrt(1 / t - t * 0.25)),
            ("1a", {"a": 2.0, "d": 0.7, "b": 0.3}, np.sqrt(2 * 0.7 / t - t * 0.09)),
            ("1a", {"a": 1.0, "d": t * t * 0.25, "b": 0.5}, 0.0),
            ("1b", {"a": 1.0, "d": 2.0, "b": 0.0}, np.sqrt(2.0 / t)),
            ("1b", {"a": 0.0, "d": 2.0, "b": 0.0}, 0.0),
            ("1b", {"a": 2.0, "d": 0.0, "b": 0.0}, 0.0),
        ]
    if spec.case == 2:
        c = spec.c
        return [
            ("2a", {"a": 1.0, "d": 1.0}, c),
            ("2a", {"a": 3.0, "d": 0.5}, c * np.sqrt(1.5)),
            ("2a", {"a": 0.0, "d": 1.0}, 0.0),
            ("2b", {"a": 1.0, "b": 0.0}, 0.0),
        ]
    return []


def well_scaled_size(kind, params, spec, N_max, limit=1e4) -> int:
    """Largest truncation N <= N_max whose momentum entries stay below limit.

    For 1a the diagonal entries grow like t^(-2n), and products of two of
    them lose about eps * |p|^2 in cancellations.
    """
    N = N_max
    while N > 4:
        rep = build_rep(kind, params, N, spec)
        if max(np.abs(q).max() for q in rep.momenta()) <= limit:
            break
        N -= 1
    return N


def check_dirac(ss, spec, out, tol, N=12):
    for kind, params, mass in dirac_samples(spec):
        rep = build_rep(kind, params, well_scaled_size(kind, params, spec, N), spec)
        label = kind + "(" + ",".join(f"{k}={v:g}" for k, v in params.items()) + ")"
        out.at_most("dirac", f"{label} relations", relation_residual(rep, ss), 10 * tol["solution"])
        out.at_most("dirac", f"{label} mass", abs(mass_of(rep, ss) - mass), tol["table"])
        sol = solve_dirac(rep, ss)
        out.at_most("dirac", f"{label} printed_residual", sol.residual, tol["solution"])
        out.equal("dirac", f"{label} kernel_dim_vs_printed", len(sol.vectors), sol.printed_rank)
        mom = momenta_operators(rep, ss)
        out.at_most("dirac", f"{label} momenta_tables", mom.table_residual, tol["table"])


def spectral_points(spec: CaseSpec) -> list[tuple[str, dict, str]]:
    if spec.case == 1 and spec.t < 1:
        return [("1a", {"a": 1.0, "d": 1.0, "b": 0.5}, "m>0")]
    if spec.case == 2:
        return [("2a", {"a": 1.0, "d": 1.0}, "m>0"), ("2a", {"a": 0.0, "d": 1.0}, "m=0"), ("2b", {"a": 1.0, "b": 0.0}, "m=0")]
    return []


def check_spectral(ss, spec, out, N=16):
    for kind, params, regime in spectral_points(spec):
        claim = spectral_claims(spec.case, regime)
        size = well_scaled_size(kind, params, spec, N)
        mom = momenta_operators(build_rep(kind, params, size, spec), ss)
        ok = claim_holds(claim, mom.spectra)
        worst_im = max(float(np.abs(np.imag(s.eigenvalues)).max()) for s in mom.spectra)
        out.checks.append(Check("spectral", f"{kind} {regime} {claim['kind']}", out.where, worst_im, 0.0, ok))


def check_classical(ss, out, tol):
    """Undeformed point: case 1 with t = 1."""
    t = tol["table"]
    out.at_most("classical", "R_is_flip", np.abs(ss.R - flip(4, 4)).max(), t)
    out.at_most("classical", "metric", np.abs(ss.g - np.diag([1, -1, -1, -1])).max(), t)
    for i in range(4):
        ref = classical_dirac_operator(np.eye(4)[i])
        out.at_most("classical", f"gamma{i}", np.abs(ss.gamma[i] - ref).max(), t)
    # rows (i,C), columns (D,j)
    delta = np.einsum("ij,CD->iCDj", np.eye(4), np.eye(2)).reshape(8, 8)
    out.at_most("classical", "f_is_delta_epsilon", np.abs(ss.G - delta).max(), t)
    F_expect = np.einsum("tr,la->trla", np.eye(4), np.eye(4))
    out.at_most("classical", "F_is_identity", np.abs(ss.F - F_expect).max(), t)
    worst = 0.0
    for P in ([1, 0, 0, 0], [2, 0.3, -0.5, 1.1], [1, 0, 0, -1], [1, 1, 0, 0], [1.3, 0.5, 1.2, 0.0]):
        sol = classical_solutions(P)
        op = classical_dirac_operator(P) - sol.mass * np.eye(4)
        for v in sol.vectors:
            worst = max(worst, np.abs(op @ v).max())
        kernel = 4 - np.linalg.matrix_rank(op, tol=1e-9)
        out.equal("classical", f"solution_dim P={P}", len(sol.vectors), kernel)
    out.at_most("classical", "plane_wave_residual", worst, t)
    spec = ss.spec
    rep = build_rep("1b", {"a": 1.7, "d": 0.6, "b": 0.0}, 4, spec)
    P = [(1.7 + 0.6) / 2, 0.0, 0.0, -(1.7 - 0.6) / 2]  # lower-index momenta
    out.at_most("classical", "U_is_P_gamma", np.abs(build_U(rep, ss) - classical_dirac_operator(P)).max(), t)


def verify_case(
    spec: CaseSpec,
    groups=GROUPS,
    tol: dict | None = None,
    gamma_fault: float = 0.0,
) -> list[Check]:
    tol = tol or tolerances()
    ss = structures_for(spec)
    out = _Collector(spec.label())
    if "tables" in groups:
        check_tables(ss, spec, out, tol)
    if "clifford" in groups:
        gam = _perturbed_gamma(ss, gamma_fault) if gamma_fault else None
        out.at_most("clifford", "clifford_residual", clifford_residual(ss, gam), tol["table"])
    if "structure" in groups:
        check_structure(ss, out, tol)
    if "calculus" in groups:
        check_calculus(ss, out, tol)
    if "dirac" in groups and spec.case in (1, 2):
        check_dirac(ss, spec, out, tol)
    if "spectral" in groups and spec.case in (1, 2):
        check_spectral(ss, spec, out)
    if "classical" in groups and spec.case == 1 and spec.t == 1 and spec.s == 1:
        check_classical(ss, out, tol)
    return out.checks


def run_grid(
    specs=None,
    groups=GROUPS,
    tol: dict | None = None,
    gamma_fault: float = 0.0,
    jobs: int = 1,
) -> list[Check]:
    """Run verify_case over every grid point; results in grid order."""
    specs = default_grid() if specs is None else list(specs)
    work = lambda sp: verify_case(sp, groups, tol, gamma_fault)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            parts = list(pool.map(work, specs))
    else:
        parts = [work(sp) for sp in specs]
    return list(itertools.chain.from_iterable(parts))


def first_failure(checks: list[Check]) -> Check | None:
    return next((c for c in checks if c.fatal and not c.passed), None)


def checks_to_json(checks: list[Check]) -> list[dict]:
    return [asdict(c) for c in checks]
