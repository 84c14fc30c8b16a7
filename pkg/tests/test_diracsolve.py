import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CLASSICAL, cached_structures
from qmink.catalog import CaseSpec, InvalidParameter
from qmink.diracsolve import (
    NegativeMassSquare,
    NotScalar,
    TachyonicMomentum,
    UnsupportedCase,
    build_rep,
    build_U,
    claim_holds,
    classical_dirac_operator,
    classical_solutions,
    dirac_report,
    mass_of,
    momenta_operators,
    relation_residual,
    solve_dirac,
    spectral_claims,
    to_spinor_layout,
)

C1 = CaseSpec(1, t=0.7)
C2 = CaseSpec(2, c=0.5)


def test_case1_mass_formula():
    rep = build_rep("1a", {"a": 1, "d": 1, "b": 0.5}, 12, C1)
    assert abs(mass_of(rep, cached_structures(C1)) - np.sqrt(1 / 0.7 - 0.7 * 0.25)) < 1e-9


def test_case2_masses():
    ss = cached_structures(C2)
    assert abs(mass_of(build_rep("2a", {"a": 1, "d": 1}, 12, C2), ss) - 0.5) < 1e-9
    assert mass_of(build_rep("2b", {"a": 1, "b": 0}, 12, C2), ss) == 0.0


@pytest.mark.parametrize(
    "spec, kind, params, rank",
    [
        (C1, "1a", {"a": 1, "d": 1, "b": 0.5}, 18),
        (C1, "1a", {"a": 1, "d": 0.49 * 0.25, "b": 0.5}, None),
        (C1, "1b", {"a": 1, "d": 1, "b": 0}, 2),
        (C1, "1b", {"a": 0, "d": 2, "b": 0}, 2),
        (C2, "2a", {"a": 1, "d": 1}, 21),
        (C2, "2a", {"a": 0, "d": 1}, None),
        (C2, "2b", {"a": 1, "b": 0}, 2),
    ],
)
def test_printed_solutions(spec, kind, params, rank):
    ss = cached_structures(spec)
    rep = build_rep(kind, params, 12, spec)
    assert relation_residual(rep, ss) <= 1e-9
    sol = solve_dirac(rep, ss)
    assert sol.residual <= 1e-8
    assert sol.printed_rank == len(sol.vectors) > 0
    if rank is not None:
        assert sol.printed_rank == rank
    U = build_U(rep, ss)
    for v in sol.vectors:
        assert np.linalg.norm((U - sol.mass * np.eye(len(U))) @ v) <= 1e-8 * np.linalg.norm(U, 2)


def test_rep_errors():
    with pytest.raises(UnsupportedCase):
        build_rep("1a", {"a": 1, "d": 1, "b": 1}, 12, CaseSpec(3, c=1.0, r=0.0))
    with pytest.raises(InvalidParameter):
        build_rep("2a", {"a": 1, "d": 1}, 12, C1)
    with pytest.raises(InvalidParameter):
        build_rep("1a", {"a": 1, "d": 1, "b": 0.5}, 3, C1)
    with pytest.raises(InvalidParameter):
        build_rep("1a", {"a": 0, "d": 0, "b": 0.5}, 8, C1)
    with pytest.raises(InvalidParameter):
        build_rep("1b", {"a": 1, "d": 1, "b": 1}, 8, C1)
    with pytest.raises(InvalidParameter):
        build_rep("1a", {"a": 1, "d": 1}, 8, C1)


def test_negative_mass_square():
    rep = build_rep("1a", {"a": 1, "d": 0.01, "b": 0.5}, 8, C1)
    with pytest.raises(NegativeMassSquare):
        mass_of(rep, cached_structures(C1))


def test_ill_conditioned_truncation_is_reported():
    spec = CaseSpec(1, t=0.3)
    rep = build_rep("1a", {"a": 1, "d": 1, "b": 0.5}, 16, spec)
    with pytest.raises(NotScalar, match="smaller N"):
        mass_of(rep, cached_structures(spec))


def test_classical_plane_waves():
    for P in ([1, 0, 0, 0], [2, 0.3, -0.5, 1.1], [1, 0, 0, -1], [1, 1, 0, 0], [0, 0, 0, 0]):
        sol = classical_solutions(P)
        op = classical_dirac_operator(P) - sol.mass * np.eye(4)
        assert len(sol.vectors) == 4 - np.linalg.matrix_rank(op, tol=1e-9)
        for v in sol.vectors:
            assert np.abs(op @ v).max() < 1e-12
    with pytest.raises(TachyonicMomentum):
        classical_solutions([0, 1, 0, 0])


@settings(max_examples=40)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3), st.floats(0, 3))
def test_classical_plane_waves_random(p, extra):
    P0 = np.sqrt(sum(x * x for x in p)) + extra
    sol = classical_solutions([P0, *p])
    op = classical_dirac_operator([P0, *p]) - sol.mass * np.eye(4)
    if P0 > 1e-12:  # smaller momenta count as P = 0
        assert len(sol.vectors) == 2
    for v in sol.vectors:
        assert np.abs(op @ v).max() < 1e-9 * max(1.0, P0) * np.abs(v).max()


def test_classical_U_is_P_gamma():
    rep = build_rep("1b", {"a": 1.7, "d": 0.6, "b": 0}, 4, CLASSICAL)
    P = [(1.7 + 0.6) / 2, 0, 0, -(1.7 - 0.6) / 2]
    assert np.allclose(build_U(rep, cached_structures(CLASSICAL)), classical_dirac_operator(P))


def test_spinor_layout():
    v = np.arange(8)
    assert np.array_equal(to_spinor_layout(v, 2), [0, 4, 1, 5, 2, 6, 3, 7])


@pytest.mark.parametrize(
    "spec, kind, params, regime",
    [
        (C1, "1a", {"a": 1, "d": 1, "b": 0.5}, "m>0"),
        (C2, "2a", {"a": 1, "d": 1}, "m>0"),
        (C2, "2a", {"a": 0, "d": 1}, "m=0"),
        (C2, "2b", {"a": 1, "b": 0}, "m=0"),
    ],
)
def test_momenta_tables_and_claims(spec, kind, params, regime):
    rep = build_rep(kind, params, 16, spec)
    mom = momenta_operators(rep, cached_structures(spec))
    assert mom.table_residual <= 1e-9
    assert claim_holds(spectral_claims(spec.case, regime), mom.spectra)


def test_classical_momenta_are_real():
    rep = build_rep("1a", {"a": 1, "d": 1, "b": 0.5}, 12, CLASSICAL)
    mom = momenta_operators(rep, cached_structures(CLASSICAL))
    assert all(s.all_real and s.diagonalizable for s in mom.spectra)


def test_report_schema():
    report = dirac_report(C2, "2b", {"a": 1, "b": 0}, 12, cached_structures(C2))
    for key in ("case", "params", "rep", "N", "mass", "solution_dim", "spectra"):
        assert key in report
    assert report["solution_dim"] == 2 and report["mass"] == 0.0
    assert {"t", "eigenvalues", "all_real", "diagonalizable"} <= set(report["spectra"][0])
