import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CLASSICAL, cached_structures
from qmink import reference
from qmink.catalog import CaseSpec, build_lorentz_data
from qmink.matrixcore import flip
from qmink.structures import (
    StructureInconsistent,
    braid_residual,
    build_structures,
    clifford_residual,
    f_functional,
    f_product_residual,
    momenta_coefficients,
    selfadjoint_residual,
    structural_residuals,
    structures_for,
)


def test_case1_metric():
    g = cached_structures(CaseSpec(1, t=0.7)).g
    assert np.allclose(g, np.diag([0.7, -1 / 0.7, -1 / 0.7, -0.7]), atol=1e-12)


def test_case7_metric():
    g = structures_for(CaseSpec(7, t=0.5)).g
    assert np.allclose(g, np.diag([-2, 0.5, 2, 0.5]), atol=1e-12)


def test_classical_point():
    ss = cached_structures(CLASSICAL)
    assert np.allclose(ss.R, flip(4, 4))
    s = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    z = np.zeros((2, 2))
    assert np.allclose(ss.gamma[0], np.block([[z, s[0]], [s[0], z]]))
    for i in (1, 2, 3):
        assert np.allclose(ss.gamma[i], np.block([[z, -s[i]], [s[i], z]]))
    assert clifford_residual(ss) < 1e-12


def test_case4_A0_from_construction():
    # the construction gives [[c^2 + 1, 2c], [2c, 1]]
    A0 = structures_for(CaseSpec(4, c=0.5)).Ai[0]
    assert np.allclose(A0, [[1.25, 1], [1, 1]], atol=1e-12)


def test_case3_K():
    assert np.allclose(structures_for(CaseSpec(3, c=1.0, r=0.0)).K, [[1, -2], [0, 1]])


@pytest.mark.parametrize("spec", [CaseSpec(2, c=1.3), CaseSpec(6, c=0.8), CaseSpec(2, c=1.3, s=-1)])
def test_clifford_off_grid(spec):
    assert clifford_residual(structures_for(spec)) <= 1e-9


def test_tables_and_identities_on_grid(grid_spec):
    ss = cached_structures(grid_spec)
    assert np.abs(ss.g - reference.metric(grid_spec)).max() <= 1e-9
    for a, b in zip(ss.Ai, reference.gamma_blocks(grid_spec)):
        assert np.abs(a - b).max() <= 1e-9
    assert np.abs(ss.K - reference.spinor_metric(grid_spec)).max() <= 1e-9
    res = structural_residuals(ss)
    for key in ("Vinv_V", "R_squared", "Rg_eq_g", "g_hermitian"):
        assert res[key] <= 1e-9, key
    assert res["rank_R_minus_1"] == 6
    assert clifford_residual(ss) <= 1e-9
    assert braid_residual(ss) <= 1e-9
    assert f_product_residual(ss) <= 1e-9
    assert selfadjoint_residual(ss) <= 1e-9


def test_perturbed_gamma_fails_clifford():
    ss = cached_structures(CaseSpec(2, c=1.0))
    gam = [g.copy() for g in ss.gamma]
    gam[2][1, 3] += 1e-3
    assert clifford_residual(ss, gam) > 1e-4


def test_f_table_classical_vs_deformed():
    delta = np.einsum("ij,CD->iCDj", np.eye(4), np.eye(2)).reshape(8, 8)
    assert np.allclose(f_functional(cached_structures(CLASSICAL)), delta)
    assert not np.allclose(f_functional(cached_structures(CaseSpec(1, t=0.7))), delta)


def test_momenta_coefficients_classical_vs_deformed():
    ident = np.einsum("tr,la->trla", np.eye(4), np.eye(4))
    assert np.allclose(momenta_coefficients(cached_structures(CLASSICAL)), ident)
    assert not np.allclose(momenta_coefficients(cached_structures(CaseSpec(1, t=0.7))), ident)


def test_broken_data_is_rejected():
    ld = build_lorentz_data(CaseSpec(1, t=0.7))
    # E' no longer pairs with E, so L (and hence R) stops squaring to 1
    bad = type(ld)(**{**ld.__dict__, "Eprime4": ld.Eprime4 * 1.1})
    with pytest.raises(StructureInconsistent):
        build_structures(bad)


def test_tensor_names():
    names = cached_structures(CLASSICAL).tensors()
    for key in ("g", "R", "gamma0", "A3", "K", "F23", "V", "Vinv"):
        assert key in names


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 3, 4, 6]), st.floats(0.1, 3.0), st.floats(0.0, 2.0), st.sampled_from([1, -1]))
def test_clifford_random_c_cases(case, c, r, s):
    spec = CaseSpec(case, c=c, r=r if case == 3 else None, s=s)
    ss = structures_for(spec)
    scale = max(1.0, np.abs(ss.g).max())
    assert clifford_residual(ss) <= 1e-9 * scale
    assert np.abs(ss.g - reference.metric(spec)).max() <= 1e-9 * scale


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([1, 5, 7]), st.floats(0.05, 0.99), st.sampled_from([1, -1]))
def test_clifford_random_t_cases(case, t, s):
    ss = structures_for(CaseSpec(case, t=t, s=s))
    assert clifford_residual(ss) <= 1e-9 * max(1.0, np.abs(ss.g).max())
