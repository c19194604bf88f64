import math

import pytest
from hypothesis import given, settings, strategies as st

from imdyn import geometry as geo
from imdyn.errors import DegenerateChainError, DomainError


def test_cell_areas():
    a = geo.cell_areas()
    assert a.cell_spot == math.pi / 6
    assert a.cells_per_node == pytest.approx(4.0, abs=1e-15)
    assert a.node_orientation is geo.Orientation.NEGATIVE


def test_chain_ratios_at_2_3():
    c = geo.chain_ratios(2.3)
    assert c.curvature == pytest.approx(2.2, rel=0.02)
    assert c.area == pytest.approx(1.69, rel=0.02)
    with pytest.raises(DegenerateChainError):
        geo.chain_ratios(3.0)


@settings(max_examples=200)
@given(st.floats(0.01, 2.99))
def test_curvature_is_eig_times_area(g):
    c = geo.chain_ratios(g)
    assert c.curvature == pytest.approx(c.eig * c.area, rel=1e-15)


def test_total_area():
    assert geo.total_area(1.0, 2.3, 1).area == 0.0
    assert geo.total_area(1.0, 2.3, 2).area == pytest.approx(math.pi * ((3 / 2.3) ** 2 - 1))
    # the quoted hand value 2.215 is the same expression rounded; 2.2033 is exact
    assert geo.total_area(1.0, 2.3, 2).area == pytest.approx(2.215, rel=0.01)
    assert geo.total_area(2.0, 2.3, 3).area == pytest.approx(4 * geo.total_area(1.0, 2.3, 3).area)
    assert len(geo.area_series(1.0, 2.3, 5)) == 5


@settings(max_examples=200)
@given(st.floats(1e-3, 1e3))
def test_bits_from_area_matches_six_alpha_squared(alpha):
    assert geo.bits_from_area(math.pi * alpha * alpha) == pytest.approx(geo.bits_enfolded(alpha), rel=1e-14)


def test_bits_enfolded():
    assert geo.bits_enfolded(1.0) == 6.0 and geo.bits_enfolded(2.0) == 24.0


def test_rotation_pinned_examples():
    assert geo.rotation(8, 1.0, pin_ratio=True).C_R_asymptotic == pytest.approx(3.365, abs=0.01)
    assert geo.rotation(8, 1.0, pin_ratio=True).C_R_asymptotic == pytest.approx(3 * math.pi / 8 * 1.3 ** 4)
    assert geo.rotation(22, 476.4, pin_ratio=True).T_R_asymptotic == pytest.approx(0.005, rel=0.1)
    assert geo.rotation(22, 1.0, pin_ratio=True).T_R_asymptotic == pytest.approx(2.45, rel=0.02)
    assert geo.rotation(8, 1.0, pin_ratio=True).T_R_asymptotic == pytest.approx(5.6, rel=0.02)


def test_rotation_exact_ratio_examples_within_three_percent():
    # with the exact 3/2.3 growth the C_R and short-chain T_R examples stay within 3%
    assert geo.rotation(8, 1.0, 2.3).C_R_asymptotic == pytest.approx(3.366, rel=0.03)
    assert geo.rotation(8, 1.0, 2.3).T_R_asymptotic == pytest.approx(5.6, rel=0.03)


def test_rotation_finite_form_is_kept():
    r = geo.rotation(22, 1.0, pin_ratio=True)
    assert r.T_R == pytest.approx(44 / (1.3 ** 11 - 1))
    assert r.T_R > r.T_R_asymptotic


@settings(max_examples=200)
@given(m=st.integers(1, 40), alpha=st.floats(1e-2, 1e3), g=st.floats(0.5, 2.9), pin=st.booleans())
def test_rotation_time_speed_product(m, alpha, g, pin):
    r = geo.rotation(2 * m, alpha, g, pin_ratio=pin)
    assert r.T_R * r.C_R == pytest.approx(6 * math.pi, rel=1e-14)
    assert r.T_R_asymptotic * r.C_R_asymptotic == pytest.approx(6 * math.pi, rel=1e-12)


def test_rotation_rejects_odd_dimension():
    with pytest.raises(DomainError):
        geo.rotation(7, 1.0, 2.3)


def test_rotation_correction():
    rc = geo.rotation_correction()
    assert rc.k_it_cubed == pytest.approx(1.525, rel=0.01)
    assert rc.gamma_m == pytest.approx(2.292, abs=1e-3)
    assert rc.literal_k_it == pytest.approx(math.sqrt(2))
    assert rc.k_it_conflict
    assert 1 / math.cos(math.pi / 6) == pytest.approx(rc.k_it, abs=1e-3)


def test_interaction_budget():
    b = geo.interaction_budget(4)
    assert (b.S_m, b.N, b.N_em) == (1.0, 4.0, 1.0)
    z = geo.interaction_budget(0)
    assert (z.S_m, z.N, z.N_em, z.S_em) == (0.0,) * 4
    assert geo.interaction_budget(172).N_em == 43


def test_geometry_rows():
    rows = geo.geometry_rows(8, 1.0, 2.3, pin_ratio=True)
    assert [r["m"] for r in rows] == [1, 2, 3, 4]
    assert rows[-1]["T_R"] * rows[-1]["C_R"] == pytest.approx(6 * math.pi)
