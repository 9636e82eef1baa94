import io

import numpy as np
import pytest

from sicpovm.basis import gell_mann_basis, gell_mann_indices
from sicpovm.bounds import (
    RootFindingError,
    SingularBlockError,
    _gershgorin,
    _padded,
    block_det,
    border_matrix_v,
    border_matrix_w,
    char_poly_v,
    char_poly_w,
    dimension_scan,
    extreme_roots,
    v_tilde,
    w_tilde,
    weyl_bounds,
    write_scan_csv,
)
from sicpovm.hermitian import eigvals

from oracles import direct_det


def test_border_matrix_v_d2():
    assert np.allclose(border_matrix_v(2), np.array([[0, 1 - 1j], [1 + 1j, 0]]) / np.sqrt(2))


@pytest.mark.parametrize("d", [3, 5])
def test_border_matrix_is_off_diagonal_part_of_sum(d):
    f = gell_mann_basis(d).sum_f
    off = f - np.diag(np.diag(f))
    assert np.allclose(border_matrix_v(d), off, atol=1e-15)


def test_border_matrix_w_is_border_of_r12():
    d = 4
    b = gell_mann_basis(d)
    r12 = b.sum_f - d * (d + 1) * b.elements[0]
    off = r12 - np.diag(np.diag(r12))
    assert np.allclose(border_matrix_w(d), off, atol=1e-13)


def test_char_poly_v_base_root():
    assert char_poly_v(2, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert char_poly_v(2, -1.0) == pytest.approx(0.0, abs=1e-15)


def test_char_poly_v_base_case_sign():
    # the direct determinant of the 2x2 block is 2 v^2 - 2
    for v in (-3.0, 0.0, 0.5, 2.0):
        assert char_poly_v(2, v) == pytest.approx(direct_det(v_tilde(2, v)).real, abs=1e-13)
        assert char_poly_v(2, v) == pytest.approx(2 * v * v - 2, abs=1e-13)


def test_char_poly_v_d3_at_zero():
    ref = direct_det(v_tilde(3, 0.0))
    assert abs(ref.imag) < 1e-12
    assert char_poly_v(3, 0.0) == pytest.approx(ref.real, rel=1e-9)


def test_char_poly_v_d5_random_points():
    rng = np.random.default_rng(5)
    for v in rng.uniform(-10, 10, 20):
        ref = direct_det(v_tilde(5, v)).real
        assert char_poly_v(5, v) == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("d", range(2, 11))
def test_recursion_matches_direct_det_on_grid(d):
    for mat, poly, tilde in (
        (border_matrix_v(d), char_poly_v, v_tilde),
        (border_matrix_w(d), char_poly_w, w_tilde),
    ):
        lo, hi = _padded(_gershgorin(mat))
        for x in np.linspace(lo, hi, 50):
            ref = direct_det(tilde(d, x)).real
            assert poly(d, x) == pytest.approx(ref, rel=1e-8)


def test_char_poly_w_d2_closed_form():
    for w in (-9.0, -1.0, 0.3, 4.0):
        assert char_poly_w(2, w) == pytest.approx(direct_det(w_tilde(2, w)).real, abs=1e-12)


def test_char_poly_rejects_small_d():
    with pytest.raises(ValueError):
        char_poly_v(1, 0.0)
    with pytest.raises(ValueError):
        char_poly_w(1, 0.0)


def test_block_det_identity():
    rng = np.random.default_rng(1)
    for _ in range(10):
        m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        a, b, c, dd = m[:2, :2], m[:2, 2:], m[2:, :2], m[2:, 2:]
        assert block_det(a, b, c, dd) == pytest.approx(np.linalg.det(m), rel=1e-10)


def test_block_det_scalar_corner():
    m = np.array([[2.0, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert block_det(m[0, 0], m[0, 1:], m[1:, 0], m[1:, 1:]) == pytest.approx(np.linalg.det(m))


def test_extreme_roots_quadratic():
    hi, lo = extreme_roots(lambda x: x * x - 4, (-10, 10))
    assert hi == pytest.approx(2, abs=1e-9) and lo == pytest.approx(-2, abs=1e-9)


def test_extreme_roots_base_case():
    hi, lo = extreme_roots(lambda x: char_poly_v(2, x), (-5, 5))
    assert hi == pytest.approx(1, abs=1e-9) and lo == pytest.approx(-1, abs=1e-9)


@pytest.mark.parametrize("d", [3, 6])
def test_extreme_roots_match_eigensolver(d):
    for mat, poly in ((border_matrix_v(d), char_poly_v), (border_matrix_w(d), char_poly_w)):
        w = eigvals(mat)
        hi, lo = extreme_roots(lambda x: poly(d, x), _padded(_gershgorin(mat)), expected=d)
        assert hi == pytest.approx(w[0], abs=1e-8)
        assert lo == pytest.approx(w[-1], abs=1e-8)


def test_extreme_roots_errors():
    with pytest.raises(RootFindingError):
        extreme_roots(lambda x: x * x + 1, (-3, 3), max_refine=1)
    with pytest.raises(ValueError):
        extreme_roots(lambda x: x, (1, 1))


def test_singular_inner_block_is_survivable():
    # V~_2 is singular at v = +-1, which the V~_3 step must invert
    with pytest.raises(SingularBlockError):
        char_poly_v(3, 1.0)
    hi, lo = extreme_roots(lambda x: char_poly_v(3, x), (-3.0, 3.0), n_grid=6)
    w = eigvals(border_matrix_v(3))
    assert hi == pytest.approx(w[0], abs=1e-8) and lo == pytest.approx(w[-1], abs=1e-8)


def test_weyl_bounds_d2_exact():
    rep = weyl_bounds(2)
    x = 3 * np.sqrt(1.5)
    assert rep.rnn_bounds[0] <= -x + 1e-9 and x - 1e-9 <= rep.rnn_bounds[1]
    assert rep.rnm_bounds[0] <= -x + 1e-9 and x - 1e-9 <= rep.rnm_bounds[1]
    assert rep.contains_all()


@pytest.mark.parametrize("d", range(3, 11))
def test_weyl_bounds_contain_and_are_conservative(d):
    rep = weyl_bounds(d)
    assert rep.recursion_discrepancy < 1e-8
    assert rep.contains_all()
    assert rep.conservative
    assert rep.t1_bound <= rep.t1_numeric
    assert abs(rep.t0_bound) <= abs(rep.t0_numeric)


@pytest.mark.parametrize("d", [3, 4, 7])
def test_weyl_bounds_against_each_operator(d):
    rep = weyl_bounds(d)
    b = gell_mann_basis(d)
    f = b.sum_f
    wf = eigvals(f)
    assert rep.f_bounds[0] - 1e-9 <= wf[-1] and wf[0] <= rep.f_bounds[1] + 1e-9
    for g, ix in zip(b.elements, gell_mann_indices(d)):
        w = eigvals(f - d * (d + 1) * g)
        iv = rep.rnn_bounds if ix.n == ix.m else rep.rnm_bounds
        assert iv[0] - 1e-9 <= w[-1] and w[0] <= iv[1] + 1e-9


def test_off_diagonal_borders_are_not_all_isospectral():
    # the border matrices of the R_nm are not all unitarily equivalent to W,
    # yet the W-based interval still contains every R_nm spectrum (checked above)
    d = 3
    b = gell_mann_basis(d)
    v = border_matrix_v(d)
    ref = eigvals(border_matrix_w(d))
    spreads = []
    for g, ix in zip(b.elements, gell_mann_indices(d)):
        if ix.n != ix.m:
            spreads.append(np.abs(eigvals(v - d * (d + 1) * g) - ref).max())
    spreads = np.array(spreads)
    assert spreads.min() < 1e-12
    assert spreads.max() > 0.1


def test_weyl_report_dict():
    out = weyl_bounds(3).to_dict()
    assert out["contains_all"] is True and out["conservative"] is True
    assert out["t1_gap"] >= 0 and isinstance(out["f_bounds"], list)


def test_scan_ratio_and_monotonicity():
    rows = dimension_scan(2, 10)
    assert rows[0].ratio == pytest.approx(1.0, abs=1e-9)
    ratios = [r.ratio for r in rows]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert all(0 < r <= 1 + 1e-9 for r in ratios)
    for r in rows:
        assert r.t_m == max(abs(r.t0), r.t1)


def test_scan_rejects_bad_range():
    with pytest.raises(ValueError):
        dimension_scan(3, 2)
    with pytest.raises(ValueError):
        dimension_scan(1, 2)


def test_scan_csv_format():
    buf = io.StringIO()
    write_scan_csv(dimension_scan(2, 3), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "d,t0,t1,t_m,ratio,a_tm"
    assert len(lines) == 3
    cells = lines[1].split(",")
    assert cells[0] == "2" and float(cells[4]) == pytest.approx(1.0)
