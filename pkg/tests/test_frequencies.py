from fractions import Fraction as F

import mpmath
import pytest

from symfreq import balls
from symfreq.balls import PrecisionContext, log2_of_fraction
from symfreq.frequencies import (
    evaluate_form,
    frequency_value,
    h_series,
    h_value,
    index_range,
    residual_report,
    s_value,
    u_value,
)
from symfreq.linalg import LinearForm, S_SPACE, U_SPACE

CTX = PrecisionContext(128)


class TestHValue:
    def test_h41_is_one_half(self):
        assert h_value(4, 1, CTX).contains_fraction(F(1, 2))

    def test_residue_classes_sum_to_one(self):
        total = balls.ball_exact_zero(CTX.wp)
        for d in (1, 2, 3):
            total = balls.ball_add(total, h_value(3, d, CTX), CTX.wp)
        assert total.contains_fraction(1)

    def test_inhomogeneous_identity_m12(self):
        ctx = PrecisionContext(256)
        acc = h_value(12, 1, ctx)
        for d in (6, 7, 8):
            acc = balls.ball_sub(acc, h_value(12, d, ctx), ctx.wp)
        assert acc.contains_fraction(F(1, 3))

    def test_strictly_positive(self):
        for m, d in ((5, 3), (12, 11), (12, 12), (7, 7)):
            assert h_value(m, d, CTX).is_positive()

    def test_index_errors(self):
        with pytest.raises(ValueError):
            h_value(12, 0, CTX)
        with pytest.raises(ValueError):
            h_value(12, 13, CTX)


class TestHSeries:
    def test_m4_d1(self):
        b = h_series(4, 1, 10**6)
        assert b.contains_fraction(F(1, 2))
        assert b.rad <= mpmath.mpf(2e-6)

    def test_total_frequency(self):
        assert h_series(1, 1, 10**6).contains_fraction(1)

    def test_agrees_with_closed_form(self):
        hv = h_value(5, 2, CTX)
        hs = h_series(5, 2, 10**6)
        assert abs(hv.mid - hs.mid) < 1e-5
        assert hv.overlaps(hs)

    def test_term_bound_validation(self):
        with pytest.raises(ValueError):
            h_series(10, 1, 5)


class TestSValue:
    def test_boundary_m4(self):
        assert s_value(4, 1, CTX).contains_fraction(F(1, 2))

    def test_m6_log2_three_halves(self):
        assert s_value(6, 1, CTX).overlaps(log2_of_fraction(F(3, 2), CTX))

    def test_pair_of_h_values(self):
        # away from the boundary the symmetric frequency is H_d + H_{m-2-d}
        s = s_value(10, 3, CTX)
        pair = balls.ball_add(h_value(10, 3, CTX), h_value(10, 5, CTX), CTX.wp)
        assert s.overlaps(pair)

    def test_even_boundary_is_single_h(self):
        s = s_value(10, 4, CTX)
        assert s.overlaps(h_value(10, 4, CTX))

    def test_odd_modulus_pairing_all_indices(self):
        m = 9
        for d in range(1, m // 2):
            s = s_value(m, d, CTX)
            pair = balls.ball_add(h_value(m, d, CTX), h_value(m, m - 2 - d, CTX), CTX.wp)
            assert s.overlaps(pair), d

    def test_positive(self):
        for m in (7, 12, 20):
            for d in range(1, m // 2):
                assert s_value(m, d, CTX).is_positive()

    def test_index_errors(self):
        with pytest.raises(ValueError):
            s_value(10, 5, CTX)
        with pytest.raises(ValueError):
            s_value(10, 0, CTX)


class TestUValue:
    def test_u1_exact_zero(self):
        for m in (4, 27, 96):
            b = u_value(m, 1, CTX)
            assert b.mid == 0 and b.rad == 0

    def test_m4_u2(self):
        assert u_value(4, 2, CTX).contains_fraction(F(1, 2))

    def test_second_difference_matches_s(self):
        # S_d agrees with 2U_{d+1} - U_d - U_{d+2}
        m, d = 27, 3
        u = balls.ball_mul_int(u_value(m, d + 1, CTX), 2, CTX.wp)
        u = balls.ball_sub(u, u_value(m, d, CTX), CTX.wp)
        u = balls.ball_sub(u, u_value(m, d + 2, CTX), CTX.wp)
        assert u.overlaps(s_value(m, d, CTX))

    def test_index_errors(self):
        with pytest.raises(ValueError):
            u_value(10, 6, CTX)


def test_frequency_value_dispatch():
    fv = frequency_value("U", 27, 1, CTX)
    assert fv.kind == "U" and fv.index == 1 and fv.value.rad == 0
    with pytest.raises(ValueError):
        frequency_value("Q", 27, 1, CTX)
    assert index_range("H", 12) == (1, 12)
    assert index_range("S", 12) == (1, 5)
    assert index_range("U", 12) == (1, 6)


class TestEvaluateForm:
    def test_zero_form(self):
        b = evaluate_form(LinearForm.zero(U_SPACE, 27), CTX)
        assert b.mid == 0 and b.rad == 0

    def test_paper_relation_residual(self):
        ctx = PrecisionContext(256)
        form = LinearForm.from_map(
            U_SPACE, 27, {6: F(-1), 3: F(1), 2: F(1), 7: F(1), 8: F(-1), 10: F(-1), 11: F(1)}
        )
        res = evaluate_form(form, ctx)
        assert res.contains_zero()
        assert res.rad < mpmath.ldexp(1, -200)

    def test_perturbed_residual_excludes_zero(self):
        ctx = PrecisionContext(256)
        form = LinearForm.from_map(
            U_SPACE, 27, {6: F(-1), 3: F(1), 2: F(2), 7: F(1), 8: F(-1), 10: F(-1), 11: F(1)}
        )
        res = evaluate_form(form, ctx)
        assert not res.contains_zero()

    def test_s_space_form(self):
        form = LinearForm.from_map(S_SPACE, 10, {1: F(-1), 3: F(2), 4: F(2)})
        assert evaluate_form(form, CTX).contains_zero()

    def test_residual_report_verdicts(self):
        good = LinearForm.from_map(U_SPACE, 12, {2: F(-2), 5: F(1)})
        rep = residual_report(good, CTX)
        assert rep["supported"]
        bad = LinearForm.from_map(U_SPACE, 12, {2: F(-2), 5: F(1), 6: F(1)})
        assert not residual_report(bad, CTX)["supported"]


def test_telescoping_small():
    # U_{k+1} equals the weighted sum min(d, k) * S_d over all d
    for m in (7, 12):
        half = m // 2
        svals = {d: s_value(m, d, CTX) for d in range(1, half)}
        for k in range(1, half):
            rhs = balls.ball_exact_zero(CTX.wp)
            for d in range(1, half):
                rhs = balls.ball_add(rhs, balls.ball_mul_int(svals[d], min(d, k), CTX.wp), CTX.wp)
            assert u_value(m, k + 1, CTX).overlaps(rhs), (m, k)
