import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from symfreq.linalg import (
    LinearForm,
    RationalMatrix,
    S_SPACE,
    U_SPACE,
    form_add,
    form_from_json,
    form_scale,
    form_to_json,
    rat_from_str,
    rat_to_str,
    rref,
    stack_forms,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_rational_wire_format():
    assert rat_to_str(F(3)) == "3"
    assert rat_to_str(F(-1, 2)) == "-1/2"
    assert rat_from_str("7/3") == F(7, 3)
    assert rat_from_str("-4") == F(-4)


class TestLinearForm:
    def test_lengths_and_ranges(self):
        f = LinearForm(S_SPACE, 8, (F(1), F(0), F(2)))
        assert f.first_index == 1 and f.last_index == 3
        u = LinearForm(U_SPACE, 8, (F(1), F(0), F(2)))
        assert u.first_index == 2 and u.last_index == 4
        with pytest.raises(ValueError):
            LinearForm(S_SPACE, 8, (F(1),))
        with pytest.raises(ValueError):
            LinearForm("T", 8, (F(1), F(0), F(2)))
        with pytest.raises(ValueError):
            LinearForm(S_SPACE, 3, ())

    def test_from_map_drops_u_index_one(self):
        u = LinearForm.from_map(U_SPACE, 10, {1: F(5), 2: F(1)})
        assert u.items() == [(2, F(1))]

    def test_from_map_range_errors(self):
        with pytest.raises(ValueError):
            LinearForm.from_map(S_SPACE, 10, {0: F(1)})
        with pytest.raises(ValueError):
            LinearForm.from_map(U_SPACE, 10, {6: F(1)})

    def test_accumulates_duplicates(self):
        u = LinearForm.from_map(U_SPACE, 10, {2: F(1)})
        v = LinearForm.from_map(U_SPACE, 10, {2: F(2), 3: F(1)})
        assert form_add(u, v).items() == [(2, F(3)), (3, F(1))]


class TestFormOps:
    def test_add_zero(self):
        a = LinearForm.from_map(S_SPACE, 12, {1: F(1), 2: F(1)})
        assert form_add(a, form_scale(a, F(0))) == a

    def test_scale_by_zero(self):
        a = LinearForm.from_map(S_SPACE, 12, {3: F(7, 2)})
        assert form_scale(a, F(0)).is_zero()

    def test_example_sum(self):
        a = LinearForm.from_map(S_SPACE, 12, {1: F(1), 2: F(1)})
        b = LinearForm.from_map(S_SPACE, 12, {2: F(1), 3: F(-1)})
        assert form_add(a, b).items() == [(1, F(1)), (2, F(2)), (3, F(-1))]

    def test_mismatch_errors(self):
        a = LinearForm.from_map(S_SPACE, 12, {1: F(1)})
        b = LinearForm.from_map(U_SPACE, 12, {2: F(1)})
        c = LinearForm.from_map(S_SPACE, 14, {1: F(1)})
        with pytest.raises(ValueError):
            form_add(a, b)
        with pytest.raises(ValueError):
            form_add(a, c)


def test_form_json_round_trip():
    a = LinearForm.from_map(U_SPACE, 27, {2: F(1), 6: F(-1, 3), 11: F(4)})
    obj = form_to_json(a, provenance="constructed")
    assert obj["coeffs"]["6"] == "-1/3"
    assert obj["provenance"] == "constructed"
    assert form_from_json(obj) == a


def test_form_json_malformed():
    with pytest.raises(ValueError):
        form_from_json({"m": 27, "space": "U"})
    with pytest.raises(ValueError):
        form_from_json({"m": 27, "space": "U", "coeffs": {"2": "zz"}})


class TestRref:
    def test_identity(self):
        m = RationalMatrix.from_rows([[1, 0], [0, 1]])
        r = rref(m)
        assert r.matrix == m and r.pivots == (0, 1) and r.rank == 2

    def test_proportional_rows(self):
        r = rref(RationalMatrix.from_rows([[1, 2], [2, 4]]))
        assert r.rank == 1
        assert r.matrix.entries == ((F(1), F(2)), (F(0), F(0)))

    def test_full_rank_3x3(self):
        # determinant of the circulant [[1,1,0],[0,1,1],[1,0,1]] is 2, so the
        # reduced form is the identity
        r = rref(RationalMatrix.from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 1]]))
        assert r.rank == 3 and r.pivots == (0, 1, 2)
        assert r.matrix.entries == (
            (F(1), F(0), F(0)),
            (F(0), F(1), F(0)),
            (F(0), F(0), F(1)),
        )

    def test_empty(self):
        r = rref(RationalMatrix.from_rows([], cols=0))
        assert r.rank == 0 and r.pivots == ()

    @given(
        st.lists(
            st.lists(rationals, min_size=3, max_size=3),
            min_size=1,
            max_size=4,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_idempotent(self, rows):
        m = RationalMatrix.from_rows(rows)
        first = rref(m)
        again = rref(first.matrix)
        assert again.matrix == first.matrix
        assert again.pivots == first.pivots

    @given(
        st.lists(
            st.lists(rationals, min_size=4, max_size=4),
            min_size=2,
            max_size=4,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_rank_of_transpose(self, rows):
        m = RationalMatrix.from_rows(rows)
        assert rref(m).rank == rref(m.transpose()).rank

    @given(
        st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=3, max_size=3),
        st.integers(min_value=0, max_value=10**6),
    )
    @settings(max_examples=40, deadline=None)
    def test_row_operation_invariance(self, rows, seed):
        # invertible row operations never change the reduced form
        rng = random.Random(seed)
        m = RationalMatrix.from_rows(rows)
        ops = [list(r) for r in m.entries]
        for _ in range(6):
            i, j = rng.randrange(3), rng.randrange(3)
            kind = rng.randrange(3)
            if kind == 0:
                ops[i], ops[j] = ops[j], ops[i]
            elif kind == 1:
                c = F(rng.randint(1, 5))
                ops[i] = [c * x for x in ops[i]]
            elif i != j:
                c = F(rng.randint(-4, 4))
                ops[i] = [x + c * y for x, y in zip(ops[i], ops[j])]
        assert rref(RationalMatrix.from_rows(ops)).matrix == rref(m).matrix


def test_stack_forms():
    a = LinearForm.from_map(U_SPACE, 12, {2: F(1)})
    b = LinearForm.from_map(U_SPACE, 12, {3: F(2)})
    m = stack_forms([a, b])
    assert m.rows == 2 and m.cols == 5
    with pytest.raises(ValueError):
        stack_forms([a, LinearForm.from_map(U_SPACE, 14, {2: F(1)})])
