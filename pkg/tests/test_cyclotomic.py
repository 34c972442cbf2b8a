from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from symfreq.cyclotomic import (
    CycloFraction,
    CyclotomicDegreeError,
    _binomial_power_vec,
    _cyclic_mul,
    cyclo_add,
    cyclo_element,
    cyclo_mul,
    cyclo_one,
    cyclo_pow,
    cyclo_sub,
    cyclotomic_poly,
    embed_complex,
    scaled_exponents,
    signed_products_equal,
    sine_ratio_elem,
    verify_u_relation,
    zeta,
)
from symfreq.intmath import divisors, euler_phi, factorize
from symfreq.linalg import LinearForm, U_SPACE
from symfreq.relations import u_basis


class TestCyclotomicPoly:
    def test_small_cases(self):
        assert cyclotomic_poly(1) == (-1, 1)
        assert cyclotomic_poly(2) == (1, 1)
        assert cyclotomic_poly(4) == (1, 0, 1)
        assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)

    def test_monic_of_totient_degree(self):
        for M in range(1, 60):
            poly = cyclotomic_poly(M)
            assert poly[-1] == 1
            assert len(poly) - 1 == euler_phi(M)

    def test_product_reconstruction(self):
        # multiplying Phi_d over all divisors d of M recovers x^M - 1
        for M in range(1, 101):
            prod = [1]
            for d in divisors(M):
                phi = cyclotomic_poly(d)
                out = [0] * (len(prod) + len(phi) - 1)
                for i, a in enumerate(prod):
                    for j, b in enumerate(phi):
                        out[i + j] += a * b
                prod = out
            expected = [-1] + [0] * (M - 1) + [1]
            assert prod == expected

    def test_invalid(self):
        with pytest.raises(ValueError):
            cyclotomic_poly(0)


class TestElementArithmetic:
    def test_zeta4_squared(self):
        z = zeta(4)
        assert cyclo_mul(z, z).coeffs == (F(-1), F(0))

    def test_mul_by_one(self):
        a = cyclo_element(8, [F(1, 2), F(3), F(0), F(-2)])
        assert cyclo_mul(a, cyclo_one(8)) == a

    def test_norm_of_one_minus_zeta3(self):
        a = cyclo_sub(cyclo_one(3), zeta(3, 1))
        b = cyclo_sub(cyclo_one(3), zeta(3, 2))
        assert cyclo_mul(a, b) == cyclo_element(3, [3])

    def test_conductor_mismatch(self):
        with pytest.raises(ValueError):
            cyclo_mul(zeta(4), zeta(8))
        with pytest.raises(ValueError):
            cyclo_add(zeta(4), zeta(8))

    def test_pow_matches_repeated_mul(self):
        a = cyclo_add(zeta(12, 5), cyclo_element(12, [2]))
        acc = cyclo_one(12)
        for e in range(7):
            assert cyclo_pow(a, e) == acc
            acc = cyclo_mul(acc, a)

    def test_pow_negative(self):
        with pytest.raises(ValueError):
            cyclo_pow(zeta(4), -1)

    def test_zeta_wraps(self):
        assert zeta(10, 13) == zeta(10, 3)


small_ints = st.integers(min_value=-9, max_value=9)


class TestKronecker:
    @given(
        st.integers(min_value=1, max_value=10),
        st.data(),
    )
    @settings(max_examples=80, deadline=None)
    def test_cyclic_mul_vs_naive(self, n, data):
        u = data.draw(st.lists(small_ints, min_size=n, max_size=n))
        v = data.draw(st.lists(small_ints, min_size=n, max_size=n))
        expect = [0] * n
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                expect[(i + j) % n] += a * b
        assert _cyclic_mul(u, v, n) == expect

    @given(
        st.integers(min_value=2, max_value=16),
        st.integers(min_value=0, max_value=15),
        st.integers(min_value=0, max_value=15),
        st.integers(min_value=0, max_value=8),
    )
    @settings(max_examples=80, deadline=None)
    def test_binomial_power_vs_iterated(self, n, a, b, e):
        a %= n
        b %= n
        base = [0] * n
        base[a] += 1
        base[b] -= 1
        acc = [0] * n
        acc[0] = 1
        for _ in range(e):
            acc = _cyclic_mul(acc, base, n)
        assert _binomial_power_vec(n, a, b, e) == acc


class TestSineRatio:
    def test_k_equal_one_is_unity(self):
        for m in (4, 7, 12):
            r = sine_ratio_elem(m, 1)
            assert r.num == r.den

    def test_sqrt2_and_sqrt3(self):
        for m, k, val in ((4, 2, mpmath.sqrt(2)), (6, 2, mpmath.sqrt(3))):
            r = sine_ratio_elem(m, k)
            q = embed_complex(r.num, 80) / embed_complex(r.den, 80)
            assert abs(q.real - val) < 1e-18
            assert abs(q.imag) < 1e-18

    def test_range_errors(self):
        with pytest.raises(ValueError):
            sine_ratio_elem(10, 0)
        with pytest.raises(ValueError):
            sine_ratio_elem(10, 6)

    def test_real_and_positive_sweep(self):
        for m in range(4, 61):
            for k in range(1, m // 2 + 1):
                r = sine_ratio_elem(m, k)
                q = embed_complex(r.num, 64) / embed_complex(r.den, 64)
                assert abs(q.imag) < 1e-15, (m, k)
                assert q.real > 0, (m, k)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            CycloFraction(cyclo_one(8), cyclo_element(8, [0]))


def _u_form(m, coeffs):
    return LinearForm.from_map(U_SPACE, m, {k: F(v) for k, v in coeffs.items()})


class TestVerify:
    def test_m27_listed_relation(self):
        form = _u_form(27, {6: -1, 3: 1, 2: 1, 7: 1, 8: -1, 10: -1, 11: 1})
        assert verify_u_relation(27, form)

    def test_zero_form(self):
        assert verify_u_relation(27, LinearForm.zero(U_SPACE, 27))
        assert verify_u_relation(10, LinearForm.zero(U_SPACE, 10))

    def test_single_term_fails(self):
        # log2(sin(2pi/5)/sin(pi/5)) ~ 0.694 is nonzero
        assert not verify_u_relation(5, _u_form(5, {2: 1}))

    def test_rational_coefficients(self):
        base = _u_form(27, {6: -1, 3: 1, 2: 1, 7: 1, 8: -1, 10: -1, 11: 1})
        half = LinearForm(U_SPACE, 27, tuple(c / 2 for c in base.coeffs))
        scale, exps = scaled_exponents(half)
        assert scale == 2
        assert verify_u_relation(27, half)

    def test_space_and_modulus_guards(self):
        from symfreq.linalg import S_SPACE

        with pytest.raises(ValueError):
            verify_u_relation(27, LinearForm.zero(S_SPACE, 27))
        with pytest.raises(ValueError):
            verify_u_relation(25, LinearForm.zero(U_SPACE, 27))

    def test_degree_bound(self):
        m = 4099  # prime, so phi(2m) = 4098 > 4096
        with pytest.raises(CyclotomicDegreeError):
            verify_u_relation(m, LinearForm.from_map(U_SPACE, m, {2: F(1)}))

    def test_agrees_with_element_route(self):
        # independent route through CycloElement products
        def via_elements(m, form):
            _, exps = scaled_exponents(form)
            n = 2 * m
            lhs, rhs = cyclo_one(n), cyclo_one(n)
            for k, e in exps.items():
                ratio = sine_ratio_elem(m, k)
                if e > 0:
                    lhs = cyclo_mul(lhs, cyclo_pow(ratio.num, e))
                    rhs = cyclo_mul(rhs, cyclo_pow(ratio.den, e))
                else:
                    lhs = cyclo_mul(lhs, cyclo_pow(ratio.den, -e))
                    rhs = cyclo_mul(rhs, cyclo_pow(ratio.num, -e))
            return lhs == rhs

        for m in (10, 14, 16, 27):
            for form in u_basis(m).forms:
                assert via_elements(m, form) and verify_u_relation(m, form)
                bumped = list(form.coeffs)
                bumped[1] += 1
                pert = LinearForm(U_SPACE, m, tuple(bumped))
                assert via_elements(m, pert) == verify_u_relation(m, pert) == False


def test_prime_power_product_identities():
    # the multiplicative identity behind the prime-power relations, checked
    # exactly at conductor m for every admissible (r, k)
    for m in (8, 9, 16, 25, 27):
        ((p, n),) = factorize(m)
        for r in range(1, n):
            for k in range(1, m + 1):
                if k % p == 0:
                    continue
                lhs = [(0, (p**r * k) % m, p - 1), (0, 1, -(p - 1))]
                rhs = [(0, p, p**r - 1), (0, 1, -(p**r - 1))]
                for j in range(1, m + 1, p ** (n - r)):
                    rhs += [(0, (k * j) % m, p - 1), (0, 1, -(p - 1))]
                for j in range(1, m + 1, p ** (n - 1)):
                    rhs += [(0, j % m, 1 - p**r), (0, 1, -(1 - p**r))]
                assert signed_products_equal(m, lhs, rhs), (m, r, k)
