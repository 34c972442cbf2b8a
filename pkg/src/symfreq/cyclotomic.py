"""Exact cyclotomic arithmetic and the multiplicative certificate engine.

A claimed linear relation sum(c_k * log2(sin(pi*k/m)/sin(pi/m))) = 0 holds
exactly if and only if the matching product of sine ratios equals 1.  Each
ratio is an element of the cyclotomic field of conductor 2m:

    sin(pi*k/m)/sin(pi/m) = z^(1-k) * (1 - z^(2k)) / (1 - z^2),   z = zeta_2m,

so after clearing denominators the whole check is an equality between two
products of binomials z^a - z^b in Z[x]/Phi_2m(x).  The products are
accumulated on circulant representatives in Z[x]/(x^n - 1), where
multiplication is a cyclic convolution done by Kronecker substitution (one
big-integer multiply), and the two sides are compared by a single remainder
computation mod Phi_n at the end.  Since Phi_n divides x^n - 1, equality of
the circulant representatives mod Phi_n is equality in the field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm

from .intmath import divisors, euler_phi
from .linalg import LinearForm, U_SPACE

#: Refuse conductors whose cyclotomic polynomial degree exceeds this bound.
DEGREE_BOUND = 4096


class CyclotomicDegreeError(ValueError):
    """Raised when a certificate would need a cyclotomic field of excessive degree."""


# ----------------------------------------------------------------------
# Integer polynomials and the cyclotomic polynomial


def _intpoly_div_exact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials, denominator monic-leading or not;
    # used only where divisibility is guaranteed.
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i - dd] = q
        for j, dj in enumerate(den):
            num[i - dd + j] -= q * dj
    if any(num[:dd]):
        raise ArithmeticError("nonzero remainder in exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """Coefficients of the M-th cyclotomic polynomial, lowest degree first."""
    if M < 1:
        raise ValueError("conductor must be positive")
    if M == 1:
        return (-1, 1)
    poly = [-1] + [0] * (M - 1) + [1]  # x^M - 1
    for d in divisors(M):
        if d < M:
            poly = _intpoly_div_exact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def _reduce_mod_cyclotomic(coeffs: list, M: int) -> list:
    """In-place remainder of a coefficient list modulo Phi_M (monic)."""
    phi = cyclotomic_poly(M)
    deg = len(phi) - 1
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            coeffs[i] = 0
            base = i - deg
            for j in range(deg):
                if phi[j]:
                    coeffs[base + j] -= c * phi[j]
    del coeffs[deg:]
    while len(coeffs) < deg:
        coeffs.append(0)
    return coeffs


# ----------------------------------------------------------------------
# Field elements


@dataclass(frozen=True)
class CycloElement:
    """Element of Q(zeta_M) as rational coordinates over 1, z, ..., z^(phi(M)-1)."""

    conductor: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        deg = euler_phi(self.conductor)
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != deg:
            raise ValueError(f"need exactly {deg} coordinates at conductor {self.conductor}")
        object.__setattr__(self, "coeffs", coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def cyclo_element(M: int, coeffs) -> CycloElement:
    """Build an element from coefficients of any degree, reducing mod Phi_M."""
    vec = [Fraction(c) for c in coeffs]
    _reduce_mod_cyclotomic(vec, M)
    return CycloElement(M, tuple(vec))


def cyclo_zero(M: int) -> CycloElement:
    return CycloElement(M, (Fraction(0),) * euler_phi(M))


def cyclo_one(M: int) -> CycloElement:
    return cyclo_element(M, [1])


def zeta(M: int, e: int = 1) -> CycloElement:
    """zeta_M^e as a field element."""
    e %= M
    return cyclo_element(M, [0] * e + [1])


def cyclo_add(a: CycloElement, b: CycloElement) -> CycloElement:
    _same_conductor(a, b)
    return CycloElement(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def cyclo_sub(a: CycloElement, b: CycloElement) -> CycloElement:
    _same_conductor(a, b)
    return CycloElement(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))


def cyclo_neg(a: CycloElement) -> CycloElement:
    return CycloElement(a.conductor, tuple(-x for x in a.coeffs))


def cyclo_mul(a: CycloElement, b: CycloElement) -> CycloElement:
    _same_conductor(a, b)
    n = len(a.coeffs)
    prod = [Fraction(0)] * (2 * n - 1)
    for i, x in enumerate(a.coeffs):
        if x == 0:
            continue
        for j, y in enumerate(b.coeffs):
            if y != 0:
                prod[i + j] += x * y
    return cyclo_element(a.conductor, prod)


def cyclo_pow(a: CycloElement, e: int) -> CycloElement:
    if e < 0:
        raise ValueError("negative exponents are not supported; use CycloFraction")
    result = cyclo_one(a.conductor)
    base = a
    while e:
        if e & 1:
            result = cyclo_mul(result, base)
        base = cyclo_mul(base, base) if e > 1 else base
        e >>= 1
    return result


def _same_conductor(a: CycloElement, b: CycloElement):
    if a.conductor != b.conductor:
        raise ValueError(f"conductor mismatch: {a.conductor} vs {b.conductor}")


@dataclass(frozen=True)
class CycloFraction:
    """Formal quotient num/den of field elements; never actually divided.

    Comparisons and certificates cross-multiply, so no inverse mod Phi_M is
    ever computed.
    """

    num: CycloElement
    den: CycloElement

    def __post_init__(self):
        _same_conductor(self.num, self.den)
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator in CycloFraction")

    @property
    def conductor(self) -> int:
        return self.num.conductor


def sine_ratio_elem(m: int, k: int) -> CycloFraction:
    """The ratio sin(pi*k/m)/sin(pi/m) as a fraction in Q(zeta_2m).

    num = zeta_2m^((1-k) mod 2m) * (1 - zeta_2m^(2k)),  den = 1 - zeta_2m^2.
    The represented complex number is real and positive for 1 <= k <= m//2.
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if not 1 <= k <= m // 2:
        raise ValueError(f"index k={k} out of range 1..{m // 2}")
    n = 2 * m
    if euler_phi(n) > DEGREE_BOUND:
        raise CyclotomicDegreeError(
            f"phi({n}) = {euler_phi(n)} exceeds the degree bound {DEGREE_BOUND}"
        )
    a = (1 - k) % n
    num = cyclo_mul(zeta(n, a), cyclo_sub(cyclo_one(n), zeta(n, 2 * k)))
    den = cyclo_sub(cyclo_one(n), zeta(n, 2))
    return CycloFraction(num, den)


# ----------------------------------------------------------------------
# Fast product arithmetic on circulant representatives

def _pack(vec: list[int], slot: int) -> int:
    n = 0
    for i, x in enumerate(vec):
        if x:
            n += x << (i * slot)
    return n


def _unpack_signed(n: int, slot: int, count: int) -> list[int]:
    # Balanced-digit recovery: each slot holds a signed value of magnitude
    # < 2^(slot-1); borrows propagate upward.
    base = 1 << slot
    half = base >> 1
    mask = base - 1
    out = []
    for _ in range(count):
        d = n & mask
        n >>= slot
        if d >= half:
            d -= base
            n += 1
        out.append(d)
    if n != 0:
        raise ArithmeticError("Kronecker unpacking left a nonzero carry")
    return out


def _cyclic_mul(u: list[int], v: list[int], n: int) -> list[int]:
    """Product of u and v in Z[x]/(x^n - 1) via Kronecker substitution."""
    mu = max(map(abs, u), default=0)
    mv = max(map(abs, v), default=0)
    if mu == 0 or mv == 0:
        return [0] * n
    slot = mu.bit_length() + mv.bit_length() + n.bit_length() + 3
    conv = _unpack_signed(_pack(u, slot) * _pack(v, slot), slot, 2 * n)
    out = conv[:n]
    for i in range(n, 2 * n):
        if conv[i]:
            out[i - n] += conv[i]
    return out


def _binomial_power_vec(n: int, a: int, b: int, e: int) -> list[int]:
    """(x^a - x^b)^e as a circulant vector of length n."""
    out = [0] * n
    if e == 0:
        out[0] = 1
        return out
    # (x^a - x^b)^e = sum_i C(e,i) (-1)^i x^(a(e-i) + b*i)
    for i in range(e + 1):
        idx = (a * (e - i) + b * i) % n
        c = comb(e, i)
        out[idx] += -c if i & 1 else c
    return out


def _product_vec(n: int, factors: list[tuple[int, int, int]]) -> list[int]:
    acc = [0] * n
    acc[0] = 1
    for a, b, e in factors:
        if e:
            acc = _cyclic_mul(acc, _binomial_power_vec(n, a, b, e), n)
    return acc


def _divisible_by_cyclotomic(vec: list[int], n: int) -> bool:
    rem = list(vec)
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    for i in range(len(rem) - 1, deg - 1, -1):
        c = rem[i]
        if c:
            rem[i] = 0
            base = i - deg
            for j in range(deg):
                if phi[j]:
                    rem[base + j] -= c * phi[j]
    return not any(rem[:deg])


def binomial_products_equal(n: int, left, right) -> bool:
    """Whether two products of (zeta_n^a - zeta_n^b)^e factors coincide in Q(zeta_n).

    `left` and `right` are iterables of (a, b, e) with e >= 0.  The check is
    exact: both sides are expanded over Z[x]/(x^n - 1) and compared modulo
    Phi_n.
    """
    if euler_phi(n) > DEGREE_BOUND:
        raise CyclotomicDegreeError(
            f"phi({n}) = {euler_phi(n)} exceeds the degree bound {DEGREE_BOUND}"
        )
    lv = _product_vec(n, list(left))
    rv = _product_vec(n, list(right))
    diff = [x - y for x, y in zip(lv, rv)]
    return _divisible_by_cyclotomic(diff, n)


def signed_products_equal(n: int, lhs, rhs) -> bool:
    """Like binomial_products_equal, but exponents may be negative.

    Negative exponents are moved to the opposite side before the
    cross-multiplied comparison, so the statement prod(lhs) = prod(rhs) is
    checked as an identity between two genuine products.
    """
    left: list[tuple[int, int, int]] = []
    right: list[tuple[int, int, int]] = []
    for a, b, e in lhs:
        if e >= 0:
            left.append((a, b, e))
        else:
            right.append((a, b, -e))
    for a, b, e in rhs:
        if e >= 0:
            right.append((a, b, e))
        else:
            left.append((a, b, -e))
    return binomial_products_equal(n, left, right)


# ----------------------------------------------------------------------
# Relation certificates


def scaled_exponents(form: LinearForm) -> tuple[int, dict[int, int]]:
    """Clear denominators of a form: (lcm L, {index: integer coefficient})."""
    items = form.items()
    scale = lcm(*(c.denominator for _, c in items)) if items else 1
    return scale, {k: int(c * scale) for k, c in items}


def verify_u_relation(m: int, form: LinearForm) -> bool:
    """Exact certificate for a claimed relation among the m-modulus log-sine values.

    The coefficients are scaled by the lcm of their denominators to integers
    e_k; the relation holds iff prod_k ratio_k^(e_k) = 1, which is decided by
    the cross-multiplied product identity in Q(zeta_2m).  Returns True iff the
    relation is exactly valid.
    """
    if form.space != U_SPACE:
        raise ValueError("verify_u_relation expects a U-space form")
    if form.m != m:
        raise ValueError(f"form has modulus {form.m}, expected {m}")
    n = 2 * m
    if euler_phi(n) > DEGREE_BOUND:
        raise CyclotomicDegreeError(
            f"phi({n}) = {euler_phi(n)} exceeds the degree bound {DEGREE_BOUND}"
        )
    _, exps = scaled_exponents(form)
    if not exps:
        return True
    left: list[tuple[int, int, int]] = []
    right: list[tuple[int, int, int]] = []
    den_left = 0
    den_right = 0
    for k, e in exps.items():
        a = (1 - k) % n
        b = (a + 2 * k) % n
        if e > 0:
            left.append((a, b, e))
            den_right += e
        else:
            right.append((a, b, -e))
            den_left += -e
    if den_left:
        left.append((0, 2, den_left))
    if den_right:
        right.append((0, 2, den_right))
    return binomial_products_equal(n, left, right)


def embed_complex(elem: CycloElement, prec: int = 64):
    """Numeric embedding z -> exp(2*pi*i/M), for tests and diagnostics."""
    import mpmath

    with mpmath.workprec(prec + 10):
        z = mpmath.expjpi(mpmath.mpf(2) / elem.conductor)
        acc = mpmath.mpc(0)
        for c in reversed(elem.coeffs):
            acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
        return acc
