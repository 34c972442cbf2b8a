"""Certified evaluation of digit-frequency values and relation residuals.

Three families of numbers are produced, all as midpoint-radius balls:

* h_value(m, d): the asymptotic frequency of continued-fraction digits
  congruent to d mod m, through the log-Gamma closed form
  log2(Gamma(d/m) Gamma((d+2)/m) / Gamma((d+1)/m)^2);
* s_value(m, d): the symmetric frequency, through sine ratios;
* u_value(m, k): log2(sin(pi k/m)/sin(pi/m)), the working coordinates for
  relation hunting (u_value(m, 1) is exactly zero).

h_series is an independent series oracle for h_value: it sums the
single-digit frequencies log2((j+1)^2/(j(j+2))) over the arithmetic
progression j = d mod m directly, in IEEE double arithmetic with an explicit
worst-case rounding bound, plus the tail bound (1/ln 2)/J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import libmp

from . import balls
from .balls import PrecisionContext, RealBall
from .linalg import LinearForm, S_SPACE, U_SPACE


@dataclass(frozen=True)
class FrequencyValue:
    kind: str  # "H" | "S" | "U"
    m: int
    index: int
    value: RealBall


def _check_index(kind: str, m: int, index: int):
    lo, hi = index_range(kind, m)
    if not lo <= index <= hi:
        raise ValueError(f"{kind}-index {index} out of range {lo}..{hi} for m={m}")


def index_range(kind: str, m: int) -> tuple[int, int]:
    half = m // 2
    if kind == "H":
        return 1, m
    if kind == "S":
        return 1, half - 1
    if kind == "U":
        return 1, half
    raise ValueError(f"unknown value kind {kind!r}")


def h_value(m: int, d: int, ctx: PrecisionContext) -> RealBall:
    """Frequency of digits = d mod m via the Gamma closed form."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    _check_index("H", m, d)
    wp = ctx.wp
    acc = balls.ball_add(
        balls.lgamma_ball(d, m, PrecisionContext(wp, 0)),
        balls.lgamma_ball(d + 2, m, PrecisionContext(wp, 0)),
        wp,
    )
    mid_term = balls.lgamma_ball(d + 1, m, PrecisionContext(wp, 0))
    acc = balls.ball_sub(acc, balls.ball_scale_2exp(mid_term, 1), wp)
    return balls._restamp(balls.ball_div(acc, balls._ln2_cached(wp), wp), ctx.prec)


def h_series(m: int, d: int, terms: int) -> RealBall:
    """Independent oracle for h_value: truncated digit-frequency series.

    Sums log2((j+1)^2 / (j (j+2))) over j = d, d+m, d+2m, ... <= terms.  The
    truncation tail is bounded by (1/ln 2)/terms (each term is below
    (1/ln 2)/j^2), and the double-precision product accumulates a worst-case
    relative error below 6*K*2^-53 for K factors.
    """
    if m < 1:
        raise ValueError("modulus must be at least 1")
    if not 1 <= d <= m:
        raise ValueError(f"H-index {d} out of range 1..{m}")
    if terms < m:
        raise ValueError("term bound must be at least m")
    j = np.arange(d, terms + 1, m, dtype=np.float64)
    # (j+1)^2 and j(j+2) are exact in doubles up to ~2^26 factors beyond 1e6 terms
    ratios = ((j + 1.0) * (j + 1.0)) / (j * (j + 2.0))
    prod = float(np.prod(ratios))
    mid = math.log2(prod)
    k = len(j)
    tail = 1.0 / (math.log(2) * terms)
    rounding = 18.0 * k * 2.0**-53 + 2.0**-50
    rad = tail + rounding
    # floats convert to mpf exactly through the raw layer, independent of the
    # global mpmath precision
    make = mpmath.mp.make_mpf
    return RealBall(make(libmp.from_float(mid)), make(libmp.from_float(rad)), 53)


def s_value(m: int, d: int, ctx: PrecisionContext) -> RealBall:
    """Symmetric frequency via sine ratios.

    For d < m'-1 this is log2(sin(pi(d+1)/m)^2 / (sin(pi d/m) sin(pi(d+2)/m)));
    the boundary index d = m'-1 uses the single-ratio form
    log2(sin(pi m'/m)/sin(pi(m'-1)/m)) for either parity of m.
    """
    if m < 4:
        raise ValueError("modulus must be at least 4")
    half = m // 2
    _check_index("S", m, d)
    wp = ctx.wp
    if d == half - 1:
        num = balls.sin_pi_rational(half, m, PrecisionContext(wp, 0))
        den = balls.sin_pi_rational(half - 1, m, PrecisionContext(wp, 0))
        ratio = balls.ball_div(num, den, wp)
    else:
        s1 = balls.sin_pi_rational(d + 1, m, PrecisionContext(wp, 0))
        num = balls.ball_mul(s1, s1, wp)
        den = balls.ball_mul(
            balls.sin_pi_rational(d, m, PrecisionContext(wp, 0)),
            balls.sin_pi_rational(d + 2, m, PrecisionContext(wp, 0)),
            wp,
        )
        ratio = balls.ball_div(num, den, wp)
    return balls._restamp(balls.ball_div(balls.ln_ball(ratio, wp), balls._ln2_cached(wp), wp), ctx.prec)


def u_value(m: int, k: int, ctx: PrecisionContext) -> RealBall:
    """log2(sin(pi k/m)/sin(pi/m)); exactly zero at k = 1."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    _check_index("U", m, k)
    if k == 1:
        return balls.ball_exact_zero(ctx.prec)
    wp = ctx.wp
    ratio = balls.ball_div(
        balls.sin_pi_rational(k, m, PrecisionContext(wp, 0)),
        balls.sin_pi_rational(1, m, PrecisionContext(wp, 0)),
        wp,
    )
    return balls._restamp(balls.ball_div(balls.ln_ball(ratio, wp), balls._ln2_cached(wp), wp), ctx.prec)


def frequency_value(kind: str, m: int, index: int, ctx: PrecisionContext) -> FrequencyValue:
    if kind == "H":
        val = h_value(m, index, ctx)
    elif kind == "S":
        val = s_value(m, index, ctx)
    elif kind == "U":
        val = u_value(m, index, ctx)
    else:
        raise ValueError(f"unknown value kind {kind!r}")
    return FrequencyValue(kind, m, index, val)


def evaluate_form(form: LinearForm, ctx: PrecisionContext) -> RealBall:
    """Residual ball sum(c_i * value_i) of a linear form.

    A relation is numerically supported when the result contains zero with a
    radius small against the coefficient mass; see residual_report.
    """
    wp = ctx.wp
    acc = balls.ball_exact_zero(wp)
    for idx, c in form.items():
        if form.space == S_SPACE:
            v = s_value(form.m, idx, PrecisionContext(wp, 0))
        else:
            v = u_value(form.m, idx, PrecisionContext(wp, 0))
        acc = balls.ball_add(acc, balls.ball_mul_fraction(v, c, wp), wp)
    return balls._restamp(acc, ctx.prec)


def residual_report(form: LinearForm, ctx: PrecisionContext) -> dict:
    """Residual ball plus the numeric-support verdict for a form.

    Supported means: the ball contains zero and its radius is at most
    2^-(prec - guard) * l1(c) * max|value|, i.e. consistent with an exact
    zero computed at this precision.
    """
    wp = ctx.wp
    values = {}
    for idx, c in form.items():
        if form.space == S_SPACE:
            values[idx] = s_value(form.m, idx, PrecisionContext(wp, 0))
        else:
            values[idx] = u_value(form.m, idx, PrecisionContext(wp, 0))
    acc = balls.ball_exact_zero(wp)
    l1 = Fraction(0)
    vmax = mpmath.mpf(1)
    for idx, c in form.items():
        acc = balls.ball_add(acc, balls.ball_mul_fraction(values[idx], c, wp), wp)
        l1 += abs(c)
        vmax = max(vmax, values[idx].abs_upper())
    residual = balls._restamp(acc, ctx.prec)
    tol = mpmath.ldexp(mpmath.mpf(1), -(ctx.prec - ctx.guard))
    tol = mpmath.fmul(tol, mpmath.fmul(vmax, mpmath.fdiv(l1.numerator, l1.denominator) if l1 else mpmath.mpf(1)), prec=53, rounding="u")
    supported = residual.contains_zero() and (form.is_zero() or residual.rad <= tol)
    return {"residual": residual, "supported": supported, "tolerance": tol}
