"""Truncated formal power series in t over a cyclotomic field.

Ordinary coefficients are stored (coefficient of t^n, not of t^n/n!); the
factorial is applied exactly at extraction time by :func:`egf_coefficient`,
so multiplication stays a plain Cauchy product.  Binary operations require
equal fields and equal truncation orders; nothing is silently re-truncated.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from . import _kernel as K
from .errors import (
    FieldMismatch,
    NonUnitConstantTerm,
    OrderExceeded,
    OrderMismatch,
    PoleAtZero,
    ZeroDenominator,
)
from .exact import CycloElem, CycloField


class TruncSeries:
    """Coefficients c_0..c_order of a series over one cyclotomic field."""

    __slots__ = ("field", "order", "coeffs")

    def __init__(self, field: CycloField, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the constant term")
        for c in coeffs:
            if c.field.conductor != field.conductor:
                raise FieldMismatch("series coefficient from a different field")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "order", len(coeffs) - 1)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.field.conductor == other.field.conductor
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.conductor, self.coeffs))

    def __repr__(self):
        return f"TruncSeries(m={self.field.conductor}, N={self.order})"


def _check_pair(s1: TruncSeries, s2: TruncSeries):
    if s1.field.conductor != s2.field.conductor:
        raise FieldMismatch("series over different fields")
    if s1.order != s2.order:
        raise OrderMismatch(f"truncation orders differ: {s1.order} vs {s2.order}")


def constant_series(field: CycloField, value, order: int) -> TruncSeries:
    """value + 0*t + ... + 0*t^order."""
    if isinstance(value, (int, Fraction)):
        value = field.rational(value)
    return TruncSeries(field, (value,) + (field.zero,) * order)


def exp_at(a: CycloElem, order: int) -> TruncSeries:
    """e^(a t) to the given order: coefficients a^n / n!."""
    field = a.field
    out = [field.one]
    cur = field.one
    for n in range(1, order + 1):
        cur = cur * a * Fraction(1, n)
        out.append(cur)
    return TruncSeries(field, out)


def series_add(s1: TruncSeries, s2: TruncSeries) -> TruncSeries:
    _check_pair(s1, s2)
    return TruncSeries(s1.field, tuple(a + b for a, b in zip(s1.coeffs, s2.coeffs)))


def series_mul(s1: TruncSeries, s2: TruncSeries) -> TruncSeries:
    """Cauchy product truncated at the common order."""
    _check_pair(s1, s2)
    field = s1.field
    red = field.reduction_rows
    anums = [c.nums for c in s1.coeffs]
    adens = [c.den for c in s1.coeffs]
    bnums = [c.nums for c in s2.coeffs]
    bdens = [c.den for c in s2.coeffs]
    out = [
        CycloElem._raw(field, *K.cauchy_coeff(anums, adens, bnums, bdens, n, red))
        for n in range(s1.order + 1)
    ]
    return TruncSeries(field, out)


def series_pow(s: TruncSeries, k: int) -> TruncSeries:
    """k-th power by repeated squaring; s^0 is the constant series 1."""
    if k < 0:
        raise ValueError("nonnegative power required")
    out = constant_series(s.field, 1, s.order)
    base = s
    while k:
        if k & 1:
            out = series_mul(out, base)
        k >>= 1
        if k:
            base = series_mul(base, base)
    return out


def series_invert(s: TruncSeries) -> TruncSeries:
    """Multiplicative inverse to the same order (unit constant term required)."""
    c = s.coeffs
    if c[0].is_zero():
        raise NonUnitConstantTerm("constant term is zero")
    field = s.field
    red = field.reduction_rows
    c0inv = c[0].inverse()
    inv = [c0inv]
    cn = [x.nums for x in c]
    cd = [x.den for x in c]
    for n in range(1, s.order + 1):
        # sum_{i=1..n} c_i * inv_{n-i}, then divide by -c_0
        invn = [x.nums for x in inv]
        invd = [x.den for x in inv]
        acc = CycloElem._raw(field, *K.cauchy_coeff(cn[1:], cd[1:], invn, invd, n - 1, red))
        inv.append(-(acc * c0inv))
    return TruncSeries(field, inv)


def t_valuation(s: TruncSeries):
    """Index of the first nonzero coefficient, or None if all vanish."""
    for i, c in enumerate(s.coeffs):
        if not c.is_zero():
            return i
    return None


def divide_cancel(num: TruncSeries, den: TruncSeries) -> TruncSeries:
    """num/den after cancelling the common power of t carried by den.

    Both series lose t^v (v the t-adic valuation of den) and the result is
    truncated to order N - v.  PoleAtZero if num vanishes to lower order than
    den; ZeroDenominator if den is identically zero to order N.
    """
    _check_pair(num, den)
    vd = t_valuation(den)
    if vd is None:
        raise ZeroDenominator("denominator vanishes to the truncation order")
    vn = t_valuation(num)
    if vn is not None and vn < vd:
        raise PoleAtZero(f"numerator valuation {vn} < denominator valuation {vd}")
    shifted_num = TruncSeries(num.field, num.coeffs[vd:])
    shifted_den = TruncSeries(den.field, den.coeffs[vd:])
    return series_mul(shifted_num, series_invert(shifted_den))


def egf_coefficient(s: TruncSeries, n: int) -> CycloElem:
    """The coefficient of t^n/n!, i.e. n! times the ordinary coefficient."""
    if n > s.order:
        raise OrderExceeded(f"index {n} beyond truncation order {s.order}")
    return s.coeffs[n] * factorial(n)
