"""Generalized twisted Bernoulli numbers and polynomials of higher order.

The order-k family attached to a character chi mod d and a twist xi is read
off the k-th power of the series quotient

    t * sum_{a<d} chi(a) xi^a e^(a t)  /  (xi^d e^(d t) - 1),

with the coefficient of t^n/n! giving the n-th number; the polynomial of
degree n is the binomial convolution of the numbers with powers of x.  The
order-0 convention is the bare e^(x t) factor, so the order-0 polynomial of
degree n is x^n.

The twist may be a root of unity of any finite order; the p-adic module
restricts to twists of p-power order where the valuation theory applies.
All results are cached: families, polynomials and power sums are immutable
and reused across identity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm

from . import powerseries as ps
from .characters import DirichletCharacter
from .errors import NonDivisibleConductor
from .exact import CycloElem, CycloField, RootOfUnity, as_cyclo, cyclo_field, embed


class TwistSpec:
    """Twist xi, character chi, and the ambient field holding both.

    The ambient conductor is the lcm of the twist's (normalized) order and
    the orders of the character values, where orders one and two count as
    rational and need no extension; an extra multiple can be requested so
    that several related computations share one field.
    """

    __slots__ = ("xi", "chi", "ambient", "_keyval", "_hashval")

    def __init__(self, chi: DirichletCharacter, xi: RootOfUnity, ambient: CycloField):
        key = (chi._key(), xi._key(), ambient.conductor)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "_keyval", key)
        object.__setattr__(self, "_hashval", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("TwistSpec is immutable")

    def _key(self):
        return self._keyval

    def __eq__(self, other):
        if not isinstance(other, TwistSpec):
            return NotImplemented
        return self._keyval == other._keyval

    def __hash__(self):
        return self._hashval

    def __repr__(self):
        return (
            f"TwistSpec(chi={self.chi.label()}, xi={self.xi!r}, "
            f"ambient=Q(zeta_{self.ambient.conductor}))"
        )


def ambient_conductor(chi: DirichletCharacter, xi: RootOfUnity) -> int:
    """Smallest conductor whose field holds all chi values and the twist."""
    o = xi.normalized().order
    return lcm(o if o > 2 else 1, chi.value_conductor())


def twist_spec(chi: DirichletCharacter, xi: RootOfUnity, conductor: int | None = None) -> TwistSpec:
    """Build a TwistSpec, normalizing the twist.

    ``conductor`` forces a larger ambient field (must be a multiple of the
    natural one).
    """
    xi = xi.normalized()
    natural = ambient_conductor(chi, xi)
    m = natural if conductor is None else lcm(natural, conductor)
    if conductor is not None and m != conductor:
        raise NonDivisibleConductor(
            f"requested conductor {conductor} does not contain the natural field {natural}"
        )
    return TwistSpec(chi, xi, cyclo_field(m))


@dataclass(frozen=True)
class BernoulliFamily:
    """The numbers of one (chi, xi, order k) family up to index max_n."""

    spec: TwistSpec
    order_k: int
    max_n: int
    numbers: tuple[CycloElem, ...]


@dataclass(frozen=True)
class BernoulliPolynomial:
    """Degree-n polynomial in x; coeffs[i] is the coefficient of x^i."""

    degree: int
    coeffs: tuple[CycloElem, ...]

    @property
    def field(self) -> CycloField:
        return self.coeffs[0].field


def _round_order(n: int) -> int:
    # series are cached per (spec, k, order); round the order up so nearby
    # requests share one computation
    return ((n + 7) // 8) * 8


@lru_cache(maxsize=None)
def _kernel_series(spec: TwistSpec, order: int) -> ps.TruncSeries:
    """divide_cancel(t * sum_a chi(a) xi^a e^(a t), xi^d e^(d t) - 1)."""
    field = spec.ambient
    d = spec.chi.modulus
    xi = as_cyclo(spec.xi, field.conductor)
    # numerator t * sum_a chi(a) xi^a e^(a t): ordinary coefficient of t^(i+1)
    # is sum_a w_a a^i / i!
    weights = []
    for a in range(d):
        c = spec.chi.value_at(a, field)
        if not c.is_zero():
            weights.append((a, c * xi**a))
    num = [field.zero]
    fact = Fraction(1)
    for i in range(order):
        if i:
            fact /= i
        acc = field.zero
        for a, w in weights:
            acc = acc + w * (fact * a**i)
        num.append(acc)
    numerator = ps.TruncSeries(field, num)
    # denominator xi^d e^(d t) - 1
    xid = xi**d
    den = [c * xid for c in ps.exp_at(field.rational(d), order).coeffs]
    den[0] = den[0] - field.one
    denominator = ps.TruncSeries(field, den)
    return ps.divide_cancel(numerator, denominator)


@lru_cache(maxsize=None)
def generating_series(spec: TwistSpec, k: int, order: int) -> ps.TruncSeries:
    """Order-k generating series to the given truncation order.

    Requires order >= k + 2 so that extraction never starves after the t
    cancellation; k = 0 gives the constant series 1.
    """
    if k < 0:
        raise ValueError("order k must be >= 0")
    if order < k + 2:
        raise ValueError(f"truncation order {order} < k + 2 = {k + 2}")
    return ps.series_pow(_kernel_series(spec, order), k)


@lru_cache(maxsize=None)
def numbers(spec: TwistSpec, k: int, max_n: int) -> BernoulliFamily:
    """The numbers B^(k)_n for n = 0..max_n."""
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    series = generating_series(spec, k, _round_order(max(max_n + 2, k + 2)))
    nums = tuple(ps.egf_coefficient(series, n) for n in range(max_n + 1))
    return BernoulliFamily(spec=spec, order_k=k, max_n=max_n, numbers=nums)


@lru_cache(maxsize=None)
def polynomial(spec: TwistSpec, k: int, n: int) -> BernoulliPolynomial:
    """Degree-n polynomial: coefficient of x^(n-j) is C(n, j) B^(k)_j."""
    fam = numbers(spec, k, n)
    coeffs = tuple(comb(n, i) * fam.numbers[n - i] for i in range(n + 1))
    return BernoulliPolynomial(degree=n, coeffs=coeffs)


def evaluate(poly: BernoulliPolynomial, arg) -> CycloElem:
    """Horner evaluation; rational args and embeddable elements accepted."""
    field = poly.field
    if isinstance(arg, (int, Fraction)):
        arg = field.rational(arg)
    elif isinstance(arg, CycloElem) and arg.field.conductor != field.conductor:
        arg = embed(arg, field.conductor)  # NonDivisibleConductor if impossible
    acc = field.zero
    for c in reversed(poly.coeffs):
        acc = acc * arg + c
    return acc


@lru_cache(maxsize=None)
def power_sum(spec: TwistSpec, k: int, n: int) -> CycloElem:
    """T_k(n) = sum_{l=0..n} chi(l) xi^l l^k, with 0^0 = 1."""
    if k < 0 or n < 0:
        raise ValueError("k and n must be >= 0")
    field = spec.ambient
    xi = spec.xi
    xi_pows = [as_cyclo(xi**j, field.conductor) for j in range(xi.order)]
    acc = field.zero
    for l in range(n + 1):
        c = spec.chi.value_at(l, field)
        if c.is_zero():
            continue
        lk = 1 if (l == 0 and k == 0) else l**k
        if lk:
            acc = acc + c * xi_pows[l % xi.order] * lk
    return acc


@dataclass(frozen=True)
class PowerSumSeriesReport:
    """Outcome of the power-sum generating-series comparison."""

    holds: bool
    order: int
    first_mismatch: int | None
    lhs: tuple[CycloElem, ...]
    rhs: tuple[CycloElem, ...]


def power_sum_series_check(spec: TwistSpec, n: int, order: int) -> PowerSumSeriesReport:
    """Compare two routes to the power-sum generating function.

    Route one divides (xi^(nd) e^(nd t) - 1) * sum_{i<d} chi(i) xi^i e^(i t)
    by xi^d e^(d t) - 1; route two assembles the series whose t^k/k!
    coefficient is T_k(nd - 1) directly from the power sums.  They must agree
    coefficient-by-coefficient.
    """
    if n < 1 or order < 1:
        raise ValueError("need n >= 1 and order >= 1")
    field = spec.ambient
    d = spec.chi.modulus
    xi = as_cyclo(spec.xi, field.conductor)
    # (xi^(nd) e^(nd t) - 1)
    head = [c * xi ** (n * d) for c in ps.exp_at(field.rational(n * d), order).coeffs]
    head[0] = head[0] - field.one
    # sum_{i<d} chi(i) xi^i e^(i t)
    tail = [field.zero] * (order + 1)
    fact = Fraction(1)
    for j in range(order + 1):
        if j:
            fact /= j
        acc = field.zero
        for i in range(d):
            c = spec.chi.value_at(i, field)
            if not c.is_zero():
                acc = acc + c * xi**i * (fact * i**j)
        tail[j] = acc
    numerator = ps.series_mul(ps.TruncSeries(field, head), ps.TruncSeries(field, tail))
    den = [c * xi**d for c in ps.exp_at(field.rational(d), order).coeffs]
    den[0] = den[0] - field.one
    lhs = ps.divide_cancel(numerator, ps.TruncSeries(field, den))
    rhs = tuple(
        power_sum(spec, k, n * d - 1) * Fraction(1, factorial(k)) for k in range(lhs.order + 1)
    )
    first = None
    for k, (a, b) in enumerate(zip(lhs.coeffs, rhs)):
        if a != b:
            first = k
            break
    return PowerSumSeriesReport(
        holds=first is None,
        order=lhs.order,
        first_mismatch=first,
        lhs=lhs.coeffs,
        rhs=rhs,
    )
