"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Scalars are stdlib ``fractions.Fraction`` values (arbitrary precision,
always in canonical lowest terms).  A field element is a coordinate vector
in the power basis 1, zeta_m, ..., zeta_m^(phi(m)-1), reduced modulo the
m-th cyclotomic polynomial, so equality is decidable and coefficient-wise.
Internally the vector is stored fraction-free (integer coordinates plus one
positive common denominator); the per-coordinate Fractions are exposed
through :attr:`CycloElem.coeffs`.

Conventions fixed here and relied on elsewhere:

* binary operations require equal conductors; callers embed into an
  lcm-conductor field first (:func:`embed`),
* the field norm is the product of all Galois conjugates, so the norm of a
  rational q is q**phi(m),
* the p-adic valuation is normalized with nu_p(p) = 1 and is only defined
  for rational elements or in fields of p-power conductor (totally ramified
  case, where it is independent of any choice of prime above p),
* roots of unity of order one or two are rational (1 and -1) and therefore
  embed into every field.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from . import _kernel as K
from .errors import (
    DivisionByZero,
    FieldMismatch,
    NonDivisibleConductor,
    UnsupportedField,
)

#: The base scalar type: arbitrary-precision fraction in canonical form.
Rational = Fraction

#: Returned by padic_valuation for the zero element.
INFINITY = math.inf


# ---------------------------------------------------------------------------
# integer utilities

def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(n: int) -> int:
    """Euler totient."""
    out = 1
    for p, e in factorize(n).items():
        out *= (p - 1) * p ** (e - 1)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


# ---------------------------------------------------------------------------
# cyclotomic polynomials (integer coefficients, ascending)

def _poly_mul_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod_int(num, den):
    """Exact division of integer polynomials (den monic up to sign handling)."""
    num = list(num)
    dn = len(den) - 1
    q = [0] * (len(num) - dn)
    for k in range(len(num) - dn - 1, -1, -1):
        c = num[k + dn]
        if c % den[dn]:
            raise ArithmeticError("non-exact polynomial division")
        c //= den[dn]
        q[k] = c
        if c:
            for j, y in enumerate(den):
                num[k + j] -= c * y
    return q, num[:dn]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, ascending, computed by exact recursive division.

    Phi_m = (x^m - 1) / prod(Phi_d for proper divisors d of m).
    """
    if m < 1:
        raise ValueError("conductor must be >= 1")
    if m == 1:
        return (-1, 1)
    num = [-1] + [0] * (m - 1) + [1]
    den = [1]
    for d in _divisors(m)[:-1]:
        den = _poly_mul_int(den, list(cyclotomic_polynomial(d)))
    q, r = _poly_divmod_int(num, den)
    if any(r):
        raise ArithmeticError("cyclotomic division left a remainder")
    return tuple(q)


# ---------------------------------------------------------------------------
# roots of unity

class RootOfUnity:
    """zeta_order^exponent, with the exponent stored reduced mod order.

    Canonicalization of the order itself (dividing out gcd(exponent, order))
    happens only through :meth:`normalized`; equality and hashing compare the
    normalized forms, so zeta_4^2 == zeta_2.
    """

    __slots__ = ("order", "exponent", "_keyval")

    def __init__(self, order: int, exponent: int = 1):
        if order < 1:
            raise ValueError("order must be >= 1")
        exponent %= order
        g = gcd(exponent, order)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "_keyval", (order // g, exponent // g))

    def __setattr__(self, name, value):
        raise AttributeError("RootOfUnity is immutable")

    def _key(self):
        return self._keyval

    def normalized(self) -> "RootOfUnity":
        o, e = self._key()
        return RootOfUnity(o, e)

    def is_one(self) -> bool:
        return self.exponent == 0

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        m = lcm(self.order, other.order)
        e = self.exponent * (m // self.order) + other.exponent * (m // other.order)
        return RootOfUnity(m, e % m)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.order, (self.exponent * k) % self.order)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.exponent)

    def __eq__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(("RootOfUnity", self._key()))

    def __repr__(self):
        return f"RootOfUnity({self.order}, {self.exponent})"


ONE_ROOT = RootOfUnity(1, 0)
MINUS_ONE_ROOT = RootOfUnity(2, 1)


# ---------------------------------------------------------------------------
# fields

class CycloField:
    """The field Q(zeta_m): conductor, minimal polynomial, reduction table.

    Instances are interned by :func:`cyclo_field`; never construct directly.
    The conductor-1 field is Q itself (Phi_1 = x - 1, basis {1}).
    """

    __slots__ = ("conductor", "minimal_polynomial", "degree", "reduction_rows", "zero", "one")

    def __init__(self, conductor: int):
        poly = cyclotomic_polynomial(conductor)
        phi = len(poly) - 1
        self.conductor = conductor
        self.minimal_polynomial = poly
        self.degree = phi
        base = tuple(-c for c in poly[:-1])  # zeta^phi in the basis
        rows = [base]
        cur = list(base)
        for _ in range(max(phi - 1, 1) - 1):
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [v + top * b for v, b in zip(cur, base)]
            rows.append(tuple(cur))
        self.reduction_rows = tuple(rows)
        self.zero = CycloElem._raw(self, (0,) * phi, 1)
        one = [0] * phi
        one[0] = 1
        self.one = CycloElem._raw(self, tuple(one), 1)

    def element(self, coeffs) -> "CycloElem":
        """Element from a sequence of phi(m) rationals in the power basis."""
        return CycloElem(self, coeffs)

    def rational(self, q) -> "CycloElem":
        """The rational q as an element of this field."""
        q = Fraction(q)
        nums = [0] * self.degree
        nums[0] = q.numerator
        return CycloElem._raw(self, *K.normalize(nums, q.denominator))

    def __eq__(self, other):
        if not isinstance(other, CycloField):
            return NotImplemented
        return self.conductor == other.conductor

    def __hash__(self):
        return hash(("CycloField", self.conductor))

    def __repr__(self):
        return f"CycloField({self.conductor})"


@lru_cache(maxsize=None)
def cyclo_field(conductor: int) -> CycloField:
    """Interned field of conductor m."""
    return CycloField(conductor)


# ---------------------------------------------------------------------------
# elements

class CycloElem:
    """Element of Q(zeta_m) in the power basis, reduced mod Phi_m.

    ``nums``/``den`` is the fraction-free storage consumed by the kernels;
    treat instances as immutable.
    """

    __slots__ = ("field", "nums", "den")

    def __init__(self, field: CycloField, coeffs):
        fr = [Fraction(c) for c in coeffs]
        if len(fr) != field.degree:
            raise ValueError(
                f"expected {field.degree} coordinates for conductor {field.conductor}, got {len(fr)}"
            )
        den = 1
        for f in fr:
            den = den // gcd(den, f.denominator) * f.denominator
        nums = [f.numerator * (den // f.denominator) for f in fr]
        nums, den = K.normalize(nums, den)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nums", nums)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("CycloElem is immutable")

    @classmethod
    def _raw(cls, field, nums, den) -> "CycloElem":
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "nums", tuple(nums))
        object.__setattr__(obj, "den", den)
        return obj

    # -- views ------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.nums[0], self.den)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "CycloElem"):
        if self.field.conductor != other.field.conductor:
            raise FieldMismatch(
                f"conductor {self.field.conductor} vs {other.field.conductor}; embed first"
            )

    def __add__(self, other):
        if isinstance(other, CycloElem):
            self._check(other)
            return CycloElem._raw(self.field, *K.vadd(self.nums, self.den, other.nums, other.den))
        if isinstance(other, (int, Fraction)):
            return self + self.field.rational(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return CycloElem._raw(self.field, tuple(-v for v in self.nums), self.den)

    def __sub__(self, other):
        if isinstance(other, CycloElem):
            self._check(other)
            return self + (-other)
        if isinstance(other, (int, Fraction)):
            return self + (-Fraction(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CycloElem):
            self._check(other)
            return CycloElem._raw(
                self.field,
                *K.vmulmod(self.nums, self.den, other.nums, other.den, self.field.reduction_rows),
            )
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloElem._raw(self.field, *K.vscale(self.nums, self.den, q.numerator, q.denominator))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CycloElem):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise DivisionByZero("division by zero scalar")
            return self * (1 / q)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "CycloElem":
        """Multiplicative inverse via extended gcd with the minimal polynomial."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return self.field.rational(1 / self.rational_value())
        a = list(self.coeffs)
        while a and a[-1] == 0:
            a.pop()
        phi = [Fraction(c) for c in self.field.minimal_polynomial]
        g, u = _poly_xgcd_mod(a, phi)
        # g is a nonzero constant; inverse = u / g
        inv = [c / g for c in u]
        inv += [Fraction(0)] * (self.field.degree - len(inv))
        return CycloElem(self.field, inv[: self.field.degree])

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CycloElem):
            return (
                self.field.conductor == other.field.conductor
                and self.nums == other.nums
                and self.den == other.den
            )
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational_value() == Fraction(other)
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_value())
        return hash((self.field.conductor, self.nums, self.den))

    def __repr__(self):
        return f"CycloElem(m={self.field.conductor}, {list(self.coeffs)})"


def _poly_xgcd_mod(a, m):
    """Return (g, u) with u*a == g (mod m), g a nonzero constant, over Fractions.

    The cyclotomic modulus is irreducible over Q, so every nonzero residue of
    smaller degree is a unit and the gcd ends at a nonzero constant.
    """
    r0, r1 = [Fraction(c) for c in m], [Fraction(c) for c in a]
    u0, u1 = [Fraction(0)], [Fraction(1)]
    while True:
        while r1 and r1[-1] == 0:
            r1.pop()
        if len(r1) <= 1:
            break
        q, r = _poly_divmod_frac(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _poly_sub(u0, _poly_mul_frac(q, u1))
    if not r1 or r1[0] == 0:
        raise DivisionByZero("element is a zero divisor modulo the minimal polynomial")
    return r1[0], u1


def _poly_divmod_frac(n, d):
    n = list(n)
    q = [Fraction(0)] * max(len(n) - len(d) + 1, 1)
    for k in range(len(n) - len(d), -1, -1):
        c = n[k + len(d) - 1] / d[-1]
        q[k] = c
        if c:
            for j, y in enumerate(d):
                n[k + j] -= c * y
    while n and n[-1] == 0:
        n.pop()
    return q, n


def _poly_mul_frac(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return out


# ---------------------------------------------------------------------------
# powers of zeta, embeddings, roots as elements

@lru_cache(maxsize=None)
def _zeta_power(conductor: int, e: int) -> CycloElem:
    """zeta_conductor^e as an element (e reduced mod conductor)."""
    field = cyclo_field(conductor)
    e %= conductor
    phi = field.degree
    if e < phi:
        nums = [0] * phi
        nums[e] = 1
        return CycloElem._raw(field, tuple(nums), 1)
    prev = _zeta_power(conductor, e - 1)
    top = prev.nums[-1]
    cur = [0] + list(prev.nums[:-1])
    if top:
        cur = [v + top * b for v, b in zip(cur, field.reduction_rows[0])]
    return CycloElem._raw(field, *K.normalize(cur, prev.den))


def as_cyclo(r: RootOfUnity, m: int) -> CycloElem:
    """The root of unity r as an element of Q(zeta_m).

    Orders one and two are the rationals 1 and -1 and embed into any field;
    otherwise the (normalized) order must divide m.
    """
    o, j = r._key()
    field = cyclo_field(m)
    if o == 1:
        return field.one
    if o == 2:
        return field.rational(-1)
    if m % o:
        raise NonDivisibleConductor(f"root of order {o} does not lie in Q(zeta_{m})")
    return _zeta_power(m, j * (m // o))


def embed(e: CycloElem, b: int) -> CycloElem:
    """Image of e under zeta_a -> zeta_b^(b/a), for a | b (ring embedding)."""
    a = e.field.conductor
    if b % a:
        raise NonDivisibleConductor(f"conductor {a} does not divide {b}")
    if a == b:
        return e
    target = cyclo_field(b)
    z = _zeta_power(b, b // a)
    acc = target.zero
    for c in reversed(e.coeffs):
        acc = acc * z + c
    return acc


def common_field(e1: CycloElem, e2: CycloElem) -> tuple[CycloElem, CycloElem]:
    """Embed both elements into the lcm-conductor field."""
    m = lcm(e1.field.conductor, e2.field.conductor)
    return embed(e1, m), embed(e2, m)


def galois_apply(e: CycloElem, s: int) -> CycloElem:
    """Apply the automorphism zeta_m -> zeta_m^s (requires gcd(s, m) = 1)."""
    m = e.field.conductor
    if gcd(s, m) != 1:
        raise ValueError(f"{s} is not coprime to the conductor {m}")
    acc = e.field.zero
    for i, c in enumerate(e.coeffs):
        if c:
            acc = acc + _zeta_power(m, (i * s) % m) * c
    return acc


# ---------------------------------------------------------------------------
# norm and p-adic valuation

def norm(e: CycloElem) -> Fraction:
    """Field norm: product of all Galois conjugates.

    Computed as the determinant of multiplication by e in the power basis,
    which fixes the sign so that norm(q) == q**phi(m) for rational q.
    """
    phi = e.field.degree
    if e.is_rational():
        return e.rational_value() ** phi
    cols = []
    cur = e
    z = _zeta_power(e.field.conductor, 1)
    for _ in range(phi):
        cols.append(cur.coeffs)
        cur = cur * z
    mat = [[cols[j][i] for j in range(phi)] for i in range(phi)]
    return _det_frac(mat)


def _det_frac(mat) -> Fraction:
    n = len(mat)
    mat = [list(row) for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        for r in range(col + 1, n):
            f = mat[r][col] / mat[col][col]
            if f:
                for c in range(col, n):
                    mat[r][c] -= f * mat[col][c]
    return det


def rational_valuation(q: Fraction, p: int):
    """nu_p of a rational; INFINITY for zero."""
    q = Fraction(q)
    if q == 0:
        return INFINITY
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return Fraction(v)


def _is_p_power(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


def padic_valuation(e: CycloElem, p: int):
    """nu_p(e), normalized so nu_p(p) = 1; INFINITY for the zero element.

    Defined for rational elements of any field, and for arbitrary elements
    when the conductor is 1 or a power of p (single prime above p).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e.is_zero():
        return INFINITY
    if e.is_rational():
        return rational_valuation(e.rational_value(), p)
    m = e.field.conductor
    if not _is_p_power(m, p):
        raise UnsupportedField(
            f"valuation in Q(zeta_{m}) depends on a choice of prime above {p}"
        )
    return Fraction(rational_valuation(norm(e), p)) / e.field.degree


# ---------------------------------------------------------------------------
# serialization ("num/den" strings; conductor-1 elements collapse to a string)

def frac_to_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def frac_from_str(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def cyclo_to_json(e: CycloElem):
    """JSON value for an element: bare "num/den" when rational over Q."""
    if e.field.conductor == 1:
        return frac_to_str(e.rational_value())
    return {
        "conductor": e.field.conductor,
        "coeffs": [frac_to_str(c) for c in e.coeffs],
    }


def cyclo_from_json(obj) -> CycloElem:
    if isinstance(obj, str):
        return cyclo_field(1).rational(frac_from_str(obj))
    field = cyclo_field(int(obj["conductor"]))
    return field.element([frac_from_str(s) for s in obj["coeffs"]])
