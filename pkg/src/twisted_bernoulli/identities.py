"""Symbolic verification of the symmetry identities between power sums and
the generalized twisted Bernoulli numbers and polynomials of higher order.

Every checker expands both sides of one identity as an exact object, either
a bivariate polynomial in x and y (coefficients in the ambient cyclotomic
field) or a single field element, and compares coefficient matrices entry
by entry.  No sampling is involved in the verdict; random-point evaluation
exists only as a sanity cross-check in the test suite.

Two identities are checked under two readings each (see the checker
docstrings): the swapped-side expansion of the order-m product formula has
one printed variant that differs from the symmetric form in a twist
subscript, and the m = 1, y = 0 specialization of the power-sum/polynomial
relation is printed without the twist weights that the general form
carries.  Reports carry the verdict of every reading.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from . import bernoulli as bn
from .characters import (
    DirichletCharacter,
    character_from_json,
    character_to_json,
    enumerate_cyclic,
    root_from_json,
    root_to_json,
)
from .errors import ConfigError, NonCyclicUnitGroup
from .exact import CycloElem, CycloField, RootOfUnity, as_cyclo, cyclo_field, cyclo_to_json


# ---------------------------------------------------------------------------
# bivariate polynomials over one field

class BivariatePoly:
    """Coefficient matrix rows[i][j] = coefficient of x^i y^j, trimmed."""

    __slots__ = ("field", "rows")

    def __init__(self, field: CycloField, rows):
        rows = [list(r) for r in rows]
        # trim trailing zero columns, then rows
        width = 0
        for r in rows:
            for j in range(len(r) - 1, -1, -1):
                if not r[j].is_zero():
                    width = max(width, j + 1)
                    break
        rows = [r[:width] for r in rows]
        while rows and all(c.is_zero() for c in rows[-1]):
            rows.pop()
        if not rows:
            rows = [[field.zero]]
            width = 1
        rows = [r + [field.zero] * (width - len(r)) for r in rows]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("BivariatePoly is immutable")

    @property
    def deg_x(self) -> int:
        return len(self.rows) - 1

    @property
    def deg_y(self) -> int:
        return len(self.rows[0]) - 1

    def coeff(self, i: int, j: int) -> CycloElem:
        if i <= self.deg_x and j <= self.deg_y:
            return self.rows[i][j]
        return self.field.zero

    def first_mismatch(self, other: "BivariatePoly"):
        """Lexicographically first (i, j) where the matrices differ, or None."""
        dx = max(self.deg_x, other.deg_x)
        dy = max(self.deg_y, other.deg_y)
        for i in range(dx + 1):
            for j in range(dy + 1):
                if self.coeff(i, j) != other.coeff(i, j):
                    return (i, j)
        return None

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self.field.conductor == other.field.conductor and self.rows == other.rows

    def __hash__(self):
        return hash((self.field.conductor, self.rows))

    def evaluate(self, x, y) -> CycloElem:
        fld = self.field
        if isinstance(x, (int, Fraction)):
            x = fld.rational(x)
        if isinstance(y, (int, Fraction)):
            y = fld.rational(y)
        acc = fld.zero
        for i in range(self.deg_x, -1, -1):
            rowval = fld.zero
            for j in range(self.deg_y, -1, -1):
                rowval = rowval * y + self.rows[i][j]
            acc = acc * x + rowval
        return acc

    def restrict_y0(self) -> "BivariatePoly":
        """The polynomial in x obtained by setting y = 0."""
        return BivariatePoly(self.field, [[r[0]] for r in self.rows])

    def __repr__(self):
        return f"BivariatePoly(m={self.field.conductor}, deg_x={self.deg_x}, deg_y={self.deg_y})"


def _univar(field: CycloField, coeffs) -> BivariatePoly:
    return BivariatePoly(field, [[c] for c in coeffs])


# ---------------------------------------------------------------------------
# cached building blocks

@lru_cache(maxsize=None)
def _spec_for(chi: DirichletCharacter, xi: RootOfUnity, w: int, conductor: int) -> bn.TwistSpec:
    return bn.twist_spec(chi, xi**w, conductor=conductor)


@lru_cache(maxsize=None)
def _affine_poly(
    spec: bn.TwistSpec, k: int, degree: int, scale: Fraction, shift: Fraction
) -> tuple[CycloElem, ...]:
    """Coefficients (ascending) of B^(k)_degree(scale*u + shift) in u."""
    base = bn.polynomial(spec, k, degree).coeffs
    if shift == 0:
        return tuple(c * scale**t for t, c in enumerate(base))
    out = [spec.ambient.zero] * (degree + 1)
    for i, c in enumerate(base):
        if c.is_zero():
            continue
        for t in range(i + 1):
            out[t] = out[t] + c * (comb(i, t) * scale**t * shift ** (i - t))
    return tuple(out)


@lru_cache(maxsize=None)
def _bern_at(spec: bn.TwistSpec, k: int, degree: int, point: Fraction) -> CycloElem:
    return bn.evaluate(bn.polynomial(spec, k, degree), point)


def _accumulate_outer(mat, xpoly, ypoly):
    for a, xc in enumerate(xpoly):
        if xc.is_zero():
            continue
        row = mat[a]
        for b, yc in enumerate(ypoly):
            if not yc.is_zero():
                row[b] = row[b] + xc * yc


# ---------------------------------------------------------------------------
# side builders; (wa, wb) = (w1, w2) gives the left side, swapping gives the
# right side, so swap symmetry is structural

def _theorem1_side(n, m, chi, xi, wa, wb, cond, last_twist_wa=False) -> BivariatePoly:
    fld = cyclo_field(cond)
    d = chi.modulus
    spec_a = _spec_for(chi, xi, wa, cond)
    spec_b = _spec_for(chi, xi, wb, cond)
    spec_last = spec_a if last_twist_wa else spec_b
    mat = [[fld.zero] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        scal = comb(n, j) * Fraction(wb) ** j * Fraction(wa) ** (n - j - 1)
        xpoly = [c * scal for c in _affine_poly(spec_a, m, n - j, Fraction(wb), Fraction(0))]
        ypoly = [fld.zero] * (j + 1)
        for k in range(j + 1):
            t = bn.power_sum(spec_b, k, wa * d - 1) * comb(j, k)
            if t.is_zero():
                continue
            sub = _affine_poly(spec_last, m - 1, j - k, Fraction(wa), Fraction(0))
            for b, c in enumerate(sub):
                if not c.is_zero():
                    ypoly[b] = ypoly[b] + t * c
        _accumulate_outer(mat, xpoly, ypoly)
    return BivariatePoly(fld, mat)


def _remark_m1_side(n, chi, xi, wa, wb, cond) -> BivariatePoly:
    fld = cyclo_field(cond)
    d = chi.modulus
    spec_a = _spec_for(chi, xi, wa, cond)
    spec_b = _spec_for(chi, xi, wb, cond)
    acc = [fld.zero] * (n + 1)
    for j in range(n + 1):
        t = bn.power_sum(spec_b, j, wa * d - 1)
        if t.is_zero():
            continue
        t = t * (comb(n, j) * Fraction(wb) ** j * Fraction(wa) ** (n - j - 1))
        sub = _affine_poly(spec_a, 1, n - j, Fraction(wb), Fraction(0))
        for a, c in enumerate(sub):
            if not c.is_zero():
                acc[a] = acc[a] + t * c
    return _univar(fld, acc)


def _corollary2_side(n, m, chi, xi, wa, wb, cond) -> CycloElem:
    fld = cyclo_field(cond)
    d = chi.modulus
    spec_a = _spec_for(chi, xi, wa, cond)
    spec_b = _spec_for(chi, xi, wb, cond)
    nums_a = bn.numbers(spec_a, m, n).numbers
    nums_b = bn.numbers(spec_b, m - 1, n).numbers
    acc = fld.zero
    for j in range(n + 1):
        inner = fld.zero
        for k in range(j + 1):
            t = bn.power_sum(spec_b, k, wa * d - 1)
            if not t.is_zero():
                inner = inner + t * nums_b[j - k] * comb(j, k)
        if not inner.is_zero():
            acc = acc + nums_a[n - j] * inner * (
                comb(n, j) * Fraction(wb) ** j * Fraction(wa) ** (n - j - 1)
            )
    return acc


def _m1_numbers_side(n, chi, xi, wa, wb, cond) -> CycloElem:
    fld = cyclo_field(cond)
    d = chi.modulus
    spec_a = _spec_for(chi, xi, wa, cond)
    spec_b = _spec_for(chi, xi, wb, cond)
    nums_a = bn.numbers(spec_a, 1, n).numbers
    acc = fld.zero
    for j in range(n + 1):
        t = bn.power_sum(spec_b, j, wa * d - 1)
        if not t.is_zero():
            acc = acc + nums_a[n - j] * t * (
                comb(n, j) * Fraction(wb) ** j * Fraction(wa) ** (n - j - 1)
            )
    return acc


def _theorem3_side(n, m, chi, xi, wa, wb, cond) -> BivariatePoly:
    fld = cyclo_field(cond)
    d = chi.modulus
    spec_a = _spec_for(chi, xi, wa, cond)
    spec_b = _spec_for(chi, xi, wb, cond)
    mat = [[fld.zero] * (n + 1) for _ in range(n + 1)]
    for k in range(n + 1):
        scal = comb(n, k) * Fraction(wa) ** (k - 1) * Fraction(wb) ** (n - k)
        ypoly = [c * scal for c in _affine_poly(spec_b, m - 1, n - k, Fraction(wa), Fraction(0))]
        xpoly = [fld.zero] * (k + 1)
        for i in range(wa * d):
            cv = chi.value_at(i, fld)
            if cv.is_zero():
                continue
            w = cv * as_cyclo(xi ** (wb * i), cond)
            sub = _affine_poly(spec_a, m, k, Fraction(wb), Fraction(wb * i, wa))
            for a, c in enumerate(sub):
                if not c.is_zero():
                    xpoly[a] = xpoly[a] + w * c
        _accumulate_outer(mat, xpoly, ypoly)
    return BivariatePoly(fld, mat)


def _remark_2_11_side(n, chi, xi, wa, wb, cond, with_weights) -> BivariatePoly:
    fld = cyclo_field(cond)
    d = chi.modulus
    spec_a = _spec_for(chi, xi, wa, cond)
    acc = [fld.zero] * (n + 1)
    lead = Fraction(wa) ** (n - 1)
    for i in range(wa * d):
        cv = chi.value_at(i, fld)
        if cv.is_zero():
            continue
        w = cv * as_cyclo(xi ** (wb * i), cond) if with_weights else cv
        sub = _affine_poly(spec_a, 1, n, Fraction(wb), Fraction(wb * i, wa))
        for a, c in enumerate(sub):
            if not c.is_zero():
                acc[a] = acc[a] + w * c
    return _univar(fld, [c * lead for c in acc])


def _corollary4_side(n, m, chi, xi, wa, wb, cond) -> CycloElem:
    fld = cyclo_field(cond)
    d = chi.modulus
    spec_a = _spec_for(chi, xi, wa, cond)
    spec_b = _spec_for(chi, xi, wb, cond)
    nums_b = bn.numbers(spec_b, m - 1, n).numbers
    acc = fld.zero
    for k in range(n + 1):
        inner = fld.zero
        for i in range(d * wa):
            cv = chi.value_at(i, fld)
            if cv.is_zero():
                continue
            inner = inner + cv * as_cyclo(xi ** (wb * i), cond) * _bern_at(
                spec_a, m, k, Fraction(wb * i, wa)
            )
        if not inner.is_zero():
            acc = acc + nums_b[n - k] * inner * (
                comb(n, k) * Fraction(wa) ** (k - 1) * Fraction(wb) ** (n - k)
            )
    return acc


def _eq_2_12_side(n, chi, xi, wa, wb, cond) -> CycloElem:
    fld = cyclo_field(cond)
    d = chi.modulus
    spec_a = _spec_for(chi, xi, wa, cond)
    acc = fld.zero
    for i in range(d * wa):
        cv = chi.value_at(i, fld)
        if cv.is_zero():
            continue
        acc = acc + cv * as_cyclo(xi ** (wb * i), cond) * _bern_at(spec_a, 1, n, Fraction(wb * i, wa))
    return acc * Fraction(wa) ** (n - 1)


# ---------------------------------------------------------------------------
# reports and checkers

@dataclass
class IdentityReport:
    """Outcome of one identity instance.

    ``holds`` is the verdict of the primary reading; when a checker evaluates
    several readings their individual verdicts are in ``readings``.
    """

    identity: str
    params: dict
    holds: bool
    lhs: object
    rhs: object
    first_mismatch: object = None
    readings: dict | None = None
    error: str | None = None


def _params(chi, xi, **kw) -> dict:
    out = {}
    for key in ("n", "m"):
        if key in kw:
            out[key] = kw[key]
    out["d"] = chi.modulus
    out["chi"] = character_to_json(chi)
    out["xi"] = root_to_json(xi)
    for key in ("w1", "w2", "k", "shift", "series_order"):
        if key in kw:
            out[key] = kw[key]
    return out


def _compare(identity, params, lhs, rhs, readings=None, holds=None) -> IdentityReport:
    if isinstance(lhs, BivariatePoly):
        mismatch = lhs.first_mismatch(rhs)
        equal = mismatch is None
    else:
        equal = lhs == rhs
        mismatch = None
    return IdentityReport(
        identity=identity,
        params=params,
        holds=equal if holds is None else holds,
        lhs=lhs,
        rhs=rhs,
        first_mismatch=mismatch,
        readings=readings,
    )


def check_eq_1_13(spec: bn.TwistSpec, k: int, n: int) -> IdentityReport:
    """Difference quotient of the degree-k polynomial at the shifted argument
    against the power sum: (xi^(nd) B_k(nd) - B_k) / k = T_(k-1)(nd - 1)."""
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    d = spec.chi.modulus
    fld = spec.ambient
    shifted = as_cyclo(spec.xi ** (n * d), fld.conductor) * bn.evaluate(
        bn.polynomial(spec, 1, k), n * d
    )
    lhs = (shifted - bn.numbers(spec, 1, k).numbers[k]) * Fraction(1, k)
    rhs = bn.power_sum(spec, k - 1, n * d - 1)
    params = _params(spec.chi, spec.xi, n=n, k=k)
    return _compare("eq_1_13", params, lhs, rhs)


def check_theorem1(n, m, chi, xi, w1, w2) -> IdentityReport:
    """Order-m product formula, bivariate in x and y.

    Primary reading: the right side is the exact (w1, w2) swap of the left.
    The second reading ("expansion_literal") follows the printed swapped
    expansion, whose final factor keeps the twist of the unswapped side; it
    is reported but does not drive ``holds``.
    """
    if m < 1 or n < 0 or w1 < 1 or w2 < 1:
        raise ValueError("need m >= 1, n >= 0, w1, w2 >= 1")
    cond = bn.ambient_conductor(chi, xi.normalized())
    lhs = _theorem1_side(n, m, chi, xi, w1, w2, cond)
    rhs = _theorem1_side(n, m, chi, xi, w2, w1, cond)
    rhs_lit = _theorem1_side(n, m, chi, xi, w2, w1, cond, last_twist_wa=True)
    readings = {
        "symmetric": lhs.first_mismatch(rhs) is None,
        "expansion_literal": lhs.first_mismatch(rhs_lit) is None,
    }
    params = _params(chi, xi, n=n, m=m, w1=w1, w2=w2)
    rep = _compare("theorem1", params, lhs, rhs, readings=readings, holds=readings["symmetric"])
    return rep


def check_remark_m1(n, chi, xi, w1, w2) -> IdentityReport:
    """m = 1, y = 0 form of the product formula, expanded independently."""
    cond = bn.ambient_conductor(chi, xi.normalized())
    lhs = _remark_m1_side(n, chi, xi, w1, w2, cond)
    rhs = _remark_m1_side(n, chi, xi, w2, w1, cond)
    params = _params(chi, xi, n=n, w1=w1, w2=w2)
    return _compare("remark_m1", params, lhs, rhs)


def check_corollary2(n, m, chi, xi, w1, w2) -> IdentityReport:
    """Numbers-only product formula (x = y = 0)."""
    cond = bn.ambient_conductor(chi, xi.normalized())
    lhs = _corollary2_side(n, m, chi, xi, w1, w2, cond)
    rhs = _corollary2_side(n, m, chi, xi, w2, w1, cond)
    params = _params(chi, xi, n=n, m=m, w1=w1, w2=w2)
    return _compare("corollary2", params, lhs, rhs)


def check_m1_numbers(n, chi, xi, w1, w2) -> IdentityReport:
    """m = 1 numbers identity: binomial pairing of numbers with power sums."""
    cond = bn.ambient_conductor(chi, xi.normalized())
    lhs = _m1_numbers_side(n, chi, xi, w1, w2, cond)
    rhs = _m1_numbers_side(n, chi, xi, w2, w1, cond)
    params = _params(chi, xi, n=n, w1=w1, w2=w2)
    return _compare("m1_numbers", params, lhs, rhs)


def check_theorem3(n, m, chi, xi, w1, w2) -> IdentityReport:
    """Power-sum/polynomial relation with twist-weighted shifted arguments."""
    if m < 1 or n < 0 or w1 < 1 or w2 < 1:
        raise ValueError("need m >= 1, n >= 0, w1, w2 >= 1")
    cond = bn.ambient_conductor(chi, xi.normalized())
    lhs = _theorem3_side(n, m, chi, xi, w1, w2, cond)
    rhs = _theorem3_side(n, m, chi, xi, w2, w1, cond)
    params = _params(chi, xi, n=n, m=m, w1=w1, w2=w2)
    return _compare("theorem3", params, lhs, rhs)


def check_remark_2_11(n, chi, xi, w1, w2) -> IdentityReport:
    """m = 1, y = 0 form of the shifted-argument relation, two readings.

    "weighted" keeps the twist factor on each shifted term, matching the
    m = 1 specialization of the general relation; "as_printed" drops it.
    ``holds`` is true when at least one reading holds; the stored sides are
    the weighted ones.
    """
    cond = bn.ambient_conductor(chi, xi.normalized())
    lhs_w = _remark_2_11_side(n, chi, xi, w1, w2, cond, with_weights=True)
    rhs_w = _remark_2_11_side(n, chi, xi, w2, w1, cond, with_weights=True)
    lhs_p = _remark_2_11_side(n, chi, xi, w1, w2, cond, with_weights=False)
    rhs_p = _remark_2_11_side(n, chi, xi, w2, w1, cond, with_weights=False)
    readings = {
        "weighted": lhs_w.first_mismatch(rhs_w) is None,
        "as_printed": lhs_p.first_mismatch(rhs_p) is None,
    }
    params = _params(chi, xi, n=n, w1=w1, w2=w2)
    rep = _compare(
        "remark_2_11", params, lhs_w, rhs_w, readings=readings, holds=any(readings.values())
    )
    return rep


def check_corollary4(n, m, chi, xi, w1, w2) -> IdentityReport:
    """Numbers-level shifted-argument relation (x = y = 0)."""
    cond = bn.ambient_conductor(chi, xi.normalized())
    lhs = _corollary4_side(n, m, chi, xi, w1, w2, cond)
    rhs = _corollary4_side(n, m, chi, xi, w2, w1, cond)
    params = _params(chi, xi, n=n, m=m, w1=w1, w2=w2)
    return _compare("corollary4", params, lhs, rhs)


def check_eq_2_12(n, chi, xi, w1, w2) -> IdentityReport:
    """m = 1 numbers form of the shifted-argument relation (weights kept)."""
    cond = bn.ambient_conductor(chi, xi.normalized())
    lhs = _eq_2_12_side(n, chi, xi, w1, w2, cond)
    rhs = _eq_2_12_side(n, chi, xi, w2, w1, cond)
    params = _params(chi, xi, n=n, w1=w1, w2=w2)
    return _compare("eq_2_12", params, lhs, rhs)


def check_power_sum_series(chi, xi, n, series_order) -> IdentityReport:
    """Wrap the two-route power-sum generating-function comparison."""
    spec = bn.twist_spec(chi, xi)
    rep = bn.power_sum_series_check(spec, n, series_order)
    params = _params(chi, xi, n=n, series_order=series_order)
    return IdentityReport(
        identity="power_sum_series_check",
        params=params,
        holds=rep.holds,
        lhs=rep.lhs,
        rhs=rep.rhs,
        first_mismatch=rep.first_mismatch,
    )


# ---------------------------------------------------------------------------
# serialization of reports

def _side_to_json(side):
    if isinstance(side, BivariatePoly):
        return {
            "deg_x": side.deg_x,
            "deg_y": side.deg_y,
            "coeffs": [[cyclo_to_json(c) for c in row] for row in side.rows],
        }
    if isinstance(side, CycloElem):
        return cyclo_to_json(side)
    return [cyclo_to_json(c) for c in side]  # series coefficient tuple


def report_to_record(rep: IdentityReport, include_sides: bool = False) -> dict:
    """JSON-ready record; sides are kept for failures or on request."""
    record = {
        "identity": rep.identity,
        "params": rep.params,
        "holds": rep.holds,
    }
    if rep.readings is not None:
        record["readings"] = rep.readings
    if rep.first_mismatch is not None:
        fm = rep.first_mismatch
        record["first_mismatch"] = list(fm) if isinstance(fm, tuple) else fm
    if rep.error is not None:
        record["error"] = rep.error
    elif include_sides or not rep.holds:
        record["lhs"] = _side_to_json(rep.lhs)
        record["rhs"] = _side_to_json(rep.rhs)
    return record


# ---------------------------------------------------------------------------
# grid sweeps

IDENTITY_TAGS = (
    "eq_1_13",
    "theorem1",
    "remark_m1",
    "corollary2",
    "m1_numbers",
    "theorem3",
    "remark_2_11",
    "corollary4",
    "eq_2_12",
    "power_sum_series_check",
)

_GRID_KEYS = {
    "identity",
    "d",
    "character",
    "xi",
    "w1",
    "w2",
    "m",
    "n_max",
    "k",
    "shift",
    "n",
    "series_order",
}


def _as_int_list(grid, key, default=None):
    if key not in grid:
        if default is None:
            raise ConfigError(f"missing required key '{key}' in grid")
        return sorted(default)
    val = grid[key]
    if isinstance(val, int):
        return [val]
    if not isinstance(val, list) or not all(isinstance(v, int) for v in val):
        raise ConfigError(f"key '{key}' must be an integer or list of integers")
    return sorted(val)


def _resolve_characters(grid, d: int) -> list[DirichletCharacter]:
    spec = grid.get("character", "all")
    if spec == "all":
        try:
            return enumerate_cyclic(d)
        except NonCyclicUnitGroup as exc:
            raise ConfigError(f"character \"all\" needs a cyclic unit group: {exc}")
    if isinstance(spec, dict):
        spec = [spec]
    if not isinstance(spec, list):
        raise ConfigError("key 'character' must be \"all\", an object, or a list of objects")
    return [character_from_json(s, modulus=d) for s in spec]


def _resolve_roots(grid) -> list[RootOfUnity]:
    val = grid.get("xi")
    if val is None:
        raise ConfigError("missing required key 'xi' in grid")
    if isinstance(val, dict):
        val = [val]
    roots = [root_from_json(v) for v in val]
    return sorted(roots, key=lambda r: (r.order, r.exponent))


def expand_grid(grid: dict):
    """Yield instance descriptors for one grid object, in deterministic order."""
    if not isinstance(grid, dict):
        raise ConfigError("each grid must be a JSON object")
    for key in grid:
        if key not in _GRID_KEYS:
            raise ConfigError(f"unknown key '{key}' in grid")
    tags = grid.get("identity")
    if tags is None:
        raise ConfigError("missing required key 'identity' in grid")
    if isinstance(tags, str):
        tags = [tags]
    for tag in tags:
        if tag not in IDENTITY_TAGS:
            raise ConfigError(f"unknown identity tag '{tag}'")
    n_max = grid.get("n_max")
    if n_max is not None and not isinstance(n_max, int):
        raise ConfigError("key 'n_max' must be an integer")
    ds = _as_int_list(grid, "d")
    for tag in tags:
        for d in ds:
            chars = _resolve_characters(grid, d)
            roots = _resolve_roots(grid)
            for chi in chars:
                chi_json = character_to_json(chi)
                for xi in roots:
                    base = {"identity": tag, "chi": chi_json, "xi": root_to_json(xi)}
                    if tag == "eq_1_13":
                        if n_max is None and "k" not in grid:
                            raise ConfigError("grid for eq_1_13 needs 'k' or 'n_max'")
                        ks = _as_int_list(grid, "k", default=range(1, (n_max or 0) + 1))
                        shifts = _as_int_list(grid, "shift", default=[1])
                        for k in ks:
                            for shift in shifts:
                                yield {**base, "k": k, "shift": shift}
                    elif tag == "power_sum_series_check":
                        ns = _as_int_list(grid, "n", default=[1])
                        order = grid.get("series_order", 12)
                        if not isinstance(order, int) or order < 1:
                            raise ConfigError("key 'series_order' must be a positive integer")
                        for n in ns:
                            yield {**base, "n": n, "series_order": order}
                    else:
                        if n_max is None:
                            raise ConfigError(f"missing required key 'n_max' in grid for {tag}")
                        w1s = _as_int_list(grid, "w1", default=[1])
                        w2s = _as_int_list(grid, "w2", default=[1])
                        ms = _as_int_list(grid, "m", default=[1])
                        uses_m = tag in ("theorem1", "corollary2", "theorem3", "corollary4")
                        for w1 in w1s:
                            for w2 in w2s:
                                for m in ms if uses_m else [None]:
                                    for n in range(n_max + 1):
                                        inst = {**base, "n": n, "w1": w1, "w2": w2}
                                        if m is not None:
                                            inst["m"] = m
                                        yield inst


def run_instance(desc: dict) -> IdentityReport:
    """Dispatch one instance descriptor to its checker."""
    tag = desc["identity"]
    chi = character_from_json(desc["chi"])
    xi = root_from_json(desc["xi"])
    if tag == "eq_1_13":
        spec = bn.twist_spec(chi, xi)
        return check_eq_1_13(spec, desc["k"], desc["shift"])
    if tag == "power_sum_series_check":
        return check_power_sum_series(chi, xi, desc["n"], desc["series_order"])
    args = (desc["n"], chi, xi, desc["w1"], desc["w2"])
    if tag == "theorem1":
        return check_theorem1(desc["n"], desc["m"], chi, xi, desc["w1"], desc["w2"])
    if tag == "remark_m1":
        return check_remark_m1(*args)
    if tag == "corollary2":
        return check_corollary2(desc["n"], desc["m"], chi, xi, desc["w1"], desc["w2"])
    if tag == "m1_numbers":
        return check_m1_numbers(*args)
    if tag == "theorem3":
        return check_theorem3(desc["n"], desc["m"], chi, xi, desc["w1"], desc["w2"])
    if tag == "remark_2_11":
        return check_remark_2_11(*args)
    if tag == "corollary4":
        return check_corollary4(desc["n"], desc["m"], chi, xi, desc["w1"], desc["w2"])
    if tag == "eq_2_12":
        return check_eq_2_12(*args)
    raise ConfigError(f"unknown identity tag '{tag}'")


def _record_for_instance(payload) -> dict:
    desc, include_sides = payload
    try:
        rep = run_instance(desc)
    except Exception as exc:  # aggregate per-instance failures, keep sweeping
        tag = desc["identity"]
        chi = character_from_json(desc["chi"])
        xi = root_from_json(desc["xi"])
        params = _params(
            chi, xi, **{k: v for k, v in desc.items() if k in ("n", "m", "w1", "w2", "k", "shift", "series_order")}
        )
        rep = IdentityReport(
            identity=tag, params=params, holds=False, lhs=None, rhs=None, error=str(exc)
        )
        return report_to_record(rep, include_sides)
    return report_to_record(rep, include_sides)


def sweep(grids, include_sides: bool = False, jobs: int = 1):
    """Run every instance of every grid; returns (records, summary).

    Records arrive in the deterministic expansion order regardless of the
    number of worker processes.
    """
    if isinstance(grids, dict):
        grids = [grids]
    instances = []
    for grid in grids:
        instances.extend(expand_grid(grid))
    payloads = [(desc, include_sides) for desc in instances]
    if jobs > 1 and len(payloads) > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunk = max(1, len(payloads) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_record_for_instance, payloads, chunksize=chunk))
    else:
        records = [_record_for_instance(p) for p in payloads]
    summary = {
        "total": len(records),
        "holds": sum(1 for r in records if r["holds"]),
        "failures": sum(1 for r in records if not r["holds"] and "error" not in r),
        "errors": sum(1 for r in records if "error" in r),
    }
    return records, summary
