# cython: boundscheck=False, wraparound=False
"""Compiled twin of _pykernel: fraction-free cyclotomic vector kernels.

Same data contracts as the pure backend; coordinates are Python ints (they
must stay arbitrary precision), the win comes from compiling the loop
structure and the gcd passes.
"""

from math import gcd

BACKEND = "compiled"


def normalize(nums, den):
    """Reduce (nums, den) to lowest terms with a positive denominator."""
    cdef Py_ssize_t i, n = len(nums)
    cdef list work
    if den < 0:
        den = -den
        work = [-v for v in nums]
    else:
        work = list(nums)
    g = den
    for i in range(n):
        v = work[i]
        if v:
            g = gcd(g, v)
            if g == 1:
                return tuple(work), den
    if g > 1:
        den //= g
        for i in range(n):
            work[i] //= g
    return tuple(work), den


def vadd(anums, aden, bnums, bden):
    """Sum of two vectors over the lcm denominator."""
    cdef Py_ssize_t i, n = len(anums)
    cdef list out = [0] * n
    if aden == bden:
        for i in range(n):
            out[i] = anums[i] + bnums[i]
        return normalize(out, aden)
    g = gcd(aden, bden)
    fa = bden // g
    fb = aden // g
    for i in range(n):
        out[i] = anums[i] * fa + bnums[i] * fb
    return normalize(out, aden * fa)


def vscale(nums, den, snum, sden):
    """Multiply a vector by the rational snum/sden."""
    cdef Py_ssize_t i, n = len(nums)
    if snum == 0:
        return (0,) * n, 1
    cdef list out = [0] * n
    for i in range(n):
        out[i] = nums[i] * snum
    return normalize(out, den * sden)


cdef list _mul_reduce(anums, bnums, red):
    cdef Py_ssize_t i, j, e, phi = len(anums)
    cdef list prod = [0] * (2 * phi - 1)
    for i in range(phi):
        a = anums[i]
        if a:
            for j in range(phi):
                b = bnums[j]
                if b:
                    prod[i + j] = prod[i + j] + a * b
    for e in range(2 * phi - 2, phi - 1, -1):
        c = prod[e]
        if c:
            row = red[e - phi]
            for j in range(phi):
                r = row[j]
                if r:
                    prod[j] = prod[j] + c * r
    return prod[:phi]


def vmulmod(anums, aden, bnums, bden, red):
    """Product of two vectors, reduced and normalized."""
    return normalize(_mul_reduce(anums, bnums, red), aden * bden)


cdef bint _is_zero(v):
    for x in v:
        if x:
            return False
    return True


def cauchy_coeff(anums, adens, bnums, bdens, n, red):
    """Coefficient n of the Cauchy product of two coefficient lists."""
    cdef Py_ssize_t i, j, k, phi = len(anums[0])
    cdef list accn = [0] * phi
    cdef list pn
    accd = 1
    for k in range(n + 1):
        av = anums[k]
        bv = bnums[n - k]
        if _is_zero(av) or _is_zero(bv):
            continue
        pn = _mul_reduce(av, bv, red)
        pd = adens[k] * bdens[n - k]
        g = gcd(accd, pd)
        fa = pd // g
        fb = accd // g
        if fa == 1:
            for j in range(phi):
                v = pn[j]
                if v:
                    accn[j] = accn[j] + v * fb
        else:
            for j in range(phi):
                accn[j] = accn[j] * fa + pn[j] * fb
            accd = accd * fa
    return normalize(accn, accd)
