# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the loops in ``_pykernels``."""
from fractions import Fraction
from math import gcd, lcm

from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM

BACKEND = "cython"


cdef tuple _clear_denominators(dict terms):
    cdef object den = 1
    cdef bint frac = False
    for c in terms.values():
        if type(c) is not int:
            frac = True
            den = lcm(den, c.denominator)
    if den == 1:
        return ({e: int(c) for e, c in terms.items()} if frac else terms), 1, frac
    return {e: c.numerator * (den // c.denominator) for e, c in terms.items()}, den, frac


def poly_mul(dict a, dict b):
    cdef dict out = {}
    cdef dict ia, ib
    cdef tuple ea, eb, e
    cdef Py_ssize_t i, n
    cdef bint fa, fb
    cdef object c
    if len(a) < len(b):
        a, b = b, a
    ia, da, fa = _clear_denominators(a)
    ib, db, fb = _clear_denominators(b)
    for eb, cb in ib.items():
        n = len(eb)
        for ea, ca in ia.items():
            e = PyTuple_New(n)
            for i in range(n):
                v = <long>ea[i] + <long>eb[i]
                Py_INCREF(v)
                PyTuple_SET_ITEM(e, i, v)
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    if fa or fb:
        den = da * db
        return {e: Fraction(c, den) for e, c in out.items()}
    return out


def primitive(dict v):
    cdef object g = 0
    for c in v.values():
        g = gcd(g, c)
        if g == 1:
            return v
    if g > 1:
        for k in v:
            v[k] = v[k] // g
    return v


def eliminate(dict v, dict row, key):
    cdef object a = row[key]
    cdef object b = v[key]
    cdef dict out
    if a != 1:
        out = {k: a * c for k, c in v.items()}
    else:
        out = dict(v)
    for k, c in row.items():
        n = out.get(k, 0) - b * c
        if n:
            out[k] = n
        else:
            out.pop(k, None)
    return primitive(out)
