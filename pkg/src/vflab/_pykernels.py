"""Pure-Python implementations of the hot loops.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and semantics.  Sparse vectors are dicts; integer rows never hold zeros.
"""
from fractions import Fraction
from math import gcd, lcm

BACKEND = "python"


def _clear_denominators(terms):
    """Scale to integers: returns (integer dict, common denominator, saw_fraction)."""
    den = 1
    frac = False
    for c in terms.values():
        if type(c) is not int:
            frac = True
            den = lcm(den, c.denominator)
    if den == 1:
        return ({e: int(c) for e, c in terms.items()} if frac else terms), 1, frac
    return {e: c.numerator * (den // c.denominator) for e, c in terms.items()}, den, frac


def poly_mul(a, b):
    """Multiply two term dicts ``{exponent tuple: coefficient}``.

    Coefficients are ints or Fractions.  Denominators are cleared up front so
    the convolution runs on ints; the result holds Fractions when either
    input did.
    """
    if len(a) < len(b):
        a, b = b, a
    ia, da, fa = _clear_denominators(a)
    ib, db, fb = _clear_denominators(b)
    out = {}
    get = out.get
    for eb, cb in ib.items():
        for ea, ca in ia.items():
            e = tuple([i + j for i, j in zip(ea, eb)])
            c = get(e, 0) + ca * cb
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    if fa or fb:
        den = da * db
        return {e: Fraction(c, den) for e, c in out.items()}
    return out


def primitive(v):
    """Divide an integer row by the gcd of its entries (in place)."""
    g = 0
    for c in v.values():
        g = gcd(g, c)
        if g == 1:
            return v
    if g > 1:
        for k in v:
            v[k] //= g
    return v


def eliminate(v, row, key):
    """Return ``row[key]*v - v[key]*row`` made primitive; ``key`` drops out."""
    a = row[key]
    b = v[key]
    if a != 1:
        out = {k: a * c for k, c in v.items()}
    else:
        out = dict(v)
    get = out.get
    for k, c in row.items():
        n = get(k, 0) - b * c
        if n:
            out[k] = n
        else:
            out.pop(k, None)
    return primitive(out)
