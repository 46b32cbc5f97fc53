"""Monomial orders, Buchberger's algorithm and quotient bases."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .polynomial import Polynomial, VarSet, as_rational, common_varset

DEFAULT_CAP = 10_000


@dataclass(frozen=True)
class MonomialOrder:
    """lex, grevlex, or weighted (positive weights, ties broken by ``tie``)."""

    kind: str
    weights: tuple = ()
    tie: str = "grevlex"

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "weighted"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "weighted":
            w = tuple(as_rational(x) for x in self.weights)
            if not w or any(x <= 0 for x in w):
                raise ValueError("weighted orders need strictly positive weights")
            if self.tie not in ("lex", "grevlex"):
                raise ValueError(f"unknown tie-break order {self.tie!r}")
            object.__setattr__(self, "weights", w)

    def key(self, exp):
        if self.kind == "lex":
            return exp
        if self.kind == "grevlex":
            return (sum(exp), tuple(-e for e in reversed(exp)))
        wdeg = sum(w * e for w, e in zip(self.weights, exp))
        tie = exp if self.tie == "lex" else (sum(exp), tuple(-e for e in reversed(exp)))
        return (wdeg, tie)


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def weighted_order(weights, tie: str = "grevlex") -> MonomialOrder:
    return MonomialOrder("weighted", tuple(weights), tie)


@dataclass(frozen=True)
class Ideal:
    generators: tuple

    def __init__(self, generators, varset: VarSet | None = None):
        gens = tuple(g for g in generators if not g.is_zero())
        object.__setattr__(self, "generators", gens)
        if gens:
            common_varset(*gens)
        if varset is None:
            every = tuple(generators)
            if not every:
                raise ValueError("an ideal without generators needs an explicit varset")
            varset = every[0].varset
        object.__setattr__(self, "_varset", varset)

    @property
    def varset(self) -> VarSet:
        return self._varset


@dataclass(frozen=True)
class QuotientBasis:
    """Standard monomials of a quotient ring, sorted ascending by the order."""

    monomials: tuple
    finite: bool


class InfiniteQuotientError(ValueError):
    pass


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _Lead:
    """Polynomial as a term dict with a cached leading term."""

    __slots__ = ("terms", "lm", "lc")

    def __init__(self, terms, key):
        self.terms = terms
        self.lm = max(terms, key=key)
        self.lc = terms[self.lm]


def _shift_sub(p: dict, c, shift, g: dict):
    """p -= c * x^shift * g, in place."""
    for e, v in g.items():
        k = tuple(x + y for x, y in zip(e, shift))
        n = p.get(k, 0) - c * v
        if n:
            p[k] = n
        else:
            p.pop(k, None)


def _normal_form(p: dict, basis, key) -> dict:
    """Fully reduce a term dict by a list of _Lead objects."""
    p = dict(p)
    rem = {}
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for g in basis:
            if _divides(g.lm, lm):
                _shift_sub(p, Fraction(c) / g.lc, _sub(lm, g.lm), g.terms)
                break
        else:
            rem[lm] = c
            del p[lm]
    return rem


def _spoly(f: _Lead, g: _Lead) -> dict:
    m = _lcm(f.lm, g.lm)
    out = {}
    _shift_sub(out, Fraction(-1) / f.lc, _sub(m, f.lm), f.terms)
    _shift_sub(out, Fraction(1) / g.lc, _sub(m, g.lm), g.terms)
    return out


def _update(G, B, h, polys):
    """Gebauer-Moller pair update (Becker-Weispfenning UPDATE)."""
    hl = polys[h].lm
    C = list(G)
    D = []
    while C:
        g1 = C.pop()
        l1 = _lcm(hl, polys[g1].lm)
        if _coprime(hl, polys[g1].lm):
            D.append(g1)
            continue
        redundant = any(_divides(_lcm(hl, polys[g2].lm), l1) for g2 in C) or any(
            _divides(_lcm(hl, polys[g2].lm), l1) for g2 in D
        )
        if not redundant:
            D.append(g1)
    E = [g for g in D if not _coprime(hl, polys[g].lm)]
    B_new = []
    for g1, g2 in B:
        l12 = _lcm(polys[g1].lm, polys[g2].lm)
        if (
            _divides(hl, l12)
            and _lcm(polys[g1].lm, hl) != l12
            and _lcm(polys[g2].lm, hl) != l12
        ):
            continue
        B_new.append((g1, g2))
    B_new.extend((g, h) for g in E)
    G_new = [g for g in G if not _divides(hl, polys[g].lm)]
    G_new.append(h)
    return G_new, B_new


def groebner_basis(ideal, order: MonomialOrder = GREVLEX) -> list:
    """Reduced, monic Groebner basis sorted by descending leading monomial."""
    if not isinstance(ideal, Ideal):
        ideal = list(ideal)
        if not any(ideal):
            return []
        ideal = Ideal(ideal)
    gens = ideal.generators
    if not gens:
        return []
    vs = ideal.varset
    key = order.key
    polys = []
    G: list = []
    B: list = []
    for g in gens:
        polys.append(_Lead(dict(g.terms), key))
        G, B = _update(G, B, len(polys) - 1, polys)
    while B:
        # normal strategy: smallest lcm first
        best = min(range(len(B)), key=lambda i: key(_lcm(polys[B[i][0]].lm, polys[B[i][1]].lm)))
        g1, g2 = B.pop(best)
        h = _normal_form(_spoly(polys[g1], polys[g2]), [polys[g] for g in G], key)
        if h:
            polys.append(_Lead(h, key))
            G, B = _update(G, B, len(polys) - 1, polys)
    return _reduce_basis([polys[g] for g in G], vs, key)


def _reduce_basis(basis, vs, key) -> list:
    minimal = []
    for i, g in enumerate(basis):
        if any(
            _divides(h.lm, g.lm) and (h.lm != g.lm or j < i)
            for j, h in enumerate(basis)
            if j != i
        ):
            continue
        minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = [h for j, h in enumerate(minimal) if j != i]
        tail = dict(g.terms)
        del tail[g.lm]
        tail = _normal_form(tail, others, key)
        tail[g.lm] = g.lc
        inv = Fraction(1) / g.lc
        reduced.append(Polynomial._raw(vs, {e: c * inv for e, c in tail.items()}))
    reduced.sort(key=lambda p: key(max(p.terms, key=key)), reverse=True)
    return reduced


def normal_form(p: Polynomial, basis, order: MonomialOrder = GREVLEX) -> Polynomial:
    """Remainder of p on full reduction by ``basis`` (best with a Groebner basis)."""
    key = order.key
    leads = [_Lead(dict(g.terms), key) for g in basis if g]
    return Polynomial._raw(p.varset, _normal_form(p.terms, leads, key))


def divide(p: Polynomial, divisors, order: MonomialOrder = GREVLEX):
    """Multivariate division: returns (quotients, remainder)."""
    key = order.key
    leads = [_Lead(dict(g.terms), key) for g in divisors]
    quots = [dict() for _ in leads]
    work = dict(p.terms)
    rem = {}
    while work:
        lm = max(work, key=key)
        c = work[lm]
        for q, g in zip(quots, leads):
            if _divides(g.lm, lm):
                shift = _sub(lm, g.lm)
                coef = Fraction(c) / g.lc
                q[shift] = q.get(shift, 0) + coef
                _shift_sub(work, coef, shift, g.terms)
                break
        else:
            rem[lm] = c
            del work[lm]
    vs = p.varset
    return [Polynomial(vs, q) for q in quots], Polynomial._raw(vs, rem)


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial | None:
    """p / q when q divides p exactly, else None."""
    if q.is_zero():
        raise ZeroDivisionError("exact division by the zero polynomial")
    (quot,), rem = divide(p, [q])
    return None if rem else quot


def ideal_membership(g: Polynomial, ideal, order: MonomialOrder = GREVLEX) -> bool:
    if not isinstance(ideal, Ideal):
        ideal = Ideal(list(ideal), g.varset)
    if g.is_zero():
        return True
    gb = groebner_basis(ideal, order)
    return normal_form(g, gb, order).is_zero()


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    key = order.key
    return Polynomial._raw(f.varset, _spoly(_Lead(dict(f.terms), key), _Lead(dict(g.terms), key)))


def standard_monomials(ideal, order: MonomialOrder = GREVLEX, cap: int = DEFAULT_CAP) -> QuotientBasis:
    """Monomials outside the initial ideal.

    For an infinite quotient the returned list holds the standard monomials
    of total degree at most the largest leading-monomial degree, with the
    finite flag off.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    if not isinstance(ideal, Ideal):
        ideal = Ideal(list(ideal))
    vs = ideal.varset
    n = len(vs)
    key = order.key
    gb = groebner_basis(ideal, order)
    leads = [p.leading_term(order)[0] for p in gb]
    if any(not any(e) for e in leads):
        return QuotientBasis((), True)
    bounds = []
    for i in range(n):
        pure = [e[i] for e in leads if e[i] and all(e[j] == 0 for j in range(n) if j != i)]
        bounds.append(min(pure) if pure else None)
    if any(b is None for b in bounds):
        top = max((sum(e) for e in leads), default=0)
        found = [
            e
            for e in _monomials_up_to(n, top)
            if not any(_divides(l, e) for l in leads)
        ]
        if len(found) > cap:
            raise InfiniteQuotientError(f"possibly infinite quotient: more than {cap} standard monomials")
        return QuotientBasis(tuple(sorted(found, key=key)), False)
    found = []
    for e in product(*(range(b) for b in bounds)):
        if not any(_divides(l, e) for l in leads):
            found.append(e)
            if len(found) >= cap:
                raise InfiniteQuotientError(
                    f"possibly infinite quotient: at least {cap} standard monomials"
                )
    return QuotientBasis(tuple(sorted(found, key=key)), True)


def _monomials_up_to(n: int, degree: int):
    for e in product(range(degree + 1), repeat=n):
        if sum(e) <= degree:
            yield e


def rational_roots(coeffs):
    """Rational roots (with multiplicity) of a univariate polynomial.

    ``coeffs`` lists coefficients from the constant term up.  Returns
    (roots, leftover) where leftover is the coefficient list of the factor
    without rational roots.
    """
    from math import gcd

    c = [as_rational(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if not c:
        raise ValueError("zero polynomial has no finite root set")
    roots = []
    while len(c) > 1 and c[0] == 0:
        roots.append(Fraction(0))
        c = c[1:]
    while len(c) > 1:
        den = 1
        for x in c:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in c]
        a0, an = abs(ints[0]), abs(ints[-1])
        found = None
        for p in _divisors(a0):
            for q in _divisors(an):
                for r in (Fraction(p, q), Fraction(-p, q)):
                    if _horner(c, r) == 0:
                        found = r
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        c = _deflate(c, found)
    return roots, c


def _divisors(n: int) -> list:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i * i != n:
                out.append(n // i)
        i += 1
    return sorted(out)


def _horner(c, x):
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _deflate(c, r):
    """Divide by (s - r), coefficient list low to high."""
    n = len(c) - 1
    q = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc * r + c[i]
        q[i - 1] = acc
    return q
