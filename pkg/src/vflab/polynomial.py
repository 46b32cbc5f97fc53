"""Exact multivariate polynomials over Q."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .kernels import poly_mul

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class VarSetMismatch(ValueError):
    pass


def as_rational(c) -> Fraction:
    """Coerce an exact scalar to Fraction; floats are refused outright."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        raise TypeError("floating-point values are not allowed; use Fraction")
    raise TypeError(f"not an exact rational: {c!r}")


def format_rational(c: Fraction) -> str:
    return str(c)


@dataclass(frozen=True)
class VarSet:
    """Ordered tuple of distinct variable names."""

    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        for n in names:
            if not isinstance(n, str) or not _NAME_RE.match(n):
                raise ValueError(f"bad variable name {n!r}")

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}; have {list(self.names)}") from None

    def zero_exponent(self) -> tuple:
        return (0,) * len(self.names)

    def unit(self, name: str, power: int = 1) -> tuple:
        e = [0] * len(self.names)
        e[self.index(name)] = power
        return tuple(e)


def natural_key(name: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


class Polynomial:
    """Immutable polynomial ``{exponent tuple: Fraction}`` over a VarSet.

    Zero coefficients are never stored.
    """

    __slots__ = ("varset", "terms", "_hash")

    def __init__(self, varset: VarSet, terms: Mapping | Iterable = ()):
        n = len(varset)
        clean: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has wrong length for {varset.names}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent {exp}")
            c = clean.get(exp, 0) + as_rational(c)
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self.varset = varset
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, varset: VarSet, terms: dict) -> "Polynomial":
        p = object.__new__(cls)
        p.varset = varset
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, varset: VarSet) -> "Polynomial":
        return cls._raw(varset, {})

    @classmethod
    def constant(cls, varset: VarSet, c) -> "Polynomial":
        c = as_rational(c)
        return cls._raw(varset, {varset.zero_exponent(): c} if c else {})

    @classmethod
    def variable(cls, varset: VarSet, name: str) -> "Polynomial":
        return cls._raw(varset, {varset.unit(name): Fraction(1)})

    @classmethod
    def monomial(cls, varset: VarSet, exp, c=1) -> "Polynomial":
        return cls(varset, {tuple(exp): c})

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Fraction:
        return self.terms.get(self.varset.zero_exponent(), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.varset.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def coefficient(self, exp) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def __len__(self):
        return len(self.terms)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.varset != self.varset:
                raise VarSetMismatch(
                    f"variable sets differ: {self.varset.names} vs {other.varset.names}"
                )
            return other
        return Polynomial.constant(self.varset, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.varset, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.varset, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = as_rational(other)
            if not c:
                return Polynomial.zero(self.varset)
            return Polynomial._raw(self.varset, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.varset)
        return Polynomial._raw(self.varset, poly_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (Fraction(1) / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self.varset, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.varset == other.varset and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.terms == (
                {self.varset.zero_exponent(): Fraction(other)} if other else {}
            )
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.varset, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution

    def derivative(self, name: str) -> "Polynomial":
        return partial_derivative(self, name)

    def substitute(self, name: str, value) -> "Polynomial":
        """Replace a variable by a rational number or a polynomial."""
        i = self.varset.index(name)
        if isinstance(value, Polynomial):
            value = self._coerce(value)
            out = Polynomial.zero(self.varset)
            powers: dict = {}
            for e, c in self.terms.items():
                k = e[i]
                if k not in powers:
                    powers[k] = value ** k
                rest = e[:i] + (0,) + e[i + 1:]
                out = out + Polynomial._raw(self.varset, {rest: c}) * powers[k]
            return out
        v = as_rational(value)
        out: dict = {}
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1:]
            x = out.get(rest, 0) + c * v ** e[i]
            if x:
                out[rest] = x
            else:
                out.pop(rest, None)
        return Polynomial._raw(self.varset, out)

    def evaluate(self, point: Mapping) -> Fraction:
        total = Fraction(0)
        vals = [as_rational(point[n]) for n in self.varset.names]
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t *= v ** k
            total += t
        return total

    def embed(self, varset: VarSet) -> "Polynomial":
        """Re-express over a VarSet containing every variable that occurs."""
        idx = []
        for n in self.varset.names:
            idx.append(varset.index(n) if n in varset else None)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(varset)
            for i, k in enumerate(e):
                if k:
                    if idx[i] is None:
                        raise VarSetMismatch(f"variable {self.varset.names[i]} missing")
                    ne[idx[i]] = k
            out[tuple(ne)] = c
        return Polynomial._raw(varset, out)

    def used_variables(self) -> list:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return [self.varset.names[i] for i in sorted(used)]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monic(self, order=None) -> "Polynomial":
        from .groebner import GREVLEX

        if not self.terms:
            return self
        _, lc = self.leading_term(order or GREVLEX)
        return self * (Fraction(1) / lc)

    def leading_term(self, order):
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    # printing

    def sorted_terms(self, order=None):
        from .groebner import GREVLEX

        key = (order or GREVLEX).key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, vars={list(self.varset.names)})"


def format_monomial(names, exp) -> str:
    parts = []
    for n, k in zip(names, exp):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial, order=None) -> str:
    """Canonical text in the input grammar, terms in descending grevlex."""
    if not p.terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(p.sorted_terms(order)):
        mono = format_monomial(p.varset.names, e)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def partial_derivative(f: Polynomial, name: str) -> Polynomial:
    i = f.varset.index(name)
    out = {}
    for e, c in f.terms.items():
        k = e[i]
        if k:
            out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
    return Polynomial._raw(f.varset, out)


def weighted_degree(exp, weights) -> Fraction:
    """Weighted degree sum(u_i * w_i) of a monomial exponent."""
    weights = [as_rational(w) for w in weights]
    if len(weights) != len(exp):
        raise ValueError(f"weight vector has length {len(weights)}, monomial has {len(exp)}")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be strictly positive")
    return sum((u * w for u, w in zip(exp, weights)), Fraction(0))


def common_varset(*polys: Polynomial) -> VarSet:
    vs = polys[0].varset
    for p in polys[1:]:
        if p.varset != vs:
            raise VarSetMismatch(f"variable sets differ: {vs.names} vs {p.varset.names}")
    return vs
