"""Monic univariate polynomials in s kept in factored form."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .groebner import rational_roots
from .polynomial import Polynomial, VarSet, as_rational

S_VARS = VarSet(("s",))


@total_ordering
class _Infinity:
    """Positive infinity for exact comparisons against Fractions."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("vflab-infinity")

    def __str__(self):
        return "inf"

    __repr__ = __str__


INFINITY = _Infinity()


def format_exact(x) -> str:
    return str(x)


class IrrationalFactorError(ValueError):
    pass


@dataclass(frozen=True)
class BFunction:
    """prod (s - root)^mult, monic; the empty product is b = 1."""

    factors: tuple

    def __init__(self, factors=()):
        merged: dict = {}
        for root, mult in factors:
            root = as_rational(root)
            if not isinstance(mult, int) or mult <= 0:
                raise ValueError(f"multiplicity must be a positive integer, got {mult!r}")
            merged[root] = merged.get(root, 0) + mult
        object.__setattr__(self, "factors", tuple(sorted(merged.items())))

    @classmethod
    def from_roots(cls, roots) -> "BFunction":
        return cls([(r, 1) for r in roots])

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "BFunction":
        """Factor a univariate polynomial over Q into monic linear factors."""
        if p.is_zero():
            raise ValueError("the zero polynomial is not a b-function")
        if len(p.varset) != 1:
            raise ValueError("expected a univariate polynomial")
        deg = p.degree()
        coeffs = [p.terms.get((k,), Fraction(0)) for k in range(deg + 1)]
        roots, rest = rational_roots(coeffs)
        if len(rest) > 1:
            raise IrrationalFactorError("polynomial has a factor without rational roots")
        return cls.from_roots(roots)

    @classmethod
    def parse(cls, text: str) -> "BFunction":
        from .parsing import parse_polynomial

        t = re.sub(r"\)\s*\(", ")*(", text.strip())
        t = re.sub(r"\)\s*(?=[s\d])", ")*", t)
        t = re.sub(r"(?<=[s\d])\s*\(", "*(", t)
        p = parse_polynomial(t, S_VARS)
        _, lc = max(p.terms.items(), default=((0,), 0))
        if lc != 1:
            raise ValueError("b-functions are monic")
        return cls.from_polynomial(p)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.factors)

    def roots(self) -> list:
        return [r for r, _ in self.factors]

    def multiplicity(self, root) -> int:
        root = as_rational(root)
        return dict(self.factors).get(root, 0)

    def is_unit(self) -> bool:
        return not self.factors

    def expand(self) -> Polynomial:
        s = Polynomial.variable(S_VARS, "s")
        out = Polynomial.constant(S_VARS, 1)
        for r, m in self.factors:
            out = out * (s - r) ** m
        return out

    def __call__(self, value):
        value = as_rational(value)
        out = Fraction(1)
        for r, m in self.factors:
            out *= (value - r) ** m
        return out

    def __mul__(self, other: "BFunction") -> "BFunction":
        return BFunction(self.factors + other.factors)

    def __str__(self):
        return format_bfunction(self)

    def __repr__(self):
        return f"BFunction({format_bfunction(self)!r})"


def _linear_factor(root: Fraction) -> str:
    if root == 0:
        return "s"
    c = -root
    return f"(s+{c})" if c > 0 else f"(s-{-c})"


def format_bfunction(b: BFunction) -> str:
    """(s+1) first, the rest by ascending constant term."""
    if b.is_unit():
        return "1"
    parts = []
    ordered = sorted(b.factors, key=lambda rm: (rm[0] != -1, -rm[0]))
    for r, m in ordered:
        lin = _linear_factor(r)
        if m > 1:
            lin = f"{lin}^{m}" if lin != "s" else f"s^{m}"
        parts.append(lin)
    return "".join(parts)
