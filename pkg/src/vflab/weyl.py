"""Polynomial differential operators in normal order and their actions.

An operator is stored as ``{beta: h_beta}`` meaning sum h_beta * d^beta with
coefficients on the left.  Coefficients may involve central parameters
(such as ``s``) that commute with everything.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import comb

from .groebner import exact_divide
from .kernels import poly_mul
from .parsing import parse_with
from .polynomial import Polynomial, VarSet, as_rational, format_monomial


@dataclass(frozen=True)
class WeylContext:
    """Commuting variables (each with a partner derivation) plus central names."""

    varset: VarSet
    central: tuple = ()

    def __post_init__(self):
        central = tuple(self.central)
        object.__setattr__(self, "central", central)
        clash = set(central) & set(self.varset.names)
        if clash:
            raise ValueError(f"central parameters clash with variables: {sorted(clash)}")
        VarSet(central)

    @cached_property
    def coeff_varset(self) -> VarSet:
        return VarSet(self.varset.names + self.central)

    @property
    def nvars(self) -> int:
        return len(self.varset)

    def zero(self) -> "WeylOperator":
        return WeylOperator(self, {})

    def one(self) -> "WeylOperator":
        return self.scalar(1)

    def scalar(self, c) -> "WeylOperator":
        c = as_rational(c)
        if not c:
            return self.zero()
        return WeylOperator(self, {self._zero_beta: {self._zero_coeff: c}})

    def x(self, name: str) -> "WeylOperator":
        """Multiplication by a variable or central parameter."""
        e = self.coeff_varset.unit(name)
        return WeylOperator(self, {self._zero_beta: {e: Fraction(1)}})

    def d(self, name: str, power: int = 1) -> "WeylOperator":
        return WeylOperator(self, {self.varset.unit(name, power): {self._zero_coeff: Fraction(1)}})

    def from_polynomial(self, p: Polynomial) -> "WeylOperator":
        if p.varset != self.coeff_varset:
            p = p.embed(self.coeff_varset)
        if not p.terms:
            return self.zero()
        return WeylOperator(self, {self._zero_beta: dict(p.terms)})

    def monomial(self, beta, coeff: Polynomial) -> "WeylOperator":
        if coeff.varset != self.coeff_varset:
            coeff = coeff.embed(self.coeff_varset)
        if not coeff.terms:
            return self.zero()
        return WeylOperator(self, {tuple(beta): dict(coeff.terms)})

    def parse(self, text: str) -> "WeylOperator":
        """Parse an operator; ``d<var>`` is the derivation in ``<var>``."""

        def atom(name):
            if name in self.coeff_varset:
                return self.x(name)
            if name.startswith("d") and name[1:] in self.varset:
                return self.d(name[1:])
            raise KeyError(f"unknown symbol {name!r}")

        return parse_with(text, atom, self.one())

    @cached_property
    def _zero_beta(self):
        return (0,) * self.nvars

    @cached_property
    def _zero_coeff(self):
        return (0,) * len(self.coeff_varset)


def _diff_terms(k: dict, g) -> dict:
    """Apply d^g (x-variables only) to a coefficient term dict."""
    n = len(g)
    out = {}
    for e, c in k.items():
        f = c
        for i in range(n):
            gi = g[i]
            if gi:
                ei = e[i]
                if ei < gi:
                    f = 0
                    break
                for r in range(gi):
                    f *= ei - r
        if f:
            out[tuple(e[i] - g[i] if i < n else e[i] for i in range(len(e)))] = f
    return out


def _add_into(acc: dict, terms: dict, scale=1):
    for e, c in terms.items():
        v = acc.get(e, 0) + c * scale
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


class WeylOperator:
    """Immutable normally ordered operator sum h_beta(x, params) d^beta."""

    __slots__ = ("context", "terms")

    def __init__(self, context: WeylContext, terms: dict):
        self.context = context
        self.terms = {b: h for b, h in terms.items() if h}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self) -> int:
        """Order in the derivations; -1 for the zero operator."""
        return max((sum(b) for b in self.terms), default=-1)

    def coefficient(self, beta) -> Polynomial:
        return Polynomial(self.context.coeff_varset, self.terms.get(tuple(beta), {}))

    def items(self):
        vs = self.context.coeff_varset
        for b in sorted(self.terms):
            yield b, Polynomial(vs, self.terms[b])

    def as_constant(self):
        if not self.terms:
            return Fraction(0)
        if list(self.terms) == [self.context._zero_beta]:
            h = self.terms[self.context._zero_beta]
            if list(h) == [self.context._zero_coeff]:
                return h[self.context._zero_coeff]
        return None

    def _check(self, other):
        if isinstance(other, WeylOperator):
            if other.context != self.context:
                raise ValueError("operators live in different Weyl algebras")
            return other
        return self.context.scalar(other)

    def __add__(self, other):
        other = self._check(other)
        out = {b: dict(h) for b, h in self.terms.items()}
        for b, h in other.terms.items():
            acc = out.setdefault(b, {})
            _add_into(acc, h)
        return WeylOperator(self.context, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylOperator(self.context, {b: {e: -c for e, c in h.items()} for b, h in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, WeylOperator):
            c = as_rational(other)
            return WeylOperator(
                self.context, {b: {e: v * c for e, v in h.items()} for b, h in self.terms.items()}
            )
        other = self._check(other)
        return WeylOperator(self.context, weyl_mul_terms(self.terms, other.terms, self.context.nvars))

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative operator power")
        out = self.context.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, WeylOperator):
            if isinstance(other, (int, Fraction)):
                other = self.context.scalar(other)
            else:
                return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def __hash__(self):
        return hash(
            (self.context, frozenset((b, frozenset(h.items())) for b, h in self.terms.items()))
        )

    def __str__(self):
        return format_operator(self)

    def __repr__(self):
        return f"WeylOperator({format_operator(self)!r})"


def weyl_mul_terms(P: dict, Q: dict, n: int) -> dict:
    """Normal-ordered product via d^a h = sum_g C(a,g) (d^g h) d^(a-g)."""
    out: dict = {}
    for a, h in P.items():
        gammas = list(product(*(range(ai + 1) for ai in a)))
        for b, k in Q.items():
            for g in gammas:
                coef = 1
                for ai, gi in zip(a, g):
                    if gi:
                        coef *= comb(ai, gi)
                dk = _diff_terms(k, g) if any(g) else k
                if not dk:
                    continue
                prod_terms = poly_mul(h, dk)
                beta = tuple(ai - gi + bi for ai, gi, bi in zip(a, g, b))
                acc = out.setdefault(beta, {})
                _add_into(acc, prod_terms, coef)
    return {b: h for b, h in out.items() if h}


def weyl_mul(P: WeylOperator, Q: WeylOperator) -> WeylOperator:
    return P * Q


def classical_adjoint(P: WeylOperator) -> WeylOperator:
    """Transpose: sum h_a d^a  ->  sum (-d)^a h_a, normal ordered."""
    ctx = P.context
    out = ctx.zero()
    for a, h in P.terms.items():
        sign = -1 if sum(a) % 2 else 1
        left = WeylOperator(ctx, {a: {ctx._zero_coeff: Fraction(sign)}})
        right = WeylOperator(ctx, {ctx._zero_beta: h})
        out = out + left * right
    return out


def format_operator(P: WeylOperator) -> str:
    if not P.terms:
        return "0"
    ctx = P.context
    cnames = ctx.coeff_varset.names
    dnames = tuple("d" + n for n in ctx.varset.names)
    key = lambda b: (sum(b), tuple(-x for x in reversed(b)))  # noqa: E731
    pieces = []
    for b in sorted(P.terms, key=key, reverse=True):
        dmono = format_monomial(dnames, b)
        h = Polynomial(ctx.coeff_varset, P.terms[b])
        for e, c in h.sorted_terms():
            mono = "*".join(m for m in (format_monomial(cnames, e), dmono) if m)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append((neg, body))
    out = []
    for i, (neg, body) in enumerate(pieces):
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# s-calculus in the (t, dt) algebra, with s standing for -dt*t

def s_operator(ctx: WeylContext, tname: str = "t") -> WeylOperator:
    return -(ctx.d(tname) * ctx.x(tname))


def eval_in_s(P: Polynomial, S: WeylOperator) -> WeylOperator:
    """Evaluate a univariate polynomial in s at an operator, by Horner."""
    if len(P.varset) != 1:
        raise ValueError("expected a polynomial in the single variable s")
    ctx = S.context
    deg = P.degree()
    out = ctx.zero()
    for k in range(deg, -1, -1):
        out = out * S + P.terms.get((k,), 0)
    return out


def check_s_identity(P: Polynomial | None, m: int, which: str) -> bool:
    """Check one of the shift identities for s = -dt*t as normal forms.

    t_shift:  P(s) t^m  = t^m P(s-m)
    dt_shift: P(s) dt^m = dt^m P(s+m)
    tm_dtm:   t^m dt^m  = (-1)^m (s+1)...(s+m)
    dtm_tm:   dt^m t^m  = (-1)^m s(s-1)...(s-m+1)
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    ctx = WeylContext(VarSet(("t",)))
    S = s_operator(ctx)
    t, dt = ctx.x("t"), ctx.d("t")
    sign = -1 if m % 2 else 1
    if which in ("t_shift", "dt_shift"):
        if P is None:
            raise ValueError("this identity needs a polynomial P(s)")
        s = Polynomial.variable(P.varset, P.varset.names[0])
        shift = -m if which == "t_shift" else m
        shifted = P.substitute(P.varset.names[0], s + shift)
        lhs_gen = t ** m if which == "t_shift" else dt ** m
        return eval_in_s(P, S) * lhs_gen == lhs_gen * eval_in_s(shifted, S)
    if which == "tm_dtm":
        rhs = ctx.scalar(sign)
        for j in range(1, m + 1):
            rhs = rhs * (S + j)
        return t ** m * dt ** m == rhs
    if which == "dtm_tm":
        rhs = ctx.scalar(sign)
        for j in range(m):
            rhs = rhs * (S - j)
        return dt ** m * t ** m == rhs
    raise ValueError(f"unknown identity {which!r}")


# twisted module O[1/f, s] f^s

@dataclass(frozen=True)
class ResidualPower:
    """A specialization that still has f^power in the denominator."""

    numerator: Polynomial
    f_power: int


class TwistedElement:
    """(numerator / f^N) * f^s with numerator in Q[x, s]."""

    __slots__ = ("numerator", "f_power", "f", "_f_lift")

    def __init__(self, numerator: Polynomial, f_power: int, f: Polynomial, reduce: bool = True):
        ring = twisted_ring(f.varset)
        if numerator.varset != ring:
            numerator = numerator.embed(ring)
        if f_power < 0:
            numerator = numerator * f.embed(ring) ** (-f_power)
            f_power = 0
        self.numerator = numerator
        self.f_power = f_power
        self.f = f
        self._f_lift = f.embed(ring)
        if reduce:
            self._reduce()

    def _reduce(self):
        if not self.numerator:
            self.f_power = 0
            return
        while self.f_power > 0:
            q = exact_divide(self.numerator, self._f_lift)
            if q is None:
                break
            self.numerator = q
            self.f_power -= 1

    @classmethod
    def f_to_s(cls, f: Polynomial, g: Polynomial | None = None, shift: int = 0) -> "TwistedElement":
        """g * f^(s+shift); a negative shift becomes a denominator."""
        ring = twisted_ring(f.varset)
        g = (g or Polynomial.constant(f.varset, 1)).embed(ring)
        if shift >= 0:
            return cls(g * f.embed(ring) ** shift, 0, f)
        return cls(g, -shift, f)

    def is_zero(self) -> bool:
        return not self.numerator

    def __add__(self, other: "TwistedElement") -> "TwistedElement":
        if other.f != self.f:
            raise ValueError("twisted elements over different f")
        N = max(self.f_power, other.f_power)
        a = self.numerator * self._f_lift ** (N - self.f_power)
        b = other.numerator * self._f_lift ** (N - other.f_power)
        return TwistedElement(a + b, N, self.f)

    def __neg__(self):
        return TwistedElement(-self.numerator, self.f_power, self.f, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, h: Polynomial) -> "TwistedElement":
        """Multiply by a polynomial in (x, s)."""
        ring = self.numerator.varset
        if h.varset != ring:
            h = h.embed(ring)
        return TwistedElement(self.numerator * h, self.f_power, self.f)

    def __eq__(self, other):
        if not isinstance(other, TwistedElement):
            return NotImplemented
        if other.f != self.f:
            return False
        a = self.numerator * self._f_lift ** other.f_power
        b = other.numerator * self._f_lift ** self.f_power
        return a == b

    def __hash__(self):
        return hash((self.numerator, self.f_power))

    def __repr__(self):
        return f"TwistedElement(({self.numerator}) / f^{self.f_power} * f^s, f={self.f})"


def twisted_ring(xvars: VarSet) -> VarSet:
    if "s" in xvars:
        raise ValueError("the name 's' is reserved for the formal exponent")
    return VarSet(xvars.names + ("s",))


def _derive_twisted(e: TwistedElement, name: str) -> TwistedElement:
    """d_i (g f^(s-N)) = (f d_i g + (s-N) g d_i f) f^(s-N-1)."""
    ring = e.numerator.varset
    g = e.numerator
    fl = e._f_lift
    s = Polynomial.variable(ring, "s")
    fi = e.f.derivative(name).embed(ring)
    num = fl * g.derivative(name) + (s - e.f_power) * g * fi
    return TwistedElement(num, e.f_power + 1, e.f)


def act_on_twisted(P: WeylOperator, e: TwistedElement) -> TwistedElement:
    """Action of D[s] on O[1/f, s] f^s."""
    ctx = P.context
    xnames = ctx.varset.names
    if tuple(e.f.varset.names) != xnames:
        raise ValueError("operator variables must match the variables of f")
    if ctx.central not in ((), ("s",)):
        raise ValueError("the only central parameter allowed here is s")
    ring = e.numerator.varset
    cache = {ctx._zero_beta: e}

    def deriv(beta):
        if beta in cache:
            return cache[beta]
        i = next(k for k, b in enumerate(beta) if b)
        prev = beta[:i] + (beta[i] - 1,) + beta[i + 1:]
        out = _derive_twisted(deriv(prev), xnames[i])
        cache[beta] = out
        return out

    total = TwistedElement(Polynomial.zero(ring), 0, e.f)
    for beta in sorted(P.terms, key=lambda b: (sum(b), b)):
        h = Polynomial(ctx.coeff_varset, P.terms[beta])
        if ctx.central == ():
            h = h.embed(ring)
        else:
            h = Polynomial._raw(ring, dict(h.terms))
        total = total + deriv(beta).scale(h)
    return total


def specialize_s(e: TwistedElement, m: int):
    """Substitute s = m; a Polynomial when the f-denominator clears."""
    q = e.numerator.substitute("s", m)
    q = Polynomial._raw(e.f.varset, {k[:-1]: c for k, c in q.terms.items()})
    if not q:
        return Polynomial.zero(e.f.varset)
    if m >= e.f_power:
        return q * e.f ** (m - e.f_power)
    need = e.f_power - m
    while need:
        d = exact_divide(q, e.f)
        if d is None:
            return ResidualPower(q, need)
        q = d
        need -= 1
    return q
