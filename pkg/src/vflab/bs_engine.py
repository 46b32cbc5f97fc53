"""Bernstein-Sato polynomials: closed form for weighted-homogeneous f and a
bounded functional-equation solver used as an independent check."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .bfunction import INFINITY, BFunction, S_VARS
from .groebner import GREVLEX, Ideal, standard_monomials
from .linalg import integer_nullspace_basis, solve_sparse
from .polynomial import Polynomial, as_rational, weighted_degree
from .weyl import TwistedElement, WeylContext, WeylOperator, act_on_twisted, specialize_s, twisted_ring


class DomainError(ValueError):
    """Input outside the class of hypersurfaces a routine handles."""


class NotHomogeneousError(DomainError):
    pass


class NonIsolatedSingularityError(DomainError):
    pass


class NoBFunctionWithinBounds(DomainError):
    pass


@dataclass(frozen=True)
class WeightVector:
    """Positive weights normalized so that f has weighted degree 1."""

    weights: tuple

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def grid_denominator(self) -> int:
        return lcm(*(w.denominator for w in self.weights))

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class SigmaSet:
    values: tuple
    multiplicities: tuple

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def validate_weighted_homogeneous(f: Polynomial, w) -> WeightVector:
    if f.is_zero():
        raise NotHomogeneousError("zero polynomial")
    if isinstance(w, WeightVector):
        w = w.weights
    w = tuple(as_rational(x) for x in w)
    if len(w) != len(f.varset):
        raise ValueError(f"{len(w)} weights for {len(f.varset)} variables")
    if any(x <= 0 for x in w):
        raise ValueError("weights must be strictly positive")
    terms = sorted(f.terms)
    first = terms[0]
    d = weighted_degree(first, w)
    for e in terms[1:]:
        de = weighted_degree(e, w)
        if de != d:
            from .polynomial import format_monomial

            a = format_monomial(f.varset.names, first) or "1"
            b = format_monomial(f.varset.names, e) or "1"
            raise NotHomogeneousError(
                f"not w-homogeneous: weighted degree of {a} is {d}, of {b} is {de}"
            )
    if d == 0:
        raise NotHomogeneousError("f is a nonzero constant")
    return WeightVector(tuple(x / d for x in w))


def jacobian_ideal(f: Polynomial) -> Ideal:
    return Ideal([f.derivative(n) for n in f.varset.names], f.varset)


def milnor_basis(f: Polynomial, cap: int = 10_000):
    """Standard monomials of Q[x]/J_f; raises for a non-isolated singularity."""
    J = jacobian_ideal(f)
    if not J.generators:
        raise NonIsolatedSingularityError("f is constant")
    qb = standard_monomials(J, GREVLEX, cap)
    if not qb.finite:
        raise NonIsolatedSingularityError("non-isolated singularity: Q[x]/J_f is infinite-dimensional")
    return qb.monomials


def sigma_set(f: Polynomial, w: WeightVector) -> SigmaSet:
    counts: dict = {}
    for e in milnor_basis(f):
        r = weighted_degree(e, w.weights)
        counts[r] = counts.get(r, 0) + 1
    vals = tuple(sorted(counts))
    return SigmaSet(vals, tuple(counts[v] for v in vals))


def bs_weighted_homogeneous(f: Polynomial, w: WeightVector) -> BFunction:
    sig = sigma_set(f, w)
    total = w.total
    return BFunction([(-1, 1)] + [(-(lam + total), 1) for lam in sig.values])


def reduced_bfunction(b: BFunction) -> BFunction:
    m = b.multiplicity(-1)
    if not m:
        raise DomainError("not a b-function of a nonempty hypersurface: -1 is not a root")
    return BFunction([(r, k - 1 if r == -1 else k) for r, k in b.factors if not (r == -1 and k == 1)])


def minimal_exponent(b: BFunction):
    bt = reduced_bfunction(b)
    if bt.is_unit():
        return INFINITY
    return -max(bt.roots())


def lct_from_bfunction(b: BFunction) -> Fraction:
    if b.is_unit():
        raise DomainError("b = 1 has no roots")
    return -max(b.roots())


def shifted_bfunction(b_tilde: BFunction, q: int) -> BFunction:
    if q < 0:
        raise ValueError("q must be non-negative")
    return BFunction([(-1, 1)] + [(r + q, m) for r, m in b_tilde.factors])


def operator_context(f: Polynomial) -> WeylContext:
    return WeylContext(f.varset, ("s",))


def yano_annihilator_generators(f: Polynomial) -> list:
    ctx = operator_context(f)
    names = f.varset.names
    grads = [ctx.from_polynomial(f.derivative(n)) for n in names]
    out = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            out.append(grads[i] * ctx.d(names[j]) - grads[j] * ctx.d(names[i]))
    return out


def apply_operator(P: WeylOperator, h: Polynomial) -> Polynomial:
    """Plain action of an operator without central parameters on a polynomial."""
    ctx = P.context
    out = Polynomial.zero(ctx.coeff_varset)
    hl = h.embed(ctx.coeff_varset)
    for beta, coeff in P.terms.items():
        d = hl
        for name, k in zip(ctx.varset.names, beta):
            for _ in range(k):
                d = d.derivative(name)
        out = out + Polynomial._raw(ctx.coeff_varset, dict(coeff)) * d
    return out


def specialize_operator(P: WeylOperator, m) -> WeylOperator:
    """Substitute a number for the central parameter s."""
    ctx = P.context
    plain = WeylContext(ctx.varset)
    i = ctx.coeff_varset.index("s")
    m = as_rational(m)
    terms = {}
    for beta, h in P.terms.items():
        acc: dict = {}
        for e, c in h.items():
            k = e[:i] + e[i + 1:]
            acc[k] = acc.get(k, 0) + c * m ** e[i]
        terms[beta] = {k: c for k, c in acc.items() if c}
    return WeylOperator(plain, terms)


@dataclass(frozen=True)
class FunctionalEquationCertificate:
    """b(s) g f^s = P (g f f^s)."""

    b: BFunction
    P: WeylOperator
    g: Polynomial
    f: Polynomial

    def residual(self) -> TwistedElement:
        ring = twisted_ring(self.f.varset)
        lhs = TwistedElement.f_to_s(self.f, self.g).scale(self.b.expand().embed(ring))
        rhs = act_on_twisted(self.P, TwistedElement.f_to_s(self.f, self.g, shift=1))
        return lhs - rhs

    def verify(self) -> bool:
        return self.residual().is_zero()

    def verify_specializations(self, values=range(-1, 3)) -> bool:
        """Check the identity after s = m, both in the twisted module and as a
        plain operator acting on g f^(m+1)."""
        ring = twisted_ring(self.f.varset)
        lhs = TwistedElement.f_to_s(self.f, self.g).scale(self.b.expand().embed(ring))
        rhs = act_on_twisted(self.P, TwistedElement.f_to_s(self.f, self.g, shift=1))
        for m in values:
            if specialize_s(lhs, m) != specialize_s(rhs, m):
                return False
            if m + 1 >= 0:
                Pm = specialize_operator(self.P, m)
                applied = apply_operator(Pm, self.g * self.f ** (m + 1))
                bm = self.b(m)
                if m >= 0:
                    if applied != self.g * self.f ** m * bm:
                        return False
                elif bm == 0 and not applied.is_zero():
                    return False
        return True


def homogeneity_lattice(*polys: Polynomial) -> list:
    """Integer basis of weight vectors making every given polynomial homogeneous."""
    n = len(polys[0].varset)
    rows = []
    for p in polys:
        exps = sorted(p.terms)
        for e in exps[1:]:
            rows.append([a - b for a, b in zip(e, exps[0])])
    return integer_nullspace_basis(rows, n)


def _dot(w, e):
    return sum(a * b for a, b in zip(w, e))


def _monomials_of_degree_at_most(n: int, bound: int):
    if n == 0:
        yield ()
        return
    for first in range(bound + 1):
        for rest in _monomials_of_degree_at_most(n - 1, bound - first):
            yield (first,) + rest


def _betas(n: int, max_order: int):
    return [b for b in product(range(max_order + 1), repeat=n) if sum(b) <= max_order]


class _FunctionalSystem:
    """Linear equations for b(s) g f^s = P(g f^(s+1)) after clearing f-powers.

    With E = max(max_order - 1, 0) both sides are multiplied by f^(E - s),
    turning every term into a polynomial in (x, s).
    """

    def __init__(self, f: Polynomial, g: Polynomial, max_order: int, max_sdeg: int):
        if f.is_zero():
            raise ValueError("f must be nonzero")
        if max_order < 0 or max_sdeg < 0:
            raise ValueError("bounds must be non-negative")
        self.f, self.g = f, g
        self.max_order, self.max_sdeg = max_order, max_sdeg
        self.ring = ring = twisted_ring(f.varset)
        self.n = n = len(f.varset)
        fl, gl = f.embed(ring), g.embed(ring)
        s = Polynomial.variable(ring, "s")
        self.E = E = max(max_order - 1, 0)
        # Q_beta with d^beta (g f^(s+1)) = Q_beta f^(s+1-|beta|)
        Q = {(0,) * n: gl}
        betas = sorted(_betas(n, max_order), key=lambda b: (sum(b), b))
        grads = [f.derivative(v).embed(ring) for v in f.varset.names]
        for beta in betas:
            if beta in Q:
                continue
            i = next(k for k, x in enumerate(beta) if x)
            prev = beta[:i] + (beta[i] - 1,) + beta[i + 1:]
            qp = Q[prev]
            Q[beta] = fl * qp.derivative(f.varset.names[i]) + (s + 1 - sum(prev)) * qp * grads[i]
        fpow = [fl ** k for k in range(E + 2)]
        self.columns = {beta: (Q[beta] * fpow[E + 1 - sum(beta)]).terms for beta in betas}
        self.lhs_base = (gl * fpow[E]).terms
        self.lattice = homogeneity_lattice(f, g) if g else homogeneity_lattice(f)
        self.f_deg = [_dot(w, next(iter(f.terms))) for w in self.lattice]
        self.betas = betas

    def unknowns(self, d: int):
        bound = d * self.f.degree() + max(self.g.degree(), 0) + self.max_order * self.f.degree()
        out = []
        for beta in self.betas:
            target = [_dot(w, beta) - e for w, e in zip(self.lattice, self.f_deg)]
            for u in _monomials_of_degree_at_most(self.n, bound):
                if all(_dot(w, u) == t for w, t in zip(self.lattice, target)):
                    for k in range(self.max_sdeg + 1):
                        out.append((u, beta, k))
        return out

    def solve(self, d: int):
        """Try a monic b of degree d; returns (b coefficients, P terms) or None."""
        eqs: dict = {}

        def add(mono, label, c):
            row = eqs.setdefault(mono, {})
            v = row.get(label, 0) + c
            if v:
                row[label] = v
            else:
                row.pop(label, None)

        for i in range(d):
            for e, c in self.lhs_base.items():
                add(e[:-1] + (e[-1] + i,), ("b", i), c)
        for (u, beta, k) in self.unknowns(d):
            label = ("p", u, beta, k)
            for e, c in self.columns[beta].items():
                mono = tuple(a + b for a, b in zip(e[:-1], u)) + (e[-1] + k,)
                add(mono, label, -c)
        rhs_terms: dict = {}
        for e, c in self.lhs_base.items():
            mono = e[:-1] + (e[-1] + d,)
            rhs_terms[mono] = -c
        monos = sorted(set(eqs) | set(rhs_terms))
        rows = [eqs.get(m, {}) for m in monos]
        rhs = [rhs_terms.get(m, 0) for m in monos]
        sol = solve_sparse(rows, rhs)
        if sol is None:
            return None
        bco = [sol.get(("b", i), Fraction(0)) for i in range(d)] + [Fraction(1)]
        pterms: dict = {}
        for label, c in sol.items():
            if label[0] != "p":
                continue
            _, u, beta, k = label
            h = pterms.setdefault(beta, {})
            h[u + (k,)] = h.get(u + (k,), 0) + c
        return bco, pterms


def solve_functional_equation(f, g, b: BFunction, max_order: int, max_sdeg: int):
    """Certificate for a given b within the bounds, or None."""
    system = _FunctionalSystem(f, g, max_order, max_sdeg)
    coeffs = b.expand()
    d = b.degree
    eqs: dict = {}
    for (u, beta, k) in system.unknowns(d):
        label = ("p", u, beta, k)
        for e, c in system.columns[beta].items():
            mono = tuple(x + y for x, y in zip(e[:-1], u)) + (e[-1] + k,)
            row = eqs.setdefault(mono, {})
            row[label] = row.get(label, 0) + c
    target: dict = {}
    for (i,), bc in coeffs.terms.items():
        for e, c in system.lhs_base.items():
            mono = e[:-1] + (e[-1] + i,)
            target[mono] = target.get(mono, 0) + bc * c
    monos = sorted(set(eqs) | set(target))
    sol = solve_sparse([{k: v for k, v in eqs.get(m, {}).items() if v} for m in monos],
                       [target.get(m, 0) for m in monos])
    if sol is None:
        return None
    pterms: dict = {}
    for (_, u, beta, k), c in sol.items():
        h = pterms.setdefault(beta, {})
        h[u + (k,)] = h.get(u + (k,), 0) + c
    cert = FunctionalEquationCertificate(b, WeylOperator(operator_context(f), pterms), g, f)
    if not cert.verify():
        raise AssertionError("functional-equation certificate failed re-verification")
    return cert


def minimal_b_certificate(f, g, max_order: int, max_sdeg: int) -> FunctionalEquationCertificate:
    """Smallest-degree monic b with a bounded operator, plus that operator.

    Degrees are tried from 0 up to max_sdeg + max_order, the largest
    s-degree the right-hand side can reach.
    """
    system = _FunctionalSystem(f, g, max_order, max_sdeg)
    for d in range(max_sdeg + max_order + 1):
        found = system.solve(d)
        if found is None:
            continue
        bco, pterms = found
        b = BFunction.from_polynomial(Polynomial(S_VARS, {(i,): c for i, c in enumerate(bco)}))
        cert = FunctionalEquationCertificate(b, WeylOperator(operator_context(f), pterms), g, f)
        if not cert.verify():
            raise AssertionError("functional-equation certificate failed re-verification")
        return cert
    raise NoBFunctionWithinBounds(
        f"no b within bounds (max_order={max_order}, max_sdeg={max_sdeg})"
    )


def find_minimal_b_bounded(f, g, max_order: int, max_sdeg: int) -> BFunction:
    return minimal_b_certificate(f, g, max_order, max_sdeg).b
