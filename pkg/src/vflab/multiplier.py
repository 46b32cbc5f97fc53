"""Monomial multiplier ideals, jumping numbers and numerical resolution data."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .bfunction import INFINITY, BFunction
from .bs_engine import bs_weighted_homogeneous, minimal_exponent, validate_weighted_homogeneous
from .polynomial import Polynomial, as_rational
from .vlab import CERTIFIED, BfElement, Truncation, VLab, VModel, snc_ideal_exponent


@dataclass(frozen=True)
class MonomialDivisor:
    """f = prod x_i^a_i."""

    exponents: tuple

    def __init__(self, exponents):
        a = tuple(int(x) for x in exponents)
        if not a or any(x < 0 for x in a) or not any(a):
            raise ValueError("exponents must be non-negative with at least one positive")
        object.__setattr__(self, "exponents", a)

    def grid_denominator(self) -> int:
        from math import lcm

        return lcm(*(x for x in self.exponents if x))


@dataclass(frozen=True)
class MonomialIdeal:
    """Minimal monomial generators, sorted."""

    generators: tuple

    def __init__(self, generators):
        gens = sorted(set(tuple(g) for g in generators))
        minimal = [g for g in gens if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gens)]
        object.__setattr__(self, "generators", tuple(minimal))

    def contains_monomial(self, u) -> bool:
        return any(all(a <= b for a, b in zip(g, u)) for g in self.generators)

    def is_unit(self) -> bool:
        return any(not any(g) for g in self.generators)

    def __le__(self, other: "MonomialIdeal") -> bool:
        return all(other.contains_monomial(g) for g in self.generators)


def _divisor(a) -> MonomialDivisor:
    return a if isinstance(a, MonomialDivisor) else MonomialDivisor(a)


def i_lambda(a, lam) -> MonomialIdeal:
    """I(f^lam): exponents max(ceil(lam*a_i) - 1, 0); the unit ideal for lam <= 0."""
    a = _divisor(a)
    return MonomialIdeal([snc_ideal_exponent(a.exponents, lam)])


def multiplier_ideal_monomial(a, lam) -> MonomialIdeal:
    """J(lam * div f): exponents floor(lam*a_i)."""
    a = _divisor(a)
    lam = as_rational(lam)
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    return MonomialIdeal([tuple(floor(lam * x) for x in a.exponents)])


def jumping_numbers_monomial(a, bound) -> list:
    a = _divisor(a)
    bound = as_rational(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    out = set()
    for ai in a.exponents:
        if ai:
            for j in range(1, floor(bound * ai) + 1):
                out.add(Fraction(j, ai))
    return sorted(out)


@dataclass(frozen=True)
class ResolutionRow:
    a: int
    k: int
    b: int = 0
    exceptional: bool = False

    def __post_init__(self):
        if self.a < 1 or self.k < 0 or self.b < 0:
            raise ValueError(f"bad resolution row {self}")


@dataclass(frozen=True)
class LogResolutionData:
    rows: tuple

    def __init__(self, rows):
        out = []
        for r in rows:
            if isinstance(r, ResolutionRow):
                out.append(r)
            elif isinstance(r, dict):
                out.append(ResolutionRow(int(r["a"]), int(r["k"]), int(r.get("b", 0)), bool(r.get("exceptional", False))))
            else:
                out.append(ResolutionRow(*r))
        if not out:
            raise ValueError("resolution data needs at least one row")
        object.__setattr__(self, "rows", tuple(out))

    @classmethod
    def from_json(cls, text: str) -> "LogResolutionData":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("resolution data must be a JSON list of rows")
        return cls(data)

    def to_json(self) -> list:
        return [{"a": r.a, "k": r.k, "b": r.b, "exceptional": r.exceptional} for r in self.rows]

    def with_b(self, bs) -> "LogResolutionData":
        return LogResolutionData(
            [ResolutionRow(r.a, r.k, b, r.exceptional) for r, b in zip(self.rows, bs, strict=True)]
        )


def lct_from_resolution(data: LogResolutionData) -> Fraction:
    return min(Fraction(r.k + 1, r.a) for r in data.rows)


def lct_g_from_resolution(data: LogResolutionData) -> Fraction:
    return min(Fraction(r.k + r.b + 1, r.a) for r in data.rows)


def default_root_cap(data: LogResolutionData) -> int:
    return 3 * max(r.a for r in data.rows)


def root_bound_candidates(data: LogResolutionData, which: str, m: int = 0, L: int | None = None,
                          exceptional_only: bool = False):
    """Candidate root sets or root upper bounds from resolution data.

    bf_roots       -> {-(k+l)/a : 1 <= l <= L}
    g_dtm_bound    -> -min(1, min (k+b+1)/a - m)
    g_delta_bound  -> -min (k+b+1)/a
    dtm_roots      -> {-1, ..., -L} together with {m - (k+l)/a : 1 <= l <= L},
                      over exceptional rows only when ``exceptional_only``
    """
    L = default_root_cap(data) if L is None else L
    if which == "bf_roots":
        return frozenset(Fraction(-(r.k + l), r.a) for r in data.rows for l in range(1, L + 1))
    if which == "g_dtm_bound":
        return -min(Fraction(1), lct_g_from_resolution(data) - m)
    if which == "g_delta_bound":
        return -lct_g_from_resolution(data)
    if which == "dtm_roots":
        rows = [r for r in data.rows if r.exceptional] if exceptional_only else data.rows
        out = {Fraction(-i) for i in range(1, L + 1)}
        out.update(m - Fraction(r.k + l, r.a) for r in rows for l in range(1, L + 1))
        return frozenset(out)
    raise ValueError(f"unknown bound kind {which!r}")


def check_jumping_roots(b: BFunction, jumps) -> bool:
    jumps = [as_rational(x) for x in jumps]
    if any(x > 1 for x in jumps):
        raise ValueError("only jumping numbers <= 1 are covered")
    return all(b(-x) == 0 for x in jumps)


def min_exponent_lower_bound(data: LogResolutionData):
    vals = [Fraction(r.k + 1, r.a) for r in data.rows if r.exceptional]
    return min(vals) if vals else INFINITY


@dataclass
class BudurSaitoReport:
    exponents: tuple
    trunc: Truncation
    entries: list = field(default_factory=list)
    note: str = (
        "containment only: each generator g of J(lambda) is certified to satisfy "
        "g*delta in V^{>lambda}; the converse is not checkable on inner approximations"
    )

    @property
    def ok(self) -> bool:
        return all(e["status"] == CERTIFIED for e in self.entries)

    def to_json(self) -> dict:
        return {
            "a": list(self.exponents),
            "trunc": {"J": self.trunc.J, "D": self.trunc.D},
            "ok": self.ok,
            "note": self.note,
            "entries": self.entries,
        }


def budur_saito_consistency(a, grid, trunc: Truncation, lab: VLab | None = None) -> BudurSaitoReport:
    from .vlab import membership_certify

    a = _divisor(a)
    model = VModel.snc(a.exponents)
    lab = lab or VLab(model, trunc)
    report = BudurSaitoReport(a.exponents, trunc)
    f = model.f
    for lam in grid:
        lam = as_rational(lam)
        above = model.above(lam)
        for g in multiplier_ideal_monomial(a, lam).generators:
            e = BfElement.delta(f, Polynomial.monomial(f.varset, g))
            status = membership_certify(e, model, above, trunc, lab=lab)
            report.entries.append(
                {"lambda": str(lam), "generator": str(Polynomial.monomial(f.varset, g)),
                 "level": str(above), "status": status}
            )
    return report


@dataclass
class MicrolocalReport:
    threshold: object
    certificates: list

    @property
    def ok(self) -> bool:
        return all(c["status"] == CERTIFIED for c in self.certificates)


def microlocal_triviality_threshold(f: Polynomial, w, trunc: Truncation | None = None,
                                    max_q: int = 2) -> MicrolocalReport:
    """Minimal exponent of a weighted-homogeneous f, with membership
    certificates dt^q delta in V^{>alpha} for every grid point q + alpha
    below it (q <= max_q, alpha in [0, 1))."""
    w = validate_weighted_homogeneous(f, w)
    threshold = minimal_exponent(bs_weighted_homogeneous(f, w))
    certs = []
    if threshold is INFINITY:
        return MicrolocalReport(threshold, certs)
    model = VModel.quasi_homogeneous(f, w)
    N = model.grid_denominator()
    trunc = trunc or Truncation(max_q + 1, max(6, ceil(threshold) * f.degree() + 2))
    lab = VLab(model, trunc)
    for q in range(max_q + 1):
        for i in range(N):
            alpha = Fraction(i, N)
            if q + alpha >= threshold:
                break
            e = BfElement.delta(f, j=q)
            status = lab.snapshot(model.above(alpha)).contains(e)
            certs.append({"q": q, "alpha": str(alpha), "status": CERTIFIED if status else "unknown"})
    return MicrolocalReport(threshold, certs)
