"""V-filtration models on B_f = O[dt]delta and a finite-window axiom checker.

Elements of B_f are stored as sparse vectors keyed by ``(j, u)`` for the
basis element x^u dt^j delta.  Every model is graded by weight vectors under
which f is homogeneous; x_i, d_i, t and dt all shift the grade uniformly, so
subspaces are handled one graded piece at a time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, lcm

from .bfunction import BFunction, S_VARS
from .bs_engine import WeightVector, homogeneity_lattice, validate_weighted_homogeneous
from .groebner import rational_roots
from .linalg import RowSpace, int_row
from .polynomial import Polynomial, VarSet, as_rational, weighted_degree

# ---------------------------------------------------------------- elements


class BfElement:
    """Finite sum of u_j dt^j delta with polynomial u_j."""

    __slots__ = ("components", "f")

    def __init__(self, components: dict, f: Polynomial):
        clean = {}
        for j, u in components.items():
            if j < 0:
                raise ValueError("dt-order must be non-negative")
            if u.varset != f.varset:
                u = u.embed(f.varset)
            if u:
                clean[int(j)] = u
        self.components = clean
        self.f = f

    @classmethod
    def delta(cls, f: Polynomial, u: Polynomial | None = None, j: int = 0) -> "BfElement":
        u = Polynomial.constant(f.varset, 1) if u is None else u
        return cls({j: u}, f)

    @classmethod
    def from_vector(cls, vec: dict, f: Polynomial) -> "BfElement":
        comps: dict = {}
        for (j, u), c in vec.items():
            comps.setdefault(j, {})[u] = c
        return cls({j: Polynomial(f.varset, t) for j, t in comps.items()}, f)

    def to_vector(self) -> dict:
        return {(j, e): c for j, u in self.components.items() for e, c in u.terms.items()}

    def is_zero(self) -> bool:
        return not self.components

    def max_order(self) -> int:
        return max(self.components, default=-1)

    def max_degree(self) -> int:
        return max((u.degree() for u in self.components.values()), default=-1)

    def __add__(self, other: "BfElement") -> "BfElement":
        comps = dict(self.components)
        for j, u in other.components.items():
            comps[j] = comps[j] + u if j in comps else u
        return BfElement(comps, self.f)

    def __neg__(self):
        return BfElement({j: -u for j, u in self.components.items()}, self.f)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, Polynomial):
            return BfElement({j: u * c for j, u in self.components.items()}, self.f)
        return BfElement({j: u * as_rational(c) for j, u in self.components.items()}, self.f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BfElement):
            return NotImplemented
        return self.f == other.f and self.components == other.components

    def __hash__(self):
        return hash(frozenset(self.to_vector().items()))

    def __str__(self):
        if not self.components:
            return "0"
        parts = []
        for j in sorted(self.components):
            tag = "delta" if j == 0 else ("dt*delta" if j == 1 else f"dt^{j}*delta")
            parts.append(f"({self.components[j]})*{tag}")
        return " + ".join(parts)

    __repr__ = __str__


class _Actions:
    """Raw actions on sparse (j, u) vectors for a fixed f."""

    def __init__(self, f: Polynomial):
        self.f = f
        self.n = len(f.varset)
        self.f_terms = list(f.terms.items())
        self.grads = [list(f.derivative(v).terms.items()) for v in f.varset.names]
        self.integral = all(c.denominator == 1 for c in f.terms.values())
        if self.integral:
            self.f_terms = [(e, int(c)) for e, c in self.f_terms]
            self.grads = [[(e, int(c)) for e, c in g] for g in self.grads]

    def x(self, i, vec):
        out = {}
        for (j, u), c in vec.items():
            out[(j, u[:i] + (u[i] + 1,) + u[i + 1:])] = c
        return out

    def d(self, i, vec):
        out: dict = {}
        grad = self.grads[i]
        for (j, u), c in vec.items():
            ui = u[i]
            if ui:
                k = (j, u[:i] + (ui - 1,) + u[i + 1:])
                out[k] = out.get(k, 0) + c * ui
            for v, a in grad:
                k = (j + 1, tuple(p + q for p, q in zip(u, v)))
                out[k] = out.get(k, 0) - c * a
        return {k: c for k, c in out.items() if c}

    def t(self, vec):
        out: dict = {}
        for (j, u), c in vec.items():
            for v, a in self.f_terms:
                k = (j, tuple(p + q for p, q in zip(u, v)))
                out[k] = out.get(k, 0) + c * a
            if j:
                k = (j - 1, u)
                out[k] = out.get(k, 0) - j * c
        return {k: c for k, c in out.items() if c}

    def dt(self, vec):
        return {(j + 1, u): c for (j, u), c in vec.items()}

    def s(self, vec):
        return {k: -c for k, c in self.dt(self.t(vec)).items()}

    def s_plus(self, alpha, vec):
        out = self.s(vec)
        if alpha:
            for k, c in vec.items():
                v = out.get(k, 0) + alpha * c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return out


def act_t(e: BfElement) -> BfElement:
    return BfElement.from_vector(_Actions(e.f).t(e.to_vector()), e.f)


def act_dt(e: BfElement) -> BfElement:
    return BfElement({j + 1: u for j, u in e.components.items()}, e.f)


def act_x(var, e: BfElement) -> BfElement:
    i = var if isinstance(var, int) else e.f.varset.index(var)
    return BfElement.from_vector(_Actions(e.f).x(i, e.to_vector()), e.f)


def act_derivation(var, e: BfElement) -> BfElement:
    """d_var (h dt^j delta) = d_var(h) dt^j delta - h d_var(f) dt^(j+1) delta."""
    i = var if isinstance(var, int) else e.f.varset.index(var)
    return BfElement.from_vector(_Actions(e.f).d(i, e.to_vector()), e.f)


def act_s(e: BfElement) -> BfElement:
    return BfElement.from_vector(_Actions(e.f).s(e.to_vector()), e.f)


def tau(P: Polynomial, u: Polynomial, f: Polynomial) -> BfElement:
    """Image of P(s) u f^s: evaluate P at -dt*t on u*delta."""
    if len(P.varset) != 1:
        raise ValueError("P must be a polynomial in s alone")
    acts = _Actions(f)
    base = BfElement.delta(f, u).to_vector()
    out: dict = {}
    for k in range(P.degree(), -1, -1):
        out = acts.s(out)
        c = P.terms.get((k,), 0)
        if c:
            for key, v in base.items():
                w = out.get(key, 0) + c * v
                if w:
                    out[key] = w
                else:
                    out.pop(key, None)
    return BfElement.from_vector(out, f)


# ------------------------------------------------------------------ models


def _default_names(n: int) -> tuple:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class VModel:
    """One of the explicit filtrations: smooth, SNC monomial, or weighted homogeneous."""

    kind: str
    f: Polynomial
    exponents: tuple = ()
    weights: WeightVector | None = None

    @classmethod
    def smooth(cls, names=("x", "y"), var: str = "y") -> "VModel":
        vs = VarSet(tuple(names))
        return cls("smooth", Polynomial.variable(vs, var), vs.unit(var))

    @classmethod
    def snc(cls, exponents, names=None) -> "VModel":
        a = tuple(int(x) for x in exponents)
        if not a or any(x < 0 for x in a) or not any(a):
            raise ValueError("SNC exponents must be non-negative and not all zero")
        vs = VarSet(tuple(names) if names else _default_names(len(a)))
        return cls("snc", Polynomial.monomial(vs, a), a)

    @classmethod
    def quasi_homogeneous(cls, f: Polynomial, weights) -> "VModel":
        w = validate_weighted_homogeneous(f, weights)
        return cls("qh", f, (), w)

    @property
    def varset(self) -> VarSet:
        return self.f.varset

    def grid_denominator(self) -> int:
        if self.kind == "smooth":
            return 1
        if self.kind == "snc":
            return lcm(*(a for a in self.exponents if a))
        return self.weights.grid_denominator()

    def snap(self, alpha) -> Fraction:
        """Smallest grid point >= alpha; the filtration is constant on (prev, snap]."""
        N = self.grid_denominator()
        return Fraction(ceil(as_rational(alpha) * N), N)

    def above(self, alpha) -> Fraction:
        """Grid point realizing V^{>alpha}."""
        N = self.grid_denominator()
        return Fraction(floor(as_rational(alpha) * N) + 1, N)

    def describe(self) -> str:
        if self.kind == "snc":
            return f"snc a={list(self.exponents)}"
        if self.kind == "smooth":
            return f"smooth f={self.f}"
        return f"qh f={self.f} w={[str(x) for x in self.weights.weights]}"


def snc_ideal_exponent(a, lam) -> tuple:
    """Exponents of I(f^lam) for f = prod x_i^a_i: max(ceil(lam*a_i) - 1, 0)."""
    lam = as_rational(lam)
    return tuple(max(ceil(lam * ai) - 1, 0) for ai in a)


def _minimal_monomials_above(weights, threshold: Fraction, max_degree: int) -> list:
    """Minimal monomials u with rho(u) >= threshold and |u| <= max_degree."""
    n = len(weights)
    out = []

    def rec(i, prefix, rho, deg):
        if i == n:
            if rho >= threshold:
                u = tuple(prefix)
                if all(
                    u[k] == 0 or rho - weights[k] < threshold for k in range(n)
                ):
                    out.append(u)
            return
        k = 0
        while deg + k <= max_degree:
            prefix.append(k)
            rec(i + 1, prefix, rho + k * weights[i], deg + k)
            prefix.pop()
            if rho + k * weights[i] >= threshold:
                break
            k += 1

    rec(0, [], Fraction(0), 0)
    return sorted(out)


def v_generators(model: VModel, alpha, j_cap: int, max_degree: int | None = None) -> list:
    """D_X-generators of V^alpha, with dt-order at most j_cap.

    For the weighted-homogeneous model, degree is capped by ``max_degree``
    (default: large enough for the given j_cap).
    """
    if j_cap < 0:
        raise ValueError("j_cap must be non-negative")
    alpha = as_rational(alpha)
    f = model.f
    vs = f.varset
    if model.kind == "smooth":
        k = max(ceil(alpha) - 1, 0)
        return [BfElement.delta(f, Polynomial.monomial(vs, tuple(k * x for x in model.exponents)))]
    if model.kind == "snc":
        out = []
        for j in range(j_cap + 1):
            out.append(BfElement.delta(f, Polynomial.monomial(vs, snc_ideal_exponent(model.exponents, alpha + j)), j))
        return out
    w = model.weights.weights
    total = model.weights.total
    if max_degree is None:
        max_degree = ceil((abs(alpha) + j_cap + 1) / min(w)) + 1
    if alpha > 1:
        m = ceil(alpha) - 1
        base = v_generators(model, alpha - m, j_cap + m, max_degree)
        out = []
        for g in base:
            for _ in range(m):
                g = act_t(g)
            out.append(g)
        return out
    out = []
    for j in range(j_cap + 1):
        for u in _minimal_monomials_above(w, alpha + j - total, max_degree):
            out.append(BfElement.delta(f, Polynomial.monomial(vs, u), j))
    return out


# --------------------------------------------------------------- snapshots


@dataclass(frozen=True)
class Truncation:
    """Window j <= J, deg <= D; closure stops after ``max_rounds`` rounds."""

    J: int
    D: int
    max_rounds: int = 200

    def __post_init__(self):
        if min(self.J, self.D, self.max_rounds) < 0:
            raise ValueError("truncation bounds must be non-negative")

    @property
    def W(self) -> int:
        return self.max_rounds

    def contains(self, key) -> bool:
        return key[0] <= self.J and sum(key[1]) <= self.D


class _Grading:
    def __init__(self, f: Polynomial):
        self.lattice = homogeneity_lattice(f)
        e0 = next(iter(f.terms))
        self.fdeg = [sum(a * b for a, b in zip(w, e0)) for w in self.lattice]

    def __call__(self, key):
        j, u = key
        return tuple(sum(a * b for a, b in zip(w, u)) - j * e for w, e in zip(self.lattice, self.fdeg))


def _window_rank(J, D):
    def rank(key):
        j, u = key
        d = sum(u)
        return (j > J or d > D, j, d, u)

    return rank


def _split(vec, grading) -> dict:
    out: dict = {}
    for k, c in vec.items():
        out.setdefault(grading(k), {})[k] = c
    return out


@dataclass
class ClosureTrace:
    """Generators and every (operator, source row) application, in order."""

    generators: list = field(default_factory=list)
    applications: list = field(default_factory=list)


@dataclass
class SubspaceSnapshot:
    """Row-reduced basis of (a model's V^alpha) restricted to a window, per grade."""

    level: Fraction
    model: VModel
    trunc: Truncation
    pieces: dict
    saturated: bool
    rounds: int
    trace: ClosureTrace | None = None

    @property
    def dim(self) -> int:
        return sum(len(p) for p in self.pieces.values())

    def rows(self):
        for g in sorted(self.pieces):
            yield from self.pieces[g].rows.values()

    def basis(self) -> list:
        out = []
        for g in sorted(self.pieces):
            out.extend(self.pieces[g].basis())
        return out

    def contains_vector(self, vec) -> bool:
        grading = _grading_for(self.model)
        for g, part in _split(vec, grading).items():
            space = self.pieces.get(g)
            if space is None or not space.contains(part):
                return False
        return True

    def contains(self, e: BfElement) -> bool:
        return self.contains_vector(e.to_vector())


_GRADINGS: dict = {}


def _grading_for(model: VModel) -> _Grading:
    key = model.f
    if key not in _GRADINGS:
        _GRADINGS[key] = _Grading(model.f)
    return _GRADINGS[key]


def ambient_dimension(model: VModel, J: int, D: int) -> int:
    from math import comb

    n = len(model.varset)
    return (J + 1) * comb(D + n, n)


class VLab:
    """Snapshot factory with caching for one model and one window.

    Closure runs in an enlarged working window (extra dt-order ``head_j``
    and extra degree ``head_d``) and is then cut down to the requested one.
    """

    def __init__(self, model: VModel, trunc: Truncation, head_j: int = 1, head_d: int | None = None,
                 keep_trace: bool = False):
        self.model = model
        self.trunc = trunc
        self.head_j = head_j
        self.head_d = model.f.degree() if head_d is None else head_d
        self.keep_trace = keep_trace
        self.acts = _Actions(model.f)
        self.grading = _grading_for(model)
        self._cache: dict = {}

    @property
    def work_J(self):
        return self.trunc.J + self.head_j

    @property
    def work_D(self):
        return self.trunc.D + self.head_d

    def snapshot(self, alpha) -> SubspaceSnapshot:
        level = self.model.snap(alpha)
        if level not in self._cache:
            self._cache[level] = self._build(level)
        return self._cache[level]

    def above(self, alpha) -> SubspaceSnapshot:
        return self.snapshot(self.model.above(alpha))

    def _operators(self):
        n = self.acts.n
        ops = [(f"x{i}", (lambda v, i=i: self.acts.x(i, v))) for i in range(n)]
        ops += [(f"d{i}", (lambda v, i=i: self.acts.d(i, v))) for i in range(n)]
        return ops

    def _build(self, level: Fraction) -> SubspaceSnapshot:
        JW, DW = self.work_J, self.work_D
        inside = lambda k: k[0] <= JW and sum(k[1]) <= DW  # noqa: E731
        rank = _window_rank(JW, DW)
        grading = self.grading
        spaces: dict = {}
        seen: dict = {}
        trace = ClosureTrace() if self.keep_trace else None

        def space(g):
            sp = spaces.get(g)
            if sp is None:
                sp = spaces[g] = RowSpace(rank)
                seen[g] = set()
            return sp

        def fresh(touched):
            out = []
            for g in touched:
                sp = spaces[g]
                done = seen[g]
                for p, row in sp.rows.items():
                    if p not in done and inside(p):
                        done.add(p)
                        out.append(row)
            return out

        touched = set()
        for gen in v_generators(self.model, level, JW, DW):
            vec = gen.to_vector()
            if not all(inside(k) for k in vec):
                continue
            if trace is not None:
                trace.generators.append(vec)
            for g, part in _split(vec, grading).items():
                space(g).add(part)
                touched.add(g)
        frontier = fresh(touched)
        ops = self._operators()
        integral = self.acts.integral
        rounds = 0
        saturated = not frontier
        while frontier and rounds < self.trunc.max_rounds:
            rounds += 1
            touched = set()
            for row in frontier:
                for name, op in ops:
                    img = op(row)
                    if not img:
                        continue
                    if trace is not None:
                        trace.applications.append((name, row))
                    # op preserves homogeneity, so img lies in a single grade
                    g = grading(next(iter(img)))
                    if space(g).add(img, scaled=integral):
                        touched.add(g)
            frontier = fresh(touched)
            saturated = not frontier
        pieces = self._restrict(spaces, self.trunc.J, self.trunc.D, outer=(JW, DW))
        return SubspaceSnapshot(level, self.model, self.trunc, pieces, saturated, rounds, trace)

    @staticmethod
    def _restrict(spaces, J, D, outer=None) -> dict:
        """Intersect each graded piece with the window (J, D).

        With ``outer`` set, only rows whose pivot lies in that larger window
        count as members of the subspace.
        """
        rank = _window_rank(J, D)
        out = {}
        for g, sp in spaces.items():
            rs = RowSpace(rank)
            for p, row in sp.rows.items():
                if outer is None or (p[0] <= outer[0] and sum(p[1]) <= outer[1]):
                    rs.add(row, scaled=True)
            keep = RowSpace(rank)
            for p, row in rs.rows.items():
                if p[0] <= J and sum(p[1]) <= D:
                    keep.rows[p] = row
            if keep.rows:
                out[g] = keep
        return out

    # image of a snapshot under an operator, cut to a window

    def image(self, snap: SubspaceSnapshot, op, J: int, D: int) -> dict:
        rank = _window_rank(J, D)
        spaces: dict = {}
        for row in snap.rows():
            img = op(row)
            if not img:
                continue
            g = self.grading(next(iter(img)))
            sp = spaces.get(g)
            if sp is None:
                sp = spaces[g] = RowSpace(rank)
            sp.add(img)
        out = {}
        for g, sp in spaces.items():
            keep = RowSpace(rank)
            for p, row in sp.rows.items():
                if p[0] <= J and sum(p[1]) <= D:
                    keep.rows[p] = row
            if keep.rows:
                out[g] = keep
        return out

    def restrict(self, snap: SubspaceSnapshot, J: int, D: int) -> dict:
        return self._restrict(snap.pieces, J, D)


def _first_outside(pieces: dict, target: dict):
    """A row of ``pieces`` not in the span of ``target`` (same grading), or None."""
    for g in sorted(pieces):
        sp = target.get(g)
        for row in pieces[g].rows.values():
            if sp is None or sp.reduce(row, scaled=True):
                return row
    return None


def _contained(pieces: dict, target: dict) -> bool:
    return _first_outside(pieces, target) is None


def _fmt_vector(row, f: Polynomial) -> str:
    return str(BfElement.from_vector(row, f))


def truncated_subspace(model: VModel, alpha, trunc: Truncation, **kwargs) -> SubspaceSnapshot:
    return VLab(model, trunc, **kwargs).snapshot(alpha)


def replay_trace(snap: SubspaceSnapshot) -> bool:
    """Rebuild a snapshot from its recorded generators and operator
    applications and confirm it spans the same subspace."""
    if snap.trace is None:
        raise ValueError("snapshot was built without a trace")
    lab = VLab(snap.model, snap.trunc)
    ops = dict(lab._operators())
    grading = lab.grading
    rank = lambda k: (True, k[0], sum(k[1]), k[1])  # noqa: E731
    spaces: dict = {}

    def add(vec):
        for g, part in _split(vec, grading).items():
            spaces.setdefault(g, RowSpace(rank)).add(part)

    for vec in snap.trace.generators:
        add(vec)
    for name, row in snap.trace.applications:
        # every source must already be a combination of earlier material
        for g, part in _split(row, grading).items():
            if g not in spaces or spaces[g].reduce(part):
                return False
        add(ops[name](row))
    for row in snap.rows():
        for g, part in _split(row, grading).items():
            if g not in spaces or spaces[g].reduce(part):
                return False
    return True


# --------------------------------------------------------------- axioms


@dataclass
class LevelReport:
    alpha: Fraction
    dim: int
    saturated: bool
    mono: bool
    t_up: bool
    t_eq: bool | None
    dt_down: bool
    nilpotency_order: int | None

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "dim": self.dim,
            "saturated": self.saturated,
            "containments": {
                "mono": self.mono,
                "t_up": self.t_up,
                "t_eq": self.t_eq,
                "dt_down": self.dt_down,
            },
            "nilpotency_order": self.nilpotency_order,
        }


@dataclass
class AxiomReport:
    model: str
    trunc: Truncation
    levels: list
    failures: list
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "trunc": {"J": self.trunc.J, "D": self.trunc.D},
            "levels": [lv.to_json() for lv in self.levels],
            "ok": self.ok,
            "failures": list(self.failures),
            "warnings": list(self.warnings),
        }

    def raise_on_failure(self):
        if self.failures:
            raise AxiomViolation("; ".join(self.failures))


class AxiomViolation(AssertionError):
    pass


def check_axioms(model: VModel, levels, trunc: Truncation, max_nilpotency: int = 3,
                 lab: VLab | None = None) -> AxiomReport:
    """Check the V-filtration conditions on finite-window snapshots.

    Per level: monotonicity against the next level and V^{>alpha};
    t V^alpha in V^{alpha+1}, with equality on the inner window
    (j <= J-1, deg <= D - deg f) when alpha > 0; dt V^alpha in V^{alpha-1};
    and the least k with (s+alpha)^k V^alpha in V^{>alpha}.

    Images of window elements are compared against snapshots of a window
    enlarged by ``max_nilpotency`` in dt-order and by that many multiples
    of deg f in degree, so no image is clipped.
    """
    levels = sorted(as_rational(x) for x in levels)
    lab = lab or VLab(model, trunc)
    acts = lab.acts
    J, D = trunc.J, trunc.D
    df = model.f.degree()
    K = max_nilpotency
    big = VLab(model, Truncation(J + K, D + K * df, trunc.max_rounds))
    JB, DB = big.trunc.J, big.trunc.D
    J_in, D_in = J - 1, D - df
    reports, failures, warnings = [], [], []

    def fail(alpha, what, row):
        msg = f"alpha={alpha}: {what}"
        if row is not None:
            msg += f" (witness {_fmt_vector(row, model.f)})"
        failures.append(msg)

    for idx, alpha in enumerate(levels):
        A = lab.snapshot(alpha)
        above = lab.above(alpha)
        up = lab.snapshot(alpha + 1)
        big_above = big.above(alpha)
        big_up = big.snapshot(alpha + 1)
        big_down = big.snapshot(alpha - 1)
        sat = all(x.saturated for x in (A, above, up, big_above, big_up, big_down))

        nxt = levels[idx + 1] if idx + 1 < len(levels) else None
        mono_w = _first_outside(above.pieces, A.pieces)
        if mono_w is None and nxt is not None:
            mono_w = _first_outside(lab.snapshot(nxt).pieces, A.pieces)
        mono = mono_w is None

        t_w = _first_outside(big.image(A, acts.t, JB, DB), big_up.pieces)
        t_up = t_w is None

        t_eq = None
        if alpha > 0:
            inner = lab.restrict(up, J_in, D_in)
            eq_w = _first_outside(inner, big.image(A, acts.t, JB, DB))
            t_eq = eq_w is None

        d_w = _first_outside(big.image(A, acts.dt, JB, DB), big_down.pieces)
        dt_down = d_w is None

        nil = None
        op = lambda v: v  # noqa: E731
        for k in range(1, K + 1):
            op = (lambda prev: (lambda v: acts.s_plus(alpha, prev(v))))(op)
            if _contained(big.image(A, op, JB, DB), big_above.pieces):
                nil = k
                break

        if sat:
            if not mono:
                fail(alpha, "monotonicity", mono_w)
            if not t_up:
                fail(alpha, "t V^a not in V^(a+1)", t_w)
            if t_eq is False:
                fail(alpha, "V^(a+1) not in t V^a on inner window", eq_w)
            if not dt_down:
                fail(alpha, "dt V^a not in V^(a-1)", d_w)
            if nil is None:
                fail(alpha, f"(s+a) not nilpotent of order <= {K} on Gr", None)
        else:
            warnings.append(f"alpha={alpha}: unsaturated snapshot, containments not asserted")
        reports.append(LevelReport(alpha, A.dim, A.saturated, mono, t_up, t_eq, dt_down, nil))
    return AxiomReport(model.describe(), trunc, reports, failures, warnings)


def is_full_window(snap: SubspaceSnapshot) -> bool:
    return snap.dim == ambient_dimension(snap.model, snap.trunc.J, snap.trunc.D)


# ---------------------------------------------------------- graded pieces


class SnapshotNotSaturated(RuntimeError):
    pass


@dataclass
class GrMaps:
    """Injectivity is judged on the columns kept (images inside the window)."""

    alpha: Fraction
    dim_source: int
    dim_target: int
    t_matrix: list
    dt_matrix: list
    t_injective: bool
    t_surjective: bool
    dt_injective: bool
    dt_surjective: bool


def _quotient_basis(A: SubspaceSnapshot, B: SubspaceSnapshot) -> list:
    """Rows of A completing a basis of B inside A (a basis of A/B)."""
    out = []
    for g in sorted(A.pieces):
        sp = B.pieces[g].copy() if g in B.pieces else RowSpace(A.pieces[g].rank)
        for row in A.pieces[g].rows.values():
            if sp.add(row, scaled=True):
                out.append(row)
    return out


def _coordinates(vec, basis: list, sub: SubspaceSnapshot):
    """Coordinates of vec modulo sub in the given quotient basis, or None."""
    tag_w = ("~", -1)

    def rank(k):
        return (0, k[1]) if k[0] == "~" else (1, k[0], sum(k[1]), k[1])

    sp = RowSpace(rank)
    for row in sub.rows():
        sp.add(row, scaled=True)
    for i, b in enumerate(basis):
        v = dict(b)
        v[("~", i)] = 1
        sp.add(v)
    w = dict(vec)
    w[tag_w] = 1
    r = sp.reduce(w)
    if any(k[0] != "~" for k in r):
        return None
    scale = r.get(tag_w)
    if not scale:
        return None
    return [Fraction(-r.get(("~", i), 0), scale) for i in range(len(basis))]


def _rank_of(matrix, ncols) -> int:
    sp = RowSpace()
    for row in matrix:
        sp.add({i: c for i, c in enumerate(row) if c})
    return len(sp)


def gr_action_maps(model: VModel, alpha, trunc: Truncation, lab: VLab | None = None,
                   margin: int = 2) -> GrMaps:
    """Matrices of t: Gr^a -> Gr^(a+1) and dt: Gr^(a+1) -> Gr^a on the window.

    The four snapshots are built in a window enlarged by ``margin`` steps
    (one dt-order and deg f degrees each) and cut back, so that members of
    V^{>a} near the window edge are not missed.  Columns whose image leaves
    the window are omitted.
    """
    alpha = as_rational(alpha)
    df = model.f.degree()
    big = lab or VLab(model, Truncation(trunc.J + margin, trunc.D + margin * df, trunc.max_rounds))
    snaps = []
    for level in (model.snap(alpha), model.above(alpha), model.snap(alpha + 1), model.above(alpha + 1)):
        snap = big.snapshot(level)
        if not snap.saturated:
            raise SnapshotNotSaturated(f"snapshot at {snap.level} is not saturated")
        pieces = big._restrict(snap.pieces, trunc.J, trunc.D, outer=(big.trunc.J, big.trunc.D))
        snaps.append(SubspaceSnapshot(snap.level, model, trunc, pieces, True, snap.rounds, None))
    A, A_gt, B, B_gt = snaps
    lab = big
    grA = _quotient_basis(A, A_gt)
    grB = _quotient_basis(B, B_gt)
    acts = lab.acts
    t_cols, dt_cols = [], []
    for v in grA:
        img = acts.t(v)
        if all(trunc.contains(k) for k in img):
            c = _coordinates(img, grB, B_gt)
            if c is not None:
                t_cols.append(c)
    for v in grB:
        img = acts.dt(v)
        if all(trunc.contains(k) for k in img):
            c = _coordinates(img, grA, A_gt)
            if c is not None:
                dt_cols.append(c)
    t_rank = _rank_of(t_cols, len(grB))
    dt_rank = _rank_of(dt_cols, len(grA))
    return GrMaps(
        alpha, len(grA), len(grB), t_cols, dt_cols,
        t_injective=t_rank == len(t_cols), t_surjective=t_rank == len(grB),
        dt_injective=dt_rank == len(dt_cols), dt_surjective=dt_rank == len(grA),
    )


# -------------------------------------------------------------- membership

CERTIFIED = "certified_member"
NOT_IN_WINDOW = "not_in_window"
UNKNOWN = "unknown"


class OutsideWindowError(ValueError):
    pass


def membership_certify(e: BfElement, model: VModel, alpha, trunc: Truncation,
                       lab: VLab | None = None) -> str:
    """Certify e in V^alpha from the generator side; never claims non-membership."""
    if e.max_order() > trunc.J or e.max_degree() > trunc.D:
        raise OutsideWindowError("element lies outside the truncation window")
    lab = lab or VLab(model, trunc)
    snap = lab.snapshot(alpha)
    if snap.contains(e):
        return CERTIFIED
    return NOT_IN_WINDOW if snap.saturated else UNKNOWN


# ------------------------------------------------------ elementary modules


def _as_s_polynomial(b) -> Polynomial:
    if isinstance(b, BFunction):
        return b.expand()
    if isinstance(b, Polynomial):
        if b.varset != S_VARS:
            raise ValueError("expected a polynomial in s")
        return b
    raise TypeError("expected a BFunction or a polynomial in s")


def elementary_graded_annihilators(b, m: int, p: int, q: int, k: int, dual: bool = False) -> list:
    """Cyclic annihilators of the graded piece at level k of an elementary module.

    Direct:  [((s+k)^m, p), ((s+k) b(s+k), q)]
    Dual:    [((s+k+1)^m, p), ((s+k+1) b(-s-k-1), q)]
    Each root -lambda of b must have lambda in [0, 1), and m must equal the
    multiplicity of the root 0.
    """
    bp = _as_s_polynomial(b)
    if bp.is_zero():
        raise ValueError("b must be nonzero")
    coeffs = [bp.terms.get((i,), Fraction(0)) for i in range(bp.degree() + 1)]
    roots, rest = rational_roots(coeffs)
    if len(rest) > 1:
        raise ValueError("b has roots that are not rational")
    for r in roots:
        if not (0 <= -r < 1):
            raise ValueError(f"root {r} of b is outside (-1, 0]")
    if roots.count(0) != m:
        raise ValueError(f"m={m} differs from the multiplicity {roots.count(0)} of the root 0")
    s = Polynomial.variable(S_VARS, "s")
    if dual:
        lin = s + (k + 1)
        second = lin * bp.substitute("s", -s - (k + 1))
    else:
        lin = s + k
        second = lin * bp.substitute("s", s + k)
    return [(lin ** m, p), (second, q)]


__all__ = [
    "BfElement", "VModel", "Truncation", "SubspaceSnapshot", "VLab", "AxiomReport", "LevelReport",
    "act_t", "act_dt", "act_x", "act_derivation", "act_s", "tau", "v_generators",
    "truncated_subspace", "check_axioms", "gr_action_maps", "membership_certify",
    "elementary_graded_annihilators", "replay_trace", "is_full_window", "snc_ideal_exponent",
    "weighted_degree", "CERTIFIED", "NOT_IN_WINDOW", "UNKNOWN",
]
