"""Exact sparse linear algebra over Q with fraction-free integer rows."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .kernels import eliminate, primitive


def int_row(vec) -> dict:
    """Scale a rational sparse vector to a primitive integer row."""
    den = 1
    for c in vec.values():
        d = c.denominator if isinstance(c, Fraction) else 1
        if d != 1:
            den = den * d // gcd(den, d)
    out = {}
    for k, c in vec.items():
        if c:
            out[k] = int(c * den) if den != 1 or isinstance(c, Fraction) else int(c)
    return primitive(out)


class RowSpace:
    """Incremental reduced row echelon basis of a subspace of Q^(keys).

    The pivot of a row is its largest key under ``rank``.  Rows are kept
    fully reduced: a pivot key occurs in no other row.
    """

    __slots__ = ("rows", "rank")

    def __init__(self, rank=None):
        self.rows: dict = {}
        self.rank = rank

    def __len__(self):
        return len(self.rows)

    def copy(self) -> "RowSpace":
        out = RowSpace(self.rank)
        out.rows = dict(self.rows)
        return out

    def _pivot(self, row):
        return max(row, key=self.rank) if self.rank else max(row)

    def reduce(self, vec, scaled: bool = False) -> dict:
        """Remainder of a vector modulo the space, as an integer row."""
        v = vec if scaled else int_row(vec)
        rows = self.rows
        for k in [k for k in v if k in rows]:
            if k in v:
                v = eliminate(v, rows[k], k)
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def add(self, vec, scaled: bool = False) -> bool:
        """Insert a vector; True if the dimension grew."""
        r = self.reduce(vec, scaled)
        if not r:
            return False
        p = self._pivot(r)
        if r[p] < 0:
            r = {k: -c for k, c in r.items()}
        rows = self.rows
        for q in [q for q, row in rows.items() if p in row]:
            rows[q] = eliminate(rows[q], r, p)
        rows[p] = r
        return True

    def basis(self) -> list:
        """Rows normalized to pivot coefficient 1, sorted by pivot."""
        out = []
        for p in sorted(self.rows, key=self.rank) if self.rank else sorted(self.rows):
            row = self.rows[p]
            lead = row[p]
            out.append({k: Fraction(c, lead) for k, c in row.items()})
        return out


_RHS = ("~rhs",)


def solve_sparse(equations, rhs=None):
    """Solve sum_k a[k] x_k = b for sparse rational equations.

    ``equations`` is a list of dicts over hashable, mutually comparable
    unknown labels; ``rhs`` a parallel list of right-hand sides (default 0).
    Returns a dict with a particular solution (free unknowns set to zero)
    or None when inconsistent.
    """
    order: dict = {}
    for eq in equations:
        for k in eq:
            if k not in order:
                order[k] = len(order) + 1
    # constant column ranks lowest so it is never a pivot of a consistent row
    rank = lambda k: 0 if k == _RHS else order[k]  # noqa: E731
    space = RowSpace(rank)
    for i, eq in enumerate(equations):
        row = dict(eq)
        b = rhs[i] if rhs is not None else 0
        if b:
            row[_RHS] = -Fraction(b)
        if row:
            space.add(row)
    if _RHS in space.rows:
        return None
    sol = {}
    for p, row in space.rows.items():
        c = row.get(_RHS, 0)
        if c:
            sol[p] = Fraction(-c, row[p])
    return sol


def nullspace_dimension(equations) -> int:
    keys = set()
    space = RowSpace()
    order = {}
    for eq in equations:
        for k in eq:
            keys.add(k)
            order.setdefault(k, len(order))
    space.rank = order.__getitem__
    for eq in equations:
        space.add(eq)
    return len(keys) - len(space)


def integer_nullspace_basis(rows, ncols: int) -> list:
    """Integer basis of {v in Q^ncols : row . v = 0 for every row}."""
    space = RowSpace()
    for r in rows:
        space.add({i: c for i, c in enumerate(r) if c})
    pivots = set(space.rows)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = {free: Fraction(1)}
        for p, row in space.rows.items():
            c = row.get(free, 0)
            if c:
                v[p] = Fraction(-c, row[p])
        ints = int_row(v)
        basis.append([ints.get(i, 0) for i in range(ncols)])
    return basis
