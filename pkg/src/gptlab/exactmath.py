"""Exact rational linear algebra: vectors, matrices, rank/solve, cone feasibility.

Everything here is computed over arbitrary-precision rationals; there is no
floating point anywhere in this package's numerical core.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction


def rat(value) -> Fraction:
    """Coerce an int, string "p/q", or Fraction to an exact rational."""
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class RVector:
    """Immutable vector of exact rationals."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        self.coords = tuple(Fraction(c) for c in coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, RVector) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __add__(self, other: "RVector") -> "RVector":
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return RVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "RVector") -> "RVector":
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return RVector(a - b for a, b in zip(self.coords, other.coords))

    def scale(self, c) -> "RVector":
        c = Fraction(c)
        return RVector(c * a for a in self.coords)

    def dot(self, other: "RVector") -> Fraction:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def __repr__(self) -> str:
        return "RVector([%s])" % ", ".join(format_rational(c) for c in self.coords)

    @staticmethod
    def zero(dim: int) -> "RVector":
        return RVector([0] * dim)

    @staticmethod
    def basis(dim: int, i: int) -> "RVector":
        return RVector([1 if j == i else 0 for j in range(dim)])


def tensor(a: RVector, b: RVector) -> RVector:
    """Kronecker product; coordinate i*dim(b)+j equals a[i]*b[j]."""
    return RVector(x * y for x in a for y in b)


class RMatrix:
    """Immutable rows x cols matrix of exact rationals, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        self.rows = rows
        self.cols = cols
        self.entries = tuple(Fraction(e) for e in entries)
        if len(self.entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries, got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(row_list: Sequence[Sequence]) -> "RMatrix":
        rows = len(row_list)
        cols = len(row_list[0]) if rows else 0
        flat = []
        for r in row_list:
            if len(r) != cols:
                raise ValueError("ragged rows")
            flat.extend(r)
        return RMatrix(rows, cols, flat)

    @staticmethod
    def identity(n: int) -> "RMatrix":
        return RMatrix(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, rc) -> Fraction:
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> RVector:
        return RVector(self.entries[r * self.cols : (r + 1) * self.cols])

    def row_lists(self) -> list[list[Fraction]]:
        return [
            list(self.entries[r * self.cols : (r + 1) * self.cols])
            for r in range(self.rows)
        ]

    def transpose(self) -> "RMatrix":
        return RMatrix(
            self.cols,
            self.rows,
            [self[r, c] for c in range(self.cols) for r in range(self.rows)],
        )

    def matvec(self, v: RVector) -> RVector:
        if v.dim != self.cols:
            raise ValueError(f"dimension mismatch: {self.cols} vs {v.dim}")
        return RVector(self.row(r).dot(v) for r in range(self.rows))

    def matmul(self, other: "RMatrix") -> "RMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matmul")
        out = []
        for r in range(self.rows):
            for c in range(other.cols):
                out.append(
                    sum(
                        (self[r, k] * other[k, c] for k in range(self.cols)),
                        Fraction(0),
                    )
                )
        return RMatrix(self.rows, other.cols, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"RMatrix({self.rows}x{self.cols})"


def _eliminate(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place forward elimination; returns (rows, pivot column list)."""
    if not rows:
        return rows, []
    n_rows, n_cols = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return rows, pivots


def rank(m: RMatrix) -> int:
    """Exact rank via Gaussian elimination over the rationals."""
    _, pivots = _eliminate(m.row_lists())
    return len(pivots)


def solve_linear(m: RMatrix, b: RVector) -> Optional[RVector]:
    """Exact solution of m*x = b, free variables pinned to zero.

    Returns None when the system is inconsistent.
    """
    if m.rows != b.dim:
        raise ValueError(f"dimension mismatch: {m.rows} rows vs {b.dim} rhs")
    aug = [row + [b[r]] for r, row in enumerate(m.row_lists())]
    aug, pivots = _eliminate(aug)
    # a pivot in the rhs column marks inconsistency
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][m.cols]
    return RVector(x)


# ---------------------------------------------------------------------------
# Exact simplex (Bland's anti-cycling rule): min c.x s.t. A x = b, x >= 0
# ---------------------------------------------------------------------------


class _Infeasible(Exception):
    pass


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    inv = 1 / tab[row][col]
    tab[row] = [x * inv for x in tab[row]]
    for i in range(len(tab)):
        if i != row and tab[i][col] != 0:
            f = tab[i][col]
            tab[i] = [x - f * y for x, y in zip(tab[i], tab[row])]
    basis[row] = col


def _simplex_iterate(
    tab: list[list[Fraction]], basis: list[int], allowed: int
) -> None:
    """Run Bland-rule pivots until the cost row (last) has no negative entry.

    Only columns < allowed may enter the basis.
    """
    cost = tab[-1]
    while True:
        col = next((j for j in range(allowed) if cost[j] < 0), None)
        if col is None:
            return
        best = None
        for i in range(len(tab) - 1):
            if tab[i][col] > 0:
                ratio = tab[i][-1] / tab[i][col]
                if best is None or ratio < best[0] or (
                    ratio == best[0] and basis[i] < basis[best[1]]
                ):
                    best = (ratio, i)
        if best is None:
            raise ArithmeticError("unbounded linear program")
        _pivot(tab, basis, best[1], col)
        cost = tab[-1]


def lp_solve(
    a_rows: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    objective: Optional[Sequence[Fraction]] = None,
) -> Optional[tuple[list[Fraction], Fraction]]:
    """Exact LP: minimize objective.x subject to A x = b, x >= 0.

    With objective None any feasible point is returned (phase 1 only).
    Returns (x, objective value) or None when infeasible.  Bland's rule
    guarantees termination.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    # make rhs non-negative, append artificials
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(x) for x in a_rows[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        art = [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        tab.append(row + art + [rhs])
    basis = [n + i for i in range(m)]
    # phase-1 cost: sum of artificials, canonicalized against the basis
    cost = [Fraction(0)] * (n + m + 1)
    for j in range(n, n + m):
        cost[j] = Fraction(1)
    for i in range(m):
        cost = [x - y for x, y in zip(cost, tab[i])]
    tab.append(cost)
    _simplex_iterate(tab, basis, allowed=n)
    if -tab[-1][-1] != 0:
        return None
    # drive leftover zero-level artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    if objective is None:
        x = [Fraction(0)] * n
        for i in range(m):
            if basis[i] < n:
                x[basis[i]] = tab[i][-1]
        return x, Fraction(0)
    # phase 2
    cost = [Fraction(c) for c in objective] + [Fraction(0)] * (m + 1)
    for i in range(m):
        if basis[i] < n and cost[basis[i]] != 0:
            f = cost[basis[i]]
            cost = [x - f * y for x, y in zip(cost, tab[i])]
    tab[-1] = cost
    _simplex_iterate(tab, basis, allowed=n)
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][-1]
    return x, -tab[-1][-1]


def cone_feasible(
    generators: Sequence[RVector],
    constraints: Sequence[tuple[RVector, Fraction]],
) -> Optional[list[Fraction]]:
    """Find c >= 0 with <v_k, sum_i c_i gen_i> = r_k for every constraint.

    Returns the coefficient list, or None when the system is infeasible.
    """
    if not generators:
        generators = []
    dims = {g.dim for g in generators} | {v.dim for v, _ in constraints}
    if len(dims) > 1:
        raise ValueError(f"mixed dimensions: {sorted(dims)}")
    a_rows = [[v.dot(g) for g in generators] for v, _ in constraints]
    b = [Fraction(r) for _, r in constraints]
    if not generators:
        return [] if all(r == 0 for r in b) else None
    res = lp_solve(a_rows, b)
    return None if res is None else res[0]


def cone_combination(generators: Sequence[RVector], coeffs: Sequence[Fraction]) -> RVector:
    """Evaluate sum_i c_i gen_i."""
    out = RVector.zero(generators[0].dim)
    for c, g in zip(coeffs, generators):
        if c != 0:
            out = out + g.scale(c)
    return out
