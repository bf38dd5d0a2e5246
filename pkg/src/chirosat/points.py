"""Integer point configurations and exact geometric oracles.

Chirotopes are extracted from points via exact integer determinants
(fraction-free elimination, no floating point anywhere).  The Radon
partition of d+2 points is computed over the rationals and provides an
independent geometric check of combinatorial intersection verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .chirotopes import Chirotope


class DegeneratePointsError(ValueError):
    """Points not in general position; carries one offending basis."""

    def __init__(self, basis: tuple[int, ...]):
        super().__init__(f"points {basis} are affinely dependent (zero determinant)")
        self.basis = basis


@dataclass(frozen=True)
class PointConfiguration:
    """n labeled points (labels 1..n) with exact integer coordinates."""

    points: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("empty point configuration")
        dims = {len(p) for p in self.points}
        if len(dims) != 1:
            raise ValueError(f"mixed coordinate dimensions {sorted(dims)}")
        for p in self.points:
            for x in p:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ValueError(f"coordinate {x!r} is not an exact integer")
        object.__setattr__(self, "points", tuple(tuple(p) for p in self.points))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def homogeneous(self, label: int) -> tuple[int, ...]:
        """Point `label` (1-based) with a leading 1 coordinate."""
        return (1, *self.points[label - 1])


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix by Bareiss
    fraction-free elimination."""
    m = [list(row) for row in rows]
    size = len(m)
    if any(len(row) != size for row in m):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for i in range(k + 1, size):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, size):
            row_i, row_k = m[i], m[k]
            factor = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[-1][-1]


def chirotope_from_points(config: PointConfiguration, r: int | None = None) -> Chirotope:
    """Chirotope of a point configuration: the sign of the homogenized
    r x r determinant on each sorted basis, computed exactly.  Raises
    DegeneratePointsError naming the first basis with zero determinant."""
    if r is None:
        r = config.dim + 1
    if r != config.dim + 1:
        raise ValueError(f"rank {r} does not match affine dimension {config.dim}")
    if config.n < r:
        raise ValueError(f"need at least {r} points, got {config.n}")
    signs = []
    for basis in combinations(range(1, config.n + 1), r):
        det = integer_det([config.homogeneous(v) for v in basis])
        if det == 0:
            raise DegeneratePointsError(basis)
        signs.append(1 if det > 0 else -1)
    return Chirotope(config.n, r, tuple(signs))


def _rational_kernel(columns: Sequence[Sequence[int]]) -> list[Fraction]:
    """A nonzero vector x with  sum_j x_j * columns[j] = 0, for a matrix
    whose kernel is exactly one-dimensional."""
    n_rows = len(columns[0])
    n_cols = len(columns)
    mat = [[Fraction(columns[j][i]) for j in range(n_cols)] for i in range(n_rows)]
    pivot_cols: list[int] = []
    row = 0
    for col in range(n_cols):
        pivot = next((i for i in range(row, n_rows) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = mat[row][col]
        mat[row] = [x / inv for x in mat[row]]
        for i in range(n_rows):
            if i != row and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[row])]
        pivot_cols.append(col)
        row += 1
        if row == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivot_cols]
    if len(free) != 1:
        raise ValueError(f"kernel dimension {len(free)} != 1: points are degenerate")
    fc = free[0]
    x = [Fraction(0)] * n_cols
    x[fc] = Fraction(1)
    for rr, pc in enumerate(pivot_cols):
        x[pc] = -mat[rr][fc]
    scale = math.lcm(*(v.denominator for v in x))
    return [v * scale for v in x]


def radon_partition(points: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The unique Radon partition of d+2 integer points in general
    position in R^d, as two tuples of 0-based indices (the side holding
    index 0 first).  Exact rational arithmetic throughout."""
    if not points:
        raise ValueError("no points")
    dim = len(points[0])
    if len(points) != dim + 2:
        raise ValueError(f"need {dim + 2} points in R^{dim}, got {len(points)}")
    columns = [(1, *p) for p in points]
    coeffs = _rational_kernel(columns)
    if any(c == 0 for c in coeffs):
        raise ValueError("degenerate configuration: Radon coefficient vanishes")
    # affine dependence: coefficients sum to zero
    assert sum(coeffs) == 0
    for i in range(dim + 1):
        assert sum(c * col[i] for c, col in zip(coeffs, columns)) == 0
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    pos = tuple(i for i, c in enumerate(coeffs) if c > 0)
    neg = tuple(i for i, c in enumerate(coeffs) if c < 0)
    return pos, neg


def convex_hulls_intersect(
    config: PointConfiguration, f_labels: Iterable[int], g_labels: Iterable[int]
) -> bool:
    """Whether conv(F) and conv(G) intersect, for disjoint label sets F, G
    covering d+2 points in general position.  True exactly when the Radon
    partition of those points is {F, G}."""
    f_set, g_set = set(f_labels), set(g_labels)
    if f_set & g_set:
        raise ValueError("label sets overlap")
    support = sorted(f_set | g_set)
    pos, neg = radon_partition([config.points[v - 1] for v in support])
    pos_labels = {support[i] for i in pos}
    neg_labels = {support[i] for i in neg}
    return {frozenset(f_set), frozenset(g_set)} == {
        frozenset(pos_labels),
        frozenset(neg_labels),
    }
