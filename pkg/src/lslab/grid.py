"""Coordinate geometry for finite grids [k]^l and their snake-order Hamilton path.

Vertices are 1-based coordinate tuples; the Boolean hypercube on n bits is the
k=2, l=n case with bit b stored as coordinate b+1.  The snake path is the
recursive boustrophedon order: the path for [k]^(l+1) walks the [k]^l path with
the last coordinate fixed at 1, then walks it backwards at 2, forwards at 3,
and so on.  Ranking and unranking use closed-form mixed-radix arithmetic with
per-level reversal, so a single step costs O(l) and never materializes the
path; grids far too large to enumerate remain addressable.

Everything here is pure and deterministic; values are immutable after
construction and safe for unrestricted concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .errors import BudgetExceeded

Vertex = tuple[int, ...]

#: Exhaustive vertex scans refuse to run above this many vertices unless the
#: caller passes an explicit higher limit.
DEFAULT_SCAN_LIMIT = 1 << 16


@dataclass(frozen=True)
class GridShape:
    """The grid [k]^l: l axes, each with coordinates 1..k."""

    k: int
    l: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"side length must be >= 2, got k={self.k}")
        if self.l < 1:
            raise ValueError(f"axis count must be >= 1, got l={self.l}")

    @property
    def vertex_count(self) -> int:
        return self.k ** self.l

    def contains(self, v: Vertex) -> bool:
        return len(v) == self.l and all(1 <= c <= self.k for c in v)

    def require(self, v: Vertex) -> None:
        if not self.contains(v):
            raise ValueError(f"vertex {v!r} is not in [{self.k}]^{self.l}")

    def iter_vertices(self, limit: int = DEFAULT_SCAN_LIMIT) -> Iterator[Vertex]:
        """Yield every vertex; refuses shapes with more than `limit` vertices."""
        if self.vertex_count > limit:
            raise BudgetExceeded(
                f"[{self.k}]^{self.l} has {self.vertex_count} vertices, "
                f"over the scan limit {limit}"
            )
        return product(range(1, self.k + 1), repeat=self.l)


def neighbors(shape: GridShape, v: Vertex) -> list[Vertex]:
    """Grid neighbors of v: one coordinate moved by +/-1, staying in bounds.

    Degree ranges from l at a corner to 2l in the interior.
    """
    shape.require(v)
    out: list[Vertex] = []
    for i, c in enumerate(v):
        if c > 1:
            out.append(v[:i] + (c - 1,) + v[i + 1 :])
        if c < shape.k:
            out.append(v[:i] + (c + 1,) + v[i + 1 :])
    return out


def l1_distance(u: Vertex, v: Vertex) -> int:
    """Sum of per-coordinate absolute differences; Hamming distance when k=2."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(abs(a - b) for a, b in zip(u, v))


def snake_rank(shape: GridShape, v: Vertex) -> int:
    """Position of v on the snake path, in 1..k^l.

    Bijection onto [1..N]; inverse of snake_unrank.
    """
    shape.require(v)
    k = shape.k
    r = v[0] - 1  # 0-based rank within the innermost line
    size = k
    for i in range(1, shape.l):
        c = v[i] - 1
        # odd 0-based digit means the lower levels are traversed in reverse
        r = c * size + (r if c % 2 == 0 else size - 1 - r)
        size *= k
    return r + 1


def snake_unrank(shape: GridShape, t: int) -> Vertex:
    """The t-th vertex (1-based) of the snake path, in O(l) time."""
    n = shape.vertex_count
    if not 1 <= t <= n:
        raise ValueError(f"rank {t} out of range 1..{n}")
    k = shape.k
    r = t - 1
    coords = [0] * shape.l
    size = n // k
    for i in range(shape.l - 1, 0, -1):
        c, r = divmod(r, size)
        if c % 2 == 1:
            r = size - 1 - r
        coords[i] = c + 1
        size //= k
    coords[0] = r + 1
    return tuple(coords)


def snake_successor(shape: GridShape, v: Vertex) -> Vertex | None:
    """Next vertex on the snake path, or None at the final vertex."""
    t = snake_rank(shape, v)
    if t == shape.vertex_count:
        return None
    return snake_unrank(shape, t + 1)


def snake_predecessor(shape: GridShape, v: Vertex) -> Vertex | None:
    """Previous vertex on the snake path, or None at the first vertex."""
    t = snake_rank(shape, v)
    if t == 1:
        return None
    return snake_unrank(shape, t - 1)
