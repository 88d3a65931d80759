"""Local-search solvers under query accounting.

Three algorithms: plain steepest descent, sample-then-descend (random
sampling for the starting point, optionally charged at the quantum
minimum-finding rate), and a divide-and-conquer search for two-dimensional
grids that shrinks a working region geometrically, testing candidate
boundary spheres with a Grover-rate existence check before committing.

Quantum subroutines run as classically exact stand-ins whose cost is charged
by formula: minimum finding over S values charges ceil(sqrt(S)) *
ceil(log2(1/eps)) and an existence test over W charges ceil(sqrt(|W|)) *
ceil(log2(1/eps)) (big-O constants pinned at 1 so cross-run comparisons are
bit-stable).  In ``faithful`` mode the stand-ins also inject failures at
their nominal error rates; in ``exact`` mode they never err and only the
algorithm's own sampling randomness remains.

All logarithms are base 2 and ceilings sit exactly where the cost formulas
put them.  Ties anywhere break toward the lowest snake rank so replays are
deterministic.  A solver run is single-threaded and owns its oracle and
ledger; independent runs with distinct oracles may execute in parallel.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass

from .grid import GridShape, Vertex, l1_distance, neighbors, snake_rank, snake_unrank
from .oracles import QueryLedger, ValueOracle


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one solver run.

    ``is_local_min`` is established by an uncharged post-hoc scan of the
    found vertex's neighborhood, never assumed; a success outcome always
    carries a verified local minimum.
    """

    found: Vertex
    outcome: str  # "success" | "fail"
    is_local_min: bool
    rounds: int
    classical_queries: int
    charged_quantum_queries: int
    phase_breakdown: dict
    trace: tuple | None = None

    @property
    def total_charged_queries(self) -> int:
        return self.classical_queries + self.charged_quantum_queries


def verify_local_min(oracle: ValueOracle, v: Vertex) -> bool:
    """Uncharged exhaustive neighbor check of local minimality."""
    fv = oracle.peek(v)
    return all(oracle.peek(w) >= fv for w in neighbors(oracle.shape, v))


class _Memo:
    """Charged value reads with caching: each vertex costs one query ever."""

    def __init__(self, oracle: ValueOracle) -> None:
        self.oracle = oracle
        self.values: dict[Vertex, int] = {}

    def __call__(self, v: Vertex) -> int:
        hit = self.values.get(v)
        if hit is None:
            hit = self.values[v] = self.oracle.query(v)
        return hit


def _descend(oracle: ValueOracle, start: Vertex, memo: _Memo | None = None):
    """Follow the decreasing path: repeatedly move to the minimum-value
    neighbor while it improves strictly.  Returns (local minimum, moves)."""
    shape = oracle.shape
    val = memo if memo is not None else _Memo(oracle)
    v = start
    fv = val(v)
    moves = 0
    while True:
        best = None
        best_key = None
        for w in neighbors(shape, v):
            key = (val(w), snake_rank(shape, w))
            if best_key is None or key < best_key:
                best_key = key
                best = w
        if best is None or best_key[0] >= fv:
            return v, moves
        v, fv = best, best_key[0]
        moves += 1


def steepest_descent(oracle: ValueOracle, start: Vertex) -> SolveResult:
    """Generic descent from ``start``; every probe is a classical query."""
    oracle.shape.require(start)
    with oracle.ledger.phase("descent"):
        found, moves = _descend(oracle, start)
    return SolveResult(
        found=found,
        outcome="success",
        is_local_min=verify_local_min(oracle, found),
        rounds=moves,
        classical_queries=oracle.ledger.classical_queries,
        charged_quantum_queries=oracle.ledger.charged_quantum_queries,
        phase_breakdown=oracle.ledger.breakdown(),
    )


def durr_hoyer_min(
    values,
    eps: float,
    ledger: QueryLedger,
    rng: random.Random | None = None,
    faithful: bool = False,
) -> int:
    """Index of the minimum of ``values`` at the quantum-search charge rate.

    Classically exact (ties break to the lowest index); charges
    ceil(sqrt(S)) * ceil(log2(1/eps)) quantum queries for S values.  In
    faithful mode the call instead returns a uniformly random non-minimal
    index with probability eps (when a non-minimal index exists).
    """
    values = list(values)
    if not values:
        raise ValueError("minimum of an empty sequence")
    size = len(values)
    ledger.record_quantum(math.ceil(math.sqrt(size)) * math.ceil(math.log2(1 / eps)))
    best = min(range(size), key=lambda i: (values[i], i))
    if faithful:
        if rng is None:
            raise ValueError("faithful mode needs an rng")
        if rng.random() < eps:
            losers = [i for i in range(size) if values[i] != values[best]]
            if losers:
                return rng.choice(losers)
    return best


def grover_exists(
    items,
    predicate,
    eps: float,
    ledger: QueryLedger,
    rng: random.Random | None = None,
    faithful: bool = False,
) -> bool:
    """Whether any item satisfies the predicate, at the Grover charge rate.

    Classically exact; charges ceil(sqrt(|W|)) * ceil(log2(1/eps)) quantum
    queries, nothing for an empty collection (the vacuous answer is False).
    In faithful mode the answer is flipped with probability eps.
    """
    items = list(items)
    if not items:
        return False
    ledger.record_quantum(
        math.ceil(math.sqrt(len(items))) * math.ceil(math.log2(1 / eps))
    )
    answer = any(predicate(w) for w in items)
    if faithful:
        if rng is None:
            raise ValueError("faithful mode needs an rng")
        if rng.random() < eps:
            answer = not answer
    return answer


def sample_then_descend(
    oracle: ValueOracle,
    samples: int,
    seed: int,
    charging: str = "classical",
    eps: float = 0.25,
) -> SolveResult:
    """Sample vertices uniformly with replacement, descend from the best.

    Classical charging queries each sampled value; quantum charging reads
    the samples uncharged and applies the minimum-finding charge formula
    (by default at error budget 1/4).
    """
    shape = oracle.shape
    n_vertices = shape.vertex_count
    if not 1 <= samples <= n_vertices:
        raise ValueError(f"sample count must lie in 1..{n_vertices}")
    if charging not in ("classical", "quantum"):
        raise ValueError(f"unknown charging {charging!r}")
    rng = random.Random(seed)
    drawn = [snake_unrank(shape, rng.randrange(n_vertices) + 1) for _ in range(samples)]
    memo = _Memo(oracle)
    with oracle.ledger.phase("sample"):
        if charging == "classical":
            values = [memo(v) for v in drawn]
            best = min(range(samples), key=lambda i: (values[i], i))
        else:
            values = [oracle.peek(v) for v in drawn]
            best = durr_hoyer_min(values, eps, oracle.ledger)
            memo.values[drawn[best]] = values[best]
    with oracle.ledger.phase("descent"):
        found, moves = _descend(oracle, drawn[best], memo)
    return SolveResult(
        found=found,
        outcome="success",
        is_local_min=verify_local_min(oracle, found),
        rounds=moves,
        classical_queries=oracle.ledger.classical_queries,
        charged_quantum_queries=oracle.ledger.charged_quantum_queries,
        phase_breakdown=oracle.ledger.breakdown(),
    )


# ---------------------------------------------------------------------------
# planar divide-and-conquer search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegionState:
    """A working region of [n]^2: the grid intersected with a conjunction of
    closed l1 balls, one added per completed round.

    In rotated coordinates (u, w) = (x+y, x-y) each ball is an axis-aligned
    square, so the conjunction is a rectangle and exact counting, uniform
    sampling, and sphere filtering are all O(n) or better.
    """

    n: int
    constraints: tuple[tuple[Vertex, int], ...] = ()
    round_index: int = 0
    radius: int | None = None
    anchor: Vertex | None = None

    def with_ball(self, center: Vertex, radius: int) -> "RegionState":
        return RegionState(
            n=self.n,
            constraints=self.constraints + ((center, radius),),
            round_index=self.round_index + 1,
            radius=radius,
            anchor=center,
        )

    def contains(self, v: Vertex) -> bool:
        if not (1 <= v[0] <= self.n and 1 <= v[1] <= self.n):
            return False
        return all(l1_distance(v, c) <= r for c, r in self.constraints)

    def _uw_rect(self) -> tuple[int, int, int, int]:
        ulo, uhi = 2, 2 * self.n
        wlo, whi = 1 - self.n, self.n - 1
        for (cx, cy), r in self.constraints:
            cu, cw = cx + cy, cx - cy
            ulo, uhi = max(ulo, cu - r), min(uhi, cu + r)
            wlo, whi = max(wlo, cw - r), min(whi, cw + r)
        return ulo, uhi, wlo, whi

    def _w_range(self, u: int) -> tuple[int, int]:
        _, _, wlo, whi = self._uw_rect()
        lo = max(wlo, 2 - u, u - 2 * self.n)
        hi = min(whi, u - 2, 2 * self.n - u)
        if lo > hi:
            return 1, 0
        # w must share u's parity for (x, y) to be integral
        if (lo - u) % 2:
            lo += 1
        if (hi - u) % 2:
            hi -= 1
        return lo, hi

    def count(self) -> int:
        ulo, uhi, _, _ = self._uw_rect()
        total = 0
        for u in range(ulo, uhi + 1):
            lo, hi = self._w_range(u)
            if lo <= hi:
                total += (hi - lo) // 2 + 1
        return total

    def sampler(self, rng: random.Random):
        """Exact uniform sampling via per-diagonal cumulative counts."""
        ulo, uhi, _, _ = self._uw_rect()
        us: list[int] = []
        cums: list[int] = []
        total = 0
        for u in range(ulo, uhi + 1):
            lo, hi = self._w_range(u)
            if lo <= hi:
                total += (hi - lo) // 2 + 1
                us.append(u)
                cums.append(total)
        if total == 0:
            raise ValueError("empty region")

        def draw() -> Vertex:
            target = rng.randrange(total)
            idx = bisect_right(cums, target)
            u = us[idx]
            before = cums[idx - 1] if idx else 0
            lo, _ = self._w_range(u)
            w = lo + 2 * (target - before)
            return ((u + w) // 2, (u - w) // 2)

        return draw, total

    def sphere(self, center: Vertex, radius: int) -> list[Vertex]:
        """Region vertices at exact l1 distance ``radius`` from center."""
        if radius < 0:
            raise ValueError("negative radius")
        cx, cy = center
        out = []
        for dx in range(-radius, radius + 1):
            rem = radius - abs(dx)
            for dy in (rem, -rem) if rem else (0,):
                v = (cx + dx, cy + dy)
                if self.contains(v):
                    out.append(v)
        return out

    def vertices(self) -> list[Vertex]:
        """Direct enumeration; for tests and small regions only."""
        out = []
        ulo, uhi, _, _ = self._uw_rect()
        for u in range(ulo, uhi + 1):
            lo, hi = self._w_range(u)
            for w in range(lo, hi + 1, 2):
                out.append(((u + w) // 2, (u - w) // 2))
        return out

    def boundary(self) -> set[Vertex]:
        """Region vertices adjacent to a grid vertex outside the region."""
        shape = GridShape(self.n, 2) if self.n >= 2 else None
        out = set()
        for v in self.vertices():
            if shape is None:
                continue
            for w in neighbors(shape, v):
                if not self.contains(w):
                    out.add(v)
                    break
        return out


def l1_sphere(center: Vertex, radius: int, region: RegionState) -> list[Vertex]:
    """All region vertices at exact l1 distance ``radius`` from ``center``."""
    return region.sphere(center, radius)


@dataclass(frozen=True)
class RoundRecord:
    index: int
    region_size: int
    sample_size: int
    anchor: Vertex
    anchor_value: int
    chosen_radius: int | None
    tries_used: int
    region: RegionState


def grid2d_quantum(
    oracle: ValueOracle,
    seed: int,
    mode: str = "exact",
    eps: float | None = None,
    eps1: float | None = None,
    eps2: float | None = None,
    eps3: float | None = None,
    eps4: float | None = None,
    collect_trace: bool = False,
) -> SolveResult:
    """Divide-and-conquer local search on [n]^2 with charged quantum phases.

    Rounds run while the working radius exceeds sqrt(n), and are capped at
    floor(log2 n) so the round bound holds deterministically (the nominal
    3/4 shrink alone does not force it); a capped exit only lengthens the
    final classical descent, never the answer's correctness.  Per round:
    sample ceil((4|U|/m) log2(1/eps1)) vertices from the region, take their
    minimum at the quantum-minimum charge (error eps2), keep the better of
    the old and new anchors, then try up to ceil(log2(1/eps3)) radii drawn
    from [floor(m/4), ceil(3m/4)], accepting the first whose region sphere
    contains nothing below the anchor (an existence test at the Grover
    charge, error eps4).  Exhausting the tries reports failure; otherwise
    the region shrinks to the accepted ball and, after the loop, a classical
    descent from the anchor finishes the job.

    Defaults: eps = 1/(2 log2 n), eps1 = eps2 = eps3 = eps/4 and
    eps4 = eps/(4 log2(4/eps)); any of the five may be overridden.
    """
    shape = oracle.shape
    if shape.l != 2:
        raise ValueError("grid2d_quantum runs on two-dimensional grids")
    n = shape.k
    if mode not in ("exact", "faithful"):
        raise ValueError(f"unknown mode {mode!r}")
    faithful = mode == "faithful"
    rng = random.Random(seed)
    ledger = oracle.ledger

    if eps is None:
        eps = 1 / (2 * math.log2(n)) if n > 1 else 0.25
    eps1 = eps / 4 if eps1 is None else eps1
    eps2 = eps / 4 if eps2 is None else eps2
    eps3 = eps / 4 if eps3 is None else eps3
    eps4 = eps / (4 * math.log2(4 / eps)) if eps4 is None else eps4

    region = RegionState(n=n)
    radius = n
    anchor: Vertex | None = None
    anchor_value: int | None = None
    tries_budget = math.ceil(math.log2(1 / eps3))
    round_cap = math.floor(math.log2(n)) if n > 1 else 0
    rounds = 0
    trace: list[RoundRecord] = []
    failed = False

    while radius > math.sqrt(n) and rounds < round_cap:
        draw, region_size = region.sampler(rng)
        sample_size = math.ceil(4 * region_size / radius * math.log2(1 / eps1))
        with ledger.phase("sample-min"):
            drawn = [draw() for _ in range(sample_size)]
            values = [oracle.peek(v) for v in drawn]
            best = durr_hoyer_min(values, eps2, ledger, rng=rng, faithful=faithful)
        candidate, candidate_value = drawn[best], values[best]
        if anchor is None or not anchor_value < candidate_value:
            anchor, anchor_value = candidate, candidate_value
        chosen = None
        tries = 0
        with ledger.phase("sphere-test"):
            for _ in range(tries_budget):
                tries += 1
                m_new = rng.randint(radius // 4, math.ceil(3 * radius / 4))
                sphere = region.sphere(anchor, m_new)
                below = grover_exists(
                    sphere,
                    lambda w: oracle.peek(w) < anchor_value,
                    eps4,
                    ledger,
                    rng=rng,
                    faithful=faithful,
                )
                if not below:
                    chosen = m_new
                    break
        if collect_trace:
            trace.append(
                RoundRecord(
                    index=rounds,
                    region_size=region_size,
                    sample_size=sample_size,
                    anchor=anchor,
                    anchor_value=anchor_value,
                    chosen_radius=chosen,
                    tries_used=tries,
                    region=region,
                )
            )
        if chosen is None:
            failed = True
            break
        region = region.with_ball(anchor, chosen)
        radius = chosen
        rounds += 1

    # grids have side >= 2, so n > sqrt(n) and the loop ran at least once
    assert anchor is not None and anchor_value is not None

    if failed:
        found = anchor
    else:
        with ledger.phase("descent"):
            found, _ = _descend(oracle, anchor)

    return SolveResult(
        found=found,
        outcome="fail" if failed else "success",
        is_local_min=verify_local_min(oracle, found),
        rounds=rounds,
        classical_queries=ledger.classical_queries,
        charged_quantum_queries=ledger.charged_quantum_queries,
        phase_breakdown=ledger.breakdown(),
        trace=tuple(trace) if collect_trace else None,
    )
