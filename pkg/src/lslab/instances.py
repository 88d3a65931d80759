"""Hard-instance generators: clocked self-avoiding walks and their functions.

Three families, all built on the walk space (x) clock space decomposition:

* ``hypercube-walk``: a uniform coordinate-flip walk on the first m bits of
  {0,1}^n while the remaining n-m bits advance one snake-path step per tick.
* ``grid-walk``: a +/-1 walk round-robining through the first m axes of [n]^d
  while the last d-m axes advance along their snake path.
* ``grid-blocks``: the block-threaded walk on [n']^d.  The grid is cut into
  [alpha]^(d-1) blocks indexed by [beta]^(d-1); the last axis sweeps back and
  forth inside a block as the in-block clock, and deterministic block-changing
  segments thread consecutive blocks along the snake path of the block grid,
  forming one long [alpha]^(d-1) x [L] walk-with-clock space.

Every generated trajectory is self-avoiding, every listed point is distinct,
and the induced function decreases strictly along the trajectory with its
unique local minimum at the endpoint.  A +/-1 step that a barrier would block
is re-aimed inward instead of standing still; a standing-still step would
duplicate a trajectory point and break both self-avoidance and the
membership-to-value reduction.

Seeding: one ``random.Random(seed)`` (Mersenne Twister) drives each
generation; the parameters plus the seed determine the instance byte for
byte.  Hypercube flips use ``randrange(m)`` (one call per tick) and sign
choices use ``randrange(2)`` mapped to -1/+1 (one call per step).

Instances are immutable after generation and safe to share across threads.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .errors import BudgetExceeded, InstanceFormatError
from .grid import (
    DEFAULT_SCAN_LIMIT,
    GridShape,
    Vertex,
    l1_distance,
    snake_rank,
    snake_successor,
    snake_unrank,
)

#: Generators refuse trajectories longer than this unless overridden.
DEFAULT_TRAJECTORY_LIMIT = 1 << 21

HYPERCUBE = "hypercube-walk"
GRID = "grid-walk"
BLOCKS = "grid-blocks"


@dataclass(frozen=True)
class BlockLayout:
    """Derived geometry of the block decomposition of [n']^d."""

    d: int
    alpha: int  # block side, floor(n^r)
    beta: int  # blocks per axis, floor(n^(1-r))
    nprime: int  # alpha * beta, the trimmed grid side
    sweep: int  # in-block clock length, n' - 2*alpha
    block_count: int  # beta^(d-1)
    iterations: int  # L = sweep * block_count
    stride: int  # value gap per tick, 4*alpha + 2

    @property
    def block_shape(self) -> GridShape:
        return GridShape(self.beta, self.d - 1)


def _floor_power(n: int, r: float) -> int:
    # floor(n^r) with a nudge so exact integer powers are not lost to
    # floating-point dust (e.g. 27^(2/3) evaluating to 8.999...).
    return int(math.floor(n**r + 1e-9))


def block_layout(n: int, d: int, r: float) -> BlockLayout:
    if d < 2:
        raise ValueError("block instances need d >= 2")
    if not 0.0 < r < 1.0:
        raise ValueError("block exponent r must lie strictly between 0 and 1")
    alpha = _floor_power(n, r)
    beta = _floor_power(n, 1.0 - r)
    if alpha < 2:
        raise ValueError(f"degenerate blocks: alpha={alpha} < 2 for n={n}, r={r}")
    if beta < 2:
        raise ValueError(f"degenerate block grid: beta={beta} < 2 for n={n}, r={r}")
    nprime = alpha * beta
    sweep = nprime - 2 * alpha
    if sweep < 1:
        raise ValueError(f"no in-block clock room: n'={nprime}, alpha={alpha}")
    block_count = beta ** (d - 1)
    return BlockLayout(
        d=d,
        alpha=alpha,
        beta=beta,
        nprime=nprime,
        sweep=sweep,
        block_count=block_count,
        iterations=sweep * block_count,
        stride=4 * alpha + 2,
    )


@dataclass(frozen=True, eq=False)
class WalkInstance:
    """A generated hard instance and its precomputed lookups.

    ``trajectory`` lists every visited vertex in order; all entries are
    pairwise distinct.  For the walk-with-clock families it holds exactly
    2(T+1) points and ``walk_positions[s]`` is the walk part after s steps,
    giving O(1) membership from the clock coordinate alone.  Block instances
    instead carry a full point -> value map (linear in trajectory length).
    """

    family: str
    n: int
    d: int | None
    m: int | None
    r: float | None
    seed: int | None
    shape: GridShape
    T: int
    steps: tuple[int, ...]
    start: Vertex
    endpoint: Vertex
    trajectory: tuple[Vertex, ...]
    walk_positions: tuple[Vertex, ...] | None = None
    block: BlockLayout | None = None
    value_by_vertex: dict | None = None

    @property
    def walk_dims(self) -> int:
        if self.m is None:
            raise ValueError("no walk/clock split for this family")
        return self.m

    @property
    def clock_shape(self) -> GridShape:
        return GridShape(self.shape.k, self.shape.l - self.walk_dims)

    @property
    def max_on_path_value(self) -> int:
        if self.family == BLOCKS:
            assert self.block is not None
            return self.block.stride * self.block.iterations
        return 2 * self.T


# ---------------------------------------------------------------------------
# walk-with-clock families
# ---------------------------------------------------------------------------


def _build_walk_instance(
    family: str,
    shape: GridShape,
    m: int,
    start_walk: Vertex,
    steps: tuple[int, ...],
    apply_step,
    n: int,
    d: int | None,
    seed: int | None,
) -> WalkInstance:
    clock_shape = GridShape(shape.k, shape.l - m)
    T = len(steps) - 1
    positions = [start_walk]
    w = start_walk
    for s in steps:
        w = apply_step(w, s)
        positions.append(w)
    trajectory = []
    for t in range(T + 1):
        clock = snake_unrank(clock_shape, t + 1)
        trajectory.append(positions[t] + clock)
        trajectory.append(positions[t + 1] + clock)
    return WalkInstance(
        family=family,
        n=n,
        d=d,
        m=m,
        r=None,
        seed=seed,
        shape=shape,
        T=T,
        steps=steps,
        start=trajectory[0],
        endpoint=trajectory[-1],
        trajectory=tuple(trajectory),
        walk_positions=tuple(positions),
    )


def _hypercube_step(w: Vertex, flip: int) -> Vertex:
    return w[:flip] + (3 - w[flip],) + w[flip + 1 :]


def _replay_hypercube(n: int, m: int, steps: tuple[int, ...], seed: int | None) -> WalkInstance:
    shape = GridShape(2, n)
    if any(not 0 <= s < m for s in steps):
        raise InstanceFormatError("flip index out of range for walk dimensions")
    return _build_walk_instance(
        HYPERCUBE, shape, m, (1,) * m, steps, _hypercube_step, n, None, seed
    )


def gen_hypercube_instance(
    n: int, m: int, seed: int, max_trajectory: int = DEFAULT_TRAJECTORY_LIMIT
) -> WalkInstance:
    """Flip-walk instance on {0,1}^n with an m-bit walk space.

    T = 2^(n-m) - 1 ticks; the walk starts at the all-zeros point and flips a
    uniformly random walk bit per tick while the clock advances one snake
    step.
    """
    if not 1 <= m < n:
        raise ValueError(f"walk dimensions must satisfy 1 <= m < n, got m={m}, n={n}")
    ticks = 1 << (n - m)
    if 2 * ticks > max_trajectory:
        raise BudgetExceeded(f"trajectory of {2 * ticks} points exceeds {max_trajectory}")
    rng = random.Random(seed)
    steps = tuple(rng.randrange(m) for _ in range(ticks))
    return _replay_hypercube(n, m, steps, seed)


def _grid_step_factory(n: int, m: int):
    def step(w: Vertex, signed_dim: int) -> Vertex:
        dim, sign = divmod(signed_dim, 2)
        delta = 1 if sign else -1
        c = w[dim] + delta
        if not 1 <= c <= n:
            c = w[dim] - delta  # barrier: re-aim inward, never stand still
        return w[:dim] + (c,) + w[dim + 1 :]

    return step


def _replay_grid(
    n: int, d: int, m: int, steps: tuple[int, ...], seed: int | None
) -> WalkInstance:
    shape = GridShape(n, d)
    if any(s not in (-1, 1) for s in steps):
        raise InstanceFormatError("grid steps must be signs -1/+1")
    packed = tuple((t % m) * 2 + (1 if s == 1 else 0) for t, s in enumerate(steps))
    inst = _build_walk_instance(
        GRID,
        shape,
        m,
        (n // 2,) * m,
        packed,
        _grid_step_factory(n, m),
        n,
        d,
        seed,
    )
    # store the caller-facing sign sequence, not the packed encoding
    object.__setattr__(inst, "steps", steps)
    return inst


def gen_grid_instance(
    n: int, d: int, m: int, seed: int, max_trajectory: int = DEFAULT_TRAJECTORY_LIMIT
) -> WalkInstance:
    """Round-robin +/-1 walk instance on [n]^d with an m-axis walk space.

    T = n^(d-m) - 1 ticks; all walk coordinates start at floor(n/2); tick t
    moves axis t mod m by a uniformly random sign, re-aimed inward at the
    grid border.
    """
    if not 1 <= m < d:
        raise ValueError(f"walk dimensions must satisfy 1 <= m < d, got m={m}, d={d}")
    if n < 2:
        raise ValueError("grid side must be at least 2")
    ticks = n ** (d - m)
    if 2 * ticks > max_trajectory:
        raise BudgetExceeded(f"trajectory of {2 * ticks} points exceeds {max_trajectory}")
    rng = random.Random(seed)
    steps = tuple(1 if rng.randrange(2) else -1 for _ in range(ticks))
    return _replay_grid(n, d, m, steps, seed)


# ---------------------------------------------------------------------------
# block-threaded family
# ---------------------------------------------------------------------------


def _replay_blocks(
    n: int, d: int, r: float, steps: tuple[int, ...], seed: int | None
) -> WalkInstance:
    lay = block_layout(n, d, r)
    if len(steps) != lay.iterations:
        raise InstanceFormatError(
            f"block instance needs {lay.iterations} signs, got {len(steps)}"
        )
    if any(s not in (-1, 1) for s in steps):
        raise InstanceFormatError("block steps must be signs -1/+1")
    shape = GridShape(lay.nprime, d)
    bshape = lay.block_shape
    stride = lay.stride
    L = lay.iterations

    x = [lay.alpha // 2] * (d - 1) + [lay.alpha + 1]
    blocks = [1] * (d - 1)
    trajectory: list[Vertex] = [tuple(x)]
    values: dict[Vertex, int] = {tuple(x): stride * L}

    def push(offset_value: int) -> None:
        p = tuple(x)
        trajectory.append(p)
        values[p] = offset_value

    for t in range(L):
        tick_base = stride * (L - t)
        sweep_dir = -1 if (t // lay.sweep) % 2 else 1
        axis = t % (d - 1)
        lo = (blocks[axis] - 1) * lay.alpha + 1
        hi = blocks[axis] * lay.alpha
        c = x[axis] + steps[t]
        if not lo <= c <= hi:
            c = x[axis] - steps[t]  # block border: re-aim inward
        x[axis] = c
        push(tick_base - 1)
        if (t + 1) % lay.sweep != 0:
            x[d - 1] += sweep_dir
            push(tick_base - 2)
        else:
            here = tuple(blocks)
            nxt = snake_successor(bshape, here)
            if nxt is None:
                break  # final tick of the last block; the walk ends here
            j = next(i for i in range(d - 1) if nxt[i] != here[i])
            b = nxt[j] - here[j]
            # segment lengths are frozen at entry; the coordinate is not
            # re-read between the three legs
            span = lay.alpha + 1 - (x[j] - (blocks[j] - 1) * lay.alpha)
            o = 1
            for _ in range(span):
                x[d - 1] += sweep_dir
                o += 1
                push(tick_base - o)
            for _ in range(2 * span - 1):
                x[j] += b
                o += 1
                push(tick_base - o)
            for _ in range(span):
                x[d - 1] -= sweep_dir
                o += 1
                push(tick_base - o)
            blocks[j] += b

    return WalkInstance(
        family=BLOCKS,
        n=n,
        d=d,
        m=None,
        r=r,
        seed=seed,
        shape=shape,
        T=L - 1,
        steps=steps,
        start=trajectory[0],
        endpoint=trajectory[-1],
        trajectory=tuple(trajectory),
        block=lay,
        value_by_vertex=values,
    )


def gen_block_instance(
    n: int, d: int, r: float, seed: int, max_trajectory: int = DEFAULT_TRAJECTORY_LIMIT
) -> WalkInstance:
    """Block-threaded walk instance on [n']^d with block exponent r.

    One uniformly random sign per tick drives the in-block walk; the last
    axis sweeps alternately up and down as the in-block clock, and block
    changes follow the snake path of the block grid.
    """
    lay = block_layout(n, d, r)
    if 4 * lay.iterations > max_trajectory:
        raise BudgetExceeded(
            f"trajectory of about {4 * lay.iterations} points exceeds {max_trajectory}"
        )
    rng = random.Random(seed)
    steps = tuple(1 if rng.randrange(2) else -1 for _ in range(lay.iterations))
    return _replay_blocks(n, d, r, steps, seed)


# ---------------------------------------------------------------------------
# the induced function
# ---------------------------------------------------------------------------


def _clock_tick(inst: WalkInstance, v: Vertex) -> int:
    return snake_rank(inst.clock_shape, v[inst.walk_dims :]) - 1


def instance_membership(inst: WalkInstance, v: Vertex) -> bool:
    """Whether v lies on the trajectory; O(1) from the clock coordinate."""
    inst.shape.require(v)
    if inst.family == BLOCKS:
        assert inst.value_by_vertex is not None
        return v in inst.value_by_vertex
    assert inst.walk_positions is not None
    t = _clock_tick(inst, v)
    w = v[: inst.walk_dims]
    return w == inst.walk_positions[t] or w == inst.walk_positions[t + 1]


def instance_value(inst: WalkInstance, v: Vertex) -> int:
    """The induced function: strictly decreasing along the trajectory, with
    every off-trajectory vertex valued by its distance to the start plus twice
    the on-trajectory ceiling (so the descent funnels onto the path)."""
    inst.shape.require(v)
    if inst.family == BLOCKS:
        assert inst.value_by_vertex is not None
        hit = inst.value_by_vertex.get(v)
        if hit is not None:
            return hit
        return l1_distance(v, inst.start) + 2 * inst.max_on_path_value
    assert inst.walk_positions is not None
    t = _clock_tick(inst, v)
    w = v[: inst.walk_dims]
    if w == inst.walk_positions[t + 1]:
        return 2 * (inst.T - t) - 1
    if w == inst.walk_positions[t]:
        return 2 * (inst.T - t)
    return l1_distance(v, inst.start) + 2 * inst.T


def instance_endpoint(inst: WalkInstance) -> Vertex:
    """The final trajectory point, the unique local minimum of the function."""
    return inst.endpoint


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    self_avoiding: bool
    unique_local_min: bool
    membership_consistent: bool
    local_min_count: int
    minimum: Vertex | None

    @property
    def ok(self) -> bool:
        return self.self_avoiding and self.unique_local_min and self.membership_consistent


def verify_instance(
    inst: WalkInstance, scan_limit: int = DEFAULT_SCAN_LIMIT
) -> VerificationReport:
    """Exhaustively scan the domain: exactly one local minimum located at the
    endpoint, pairwise-distinct trajectory points, and membership answers that
    agree with the stored point set.  Refuses (rather than sampling) when the
    domain exceeds the scan limit."""
    n_vertices = inst.shape.vertex_count
    if n_vertices > scan_limit:
        raise BudgetExceeded(
            f"domain of {n_vertices} vertices exceeds scan limit {scan_limit}"
        )
    points = inst.trajectory
    point_set = set(points)
    self_avoiding = len(point_set) == len(points)

    values: dict[Vertex, int] = {}
    membership_consistent = True
    for v in inst.shape.iter_vertices(scan_limit):
        values[v] = instance_value(inst, v)
        if instance_membership(inst, v) != (v in point_set):
            membership_consistent = False

    k = inst.shape.k
    minima = []
    for v, fv in values.items():
        is_min = True
        for i, c in enumerate(v):  # inline neighbor walk so most vertices exit early
            if c > 1 and values[v[:i] + (c - 1,) + v[i + 1 :]] < fv:
                is_min = False
                break
            if c < k and values[v[:i] + (c + 1,) + v[i + 1 :]] < fv:
                is_min = False
                break
        if is_min:
            minima.append(v)
            if len(minima) > 8:
                break

    unique = len(minima) == 1 and minima[0] == inst.endpoint
    return VerificationReport(
        self_avoiding=self_avoiding,
        unique_local_min=unique,
        membership_consistent=membership_consistent,
        local_min_count=len(minima),
        minimum=minima[0] if len(minima) == 1 else None,
    )


# ---------------------------------------------------------------------------
# parameter recommendations
# ---------------------------------------------------------------------------


def recommended_params(
    family: str, mode: str, n: int | None = None, d: int | None = None
) -> dict:
    """Walk-space sizes and block exponents used by the lower-bound setups.

    All logarithms are base 2.  Returns {"m": ...} for the walk-with-clock
    families and {"r": ...} for blocks.
    """
    if mode not in ("randomized", "quantum"):
        raise ValueError(f"unknown mode {mode!r}")
    if family == HYPERCUBE:
        if n is None or n < 2:
            raise ValueError("hypercube recommendation needs n >= 2")
        if mode == "randomized":
            m = math.floor((n + math.log2(n)) / 2)
        else:
            m = math.floor((2 * n - math.log2(n)) / 3)
        m = max(1, min(n - 1, m))
        return {"m": m}
    if family == GRID:
        if d is None or d < 2:
            raise ValueError("grid recommendation needs d >= 2")
        if mode == "randomized":
            if d > 4:
                m = -(-d // 2)
            elif d in (3, 4):
                m = 2
            else:
                m = 1
        else:
            if d > 6:
                m = round(2 * d / 3)
            elif d == 6:
                m = 4
            elif d in (3, 4, 5):
                m = d - 2
            else:
                m = 1
        return {"m": m}
    if family == BLOCKS:
        if d is None or d < 2:
            raise ValueError("block recommendation needs d >= 2")
        if mode == "randomized":
            if d >= 4:
                r = d / (2 * d - 2)
            elif d == 3:
                if n is None or n < 4:
                    raise ValueError("the d=3 randomized exponent needs n >= 4")
                r = 3 / 4 - math.log2(math.log2(n)) / (4 * math.log2(n))
            else:
                r = 2 / 3
        else:
            if d >= 6:
                r = 2 * d / (3 * d - 3)
            else:
                r = d / (d + 1)
        return {"r": r}
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# clock metadata and the on-path value decode (no trajectory access)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClockMeta:
    """What a value-query simulator may know: parameters, start, clock
    structure, trajectory length -- never the trajectory itself."""

    family: str
    shape: GridShape
    walk_dims: int | None
    start: Vertex
    T: int
    block: BlockLayout | None = None

    @property
    def clock_shape(self) -> GridShape:
        assert self.walk_dims is not None
        return GridShape(self.shape.k, self.shape.l - self.walk_dims)

    @property
    def max_on_path_value(self) -> int:
        if self.family == BLOCKS:
            assert self.block is not None
            return self.block.stride * self.block.iterations
        return 2 * self.T


def clock_metadata(inst: WalkInstance) -> ClockMeta:
    return ClockMeta(
        family=inst.family,
        shape=inst.shape,
        walk_dims=inst.m,
        start=inst.start,
        T=inst.T,
        block=inst.block,
    )


def _block_moves_parity(tick: int, block_index: int) -> int:
    # walk-coordinate moves after the point following tick `tick` inside
    # block `block_index`: one per tick plus one odd crossing leg per
    # completed segment
    return (tick + block_index) % 2


def block_on_path_value(meta: ClockMeta, v: Vertex) -> int:
    """Trajectory value of an on-path vertex of a d=2 block instance, decoded
    from coordinates alone.

    In-block rows pin the tick; the walk-move parity of the column separates
    the pre-sweep point from the post-sweep point of the row.  Margin rows
    belong to block-changing segments, whose three legs are mutually exclusive
    readings of (column, row), so the position within the segment is forced.
    """
    lay = meta.block
    assert lay is not None
    if lay.d != 2:
        raise ValueError("coordinate decode of block values is supported for d=2 only")
    A, NP, W, L = lay.alpha, lay.nprime, lay.sweep, lay.iterations
    stride = lay.stride
    c, rw = v
    if v == meta.start:
        return stride * L
    col_parity = abs(c - meta.start[0]) % 2

    if A < rw <= NP - A:
        k = (c + A - 1) // A
        base = (k - 1) * W
        lw = (rw - (A + 1)) if k % 2 == 1 else (NP - A - rw)
        candidates: list[tuple[int, int, int]] = []
        if 0 <= lw < W and base + lw < L:
            t = base + lw
            candidates.append((t, 1, _block_moves_parity(t, k)))
        if lw >= 1:
            t = base + lw - 1
            candidates.append((t, 2, _block_moves_parity(t, k)))
        if lw == 0 and k >= 2:
            span = c - (k - 1) * A
            t = base - 1
            candidates.append((t, 4 * span, (_block_moves_parity(t, k - 1) + span * 2 - 1) % 2))
        matches = [(t, o) for (t, o, par) in candidates if par == col_parity]
        if len(matches) != 1:
            raise RuntimeError("block geometry decode failed; oracle inconsistent")
        t, o = matches[0]
        return stride * (L - t) - o

    # margin row: the point sits on a block-changing segment
    top = rw > NP - A
    srow = rw - (NP - A) if top else (A + 1) - rw
    want = 1 if top else 0  # parity of the block a matching change leaves
    kc = (c + A - 1) // A
    readings: list[tuple[int, int]] = []
    for k in (kc, kc - 1):
        if k < 1 or k > lay.block_count - 1 or k % 2 != want:
            continue
        if k == kc:
            span = k * A + 1 - c  # outbound leg: column equals the entry column
            if 1 <= span <= A and srow <= span:
                readings.append((k, 1 + srow))
        else:
            span = c - k * A  # return leg: column equals the exit column
            if 1 <= span <= A and srow <= span - 1:
                readings.append((k, 4 * span - srow))
        span = srow  # crossing leg: row pins the segment depth
        x_start = k * A + 1 - span
        x_end = k * A + span
        if x_start + 1 <= c <= x_end:
            readings.append((k, 1 + span + (c - x_start)))
    if len(readings) != 1:
        raise RuntimeError("block segment decode failed; oracle inconsistent")
    k, o = readings[0]
    t = k * W - 1
    return stride * (L - t) - o


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------

FORMAT_VERSION = 1


def instance_to_dict(inst: WalkInstance) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "family": inst.family,
        "params": {
            "n": inst.n,
            "d": inst.d,
            "m": inst.m,
            "r": inst.r,
            "seed": inst.seed,
        },
        "T": inst.T,
        "start": list(inst.start),
        "step_sequence": list(inst.steps),
        "endpoint": list(inst.endpoint),
    }


def instance_from_dict(data: dict) -> WalkInstance:
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise InstanceFormatError(f"unknown format_version {version!r}")
    try:
        family = data["family"]
        params = data["params"]
        steps = tuple(data["step_sequence"])
        start = tuple(data["start"])
        endpoint = tuple(data["endpoint"])
        n = params["n"]
        seed = params.get("seed")
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"missing or malformed field: {exc}") from exc
    if family == HYPERCUBE:
        inst = _replay_hypercube(n, params["m"], steps, seed)
    elif family == GRID:
        inst = _replay_grid(n, params["d"], params["m"], steps, seed)
    elif family == BLOCKS:
        inst = _replay_blocks(n, params["d"], params["r"], steps, seed)
    else:
        raise InstanceFormatError(f"unknown family {family!r}")
    if inst.start != start or inst.endpoint != endpoint:
        raise InstanceFormatError("stored endpoints do not match the replayed walk")
    return inst


def save_instance(inst: WalkInstance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(inst), fh, indent=1)
        fh.write("\n")


def load_instance(path: str) -> WalkInstance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    return instance_from_dict(data)
