"""Reachability between two matrices sharing margins.

Whether A' can be reached from A by positive switches alone is governed by
the difference M = A' - A.  M always has a unique integer decomposition
over the unitary switching matrices; its coefficient grid T is computed by
2-D prefix sums.  Non-negativity of T is necessary for reachability
(condition i).  Two further conditions on the level sets of T (the
polyominoes P_i = cells with t >= i) are jointly sufficient:

  (ii)  every connected component of every P_i is simply connected,
  (iii) orthogonally or diagonally adjacent cells of T differ by at most 1.

When (i)-(iii) hold, a directed path is built constructively by repeatedly
locating a motif rectangle on the contour of a top-level component and
switching the checkerboard found at its corners.  Outside that regime a
sound greedy heuristic is tried, then exhaustive BFS on small classes.

T-grid cells are 1-based: cell (i, k) corresponds to the unitary switch
(i, i+1, k, k+1).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import binmat
from .binmat import NEGATIVE, POSITIVE, BinaryMatrix, Switch
from .errors import (
    DimensionMismatch,
    InternalInvariantViolation,
    MarginMismatch,
    MotifNotFound,
)

IDENTICAL = "Identical"
UNREACHABLE_CONDITION_I = "UnreachableConditionI"
REACHABLE_CONSTRUCTIVE = "ReachableConstructive"
REACHABLE_HEURISTIC = "ReachableHeuristic"
REACHABLE_EXHAUSTIVE = "ReachableExhaustive"
UNREACHABLE_EXHAUSTIVE = "UnreachableExhaustive"
UNKNOWN = "Unknown"

REACHABLE_STATUSES = frozenset(
    {IDENTICAL, REACHABLE_CONSTRUCTIVE, REACHABLE_HEURISTIC, REACHABLE_EXHAUSTIVE}
)
UNREACHABLE_STATUSES = frozenset({UNREACHABLE_CONDITION_I, UNREACHABLE_EXHAUSTIVE})

DEFAULT_BFS_CAP = 10**6


class DiffMatrix:
    """Difference A' - A of two matrices with equal margins.

    Entries lie in {-1, 0, 1} and every row and column sums to zero.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"expected a non-empty 2-D array, got shape {arr.shape}")
        if not np.isin(arr, (-1, 0, 1)).all():
            raise ValueError("difference entries must be -1, 0 or 1")
        if arr.sum(axis=1).any() or arr.sum(axis=0).any():
            raise ValueError("difference rows and columns must sum to zero")
        arr.setflags(write=False)
        self.entries = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "DiffMatrix":
        obj = object.__new__(cls)
        arr.setflags(write=False)
        obj.entries = arr
        return obj

    @property
    def p(self) -> int:
        return self.entries.shape[0]

    @property
    def q(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other):
        if not isinstance(other, DiffMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            (self.entries == other.entries).all()
        )

    def __hash__(self):
        return hash((self.entries.shape, self.entries.tobytes()))


def diff(A: BinaryMatrix, A2: BinaryMatrix) -> DiffMatrix:
    """M = A2 - A.  Raises unless shapes and margins agree."""
    if A.bits.shape != A2.bits.shape:
        raise DimensionMismatch(
            f"shapes differ: {A.bits.shape} vs {A2.bits.shape}"
        )
    if (A.row_sums != A2.row_sums).any() or (A.col_sums != A2.col_sums).any():
        raise MarginMismatch("matrices have different row or column sums")
    return DiffMatrix._wrap((A2.bits - A.bits).astype(np.int8))


@dataclass(frozen=True, eq=False)
class TGrid:
    """Coefficients of the unitary decomposition of a difference matrix.

    ``values`` has shape (p-1, q-1); entry [i-1, k-1] is the coefficient of
    the unitary switch (i, i+1, k, k+1).  The decomposition exists over the
    integers for every valid difference; condition (i) is ``nonneg``.
    """

    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def nonneg(self) -> bool:
        return bool((self.values >= 0).all())

    @property
    def max(self) -> int:
        return int(self.values.max()) if self.values.size else 0

    @property
    def total(self) -> int:
        return int(self.values.sum()) if self.values.size else 0

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.values]


def compute_T(M: DiffMatrix) -> TGrid:
    """Unique decomposition coefficients via 2-D prefix sums.

    t_ik = sum of m_ab over a <= i, b <= k.  Because every row and column
    of M sums to zero, the zero-extended border relation
    m_ij = t_ij + t_(i-1)(j-1) - t_i(j-1) - t_(i-1)j holds identically.
    """
    ps = M.entries.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
    values = ps[: M.p - 1, : M.q - 1].copy()
    return TGrid(values)


def reconstruct_diff(T: TGrid, p: int, q: int) -> DiffMatrix:
    """Rebuild M from T through the four-term corner relation."""
    if T.values.shape != (p - 1, q - 1):
        raise DimensionMismatch(
            f"T of shape {T.values.shape} does not fit a {p}x{q} difference"
        )
    ext = np.zeros((p + 1, q + 1), dtype=np.int64)
    ext[1:p, 1:q] = T.values
    m = ext[1:, 1:] + ext[:-1, :-1] - ext[1:, :-1] - ext[:-1, 1:]
    return DiffMatrix(m.astype(np.int8))


# ---------------------------------------------------------------------------
# Polyomino levels
# ---------------------------------------------------------------------------

Cell = tuple[int, int]

_ORTHO = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class PolyominoLevel:
    """Level set P_i: cells of the T-grid with coefficient >= i.

    ``components`` partitions the cells under 4-adjacency, ordered by their
    smallest cell; ``holes[c]`` counts the bounded complement regions
    enclosed by component ``c``.
    """

    level: int
    cells: frozenset[Cell]
    components: tuple[frozenset[Cell], ...]
    holes: tuple[int, ...]

    @property
    def simply_connected(self) -> bool:
        return all(h == 0 for h in self.holes)


def _components(cells: set[Cell]) -> list[frozenset[Cell]]:
    remaining = set(cells)
    comps = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        queue = deque([seed])
        remaining.remove(seed)
        while queue:
            r, c = queue.popleft()
            for dr, dc in _ORTHO:
                nxt = (r + dr, c + dc)
                if nxt in remaining:
                    remaining.remove(nxt)
                    comp.add(nxt)
                    queue.append(nxt)
        comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps


def count_holes(component: frozenset[Cell]) -> int:
    """Bounded complement regions inside the component's bounding box.

    Flood fill of the complement from a 1-cell border; complement regions
    never reached from the border are holes.
    """
    rows = [r for r, _ in component]
    cols = [c for _, c in component]
    r0, r1 = min(rows) - 1, max(rows) + 1
    c0, c1 = min(cols) - 1, max(cols) + 1
    outside: set[Cell] = set()
    queue = deque([(r0, c0)])
    outside.add((r0, c0))
    while queue:
        r, c = queue.popleft()
        for dr, dc in _ORTHO:
            nxt = (r + dr, c + dc)
            if (
                r0 <= nxt[0] <= r1
                and c0 <= nxt[1] <= c1
                and nxt not in outside
                and nxt not in component
            ):
                outside.add(nxt)
                queue.append(nxt)
    holes = 0
    seen: set[Cell] = set()
    for r in range(r0, r1 + 1):
        for c in range(c0, c1 + 1):
            cell = (r, c)
            if cell in component or cell in outside or cell in seen:
                continue
            holes += 1
            queue = deque([cell])
            seen.add(cell)
            while queue:
                rr, cc = queue.popleft()
                for dr, dc in _ORTHO:
                    nxt = (rr + dr, cc + dc)
                    if (
                        r0 <= nxt[0] <= r1
                        and c0 <= nxt[1] <= c1
                        and nxt not in seen
                        and nxt not in component
                        and nxt not in outside
                    ):
                        seen.add(nxt)
                        queue.append(nxt)
    return holes


def _levels_of_values(values: np.ndarray) -> list[PolyominoLevel]:
    levels = []
    top = int(values.max()) if values.size else 0
    for lvl in range(1, top + 1):
        cells = {
            (int(r) + 1, int(c) + 1) for r, c in np.argwhere(values >= lvl)
        }
        comps = _components(cells)
        holes = tuple(count_holes(comp) for comp in comps)
        levels.append(
            PolyominoLevel(lvl, frozenset(cells), tuple(comps), holes)
        )
    return levels


def polyomino_levels(T: TGrid) -> list[PolyominoLevel]:
    """Level sets P_1 .. P_max of a non-negative T grid."""
    if not T.nonneg:
        raise ValueError("polyomino levels require a non-negative T grid")
    return _levels_of_values(T.values)


def check_conditions(M: DiffMatrix) -> tuple[bool, bool, bool, TGrid]:
    """Evaluate conditions (i), (ii), (iii) for a difference matrix.

    (iii) is evaluated on interior grid cells only; the zero-extended
    border does not participate.
    """
    T = compute_T(M)
    v = T.values
    cond_i = T.nonneg
    cond_iii = _condition_iii(v)
    cond_ii = all(
        h == 0 for level in _levels_of_values(v) for h in level.holes
    )
    return cond_i, cond_ii, cond_iii, T


def _condition_iii(v: np.ndarray) -> bool:
    if v.size == 0:
        return True
    return bool(
        (np.abs(v[1:, :] - v[:-1, :]) <= 1).all()
        and (np.abs(v[:, 1:] - v[:, :-1]) <= 1).all()
        and (np.abs(v[1:, 1:] - v[:-1, :-1]) <= 1).all()
        and (np.abs(v[1:, :-1] - v[:-1, 1:]) <= 1).all()
    )


# ---------------------------------------------------------------------------
# Contour motifs
# ---------------------------------------------------------------------------

_RIGHT = "R"
_LEFT = "L"


def _rot_right(d: Cell) -> Cell:
    return (d[1], -d[0])


def _rot_left(d: Cell) -> Cell:
    return (-d[1], d[0])


def _trace_corners(cells: frozenset[Cell] | set[Cell]):
    """Clockwise contour walk; returns the corner cycle.

    Each entry is (vertex, turn) with turn "R" (convex) or "L" (concave).
    The walk keeps the polyomino on the right-hand side, so the outer
    boundary of a simply connected component is traversed exactly once.
    """
    edges: dict[Cell, list[Cell]] = {}
    for r, c in cells:
        if (r - 1, c) not in cells:
            edges.setdefault((r, c), []).append((r, c + 1))
        if (r, c + 1) not in cells:
            edges.setdefault((r, c + 1), []).append((r + 1, c + 1))
        if (r + 1, c) not in cells:
            edges.setdefault((r + 1, c + 1), []).append((r + 1, c))
        if (r, c - 1) not in cells:
            edges.setdefault((r + 1, c), []).append((r, c))
    start = min(edges)
    walk = [start]
    prev_dir: Cell | None = None
    vertex = start
    while True:
        outs = edges[vertex]
        if len(outs) == 1 or prev_dir is None:
            nxt = outs[0]
        else:
            # Pinch vertex: prefer the rightmost continuation.  Valid level
            # sets never pinch (diagonal contact is excluded), so this is
            # purely defensive.
            prefs = [_rot_right(prev_dir), prev_dir, _rot_left(prev_dir)]
            by_dir = {
                (o[0] - vertex[0], o[1] - vertex[1]): o for o in outs
            }
            nxt = next(by_dir[d] for d in prefs if d in by_dir)
        prev_dir = (nxt[0] - vertex[0], nxt[1] - vertex[1])
        vertex = nxt
        if vertex == start:
            break
        walk.append(vertex)
    n = len(walk)
    corners = []
    for t in range(n):
        a, b, c = walk[t - 1], walk[t], walk[(t + 1) % n]
        d_in = (b[0] - a[0], b[1] - a[1])
        d_out = (c[0] - b[0], c[1] - b[1])
        if d_out == d_in:
            continue
        turn = _RIGHT if d_out == _rot_right(d_in) else _LEFT
        corners.append((b, turn))
    return corners


Rect = tuple[int, int, int, int]  # (i1, i2, k1, k2), 1-based inclusive cells


def _bbox_rect(cells) -> Rect:
    rows = [r for r, _ in cells]
    cols = [c for _, c in cells]
    return (min(rows), max(rows), min(cols), max(cols))


def find_motif_cells(cells: frozenset[Cell] | set[Cell]) -> tuple[Rect, int]:
    """Locate a motif rectangle on the contour of a polyomino.

    Motif 1: the component itself is a rectangle.  Motifs 2 and 3 sit on a
    straight contour segment joining two consecutive convex corners B, C;
    the rectangle extends inward by the length of the shorter adjacent
    side, whose far end must be a concave corner (both ends concave and of
    equal length for motif 2).  Rotations and reflections arise naturally
    from the walk.  The lexicographically smallest valid rectangle is
    returned together with the motif kind.
    """
    if not cells:
        raise ValueError("empty cell set")
    r1, r2, c1, c2 = _bbox_rect(cells)
    if (r2 - r1 + 1) * (c2 - c1 + 1) == len(cells):
        return (r1, r2, c1, c2), 1
    corners = _trace_corners(cells)
    n = len(corners)
    best: tuple[Rect, int] | None = None
    for idx in range(n):
        (bv, bt) = corners[idx]
        (cv, ct) = corners[(idx + 1) % n]
        if bt != _RIGHT or ct != _RIGHT:
            continue
        (av, at) = corners[idx - 1]
        (dv, dt) = corners[(idx + 2) % n]
        len_ab = abs(av[0] - bv[0]) + abs(av[1] - bv[1])
        len_cd = abs(cv[0] - dv[0]) + abs(cv[1] - dv[1])
        if len_ab == len_cd and at == _LEFT and dt == _LEFT:
            depth, kind = len_ab, 2
        elif len_ab < len_cd and at == _LEFT:
            depth, kind = len_ab, 3
        elif len_cd < len_ab and dt == _LEFT:
            depth, kind = len_cd, 3
        else:
            continue
        seg = (cv[0] - bv[0], cv[1] - bv[1])
        # Interior lies on the right-hand side of the clockwise walk.
        norm = _rot_right((int(np.sign(seg[0])), int(np.sign(seg[1]))))
        far_b = (bv[0] + depth * norm[0], bv[1] + depth * norm[1])
        far_c = (cv[0] + depth * norm[0], cv[1] + depth * norm[1])
        vr = sorted({bv[0], cv[0], far_b[0], far_c[0]})
        vc = sorted({bv[1], cv[1], far_b[1], far_c[1]})
        rect = (vr[0], vr[-1] - 1, vc[0], vc[-1] - 1)
        inside = all(
            (r, c) in cells
            for r in range(rect[0], rect[1] + 1)
            for c in range(rect[2], rect[3] + 1)
        )
        if not inside:
            continue
        if best is None or (rect, kind) < best:
            best = (rect, kind)
    if best is None:
        raise MotifNotFound(
            "no contour motif on a simply connected polyomino (internal bug)"
        )
    return best


def find_motif(level: PolyominoLevel, component: int) -> tuple[Rect, int]:
    """Motif rectangle for ``level.components[component]``."""
    return find_motif_cells(level.components[component])


def rect_to_switch(rect: Rect) -> Switch:
    """The switch whose unitary tiles are exactly the rectangle's cells."""
    i1, i2, k1, k2 = rect
    return Switch(i1, i2 + 1, k1, k2 + 1)


# ---------------------------------------------------------------------------
# Path construction
# ---------------------------------------------------------------------------


@dataclass
class ReachVerdict:
    """Outcome of a reachability query, with certificate data.

    ``path`` lists positive switches leading from A to A' when one was
    found (empty for identical inputs); ``T`` is the decomposition grid of
    A' - A and cond_* the three predicate values.
    """

    status: str
    path: list[Switch] | None
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    T: TGrid
    note: str = ""

    @property
    def reachable(self) -> bool | None:
        if self.status in REACHABLE_STATUSES:
            return True
        if self.status in UNREACHABLE_STATUSES:
            return False
        return None

    @property
    def path_length(self) -> int | None:
        return None if self.path is None else len(self.path)

    def conditions(self) -> dict[str, bool]:
        return {"i": self.cond_i, "ii": self.cond_ii, "iii": self.cond_iii}


_NEG = np.array([[0, 1], [1, 0]], dtype=np.int8)
_POS = np.array([[1, 0], [0, 1]], dtype=np.int8)


def validate_path(A: BinaryMatrix, A2: BinaryMatrix, path) -> bool:
    """Check that ``path`` is a valid positive-switch walk from A to A2.

    Every step must hit a negative checkerboard of the running matrix;
    raises on invalid steps, returns False only on a wrong endpoint.
    """
    return binmat.apply_path(A, path) == A2


def _constructive_path(A: BinaryMatrix, A2: BinaryMatrix, T: TGrid) -> list[Switch]:
    """Crop-and-switch loop for instances satisfying conditions (i)-(iii).

    At the top level P_max every motif rectangle's corners carry a
    checkerboard: negative in the running A (switch it forward) or
    positive in the running A' (switch that one backward and stitch the
    step in reverse).  Each step clears the rectangle from T, so the loop
    ends with both runners equal.
    """
    cur_a = A.writable_bits()
    cur_b = A2.writable_bits()
    t = T.values.copy()
    prefix: list[Switch] = []
    suffix: list[Switch] = []
    while t.any():
        top = int(t.max())
        cells = {(int(r) + 1, int(c) + 1) for r, c in np.argwhere(t >= top)}
        comp = _components(cells)[0]
        rect, _kind = find_motif_cells(comp)
        sw = rect_to_switch(rect)
        rows = (sw.i - 1, sw.j - 1)
        cols = (sw.k - 1, sw.l - 1)
        sub_a = cur_a[np.ix_(rows, cols)]
        if (sub_a == _NEG).all():
            binmat.switch_bits_inplace(cur_a, sw, POSITIVE)
            prefix.append(sw)
        else:
            sub_b = cur_b[np.ix_(rows, cols)]
            if not (sub_b == _POS).all():
                raise InternalInvariantViolation(
                    f"motif rectangle {rect} carries no usable checkerboard"
                )
            binmat.switch_bits_inplace(cur_b, sw, NEGATIVE)
            suffix.append(sw)
        t[rect[0] - 1 : rect[1], rect[2] - 1 : rect[3]] -= 1
        if (t < 0).any():
            raise InternalInvariantViolation("T went negative during cropping")
    if not (cur_a == cur_b).all():
        raise InternalInvariantViolation("runners disagree after T emptied")
    path = prefix + suffix[::-1]
    if not validate_path(A, A2, path):
        raise InternalInvariantViolation("stitched path failed re-validation")
    return path


def _greedy_heuristic(A: BinaryMatrix, A2: BinaryMatrix, T: TGrid) -> list[Switch] | None:
    """Sound but incomplete: take the first negative checkerboard of the
    running matrix whose rectangle can be deducted from T without going
    negative; success means T was driven to zero."""
    cur = A.writable_bits()
    t = T.values.copy()
    path: list[Switch] = []
    while t.any():
        chosen = None
        for cb in binmat.find_checkerboards(BinaryMatrix._wrap(cur.copy()), NEGATIVE):
            sw = cb.coord
            region = t[sw.i - 1 : sw.j - 1, sw.k - 1 : sw.l - 1]
            if (region >= 1).all():
                chosen = sw
                break
        if chosen is None:
            return None
        binmat.switch_bits_inplace(cur, chosen, POSITIVE)
        t[chosen.i - 1 : chosen.j - 1, chosen.k - 1 : chosen.l - 1] -= 1
        path.append(chosen)
    if not (cur == A2.bits).all():
        raise InternalInvariantViolation("greedy heuristic emptied T off target")
    return path


def build_path(
    A: BinaryMatrix, A2: BinaryMatrix, *, bfs_cap: int = DEFAULT_BFS_CAP
) -> ReachVerdict:
    """Decide reachability from A to A2 and build a path when possible.

    Dispatch: identical inputs; condition (i) failure (unreachable);
    constructive builder when (i)-(iii) all hold; otherwise the greedy
    heuristic, then exhaustive BFS if the margin class is estimated to
    have at most ``bfs_cap`` members, else Unknown.
    """
    M = diff(A, A2)
    cond_i, cond_ii, cond_iii, T = check_conditions(M)
    if A == A2:
        return ReachVerdict(IDENTICAL, [], cond_i, cond_ii, cond_iii, T)
    if not cond_i:
        return ReachVerdict(UNREACHABLE_CONDITION_I, None, cond_i, cond_ii, cond_iii, T)
    if cond_ii and cond_iii:
        path = _constructive_path(A, A2, T)
        return ReachVerdict(REACHABLE_CONSTRUCTIVE, path, cond_i, cond_ii, cond_iii, T)
    path = _greedy_heuristic(A, A2, T)
    if path is not None:
        return ReachVerdict(REACHABLE_HEURISTIC, path, cond_i, cond_ii, cond_iii, T)
    from . import oracle

    R = [int(x) for x in A.row_sums]
    C = [int(x) for x in A.col_sums]
    size = oracle.count_margin_class(R, C, cap=bfs_cap)
    if size is None:
        return ReachVerdict(
            UNKNOWN,
            None,
            cond_i,
            cond_ii,
            cond_iii,
            T,
            note=f"margin class larger than bfs cap {bfs_cap}",
        )
    found = oracle.bfs_directed_path(A, A2)
    if found is None:
        return ReachVerdict(UNREACHABLE_EXHAUSTIVE, None, cond_i, cond_ii, cond_iii, T)
    if not validate_path(A, A2, found):
        raise InternalInvariantViolation("BFS produced an invalid path")
    return ReachVerdict(REACHABLE_EXHAUSTIVE, found, cond_i, cond_ii, cond_iii, T)
