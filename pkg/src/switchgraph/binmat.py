"""Fixed-margin binary matrices and checkerboard switches.

A checkerboard is a 2x2 submatrix equal to [[1,0],[0,1]] (positive) or
[[0,1],[1,0]] (negative).  Switching replaces one form with the other and
preserves every row and column sum.  This module holds the dense matrix
representation, checkerboard enumeration, switch application, the switch
potential, and the structural classifiers (nested, zebra, anti-zebra and
their split variants).

All coordinates in the public API are 1-based: a switch coordinate
(i, j, k, l) with i < j and k < l addresses rows i, j and columns k, l.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import InfeasibleMargins, InvalidSwitch, MatrixFormatError

POSITIVE = "positive"
NEGATIVE = "negative"


class Switch(NamedTuple):
    """Checkerboard coordinates: 1-based rows i < j and columns k < l."""

    i: int
    j: int
    k: int
    l: int


class Checkerboard(NamedTuple):
    coord: Switch
    sign: str


def as_switch(coord) -> Switch:
    """Coerce a 4-sequence to a :class:`Switch`, validating the ordering."""
    sw = Switch(*(int(x) for x in coord))
    if not (1 <= sw.i < sw.j and 1 <= sw.k < sw.l):
        raise InvalidSwitch(f"malformed switch coordinates {tuple(sw)}")
    return sw


class BinaryMatrix:
    """Dense 0/1 matrix with cached row and column sums.

    Instances are immutable; switching returns a new matrix.  Code that
    needs to switch in place (the optimizer's hot loop) should work on
    ``writable_bits()`` and re-wrap at the end.
    """

    __slots__ = ("bits", "row_sums", "col_sums")

    def __init__(self, bits):
        arr = np.array(bits, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"expected a non-empty 2-D array, got shape {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("matrix entries must be 0 or 1")
        self._finish(arr)

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "BinaryMatrix":
        # Fast path for internally constructed arrays (already validated).
        obj = object.__new__(cls)
        obj._finish(arr)
        return obj

    def _finish(self, arr: np.ndarray) -> None:
        arr.setflags(write=False)
        self.bits = arr
        self.row_sums = arr.sum(axis=1, dtype=np.int64)
        self.col_sums = arr.sum(axis=0, dtype=np.int64)
        self.row_sums.setflags(write=False)
        self.col_sums.setflags(write=False)

    @property
    def p(self) -> int:
        return self.bits.shape[0]

    @property
    def q(self) -> int:
        return self.bits.shape[1]

    def writable_bits(self) -> np.ndarray:
        return self.bits.copy()

    def key(self) -> bytes:
        """Row-major byte encoding; canonical identity within a margin class."""
        return self.bits.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(
            (self.bits == other.bits).all()
        )

    def __hash__(self) -> int:
        return hash((self.bits.shape, self.bits.tobytes()))

    def __repr__(self) -> str:
        rows = ["".join(str(int(b)) for b in row) for row in self.bits]
        return f"BinaryMatrix({self.p}x{self.q}: {' '.join(rows)})"

    def to_text(self) -> str:
        """Serialise to the matrix text format (bit-exact, LF endings)."""
        lines = [f"{self.p} {self.q}"]
        lines.extend("".join(str(int(b)) for b in row) for row in self.bits)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BinaryMatrix":
        """Parse the matrix text format, rejecting any deviation."""
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines:
            raise MatrixFormatError("empty input")
        header = lines[0].split(" ")
        if len(header) != 2:
            raise MatrixFormatError(f"bad header line {lines[0]!r}")
        try:
            p, q = int(header[0]), int(header[1])
        except ValueError as exc:
            raise MatrixFormatError(f"bad header line {lines[0]!r}") from exc
        if p < 1 or q < 1:
            raise MatrixFormatError(f"bad dimensions {p}x{q}")
        if len(lines) != p + 1:
            raise MatrixFormatError(f"expected {p} rows, found {len(lines) - 1}")
        arr = np.empty((p, q), dtype=np.int8)
        for r, line in enumerate(lines[1:]):
            if len(line) != q or set(line) - {"0", "1"}:
                raise MatrixFormatError(f"bad row {r + 1}: {line!r}")
            arr[r] = [int(ch) for ch in line]
        return cls._wrap(arr)


def read_matrix(path) -> BinaryMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return BinaryMatrix.from_text(fh.read())


def write_matrix(A: BinaryMatrix, path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(A.to_text())


def row_col_sums(A: BinaryMatrix) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Return the cached margins (R, C) as plain integer tuples."""
    return tuple(int(x) for x in A.row_sums), tuple(int(x) for x in A.col_sums)


# ---------------------------------------------------------------------------
# Checkerboards and switches
# ---------------------------------------------------------------------------


def find_checkerboards(A: BinaryMatrix, sign: str | None = None) -> list[Checkerboard]:
    """Enumerate all checkerboards of ``A`` in lexicographic coordinate order.

    ``sign`` restricts the result to "positive" or "negative" boards; the
    scan is the O(p^2 q^2) full enumeration.
    """
    if sign is not None and sign not in (POSITIVE, NEGATIVE):
        raise ValueError(f"unknown sign {sign!r}")
    bits = A.bits
    p, _ = bits.shape
    found: list[Checkerboard] = []
    for i in range(p - 1):
        for j in range(i + 1, p):
            d = bits[i].astype(np.int16) - bits[j]
            pos_cols = np.flatnonzero(d == 1)
            neg_cols = np.flatnonzero(d == -1)
            if sign != NEGATIVE:
                for k in pos_cols:
                    for l in neg_cols:
                        if l > k:
                            found.append(
                                Checkerboard(
                                    Switch(i + 1, j + 1, int(k) + 1, int(l) + 1),
                                    POSITIVE,
                                )
                            )
            if sign != POSITIVE:
                for k in neg_cols:
                    for l in pos_cols:
                        if l > k:
                            found.append(
                                Checkerboard(
                                    Switch(i + 1, j + 1, int(k) + 1, int(l) + 1),
                                    NEGATIVE,
                                )
                            )
    found.sort(key=lambda cb: cb.coord)
    return found


def first_negative_checkerboard(bits: np.ndarray) -> Switch | None:
    """Lexicographically first negative checkerboard of a raw bit array."""
    p, _ = bits.shape
    for i in range(p - 1):
        for j in range(i + 1, p):
            d = bits[i].astype(np.int16) - bits[j]
            neg_cols = np.flatnonzero(d == -1)
            if neg_cols.size == 0:
                continue
            pos_cols = np.flatnonzero(d == 1)
            for k in neg_cols:
                later = pos_cols[pos_cols > k]
                if later.size:
                    return Switch(i + 1, j + 1, int(k) + 1, int(later[0]) + 1)
    return None


_NEG_PATTERN = np.array([[0, 1], [1, 0]], dtype=np.int8)
_POS_PATTERN = np.array([[1, 0], [0, 1]], dtype=np.int8)


def switch_bits_inplace(bits: np.ndarray, coord, direction: str) -> None:
    """Apply a switch to a writable bit array, validating the checkerboard.

    This is the in-place variant used by hot loops; ``apply_switch`` is the
    immutable wrapper.
    """
    sw = as_switch(coord)
    p, q = bits.shape
    if sw.j > p or sw.l > q:
        raise InvalidSwitch(f"switch {tuple(sw)} out of range for {p}x{q} matrix")
    rows = (sw.i - 1, sw.j - 1)
    cols = (sw.k - 1, sw.l - 1)
    if direction not in (POSITIVE, NEGATIVE):
        raise ValueError(f"unknown direction {direction!r}")
    sub = bits[np.ix_(rows, cols)]
    want = _NEG_PATTERN if direction == POSITIVE else _POS_PATTERN
    if not (sub == want).all():
        raise InvalidSwitch(
            f"no {'negative' if direction == POSITIVE else 'positive'} "
            f"checkerboard at {tuple(sw)}"
        )
    bits[np.ix_(rows, cols)] = 1 - sub


def apply_switch(A: BinaryMatrix, coord, direction: str) -> BinaryMatrix:
    """Return ``A`` with the switch at ``coord`` applied.

    A positive switch requires a negative checkerboard at ``coord`` (and
    vice versa); otherwise :class:`InvalidSwitch` is raised.  Margins are
    invariant.
    """
    bits = A.writable_bits()
    switch_bits_inplace(bits, coord, direction)
    return BinaryMatrix._wrap(bits)


def apply_path(A: BinaryMatrix, path: Sequence) -> BinaryMatrix:
    """Apply a sequence of positive switches, validating every step."""
    bits = A.writable_bits()
    for coord in path:
        switch_bits_inplace(bits, coord, POSITIVE)
    return BinaryMatrix._wrap(bits)


def unitary_decomposition(coord) -> list[Switch]:
    """Split a switch into the unitary switches tiling its rectangle."""
    sw = as_switch(coord)
    return [
        Switch(a, a + 1, b, b + 1)
        for a in range(sw.i, sw.j)
        for b in range(sw.k, sw.l)
    ]


def switching_matrix(coord, p: int, q: int) -> np.ndarray:
    """The +-1 pattern added by a positive switch, as a p x q int array."""
    sw = as_switch(coord)
    if sw.j > p or sw.l > q:
        raise InvalidSwitch(f"switch {tuple(sw)} out of range for {p}x{q} matrix")
    out = np.zeros((p, q), dtype=np.int64)
    out[sw.i - 1, sw.k - 1] = out[sw.j - 1, sw.l - 1] = 1
    out[sw.i - 1, sw.l - 1] = out[sw.j - 1, sw.k - 1] = -1
    return out


def potential(A: BinaryMatrix) -> int:
    """Weighted sum of entries, I(A) = sum of i*j*a_ij with 1-based i, j.

    A positive switch at (i, j, k, l) increases the potential by exactly
    (j - i) * (l - k), which makes the switch order acyclic.
    """
    p, q = A.bits.shape
    weights = np.outer(np.arange(1, p + 1, dtype=np.int64), np.arange(1, q + 1))
    return int((weights * A.bits).sum())


def complement(A: BinaryMatrix) -> BinaryMatrix:
    """Entrywise 1 - a_ij.  Swaps checkerboard signs at identical coordinates."""
    return BinaryMatrix._wrap((1 - A.bits).astype(np.int8))


def reflect_vertical(A: BinaryMatrix) -> BinaryMatrix:
    """Reverse the row order."""
    return BinaryMatrix._wrap(A.bits[::-1].copy())


# ---------------------------------------------------------------------------
# Structural classification
# ---------------------------------------------------------------------------


def _prefix_runs(bits: np.ndarray) -> np.ndarray:
    """Length of the initial run of 1s in each row."""
    p, q = bits.shape
    if p == 0 or q == 0:
        return np.zeros(p, dtype=np.int64)
    padded = np.hstack([bits == 0, np.ones((p, 1), dtype=bool)])
    return padded.argmax(axis=1)


def _suffix_runs(bits: np.ndarray) -> np.ndarray:
    return _prefix_runs(bits[:, ::-1])


def is_nested(bits: np.ndarray) -> bool:
    """True when 1s precede 0s in every row and column.

    Equivalent formulation used here: every row is a prefix run of 1s and
    the run lengths are non-increasing from top to bottom.
    """
    if bits.shape[0] == 0 or bits.shape[1] == 0:
        return True
    runs = _prefix_runs(bits)
    if not (runs == bits.sum(axis=1)).all():
        return False
    return bool((np.diff(runs) <= 0).all())


def is_anti_nested(bits: np.ndarray) -> bool:
    """True when 0s precede 1s in every row and column."""
    if bits.shape[0] == 0 or bits.shape[1] == 0:
        return True
    runs = _suffix_runs(bits)
    if not (runs == bits.sum(axis=1)).all():
        return False
    return bool((np.diff(runs) >= 0).all())


def _greedy_prefix_peel(bits: np.ndarray) -> np.ndarray | None:
    """Peel the maximal top-left staircase of 1s; None if the rest is not
    anti-nested.  Returns the per-row prefix lengths of the nested part."""
    p, q = bits.shape
    runs = _prefix_runs(bits)
    lengths = np.empty(p, dtype=np.int64)
    cap = q
    for i in range(p):
        cap = min(cap, int(runs[i]))
        lengths[i] = cap
    rest = bits.copy()
    for i in range(p):
        rest[i, : lengths[i]] = 0
    return lengths if is_anti_nested(rest) else None


def _greedy_suffix_peel(bits: np.ndarray) -> np.ndarray | None:
    """Symmetric greedy from the bottom-right; the rest must be nested."""
    p, q = bits.shape
    runs = _suffix_runs(bits)
    lengths = np.empty(p, dtype=np.int64)
    cap = q
    for i in range(p - 1, -1, -1):
        cap = min(cap, int(runs[i]))
        lengths[i] = cap
    rest = bits.copy()
    for i in range(p):
        if lengths[i]:
            rest[i, q - lengths[i]:] = 0
    return lengths if is_nested(rest) else None


def zebra_parts(A: BinaryMatrix) -> tuple[np.ndarray, np.ndarray] | None:
    """A decomposition A = N + AN with N nested and AN anti-nested, disjoint.

    Found greedily (maximal top-left staircase, then the symmetric greedy
    from the bottom-right, then the split scans); None when all fail.
    """
    bits = A.bits
    p, q = bits.shape
    lengths = _greedy_prefix_peel(bits)
    if lengths is not None:
        nested = np.zeros_like(bits)
        for i in range(p):
            nested[i, : lengths[i]] = bits[i, : lengths[i]]
        return nested, (bits - nested).astype(np.int8)
    lengths = _greedy_suffix_peel(bits)
    if lengths is not None:
        anti = np.zeros_like(bits)
        for i in range(p):
            if lengths[i]:
                anti[i, q - lengths[i]:] = bits[i, q - lengths[i]:]
        return (bits - anti).astype(np.int8), anti
    h = _h_split_positions(bits)
    if h:
        nested = bits.copy()
        nested[h[0]:, :] = 0
        return nested, (bits - nested).astype(np.int8)
    v = _v_split_positions(bits)
    if v:
        nested = bits.copy()
        nested[:, v[0]:] = 0
        return nested, (bits - nested).astype(np.int8)
    return None


def _h_split_positions(bits: np.ndarray) -> list[int]:
    """Row cuts h so rows [0, h) are nested and rows [h, p) anti-nested."""
    p = bits.shape[0]
    return [
        h
        for h in range(p + 1)
        if is_nested(bits[:h]) and is_anti_nested(bits[h:])
    ]


def _v_split_positions(bits: np.ndarray) -> list[int]:
    """Column cuts v so the left block is nested, the right anti-nested."""
    q = bits.shape[1]
    return [
        v
        for v in range(q + 1)
        if is_nested(bits[:, :v]) and is_anti_nested(bits[:, v:])
    ]


@dataclass(frozen=True)
class MatrixClass:
    """Structural flags; independent, several may hold at once."""

    nested: bool
    anti_nested: bool
    zebra: bool
    zebra_split_h: bool
    zebra_split_v: bool
    anti_zebra: bool
    anti_zebra_split_h: bool
    anti_zebra_split_v: bool
    complement_of_split: bool
    degenerate_split: bool

    @property
    def is_split_zebra(self) -> bool:
        return self.zebra_split_h or self.zebra_split_v

    @property
    def is_split_anti_zebra(self) -> bool:
        return self.anti_zebra_split_h or self.anti_zebra_split_v

    @property
    def none(self) -> bool:
        return not (
            self.nested
            or self.anti_nested
            or self.zebra
            or self.anti_zebra
            or self.complement_of_split
        )

    def flags(self) -> dict[str, bool]:
        return {
            "nested": self.nested,
            "anti_nested": self.anti_nested,
            "zebra": self.zebra,
            "zebra_split_h": self.zebra_split_h,
            "zebra_split_v": self.zebra_split_v,
            "anti_zebra": self.anti_zebra,
            "anti_zebra_split_h": self.anti_zebra_split_h,
            "anti_zebra_split_v": self.anti_zebra_split_v,
            "complement_of_split": self.complement_of_split,
            "degenerate_split": self.degenerate_split,
            "none": self.none,
        }


def _zebra_facts(bits: np.ndarray):
    """(zebra, split_h, split_v, degenerate) for the zebra family."""
    h_cuts = _h_split_positions(bits)
    v_cuts = _v_split_positions(bits)
    zebra = bool(h_cuts or v_cuts)
    if not zebra:
        zebra = _greedy_prefix_peel(bits) is not None or _greedy_suffix_peel(bits) is not None
    degenerate = False
    if h_cuts or v_cuts:
        nontrivial = any(
            bits[:h].any() and bits[h:].any() for h in h_cuts
        ) or any(bits[:, :v].any() and bits[:, v:].any() for v in v_cuts)
        degenerate = not nontrivial
    return zebra, bool(h_cuts), bool(v_cuts), degenerate


def classify(A: BinaryMatrix) -> MatrixClass:
    """Compute the structural flags of ``A``.

    A zebra is a disjoint sum of a nested and an anti-nested matrix; it is
    split horizontally (vertically) when some row (column) cut separates
    the two parts.  An anti-zebra is the complement of the vertical
    reflection of a zebra, so its flags are read off the transformed
    matrix.  An empty part is permitted and reported via
    ``degenerate_split``.
    """
    bits = A.bits
    zebra, sh, sv, degen_z = _zebra_facts(bits)
    anti_bits = (1 - bits[::-1]).astype(np.int8)
    anti, ash, asv, degen_a = _zebra_facts(anti_bits)
    comp_bits = (1 - bits).astype(np.int8)
    _, csh, csv, _ = _zebra_facts(comp_bits)
    comp_anti_bits = bits[::-1].copy()
    _, cash, casv, _ = _zebra_facts(comp_anti_bits)
    return MatrixClass(
        nested=is_nested(bits),
        anti_nested=is_anti_nested(bits),
        zebra=zebra,
        zebra_split_h=sh,
        zebra_split_v=sv,
        anti_zebra=anti,
        anti_zebra_split_h=ash,
        anti_zebra_split_v=asv,
        complement_of_split=bool(csh or csv or cash or casv),
        degenerate_split=bool((sh or sv) and degen_z or (ash or asv) and degen_a),
    )


# ---------------------------------------------------------------------------
# Forbidden-pattern scans (zebra geometry checks, used by the test suite)
# ---------------------------------------------------------------------------


def strip_full_lines(bits: np.ndarray) -> np.ndarray:
    """Drop all-ones rows and columns until none remain."""
    out = bits
    while out.size:
        full_rows = out.all(axis=1)
        full_cols = out.all(axis=0)
        if not full_rows.any() and not full_cols.any():
            break
        out = out[~full_rows][:, ~full_cols]
    return out


def strip_empty_lines(bits: np.ndarray) -> np.ndarray:
    """Drop all-zero rows and columns until none remain."""
    out = bits
    while out.size:
        empty_rows = ~out.any(axis=1)
        empty_cols = ~out.any(axis=0)
        if not empty_rows.any() and not empty_cols.any():
            break
        out = out[~empty_rows][:, ~empty_cols]
    return out


def _pairs(n: int) -> Iterator[tuple[int, int]]:
    for a in range(n - 1):
        for b in range(a + 1, n):
            yield a, b


def has_zebra_forbidden_pattern(A: BinaryMatrix) -> bool:
    """Scan for [[0,1],[*,0]] or [[0,*],[1,0]] after removing full lines.

    Zebras never contain these submatrices (one direction of the geometric
    characterisation; the converse is not assumed anywhere).
    """
    b = strip_full_lines(A.bits)
    p, q = b.shape
    for i, j in _pairs(p):
        for k, l in _pairs(q):
            if b[i, k] == 0 and b[i, l] == 1 and b[j, l] == 0:
                return True
            if b[i, k] == 0 and b[j, k] == 1 and b[j, l] == 0:
                return True
    return False


def has_anti_zebra_forbidden_pattern(A: BinaryMatrix) -> bool:
    """Scan for [[*,1],[1,0]] or [[0,1],[1,*]] after removing empty lines."""
    b = strip_empty_lines(A.bits)
    p, q = b.shape
    for i, j in _pairs(p):
        for k, l in _pairs(q):
            if b[i, l] == 1 and b[j, k] == 1 and b[j, l] == 0:
                return True
            if b[i, k] == 0 and b[i, l] == 1 and b[j, k] == 1:
                return True
    return False


def row_has_pattern(bits: np.ndarray, pattern: Sequence[int]) -> bool:
    """True if some row contains ``pattern`` as a (scattered) subsequence."""
    for row in bits:
        idx = 0
        for value in row:
            if value == pattern[idx]:
                idx += 1
                if idx == len(pattern):
                    break
        if idx == len(pattern):
            return True
    return False


def col_has_pattern(bits: np.ndarray, pattern: Sequence[int]) -> bool:
    return row_has_pattern(bits.T, pattern)


# ---------------------------------------------------------------------------
# Margin feasibility
# ---------------------------------------------------------------------------


def from_margins(R: Sequence[int], C: Sequence[int]) -> BinaryMatrix:
    """Build some matrix with row sums R and column sums C.

    Greedy fill: each row places its 1s in the columns with the largest
    remaining demand (ties to the left), which succeeds exactly when the
    margins are feasible.  Raises :class:`InfeasibleMargins` otherwise.
    """
    R = [int(x) for x in R]
    C = [int(x) for x in C]
    p, q = len(R), len(C)
    if p < 1 or q < 1:
        raise InfeasibleMargins("margins must be non-empty")
    if min(R) < 0 or min(C) < 0 or max(R, default=0) > q or max(C, default=0) > p:
        raise InfeasibleMargins(f"margins out of range for a {p}x{q} binary matrix")
    if sum(R) != sum(C):
        raise InfeasibleMargins(f"margin sums differ: {sum(R)} != {sum(C)}")
    rem = np.array(C, dtype=np.int64)
    arr = np.zeros((p, q), dtype=np.int8)
    order_keys = np.arange(q)
    for i, r in enumerate(R):
        if r == 0:
            continue
        order = np.lexsort((order_keys, -rem))
        chosen = order[:r]
        if rem[chosen[-1]] <= 0:
            raise InfeasibleMargins("margins are not realisable")
        arr[i, chosen] = 1
        rem[chosen] -= 1
    if (rem != 0).any():
        raise InfeasibleMargins("margins are not realisable")
    return BinaryMatrix._wrap(arr)
