"""Rebuild the bounded-weight tail-biting codeword list from an IEE database.

Every nonzero tail-biting path of length N that touches state sigma_i but
none of sigma_0..sigma_{i-1} decomposes uniquely, read circularly, into
IEEs of sigma_i. Grouping the zero-weight self-loops (state 0 only, one
per non-catastrophic code) into gaps between the nonzero-weight events
gives the normal form used here:

    skeleton  = ordered tuple of nonzero-weight events, total weight < d_tilde
    gaps      = run of zero loops after each event, lengths g_1..g_j >= 0
    rotation  = start time t* of the first event, 0 <= t* < len_j + g_j

The (skeleton, gaps, t*) triple is in bijection with the paths of the
partition class: cutting any length-N word at the event block covering
time N-1 recovers exactly one triple, periodic words included. Expansion
therefore emits every path exactly once with no dedup hashing; a sort
based uniqueness check guards the invariant. States other than 0 have no
zero loop, so their skeletons must fill the length budget exactly.

Tables are kept as index sequences into the per-state IEE lists; the
weight/length cells of the classic recurrence are materialized on demand
by entries() rather than stored, which keeps the N=70 design workload in
tens of megabytes instead of gigabytes.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .collector import IEE, IEEDatabase
from .encoder import TBPath, encode_tb
from .errors import CoverageError

__all__ = [
    "WeightLengthTable",
    "ReconstructionTables",
    "TBPathSet",
    "build_tables",
    "expand_and_dedup",
    "iter_state_paths",
    "growth_profile",
]


class _Skeleton(NamedTuple):
    events: tuple[int, ...]  # indices into the state's IEE tuple
    length: int
    weight: int
    last_len: int


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of total into exactly `parts` ordered parts."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def _skeletons_for_state(
    iees: Sequence[IEE], d_tilde: int, targets: Sequence[int]
) -> tuple[int | None, tuple[_Skeleton, ...]]:
    """Enumerate feasible event skeletons for one state.

    targets are the trellis lengths the caller wants to reach. For the
    state owning the zero loop any skeleton no longer than max(targets)
    can be padded out; for the others a prefix is kept only if some
    target length is exactly reachable with the remaining weight budget
    (unbounded-knapsack bound, exact, so pruning loses nothing).
    """
    l_max = max(targets)
    zero_index = None
    for i, e in enumerate(iees):
        if e.weight == 0:
            if zero_index is not None:
                raise RuntimeError("two zero-weight loops; encoder should have been refused")
            zero_index = i
    events = [
        (i, e.length, e.weight)
        for i, e in enumerate(iees)
        if 0 < e.weight < d_tilde and e.length <= l_max
    ]
    # Ascending weight makes the budget check below a valid early break.
    events.sort(key=lambda t: (t[2], t[1], t[0]))

    best_fill: list[float] | None = None
    if zero_index is None:
        inf = float("inf")
        fill = [inf] * (l_max + 1)
        fill[0] = 0.0
        for r in range(1, l_max + 1):
            best = inf
            for _i, el, ew in events:
                if el > r:
                    continue
                c = fill[r - el] + ew
                if c < best:
                    best = c
            fill[r] = best
        best_fill = [inf] * (l_max + 1)
        for length in range(l_max + 1):
            best = inf
            for t in targets:
                if t >= length and fill[t - length] < best:
                    best = fill[t - length]
            best_fill[length] = best

    skeletons: list[_Skeleton] = []
    stack: list[tuple[tuple[int, ...], int, int, int]] = [((), 0, 0, 0)]
    while stack:
        seq, length, weight, last = stack.pop()
        if seq:
            skeletons.append(_Skeleton(seq, length, weight, last))
        for i, el, ew in events:
            w2 = weight + ew
            if w2 >= d_tilde:
                break
            l2 = length + el
            if l2 > l_max:
                continue
            if best_fill is not None and w2 + best_fill[l2] >= d_tilde:
                continue
            stack.append((seq + (i,), l2, w2, el))
    skeletons.sort(key=lambda s: (s.weight, s.length, s.events))
    return zero_index, tuple(skeletons)


class WeightLengthTable:
    """Anchored-path table of one state, stored in skeleton normal form.

    entries(w, l) materializes the classic cell contents: all ordered IEE
    compositions of total weight w and total length l, zero loops spelled
    out. Bulk expansion never materializes cells; it walks the packed
    skeletons directly.
    """

    __slots__ = ("state", "iees", "N", "d_tilde", "zero_index", "skeletons")

    def __init__(
        self,
        state: int,
        iees: tuple[IEE, ...],
        N: int,
        d_tilde: int,
        zero_index: int | None,
        skeletons: tuple[_Skeleton, ...],
    ):
        self.state = state
        self.iees = iees
        self.N = N
        self.d_tilde = d_tilde
        self.zero_index = zero_index
        self.skeletons = skeletons

    @property
    def has_zero_loop(self) -> bool:
        return self.zero_index is not None

    def entries(self, w: int, l: int) -> list[tuple[IEE, ...]]:
        """All compositions filling cell (w, l), lexicographic by event index.

        (0, 0) holds the single empty composition, the recurrence seed.
        """
        if not (0 <= w < self.d_tilde):
            raise ValueError(f"w must be in [0, {self.d_tilde}), got {w}")
        if not (0 <= l <= self.N):
            raise ValueError(f"l must be in [0, {self.N}], got {l}")
        if l == 0 and w > 0:
            raise ValueError("only the (0, 0) cell has zero length")
        items = [(i, e.length, e.weight) for i, e in enumerate(self.iees)]
        out: list[tuple[IEE, ...]] = []

        def rec(prefix: list[int], rl: int, rw: int) -> None:
            if rl == 0:
                if rw == 0:
                    out.append(tuple(self.iees[i] for i in prefix))
                return
            for i, el, ew in items:
                if el <= rl and ew <= rw:
                    prefix.append(i)
                    rec(prefix, rl - el, rw - ew)
                    prefix.pop()

        rec([], l, w)
        return out

    def cell_count(self, w: int, l: int) -> int:
        return len(self.entries(w, l))

    def __repr__(self) -> str:
        return (
            f"WeightLengthTable(state={self.state}, N={self.N}, "
            f"d_tilde={self.d_tilde}, skeletons={len(self.skeletons)})"
        )


class ReconstructionTables:
    """Per-state tables for one (db, N, d_tilde) reconstruction run."""

    __slots__ = ("db", "N", "d_tilde", "per_state")

    def __init__(self, db: IEEDatabase, N: int, d_tilde: int, per_state: dict[int, WeightLengthTable]):
        self.db = db
        self.N = N
        self.d_tilde = d_tilde
        self.per_state = per_state

    @property
    def ordering(self) -> tuple[int, ...]:
        return self.db.ordering

    def __getitem__(self, state: int) -> WeightLengthTable:
        return self.per_state[state]

    def __iter__(self) -> Iterator[int]:
        return iter(self.db.ordering)

    def __repr__(self) -> str:
        return f"ReconstructionTables(N={self.N}, d_tilde={self.d_tilde}, states={len(self.per_state)})"


def build_tables(db: IEEDatabase, N: int, d_tilde: int) -> ReconstructionTables:
    """Prepare expansion tables, checking the database actually covers the ask."""
    if d_tilde < 1:
        raise ValueError(f"d_tilde must be >= 1, got {d_tilde}")
    if d_tilde > db.d_tilde:
        raise CoverageError(
            f"database only covers weights < {db.d_tilde}, need d_tilde={d_tilde}; "
            f"re-collect with d_tilde >= {d_tilde}"
        )
    if N > db.max_len:
        raise CoverageError(
            f"database only covers event lengths <= {db.max_len}, need N={N}; "
            f"re-collect with max_len >= {N}"
        )
    if N < db.v:
        raise ValueError(f"N={N} is degenerate for a memory-{db.v} code; need N >= {db.v}")
    per_state: dict[int, WeightLengthTable] = {}
    for sigma in db.ordering:
        iees = db.per_state.get(sigma, ())
        zero_index, skeletons = _skeletons_for_state(iees, d_tilde, [N])
        per_state[sigma] = WeightLengthTable(sigma, iees, N, d_tilde, zero_index, skeletons)
    return ReconstructionTables(db, N, d_tilde, per_state)


def _state_words(table: WeightLengthTable, N: int) -> Iterator[tuple[int, int]]:
    """(packed input word, weight) for every path anchored at this state.

    Each distinct tail-biting input word of the state's partition class
    appears exactly once; see the module docstring for the bijection.
    """
    mask = (1 << N) - 1
    nm1 = N - 1
    padded = table.zero_index is not None
    for sk in table.skeletons:
        if not padded and sk.length != N:
            continue
        gap_total = N - sk.length
        evs = [table.iees[i] for i in sk.events]
        bits = [e.input_bits for e in evs]
        lens = [e.length for e in evs]
        j = len(evs)
        w = sk.weight
        for gaps in _compositions(gap_total, j):
            base = 0
            pos = 0
            for k in range(j):
                base |= bits[k] << pos
                pos += lens[k] + gaps[k]
            word = base
            for _ in range(lens[-1] + gaps[-1]):
                yield word, w
                word = ((word << 1) | (word >> nm1)) & mask


def iter_state_paths(tables: ReconstructionTables, state: int) -> Iterator[tuple[int, int]]:
    """(input word, weight) pairs of one partition class, each word once."""
    return _state_words(tables[state], tables.N)


class TBPathSet:
    """All tail-biting paths of weight < d_tilde at one length, packed.

    Input words live in a uint8 matrix, row per path, little-endian bytes
    (bit i of the word = input at time i). Weights sit in a parallel
    vector. Row order follows the state ordering of the tables; rows are
    globally unique.
    """

    __slots__ = ("N", "d_tilde", "packed", "weights", "code", "_counts", "_input_set")

    def __init__(self, N: int, d_tilde: int, packed: np.ndarray, weights: np.ndarray, code):
        self.N = N
        self.d_tilde = d_tilde
        self.packed = packed
        self.weights = weights
        self.code = code
        self._counts: dict[int, int] | None = None
        self._input_set: frozenset[int] | None = None

    def __len__(self) -> int:
        return int(self.packed.shape[0])

    def counts_by_weight(self) -> dict[int, int]:
        """{weight: number of paths}, zero weights omitted."""
        if self._counts is None:
            if len(self) == 0:
                self._counts = {}
            else:
                binc = np.bincount(self.weights)
                self._counts = {int(w): int(c) for w, c in enumerate(binc) if c}
        return dict(self._counts)

    def iter_inputs(self) -> Iterator[int]:
        for row in self.packed:
            yield int.from_bytes(row.tobytes(), "little")

    def input_set(self) -> frozenset[int]:
        if self._input_set is None:
            self._input_set = frozenset(self.iter_inputs())
        return self._input_set

    def paths(self) -> Iterator[TBPath]:
        """Re-encode each stored word; weights are revalidated on the fly."""
        for word, w in zip(self.iter_inputs(), self.weights):
            path = encode_tb(self.code, tuple((word >> i) & 1 for i in range(self.N)))
            if path.weight != int(w):
                raise RuntimeError(f"stored weight {w} != re-encoded {path.weight}")
            yield path

    def _rotated_rows(self) -> np.ndarray:
        """Every word rotated one step later in time, vectorized bytewise."""
        b = self.packed
        top_byte = (self.N - 1) // 8
        top_bit = (self.N - 1) % 8
        wrap = (b[:, top_byte] >> top_bit) & 1
        out = ((b.astype(np.uint16) << 1) & 0xFF).astype(np.uint8)
        out[:, 1:] |= b[:, :-1] >> 7
        keep = np.uint8((1 << (top_bit + 1)) - 1) if top_bit < 7 else np.uint8(0xFF)
        out[:, top_byte] &= keep
        out[:, 0] |= wrap
        return out

    def is_cyclic_closed(self) -> bool:
        """True iff the word multiset maps onto itself under cyclic shift.

        Closure under a single shift implies closure under all shifts, so
        one vectorized pass settles the full invariant.
        """
        if len(self) == 0:
            return True
        return np.array_equal(
            np.sort(_row_keys(self.packed)), np.sort(_row_keys(self._rotated_rows()))
        )

    def export_csv(self, path) -> None:
        """weight,input_hex rows sorted by (weight, input value)."""
        cols = [self.packed[:, k] for k in range(self.packed.shape[1])]
        order = np.lexsort(tuple(cols) + (self.weights,))
        digits = (self.N + 3) // 4
        with open(path, "w", newline="\n") as fh:
            fh.write("weight,input_hex\n")
            for idx in order:
                word = int.from_bytes(self.packed[idx].tobytes(), "little")
                fh.write(f"{int(self.weights[idx])},0x{word:0{digits}x}\n")

    def __repr__(self) -> str:
        return f"TBPathSet(N={self.N}, d_tilde={self.d_tilde}, paths={len(self)})"


def _row_keys(packed: np.ndarray) -> np.ndarray:
    """View rows as opaque fixed-width keys for sorting and uniqueness."""
    arr = np.ascontiguousarray(packed)
    return arr.view(np.dtype((np.void, arr.shape[1]))).reshape(-1)


def expand_and_dedup(tables: ReconstructionTables, N: int) -> TBPathSet:
    """Emit every path of every partition class and pack the result.

    The emission order is deterministic (state ordering, then skeleton
    order, then gap compositions, then rotations). A uniqueness check on
    the packed rows enforces the each-word-exactly-once contract.
    """
    if N != tables.N:
        raise ValueError(f"tables were built for N={tables.N}, asked to expand N={N}")
    width = (N + 7) // 8
    blob = bytearray()
    weights: list[int] = []
    append = weights.append
    for sigma in tables.ordering:
        for word, w in _state_words(tables.per_state[sigma], N):
            blob += word.to_bytes(width, "little")
            append(w)
    count = len(weights)
    if count:
        packed = np.frombuffer(bytes(blob), dtype=np.uint8).reshape(count, width).copy()
        wvec = np.asarray(weights, dtype=np.uint32)
        unique = np.unique(_row_keys(packed))
        if unique.shape[0] != count:
            raise RuntimeError(
                f"expansion emitted {count} words but only {unique.shape[0]} distinct; "
                "bijection invariant broken"
            )
    else:
        packed = np.zeros((0, width), dtype=np.uint8)
        wvec = np.zeros(0, dtype=np.uint32)
    return TBPathSet(N, tables.d_tilde, packed, wvec, tables.db.code)


def growth_profile(
    db: IEEDatabase, d_tilde: int, l_range: Iterable[int]
) -> list[tuple[int, int]]:
    """Number of weight < d_tilde tail-biting words at each length l.

    Counts come straight from the skeletons in closed form: a skeleton of
    j events, length L and last event length len_j, padded to length l
    with G = l - L zero loops, owns C(G+j-1, j-1) gap placements whose
    rotation counts sum to len_j*C(G+j-1, j-1) + G*C(G+j-1, j-1)/j.
    States without the zero loop contribute len_j once when L == l.
    """
    targets = sorted(set(int(l) for l in l_range))
    if not targets:
        return []
    if targets[0] < 1:
        raise ValueError(f"lengths must be >= 1, got {targets[0]}")
    if targets[-1] > db.max_len:
        raise CoverageError(
            f"database only covers event lengths <= {db.max_len}, need l={targets[-1]}; "
            f"re-collect with max_len >= {targets[-1]}"
        )
    if d_tilde > db.d_tilde:
        raise CoverageError(
            f"database only covers weights < {db.d_tilde}, need d_tilde={d_tilde}; "
            f"re-collect with d_tilde >= {d_tilde}"
        )
    counts = {l: 0 for l in targets}
    for sigma in db.ordering:
        iees = db.per_state.get(sigma, ())
        zero_index, skeletons = _skeletons_for_state(iees, d_tilde, targets)
        if zero_index is not None:
            for sk in skeletons:
                j = len(sk.events)
                for l in targets:
                    gap = l - sk.length
                    if gap < 0:
                        continue
                    placements = math.comb(gap + j - 1, j - 1)
                    rotations = sk.last_len * placements + (gap * placements) // j
                    counts[l] += rotations
        else:
            for sk in skeletons:
                if sk.length in counts:
                    counts[sk.length] += sk.last_len
    return [(l, counts[l]) for l in targets]
