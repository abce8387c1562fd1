"""Collection of irreducible error events (IEEs).

For a chosen ordering sigma_0, sigma_1, ... of the trellis states, the
IEEs of sigma_i are the closed paths that start and end at sigma_i while
their interior avoids sigma_0..sigma_i (including sigma_i itself). Every
tail-biting path is a cyclic shift of a concatenation of IEEs of exactly
one state, so collecting every IEE of output weight below a threshold
d_tilde and length up to max_len once is enough to rebuild the complete
bounded-weight codeword list for any trellis length N <= max_len.

Collection is an exhaustive depth-first search per start state on the
reduced state diagram, pruned on accumulated weight >= d_tilde and length
> max_len. Two admissible lower bounds (cheapest remaining weight and
shortest remaining length back to the start state, from a Dijkstra /
BFS pass over the reduced diagram) cut provably dead branches early; they
never change the collected set. Catastrophic encoders are refused: they
have zero-weight cycles away from state 0, so weight pruning alone would
not bound the search.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import heapq
import json
from typing import Iterator, Sequence

from .encoder import ConvCode
from .errors import CatastrophicEncoderError, DatabaseFormatError

__all__ = [
    "IEE",
    "IEEDatabase",
    "collect_iees",
    "save_database",
    "load_database",
]

DB_FORMAT_VERSION = 1


class IEE:
    """One irreducible error event.

    Inputs are held packed (bit i = input at step i); the tuple views and
    the output bits are materialized on demand so that multi-million-event
    databases stay a few hundred megabytes.
    """

    __slots__ = ("start_state", "weight", "_bits", "_length", "_outputs", "_code")

    def __init__(
        self,
        start_state: int,
        inputs: Sequence[int],
        outputs: Sequence[int] | None,
        weight: int,
    ):
        self.start_state = start_state
        self.weight = weight
        self._length = len(inputs)
        bits = 0
        for i, b in enumerate(inputs):
            bits |= (b & 1) << i
        self._bits = bits
        self._outputs = tuple(outputs) if outputs is not None else None
        self._code: ConvCode | None = None

    @classmethod
    def _packed(cls, code: ConvCode, state: int, bits: int, length: int, weight: int) -> "IEE":
        self = cls.__new__(cls)
        self.start_state = state
        self.weight = weight
        self._bits = bits
        self._length = length
        self._outputs = None
        self._code = code
        return self

    @property
    def length(self) -> int:
        return self._length

    @property
    def input_bits(self) -> int:
        """Inputs packed into an int, bit i = input at step i."""
        return self._bits

    @property
    def inputs(self) -> tuple[int, ...]:
        return tuple((self._bits >> i) & 1 for i in range(self._length))

    @property
    def outputs(self) -> tuple[int, ...]:
        if self._outputs is None:
            if self._code is None:
                raise AttributeError("outputs were not stored and no code is attached")
            out: list[int] = []
            s = self.start_state
            for b in self.inputs:
                out.extend(self._code.branch_output(s, b))
                s = self._code.next_state(s, b)
            self._outputs = tuple(out)
        return self._outputs

    def inputs_bitstring(self) -> str:
        return "".join(str(b) for b in self.inputs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IEE):
            return NotImplemented
        return (
            self.start_state == other.start_state
            and self._length == other._length
            and self._bits == other._bits
            and self.weight == other.weight
        )

    def __hash__(self) -> int:
        return hash((self.start_state, self._length, self._bits, self.weight))

    def __repr__(self) -> str:
        return (
            f"IEE(state={self.start_state}, inputs={self.inputs_bitstring()}, "
            f"weight={self.weight})"
        )


def _materialize(code: ConvCode, state: int, bits: int, length: int) -> IEE:
    """Build an IEE record from packed input bits, validating closure."""
    weight = 0
    s = state
    for i in range(length):
        b = (bits >> i) & 1
        weight += code.branch_weight(s, b)
        s = code.next_state(s, b)
    if s != state:
        raise ValueError("input bits do not close at the start state")
    return IEE._packed(code, state, bits, length, weight)


def _return_bounds(
    code: ConvCode, sigma: int, blocked: frozenset[int]
) -> tuple[list[float], list[float]]:
    """Cheapest weight and shortest length from each state back to sigma.

    Interior states must avoid ``blocked`` and sigma itself. Unreachable
    states get inf, which prunes them outright.
    """
    inf = float("inf")
    preds: list[list[tuple[int, int]]] = [[] for _ in range(code.num_states)]
    for s in range(code.num_states):
        if s in blocked or s == sigma:
            continue
        for b in (0, 1):
            preds[code.next_state(s, b)].append((s, code.branch_weight(s, b)))

    def dijkstra(edge_cost_is_weight: bool) -> list[float]:
        dist = [inf] * code.num_states
        heap: list[tuple[float, int]] = []
        for s, w in preds[sigma]:
            cost = w if edge_cost_is_weight else 1
            if cost < dist[s]:
                dist[s] = cost
                heapq.heappush(heap, (cost, s))
        while heap:
            d, s = heapq.heappop(heap)
            if d > dist[s]:
                continue
            for t, w in preds[s]:
                cost = d + (w if edge_cost_is_weight else 1)
                if cost < dist[t]:
                    dist[t] = cost
                    heapq.heappush(heap, (cost, t))
        return dist

    return dijkstra(True), dijkstra(False)


def _search_state(
    code: ConvCode, sigma: int, blocked: frozenset[int], d_tilde: int, max_len: int
) -> list[tuple[int, int, int]]:
    """All IEEs at sigma as (length, weight, packed input bits) tuples.

    Iterative DFS with an explicit stack; partial paths are carried as
    packed ints so no undo bookkeeping is needed.
    """
    ret_w, ret_len = _return_bounds(code, sigma, blocked)
    found: list[tuple[int, int, int]] = []
    # Stack frames: (state, depth, weight, packed input bits so far).
    stack: list[tuple[int, int, int, int]] = [(sigma, 0, 0, 0)]
    next_state = code.next_state
    branch_weight = code.branch_weight
    while stack:
        s, depth, weight, bits = stack.pop()
        for b in (0, 1):
            t = next_state(s, b)
            w2 = weight + branch_weight(s, b)
            if w2 >= d_tilde:
                continue
            d2 = depth + 1
            if t == sigma:
                if d2 <= max_len:
                    found.append((d2, w2, bits | (b << depth)))
                continue
            if t in blocked:
                continue
            if w2 + ret_w[t] >= d_tilde or d2 + ret_len[t] > max_len:
                continue
            stack.append((t, d2, w2, bits | (b << depth)))
    found.sort(key=lambda rec: (rec[1], rec[0], rec[2]))
    return found


def _collect_one_state(
    generators_octal: Sequence[str],
    v: int,
    ordering: Sequence[int],
    position: int,
    d_tilde: int,
    max_len: int,
) -> list[tuple[int, int, int]]:
    """Worker entry point (picklable) for per-state parallel collection."""
    code = ConvCode(list(generators_octal), v)
    sigma = ordering[position]
    blocked = frozenset(ordering[:position])
    return _search_state(code, sigma, blocked, d_tilde, max_len)


class IEEDatabase:
    """The collected IEEs of one code under one ordering.

    per_state maps each state to its IEE tuple sorted by
    (weight, length, input bits); complete_up_to names the largest trellis
    length N the database provably covers (no IEE longer than max_len can
    take part in a length <= max_len tail-biting path).
    """

    __slots__ = ("generators_octal", "v", "n", "ordering", "d_tilde", "max_len", "per_state", "_code")

    def __init__(
        self,
        generators_octal: Sequence[str],
        v: int,
        ordering: Sequence[int],
        d_tilde: int,
        max_len: int,
        per_state: dict[int, tuple[IEE, ...]],
    ):
        self.generators_octal = tuple(generators_octal)
        self.v = v
        self.ordering = tuple(ordering)
        self.d_tilde = d_tilde
        self.max_len = max_len
        self.per_state = per_state
        self.n = len(self.generators_octal)
        self._code: ConvCode | None = None

    @property
    def code(self) -> ConvCode:
        if self._code is None:
            self._code = ConvCode(list(self.generators_octal), self.v)
        return self._code

    @property
    def complete_up_to(self) -> int:
        return self.max_len

    @property
    def num_iees(self) -> int:
        return sum(len(lst) for lst in self.per_state.values())

    def iees(self) -> Iterator[IEE]:
        for sigma in self.ordering:
            yield from self.per_state.get(sigma, ())

    def state_counts(self) -> dict[int, int]:
        return {sigma: len(self.per_state.get(sigma, ())) for sigma in self.ordering}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IEEDatabase):
            return NotImplemented
        return (
            self.generators_octal == other.generators_octal
            and self.v == other.v
            and self.ordering == other.ordering
            and self.d_tilde == other.d_tilde
            and self.max_len == other.max_len
            and self.per_state == other.per_state
        )

    def __repr__(self) -> str:
        gens = ",".join(self.generators_octal)
        return (
            f"IEEDatabase(({gens}) octal, v={self.v}, d_tilde={self.d_tilde}, "
            f"max_len={self.max_len}, {self.num_iees} events)"
        )


def collect_iees(
    code: ConvCode,
    d_tilde: int,
    max_len: int,
    ordering: Sequence[int] | None = None,
    threads: int = 1,
) -> IEEDatabase:
    """Collect every IEE of weight < d_tilde and length <= max_len.

    ``ordering`` defaults to natural state order 0..2^v-1, which keeps the
    zero-weight self-loop (state 0, input 0) as the padding event of the
    first partition class. With threads > 1 the per-state searches run in
    a process pool; the assembled database is identical either way.
    """
    if code.is_catastrophic:
        gens = ",".join(code.generators_octal)
        raise CatastrophicEncoderError(
            f"generators ({gens}) share a non-x factor; a zero-output cycle off "
            "state 0 exists and weight-pruned collection would not terminate"
        )
    if d_tilde < 1:
        raise ValueError(f"d_tilde must be >= 1, got {d_tilde}")
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    if ordering is None:
        ordering = range(code.num_states)
    ordering = tuple(ordering)
    if sorted(ordering) != list(range(code.num_states)):
        raise ValueError("ordering must be a permutation of all states")

    raws: list[list[tuple[int, int, int]]]
    if threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(
                    _collect_one_state,
                    code.generators_octal,
                    code.v,
                    ordering,
                    i,
                    d_tilde,
                    max_len,
                )
                for i in range(len(ordering))
            ]
            raws = [f.result() for f in futures]
    else:
        raws = [
            _search_state(code, ordering[i], frozenset(ordering[:i]), d_tilde, max_len)
            for i in range(len(ordering))
        ]

    per_state = {
        ordering[i]: tuple(
            _materialize(code, ordering[i], bits, length)
            for length, _w, bits in raws[i]
        )
        for i in range(len(ordering))
    }
    return IEEDatabase(code.generators_octal, code.v, ordering, d_tilde, max_len, per_state)


def _payload(db: IEEDatabase) -> dict:
    return {
        "format_version": DB_FORMAT_VERSION,
        "generators_octal": list(db.generators_octal),
        "v": db.v,
        "n": db.n,
        "ordering": list(db.ordering),
        "d_tilde": db.d_tilde,
        "max_len": db.max_len,
        "iees": [
            {"state": e.start_state, "inputs": e.inputs_bitstring(), "weight": e.weight}
            for e in db.iees()
        ],
    }


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def save_database(db: IEEDatabase, path) -> None:
    """Write the database as self-describing JSON with an integrity hash."""
    payload = _payload(db)
    payload["checksum"] = _checksum({k: v for k, v in payload.items()})
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_database(path) -> IEEDatabase:
    """Read a database file, verifying version, checksum, and contents.

    Outputs and weights are recomputed from the stored input bits; a
    stored weight that disagrees with the re-encoded one marks the file
    as corrupt.
    """
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DatabaseFormatError(f"cannot read database {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise DatabaseFormatError(f"{path}: not a database object")
    version = payload.get("format_version")
    if version != DB_FORMAT_VERSION:
        raise DatabaseFormatError(
            f"{path}: format version {version!r}, supported {DB_FORMAT_VERSION}"
        )
    declared = payload.pop("checksum", None)
    if declared != _checksum(payload):
        raise DatabaseFormatError(f"{path}: checksum mismatch, file corrupt")
    try:
        gens = payload["generators_octal"]
        v = payload["v"]
        n = payload["n"]
        ordering = tuple(payload["ordering"])
        d_tilde = payload["d_tilde"]
        max_len = payload["max_len"]
        iees = payload["iees"]
    except KeyError as exc:
        raise DatabaseFormatError(f"{path}: missing field {exc}") from exc

    code = ConvCode(list(gens), v)  # raises if v and tap degrees disagree
    if code.n != n:
        raise DatabaseFormatError(f"{path}: n={n} but {code.n} generators given")
    if sorted(ordering) != list(range(code.num_states)):
        raise DatabaseFormatError(f"{path}: ordering is not a state permutation")

    per_state: dict[int, list[IEE]] = {s: [] for s in ordering}
    for rec in iees:
        try:
            state = rec["state"]
            text = rec["inputs"]
            weight = rec["weight"]
        except (TypeError, KeyError) as exc:
            raise DatabaseFormatError(f"{path}: malformed IEE record {rec!r}") from exc
        if state not in per_state or not text or any(c not in "01" for c in text):
            raise DatabaseFormatError(f"{path}: malformed IEE record {rec!r}")
        bits = int(text[::-1], 2)
        try:
            event = _materialize(code, state, bits, len(text))
        except ValueError as exc:
            raise DatabaseFormatError(f"{path}: IEE does not close: {rec!r}") from exc
        if event.weight != weight:
            raise DatabaseFormatError(
                f"{path}: stored weight {weight} != recomputed {event.weight} for {rec!r}"
            )
        per_state[state].append(event)

    frozen = {
        s: tuple(sorted(lst, key=lambda e: (e.weight, e.length, e.input_bits)))
        for s, lst in per_state.items()
    }
    return IEEDatabase(code.generators_octal, v, ordering, d_tilde, max_len, frozen)


def verify_iee(db: IEEDatabase, event: IEE) -> bool:
    """Check the irreducibility predicate of one database entry.

    The walk must close at the start state and every interior state must
    avoid the start state and all states earlier in the ordering.
    """
    position = db.ordering.index(event.start_state)
    blocked = set(db.ordering[: position + 1])
    code = db.code
    s = event.start_state
    for i, b in enumerate(event.inputs):
        s = code.next_state(s, b)
        interior = i + 1 < event.length
        if interior and s in blocked:
            return False
    return s == event.start_state and event.weight < db.d_tilde
