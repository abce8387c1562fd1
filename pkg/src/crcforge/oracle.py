"""Brute-force reference implementations for small instances.

Everything here enumerates exhaustively and is deliberately naive: the
spectrum oracle encodes all 2^N inputs one by one through encode_tb, and
the IEE oracle is a plain recursive walk. Neither shares search logic
with the production collector or reconstructor, so agreement between the
two sides is meaningful evidence. Hard guards refuse instance sizes
where exhaustive enumeration stops being a reasonable test fixture.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .collector import IEE
from .encoder import ConvCode, encode_tb
from .errors import EnumerationGuardError
from .gf2 import GF2Poly, sequence_to_poly

__all__ = [
    "MAX_ORACLE_N",
    "MAX_ORACLE_V",
    "MAX_ORACLE_LEN",
    "OracleReport",
    "brute_force_spectrum",
    "brute_force_iees",
    "oracle_report",
]

MAX_ORACLE_N = 24
MAX_ORACLE_V = 4
MAX_ORACLE_LEN = 16


def _check_n(N: int) -> None:
    if N > MAX_ORACLE_N:
        raise EnumerationGuardError(
            f"oracle would enumerate 2^{N} inputs; refusing N > {MAX_ORACLE_N}"
        )


def brute_force_spectrum(code: ConvCode, N: int, crc: GF2Poly | None = None) -> dict[int, int]:
    """Weight histogram of all nonzero tail-biting paths of length N.

    With a crc, only inputs whose polynomial the crc divides are counted
    (the undetectable errors). Keys with zero count are omitted.
    """
    _check_n(N)
    if N < code.v:
        raise ValueError(f"need at least v={code.v} input bits, got {N}")
    counts: dict[int, int] = {}
    for u in range(1, 1 << N):
        if crc is not None and not crc.divides(sequence_to_poly(u, N)):
            continue
        inputs = tuple((u >> i) & 1 for i in range(N))
        path = encode_tb(code, inputs)
        counts[path.weight] = counts.get(path.weight, 0) + 1
    return counts


def brute_force_iees(
    code: ConvCode,
    state: int,
    d_tilde: int,
    max_len: int,
    ordering: Sequence[int] | None = None,
) -> list[IEE]:
    """All IEEs at one state by direct recursive walking.

    Sorted by (weight, length, packed input bits) to be comparable with
    collector output.
    """
    if code.v > MAX_ORACLE_V:
        raise EnumerationGuardError(
            f"oracle walks all paths; refusing v > {MAX_ORACLE_V} (got {code.v})"
        )
    if max_len > MAX_ORACLE_LEN:
        raise EnumerationGuardError(
            f"oracle walks all paths; refusing max_len > {MAX_ORACLE_LEN} (got {max_len})"
        )
    if ordering is None:
        ordering = range(code.num_states)
    ordering = tuple(ordering)
    position = ordering.index(state)
    blocked = frozenset(ordering[: position + 1])

    found: list[IEE] = []

    def walk(s: int, inputs: tuple[int, ...]) -> None:
        for b in (0, 1):
            t = code.next_state(s, b)
            longer = inputs + (b,)
            if t == state:
                candidate = IEE(
                    state,
                    longer,
                    _outputs_of(code, state, longer),
                    _weight_of(code, state, longer),
                )
                if candidate.weight < d_tilde:
                    found.append(candidate)
            elif t not in blocked and len(longer) < max_len:
                walk(t, longer)

    walk(state, ())
    found.sort(key=lambda e: (e.weight, e.length, e.input_bits))
    return found


def _outputs_of(code: ConvCode, state: int, inputs: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    s = state
    for b in inputs:
        out.extend(code.branch_output(s, b))
        s = code.next_state(s, b)
    return tuple(out)


def _weight_of(code: ConvCode, state: int, inputs: tuple[int, ...]) -> int:
    w = 0
    s = state
    for b in inputs:
        w += code.branch_weight(s, b)
        s = code.next_state(s, b)
    return w


@dataclass
class OracleReport:
    """Everything the exhaustive pass learned about one (code, N) pair."""

    code_octal: tuple[str, ...]
    N: int
    total_paths: int
    weight_counts: dict[int, int]
    crc_counts: dict[str, dict[int, int]] = field(default_factory=dict)
    iees_per_state: dict[int, list[IEE]] | None = None

    def counts_below(self, d_tilde: int) -> dict[int, int]:
        return {w: c for w, c in self.weight_counts.items() if w < d_tilde}


def oracle_report(
    code: ConvCode,
    N: int,
    crcs: Sequence[GF2Poly] = (),
    include_iees: bool = False,
    d_tilde: int | None = None,
    max_len: int | None = None,
) -> OracleReport:
    """Single exhaustive pass; one encode per input, residues per crc."""
    _check_n(N)
    if N < code.v:
        raise ValueError(f"need at least v={code.v} input bits, got {N}")
    weight_counts: dict[int, int] = {}
    crc_counts: dict[str, dict[int, int]] = {c.to_hex(): {} for c in crcs}
    crc_pairs = [(c.to_hex(), c) for c in crcs]
    for u in range(1, 1 << N):
        inputs = tuple((u >> i) & 1 for i in range(N))
        w = encode_tb(code, inputs).weight
        weight_counts[w] = weight_counts.get(w, 0) + 1
        for name, c in crc_pairs:
            if c.divides(sequence_to_poly(u, N)):
                crc_counts[name][w] = crc_counts[name].get(w, 0) + 1

    iees = None
    if include_iees:
        iees = {
            s: brute_force_iees(
                code,
                s,
                d_tilde if d_tilde is not None else 1 + 2 * code.n * N,
                max_len if max_len is not None else min(N, MAX_ORACLE_LEN),
            )
            for s in range(code.num_states)
        }
    return OracleReport(
        code_octal=code.generators_octal,
        N=N,
        total_paths=(1 << N) - 1,
        weight_counts=weight_counts,
        crc_counts=crc_counts,
        iees_per_state=iees,
    )
