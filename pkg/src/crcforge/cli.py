"""Command line front end.

Subcommands mirror the library stages: collect (IEE database), design
(CRC search), spectrum (one CRC's undetected spectrum), bound (union
bound sweep), growth (codeword count vs length), verify (cross-check
against brute force on a small instance). Exit codes: 0 success, 1
domain failure (catastrophic code, coverage, ties, corrupt files),
2 usage errors (argparse's native behavior).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass

from .collector import collect_iees, load_database, save_database, verify_iee
from .designer import (
    DistanceSpectrum,
    bound_sweep,
    search_dso,
    undetected_spectrum,
    write_bound_csv,
)
from .encoder import ConvCode, encode_tb
from .errors import CrcforgeError
from .gf2 import parse_hex_crc, parse_octal
from .oracle import MAX_ORACLE_LEN, MAX_ORACLE_V, brute_force_iees, oracle_report
from .reconstructor import build_tables, expand_and_dedup, growth_profile, iter_state_paths

__all__ = ["RunConfig", "main"]


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by the design-side commands."""

    N: int
    m: int
    d_tilde: int
    threads: int

    @classmethod
    def resolve(
        cls,
        *,
        k: int | None,
        n: int | None,
        m: int,
        d_tilde: int,
        threads: int,
        v: int,
    ) -> "RunConfig":
        if (k is None) == (n is None):
            raise ValueError("give exactly one of --k (message bits) or --n (block bits)")
        if m < 1:
            raise ValueError(f"CRC degree m must be >= 1, got {m}")
        N = n if n is not None else k + m
        if d_tilde < 2:
            raise ValueError(f"d_tilde must be >= 2, got {d_tilde}")
        if N < v:
            raise ValueError(f"block length N={N} is degenerate for memory v={v}")
        return cls(N, m, d_tilde, threads)


def _resolve_threads(flag: int | None) -> int:
    if flag is not None:
        if flag < 1:
            raise ValueError(f"--threads must be >= 1, got {flag}")
        return flag
    env = os.environ.get("CRCFORGE_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"CRCFORGE_THREADS must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"CRCFORGE_THREADS must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def _parse_gens(text: str) -> list[str]:
    gens = [g.strip() for g in text.split(",") if g.strip()]
    if len(gens) < 1:
        raise ValueError(f"--gens needs octal generators, got {text!r}")
    return gens


def _parse_snr_grid(text: str) -> list[float]:
    """start:step:stop, inclusive on both ends."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"--snr expects start:step:stop, got {text!r}")
    start, step, stop = (float(p) for p in parts)
    if step <= 0:
        raise ValueError(f"SNR step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"SNR range is empty: {text!r}")
    count = int(round((stop - start) / step))
    if abs(start + count * step - stop) > 1e-9:
        raise ValueError(f"SNR step does not land on the endpoint: {text!r}")
    return [start + i * step for i in range(count + 1)]


def _parse_l_range(text: str) -> range:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"--l-range expects lmin:lmax, got {text!r}")
    lo, hi = int(parts[0]), int(parts[1])
    if lo < 1 or hi < lo:
        raise ValueError(f"bad length range {text!r}")
    return range(lo, hi + 1)


def cmd_collect(args) -> int:
    code = ConvCode(_parse_gens(args.gens), args.v)
    ordering = None
    if args.ordering:
        ordering = [int(s) for s in args.ordering.split(",")]
    threads = _resolve_threads(args.threads)
    start = time.perf_counter()
    db = collect_iees(code, args.dtilde, args.max_len, ordering=ordering, threads=threads)
    elapsed = time.perf_counter() - start
    for state, count in db.state_counts().items():
        print(f"state {state}: {count} events")
    print(f"collected {db.num_iees} events in {elapsed:.2f} s")
    save_database(db, args.out)
    print(f"saved {args.out}")
    return 0


def cmd_design(args) -> int:
    db = load_database(args.iee)
    threads = _resolve_threads(args.threads)
    d_tilde = args.dtilde if args.dtilde is not None else db.d_tilde
    cfg = RunConfig.resolve(
        k=args.k, n=args.n, m=args.m, d_tilde=d_tilde, threads=threads, v=db.v
    )
    tables = build_tables(db, cfg.N, cfg.d_tilde)
    paths = expand_and_dedup(tables, cfg.N)
    print(f"expanded {len(paths)} paths of weight < {cfg.d_tilde} at N={cfg.N}")
    result = search_dso(paths, cfg.m, cfg.d_tilde, threads=cfg.threads)
    for row in result.rounds:
        survivors = ",".join(row.survivors_hex)
        print(f"d={row.d} C*={row.c_star} survivors={row.survivors_remaining} [{survivors}]")

    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    log_path = os.path.join(out_dir, f"elimination_m{cfg.m}_N{cfg.N}_dt{cfg.d_tilde}.csv")
    with open(log_path, "w", newline="\n") as fh:
        fh.write("d,c_star,survivors_remaining,survivor_list_hex\n")
        for row in result.rounds:
            fh.write(
                f"{row.d},{row.c_star},{row.survivors_remaining},"
                + ";".join(row.survivors_hex)
                + "\n"
            )
    print(f"wrote {log_path}")

    if result.is_tie:
        tied = ",".join(c.to_hex() for c in result.survivors)
        print(
            f"candidates indistinguishable below d_tilde={cfg.d_tilde}: {tied}; "
            "re-collect with a larger d_tilde to separate them"
        )
        return 1
    spectrum = result.spectra[result.winner.to_hex()]
    spec_path = os.path.join(out_dir, spectrum.csv_filename())
    spectrum.to_csv(spec_path)
    print(f"wrote {spec_path}")
    print(f"DSO CRC: {result.winner.to_hex()}")
    return 0


def cmd_spectrum(args) -> int:
    db = load_database(args.iee)
    threads = _resolve_threads(args.threads)
    d_tilde = args.dtilde if args.dtilde is not None else db.d_tilde
    crc = parse_hex_crc(args.crc)
    cfg = RunConfig.resolve(
        k=args.k, n=args.n, m=crc.degree, d_tilde=d_tilde, threads=threads, v=db.v
    )
    tables = build_tables(db, cfg.N, cfg.d_tilde)
    paths = expand_and_dedup(tables, cfg.N)
    spectrum = undetected_spectrum(paths, crc)
    for d, count in spectrum.nonzero().items():
        print(f"d={d} A_d={count}")
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, spectrum.csv_filename())
    spectrum.to_csv(path)
    print(f"wrote {path}")
    return 0


def cmd_bound(args) -> int:
    files = [f.strip() for f in args.spectra.split(",") if f.strip()]
    if not files:
        raise ValueError("--spectra needs at least one CSV file")
    spectra = [DistanceSpectrum.from_csv(f) for f in files]
    grid = _parse_snr_grid(args.snr)
    rows = bound_sweep(spectra, grid)
    write_bound_csv(args.out, spectra, rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def cmd_growth(args) -> int:
    db = load_database(args.iee)
    d_tilde = args.dtilde if args.dtilde is not None else db.d_tilde
    profile = growth_profile(db, d_tilde, _parse_l_range(args.l_range))
    for l, count in profile:
        print(f"l={l} count={count}")
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write("l,count\n")
            for l, count in profile:
                fh.write(f"{l},{count}\n")
        print(f"wrote {args.out}")
    return 0


def cmd_verify(args) -> int:
    code = ConvCode(_parse_gens(args.gens), args.v)
    N, d_tilde = args.n, args.dtilde
    if N > 16:
        raise ValueError(f"verify enumerates all 2^N inputs; keep N <= 16 (got {N})")
    threads = _resolve_threads(args.threads)

    db = collect_iees(code, d_tilde, max_len=N, threads=threads)
    tables = build_tables(db, N, d_tilde)
    paths = expand_and_dedup(tables, N)
    report = oracle_report(code, N)

    failures = 0

    def check(name: str, ok: bool, detail: str) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {name} ({detail})")
        if not ok:
            failures += 1

    expect = {w: c for w, c in report.weight_counts.items() if w < d_tilde}
    got = paths.counts_by_weight()
    check("spectrum-match", got == expect, f"{len(paths)} paths below d_tilde={d_tilde}")

    check("cyclic-closure", paths.is_cyclic_closed(), f"{len(paths)} paths")

    oracle_classes: dict[int, set[int]] = {s: set() for s in db.ordering}
    position = {s: i for i, s in enumerate(db.ordering)}
    for u in range(1, 1 << N):
        inputs = tuple((u >> i) & 1 for i in range(N))
        path = encode_tb(code, inputs)
        if path.weight >= d_tilde:
            continue
        anchor = min(path.states[:N], key=position.__getitem__)
        oracle_classes[anchor].add(u)
    ours = {
        s: {word for word, _w in iter_state_paths(tables, s)} for s in db.ordering
    }
    check(
        "partition",
        ours == oracle_classes,
        f"{len(db.ordering)} classes, {sum(len(v) for v in ours.values())} paths",
    )

    irreducible = all(verify_iee(db, e) for e in db.iees())
    check("irreducibility", irreducible, f"{db.num_iees} events")

    if code.v <= MAX_ORACLE_V and N <= MAX_ORACLE_LEN:
        agree = all(
            [
                (e.start_state, e.inputs, e.weight)
                for e in db.per_state[s]
            ]
            == [
                (e.start_state, e.inputs, e.weight)
                for e in brute_force_iees(code, s, d_tilde, N)
            ]
            for s in db.ordering
        )
        check("iee-exhaustive", agree, f"{db.num_iees} events vs brute force")

    print("PASS" if failures == 0 else "FAIL")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crcforge",
        description="Design distance-spectrum-optimal CRCs for tail-biting convolutional codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_threads(p):
        p.add_argument(
            "--threads",
            type=int,
            default=None,
            help="worker count (default: CRCFORGE_THREADS or all cores); results do not depend on it",
        )

    p = sub.add_parser("collect", help="collect the IEE database of a code")
    p.add_argument("--gens", required=True, help="octal generators, comma separated (e.g. 13,17)")
    p.add_argument("--v", type=int, required=True, help="encoder memory")
    p.add_argument("--dtilde", type=int, required=True, help="exclusive weight bound")
    p.add_argument("--max-len", type=int, required=True, help="longest event to store")
    p.add_argument("--ordering", default=None, help="state ordering, comma separated")
    p.add_argument("--out", required=True, help="output JSON database")
    add_threads(p)
    p.set_defaults(func=cmd_collect)

    p = sub.add_parser("design", help="search the DSO CRC over a path set")
    p.add_argument("--iee", required=True, help="IEE database from collect")
    p.add_argument("--k", type=int, default=None, help="message bits (N = k + m)")
    p.add_argument("--n", type=int, default=None, help="block bits")
    p.add_argument("--m", type=int, required=True, help="CRC degree")
    p.add_argument("--dtilde", type=int, default=None, help="screening bound (default: database's)")
    p.add_argument("--out-dir", default=".", help="where CSV outputs go")
    add_threads(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("spectrum", help="undetected spectrum of one CRC")
    p.add_argument("--iee", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--crc", required=True, help="CRC in hex, e.g. 0x63")
    p.add_argument("--dtilde", type=int, default=None)
    p.add_argument("--out-dir", default=".")
    add_threads(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bound", help="truncated union bound sweep")
    p.add_argument("--spectra", required=True, help="comma separated spectrum CSVs")
    p.add_argument("--snr", required=True, help="start:step:stop in dB, inclusive")
    p.add_argument("--out", default="bounds.csv")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("growth", help="codeword count vs trellis length")
    p.add_argument("--iee", required=True)
    p.add_argument("--dtilde", type=int, default=None)
    p.add_argument("--l-range", required=True, help="lmin:lmax, inclusive")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("verify", help="cross-check the pipeline against brute force")
    p.add_argument("--gens", required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dtilde", type=int, required=True)
    add_threads(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CrcforgeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
