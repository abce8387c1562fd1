import math

import pytest

from crcforge.collector import collect_iees
from crcforge.designer import (
    DistanceSpectrum,
    bound_sweep,
    candidate_list,
    db_to_linear,
    q_function,
    search_dso,
    truncated_union_bound,
    undetected_spectrum,
    write_bound_csv,
)
from crcforge.encoder import ConvCode
from crcforge.errors import CoverageError, InvalidCrcError
from crcforge.gf2 import GF2Poly, parse_hex_crc
from crcforge.oracle import brute_force_spectrum
from crcforge.reconstructor import build_tables, expand_and_dedup


@pytest.fixture(scope="module")
def code():
    return ConvCode(["13", "17"], 3)


@pytest.fixture(scope="module")
def paths12(code):
    db = collect_iees(code, 9, 12)
    return expand_and_dedup(build_tables(db, 12, 9), 12)


class TestCandidates:
    def test_degree_six_count_and_ends(self):
        cands = candidate_list(6)
        assert len(cands) == 32
        assert cands[0].bits == 0x41
        assert cands[-1].bits == 0x7F
        assert all(c.degree == 6 and c.bits & 1 for c in cands)

    def test_degree_three(self):
        assert [c.bits for c in candidate_list(3)] == [0x9, 0xB, 0xD, 0xF]

    def test_degree_one(self):
        assert [c.bits for c in candidate_list(1)] == [0x3]

    def test_degree_zero_rejected(self):
        with pytest.raises(InvalidCrcError):
            candidate_list(0)


class TestUndetectedSpectrum:
    @pytest.mark.parametrize("crc_bits", [0x9, 0xB, 0xD, 0xF, 0x13])
    def test_matches_oracle(self, code, paths12, crc_bits):
        crc = GF2Poly(crc_bits)
        spec = undetected_spectrum(paths12, crc)
        ref = {w: c for w, c in brute_force_spectrum(code, 12, crc).items() if w < 9}
        assert spec.nonzero() == ref

    def test_rejects_non_crc(self, paths12):
        with pytest.raises(InvalidCrcError):
            undetected_spectrum(paths12, GF2Poly(0b10))  # no constant term

    def test_parity_factor_kills_odd_distances(self, code):
        # Generators of odd+even tap weight preserve input parity, so any
        # CRC divisible by x+1 sees only even-weight paths.
        db = collect_iees(code, 10, 14)
        paths = expand_and_dedup(build_tables(db, 14, 10), 14)
        for crc_bits in (0x3, 0x9, 0xF, 0x63):
            crc = GF2Poly(crc_bits)
            q, r = divmod(crc, GF2Poly(0b11))
            if not r.is_zero:
                continue
            spec = undetected_spectrum(paths, crc)
            assert all(d % 2 == 0 for d in spec.nonzero()), hex(crc_bits)


class TestSearch:
    def test_winner_is_lexicographic_argmin(self, paths12):
        result = search_dso(paths12, 4)
        vectors = {
            c.to_hex(): tuple(result.spectra[c.to_hex()].counts[1:])
            for c in candidate_list(4)
        }
        best = min(vectors.values())
        argmin = {name for name, vec in vectors.items() if vec == best}
        assert {c.to_hex() for c in result.survivors} == argmin
        if len(argmin) == 1:
            assert result.winner.to_hex() in argmin
            assert not result.is_tie

    def test_rounds_shrink_monotonically(self, paths12):
        result = search_dso(paths12, 4)
        sizes = [r.survivors_remaining for r in result.rounds]
        assert sizes == sorted(sizes, reverse=True)
        assert all(r.survivors_remaining >= 1 for r in result.rounds)

    def test_single_candidate_returns_immediately(self, paths12):
        result = search_dso(paths12, 1)
        assert result.winner == GF2Poly(0x3)
        assert result.rounds == ()

    def test_tie_reported_not_broken(self, code):
        # Nothing weighs less than 2, so every candidate stays at zero.
        db = collect_iees(code, 2, 10)
        empty = expand_and_dedup(build_tables(db, 10, 2), 10)
        result = search_dso(empty, 6)
        assert result.is_tie
        assert result.winner is None
        assert len(result.survivors) == 32

    def test_unpacks_like_a_pair(self, paths12):
        winner, rounds = search_dso(paths12, 4)
        assert winner is None or winner.degree == 4
        assert all(hasattr(r, "c_star") for r in rounds)

    def test_coverage_guard(self, paths12):
        with pytest.raises(CoverageError):
            search_dso(paths12, 4, d_tilde=10)

    def test_threads_do_not_change_result(self, paths12):
        a = search_dso(paths12, 4, threads=1)
        b = search_dso(paths12, 4, threads=3)
        assert a.winner == b.winner
        assert a.rounds == b.rounds


Q_REFERENCE = {
    0.5: 0.3085375387259869,
    1.0: 0.1586552539314571,
    1.5: 0.06680720126885807,
    2.0: 0.02275013194817921,
    2.5: 0.006209665325776132,
    3.0: 0.001349898031630095,
    4.0: 3.167124183311998e-05,
    5.0: 2.866515718791939e-07,
    6.0: 9.865876450376946e-10,
    7.0: 1.279812543885835e-12,
    8.0: 6.22096057427178e-16,
}


class TestBounds:
    def test_q_function_reference_values(self):
        for x, ref in Q_REFERENCE.items():
            assert math.isclose(q_function(x), ref, rel_tol=1e-6), x

    def test_single_term_bound(self):
        spec = DistanceSpectrum(GF2Poly(0x63), 70, 18, tuple(
            735 if d == 12 else 0 for d in range(18)
        ))
        snr = db_to_linear(6.5)
        expect = 735 * q_function(math.sqrt(12 * snr))
        assert math.isclose(truncated_union_bound(spec, snr), expect, rel_tol=1e-12)

    def test_nonpositive_snr_rejected(self):
        spec = DistanceSpectrum(GF2Poly(0x63), 70, 18, (0,) * 18)
        with pytest.raises(ValueError):
            truncated_union_bound(spec, 0.0)

    def test_sweep_shape_and_monotonicity(self, paths12):
        specs = [undetected_spectrum(paths12, GF2Poly(b)) for b in (0x9, 0xB)]
        grid = [3 + 0.25 * i for i in range(17)]
        rows = bound_sweep(specs, grid)
        assert len(rows) == 17
        for (s1, v1), (s2, v2) in zip(rows, rows[1:]):
            assert s2 > s1
            assert all(b <= a for a, b in zip(v1, v2))  # bounds fall with SNR

    def test_sweep_grid_validation(self, paths12):
        spec = undetected_spectrum(paths12, GF2Poly(0x9))
        with pytest.raises(ValueError):
            bound_sweep([spec], [])
        with pytest.raises(ValueError):
            bound_sweep([spec], [3.0, 3.0])
        with pytest.raises(ValueError):
            bound_sweep([], [3.0])


class TestCsv:
    def test_roundtrip_canonical_name(self, paths12, tmp_path):
        spec = undetected_spectrum(paths12, GF2Poly(0x9))
        out = tmp_path / spec.csv_filename()
        spec.to_csv(out)
        again = DistanceSpectrum.from_csv(out)
        assert again == spec

    def test_filename_embeds_parameters(self, paths12):
        spec = undetected_spectrum(paths12, GF2Poly(0x9))
        assert spec.csv_filename() == "spectrum_0x9_N12_dt9.csv"

    def test_renamed_file_still_loads(self, paths12, tmp_path):
        spec = undetected_spectrum(paths12, GF2Poly(0x9))
        out = tmp_path / "spec_0x9.csv"
        spec.to_csv(out)
        again = DistanceSpectrum.from_csv(out)
        assert again.crc == spec.crc
        assert again.counts == spec.counts

    def test_unlabeled_file_rejected(self, paths12, tmp_path):
        spec = undetected_spectrum(paths12, GF2Poly(0x9))
        out = tmp_path / "mystery.csv"
        spec.to_csv(out)
        with pytest.raises(ValueError):
            DistanceSpectrum.from_csv(out)

    def test_bound_csv_header_and_determinism(self, paths12, tmp_path):
        specs = [undetected_spectrum(paths12, parse_hex_crc(h)) for h in ("0x9", "0xb")]
        rows = bound_sweep(specs, [3.0, 3.5, 4.0])
        p1, p2 = tmp_path / "b1.csv", tmp_path / "b2.csv"
        write_bound_csv(p1, specs, rows)
        write_bound_csv(p2, specs, rows)
        assert p1.read_bytes() == p2.read_bytes()
        lines = p1.read_text().splitlines()
        assert lines[0] == "snr_db,0x9,0xb"
        assert len(lines) == 4
