import pytest
from hypothesis import given
from hypothesis import strategies as st

from crcforge.errors import InvalidCrcError, PolynomialParseError
from crcforge.gf2 import (
    GF2Poly,
    divides,
    parse_hex_crc,
    parse_octal,
    poly_divmod,
    poly_gcd,
    poly_mul,
    poly_rem,
    sequence_to_poly,
)


class TestParseOctal:
    def test_standard_table_values(self):
        # Octal digits list taps newest-input-first, so "13" is x^3+x^2+1.
        assert parse_octal("13").bits == 0b1101
        assert parse_octal("17").bits == 0b1111
        assert parse_octal("5").bits == 0b101
        assert parse_octal("7").bits == 0b111
        assert parse_octal("133").bits == 0b1101101
        assert parse_octal("171").bits == 0b1001111

    def test_degrees(self):
        assert parse_octal("13").degree == 3
        assert parse_octal("133").degree == 6

    def test_rejects_garbage(self):
        with pytest.raises(PolynomialParseError):
            parse_octal("18")
        with pytest.raises(PolynomialParseError):
            parse_octal("")
        with pytest.raises(PolynomialParseError):
            parse_octal("0")

    def test_octal_roundtrip(self):
        for text in ("13", "17", "5", "7", "133", "171", "561", "753"):
            assert parse_octal(text).to_octal() == text


class TestParseHexCrc:
    def test_values(self):
        assert parse_hex_crc("0x63", 6).bits == 0x63
        assert parse_hex_crc("0x43", 6).bits == 0x43
        assert parse_hex_crc("0x3", 1).bits == 0x3

    def test_degree_inferred_when_omitted(self):
        assert parse_hex_crc("0x63").degree == 6

    def test_even_value_rejected(self):
        with pytest.raises(InvalidCrcError):
            parse_hex_crc("0x62", 6)

    def test_wrong_width_rejected(self):
        with pytest.raises(InvalidCrcError):
            parse_hex_crc("0x63", 5)
        with pytest.raises(InvalidCrcError):
            parse_hex_crc("0x23", 6)

    def test_not_hex(self):
        with pytest.raises(PolynomialParseError):
            parse_hex_crc("0xzz", 6)


class TestArithmetic:
    def test_factorization_of_0x63(self):
        assert poly_mul(GF2Poly(0b11), GF2Poly(0b100001)) == GF2Poly(0x63)

    def test_remainder_example(self):
        # x^6 mod (x^6+x^5+x+1) = x^5+x+1
        assert poly_rem(GF2Poly(1 << 6), GF2Poly(0x63)) == GF2Poly(0x23)

    def test_0x43_divides_x63_plus_1(self):
        assert divides(GF2Poly(0x43), GF2Poly((1 << 63) | 1))

    def test_zero_poly(self):
        zero = GF2Poly(0)
        assert zero.is_zero
        assert zero.degree is None
        assert not zero

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            poly_divmod(GF2Poly(0b101), GF2Poly(0))

    def test_gcd(self):
        # x^2+x and x^2+1 share x+1
        assert poly_gcd(GF2Poly(0b110), GF2Poly(0b101)) == GF2Poly(0b11)

    def test_str_and_hex(self):
        p = GF2Poly(0x63)
        assert str(p) == "x^6 + x^5 + x + 1"
        assert p.to_hex() == "0x63"


nonzero_poly = st.integers(min_value=1, max_value=(1 << 64) - 1).map(GF2Poly)
any_poly = st.integers(min_value=0, max_value=(1 << 64) - 1).map(GF2Poly)


@given(any_poly, nonzero_poly)
def test_divmod_identity(a, b):
    q, r = poly_divmod(a, b)
    assert q * b + r == a
    assert r.is_zero or r.degree < b.degree


@given(nonzero_poly, nonzero_poly)
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(nonzero_poly, nonzero_poly, nonzero_poly)
def test_mul_associates_and_distributes(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(st.integers(min_value=0, max_value=(1 << 48) - 1))
def test_crc_encoding_identity(message_bits):
    # Appending the remainder of m(x)*x^m makes the word divisible.
    g = GF2Poly(0x63)
    m = GF2Poly(message_bits)
    shifted = m * GF2Poly(1 << g.degree)
    codeword = shifted + poly_rem(shifted, g)
    assert divides(g, codeword)


def test_sequence_to_poly_is_identity_on_packed_bits():
    assert sequence_to_poly(0b1011, 4).bits == 0b1011
    assert sequence_to_poly(1, 70).bits == 1


def test_sequence_to_poly_guards_width():
    with pytest.raises(ValueError):
        sequence_to_poly(0b10000, 4)
