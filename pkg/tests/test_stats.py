import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from seqlab.bitseq import BitString
from seqlab.generators import champernowne, fibonacci_word, periodic
from seqlab.stats import (
    StatCurve,
    block_freqs,
    density,
    discrepancy,
    discrepancy_witness,
    empirical_entropy,
    factor_complexity,
    lz78_ratio,
)


def test_block_freqs_hand_count():
    dist = block_freqs(BitString("0101010101"), 2)
    assert dist.windows == 9
    assert dist.count("01") == 5
    assert dist.count("10") == 4
    assert dist.count("00") == 0 and dist.count("11") == 0
    assert dist.freq("01") == Fraction(5, 9)


def test_block_freqs_edges():
    assert block_freqs(BitString("1111"), 1).freq("1") == 1
    dist = block_freqs(BitString("01"), 2)
    assert dist.windows == 1 and dist.freq("01") == 1
    with pytest.raises(ValueError):
        block_freqs(BitString("01"), 3)
    with pytest.raises(ValueError):
        block_freqs(BitString("01"), 0)


def test_block_freqs_counts_sum_to_windows():
    for text in ("0", "0110", "10101110010", "0" * 50):
        s = BitString(text)
        for k in range(1, min(8, len(s)) + 1):
            dist = block_freqs(s, k)
            assert sum(c for _, c in dist.items()) == dist.windows


def test_block_freqs_pattern_validation():
    dist = block_freqs(BitString("0101"), 2)
    with pytest.raises(ValueError):
        dist.count("012")
    with pytest.raises(ValueError):
        dist.count("0")


def test_discrepancy_pins():
    assert discrepancy(BitString("1" * 100), 1) == 0.5
    assert discrepancy(periodic(BitString("01"), 10_000), 1) == 0.0
    value, witness = discrepancy_witness(BitString("1111"), 1)
    assert (value, witness) == (0.5, "0")  # tie between 0 and 1 breaks low


def test_discrepancy_zero_iff_flat():
    assert discrepancy(BitString("0011"), 1) == 0.0
    assert discrepancy(BitString("0011"), 2) > 0


def test_discrepancy_missing_pattern_witness():
    # repeated 001 has the three other 2-blocks near 1/3 each, so the absent
    # block 11 carries the maximal deviation 1/4
    value, witness = discrepancy_witness(periodic(BitString("001"), 99), 2)
    assert witness == "11"
    assert value == 0.25


def test_champernowne_discrepancy_decays():
    d_small = discrepancy(champernowne(1_000), 1)
    d_big = discrepancy(champernowne(100_000), 1)
    assert d_big < d_small


def test_empirical_entropy_pins():
    assert empirical_entropy(BitString("1" * 64), 1) == 0.0
    assert empirical_entropy(BitString("1" * 64), 5) == 0.0
    assert empirical_entropy(periodic(BitString("01"), 10_000), 1) == 1.0
    # H(5/9, 4/9) / 2 for the ten-bit alternating string
    h = empirical_entropy(BitString("0101010101"), 2)
    expected = -(5 / 9 * math.log2(5 / 9) + 4 / 9 * math.log2(4 / 9)) / 2
    assert abs(h - expected) < 1e-12
    assert abs(h - 0.4956) < 5e-4


def test_entropy_support_bound():
    # H of k-block frequencies is at most log2(number of distinct blocks)
    for seq in (fibonacci_word(20_000), champernowne(20_000)):
        for k in range(1, 13):
            bound = math.log2(factor_complexity(seq, k)) / k
            assert empirical_entropy(seq, k) <= bound + 1e-12


def test_factor_complexity_pins():
    assert factor_complexity(fibonacci_word(100_000), 5) == 6
    assert factor_complexity(BitString("1" * 40), 7) == 1
    assert factor_complexity(champernowne(100_000), 5) == 32


def test_fibonacci_factor_complexity_is_k_plus_1():
    word = fibonacci_word(100_000)
    for k in range(1, 25):
        assert factor_complexity(word, k) == k + 1


def test_lz78_hand_parse():
    # 0 | 1 | 00 | 10 | 100 | 1001
    phrases, ratio = lz78_ratio(BitString("0100101001001"))
    assert phrases == 6
    assert ratio == pytest.approx(6 * (3 + 1) / 13)


def test_lz78_constant_run():
    # all-zero input parses into phrases 0, 00, 000, ...: c(c+1)/2 >= n
    phrases, ratio = lz78_ratio(BitString("0" * 10_000))
    assert phrases == 141
    assert ratio == pytest.approx(141 * 9 / 10_000)
    phrases, ratio = lz78_ratio(BitString("0" * 100_000))
    assert phrases == 447
    assert ratio < 0.05
    with pytest.raises(ValueError):
        lz78_ratio(BitString(""))


def test_lz78_separates_fibonacci_from_champernowne():
    n = 100_000
    assert lz78_ratio(fibonacci_word(n))[1] < lz78_ratio(champernowne(n))[1]


def test_density():
    assert density(BitString("0101")) == Fraction(1, 2)
    assert density(BitString("0000")) == 0
    fib = fibonacci_word(100_000)
    assert abs(density(fib) - Fraction(381966, 1000000)) < Fraction(1, 1000)
    with pytest.raises(ValueError):
        density(BitString(""))


def test_block_freqs_reproducible():
    s = champernowne(5_000)
    a = block_freqs(s, 6)
    b = block_freqs(s, 6)
    assert a.to_rows() == b.to_rows()


def test_stat_curve_csv():
    curve = StatCurve("v", [(1, 0.5), (2, 0.25)], {"extra": [1, 2]})
    text = curve.to_csv()
    assert text.splitlines()[0] == "n,v,extra"
    assert text.splitlines()[1] == "1,0.5,1"
    with pytest.raises(ValueError):
        StatCurve("v", [(2, 0.1), (1, 0.2)])


@settings(max_examples=100)
@given(st.text(alphabet="01", min_size=1, max_size=120), st.integers(1, 6))
def test_block_freq_sum_property(text, k):
    if k > len(text):
        k = len(text)
    s = BitString(text)
    dist = block_freqs(s, k)
    total = sum(dist.freq(format(code, f"0{k}b")) for code in range(1 << k))
    assert total == 1
