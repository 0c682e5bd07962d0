"""Block statistics: normality, entropy, and compressibility diagnostics.

Counts are exact integers over fully-contained windows (j = 1 .. n-k+1);
floating point enters only in the final entropy/ratio arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bitseq import BitString

# numpy int64 codes cover block lengths up to this; beyond it a slow exact
# fallback kicks in
_NUMPY_MAX_K = 62
_DENSE_MAX_K = 20  # bincount above this would allocate 2^k counters


@dataclass
class StatCurve:
    """A checkpointed series (n, value), emitted as CSV."""

    label: str
    points: list
    companions: dict = field(default_factory=dict)

    def __post_init__(self):
        ns = [n for n, _ in self.points]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("checkpoints must be strictly increasing")

    def to_csv(self) -> str:
        header = ["n", self.label, *self.companions.keys()]
        lines = [",".join(header)]
        cols = list(self.companions.values())
        for i, (n, v) in enumerate(self.points):
            row = [str(n), _fmt(v)] + [_fmt(col[i]) for col in cols]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


class BlockDistribution:
    """Overlapping k-block counts over the n-k+1 windows of a string.

    Every k-bit pattern is a valid key of count()/freq(); only occurring
    patterns are stored.
    """

    def __init__(self, k: int, windows: int, counts: dict):
        self.k = k
        self.windows = windows
        self._counts = counts

    def count(self, pattern) -> int:
        return self._counts.get(self._code(pattern), 0)

    def freq(self, pattern) -> Fraction:
        return Fraction(self.count(pattern), self.windows)

    def _code(self, pattern) -> int:
        if isinstance(pattern, BitString):
            if len(pattern) != self.k:
                raise ValueError(f"pattern length {len(pattern)} != k={self.k}")
            return pattern.to_int()
        if isinstance(pattern, str):
            if len(pattern) != self.k or any(ch not in "01" for ch in pattern):
                raise ValueError(f"pattern must be {self.k} characters of 0/1")
            return int(pattern, 2) if pattern else 0
        return int(pattern)

    def distinct(self) -> int:
        return len(self._counts)

    def items(self):
        """(pattern, count) for occurring patterns, lexicographic order."""
        for code in sorted(self._counts):
            yield format(code, f"0{self.k}b"), self._counts[code]

    def to_rows(self) -> list:
        return list(self.items())


def _window_codes(arr: np.ndarray, k: int) -> np.ndarray:
    w = arr.size - k + 1
    codes = np.zeros(w, dtype=np.int64)
    for j in range(k):
        np.left_shift(codes, 1, out=codes)
        np.bitwise_or(codes, arr[j : j + w].astype(np.int64), out=codes)
    return codes


def block_freqs(x: BitString, k: int) -> BlockDistribution:
    """Counts of every k-block over the fully-contained windows of x."""
    n = len(x)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    windows = n - k + 1
    arr = x.to_array()
    if k <= _NUMPY_MAX_K:
        codes = _window_codes(arr, k)
        if k <= _DENSE_MAX_K:
            dense = np.bincount(codes, minlength=1 << k)
            nz = np.flatnonzero(dense)
            counts = {int(c): int(dense[c]) for c in nz}
        else:
            uniq, cnt = np.unique(codes, return_counts=True)
            counts = {int(c): int(m) for c, m in zip(uniq, cnt)}
    else:
        counts = {}
        bits = arr.tolist()
        code = 0
        for b in bits[:k]:
            code = (code << 1) | b
        mask = (1 << k) - 1
        counts[code] = 1
        for j in range(k, n):
            code = ((code << 1) | bits[j]) & mask
            counts[code] = counts.get(code, 0) + 1
    return BlockDistribution(k, windows, counts)


def discrepancy(x: BitString, k: int) -> float:
    """max over all 2^k patterns of |freq - 2^-k|."""
    return discrepancy_witness(x, k)[0]


def discrepancy_witness(x: BitString, k: int):
    """(discrepancy, witness pattern); ties break to the lexicographically
    smallest pattern.  Comparisons are integer-exact, the value alone is
    rounded to float at the end."""
    dist = block_freqs(x, k)
    w = dist.windows
    scale = 1 << k
    # deviations on the common denominator w * 2^k
    best = -1
    best_code = 0
    for code in sorted(dist._counts):
        dev = abs(dist._counts[code] * scale - w)
        if dev > best:
            best, best_code = dev, code
    if len(dist._counts) < scale and w >= best:
        missing = _smallest_missing(dist._counts, scale)
        if w > best or missing < best_code:
            best, best_code = w, missing
    return best / (w * scale), format(best_code, f"0{k}b")


def _smallest_missing(counts: dict, scale: int) -> int:
    code = 0
    while code in counts:
        code += 1
    if code >= scale:
        raise AssertionError("no missing pattern")
    return code


def empirical_entropy(x: BitString, k: int) -> float:
    """Shannon entropy (base 2) of the k-block frequencies, divided by k."""
    dist = block_freqs(x, k)
    w = dist.windows
    terms = []
    for c in dist._counts.values():
        p = c / w
        terms.append(-p * math.log2(p))
    return math.fsum(terms) / k


def factor_complexity(x: BitString, k: int) -> int:
    """Number of distinct k-blocks occurring in x."""
    return block_freqs(x, k).distinct()


def lz78_ratio(x: BitString):
    """(phrase count c, compression ratio c*(ceil(log2(c+1))+1)/|x|).

    Incremental LZ78 parse: each phrase extends a previously seen phrase by
    one bit; a trailing partial phrase counts as a (possibly repeated)
    phrase.
    """
    n = len(x)
    if n < 1:
        raise ValueError("input must be nonempty")
    children: dict = {}
    node = 0
    next_id = 1
    phrases = 0
    for b in x.to_array().tolist():
        key = (node, b)
        nxt = children.get(key)
        if nxt is None:
            children[key] = next_id
            next_id += 1
            phrases += 1
            node = 0
        else:
            node = nxt
    if node:
        phrases += 1  # unfinished final phrase, repeats an existing one
    ratio = phrases * (_ceil_log2(phrases + 1) + 1) / n
    return phrases, ratio


def _ceil_log2(m: int) -> int:
    return (m - 1).bit_length()


def density(y: BitString) -> Fraction:
    """Exact fraction of ones."""
    if len(y) == 0:
        raise ValueError("density of the empty string is undefined")
    return Fraction(y.count_ones(), len(y))
