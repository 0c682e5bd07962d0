"""The coordinate selection operator, its complement, and the split/merge pair.

select(x, y) reads x at the positions where y is 1; split additionally reads
the complementary positions, and merge is its exact inverse.  Everything is
defined on equal-length finite strings; infinite selection is recovered by
prefix consistency.
"""

from __future__ import annotations

import numpy as np

from .bitseq import BitString

# strings up to this length run on plain integers instead of numpy
_SMALL = 64


class SelectionResult:
    """A selected subsequence together with the positions it came from.

    positions[j-1] is the 1-indexed coordinate of the j-th selected bit,
    i.e. the index of the j-th one in y.
    """

    __slots__ = ("selected", "positions")

    def __init__(self, selected: BitString, positions: np.ndarray):
        self.selected = selected
        self.positions = positions

    def __repr__(self):
        return f"SelectionResult(selected={self.selected!r}, positions={self.positions!r})"


def _check_equal_length(x: BitString, y: BitString) -> None:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: |x|={len(x)}, |y|={len(y)}")


def select(x: BitString, y: BitString) -> SelectionResult:
    """The subsequence of x at the coordinates where y has a 1."""
    _check_equal_length(x, y)
    ya = y.to_array()
    positions = np.flatnonzero(ya).astype(np.int64) + 1
    selected = BitString.from_array(x.to_array()[positions - 1])
    return SelectionResult(selected, positions)


def complement(y: BitString) -> BitString:
    """Bitwise negation."""
    return BitString.from_array(1 - y.to_array())


def split(x: BitString, y: BitString) -> tuple[BitString, BitString]:
    """(x/y, x/complement(y)); the two parts partition the bits of x."""
    _check_equal_length(x, y)
    n = len(x)
    if n <= _SMALL:
        xi, yi = x.to_int(), y.to_int()
        a = b = 0
        na = nb = 0
        for i in range(n):  # i indexes positions from the last backwards
            bit = (xi >> i) & 1
            if (yi >> i) & 1:
                a |= bit << na
                na += 1
            else:
                b |= bit << nb
                nb += 1
        return BitString.from_int(a, na), BitString.from_int(b, nb)
    xa = x.to_array()
    ya = y.to_array().astype(bool)
    return BitString.from_array(xa[ya]), BitString.from_array(xa[~ya])


def merge(a: BitString, b: BitString, y: BitString) -> BitString:
    """The unique x with x/y = a and x/complement(y) = b."""
    ones = y.count_ones()
    if len(a) != ones or len(b) != len(y) - ones:
        raise ValueError(
            f"shape mismatch: |a|={len(a)} vs ones={ones}, |b|={len(b)} vs zeros={len(y) - ones}"
        )
    n = len(y)
    if n <= _SMALL:
        ai, bi, yi = a.to_int(), b.to_int(), y.to_int()
        ka = kb = 0
        out = 0
        for i in range(n):  # i indexes positions from the last backwards
            if (yi >> i) & 1:
                bit = (ai >> ka) & 1
                ka += 1
            else:
                bit = (bi >> kb) & 1
                kb += 1
            out |= bit << i
        return BitString.from_int(out, n)
    ya = y.to_array().astype(bool)
    out = np.empty(n, dtype=np.uint8)
    out[ya] = a.to_array()
    out[~ya] = b.to_array()
    return BitString.from_array(out)


def tau_prefix(y: BitString, m: int) -> list[int]:
    """[tau(1), ..., tau(m)]: the indices of the first m ones of y."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    ya = y.to_array()
    positions = np.flatnonzero(ya)[:m]
    if positions.size < m:
        raise ValueError(f"y has only {int(ya.sum())} ones, needed {m}")
    return [int(p) + 1 for p in positions]
