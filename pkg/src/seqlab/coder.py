"""Exact-rational monotone arithmetic coder.

The encoder keeps the current interval as an integer triple (lo, hi, den),
meaning [lo/den, hi/den) within [0,1), and never rounds: den is the product
of the conditional denominators consumed so far (times a power of two from
straddle handling, cancelled opportunistically).  A bit is emitted when the
interval fits in a half of [0,1); an interval straddling the midpoint but
inside the middle half defers one follow bit.  Each of these operations
doubles the interval, so

    emitted + pending == total doublings,    width == P(prefix) * 2^doublings,

and since the renormalized width always lies in (1/4, 1], the stream length
emitted + pending never exceeds the strict ceiling of -log2 P(prefix) by
more than one bit.  The decoder mirrors the same transforms on an exact
dyadic interval of code numbers, so round trips are bit-exact and decoding
is monotone in the code prefix.
"""

from __future__ import annotations

import numpy as np

from .bitseq import BitString
from .measures import ComputableMeasure, _strict_ceil_neg_log2_parts
from .stats import StatCurve

try:  # GMP-backed integers cut the interval arithmetic cost roughly in half
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover
    _big = int

# Pinned project-wide slack constant: emitted+pending (and the flushed
# total) stay within this many bits of ceil(-log2 P).  Analysis gives 1 for
# the running stream and 4 after a flush; 8 leaves headroom and is asserted
# in the acceptance suite.
LENGTH_SLACK_BITS = 8


class CodeStream:
    """Streaming encoder state for one measure; single-owner, mutable."""

    def __init__(self, measure: ComputableMeasure):
        self._cursor = measure.cursor()
        self._lo = _big(0)
        self._hi = _big(1)
        self._den = _big(1)
        self._emitted = bytearray()
        self._pending = 0
        self._consumed = 0

    # -- queries --------------------------------------------------------

    @property
    def emitted_count(self) -> int:
        return len(self._emitted)

    @property
    def pending_follow(self) -> int:
        return self._pending

    @property
    def length_with_pending(self) -> int:
        """Emitted plus pending bits: the exact doubling count."""
        return len(self._emitted) + self._pending

    @property
    def consumed(self) -> int:
        return self._consumed

    @property
    def bits(self) -> BitString:
        """The emitted code prefix (un-flushed)."""
        return BitString.from_array(np.frombuffer(bytes(self._emitted), dtype=np.uint8))

    @property
    def interval(self):
        """The exact current interval [lo, hi) as a Fraction pair."""
        from fractions import Fraction

        return Fraction(self._lo, self._den), Fraction(self._hi, self._den)

    # -- encoding ---------------------------------------------------------

    def feed(self, bit: int) -> None:
        """Consume one source bit, emitting any code bits it determines."""
        q = self._cursor.prob_one()
        a, c = q.numerator, q.denominator
        lo, hi = self._lo, self._hi
        w = hi - lo
        lo *= c
        hi *= c
        den = self._den * c
        mid = lo + w * (c - a)
        if bit:
            lo = mid
        else:
            hi = mid
        if lo == hi:
            raise ValueError(f"zero probability at source bit {self._consumed + 1}")
        self._cursor.advance(bit)
        self._consumed += 1

        emitted = self._emitted
        pending = self._pending
        while True:
            if 2 * hi <= den:
                emitted.append(0)
                if pending:
                    emitted.extend(b"\x01" * pending)
                    pending = 0
                lo *= 2
                hi *= 2
            elif 2 * lo >= den:
                emitted.append(1)
                if pending:
                    emitted.extend(b"\x00" * pending)
                    pending = 0
                lo = 2 * lo - den
                hi = 2 * hi - den
            elif 4 * lo >= den and 4 * hi <= 3 * den:
                pending += 1
                lo = 4 * lo - den
                hi = 4 * hi - den
                den *= 2
            else:
                break
        while not (lo | hi | den) & 1:
            lo >>= 1
            hi >>= 1
            den >>= 1
        self._lo, self._hi, self._den, self._pending = lo, hi, den, pending

    def feed_bits(self, s: BitString) -> None:
        for b in s:
            self.feed(b)

    def flushed_bits(self) -> BitString:
        """Emitted bits plus the minimal closing bits that pin the interval.

        Leaves the stream untouched, so a run can be flushed at every
        checkpoint and still extended afterwards.  Closing bits are forced
        until every continuation of the flushed code decodes through the
        consumed prefix: pending follows resolved and [0,1] inside the
        interval in current coordinates.
        """
        lo, hi, den = self._lo, self._hi, self._den
        pending = self._pending
        out = bytearray(self._emitted)
        while pending or not (lo <= 0 and hi >= den):
            if lo + hi <= den:  # midpoint in the lower half
                out.append(0)
                if pending:
                    out.extend(b"\x01" * pending)
                    pending = 0
                lo *= 2
                hi *= 2
            else:
                out.append(1)
                if pending:
                    out.extend(b"\x00" * pending)
                    pending = 0
                lo = 2 * lo - den
                hi = 2 * hi - den
        return BitString.from_array(np.frombuffer(bytes(out), dtype=np.uint8))


def encode(measure: ComputableMeasure, y: BitString) -> CodeStream:
    """Encode y under the measure; the result is extendable with feed()."""
    stream = CodeStream(measure)
    stream.feed_bits(y)
    return stream


def decode(measure: ComputableMeasure, z: BitString, max_out: int) -> BitString:
    """The longest source prefix (up to max_out bits) every continuation of
    z agrees on; monotone in z by construction.

    The code constraint is the closed dyadic interval of numbers whose
    expansion starts with z, held as [dlo, dhi] / 2^dk in the same moving
    frame as the model interval; a source bit is produced exactly when one
    child interval is consistent with the constraint, consuming code bits
    lazily as they are needed to disambiguate.
    """
    cur = measure.cursor()
    lo, hi, den = _big(0), _big(1), _big(1)
    dlo, dhi, dk = 0, 1, 0
    zbits = z.to_array().tolist()
    zi = 0
    zn = len(zbits)
    out = bytearray()

    while len(out) < max_out:
        q = cur.prob_one()
        a, c = q.numerator, q.denominator
        w = hi - lo
        lo2 = lo * c
        hi2 = hi * c
        den2 = den * c
        mid = lo2 + w * (c - a)

        while True:
            # child [l, h) is consistent iff nonempty and D_lo < h, D_hi > l
            scale = 1 << dk
            c0 = lo2 < mid and dlo * den2 < mid * scale and dhi * den2 > lo2 * scale
            c1 = mid < hi2 and dlo * den2 < hi2 * scale and dhi * den2 > mid * scale
            if c0 and c1 and zi < zn:
                if (dhi - dlo) & 1:
                    dlo *= 2
                    dhi *= 2
                    dk += 1
                half = (dhi - dlo) >> 1
                if zbits[zi]:
                    dlo += half
                else:
                    dhi -= half
                zi += 1
                continue
            break

        if c0 and c1:
            break  # code exhausted, next bit genuinely ambiguous
        if c0:
            bit = 0
            lo, hi, den = lo2, mid, den2
        elif c1:
            bit = 1
            lo, hi, den = mid, hi2, den2
        else:
            break  # no consistent child (degenerate constraint)
        out.append(bit)
        cur.advance(bit)

        while True:
            if 2 * hi <= den:
                lo *= 2
                hi *= 2
                dlo *= 2
                dhi *= 2
            elif 2 * lo >= den:
                lo = 2 * lo - den
                hi = 2 * hi - den
                t = 1 << dk
                dlo = 2 * dlo - t
                dhi = 2 * dhi - t
            elif 4 * lo >= den and 4 * hi <= 3 * den:
                lo = 4 * lo - den
                hi = 4 * hi - den
                den *= 2
                if dk == 0:
                    dlo *= 2
                    dhi *= 2
                    dk = 1
                t = 1 << (dk - 1)
                dlo = 2 * dlo - t
                dhi = 2 * dhi - t
            else:
                break
        while not (lo | hi | den) & 1:
            lo >>= 1
            hi >>= 1
            den >>= 1
        while dk > 0 and not (dlo | dhi) & 1:
            dlo >>= 1
            dhi >>= 1
            dk -= 1

    return BitString.from_array(np.frombuffer(bytes(out), dtype=np.uint8))


def code_length_curve(measure: ComputableMeasure, src, checkpoints) -> StatCurve:
    """Emitted+pending code length L_n and the exact ceiling l_n of
    -log2 P(prefix) at each checkpoint; CSV columns (n, L_n, l_n)."""
    checkpoints = list(checkpoints)
    if not checkpoints or any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be nonempty and strictly increasing")
    if checkpoints[0] < 1:
        raise ValueError("checkpoints start at 1")
    n_max = checkpoints[-1]
    bits = src.prefix_array(n_max).tolist()
    stream = CodeStream(measure)
    cur = measure.cursor()
    pnum, pden = _big(1), _big(1)
    points = []
    ells = []
    want = set(checkpoints)
    for n, b in enumerate(bits, 1):
        q = cur.prob_bit(b)
        pnum *= q.numerator
        pden *= q.denominator
        cur.advance(b)
        stream.feed(b)
        if n in want:
            points.append((n, stream.length_with_pending))
            ells.append(_strict_ceil_neg_log2_parts(pnum, pden))
    return StatCurve("L_n", points, {"l_n": ells})
