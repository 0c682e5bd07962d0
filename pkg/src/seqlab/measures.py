"""Computable measures on binary sequences via exact rational conditionals.

Every measure supplies P(next bit = 1 | prefix) as an exact Fraction; the
induced P(s) is the product of conditionals along s, so P(empty) = 1 and
P(s0) + P(s1) = P(s) hold by construction with no rounding anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .bitseq import BitString, SequenceSource
from .generators import source_from_descriptor, _format_fraction, parse_fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class MeasureCursor:
    """Stateful walk along a prefix; prob_one() is the conditional at the
    current position and advance(bit) consumes one bit.

    state()/set_state() snapshots are cheap tuples, which makes exhaustive
    tree walks affordable.
    """

    def prob_one(self) -> Fraction:
        raise NotImplementedError

    def advance(self, bit: int) -> None:
        raise NotImplementedError

    def state(self):
        raise NotImplementedError

    def set_state(self, st) -> None:
        raise NotImplementedError

    def prob_bit(self, bit: int) -> Fraction:
        p1 = self.prob_one()
        return p1 if bit else ONE - p1


class ComputableMeasure:
    """A measure given by exact rational conditionals P(1 | prefix)."""

    def cursor(self) -> MeasureCursor:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def cond(self, prefix: BitString) -> Fraction:
        """P(next bit = 1 | prefix)."""
        cur = self.cursor()
        for b in prefix:
            cur.advance(b)
        return cur.prob_one()


class _BernoulliCursor(MeasureCursor):
    __slots__ = ("_p",)

    def __init__(self, p):
        self._p = p

    def prob_one(self):
        return self._p

    def advance(self, bit):
        pass

    def state(self):
        return None

    def set_state(self, st):
        pass


class Bernoulli(ComputableMeasure):
    """Independent bits, each 1 with probability p."""

    def __init__(self, p):
        self.p = Fraction(p)
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0,1], got {self.p}")

    def cursor(self):
        return _BernoulliCursor(self.p)

    def descriptor(self):
        if self.p == HALF:
            return {"family": "uniform"}
        return {"family": "bernoulli", "p": _format_fraction(self.p)}


def uniform() -> Bernoulli:
    """The fair-coin measure: Bernoulli(1/2)."""
    return Bernoulli(HALF)


class _MarkovCursor(MeasureCursor):
    __slots__ = ("_m", "_last")

    def __init__(self, m):
        self._m = m
        self._last = None  # no bit consumed yet

    def prob_one(self):
        if self._last is None:
            return self._m.p1_initial
        return self._m.p1_after_one if self._last else self._m.p1_after_zero

    def advance(self, bit):
        self._last = bit

    def state(self):
        return self._last

    def set_state(self, st):
        self._last = st


class Markov1(ComputableMeasure):
    """First-order Markov chain: probability of a 1 after a 0, after a 1,
    and for the first bit."""

    def __init__(self, p1_after_zero, p1_after_one, p1_initial):
        self.p1_after_zero = Fraction(p1_after_zero)
        self.p1_after_one = Fraction(p1_after_one)
        self.p1_initial = Fraction(p1_initial)
        for q in (self.p1_after_zero, self.p1_after_one, self.p1_initial):
            if not 0 <= q <= 1:
                raise ValueError(f"probability out of [0,1]: {q}")

    def cursor(self):
        return _MarkovCursor(self)

    def descriptor(self):
        return {
            "family": "markov1",
            "p1_after0": _format_fraction(self.p1_after_zero),
            "p1_after1": _format_fraction(self.p1_after_one),
            "p1_init": _format_fraction(self.p1_initial),
        }


class _PointMassCursor(MeasureCursor):
    __slots__ = ("_src", "_pos", "_on")

    def __init__(self, src):
        self._src = src
        self._pos = 0
        self._on = True  # prefix so far matches the source

    def prob_one(self):
        if not self._on:
            return ZERO  # off support: all mass already lost
        return ONE if self._src.bit_at(self._pos + 1) else ZERO

    def advance(self, bit):
        if self._on and self._src.bit_at(self._pos + 1) != bit:
            self._on = False
        self._pos += 1

    def state(self):
        return (self._pos, self._on)

    def set_state(self, st):
        self._pos, self._on = st


class PointMass(ComputableMeasure):
    """All mass on one computable sequence; conditionals are exactly 0 or 1."""

    def __init__(self, src: SequenceSource):
        self.src = src

    def cursor(self):
        return _PointMassCursor(self.src)

    def descriptor(self):
        d = {"family": "pointmass"}
        for k, v in self.src.descriptor().items():
            d[f"source.{k}"] = v
        return d


# -- operations ---------------------------------------------------------


def _prob_parts(measure: ComputableMeasure, s: BitString) -> tuple[int, int]:
    """P(s) as an unreduced (numerator, denominator) pair."""
    num, den = 1, 1
    cur = measure.cursor()
    for b in s:
        q = cur.prob_bit(b)
        num *= q.numerator
        den *= q.denominator
        if num == 0:
            return 0, 1
        cur.advance(b)
    return num, den


def prob(measure: ComputableMeasure, s: BitString) -> Fraction:
    """P(s): the product of conditionals along s, exact."""
    return Fraction(*_prob_parts(measure, s))


def strict_ceil_neg_log2(q) -> int:
    """Least integer l with 2^-l < q, i.e. the least integer > -log2(q).

    When -log2(q) is itself the integer m this is m + 1, matching the strict
    reading of the code-length definition.
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError("argument must be positive")
    return _strict_ceil_neg_log2_parts(q.numerator, q.denominator)


def ceil_neg_log2_prob(measure: ComputableMeasure, s: BitString) -> int:
    """The least integer greater than -log2 P(s); exact integer comparisons."""
    num, den = _prob_parts(measure, s)
    if num == 0:
        raise ValueError("zero-probability string has no finite code length")
    return _strict_ceil_neg_log2_parts(num, den)


def _strict_ceil_neg_log2_parts(num: int, den: int) -> int:
    """Least l with num * 2^l > den, searched around the bit-length estimate."""
    l = den.bit_length() - num.bit_length()
    while _shifted_gt(num, l, den):
        l -= 1
    while not _shifted_gt(num, l, den):
        l += 1
    return l


def _shifted_gt(num: int, l: int, den: int) -> bool:
    if l >= 0:
        return (num << l) > den
    return num > (den << -l)


def conditional_test_level(measure: ComputableMeasure, s: BitString, zero_cap: int = 64) -> int:
    """The largest n >= 0 with P(last bit | rest) < 2^-n; zero conditionals
    return the configured cap."""
    if len(s) == 0:
        raise ValueError("s must be nonempty")
    cur = measure.cursor()
    for b in s.slice(1, len(s) - 1):
        cur.advance(b)
    q = cur.prob_bit(s.bit_at(len(s)))
    if q == 0:
        return zero_cap
    if q >= HALF:
        return 0
    # largest n with num * 2^n < den; the strict ceiling overshoots by one,
    # or by two when q is exactly a power of two (strict < fails at equality)
    num, den = q.numerator, q.denominator
    n = _strict_ceil_neg_log2_parts(num, den) - 1
    if (num << n) >= den:
        n -= 1
    return n


def min_conditional(measure: ComputableMeasure, s: BitString) -> Fraction:
    """The smallest conditional along s; witnesses the bounded-gap bound."""
    if len(s) == 0:
        raise ValueError("s must be nonempty")
    best = None
    cur = measure.cursor()
    for b in s:
        q = cur.prob_bit(b)
        if best is None or q < best:
            best = q
        if q == 0:
            raise ValueError("s has zero probability")
        cur.advance(b)
    return best


# -- descriptors ---------------------------------------------------------


def measure_from_descriptor(d: dict) -> ComputableMeasure:
    family = d.get("family")
    if family == "uniform":
        return uniform()
    if family == "bernoulli":
        return Bernoulli(parse_fraction(d["p"]))
    if family == "markov1":
        return Markov1(
            parse_fraction(d["p1_after0"]),
            parse_fraction(d["p1_after1"]),
            parse_fraction(d["p1_init"]),
        )
    if family == "pointmass":
        src = {k[len("source."):]: v for k, v in d.items() if k.startswith("source.")}
        return PointMass(source_from_descriptor(src))
    raise ValueError(f"unknown measure family {family!r}")


def parse_keyvalues(text: str) -> dict:
    """Parse the plain-text descriptor format: one 'key = value' per line,
    '#' comments and blank lines ignored."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        out[key.strip()] = value.strip()
    return out


def format_keyvalues(d: dict) -> str:
    return "".join(f"{k} = {v}\n" for k, v in d.items())
