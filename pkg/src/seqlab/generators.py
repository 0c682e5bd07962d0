"""Exact generators for the example sequences and seeded test inputs.

All generators are pure functions of their parameters.  The Sturmian
generator never touches floating point: the rotation parameter alpha is
held as a continued fraction and every floor decision is certified by a
rational convergent enclosure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bitseq import BitString, SequenceSource


class PrecisionError(RuntimeError):
    """Convergent refinement exhausted its coefficient budget."""


class ContinuedFraction:
    """An irrational alpha in (0,1) as the continued fraction [0; a1, a2, ...].

    Coefficients are given as a finite preperiod followed by a nonempty
    period, which covers every quadratic irrational; the expansion is
    infinite by construction, so alpha is guaranteed irrational.
    """

    def __init__(self, preperiod=(), period=(1,)):
        self.preperiod = tuple(int(a) for a in preperiod)
        self.period = tuple(int(a) for a in period)
        if not self.period:
            raise ValueError("period must be nonempty (alpha must be irrational)")
        if any(a < 1 for a in self.preperiod + self.period):
            raise ValueError("continued fraction coefficients must be >= 1")

    def coefficient(self, k: int) -> int:
        """The k-th partial quotient a_k, k >= 1."""
        if k < 1:
            raise IndexError("coefficients start at k=1")
        if k <= len(self.preperiod):
            return self.preperiod[k - 1]
        return self.period[(k - 1 - len(self.preperiod)) % len(self.period)]

    def convergent(self, k: int) -> tuple[int, int]:
        """The k-th convergent p_k/q_k (k >= 0; p_0/q_0 = 0/1)."""
        p0, q0, p1, q1 = 1, 0, 0, 1  # h_{-2}/k_{-2}, h_{-1}/k_{-1} with a0 = 0
        for j in range(1, k + 1):
            a = self.coefficient(j)
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        return p1, q1

    def __eq__(self, other):
        if not isinstance(other, ContinuedFraction):
            return NotImplemented
        return self.preperiod == other.preperiod and self.period == other.period

    def __repr__(self):
        pre = ",".join(map(str, self.preperiod))
        per = ",".join(map(str, self.period))
        return f"ContinuedFraction([0;{pre}{',' if pre else ''}({per})*])"


GOLDEN_CONJUGATE = ContinuedFraction((), (1,))       # (sqrt(5)-1)/2
SQRT2_MINUS_1 = ContinuedFraction((), (2,))


@dataclass
class SturmianParams:
    """Rotation parameters: irrational slope alpha and rational offset beta.

    coefficient_budget bounds how many partial quotients a single floor
    certification may consume before giving up.
    """

    alpha: ContinuedFraction = field(default_factory=lambda: GOLDEN_CONJUGATE)
    beta: Fraction = Fraction(0)
    coefficient_budget: int = 256

    def __post_init__(self):
        self.beta = Fraction(self.beta)
        if not 0 <= self.beta < 1:
            raise ValueError("beta must lie in [0, 1)")


class _Enclosures:
    """Successive convergent pairs bracketing alpha from both sides."""

    def __init__(self, cf: ContinuedFraction):
        self._cf = cf
        self._conv = [(0, 1)]  # p_0/q_0

    def pair(self, k: int) -> tuple[int, int, int, int]:
        """(plo, qlo, phi, qhi) with plo/qlo < alpha < phi/qhi, from
        convergents k and k+1."""
        while len(self._conv) < k + 2:
            j = len(self._conv)
            a = self._cf.coefficient(j)
            p1, q1 = self._conv[-1]
            p0, q0 = self._conv[-2] if j >= 2 else (1, 0)
            self._conv.append((a * p1 + p0, a * q1 + q0))
        pa, qa = self._conv[k]
        pb, qb = self._conv[k + 1]
        if pa * qb < pb * qa:
            return pa, qa, pb, qb
        return pb, qb, pa, qa


def _certified_floor(i: int, enc: _Enclosures, bn: int, bd: int, budget: int, start: int) -> tuple[int, int]:
    """floor(i*alpha + beta) with beta = bn/bd, plus the enclosure level used.

    Refines the enclosure until both endpoints agree on the floor; since
    i*alpha + beta is irrational this terminates, but a configured budget
    turns pathological parameter choices into an error instead of a guess.
    """
    k = start
    while True:
        plo, qlo, phi, qhi = enc.pair(k)
        flo = (i * plo * bd + bn * qlo) // (qlo * bd)
        fhi = (i * phi * bd + bn * qhi) // (qhi * bd)
        if flo == fhi:
            return flo, k
        k += 1
        if k + 1 > budget:
            raise PrecisionError(
                f"floor of {i}*alpha+beta not certified within {budget} coefficients"
            )


def sturmian(params: SturmianParams, n: int) -> BitString:
    """First n bits of the rotation word for (alpha, beta).

    Bit i is 1 exactly when floor((i+1)*alpha + beta) == floor(i*alpha + beta),
    i.e. when the rotation orbit does not cross an integer between steps i and
    i+1.  This orientation makes alpha = [0;1,1,1,...] reproduce the Fibonacci
    word bit for bit (the substitution oracle), and gives ones-density 1-alpha.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return BitString()
    enc = _Enclosures(params.alpha)
    bn, bd = params.beta.numerator, params.beta.denominator
    budget = params.coefficient_budget
    out = np.empty(n, dtype=np.uint8)
    prev, level = _certified_floor(1, enc, bn, bd, budget, 0)
    for i in range(1, n + 1):
        nxt, level = _certified_floor(i + 1, enc, bn, bd, budget, level)
        out[i - 1] = 1 if nxt == prev else 0
        prev = nxt
    return BitString.from_array(out)


def fibonacci_word(n: int) -> BitString:
    """First n bits of the fixed point of 0 -> 01, 1 -> 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return BitString()
    a, b = b"0", b"01"  # successive substitution iterates
    while len(b) < n:
        a, b = b, b + a
    return BitString(b[:n])


def champernowne(n: int) -> BitString:
    """First n bits of the concatenated binary numerals of 1, 2, 3, ..."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    parts = []
    total = 0
    i = 1
    while total < n:
        numeral = bin(i)[2:]
        parts.append(numeral)
        total += len(numeral)
        i += 1
    return BitString("".join(parts)[:n])


def periodic(pattern: BitString, n: int) -> BitString:
    """pattern repeated and truncated to n bits."""
    if len(pattern) == 0:
        raise ValueError("pattern must be nonempty")
    if n < 0:
        raise ValueError("n must be nonnegative")
    reps = -(-n // len(pattern))
    return BitString.from_array(np.tile(pattern.to_array(), reps)[:n])


# 64-bit xorshift-star: shifts 12/25/27, output multiplier below, uniform
# deviate from the top 53 bits of the multiplied state.
_XS_MULT = 0x2545F4914F6CDD1D
_M64 = (1 << 64) - 1
_SEED_SUBSTITUTE = 0x9E3779B97F4A7C15  # xorshift state must be nonzero


def bernoulli_pseudo(p: Fraction, seed: int, n: int) -> BitString:
    """Deterministic pseudo-Bernoulli(p) bits, reproducible bit for bit.

    Bit i is 1 iff the i-th top-53-bit deviate of the xorshift-star stream
    seeded with `seed` is below p; the comparison is exact in integers, so
    rational p never suffers rounding.  A zero seed is replaced by a fixed
    nonzero constant.
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0,1], got {p}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = seed & _M64
    if x == 0:
        x = _SEED_SUBSTITUTE
    rhs = p.numerator << 53
    den = p.denominator
    out = np.empty(n, dtype=np.uint8)
    for i in range(n):
        x ^= x >> 12
        x = (x ^ (x << 25)) & _M64
        x ^= x >> 27
        u = ((x * _XS_MULT) & _M64) >> 11
        out[i] = 1 if u * den < rhs else 0
    return BitString.from_array(out)


# -- sources -----------------------------------------------------------


class ChampernowneSource(SequenceSource):
    def descriptor(self):
        return {"kind": "champernowne"}

    def _generate(self, n):
        return champernowne(n).to_array()


class FibonacciWordSource(SequenceSource):
    def descriptor(self):
        return {"kind": "fibonacci_word"}

    def _generate(self, n):
        return fibonacci_word(n).to_array()


class SturmianSource(SequenceSource):
    def __init__(self, params: SturmianParams):
        super().__init__()
        self.params = params

    def descriptor(self):
        cf = self.params.alpha
        return {
            "kind": "sturmian",
            "alpha_preperiod": ",".join(map(str, cf.preperiod)),
            "alpha_period": ",".join(map(str, cf.period)),
            "beta": _format_fraction(self.params.beta),
            "coding": "flat",  # 1 where the rotation step crosses no integer
        }

    def _generate(self, n):
        return sturmian(self.params, n).to_array()


class BernoulliPseudoSource(SequenceSource):
    def __init__(self, p: Fraction, seed: int):
        super().__init__()
        self.p = Fraction(p)
        self.seed = seed

    def descriptor(self):
        return {"kind": "bernoulli", "p": _format_fraction(self.p), "seed": str(self.seed)}

    def _generate(self, n):
        return bernoulli_pseudo(self.p, self.seed, n).to_array()


class PeriodicSource(SequenceSource):
    def __init__(self, pattern: BitString):
        super().__init__()
        if len(pattern) == 0:
            raise ValueError("pattern must be nonempty")
        self.pattern = pattern

    def descriptor(self):
        return {"kind": "periodic", "pattern": self.pattern.to_text()}

    def _generate(self, n):
        return periodic(self.pattern, n).to_array()


def constant(bit: int) -> PeriodicSource:
    return PeriodicSource(BitString("1" if bit else "0"))


def _format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def source_from_descriptor(d: dict) -> SequenceSource:
    """Rebuild a source from its plain-text key-value record."""
    kind = d.get("kind")
    if kind == "champernowne":
        return ChampernowneSource()
    if kind == "fibonacci_word":
        return FibonacciWordSource()
    if kind == "sturmian":
        pre = tuple(int(a) for a in d.get("alpha_preperiod", "").split(",") if a)
        per = tuple(int(a) for a in d.get("alpha_period", "1").split(",") if a)
        params = SturmianParams(
            alpha=ContinuedFraction(pre, per),
            beta=parse_fraction(d.get("beta", "0")),
            coefficient_budget=int(d.get("coefficient_budget", 256)),
        )
        return SturmianSource(params)
    if kind == "bernoulli":
        return BernoulliPseudoSource(parse_fraction(d["p"]), int(d["seed"]))
    if kind == "periodic":
        return PeriodicSource(BitString(d["pattern"]))
    if kind == "constant":
        return constant(int(d.get("bit", "1")))
    raise ValueError(f"unknown source kind {kind!r}")
