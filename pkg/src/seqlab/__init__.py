"""seqlab: subsequence selection and randomness diagnostics on binary sequences."""

from .bitseq import (
    BitString,
    BitTextError,
    SequenceSource,
    count_ones,
    count_zeros,
    from_packed,
    from_text,
    prefix,
    to_packed,
    to_text,
)
from .coder import CodeStream, code_length_curve, decode, encode
from .generators import (
    ContinuedFraction,
    PrecisionError,
    SturmianParams,
    bernoulli_pseudo,
    champernowne,
    fibonacci_word,
    periodic,
    sturmian,
)
from .measures import (
    Bernoulli,
    ComputableMeasure,
    Markov1,
    PointMass,
    ceil_neg_log2_prob,
    conditional_test_level,
    min_conditional,
    prob,
    uniform,
)
from .selection import SelectionResult, complement, merge, select, split, tau_prefix
from .stats import (
    BlockDistribution,
    StatCurve,
    block_freqs,
    density,
    discrepancy,
    discrepancy_witness,
    empirical_entropy,
    factor_complexity,
    lz78_ratio,
)

__version__ = "0.1.0"
