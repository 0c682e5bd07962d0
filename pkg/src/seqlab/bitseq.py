"""Finite packed binary strings and deterministic indexed bit sources.

Bits are 1-indexed throughout: the first bit of a string s is s.bit_at(1)
and the last is s.bit_at(len(s)).  Storage is packed, most significant bit
first within each byte, so a 10^8-bit string costs 12.5 MB.
"""

from __future__ import annotations

import struct
from typing import Iterable, Iterator

import numpy as np


class BitTextError(ValueError):
    """Sequence text contained a character other than 0, 1, or whitespace."""

    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        super().__init__(f"invalid character {char!r} at text position {position}")


def _pack(arr: np.ndarray) -> bytes:
    return np.packbits(arr).tobytes()


class BitString:
    """Immutable finite binary string with packed storage.

    Construct from a text of '0'/'1' characters (whitespace ignored), or use
    the from_* classmethods for other representations.
    """

    __slots__ = ("_n", "_buf")

    def __init__(self, text: str = ""):
        if isinstance(text, BitString):
            self._n = text._n
            self._buf = text._buf
            return
        arr = _text_to_array(text)
        self._n = arr.size
        self._buf = _pack(arr)

    # -- constructors -------------------------------------------------

    @classmethod
    def _from_raw(cls, n: int, buf: bytes) -> "BitString":
        s = cls.__new__(cls)
        s._n = n
        s._buf = buf
        return s

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitString":
        """Build from a numpy array of 0/1 values."""
        arr = np.ascontiguousarray(arr, dtype=np.uint8)
        if arr.size and arr.max(initial=0) > 1:
            raise ValueError("array elements must be 0 or 1")
        return cls._from_raw(arr.size, _pack(arr))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        return cls.from_array(np.fromiter(bits, dtype=np.uint8))

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        """Build from an integer holding the bits MSB-first (bit 1 is the
        most significant of `length` bits)."""
        if length < 0 or value < 0 or value >> length:
            raise ValueError("value does not fit in the given length")
        pad = -length % 8
        buf = (value << pad).to_bytes((length + 7) // 8, "big")
        return cls._from_raw(length, buf)

    # -- basic queries ------------------------------------------------

    def __len__(self) -> int:
        return self._n

    def bit_at(self, i: int) -> int:
        """Bit at 1-indexed position i."""
        if not 1 <= i <= self._n:
            raise IndexError(f"index {i} out of range 1..{self._n}")
        j = i - 1
        return (self._buf[j >> 3] >> (7 - (j & 7))) & 1

    def __iter__(self) -> Iterator[int]:
        arr = self.to_array()
        return iter(arr.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self._n == other._n and self._buf == other._buf

    def __hash__(self) -> int:
        return hash((self._n, self._buf))

    def __repr__(self) -> str:
        if self._n <= 64:
            return f"BitString({self.to_text()!r})"
        return f"BitString({self.slice(1, 48).to_text()!r}..., length={self._n})"

    def __add__(self, other: "BitString") -> "BitString":
        if not isinstance(other, BitString):
            return NotImplemented
        if self._n % 8 == 0:
            return BitString._from_raw(self._n + other._n, self._buf + other._buf)
        return BitString.from_array(
            np.concatenate([self.to_array(), other.to_array()])
        )

    # -- conversions ---------------------------------------------------

    def to_array(self) -> np.ndarray:
        """The bits as a numpy uint8 array of 0/1 values."""
        raw = np.frombuffer(self._buf, dtype=np.uint8)
        return np.unpackbits(raw)[: self._n]

    def to_text(self) -> str:
        return self.to_array().tobytes().translate(_BYTE01).decode("ascii")

    def to_int(self) -> int:
        """The bits as an integer, MSB-first (empty string gives 0)."""
        if self._n == 0:
            return 0
        return int.from_bytes(self._buf, "big") >> (-self._n % 8)

    def slice(self, i: int, j: int) -> "BitString":
        """Substring from position i to j inclusive, 1-indexed; empty when j < i."""
        if j < i:
            return BitString()
        if not (1 <= i and j <= self._n):
            raise IndexError(f"slice {i}..{j} out of range 1..{self._n}")
        if (i - 1) % 8 == 0:
            start = (i - 1) // 8
            nbits = j - i + 1
            buf = self._buf[start : start + (nbits + 7) // 8]
            arr = np.unpackbits(np.frombuffer(buf, dtype=np.uint8))[:nbits]
            return BitString.from_array(arr)
        return BitString.from_array(self.to_array()[i - 1 : j])

    def count_ones(self) -> int:
        return int.from_bytes(self._buf, "big").bit_count()

    def count_zeros(self) -> int:
        return self._n - self.count_ones()


_BYTE01 = bytes.maketrans(b"\x00\x01", b"01")


def _text_to_array(text) -> np.ndarray:
    if isinstance(text, str):
        data = text.encode("ascii", errors="replace")
    elif isinstance(text, (bytes, bytearray)):
        data = bytes(text)
    else:
        raise TypeError(f"expected str or bytes, got {type(text).__name__}")
    raw = np.frombuffer(data, dtype=np.uint8)
    keep = raw > 32  # drop space and control whitespace
    kept = raw[keep]
    bad = (kept != ord("0")) & (kept != ord("1"))
    if bad.any():
        where = int(np.flatnonzero(keep)[int(np.argmax(bad))])
        char = text[where] if isinstance(text, str) else chr(data[where])
        raise BitTextError(char, where + 1)
    return (kept - ord("0")).astype(np.uint8)


def from_text(text: str) -> BitString:
    """Parse '0'/'1' text into a BitString; whitespace is ignored.

    Any other character raises BitTextError carrying its 1-indexed position.
    """
    return BitString(text)


def to_text(s: BitString) -> str:
    return s.to_text()


def count_ones(s: BitString) -> int:
    return s.count_ones()


def count_zeros(s: BitString) -> int:
    return s.count_zeros()


# -- packed binary interchange format ---------------------------------
#
# 8-byte little-endian bit count, then the bits packed MSB-first per byte,
# zero-padded in the final byte.

def to_packed(s: BitString) -> bytes:
    return struct.pack("<Q", len(s)) + s._buf


def from_packed(data: bytes) -> BitString:
    if len(data) < 8:
        raise ValueError("packed data shorter than its 8-byte header")
    (n,) = struct.unpack_from("<Q", data)
    body = data[8:]
    if len(body) != (n + 7) // 8:
        raise ValueError(f"packed data length {len(body)} does not match bit count {n}")
    if n % 8:
        pad_mask = (1 << (8 - n % 8)) - 1
        if body[-1] & pad_mask:
            raise ValueError("nonzero padding bits in final byte")
    return BitString._from_raw(n, bytes(body))


def read_bits(path, fmt: str = "text") -> BitString:
    if fmt == "text":
        with open(path, "r", encoding="ascii") as fh:
            return from_text(fh.read())
    if fmt == "packed":
        with open(path, "rb") as fh:
            return from_packed(fh.read())
    raise ValueError(f"unknown format {fmt!r}")


def write_bits(path, s: BitString, fmt: str = "text") -> None:
    if fmt == "text":
        with open(path, "w", encoding="ascii") as fh:
            fh.write(s.to_text())
            fh.write("\n")
    elif fmt == "packed":
        with open(path, "wb") as fh:
            fh.write(to_packed(s))
    else:
        raise ValueError(f"unknown format {fmt!r}")


class SequenceSource:
    """Deterministic producer of the bit at any index i >= 1.

    Subclasses implement _generate(n) returning the first n bits as a numpy
    0/1 array; repeated queries are served from a grown cache, which makes
    prefix consistency automatic as long as _generate is deterministic.
    """

    def descriptor(self) -> dict:
        """Key-value record identifying the source and its parameters."""
        raise NotImplementedError

    def _generate(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def __init__(self):
        self._cache = np.zeros(0, dtype=np.uint8)

    def _ensure(self, n: int) -> None:
        if self._cache.size < n:
            grown = max(n, 2 * self._cache.size, 1024)
            self._cache = np.ascontiguousarray(self._generate(grown), dtype=np.uint8)

    def prefix(self, n: int) -> BitString:
        """First n bits."""
        if n < 0:
            raise ValueError("prefix length must be nonnegative")
        self._ensure(n)
        return BitString.from_array(self._cache[:n])

    def prefix_array(self, n: int) -> np.ndarray:
        self._ensure(n)
        return self._cache[:n]

    def bit_at(self, i: int) -> int:
        if i < 1:
            raise IndexError("indices start at 1")
        self._ensure(i)
        return int(self._cache[i - 1])


def prefix(src: SequenceSource, n: int) -> BitString:
    return src.prefix(n)
