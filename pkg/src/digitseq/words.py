"""Finite and infinite word primitives.

Alphabets, finite words over an alphabet, prefixes of infinite sequences,
base-k numeration, fractional powers, repetition witnesses and the search
for them, factor complexity, and right-special factor counting.

Positions in every public contract are 1-based (the mathematics reads
a_1 a_2 a_3 ...); storage is 0-based. Ratios and exponents are exact
`fractions.Fraction` values so that witnesses are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InsufficientDataError

__all__ = [
    "Alphabet",
    "Word",
    "SequencePrefix",
    "SequenceSource",
    "RepetitionWitness",
    "digit_alphabet",
    "encode_base_k",
    "decode_base_k",
    "fractional_power",
    "verify_repetition",
    "best_repetition_at",
    "dio_profile",
    "factor_complexity",
    "factor_complexity_profile",
    "right_special_count",
]


@dataclass(frozen=True)
class Alphabet:
    """An ordered finite set of symbol tokens.

    The ordering is fixed at construction; incidence matrices and stored
    prefixes depend on it.
    """

    symbols: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        if any(not s for s in self.symbols):
            raise ValueError("alphabet symbols must be non-empty")
        if len(self.symbols) > 256:
            raise ValueError("alphabets larger than 256 symbols are unsupported")
        object.__setattr__(
            self, "_index", {s: i for i, s in enumerate(self.symbols)}
        )

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise ValueError(f"symbol {symbol!r} not in alphabet") from None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    @property
    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)


def digit_alphabet(k: int) -> Alphabet:
    """The alphabet {0, 1, ..., k-1} of base-k digits."""
    if k < 2:
        raise ValueError(f"base must be at least 2, got {k}")
    return Alphabet(tuple(str(d) for d in range(k)))


@dataclass(frozen=True)
class Word:
    """A finite word: a sequence of symbol indices into an alphabet."""

    alphabet: Alphabet
    indices: tuple[int, ...]

    def __post_init__(self):
        n = self.alphabet.size
        if any(not (0 <= i < n) for i in self.indices):
            raise ValueError("word contains an index outside its alphabet")

    def __len__(self) -> int:
        return len(self.indices)

    def text(self, sep: str = "") -> str:
        return sep.join(self.alphabet.symbols[i] for i in self.indices)

    @staticmethod
    def from_symbols(alphabet: Alphabet, symbols: Iterable[str]) -> "Word":
        return Word(alphabet, tuple(alphabet.index(s) for s in symbols))


@dataclass(frozen=True)
class SequencePrefix:
    """The first N symbols of an infinite word, positions 1..N.

    Data is stored as one byte per symbol index; re-reading a longer prefix
    of the same source must reproduce this one exactly (sources are
    deterministic).
    """

    source_id: str
    alphabet: Alphabet
    data: bytes

    def __len__(self) -> int:
        return len(self.data)

    def symbol_at(self, position: int) -> str:
        """Symbol at a 1-based position."""
        if not (1 <= position <= len(self.data)):
            raise InsufficientDataError(
                f"position {position} outside prefix of length {len(self.data)}"
            )
        return self.alphabet.symbols[self.data[position - 1]]

    def text(self, sep: str = "") -> str:
        return sep.join(self.alphabet.symbols[b] for b in self.data)

    def head(self, n: int) -> "SequencePrefix":
        if n > len(self.data):
            raise InsufficientDataError(
                f"requested {n} symbols, prefix holds {len(self.data)}"
            )
        return SequencePrefix(self.source_id, self.alphabet, self.data[:n])


class SequenceSource:
    """A deterministic, restartable producer of an infinite symbol sequence.

    `generate(n)` must return the first n symbol indices as a bytes object
    and must be a pure function of n. Generated data is cached and only
    extended, so every read sees a consistent prefix.
    """

    def __init__(self, source_id: str, alphabet: Alphabet,
                 generate: Callable[[int], bytes]):
        self.source_id = source_id
        self.alphabet = alphabet
        self._generate = generate
        self._cache = b""

    def prefix(self, n: int) -> SequencePrefix:
        if n > len(self._cache):
            data = self._generate(n)
            if len(data) < n:
                raise InsufficientDataError(
                    f"source {self.source_id!r} produced {len(data)} of "
                    f"{n} requested symbols"
                )
            if not data.startswith(self._cache):
                raise AssertionError(
                    f"source {self.source_id!r} is not deterministic"
                )
            self._cache = data
        return SequencePrefix(self.source_id, self.alphabet, self._cache[:n])

    @staticmethod
    def from_prefix(prefix: SequencePrefix) -> "SequenceSource":
        """A finite source backed by an already-materialized prefix."""

        def gen(n: int) -> bytes:
            if n > len(prefix.data):
                raise InsufficientDataError(
                    f"source {prefix.source_id!r} holds only "
                    f"{len(prefix.data)} symbols, {n} requested"
                )
            return prefix.data[:n]

        return SequenceSource(prefix.source_id, prefix.alphabet, gen)


@dataclass(frozen=True)
class RepetitionWitness:
    """A factorization of a prefix as U V^alpha.

    u = |U| >= 0, v = |V| >= 1, and ext >= v is the total extension: the
    claim is that positions u+1 .. u+ext satisfy the period-v condition
    prefix[i] = prefix[i-v] for all u+v < i <= u+ext. The witnessed prefix
    has length u+ext and the exponent alpha = ext/v is at least 1.
    """

    u: int
    v: int
    ext: int

    def __post_init__(self):
        if self.u < 0:
            raise ValueError("u must be nonnegative")
        if self.v < 1:
            raise ValueError("v must be positive")
        if self.ext < self.v:
            raise ValueError("ext must be at least v (V occurs fully)")

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.u + self.ext, self.u + self.v)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.ext, self.v)


def encode_base_k(n: int, k: int) -> Word:
    """Base-k digits of n, most significant first; 0 encodes to the empty word."""
    if k < 2:
        raise ValueError(f"base must be at least 2, got {k}")
    if n < 0:
        raise ValueError("cannot encode a negative integer")
    alphabet = digit_alphabet(k)
    digits = []
    while n > 0:
        n, r = divmod(n, k)
        digits.append(r)
    digits.reverse()
    return Word(alphabet, tuple(digits))


def decode_base_k(word: Word | Sequence[int], k: int) -> int:
    """Integer value of a digit word; leading zeros are allowed."""
    if k < 2:
        raise ValueError(f"base must be at least 2, got {k}")
    digits = word.indices if isinstance(word, Word) else tuple(word)
    value = 0
    for d in digits:
        if not (0 <= d < k):
            raise ValueError(f"digit {d} out of range for base {k}")
        value = value * k + d
    return value


def fractional_power(word: Word, exponent: Fraction | int) -> Word:
    """The word W^x: W repeated floor(x) times, then the prefix of W of
    length ceil({x} * |W|)."""
    x = Fraction(exponent)
    if x <= 0:
        raise ValueError("exponent must be positive")
    if len(word) == 0:
        raise ValueError("cannot take a fractional power of the empty word")
    whole, frac = divmod(x, 1)
    head = -((-frac * len(word)) // 1)  # ceil of frac * |W|, exact
    indices = word.indices * int(whole) + word.indices[: int(head)]
    return Word(word.alphabet, indices)


def verify_repetition(prefix: SequencePrefix, witness: RepetitionWitness) -> bool:
    """Check prefix[i] = prefix[i-v] for all u+v < i <= u+ext (1-based).

    Raises InsufficientDataError when the witness reaches past the prefix;
    that is not the same answer as False.
    """
    end = witness.u + witness.ext
    if end > len(prefix):
        raise InsufficientDataError(
            f"witness needs {end} positions, prefix holds {len(prefix)}"
        )
    data = prefix.data
    lo = witness.u + witness.v  # last position already inside U V
    return data[lo:end] == data[lo - witness.v:end - witness.v]


def best_repetition_at(prefix: SequencePrefix, ell: int,
                       v_max: int | None = None) -> RepetitionWitness | None:
    """Best repetition witness whose extension ends exactly at position ell.

    Maximizes the ratio (u+ext)/(u+v) = ell/(u+v) over all u >= 0, v >= 1
    with u+ext = ell, exhaustive over v up to the cap. The default cap is
    floor(ell/2): longer periods only witness ratios below 2 and desk-scale
    profiles do not need them; pass v_max=ell for the fully uncapped
    search. Returns None when no witness with ratio > 1 exists within the
    cap. Ties: smallest v, then smallest u.
    """
    if ell < 1:
        raise ValueError("target prefix length must be positive")
    if ell > len(prefix):
        raise InsufficientDataError(
            f"target length {ell} exceeds prefix of length {len(prefix)}"
        )
    s = np.frombuffer(prefix.data, dtype=np.uint8, count=ell)
    cap = ell // 2 if v_max is None else min(v_max, ell)
    best = None  # (u + v, v, u), minimizing u + v maximizes the ratio
    for v in range(1, cap + 1):
        if best is not None and v >= best[0]:
            break  # cost >= v from here on; cannot beat the incumbent
        mism = np.flatnonzero(s[v:] != s[:-v])
        last_bad = int(mism[-1]) + v + 1 if mism.size else 0  # 1-based
        u = max(0, last_bad - v)
        cost = u + v
        if cost < ell and (best is None or cost < best[0]):
            best = (cost, v, u)
    if best is None:
        return None
    _, v, u = best
    return RepetitionWitness(u=u, v=v, ext=ell - u)


def dio_profile(source: SequenceSource, lengths: Sequence[int],
                v_max: int | None = None) -> list[tuple[int, Fraction]]:
    """Best repetition ratio at each target length, as exact rationals.

    Every recorded ratio is achieved by a checkable witness, so the largest
    one is a lower bound for the Diophantine exponent verified to that
    depth. A finite profile never determines the exponent itself.
    """
    if list(lengths) != sorted(set(lengths)):
        raise ValueError("lengths must be strictly increasing")
    if not lengths:
        return []
    prefix = source.prefix(max(lengths))
    out = []
    for ell in lengths:
        w = best_repetition_at(prefix, ell, v_max=v_max)
        out.append((ell, w.ratio if w is not None else Fraction(1)))
    return out


def factor_complexity(prefix: SequencePrefix, n: int) -> int:
    """Number of distinct length-n blocks occurring in the prefix."""
    if n < 1:
        raise ValueError("block length must be positive")
    if n > len(prefix):
        raise InsufficientDataError(
            f"block length {n} exceeds prefix of length {len(prefix)}"
        )
    data = prefix.data
    return len({data[i:i + n] for i in range(len(data) - n + 1)})


def factor_complexity_profile(prefix: SequencePrefix, n_max: int) -> list[int]:
    """factor_complexity(prefix, n) for every n = 1..n_max in one pass.

    Sorts the length-n_max windows once (padded with a sentinel past the
    prefix end) and reads all counts off the common-prefix lengths of
    adjacent sorted rows. Equivalent to calling factor_complexity per n.
    """
    if n_max < 1:
        raise ValueError("block length must be positive")
    total = len(prefix)
    if n_max > total:
        raise InsufficientDataError(
            f"block length {n_max} exceeds prefix of length {total}"
        )
    if prefix.alphabet.size > 255:
        raise ValueError("profile requires a spare byte value as sentinel")
    buf = np.frombuffer(prefix.data, dtype=np.uint8)
    rows = np.full((total, n_max), 255, dtype=np.uint8)
    for j in range(n_max):
        rows[: total - j, j] = buf[j:]
    keys = np.ascontiguousarray(rows).view(np.dtype((np.void, n_max))).ravel()
    order = np.argsort(keys, kind="stable")
    srt = rows[order]
    neq = srt[1:] != srt[:-1]
    lcp = np.where(neq.any(axis=1), neq.argmax(axis=1), n_max)
    counts = []
    for n in range(1, n_max + 1):
        distinct = total - int(np.count_nonzero(lcp >= n))
        # rows starting in the last n-1 positions are sentinel-padded and
        # pairwise distinct; they are not real windows
        counts.append(distinct - (n - 1))
    return counts


def right_special_count(prefix: SequencePrefix, n: int) -> int:
    """Number of distinct length-n blocks followed by >= 2 distinct symbols."""
    if n < 1:
        raise ValueError("block length must be positive")
    if n + 1 > len(prefix):
        raise InsufficientDataError(
            f"need a prefix of length at least {n + 1}, have {len(prefix)}"
        )
    data = prefix.data
    followers: dict[bytes, set[int]] = {}
    for i in range(len(data) - n):
        followers.setdefault(data[i:i + n], set()).add(data[i + n])
    return sum(1 for s in followers.values() if len(s) >= 2)
