"""Ground-truth digit oracles and the machine imitation index.

Everything here runs on arbitrary-precision integers; floating point is
banned in this module so that fixtures and certificates stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .dfao import Dfao
from .errors import EnumerationCapError
from .words import Alphabet, SequencePrefix, SequenceSource, digit_alphabet

__all__ = [
    "CFExpansion",
    "rational_digits",
    "rational_source",
    "surd_digits",
    "surd_source",
    "expansion_stream",
    "xi3_value",
    "xi3_sequence",
    "xi3_source",
    "cf_quadratic",
    "cf_convergents",
    "cf_as_sequence",
    "cf_source",
    "longest_agreement",
    "imitation_index",
    "ENUMERATION_CAP",
    "machine_enumeration_count",
    "parse_stream_spec",
]

ENUMERATION_CAP = 10_000_000


def _check_base(b: int) -> None:
    if b < 2:
        raise ValueError(f"base must be at least 2, got {b}")


def _check_surd(d: int) -> None:
    if d < 2:
        raise ValueError(f"surd radicand must be at least 2, got {d}")
    r = math.isqrt(d)
    if r * r == d:
        raise ValueError(
            f"{d} is a perfect square; use the rational path instead"
        )


def rational_digits(p: int, q: int, b: int, count: int) -> SequencePrefix:
    """First `count` base-b digits of p/q (0 <= p < q), by long division."""
    _check_base(b)
    if q < 1:
        raise ValueError("denominator must be positive")
    if not (0 <= p < q):
        raise ValueError("need 0 <= p < q")
    alphabet = digit_alphabet(b)
    out = bytearray()
    r = p
    for _ in range(count):
        r *= b
        d, r = divmod(r, q)
        out.append(d)
    return SequencePrefix(f"rational:{p}/{q}:base{b}", alphabet, bytes(out))


def rational_source(p: int, q: int, b: int) -> SequenceSource:
    return SequenceSource(
        f"rational:{p}/{q}:base{b}", digit_alphabet(b),
        lambda n: rational_digits(p, q, b, n).data,
    )


def surd_digits(d: int, b: int, count: int) -> tuple[int, SequencePrefix]:
    """(integer part, first `count` fractional base-b digits) of sqrt(d).

    Digit i is read off the integer square root of d * b^(2i): exact
    truncation, no rounding drift. Recomputing at higher precision never
    changes earlier digits, because floor(x / b^j) commutes with the
    truncation.
    """
    _check_base(b)
    _check_surd(d)
    whole = math.isqrt(d)
    scaled = math.isqrt(d * b ** (2 * count))
    digits = bytearray(count)
    frac = scaled - whole * b ** count
    for i in range(count - 1, -1, -1):
        frac, digits[i] = divmod(frac, b)
    alphabet = digit_alphabet(b)
    return whole, SequencePrefix(f"surd:{d}:base{b}", alphabet, bytes(digits))


def surd_source(d: int, b: int) -> SequenceSource:
    """Fractional digits of sqrt(d) as an infinite source."""
    return SequenceSource(
        f"surd:{d}:base{b}", digit_alphabet(b),
        lambda n: surd_digits(d, b, n)[1].data,
    )


def expansion_stream(source_kind: str, b: int, **kw) -> SequenceSource:
    """The digit string of a number's base-b expansion as one stream.

    The integer part contributes its own digits (none for 0, matching the
    empty expansion of zero), followed by the fractional digits: sqrt(2)
    in base 2 streams as 1 0 1 1 0 ..., while 1/3 streams as 0 1 0 1 ....
    This is the stream the imitation game compares machines against.
    """
    _check_base(b)
    alphabet = digit_alphabet(b)
    if source_kind == "surd":
        d = kw["d"]
        _check_surd(d)
        whole = math.isqrt(d)
        head = bytes(int(c) for c in _int_digits(whole, b))

        def gen(n: int) -> bytes:
            if n <= len(head):
                return head[:n]
            return head + surd_digits(d, b, n - len(head))[1].data

        return SequenceSource(f"expansion:surd:{d}:base{b}", alphabet, gen)
    if source_kind == "rational":
        p, q = kw["p"], kw["q"]
        if q < 1 or p < 0:
            raise ValueError("need p >= 0, q >= 1")
        whole, p = divmod(p, q)
        head = bytes(int(c) for c in _int_digits(whole, b))

        def gen(n: int) -> bytes:
            if n <= len(head):
                return head[:n]
            return head + rational_digits(p, q, b, n - len(head)).data

        return SequenceSource(
            f"expansion:rational:{p + whole * q}/{q}:base{b}", alphabet, gen
        )
    raise ValueError(f"unknown expansion stream kind {source_kind!r}")


def _int_digits(n: int, b: int) -> list[int]:
    digits: list[int] = []
    while n > 0:
        n, r = divmod(n, b)
        digits.append(r)
    digits.reverse()
    return digits


def xi3_value(n: int) -> int:
    """Ternary value at index n >= 1: 2 when the binary expansion of n is
    ones^k zeros^k ones^k for some k >= 1, else the parity of its number
    of ones."""
    if n < 1:
        raise ValueError("index must be positive")
    w = bin(n)[2:]
    if len(w) % 3 == 0:
        k = len(w) // 3
        if w == "1" * k + "0" * k + "1" * k:
            return 2
    return w.count("1") % 2


_XI3_ALPHABET = Alphabet(("0", "1", "2"))


def xi3_sequence(count: int) -> SequencePrefix:
    """First `count` values; position p holds the value for n = p."""
    data = bytes(xi3_value(n) for n in range(1, count + 1))
    return SequencePrefix("xi3", _XI3_ALPHABET, data)


def xi3_source() -> SequenceSource:
    return SequenceSource("xi3", _XI3_ALPHABET, lambda n: xi3_sequence(n).data)


@dataclass(frozen=True)
class CFExpansion:
    """A continued fraction [a0; a1 a2 ...] with an eventually periodic
    tail; the period is minimal and non-empty."""

    a0: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def partial_quotient(self, i: int) -> int:
        """a_i for i >= 1."""
        if i < 1:
            raise ValueError("partial quotients are indexed from 1")
        i -= 1
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]


def cf_quadratic(d: int) -> CFExpansion:
    """Exact periodic continued fraction of sqrt(d), d not a square.

    Classical integer recurrence on states (m, q): a = floor((a0 + m)/q),
    m' = a*q - m, q' = (d - m'^2)/q. The state orbit is purely periodic
    after a0, so the first state repeat closes the minimal period.
    """
    _check_surd(d)
    a0 = math.isqrt(d)
    quotients = []
    seen: dict[tuple[int, int], int] = {}
    m, q = 0, 1
    m = a0 * q - m
    q = (d - m * m) // q
    while (m, q) not in seen:
        seen[(m, q)] = len(quotients)
        a = (a0 + m) // q
        quotients.append(a)
        m = a * q - m
        q = (d - m * m) // q
    start = seen[(m, q)]
    return CFExpansion(
        a0=a0, preperiod=tuple(quotients[:start]), period=tuple(quotients[start:])
    )


def cf_convergents(cf: CFExpansion, count: int) -> list[Fraction]:
    """First `count` convergents p_m/q_m, starting with a0."""
    convs = []
    p_prev, p = 1, cf.a0
    q_prev, q = 0, 1
    convs.append(Fraction(p, q))
    for i in range(1, count):
        a = cf.partial_quotient(i)
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        convs.append(Fraction(p, q))
    return convs


def cf_as_sequence(cf: CFExpansion, count: int) -> SequencePrefix:
    """The partial-quotient word a1 a2 ... as a sequence over the finite
    alphabet of values it uses."""
    values = sorted(set(cf.preperiod) | set(cf.period))
    alphabet = Alphabet(tuple(str(v) for v in values))
    index = {v: i for i, v in enumerate(values)}
    data = bytes(index[cf.partial_quotient(i)] for i in range(1, count + 1))
    sid = f"cf:[{cf.a0};{','.join(map(str, cf.preperiod))}|" \
          f"{','.join(map(str, cf.period))}]"
    return SequencePrefix(sid, alphabet, data)


def cf_source(cf: CFExpansion) -> SequenceSource:
    probe = cf_as_sequence(cf, 1)
    return SequenceSource(
        probe.source_id, probe.alphabet, lambda n: cf_as_sequence(cf, n).data
    )


def longest_agreement(a: SequenceSource, b: SequenceSource, max_len: int
                      ) -> tuple[int, bool]:
    """Largest L <= max_len with a[1..L] = b[1..L].

    Returns (L, censored): censored means no disagreement was found up to
    max_len, so L is only a lower bound.
    """
    if a.alphabet.symbols != b.alphabet.symbols:
        raise ValueError("sources must share an alphabet")
    pa = a.prefix(max_len).data
    pb = b.prefix(max_len).data
    if pa == pb:
        return max_len, True
    n = 0
    while pa[n] == pb[n]:
        n += 1
    return n, False


def machine_enumeration_count(k: int, max_states: int, outputs: int) -> int:
    """Nominal number of candidate machines with up to max_states states:
    all transition tables times all output assignments, before canonical
    deduplication."""
    return sum(m ** (m * k) * outputs ** m for m in range(1, max_states + 1))


def _canonical_deltas(m: int, k: int):
    """Transition tables on states 0..m-1 whose breadth-first discovery
    order from state 0 is exactly 0, 1, ..., m-1 (every state reachable,
    no isomorphic duplicates)."""
    for flat in product(range(m), repeat=m * k):
        delta = tuple(flat[i * k:(i + 1) * k] for i in range(m))
        order = [0]
        seen = {0}
        for q in order:
            for d in range(k):
                t = delta[q][d]
                if t not in seen:
                    seen.add(t)
                    order.append(t)
        if len(order) == m and order == sorted(order):
            yield delta


def imitation_index(target: SequenceSource, k: int, max_states: int,
                    max_len: int, cap: int = ENUMERATION_CAP
                    ) -> tuple[int, bool, Dfao]:
    """Longest prefix of the target digit stream reproducible by a base-k
    automaton with at most max_states states.

    Exhaustive over canonical transition tables; output tables are not
    enumerated, because for a fixed table the maximal agreement is forced
    greedily (each state's output is pinned by the first position that
    reaches it). Returns (I, censored, a best machine). Refuses runs whose
    nominal candidate count exceeds the cap.
    """
    if max_states < 1:
        raise ValueError("need at least one state")
    outputs = target.alphabet.size
    required = machine_enumeration_count(k, max_states, outputs)
    if required > cap:
        raise EnumerationCapError(required, cap)
    goal = target.prefix(max_len).data
    best = None  # (agreement, m, delta, tau)
    for m in range(1, max_states + 1):
        parents = [n // k for n in range(max_len)]
        digits = [n % k for n in range(max_len)]
        for delta in _canonical_deltas(m, k):
            states = [0] * max_len
            for n in range(1, max_len):
                states[n] = delta[states[parents[n]]][digits[n]]
            tau: dict[int, int] = {}
            agree = max_len
            for pos in range(max_len):
                s = states[pos]
                want = goal[pos]
                if s in tau:
                    if tau[s] != want:
                        agree = pos
                        break
                else:
                    tau[s] = want
            if best is None or agree > best[0]:
                best = (agree, m, delta, dict(tau))
                if agree == max_len:
                    break
        if best is not None and best[0] == max_len:
            break
    agree, m, delta, tau = best
    alphabet = target.alphabet
    names = tuple(f"q{i}" for i in range(m))
    machine = Dfao(
        k=k,
        states=names,
        initial="q0",
        delta={names[q]: tuple(names[t] for t in delta[q]) for q in range(m)},
        output={
            names[q]: alphabet.symbols[tau.get(q, 0)] for q in range(m)
        },
    )
    return agree, agree == max_len, machine


def parse_stream_spec(spec: str, base: int | None = None,
                      expansion: bool = False) -> SequenceSource:
    """CLI stream specs: rational:p/q, surd:d, xi3, file:<path>.

    With expansion=True the rational and surd kinds stream the full
    base-b digit string (integer part included) instead of the fractional
    digits alone; the imitation game compares against that form.
    """
    kind, _, rest = spec.partition(":")
    if kind == "rational":
        p_str, _, q_str = rest.partition("/")
        if base is None:
            raise ValueError("rational streams need --base")
        p, q = int(p_str), int(q_str)
        if expansion:
            return expansion_stream("rational", base, p=p, q=q)
        return rational_source(p, q, base)
    if kind == "surd":
        if base is None:
            raise ValueError("surd streams need --base")
        if expansion:
            return expansion_stream("surd", base, d=int(rest))
        return surd_source(int(rest), base)
    if kind == "xi3":
        return xi3_source()
    if kind == "file":
        return _file_source(rest)
    raise ValueError(f"unknown stream spec {spec!r}")


def _file_source(path: str) -> SequenceSource:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if "\n" in text.strip():
        tokens = [line.strip() for line in text.splitlines() if line.strip()]
    else:
        tokens = list(text.strip())
    if not tokens:
        raise ValueError(f"stream file {path!r} is empty")
    alphabet = Alphabet(tuple(sorted(set(tokens))))
    data = bytes(alphabet.index(t) for t in tokens)
    prefix = SequencePrefix(f"file:{path}", alphabet, data)
    return SequenceSource.from_prefix(prefix)
