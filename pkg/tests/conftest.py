"""Shared fixtures and independent oracles.

Oracles here deliberately avoid the library's own code paths: repetition
search by triple loop, digit parity by string counting, the three-squares
predicate by direct arithmetic, morphic growth by big-integer iteration.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from digitseq import catalog
from digitseq.morphic import MorphicSpec
from digitseq.pda import BOTTOM, Dpao
from digitseq.words import Alphabet, SequencePrefix, SequenceSource


# --- prefix/source helpers -------------------------------------------------

def str_prefix(text: str, symbols: str | None = None,
               source_id: str = "test") -> SequencePrefix:
    alpha = Alphabet(tuple(symbols) if symbols else tuple(sorted(set(text))))
    return SequencePrefix(source_id, alpha,
                          bytes(alpha.index(c) for c in text))


def str_source(text: str, symbols: str | None = None,
               source_id: str = "test") -> SequenceSource:
    return SequenceSource.from_prefix(str_prefix(text, symbols, source_id))


def periodic_source(block: str, symbols: str | None = None) -> SequenceSource:
    alpha = Alphabet(tuple(symbols) if symbols else tuple(sorted(set(block))))
    pattern = bytes(alpha.index(c) for c in block)

    def gen(n: int) -> bytes:
        reps = -(-n // len(pattern))
        return (pattern * reps)[:n]

    return SequenceSource(f"periodic:{block}", alpha, gen)


# --- arithmetic oracles ----------------------------------------------------

def parity_oracle(n: int) -> str:
    """Thue-Morse: parity of the binary digit sum."""
    return str(bin(n).count("1") % 2)


def legendre_oracle(n: int) -> str:
    """1 iff n is a sum of three squares: n != 4^i (8j + 7)."""
    m = n
    while m and m % 4 == 0:
        m //= 4
    return "0" if m % 8 == 7 else "1"


def balance_oracle(n: int) -> str:
    """1 iff |#ones - #zeros| <= 1 in the binary expansion of n."""
    w = bin(n)[2:] if n else ""
    return "1" if abs(w.count("1") - w.count("0")) <= 1 else "0"


def xi3_oracle(n: int) -> int:
    """Regular-expression route to the ternary predicate value."""
    import re
    w = bin(n)[2:]
    m = re.fullmatch(r"(1+)(0+)(1+)", w)
    if m and len(m.group(1)) == len(m.group(2)) == len(m.group(3)):
        return 2
    return w.count("1") % 2


# --- brute-force repetition search ----------------------------------------

def brute_force_best(text: str, ell: int, v_max: int | None = None):
    """Cubic search over every (u, v); returns (ratio, v, u) or None."""
    best = None
    cap = ell if v_max is None else min(v_max, ell)
    for v in range(1, cap + 1):
        for u in range(0, ell - v + 1):
            if any(text[i] != text[i - v] for i in range(u + v, ell)):
                continue
            ratio = Fraction(ell, u + v)
            if ratio <= 1:
                continue
            if (best is None or ratio > best[0]
                    or (ratio == best[0] and (v, u) < (best[1], best[2]))):
                best = (ratio, v, u)
    return best


def naive_complexity(text: str, n: int) -> int:
    return len({text[i:i + n] for i in range(len(text) - n + 1)})


# --- random corpora --------------------------------------------------------

LETTERS = "abcd"


def random_morphic(rng: random.Random, require_reachable: bool = True
                   ) -> MorphicSpec:
    """A valid spec with |A| <= 4 and image lengths <= 3; all letters
    reachable from the start when require_reachable is set."""
    from digitseq.morphic import validate_morphic
    while True:
        d = rng.randint(1, 4)
        letters = LETTERS[:d]
        rules = {}
        for a in letters:
            length = rng.randint(1, 3)
            rules[a] = tuple(rng.choice(letters) for _ in range(length))
        extra = tuple(rng.choice(letters)
                      for _ in range(rng.randint(1, 2)))
        rules["a"] = ("a",) + extra
        spec = MorphicSpec(
            internal=tuple(letters),
            rules=rules,
            start="a",
            external=tuple(letters),
            coding={a: a for a in letters},
        )
        report = validate_morphic(spec)
        if not report.ok:
            continue
        if require_reachable and report.warnings:
            continue
        return spec


def morphic_growth_oracle(spec: MorphicSpec) -> bool:
    """Exponential growth by direct big-integer length iteration.

    For |A| <= 4 and images of length <= 3, polynomial growth keeps
    |sigma^n(a)| at or below (n * L)^(|A| - 1) for every n, while any
    exponential spec overshoots that bound at n = 1000 by a wide margin;
    the first overshoot decides.
    """
    from digitseq.morphic import image_length, incidence
    d = len(spec.internal)
    big_l = image_length(spec)
    assert d <= 4 and big_l <= 3, "oracle calibrated for the small corpus"
    threshold = (1000 * big_l) ** (d - 1)
    m = incidence(spec)
    idx = {a: i for i, a in enumerate(spec.internal)}
    counts = [0] * d
    counts[idx[spec.start]] = 1
    for _ in range(1000):
        counts = [sum(m[i][j] * counts[j] for j in range(d)) for i in range(d)]
        if sum(counts) > threshold:
            return True
    return False


def random_dpao(rng: random.Random) -> Dpao:
    """A valid machine with <= 3 states and <= 2 stack symbols over base 2."""
    n_states = rng.randint(1, 3)
    states = tuple(f"q{i}" for i in range(n_states))
    n_sym = rng.randint(1, 2)
    symbols = ("X", "Y")[:n_sym]
    transitions = {}
    for q in states:
        for a in symbols + (BOTTOM,):
            if a != BOTTOM and rng.random() < 0.3:
                transitions[(q, a, None)] = (rng.choice(states), ())
                continue
            for d in range(2):
                push_len = rng.choice((0, 0, 1, 1, 2))
                push = tuple(rng.choice(symbols) for _ in range(push_len))
                transitions[(q, a, d)] = (rng.choice(states), push)
    output = {
        (q, a): rng.choice("01")
        for q in states for a in symbols + (BOTTOM,)
    }
    return Dpao(k=2, states=states, initial=states[0],
                stack_symbols=symbols, transitions=transitions, output=output)


def simulate_pop_states(m: Dpao, state: str, symbol: str, depth: int
                        ) -> set[str]:
    """States observed at the first moment the starting top symbol's slot
    empties, over all digit words of length <= depth.

    Steps through transitions one micro-move at a time (the digit move,
    then each epsilon pop) so that a removal in the middle of a closure is
    caught in the state where it happens.
    """
    observed: set[str] = set()

    def settle(q: str, stack: tuple[str, ...]):
        # run pending epsilon pops one at a time; None means slot emptied
        while stack:
            t = m.transitions.get((q, stack[-1], None))
            if t is None:
                return q, stack
            q = t[0]
            stack = stack[:-1]
            if not stack:
                observed.add(q)
                return None
        observed.add(q)
        return None

    def walk(q: str, stack: tuple[str, ...], remaining: int):
        if remaining == 0:
            return
        for d in range(m.k):
            t = m.transitions.get((q, stack[-1], d))
            if t is None:
                continue
            to, push = t
            new_stack = stack[:-1] + push
            if not new_stack:
                observed.add(to)
                continue
            settled = settle(to, new_stack)
            if settled is not None:
                walk(settled[0], settled[1], remaining - 1)

    start = settle(state, (symbol,))
    if start is not None:
        walk(start[0], start[1], depth)
    return observed


# --- catalog fixtures -------------------------------------------------------

@pytest.fixture(scope="session")
def tm_dfao():
    return catalog.thue_morse_dfao()


@pytest.fixture(scope="session")
def three_squares():
    return catalog.three_squares_dfao()


@pytest.fixture(scope="session")
def tm_morphic():
    return catalog.thue_morse_morphic()


@pytest.fixture(scope="session")
def xi1():
    return catalog.xi1_morphic()


@pytest.fixture(scope="session")
def squares():
    return catalog.squares_morphic()


@pytest.fixture(scope="session")
def xi2():
    return catalog.xi2_dpao()
