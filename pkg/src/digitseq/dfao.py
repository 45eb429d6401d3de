"""Deterministic finite automata with output, used as base-k transducers.

A machine reads the base-k digits of n most-significant first and emits
the output symbol of the state it lands in. Output indexing starts at
n = 0: the empty input (the expansion of 0) yields the initial state's
output, and sequence position p (1-based) corresponds to n = p - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ValidationError
from .validation import ValidationReport
from .words import Alphabet, SequencePrefix, SequenceSource, encode_base_k

__all__ = ["Dfao", "validate_dfao", "run_word", "run", "prefix", "sequence_source"]


@dataclass(frozen=True)
class Dfao:
    """A complete deterministic finite automaton with output.

    delta maps each state to a tuple of k successor states, indexed by the
    input digit; output maps each state to its output token.
    """

    k: int
    states: tuple[str, ...]
    initial: str
    delta: Mapping[str, tuple[str, ...]]
    output: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "delta", dict(self.delta))
        object.__setattr__(self, "output", dict(self.output))

    def output_alphabet(self) -> Alphabet:
        return Alphabet(tuple(sorted(set(self.output.values()))))

    def state_count(self) -> int:
        return len(self.states)


def validate_dfao(m: Dfao) -> ValidationReport:
    """Check totality of the transition table and membership of all names.

    Unreachable states are warnings, not errors.
    """
    report = ValidationReport()
    if m.k < 2:
        report.error("invalid-base", f"input base must be >= 2, got {m.k}")
    if len(set(m.states)) != len(m.states):
        report.error("duplicate-state", "state names must be distinct")
    known = set(m.states)
    if m.initial not in known:
        report.error("unknown-state", f"initial state {m.initial!r} not declared")
    for q in m.states:
        row = m.delta.get(q)
        if row is None:
            report.error("missing-transition", f"no transitions for state {q!r}")
            continue
        if len(row) != max(m.k, 0):
            report.error(
                "missing-transition",
                f"state {q!r} defines {len(row)} of {m.k} digit transitions",
            )
        for d, tgt in enumerate(row):
            if tgt not in known:
                report.error(
                    "unknown-state", f"delta({q!r}, {d}) targets unknown {tgt!r}"
                )
    for q in m.delta:
        if q not in known:
            report.error("unknown-state", f"transition row for unknown state {q!r}")
    for q in m.states:
        if q not in m.output:
            report.error("missing-output", f"state {q!r} has no output symbol")
    for q in m.output:
        if q not in known:
            report.error("unknown-state", f"output for unknown state {q!r}")
    if not report.errors:
        reached = {m.initial}
        frontier = [m.initial]
        while frontier:
            q = frontier.pop()
            for tgt in m.delta[q]:
                if tgt not in reached:
                    reached.add(tgt)
                    frontier.append(tgt)
        for q in m.states:
            if q not in reached:
                report.warn("unreachable-state", f"state {q!r} is unreachable")
    return report


def run_word(m: Dfao, digits) -> str:
    """State reached from the initial state on a digit sequence."""
    state = m.initial
    for d in digits:
        state = m.delta[state][d]
    return state


def run(m: Dfao, n: int) -> str:
    """Output symbol for input n: tau(delta(q0, <n>_k))."""
    if n < 0:
        raise ValueError("input integer must be nonnegative")
    return m.output[run_word(m, encode_base_k(n, m.k).indices)]


def _state_table(m: Dfao, count: int) -> list[str]:
    # <n>_k = <n // k>_k followed by n % k for n >= 1, so states fill in
    # one pass without re-reading digit strings
    states = [m.initial] * count
    for n in range(1, count):
        states[n] = m.delta[states[n // m.k]][n % m.k]
    return states


def prefix(m: Dfao, count: int) -> SequencePrefix:
    """Outputs for n = 0 .. count-1 as a sequence prefix."""
    alphabet = m.output_alphabet()
    out = m.output
    data = bytes(alphabet.index(out[q]) for q in _state_table(m, count))
    return SequencePrefix(f"dfao:{m.initial}@{id(m):x}", alphabet, data)


def sequence_source(m: Dfao, source_id: str) -> SequenceSource:
    report = validate_dfao(m)
    if not report.ok:
        raise ValidationError(report)
    alphabet = m.output_alphabet()
    out = m.output

    def gen(n: int) -> bytes:
        return bytes(alphabet.index(out[q]) for q in _state_table(m, n))

    return SequenceSource(source_id, alphabet, gen)
