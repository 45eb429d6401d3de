"""Morphisms, codings, fixed points, and growth analysis.

A spec is the 5-tuple (internal alphabet, morphism, start letter, external
alphabet, coding). The morphism must be non-erasing and prolongable on the
start letter; iterating it yields the unique fixed point starting with
that letter, and the coding maps it onto the output word.

Growth is decided two ways on purpose: the boolean "exponential" answer is
purely combinatorial (strongly connected components of the incidence
multigraph), because certificates depend on it; the numeric spectral
radius is reported separately and only for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .dfao import Dfao
from .errors import BudgetExceededError, NumericError, ValidationError
from .validation import ValidationReport
from .words import Alphabet, SequencePrefix, SequenceSource

__all__ = [
    "MorphicSpec",
    "GrowthReport",
    "LetterGrowth",
    "RepetitionSeed",
    "validate_morphic",
    "require_valid",
    "incidence",
    "exponential_growth",
    "spectral_radius_estimate",
    "growth_report",
    "fixed_point_prefix",
    "sequence_source",
    "internal_source",
    "image_length",
    "iterated_length",
    "repetition_seed",
    "to_dfao",
    "from_dfao",
]


@dataclass(frozen=True)
class MorphicSpec:
    """Internal alphabet, rules, start letter, external alphabet, coding."""

    internal: tuple[str, ...]
    rules: Mapping[str, tuple[str, ...]]
    start: str
    external: tuple[str, ...]
    coding: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(
            self, "rules", {a: tuple(img) for a, img in self.rules.items()}
        )
        object.__setattr__(self, "coding", dict(self.coding))

    def internal_alphabet(self) -> Alphabet:
        return Alphabet(self.internal)

    def external_alphabet(self) -> Alphabet:
        return Alphabet(self.external)

    def is_uniform(self) -> int | None:
        """The uniform image length k, or None if images differ in length."""
        lengths = {len(img) for img in self.rules.values()}
        return lengths.pop() if len(lengths) == 1 else None


def validate_morphic(spec: MorphicSpec) -> ValidationReport:
    report = ValidationReport()
    letters = set(spec.internal)
    if len(letters) != len(spec.internal):
        report.error("duplicate-letter", "internal letters must be distinct")
    if len(set(spec.external)) != len(spec.external):
        report.error("duplicate-letter", "external letters must be distinct")
    if spec.start not in letters:
        report.error("unknown-letter", f"start letter {spec.start!r} not declared")
    for a in spec.internal:
        img = spec.rules.get(a)
        if img is None:
            report.error("missing-rule", f"letter {a!r} has no image")
            continue
        if len(img) == 0:
            report.error(
                "unsupported-erasing",
                f"letter {a!r} maps to the empty word; erasing morphisms "
                "are rejected, not normalized",
            )
        for b in img:
            if b not in letters:
                report.error("unknown-letter", f"image of {a!r} uses {b!r}")
    for a in spec.rules:
        if a not in letters:
            report.error("unknown-letter", f"rule for undeclared letter {a!r}")
    for a in spec.internal:
        c = spec.coding.get(a)
        if c is None:
            report.error("missing-coding", f"letter {a!r} has no coding")
        elif c not in set(spec.external):
            report.error("unknown-letter", f"coding of {a!r} is {c!r}")
    if report.errors:
        return report
    img = spec.rules[spec.start]
    # non-erasing images make |sigma^n(start)| -> infinity automatic once
    # sigma(start) = start W with W non-empty
    if img[0] != spec.start or len(img) < 2:
        report.error(
            "not-prolongable",
            f"image of start must be {spec.start!r} followed by at least "
            f"one letter, got {''.join(img)!r}",
        )
        return report
    reached = {spec.start}
    frontier = [spec.start]
    while frontier:
        a = frontier.pop()
        for b in spec.rules[a]:
            if b not in reached:
                reached.add(b)
                frontier.append(b)
    for a in spec.internal:
        if a not in reached:
            report.warn(
                "unreachable-letter",
                f"letter {a!r} never occurs in the fixed point",
            )
    return report


def require_valid(spec: MorphicSpec) -> None:
    report = validate_morphic(spec)
    if not report.ok:
        raise ValidationError(report)


def incidence(spec: MorphicSpec) -> list[list[int]]:
    """Matrix M with M[i][j] = number of occurrences of letter i in the
    image of letter j, letters in alphabet order."""
    idx = {a: i for i, a in enumerate(spec.internal)}
    d = len(spec.internal)
    m = [[0] * d for _ in range(d)]
    for j, a in enumerate(spec.internal):
        for b in spec.rules[a]:
            m[idx[b]][j] += 1
    return m


def image_length(spec: MorphicSpec) -> int:
    return max(len(img) for img in spec.rules.values())


def _edges(spec: MorphicSpec) -> dict[str, dict[str, int]]:
    # multigraph: an edge a -> b with multiplicity |sigma(a)|_b
    out: dict[str, dict[str, int]] = {a: {} for a in spec.internal}
    for a in spec.internal:
        for b in spec.rules[a]:
            out[a][b] = out[a].get(b, 0) + 1
    return out


def _sccs(spec: MorphicSpec) -> list[tuple[str, ...]]:
    """Strongly connected components, iterative Tarjan, deterministic order."""
    edges = _edges(spec)
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[tuple[str, ...]] = []
    counter = 0
    for root in spec.internal:
        if root in index:
            continue
        work = [(root, iter(sorted(edges[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(edges[w]))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(tuple(sorted(comp)))
    return comps


def _component_is_exponential(comp: tuple[str, ...],
                              edges: dict[str, dict[str, int]]) -> bool:
    # an irreducible nonnegative integer matrix has Perron root 1 exactly
    # when its graph is a single cycle; more than one within-component
    # out-edge at any vertex breaks that
    members = set(comp)
    if len(comp) == 1:
        a = comp[0]
        return edges[a].get(a, 0) >= 2
    for a in comp:
        inside = sum(mult for b, mult in edges[a].items() if b in members)
        if inside >= 2:
            return True
    return False


def _component_has_cycle(comp: tuple[str, ...],
                         edges: dict[str, dict[str, int]]) -> bool:
    if len(comp) > 1:
        return True
    a = comp[0]
    return edges[a].get(a, 0) >= 1


def exponential_growth(spec: MorphicSpec) -> bool:
    """Exact combinatorial test for spectral radius of the incidence
    matrix exceeding 1. No floating point is involved."""
    require_valid(spec)
    edges = _edges(spec)
    return any(_component_is_exponential(c, edges) for c in _sccs(spec))


def spectral_radius_estimate(spec: MorphicSpec, tol: float = 1e-9) -> float:
    """Numeric spectral radius of the incidence matrix.

    Computed by a dense eigensolve of the small integer matrix, which is
    accurate far below tol even for the defective radius-1 matrices that
    defeat plain power iteration. Consistent with exponential_growth.
    """
    require_valid(spec)
    m = np.array(incidence(spec), dtype=float)
    try:
        eigenvalues = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    radius = float(np.max(np.abs(eigenvalues)))
    if not np.isfinite(radius):
        raise NumericError("eigensolver returned a non-finite radius")
    exact = exponential_growth(spec)
    if (exact and radius < 1 - 1e-6) or (not exact and radius > 1 + 1e-6):
        raise NumericError(
            f"numeric radius {radius} contradicts the combinatorial decision"
        )
    return radius


@dataclass(frozen=True)
class LetterGrowth:
    theta: float
    poly_degree: int
    exponential: bool


@dataclass(frozen=True)
class GrowthReport:
    per_letter: dict[str, LetterGrowth]
    maximal: tuple[str, ...]
    global_exponential: bool


def _component_radius(comp: tuple[str, ...], spec: MorphicSpec,
                      edges: dict[str, dict[str, int]]) -> float:
    if not _component_has_cycle(comp, edges):
        return 0.0
    if not _component_is_exponential(comp, edges):
        return 1.0  # a single cycle, exactly
    idx = {a: i for i, a in enumerate(comp)}
    sub = np.zeros((len(comp), len(comp)))
    for a in comp:
        for b, mult in edges[a].items():
            if b in idx:
                sub[idx[b]][idx[a]] = mult
    return float(np.max(np.abs(np.linalg.eigvals(sub))))


def growth_report(spec: MorphicSpec) -> GrowthReport:
    """Per-letter growth indices from the condensation of the incidence
    multigraph.

    |sigma^n(b)| grows like n^k * theta^n where theta is the largest
    component radius reachable from b and k is one less than the longest
    chain of theta-achieving components on a reachability path. The
    convention is validated against direct iteration in the test suite.
    """
    require_valid(spec)
    edges = _edges(spec)
    comps = _sccs(spec)
    comp_of = {a: ci for ci, comp in enumerate(comps) for a in comp}
    radii = [_component_radius(c, spec, edges) for c in comps]
    succ: list[set[int]] = [set() for _ in comps]
    for a in spec.internal:
        for b in edges[a]:
            ca, cb = comp_of[a], comp_of[b]
            if ca != cb:
                succ[ca].add(cb)

    def close(ci: int) -> set[int]:
        seen = {ci}
        frontier = [ci]
        while frontier:
            c = frontier.pop()
            for d in succ[c]:
                if d not in seen:
                    seen.add(d)
                    frontier.append(d)
        return seen

    reach = [close(ci) for ci in range(len(comps))]

    def chain_count(theta: float) -> list[int]:
        # longest theta-achieving chain through the condensation DAG,
        # computed bottom-up over the reverse topological order Tarjan gives
        counts = [0] * len(comps)
        for ci in range(len(comps)):  # Tarjan emits successors first
            best_succ = max((counts[d] for d in succ[ci]), default=0)
            counts[ci] = best_succ + (1 if abs(radii[ci] - theta) <= 1e-9 else 0)
        return counts

    per_letter: dict[str, LetterGrowth] = {}
    counts_cache: dict[float, list[int]] = {}
    for a in spec.internal:
        reachable = reach[comp_of[a]]
        theta = max(radii[ci] for ci in reachable)
        if theta not in counts_cache:
            counts_cache[theta] = chain_count(theta)
        k = counts_cache[theta][comp_of[a]] - 1
        is_exp = any(
            _component_is_exponential(comps[ci], edges) for ci in reachable
        )
        per_letter[a] = LetterGrowth(theta=theta, poly_degree=k, exponential=is_exp)

    occurring = {spec.start}
    frontier = [spec.start]
    while frontier:
        a = frontier.pop()
        for b in spec.rules[a]:
            if b not in occurring:
                occurring.add(b)
                frontier.append(b)
    best = max(
        (per_letter[a].theta, per_letter[a].poly_degree) for a in occurring
    )
    maximal = tuple(
        a for a in spec.internal
        if a in occurring
        and abs(per_letter[a].theta - best[0]) <= 1e-9
        and per_letter[a].poly_degree == best[1]
    )
    global_exp = any(_component_is_exponential(c, edges) for c in comps)
    return GrowthReport(per_letter=per_letter, maximal=maximal,
                        global_exponential=global_exp)


def _expand_indices(spec: MorphicSpec, count: int) -> bytes:
    """First `count` letters of the fixed point, as internal indices."""
    alpha = {a: i for i, a in enumerate(spec.internal)}
    images = [bytes(alpha[b] for b in spec.rules[a]) for a in spec.internal]
    out = bytearray(images[alpha[spec.start]])
    i = 1
    while len(out) < count:
        out.extend(images[out[i]])
        i += 1
    return bytes(out[:count])


def _coding_table(spec: MorphicSpec, ext_alpha: Alphabet) -> bytes:
    table = bytearray(256)
    for i, a in enumerate(spec.internal):
        table[i] = ext_alpha.index(spec.coding[a])
    return bytes(table)


def fixed_point_prefix(spec: MorphicSpec, count: int
                       ) -> tuple[SequencePrefix, SequencePrefix]:
    """(coded prefix over the external alphabet, internal prefix).

    Streaming expansion: the fixed point is sigma(start) followed by the
    images of its own letters in order, so one growing buffer suffices.
    """
    require_valid(spec)
    internal = _expand_indices(spec, count)
    ext_alpha = spec.external_alphabet()
    coded = internal.translate(_coding_table(spec, ext_alpha))
    sid = f"morphic:{spec.start}->{''.join(spec.rules[spec.start])}"
    return (
        SequencePrefix(sid, ext_alpha, coded),
        SequencePrefix(sid + ":internal", spec.internal_alphabet(), internal),
    )


def sequence_source(spec: MorphicSpec, source_id: str) -> SequenceSource:
    require_valid(spec)
    ext_alpha = spec.external_alphabet()
    table = _coding_table(spec, ext_alpha)

    def gen(n: int) -> bytes:
        return _expand_indices(spec, n).translate(table)

    return SequenceSource(source_id, ext_alpha, gen)


def internal_source(spec: MorphicSpec, source_id: str) -> SequenceSource:
    require_valid(spec)
    return SequenceSource(
        source_id, spec.internal_alphabet(), lambda n: _expand_indices(spec, n)
    )


def iterated_length(spec: MorphicSpec, letters, n: int) -> int:
    """|sigma^n(w)| for the word w given as an iterable of letters.

    Exact integer arithmetic on letter-count vectors under the incidence
    matrix; no words are materialized.
    """
    idx = {a: i for i, a in enumerate(spec.internal)}
    counts = [0] * len(spec.internal)
    for a in letters:
        counts[idx[a]] += 1
    m = incidence(spec)
    d = len(spec.internal)
    for _ in range(n):
        counts = [sum(m[i][j] * counts[j] for j in range(d)) for i in range(d)]
    return sum(counts)


@dataclass(frozen=True)
class RepetitionSeed:
    """Positions p1 < p2 of two occurrences of a maximal-growth letter b
    in the internal fixed point, with U = u[1..p1-1] and V = u[p1+1..p2-1],
    so that U b V b is a prefix."""

    letter: str
    p1: int
    p2: int
    u: tuple[str, ...]
    v: tuple[str, ...]


def repetition_seed(spec: MorphicSpec, scan_len: int = 4096) -> RepetitionSeed:
    """First repeated maximal-growth letter in the internal fixed point.

    Deterministic choice: the maximal-growth letter earliest in alphabet
    order that occurs twice within scan_len. Requires exponential growth;
    such a letter recurs infinitely often, so a large enough scan always
    succeeds.
    """
    if not exponential_growth(spec):
        raise ValueError(
            "repetition seeds require a morphism with exponential growth"
        )
    maximal = set(growth_report(spec).maximal)
    word = _expand_indices(spec, scan_len)
    letters = spec.internal
    for b in spec.internal:
        if b not in maximal:
            continue
        bi = letters.index(b)
        first = word.find(bi)
        if first < 0:
            continue
        second = word.find(bi, first + 1)
        if second < 0:
            continue
        u = tuple(letters[i] for i in word[:first])
        v = tuple(letters[i] for i in word[first + 1:second])
        return RepetitionSeed(letter=b, p1=first + 1, p2=second + 1, u=u, v=v)
    raise BudgetExceededError(
        f"no maximal-growth letter occurs twice within {scan_len} positions"
    )


def to_dfao(spec: MorphicSpec) -> Dfao:
    """Convert a k-uniform spec into the equivalent base-k automaton.

    Letters become states, the i-th letter of each image becomes the
    digit-i transition, and the coding becomes the output table. Outputs
    agree with the fixed point for every n.
    """
    require_valid(spec)
    k = spec.is_uniform()
    if k is None:
        raise ValueError("only uniform morphisms convert to an automaton")
    if k < 2:
        raise ValueError("uniform image length must be at least 2")
    delta = {a: tuple(spec.rules[a]) for a in spec.internal}
    return Dfao(
        k=k,
        states=spec.internal,
        initial=spec.start,
        delta=delta,
        output=dict(spec.coding),
    )


def from_dfao(m: Dfao) -> MorphicSpec:
    """Convert an automaton with delta(q0, 0) = q0 into a k-uniform spec.

    The general leading-zero repair is out of scope; automata whose
    initial state moves on digit 0 are rejected as unsupported.
    """
    if m.delta[m.initial][0] != m.initial:
        raise ValueError(
            "unsupported form: conversion requires delta(initial, 0) = initial"
        )
    spec = MorphicSpec(
        internal=m.states,
        rules={q: tuple(m.delta[q]) for q in m.states},
        start=m.initial,
        external=tuple(sorted(set(m.output.values()))),
        coding=dict(m.output),
    )
    require_valid(spec)
    return spec
