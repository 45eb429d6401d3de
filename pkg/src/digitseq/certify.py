"""Repetition certificates: construction and independent verification.

A certificate packages machine-checkable evidence that an output sequence
has Diophantine exponent above 1: a family of repetition witnesses that
were actually verified against a generated prefix, exact rational bounds,
and the depth to which the checks ran. Everything stored is an integer or
an exact rational, so re-verification is bit-for-bit reproducible.

Position bookkeeping (fixed once, used everywhere): machine outputs are
indexed from n = 0, and input integer n sits at 1-based sequence position
n + 1. The output-equality family of a pair n < n' says that for every
level l, the outputs at k^l*n + i and k^l*n' + i agree for 0 <= i < k^l;
those are sequence positions k^l*n + i + 1 and k^l*n' + i + 1. The
witness at level l is then u = k^l*n, v = k^l*(n'-n), ext = v + k^l.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import dfao as dfao_mod
from . import morphic as morphic_mod
from . import pda as pda_mod
from .errors import BudgetExceededError, PairRefutedError
from .words import (RepetitionWitness, SequenceSource, encode_base_k,
                    verify_repetition)

__all__ = [
    "Certificate",
    "VerificationReport",
    "certificate_from_pair",
    "certify_dfao",
    "certify_morphic",
    "certify_pda",
    "verify_certificate",
    "certificate_to_json",
    "certificate_from_json",
]

KINDS = ("dfao-pigeonhole", "morphic-witness", "pda-pair", "sequence-pair")


@dataclass(frozen=True)
class Certificate:
    """Evidence that a source's output has dio > 1, verified to a depth.

    For pair kinds, dio_lower_bound is 1 + 1/(n'-1) by convention (the
    level-0 witness achieves it; deeper witnesses keep the family's
    exponent above 1 at every sampled prefix length). For morphic kind it
    is the minimum of the verified witness ratios. ratio_growth_bound
    caps the growth of consecutive witnessed prefix lengths: k for pair
    families, the longest image length for morphic ones.
    """

    kind: str
    machine_ref: str
    dio_lower_bound: Fraction
    ratio_growth_bound: Fraction
    verified_depth: int
    witnesses: tuple[RepetitionWitness, ...]
    k: int | None = None
    pair: tuple[int, int] | None = None
    method: str | None = None
    seed_letter: str | None = None
    seed_positions: tuple[int, int] | None = None


def _pair_witness(n: int, n_prime: int, k: int, level: int) -> RepetitionWitness:
    scale = k ** level
    return RepetitionWitness(
        u=scale * n, v=scale * (n_prime - n), ext=scale * (n_prime - n) + scale
    )


def certificate_from_pair(source: SequenceSource, n: int, n_prime: int,
                          k: int, depth: int, machine_ref: str | None = None,
                          kind: str = "sequence-pair",
                          method: str | None = None) -> Certificate:
    """Verify the output-equality family of a pair and package it.

    For each level l = 0..depth, checks position k^l*n + i + 1 against
    k^l*n' + i + 1 for all 0 <= i < k^l, materializes the corresponding
    witness, and re-checks it through the generic repetition verifier. A
    single mismatch refutes this pair (and only this pair).
    """
    if not (0 < n < n_prime):
        raise ValueError("pair must satisfy 0 < n < n'")
    if k < 2:
        raise ValueError("radix must be at least 2")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    need = (k ** depth) * (n_prime + 1)
    prefix = source.prefix(need)
    data = prefix.data
    witnesses = []
    for level in range(depth + 1):
        scale = k ** level
        base_n = scale * n
        base_np = scale * n_prime
        if data[base_n:base_n + scale] != data[base_np:base_np + scale]:
            for i in range(scale):
                if data[base_n + i] != data[base_np + i]:
                    raise PairRefutedError(n, n_prime, level, i)
        w = _pair_witness(n, n_prime, k, level)
        if not verify_repetition(prefix, w):
            raise PairRefutedError(n, n_prime, level, -1)
        witnesses.append(w)
    return Certificate(
        kind=kind,
        machine_ref=machine_ref or source.source_id,
        k=k,
        pair=(n, n_prime),
        method=method,
        dio_lower_bound=Fraction(1) + Fraction(1, n_prime - 1),
        ratio_growth_bound=Fraction(k),
        verified_depth=depth,
        witnesses=tuple(witnesses),
    )


def certify_dfao(m, depth: int = 10, machine_ref: str | None = None) -> Certificate:
    """Pigeonhole certificate for an automaton.

    Scanning n = 1, 2, ... the reached state repeats within |Q| + 1 steps;
    equal states mean equal configurations, so the pair is output-
    equivalent and the identity family holds at every level.
    """
    seen: dict[str, int] = {}
    pair = None
    for n in range(1, m.state_count() + 2):
        state = dfao_mod.run_word(m, encode_base_k(n, m.k).indices)
        if state in seen:
            pair = (seen[state], n)
            break
        seen[state] = n
    assert pair is not None  # pigeonhole on |Q| states
    source = dfao_mod.sequence_source(m, machine_ref or "dfao")
    cert = certificate_from_pair(
        source, pair[0], pair[1], m.k, depth,
        machine_ref=machine_ref or source.source_id,
        kind="dfao-pigeonhole", method="exact",
    )
    return cert


def certify_morphic(spec, depth: int = 8, scan_len: int = 4096,
                    machine_ref: str | None = None) -> Certificate:
    """Self-similarity certificate for an exponential-growth morphic spec.

    From a seed U b V b (b of maximal growth), the images under sigma^n
    give witnesses u = |sigma^n(U)|, v = |sigma^n(bV)|, ext = v +
    |sigma^n(b)| for n = 0..depth, each verified against the internal
    fixed point. Lengths come from exact incidence-matrix arithmetic.
    A verification failure here would mean an implementation bug, so it
    raises instead of reporting.
    """
    seed = morphic_mod.repetition_seed(spec, scan_len)
    u_word, v_word, letter = seed.u, seed.v, seed.letter
    max_need = 0
    plans = []
    for level in range(depth + 1):
        u_len = morphic_mod.iterated_length(spec, u_word, level)
        bv_len = morphic_mod.iterated_length(spec, (letter,) + v_word, level)
        b_len = morphic_mod.iterated_length(spec, (letter,), level)
        plans.append((u_len, bv_len, bv_len + b_len))
        max_need = max(max_need, u_len + bv_len + b_len)
    _, internal = morphic_mod.fixed_point_prefix(spec, max_need)
    witnesses = []
    for u_len, v_len, ext in plans:
        w = RepetitionWitness(u=u_len, v=v_len, ext=ext)
        if not verify_repetition(internal, w):
            raise AssertionError(
                f"morphic witness failed at level {len(witnesses)}; "
                "this indicates a bug, not a property of the spec"
            )
        witnesses.append(w)
    ratios = [w.ratio for w in witnesses]
    growth = max(
        Fraction(witnesses[i + 1].u + witnesses[i + 1].v,
                 witnesses[i].u + witnesses[i].v)
        for i in range(len(witnesses) - 1)
    ) if len(witnesses) > 1 else Fraction(1)
    return Certificate(
        kind="morphic-witness",
        machine_ref=machine_ref or f"morphic:{spec.start}",
        dio_lower_bound=min(ratios),
        ratio_growth_bound=growth,
        verified_depth=depth,
        witnesses=tuple(witnesses),
        seed_letter=letter,
        seed_positions=(seed.p1, seed.p2),
    )


def certify_pda(m, n_max: int = 10_000, height_cap: int = 64,
                depth: int = 12, machine_ref: str | None = None) -> Certificate:
    """Configuration-equivalence certificate for a pushdown transducer."""
    found = pda_mod.find_equivalent_pair(m, n_max=n_max, height_cap=height_cap)
    if found is None:
        raise BudgetExceededError(
            f"no equivalent pair within n <= {n_max} at height cap "
            f"{height_cap}; raising the budget may still find one"
        )
    n, n_prime, method = found
    source = pda_mod.sequence_source(m, machine_ref or "dpao")
    return certificate_from_pair(
        source, n, n_prime, m.k, depth,
        machine_ref=machine_ref or source.source_id,
        kind="pda-pair", method=method,
    )


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    witnesses_checked: int
    extended_depth: int | None
    failures: tuple[str, ...]
    approximation_notes: tuple[str, ...]

    def summary(self) -> str:
        lines = []
        verdict = "valid" if self.valid else "INVALID"
        lines.append(
            f"certificate {verdict}: {self.witnesses_checked} witnesses re-checked"
        )
        if self.extended_depth is not None:
            lines.append(f"pair identities extended to depth {self.extended_depth}")
        lines.extend(f"failure: {f}" for f in self.failures)
        lines.extend(self.approximation_notes)
        return "\n".join(lines)


def _approximation_note(w: RepetitionWitness, base: int) -> str:
    # each witness pins the first u+ext digits against an eventually
    # periodic tail, i.e. a rational with denominator b^u (b^v - 1)
    return (
        f"witness u={w.u} v={w.v} ext={w.ext}: some p has "
        f"|x - p/q| < q^(-{w.ratio}) with q = {base}^{w.u}*({base}^{w.v}-1)"
    )


def verify_certificate(source: SequenceSource, cert: Certificate,
                       extra_depth: int = 0) -> VerificationReport:
    """Independently re-check every stored witness against the source.

    For pair certificates the identity family is additionally extended
    extra_depth levels past the recorded depth. The report lists, per
    witness, the rational-approximation statement it implies for the
    number whose digit stream the source is; the statement is symbolic
    (the denominators are astronomically large) and nothing floating-
    point is asserted.
    """
    failures = []
    need = max((w.u + w.ext for w in cert.witnesses), default=0)
    extended = None
    extra_witnesses: list[RepetitionWitness] = []
    if cert.pair is not None and cert.k is not None:
        extended = cert.verified_depth + extra_depth
        n, n_prime = cert.pair
        for level in range(cert.verified_depth + 1, extended + 1):
            extra_witnesses.append(_pair_witness(n, n_prime, cert.k, level))
        if extra_witnesses:
            need = max(need, max(w.u + w.ext for w in extra_witnesses))
    try:
        prefix = source.prefix(need)
    except Exception as exc:  # cannot even materialize the data
        return VerificationReport(
            valid=False, witnesses_checked=0, extended_depth=extended,
            failures=(f"prefix generation failed: {exc}",),
            approximation_notes=(),
        )
    if cert.pair is not None:
        expected = [
            _pair_witness(cert.pair[0], cert.pair[1], cert.k, level)
            for level in range(cert.verified_depth + 1)
        ]
        if list(cert.witnesses) != expected:
            failures.append("stored witnesses do not match the declared pair")
        bound = Fraction(1) + Fraction(1, cert.pair[1] - 1)
        if cert.dio_lower_bound != bound:
            failures.append(
                f"declared bound {cert.dio_lower_bound} is not 1 + 1/(n'-1)"
            )
    checked = 0
    for w in list(cert.witnesses) + extra_witnesses:
        try:
            ok = verify_repetition(prefix, w)
        except Exception as exc:
            ok = False
            failures.append(f"witness u={w.u} v={w.v} ext={w.ext}: {exc}")
        else:
            if not ok:
                failures.append(
                    f"witness u={w.u} v={w.v} ext={w.ext}: prefix identity fails"
                )
        checked += 1
    base = source.alphabet.size
    notes = tuple(_approximation_note(w, base) for w in cert.witnesses)
    return VerificationReport(
        valid=not failures,
        witnesses_checked=checked,
        extended_depth=extended,
        failures=tuple(failures),
        approximation_notes=notes,
    )


def _fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _parse_fraction(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def certificate_to_json(cert: Certificate) -> str:
    doc = {
        "kind": cert.kind,
        "machine": cert.machine_ref,
        "dioLowerBound": _fraction_str(cert.dio_lower_bound),
        "ratioGrowthBound": _fraction_str(cert.ratio_growth_bound),
        "verifiedDepth": cert.verified_depth,
        "witnesses": [
            {"u": w.u, "v": w.v, "ext": w.ext} for w in cert.witnesses
        ],
    }
    if cert.k is not None:
        doc["k"] = cert.k
    if cert.pair is not None:
        doc["n"], doc["nPrime"] = cert.pair
    if cert.method is not None:
        doc["method"] = cert.method
    if cert.seed_letter is not None:
        doc["seedLetter"] = cert.seed_letter
        doc["seedPositions"] = list(cert.seed_positions)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def certificate_from_json(text: str) -> Certificate:
    doc = json.loads(text)
    known = {
        "kind", "machine", "dioLowerBound", "ratioGrowthBound",
        "verifiedDepth", "witnesses", "k", "n", "nPrime", "method",
        "seedLetter", "seedPositions",
    }
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown certificate fields: {sorted(unknown)}")
    if doc["kind"] not in KINDS:
        raise ValueError(f"unknown certificate kind {doc['kind']!r}")
    pair = None
    if "n" in doc or "nPrime" in doc:
        pair = (int(doc["n"]), int(doc["nPrime"]))
    return Certificate(
        kind=doc["kind"],
        machine_ref=doc["machine"],
        dio_lower_bound=_parse_fraction(doc["dioLowerBound"]),
        ratio_growth_bound=_parse_fraction(doc["ratioGrowthBound"]),
        verified_depth=int(doc["verifiedDepth"]),
        witnesses=tuple(
            RepetitionWitness(u=int(w["u"]), v=int(w["v"]), ext=int(w["ext"]))
            for w in doc["witnesses"]
        ),
        k=int(doc["k"]) if "k" in doc else None,
        pair=pair,
        method=doc.get("method"),
        seed_letter=doc.get("seedLetter"),
        seed_positions=tuple(doc["seedPositions"]) if "seedPositions" in doc else None,
    )
