"""Command-line front end.

Every command is deterministic: given the same options and input files it
produces byte-identical output. No command accepts or uses randomness.

Exit codes: 0 success, 1 search budget exhausted (or pair refuted),
2 invalid input, 3 insufficient data, 4 enumeration cap refusal.
"""

from __future__ import annotations

import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import catalog as catalog_mod
from . import certify as certify_mod
from . import dfao as dfao_mod
from . import morphic as morphic_mod
from . import numbers as numbers_mod
from . import pda as pda_mod
from . import tag as tag_mod
from . import words as words_mod
from .dfao import Dfao
from .errors import (BudgetExceededError, EnumerationCapError,
                     InsufficientDataError, PairRefutedError, ValidationError)
from .machinefile import load_machine, save_machine
from .morphic import MorphicSpec
from .pda import Dpao

EXIT_BUDGET = 1
EXIT_INVALID = 2
EXIT_INSUFFICIENT = 3
EXIT_CAP = 4


def _die(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_number(token: str) -> int:
    token = token.strip()
    if "^" in token:
        base, _, exp = token.partition("^")
        return int(base) ** int(exp)
    return int(token)


def _parse_lengths(expr: str) -> list[int]:
    """"1..64" is an arithmetic range; "2^4..2^14" steps by the power base."""
    if ".." not in expr:
        return [_parse_number(expr)]
    lo_s, _, hi_s = expr.partition("..")
    lo, hi = _parse_number(lo_s), _parse_number(hi_s)
    if "^" in lo_s or "^" in hi_s:
        base_s = (lo_s if "^" in lo_s else hi_s).partition("^")[0]
        step = int(base_s)
        vals = []
        v = lo
        while v <= hi:
            vals.append(v)
            v *= step
        return vals
    return list(range(lo, hi + 1))


def _load_machine_or_die(path: str):
    try:
        machine = load_machine(path)
    except FileNotFoundError:
        _die(EXIT_INVALID, f"machine file not found: {path}")
    except (ValueError, ValidationError, json.JSONDecodeError, KeyError) as exc:
        _die(EXIT_INVALID, f"cannot load machine {path}: {exc}")
    report = _validate(machine)
    if not report.ok:
        _die(EXIT_INVALID, f"machine {path} invalid:\n{report.summary()}")
    return machine


def _validate(machine):
    if isinstance(machine, Dfao):
        return dfao_mod.validate_dfao(machine)
    if isinstance(machine, MorphicSpec):
        return morphic_mod.validate_morphic(machine)
    if isinstance(machine, Dpao):
        return pda_mod.validate_dpao(machine)
    raise TypeError(type(machine).__name__)


def _machine_source(machine, ref: str):
    if isinstance(machine, Dfao):
        return dfao_mod.sequence_source(machine, ref)
    if isinstance(machine, MorphicSpec):
        return morphic_mod.sequence_source(machine, ref)
    if isinstance(machine, Dpao):
        return pda_mod.sequence_source(machine, ref)
    raise TypeError(type(machine).__name__)


def _file_hash(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _stream_or_die(spec: str, base: int | None, expansion: bool = False):
    try:
        return numbers_mod.parse_stream_spec(spec, base, expansion=expansion)
    except (ValueError, OSError) as exc:
        _die(EXIT_INVALID, f"cannot open stream {spec!r}: {exc}")


def _resolve_source(machine_path: str | None, stream: str | None,
                    base: int | None):
    if (machine_path is None) == (stream is None):
        _die(EXIT_INVALID, "exactly one of --machine or --stream is required")
    if machine_path is not None:
        machine = _load_machine_or_die(machine_path)
        return machine, _machine_source(machine, _file_hash(machine_path))
    return None, _stream_or_die(stream, base)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _render_prefix(prefix) -> str:
    if prefix.alphabet.single_char:
        return prefix.text() + "\n"
    return "\n".join(
        prefix.alphabet.symbols[b] for b in prefix.data
    ) + "\n"


def _fmt_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _fmt_approx(f: Fraction) -> str:
    return f"{_fmt_fraction(f)} (~{float(f):.6g}, approximate)"


@click.group()
@click.version_option(package_name="digitseq")
def main() -> None:
    """Digit-sequence generators and repetition certificates."""


@main.command()
@click.option("--machine", "machine_path", type=str, default=None,
              help="Machine JSON file (dfao, morphic, tag, dpao).")
@click.option("--stream", type=str, default=None,
              help="Number stream: rational:p/q, surd:d, xi3, file:<path>.")
@click.option("--base", type=int, default=None,
              help="Digit base for rational/surd streams.")
@click.option("--count", type=int, default=64, show_default=True)
@click.option("--output", type=str, default=None, help="Write here instead of stdout.")
def digits(machine_path, stream, base, count, output):
    """Print the first COUNT symbols of a source."""
    _, source = _resolve_source(machine_path, stream, base)
    try:
        prefix = source.prefix(count)
    except InsufficientDataError as exc:
        _die(EXIT_INSUFFICIENT, str(exc))
    _emit(_render_prefix(prefix), output)


@main.command()
@click.option("--machine", "machine_path", type=str, default=None)
@click.option("--stream", type=str, default=None)
@click.option("--base", type=int, default=None)
@click.option("--dio", "dio_range", type=str, default=None,
              help="Lengths for the repetition-ratio profile, e.g. 2^4..2^14.")
@click.option("--complexity", "complexity_range", type=str, default=None,
              help="Block lengths for the factor-complexity table, e.g. 1..64.")
@click.option("--right-special", "rs_range", type=str, default=None,
              help="Block lengths for the right-special-factor table.")
@click.option("--dilation", "dilation_n", type=str, default=None,
              help="Read-head depth for the dilation profile (morphic only).")
@click.option("--growth", "want_growth", is_flag=True,
              help="Include the per-letter growth report (morphic only).")
@click.option("--prefix-length", type=str, default=None,
              help="Prefix length for complexity tables (default 2^16).")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
@click.option("--output", type=str, default=None)
def analyze(machine_path, stream, base, dio_range, complexity_range, rs_range,
            dilation_n, want_growth, prefix_length, fmt, output):
    """Profiles of a source: repetition ratios, complexity, dilation, growth."""
    machine, source = _resolve_source(machine_path, stream, base)
    doc: dict = {"source": source.source_id}
    lines: list[str] = [f"source: {source.source_id}"]
    try:
        if dio_range:
            lengths = _parse_lengths(dio_range)
            profile = words_mod.dio_profile(source, lengths)
            doc["dio"] = [
                {"length": n, "ratio": _fmt_fraction(r)} for n, r in profile
            ]
            lines.append("repetition-ratio profile (exact, per target length):")
            for n, r in profile:
                lines.append(f"  length {n}: best ratio {_fmt_approx(r)}")
        if complexity_range or rs_range:
            need = []
            if complexity_range:
                need.extend(_parse_lengths(complexity_range))
            if rs_range:
                need.extend(n + 1 for n in _parse_lengths(rs_range))
            plen = _parse_number(prefix_length) if prefix_length else 2 ** 16
            if plen < max(need) + 1:
                _die(EXIT_INSUFFICIENT,
                     f"--prefix-length {plen} is too short for the "
                     f"requested block lengths")
            prefix = source.prefix(plen)
            if complexity_range:
                ns = _parse_lengths(complexity_range)
                doc["complexity"] = []
                lines.append(f"factor complexity p(n) on a prefix of {plen}:")
                profile = words_mod.factor_complexity_profile(prefix, max(ns))
                for n in ns:
                    doc["complexity"].append({"n": n, "p": profile[n - 1]})
                    lines.append(f"  p({n}) = {profile[n - 1]}")
            if rs_range:
                ns = _parse_lengths(rs_range)
                doc["rightSpecial"] = []
                lines.append("right-special factor counts:")
                for n in ns:
                    c = words_mod.right_special_count(prefix, n)
                    doc["rightSpecial"].append({"n": n, "count": c})
                    lines.append(f"  rs({n}) = {c}")
        if dilation_n or want_growth:
            if not isinstance(machine, MorphicSpec):
                _die(EXIT_INVALID,
                     "--dilation/--growth need a morphic or tag machine")
            if dilation_n:
                prof = tag_mod.dilation_profile(
                    tag_mod.TagMachine(machine), _parse_number(dilation_n)
                )
                doc["dilation"] = {
                    "minRatio": _fmt_fraction(prof.min_ratio),
                    "argmin": prof.argmin,
                    "exceedsOne": prof.exceeds_one,
                    "samples": [
                        {"n": n, "ratio": _fmt_fraction(r)}
                        for n, r in prof.samples
                    ],
                }
                lines.append("dilation profile W(n)/n:")
                for n, r in prof.samples:
                    lines.append(f"  n={n}: {_fmt_approx(r)}")
                lines.append(
                    f"  minimum {_fmt_approx(prof.min_ratio)} at n={prof.argmin}; "
                    f"stays above 1: {prof.exceeds_one}"
                )
            if want_growth:
                doc["growth"] = _growth_dict(machine)
                lines.extend(_growth_lines(machine))
    except InsufficientDataError as exc:
        _die(EXIT_INSUFFICIENT, str(exc))
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n" if fmt == "json" \
        else "\n".join(lines) + "\n"
    _emit(text, output)


def _growth_dict(spec: MorphicSpec) -> dict:
    report = morphic_mod.growth_report(spec)
    return {
        "radiusEstimate": morphic_mod.spectral_radius_estimate(spec),
        "exponential": report.global_exponential,
        "maximalGrowth": list(report.maximal),
        "perLetter": {
            a: {
                "theta": g.theta,
                "polyDegree": g.poly_degree,
                "exponential": g.exponential,
            }
            for a, g in sorted(report.per_letter.items())
        },
    }


def _growth_lines(spec: MorphicSpec) -> list[str]:
    report = morphic_mod.growth_report(spec)
    radius = morphic_mod.spectral_radius_estimate(spec)
    lines = [
        "growth report:",
        f"  spectral radius estimate {radius:.9f} (approximate)",
        f"  exponential growth: {report.global_exponential}",
        f"  maximal-growth letters: {', '.join(report.maximal)}",
    ]
    for a, g in sorted(report.per_letter.items()):
        lines.append(
            f"  letter {a}: theta ~ {g.theta:.6f}, polynomial degree "
            f"{g.poly_degree}, exponential {g.exponential}"
        )
    return lines


@main.command()
@click.option("--machine", "machine_path", type=str, default=None)
@click.option("--pair", type=str, default=None,
              help="Certify a raw index pair n,n' against a stream.")
@click.option("--k", type=int, default=2, show_default=True,
              help="Radix of the identity family for --pair certificates.")
@click.option("--stream", type=str, default=None)
@click.option("--base", type=int, default=None)
@click.option("--budget", type=int, default=10_000, show_default=True,
              help="Scan limit for pushdown pair search.")
@click.option("--height-cap", type=int, default=64, show_default=True)
@click.option("--depth", type=int, default=12, show_default=True)
@click.option("--scan-len", type=int, default=4096, show_default=True,
              help="Fixed-point scan window for morphic seeds.")
@click.option("--output", type=str, default=None,
              help="Certificate JSON path (default: print to stdout).")
def certify(machine_path, pair, k, stream, base, budget, height_cap, depth,
            scan_len, output):
    """Build a repetition certificate for a machine or a stream pair."""
    if machine_path is None and pair is None:
        _die(EXIT_INVALID, "need --machine or --pair with --stream")
    try:
        if pair is not None:
            n_str, _, np_str = pair.partition(",")
            n, n_prime = int(n_str), int(np_str)
            if stream is None:
                _die(EXIT_INVALID, "--pair certificates need --stream")
            source = _stream_or_die(stream, base)
            cert = certify_mod.certificate_from_pair(
                source, n, n_prime, k, depth, machine_ref=source.source_id
            )
        else:
            machine = _load_machine_or_die(machine_path)
            ref = _file_hash(machine_path)
            if isinstance(machine, Dfao):
                cert = certify_mod.certify_dfao(machine, depth=depth,
                                                machine_ref=ref)
            elif isinstance(machine, MorphicSpec):
                if not morphic_mod.exponential_growth(machine):
                    _die(EXIT_INVALID,
                         "morphic certificates require exponential growth; "
                         "this spec grows polynomially, so the "
                         "self-similarity argument does not apply")
                cert = certify_mod.certify_morphic(
                    machine, depth=depth, scan_len=scan_len, machine_ref=ref
                )
            else:
                cert = certify_mod.certify_pda(
                    machine, n_max=budget, height_cap=height_cap, depth=depth,
                    machine_ref=ref,
                )
    except PairRefutedError as exc:
        _die(EXIT_BUDGET, f"refuted: {exc}")
    except BudgetExceededError as exc:
        _die(EXIT_BUDGET, str(exc))
    except (ValueError, InsufficientDataError) as exc:
        _die(EXIT_INVALID, str(exc))
    text = certify_mod.certificate_to_json(cert)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    click.echo(_cert_summary(cert), err=True)


def _cert_summary(cert) -> str:
    lines = [
        f"kind: {cert.kind}",
        f"machine: {cert.machine_ref}",
    ]
    if cert.pair:
        lines.append(
            f"equivalent pair: n={cert.pair[0]}, n'={cert.pair[1]}"
            + (f" (method {cert.method})" if cert.method else "")
        )
    if cert.seed_letter:
        lines.append(
            f"seed letter {cert.seed_letter!r} at positions "
            f"{cert.seed_positions[0]} and {cert.seed_positions[1]}"
        )
    lines.append(
        f"repetition exponent lower bound {_fmt_fraction(cert.dio_lower_bound)} "
        f"(> 1), verified to depth {cert.verified_depth}; consecutive witness "
        f"lengths grow by at most {_fmt_fraction(cert.ratio_growth_bound)}"
    )
    lines.append(
        "consequence: a number whose digit stream repeats this strongly is "
        "rational or transcendental; no algebraic irrational expands this way"
    )
    return "\n".join(lines)


@main.command()
@click.option("--certificate", "cert_path", type=str, required=True)
@click.option("--machine", "machine_path", type=str, default=None)
@click.option("--stream", type=str, default=None)
@click.option("--base", type=int, default=None)
@click.option("--extra-depth", type=int, default=0, show_default=True)
def verify(cert_path, machine_path, stream, base, extra_depth):
    """Re-check a certificate against its source; exit 0 only if valid."""
    try:
        cert = certify_mod.certificate_from_json(
            Path(cert_path).read_text(encoding="utf-8")
        )
    except (OSError, ValueError, KeyError) as exc:
        _die(EXIT_INVALID, f"cannot load certificate: {exc}")
    machine, source = _resolve_source(machine_path, stream, base)
    if machine_path is not None:
        actual = _file_hash(machine_path)
        if cert.machine_ref != actual:
            _die(EXIT_INVALID,
                 f"certificate is bound to machine {cert.machine_ref}, "
                 f"file hashes to {actual}")
    report = certify_mod.verify_certificate(source, cert, extra_depth)
    click.echo(report.summary())
    if not report.valid:
        sys.exit(EXIT_INVALID)


@main.command()
@click.option("--machine", "machine_path", type=str, required=True)
@click.option("--output", type=str, required=True)
def convert(machine_path, output):
    """Convert between a k-uniform morphic spec and its automaton."""
    machine = _load_machine_or_die(machine_path)
    try:
        if isinstance(machine, MorphicSpec):
            converted = morphic_mod.to_dfao(machine)
        elif isinstance(machine, Dfao):
            converted = morphic_mod.from_dfao(machine)
        else:
            _die(EXIT_INVALID, "only dfao and morphic machines convert")
    except (ValueError, ValidationError) as exc:
        _die(EXIT_INVALID, str(exc))
    save_machine(converted, output)
    click.echo(f"wrote {output}")


@main.command()
@click.option("--machine", "machine_path", type=str, required=True)
@click.option("--count", type=str, default="10^4", show_default=True)
def dilation(machine_path, count):
    """Dilation profile W(n)/n of a morphic or tag machine."""
    machine = _load_machine_or_die(machine_path)
    if not isinstance(machine, MorphicSpec):
        _die(EXIT_INVALID, "dilation profiles need a morphic or tag machine")
    prof = tag_mod.dilation_profile(
        tag_mod.TagMachine(machine), _parse_number(count)
    )
    for n, r in prof.samples:
        click.echo(f"n={n}: {_fmt_approx(r)}")
    click.echo(
        f"minimum {_fmt_approx(prof.min_ratio)} at n={prof.argmin}; "
        f"stays above 1: {prof.exceeds_one}"
    )


@main.command()
@click.option("--machine", "machine_path", type=str, required=True)
def growth(machine_path):
    """Per-letter growth report of a morphic machine."""
    machine = _load_machine_or_die(machine_path)
    if not isinstance(machine, MorphicSpec):
        _die(EXIT_INVALID, "growth reports need a morphic or tag machine")
    for line in _growth_lines(machine):
        click.echo(line)


@main.command()
@click.option("--machine", "machine_path", type=str, required=True)
@click.option("--pair", type=str, required=True, help="n,n'")
@click.option("--depth", type=int, default=12, show_default=True)
def equiv(machine_path, pair, depth):
    """Bounded output comparison of the configurations after n and n'."""
    machine = _load_machine_or_die(machine_path)
    if isinstance(machine, Dfao):
        machine = pda_mod.from_dfao(machine)
    elif not isinstance(machine, Dpao):
        _die(EXIT_INVALID, "equiv needs a dpao or dfao machine")
    n_str, _, np_str = pair.partition(",")
    result = pda_mod.bounded_distinguish(machine, int(n_str), int(np_str), depth)
    click.echo(result.describe())
    if not result.distinguished:
        click.echo("note: exhausting the depth proves nothing by itself")


@main.command()
@click.option("--stream", type=str, required=True)
@click.option("--base", type=int, default=2, show_default=True)
@click.option("--k", type=int, default=None,
              help="Input radix of the candidate machines (default: base).")
@click.option("--states", type=int, required=True)
@click.option("--len", "max_len", type=int, default=64, show_default=True)
@click.option("--output", type=str, default=None,
              help="Write the best machine here.")
def imitate(stream, base, k, states, max_len, output):
    """Longest digit-stream prefix reachable by a small automaton."""
    source = _stream_or_die(stream, base, expansion=True)
    try:
        agree, censored, best = numbers_mod.imitation_index(
            source, k or base, states, max_len
        )
    except EnumerationCapError as exc:
        _die(EXIT_CAP, f"{exc}; lower --states or --len")
    suffix = " (censored: no disagreement found)" if censored else ""
    click.echo(f"imitation index: {agree}{suffix}")
    if output:
        save_machine(best, output)
        click.echo(f"best machine written to {output}")


@main.command()
@click.option("--d", "radicand", type=int, required=True)
@click.option("--count", type=int, default=16, show_default=True,
              help="Partial quotients to print as a sequence.")
def cf(radicand, count):
    """Periodic continued fraction of a quadratic surd."""
    try:
        expansion = numbers_mod.cf_quadratic(radicand)
    except ValueError as exc:
        _die(EXIT_INVALID, str(exc))
    pre = ",".join(map(str, expansion.preperiod))
    per = ",".join(map(str, expansion.period))
    click.echo(f"sqrt({radicand}) = [{expansion.a0}; {pre}({per}) repeating]")
    seq = numbers_mod.cf_as_sequence(expansion, count)
    click.echo(_render_prefix(seq), nl=False)


@main.group()
def catalog() -> None:
    """Built-in machines as reviewable JSON files."""


@catalog.command("list")
def catalog_list():
    for name in catalog_mod.names():
        kind = type(catalog_mod.get(name)).__name__
        click.echo(f"{name} ({kind})")


@catalog.command("export")
@click.option("--dir", "directory", type=str, required=True)
def catalog_export(directory):
    for path in catalog_mod.export_all(directory):
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
