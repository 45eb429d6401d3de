"""JSON machine files for the three generator kinds.

One document per machine, dispatched on "kind": "dfao", "morphic" (with
"tag" accepted as an alias), or "dpao". Digits are JSON strings. Unknown
fields are rejected so that typos fail loudly instead of silently
changing a machine.
"""

from __future__ import annotations

import json
from pathlib import Path

from .dfao import Dfao
from .errors import ValidationError
from .morphic import MorphicSpec
from .pda import BOTTOM, Dpao
from .validation import ValidationReport

__all__ = ["load_machine", "loads_machine", "machine_to_dict", "save_machine"]


def _reject_unknown(doc: dict, allowed: set[str], kind: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(
            f"unknown fields in {kind} machine file: {sorted(unknown)}"
        )


def _letters(value, what: str) -> tuple[str, ...]:
    """A rule/push word: a string of single-character names, or a list of
    names when any name is longer than one character."""
    if isinstance(value, str):
        return tuple(value)
    if isinstance(value, list) and all(isinstance(x, str) for x in value):
        return tuple(value)
    raise ValueError(f"{what} must be a string or a list of symbol names")


def _dfao_from_dict(doc: dict) -> Dfao:
    _reject_unknown(doc, {"kind", "k", "states", "initial", "delta", "output"},
                    "dfao")
    k = int(doc["k"])
    states = tuple(doc["states"])
    delta = {}
    for q, row in doc["delta"].items():
        targets = [None] * k
        for digit_str, tgt in row.items():
            d = int(digit_str)
            if not (0 <= d < k):
                raise ValueError(f"digit {digit_str!r} out of range for base {k}")
            targets[d] = tgt
        if any(t is None for t in targets):
            report = ValidationReport()
            report.error(
                "missing-transition",
                f"state {q!r} does not define all digits 0..{k - 1}",
            )
            raise ValidationError(report)
        delta[q] = tuple(targets)
    return Dfao(
        k=k, states=states, initial=doc["initial"], delta=delta,
        output=dict(doc["output"]),
    )


def _dfao_to_dict(m: Dfao) -> dict:
    return {
        "kind": "dfao",
        "k": m.k,
        "states": list(m.states),
        "initial": m.initial,
        "delta": {
            q: {str(d): m.delta[q][d] for d in range(m.k)} for q in m.states
        },
        "output": {q: m.output[q] for q in m.states},
    }


def _morphic_from_dict(doc: dict) -> MorphicSpec:
    _reject_unknown(
        doc, {"kind", "internal", "start", "rules", "external", "coding"},
        "morphic",
    )
    return MorphicSpec(
        internal=tuple(doc["internal"]),
        rules={a: _letters(img, f"rule for {a!r}")
               for a, img in doc["rules"].items()},
        start=doc["start"],
        external=tuple(doc["external"]),
        coding=dict(doc["coding"]),
    )


def _morphic_to_dict(spec: MorphicSpec, kind: str = "morphic") -> dict:
    single = all(len(a) == 1 for a in spec.internal)
    return {
        "kind": kind,
        "internal": list(spec.internal),
        "start": spec.start,
        "rules": {
            a: "".join(img) if single else list(img)
            for a, img in spec.rules.items()
        },
        "external": list(spec.external),
        "coding": dict(spec.coding),
    }


def _dpao_from_dict(doc: dict) -> Dpao:
    _reject_unknown(
        doc,
        {"kind", "k", "states", "initial", "stack", "transitions", "output"},
        "dpao",
    )
    k = int(doc["k"])
    transitions = {}
    for t in doc["transitions"]:
        _reject_unknown(t, {"state", "top", "input", "to", "push"},
                        "dpao transition")
        inp = None if t["input"] == "eps" else int(t["input"])
        push = _letters(t["push"], "push word") if t["push"] else ()
        key = (t["state"], t["top"], inp)
        if key in transitions:
            report = ValidationReport()
            report.error(
                "determinism-conflict",
                f"duplicate transition at ({t['state']!r}, {t['top']!r}, "
                f"{t['input']!r})",
            )
            raise ValidationError(report)
        transitions[key] = (t["to"], push)
    output = {}
    for q, row in doc["output"].items():
        for top, sym in row.items():
            output[(q, top)] = sym
    return Dpao(
        k=k,
        states=tuple(doc["states"]),
        initial=doc["initial"],
        stack_symbols=tuple(doc["stack"]),
        transitions=transitions,
        output=output,
    )


def _dpao_to_dict(m: Dpao) -> dict:
    single = all(len(s) == 1 for s in m.stack_symbols)

    def push_repr(push):
        return "".join(push) if single else list(push)

    transitions = []
    for (q, a, inp), (to, push) in sorted(
        m.transitions.items(),
        key=lambda item: (item[0][0], item[0][1], -1 if item[0][2] is None
                          else item[0][2]),
    ):
        transitions.append({
            "state": q,
            "top": a,
            "input": "eps" if inp is None else str(inp),
            "to": to,
            "push": push_repr(push),
        })
    output: dict[str, dict[str, str]] = {}
    for q in m.states:
        row = {}
        for a in [BOTTOM] + list(m.stack_symbols):
            if (q, a) in m.output:
                row[a] = m.output[(q, a)]
        output[q] = row
    return {
        "kind": "dpao",
        "k": m.k,
        "states": list(m.states),
        "initial": m.initial,
        "stack": list(m.stack_symbols),
        "transitions": transitions,
        "output": output,
    }


def loads_machine(text: str):
    doc = json.loads(text)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("machine file must be a JSON object with a 'kind'")
    kind = doc["kind"]
    if kind == "dfao":
        return _dfao_from_dict(doc)
    if kind in ("morphic", "tag"):
        return _morphic_from_dict(doc)
    if kind == "dpao":
        return _dpao_from_dict(doc)
    raise ValueError(f"unknown machine kind {kind!r}")


def load_machine(path):
    return loads_machine(Path(path).read_text(encoding="utf-8"))


def machine_to_dict(machine) -> dict:
    if isinstance(machine, Dfao):
        return _dfao_to_dict(machine)
    if isinstance(machine, MorphicSpec):
        return _morphic_to_dict(machine)
    if isinstance(machine, Dpao):
        return _dpao_to_dict(machine)
    raise TypeError(f"cannot serialize {type(machine).__name__}")


def save_machine(machine, path) -> None:
    Path(path).write_text(
        json.dumps(machine_to_dict(machine), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
