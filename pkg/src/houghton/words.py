"""Words over labelled generators, witnesses, and generation certificates.

A certificate is a straight-line program: each witness word may use the
input labels and the names of earlier witnesses, whose claims become
available once verified.  Every claim is therefore a product of inputs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional

from .errors import BadWord, InternalCheckFailed, MismatchedN, UnboundLabel
from .groups import GeneratingSetSpec
from .perm import HoughtonElement, compose, power

LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")


class Word:
    """A free word, stored as (label, exponent) letters with adjacent labels merged."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[str, int]] = ()):
        out: list[tuple[str, int]] = []
        for label, k in letters:
            if not isinstance(label, str) or not LABEL.match(label):
                raise BadWord(f"bad label {label!r}")
            if not isinstance(k, int) or isinstance(k, bool):
                raise BadWord(f"exponent of {label} must be an integer, got {k!r}")
            if k == 0:
                continue
            if out and out[-1][0] == label:
                k += out.pop()[1]
                if k == 0:
                    continue
            out.append((label, k))
        self.letters = tuple(out)

    @classmethod
    def of(cls, label: str, k: int = 1) -> "Word":
        return cls([(label, k)])

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Whitespace-separated ``label`` or ``label^k`` tokens."""
        letters = []
        for tok in text.split():
            label, _, exp = tok.partition("^")
            try:
                k = int(exp) if exp else 1
            except ValueError:
                raise BadWord(f"bad exponent in {tok!r}") from None
            letters.append((label, k))
        return cls(letters)

    def __str__(self) -> str:
        return " ".join(lab if k == 1 else f"{lab}^{k}" for lab, k in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "Word":
        return Word((lab, -k) for lab, k in reversed(self.letters))

    def conj(self, by: "Word") -> "Word":
        """by^-1 self by."""
        return by.inverse() + self + by

    def labels(self) -> set[str]:
        return {lab for lab, _ in self.letters}

    def to_json(self) -> list:
        return [[lab, k] for lab, k in self.letters]

    @classmethod
    def from_json(cls, data) -> "Word":
        return cls((str(lab), int(k)) for lab, k in data)


def evaluate_word(w: Word, assignment: Mapping[str, HoughtonElement], n: Optional[int] = None,
                  cache: Optional[dict] = None) -> HoughtonElement:
    """Left-to-right product of the assigned elements.

    ``cache`` may map (label, k) to a precomputed power; it is only sound if
    the assignment of every cached label stays fixed.
    """
    if not w.letters:
        if n is None:
            if not assignment:
                raise UnboundLabel("empty word with empty assignment: ambient n unknown")
            n = next(iter(assignment.values())).n
        return HoughtonElement.identity(n)
    result = None
    for label, k in w.letters:
        try:
            g = assignment[label]
        except KeyError:
            raise UnboundLabel(f"label {label!r} is not bound") from None
        if n is not None and g.n != n:
            raise MismatchedN(f"label {label!r} acts on X_{g.n}, expected X_{n}")
        gk = power(g, k) if cache is None else _cached_power(g, label, k, cache)
        result = gk if result is None else compose(result, gk)
    return result


def _cached_power(g: HoughtonElement, label: str, k: int, cache: dict) -> HoughtonElement:
    hit = cache.get((label, k))
    if hit is None:
        # extend the largest cached power with the same sign
        best = 0
        for lab, j in cache:
            if lab == label and 0 < j * k and abs(best) < abs(j) <= abs(k):
                best = j
        hit = power(g, k) if best == 0 else compose(cache[(label, best)], power(g, k - best))
        cache[(label, k)] = hit
    return hit


@dataclass(frozen=True)
class Witness:
    name: str
    word: Word
    claim: HoughtonElement

    def to_json(self) -> dict:
        return {"name": self.name, "word": self.word.to_json(), "claim": self.claim.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "Witness":
        return cls(data["name"], Word.from_json(data["word"]), HoughtonElement.from_json(data["claim"]))


def verify_witness(wit: Witness, assignment: Mapping[str, HoughtonElement]) -> bool:
    return evaluate_word(wit.word, assignment, wit.claim.n) == wit.claim


@dataclass
class TraceEntry:
    witness: Witness
    note: dict[str, Any] = field(default_factory=dict)


@dataclass
class RecoveryTrace:
    """Every intermediate element of a recovery, in the order it was built."""

    entries: list[TraceEntry] = field(default_factory=list)

    @property
    def witnesses(self) -> list[Witness]:
        return [e.witness for e in self.entries]

    def to_json(self) -> list:
        return [{"name": e.witness.name, "note": e.note} for e in self.entries]


@dataclass
class GenerationCertificate:
    spec: GeneratingSetSpec
    witnesses: list[Witness]
    side_conditions: dict[str, Any]
    trace: Optional[RecoveryTrace] = None

    def witness(self, name: str) -> Witness:
        for w in self.witnesses:
            if w.name == name:
                return w
        raise KeyError(name)

    def to_json(self, include_trace: bool = False) -> dict:
        out = {
            "family": self.spec.family.value,
            "n": self.spec.n,
            "v": self.spec.v,
            "witnesses": [w.to_json() for w in self.witnesses],
            "side_conditions": self.side_conditions,
        }
        if include_trace and self.trace is not None:
            out["trace"] = self.trace.to_json()
        return out

    def dumps(self, include_trace: bool = False) -> str:
        return json.dumps(self.to_json(include_trace), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: Mapping) -> "GenerationCertificate":
        spec = GeneratingSetSpec.from_json(data)
        return cls(spec, [Witness.from_json(w) for w in data["witnesses"]], dict(data["side_conditions"]))


class TraceBuilder:
    """Builds named witnesses on top of an input assignment.

    Each ``define`` evaluates the word against the inputs plus everything
    defined so far, so the resulting chain verifies by construction.
    """

    def __init__(self, inputs: Mapping[str, HoughtonElement]):
        self.n = next(iter(inputs.values())).n
        self.env: dict[str, HoughtonElement] = dict(inputs)
        self.trace = RecoveryTrace()
        self._count: dict[str, int] = {}
        self._powers: dict = {}

    def fresh(self, stem: str) -> str:
        k = self._count.get(stem, 0)
        self._count[stem] = k + 1
        return stem if k == 0 and stem not in self.env else f"{stem}.{k}"

    def define(self, name: str, word: Word, **note) -> HoughtonElement:
        if name in self.env:
            raise InternalCheckFailed(f"name {name!r} defined twice")
        value = evaluate_word(word, self.env, self.n, self._powers)
        self.env[name] = value
        self.trace.entries.append(TraceEntry(Witness(name, word, value), dict(note)))
        return value

    def let(self, stem: str, word: Word, **note) -> tuple[str, HoughtonElement]:
        name = self.fresh(stem)
        return name, self.define(name, word, **note)

    def __getitem__(self, name: str) -> HoughtonElement:
        return self.env[name]
