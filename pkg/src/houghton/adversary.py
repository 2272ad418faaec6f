"""Seeded adversaries: random conjugates of the standard generating sets.

Conjugators for the U_v family are drawn from U_v itself, not from H_n,
since invariable generation of U_v quantifies over conjugation in U_v.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import BadParams
from .groups import Family, GeneratingSetSpec, generating_set, standard_generator
from .perm import HoughtonElement, compose, conjugate, parity, power


@dataclass(frozen=True)
class SamplerParams:
    max_word_length: int = 6
    window: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.max_word_length < 0 or self.window < 0:
            raise BadParams(f"sampler bounds must be >= 0: {self}")


def _rng(spec: GeneratingSetSpec, seed: int, tag: str) -> random.Random:
    return random.Random(f"{tag}:{spec.family.value}:{spec.n}:{spec.v}:{seed}")


def random_finitary(n: int, window: int, rng: random.Random, even: bool = False) -> HoughtonElement:
    """Uniform permutation of the points (i, m) with m <= window."""
    pts = [(i, m) for i in range(1, n + 1) for m in range(1, window + 1)]
    img = pts[:]
    rng.shuffle(img)
    sigma = HoughtonElement._normalized(n, (0,) * n, dict(zip(pts, img)))
    if even and parity(sigma) == "odd":
        sigma = compose(sigma, HoughtonElement.from_cycles(n, [pts[:2]]))
    return sigma


def sample_element(spec: GeneratingSetSpec, params: SamplerParams,
                   rng: Optional[random.Random] = None) -> HoughtonElement:
    """Random word in the translation generators times a random finitary element.

    For U_v the letters are g_i^(+-v) and the finitary part is even, so the
    result always lies in U_v.
    """
    if rng is None:
        rng = _rng(spec, params.seed, "element")
    n = spec.n
    step = spec.v if spec.family is Family.UV else 1
    gens = [standard_generator(n, k) for k in range(2, n + 1)]
    g = HoughtonElement.identity(n)
    for _ in range(rng.randint(0, params.max_word_length)):
        letter = power(rng.choice(gens), rng.choice((step, -step)))
        g = compose(g, letter)
    return compose(g, random_finitary(n, params.window, rng, even=spec.family is Family.UV))


@dataclass
class Scenario:
    spec: GeneratingSetSpec
    seed: int
    conjugators: dict[str, HoughtonElement]
    assignment: dict[str, HoughtonElement]
    params: SamplerParams = field(default_factory=SamplerParams)

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "seed": self.seed,
            "params": {"max_word_length": self.params.max_word_length, "window": self.params.window},
            "conjugators": {k: v.to_json() for k, v in self.conjugators.items()},
            "tuple": {k: v.to_json() for k, v in self.assignment.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: Mapping) -> "Scenario":
        p = data.get("params", {})
        return cls(
            GeneratingSetSpec.from_json(data["spec"]),
            int(data["seed"]),
            {k: HoughtonElement.from_json(v) for k, v in data.get("conjugators", {}).items()},
            {k: HoughtonElement.from_json(v) for k, v in data["tuple"].items()},
            SamplerParams(p.get("max_word_length", 6), p.get("window", 4), int(data["seed"])),
        )


def make_scenario(spec: GeneratingSetSpec, seed: int, params: Optional[SamplerParams] = None) -> Scenario:
    if params is None:
        params = SamplerParams(seed=seed)
    rng = _rng(spec, seed, "scenario")
    originals = generating_set(spec)
    conjugators = {}
    assignment = {}
    for label, g in originals.items():
        if label == spec.fixed_label:
            c = HoughtonElement.identity(spec.n)
        else:
            c = sample_element(spec, params, rng)
        conjugators[label] = c
        assignment[label] = conjugate(g, c)
    return Scenario(spec, seed, conjugators, assignment, params)
