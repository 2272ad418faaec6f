"""Standard elements of H_n, the Z-model of H_2, and membership in U_v."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .errors import BadIndex, BadN, BadSpec, OddV
from .perm import HoughtonElement, Point, compose, parity, power


class Family(str, enum.Enum):
    H2_SIZE3 = "h2s3"
    H2_SIZE2 = "h2s2"
    HN = "hn"
    UV = "uv"


@dataclass(frozen=True)
class GeneratingSetSpec:
    family: Family
    n: int
    v: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family in (Family.H2_SIZE3, Family.H2_SIZE2):
            if self.n != 2:
                raise BadSpec(f"{self.family.value} lives in H_2, got n={self.n}")
        elif self.family is Family.HN:
            if self.n < 3:
                raise BadSpec(f"hn needs n >= 3, got {self.n}")
        else:
            if self.n < 2:
                raise BadSpec(f"uv needs n >= 2, got {self.n}")
            if self.v <= 0 or self.v % 2:
                raise BadSpec(f"uv needs a positive even v, got {self.v}")
            if self.v == 2:
                raise BadSpec("uv excludes v = 2 (3-cycles of A_4 are not all conjugate)")

    @property
    def labels(self) -> tuple[str, ...]:
        if self.family is Family.H2_SIZE3:
            return ("t", "t_two_cycle", "two_cycle")
        if self.family is Family.H2_SIZE2:
            return ("t", "s")
        if self.family is Family.HN:
            return tuple(f"g{k}" for k in range(2, self.n)) + ("h",)
        return (tuple(f"g{k}_v" for k in range(2, self.n))
                + ("h", "sigma1", "g2_2v_sigma1", "g2_2v_sigma2"))

    @property
    def fixed_label(self) -> str:
        """The generator assumed conjugated to itself."""
        return "t" if self.family in (Family.H2_SIZE3, Family.H2_SIZE2) else "h"

    def to_json(self) -> dict:
        return {"family": self.family.value, "n": self.n, "v": self.v}

    @classmethod
    def from_json(cls, data: Mapping) -> "GeneratingSetSpec":
        return cls(Family(data["family"]), int(data["n"]), int(data.get("v", 0)))


def standard_generator(n: int, k: int) -> HoughtonElement:
    """g_k: shifts R_1 up by one and pulls R_k down into it."""
    if not 2 <= k <= n:
        raise BadIndex(f"g_k needs 2 <= k <= n, got k={k}, n={n}")
    tvec = [0] * n
    tvec[0], tvec[k - 1] = 1, -1
    return HoughtonElement(n, tuple(tvec), {(k, 1): (1, 1)})


def product(elements: Iterable[HoughtonElement], n: int) -> HoughtonElement:
    return reduce(compose, elements, HoughtonElement.identity(n))


def standard_h(n: int, v: int = 1) -> HoughtonElement:
    """h = g_n^v g_(n-1)^v ... g_2^v."""
    return product((power(standard_generator(n, k), v) for k in range(n, 1, -1)), n)


def line_cycle(ray: int, start: int, stop: int, n: int) -> list[Point]:
    return [(ray, m) for m in range(start, stop + 1)]


def sigma1(n: int) -> HoughtonElement:
    return HoughtonElement.from_cycles(n, [[(1, 1), (1, 2), (1, 3)]])


def sigma2(n: int, v: int) -> HoughtonElement:
    return HoughtonElement.from_cycles(n, [[(1, 1), (1, 2)], line_cycle(1, 3, 2 * v, n)])


def omega(v: int, offset: int = 0) -> tuple[Point, ...]:
    """The block {(1, offset+1), ..., (1, offset+2v)}."""
    return tuple((1, offset + r) for r in range(1, 2 * v + 1))


# --- the Z-model of H_2 -------------------------------------------------------

def z_to_point(z: int) -> Point:
    return (1, z + 1) if z >= 0 else (2, -z)


def point_to_z(x: Point) -> int:
    i, m = x
    if i == 1:
        return m - 1
    if i == 2:
        return -m
    raise BadN(f"point {x} is not on X_2")


@dataclass(frozen=True)
class ZModelElement:
    """sigma * t^shift acting on Z: z -> (z)sigma + shift.

    ``exc`` lists the integers whose image is not z + shift, sorted.
    """

    shift: int
    exc: tuple[tuple[int, int], ...] = ()

    @classmethod
    def translation(cls, k: int = 1) -> "ZModelElement":
        return cls(k)

    @classmethod
    def build(cls, shift: int, table: Mapping[int, int]) -> "ZModelElement":
        return cls(shift, tuple(sorted((a, b) for a, b in table.items() if b != a + shift)))

    @classmethod
    def cycle(cls, *points: int) -> "ZModelElement":
        pts = list(points)
        return cls.build(0, dict(zip(pts, pts[1:] + pts[:1])))

    def image(self, z: int) -> int:
        return dict(self.exc).get(z, z + self.shift)

    def __mul__(self, other: "ZModelElement") -> "ZModelElement":
        lo = min([0] + [a for a, _ in self.exc] + [a - self.shift for a, _ in other.exc])
        hi = max([0] + [a for a, _ in self.exc] + [a - self.shift for a, _ in other.exc])
        table = {z: other.image(self.image(z)) for z in range(lo, hi + 1)}
        return ZModelElement.build(self.shift + other.shift, table)


def z_to_x2(e: ZModelElement) -> HoughtonElement:
    span = max([abs(a) for a, _ in e.exc] + [0]) + abs(e.shift) + 2
    table = {}
    for z in range(-span, span + 1):
        table[z_to_point(z)] = z_to_point(e.image(z))
    return HoughtonElement._normalized(2, (e.shift, -e.shift), table)


def x2_to_z(g: HoughtonElement) -> ZModelElement:
    if g.n != 2:
        raise BadN(f"the Z-model only covers X_2, got n={g.n}")
    if g.tvec[0] != -g.tvec[1]:
        raise BadN("element does not come from X_2")
    shift = g.tvec[0]
    span = max(g.thresholds) + abs(shift) + 2
    table = {z: point_to_z(g.image(z_to_point(z))) for z in range(-span, span + 1)}
    return ZModelElement.build(shift, table)


def z_t() -> ZModelElement:
    return ZModelElement.translation(1)


def z_s() -> ZModelElement:
    """s = t (4 3 2 1): translate, then cycle."""
    return z_t() * ZModelElement.cycle(4, 3, 2, 1)


def z_t_two_cycle() -> ZModelElement:
    return z_t() * ZModelElement.cycle(0, 1)


# --- generating sets ----------------------------------------------------------

def generating_set(spec: GeneratingSetSpec) -> dict[str, HoughtonElement]:
    n, v = spec.n, spec.v
    if spec.family is Family.H2_SIZE3:
        return {
            "t": z_to_x2(z_t()),
            "t_two_cycle": z_to_x2(z_t_two_cycle()),
            "two_cycle": z_to_x2(ZModelElement.cycle(0, 1)),
        }
    if spec.family is Family.H2_SIZE2:
        return {"t": z_to_x2(z_t()), "s": z_to_x2(z_s())}
    if spec.family is Family.HN:
        out = {f"g{k}": standard_generator(n, k) for k in range(2, n)}
        out["h"] = standard_h(n)
        return out
    g2_2v = power(standard_generator(n, 2), 2 * v)
    out = {f"g{k}_v": power(standard_generator(n, k), v) for k in range(2, n)}
    out["h"] = standard_h(n, v)
    out["sigma1"] = sigma1(n)
    out["g2_2v_sigma1"] = compose(g2_2v, sigma1(n))
    out["g2_2v_sigma2"] = compose(g2_2v, sigma2(n, v))
    return out


def named_element(name: str, n: int, v: int = 0) -> HoughtonElement:
    """Registry used by the CLI: g2.., h, sigma1, sigma2, g2_2v_sigma*, t, s, two_cycle."""
    if name.startswith("g") and name[1:].isdigit():
        return standard_generator(n, int(name[1:]))
    if name == "h":
        return standard_h(n, v or 1)
    if name in ("sigma1", "sigma2", "g2_2v_sigma1", "g2_2v_sigma2"):
        if name.endswith("sigma2") and not v:
            raise BadSpec(f"{name} needs --v")
        sig = sigma1(n) if name.endswith("1") else sigma2(n, v)
        if name.startswith("g2_2v"):
            return compose(power(standard_generator(n, 2), 2 * v), sig)
        return sig
    if name in ("t", "s", "two_cycle", "t_two_cycle"):
        if n != 2:
            raise BadN(f"{name} is an element of H_2")
        return {"t": lambda: z_to_x2(z_t()), "s": lambda: z_to_x2(z_s()),
                "two_cycle": lambda: z_to_x2(ZModelElement.cycle(0, 1)),
                "t_two_cycle": lambda: z_to_x2(z_t_two_cycle())}[name]()
    raise BadSpec(f"unknown generator name {name!r}")


# --- U_v membership -----------------------------------------------------------

def translation_word(tvec: Sequence[int], n: int, v: int) -> HoughtonElement:
    """prod_{i>=2} (g_i^v)^(-t_i/v): the canonical element with translation tvec."""
    return product((power(standard_generator(n, i), -tvec[i - 1]) for i in range(2, n + 1)), n)


def is_member_Uv(g: HoughtonElement, v: int) -> bool:
    if v <= 0 or v % 2:
        raise OddV(f"U_v is only defined here for positive even v, got {v}")
    if any(t % v for t in g.tvec):
        return False
    w = translation_word(g.tvec, g.n, v)
    return parity(compose(g, w.inverse())) == "even"
