"""Eventually-translational bijections of X_n = {1..n} x N.

An element is stored as a translation vector plus a finite table of the
points where it disagrees with that translation.  Points are plain
``(ray, pos)`` tuples with ``pos >= 1``.  All maps act on the right, so
``compose(g, h)`` applies ``g`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Mapping, Optional, Sequence

from .errors import (
    BadPoint,
    InfiniteSupport,
    InternalCheckFailed,
    MismatchedN,
    NonZeroTranslationSum,
    NotBijective,
    TvecMismatch,
)

Point = tuple[int, int]
Cycle = tuple[Point, ...]
Parity = Literal["even", "odd"]


def check_point(n: int, x) -> Point:
    try:
        i, m = x
    except (TypeError, ValueError):
        raise BadPoint(f"not a point: {x!r}") from None
    if not (isinstance(i, int) and isinstance(m, int)):
        raise BadPoint(f"point coordinates must be integers: {x!r}")
    if not 1 <= i <= n or m < 1:
        raise BadPoint(f"point {x!r} is not in X_{n}")
    return (i, m)


def in_ray_tail(x: Point, ray: int, d: int) -> bool:
    """Membership in R_ray^(d) = {(ray, m) : m >= d}."""
    return x[0] == ray and x[1] >= d


def in_residue_ray(x: Point, ray: int, r: int, v: int) -> bool:
    """Membership in R_{ray,r} = {(ray, 2vk + r) : k >= 1}."""
    return x[0] == ray and x[1] > 2 * v and (x[1] - r) % (2 * v) == 0


class HoughtonElement:
    """A bijection of X_n that is a translation on each ray outside a finite set.

    Instances are immutable and kept in normal form: the exception table only
    holds points whose image differs from the translated one.  Equality and
    hashing therefore do not depend on how an element was produced.
    """

    __slots__ = ("n", "tvec", "_table", "_z", "_hash", "_inv")

    def __init__(self, n: int, tvec: tuple[int, ...], table: dict[Point, Point]):
        # trusted constructor; use construct() for unchecked input
        self.n = n
        self.tvec = tvec
        self._table = table
        z = [1] * n
        for (i, m) in table:
            if m + 1 > z[i - 1]:
                z[i - 1] = m + 1
        self._z = tuple(z)
        self._hash = None
        self._inv = None

    @classmethod
    def _normalized(cls, n: int, tvec: tuple[int, ...], table: Mapping[Point, Point]) -> "HoughtonElement":
        clean = {x: y for x, y in table.items() if y != (x[0], x[1] + tvec[x[0] - 1])}
        return cls(n, tvec, clean)

    @classmethod
    def identity(cls, n: int) -> "HoughtonElement":
        return cls(n, (0,) * n, {})

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[Point]]) -> "HoughtonElement":
        """Finitary element given in disjoint cycle notation."""
        table: dict[Point, Point] = {}
        for cyc in cycles:
            pts = [check_point(n, x) for x in cyc]
            for a, b in zip(pts, pts[1:] + pts[:1]):
                if a in table:
                    raise NotBijective(f"point {a} appears in two cycles")
                table[a] = b
        return cls._normalized(n, (0,) * n, table)

    @property
    def exceptions(self) -> tuple[tuple[Point, Point], ...]:
        return tuple(sorted(self._table.items()))

    @property
    def thresholds(self) -> tuple[int, ...]:
        """z_i for every ray: the regular rule holds from this position on."""
        return self._z

    def image(self, x: Point) -> Point:
        y = self._table.get(x)
        if y is None:
            return (x[0], x[1] + self.tvec[x[0] - 1])
        return y

    def preimage(self, y: Point) -> Point:
        return self.inverse().image(y)

    def is_finitary(self) -> bool:
        return not any(self.tvec)

    def is_identity(self) -> bool:
        return not self._table and not any(self.tvec)

    def inverse(self) -> "HoughtonElement":
        if self._inv is None:
            inv = HoughtonElement(self.n, tuple(-t for t in self.tvec),
                                  {y: x for x, y in self._table.items()})
            inv._inv = self
            self._inv = inv
        return self._inv

    def __mul__(self, other: "HoughtonElement") -> "HoughtonElement":
        return compose(self, other)

    def __pow__(self, k: int) -> "HoughtonElement":
        return power(self, k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HoughtonElement):
            return NotImplemented
        return self.n == other.n and self.tvec == other.tvec and self._table == other._table

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.tvec, self.exceptions))
        return self._hash

    def __repr__(self) -> str:
        if self.is_finitary() and self._table:
            cyc = " ".join("(" + " ".join(f"{i},{m}" for i, m in c) + ")" for c in cycle_decomposition(self))
            return f"HoughtonElement(n={self.n}, {cyc})"
        return f"HoughtonElement(n={self.n}, t={self.tvec}, exc={len(self._table)})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "t": list(self.tvec),
            "exc": [[[x[0], x[1]], [y[0], y[1]]] for x, y in self.exceptions],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "HoughtonElement":
        exc = {tuple(x): tuple(y) for x, y in data["exc"]}
        return construct(data["n"], data["t"], exc)


def construct(n: int, tvec: Sequence[int], exceptions: Mapping[Point, Point]) -> HoughtonElement:
    """Validate raw data and return the element in normal form."""
    if not isinstance(n, int) or n < 1:
        raise BadPoint(f"ray count must be a positive integer, got {n!r}")
    tvec = tuple(int(t) for t in tvec)
    if len(tvec) != n:
        raise BadPoint(f"translation vector has length {len(tvec)}, expected {n}")
    if sum(tvec) != 0:
        raise NonZeroTranslationSum(f"translation vector {tvec} does not sum to 0")
    table = {check_point(n, x): check_point(n, y) for x, y in exceptions.items()}

    if len(set(table.values())) != len(table):
        raise NotBijective("exception table is not injective")
    for i, t in enumerate(tvec, start=1):
        for m in range(1, 1 - t):
            if (i, m) not in table:
                raise NotBijective(f"({i},{m}) would be translated off the ray")
    # targets the translated part never reaches must be exactly the exception images
    missing = {(i, p) for i, t in enumerate(tvec, start=1) for p in range(1, t + 1)}
    for (i, m) in table:
        p = m + tvec[i - 1]
        if p >= 1:
            missing.add((i, p))
    if missing != set(table.values()):
        raise NotBijective("exception table does not complete the translation to a bijection")
    return HoughtonElement._normalized(n, tvec, table)


def apply(g: HoughtonElement, x) -> Point:
    return g.image(check_point(g.n, x))


def compose(g: HoughtonElement, h: HoughtonElement) -> HoughtonElement:
    """The product g*h: first g, then h."""
    if g.n != h.n:
        raise MismatchedN(f"cannot compose elements of X_{g.n} and X_{h.n}")
    tg, th = g.tvec, h.tvec
    gt, ht = g._table, h._table
    tv = tuple(a + b for a, b in zip(tg, th))
    table: dict[Point, Point] = {}
    # only points in g's table, or regular g-preimages of h's table, can be exceptional
    for x, y in gt.items():
        w = ht.get(y)
        if w is None:
            w = (y[0], y[1] + th[y[0] - 1])
        if w[0] != x[0] or w[1] != x[1] + tv[x[0] - 1]:
            table[x] = w
    for y, w in ht.items():
        ray = y[0]
        m = y[1] - tg[ray - 1]
        if m < 1:
            continue
        x = (ray, m)
        if x in gt:
            continue
        if w[0] != ray or w[1] != m + tv[ray - 1]:
            table[x] = w
    return HoughtonElement(g.n, tv, table)


def invert(g: HoughtonElement) -> HoughtonElement:
    return g.inverse()


def power(g: HoughtonElement, k: int) -> HoughtonElement:
    if k < 0:
        g, k = g.inverse(), -k
    result = HoughtonElement.identity(g.n)
    base = g
    while k:
        if k & 1:
            result = compose(result, base)
        k >>= 1
        if k:
            base = compose(base, base)
    return result


def conjugate(g: HoughtonElement, c: HoughtonElement) -> HoughtonElement:
    """c^-1 g c; moves the cycles of g by c."""
    return compose(compose(c.inverse(), g), c)


def commutator(a: HoughtonElement, b: HoughtonElement) -> HoughtonElement:
    """[a, b] = a b a^-1 b^-1."""
    return compose(compose(a, b), compose(a.inverse(), b.inverse()))


def finite_support(g: HoughtonElement) -> frozenset[Point]:
    if not g.is_finitary():
        raise InfiniteSupport(f"element with translation {g.tvec} has infinite support")
    return frozenset(g._table)


def cycle_decomposition(sigma: HoughtonElement) -> list[Cycle]:
    """Disjoint cycles, each rotated to start at its least point, sorted."""
    support = finite_support(sigma)
    seen: set[Point] = set()
    cycles = []
    for start in sorted(support):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        x = sigma._table[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = sigma._table[x]
        cycles.append(tuple(cyc))
    return cycles


def cycle_type(sigma: HoughtonElement) -> tuple[int, ...]:
    return tuple(sorted(len(c) for c in cycle_decomposition(sigma)))


def parity(sigma: HoughtonElement) -> Parity:
    swaps = sum(len(c) - 1 for c in cycle_decomposition(sigma))
    return "odd" if swaps % 2 else "even"


def regular_threshold(g: HoughtonElement, i: int) -> int:
    if not 1 <= i <= g.n:
        raise BadPoint(f"ray {i} is not in X_{g.n}")
    return g._z[i - 1]


@dataclass(frozen=True)
class FixedPoints:
    """Fixed points of an element, finite except for whole untranslated rays.

    ``points`` are isolated fixed points; every ray in ``cofinite_rays`` is
    fixed pointwise except for the positions listed in ``moved``.
    """

    points: frozenset[Point]
    cofinite_rays: tuple[int, ...]
    moved: frozenset[Point]

    def __contains__(self, x: Point) -> bool:
        if x[0] in self.cofinite_rays:
            return x not in self.moved
        return x in self.points

    @property
    def is_everything(self) -> bool:
        return not self.moved and len(self.points) == 0 and bool(self.cofinite_rays)


def fixed_points_in_window(g: HoughtonElement) -> FixedPoints:
    zero_rays = tuple(i for i, t in enumerate(g.tvec, start=1) if t == 0)
    points = frozenset(x for x, y in g._table.items() if x == y)
    moved = frozenset(x for x in g._table if x[0] in zero_rays)
    return FixedPoints(points, zero_rays, moved)


# --- orbit navigation -------------------------------------------------------

@dataclass(frozen=True)
class OrbitDescriptor:
    """Identifies the <f>-orbit of a point.

    For a finite orbit ``cycle`` holds it (a fixed point is a 1-cycle).  For an
    infinite orbit ``forward`` and ``backward`` are the (ray, residue) classes
    of its two tails, residues taken in 1..|t| so that (i, r) names the class
    {(i, |t|k + r)}.
    """

    kind: Literal["finite", "infinite"]
    cycle: Optional[Cycle] = None
    forward: Optional[tuple[int, int]] = None
    backward: Optional[tuple[int, int]] = None


def _step_bound(f: HoughtonElement, x: Point) -> int:
    i, m = x
    t = f.tvec[i - 1]
    extra = (m // -t + 1) if t < 0 else 0
    return extra + sum(z + abs(t) for z, t in zip(f._z, f.tvec)) + 2


def _walk(f: HoughtonElement, x: Point):
    """Follow x forward until it closes a cycle or enters the translating tail.

    Returns (path, closed): path lists x, xf, xf^2, ... up to and including the
    first tail point (or the last point before returning to x).
    """
    path = [x]
    y = x
    limit = _step_bound(f, x)
    tv, z = f.tvec, f._z
    for _ in range(limit):
        i, m = y
        t = tv[i - 1]
        if m >= z[i - 1]:
            if t > 0:
                return path, False
            if t == 0:
                return path, True  # regular fixed point, so y == x here
        y = f.image(y)
        if y == x:
            return path, True
        path.append(y)
    raise InternalCheckFailed(f"orbit walk from {x} did not terminate")


def _residue(m: int, t: int) -> int:
    return (m - 1) % t + 1


def orbit_descriptor(f: HoughtonElement, x) -> OrbitDescriptor:
    x = check_point(f.n, x)
    path, closed = _walk(f, x)
    if closed:
        k = path.index(min(path))
        return OrbitDescriptor("finite", cycle=tuple(path[k:] + path[:k]))
    j, m = path[-1]
    back, _ = _walk(f.inverse(), x)
    i, mb = back[-1]
    return OrbitDescriptor(
        "infinite",
        forward=(j, _residue(m, f.tvec[j - 1])),
        backward=(i, _residue(mb, -f.tvec[i - 1])),
    )


def solve_power(f: HoughtonElement, x, y) -> Optional[int]:
    """Exponent k of least magnitude (positive on ties) with (x)f^k = y, or None."""
    x = check_point(f.n, x)
    y = check_point(f.n, y)
    if x == y:
        return 0
    path, closed = _walk(f, x)
    if closed:
        if y not in path:
            return None
        k = path.index(y)
        size = len(path)
        return k if k <= size - k else k - size
    for k, p in enumerate(path):
        if p == y:
            return k
    hit = _tail_hit(path, f.tvec, y)
    if hit is not None:
        return hit
    back, _ = _walk(f.inverse(), x)
    for k, p in enumerate(back):
        if p == y:
            return -k
    hit = _tail_hit(back, tuple(-t for t in f.tvec), y)
    return None if hit is None else -hit


def _tail_hit(path: list[Point], tvec: tuple[int, ...], y: Point) -> Optional[int]:
    j, m = path[-1]
    t = tvec[j - 1]
    if y[0] == j and y[1] >= m and (y[1] - m) % t == 0:
        return len(path) - 1 + (y[1] - m) // t
    return None


def iterate(f: HoughtonElement, x: Point, k: int) -> Point:
    """(x)f^k by stepping; k may be negative."""
    g = f if k >= 0 else f.inverse()
    for _ in range(abs(k)):
        x = g.image(x)
    return x


def eventual_agreement_bound(g: HoughtonElement, h: HoughtonElement) -> int:
    if g.n != h.n:
        raise MismatchedN("elements live on different X_n")
    if g.tvec != h.tvec:
        raise TvecMismatch(f"translation vectors differ: {g.tvec} vs {h.tvec}")
    return max(abs(t) for t in g.tvec) + max(max(g._z), max(h._z))


def eventual_agreement_index(g: HoughtonElement, h: HoughtonElement, x: Point,
                             limit: int = 100_000) -> Optional[int]:
    """Least e with (x)g^(e+k) = (x)h^(e+k) for all k >= 0, or None within limit.

    Agreement is certified once both orbits meet at a point from which both
    maps translate (or fix) regularly forever.
    """
    if g.tvec != h.tvec:
        raise TvecMismatch(f"translation vectors differ: {g.tvec} vs {h.tvec}")
    a = b = x
    for e in range(limit + 1):
        if a == b:
            i, m = a
            t = g.tvec[i - 1]
            if t >= 0 and m >= g._z[i - 1] and m >= h._z[i - 1]:
                return e
        a, b = g.image(a), h.image(b)
    return None
