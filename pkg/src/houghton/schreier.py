"""Order of a finite permutation group via the Schreier-Sims algorithm.

Permutations are tuples p with p[i] the image of i.
"""

from __future__ import annotations

from typing import Sequence

Perm = tuple[int, ...]


def _mul(p: Perm, q: Perm) -> Perm:
    """Apply p, then q."""
    return tuple(q[i] for i in p)


def _inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


class _Level:
    def __init__(self, base: int, degree: int):
        self.base = base
        self.gens: list[Perm] = []
        self.transversal: dict[int, Perm] = {base: tuple(range(degree))}

    def extend_orbit(self) -> None:
        queue = list(self.transversal)
        while queue:
            pt = queue.pop()
            for g in self.gens:
                img = g[pt]
                if img not in self.transversal:
                    self.transversal[img] = _mul(self.transversal[pt], g)
                    queue.append(img)


def _sift(levels: list[_Level], g: Perm) -> tuple[Perm, int]:
    for i, lvl in enumerate(levels):
        img = g[lvl.base]
        u = lvl.transversal.get(img)
        if u is None:
            return g, i
        g = _mul(g, _inv(u))
    return g, len(levels)


def group_order(generators: Sequence[Perm], degree: int) -> int:
    """Order of the group generated by ``generators`` acting on range(degree)."""
    ident = tuple(range(degree))
    gens = [tuple(g) for g in generators if tuple(g) != ident]
    levels: list[_Level] = []

    def add(g: Perm, start: int) -> None:
        # g is not in the stabiliser chain from level ``start``: insert it
        # and re-check the Schreier generators of affected levels
        todo = [(g, start)]
        while todo:
            h, i = todo.pop()
            h, j = _sift(levels[i:], h)
            j += i
            if h == ident:
                continue
            if j == len(levels):
                base = next(p for p in range(degree) if h[p] != p)
                levels.append(_Level(base, degree))
            for k in range(i, j + 1):
                lvl = levels[k]
                lvl.gens.append(h)
                old = dict(lvl.transversal)
                lvl.extend_orbit()
                for pt, u in lvl.transversal.items():
                    for s in lvl.gens:
                        if pt in old and s is not h:
                            continue
                        w = _mul(_mul(u, s), _inv(lvl.transversal[s[pt]]))
                        if w != ident:
                            todo.append((w, k + 1))

    for g in gens:
        add(g, 0)
    order = 1
    for lvl in levels:
        order *= len(lvl.transversal)
    return order
