"""Constructive recovery of standard generators from conjugated generating sets.

Each ``recover_*`` function takes a tuple of conjugates, builds every
intermediate element as a named witness word over the inputs, and returns a
:class:`GenerationCertificate` whose side conditions imply generation of the
whole group.  The adversary's conjugators are never read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import (
    InternalCheckFailed,
    InvalidInput,
    NotEven,
    PreconditionViolated,
    SupportOutsideOmega,
)
from .groups import (
    Family,
    GeneratingSetSpec,
    generating_set,
    is_member_Uv,
    omega,
    point_to_z,
    standard_generator,
    standard_h,
    z_to_point,
)
from .perm import (
    HoughtonElement,
    Point,
    compose,
    conjugate,
    cycle_decomposition,
    cycle_type,
    eventual_agreement_bound,
    eventual_agreement_index,
    fixed_points_in_window,
    iterate,
    orbit_descriptor,
    parity,
    power,
    solve_power,
)
from .schreier import group_order
from .words import GenerationCertificate, TraceBuilder, Witness, Word, evaluate_word, verify_witness

SEARCH_LIMIT = 5000


@dataclass
class ConjugateTuple:
    """The primed generating set S'.  ``conjugators`` is kept for audit only."""

    spec: GeneratingSetSpec
    assignment: dict[str, HoughtonElement]
    conjugators: Optional[dict[str, HoughtonElement]] = None


def validate_tuple(ct: ConjugateTuple) -> None:
    spec = ct.spec
    originals = generating_set(spec)
    if set(ct.assignment) != set(originals):
        raise InvalidInput(f"expected labels {sorted(originals)}, got {sorted(ct.assignment)}")
    for label, g in originals.items():
        gp = ct.assignment[label]
        if gp.n != spec.n:
            raise InvalidInput(f"{label} acts on X_{gp.n}, expected X_{spec.n}")
        if gp.tvec != g.tvec:
            raise InvalidInput(f"{label} has translation {gp.tvec}, expected {g.tvec}")
        if g.is_finitary() and cycle_type(gp) != cycle_type(g):
            raise InvalidInput(f"{label} has cycle type {cycle_type(gp)}, expected {cycle_type(g)}")
        if spec.family is Family.UV and not is_member_Uv(gp, spec.v):
            raise InvalidInput(f"{label} is not an element of U_{spec.v}")
    fixed = spec.fixed_label
    if ct.assignment[fixed] != originals[fixed]:
        raise InvalidInput(f"{fixed} must be the standard generator (conjugated to itself)")


# --- small helpers ------------------------------------------------------------

def _first(pred: Callable[[int], bool], start: int = 0, limit: int = SEARCH_LIMIT, what: str = "") -> int:
    for k in range(start, start + limit):
        if pred(k):
            return k
    raise InternalCheckFailed(f"no suitable exponent found for {what or 'search'}")


def _solve(f: HoughtonElement, x: Point, y: Point, what: str) -> int:
    k = solve_power(f, x, y)
    if k is None:
        raise InternalCheckFailed(f"{what}: {y} is not on the orbit of {x}")
    return k


def _expect(cond: bool, what: str) -> None:
    if not cond:
        raise InternalCheckFailed(what)


def _support(g: HoughtonElement) -> list[Point]:
    return sorted(g._table)


def _cycle(n: int, *pts: Point) -> HoughtonElement:
    return HoughtonElement.from_cycles(n, [list(pts)])


def _relabel(word: Word, by: str, k: int) -> Word:
    """by^-k word by^k: moves the support of ``word`` along by^k."""
    return word.conj(Word.of(by, k))


def _push_word(b: TraceBuilder, name: str, by: str, inside: Callable[[Point], bool], what: str) -> int:
    """Least k >= 0 such that conjugating ``name`` by by^k puts its support inside a region."""
    g, c = b[name], b[by]
    cur = g
    for k in range(SEARCH_LIMIT):
        if all(inside(x) for x in cur._table):
            return k
        cur = conjugate(cur, c)
    raise InternalCheckFailed(f"could not push {name} along {by} ({what})")


def alt_word(b: TraceBuilder, target: HoughtonElement, c0: str, f: str, anchor: Point) -> Word:
    """Word in c0, f and a helper witness evaluating to the even permutation ``target``.

    c0 must be the 3-cycle (x_0 x_1 x_2) with x_k = (anchor)f^k, and the
    support of ``target`` must lie on the forward f-orbit of ``anchor``.
    Positions are fixed from the top down with the 3-cycles A_k = (x_0 x_1 x_k),
    each spelled as c0 conjugated by M_k = f^-2 E^(k-2) f^k where E = c0 f^-1
    (M_k = c_2 c_3 ... c_(k-1) with c_j = f^-j c0 f^j).
    """
    if not target._table:
        return Word()
    if parity(target) != "even":
        raise NotEven("target permutation is odd")
    f_elem = b[f]
    pos: dict[Point, int] = {}
    for x in target._table:
        k = solve_power(f_elem, anchor, x)
        if k is None or k < 0:
            raise PreconditionViolated(f"{x} is not on the forward orbit of {anchor}")
        pos[x] = k
    size = max(max(pos.values()) + 1, 3)
    img = list(range(size))
    for x, k in pos.items():
        img[k] = pos[target.image(x)]

    steps: list[tuple[int, int]] = []  # (k, e): right-multiply values by A_k^e

    def act(k: int, e: int) -> None:
        m = {0: 1, 1: k, k: 0} if e == 1 else {1: 0, k: 1, 0: k}
        for q in range(size):
            img[q] = m.get(img[q], img[q])
        steps.append((k, e))

    for p in range(size - 1, 1, -1):
        w = img[p]
        if w == p:
            continue
        if w >= 2:
            act(w, 1)
            w = 0
        act(p, 1 if w == 1 else -1)
    _expect(img == list(range(size)), "alt_word failed to reduce the permutation")
    step = b.fresh(f"{c0}_step")
    b.define(step, Word([(c0, 1), (f, -1)]))
    line = [anchor]
    for _ in range(size - 1):
        line.append(f_elem.image(line[-1]))
    names: dict[int, str] = {2: c0}
    for k in sorted({k for k, _ in steps} - {2}):
        mover = Word([(f, -2), (step, k - 2), (f, k)])
        names[k] = b.fresh(f"{c0}_k{k}")
        value = b.define(names[k], Word.of(c0).conj(mover), k=k)
        _expect(value == _cycle(b.n, line[0], line[1], line[k]), f"{names[k]} is not (x_0 x_1 x_{k})")
    return Word((names[k], -e) for k, e in reversed(steps))


# --- 3-cycles from a translation and a finitary permutation -------------------

def produce_3cycle_word(f: HoughtonElement, sigma: HoughtonElement, labels: tuple[str, str]) -> tuple[Word, dict]:
    lf, ls = labels
    t = f.tvec
    if not (t[0] == 1 and sorted(t[1:]) == [-1] + [0] * (len(t) - 2)):
        raise PreconditionViolated(f"f must translate like g_2, got {t}")
    if not sigma.is_finitary() or not sigma._table:
        raise PreconditionViolated("sigma must be a non-trivial finitary permutation")
    z1 = f.thresholds[0]
    supp = _support(sigma)
    if any(x[0] != 1 or x[1] < z1 for x in supp):
        raise PreconditionViolated(f"support of sigma must lie in R_1 from position {z1} on")
    if cycle_type(sigma) == (3,):
        return Word.of(ls), {"d": 0}
    p = max(x[1] for x in supp)
    q = min(x[1] for x in supp)
    d = p - q
    shifted = conjugate(sigma, power(f, d))
    _expect(set(shifted._table) & set(sigma._table) == {(1, p)}, "shifted support must meet sigma only in y")
    tau = Word.of(ls).conj(Word.of(lf, d))
    alpha = Word.of(ls).conj(tau)
    return Word.of(ls) + alpha.inverse(), {"d": d, "y": [1, p]}


def produce_3cycle(f: HoughtonElement, sigma: HoughtonElement, labels: tuple[str, str] = ("f", "sigma"),
                   name: str = "three_cycle") -> Witness:
    """A witness for a 3-cycle in <f, sigma>."""
    word, _ = produce_3cycle_word(f, sigma, labels)
    claim = evaluate_word(word, {labels[0]: f, labels[1]: sigma}, f.n)
    _expect(cycle_type(claim) == (3,), "sigma alpha^-1 is not a 3-cycle")
    return Witness(name, word, claim)


def _three_cycle_step(b: TraceBuilder, f: str, sigma: str, name: str) -> HoughtonElement:
    word, note = produce_3cycle_word(b[f], b[sigma], (f, sigma))
    value = b.define(name, word, lemma="3-cycle", **note)
    _expect(cycle_type(value) == (3,), "produce_3cycle returned a non 3-cycle")
    return value


def _result(b: TraceBuilder, names: Iterable[str]) -> list[str]:
    out = []
    for name in names:
        b.define(f"result.{name}", Word.of(name))
        out.append(f"result.{name}")
    return out


def _certificate(spec: GeneratingSetSpec, b: TraceBuilder, side: dict) -> GenerationCertificate:
    return GenerationCertificate(spec, b.trace.witnesses, side, b.trace)


# --- H_2, generating set of size 3 ----------------------------------------------

def recover_h2_size3(ct: ConjugateTuple) -> GenerationCertificate:
    if ct.spec.family is not Family.H2_SIZE3:
        raise InvalidInput("expected an h2s3 tuple")
    validate_tuple(ct)
    b = TraceBuilder(ct.assignment)
    fixed = fixed_points_in_window(b["t_two_cycle"])
    _expect(len(fixed.points) == 1 and not fixed.cofinite_rays, "conjugate of t(0 1) must fix one point")
    x = point_to_z(next(iter(fixed.points)))
    # t^x u t^-x fixes 0 and has Z \ {0} as its only infinite orbit
    f = b.define("f", Word.of("t_two_cycle").conj(Word.of("t", -x)), fixed_point=x)
    a, c = sorted(point_to_z(p) for p in b["two_cycle"]._table)
    b.define("tau0", Word.of("two_cycle").conj(Word.of("t", -a)), a=a, b=c)
    d = _solve(f, z_to_point(c - a), z_to_point(1), "f-power carrying b-a to 1")
    two = b.define("two_cycle01", _relabel(Word.of("tau0"), "f", d), d=d)
    _expect(two == _cycle(2, (1, 1), (1, 2)), "did not reach (0 1)")
    res = _result(b, ["two_cycle01"])
    return _certificate(ct.spec, b, {"fixed": "t", "two_cycle": res[0]})


# --- H_2, generating set of size 2 ----------------------------------------------

def _zfix(g: HoughtonElement) -> list[int]:
    fp = fixed_points_in_window(g)
    _expect(not fp.cofinite_rays, "element unexpectedly fixes a whole ray")
    return sorted(point_to_z(p) for p in fp.points)


def recover_h2_size2(ct: ConjugateTuple) -> GenerationCertificate:
    if ct.spec.family is not Family.H2_SIZE2:
        raise InvalidInput("expected an h2s2 tuple")
    validate_tuple(ct)
    b = TraceBuilder(ct.assignment)
    t = b["t"]

    odd = b.define("odd", Word.of("s") + Word.of("t", -1), lemma="odd permutation s' t^-1")
    _expect(parity(odd) == "odd", "s' t^-1 is not odd")
    lo = min(point_to_z(x) for x in odd._table)
    k = max(0, -lo)
    b.define("odd_shifted", _relabel(Word.of("odd"), "t", k), k=k)
    _three_cycle_step(b, "t", "odd_shifted", "cycle3")

    fa, fb, fc = _zfix(b["s"])
    if fb == fc - 1:
        f2 = "s"
        a1 = fa
    else:
        k = fc - fa
        fcde = b.define("f_cde", _relabel(Word.of("s"), "t", k), k=k)
        _expect(_zfix(fcde) == [fc, fc + fb - fa, fc + fc - fa], "f_cde has unexpected fixed points")
        j = _solve(fcde, z_to_point(fb), z_to_point(fc - 1), "f_cde power")
        g = b.define("f_a1", _relabel(Word.of("s"), "f_cde", j), j=j)
        f2 = "f_a1"
        a1 = [p for p in _zfix(g) if p not in (fc - 1, fc)][0]
        if a1 == fc + 1:
            b.define("f_a1_shifted", _relabel(Word.of("f_a1"), "t", -1))
            f2 = "f_a1_shifted"
    fixed2 = _zfix(b[f2])
    _expect(fc - 1 in fixed2 and fc in fixed2, "staircase element must fix c-1 and c")
    b.define("f3", _relabel(Word.of(f2), "t", 1))
    c = fc
    _staircase_012(b, "cycle3", f2, "f3", c)

    # odd * beta = (0 1) with beta = odd^-1 (0 1) even
    target = _cycle(2, z_to_point(0), z_to_point(1))
    beta = compose(odd.inverse(), target)
    m = min([0] + [point_to_z(x) for x in beta._table])
    b.define("c_anchor", _relabel(Word.of("cycle012"), "t", m), anchor=m)
    word = Word.of("odd") + alt_word(b, beta, "c_anchor", "t", z_to_point(m))
    two = b.define("two_cycle01", word)
    _expect(two == target, "did not reach (0 1)")
    res = _result(b, ["two_cycle01"])
    return _certificate(ct.spec, b, {"fixed": "t", "two_cycle": res[0]})


def _staircase_012(b: TraceBuilder, cyc: str, f2: str, f3: str, c: int) -> None:
    """Move a 3-cycle onto (c c+1 c+2) with t, f2 (fixing c-1, c) and f3 = f2^t, then onto (0 1 2)."""
    t, F2, F3 = b["t"], b[f2], b[f3]
    pts = sorted(point_to_z(x) for x in b[cyc]._table)
    for first in pts:
        for second in pts:
            if second == first:
                continue
            third = [p for p in pts if p not in (first, second)][0]
            m = c - first
            u, w = second + m, third + m
            j2 = solve_power(F2, z_to_point(u), z_to_point(c + 1))
            if j2 is None or u == c:
                continue
            w2 = point_to_z(iterate(F2, z_to_point(w), j2))
            j3 = solve_power(F3, z_to_point(w2), z_to_point(c + 2))
            if j3 is None or w2 in (c, c + 1):
                continue
            word = _relabel(_relabel(_relabel(Word.of(cyc), "t", m), f2, j2), f3, j3)
            word = _relabel(word, "t", -c)
            val = evaluate_word(word, b.env, b.n)
            if val != _cycle(2, z_to_point(0), z_to_point(1), z_to_point(2)):
                word = word.inverse()
            got = b.define("cycle012", word, shift=m, j2=j2, j3=j3, c=c)
            _expect(got == _cycle(2, z_to_point(0), z_to_point(1), z_to_point(2)), "did not reach (0 1 2)")
            return
    raise InternalCheckFailed("no staircase route to (c c+1 c+2)")


# --- H_n, n >= 3 --------------------------------------------------------------------

def _ray_shape_ok(g: HoughtonElement, j: int) -> bool:
    """supp(g) in R_1 u R_j, (j,m) -> (j,m-1) for m >= 2 and (j,1) lands on R_1."""
    if any(x[0] not in (1, j) for x in g._table):
        return False
    if g.image((j, 1))[0] != 1:
        return False
    return all(g.image((j, m)) == (j, m - 1) for m in range(2, g.thresholds[j - 1] + 1))


EXACT_LIMIT = 200


def _translation_set(b: TraceBuilder, sources: Mapping[int, str], by: str, n: int) -> None:
    """h_j := by^-k g_j' by^k, preferring a k that makes h_j agree with g_j on R_j.

    The least k giving the exact shape within EXACT_LIMIT is used; otherwise
    the least k giving the weaker shape of :func:`_ray_shape_ok`.
    """
    c = b[by]
    for j in range(2, n + 1):
        src = b[sources[j]]
        cur = src
        for k in range(SEARCH_LIMIT):
            if _ray_shape_ok(cur, j):
                break
            cur = conjugate(cur, c)
        else:
            raise InternalCheckFailed(f"no conjugate of {sources[j]} has the shape of g_{j}")
        exact = cur.image((j, 1)) == (1, 1)
        if not exact:
            # screen later k pointwise; only a candidate is conjugated in full
            weak, x = k, iterate(c, (j, 1), -k)
            for kk in range(weak + 1, max(EXACT_LIMIT, weak) + 1):
                x = c.inverse().image(x)
                if iterate(c, src.image(x), kk) != (1, 1):
                    continue
                cand = conjugate(src, power(c, kk))
                if _ray_shape_ok(cand, j) and cand.image((j, 1)) == (1, 1):
                    k, exact = kk, True
                    break
        b.define(f"h_{j}", _relabel(Word.of(sources[j]), by, k), k=k, exact=exact)


LADDER_LIMIT = 200


def _ladder_plan(beta: HoughtonElement, h2: HoughtonElement, f2: HoughtonElement) -> tuple:
    """Choose r, s and the ladder length c for the consecutive 3-cycle on R_2.

    r and s are taken as large as possible; smaller values are tried when
    (2,s+2) is not on the f_2-orbit reached by the ladder (e.g. it lies in
    a finite cycle of f_2).
    """
    z2 = f2.thresholds[1]
    fixed2 = [m for m in range(1, z2 + 1) if f2.image((2, m)) == (2, m)]
    pairs = [m for m in fixed2 if m + 1 in fixed2]
    top = max(beta._table)
    for r in sorted(fixed2, reverse=True):
        j = solve_power(h2, top, (2, r))
        if j is None:
            continue
        g1 = conjugate(beta, power(h2, j))
        pts = sorted(g1._table)
        if any(x[0] != 2 for x in pts) or pts[0] != (2, r):
            continue
        d, e = pts[1][1] - r, pts[2][1] - r
        flip = g1.image((2, r)) != (2, r + d)
        m1 = solve_power(f2, (2, r + d), (2, r + 1))
        if m1 is None:
            continue
        for s in sorted(pairs, reverse=True):
            for cc in range(1, LADDER_LIMIT):
                p = iterate(f2, (2, r + cc * e), m1)
                q = iterate(h2, p, r - s)
                if iterate(h2, (2, r), r - s) != (2, s) or iterate(h2, (2, r + 1), r - s) != (2, s + 1):
                    break
                m3 = solve_power(f2, q, (2, s + 2))
                if m3 is not None:
                    return r, j, flip, d, e, s, cc, m1, m3
    raise InternalCheckFailed("no ladder reaches a consecutive 3-cycle on R_2")


def recover_hn(ct: ConjugateTuple) -> GenerationCertificate:
    spec = ct.spec
    if spec.family is not Family.HN:
        raise InvalidInput("expected an hn tuple")
    validate_tuple(ct)
    n = spec.n
    b = TraceBuilder(ct.assignment)

    gn = Word.of("h")
    for k in range(2, n):
        gn = gn + Word.of(f"g{k}", -1)
    b.define(f"g{n}p", gn)
    sources = {k: f"g{k}" for k in range(2, n)}
    sources[n] = f"g{n}p"
    _translation_set(b, sources, "h", n)
    h2, h3 = b["h_2"], b["h_3"]

    # an odd element from the commutator, pushed beyond z_1(h_2)
    comm = Word.of(sources[2]) + Word.of(sources[3]) + Word.of(sources[2], -1) + Word.of(sources[3], -1)
    odd = b.define("odd", comm, lemma="commutator of g_2', g_3'")
    _expect(odd.is_finitary() and parity(odd) == "odd", "[g_2', g_3'] is not an odd permutation")
    base = h2.thresholds[0]
    k = _push_word(b, "odd", "h", lambda x: x[0] == 1 and x[1] >= base, "odd into R_1")
    b.define("odd1", _relabel(Word.of("odd"), "h", k), k=k)
    _three_cycle_step(b, "h_2", "odd1", "beta")

    # alpha carries (2,1),(2,2) to (3,1),(3,2); f_2 = alpha h_2 alpha^-1 fixes (2,1),(2,2)
    z = max(h2.thresholds[0], h3.thresholds[0])
    a = _solve(h2, (2, 2), (1, z), "h_2 power")
    bb = _solve(h3, (3, 2), (1, z), "h_3 power")
    alpha = b.define("alpha", Word.of("h_2", a) + Word.of("h_3", -bb), a=a, b=bb)
    _expect(alpha.image((2, 1)) == (3, 1) and alpha.image((2, 2)) == (3, 2), "alpha misplaces (2,1),(2,2)")
    f2 = b.define("f_2", Word.of("h_2").conj(Word.of("alpha", -1)))
    _expect(f2.image((2, 1)) == (2, 1) and f2.image((2, 2)) == (2, 2), "f_2 moves (2,1) or (2,2)")
    k = _push_word(b, "beta", "h", lambda x: x[0] == 1 and x[1] >= z, "beta into R_1^(z)")
    b.define("beta1", _relabel(Word.of("beta"), "h", k), k=k)
    plan = _ladder_plan(b["beta1"], h2, f2)
    r, j, flip, d, e, s, cc, m1, m3 = plan
    word = _relabel(Word.of("beta1"), "h_2", j)
    gamma = b.define("gamma_1", word.inverse() if flip else word, j=j, r=r, d=d, e=e)
    _expect(gamma == _cycle(n, (2, r), (2, r + d), (2, r + e)), "gamma_1 has the wrong shape")
    for jj in range(1, cc):
        b.define(f"delta_{jj}", _relabel(Word.of("gamma_1", -1), "h_2", -jj * e), j=jj)
        b.define(f"gamma_{jj + 1}", _relabel(Word.of(f"gamma_{jj}"), f"delta_{jj}", 1))
    gc = b[f"gamma_{cc}"]
    _expect(gc == _cycle(n, (2, r), (2, r + d), (2, r + cc * e)), "gamma ladder produced the wrong element")
    word = _relabel(_relabel(_relabel(Word.of(f"gamma_{cc}"), "f_2", m1), "h_2", r - s), "f_2", m3)
    cons = b.define("consecutive", word, m1=m1, shift=r - s, m3=m3, c=cc, s=s)
    _expect(cons == _cycle(n, (2, s), (2, s + 1), (2, s + 2)), "did not reach ((2,s)(2,s+1)(2,s+2))")

    j0 = _solve(h2, (2, s + 2), (1, base), "h_2 power onto (1,z)")
    c0 = b.define("c0", _relabel(Word.of("consecutive"), "h_2", j0).inverse(), j=j0)
    _expect(c0 == _cycle(n, (1, base), (1, base + 1), (1, base + 2)), "c0 is not consecutive on R_1")

    target = _cycle(n, (1, base), (1, base + 1))
    beta_even = compose(b["odd1"].inverse(), target)
    two = b.define("two_cycle", Word.of("odd1") + alt_word(b, beta_even, "c0", "h_2", (1, base)), d=base)
    _expect(two == target, "did not reach the adjacent 2-cycle")
    res = _result(b, [f"h_{j}" for j in range(2, n + 1)] + ["two_cycle"])
    return _certificate(spec, b, {"fixed": "h", "translation_set": res[:-1], "two_cycle": res[-1]})


# --- U_v: finite permutations of a 2v-block --------------------------------------
#
# Block permutations are dicts on the relative positions 1..2v, composed
# left to right like everything else.

BlockPerm = dict


def _bp_mul(p: BlockPerm, q: BlockPerm) -> BlockPerm:
    return {x: q[p[x]] for x in p}


def _bp_inv(p: BlockPerm) -> BlockPerm:
    return {y: x for x, y in p.items()}


def _bp_cycle(size: int, *pts: int) -> BlockPerm:
    out = {x: x for x in range(1, size + 1)}
    for a, b in zip(pts, pts[1:] + pts[:1]):
        out[a] = b
    return out


def _bp_parity(p: BlockPerm) -> int:
    seen, odd = set(), 0
    for x in p:
        if x in seen:
            continue
        length = 0
        while x not in seen:
            seen.add(x)
            x = p[x]
            length += 1
        odd ^= (length - 1) & 1
    return odd


def _bp_sigma(j: int, v: int) -> BlockPerm:
    size = 2 * v
    if j == 1:
        return _bp_cycle(size, 1, 2, 3)
    p = _bp_cycle(size, *range(3, size + 1))
    p[1], p[2] = 2, 1
    return p


def _bp_eval(letters: Sequence[tuple[int, int]], v: int) -> BlockPerm:
    size = 2 * v
    out = {x: x for x in range(1, size + 1)}
    gens = {1: _bp_sigma(1, v), 2: _bp_sigma(2, v)}
    for j, e in letters:
        g = gens[j] if e > 0 else _bp_inv(gens[j])
        for _ in range(abs(e)):
            out = _bp_mul(out, g)
    return out


def _cycle_key(p: BlockPerm) -> tuple:
    return tuple(sorted((x, y) for x, y in p.items() if x != y))


_THREE_CYCLE_WORDS: dict[int, dict] = {}


def _three_cycle_table(v: int) -> dict:
    """Shortest found sigma_1/sigma_2 word for every 3-cycle of the 2v-block.

    Built from P(x) = (1 2 x) = sigma_2^-k sigma_1^(+-1) sigma_2^k, k = x-3,
    then products P P and conjugates P^-1 (P P) P.
    """
    if v in _THREE_CYCLE_WORDS:
        return _THREE_CYCLE_WORDS[v]
    size = 2 * v
    singles = []
    for x in range(3, size + 1):
        k = x - 3
        e = 1 if k % 2 == 0 else -1
        word = [(2, -k), (1, e), (2, k)]
        perm = _bp_eval(word, v)
        _expect(perm == _bp_cycle(size, 1, 2, x), "sigma_2-conjugate of sigma_1 is not (1 2 x)")
        singles.append((word, perm))
        inv = [(j, -e2) for j, e2 in reversed(word)]
        singles.append((inv, _bp_inv(perm)))
    table: dict = {}

    def offer(word, perm):
        key = _cycle_key(perm)
        if len(key) == 3 and (key not in table or len(word) < len(table[key])):
            table[key] = word

    for w, p in singles:
        offer(w, p)
    pairs = [(w1 + w2, _bp_mul(p1, p2)) for w1, p1 in singles for w2, p2 in singles]
    for w, p in pairs:
        offer(w, p)
    for wc, pc in singles:
        ic = [(j, -e) for j, e in reversed(wc)]
        ipc = _bp_inv(pc)
        for w, p in pairs:
            offer(ic + w + wc, _bp_mul(_bp_mul(ipc, p), pc))
    expected = size * (size - 1) * (size - 2) // 3
    _expect(len(table) == expected, f"only {len(table)} of {expected} 3-cycles reached")
    _THREE_CYCLE_WORDS[v] = table
    return table


def decompose_block_perm(sigma: BlockPerm, v: int) -> list[tuple[int, int]]:
    """Word in sigma_1 (letter 1) and sigma_2 (letter 2) realising an even block permutation.

    Reduces sigma to the identity by right-multiplying 3-cycles that fix
    each position in turn, then spells every 3-cycle from the table.
    """
    size = 2 * v
    cur = {x: sigma.get(x, x) for x in range(1, size + 1)}
    if _bp_parity(cur):
        raise NotEven("block permutation is odd")
    table = _three_cycle_table(v)
    cycles = []
    for i in range(1, size + 1):
        w = cur[i]
        if w == i:
            continue
        k = next(x for x in range(i + 1, size + 1) if x != w)
        t = _bp_cycle(size, w, i, k)
        cur = _bp_mul(cur, t)
        cycles.append(t)
    _expect(all(cur[x] == x for x in cur), "block permutation did not reduce")
    letters: list[tuple[int, int]] = []
    for t in reversed(cycles):
        letters += table[_cycle_key(_bp_inv(t))]
    merged = [(j, e) for j, e in Word((f"s{j}", e) for j, e in letters).letters for j in [int(j[1:])]]
    return merged


# --- U_v: alignment by tail agreement -------------------------------------------

def tails_agree(g: HoughtonElement, ref: HoughtonElement, probes: int = 2) -> bool:
    """Necessary test for FSym(X_n)-conjugacy of g and ref.

    Points deep in every ray whose translation is negative (and, via the
    inverses, positive) must eventually follow ref's orbit exactly.
    """
    if g.tvec != ref.tvec:
        return False
    d = eventual_agreement_bound(g, ref)
    for a, b in ((g, ref), (g.inverse(), ref.inverse())):
        for i, t in enumerate(a.tvec, start=1):
            if t >= 0:
                continue
            for m in range(d + 1, d + 1 + probes * -t):
                limit = m // -t + 2 * d + 10
                if eventual_agreement_index(a, b, (i, m), limit) is None:
                    return False
    return True


def _signed_conjugates(g: HoughtonElement, c: HoughtonElement, limit: int):
    """Yield (k, c^-k g c^k) for k = 0, 1, -1, 2, -2, ..., conjugating incrementally."""
    yield 0, g
    up = down = g
    ci = c.inverse()
    for k in range(1, limit + 1):
        up = conjugate(up, c)
        yield k, up
        down = conjugate(down, ci)
        yield -k, down


ALIGN_LIMIT = 200


def _align(b: TraceBuilder, name: str, source: str, by: str, ref: HoughtonElement,
           extra: Optional[str] = None, extra_range: Sequence[int] = (0,)) -> None:
    """name := (by^f extra^e)^-1 source (by^f extra^e) for the first (f, e) whose tails agree with ref."""
    for f, base in _signed_conjugates(b[source], b[by], ALIGN_LIMIT):
        for e in extra_range:
            cand = base if e == 0 else conjugate(base, power(b[extra], e))
            if tails_agree(cand, ref):
                word = _relabel(Word.of(source), by, f)
                if e:
                    word = _relabel(word, extra, e)
                b.define(name, word, f=f, e=e)
                return
    raise InternalCheckFailed(f"no conjugate of {source} along {by} matches the expected orbit structure")


# --- U_v: block permutations on shifted copies of Omega ------------------------------

@dataclass
class BlockContext:
    """Recovered data for realising block permutations on Omega_S' g_2^(2vi)."""

    builder: TraceBuilder
    v: int
    p: int
    h2: str = "h_2"
    s: tuple[str, str] = ("s_sigma1", "s_sigma2")
    blocks: dict = field(default_factory=dict)  # d -> (W1 name, W2 name)

    def block_point(self, i: int, r: int) -> Point:
        return (1, self.p + 2 * self.v * i + r)

    def locate(self, x: Point) -> Optional[tuple[int, int]]:
        """(block index, relative position) of a point at or beyond Omega_S'."""
        if x[0] != 1 or x[1] <= self.p:
            return None
        q, r = divmod(x[1] - self.p - 1, 2 * self.v)
        return q, r + 1


def _block_builder_word(ctx: BlockContext, j: int, a: int, c: int) -> Word:
    return Word([(ctx.h2, -2 * a), (ctx.s[j - 1], a + c), (ctx.h2, -2 * c)])


def _building_blocks(ctx: BlockContext, d: int) -> tuple[str, str]:
    """W_j = h_2^-2a s_j^(a+c) h_2^-2c acting as sigma_j on blocks 0..d."""
    for dd in sorted(ctx.blocks):
        if dd >= d:
            return ctx.blocks[dd]
    b, v = ctx.builder, ctx.v
    h2 = b[ctx.h2]
    names = []
    for j in (1, 2):
        sj = b[ctx.s[j - 1]]
        model = _bp_sigma(j, v)
        a0 = ctx.p // (2 * v) + d + 1
        for t in range(SEARCH_LIMIT):
            a, c = a0 + t, t
            w = compose(compose(power(h2, -2 * a), power(sj, a + c)), power(h2, -2 * c))
            if all(w.image(ctx.block_point(i, r)) == ctx.block_point(i, model[r])
                   for i in range(d + 1) for r in range(1, 2 * v + 1)):
                break
        else:
            raise InternalCheckFailed(f"no building block W_{j} found for {d + 1} blocks")
        name = b.fresh(f"W{j}")
        b.define(name, _block_builder_word(ctx, j, a, c), a=a, b=a + c, c=c, blocks=d + 1)
        names.append(name)
    ctx.blocks[d] = tuple(names)
    return ctx.blocks[d]


def _as_block_perm(sigma, v: int) -> BlockPerm:
    if isinstance(sigma, HoughtonElement):
        if not sigma.is_finitary() or any(x[0] != 1 or x[1] > 2 * v for x in sigma._table):
            raise SupportOutsideOmega("sigma must be supported on (1,1)..(1,2v)")
        return {r: sigma.image((1, r))[1] for r in range(1, 2 * v + 1)}
    perm = {r: r for r in range(1, 2 * v + 1)}
    for x, y in dict(sigma).items():
        if not (1 <= x <= 2 * v and 1 <= y <= 2 * v):
            raise SupportOutsideOmega(f"{x} -> {y} leaves the block 1..{2 * v}")
        perm[x] = y
    if sorted(perm.values()) != list(range(1, 2 * v + 1)):
        raise SupportOutsideOmega("sigma is not a permutation of the block")
    return perm


def realize_block_permutation(sigma, d: int, ctx: BlockContext, name: Optional[str] = None) -> Witness:
    """A witness w acting as the pattern sigma on each block Omega_S' g_2^(2vi), i = 0..d.

    ``sigma`` is an even permutation of Omega = (1,1)..(1,2v), given as an
    element or as a dict on relative positions 1..2v.
    """
    if d < 0:
        raise PreconditionViolated("d must be >= 0")
    perm = _as_block_perm(sigma, ctx.v)
    if _bp_parity(perm):
        raise NotEven("sigma is odd")
    b = ctx.builder
    if all(perm[x] == x for x in perm):
        word = Word()
    else:
        w1, w2 = _building_blocks(ctx, d)
        word = Word((w1 if j == 1 else w2, e) for j, e in decompose_block_perm(perm, ctx.v))
    if name is None:
        return Witness("block_permutation", word, evaluate_word(word, b.env, b.n, b._powers))
    value = b.define(name, word, pattern=sorted(perm.items()))
    return Witness(name, word, value)


def _complete_even(size: int, fixed: Mapping[int, int]) -> BlockPerm:
    """An even block permutation extending the partial injection ``fixed``."""
    perm = dict(fixed)
    rest_src = [x for x in range(1, size + 1) if x not in perm]
    rest_dst = [y for y in range(1, size + 1) if y not in perm.values()]
    perm.update(zip(rest_src, rest_dst))
    if _bp_parity(perm):
        x, y = rest_src[-2], rest_src[-1]
        perm[x], perm[y] = perm[y], perm[x]
    return perm


# --- U_v recovery ----------------------------------------------------------------

def _h2_orbits(h2sq: HoughtonElement, pts: Iterable[Point]) -> Optional[list]:
    """Forward tail class of each point's h_2^2-orbit, or None if one is finite."""
    out = []
    for x in pts:
        od = orbit_descriptor(h2sq, x)
        if od.kind != "infinite":
            return None
        out.append(od.forward)
    return out


def _uv_translation_set(b: TraceBuilder, n: int, v: int) -> None:
    if n == 2:
        b.define("h_2", Word.of("h"))
        return
    g2v = power(standard_generator(n, 2), v)
    by = "h" if n == 3 else "g3_v"
    _align(b, "h_2", "g2_v", by, g2v)
    for i in range(3, n):
        _align(b, f"h_{i}", f"g{i}_v", "h_2", power(standard_generator(n, i), v))
    word = Word.of("h")
    for i in range(2, n):
        word = word + Word.of(f"h_{i}", -1)
    b.define(f"h_{n}", word)


def _omega_three_cycle(b: TraceBuilder, ctx: BlockContext, n: int) -> str:
    """Name of a witnessed 3-cycle whose points lie in Omega_S'."""
    v, p = ctx.v, ctx.p
    h2 = b["h_2"]
    h2sq = power(h2, 2)
    k = _push_word(b, "sigma1", "h", lambda x: x[0] == 1 and x[1] > p, "sigma_1' beyond Omega_S'")
    cur = "x3"
    b.define(cur, _relabel(Word.of("sigma1"), "h", k), k=k)

    def pts(name):
        return sorted(b[name]._table)

    # all points on one h_2^2-orbit: walk the lowest point off it along s_sigma2
    if len(set(_h2_orbits(h2sq, pts(cur)))) == 1:
        s2 = b["s_sigma2"]
        bound = 2 * v + max(max(power(h2, 2)._z), max(power(h2, -2)._z), max(s2._z), max(s2.inverse()._z))
        kk = _first(lambda t: all(iterate(h2sq, x, -t) [0] == 2 and iterate(h2sq, x, -t)[1] >= bound
                                  for x in pts(cur)), what="push onto R_2")
        b.define("x3_r2", _relabel(Word.of(cur), "h_2", -2 * kk), k=kk)
        start = pts("x3_r2")
        lowest = min(start, key=lambda x: x[1])
        oy = _h2_orbits(h2sq, [lowest])[0]

        def splits(q):
            moved = [iterate(s2, x, q) for x in start]
            ids = _h2_orbits(h2sq, moved)
            return ids is not None and len(set(ids)) > 1
        q_first = _first(lambda q: _h2_orbits(h2sq, [iterate(s2, lowest, q)]) not in (None, [oy]),
                         start=1, what="indicator sequence")
        q = _first(splits, start=q_first, what="orbit split")
        b.define("x3_split", _relabel(Word.of("x3_r2"), "s_sigma2", q), q=q, q_first=q_first, reading="m_a")
        k = _push_word(b, "x3_split", "h_2", lambda x: x[0] == 1 and x[1] > p, "split 3-cycle beyond Omega_S'")
        k += k % 2
        cur = "x3_back"
        b.define(cur, _relabel(Word.of("x3_split"), "h_2", k), k=k)

    ids = _h2_orbits(h2sq, pts(cur))
    _expect(ids is not None and len(set(ids)) > 1, "3-cycle points are not split across h_2^2-orbits")

    def locs(name):
        return [ctx.locate(x) for x in sorted(b[name]._table)]

    # two points share an orbit: move the third onto a fresh orbit with a block permutation
    if len(set(ids)) == 2:
        x = b[cur]
        pp = sorted(x._table)
        rel = [ctx.locate(y)[1] for y in pp]
        lone = next(i for i in range(3) if rel.count(rel[i]) == 1)
        pair = rel[(lone + 1) % 3]
        r_new = next(r for r in range(1, 2 * v + 1) if r not in rel)
        perm = _complete_even(2 * v, {rel[lone]: r_new, pair: pair})
        depth = max(i for i, _ in locs(cur))
        wit = realize_block_permutation(perm, depth, ctx, name=b.fresh("w_orbit"))
        b.define("x3_moved", _relabel(Word.of(cur), wit.name, 1))
        b.define("x3_distinct", Word.of(cur).conj(Word.of("x3_moved")))
        cur = "x3_distinct"
        ids = _h2_orbits(h2sq, pts(cur))
        _expect(len(set(ids)) == 3, "3-cycle points still share an h_2^2-orbit")

    # normalise so the lowest point sits in block 0
    low = min(i for i, _ in locs(cur))
    if low:
        nxt = b.fresh("x3_down")
        b.define(nxt, _relabel(Word.of(cur), "h_2", -2 * low), blocks=low)
        cur = nxt
    depth = max(i for i, _ in locs(cur))

    # block walk: bring the middle point down one block at a time
    while True:
        pl = sorted(zip(locs(cur), sorted(b[cur]._table)))
        (i1, r1), (i2, r2), (i3, r3) = [loc for loc, _ in pl]
        _expect(i1 == 0, "lowest 3-cycle point left block 0")
        if i2 == 0:
            break
        w = _complete_even(2 * v, {r1: 1, r2: v + 1, r3: 2 * v})
        ws = _complete_even(2 * v, {1: v + 1, v + 1: 1, 2 * v: 2 * v})
        wn = realize_block_permutation(w, depth, ctx, name=b.fresh("w_walk")).name
        wsn = realize_block_permutation(ws, depth, ctx, name=b.fresh("w_star")).name
        en = b.fresh("E")
        b.define(en, Word.of(wn) + Word.of(wsn) + Word.of("h_2", -1) + Word.of(wn, -1))
        nxt = b.fresh("x3_walk")
        b.define(nxt, _relabel(Word.of(cur), en, 1), block=i2)
        cur = nxt

    # two points in Omega_S': swap the third in with Y X Y^-1
    pl = sorted(zip(locs(cur), sorted(b[cur]._table)))
    (i1, r1), (i2, r2), (i3, r3) = [loc for loc, _ in pl]
    if i3 == 0:
        return cur
    r_new = next(r for r in range(1, 2 * v + 1) if r not in (r1, r2, r3))
    w = _complete_even(2 * v, {r1: r_new, r2: r2, r3: r3})
    wn = realize_block_permutation(w, i3, ctx, name=b.fresh("w_swap")).name
    b.define("y3", _relabel(Word.of(cur), wn, 1))
    # which of Y X Y^-1 and Y^-1 X Y stays in Omega_S' depends on the orientation of X
    for e in (-1, 1):
        cand = conjugate(b[cur], power(b["y3"], e))
        if all(ctx.locate(x) and ctx.locate(x)[0] == 0 for x in cand._table):
            break
    b.define("x3_omega", Word.of(cur).conj(Word.of("y3", e)), side=e)
    _expect(all(ctx.locate(x) and ctx.locate(x)[0] == 0 for x in b["x3_omega"]._table),
            "final 3-cycle is not inside Omega_S'")
    return "x3_omega"


def omega_offset(h2: HoughtonElement, v: int) -> int:
    """Least p >= z_1(h_2) with p divisible by 2v."""
    z = h2.thresholds[0]
    return -(-z // (2 * v)) * 2 * v


def uv_block_context(ct: ConjugateTuple) -> BlockContext:
    """Recover h_2..h_n, s_sigma1, s_sigma2 and Omega_S' for a U_v tuple."""
    spec = ct.spec
    if spec.family is not Family.UV:
        raise InvalidInput("expected a uv tuple")
    validate_tuple(ct)
    n, v = spec.n, spec.v
    b = TraceBuilder(ct.assignment)
    _uv_translation_set(b, n, v)
    refs = generating_set(spec)
    for j, label in ((1, "g2_2v_sigma1"), (2, "g2_2v_sigma2")):
        # the translation part of the hidden conjugator only matters along
        # rays >= 3 and modulo 2v along rays 1, 2
        if n >= 3:
            _align(b, f"s_sigma{j}", label, "h_3", refs[label], "h_2", (0, 1))
        else:
            _align(b, f"s_sigma{j}", label, "h_2", refs[label])
    return BlockContext(b, v, omega_offset(b["h_2"], v))


def recover_uv(ct: ConjugateTuple) -> GenerationCertificate:
    ctx = uv_block_context(ct)
    b, spec = ctx.builder, ct.spec
    n, v, p = spec.n, spec.v, ctx.p
    cyc = _omega_three_cycle(b, ctx, n)

    # conjugate the Omega_S' 3-cycle onto ((p+1)(p+2)(p+j)) for every j
    x1 = min(b[cyc]._table)
    seq = [x1[1] - p, b[cyc].image(x1)[1] - p]
    seq.append(b[cyc].image((1, p + seq[1]))[1] - p)
    finals = []
    for j in range(3, 2 * v + 1):
        w = _complete_even(2 * v, {seq[0]: 1, seq[1]: 2, seq[2]: j})
        wn = realize_block_permutation(w, 0, ctx, name=f"w_omega_{j}").name
        name = f"omega_{j}"
        val = b.define(name, _relabel(Word.of(cyc), wn, 1))
        _expect(val == _cycle(n, (1, p + 1), (1, p + 2), (1, p + j)), f"{name} is not ((p+1)(p+2)(p+{j}))")
        finals.append(name)
    res = _result(b, [f"h_{i}" for i in range(2, n + 1)] + finals)
    return _certificate(spec, b, {
        "fixed": "h",
        "translation_set": res[: n - 1],
        "falt_generators": res[n - 1:],
        "omega_offset": p,
    })


# --- certificate checking -----------------------------------------------------------

@dataclass
class CertificateReport:
    passed: bool
    first_failure: Optional[str]
    checks: list[tuple[str, bool, str]]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "first_failure": self.first_failure,
            "checks": [{"check": c, "ok": ok, "detail": d} for c, ok, d in self.checks],
        }


def _side_conditions(cert: GenerationCertificate, env: Mapping[str, HoughtonElement]):
    """Yield (check, ok, detail) for the family's generation criteria."""
    spec, side = cert.spec, cert.side_conditions
    n, v = spec.n, spec.v

    def get(key):
        name = side.get(key)
        if not isinstance(name, str) or name not in env:
            return None
        return env[name]

    yield "fixed_generator", side.get("fixed") == spec.fixed_label, f"fixed label {side.get('fixed')!r}"
    if spec.family in (Family.H2_SIZE3, Family.H2_SIZE2):
        tau = get("two_cycle")
        yield "two_cycle", tau == _cycle(2, (1, 1), (1, 2)), "witnessed (0 1) together with t"
        return

    names = side.get("translation_set")
    hs = [env.get(x) for x in names] if isinstance(names, list) and len(names) == n - 1 else None
    step = v if spec.family is Family.UV else 1
    ok = hs is not None and all(
        h is not None and h.tvec == power(standard_generator(n, i), step).tvec for i, h in zip(range(2, n + 1), hs))
    yield "translation_equivalence", ok, f"h_2..h_{n} match the translations of g_i^{step}"
    if not ok:
        return
    h2 = hs[0]

    if spec.family is Family.HN:
        tau = get("two_cycle")
        pts = sorted(tau._table) if tau is not None and tau.is_finitary() else []
        adj = (cycle_type(tau) == (2,) and pts[0][0] == pts[1][0] == 1 and pts[1][1] == pts[0][1] + 1
               and pts[0][1] >= h2.thresholds[0]) if pts else False
        yield "two_cycle_adjacent", adj, f"adjacent 2-cycle on R_1 at or beyond z_1(h_2)={h2.thresholds[0]}"
        return

    shape = all(tails_agree(h, power(standard_generator(n, i), v)) for i, h in zip(range(2, n), hs))
    yield "h_shape", shape, "h_2..h_(n-1) follow the orbits of g_i^v"
    p = side.get("omega_offset")
    names = side.get("falt_generators")
    gens = [env.get(x) for x in names] if isinstance(names, list) else []
    ok = (isinstance(p, int) and p % (2 * v) == 0 and p >= h2.thresholds[0] and gens
          and all(g is not None and g.is_finitary() for g in gens))
    if ok:
        block = [(1, p + r) for r in range(1, 2 * v + 1)]
        index = {x: k for k, x in enumerate(block)}
        ok = all(x in index for g in gens for x in g._table)
    order = 0
    if ok:
        perms = [tuple(index[g.image(x)] for x in block) for g in gens]
        order = group_order(perms, 2 * v)
    want = math.factorial(2 * v) // 2
    yield "falt_generation", bool(ok) and order == want, f"order {order} of the witnessed group on Omega_S', need {want}"


def check_certificate(cert: GenerationCertificate, ct: ConjugateTuple) -> CertificateReport:
    checks: list[tuple[str, bool, str]] = []

    def finish() -> CertificateReport:
        failed = next((c for c, ok, _ in checks if not ok), None)
        return CertificateReport(failed is None, failed, checks)

    try:
        if cert.spec != ct.spec:
            raise InvalidInput(f"certificate is for {cert.spec}, input is {ct.spec}")
        validate_tuple(ct)
        checks.append(("inputs", True, "input tuple is a valid conjugate tuple"))
    except (InvalidInput, ValueError) as exc:
        checks.append(("inputs", False, str(exc)))
        return finish()

    env = dict(ct.assignment)
    cache: dict = {}
    for wit in cert.witnesses:
        label = f"witness:{wit.name}"
        if wit.name in env:
            checks.append((label, False, "name shadows an input or earlier witness"))
            return finish()
        try:
            ok = evaluate_word(wit.word, env, wit.claim.n, cache) == wit.claim
            detail = "word evaluates to the claim" if ok else "word does not evaluate to the claim"
        except ValueError as exc:
            ok, detail = False, str(exc)
        checks.append((label, ok, detail))
        if not ok:
            return finish()
        env[wit.name] = wit.claim
    for check in _side_conditions(cert, env):
        checks.append(check)
        if not check[1]:
            break
    return finish()


RECOVERERS = {
    Family.H2_SIZE3: recover_h2_size3,
    Family.H2_SIZE2: recover_h2_size2,
    Family.HN: recover_hn,
    Family.UV: recover_uv,
}


def recover(ct: ConjugateTuple) -> GenerationCertificate:
    return RECOVERERS[ct.spec.family](ct)
