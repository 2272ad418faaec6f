"""The nine acceptance criteria as runnable checks.

Shared by ``tests/test_acceptance.py`` and ``houghton selftest``.  Each
criterion returns a :class:`Criterion` with a pass flag and a one-line detail;
``scale`` < 1 shrinks the sample counts for quick runs.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Callable

from .adversary import SamplerParams, make_scenario, random_finitary, sample_element
from .errors import BadSpec
from .groups import Family, GeneratingSetSpec, standard_generator
from .perm import (
    HoughtonElement,
    compose,
    conjugate,
    cycle_type,
    eventual_agreement_bound,
    eventual_agreement_index,
    invert,
    parity,
    power,
)
from .recovery import (
    ConjugateTuple,
    check_certificate,
    produce_3cycle,
    realize_block_permutation,
    recover,
    uv_block_context,
)
from .words import GenerationCertificate, Witness, Word, evaluate_word, verify_witness

# limits pinned from the acceptance criteria
ALGEBRA_TRIPLES = 10_000
ALGEBRA_SECONDS = 30.0
THREE_CYCLE_PAIRS = 500
H2_SEEDS, H2_SECONDS = 200, 1.0
HN_SEEDS, HN_SECONDS, HN_RANKS = 100, 5.0, (3, 4, 5)
UV_SEEDS, UV_SECONDS, UV_CASES = 50, 30.0, ((2, 4), (3, 4), (3, 6), (4, 4))
AGREEMENT_PAIRS, AGREEMENT_PROBES = 200, 20
BLOCK_CASES = 100


@dataclass
class Criterion:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _count(full: int, scale: float) -> int:
    return max(1, int(round(full * scale)))


def _timed(number: int, title: str, body: Callable[[], tuple[bool, str]]) -> Criterion:
    t0 = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return Criterion(number, title, ok, detail, time.perf_counter() - t0)


def _recover_and_check(spec: GeneratingSetSpec, seed: int) -> tuple[bool, float, GenerationCertificate, str]:
    sc = make_scenario(spec, seed)
    ct = ConjugateTuple(spec, sc.assignment)
    t0 = time.perf_counter()
    cert = recover(ct)
    report = check_certificate(cert, ct)
    return report.passed, time.perf_counter() - t0, cert, report.first_failure or ""


# 1 -------------------------------------------------------------------------------

def algebra_suite(scale: float = 1.0) -> Criterion:
    def body():
        triples = _count(ALGEBRA_TRIPLES, scale)
        failures = 0
        params = SamplerParams(max_word_length=4, window=3)
        t0 = time.perf_counter()
        for n in (2, 3, 4):
            spec = GeneratingSetSpec(Family.HN if n > 2 else Family.H2_SIZE2, n)
            rng = random.Random(f"algebra:{n}")
            ident = HoughtonElement.identity(n)
            for _ in range(triples):
                a, b, c = (sample_element(spec, params, rng) for _ in range(3))
                ab = compose(a, b)
                ok = compose(ab, c) == compose(a, compose(b, c))
                ok &= compose(a, invert(a)) == ident and compose(ident, a) == a
                ok &= ab.tvec == tuple(x + y for x, y in zip(a.tvec, b.tvec))
                s, t = random_finitary(n, 3, rng), random_finitary(n, 3, rng)
                ok &= (parity(compose(s, t)) == "even") == (parity(s) == parity(t))
                ok &= cycle_type(conjugate(s, a)) == cycle_type(s)
                failures += not ok
        elapsed = time.perf_counter() - t0
        ok = failures == 0 and elapsed < ALGEBRA_SECONDS
        return ok, f"{3 * triples} triples, {failures} failures, {elapsed:.1f}s (limit {ALGEBRA_SECONDS:.0f}s)"
    return _timed(1, "group laws, tvec additivity, parity, cycle-type invariance", body)


# 2 -------------------------------------------------------------------------------

def three_cycle_suite(scale: float = 1.0) -> Criterion:
    def body():
        pairs = _count(THREE_CYCLE_PAIRS, scale)
        rng = random.Random("three-cycle")
        failures = 0
        for k in range(pairs):
            n = 2 + k % 3
            spec = GeneratingSetSpec(Family.HN if n > 2 else Family.H2_SIZE2, n)
            f = conjugate(standard_generator(n, 2 + k % (n - 1)), sample_element(spec, SamplerParams(), rng))
            z1 = f.thresholds[0]
            pts = [(1, z1 + j) for j in range(8)]
            chosen = rng.sample(pts, rng.randint(2, 8))
            img = chosen[:]
            while img == chosen:
                rng.shuffle(img)
            sigma = HoughtonElement._normalized(n, (0,) * n, dict(zip(chosen, img)))
            wit = produce_3cycle(f, sigma)
            ok = verify_witness(wit, {"f": f, "sigma": sigma}) and cycle_type(wit.claim) == (3,)
            ok &= wit.word.labels() <= {"f", "sigma"}
            failures += not ok
        return failures == 0, f"{pairs} pairs, {failures} failures"
    return _timed(2, "produce_3cycle yields verified 3-cycles", body)


# 3-5 -----------------------------------------------------------------------------

def _recovery_sweep(specs, seeds: int, limit: float) -> tuple[bool, str]:
    failed, slow, worst, runs = [], 0, 0.0, 0
    for spec in specs:
        for seed in range(seeds):
            ok, secs, _, why = _recover_and_check(spec, seed)
            runs += 1
            worst = max(worst, secs)
            slow += secs >= limit
            if not ok:
                failed.append(f"{spec.family.value}/n={spec.n}/v={spec.v}/seed={seed}:{why}")
    detail = f"{runs - len(failed)}/{runs} certificates pass, worst {worst:.3f}s (limit {limit:g}s)"
    if failed:
        detail += f"; first failure {failed[0]}"
    return not failed and slow == 0, detail


def h2_suite(scale: float = 1.0) -> Criterion:
    specs = [GeneratingSetSpec(Family.H2_SIZE3, 2), GeneratingSetSpec(Family.H2_SIZE2, 2)]
    return _timed(3, "H_2 recoveries (size 3 and size 2)",
                  lambda: _recovery_sweep(specs, _count(H2_SEEDS, scale), H2_SECONDS))


def hn_suite(scale: float = 1.0) -> Criterion:
    specs = [GeneratingSetSpec(Family.HN, n) for n in HN_RANKS]
    return _timed(4, "H_n recoveries, n in {3,4,5}",
                  lambda: _recovery_sweep(specs, _count(HN_SEEDS, scale), HN_SECONDS))


def uv_suite(scale: float = 1.0) -> Criterion:
    def body():
        specs = [GeneratingSetSpec(Family.UV, n, v) for n, v in UV_CASES]
        ok, detail = _recovery_sweep(specs, _count(UV_SEEDS, scale), UV_SECONDS)
        # the checker's closure order, reported explicitly
        orders = []
        for spec in specs:
            _, _, cert, _ = _recover_and_check(spec, 0)
            sc = make_scenario(spec, 0)
            rep = check_certificate(cert, ConjugateTuple(spec, sc.assignment))
            line = next(d for c, _, d in rep.checks if c == "falt_generation")
            want = math.factorial(2 * spec.v) // 2
            orders.append(f"v={spec.v}:{line.split()[1]}")
            ok &= f"order {want} " in line
        return ok, detail + "; FAlt(Omega_S') orders " + ", ".join(orders)
    return _timed(5, "U_v recoveries with FAlt(Omega_S') closure", body)


# 6 -------------------------------------------------------------------------------

def agreement_suite(scale: float = 1.0) -> Criterion:
    def body():
        pairs = _count(AGREEMENT_PAIRS, scale)
        rng = random.Random("agreement")
        failures = 0
        for k in range(pairs):
            n = 2 + k % 3
            spec = GeneratingSetSpec(Family.HN if n > 2 else Family.H2_SIZE2, n)
            g = sample_element(spec, SamplerParams(), rng)
            h = conjugate(g, random_finitary(n, rng.randint(1, 6), rng))
            d = eventual_agreement_bound(g, h)
            for _ in range(AGREEMENT_PROBES):
                x = (rng.randint(1, n), d + rng.randint(0, 40))
                e = eventual_agreement_index(g, h, x)
                if e is None:
                    failures += 1
                    continue
                # spot-check the contract for the next steps beyond e
                a, b = iterate_pair(g, h, x, e)
                for _ in range(5):
                    if a != b:
                        failures += 1
                        break
                    a, b = g.image(a), h.image(b)
        return failures == 0, f"{pairs} pairs x {AGREEMENT_PROBES} probes, {failures} failures"
    return _timed(6, "eventual agreement of FSym-conjugates beyond the bound", body)


def iterate_pair(g: HoughtonElement, h: HoughtonElement, x, k: int):
    a = b = x
    for _ in range(k):
        a, b = g.image(a), h.image(b)
    return a, b


# 7 -------------------------------------------------------------------------------

def block_suite(scale: float = 1.0) -> Criterion:
    def body():
        cases = _count(BLOCK_CASES, scale)
        rng = random.Random("blocks")
        contexts = {}
        failures = 0
        points = 0
        for k in range(cases):
            v = (4, 6)[k % 2]
            seed = k % 5
            if (v, seed) not in contexts:
                spec = GeneratingSetSpec(Family.UV, 3, v)
                contexts[v, seed] = uv_block_context(ConjugateTuple(spec, make_scenario(spec, seed).assignment))
            ctx = contexts[v, seed]
            d = rng.randint(0, 3)
            img = list(range(1, 2 * v + 1))
            rng.shuffle(img)
            perm = dict(zip(range(1, 2 * v + 1), img))
            sigma = HoughtonElement._normalized(3, (0, 0, 0), {(1, r): (1, s) for r, s in perm.items()})
            if parity(sigma) == "odd":
                sigma = compose(sigma, HoughtonElement.from_cycles(3, [[(1, 1), (1, 2)]]))
            wit = realize_block_permutation(sigma, d, ctx)
            ok = verify_witness(wit, ctx.builder.env)
            g2 = standard_generator(3, 2)
            for i in range(d + 1):
                oracle = conjugate(sigma, power(g2, ctx.p + 2 * v * i))
                for r in range(1, 2 * v + 1):
                    x = (1, ctx.p + 2 * v * i + r)
                    ok &= wit.claim.image(x) == oracle.image(x)
                    points += 1
            failures += not ok
        return failures == 0, f"{cases} cases, {points} block points checked, {failures} failures"
    return _timed(7, "block permutations act as sigma on every block", body)


# 8 -------------------------------------------------------------------------------

def _tamper(cert: GenerationCertificate, index: int, wit: Witness) -> GenerationCertificate:
    wits = list(cert.witnesses)
    wits[index] = wit
    return GenerationCertificate(cert.spec, wits, dict(cert.side_conditions))


def negative_controls(scale: float = 1.0) -> Criterion:
    def body():
        results = []
        spec = GeneratingSetSpec(Family.HN, 3)
        ct = ConjugateTuple(spec, make_scenario(spec, 0).assignment)
        cert = recover(ct)
        idx = next(i for i, w in enumerate(cert.witnesses) if len(w.word) >= 2)
        w = cert.witnesses[idx]
        cut = _tamper(cert, idx, Witness(w.name, Word(w.word.letters[:-1]), w.claim))
        rep = check_certificate(cut, ct)
        results.append(("truncated word", rep.first_failure, f"witness:{w.name}"))

        far = HoughtonElement.from_cycles(3, [[(3, 1000), (3, 1001)]])
        bad = _tamper(cert, idx, Witness(w.name, w.word, compose(w.claim, far)))
        rep = check_certificate(bad, ct)
        results.append(("altered claim", rep.first_failure, f"witness:{w.name}"))

        uspec = GeneratingSetSpec(Family.UV, 3, 4)
        uct = ConjugateTuple(uspec, make_scenario(uspec, 0).assignment)
        ucert = recover(uct)
        name = ucert.side_conditions["translation_set"][0]
        j = next(i for i, x in enumerate(ucert.witnesses) if x.name == name)
        wrong = Word.of("h")
        shifted = _tamper(ucert, j, Witness(name, wrong, evaluate_word(wrong, uct.assignment)))
        rep = check_certificate(shifted, uct)
        results.append(("wrong tvec", rep.first_failure, "translation_equivalence"))

        try:
            GeneratingSetSpec(Family.UV, 3, 2)
            v2 = "accepted"
        except BadSpec:
            v2 = "rejected"
        ok = all(got == want for _, got, want in results) and v2 == "rejected"
        detail = "; ".join(f"{k} -> {got}" for k, got, _ in results) + f"; v=2 {v2}"
        return ok, detail
    return _timed(8, "tampered certificates rejected with the right label", body)


# 9 -------------------------------------------------------------------------------

def determinism(scale: float = 1.0) -> Criterion:
    def body():
        cases = [GeneratingSetSpec(Family.H2_SIZE2, 2), GeneratingSetSpec(Family.HN, 4),
                 GeneratingSetSpec(Family.UV, 3, 4)]
        same = 0
        for spec in cases:
            a = make_scenario(spec, 11).dumps(), _cert_bytes(spec, 11)
            b = make_scenario(spec, 11).dumps(), _cert_bytes(spec, 11)
            same += a == b
        return same == len(cases), f"{same}/{len(cases)} scenario+certificate pairs byte-identical"
    return _timed(9, "determinism of adversary and recovery output", body)


def _cert_bytes(spec: GeneratingSetSpec, seed: int) -> str:
    ct = ConjugateTuple(spec, make_scenario(spec, seed).assignment)
    return recover(ct).dumps(include_trace=True)


CRITERIA = (algebra_suite, three_cycle_suite, h2_suite, hn_suite, uv_suite,
            agreement_suite, block_suite, negative_controls, determinism)


def run_all(scale: float = 1.0, echo: Callable[[str], None] | None = None) -> list[Criterion]:
    out = []
    for crit in CRITERIA:
        res = crit(scale)
        out.append(res)
        if echo is not None:
            echo(res.line())
    return out
