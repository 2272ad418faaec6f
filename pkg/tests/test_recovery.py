import time

import pytest

from houghton.adversary import SamplerParams, make_scenario
from houghton.errors import InvalidInput, NotEven, PreconditionViolated, SupportOutsideOmega
from houghton.groups import Family, GeneratingSetSpec, generating_set, sigma1, sigma2, standard_generator
from houghton.perm import HoughtonElement, compose, conjugate, cycle_type, power
from houghton.recovery import (
    ConjugateTuple,
    check_certificate,
    decompose_block_perm,
    produce_3cycle,
    realize_block_permutation,
    recover,
    uv_block_context,
    validate_tuple,
)
from houghton.recovery import _bp_eval, _bp_sigma, _bp_mul
from houghton.words import verify_witness

from oracle import cycles, g, g_inv

G2 = standard_generator(3, 2)


def _identity_tuple(spec):
    return ConjugateTuple(spec, generating_set(spec))


def _passes(ct):
    cert = recover(ct)
    rep = check_certificate(cert, ct)
    assert rep.passed, rep.first_failure
    return cert


def _eval_oracle(word, maps):
    def f(x):
        for label, k in word.letters:
            step = maps[label] if k > 0 else maps[label + "^-1"]
            for _ in range(abs(k)):
                x = step(x)
        return x
    return f


# --- produce_3cycle -------------------------------------------------------------

def test_three_cycle_from_adjacent_transposition():
    tau = HoughtonElement.from_cycles(3, [[(1, 1), (1, 2)]])
    wit = produce_3cycle(G2, tau)
    assert verify_witness(wit, {"f": G2, "sigma": tau})
    assert wit.claim == HoughtonElement.from_cycles(3, [[(1, 1), (1, 2), (1, 3)]])
    # independent evaluation of the word
    ref = _eval_oracle(wit.word, {"f": g(2), "f^-1": g_inv(2),
                                  "sigma": cycles([(1, 1), (1, 2)]), "sigma^-1": cycles([(1, 1), (1, 2)])})
    assert all(wit.claim.image((1, m)) == ref((1, m)) for m in range(1, 30))


def test_three_cycle_early_exit():
    c = HoughtonElement.from_cycles(3, [[(1, 4), (1, 6), (1, 5)]])
    wit = produce_3cycle(G2, c)
    assert str(wit.word) == "sigma"
    assert wit.claim == c


def test_three_cycle_from_double_transposition():
    sigma = HoughtonElement.from_cycles(3, [[(1, 1), (1, 2)], [(1, 3), (1, 5)]])
    wit = produce_3cycle(G2, sigma)
    assert cycle_type(wit.claim) == (3,)
    ref = _eval_oracle(wit.word, {"f": g(2), "f^-1": g_inv(2),
                                  "sigma": cycles([(1, 1), (1, 2)], [(1, 3), (1, 5)]),
                                  "sigma^-1": cycles([(1, 1), (1, 2)], [(1, 3), (1, 5)])})
    assert all(wit.claim.image((i, m)) == ref((i, m)) for i in (1, 2, 3) for m in range(1, 30))


def test_three_cycle_precondition():
    with pytest.raises(PreconditionViolated):
        produce_3cycle(G2, HoughtonElement.from_cycles(3, [[(1, 1), (2, 2)]]))


# --- identity conjugators ----------------------------------------------------------

@pytest.mark.parametrize("spec", [
    GeneratingSetSpec(Family.H2_SIZE3, 2),
    GeneratingSetSpec(Family.H2_SIZE2, 2),
    GeneratingSetSpec(Family.HN, 3),
    GeneratingSetSpec(Family.HN, 5),
    GeneratingSetSpec(Family.UV, 2, 4),
    GeneratingSetSpec(Family.UV, 3, 4),
    GeneratingSetSpec(Family.UV, 4, 6),
])
def test_identity_conjugators_pass(spec):
    _passes(_identity_tuple(spec))


def test_hn_identity_recovers_standard_generators():
    cert = _passes(_identity_tuple(GeneratingSetSpec(Family.HN, 3)))
    assert cert.witness("result.h_2").claim == standard_generator(3, 2)
    assert cert.witness("result.h_3").claim == standard_generator(3, 3)


def test_uv_identity_recovers_powers():
    cert = _passes(_identity_tuple(GeneratingSetSpec(Family.UV, 3, 4)))
    assert cert.witness("result.h_2").claim == power(standard_generator(3, 2), 4)
    assert cert.witness("result.h_3").claim == power(standard_generator(3, 3), 4)
    assert len(cert.side_conditions["falt_generators"]) == 2 * 4 - 2


# --- seeded adversaries ----------------------------------------------------------

@pytest.mark.parametrize("family,n,v", [("h2s3", 2, 0), ("h2s2", 2, 0), ("hn", 3, 0), ("hn", 4, 0),
                                        ("uv", 2, 4), ("uv", 3, 6)])
def test_seeded_recoveries(family, n, v):
    spec = GeneratingSetSpec(family, n, v)
    for seed in range(5):
        sc = make_scenario(spec, seed)
        ct = ConjugateTuple(spec, sc.assignment, sc.conjugators)
        cert = _passes(ct)
        env = dict(sc.assignment)
        for entry in cert.trace.entries:
            assert verify_witness(entry.witness, env)
            env[entry.witness.name] = entry.witness.claim


def test_h2s3_seed1_long_words():
    spec = GeneratingSetSpec(Family.H2_SIZE3, 2)
    _passes(ConjugateTuple(spec, make_scenario(spec, 1, SamplerParams(8, 4, 1)).assignment))


def test_h2s2_self_conjugation():
    spec = GeneratingSetSpec(Family.H2_SIZE2, 2)
    sc = make_scenario(spec, 3)
    s1 = sc.assignment["s"]
    _passes(ConjugateTuple(spec, {"t": sc.assignment["t"], "s": conjugate(s1, s1)}))


def test_hn_large_window_stress():
    spec = GeneratingSetSpec(Family.HN, 4)
    sc = make_scenario(spec, 0, SamplerParams(6, 200, 0))
    start = time.perf_counter()
    _passes(ConjugateTuple(spec, sc.assignment))
    elapsed = time.perf_counter() - start
    print(f"hn n=4 window=200 recover+check: {elapsed:.1f}s")
    assert elapsed < 60


def test_recovery_does_not_read_conjugators():
    spec = GeneratingSetSpec(Family.HN, 3)
    sc = make_scenario(spec, 4)
    a = recover(ConjugateTuple(spec, sc.assignment, sc.conjugators)).dumps(True)
    b = recover(ConjugateTuple(spec, sc.assignment)).dumps(True)
    assert a == b


# --- invalid inputs --------------------------------------------------------------

def test_invalid_tvec():
    spec = GeneratingSetSpec(Family.H2_SIZE3, 2)
    gens = generating_set(spec)
    gens["t"] = power(gens["t"], 2)
    with pytest.raises(InvalidInput):
        recover(ConjugateTuple(spec, gens))


def test_invalid_labels_and_fixed():
    spec = GeneratingSetSpec(Family.HN, 3)
    gens = generating_set(spec)
    with pytest.raises(InvalidInput):
        validate_tuple(ConjugateTuple(spec, {"g2": gens["g2"]}))
    moved = dict(gens, h=conjugate(gens["h"], HoughtonElement.from_cycles(3, [[(1, 1), (2, 1)]])))
    with pytest.raises(InvalidInput):
        validate_tuple(ConjugateTuple(spec, moved))


def test_uv_sigma1_wrong_shape():
    spec = GeneratingSetSpec(Family.UV, 3, 4)
    gens = generating_set(spec)
    gens["sigma1"] = HoughtonElement.from_cycles(3, [[(1, 1), (1, 2)]])
    with pytest.raises(InvalidInput):
        recover(ConjugateTuple(spec, gens))


def test_uv_conjugate_outside_uv_rejected():
    spec = GeneratingSetSpec(Family.UV, 3, 4)
    gens = generating_set(spec)
    # conjugating by g_2 (not in U_4) keeps the cycle type but leaves U_4
    gens["g2_2v_sigma1"] = compose(gens["g2_2v_sigma1"], HoughtonElement.from_cycles(3, [[(3, 1), (3, 2)]]))
    with pytest.raises(InvalidInput):
        recover(ConjugateTuple(spec, gens))


# --- block permutations ---------------------------------------------------------

def test_decompose_block_perm_roundtrip():
    for v in (4, 6):
        target = _bp_mul(_bp_sigma(1, v), _bp_sigma(2, v))
        target = _bp_mul(target, target)
        assert _bp_eval(decompose_block_perm(target, v), v) == target
        cyc = {x: x for x in range(1, 2 * v + 1)}
        cyc.update({2: 7, 7: 5, 5: 2})
        assert _bp_eval(decompose_block_perm(cyc, v), v) == cyc


@pytest.fixture(scope="module")
def ctx34():
    spec = GeneratingSetSpec(Family.UV, 3, 4)
    return uv_block_context(ConjugateTuple(spec, make_scenario(spec, 1).assignment))


def test_block_identity_is_empty_word(ctx34):
    wit = realize_block_permutation(HoughtonElement.identity(3), 2, ctx34)
    assert len(wit.word) == 0


def test_block_sigma1_on_first_block(ctx34):
    p = ctx34.p
    wit = realize_block_permutation(sigma1(3), 0, ctx34)
    assert verify_witness(wit, ctx34.builder.env)
    ref = conjugate(sigma1(3), power(G2, p))
    for r in range(1, 9):
        assert wit.claim.image((1, p + r)) == ref.image((1, p + r))
    assert ref.image((1, p + 1)) == (1, p + 2)


def test_block_product_on_three_blocks(ctx34):
    v, p = 4, ctx34.p
    sigma = compose(sigma1(3), sigma2(3, v))
    wit = realize_block_permutation(sigma, 2, ctx34)
    assert verify_witness(wit, ctx34.builder.env)
    checked = 0
    for i in range(3):
        pattern = {r: sigma.image((1, r))[1] for r in range(1, 2 * v + 1)}
        for r in range(1, 2 * v + 1):
            assert wit.claim.image((1, p + 2 * v * i + r)) == (1, p + 2 * v * i + pattern[r])
            checked += 1
    assert checked == 24


def test_block_errors(ctx34):
    with pytest.raises(NotEven):
        realize_block_permutation(HoughtonElement.from_cycles(3, [[(1, 1), (1, 2)]]), 0, ctx34)
    with pytest.raises(SupportOutsideOmega):
        realize_block_permutation(HoughtonElement.from_cycles(3, [[(1, 1), (1, 2), (1, 9)]]), 0, ctx34)
    with pytest.raises(PreconditionViolated):
        realize_block_permutation(sigma1(3), -1, ctx34)
