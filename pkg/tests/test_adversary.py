import pytest

from houghton.adversary import SamplerParams, Scenario, make_scenario, sample_element
from houghton.errors import BadParams
from houghton.groups import Family, GeneratingSetSpec, generating_set, is_member_Uv
from houghton.perm import HoughtonElement, conjugate
from houghton.recovery import ConjugateTuple, validate_tuple

UV34 = GeneratingSetSpec(Family.UV, 3, 4)
HN3 = GeneratingSetSpec(Family.HN, 3)


def test_empty_sampler_gives_identity():
    assert sample_element(HN3, SamplerParams(0, 0, 5)) == HoughtonElement.identity(3)


def test_bad_params():
    with pytest.raises(BadParams):
        SamplerParams(-1, 3)


def test_uv_samples_are_members():
    for seed in range(1000):
        assert is_member_Uv(sample_element(UV34, SamplerParams(seed=seed)), 4)


def test_sampling_is_deterministic():
    p = SamplerParams(8, 6, 42)
    assert sample_element(HN3, p) == sample_element(HN3, p)


def test_scenario_invariants():
    sc = make_scenario(HN3, 0)
    validate_tuple(ConjugateTuple(HN3, sc.assignment))
    originals = generating_set(HN3)
    assert sc.conjugators["h"].is_identity()
    for label, g in originals.items():
        assert sc.assignment[label] == conjugate(g, sc.conjugators[label])
        assert sc.assignment[label].tvec == g.tvec


def test_uv_conjugators_in_uv():
    sc = make_scenario(UV34, 7)
    assert all(is_member_Uv(c, 4) for c in sc.conjugators.values())
    validate_tuple(ConjugateTuple(UV34, sc.assignment))


def test_scenario_roundtrip_and_reproducible():
    for spec in (HN3, UV34, GeneratingSetSpec(Family.H2_SIZE2, 2)):
        a, b = make_scenario(spec, 3), make_scenario(spec, 3)
        assert a.dumps() == b.dumps()
        import json
        assert Scenario.from_json(json.loads(a.dumps())).dumps() == a.dumps()
    assert make_scenario(HN3, 3).dumps() != make_scenario(HN3, 4).dumps()


def test_conjugators_are_varied():
    spec = GeneratingSetSpec(Family.HN, 4)
    big_t = full = False
    for seed in range(100):
        c = make_scenario(spec, seed).conjugators["g2"]
        big_t |= max(abs(t) for t in c.tvec) >= 3
        full |= len(c.exceptions) >= 8
    assert big_t and full
