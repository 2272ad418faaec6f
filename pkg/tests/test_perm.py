import pytest

from houghton.errors import BadPoint, InfiniteSupport, MismatchedN, NonZeroTranslationSum, NotBijective, TvecMismatch
from houghton.groups import sigma2, standard_generator, z_s, z_to_x2
from houghton.perm import (
    HoughtonElement,
    apply,
    commutator,
    compose,
    conjugate,
    construct,
    cycle_decomposition,
    cycle_type,
    eventual_agreement_bound,
    finite_support,
    fixed_points_in_window,
    invert,
    orbit_descriptor,
    parity,
    power,
    regular_threshold,
    solve_power,
)

from oracle import agrees, cycles, g, g_inv, then

I3 = HoughtonElement.identity(3)
G2, G3 = standard_generator(3, 2), standard_generator(3, 3)


def test_construct_identity_and_g2():
    assert construct(3, (0, 0, 0), {}) == I3
    assert construct(3, (1, -1, 0), {(2, 1): (1, 1)}) == G2


def test_construct_rejects_nonzero_sum():
    with pytest.raises(NonZeroTranslationSum):
        construct(2, (1, 0), {})


def test_construct_rejects_non_bijection():
    with pytest.raises(NotBijective):
        construct(2, (0, 0), {(1, 1): (1, 2)})
    with pytest.raises(BadPoint):
        construct(2, (0, 0), {(3, 1): (3, 1)})


def test_normal_form_drops_regular_entries():
    a = construct(3, (1, -1, 0), {(2, 1): (1, 1), (1, 4): (1, 5), (2, 7): (2, 6)})
    assert a == G2
    assert hash(a) == hash(G2)
    assert a.exceptions == ((( 2, 1), (1, 1)),)


def test_apply_examples():
    assert apply(G2, (1, 5)) == (1, 6)
    assert apply(I3, (3, 7)) == (3, 7)
    assert apply(invert(G3), (1, 1)) == (3, 1)


def test_generators_match_pointwise_oracle():
    for n in (2, 3, 5):
        for k in range(2, n + 1):
            assert agrees(standard_generator(n, k), g(k), n)
            assert agrees(invert(standard_generator(n, k)), g_inv(k), n)


def test_compose_matches_oracle():
    assert agrees(compose(G2, G3), then(g(2), g(3)), 3)
    assert agrees(compose(G3, invert(G2)), then(g(3), g_inv(2)), 3)
    word = compose(compose(G2, G2), compose(invert(G3), G2))
    assert agrees(word, then(g(2), g(2), g_inv(3), g(2)), 3)


def test_compose_tvec_additive():
    assert compose(G3, G2).tvec == (2, -1, -1)


def test_inverse_examples():
    assert compose(G2, invert(G2)) == I3
    assert invert(I3) == I3
    inv = invert(G2)
    assert inv.image((1, 1)) == (2, 1)
    assert inv.image((1, 7)) == (1, 6)
    tau = HoughtonElement.from_cycles(3, [[(1, 1), (2, 1)]])
    assert invert(tau) == tau


def test_commutator_is_two_cycle():
    c = commutator(G2, G3)
    assert cycle_type(c) == (2,)
    assert parity(c) == "odd"
    assert len(finite_support(c)) == 2
    ref = then(g(2), g(3), g_inv(2), g_inv(3))
    assert agrees(c, ref, 3)


def test_conjugate_examples():
    sigma = HoughtonElement.from_cycles(3, [[(1, 2), (3, 4), (2, 1)]])
    assert conjugate(sigma, I3) == sigma
    assert conjugate(G2, G2) == G2
    tau = HoughtonElement.from_cycles(3, [[(1, 3), (2, 2)]])
    c = compose(G3, G2)
    assert conjugate(tau, c) == HoughtonElement.from_cycles(3, [[c.image((1, 3)), c.image((2, 2))]])
    # c^-1 g c means: undo c, apply g, redo c
    assert agrees(conjugate(G2, G3), then(g_inv(3), g(2), g(3)), 3)


def test_finite_support():
    assert finite_support(I3) == frozenset()
    with pytest.raises(InfiniteSupport):
        finite_support(G2)


def test_cycle_decomposition():
    assert cycle_decomposition(I3) == []
    s2 = sigma2(3, 4)
    assert cycle_decomposition(s2) == [((1, 1), (1, 2)), tuple((1, m) for m in range(3, 9))]
    a, b, c = (1, 1), (2, 3), (3, 2)
    prod = compose(HoughtonElement.from_cycles(3, [[a, b]]), HoughtonElement.from_cycles(3, [[a, c]]))
    assert cycle_type(prod) == (3,)
    assert agrees(prod, then(cycles([a, b]), cycles([a, c])), 3)


def test_parity():
    assert parity(HoughtonElement.from_cycles(2, [[(1, 1), (1, 2), (2, 5)]])) == "even"
    s = z_to_x2(z_s())
    t = standard_generator(2, 2)
    assert parity(compose(s, invert(t))) == "odd"


def test_regular_threshold():
    assert regular_threshold(I3, 2) == 1
    assert regular_threshold(G2, 2) == 2
    assert regular_threshold(G2, 3) == 1
    with pytest.raises(BadPoint):
        regular_threshold(G2, 4)


def test_fixed_points_of_s():
    s = z_to_x2(z_s())
    fp = fixed_points_in_window(s)
    # Z-coordinates 1, 2, 3 are (1,2), (1,3), (1,4)
    assert fp.points == frozenset({(1, 2), (1, 3), (1, 4)})
    assert fp.cofinite_rays == ()
    assert fixed_points_in_window(I3).is_everything


def test_solve_power_examples():
    t = standard_generator(2, 2)
    # Z-coordinate 3 is (1,4) and 10 is (1,11)
    assert solve_power(t, (1, 4), (1, 11)) == 7
    assert solve_power(G2, (2, 5), (1, 3)) == 7
    assert solve_power(G2, (1, 3), (2, 5)) == -7
    assert solve_power(G2, (3, 1), (1, 1)) is None
    assert solve_power(G2, (1, 1), (3, 1)) is None


def test_solve_power_finite_cycle_prefers_small_and_positive():
    c = HoughtonElement.from_cycles(2, [[(1, m) for m in range(1, 7)]])
    assert solve_power(c, (1, 1), (1, 3)) == 2
    assert solve_power(c, (1, 1), (1, 5)) == -2
    assert solve_power(c, (1, 1), (1, 4)) == 3


def test_orbit_descriptor_of_g2_power():
    v = 4
    f = power(standard_generator(3, 2), 2 * v)
    for r in range(1, 2 * v + 1):
        d = orbit_descriptor(f, (1, 50 * 2 * v + r))
        assert d.kind == "infinite"
        assert d.forward == (1, r)
        assert d.backward == (2, 2 * v + 1 - r)
    assert orbit_descriptor(I3, (2, 9)).cycle == ((2, 9),)
    assert orbit_descriptor(f, (3, 4)).kind == "finite"


def test_eventual_agreement_bound():
    assert eventual_agreement_bound(I3, I3) == 1
    assert eventual_agreement_bound(G2, G2) == 1 + 2
    with pytest.raises(TvecMismatch):
        eventual_agreement_bound(G2, G3)
    with pytest.raises(MismatchedN):
        eventual_agreement_bound(G2, standard_generator(2, 2))


def test_json_roundtrip():
    x = compose(conjugate(G2, G3), HoughtonElement.from_cycles(3, [[(1, 1), (3, 3)]]))
    assert HoughtonElement.from_json(x.to_json()) == x
