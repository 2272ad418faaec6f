from hypothesis import given, settings, strategies as st

from houghton.groups import standard_generator
from houghton.perm import (
    HoughtonElement,
    compose,
    conjugate,
    cycle_type,
    eventual_agreement_bound,
    eventual_agreement_index,
    invert,
    iterate,
    orbit_descriptor,
    parity,
    power,
    solve_power,
)
from houghton.words import Word, evaluate_word

from oracle import window

N = 3


@st.composite
def elements(draw, n=N):
    g = HoughtonElement.identity(n)
    for _ in range(draw(st.integers(0, 6))):
        k = draw(st.integers(2, n))
        g = compose(g, power(standard_generator(n, k), draw(st.sampled_from([-1, 1]))))
    pts = [(i, m) for i in range(1, n + 1) for m in range(1, 6)]
    img = draw(st.permutations(pts))
    return compose(g, HoughtonElement._normalized(n, (0,) * n, dict(zip(pts, img))))


@st.composite
def finitary(draw, n=N):
    pts = [(i, m) for i in range(1, n + 1) for m in range(1, 5)]
    img = draw(st.permutations(pts))
    return HoughtonElement._normalized(n, (0,) * n, dict(zip(pts, img)))


def _naive(g, h, x):
    return h.image(g.image(x))


@settings(max_examples=200, deadline=None)
@given(elements(), elements())
def test_compose_is_pointwise(g, h):
    gh = compose(g, h)
    assert all(gh.image(x) == _naive(g, h, x) for x in window(N, 30))
    assert gh.tvec == tuple(a + b for a, b in zip(g.tvec, h.tvec))


@settings(max_examples=150, deadline=None)
@given(elements(), elements(), elements())
def test_group_laws(a, b, c):
    e = HoughtonElement.identity(N)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, invert(a)) == e == compose(invert(a), a)
    assert compose(a, e) == a
    assert invert(compose(a, b)) == compose(invert(b), invert(a))


@settings(max_examples=150, deadline=None)
@given(finitary(), finitary(), elements())
def test_parity_and_cycle_type(s, t, c):
    odd = {"even": 0, "odd": 1}
    assert odd[parity(compose(s, t))] == odd[parity(s)] ^ odd[parity(t)]
    assert cycle_type(conjugate(s, c)) == cycle_type(s)


@settings(max_examples=150, deadline=None)
@given(elements(), st.sampled_from(window(N, 12)), st.integers(-25, 25))
def test_solve_power_inverts_iteration(f, x, k):
    y = iterate(f, x, k)
    j = solve_power(f, x, y)
    assert j is not None
    assert iterate(f, x, j) == y
    assert abs(j) <= abs(k)


@settings(max_examples=100, deadline=None)
@given(elements(), st.sampled_from(window(N, 10)))
def test_orbit_descriptor_consistent(f, x):
    d = orbit_descriptor(f, x)
    if d.kind == "finite":
        assert iterate(f, x, len(d.cycle)) == x
        assert x in d.cycle
    else:
        ray, r = d.forward
        y = iterate(f, x, 200)
        t = f.tvec[ray - 1]
        assert y[0] == ray and (y[1] - r) % t == 0


@settings(max_examples=100, deadline=None)
@given(elements(), finitary(), st.integers(1, N), st.integers(0, 30))
def test_eventual_agreement(g, sigma, ray, offset):
    h = conjugate(g, sigma)
    x = (ray, eventual_agreement_bound(g, h) + offset)
    e = eventual_agreement_index(g, h, x)
    assert e is not None
    a, b = iterate(g, x, e), iterate(h, x, e)
    for _ in range(20):
        assert a == b
        a, b = g.image(a), h.image(b)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["a", "b"]), st.integers(-3, 3)), max_size=8), elements(), elements())
def test_word_inverse_evaluates_to_inverse(letters, a, b):
    w = Word(letters)
    env = {"a": a, "b": b}
    assert evaluate_word(w + w.inverse(), env, N) == HoughtonElement.identity(N)
    assert evaluate_word(w.inverse(), env, N) == invert(evaluate_word(w, env, N))
    assert Word.parse(str(w)) == w
