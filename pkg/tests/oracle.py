"""Pointwise reference maps, written directly from the generator definitions.

Nothing here touches the exception-table machinery, so these act as an
independent check on ``houghton.perm``.
"""


def g(k):
    def f(x):
        i, m = x
        if i == 1:
            return (1, m + 1)
        if i == k:
            return (1, 1) if m == 1 else (k, m - 1)
        return x
    return f


def g_inv(k):
    def f(x):
        i, m = x
        if i == 1:
            return (k, 1) if m == 1 else (1, m - 1)
        if i == k:
            return (k, m + 1)
        return x
    return f


def then(*maps):
    """Right action: apply maps left to right."""
    def f(x):
        for mp in maps:
            x = mp(x)
        return x
    return f


def cycles(*cyc):
    table = {}
    for c in cyc:
        for a, b in zip(c, c[1:] + c[:1]):
            table[a] = b
    return lambda x: table.get(x, x)


def window(n, size):
    return [(i, m) for i in range(1, n + 1) for m in range(1, size + 1)]


def agrees(elem, ref, n, size=40):
    return all(elem.image(x) == ref(x) for x in window(n, size))
