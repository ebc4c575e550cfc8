"""Independent reference computations used by the tests.

Nothing here touches the library's tables: GF(p^2) arithmetic is done on
coefficient pairs with plain integers, and the space-level oracles search
for scalars one candidate at a time.
"""
from __future__ import annotations

import itertools


def nonresidue(p):
    if p == 5:
        return 3
    return next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)


def pair(i, p):
    # element index a + p*b  <->  a + b g
    return i % p, i // p


def index(x, p):
    return x[0] + p * x[1]


def gf_mul(x, y, p, r):
    a, b = x
    c, d = y
    return (a * c + r * b * d) % p, (a * d + b * c) % p


def gf_add(x, y, p):
    return (x[0] + y[0]) % p, (x[1] + y[1]) % p


def gf_pow(x, k, p, r):
    out = (1, 0)
    for _ in range(k):
        out = gf_mul(out, x, p, r)
    return out


def is_square(x, p, r):
    if x == (0, 0):
        return True
    return gf_pow(x, (p * p - 1) // 2, p, r) == (1, 0)


def dickson_mul(i, j, p):
    """Dickson product of element indices ``i`` and ``j``."""
    r = nonresidue(p)
    x, y = pair(i, p), pair(j, p)
    if is_square(x, p, r):
        return index(gf_mul(x, y, p, r), p)
    return index(gf_mul(x, gf_pow(y, p, p, r), p, r), p)


def label(i, p):
    a, b = pair(i, p)
    if b == 0:
        return str(a)
    g = "g" if b == 1 else f"{b}g"
    return g if a == 0 else f"{a}+{g}"


def quasi_kernel_bruteforce(V):
    """Members of Q(V) by searching gamma for every (v, alpha, beta)."""
    n = V.scalar.size
    out = {V.zero}
    for v in range(V.size):
        if v == V.zero:
            continue
        orbit = [int(V.act[g, v]) for g in range(n)]
        ok = True
        for a in range(n):
            for b in range(n):
                s = int(V.add[orbit[a], orbit[b]])
                if s not in orbit:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.add(v)
    return out


def induced_addition_bruteforce(V, u, a, b):
    s = int(V.add[V.act[a, u], V.act[b, u]])
    hits = [g for g in range(V.scalar.size) if int(V.act[g, u]) == s]
    assert len(hits) == 1
    return hits[0]


def min_sum_length(V, v, q_star):
    """Least number of quasi-kernel elements summing to ``v`` by layered search."""
    if v == V.zero:
        return 0
    layer = {V.zero}
    seen = {V.zero}
    k = 0
    while layer:
        k += 1
        nxt = set()
        for x in layer:
            for q in q_star:
                y = int(V.add[x, q])
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        if v in nxt:
            return k
        layer = nxt
    raise AssertionError("not reachable")


def additive_closure(V, gens):
    out = {V.zero}
    frontier = list(out)
    items = set()
    for g in gens:
        items.update(int(V.act[a, g]) for a in range(V.scalar.size))
    while frontier:
        x = frontier.pop()
        for y in items:
            z = int(V.add[x, y])
            if z not in out:
                out.add(z)
                frontier.append(z)
    return out


def tuples(q, n):
    return list(itertools.product(range(q), repeat=n))
