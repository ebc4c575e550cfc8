"""Linear algebra over the distributive subfield of a finite near-field.

Finite division rings are commutative, so the routines here treat the
distributive elements as an ordinary finite field whose operations are
looked up in the owning near-field's tables.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .nearfield import DistributiveSet, NearFieldTable
from .space import NearVectorSpace, closure


def right_span(F: NearFieldTable, d: DistributiveSet, gens: Sequence[int]) -> set[int]:
    """All sums ``g_1 c_1 + ... + g_k c_k`` with ``c_j`` distributive (``F`` as a right d-space)."""
    out = {F.zero}
    for g in gens:
        multiples = [int(F.mul[g, c]) for c in d]
        out = {int(F.add[s, x]) for s in out for x in multiples}
    return out


def delta_basis(F: NearFieldTable, d: DistributiveSet) -> list[int]:
    """Greedy basis of ``F`` over ``d`` starting from ``1``, extended in carrier order."""
    basis = [F.one]
    covered = right_span(F, d, basis)
    for a in F.elements:
        if len(covered) == F.size:
            break
        if a not in covered:
            basis.append(a)
            covered = right_span(F, d, basis)
    return basis


def right_coordinates(F: NearFieldTable, d: DistributiveSet, basis: Sequence[int]) -> dict[int, tuple[int, ...]]:
    """Map each element of ``F`` to its coefficient tuple over ``basis``.

    Raises ``ValueError`` when ``basis`` is not a basis.
    """
    coords: dict[int, tuple[int, ...]] = {F.zero: ()}
    for g in basis:
        nxt = {}
        for s, cs in coords.items():
            for c in d:
                nxt.setdefault(int(F.add[s, F.mul[g, c]]), []).append(cs + (c,))
        if any(len(v) > 1 for v in nxt.values()):
            raise ValueError("elements are not independent over the distributive subfield")
        coords = {k: v[0] for k, v in nxt.items()}
    if len(coords) != F.size:
        raise ValueError("elements do not span")
    return coords


def rank(d: DistributiveSet, rows: Iterable[Sequence[int]]) -> int:
    """Row rank of a matrix with entries in the field ``d``."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return 0
    z = d.owner.zero
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != z), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = d.inv(m[r][col])
        m[r] = [d.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != z:
                f = d.neg(m[i][col])
                m[i] = [d.add(a, d.mul(f, b)) for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def d_span(V: NearVectorSpace, d: DistributiveSet, gens: Sequence[int]) -> np.ndarray:
    """Mask of the additive closure of ``{c v : c in d, v in gens}``."""
    return closure(V, gens, scalars=d.members)


def d_basis(V: NearVectorSpace, d: DistributiveSet, members: Sequence[int]) -> list[int]:
    """Greedy basis over ``d`` of the set ``members`` (a stratum), in the given order."""
    basis: list[int] = []
    cur = d_span(V, d, basis)
    for v in members:
        if v == V.zero or cur[v]:
            continue
        basis.append(int(v))
        cur = d_span(V, d, basis)
    return basis


def is_d_basis(V: NearVectorSpace, d: DistributiveSet, basis: Sequence[int], target: Iterable[int]) -> bool:
    """``basis`` spans ``target`` over ``d`` with unique coefficients."""
    target = set(int(t) for t in target)
    k = len(basis)
    if len(d) ** k != len(target):
        return False
    sums = np.full(1, V.zero, dtype=np.int64)
    dm = np.array(sorted(d.members), dtype=np.int64)
    for b in basis:
        sums = V.add[sums[:, None], V.act[dm, b][None, :]].ravel()
    return len(np.unique(sums)) == len(sums) and set(sums.tolist()) == target
