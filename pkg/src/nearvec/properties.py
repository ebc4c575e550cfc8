"""Exhaustive checks of structural facts about induced additions and strata.

Each check scans a finite space completely and returns a
:class:`PropertyResult` carrying the first counterexample it meets, so a
failure can be reproduced by hand.  :func:`run_properties` runs them all
in a fixed order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import d_basis, delta_basis, is_d_basis
from .nearfield import distributive_elements, verify_nearfield
from .regularity import canonical_isomorphism, is_regular, maximal_regular_decomposition
from .space import NearVectorSpace, distributive_of, product_space, stratum

__all__ = [
    "PropertyResult",
    "PROPERTIES",
    "run_properties",
    "induced_nearfields",
    "equal_additions_scale_together",
    "distributive_scaling_keeps_addition",
    "addition_classes_are_cosets",
    "independent_deltas_have_distinct_additions",
    "distributive_set_conjugates",
    "kernel_tuples_share_addition",
    "isomorphism_carries_strata",
    "strata_are_vector_spaces",
    "transported_bases",
    "product_quasi_kernel_formula",
]


@dataclass(frozen=True)
class PropertyResult:
    name: str
    ok: bool
    witness: tuple | None = None
    checked: int = 0

    def line(self) -> str:
        if self.ok:
            return f"{self.name}: pass ({self.checked} cases)"
        return f"{self.name}: FAIL witness={self.witness}"


def _class_reps(V: NearVectorSpace) -> list[int]:
    ids = V.addition_ids
    seen: dict[int, int] = {}
    for v in V.q_star:
        seen.setdefault(int(ids[v]), v)
    return list(seen.values())


def induced_nearfields(V: NearVectorSpace) -> PropertyResult:
    """Every distinct ``(F, +_u, *)`` passes the near-field axioms."""
    reps = _class_reps(V)
    for u in reps:
        rep = verify_nearfield(V.nearfield_of(u))
        if not rep.ok:
            return PropertyResult("induced-nearfields", False, (V.label(u), rep.failures[0].name))
    return PropertyResult("induced-nearfields", True, checked=len(reps))


def equal_additions_scale_together(V: NearVectorSpace) -> PropertyResult:
    """If ``+_u = +_v`` then ``+_{g u} = +_{g v}`` for every nonzero scalar ``g``."""
    ids = V.addition_ids
    nz = np.array(V.scalar.nonzero)
    n = 0
    for u in _class_reps(V):
        cls = np.flatnonzero(ids == ids[u])
        moved = ids[V.act[np.ix_(nz, cls)]]
        bad = np.argwhere(moved != moved[:, :1])
        n += moved.size
        if len(bad):
            g, j = bad[0]
            return PropertyResult(
                "equal-additions-scale-together", False,
                (V.scalar.label(int(nz[g])), V.label(int(cls[0])), V.label(int(cls[j]))),
            )
    return PropertyResult("equal-additions-scale-together", True, checked=n)


def distributive_scaling_keeps_addition(V: NearVectorSpace) -> PropertyResult:
    """``+_{l u} = +_u`` for every nonzero ``l`` distributive in ``F_u``."""
    ids = V.addition_ids
    n = 0
    for u in V.q_star:
        for lam in distributive_of(V, u).nonzero:
            n += 1
            if ids[V.act[lam, u]] != ids[u]:
                return PropertyResult("distributive-scaling-keeps-addition", False, (V.scalar.label(lam), V.label(u)))
    return PropertyResult("distributive-scaling-keeps-addition", True, checked=n)


def addition_classes_are_cosets(V: NearVectorSpace) -> PropertyResult:
    """``+_{l u} = +_{g u}`` exactly when ``l g^-1`` is a nonzero distributive element of ``F_u``."""
    F = V.scalar
    ids = V.addition_ids
    nz = np.array(F.nonzero)
    ratio = F.mul[nz[:, None], F.inv_table[nz][None, :]]
    n = 0
    for u in V.q_star:
        d = distributive_of(V, u)
        member = np.zeros(F.size, dtype=bool)
        member[d.nonzero] = True
        a = ids[V.act[nz, u]]
        same = a[:, None] == a[None, :]
        bad = np.argwhere(same != member[ratio])
        n += same.size
        if len(bad):
            i, j = bad[0]
            return PropertyResult(
                "addition-classes-are-cosets", False,
                (V.label(u), F.label(int(nz[i])), F.label(int(nz[j]))),
            )
    return PropertyResult("addition-classes-are-cosets", True, checked=n)


def independent_deltas_have_distinct_additions(V: NearVectorSpace) -> PropertyResult:
    """For a basis of ``F_u`` over its distributive elements the additions ``+_{delta_j u}`` differ."""
    ids = V.addition_ids
    n = 0
    for u in V.q_star:
        deltas = delta_basis(V.nearfield_of(u), distributive_of(V, u))
        got = [int(ids[V.act[dl, u]]) for dl in deltas]
        n += 1
        if len(set(got)) != len(got):
            return PropertyResult(
                "independent-deltas-distinct-additions", False,
                (V.label(u), tuple(V.scalar.label(x) for x in deltas)),
            )
    return PropertyResult("independent-deltas-distinct-additions", True, checked=n)


def distributive_set_conjugates(V: NearVectorSpace) -> PropertyResult:
    """The distributive set of ``l u`` is ``l d_u l^-1`` for every nonzero ``l``."""
    F = V.scalar
    n = 0
    for u in V.q_star:
        d = np.array(sorted(distributive_of(V, u).members))
        for lam in F.nonzero:
            conj = set(F.mul[F.mul[lam, d], F.inv(lam)].tolist())
            n += 1
            if conj != set(distributive_of(V, V.scale(lam, u)).members):
                return PropertyResult("distributive-set-conjugates", False, (V.label(u), F.label(lam)))
    return PropertyResult("distributive-set-conjugates", True, checked=n)


def _regular_pieces(V: NearVectorSpace) -> list[NearVectorSpace]:
    if is_regular(V):
        return [V]
    dec = maximal_regular_decomposition(V)
    return [V.restrict(s.members) for s in dec.summands]


def kernel_tuples_share_addition(V: NearVectorSpace) -> PropertyResult:
    """In ``W = F_u^B`` every nonzero tuple ``k`` with distributive entries has ``+_{delta k} = +_{delta u}``.

    Non-regular spaces are checked summand by summand.
    """
    n = 0
    for P in _regular_pieces(V):
        for u in _class_reps(P):
            iso = canonical_isomorphism(P, u)
            W = iso.target
            d = distributive_elements(W.component)
            kmask = np.all(np.isin(W.coords, list(d.members)), axis=1)
            kmask[W.zero] = False
            ks = np.flatnonzero(kmask)
            for dl in P.scalar.nonzero:
                want = P.distinct_additions[P.addition_ids[P.act[dl, u]]]
                for k in ks:
                    n += 1
                    i = W.addition_ids[W.act[dl, k]]
                    if i < 0 or not np.array_equal(W.distinct_additions[i], want):
                        return PropertyResult(
                            "kernel-tuples-share-addition", False,
                            (P.label(u), P.scalar.label(dl), W.label(int(k))),
                        )
    return PropertyResult("kernel-tuples-share-addition", True, checked=n)


def isomorphism_carries_strata(V: NearVectorSpace) -> PropertyResult:
    """The coordinate map sends ``Q_{delta u}`` onto ``{delta k}``, the vectors of ``F_u^B`` with addition ``+_{delta u}``."""
    n = 0
    for P in _regular_pieces(V):
        for u in _class_reps(P):
            iso = canonical_isomorphism(P, u)
            W = iso.target
            d = distributive_elements(W.component)
            kmask = np.all(np.isin(W.coords, list(d.members)), axis=1)
            ks = np.flatnonzero(kmask)
            for dl in P.scalar.nonzero:
                du = P.scale(dl, u)
                image = set(iso.forward[sorted(stratum(P, du).members)].tolist())
                multiples = set(W.act[dl, ks].tolist())
                want = P.distinct_additions[P.addition_ids[du]]
                same_add = {W.zero} | {
                    int(w) for w in W.q_star if np.array_equal(W.distinct_additions[W.addition_ids[w]], want)
                }
                n += 1
                if not (image == multiples == same_add):
                    return PropertyResult("isomorphism-carries-strata", False, (P.label(u), P.scalar.label(dl)))
    return PropertyResult("isomorphism-carries-strata", True, checked=n)


def strata_are_vector_spaces(V: NearVectorSpace) -> PropertyResult:
    """Each ``Q_u`` is closed under ``+`` and ``d_u``, and both distributive laws hold over ``(d_u, +_u, *)``."""
    n = 0
    for u in _class_reps(V):
        S = np.array(sorted(stratum(V, u).members))
        inS = np.zeros(V.size, dtype=bool)
        inS[S] = True
        d = np.array(sorted(distributive_of(V, u).members))
        plus_u = V.distinct_additions[V.addition_ids[u]]
        lab = V.label(u)
        if not inS[V.add[np.ix_(S, S)]].all():
            return PropertyResult("strata-are-vector-spaces", False, (lab, "sum"))
        if not inS[V.neg_table[S]].all():
            return PropertyResult("strata-are-vector-spaces", False, (lab, "negation"))
        if not inS[V.act[np.ix_(d, S)]].all():
            return PropertyResult("strata-are-vector-spaces", False, (lab, "scaling"))
        # (a +_u b) v = a v + b v
        lhs = V.act[plus_u[np.ix_(d, d)]][:, :, S]
        rhs = V.add[V.act[d][:, None, S], V.act[d][None, :, S]]
        if not np.array_equal(lhs, rhs):
            return PropertyResult("strata-are-vector-spaces", False, (lab, "scalar-sum"))
        # a (v + w) = a v + a w
        vw = V.add[np.ix_(S, S)]
        lhs = V.act[d][:, vw]
        rhs = V.add[V.act[d][:, S][:, :, None], V.act[d][:, S][:, None, :]]
        if not np.array_equal(lhs, rhs):
            return PropertyResult("strata-are-vector-spaces", False, (lab, "vector-sum"))
        n += len(d) * len(S) * (len(d) + len(S))
    return PropertyResult("strata-are-vector-spaces", True, checked=n)


def transported_bases(V: NearVectorSpace) -> PropertyResult:
    """If ``B`` is a basis of ``Q_u`` over ``d_u`` then ``delta B`` is a basis of ``Q_{delta u}`` over ``d_{delta u}``."""
    n = 0
    for u in _class_reps(V):
        B = d_basis(V, distributive_of(V, u), stratum(V, u).nonzero)
        for dl in V.scalar.nonzero:
            du = V.scale(dl, u)
            moved = [V.scale(dl, b) for b in B]
            n += 1
            if not is_d_basis(V, distributive_of(V, du), moved, stratum(V, du).members):
                return PropertyResult("transported-bases", False, (V.label(u), V.scalar.label(dl)))
    return PropertyResult("transported-bases", True, checked=n)


def product_quasi_kernel_formula(V: NearVectorSpace) -> PropertyResult:
    """For ``F^n``: the quasi-kernel is ``{l k : l in F, k with distributive entries}``."""
    if V.kind != "product":
        return PropertyResult("product-quasi-kernel-formula", True, checked=0)
    d = distributive_elements(V.component)
    kmask = np.all(np.isin(V.coords, list(d.members)), axis=1)
    formula = np.zeros(V.size, dtype=bool)
    formula[V.act[:, np.flatnonzero(kmask)].ravel()] = True
    bad = np.flatnonzero(formula != V.q_mask)
    if len(bad):
        return PropertyResult("product-quasi-kernel-formula", False, (V.label(int(bad[0])),))
    return PropertyResult("product-quasi-kernel-formula", True, checked=V.size)


PROPERTIES: tuple[Callable[[NearVectorSpace], PropertyResult], ...] = (
    induced_nearfields,
    equal_additions_scale_together,
    distributive_scaling_keeps_addition,
    addition_classes_are_cosets,
    independent_deltas_have_distinct_additions,
    distributive_set_conjugates,
    kernel_tuples_share_addition,
    isomorphism_carries_strata,
    strata_are_vector_spaces,
    transported_bases,
    product_quasi_kernel_formula,
)


def run_properties(V: NearVectorSpace, stop_early: bool = False) -> list[PropertyResult]:
    out = []
    for check in PROPERTIES:
        r = check(V)
        out.append(r)
        if stop_early and not r.ok:
            break
    return out
