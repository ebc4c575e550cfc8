"""Regularity of finite near-vector spaces.

Ten equivalent characterisations of regularity are evaluated here, each
by its own computation, so that agreement between them is a real check
rather than a tautology.  The module also builds the two decompositions
(into strata over a distributive basis, and into maximal regular
subspaces), the coordinate isomorphism onto ``F_u^B``, and the reports
that compare element and space dimensions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvariantError, NotInQuasiKernelError, NotRegularError
from .linalg import d_basis, delta_basis, is_d_basis, rank, right_coordinates, right_span
from .space import (
    NearVectorSpace,
    Stratum,
    Subspace,
    additions_index,
    closure,
    dimension_table,
    distributive_of,
    is_scalar_basis,
    product_space,
    scalar_basis,
    scalar_cosets,
    span,
    stratum,
    sum_map,
)

__all__ = [
    "CONDITIONS",
    "ConditionResult",
    "RegularityVerdict",
    "DistributiveDecomposition",
    "RegularDecomposition",
    "IsomorphismWitness",
    "DimensionReport",
    "SpanFamilyReport",
    "compatible",
    "condition1_regular",
    "condition_suite",
    "is_regular",
    "distributive_decomposition",
    "canonical_isomorphism",
    "maximal_regular_decomposition",
    "regular_components",
    "check_dimension_corollary",
    "check_span_family",
    "dim_element_fast",
    "direct_sum_map",
]

CONDITIONS = tuple(range(1, 11))


@dataclass(frozen=True)
class ConditionResult:
    index: int
    holds: bool
    witness: object = None
    note: str = ""

    def to_json(self, V: NearVectorSpace | None = None) -> dict:
        out: dict = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = _render(self.witness, V)
        if self.note:
            out["note"] = self.note
        return out


def _render(w, V):
    if V is None:
        return w
    if isinstance(w, dict):
        return {k: _render(v, V) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [_render(x, V) for x in w]
    if isinstance(w, (int, np.integer)):
        return V.label(int(w))
    return w


@dataclass
class RegularityVerdict:
    space: NearVectorSpace
    base_point: int
    per_condition: dict[int, ConditionResult] = field(default_factory=dict)

    @property
    def values(self) -> dict[int, bool]:
        return {k: r.holds for k, r in self.per_condition.items()}

    @property
    def agree(self) -> bool:
        return len(set(self.values.values())) <= 1

    @property
    def regular(self) -> bool:
        return self.per_condition[1].holds

    def disagreements(self) -> list[int]:
        ref = self.regular
        return [k for k, v in self.values.items() if v != ref]

    def to_json(self) -> dict:
        V = self.space
        return {
            "space": V.name,
            "u": V.label(self.base_point),
            "agree": self.agree,
            "conditions": {str(k): r.to_json(V) for k, r in sorted(self.per_condition.items())},
        }

    def tsv_rows(self) -> list[str]:
        V = self.space
        rows = []
        for k, r in sorted(self.per_condition.items()):
            w = "" if r.witness is None else str(_render(r.witness, V))
            rows.append(f"{V.name}\t{V.label(self.base_point)}\t{k}\t{str(r.holds).lower()}\t{w}")
        return rows


# -- compatibility and condition 1 ----------------------------------------------


def compatible(V: NearVectorSpace, u: int, v: int) -> tuple[bool, int | None]:
    """Whether ``u + lam v`` lies in ``Q(V)`` for some ``lam != 0``; returns the first such ``lam``."""
    V.require_q_star(u)
    V.require_q_star(v)
    sums = V.add[u, V.act[V.scalar.nonzero, v]]
    hits = np.flatnonzero(V.q_mask[sums])
    if len(hits) == 0:
        return False, None
    return True, V.scalar.nonzero[int(hits[0])]


def _incompatible_pair(V: NearVectorSpace, members: Sequence[int]) -> tuple[int, int] | None:
    q = np.array(members, dtype=np.int64)
    if len(q) == 0:
        return None
    scaled = V.act[V.scalar.nonzero][:, q]
    for u in q:
        ok = V.q_mask[V.add[u][scaled]].any(axis=0)
        if not ok.all():
            return int(u), int(q[np.argmin(ok)])
    return None


def condition1_regular(V: NearVectorSpace) -> ConditionResult:
    """Every two nonzero quasi-kernel vectors are compatible (full pairwise scan)."""
    w = _incompatible_pair(V, V.q_star)
    return ConditionResult(1, w is None, w)


def is_regular(V: NearVectorSpace) -> bool:
    return condition1_regular(V).holds


# -- the other conditions ------------------------------------------------------


def _class_reps(V: NearVectorSpace) -> list[int]:
    ids = V.addition_ids
    seen, reps = set(), []
    for v in V.q_star:
        if ids[v] not in seen:
            seen.add(int(ids[v]))
            reps.append(v)
    return reps


def _condition2(V: NearVectorSpace) -> ConditionResult:
    # for every base point: Q(V) = {lam v : v in Q_u(V)}
    q = set(np.flatnonzero(V.q_mask).tolist())
    for w in _class_reps(V):
        members = sorted(stratum(V, w).members)
        reached = set(np.unique(V.act[:, members]).tolist())
        if reached != q:
            missing = min(q - reached) if q - reached else min(reached - q)
            return ConditionResult(2, False, {"u": w, "uncovered": missing})
    return ConditionResult(2, True)


def _condition3(V: NearVectorSpace, u: int) -> ConditionResult:
    d = distributive_of(V, u)
    reps = [c[0] for c in scalar_cosets(V.scalar, d)]
    seen: dict[int, int] = {}
    for s in reps:
        for v in stratum(V, V.scale(s, u)).nonzero:
            if v in seen:
                return ConditionResult(3, False, {"overlap": v, "s": (seen[v], s)})
            seen[v] = s
    missing = [v for v in V.q_star if v not in seen]
    if missing:
        return ConditionResult(3, False, {"uncovered": missing[0]})
    return ConditionResult(3, True)


def _condition4(V: NearVectorSpace, u: int) -> ConditionResult:
    idx = additions_index(V, u)
    if idx.bijective:
        return ConditionResult(4, True)
    if not idx.injective:
        seen = {}
        for rep, a in idx.coset_map.items():
            if a in seen:
                return ConditionResult(4, False, {"same_addition": (seen[a], rep)}, "not injective")
            seen[a] = rep
    hit = set(idx.coset_map.values())
    ids = V.addition_ids
    v = next(v for v in V.q_star if int(ids[v]) not in hit)
    return ConditionResult(4, False, {"unreached": v}, "not surjective")


def _condition5(V: NearVectorSpace) -> ConditionResult:
    # for all v, w in Q(V)*: some lam gives +_v = +_{lam w}; then alpha -> alpha lam
    # is an additive F-linear bijection F_v -> F_w
    ids = V.addition_ids
    tables = V.distinct_additions
    F = V.scalar
    all_ids = set(int(ids[v]) for v in V.q_star)
    for w in V.q_star:
        reach = ids[V.act[F.nonzero, w]]
        if set(reach.tolist()) != all_ids:
            missing = sorted(all_ids - set(reach.tolist()))[0]
            v = next(x for x in V.q_star if ids[x] == missing)
            return ConditionResult(5, False, (v, w))
    for w in _class_reps(V):
        tw = tables[int(ids[w])]
        for k in sorted(all_ids):
            lam = next(l for l in F.nonzero if ids[V.act[l, w]] == k)
            theta = F.mul[:, lam]
            tv = tables[k]
            if not np.array_equal(theta[tv], tw[theta[:, None], theta[None, :]]):
                return ConditionResult(5, False, {"w": w, "lam": lam}, "theta not additive")
            if not np.array_equal(theta[F.mul], F.mul[:, theta]):
                return ConditionResult(5, False, {"w": w, "lam": lam}, "theta not F-linear")
    return ConditionResult(5, True)


def _condition6(V: NearVectorSpace, u: int) -> ConditionResult:
    ids = V.addition_ids
    reach = set(ids[V.act[V.scalar.nonzero, u]].tolist())
    for v in V.q_star:
        if int(ids[v]) not in reach:
            return ConditionResult(6, False, v)
    return ConditionResult(6, True)


def _greedy_in(V: NearVectorSpace, members: Sequence[int]) -> list[int]:
    chosen: list[int] = []
    cur = closure(V, chosen)
    for v in members:
        if not cur[v]:
            chosen.append(v)
            cur = closure(V, chosen)
    return chosen


def _condition7(V: NearVectorSpace, u: int) -> ConditionResult:
    B = _greedy_in(V, stratum(V, u).nonzero)
    img = sum_map(V, B)
    if img is None or len(np.unique(img)) != V.size:
        return ConditionResult(7, False, {"basis": B}, "sum map onto V is not bijective")
    W = product_space(V.nearfield_of(u), len(B))
    witness = IsomorphismWitness.from_backward(V, W, img, B)
    bad = witness.failure()
    if bad:
        return ConditionResult(7, False, {"basis": B}, bad)
    return ConditionResult(7, True)


def _condition8(V: NearVectorSpace, u: int) -> ConditionResult:
    F_u = V.nearfield_of(u)
    d = distributive_of(V, u)
    deltas = delta_basis(F_u, d)
    summands = [stratum(V, V.scale(dl, u)) for dl in deltas]
    comp = direct_sum_map(V, [sorted(s.members) for s in summands])
    if comp is None:
        return ConditionResult(8, False, {"delta_basis": deltas}, "sum of strata is not direct or not V")
    ids = V.addition_ids
    adds = [int(ids[V.scale(dl, u)]) for dl in deltas]
    if len(set(adds)) != len(adds):
        return ConditionResult(8, False, {"delta_basis": deltas}, "repeated addition")
    return ConditionResult(8, True)


def _condition9(V: NearVectorSpace, u: int) -> ConditionResult:
    d = distributive_of(V, u)
    members = stratum(V, u).nonzero
    for order in (members, members[::-1]):
        B = d_basis(V, d, order)
        if not is_scalar_basis(V, B):
            return ConditionResult(9, False, {"basis": B})
    return ConditionResult(9, True)


def _condition10(V: NearVectorSpace) -> ConditionResult:
    best = None
    for w in _class_reps(V):
        B = _greedy_in(V, stratum(V, w).nonzero)
        if is_scalar_basis(V, B):
            return ConditionResult(10, True)
        size = int(closure(V, B).sum())
        if best is None or size > best[1]:
            best = (w, size)
    if best is None:
        return ConditionResult(10, False, None, "no nonzero quasi-kernel vectors")
    return ConditionResult(10, False, {"u": best[0], "span_size": best[1]})


def condition_suite(V: NearVectorSpace, u: int) -> RegularityVerdict:
    """Evaluate all ten conditions at base point ``u``, each from scratch.

    Conditions 2 and 5 quantify over every base point; 3, 4, 6, 7, 8 and 9
    use ``u``; 10 searches for a uniform-addition scalar basis.
    """
    V.require_q_star(u)
    verdict = RegularityVerdict(V, u)
    verdict.per_condition[1] = condition1_regular(V)
    verdict.per_condition[2] = _condition2(V)
    verdict.per_condition[3] = _condition3(V, u)
    verdict.per_condition[4] = _condition4(V, u)
    verdict.per_condition[5] = _condition5(V)
    verdict.per_condition[6] = _condition6(V, u)
    verdict.per_condition[7] = _condition7(V, u)
    verdict.per_condition[8] = _condition8(V, u)
    verdict.per_condition[9] = _condition9(V, u)
    verdict.per_condition[10] = _condition10(V)
    return verdict


# -- direct sums -----------------------------------------------------------------


def direct_sum_map(V: NearVectorSpace, parts: Sequence[Sequence[int]], target: Sequence[int] | None = None):
    """Certify that ``target`` (default: all of V) is the direct sum of ``parts``.

    Returns an array ``comp`` with ``comp[v]`` the tuple of components of
    ``v`` (one per part), or ``None`` if some element of the target has no
    representation or more than one.
    """
    tgt = np.arange(V.size) if target is None else np.array(sorted(target), dtype=np.int64)
    total = 1
    for p in parts:
        total *= len(p)
        if total > len(tgt):
            return None
    if total != len(tgt):
        return None
    sums = np.full(1, V.zero, dtype=np.int64)
    choice = np.zeros((1, 0), dtype=np.int64)
    for p in parts:
        p = np.asarray(p, dtype=np.int64)
        sums = V.add[sums[:, None], p[None, :]].ravel()
        choice = np.concatenate(
            [np.repeat(choice, len(p), axis=0), np.tile(p, len(choice))[:, None]], axis=1
        )
    if len(np.unique(sums)) != len(sums) or not np.array_equal(np.sort(sums), tgt):
        return None
    comp = np.full((V.size, len(parts)), -1, dtype=np.int64)
    comp[sums] = choice
    return comp


@dataclass(frozen=True, eq=False)
class DistributiveDecomposition:
    space: NearVectorSpace
    base_point: int
    delta_basis: tuple[int, ...]
    summands: tuple[Stratum, ...]
    bases: tuple[tuple[int, ...], ...]
    components: np.ndarray

    def to_json(self) -> dict:
        V = self.space
        F = V.scalar
        return {
            "u": V.label(self.base_point),
            "delta_basis": [F.label(x) for x in self.delta_basis],
            "summands": [[V.label(v) for v in s] for s in self.summands],
            "bases": [[V.label(v) for v in b] for b in self.bases],
        }


def distributive_decomposition(V: NearVectorSpace, u: int) -> DistributiveDecomposition:
    """``V`` as the direct sum of the strata ``Q_{delta u}(V)`` over a distributive basis of ``F_u``."""
    V.require_q_star(u)
    c1 = condition1_regular(V)
    if not c1.holds:
        raise NotRegularError(tuple(V.label(x) for x in c1.witness))
    F_u = V.nearfield_of(u)
    d = distributive_of(V, u)
    deltas = delta_basis(F_u, d)
    summands = tuple(stratum(V, V.scale(dl, u)) for dl in deltas)
    comp = direct_sum_map(V, [sorted(s.members) for s in summands])
    if comp is None:
        raise InvariantError("strata over the distributive basis do not form a direct sum")
    ids = [int(V.addition_ids[V.scale(dl, u)]) for dl in deltas]
    if len(set(ids)) != len(ids):
        raise InvariantError("two strata of the decomposition share an addition")
    B = d_basis(V, d, stratum(V, u).nonzero)
    bases = []
    for dl, S in zip(deltas, summands):
        moved = [V.scale(dl, b) for b in B]
        if not is_d_basis(V, distributive_of(V, V.scale(dl, u)), moved, S.members):
            raise InvariantError(f"transported basis fails in stratum of {F_u.label(dl)}")
        bases.append(tuple(moved))
    return DistributiveDecomposition(V, u, tuple(deltas), summands, tuple(bases), comp)


# -- isomorphism onto F_u^B ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IsomorphismWitness:
    source: NearVectorSpace
    target: NearVectorSpace
    forward: np.ndarray
    backward: np.ndarray
    basis: tuple[int, ...] = ()
    scalar_map: np.ndarray | None = None

    @classmethod
    def from_backward(cls, source, target, backward, basis=()):
        forward = np.full(source.size, -1, dtype=np.int64)
        forward[backward] = np.arange(len(backward))
        return cls(source, target, forward, np.asarray(backward), tuple(basis))

    def failure(self) -> str | None:
        """Reason the pair is not an isomorphism, or ``None`` (full scan)."""
        S, T, f, g = self.source, self.target, self.forward, self.backward
        eta = np.arange(S.scalar.size) if self.scalar_map is None else self.scalar_map
        if S.size != T.size or (f < 0).any():
            return "not a bijection"
        if not (np.array_equal(g[f], np.arange(S.size)) and np.array_equal(f[g], np.arange(T.size))):
            return "maps are not mutually inverse"
        if not np.array_equal(f[S.add], T.add[f[:, None], f[None, :]]):
            return "not additive"
        if not np.array_equal(f[S.act], T.act[eta][:, f]):
            return "does not commute with the action"
        return None

    def check(self) -> bool:
        return self.failure() is None

    def __call__(self, v: int) -> int:
        return int(self.forward[v])


def canonical_isomorphism(V: NearVectorSpace, u: int, basis: Sequence[int] | None = None) -> IsomorphismWitness:
    """Coordinates ``sum l_b b -> (l_b)`` onto ``F_u^B`` for a uniform-addition scalar basis ``B``.

    The default basis is the greedy distributive basis of ``Q_u(V)``; the
    result is verified by full scan before it is returned.
    """
    V.require_q_star(u)
    c1 = condition1_regular(V)
    if not c1.holds:
        raise NotRegularError(tuple(V.label(x) for x in c1.witness))
    if basis is None:
        basis = d_basis(V, distributive_of(V, u), stratum(V, u).nonzero)
    basis = [int(b) for b in basis]
    ids = V.addition_ids
    if any(ids[b] != ids[u] for b in basis):
        raise InvariantError("basis does not share the addition of u")
    img = sum_map(V, basis)
    if img is None or len(np.unique(img)) != V.size:
        raise InvariantError("basis is not a scalar basis")
    W = product_space(V.nearfield_of(u), len(basis))
    iso = IsomorphismWitness.from_backward(V, W, img, basis)
    bad = iso.failure()
    if bad:
        raise InvariantError(f"coordinate map fails: {bad}")
    return iso


# -- maximal regular decomposition -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class RegularDecomposition:
    space: NearVectorSpace
    basis_classes: tuple[tuple[int, ...], ...]
    summands: tuple[Subspace, ...]
    component_map: np.ndarray

    def components(self, v: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.component_map[v])

    def to_json(self) -> dict:
        V = self.space
        return {
            "basis_classes": [[V.label(b) for b in c] for c in self.basis_classes],
            "summands": [[V.label(v) for v in s] for s in self.summands],
        }


def _compat_classes(V: NearVectorSpace, basis: Sequence[int]) -> list[list[int]]:
    parent = {b: b for b in basis}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(basis):
        for b in basis[i + 1:]:
            if compatible(V, a, b)[0]:
                parent[find(b)] = find(a)
    classes: dict[int, list[int]] = {}
    for b in basis:
        classes.setdefault(find(b), []).append(b)
    return sorted(classes.values(), key=lambda c: c[0])


def maximal_regular_decomposition(V: NearVectorSpace) -> RegularDecomposition:
    """Split ``V`` into maximal regular subspaces.

    A scalar basis is partitioned by the transitive closure of
    compatibility; each class spans one summand.  The result is certified:
    the sum is direct, every summand is regular, and adding any quasi-kernel
    vector of another summand destroys regularity.
    """
    cached = V._cache.get("regular_decomposition")
    if cached is not None:
        return cached
    if V.size == 1:
        dec = RegularDecomposition(V, (), (), np.zeros((1, 0), dtype=np.int64))
        V._cache["regular_decomposition"] = dec
        return dec
    basis = scalar_basis(V)
    classes = _compat_classes(V, basis)
    summands = [span(V, c) for c in classes]
    comp = direct_sum_map(V, [sorted(s.members) for s in summands])
    if comp is None:
        raise InvariantError("compatibility classes do not give a direct sum")
    for s in summands:
        W = V.restrict(s.members)
        if not is_regular(W):
            raise InvariantError("a compatibility class spans a non-regular subspace")
    for i, s in enumerate(summands):
        for j, t in enumerate(summands):
            if i == j:
                continue
            for q in sorted(t.members):
                if q == V.zero or not V.q_mask[q]:
                    continue
                bigger = span(V, list(s.members) + [q])
                if is_regular(V.restrict(bigger.members)):
                    raise InvariantError("summand is not maximal regular")
    dec = RegularDecomposition(V, tuple(tuple(c) for c in classes), tuple(summands), comp)
    V._cache["regular_decomposition"] = dec
    return dec


def regular_components(V: NearVectorSpace, v: int) -> tuple[int, ...]:
    """The unique components of ``v`` along the maximal regular decomposition."""
    return maximal_regular_decomposition(V).components(v)


# -- dimension reports --------------------------------------------------------------


@dataclass(frozen=True)
class DimensionReport:
    base_point: int
    dim_space: int
    dim_stratum: int
    regular: bool

    @property
    def equal(self) -> bool:
        return self.dim_space == self.dim_stratum

    @property
    def consistent(self) -> bool:
        """Equality is required for regular spaces; otherwise either outcome is allowed."""
        return self.equal or not self.regular


def check_dimension_corollary(V: NearVectorSpace, u: int) -> DimensionReport:
    V.require_q_star(u)
    dim_v = len(scalar_basis(V))
    d = distributive_of(V, u)
    dim_s = len(d_basis(V, d, stratum(V, u).nonzero))
    return DimensionReport(u, dim_v, dim_s, is_regular(V))


def _summand_spaces(V: NearVectorSpace):
    cached = V._cache.get("summand_spaces")
    if cached is not None:
        return cached
    dec = maximal_regular_decomposition(V)
    out = []
    for cls, s in zip(dec.basis_classes, dec.summands):
        W = V.restrict(s.members)
        back = np.full(V.size, -1, dtype=np.int64)
        back[W.parent_index] = np.arange(W.size)
        u = int(back[cls[0]])
        iso = canonical_isomorphism(W, u)
        F_u = W.nearfield_of(u)
        d = distributive_of(W, u)
        coords = right_coordinates(F_u, d, delta_basis(F_u, d))
        out.append((back, iso, d, coords))
    V._cache["summand_spaces"] = out
    return out


def dim_element_fast(V: NearVectorSpace, v: int) -> int:
    """Element dimension from the regular components, without searching sums.

    Each component is carried into ``F_u^B`` by the coordinate isomorphism
    of its summand; there the dimension is the rank, over the distributive
    subfield, of the matrix of coordinates of its entries.
    """
    if V.size == 1:
        return 0
    comps = regular_components(V, v)
    total = 0
    for c, (back, iso, d, coords) in zip(comps, _summand_spaces(V)):
        if c == V.zero:
            continue
        x = iso.target.coords[iso(int(back[c]))]
        total += rank(d, [coords[int(e)] for e in x])
    return total


@dataclass(frozen=True)
class SpanFamilyReport:
    vector: int
    components: tuple[int, ...]
    span_is_direct_sum: bool
    dim: int
    component_dims: tuple[int, ...]
    nonzero_components: int

    @property
    def additive(self) -> bool:
        return self.dim == sum(self.component_dims)

    @property
    def bounded(self) -> bool:
        return self.dim >= self.nonzero_components

    @property
    def ok(self) -> bool:
        return self.span_is_direct_sum and self.additive and self.bounded


def check_span_family(V: NearVectorSpace, v: int) -> SpanFamilyReport:
    """Compare ``span(v)`` with the direct sum of the spans of its regular components."""
    comps = regular_components(V, v)
    whole = span(V, [v])
    parts = [sorted(span(V, [c]).members) for c in comps]
    direct = direct_sum_map(V, parts, sorted(whole.members)) is not None
    dims = dimension_table(V)
    return SpanFamilyReport(
        v, comps, direct, int(dims[v]), tuple(int(dims[c]) for c in comps),
        sum(1 for c in comps if c != V.zero),
    )
