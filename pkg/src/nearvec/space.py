"""Finite near-vector spaces and the objects attached to their quasi-kernel.

A :class:`NearVectorSpace` is stored as a dense addition table on the
vector carrier ``range(m)`` and an action table ``act[scalar, vector]``.
Product and twisted spaces additionally keep the coordinate tuple of each
vector so that vectors can be rendered and parsed componentwise.

The quasi-kernel scan computes every induced addition at the same time:
for ``v != 0`` the orbit ``act[:, v]`` is a bijective image of the scalars,
so ``alpha v + beta v`` lies in the orbit exactly when it has a preimage,
and that preimage *is* ``alpha +_v beta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvariantError,
    NotFreeError,
    NotInQuasiKernelError,
    ParseError,
    SizeBoundError,
)
from .nearfield import (
    AxiomResult,
    DistributiveSet,
    NearFieldTable,
    VerificationReport,
    distributive_elements,
    prime_field,
)

__all__ = [
    "MAX_SPACE",
    "NearVectorSpace",
    "QuasiKernel",
    "InducedAddition",
    "Stratum",
    "Subspace",
    "AdditionsIndex",
    "product_space",
    "twisted_space",
    "table_space",
    "verify_space",
    "quasi_kernel",
    "induced_addition",
    "distributive_of",
    "stratum",
    "additions_index",
    "in_K",
    "span",
    "closure",
    "scalar_basis",
    "is_scalar_basis",
    "dim_element",
    "dimension_table",
]

# dense m x m addition tables; 4096^2 int64 entries is already 128 MiB
MAX_SPACE = 4096


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class NearVectorSpace:
    scalar: NearFieldTable
    add: np.ndarray
    act: np.ndarray
    zero: int = 0
    kind: str = "table"
    params: dict = field(default_factory=dict)
    coords: np.ndarray | None = None
    component: NearFieldTable | None = None
    name: str = ""
    parent_index: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "add", _frozen(self.add))
        object.__setattr__(self, "act", _frozen(self.act))

    def __repr__(self):
        return f"NearVectorSpace({self.name or self.kind}, |V|={self.size})"

    @property
    def size(self) -> int:
        return len(self.add)

    @property
    def vectors(self) -> range:
        return range(self.size)

    @property
    def neg_table(self) -> np.ndarray:
        if "neg" not in self._cache:
            hits = np.argwhere(self.add == self.zero)
            neg = np.full(self.size, -1, dtype=np.int64)
            neg[hits[:, 0]] = hits[:, 1]
            self._cache["neg"] = neg
        return self._cache["neg"]

    def scale(self, lam: int, v: int) -> int:
        return int(self.act[lam, v])

    def plus(self, v: int, w: int) -> int:
        return int(self.add[v, w])

    def total(self, vs: Iterable[int]) -> int:
        acc = self.zero
        for v in vs:
            acc = int(self.add[acc, v])
        return acc

    # -- rendering ---------------------------------------------------------

    def label(self, v: int) -> str:
        if self.parent_index is not None and "parent" in self._cache:
            return self._cache["parent"].label(int(self.parent_index[v]))
        if self.coords is None:
            return str(v)
        comp = self.component
        parts = [comp.label(int(c)) for c in self.coords[v]]
        if len(parts) == 1:
            return parts[0]
        return "(" + ",".join(parts) + ")"

    def parse(self, token: str) -> int:
        """Parse a vector literal such as ``1+g``, ``(1+g,0)`` or a bare index for table spaces."""
        text = token.strip()
        if self.coords is None:
            lookup = {self.label(v): v for v in self.vectors}
            if text in lookup:
                return lookup[text]
            try:
                v = int(text)
            except ValueError:
                raise ParseError(f"bad vector literal {token!r}") from None
            if 0 <= v < self.size:
                return v
            raise ParseError(f"vector index {v} out of range")
        inner = text[1:-1] if text.startswith("(") and text.endswith(")") else text
        parts = [p.strip() for p in inner.split(",")]
        d = self.coords.shape[1]
        if len(parts) != d:
            raise ParseError(f"vector literal {token!r} needs {d} components")
        digits = []
        for p in parts:
            try:
                digits.append(self.component.parse(p))
            except KeyError:
                raise ParseError(f"bad component {p!r} in {token!r}") from None
        return _encode(digits, self.component.size)

    # -- quasi-kernel scan ---------------------------------------------------

    def _scan(self) -> dict:
        cache = self._cache.get("scan")
        if cache is not None:
            return cache
        n, m = self.scalar.size, self.size
        member = np.zeros(m, dtype=bool)
        member[self.zero] = True
        tables: dict[int, np.ndarray] = {}
        witness: dict[int, tuple[int, int]] = {}
        ids = np.full(m, -1, dtype=np.int64)
        distinct: list[np.ndarray] = []
        keys: dict[bytes, int] = {}
        pos = np.full(m, -1, dtype=np.int64)
        scal = np.arange(n)
        for v in range(m):
            if v == self.zero:
                continue
            orbit = self.act[:, v]
            pos[orbit] = scal
            if not np.array_equal(pos[orbit], scal):
                pos[orbit] = -1
                raise NotFreeError(f"vector {self.label(v)} has a nontrivial stabiliser")
            g = pos[self.add[orbit[:, None], orbit[None, :]]]
            pos[orbit] = -1
            bad = np.argwhere(g < 0)
            if len(bad):
                witness[v] = (int(bad[0][0]), int(bad[0][1]))
                continue
            member[v] = True
            g.setflags(write=False)
            key = g.tobytes()
            if key not in keys:
                keys[key] = len(distinct)
                distinct.append(g)
            ids[v] = keys[key]
            tables[v] = distinct[keys[key]]
        cache = {"member": member, "tables": tables, "witness": witness, "ids": ids, "distinct": distinct}
        self._cache["scan"] = cache
        return cache

    @property
    def q_mask(self) -> np.ndarray:
        return self._scan()["member"]

    @property
    def q_star(self) -> list[int]:
        """Nonzero quasi-kernel elements in carrier order."""
        mask = self.q_mask
        return [v for v in range(self.size) if mask[v] and v != self.zero]

    @property
    def addition_ids(self) -> np.ndarray:
        """``ids[v]`` numbers the distinct induced additions (``-1`` off ``Q(V)*``)."""
        return self._scan()["ids"]

    @property
    def distinct_additions(self) -> list[np.ndarray]:
        return self._scan()["distinct"]

    def require_q_star(self, u: int) -> None:
        if u == self.zero:
            raise NotInQuasiKernelError(self.label(u))
        if not self.q_mask[u]:
            a, b = self._scan()["witness"][u]
            lab = self.scalar.label
            raise NotInQuasiKernelError(self.label(u), (lab(a), lab(b)))

    def nearfield_of(self, u: int) -> NearFieldTable:
        """``F_u``: the scalars with addition ``+_u`` and the original multiplication."""
        self.require_q_star(u)
        k = int(self.addition_ids[u])
        cache = self._cache.setdefault("F_u", {})
        if k not in cache:
            cache[k] = self.scalar.with_addition(self.distinct_additions[k], name=f"F_{self.label(u)}")
        return cache[k]

    def restrict(self, members: Iterable[int], name: str = "") -> NearVectorSpace:
        """The subspace on ``members`` as a space in its own right (reindexed)."""
        idx = np.array(sorted(set(int(x) for x in members)), dtype=np.int64)
        back = np.full(self.size, -1, dtype=np.int64)
        back[idx] = np.arange(len(idx))
        add = back[self.add[np.ix_(idx, idx)]]
        act = back[self.act[:, idx]]
        if (add < 0).any() or (act < 0).any():
            raise InvariantError("member set is not closed under addition and the action")
        sub = NearVectorSpace(
            self.scalar, add, act, int(back[self.zero]), "sub", {}, None, None,
            name or f"{self.name}|sub{len(idx)}", idx,
        )
        sub._cache["parent"] = self
        return sub


def _encode(digits: Sequence[int], q: int) -> int:
    # little-endian: the first component is the least significant digit
    v = 0
    for d in reversed(digits):
        v = v * q + int(d)
    return v


def _coords(q: int, d: int) -> np.ndarray:
    m = q**d
    out = np.empty((m, d), dtype=np.int64)
    rest = np.arange(m)
    for i in range(d):
        out[:, i] = rest % q
        rest //= q
    return out


def _weights(q: int, d: int) -> np.ndarray:
    return q ** np.arange(d)


def product_space(F, n: int) -> NearVectorSpace:
    """``F^n`` with componentwise addition and ``lam (x_i) = (lam x_i)``.

    ``F`` may be a :class:`NearFieldTable` or an :class:`InducedAddition`
    (in which case ``F_u`` is used).
    """
    if isinstance(F, InducedAddition):
        F = F.nearfield()
    if n < 1:
        raise ValueError("n must be at least 1")
    q = F.size
    if q**n > MAX_SPACE:
        raise SizeBoundError(f"|F|^n = {q}^{n} exceeds {MAX_SPACE}")
    c = _coords(q, n)
    w = _weights(q, n)
    add = (F.add[c[:, None, :], c[None, :, :]] * w).sum(axis=2)
    act = (F.mul[:, c] * w).sum(axis=2)
    return NearVectorSpace(F, add, act, 0, "product", {"n": n}, c, F, name=f"{F.name}^{n}")


def twisted_space(p: int, exponents: Sequence[int]) -> NearVectorSpace:
    """``(Z_p)^d`` with ``a * (x_i) = (a^{k_i} x_i)``; requires ``gcd(k_i, p-1) == 1``."""
    F = prime_field(p)
    exps = [int(k) for k in exponents]
    if not exps:
        raise ValueError("need at least one exponent")
    for k in exps:
        g = math.gcd(k, p - 1)
        if k < 1 or g != 1:
            raise NotFreeError(f"gcd({k},{p - 1})={g}: action not free", exponent=k, gcd=g)
    d = len(exps)
    if p**d > MAX_SPACE:
        raise SizeBoundError(f"{p}^{d} exceeds {MAX_SPACE}")
    c = _coords(p, d)
    w = _weights(p, d)
    add = (((c[:, None, :] + c[None, :, :]) % p) * w).sum(axis=2)
    powers = np.array([[pow(a, k, p) for k in exps] for a in range(p)])
    act = (((powers[:, None, :] * c[None, :, :]) % p) * w).sum(axis=2)
    name = "twisted-%d-%s" % (p, "-".join(map(str, exps)))
    return NearVectorSpace(F, add, act, 0, "twisted", {"exponents": exps}, c, F, name=name)


def table_space(scalar: NearFieldTable, add, act, zero: int = 0, name: str = "") -> NearVectorSpace:
    add = np.asarray(add)
    act = np.asarray(act)
    if add.ndim != 2 or add.shape[0] != add.shape[1]:
        raise InvariantError(f"addition table must be square, got {add.shape}")
    if act.shape != (scalar.size, add.shape[0]):
        raise InvariantError(f"action table must be {(scalar.size, add.shape[0])}, got {act.shape}")
    if add.shape[0] > MAX_SPACE:
        raise SizeBoundError(f"|V|={add.shape[0]} exceeds {MAX_SPACE}")
    return NearVectorSpace(scalar, add, act, zero, "table", {}, name=name)


# -- invariants ---------------------------------------------------------------


def _first(mask) -> tuple | None:
    hits = np.argwhere(mask)
    return None if len(hits) == 0 else tuple(int(x) for x in hits[0])


def verify_space(V: NearVectorSpace) -> VerificationReport:
    """Exhaustive check of the near-vector-space axioms."""
    add, act, z, F = V.add, V.act, V.zero, V.scalar
    m = V.size
    idx = np.arange(m)
    out = []

    def put(name, w):
        out.append(AxiomResult(name, w is None, w))

    put("add-identity", _first((add[z] != idx) | (add[:, z] != idx)))
    put("add-inverse", _first(~(add == z).any(axis=1)))
    put("add-commutative", _first(add != add.T))
    w = None
    for a in range(m):
        bad = _first(add[add[a]][:, idx] != add[a][add])
        if bad is not None:
            w = (a,) + bad
            break
    put("add-associative", w)

    w = None
    for lam in range(F.size):
        row = act[lam]
        bad = _first(row[add] != add[row[:, None], row[None, :]])
        if bad is not None:
            w = (lam,) + bad
            break
    put("action-additive", w)
    # (lam mu) v == lam (mu v)
    put("action-compatible", _first(act[F.mul] != act[np.arange(F.size)[:, None, None], act[None, :, :]]))
    put("action-one", _first(act[F.one] != idx))
    put("action-zero", _first(act[F.zero] != z))
    put("action-minus-one", _first(add[idx, act[F.minus_one]] != z))
    w = None
    for v in range(m):
        if v != z and len(np.unique(act[:, v])) != F.size:
            w = (v,)
            break
    put("action-free", w)
    if w is None:
        q = V.q_star
        gen = closure(V, q, orbit=False)
        missing = [v for v in range(m) if not gen[v]]
        put("quasi-kernel-generates", None if not missing else (missing[0],))
    else:
        put("quasi-kernel-generates", ("skipped: action not free",))
    return VerificationReport(tuple(out))


# -- quasi-kernel objects ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuasiKernel:
    owner: NearVectorSpace
    members: tuple[int, ...]

    def __contains__(self, v) -> bool:
        return bool(self.owner.q_mask[v])

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def quasi_kernel(V: NearVectorSpace) -> QuasiKernel:
    mask = V.q_mask
    return QuasiKernel(V, tuple(int(v) for v in np.flatnonzero(mask)))


@dataclass(frozen=True, eq=False)
class InducedAddition:
    owner: NearVectorSpace
    base_point: int
    table: np.ndarray

    def __call__(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def nearfield(self) -> NearFieldTable:
        return self.owner.nearfield_of(self.base_point)

    def __eq__(self, other):
        return isinstance(other, InducedAddition) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())


def induced_addition(V: NearVectorSpace, u: int) -> InducedAddition:
    """The table of ``+_u``; raises :class:`NotInQuasiKernelError` unless ``u`` is in ``Q(V)*``."""
    V.require_q_star(u)
    return InducedAddition(V, u, V._scan()["tables"][u])


def distributive_of(V: NearVectorSpace, u: int) -> DistributiveSet:
    return distributive_elements(V.nearfield_of(u))


@dataclass(frozen=True, eq=False)
class Stratum:
    owner: NearVectorSpace
    base_point: int
    members: frozenset[int]

    def __contains__(self, v) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    @property
    def nonzero(self) -> list[int]:
        return [v for v in sorted(self.members) if v != self.owner.zero]


def stratum(V: NearVectorSpace, u: int) -> Stratum:
    """``Q_u(V)``: quasi-kernel elements whose induced addition equals ``+_u``, plus zero."""
    V.require_q_star(u)
    ids = V.addition_ids
    members = set(np.flatnonzero(ids == ids[u]).tolist())
    members.add(V.zero)
    return Stratum(V, u, frozenset(members))


@dataclass(frozen=True, eq=False)
class AdditionsIndex:
    owner: NearVectorSpace
    base_point: int
    additions: tuple[int, ...]
    cosets: tuple[tuple[int, ...], ...]
    coset_map: dict
    well_defined: bool
    injective: bool
    surjective: bool

    @property
    def representatives(self) -> list[int]:
        return [c[0] for c in self.cosets]

    @property
    def bijective(self) -> bool:
        return self.well_defined and self.injective and self.surjective


def scalar_cosets(F: NearFieldTable, d: DistributiveSet) -> list[tuple[int, ...]]:
    """Classes ``d* a`` of ``F*`` modulo ``d*``, each led by its smallest element."""
    seen = set()
    out = []
    dnz = d.nonzero
    for a in F.nonzero:
        if a in seen:
            continue
        coset = tuple(sorted({int(F.mul[x, a]) for x in dnz}))
        seen.update(coset)
        out.append(coset)
    return out


def additions_index(V: NearVectorSpace, u: int) -> AdditionsIndex:
    """The set ``A_V`` of distinct additions and the coset map ``[a] -> +_{a u}``."""
    d = distributive_of(V, u)
    ids = V.addition_ids
    all_ids = tuple(sorted(set(int(ids[v]) for v in V.q_star)))
    cosets = scalar_cosets(V.scalar, d)
    well = True
    cmap = {}
    for c in cosets:
        hit = {int(ids[V.act[a, u]]) for a in c}
        well &= len(hit) == 1
        cmap[c[0]] = int(ids[V.act[c[0], u]])
    image = list(cmap.values())
    return AdditionsIndex(
        V, u, all_ids, tuple(cosets), cmap, well,
        len(set(image)) == len(image), set(image) == set(all_ids),
    )


def in_K(d: DistributiveSet, x: Sequence[int]) -> bool:
    """Whether every component of the tuple ``x`` is a distributive element."""
    return all(int(c) in d for c in x)


# -- spans and bases -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    owner: NearVectorSpace
    members: frozenset[int]

    def __contains__(self, v) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    @property
    def mask(self) -> np.ndarray:
        out = np.zeros(self.owner.size, dtype=bool)
        out[list(self.members)] = True
        return out


def closure(V: NearVectorSpace, gens: Iterable[int], orbit: bool = True, scalars=None) -> np.ndarray:
    """Boolean mask of the additive closure of ``gens`` (and of their orbits when ``orbit``).

    ``scalars`` restricts the orbit to a subset of the scalars, which gives
    spans over a distributive subring.
    """
    g = np.array(sorted(set(int(x) for x in gens)), dtype=np.int64)
    if orbit and len(g):
        rows = V.act if scalars is None else V.act[np.array(sorted(scalars), dtype=np.int64)]
        g = np.unique(rows[:, g])
    mask = np.zeros(V.size, dtype=bool)
    mask[V.zero] = True
    frontier = np.array([V.zero], dtype=np.int64)
    if len(g) == 0:
        return mask
    while len(frontier):
        new = np.unique(V.add[np.ix_(frontier, g)])
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return mask


def span(V: NearVectorSpace, S: Iterable[int]) -> Subspace:
    """Smallest subset containing ``S`` and zero, closed under addition and the action."""
    mask = closure(V, S)
    return Subspace(V, frozenset(np.flatnonzero(mask).tolist()))


def scalar_basis(V: NearVectorSpace, order: Sequence[int] | str = "forward") -> list[int]:
    """Greedy scalar basis drawn from ``Q(V)*``.

    Candidates are taken in carrier order (or reversed, or an explicit
    sequence) and kept when they are not in the span of those already kept.
    """
    if isinstance(order, str):
        cands = V.q_star if order == "forward" else V.q_star[::-1]
    else:
        cands = [int(v) for v in order]
    chosen: list[int] = []
    cur = closure(V, [])
    for v in cands:
        if cur.all():
            break
        if not cur[v]:
            chosen.append(v)
            cur = closure(V, chosen)
    if not cur.all():
        raise InvariantError("Q(V) does not generate V")
    for i in range(len(chosen)):
        if closure(V, chosen[:i] + chosen[i + 1:]).all():
            raise InvariantError(f"greedy basis is not minimal: drop {V.label(chosen[i])}")
    return chosen


def sum_map(V: NearVectorSpace, basis: Sequence[int]) -> np.ndarray | None:
    """Image of every coefficient tuple ``(l_b)`` under ``sum l_b b``.

    Position ``i`` of the result holds the image of the tuple whose
    little-endian base-|F| code is ``i``, the same order used for vectors
    of product spaces.

    Returns ``None`` when ``|F|^|B|`` cannot equal ``|V|``.
    """
    n = V.scalar.size
    k = len(basis)
    if n**k != V.size:
        return None
    out = np.full(1, V.zero, dtype=np.int64)
    for b in reversed(basis):
        out = V.add[out[:, None], V.act[:, b][None, :]].ravel()
    return out


def is_scalar_basis(V: NearVectorSpace, basis: Sequence[int]) -> bool:
    """``B`` lies in ``Q(V)*`` and ``(l_b) -> sum l_b b`` is a bijection ``F^B -> V``."""
    if not all(V.q_mask[b] and b != V.zero for b in basis):
        return False
    img = sum_map(V, basis)
    return img is not None and len(np.unique(img)) == V.size


def dimension_table(V: NearVectorSpace) -> np.ndarray:
    """Breadth-first search over sums of quasi-kernel elements.

    Entry ``v`` is the least ``k`` such that ``v`` is a sum of ``k``
    elements of ``Q(V)*``; this is the brute-force dimension oracle.
    """
    cached = V._cache.get("dims")
    if cached is not None:
        return cached
    q = np.array(V.q_star, dtype=np.int64)
    dist = np.full(V.size, -1, dtype=np.int64)
    dist[V.zero] = 0
    frontier = np.array([V.zero], dtype=np.int64)
    level = 0
    while len(frontier) and len(q):
        level += 1
        new = np.unique(V.add[np.ix_(frontier, q)])
        new = new[dist[new] < 0]
        dist[new] = level
        frontier = new
    dist.setflags(write=False)
    V._cache["dims"] = dist
    return dist


def dim_element(V: NearVectorSpace, v: int) -> int:
    d = int(dimension_table(V)[v])
    if d < 0:
        raise InvariantError(f"{V.label(v)} is not a sum of quasi-kernel elements")
    return d
