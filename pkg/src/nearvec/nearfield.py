"""Finite left near-fields given by Cayley tables.

Elements are integer indices ``0 .. n-1``.  A :class:`NearFieldTable` stores
dense ``n x n`` addition and multiplication tables; everything else
(negation, inverses, the distributive elements) is derived from them by
exhaustive scans.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AxiomError, NearVecError, NotPrimeError, SizeBoundError, StructureError

__all__ = [
    "NearFieldTable",
    "AxiomResult",
    "VerificationReport",
    "DistributiveSet",
    "MAX_PRIME",
    "MAX_ORDER",
    "prime_field",
    "gf_p2",
    "dickson_p2",
    "squares",
    "verify_nearfield",
    "distributive_elements",
    "nearfield_from_tables",
    "smallest_nonresidue",
    "gf_label",
]

MAX_PRIME = 97
MAX_ORDER = 2**14


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class NearFieldTable:
    """A finite left near-field ``(F, +, *)`` over the carrier ``range(size)``."""

    size: int
    add: np.ndarray
    mul: np.ndarray
    zero: int
    one: int
    minus_one: int
    labels: tuple[str, ...] | None = None
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "add", _frozen(self.add))
        object.__setattr__(self, "mul", _frozen(self.mul))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    def __repr__(self):
        return f"NearFieldTable({self.name or 'size=%d' % self.size})"

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def nonzero(self) -> list[int]:
        return [a for a in range(self.size) if a != self.zero]

    def label(self, a: int) -> str:
        if self.labels is None:
            return str(a)
        return self.labels[a]

    def parse(self, token: str) -> int:
        """Inverse of :meth:`label`; whitespace and ``*`` are ignored."""
        key = token.replace(" ", "").replace("*", "")
        lookup = self._cache.get("parse")
        if lookup is None:
            lookup = {self.label(a).replace("*", ""): a for a in range(self.size)}
            self._cache["parse"] = lookup
        if key in lookup:
            return lookup[key]
        raise KeyError(token)

    @property
    def neg_table(self) -> np.ndarray:
        """Additive inverses, found by scanning each row of the addition table."""
        if "neg" not in self._cache:
            hits = np.argwhere(self.add == self.zero)
            neg = np.full(self.size, -1, dtype=np.int64)
            neg[hits[:, 0]] = hits[:, 1]
            self._cache["neg"] = neg
        return self._cache["neg"]

    @property
    def inv_table(self) -> np.ndarray:
        """Multiplicative inverses; the entry at ``zero`` is ``-1``."""
        if "inv" not in self._cache:
            hits = np.argwhere(self.mul == self.one)
            inv = np.full(self.size, -1, dtype=np.int64)
            inv[hits[:, 0]] = hits[:, 1]
            inv[self.zero] = -1
            self._cache["inv"] = inv
        return self._cache["inv"]

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == self.zero:
            raise ZeroDivisionError("zero has no inverse")
        return int(self.inv_table[a])

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def same_tables(self, other: NearFieldTable) -> bool:
        return (
            self.size == other.size
            and (self.zero, self.one, self.minus_one) == (other.zero, other.one, other.minus_one)
            and np.array_equal(self.add, other.add)
            and np.array_equal(self.mul, other.mul)
        )

    def with_addition(self, add, name: str = "") -> NearFieldTable:
        """Same multiplication, different addition (used to build ``F_u``)."""
        add = np.asarray(add)
        minus_one = int(np.flatnonzero(add[self.one] == self.zero)[0])
        return NearFieldTable(
            self.size, add, self.mul, self.zero, self.one, minus_one, self.labels, name or self.name
        )


# -- construction ---------------------------------------------------------


def _divisor(n: int) -> int | None:
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return d
    return None


def _check_prime(p: int) -> None:
    if p < 2:
        raise NotPrimeError(p)
    d = _divisor(p)
    if d is not None:
        raise NotPrimeError(p, d)


def prime_field(p: int) -> NearFieldTable:
    """The field ``Z_p`` for a prime ``p <= MAX_PRIME``."""
    _check_prime(p)
    if p > MAX_PRIME:
        raise SizeBoundError(f"p={p} exceeds {MAX_PRIME}")
    r = np.arange(p)
    add = (r[:, None] + r[None, :]) % p
    mul = (r[:, None] * r[None, :]) % p
    return NearFieldTable(p, add, mul, 0, 1, p - 1, name=f"Z{p}")


def smallest_nonresidue(p: int) -> int:
    residues = {(x * x) % p for x in range(1, p)}
    return next(r for r in range(2, p) if r not in residues)


def gf_label(a: int, b: int) -> str:
    """Render ``a + b*g`` the way the element listing of GF(p^2) is usually written."""
    if b == 0:
        return str(a)
    g = "g" if b == 1 else f"{b}g"
    return g if a == 0 else f"{a}+{g}"


def _gf_parts(p: int, nonresidue: int | None):
    if p == 2:
        raise NearVecError("dickson twists need an odd prime", p=p)
    _check_prime(p)
    if p * p > MAX_ORDER:
        raise SizeBoundError(f"p^2={p * p} exceeds {MAX_ORDER}")
    if nonresidue is None:
        nonresidue = 3 if p == 5 else smallest_nonresidue(p)
    q = p * p
    idx = np.arange(q)
    a, b = idx % p, idx // p
    # (a + b g)(c + d g) = (ac + r bd) + (ad + bc) g, with g^2 = r
    re = (a[:, None] * a[None, :] + nonresidue * b[:, None] * b[None, :]) % p
    im = (a[:, None] * b[None, :] + b[:, None] * a[None, :]) % p
    mul = re + p * im
    add = (a[:, None] + a[None, :]) % p + p * ((b[:, None] + b[None, :]) % p)
    labels = tuple(gf_label(int(x), int(y)) for x, y in zip(a, b))
    return q, add, mul, labels, nonresidue


def gf_p2(p: int, nonresidue: int | None = None) -> NearFieldTable:
    """The field GF(p^2) as ``Z_p[g]/(g^2 - r)``; element ``a + b g`` has index ``a + p*b``."""
    q, add, mul, labels, r = _gf_parts(p, nonresidue)
    return NearFieldTable(q, add, mul, 0, 1, p - 1, labels, name=f"GF({p}^2)")


def _power(mul: np.ndarray, x: int, k: int, one: int) -> int:
    acc = one
    for _ in range(k):
        acc = int(mul[acc, x])
    return acc


def dickson_p2(p: int, nonresidue: int | None = None) -> NearFieldTable:
    """Dickson near-field on GF(p^2): ``x o y = x*y`` if x is a square (or 0), else ``x*y^p``."""
    field_ = gf_p2(p, nonresidue)
    q = field_.size
    sq = squares(field_)
    frob = np.array([_power(field_.mul, y, p, field_.one) for y in range(q)])
    mul = np.array(field_.mul)
    for x in range(q):
        if x != field_.zero and x not in sq:
            mul[x] = field_.mul[x, frob]
    return NearFieldTable(q, field_.add, mul, 0, 1, p - 1, field_.labels, name=f"Dickson({p}^2)")


def squares(F: NearFieldTable) -> frozenset[int]:
    """Nonzero squares ``{x*x : x != 0}``."""
    d = np.diagonal(F.mul)
    return frozenset(int(d[x]) for x in F.nonzero)


# -- verification ---------------------------------------------------------


@dataclass(frozen=True)
class AxiomResult:
    name: str
    ok: bool
    witness: tuple | None = None

    def line(self) -> str:
        if self.ok:
            return f"{self.name}: pass"
        return f"{self.name}: FAIL {self.witness}"


@dataclass(frozen=True)
class VerificationReport:
    results: tuple[AxiomResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.ok]

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def text(self) -> str:
        return "\n".join(r.line() for r in self.results)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "axioms": {
                r.name: {"holds": r.ok, **({} if r.ok else {"witness": list(r.witness)})}
                for r in self.results
            },
        }


def _first(mask: np.ndarray) -> tuple | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(x) for x in hits[0])


def _assoc_witness(t: np.ndarray, chunk: int = 64) -> tuple | None:
    n = len(t)
    cols = np.arange(n)
    for start in range(0, n, chunk):
        rows = np.arange(start, min(n, start + chunk))
        left = t[t[rows][:, :, None], cols[None, None, :]]
        right = t[rows[:, None, None], t[None, :, :]]
        w = _first(left != right)
        if w is not None:
            return (w[0] + start, w[1], w[2])
    return None


def _left_dist_witness(add: np.ndarray, mul: np.ndarray, chunk: int = 64) -> tuple | None:
    # a*(b + c) == a*b + a*c
    n = len(add)
    for start in range(0, n, chunk):
        rows = np.arange(start, min(n, start + chunk))
        left = mul[rows[:, None, None], add[None, :, :]]
        ab = mul[rows]
        right = add[ab[:, :, None], ab[:, None, :]]
        w = _first(left != right)
        if w is not None:
            return (w[0] + start, w[1], w[2])
    return None


def _permutation_witness(rows: np.ndarray, labels: np.ndarray, allowed: np.ndarray):
    """First row that is not a permutation of ``allowed``; returns colliding cells."""
    target = np.sort(allowed)
    allowed_set = set(target.tolist())
    for i, row in zip(labels, rows):
        if np.array_equal(np.sort(row), target):
            continue
        seen: dict[int, int] = {}
        for j, v in enumerate(row):
            v = int(v)
            if v not in allowed_set:
                return (int(i), j, v)
            if v in seen:
                return (int(i), seen[v], j, v)
            seen[v] = j
    return None


def _check_structure(F: NearFieldTable) -> None:
    n = F.size
    for name in ("add", "mul"):
        t = getattr(F, name)
        if t.shape != (n, n):
            raise StructureError(f"{name} table has shape {t.shape}, expected {(n, n)}")
        if n and (t.min() < 0 or t.max() >= n):
            raise StructureError(f"{name} table has entries outside [0, {n})")
    for name in ("zero", "one", "minus_one"):
        if not 0 <= getattr(F, name) < n:
            raise StructureError(f"{name}={getattr(F, name)} outside [0, {n})")
    if n < 2:
        raise StructureError("a near-field needs at least two elements")


def verify_nearfield(F: NearFieldTable) -> VerificationReport:
    """Check every left near-field and scalar-group axiom by full table scan.

    Raises :class:`StructureError` before any axiom check when the tables
    are malformed.  Each failing axiom carries the first counterexample in
    carrier order.
    """
    _check_structure(F)
    add, mul, n = F.add, F.mul, F.size
    z, o, m1 = F.zero, F.one, F.minus_one
    idx = np.arange(n)
    nz = idx[idx != z]
    out = []

    def put(name, witness):
        out.append(AxiomResult(name, witness is None, witness))

    ident = (add[z] != idx) | (add[:, z] != idx)
    put("add-identity", None if not ident.any() else (z, int(np.argmax(ident))))
    missing = ~(add == z).any(axis=1)
    put("add-inverse", None if not missing.any() else (int(np.argmax(missing)),))
    put("add-commutative", _first(add != add.T))
    put("add-associative", _assoc_witness(add))

    zero_law = (mul[z] != z) | (mul[:, z] != z)
    put("mul-zero", None if not zero_law.any() else (z, int(np.argmax(zero_law))))
    one_law = (mul[o] != idx) | (mul[:, o] != idx)
    put("mul-identity", None if not one_law.any() else (o, int(np.argmax(one_law))))
    sub = mul[np.ix_(nz, nz)]
    w = _permutation_witness(sub, nz, nz)
    if w is not None:
        # map column positions back to element ids
        w = (w[0],) + tuple(int(nz[j]) for j in w[1:-1]) + (w[-1],)
    put("mul-group-rows", w)
    w = _permutation_witness(sub.T, nz, nz)
    if w is not None:
        w = (w[0],) + tuple(int(nz[j]) for j in w[1:-1]) + (w[-1],)
    put("mul-group-columns", w)
    put("mul-associative", _assoc_witness(mul))
    put("left-distributive", _left_dist_witness(add, mul))

    put("minus-one-additive", None if add[o, m1] == z else (o, m1, int(add[o, m1])))
    put("minus-one-square", None if mul[m1, m1] == o else (m1, m1, int(mul[m1, m1])))
    roots = set(np.flatnonzero(np.diagonal(mul) == o).tolist())
    put("square-roots-of-one", None if roots == {o, m1} else tuple(sorted(roots)))
    return VerificationReport(tuple(out))


def nearfield_from_tables(add, mul, zero: int, one: int, minus_one: int, labels=None, name="") -> NearFieldTable:
    """Build a near-field from raw tables; raises :class:`AxiomError` unless every axiom holds."""
    add = np.asarray(add)
    mul = np.asarray(mul)
    if add.ndim != 2 or add.shape[0] != add.shape[1] or mul.shape != add.shape:
        raise StructureError(f"tables must be square and equal in size, got {add.shape} and {mul.shape}")
    F = NearFieldTable(len(add), add, mul, zero, one, minus_one, labels, name)
    report = verify_nearfield(F)
    if not report.ok:
        raise AxiomError(report)
    return F


# -- distributive elements ------------------------------------------------


@dataclass(frozen=True, eq=False)
class DistributiveSet:
    """The distributive elements of a near-field, a subfield under its operations."""

    owner: NearFieldTable
    members: frozenset[int]

    def __contains__(self, a) -> bool:
        return a in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    @property
    def nonzero(self) -> list[int]:
        return [a for a in sorted(self.members) if a != self.owner.zero]

    def labels(self) -> list[str]:
        return [self.owner.label(a) for a in self]

    def add(self, a: int, b: int) -> int:
        return int(self.owner.add[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.owner.mul[a, b])

    def neg(self, a: int) -> int:
        return self.owner.neg(a)

    def inv(self, a: int) -> int:
        return self.owner.inv(a)

    def closure_witness(self) -> tuple | None:
        """First failure of the division-ring closure laws, or ``None``."""
        F, m = self.owner, sorted(self.members)
        for req in (F.zero, F.one, F.minus_one):
            if req not in self.members:
                return ("missing", req)
        for a in m:
            if F.neg(a) not in self.members:
                return ("neg", a)
            if a != F.zero and F.inv(a) not in self.members:
                return ("inv", a)
            for b in m:
                if int(F.add[a, b]) not in self.members:
                    return ("add", a, b)
                if int(F.mul[a, b]) not in self.members:
                    return ("mul", a, b)
        return None


def distributive_elements(F: NearFieldTable) -> DistributiveSet:
    """All ``c`` with ``(a + b)*c == a*c + b*c`` for every ``a, b`` (triple scan)."""
    cached = F._cache.get("distributive")
    if cached is not None:
        return cached
    add, mul = F.add, F.mul
    members = []
    for c in range(F.size):
        col = mul[:, c]
        lhs = col[add]
        rhs = add[col[:, None], col[None, :]]
        if np.array_equal(lhs, rhs):
            members.append(c)
    d = DistributiveSet(F, frozenset(members))
    F._cache["distributive"] = d
    return d
