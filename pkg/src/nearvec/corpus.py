"""Named example spaces and the corpus runner.

Registry names::

    dickson<q>-self, dickson<q>-sq, dickson<q>-<n>   (q = p^2)
    prime-<p>-<n>
    twisted-<p>-<k1>-<k2>-...

A corpus is a JSON list (or ``{"entries": [...]}``) of descriptors.  Each
descriptor has an ``id`` and exactly one of ``registry`` (a name above),
``space`` (a space JSON object) or ``nearfield`` (a near-field JSON object
or builder).  Near-field entries are only checked against the axioms and
for a closed distributive set; space entries get the full suite.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .errors import EmptyCorpusError, NearVecError, ParseError
from .formats import nearfield_from_json, space_from_json, space_to_json
from .nearfield import NearFieldTable, dickson_p2, distributive_elements, prime_field, verify_nearfield
from .properties import PROPERTIES
from .regularity import (
    canonical_isomorphism,
    check_dimension_corollary,
    check_span_family,
    condition_suite,
    dim_element_fast,
    distributive_decomposition,
    is_regular,
    maximal_regular_decomposition,
)
from .space import NearVectorSpace, dimension_table, product_space, scalar_basis, twisted_space, verify_space

__all__ = [
    "DEFAULT_CORPUS",
    "ORACLE_LIMIT",
    "registry_space",
    "CorpusSpec",
    "CheckOutcome",
    "space_checks",
    "run_corpus",
]

DEFAULT_CORPUS = (
    "dickson25-self",
    "dickson25-sq",
    "dickson9-self",
    "dickson9-sq",
    "prime-5-1",
    "prime-5-2",
    "prime-5-3",
    "twisted-5-1-3",
    "twisted-5-1-1-3",
    "twisted-7-1-5",
)

# element-by-element dimension checks are run up to this size
ORACLE_LIMIT = 700

_DICKSON = re.compile(r"dickson(\d+)-(self|sq|\d+)$")
_PRIME = re.compile(r"prime-(\d+)-(\d+)$")
_TWISTED = re.compile(r"twisted-(\d+)((?:-\d+)+)$")


def _sqrt_prime(q: int) -> int:
    p = math.isqrt(q)
    if p * p != q:
        raise ParseError(f"dickson order {q} is not a prime square")
    return p


def registry_space(name: str) -> NearVectorSpace:
    """Build a registry space from its name."""
    m = _DICKSON.match(name)
    if m:
        F = dickson_p2(_sqrt_prime(int(m.group(1))))
        n = {"self": 1, "sq": 2}.get(m.group(2)) or int(m.group(2))
        V = product_space(F, n)
    elif (m := _PRIME.match(name)):
        V = product_space(prime_field(int(m.group(1))), int(m.group(2)))
    elif (m := _TWISTED.match(name)):
        V = twisted_space(int(m.group(1)), [int(k) for k in m.group(2).strip("-").split("-")])
    else:
        raise ParseError(f"unknown space name {name!r}")
    object.__setattr__(V, "name", name)
    return V


@dataclass
class CorpusSpec:
    entries: list[dict] = field(default_factory=list)

    @classmethod
    def default(cls) -> CorpusSpec:
        return cls([{"id": n, "registry": n} for n in DEFAULT_CORPUS])

    @classmethod
    def from_json(cls, data) -> CorpusSpec:
        if isinstance(data, dict):
            data = data.get("entries", [])
        if not isinstance(data, list):
            raise ParseError("corpus must be a list of descriptors")
        out = []
        for i, e in enumerate(data):
            if isinstance(e, str):
                e = {"id": e, "registry": e}
            if not isinstance(e, dict):
                raise ParseError(f"corpus entry {i} is not an object")
            keys = [k for k in ("registry", "space", "nearfield") if k in e]
            if len(keys) != 1:
                raise ParseError(f"corpus entry {i} needs exactly one of registry, space, nearfield")
            e = dict(e)
            e.setdefault("id", e.get("registry") or f"entry-{i}")
            out.append(e)
        return cls(out)

    @classmethod
    def load(cls, path: str) -> CorpusSpec:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if not text.strip():
            return cls([])
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"corpus file is not JSON: {exc}") from None

    def to_json(self) -> dict:
        return {"entries": [dict(e) for e in self.entries]}

    def expanded(self) -> CorpusSpec:
        """Replace registry names by explicit space JSON (round-trip form)."""
        out = []
        for e in self.entries:
            if "registry" in e:
                e = {"id": e["id"], "space": space_to_json(registry_space(e["registry"]))}
            out.append(e)
        return CorpusSpec(out)

    def build(self, entry: dict):
        if "registry" in entry:
            return registry_space(entry["registry"])
        if "space" in entry:
            V = space_from_json(entry["space"])
            object.__setattr__(V, "name", entry["id"])
            return V
        return nearfield_from_json(entry["nearfield"], verify=False, name=entry["id"])


@dataclass(frozen=True)
class CheckOutcome:
    entry: str
    check: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        if self.ok:
            return f"ok   {self.entry} {self.check}"
        return f"FAIL {self.entry} {self.check}: {self.detail}"


def _nearfield_checks(F: NearFieldTable) -> Iterator[tuple[str, Callable[[], str | None]]]:
    def axioms():
        rep = verify_nearfield(F)
        if rep.ok:
            return None
        f = rep.failures[0]
        return f"axiom {f.name} fails, witness {f.witness}"

    def distributive():
        w = distributive_elements(F).closure_witness()
        return None if w is None else f"distributive set not closed: {w}"

    yield "axioms", axioms
    yield "distributive-closure", distributive


def space_checks(V: NearVectorSpace) -> Iterator[tuple[str, Callable[[], str | None]]]:
    """Named checks over one space; each callable returns ``None`` or a failure description."""
    yield from ((f"scalar-{n}", c) for n, c in _nearfield_checks(V.scalar))

    def axioms():
        rep = verify_space(V)
        return None if rep.ok else f"axiom {rep.failures[0].name} fails, witness {rep.failures[0].witness}"

    def equivalence():
        for u in V.q_star:
            verdict = condition_suite(V, u)
            if not verdict.agree:
                return f"conditions disagree at u={V.label(u)}: {verdict.values}"
        return None

    def dimension():
        for u in V.q_star:
            rep = check_dimension_corollary(V, u)
            if not rep.consistent:
                return f"dimension corollary fails at u={V.label(u)}: {rep.dim_space} vs {rep.dim_stratum}"
        if len(scalar_basis(V, "reverse")) != len(scalar_basis(V)):
            return "scalar basis length depends on order"
        return None

    def oracle():
        if V.size > ORACLE_LIMIT:
            return None
        table = dimension_table(V)
        for v in V.vectors:
            if dim_element_fast(V, v) != table[v]:
                return f"fast dimension differs from search at v={V.label(v)}"
            if not check_span_family(V, v).ok:
                return f"span family check fails at v={V.label(v)}"
        return None

    def decompositions():
        dec = maximal_regular_decomposition(V)
        if is_regular(V):
            if len(dec.summands) != 1:
                return "regular space split into several summands"
            for u in V.q_star:
                distributive_decomposition(V, u)
            for u in _reps(V):
                canonical_isomorphism(V, u)
        return None

    yield "space-axioms", axioms
    yield "equivalence-matrix", equivalence
    for prop in PROPERTIES:
        yield prop.__name__.replace("_", "-"), _wrap(prop, V)
    yield "dimension-corollary", dimension
    yield "dimension-oracle", oracle
    yield "decompositions", decompositions


def _reps(V: NearVectorSpace) -> list[int]:
    ids = V.addition_ids
    seen: dict[int, int] = {}
    for v in V.q_star:
        seen.setdefault(int(ids[v]), v)
    return list(seen.values())


def _wrap(prop, V):
    def run():
        r = prop(V)
        return None if r.ok else f"witness {r.witness}"
    return run


def _checks_for(obj) -> Iterator[tuple[str, Callable[[], str | None]]]:
    if isinstance(obj, NearFieldTable):
        return _nearfield_checks(obj)
    return space_checks(obj)


def run_corpus(spec: CorpusSpec, out: Callable[[str], None] = print, repro: str = "nvs-corpus") -> tuple[bool, list[CheckOutcome]]:
    """Run every check on every entry, stopping at the first failure.

    Emits one line per check and a final ``PASS k/k`` summary, or the
    failing line followed by a reproduction command.
    """
    if not spec.entries:
        raise EmptyCorpusError()
    results: list[CheckOutcome] = []
    for entry in spec.entries:
        eid = entry["id"]
        try:
            obj = spec.build(entry)
            checks = list(_checks_for(obj))
        except NearVecError as exc:
            res = CheckOutcome(eid, "build", False, f"{exc.code}: {exc}")
            results.append(res)
            out(res.line())
            out(f"repro: {repro} --only {eid}")
            return False, results
        for name, fn in checks:
            try:
                detail = fn()
            except NearVecError as exc:
                detail = f"{exc.code}: {exc}"
            res = CheckOutcome(eid, name, detail is None, detail or "")
            results.append(res)
            out(res.line())
            if not res.ok:
                out(f"repro: {repro} --only {eid}")
                return False, results
    k = len(results)
    out(f"PASS {k}/{k}")
    return True, results
