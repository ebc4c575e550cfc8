"""Command-line front-ends: ``nearfield``, ``nvs`` and ``nvs-corpus``.

Exit status is 0 on success, 1 on a domain error (reported on stderr as
``error: <code>: <detail>``) and 2 on a usage error.  Vector and scalar
literals use the element notation of the tables: ``3``, ``g``, ``2+3g``
and tuples such as ``(1+g,0)``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Callable, Sequence

from .corpus import CorpusSpec, registry_space, run_corpus
from .errors import NearVecError, ParseError
from .formats import (
    format_table,
    load_nearfield,
    load_space,
    nearfield_to_json,
    nearfield_to_text,
    save_nearfield,
    save_space,
    space_to_json,
    table_tsv,
)
from .nearfield import NearFieldTable, dickson_p2, distributive_elements, prime_field, verify_nearfield
from .regularity import (
    canonical_isomorphism,
    condition_suite,
    dim_element_fast,
    distributive_decomposition,
    is_regular,
    maximal_regular_decomposition,
)
from .space import NearVectorSpace, dim_element, quasi_kernel, stratum

__all__ = ["nearfield_main", "nvs_main", "corpus_main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: usage: {message}", file=sys.stderr)
        raise SystemExit(2)


def _run(fn: Callable[[argparse.Namespace], int], parser: argparse.ArgumentParser, argv) -> int:
    args = parser.parse_args(argv)
    try:
        return fn(args)
    except NearVecError as exc:
        detail = str(exc)
        print(f"error: {exc.code}: {detail}" if detail else f"error: {exc.code}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc.strerror}: {exc.filename}", file=sys.stderr)
        return 1


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


# -- nearfield -----------------------------------------------------------------


def _nearfield_from_args(args) -> NearFieldTable:
    if args.kind == "file":
        if not args.input:
            raise ParseError("--kind file needs --in <path>")
        return load_nearfield(args.input, verify=args.command != "check")
    if args.p is None:
        raise ParseError(f"--kind {args.kind} needs --p <prime>")
    return prime_field(args.p) if args.kind == "prime" else dickson_p2(args.p)


def _cmd_nearfield(args) -> int:
    F = _nearfield_from_args(args)
    fmt = args.format
    if args.command == "build":
        if args.out:
            save_nearfield(F, args.out, "json" if fmt == "json" or args.out.endswith(".json") else "text")
        else:
            _emit(_dump(nearfield_to_json(F)) if fmt == "json" else nearfield_to_text(F), None)
        return 0
    if args.command == "table":
        if fmt == "json":
            text = _dump({"labels": [F.label(a) for a in F.elements], "mul": F.mul.tolist()})
        elif fmt == "tsv":
            text = table_tsv(F)
        else:
            text = format_table(F)
        _emit(text, args.out)
        return 0
    if args.command == "check":
        rep = verify_nearfield(F)
        _emit(_dump(rep.to_json()) if fmt == "json" else rep.text(), args.out)
        if not rep.ok:
            print(f"error: axiom-failed: {', '.join(r.name for r in rep.failures)}", file=sys.stderr)
            return 1
        return 0
    d = distributive_elements(F)
    if fmt == "json":
        _emit(_dump(d.labels()), args.out)
    else:
        _emit(" ".join(d.labels()), args.out)
    return 0


def _nearfield_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nearfield", description="Build, print and verify finite near-fields.")
    p.add_argument("command", choices=["build", "table", "check", "distributive"])
    p.add_argument("--kind", choices=["prime", "dickson", "file"], default="dickson")
    p.add_argument("--p", type=int)
    p.add_argument("--in", dest="input")
    p.add_argument("--format", choices=["text", "json", "tsv"], default="text")
    p.add_argument("--out")
    return p


def nearfield_main(argv: Sequence[str] | None = None) -> int:
    return _run(_cmd_nearfield, _nearfield_parser(), argv)


# -- nvs -------------------------------------------------------------------------


def _space_from_arg(spec: str) -> NearVectorSpace:
    if os.path.exists(spec):
        return load_space(spec)
    return registry_space(spec)


def _vector(V: NearVectorSpace, token: str | None, default: int | None = None) -> int:
    if token is None:
        if default is None:
            raise ParseError("a vector argument is required")
        return default
    return V.parse(token)


def _labels(V: NearVectorSpace, vs) -> list[str]:
    return [V.label(int(v)) for v in vs]


def _strata(V: NearVectorSpace) -> list[dict]:
    ids = V.addition_ids
    out, seen = [], set()
    for v in V.q_star:
        k = int(ids[v])
        if k in seen:
            continue
        seen.add(k)
        out.append({"u": V.label(v), "members": _labels(V, sorted(stratum(V, v).members))})
    return out


def _cmd_nvs(args) -> int:
    V = _space_from_arg(args.space)
    fmt = args.format
    cmd = args.command
    if cmd == "build":
        if args.out:
            save_space(V, args.out)
        else:
            _emit(json.dumps(space_to_json(V)), None)
        return 0
    if cmd == "quasikernel":
        members = _labels(V, quasi_kernel(V))
        if fmt == "json":
            text = _dump({"size": len(members), "members": members})
        else:
            text = "\n".join(members)
        _emit(text, args.out)
        return 0
    if cmd == "strata":
        rows = _strata(V)
        if fmt == "json":
            text = _dump(rows)
        else:
            text = "\n".join(f"Q_{r['u']} = {{{', '.join(r['members'])}}}" for r in rows)
        _emit(text, args.out)
        return 0
    if cmd == "regularity":
        q = V.q_star
        u = _vector(V, args.u, q[0] if q else None)
        verdict = condition_suite(V, u)
        if fmt == "tsv":
            text = "\n".join(["space\tu\tcondition\tholds\twitness"] + verdict.tsv_rows())
        else:
            text = _dump(verdict.to_json())
        _emit(text, args.out)
        return 0
    if cmd == "decompose":
        dec = maximal_regular_decomposition(V)
        report = {"space": V.name, "regular": is_regular(V), "maximal_regular": dec.to_json()}
        if report["regular"]:
            q = V.q_star
            u = _vector(V, args.u, q[0] if q else None)
            report["distributive"] = distributive_decomposition(V, u).to_json()
        _emit(_dump(report), args.out)
        return 0
    if cmd == "dim":
        v = _vector(V, args.v)
        slow = dim_element(V, v)
        fast = dim_element_fast(V, v)
        if fmt == "json":
            text = _dump({"v": V.label(v), "dim": slow, "fast": fast, "agree": slow == fast})
        else:
            text = f"{V.label(v)}\t{slow}\t{fast}\t{'agree' if slow == fast else 'DISAGREE'}"
        _emit(text, args.out)
        return 0 if slow == fast else 1
    # isocheck
    q = V.q_star
    u = _vector(V, args.u, q[0] if q else None)
    iso = canonical_isomorphism(V, u)
    report = {
        "u": V.label(u),
        "basis": _labels(V, iso.basis),
        "target": f"F_{V.label(u)}^{len(iso.basis)}",
        "verified": iso.check(),
    }
    _emit(_dump(report), args.out)
    return 0


def _nvs_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nvs", description="Quasi-kernels, strata, regularity and decompositions of near-vector spaces.")
    p.add_argument("command", choices=["build", "quasikernel", "strata", "regularity", "decompose", "dim", "isocheck"])
    p.add_argument("--space", required=True, help="space JSON file or registry name")
    p.add_argument("--u")
    p.add_argument("--v")
    p.add_argument("--format", choices=["text", "json", "tsv"], default="json")
    p.add_argument("--out")
    return p


def nvs_main(argv: Sequence[str] | None = None) -> int:
    return _run(_cmd_nvs, _nvs_parser(), argv)


# -- corpus -----------------------------------------------------------------------


def _cmd_corpus(args) -> int:
    spec = CorpusSpec.load(args.spec) if args.spec else CorpusSpec.default()
    if args.only:
        spec = CorpusSpec([e for e in spec.entries if e["id"] in args.only])
    if args.dump:
        _emit(_dump(spec.expanded().to_json() if args.expand else spec.to_json()), None)
        return 0
    repro = "nvs-corpus" + (f" --spec {args.spec}" if args.spec else "")
    start = time.perf_counter()
    ok, _ = run_corpus(spec, print, repro)
    if args.verbose:
        print(f"elapsed {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return 0 if ok else 1


def _corpus_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nvs-corpus", description="Run the invariant and equivalence suite over a corpus of spaces.")
    p.add_argument("--spec", help="corpus JSON (default: built-in corpus)")
    p.add_argument("--only", action="append", help="restrict to an entry id (repeatable)")
    p.add_argument("--dump", action="store_true", help="print the corpus descriptors and exit")
    p.add_argument("--expand", action="store_true", help="with --dump, inline registry spaces as space JSON")
    p.add_argument("--verbose", action="store_true", help="report timing on stderr")
    return p


def corpus_main(argv: Sequence[str] | None = None) -> int:
    return _run(_cmd_corpus, _corpus_parser(), argv)


def _entry(fn):
    def main():
        sys.exit(fn())
    return main


nearfield_entry = _entry(nearfield_main)
nvs_entry = _entry(nvs_main)
corpus_entry = _entry(corpus_main)
