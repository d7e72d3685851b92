"""Batch command-line front end: one verb per pipeline, JSON in, JSON or a
human-readable table out, byte-deterministic for identical inputs.

Exit codes: 0 success, 1 validation error, 2 mathematical error (degenerate
form, incompatible trivialization), 64 usage error, 65 malformed input JSON.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import _kernels
from .brauer import (AbelianVarietyData, azumaya_check, brauer_presentation,
                     cyclic_algebra, explicit_splitting, hilbert_symbol,
                     principal_ns, symbol_is_trivial, TorsionChar)
from .classification import brauer_classes, bundle_to_brauer, enumerate_pairs, pair_to_bundle
from .cubic import CubicCouple, CubicStructure, central_from_cubic, cubic_from_central, is_cubic
from .errors import (IncompatibleTrivializationError, InvalidArgumentError,
                     MathematicalError, UnsupportedError)
from .fingroup import FinAbGroup
from .pairing import AlternatingForm, elementary_divisors
from .schrodinger import primitive_root_of_unity, schrodinger
from .thetagroup import CocycleExtension, normalize_extension

__all__ = ["JobSpec", "run", "main", "format_cubic_text", "parse_cubic_text"]

VERBS = ("reduce-pairing", "theta-normalize", "verify-cubic", "cubic-to-central",
         "central-to-cubic", "schrodinger", "classify", "brauer", "hilbert-symbol",
         "cyclic-algebra")


@dataclass
class JobSpec:
    """One CLI invocation: a verb, its input document, and output options."""

    command: str
    document: dict | None = None
    output: str | None = None
    table: bool = False
    options: dict = field(default_factory=dict)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _require(doc: dict | None, key: str, option=None):
    if option is not None:
        return option
    if doc is None or key not in doc:
        raise InvalidArgumentError(f"missing required input field '{key}'")
    return doc[key]


def _group_of(doc_entry) -> FinAbGroup:
    if not isinstance(doc_entry, dict) or "moduli" not in doc_entry:
        raise InvalidArgumentError("group must be an object with a 'moduli' list")
    return FinAbGroup(doc_entry["moduli"])


def _cube_shaped(raw, n: int, name: str) -> np.ndarray:
    arr = np.asarray(raw, dtype=np.int64)
    if arr.shape == (n * n * n,):
        arr = arr.reshape(n, n, n)
    if arr.shape != (n, n, n):
        raise InvalidArgumentError(f"{name} must be {n}^3 entries, flat or nested")
    return arr


def _square_shaped(raw, n: int, name: str) -> np.ndarray:
    arr = np.asarray(raw, dtype=np.int64)
    if arr.shape == (n * n,):
        arr = arr.reshape(n, n)
    if arr.shape != (n, n):
        raise InvalidArgumentError(f"{name} must be {n}^2 entries, flat or nested")
    return arr


def format_cubic_text(group: FinAbGroup, modulus: int, table: np.ndarray) -> str:
    """CUBIC v1 text: header, moduli, modulus, then one 'i j k v' line per
    nonzero entry in canonical element order."""
    lines = ["CUBIC v1",
             "moduli " + " ".join(str(m) for m in group.moduli),
             f"modulus {modulus}"]
    for i, j, k in np.argwhere(np.asarray(table) % modulus):
        lines.append(f"{i} {j} {k} {int(table[i, j, k]) % modulus}")
    return "\n".join(lines) + "\n"


def parse_cubic_text(text: str) -> dict:
    """Parse CUBIC v1 text into the JSON document shape of verify-cubic."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "CUBIC v1":
        raise InvalidArgumentError("not a CUBIC v1 document")
    if len(lines) < 3 or not lines[1].startswith("moduli ") or not lines[2].startswith("modulus "):
        raise InvalidArgumentError("CUBIC v1 needs 'moduli ...' and 'modulus ...' lines")
    try:
        moduli = [int(v) for v in lines[1].split()[1:]]
        modulus = int(lines[2].split()[1])
        entries = [[int(v) for v in ln.split()] for ln in lines[3:]]
    except ValueError as exc:
        raise InvalidArgumentError(f"CUBIC v1 entry is not numeric: {exc}") from None
    n = 1
    for m in moduli:
        n *= m
    table = np.zeros((n, n, n), dtype=np.int64)
    for entry in entries:
        if len(entry) != 4:
            raise InvalidArgumentError("CUBIC v1 entries are 'i j k value'")
        i, j, k, v = entry
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            raise InvalidArgumentError(f"CUBIC v1 index out of range: {entry}")
        table[i, j, k] = v % modulus
    return {"group": {"moduli": moduli}, "modulus": modulus,
            "table": table.reshape(-1).tolist()}


def _modulus_of(doc: dict | None, options: dict) -> int:
    m = options.get("modulus")
    if m is None:
        m = _require(doc, "modulus")
    m = int(m)
    if m < 1:
        raise InvalidArgumentError("modulus must be positive")
    return m


def _cmd_reduce_pairing(doc: dict | None, options: dict) -> dict:
    group = _group_of(_require(doc, "group"))
    modulus = _modulus_of(doc, options)
    form = AlternatingForm(group, modulus, _require(doc, "matrix"))
    delta, basis = elementary_divisors(form)
    return {
        "group": {"moduli": list(group.moduli)},
        "modulus": modulus,
        "delta": list(delta),
        "images": [list(img.coords) for img in basis.images],
    }


def _cmd_theta_normalize(doc: dict | None, options: dict) -> dict:
    group = _group_of(_require(doc, "group"))
    modulus = _modulus_of(doc, options)
    table = _square_shaped(_require(doc, "cocycle"), group.order, "cocycle")
    ext = CocycleExtension(group, modulus, table)
    norm = normalize_extension(ext)
    return {
        "delta": list(norm.delta),
        "images": [list(img.coords) for img in norm.basis.images],
        "cochain": list(norm.cochain),
        "scalar_modulus": norm.scalar_modulus,
    }


def _cmd_verify_cubic(doc: dict | None, options: dict) -> dict:
    group = _group_of(_require(doc, "group"))
    modulus = _modulus_of(doc, options)
    table = _cube_shaped(_require(doc, "table"), group.order, "table")
    res = is_cubic(group, modulus, table)
    if res:
        return {"cubic": True}
    return {"cubic": False, "failed_check": res.failed_check,
            "witness": list(res.witness)}


def _cmd_cubic_to_central(doc: dict | None, options: dict) -> dict:
    group = _group_of(_require(doc, "group"))
    modulus = _modulus_of(doc, options)
    n = group.order
    cubic = CubicStructure(group, modulus, _cube_shaped(_require(doc, "table"), n, "table"))
    sigma = _square_shaped(_require(doc, "sigma"), n, "sigma")
    ext = central_from_cubic(CubicCouple(cubic, sigma))
    return {
        "group": {"moduli": list(group.moduli)},
        "modulus": modulus,
        "cocycle": ext.table.tolist(),
    }


def _cmd_central_to_cubic(doc: dict | None, options: dict) -> dict:
    group = _group_of(_require(doc, "group"))
    modulus = _modulus_of(doc, options)
    table = _square_shaped(_require(doc, "cocycle"), group.order, "cocycle")
    couple = cubic_from_central(CocycleExtension(group, modulus, table))
    return {
        "group": {"moduli": list(group.moduli)},
        "modulus": modulus,
        "table": couple.cubic.table.reshape(-1).tolist(),
        "sigma": couple.sigma.reshape(-1).tolist(),
    }


def _parse_delta(options: dict, doc: dict | None) -> tuple[int, ...]:
    raw = options.get("delta")
    if raw is None:
        raw = _require(doc, "delta")
    if isinstance(raw, str):
        try:
            raw = [int(v) for v in raw.replace(",", " ").split()]
        except ValueError:
            raise InvalidArgumentError(f"cannot parse delta from {raw!r}") from None
    return tuple(int(v) for v in raw)


def _cmd_schrodinger(doc: dict | None, options: dict) -> dict:
    delta = _parse_delta(options, doc)
    modulus = options.get("modulus")
    if modulus is None and doc is not None:
        modulus = doc.get("modulus")
    rep = schrodinger(delta, None if modulus is None else int(modulus))
    g = rep.extension.group
    operators = [rep.operator(0, g.coords(i)) for i in range(g.order)]
    out = {
        "delta": list(delta),
        "modulus": rep.modulus,
        "dimension": rep.dimension,
        "operators": [{"perm": m.perm.tolist(), "exps": m.exps.tolist()}
                      for m in operators],
    }
    prime = options.get("prime")
    if prime is not None:
        prime = int(prime)
        zeta = primitive_root_of_unity(prime, rep.modulus)
        out["prime"] = prime
        out["zeta"] = zeta
        out["dense"] = [m.dense(prime, zeta).tolist() for m in operators]
    return out


def _load_av(doc: dict | None, options: dict) -> AbelianVarietyData:
    g = int(_require(doc, "g", options.get("g")))
    r = int(_require(doc, "r", options.get("r")))
    ns_opt = options.get("ns")
    if ns_opt == "principal":
        return AbelianVarietyData(g, r, [principal_ns(g)])
    if ns_opt == "none":
        return AbelianVarietyData(g, r, [], allow_empty_ns=True)
    if ns_opt is not None:
        raise InvalidArgumentError(f"--ns must be 'principal' or 'none', got {ns_opt!r}")
    ns = _require(doc, "ns")
    return AbelianVarietyData(g, r, ns, allow_empty_ns=True)


def _cmd_classify(doc: dict | None, options: dict) -> dict:
    g = int(_require(doc, "g", options.get("g")))
    r = int(_require(doc, "r", options.get("r")))
    pairs = enumerate_pairs(g, r)
    av = None
    if options.get("ns") is not None or (doc is not None and "ns" in doc):
        av = _load_av(doc, options)
        pres = brauer_presentation(av)
    items = []
    for pair in pairs:
        descriptor = pair_to_bundle(pair)
        entry = descriptor.to_json()
        if av is not None:
            entry["class"] = list(bundle_to_brauer(descriptor, av, pres=pres))
            entry["classes"] = [list(c) for c in brauer_classes(descriptor, av, pres=pres)]
        items.append(entry)
    return {"g": g, "r": r, "count": len(items), "pairs": items}


def _cmd_brauer(doc: dict | None, options: dict) -> dict:
    av = _load_av(doc, options)
    pres = brauer_presentation(av)
    out = pres.to_json()
    out["order"] = pres.order
    return out


def _cmd_hilbert_symbol(doc: dict | None, options: dict) -> dict:
    av = _load_av(doc, options)
    pres = brauer_presentation(av)
    alpha = TorsionChar(av.r, _require(doc, "alpha"))
    beta = TorsionChar(av.r, _require(doc, "beta"))
    sym = hilbert_symbol(alpha, beta, pres)
    return {"symbol": list(sym), "trivial": symbol_is_trivial(alpha, beta, pres),
            "quotient_moduli": list(pres.quotient_moduli)}


def _cmd_cyclic_algebra(doc: dict | None, options: dict) -> dict:
    r = int(_require(doc, "r", options.get("r")))
    zeta = int(_require(doc, "zeta", options.get("zeta")))
    a = int(_require(doc, "a", options.get("a")))
    b = int(_require(doc, "b", options.get("b")))
    prime = int(_require(doc, "prime", options.get("prime")))
    alg = cyclic_algebra(r, zeta, a, b, prime)
    out = {"r": r, "prime": prime, "zeta": alg.zeta, "a": alg.a, "b": alg.b,
           "relations": True, "azumaya": azumaya_check(alg)}
    if alg.a == 1 % prime and alg.b == 1 % prime:
        split = explicit_splitting(alg)
        out["splitting"] = {"rank": alg.dimension,
                            "images": [m.tolist() for m in split.images]}
    else:
        out["splitting"] = None
    return out


_HANDLERS: dict[str, Callable[[dict | None, dict], dict]] = {
    "reduce-pairing": _cmd_reduce_pairing,
    "theta-normalize": _cmd_theta_normalize,
    "verify-cubic": _cmd_verify_cubic,
    "cubic-to-central": _cmd_cubic_to_central,
    "central-to-cubic": _cmd_central_to_cubic,
    "schrodinger": _cmd_schrodinger,
    "classify": _cmd_classify,
    "brauer": _cmd_brauer,
    "hilbert-symbol": _cmd_hilbert_symbol,
    "cyclic-algebra": _cmd_cyclic_algebra,
}


def run(job: JobSpec) -> tuple[int, dict]:
    """Execute a job; returns (exit status, output document). Library errors
    are mapped to the documented exit codes with an 'error' document."""
    handler = _HANDLERS.get(job.command)
    if handler is None:
        return 64, {"error": {"kind": "unknown-command", "message": job.command}}
    try:
        return 0, handler(job.document, job.options)
    except IncompatibleTrivializationError as exc:
        detail = {"kind": "incompatible-trivialization", "message": str(exc)}
        if exc.witness is not None:
            detail["witness"] = [int(w) for w in exc.witness]
        return 2, {"error": detail}
    except UnsupportedError as exc:
        return 1, {"error": {"kind": "unsupported", "message": str(exc)}}
    except InvalidArgumentError as exc:
        return 1, {"error": {"kind": "invalid-argument", "message": str(exc)}}
    except MathematicalError as exc:
        return 2, {"error": {"kind": "mathematical", "message": str(exc)}}


def _table_lines(value: Any, prefix: str, out: list[str]):
    if isinstance(value, dict):
        for key in sorted(value):
            _table_lines(value[key], f"{prefix}.{key}" if prefix else str(key), out)
    elif isinstance(value, list) and value and all(isinstance(v, list) for v in value):
        out.append(f"{prefix}:")
        for row in value:
            out.append("  " + " ".join(str(v) for v in row))
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, item in enumerate(value):
            _table_lines(item, f"{prefix}[{i}]", out)
    elif isinstance(value, list):
        out.append(f"{prefix}: " + " ".join(str(v) for v in value))
    else:
        out.append(f"{prefix}: {value}")


def render(document: dict, table: bool) -> str:
    if table:
        lines: list[str] = []
        _table_lines(document, "", lines)
        return "\n".join(lines) + "\n"
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def _build_parser() -> _Parser:
    parser = _Parser(prog="thetacube", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="VERB")
    for verb in VERBS:
        p = sub.add_parser(verb, add_help=True)
        p.add_argument("--input", help="input JSON file (default: stdin when needed)")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--modulus", type=int, help="scalar modulus M override")
        p.add_argument("--prime", type=int, help="prime field for dense output or checks")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="table", action="store_false", default=False,
                         help="JSON output (default)")
        fmt.add_argument("--table", dest="table", action="store_true",
                         help="human-readable table output")
        p.add_argument("--g", type=int, help="abelian variety dimension")
        p.add_argument("--r", type=int, help="torsion level")
        p.add_argument("--ns", help="Neron-Severi choice: principal or none")
        p.add_argument("--delta", help="comma-separated elementary divisors")
        p.add_argument("--zeta", type=int, help="root-of-unity value in the prime field")
        p.add_argument("--a", type=int, help="unit a of a cyclic algebra")
        p.add_argument("--b", type=int, help="unit b of a cyclic algebra")
    return parser


_NEEDS_DOCUMENT = {"reduce-pairing", "theta-normalize", "verify-cubic",
                   "cubic-to-central", "central-to-cubic", "hilbert-symbol"}


def _load_document(args) -> dict | None:
    text = None
    if args.input is not None:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    elif args.command in _NEEDS_DOCUMENT:
        text = sys.stdin.read()
    if text is None:
        return None
    if text.lstrip().startswith("CUBIC v1"):
        return parse_cubic_text(text)
    return json.loads(text)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    threads = os.environ.get("THETA_CUBE_THREADS")
    if threads is not None:
        try:
            _kernels.set_thread_cap(int(threads))
        except ValueError:
            print(f"invalid THETA_CUBE_THREADS value: {threads!r}", file=sys.stderr)
            return 1
    try:
        document = _load_document(args)
    except json.JSONDecodeError as exc:
        print(f"malformed JSON input: {exc}", file=sys.stderr)
        return 65
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 1
    except InvalidArgumentError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1
    options = {key: getattr(args, key) for key in
               ("modulus", "prime", "g", "r", "ns", "delta", "zeta", "a", "b")
               if getattr(args, key) is not None}
    job = JobSpec(command=args.command, document=document,
                  output=args.output, table=args.table, options=options)
    status, out_doc = run(job)
    text = render(out_doc, job.table)
    if job.output and job.output != "-":
        with open(job.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
