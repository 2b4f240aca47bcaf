"""Command-line frontend.

Modules are given inline (``--ring``, ``--relations``, ``--generators``,
plus ``--relations2``/``--generators2`` for a second module) or in a file
(``--file``; a second block or JSON item is the second module).  Reports go
to stdout, as an indented key/value listing or, with ``--machine``, as JSON.

Exit codes: 0 success, 1 domain error (a JSON error object is printed),
2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import fpmod as F
from . import formats, suites
from .fpmod import DomainError, EngineMismatch, Presentation
from .finlab import modules as fm
from .finlab import oracle as fo
from .finlab import rings as fr
from .rings import parse_engine

FPMOD_COMMANDS = (
    "invariants", "dual", "transpose", "ext1", "tor1", "hom", "tensor", "decompose", "peel",
    "stable", "projective", "torsionless", "udim", "hdim", "equiv", "verify-mu-epsilon",
)
BINARY = {"ext1", "tor1", "hom", "tensor", "equiv", "verify-mu-epsilon"}
ORACLE_OPS = (
    "jacobson", "submodules", "predicates", "socle", "udim", "hdim", "projective", "stable",
    "decompose", "rickart", "baer", "modules",
)


class MalformedInput(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument parsing


def _module_args(p: argparse.ArgumentParser, binary: bool) -> None:
    p.add_argument("--ring", help="engine header: int, 'mod N' or 'poly P'")
    p.add_argument("--relations", help="relation matrix rows as JSON, e.g. '[[2,0],[0,0]]'")
    p.add_argument("--generators", type=int, help="generator count (needed when there are no relations)")
    p.add_argument("--file", help="presentation file (line format or JSON)")
    if binary:
        p.add_argument("--relations2", help="second module's relation rows as JSON")
        p.add_argument("--generators2", type=int, help="second module's generator count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabledecomp", description=__doc__.split("\n\n")[0])
    parser.add_argument("--machine", action="store_true", help="emit JSON reports")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in FPMOD_COMMANDS:
        p = sub.add_parser(name)
        _module_args(p, name in BINARY)
        p.add_argument("--machine", action="store_true", default=argparse.SUPPRESS)
        if name == "transpose":
            p.add_argument("--monic", action="store_true",
                           help="transpose along the projective presentation Im(F) -> R^m")
        if name == "peel":
            p.add_argument("--max-steps", type=int, default=8)
    p = sub.add_parser("remark37", help="U = R^k + R/aR with pd(Tr U) <= 1 and U* != 0")
    p.add_argument("--ring", default="int")
    p.add_argument("--rank", type=int, default=1, help="rank k of the free summand")
    p.add_argument("--a", default="2", help="the non-unit a, as a JSON entry")
    p.add_argument("--machine", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("oracle", help="brute-force checks over explicit finite rings")
    p.add_argument("subop", choices=ORACLE_OPS)
    p.add_argument("--ring", required=True, help="finite ring spec, e.g. 'z4' or 'idealization(z2^3)'")
    p.add_argument("--relations", help="relation rows as JSON; entries are ring element indices")
    p.add_argument("--generators", type=int, help="generator count (default 1)")
    p.add_argument("--submodule", help="JSON list of element indices (for predicates)")
    p.add_argument("--max-size", type=int, default=16, help="module size bound (for modules)")
    p.add_argument("--machine", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("suite", help="run an acceptance suite")
    p.add_argument("name", help=f"one of {', '.join(suites.SUITES)} (or its number)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int)
    p.add_argument("--machine", action="store_true", default=argparse.SUPPRESS)
    return parser


def _json_arg(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{what} is not valid JSON: {exc}") from None


def _inline(engine_text: str, relations: str | None, generators: int | None) -> Presentation:
    try:
        engine = parse_engine(engine_text)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None
    if relations is None and generators is None:
        raise MalformedInput("give --relations or --generators")
    rows = _json_arg(relations, "--relations") if relations else []
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MalformedInput("relations must be a JSON list of rows")
    if generators is None:
        generators = len(rows)
    if not rows:
        rows = [[] for _ in range(generators)]
    return formats.build_presentation(engine, generators, rows)


def load_modules(args, count: int) -> list[Presentation]:
    if args.file:
        try:
            with open(args.file) as fh:
                mods = formats.parse_any(fh.read())
        except OSError as exc:
            raise MalformedInput(f"cannot read {args.file}: {exc}") from None
        if args.ring:
            engine = parse_engine(args.ring)
            if any(P.engine != engine for P in mods):
                raise EngineMismatch("--ring disagrees with the file's engine header")
    else:
        if not args.ring:
            raise MalformedInput("give --ring and --relations, or --file")
        mods = [_inline(args.ring, args.relations, args.generators)]
        if count > 1 and (args.relations2 is not None or args.generators2 is not None):
            mods.append(_inline(args.ring, args.relations2, args.generators2))
    if len(mods) < count:
        raise MalformedInput(f"this command needs {count} modules, got {len(mods)}")
    mods = mods[:count]
    if count == 2 and mods[0].engine != mods[1].engine:
        raise EngineMismatch(f"engine mismatch: {mods[0].engine.name} vs {mods[1].engine.name}")
    return mods


# ---------------------------------------------------------------------------
# fpmod commands


def _inv(P: Presentation) -> dict:
    return F.invariants(P).to_json()


def run_fpmod(cmd: str, args) -> dict:
    mods = load_modules(args, 2 if cmd in BINARY else 1)
    P = mods[0]
    Q = mods[1] if len(mods) > 1 else None
    report: dict = {
        "command": cmd,
        "input": [m.to_json() for m in mods],
        "normalization": [{"performed": "normalize (Hermite/Howell form, unit-entry elimination)",
                           "presentation": F.normalize(m).to_json()} for m in mods],
    }
    result: dict
    prov: dict
    if cmd == "invariants":
        result = {"M": _inv(P)}
        how = "Smith form of the relation matrix" if P.engine.is_domain else "Howell form and primary decomposition"
        prov = {"M": f"invariants: {how}"}
    elif cmd == "dual":
        D = F.dual(P)
        result = {"dual": F.invariants(D).to_json(), "presentation": D.to_json()}
        prov = {"dual": "dual: syzygies of the transposed relation matrix"}
    elif cmd == "transpose":
        T = F.monic_transpose(P) if args.monic else F.ab_transpose(P)
        result = {"transpose": F.invariants(T).to_json(), "presentation": T.to_json()}
        prov = {"transpose": "monic_transpose" if args.monic else "ab_transpose of the normalized presentation"}
    elif cmd in ("ext1", "tor1", "hom", "tensor"):
        fn = {"ext1": F.ext1, "tor1": F.tor1, "hom": F.hom, "tensor": F.tensor}[cmd]
        result = {cmd: fn(P, Q).to_json()}
        prov = {cmd: f"{cmd}: homology of the Kronecker-product complex"}
    elif cmd == "decompose":
        d = F.decompose(P)
        result = {"M": _inv(P), "proj": d.proj.to_json(), "stab": d.stab.to_json(),
                  "splitting": {"source": d.splitting.source.to_json(), "matrix": d.splitting.matrix.to_json()},
                  "double_dual_formula_applicable": d.formula_applicable}
        if P.engine.is_domain:
            prov = {"proj": "double_dual_map target (M**)", "stab": "ext1(ab_transpose(M), R)",
                    "splitting": "section of the natural map M -> M**"}
        else:
            prov = {"proj": "primary decomposition: free local summands", "stab": "remaining local summands",
                    "splitting": "inclusion of the projective summand",
                    "double_dual_formula_applicable": "pd_le_1_certificate(ab_transpose(M))"}
    elif cmd == "peel":
        result = F.peel(P, args.max_steps).to_json()
        prov = {"steps": "repeated decompose"}
    elif cmd in ("stable", "projective", "torsionless"):
        fn = {"stable": F.is_stable, "projective": F.is_projective, "torsionless": F.is_torsionless}[cmd]
        result = {cmd: fn(P), "M": _inv(P)}
        prov = {cmd: {"stable": "invariants: no free (local) summand",
                      "projective": "invariants: only free (local) summands",
                      "torsionless": "kernel of double_dual_map"}[cmd]}
    elif cmd in ("udim", "hdim"):
        fn = F.udim if cmd == "udim" else F.hdim
        result = {cmd: fn(P).to_json(), "M": _inv(P)}
        prov = {cmd: "count of primary cyclic components (plus free rank for udim)"}
    elif cmd == "equiv":
        result = {"projectively_equivalent": F.projectively_equivalent(P, Q),
                  "isomorphic": F.is_isomorphic(P, Q), "M": _inv(P), "N": _inv(Q)}
        prov = {"projectively_equivalent": "stable parts of decompose agree", "isomorphic": "invariants agree"}
    elif cmd == "verify-mu-epsilon":
        result = F.verify_mu_epsilon(P, Q).to_json()
        prov = {"pd_le_1": "pd_le_1_certificate(M)", "ext1(M,N)": "ext1", "Tor1(M,N)": "tor1",
                "N(x)Tr(M)": "tensor with monic_transpose", "Hom(Tr(M),N)": "hom from monic_transpose"}
    else:  # pragma: no cover - argparse restricts choices
        raise MalformedInput(cmd)
    report["result"] = result
    report["provenance"] = prov
    return report


def run_counterexample(args) -> dict:
    try:
        engine = parse_engine(args.ring)
        a = engine.parse_element(_json_arg(args.a, "--a"))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None
    rep = F.dual_counterexample(Presentation.free(engine, args.rank), a)
    return {
        "command": "remark37",
        "input": {"ring": engine.header(), "rank": args.rank, "a": engine.to_json(a)},
        "normalization": {"performed": "none", "presentation": F.normalize(rep.module).to_json()},
        "result": rep.to_json(),
        "provenance": {"Tr(U)": "ab_transpose", "pd(Tr(U))<=1": "pd_le_1_certificate(Tr U)", "U*": "dual"},
    }


# ---------------------------------------------------------------------------
# oracle commands


def _oracle_module(R: fr.FiniteRing, args) -> fm.FiniteModule:
    rows = _json_arg(args.relations, "--relations") if args.relations else []
    m = args.generators if args.generators is not None else (len(rows) if rows else 1)
    if len(rows) not in (0, m):
        raise MalformedInput(f"expected {m} relation rows, got {len(rows)}")
    cols = len(rows[0]) if rows else 0
    columns = []
    for j in range(cols):
        col = []
        for i in range(m):
            x = rows[i][j]
            if not isinstance(x, int) or not 0 <= x < R.size:
                raise MalformedInput(f"entry {x!r} is not an element index of {R.name}")
            col.append(x)
        columns.append(col)
    if m == 0:
        return fm.FiniteModule(R, [[0]], [[0] * R.size], ["0"], "0")
    if m == 1 and not columns:
        return fm.regular_module(R)
    return fm.module_from_relations(R, m, columns)


def _labels(M, mask: int) -> list:
    return [M.labels[i] for i in fm.members(mask)]


def run_oracle(args) -> dict:
    try:
        R = fr.parse_ring_spec(args.ring)
    except fr.AxiomError as exc:
        raise MalformedInput(f"ring spec fails the ring axioms: {exc}") from None
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None
    op = args.subop
    report: dict = {"command": f"oracle {op}",
                    "input": {"ring": args.ring, "relations": args.relations, "generators": args.generators},
                    "normalization": {"performed": "none (explicit tables)", "ring_size": R.size}}
    if op == "jacobson":
        J = fo.jacobson_radical(R)
        result = {"J": [R.labels[x] for x in J.elements], "indices": list(J.elements), "is_ideal": J.is_ideal}
        prov = "exhaustive: x with 1 - x*y a unit for all y"
    elif op in ("rickart", "baer"):
        result = {op: fo.is_rickart(R) if op == "rickart" else fo.is_baer(R)}
        prov = "exhaustive annihilators against idempotent principal right ideals"
    elif op == "modules":
        mods = fo.enumerate_modules(R, args.max_size)
        result = {"count": len(mods), "sizes": [M.size for M in mods]}
        prov = "one-generator extensions closed up to isomorphism"
    else:
        M = _oracle_module(R, args)
        report["normalization"]["module_size"] = M.size
        if op == "submodules":
            L = fo.enumerate_submodules(M)
            result = {"count": len(L), "submodules": [_labels(M, S) for S in L.submodules]}
            prov = "closure of cyclic submodules under sums"
        elif op == "predicates":
            if not args.submodule:
                raise MalformedInput("predicates needs --submodule")
            K = fm.mask_of(_json_arg(args.submodule, "--submodule"))
            if K not in fo.enumerate_submodules(M):
                raise DomainError("the given subset is not a submodule")
            result = fo.submodule_predicates(M, K)
            prov = "quantification over the full submodule lattice"
        elif op == "socle":
            soc, rad = fo.socle_and_radical(M)
            result = {"socle": _labels(M, soc), "radical": _labels(M, rad)}
            prov = "sum of simple / intersection of maximal submodules"
        elif op in ("udim", "hdim"):
            fn = fo.udim_bruteforce if op == "udim" else fo.hdim_bruteforce
            result = {op: fn(M).to_json()}
            prov = "exhaustive family search on the submodule lattice"
        elif op == "projective":
            result = {"projective": fo.is_projective_bruteforce(M)}
            prov = "section search for R^t -> M"
        elif op == "stable":
            result = {"stable": fo.is_stable_bruteforce(M)}
            prov = "idempotent endomorphisms with projective image"
        else:
            d = fo.decompose_bruteforce(M)
            result = {"decompositions": [{"P": _labels(M, P), "N": _labels(M, N)} for P, N in d.pairs],
                      "pairwise_isomorphic": d.pairwise_isomorphic}
            prov = "idempotent endomorphisms; projective image, stable kernel"
    report["result"] = result
    report["provenance"] = {"result": prov}
    return report


# ---------------------------------------------------------------------------
# output


def render_human(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- " + render_human(v, indent + 1).lstrip() for v in obj)
    return pad + _scalar(obj)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and all(
        not isinstance(y, (dict, list)) for y in x)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def emit(report: dict, machine: bool, out) -> None:
    if machine:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        out.write(render_human(report) + "\n")


def _error(kind: str, message: str, out) -> None:
    out.write(json.dumps({"error": {"kind": kind, "message": message}}, sort_keys=True) + "\n")


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    machine = getattr(args, "machine", False)
    try:
        if args.command == "suite":
            try:
                res = suites.run_suite(args.name, args.seed, args.count)
            except KeyError as exc:
                raise MalformedInput(exc.args[0]) from None
            if machine:
                out.write(res.to_json() + "\n")
            else:
                out.write(res.summary() + "\n")
                for rec in res.records:
                    out.write("  " + json.dumps(rec, sort_keys=True) + "\n")
                for rec in res.failures:
                    out.write("  FAILURE " + json.dumps(rec, sort_keys=True) + "\n")
            return 0 if res.passed else 1
        if args.command == "oracle":
            report = run_oracle(args)
        elif args.command == "remark37":
            report = run_counterexample(args)
        else:
            report = run_fpmod(args.command, args)
    except (DomainError, fr.CapExceeded) as exc:
        kind = "cap_exceeded" if isinstance(exc, fr.CapExceeded) else "domain_error"
        _error(kind, str(exc), out)
        err.write(f"error: {exc}\n")
        return 1
    except (MalformedInput, formats.FormatError, EngineMismatch, ValueError) as exc:
        _error("malformed_input", str(exc), out)
        err.write(f"error: {exc}\n")
        return 2
    emit(report, machine, out)
    return 0


def main() -> None:
    sys.exit(run())
