"""Command-line front end.

Exit codes: 0 computed/verified, 1 refuted (witness printed), 2 input
error, 3 bound exceeded or undecided.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import complexes as cx
from . import corpus, cproj, modrep, perfect, semidual
from .algebra import Algebra, AlgebraError, AlgebraSpec, MalformedSpec, validate

EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class Workspace:
    """Loaded rings and modules keyed by the reference used to load them."""

    rings: dict[str, Algebra] = field(default_factory=dict)
    ring_refs: dict[int, str] = field(default_factory=dict)

    def ring(self, ref: str) -> Algebra:
        if ref not in self.rings:
            try:
                A = corpus.load_ring(ref)
            except FileNotFoundError as exc:
                raise InputError(str(exc)) from None
            self.rings[ref] = A
            self.ring_refs[id(A)] = ref
        return self.rings[ref]

    def ref_of(self, A: Algebra) -> str:
        return self.ring_refs.get(id(A), A.name)

    def module(self, A: Algebra, text: str, C: modrep.FinModule | None = None) -> modrep.FinModule:
        try:
            return corpus.named_module(A, text, C)
        except FileNotFoundError as exc:
            raise InputError(str(exc)) from None
        except ValueError as exc:
            raise InputError(f"bad module {text!r}: {exc}") from None

    def complex(self, path: str, ring: str | None) -> tuple[Algebra, cx.ChainComplex]:
        data = _read(path)
        A = self.ring(ring or data["ring"])
        try:
            return A, cx.complex_from_json(data, A)
        except (ValueError, KeyError) as exc:
            raise InputError(f"bad complex file {path}: {exc}") from None


def _read(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _fmt_pd(v: float) -> str:
    return "∞" if v == math.inf else str(int(v))


def _emit(report: dict, as_json: bool, out) -> None:
    if as_json:
        json.dump(report, out, indent=2, default=_json_default)
        out.write("\n")
        return
    for k, v in report.items():
        if isinstance(v, (dict, list)) and k in ("complex", "minimal_complex", "cone"):
            continue
        out.write(f"{k}: {v}\n")


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, float) and math.isinf(o):
        return "inf"
    raise TypeError(f"cannot serialize {type(o).__name__}")


# -- subcommands ---------------------------------------------------------------------


def cmd_ring_check(ws: Workspace, args) -> tuple[int, dict]:
    path = args.file
    try:
        data = _read(path) if Path(path).exists() else corpus.read_json(path)
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from None
    try:
        A = validate(AlgebraSpec.from_json(data, name=Path(path).stem))
    except MalformedSpec as exc:
        raise InputError(str(exc)) from None
    except AlgebraError as exc:
        return EXIT_REFUTED, {"valid": False, "error": type(exc).__name__, "message": str(exc),
                              "witness": exc.witness}
    return EXIT_OK, {"valid": True, "name": A.name, "p": A.p, "dim": A.d, "nilpotency": A.nilpotency,
                     "basis": list(A.basis)}


def cmd_module_check(ws: Workspace, args) -> tuple[int, dict]:
    if args.ring:
        A = ws.ring(args.ring)
    else:
        data = _read(args.file) if Path(args.file).exists() else None
        if data is None or "ring" not in data:
            raise InputError("module check needs --ring or a module file with a 'ring' field")
        A = ws.ring(data["ring"])
    try:
        M = corpus.named_module(A, args.file)
    except modrep.ModuleError as exc:
        return EXIT_REFUTED, {"valid": False, "message": str(exc)}
    return EXIT_OK, {"valid": True, "dim": M.dim, "min_generators": modrep.min_generators(M),
                     "pd": _fmt_pd(modrep.pd(M))}


def cmd_semidual(ws: Workspace, args) -> tuple[int, dict]:
    A = ws.ring(args.ring)
    C = ws.module(A, args.module)
    try:
        rep = semidual.verify_semidualizing(C, args.bound)
    except semidual.ZeroModule as exc:
        raise InputError(str(exc)) from None
    return (EXIT_OK if rep.verified else EXIT_REFUTED), rep.to_json()


def _ring_C_M(ws, args):
    A = ws.ring(args.ring)
    C = ws.module(A, args.semidual)
    M = ws.module(A, args.module, C)
    return A, C, M


def _resolution_out(ws, A, rep: cproj.ResolutionReport) -> dict:
    out = rep.to_json()
    out["complex"] = rep.complex.to_json(ws.ref_of(A))
    out["augmentation"] = rep.augmented.augmentation.matrix.astype(int).tolist()
    return out


def cmd_resolve(ws: Workspace, args) -> tuple[int, dict]:
    A, C, M = _ring_C_M(ws, args)
    try:
        rep = cproj.minimal_pc_resolution(M, C, args.length, bound=args.bound)
    except cproj.SemidualNotVerified as exc:
        return EXIT_REFUTED, {"error": "SemidualNotVerified", "witness": exc.report.witness if exc.report else None}
    return (EXIT_REFUTED if rep.proper == "Failed" else EXIT_OK), _resolution_out(ws, A, rep)


def cmd_coresolve(ws: Workspace, args) -> tuple[int, dict]:
    A, C, M = _ring_C_M(ws, args)
    try:
        rep = cproj.minimal_pc_coresolution(M, C, args.length, bound=args.bound)
    except cproj.SemidualNotVerified as exc:
        return EXIT_REFUTED, {"error": "SemidualNotVerified", "witness": exc.report.witness if exc.report else None}
    out = _resolution_out(ws, A, rep)
    if args.criterion:
        out["criterion"] = cproj.coresolution_criterion(M, C, args.bound).to_json()
    return (EXIT_REFUTED if rep.proper == "Failed" else EXIT_OK), out


def cmd_pcpd(ws: Workspace, args) -> tuple[int, dict]:
    A, C, M = _ring_C_M(ws, args)
    v = cproj.pc_pd(M, C)
    res = cproj.cproj_test(M, C, seed=args.seed)
    if res is modrep.UNKNOWN:
        return EXIT_UNKNOWN, {"pc_pd": _fmt_pd(v), "cproj_test": "Unknown"}
    return EXIT_OK, {"pc_pd": _fmt_pd(v), "cproj_rank": None if res is None else res.rank}


def _load_map(ws, args) -> tuple[Algebra, cx.ChainMap]:
    data = _read(args.map)
    A = ws.ring(args.ring or data.get("ring") or data["source"]["ring"])
    try:
        X = cx.complex_from_json(data["source"], A)
        Y = cx.complex_from_json(data["target"], A)
        comps = {int(k): np.asarray(v, dtype=np.int64).reshape(Y.module(int(k)).dim, X.module(int(k)).dim)
                 for k, v in data["components"].items()}
        return A, cx.ChainMap(X, Y, comps)
    except (ValueError, KeyError) as exc:
        raise InputError(f"bad chain map file: {exc}") from None


def cmd_cone(ws: Workspace, args) -> tuple[int, dict]:
    A, f = _load_map(ws, args)
    C = cx.cone(f)
    return EXIT_OK, {"degrees": [C.lo, C.hi], "dims": C.dims(),
                     "homology": C.homology_dims(), "complex": C.to_json(ws.ref_of(A))}


def cmd_homology(ws: Workspace, args) -> tuple[int, dict]:
    A, X = ws.complex(args.complex, args.ring)
    degs = [args.degree] if args.degree is not None else list(X.degrees())
    return EXIT_OK, {"homology": {str(n): X.homology_dim(n) for n in degs}}


def cmd_quasiiso(ws: Workspace, args) -> tuple[int, dict]:
    A, f = _load_map(ws, args)
    cert = cx.is_quasiiso(f)
    return (EXIT_OK if cert.is_quasiiso else EXIT_REFUTED), {
        "quasiiso": cert.is_quasiiso, "method": cert.method,
        "cone_ranks": {str(k): v for k, v in cert.ranks.items()},
        "witness_degree": cert.witness_degree}


def cmd_minimize(ws: Workspace, args) -> tuple[int, dict]:
    A, X = ws.complex(args.complex, args.ring)
    C = ws.module(A, args.semidual) if args.semidual else None
    try:
        res = cx.minimize(X, C)
    except cx.NonFreeInput as exc:
        raise InputError(str(exc)) from None
    Y = res.complex
    return EXIT_OK, {"steps": res.steps, "quasiiso": res.certificate.is_quasiiso,
                     "ranks": [M.copies if M.dim else 0 for M in Y.modules],
                     "minimal": cx.is_minimal(Y), "complex": Y.to_json(ws.ref_of(A))}


def cmd_width(ws: Workspace, args) -> tuple[int, dict]:
    A, X = ws.complex(args.complex, args.ring)
    C = ws.module(A, args.semidual)
    try:
        rep = perfect.width(X, C)
    except perfect.UncertifiedModule as exc:
        return EXIT_REFUTED, {"error": "UncertifiedModule", "message": str(exc)}
    out = rep.to_json()
    out["complex"] = rep.minimal_representative.complex.to_json(ws.ref_of(A))
    return EXIT_OK, out


def cmd_find_ezd(ws: Workspace, args) -> tuple[int, dict]:
    A = ws.ring(args.ring)
    C = ws.module(A, args.module) if args.module else None
    try:
        pairs = perfect.find_exact_zero_divisors(A, C)
    except perfect.SearchSpaceExceeded as exc:
        return EXIT_UNKNOWN, {"error": "SearchSpaceExceeded", "message": str(exc)}
    return EXIT_OK, {"pairs": [[A.format(pr.x), A.format(pr.y)] for pr in pairs], "count": len(pairs)}


def cmd_ex3(ws: Workspace, args) -> tuple[int, dict]:
    A = ws.ring(args.ring)
    C = ws.module(A, args.semidual)
    try:
        xs, ys = args.pair.split(",")
        pair = perfect.make_pair(A, xs.strip(), ys.strip(), C)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rep = perfect.ex3_verify(A, C, pair, args.n)
    return (EXIT_OK if rep.passed else EXIT_REFUTED), rep.to_json()


def cmd_hereditary(ws: Workspace, args) -> tuple[int, dict]:
    A = ws.ring(args.ring)
    C = ws.module(A, args.semidual)
    try:
        rep = cproj.hereditary_probe(A, C, args.rank)
    except modrep.CapExceeded as exc:
        return EXIT_UNKNOWN, {"error": "CapExceeded", "message": str(exc)}
    return (EXIT_OK if rep.verdict == "Hereditary-evidence" else EXIT_REFUTED), rep.to_json()


def cmd_corpus_list(ws: Workspace, args) -> tuple[int, dict]:
    base = corpus.corpus_dir()
    entries = []
    for path in sorted(base.glob("*.json")):
        with open(path) as fh:
            data = json.load(fh)
        kind = "module" if "action" in data else "ring"
        entries.append({"id": path.stem, "kind": kind, "dim": data.get("dim", len(data.get("basis", [])))})
    return EXIT_OK, {"corpus": str(base), "entries": entries}


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    ap = argparse.ArgumentParser(prog="cproj", parents=[common],
                                 description="Semidualizing modules and C-projective resolutions over finite local rings")
    sub = ap.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", parents=[common]).add_subparsers(dest="action", required=True)
    p = ring.add_parser("check", parents=[common], help="validate a ring file")
    p.add_argument("file")
    p.set_defaults(func=cmd_ring_check)

    mod = sub.add_parser("module", parents=[common]).add_subparsers(dest="action", required=True)
    p = mod.add_parser("check", parents=[common], help="validate a module file or shorthand")
    p.add_argument("file")
    p.add_argument("--ring")
    p.set_defaults(func=cmd_module_check)

    sd = sub.add_parser("semidual", parents=[common]).add_subparsers(dest="action", required=True)
    p = sd.add_parser("verify", parents=[common], help="check that a module is semidualizing")
    p.add_argument("--ring", required=True)
    p.add_argument("--module", required=True)
    p.add_argument("--bound", type=int, default=10)
    p.set_defaults(func=cmd_semidual)

    for name, func in (("resolve", cmd_resolve), ("coresolve", cmd_coresolve), ("pcpd", cmd_pcpd)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--ring", required=True)
        p.add_argument("--semidual", default="@ring")
        p.add_argument("--module", required=True)
        p.add_argument("--length", type=int, default=8)
        p.add_argument("--bound", type=int, default=10)
        if name == "coresolve":
            p.add_argument("--criterion", action="store_true", help="also run the bidual/Ext criterion")
        p.set_defaults(func=func)

    for name, func in (("cone", cmd_cone), ("quasiiso", cmd_quasiiso)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--map", required=True, help="chain map file {source, target, components}")
        p.add_argument("--ring")
        p.set_defaults(func=func)

    p = sub.add_parser("homology", parents=[common])
    p.add_argument("--complex", required=True)
    p.add_argument("--ring")
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("minimize", parents=[common])
    p.add_argument("--complex", required=True)
    p.add_argument("--ring")
    p.add_argument("--semidual")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("width", parents=[common])
    p.add_argument("--complex", required=True)
    p.add_argument("--ring")
    p.add_argument("--semidual", default="@ring")
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("find-ezd", parents=[common])
    p.add_argument("--ring", required=True)
    p.add_argument("--module")
    p.set_defaults(func=cmd_find_ezd)

    p = sub.add_parser("ex3", parents=[common])
    p.add_argument("--ring", required=True)
    p.add_argument("--pair", default="x,x")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--semidual", default="@ring")
    p.set_defaults(func=cmd_ex3)

    p = sub.add_parser("hereditary-probe", parents=[common])
    p.add_argument("--ring", required=True)
    p.add_argument("--semidual", default="@ring")
    p.add_argument("--rank", type=int, default=1)
    p.set_defaults(func=cmd_hereditary)

    cl = sub.add_parser("corpus", parents=[common]).add_subparsers(dest="action", required=True)
    p = cl.add_parser("list", parents=[common])
    p.set_defaults(func=cmd_corpus_list)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    ws = Workspace()
    try:
        code, report = args.func(ws, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AlgebraError, modrep.ModuleError, cx.ComplexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except modrep.CapExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    _emit(report, args.json, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
