"""Command-line interface.

Subcommands: invariants, classify-pure, classify-mixed, roof, lattice,
corpus, report.  States travel as JSON files in the formats of
``states.state_to_json`` / ``density_to_json``; the ``invariants``
command additionally accepts ``{"canonical": {"eta": [...], "alpha": a}}``.

Exit codes: 0 success, 2 validation error, 3 ambiguous classification,
4 optimizer did not converge.  Every randomized command prints the seed
it used.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import threequbit as tq
from .classify import (ClassificationError, classify_mixed_3q, classify_pure_3q,
                       classify_pure_general, _fts_objectives)
from .corpus import corpus, run_corpus
from .indicators import label_objective
from .labels import lattice_json
from .partitions import Partition
from .report import write_report
from .roof import PureStateFunction, convex_roof
from .states import (DensityMatrix, StateVector, density_from_json, state_from_json)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_AMBIGUOUS = 3
EXIT_NOT_CONVERGED = 4


class CliError(Exception):
    def __init__(self, message, code=EXIT_VALIDATION):
        super().__init__(message)
        self.code = code


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise CliError(f"cannot read {path}: {err}") from err
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise CliError(f"malformed JSON in {path} at byte {err.pos}: {err.msg}") from err


def _load_state(path: str) -> StateVector:
    data = _load_json(path)
    if "canonical" in data:
        canon = data["canonical"]
        params = tq.CanonicalParams(tuple(canon["eta"]), float(canon.get("alpha", 0.0)))
        return tq.schmidt_canonical_state(params)
    try:
        return state_from_json(data)
    except (KeyError, ValueError, TypeError) as err:
        raise CliError(f"invalid state file {path}: {err}") from err


def _load_density(path: str) -> DensityMatrix:
    data = _load_json(path)
    try:
        if "matrix" in data:
            return density_from_json(data)
        return state_from_json(data).density_matrix()
    except (KeyError, ValueError, TypeError) as err:
        raise CliError(f"invalid density file {path}: {err}") from err


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# subcommands

def _cmd_invariants(args) -> int:
    data = _load_json(args.state)
    out = {}
    if "canonical" in data:
        canon = data["canonical"]
        params = tq.CanonicalParams(tuple(canon["eta"]), float(canon.get("alpha", 0.0)))
        psi = tq.schmidt_canonical_state(params)
        out["j"] = list(tq.j_invariants(params))
    else:
        psi = _load_state(args.state)
    if psi.dims != (2, 2, 2):
        raise CliError(f"invariants are defined for three qubits, got dims {psi.dims}")
    out["indicators"] = tq.indicator_vector(psi).to_dict()
    sud = tq.sudbery_invariants(psi)
    out["sudbery"] = dict(zip(("i0", "i1", "i2", "i3", "i4", "i5"), sud.as_tuple()))
    _emit(out)
    return EXIT_OK


def _cmd_classify_pure(args) -> int:
    psi = _load_state(args.state)
    out = {}
    if psi.dims == (2, 2, 2):
        verdict = classify_pure_3q(psi, threshold=args.threshold)
        out.update(verdict.to_dict())
    if psi.n <= 6:
        try:
            part = classify_pure_general(psi, threshold=args.threshold)
            out["partition"] = str(part)
        except ClassificationError as err:
            if not out:
                raise
            out["partition"] = f"error: {err}"
    if not out:
        raise CliError("state has more than 6 subsystems")
    _emit(out)
    return EXIT_OK


def _cmd_classify_mixed(args) -> int:
    rho = _load_density(args.state)
    verdict = classify_mixed_3q(
        rho, functions=args.functions, threshold=args.tol,
        restarts=args.restarts, seed=args.seed, jobs=args.jobs,
        max_iters=args.max_iters,
    )
    _emit(verdict.to_dict())
    return EXIT_AMBIGUOUS if verdict.resolved == "AMBIGUOUS" else EXIT_OK


def _roof_function(name: str, rho: DensityMatrix) -> PureStateFunction:
    if name.startswith("label:"):
        spec = name[len("label:"):]
        try:
            label = frozenset(Partition.parse(p, rho.n) for p in spec.split(","))
        except ValueError as err:
            raise CliError(f"bad label spec {spec!r}: {err}") from err
        values, wirt = label_objective(rho.dims, label)
        return PureStateFunction(values, wirt, name)
    table = _fts_objectives()
    if name not in table:
        raise CliError(f"unknown function {name!r}; use one of {sorted(table)} "
                       "or label:<partition,partition,...>")
    if rho.dims != (2, 2, 2):
        raise CliError(f"function {name!r} needs three qubits; "
                       "use label:<spec> for other dims")
    return table[name]


def _cmd_roof(args) -> int:
    rho = _load_density(args.state)
    f = _roof_function(args.function, rho)
    result = convex_roof(rho, f, m=args.m, restarts=args.restarts, seed=args.seed,
                         tol=args.tol, max_iters=args.max_iters, jobs=args.jobs)
    out = result.to_dict()
    out["function"] = args.function
    _emit(out)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _lattice_text(data: dict) -> str:
    lines = [f"n={data['n']}: {len(data['nodes'])} proper labels, "
             f"{len(data['classes'])} classes"]
    lines.append("labels:")
    for i, node in enumerate(data["nodes"]):
        lines.append(f"  [{i}] {node}")
    if data["classes"]:
        lines.append("classes (excluded labels by index):")
        for cls in data["classes"]:
            name = cls.get("name", "")
            w = "" if cls.get("w_flag") is None else f" w={cls['w_flag']}"
            lines.append(f"  {name:8s} excluded={cls['excluded']}{w}")
    return "\n".join(lines)


def _lattice_dot(data: dict) -> str:
    lines = ["digraph labels {", "  rankdir=BT;"]
    for i, node in enumerate(data["nodes"]):
        lines.append(f'  n{i} [label="{node}"];')
    for lo, hi in data["edges"]:
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines)


def _cmd_lattice(args) -> int:
    if args.classes and args.n > 4:
        raise CliError("class enumeration is supported for n <= 4")
    if args.n > 6:
        raise CliError("label enumeration is supported for n <= 6")
    data = lattice_json(args.n, pss_extension=args.pss)
    if not args.classes:
        data["classes"] = []
    if args.format == "json":
        _emit(data)
    elif args.format == "dot":
        print(_lattice_dot(data))
    else:
        print(_lattice_text(data))
    return EXIT_OK


def _cmd_corpus(args) -> int:
    if not args.run:
        _emit([{"name": e.name, "kind": e.kind, "dims": list(e.dims),
                "note": e.note, "expected": sorted(e.expected)} for e in corpus()])
        return EXIT_OK
    report = run_corpus(restarts=args.restarts, seed=args.seed, jobs=args.jobs)
    report["seed"] = args.seed
    _emit(report)
    return EXIT_OK if report["passed"] else 1


def _cmd_report(args) -> int:
    result = write_report(args.outdir, run=args.run, restarts=args.restarts,
                          seed=args.seed, jobs=args.jobs)
    result["seed"] = args.seed
    _emit(result)
    if result["passed"] is False:
        return 1
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="partsep",
        description="Partial-separability toolkit for tripartite quantum states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="indicator vector of a pure three-qubit state")
    p.add_argument("state", help="state JSON (amplitudes or canonical params)")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("classify-pure", help="class of a pure state")
    p.add_argument("state")
    p.add_argument("--threshold", type=float, default=1e-7)
    p.set_defaults(func=_cmd_classify_pure)

    p = sub.add_parser("classify-mixed", help="partial-separability class of a mixed state")
    p.add_argument("state")
    p.add_argument("--functions", choices=("fts", "mult"), default=None)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=250)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_classify_mixed)

    p = sub.add_parser("roof", help="convex-roof value of a pure-state function")
    p.add_argument("state")
    p.add_argument("--function", required=True,
                   help="y|s1..s3|g1..g3|t|tau2 or label:<partition,partition,...>")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--max-iters", type=int, default=250)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_roof)

    p = sub.add_parser("lattice", help="proper-label poset and class enumeration")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--classes", action="store_true")
    p.add_argument("--pss", action="store_true",
                   help="include the W/GHZ refinement of the top class")
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.set_defaults(func=_cmd_lattice)

    p = sub.add_parser("corpus", help="list or re-verify the reference states")
    p.add_argument("--run", action="store_true")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_corpus)

    p = sub.add_parser("report", help="write CSV tables and figures for the corpus")
    p.add_argument("--outdir", required=True)
    p.add_argument("--run", action="store_true", help="also run the verification suite")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except ClassificationError as err:
        print(f"classification error: {err}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (ValueError, ArithmeticError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
