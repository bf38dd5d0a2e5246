"""Command-line interface.

Subcommands: validate, encode, decide, enumerate, certify, surgery,
batch, solve-dimacs.  Exit codes follow the SAT-competition convention
for decisions (0 = SAT, 10 = UNSAT, 20 = UNKNOWN); usage and input
errors exit 2, failed checks exit 1.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .chirotopes import Chirotope
from .encoding import encode_instance, write_dimacs
from .solving import (
    DEFAULT_TIMEOUT,
    SAT,
    UNKNOWN,
    UNSAT,
    decide,
    enumerate_models,
    solve_dimacs_text,
    verify_certificate,
)
from .surfaces import (
    FacetInputError,
    SurgeryError,
    connected_sum,
    load_facets,
    remove_facet,
    surface_json,
    validate_surface,
)

EXIT_SAT = 0
EXIT_UNSAT = 10
EXIT_UNKNOWN = 20
EXIT_FAIL = 1
EXIT_ERROR = 2

_STATUS_EXIT = {SAT: EXIT_SAT, UNSAT: EXIT_UNSAT, UNKNOWN: EXIT_UNKNOWN}


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load(path_str: str):
    path = Path(path_str)
    try:
        tri = load_facets(path)
    except OSError as exc:
        raise FacetInputError(f"cannot read {path}: {exc}") from exc
    return tri, path


def _print_json(data: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for key, value in sorted(data.items()):
            print(f"{key}: {value}")


def _parse_facet_arg(text: str) -> tuple[int, int, int]:
    parts = [int(t) for t in text.replace(",", " ").split()]
    if len(parts) != 3:
        raise ValueError(f"facet argument needs 3 vertices, got {text!r}")
    return tuple(sorted(parts))


def cmd_validate(args) -> int:
    tri, _ = _load(args.input)
    report = validate_surface(tri)
    _print_json(surface_json(tri, report), args.format)
    return EXIT_SAT if report.is_closed_surface and report.orientable else EXIT_FAIL


def cmd_encode(args) -> int:
    tri, path = _load(args.input)
    formula, vm, stats = encode_instance(
        tri, r=args.rank, mode=args.mode, break_negation=args.break_negation
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{path.stem}.{args.mode}"
    cnf_path = out_dir / f"{stem}.cnf"
    cnf_path.write_text(write_dimacs(formula, varmap=vm, include_comments=True), encoding="utf-8")
    varmap_path = out_dir / f"{stem}.varmap.json"
    varmap_path.write_text(
        json.dumps(vm.json_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    summary = stats.json_dict()
    summary["cnf"] = str(cnf_path)
    summary["varmap"] = str(varmap_path)
    _print_json(summary, args.format)
    return EXIT_SAT


def cmd_decide(args) -> int:
    tri, path = _load(args.input)
    report = decide(
        tri,
        mode=args.mode,
        rank=args.rank,
        backend=args.backend,
        solver_cmd=args.solver_cmd,
        timeout=args.timeout,
        name=path.stem,
        sha256=_sha256(path),
        break_negation=args.break_negation,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / f"{path.stem}.{args.mode}.report.json"
    report_path.write_text(
        json.dumps(report.json_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if report.chirotope is not None:
        chi_path = out_dir / f"{path.stem}.{args.mode}.chirotope"
        chi_path.write_text(report.chirotope + "\n", encoding="utf-8")
    _print_json(report.json_dict(), args.format)
    return _STATUS_EXIT[report.status]


def cmd_enumerate(args) -> int:
    tri, path = _load(args.input)
    formula, vm, _ = encode_instance(
        tri, r=args.rank, mode=args.mode, break_negation=args.break_negation
    )
    archive = None
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        archive = open(out_dir / f"{path.stem}.{args.mode}.chirotopes", "w", encoding="utf-8")

    def emit(chi: Chirotope) -> None:
        line = chi.to_line()
        if archive is not None:
            archive.write(line + "\n")
        else:
            print(line)

    try:
        result = enumerate_models(
            formula,
            vm,
            backend=args.backend,
            solver_cmd=args.solver_cmd,
            limit=args.limit,
            timeout=args.timeout,
            on_model=emit,
        )
    finally:
        if archive is not None:
            archive.close()
    summary = {
        "count": result.count,
        "exhaustive": result.exhaustive,
        "status": result.status,
    }
    if result.exhaustive:
        summary["antipodal_classes"] = result.antipodal_classes()
    if result.detail:
        summary["detail"] = result.detail
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_UNKNOWN if result.status == UNKNOWN else EXIT_SAT


def cmd_certify(args) -> int:
    tri, _ = _load(args.complex)
    chi_path = Path(args.chirotope)
    try:
        text = chi_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FacetInputError(f"cannot read {chi_path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FacetInputError(f"{chi_path} contains no chirotope line")
    try:
        chi = Chirotope.from_line(lines[0])
    except ValueError as exc:
        raise FacetInputError(f"bad chirotope line: {exc}") from exc
    if chi.n != tri.n:
        print(
            f"dimension mismatch: chirotope on {chi.n} elements, complex on {tri.n} vertices",
            file=sys.stderr,
        )
        return EXIT_ERROR
    report = verify_certificate(chi, tri, mode=args.mode)
    _print_json(report.json_dict(), args.format)
    return EXIT_SAT if report.ok else EXIT_FAIL


def cmd_surgery(args) -> int:
    if args.operation == "remove-facet":
        tri, _ = _load(args.input)
        result = remove_facet(tri, _parse_facet_arg(args.facet))
    else:
        tri_a, _ = _load(args.input)
        tri_b, _ = _load(args.second)
        facet_a = _parse_facet_arg(args.facet)
        facet_b = _parse_facet_arg(args.facet_b) if args.facet_b else facet_a
        ident = None
        if args.ident:
            ident = {}
            for chunk in args.ident.split(","):
                left, _, right = chunk.partition(":")
                ident[int(left)] = int(right)
        result = connected_sum(tri_a, tri_b, facet_a, facet_b, ident)
    out_path = Path(args.out)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(result.to_text(), encoding="utf-8")
    _print_json(surface_json(result), args.format)
    return EXIT_SAT


def cmd_batch(args) -> int:
    manifest_path = Path(args.manifest)
    try:
        entries = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read manifest {manifest_path}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if not isinstance(entries, list):
        print("manifest must be a JSON array of {path, name?, mode?}", file=sys.stderr)
        return EXIT_ERROR
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for entry in entries:
        path_str = entry["path"] if isinstance(entry, dict) else str(entry)
        mode = entry.get("mode", args.mode) if isinstance(entry, dict) else args.mode
        name = entry.get("name") if isinstance(entry, dict) else None
        path = Path(path_str)
        if not path.is_absolute():
            path = manifest_path.parent / path
        name = name or path.stem
        row = {"name": name, "mode": mode, "genus": None, "status": "ERROR", "time": 0.0}
        try:
            tri = load_facets(path)
            row["genus"] = validate_surface(tri).genus
            report = decide(
                tri,
                mode=mode,
                rank=args.rank,
                backend=args.backend,
                solver_cmd=args.solver_cmd,
                timeout=args.timeout,
                name=name,
                sha256=_sha256(path),
            )
            row["status"] = report.status
            row["time"] = round(report.times["total"], 3)
            report_path = out_dir / f"{name}.{mode}.report.json"
            report_path.write_text(
                json.dumps(report.json_dict(), indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
        except (FacetInputError, SurgeryError, OSError, RuntimeError, ValueError) as exc:
            row["error"] = str(exc)
        rows.append(row)
    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    width = max([len(r["name"]) for r in rows], default=4)
    print(f"{'name':<{width}}  genus  status   time")
    for row in rows:
        genus = "-" if row["genus"] is None else row["genus"]
        print(f"{row['name']:<{width}}  {genus!s:>5}  {row['status']:<7}  {row['time']}")
    return EXIT_SAT


def cmd_solve_dimacs(args) -> int:
    path = Path(args.input)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    status, values = solve_dimacs_text(text, timeout=args.timeout)
    if status == SAT:
        print("s SATISFIABLE")
        print("v " + " ".join(map(str, values)) + " 0")
        return 10
    if status == UNSAT:
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


def _add_common(parser: argparse.ArgumentParser, solver: bool = False, encoder: bool = False) -> None:
    parser.add_argument("--mode", choices=("embedding", "immersion"), default="embedding")
    parser.add_argument("--rank", type=int, default=4, help="oriented matroid rank (default 4)")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    if encoder:
        parser.add_argument(
            "--break-negation",
            action="store_true",
            help="pin the first basis sign, keeping one chirotope per antipodal pair",
        )
    if solver:
        parser.add_argument("--backend", choices=("embedded", "external"), default="embedded")
        parser.add_argument(
            "--solver-cmd",
            default=None,
            help="external solver command template; {cnf} is replaced by the DIMACS path",
        )
        parser.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chirosat",
        description=(
            "Decide whether a triangulated surface admits an acyclic uniform "
            "oriented matroid compatible with a polyhedral embedding or "
            "immersion, via SAT."
        ),
    )
    parser.add_argument(
        "--config",
        default=None,
        help="JSON file with default values for the subcommand flags",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the closed-orientable-surface conditions")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("encode", help="write the DIMACS instance and variable map")
    p.add_argument("input")
    p.add_argument("--out", default=".")
    _add_common(p, encoder=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decide", help="decide one instance (exit 0 SAT / 10 UNSAT / 20 UNKNOWN)")
    p.add_argument("input")
    p.add_argument("--out", default=".")
    _add_common(p, solver=True, encoder=True)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("enumerate", help="enumerate all admissible chirotopes")
    p.add_argument("input")
    p.add_argument("--out", default=None)
    p.add_argument("--limit", type=int, default=None)
    _add_common(p, solver=True, encoder=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("certify", help="verify a chirotope against a complex")
    p.add_argument("complex")
    p.add_argument("chirotope")
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("surgery", help="remove a facet or form a connected sum")
    p.add_argument("operation", choices=("remove-facet", "connected-sum"))
    p.add_argument("input")
    p.add_argument("second", nargs="?", default=None)
    p.add_argument("--facet", required=True, help="vertices like '1,2,3'")
    p.add_argument("--facet-b", default=None, help="facet of the second complex")
    p.add_argument("--ident", default=None, help="vertex identification like '4:1,5:2,6:3'")
    p.add_argument("--out", required=True, help="output facet file")
    _add_common(p)
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("batch", help="decide every instance in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=".")
    _add_common(p, solver=True)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("solve-dimacs", help="run the embedded solver on a DIMACS file")
    p.add_argument("input")
    p.add_argument("--timeout", type=float, default=None)
    p.set_defaults(func=cmd_solve_dimacs)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # --config supplies defaults; explicit flags win because argparse
    # keeps the last occurrence of a flag.
    config_args: list[str] = []
    if "--config" in argv:
        at = argv.index("--config")
        try:
            config = json.loads(Path(argv[at + 1]).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError, IndexError) as exc:
            print(f"cannot read config: {exc}", file=sys.stderr)
            return EXIT_ERROR
        argv = argv[:at] + argv[at + 2 :]
        for key, value in sorted(config.items()):
            if value is None:
                continue
            config_args.extend(["--" + str(key).replace("_", "-"), str(value)])
    if config_args:
        # insert config flags right after the subcommand token
        cmd_at = next((i for i, a in enumerate(argv) if not a.startswith("-")), None)
        if cmd_at is not None:
            argv = argv[: cmd_at + 1] + config_args + argv[cmd_at + 1 :]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (FacetInputError, SurgeryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
