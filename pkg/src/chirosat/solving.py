"""Decision pipeline: SAT backends, model decoding, admissible-chirotope
enumeration, and independent certificate verification.

Two backends decide a formula: the deterministic embedded solver, and any
external DIMACS solver following the competition conventions ("s " status
line and "v " value lines, or exit codes 10/20).  Satisfying models are
always checked against every clause before being trusted, and SAT
certificates are re-verified through the chirotope module, which shares
no code with the encoder.
"""

from __future__ import annotations

import re
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from .chirotopes import (
    Chirotope,
    admissibility_violations,
    gp_violations,
    totally_positive_supports,
)
from .encoding import (
    Clause,
    CnfFormula,
    EncodingStats,
    VarMap,
    blocking_clause,
    encode_instance,
    write_dimacs,
)
from .sat import Solver
from .surfaces import Triangulation, forbidden_pairs

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"

DEFAULT_TIMEOUT = 7200.0

_ANSI_RE = re.compile(r"\x1b\[[0-9;]*[@-~]")


@dataclass(frozen=True)
class SolverVerdict:
    """Outcome of one solver run.  SAT verdicts carry a total model that
    has been validated against every clause."""

    status: str
    model: Optional[tuple[bool, ...]]
    solver: str
    wall_time: float
    detail: str = ""

    def __post_init__(self) -> None:
        if self.status == SAT and self.model is None:
            raise ValueError("SAT verdict requires a model")
        if self.status != SAT and self.model is not None:
            raise ValueError(f"{self.status} verdict must not carry a model")


def model_satisfies(model: Sequence[bool], clauses: Sequence[Clause]) -> bool:
    """Whether a total assignment satisfies every clause."""
    return all(
        any(model[lit - 1] if lit > 0 else not model[-lit - 1] for lit in clause)
        for clause in clauses
    )


def parse_competition_output(text: str) -> tuple[Optional[str], Optional[list[int]]]:
    """Extract the status and the value literals from SAT-competition
    style solver output, tolerating ANSI escapes and decorated lines."""
    clean = _ANSI_RE.sub("", text).replace("\r", "\n")
    status = None
    values: list[int] = []
    for line in clean.splitlines():
        line = line.strip()
        if line.startswith("s "):
            if "UNSATISFIABLE" in line:
                status = UNSAT
            elif "SATISFIABLE" in line:
                status = SAT
        elif line.startswith("v ") or line == "v":
            for token in line[1:].split():
                try:
                    values.append(int(token))
                except ValueError:
                    pass
    if values and values[-1] == 0:
        values.pop()
    return status, values or None


def solve_formula(
    formula: CnfFormula,
    backend: str = "embedded",
    solver_cmd: str | None = None,
    timeout: float = DEFAULT_TIMEOUT,
    proof_path: str | Path | None = None,
) -> SolverVerdict:
    """Decide a formula with the chosen backend.  SAT models are checked
    against every clause before being returned; timeouts and solver
    failures yield UNKNOWN with diagnostics, never UNSAT.

    `proof_path` replaces a `{proof}` placeholder in the solver command,
    letting solvers that emit refutation traces keep them; the trace is
    recorded, not checked."""
    if backend == "embedded":
        return _solve_embedded(formula, timeout)
    if backend == "external":
        if not solver_cmd:
            raise ValueError("external backend requires a solver command template")
        return _solve_external(formula, solver_cmd, timeout, proof_path)
    raise ValueError(f"unknown backend {backend!r}")


def _solve_embedded(formula: CnfFormula, timeout: float | None) -> SolverVerdict:
    start = time.monotonic()
    solver = Solver(formula.num_vars)
    for clause in formula.clauses:
        solver.add_clause(clause)
    result = solver.solve(timeout=timeout)
    elapsed = time.monotonic() - start
    if result is None:
        return SolverVerdict(UNKNOWN, None, "embedded", elapsed, detail="timeout")
    if not result:
        return SolverVerdict(UNSAT, None, "embedded", elapsed)
    model = solver.model()
    if not model_satisfies(model, formula.clauses):
        raise RuntimeError("internal error: embedded solver returned a non-model")
    return SolverVerdict(SAT, model, "embedded", elapsed)


def _solve_external(
    formula: CnfFormula,
    solver_cmd: str,
    timeout: float,
    proof_path: str | Path | None = None,
) -> SolverVerdict:
    start = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="chirosat-") as tmp:
        cnf_path = Path(tmp) / "instance.cnf"
        cnf_path.write_text(write_dimacs(formula, include_comments=False), encoding="utf-8")
        proof = Path(proof_path) if proof_path is not None else Path(tmp) / "proof.out"
        if "{cnf}" in solver_cmd:
            command = solver_cmd.format(cnf=cnf_path, proof=proof)
        else:
            command = f"{solver_cmd} {cnf_path}"
        argv = shlex.split(command)
        try:
            proc = subprocess.run(
                argv,
                capture_output=True,
                text=True,
                timeout=timeout,
                cwd=tmp,
            )
        except subprocess.TimeoutExpired:
            elapsed = time.monotonic() - start
            return SolverVerdict(
                UNKNOWN, None, command, elapsed, detail=f"timeout after {timeout}s"
            )
        except OSError as exc:
            elapsed = time.monotonic() - start
            return SolverVerdict(UNKNOWN, None, command, elapsed, detail=f"launch failed: {exc}")
    elapsed = time.monotonic() - start
    status, values = parse_competition_output(proc.stdout)
    if status is None:
        if proc.returncode == 10:
            status = SAT
        elif proc.returncode == 20:
            status = UNSAT
        else:
            head = (proc.stdout + proc.stderr)[:500]
            return SolverVerdict(
                UNKNOWN,
                None,
                command,
                elapsed,
                detail=f"unparseable solver output (exit {proc.returncode}): {head!r}",
            )
    if status == UNSAT:
        return SolverVerdict(UNSAT, None, command, elapsed)
    if not values:
        return SolverVerdict(
            UNKNOWN, None, command, elapsed, detail="solver reported SAT without a model"
        )
    model = [False] * formula.num_vars
    for lit in values:
        var = abs(lit)
        if 1 <= var <= formula.num_vars:
            model[var - 1] = lit > 0
    model_t = tuple(model)
    if not model_satisfies(model_t, formula.clauses):
        return SolverVerdict(
            UNKNOWN,
            None,
            command,
            elapsed,
            detail="solver model does not satisfy the formula",
        )
    return SolverVerdict(SAT, model_t, command, elapsed)


def decode_model(model: Sequence[bool], vm: VarMap) -> Chirotope:
    """Chirotope from a total valuation: variable true means sign +1."""
    if len(model) != vm.num_vars:
        raise ValueError(f"model assigns {len(model)} of {vm.num_vars} variables")
    return Chirotope(vm.n, vm.r, tuple(1 if b else -1 for b in model))


@dataclass
class EnumerationResult:
    """Outcome of blocking-clause model enumeration.  `exhaustive` is True
    only when the final solver call proved the residual formula
    unsatisfiable."""

    count: int
    exhaustive: bool
    chirotopes: list[Chirotope]
    status: str
    wall_time: float
    detail: str = ""

    def antipodal_classes(self) -> int:
        """Number of {chi, -chi} classes among the enumerated chirotopes.
        Chirotopes represent oriented matroids two-to-one, so published
        counts often refer to these classes rather than raw models."""
        sign_sets = {chi.signs for chi in self.chirotopes}
        return len({frozenset((s, tuple(-x for x in s))) for s in sign_sets})


def enumerate_models(
    formula: CnfFormula,
    vm: VarMap,
    backend: str = "embedded",
    solver_cmd: str | None = None,
    limit: int | None = None,
    timeout: float | None = None,
    on_model: Callable[[Chirotope], None] | None = None,
) -> EnumerationResult:
    """Enumerate all models: solve, decode, emit, block, repeat until
    unsatisfiable or `limit` models.  The embedded backend keeps one
    incremental solver, so its model order is deterministic."""
    start = time.monotonic()
    chis: list[Chirotope] = []

    def remaining() -> float | None:
        if timeout is None:
            return None
        return timeout - (time.monotonic() - start)

    def record(model: tuple[bool, ...]) -> None:
        chi = decode_model(model, vm)
        chis.append(chi)
        if on_model is not None:
            on_model(chi)

    if backend == "embedded":
        solver = Solver(formula.num_vars)
        for clause in formula.clauses:
            solver.add_clause(clause)
        while limit is None or len(chis) < limit:
            result = solver.solve(timeout=remaining())
            if result is None:
                return EnumerationResult(
                    len(chis),
                    False,
                    chis,
                    UNKNOWN,
                    time.monotonic() - start,
                    detail="timeout during enumeration; count is a lower bound",
                )
            if not result:
                return EnumerationResult(
                    len(chis), True, chis, UNSAT, time.monotonic() - start
                )
            model = solver.model()
            if not model_satisfies(model, formula.clauses):
                raise RuntimeError("internal error: embedded solver returned a non-model")
            record(model)
            solver.add_clause(blocking_clause(model, vm))
        return EnumerationResult(len(chis), False, chis, SAT, time.monotonic() - start)

    if backend != "external":
        raise ValueError(f"unknown backend {backend!r}")
    blocked = CnfFormula(formula.num_vars)
    for clause, tags in zip(formula.clauses, formula.provenance):
        blocked.add(clause, tags[0])
    while limit is None or len(chis) < limit:
        budget = remaining()
        if budget is not None and budget <= 0:
            return EnumerationResult(
                len(chis),
                False,
                chis,
                UNKNOWN,
                time.monotonic() - start,
                detail="timeout during enumeration; count is a lower bound",
            )
        verdict = solve_formula(
            blocked,
            backend="external",
            solver_cmd=solver_cmd,
            timeout=budget if budget is not None else DEFAULT_TIMEOUT,
        )
        if verdict.status == UNSAT:
            return EnumerationResult(len(chis), True, chis, UNSAT, time.monotonic() - start)
        if verdict.status != SAT:
            return EnumerationResult(
                len(chis),
                False,
                chis,
                UNKNOWN,
                time.monotonic() - start,
                detail=verdict.detail,
            )
        record(verdict.model)
        blocked.add(blocking_clause(verdict.model, vm), f"block {len(chis)}")
    return EnumerationResult(len(chis), False, chis, SAT, time.monotonic() - start)


@dataclass(frozen=True)
class CertificateReport:
    """Independent verification of a decoded chirotope: the three-term
    conditions, acyclicity, and admissibility for the instance's pairs,
    with witnesses for whatever fails."""

    gp_ok: bool
    acyclic_ok: bool
    admissible_ok: bool
    gp_witnesses: tuple = ()
    positive_supports: tuple = ()
    violating_pairs: tuple = ()

    @property
    def ok(self) -> bool:
        return self.gp_ok and self.acyclic_ok and self.admissible_ok

    def json_dict(self) -> dict:
        return {
            "gp_ok": self.gp_ok,
            "acyclic_ok": self.acyclic_ok,
            "admissible_ok": self.admissible_ok,
            "gp_witnesses": [[list(s), list(q)] for s, q in self.gp_witnesses],
            "positive_supports": [list(s) for s in self.positive_supports],
            "violating_pairs": [
                {"triangle": list(p.triangle), "edge": list(p.edge)}
                for p in self.violating_pairs
            ],
        }


def verify_certificate(
    chi: Chirotope, tri: Triangulation, mode: str = "embedding"
) -> CertificateReport:
    """Run the chirotope-module checks (which share no code with the
    encoder) against a triangulation's forbidden pairs."""
    if chi.n != tri.n:
        raise ValueError(f"chirotope on {chi.n} elements vs {tri.n} vertices")
    gp_bad = gp_violations(chi)
    positive = totally_positive_supports(chi)
    pair_bad = admissibility_violations(chi, forbidden_pairs(tri, mode))
    return CertificateReport(
        gp_ok=not gp_bad,
        acyclic_ok=not positive,
        admissible_ok=not pair_bad,
        gp_witnesses=tuple(gp_bad),
        positive_supports=tuple(positive),
        violating_pairs=tuple(pair_bad),
    )


@dataclass
class DecisionReport:
    """Full verdict for one instance, serializable to the report schema
    {instance, mode, status, stats, model?, certificate?, times, solver}."""

    name: str
    sha256: str
    n: int
    facet_count: int
    mode: str
    rank: int
    status: str
    stats: EncodingStats
    solver: str
    times: dict[str, float]
    chirotope: Optional[str] = None
    certificate: Optional[CertificateReport] = None
    detail: str = ""

    @property
    def conclusion(self) -> str:
        kind = "embedding" if self.mode == "embedding" else "immersion"
        if self.status == UNSAT:
            return (
                "no admissible acyclic uniform oriented matroid exists: "
                f"the complex has no polyhedral {kind}"
            )
        if self.status == SAT:
            return (
                "an admissible acyclic uniform oriented matroid exists "
                "(certificate verified independently)"
            )
        return "inconclusive"

    def json_dict(self) -> dict:
        out = {
            "instance": {
                "name": self.name,
                "sha256": self.sha256,
                "n": self.n,
                "facets": self.facet_count,
            },
            "mode": self.mode,
            "rank": self.rank,
            "status": self.status,
            "conclusion": self.conclusion,
            "stats": self.stats.json_dict(),
            "times": self.times,
            "solver": self.solver,
        }
        if self.chirotope is not None:
            out["model"] = self.chirotope
        if self.certificate is not None:
            out["certificate"] = self.certificate.json_dict()
        if self.detail:
            out["detail"] = self.detail
        return out


def decide(
    tri: Triangulation,
    mode: str = "embedding",
    rank: int = 4,
    backend: str = "embedded",
    solver_cmd: str | None = None,
    timeout: float = DEFAULT_TIMEOUT,
    name: str = "",
    sha256: str = "",
    proof_path: str | Path | None = None,
    break_negation: bool = False,
) -> DecisionReport:
    """Encode, solve, and (for SAT) decode and independently verify the
    certificate; a failed verification is a hard error, never a silent
    pass.  UNSAT means no admissible acyclic uniform chirotope exists, so
    the complex has no polyhedral embedding (resp. immersion)."""
    t0 = time.monotonic()
    formula, vm, stats = encode_instance(tri, r=rank, mode=mode, break_negation=break_negation)
    t_encode = time.monotonic() - t0
    verdict = solve_formula(
        formula,
        backend=backend,
        solver_cmd=solver_cmd,
        timeout=timeout,
        proof_path=proof_path,
    )
    times = {"encode": t_encode, "solve": verdict.wall_time}
    report = DecisionReport(
        name=name,
        sha256=sha256,
        n=tri.n,
        facet_count=len(tri.facets),
        mode=mode,
        rank=rank,
        status=verdict.status,
        stats=stats,
        solver=verdict.solver,
        times=times,
        detail=verdict.detail,
    )
    if verdict.status == SAT:
        t1 = time.monotonic()
        chi = decode_model(verdict.model, vm)
        certificate = verify_certificate(chi, tri, mode)
        times["verify"] = time.monotonic() - t1
        if not certificate.ok:
            raise RuntimeError(
                "certificate verification failed for a SAT verdict: "
                f"gp_ok={certificate.gp_ok} acyclic_ok={certificate.acyclic_ok} "
                f"admissible_ok={certificate.admissible_ok}"
            )
        report.chirotope = chi.to_line()
        report.certificate = certificate
    times["total"] = time.monotonic() - t0
    return report


def parse_dimacs(text: str) -> tuple[int, list[Clause]]:
    """Parse DIMACS CNF text into (num_vars, clauses)."""
    num_vars = None
    clauses: list[Clause] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header {line!r}")
            num_vars = int(parts[2])
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                if current:
                    clauses.append(tuple(current))
                    current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        raise ValueError("missing DIMACS header")
    return num_vars, clauses


def solve_dimacs_text(text: str, timeout: float | None = None) -> tuple[str, Optional[list[int]]]:
    """Solve raw DIMACS with the embedded solver; returns the status and,
    for SAT, the signed literal values.  Used by the `solve-dimacs`
    subcommand so the embedded solver can serve as an external backend."""
    num_vars, clauses = parse_dimacs(text)
    solver = Solver(num_vars)
    for clause in clauses:
        solver.add_clause(clause)
    result = solver.solve(timeout=timeout)
    if result is None:
        return UNKNOWN, None
    if not result:
        return UNSAT, None
    model = solver.model()
    return SAT, [v if model[v - 1] else -v for v in range(1, num_vars + 1)]
