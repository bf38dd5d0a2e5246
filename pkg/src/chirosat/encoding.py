"""CNF encoding of the search for an acyclic uniform oriented matroid
admissible for a triangulated surface.

One Boolean variable per sorted r-subset (true = sign +1), numbered by
lexicographic rank.  Three clause families:

  * 16 six-literal clauses per (sigma, quadruple) instance, blocking the
    sign patterns where the three-term products all agree;
  * two (r+1)-literal clauses per (r+1)-subset, forbidding the totally
    positive circuit signature (acyclicity);
  * two (r+1)-literal clauses per disjoint triangle/edge pair, forbidding
    the circuit whose positive part is the triangle and negative part is
    the edge (admissibility).

Signs of unsorted tuples are folded into literal polarity when clauses
are built, so no auxiliary variables are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from io import StringIO
from itertools import combinations, product
from typing import Iterable, Sequence

from .chirotopes import (
    Basis,
    SignedCircuit,
    all_bases,
    basis_from_index,
    basis_index,
    sort_with_sign,
)
from .surfaces import SimplexPair, Triangulation, forbidden_pairs

Clause = tuple[int, ...]


@dataclass(frozen=True)
class VarMap:
    """Bijection between sorted r-subsets of 1..n and variable ids
    1..C(n, r) in lexicographic order."""

    n: int
    r: int

    @property
    def num_vars(self) -> int:
        return math.comb(self.n, self.r)

    def var(self, basis: Sequence[int]) -> int:
        return basis_index(basis, self.n, self.r)

    def basis(self, var: int) -> Basis:
        return basis_from_index(var, self.n, self.r)

    def literal(self, t: Sequence[int], polarity: int = 1) -> int:
        """Literal over the variable of sorted(t); the sign of the sorting
        permutation multiplies the requested polarity."""
        if polarity not in (-1, 1):
            raise ValueError(f"polarity must be +-1, got {polarity}")
        key, sign = sort_with_sign(t)
        if sign == 0:
            raise ValueError(f"tuple {tuple(t)} has repeated entries, no variable exists")
        return polarity * sign * basis_index(key, self.n, self.r)

    def json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "basis_to_var": {
                " ".join(map(str, self.basis(i))): i for i in range(1, self.num_vars + 1)
            },
            "var_to_basis": {
                str(i): list(self.basis(i)) for i in range(1, self.num_vars + 1)
            },
        }


def canonical_literal(t: Sequence[int], polarity: int, vm: VarMap) -> int:
    """Module-level alias for VarMap.literal."""
    return vm.literal(t, polarity)


# Blocked sign patterns over (alpha..zeta), in table row order: the free
# signs (alpha, beta, gamma, epsilon) count down from ++++ to ----, delta
# and zeta are forced so that all three products agree.
def _blocked_patterns() -> tuple[tuple[int, ...], ...]:
    rows = []
    for sa, sb, sg, se in product((1, -1), repeat=4):
        p = sa * sb
        rows.append((sa, sb, sg, -p * sg, se, p * se))
    return tuple(rows)


_GP_BLOCKED = _blocked_patterns()


def gp_clauses(sigma: Sequence[int], quad: Sequence[int], vm: VarMap) -> list[Clause]:
    """The 16 six-literal clauses of one three-term instance.

    With alpha=(sigma,x1,x2), beta=(sigma,x3,x4), gamma=(sigma,x1,x3),
    delta=(sigma,x2,x4), epsilon=(sigma,x1,x4), zeta=(sigma,x2,x3), each
    clause blocks one of the 16 sign patterns in which the products
    alpha*beta, -gamma*delta, epsilon*zeta all carry the same sign.
    """
    sigma = tuple(sigma)
    quad = tuple(quad)
    if len(sigma) != vm.r - 2:
        raise ValueError(f"sigma {sigma} must have {vm.r - 2} elements")
    if len(quad) != 4 or list(quad) != sorted(set(quad)):
        raise ValueError(f"quadruple {quad} must be 4 strictly increasing elements")
    if set(sigma) & set(quad):
        raise ValueError(f"sigma {sigma} and quadruple {quad} overlap")
    x1, x2, x3, x4 = quad
    base = [
        vm.literal(sigma + (x1, x2)),
        vm.literal(sigma + (x3, x4)),
        vm.literal(sigma + (x1, x3)),
        vm.literal(sigma + (x2, x4)),
        vm.literal(sigma + (x1, x4)),
        vm.literal(sigma + (x2, x3)),
    ]
    # Blocking a pattern asserts at least one position differs from it.
    return [tuple(-s * lit for s, lit in zip(pattern, base)) for pattern in _GP_BLOCKED]


def forbid_circuit_clauses(circuit: SignedCircuit, vm: VarMap) -> tuple[Clause, Clause]:
    """Two (r+1)-literal clauses asserting that the chirotope-induced
    signature on the circuit's support equals neither the given signature
    nor its negation."""
    supp = circuit.support
    if len(supp) != vm.r + 1:
        raise ValueError(f"support {supp} must have {vm.r + 1} elements")
    lits = []
    for i in range(len(supp)):
        sub = supp[:i] + supp[i + 1 :]
        parity = -1 if (i + 1) % 2 else 1
        lits.append(vm.literal(sub, parity * circuit.signs[i]))
    return tuple(-lit for lit in lits), tuple(lits)


def acyclicity_clauses(n: int, r: int, vm: VarMap) -> list[Clause]:
    """Forbid the all-positive circuit on every (r+1)-subset: 2*C(n, r+1)
    clauses."""
    out = []
    for supp in all_bases(n, r + 1):
        c1, c2 = forbid_circuit_clauses(SignedCircuit(supp, (1,) * (r + 1)), vm)
        out.append(c1)
        out.append(c2)
    return out


def _pair_circuit(pair: SimplexPair) -> SignedCircuit:
    return SignedCircuit.from_parts(pair.triangle, pair.edge)


def admissibility_clauses(pairs: Iterable[SimplexPair], vm: VarMap) -> list[Clause]:
    """Forbid, for each pair, the circuit with positive part the triangle
    and negative part the edge: 2 clauses per pair."""
    out = []
    for pair in pairs:
        c1, c2 = forbid_circuit_clauses(_pair_circuit(pair), vm)
        out.append(c1)
        out.append(c2)
    return out


@dataclass(frozen=True)
class EncodingStats:
    """Clause counts per family; the closed forms are
    gp = 16*C(n,r-2)*C(n-r+2,4), acyclicity = 2*C(n,r+1),
    admissibility = 2*|pairs|."""

    variables: int
    gp_clauses: int
    acyclicity_clauses: int
    admissibility_clauses: int

    @property
    def total_clauses(self) -> int:
        return self.gp_clauses + self.acyclicity_clauses + self.admissibility_clauses

    def json_dict(self) -> dict:
        return {
            "variables": self.variables,
            "gp_clauses": self.gp_clauses,
            "acyclicity_clauses": self.acyclicity_clauses,
            "admissibility_clauses": self.admissibility_clauses,
            "total_clauses": self.total_clauses,
        }


@dataclass
class CnfFormula:
    """A clause list with per-clause provenance tags.  Identical clauses
    from different sources are stored once with their tags merged; order
    of first appearance is preserved and deterministic."""

    num_vars: int
    clauses: list[Clause]
    provenance: list[tuple[str, ...]]

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self.clauses = []
        self.provenance = []
        self._index: dict[frozenset[int], int] = {}

    def add(self, clause: Clause, tag: str) -> None:
        if not clause:
            raise ValueError("empty clause")
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} outside variable range 1..{self.num_vars}")
        key = frozenset(clause)
        if len(key) != len(clause) or any(-lit in key for lit in clause):
            raise ValueError(f"clause {clause} contains a repeated or complementary literal")
        at = self._index.get(key)
        if at is None:
            self._index[key] = len(self.clauses)
            self.clauses.append(clause)
            self.provenance.append((tag,))
        else:
            self.provenance[at] = self.provenance[at] + (tag,)

    def __len__(self) -> int:
        return len(self.clauses)

    def tagged_clauses(self) -> set[tuple[str, frozenset[int]]]:
        """Provenance-tagged clause set, for subset comparisons."""
        return {
            (tag, frozenset(clause))
            for clause, tags in zip(self.clauses, self.provenance)
            for tag in tags
        }


def _pair_tag(pair: SimplexPair) -> str:
    return "pair %s|%s" % (
        ",".join(map(str, pair.triangle)),
        ",".join(map(str, pair.edge)),
    )


def encode_instance(
    tri: Triangulation, r: int = 4, mode: str = "embedding", break_negation: bool = False
) -> tuple[CnfFormula, VarMap, EncodingStats]:
    """Build the full instance for a triangulation: three-term clauses,
    acyclicity clauses, then pair clauses, each family in lexicographic
    order.  Returns the formula, the variable map, and the stats.

    The model set is closed under flipping every variable (chirotopes come
    in antipodal pairs); `break_negation` pins the first basis sign to +1,
    keeping exactly one member of each pair.  Off by default so raw model
    counts expose the full space."""
    n = tri.n
    if n < r:
        raise ValueError(f"need at least r={r} vertices, got {n}")
    vm = VarMap(n, r)
    formula = CnfFormula(vm.num_vars)
    if break_negation:
        formula.add((1,), "negation-breaking")

    universe = range(1, n + 1)
    for sigma in combinations(universe, r - 2):
        rest = [v for v in universe if v not in sigma]
        for quad in combinations(rest, 4):
            tag = "gp %s %s" % (",".join(map(str, sigma)), ",".join(map(str, quad)))
            for clause in gp_clauses(sigma, quad, vm):
                formula.add(clause, tag)
    for supp in all_bases(n, r + 1):
        tag = "acyclic %s" % ",".join(map(str, supp))
        for clause in forbid_circuit_clauses(SignedCircuit(supp, (1,) * (r + 1)), vm):
            formula.add(clause, tag)
    pairs = forbidden_pairs(tri, mode)
    for pair in pairs:
        tag = _pair_tag(pair)
        for clause in forbid_circuit_clauses(_pair_circuit(pair), vm):
            formula.add(clause, tag)

    stats = EncodingStats(
        variables=vm.num_vars,
        gp_clauses=16 * math.comb(n, r - 2) * math.comb(n - r + 2, 4),
        acyclicity_clauses=2 * math.comb(n, r + 1),
        admissibility_clauses=2 * len(pairs),
    )
    return formula, vm, stats


def write_dimacs(
    formula: CnfFormula,
    varmap: VarMap | None = None,
    include_comments: bool = True,
) -> str:
    """Render DIMACS CNF text: optional comment preamble carrying the
    variable map and clause provenance, then the `p cnf` header and one
    clause per line.  Byte-identical for identical input."""
    out = StringIO()
    if include_comments:
        if varmap is not None:
            for i in range(1, varmap.num_vars + 1):
                out.write("c var %d %s\n" % (i, " ".join(map(str, varmap.basis(i)))))
        for i, tags in enumerate(formula.provenance, start=1):
            for tag in tags:
                out.write("c clause %d %s\n" % (i, tag))
    out.write("p cnf %d %d\n" % (formula.num_vars, len(formula.clauses)))
    for clause in formula.clauses:
        out.write(" ".join(map(str, clause)))
        out.write(" 0\n")
    return out.getvalue()


def blocking_clause(model: Sequence[bool], vm: VarMap) -> Clause:
    """One literal per variable, each complementing the model's value;
    excludes exactly that total assignment."""
    if len(model) != vm.num_vars:
        raise ValueError(f"model assigns {len(model)} of {vm.num_vars} variables")
    return tuple(-(i + 1) if value else (i + 1) for i, value in enumerate(model))
