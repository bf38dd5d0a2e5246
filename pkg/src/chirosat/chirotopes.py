"""Chirotopes of uniform oriented matroids.

Provides alternating evaluation, circuit extraction, and brute-force
checks of the three-term sign conditions, acyclicity, and admissibility.
The checks here deliberately share no code with the CNF encoder so they
can serve as an independent oracle for SAT certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

Basis = tuple[int, ...]


def all_bases(n: int, r: int) -> Iterable[Basis]:
    """Sorted r-subsets of 1..n in lexicographic order."""
    return combinations(range(1, n + 1), r)


def _check_basis(basis: Sequence[int], n: int, r: int) -> None:
    if len(basis) != r:
        raise ValueError(f"basis {tuple(basis)} does not have {r} elements")
    prev = 0
    for v in basis:
        if not prev < v <= n:
            raise ValueError(f"basis {tuple(basis)} is not strictly increasing within 1..{n}")
        prev = v


def basis_index(basis: Sequence[int], n: int, r: int) -> int:
    """1-based position of a sorted r-subset in the lexicographic
    enumeration of all sorted r-subsets of 1..n."""
    _check_basis(basis, n, r)
    rank = 0
    prev = 0
    for i, b in enumerate(basis):
        for c in range(prev + 1, b):
            rank += math.comb(n - c, r - i - 1)
        prev = b
    return rank + 1


def basis_from_index(index: int, n: int, r: int) -> Basis:
    """Inverse of basis_index."""
    if not 1 <= index <= math.comb(n, r):
        raise ValueError(f"index {index} outside 1..C({n},{r})")
    rank = index - 1
    basis = []
    c = 1
    for i in range(r):
        while True:
            block = math.comb(n - c, r - i - 1)
            if rank < block:
                break
            rank -= block
            c += 1
        basis.append(c)
        c += 1
    return tuple(basis)


def sort_with_sign(t: Sequence[int]) -> tuple[Basis, int]:
    """Sort a tuple, returning (sorted tuple, sign of the sorting
    permutation); the sign is 0 if an entry repeats."""
    out = list(t)
    sign = 1
    for i in range(1, len(out)):
        j = i
        while j > 0 and out[j - 1] > out[j]:
            out[j - 1], out[j] = out[j], out[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(out, out[1:]):
        if a == b:
            return tuple(out), 0
    return tuple(out), sign


@dataclass(frozen=True)
class SignedCircuit:
    """A signed (r+1)-element dependency: sorted support plus one sign per
    element.  Circuits come in antipodal pairs {C, -C}; the canonical
    representative has leading sign +1."""

    support: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.support) != len(self.signs):
            raise ValueError("support and signs lengths differ")
        if list(self.support) != sorted(set(self.support)):
            raise ValueError(f"support {self.support} is not strictly increasing")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError(f"signs {self.signs} must be +-1")

    @property
    def positive(self) -> tuple[int, ...]:
        return tuple(c for c, s in zip(self.support, self.signs) if s > 0)

    @property
    def negative(self) -> tuple[int, ...]:
        return tuple(c for c, s in zip(self.support, self.signs) if s < 0)

    def negated(self) -> "SignedCircuit":
        return SignedCircuit(self.support, tuple(-s for s in self.signs))

    @classmethod
    def from_parts(cls, positive: Iterable[int], negative: Iterable[int]) -> "SignedCircuit":
        pos, neg = set(positive), set(negative)
        if pos & neg:
            raise ValueError("positive and negative parts overlap")
        support = tuple(sorted(pos | neg))
        return cls(support, tuple(1 if c in pos else -1 for c in support))


@dataclass(frozen=True)
class Chirotope:
    """An alternating sign map on sorted r-subsets of 1..n, stored densely
    in lexicographic basis order.  Uniform: no zero values."""

    n: int
    r: int
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.r <= self.n:
            raise ValueError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        expected = math.comb(self.n, self.r)
        if len(self.signs) != expected:
            raise ValueError(f"expected {expected} signs, got {len(self.signs)}")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be +-1 (uniform chirotope)")

    @classmethod
    def alternating(cls, n: int, r: int) -> "Chirotope":
        """The chirotope with every basis sign +1 (realized by any n
        increasing points on the moment curve)."""
        return cls(n, r, (1,) * math.comb(n, r))

    def sign(self, basis: Sequence[int]) -> int:
        """Sign of a sorted basis."""
        return self.signs[basis_index(basis, self.n, self.r) - 1]

    def eval(self, t: Sequence[int]) -> int:
        """Alternating extension: 0 on repeated entries, otherwise the
        sorted-basis sign times the sign of the sorting permutation."""
        for v in t:
            if not 1 <= v <= self.n:
                raise ValueError(f"entry {v} outside 1..{self.n}")
        key, sign = sort_with_sign(t)
        if sign == 0:
            return 0
        return sign * self.signs[basis_index(key, self.n, self.r) - 1]

    def negate(self) -> "Chirotope":
        return Chirotope(self.n, self.r, tuple(-s for s in self.signs))

    def reorient(self, elements: Iterable[int]) -> "Chirotope":
        """Flip the sign of every basis containing an odd number of the
        given elements."""
        flip = set(elements)
        if any(not 1 <= v <= self.n for v in flip):
            raise ValueError("reorientation set outside 1..n")
        signs = list(self.signs)
        for i, basis in enumerate(all_bases(self.n, self.r)):
            if sum(1 for v in basis if v in flip) % 2:
                signs[i] = -signs[i]
        return Chirotope(self.n, self.r, tuple(signs))

    def to_line(self) -> str:
        """Serialize as `n r` followed by one +/- character per basis in
        lexicographic order; round-trips bit-exactly."""
        return f"{self.n} {self.r} " + "".join("+" if s > 0 else "-" for s in self.signs)

    @classmethod
    def from_line(cls, text: str) -> "Chirotope":
        parts = text.split()
        if len(parts) != 3:
            raise ValueError(f"expected 'n r <signs>', got {text!r}")
        n, r = int(parts[0]), int(parts[1])
        signs = []
        for ch in parts[2]:
            if ch == "+":
                signs.append(1)
            elif ch in ("-", "−"):
                signs.append(-1)
            else:
                raise ValueError(f"invalid sign character {ch!r}")
        return cls(n, r, tuple(signs))


@lru_cache(maxsize=32)
def _gp_instances(n: int, r: int):
    """Precomputed three-term instances for brute-force checking.

    Each entry is (sigma, quad, products) where products holds three
    (rank0_a, rank0_b, sign) triples: the sign pre-multiplies the two
    basis signs, with the middle product's minus folded in.
    """
    instances = []
    universe = range(1, n + 1)
    for sigma in combinations(universe, r - 2):
        rest = [v for v in universe if v not in sigma]
        for quad in combinations(rest, 4):
            x1, x2, x3, x4 = quad
            prods = []
            for factor, (a, b) in (
                (1, ((x1, x2), (x3, x4))),
                (-1, ((x1, x3), (x2, x4))),
                (1, ((x1, x4), (x2, x3))),
            ):
                key_a, sg_a = sort_with_sign(sigma + a)
                key_b, sg_b = sort_with_sign(sigma + b)
                prods.append(
                    (
                        basis_index(key_a, n, r) - 1,
                        basis_index(key_b, n, r) - 1,
                        factor * sg_a * sg_b,
                    )
                )
            instances.append((sigma, quad, tuple(prods)))
    return tuple(instances)


def gp_violations(chi: Chirotope, limit: int | None = None) -> list[tuple[Basis, Basis]]:
    """All (sigma, quadruple) instances where the three-term sign
    condition fails, i.e. the three products carry a single sign.
    Stops early after `limit` violations when given."""
    signs = chi.signs
    out = []
    for sigma, quad, prods in _gp_instances(chi.n, chi.r):
        (a1, b1, f1), (a2, b2, f2), (a3, b3, f3) = prods
        t1 = f1 * signs[a1] * signs[b1]
        t2 = f2 * signs[a2] * signs[b2]
        if t1 != t2:
            continue
        if t1 == f3 * signs[a3] * signs[b3]:
            out.append((sigma, quad))
            if limit is not None and len(out) >= limit:
                return out
    return out


def verify_gp(chi: Chirotope) -> tuple[bool, tuple[Basis, Basis] | None]:
    """Brute-force check of the three-term sign conditions over every
    (r-2)-subset and disjoint quadruple; returns the first violating
    instance as a witness."""
    bad = gp_violations(chi, limit=1)
    return (False, bad[0]) if bad else (True, None)


def circuit_on_support(chi: Chirotope, support: Sequence[int]) -> SignedCircuit:
    """The canonical circuit representative on a sorted (r+1)-subset:
    sign i is (-1)^i (1-based) times the chirotope on the support minus
    its i-th element, normalized to leading sign +1."""
    supp = tuple(support)
    if len(supp) != chi.r + 1:
        raise ValueError(f"support {supp} does not have {chi.r + 1} elements")
    signs = []
    for i in range(len(supp)):
        sub = supp[:i] + supp[i + 1 :]
        parity = -1 if (i + 1) % 2 else 1
        signs.append(parity * chi.sign(sub))
    if signs[0] < 0:
        signs = [-s for s in signs]
    return SignedCircuit(supp, tuple(signs))


def circuits(chi: Chirotope) -> list[SignedCircuit]:
    """One canonical circuit per (r+1)-subset, in lexicographic support
    order."""
    return [circuit_on_support(chi, s) for s in all_bases(chi.n, chi.r + 1)]


def totally_positive_supports(chi: Chirotope, limit: int | None = None) -> list[tuple[int, ...]]:
    """Supports whose circuit pair contains an all-positive signature,
    i.e. whose induced signs all agree."""
    signs = chi.signs
    n, r = chi.n, chi.r
    out = []
    for supp in all_bases(n, r + 1):
        first = None
        uniform = True
        for i in range(r + 1):
            sub = supp[:i] + supp[i + 1 :]
            parity = -1 if (i + 1) % 2 else 1
            value = parity * signs[basis_index(sub, n, r) - 1]
            if first is None:
                first = value
            elif value != first:
                uniform = False
                break
        if uniform:
            out.append(supp)
            if limit is not None and len(out) >= limit:
                return out
    return out


def is_acyclic(chi: Chirotope) -> bool:
    """True iff no circuit pair contains an all-positive signature."""
    return not totally_positive_supports(chi, limit=1)


def admissibility_violations(chi, pairs, limit: int | None = None) -> list:
    """The pairs (F, G) for which the circuit pair on F | G has positive
    part exactly F and negative part exactly G (in either orientation)."""
    out = []
    for pair in pairs:
        supp = pair.support
        if len(supp) != chi.r + 1:
            raise ValueError(
                f"pair support {supp} has {len(supp)} elements, expected {chi.r + 1}"
            )
        tri = set(pair.triangle)
        first = None
        split = True
        for i, c in enumerate(supp):
            sub = supp[:i] + supp[i + 1 :]
            parity = -1 if (i + 1) % 2 else 1
            value = parity * chi.sign(sub)
            side = value if c in tri else -value
            if first is None:
                first = side
            elif side != first:
                split = False
                break
        if split:
            out.append(pair)
            if limit is not None and len(out) >= limit:
                return out
    return out


def is_admissible(chi, pairs) -> tuple[bool, list]:
    """True plus an empty list iff no pair is violated; otherwise False
    plus every violating pair."""
    bad = admissibility_violations(chi, pairs)
    return (not bad, bad)
