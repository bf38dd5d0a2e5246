"""Triangulated surfaces: parsing, validation, stars, and surgery.

Facet lists follow the flat integer-triple convention of published
triangulation tables: whitespace- or comma-separated vertex labels,
three per facet, vertices numbered 1..n with no gaps.  A JSON array of
triples is accepted as an alternative input form.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

Facet = tuple[int, int, int]
Edge = tuple[int, int]
Simplex = tuple[int, ...]

MODES = ("embedding", "immersion")


class FacetInputError(ValueError):
    """A facet list that does not define a well-formed triangulation."""


class SurgeryError(ValueError):
    """A surgery operation whose result would not be a valid complex."""


@dataclass(frozen=True)
class Triangulation:
    """A 2-dimensional simplicial complex given by its triangle facets.

    Vertices are labeled 1..n and every label must occur in some facet;
    gaps are rejected rather than compacted so that certificates stay in
    sync with published facet tables.  Facets are stored sorted, as
    sorted 3-tuples.  Instances are immutable and safe to share.
    """

    n: int
    facets: tuple[Facet, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise FacetInputError(f"vertex count must be positive, got {self.n}")
        norm = []
        for facet in self.facets:
            if len(facet) != 3 or len(set(facet)) != 3:
                raise FacetInputError(f"facet {facet} does not have 3 distinct vertices")
            for v in facet:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise FacetInputError(f"facet {facet} has a non-integer vertex")
                if not 1 <= v <= self.n:
                    raise FacetInputError(f"vertex {v} of facet {facet} outside 1..{self.n}")
            norm.append(tuple(sorted(facet)))
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise FacetInputError(f"duplicate facet {a}")
        used = {v for facet in norm for v in facet}
        missing = sorted(set(range(1, self.n + 1)) - used)
        if missing:
            raise FacetInputError(f"vertex labels {missing} occur in no facet")
        object.__setattr__(self, "facets", tuple(norm))

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        """All edges of the complex, sorted."""
        return tuple(sorted({e for f in self.facets for e in combinations(f, 2)}))

    @cached_property
    def edge_facets(self) -> dict[Edge, tuple[Facet, ...]]:
        """Map each edge to the facets containing it."""
        out: dict[Edge, list[Facet]] = {}
        for f in self.facets:
            for e in combinations(f, 2):
                out.setdefault(e, []).append(f)
        return {e: tuple(fs) for e, fs in out.items()}

    def facets_at(self, v: int) -> tuple[Facet, ...]:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} outside 1..{self.n}")
        return tuple(f for f in self.facets if v in f)

    def has_facet(self, facet: Iterable[int]) -> bool:
        return tuple(sorted(facet)) in set(self.facets)

    def to_text(self) -> str:
        """Canonical flat-triple form, one facet per line."""
        return "\n".join(" ".join(map(str, f)) for f in self.facets) + "\n"

    def json_dict(self) -> dict:
        return {"n": self.n, "facets": [list(f) for f in self.facets]}


@dataclass(frozen=True)
class SurfaceReport:
    """Verdicts and counts from checking whether a complex is a closed
    orientable surface.  `genus` is present only in that case."""

    is_closed_surface: bool
    orientable: bool
    V: int
    E: int
    F: int
    euler: int
    genus: int | None

    def json_dict(self) -> dict:
        return {
            "closed": self.is_closed_surface,
            "orientable": self.orientable,
            "V": self.V,
            "E": self.E,
            "F": self.F,
            "euler": self.euler,
            "genus": self.genus,
        }


@dataclass(frozen=True)
class SimplexPair:
    """A disjoint triangle/edge pair whose geometric intersection must be
    ruled out.  For immersion pairs, `star_vertices` records the star
    centers that give rise to the pair (a pair may come from several)."""

    triangle: Facet
    edge: Edge
    mode: str
    star_vertices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if set(self.triangle) & set(self.edge):
            raise ValueError(f"triangle {self.triangle} and edge {self.edge} share a vertex")

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.triangle + self.edge))

    def key(self) -> tuple[Facet, Edge]:
        return (self.triangle, self.edge)


def parse_facets(text: str) -> Triangulation:
    """Parse a facet list (flat integer triples, or a JSON array of
    triples) into a Triangulation with n = max vertex label.

    Rejects non-integer tokens, token counts that are not a multiple of
    three, repeated vertices inside a triple, duplicate facets, and
    label gaps.
    """
    stripped = text.strip()
    if not stripped:
        raise FacetInputError("empty facet list")
    if stripped.startswith("["):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise FacetInputError(f"invalid JSON facet list: {exc}") from exc
        if not isinstance(data, list):
            raise FacetInputError("JSON facet list must be an array of triples")
        numbers: list[int] = []
        for item in data:
            if not isinstance(item, list) or len(item) != 3:
                raise FacetInputError(f"JSON facet entry {item!r} is not a triple")
            numbers.extend(item)
    else:
        numbers = []
        for token in stripped.replace(",", " ").split():
            try:
                numbers.append(int(token))
            except ValueError:
                raise FacetInputError(f"non-integer token {token!r}") from None
    for v in numbers:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise FacetInputError(f"vertex labels must be positive integers, got {v!r}")
    if len(numbers) % 3 != 0:
        raise FacetInputError(f"token count {len(numbers)} is not a multiple of 3")
    facets = []
    for i in range(0, len(numbers), 3):
        triple = numbers[i : i + 3]
        if len(set(triple)) != 3:
            raise FacetInputError(f"repeated vertex in facet {triple}")
        facets.append(tuple(sorted(triple)))
    seen = set()
    for f in facets:
        if f in seen:
            raise FacetInputError(f"duplicate facet {list(f)}")
        seen.add(f)
    return Triangulation(n=max(numbers), facets=tuple(facets))


def load_facets(path) -> Triangulation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_facets(fh.read())


def _link_is_single_cycle(tri: Triangulation, v: int) -> bool:
    adj: dict[int, list[int]] = {}
    for f in tri.facets:
        if v in f:
            a, b = (u for u in f if u != v)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    if len(adj) < 3:
        return False
    if any(len(nb) != 2 for nb in adj.values()):
        return False
    start = next(iter(sorted(adj)))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(adj)


def _facet_graph_connected(tri: Triangulation) -> bool:
    if not tri.facets:
        return False
    index = {f: i for i, f in enumerate(tri.facets)}
    adj: list[set[int]] = [set() for _ in tri.facets]
    for fs in tri.edge_facets.values():
        ids = [index[f] for f in fs]
        for i, j in combinations(ids, 2):
            adj[i].add(j)
            adj[j].add(i)
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return len(seen) == len(tri.facets)


def _orientation_consistent(tri: Triangulation) -> bool:
    # Propagate a facet orientation across edges shared by exactly two
    # facets.  An edge in more than two facets cannot be oriented in the
    # surface sense, so it fails the check outright.
    if any(len(fs) > 2 for fs in tri.edge_facets.values()):
        return False
    index = {f: i for i, f in enumerate(tri.facets)}

    def edge_sign(facet: Facet, edge: Edge) -> int:
        # +1 if the sorted facet (a, b, c) traverses the sorted edge in
        # increasing order: boundary cycle a->b->c->a makes (a, c) reversed.
        return -1 if edge == (facet[0], facet[2]) else 1

    orient = [0] * len(tri.facets)
    for seed in range(len(tri.facets)):
        if orient[seed]:
            continue
        orient[seed] = 1
        queue = deque([seed])
        while queue:
            i = queue.popleft()
            fi = tri.facets[i]
            for edge in combinations(fi, 2):
                pair = tri.edge_facets[edge]
                if len(pair) != 2:
                    continue
                fj = pair[0] if pair[1] == fi else pair[1]
                j = index[fj]
                # Consistent orientations traverse a shared edge in
                # opposite directions.
                needed = -orient[i] * edge_sign(fi, edge) * edge_sign(fj, edge)
                if orient[j] == 0:
                    orient[j] = needed
                    queue.append(j)
                elif orient[j] != needed:
                    return False
    return True


def validate_surface(tri: Triangulation) -> SurfaceReport:
    """Check the closed-surface and orientability conditions and report
    V, E, F, the Euler characteristic, and (when defined) the genus.

    Closed means: every edge lies in exactly two facets, every vertex
    link is a single cycle, and the facet-adjacency graph is connected.
    """
    V = tri.n
    F = len(tri.facets)
    E = len(tri.edges)
    euler = V - E + F
    closed = (
        F > 0
        and all(len(fs) == 2 for fs in tri.edge_facets.values())
        and all(_link_is_single_cycle(tri, v) for v in range(1, tri.n + 1))
        and _facet_graph_connected(tri)
    )
    orientable = _orientation_consistent(tri)
    genus = None
    if closed:
        assert 2 * E == 3 * F, "closed surface must satisfy 2E = 3F"
        if orientable:
            assert (2 - euler) % 2 == 0
            genus = (2 - euler) // 2
    return SurfaceReport(
        is_closed_surface=closed,
        orientable=orientable,
        V=V,
        E=E,
        F=F,
        euler=euler,
        genus=genus,
    )


def surface_json(tri: Triangulation, report: SurfaceReport | None = None) -> dict:
    """Combined JSON echo of a triangulation and its surface report."""
    if report is None:
        report = validate_surface(tri)
    out = tri.json_dict()
    out.update(report.json_dict())
    return out


def star(tri: Triangulation, v: int) -> frozenset[Simplex]:
    """All facets containing v together with all their faces (edges and
    vertices), as sorted tuples."""
    if not 1 <= v <= tri.n:
        raise ValueError(f"vertex {v} outside 1..{tri.n}")
    simplices: set[Simplex] = set()
    for f in tri.facets_at(v):
        simplices.add(f)
        simplices.update(combinations(f, 2))
        simplices.update((u,) for u in f)
    return frozenset(simplices)


def forbidden_pairs(tri: Triangulation, mode: str = "embedding") -> tuple[SimplexPair, ...]:
    """Enumerate the disjoint triangle/edge pairs whose intersection the
    oriented matroid must rule out, in lexicographic order.

    embedding: every facet against every disjoint edge of the complex.
    immersion: for each vertex v, every facet containing v against every
    disjoint edge of star(v); pairs arising from several stars appear once.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "embedding":
        pairs = []
        for f in tri.facets:
            fs = set(f)
            for e in tri.edges:
                if not fs & set(e):
                    pairs.append(SimplexPair(triangle=f, edge=e, mode=mode))
        return tuple(pairs)
    centers: dict[tuple[Facet, Edge], list[int]] = {}
    for v in range(1, tri.n + 1):
        at_v = tri.facets_at(v)
        link_edges = sorted(tuple(sorted(u for u in f if u != v)) for f in at_v)
        for f in at_v:
            fs = set(f)
            for e in link_edges:
                if not fs & set(e):
                    centers.setdefault((f, e), []).append(v)
    return tuple(
        SimplexPair(triangle=f, edge=e, mode=mode, star_vertices=tuple(sorted(set(vs))))
        for (f, e), vs in sorted(centers.items())
    )


def remove_facet(tri: Triangulation, facet: Iterable[int]) -> Triangulation:
    """Remove one facet, keeping the vertex set."""
    target = tuple(sorted(facet))
    if target not in set(tri.facets):
        raise SurgeryError(f"facet {list(target)} not in the complex")
    return Triangulation(n=tri.n, facets=tuple(f for f in tri.facets if f != target))


def relabel(tri: Triangulation, perm: Mapping[int, int]) -> Triangulation:
    """Apply a permutation of 1..n to every facet."""
    if sorted(perm.keys()) != list(range(1, tri.n + 1)) or sorted(perm.values()) != list(
        range(1, tri.n + 1)
    ):
        raise ValueError("perm is not a permutation of 1..n")
    return Triangulation(
        n=tri.n, facets=tuple(tuple(sorted(perm[v] for v in f)) for f in tri.facets)
    )


def connected_sum(
    s: Triangulation,
    t: Triangulation,
    facet_s: Iterable[int],
    facet_t: Iterable[int],
    ident: Mapping[int, int] | None = None,
) -> Triangulation:
    """Glue two complexes along one facet of each.

    `ident` maps the vertices of facet_t bijectively onto the vertices of
    facet_s (defaults to matching them in sorted order).  The remaining
    vertices of t are relabeled to n_s+1.. in increasing order, both glued
    facets are dropped, and the facet sets are merged.  The result has
    V(s) + V(t) - 3 vertices; gluing two closed orientable surfaces adds
    their genera.
    """
    fs = tuple(sorted(facet_s))
    ft = tuple(sorted(facet_t))
    if fs not in set(s.facets):
        raise SurgeryError(f"facet {list(fs)} not in the first complex")
    if ft not in set(t.facets):
        raise SurgeryError(f"facet {list(ft)} not in the second complex")
    if ident is None:
        ident = dict(zip(ft, fs))
    if sorted(ident.keys()) != list(ft):
        raise SurgeryError(f"identification keys {sorted(ident.keys())} != facet {list(ft)}")
    if sorted(ident.values()) != list(fs):
        raise SurgeryError(
            f"identification is not a bijection onto {list(fs)}: got {sorted(ident.values())}"
        )

    mapping = dict(ident)
    fresh = s.n
    for v in range(1, t.n + 1):
        if v not in mapping:
            fresh += 1
            mapping[v] = fresh

    merged = [f for f in s.facets if f != fs]
    for f in t.facets:
        if f == ft:
            continue
        merged.append(tuple(sorted(mapping[v] for v in f)))
    if len(set(merged)) != len(merged):
        dupes = sorted({f for f in merged if merged.count(f) > 1})
        raise SurgeryError(f"identification creates duplicate facets {dupes}")

    try:
        result = Triangulation(n=s.n + t.n - 3, facets=tuple(merged))
    except FacetInputError as exc:
        raise SurgeryError(f"connected sum produced an invalid complex: {exc}") from exc
    bad_edges = [e for e, facets in result.edge_facets.items() if len(facets) > 2]
    if bad_edges:
        raise SurgeryError(f"identification creates non-pseudomanifold edges {bad_edges}")

    rep_s, rep_t = validate_surface(s), validate_surface(t)
    if rep_s.is_closed_surface and rep_s.orientable and rep_t.is_closed_surface and rep_t.orientable:
        rep = validate_surface(result)
        if not (rep.is_closed_surface and rep.orientable and rep.genus == rep_s.genus + rep_t.genus):
            raise SurgeryError(
                "connected sum of closed orientable surfaces did not produce "
                f"a closed orientable surface of genus {rep_s.genus} + {rep_t.genus}"
            )
    return result
