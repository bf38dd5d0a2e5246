"""Shared fixtures: corpus triangulations and external solver discovery."""

from __future__ import annotations

import random
import shutil
import sys
from pathlib import Path

import pytest

from chirosat import Triangulation, load_facets

DATA = Path(__file__).parent / "data"

# Known DIMACS solvers following the competition output conventions, in
# preference order, with their command templates.
_SOLVER_TEMPLATES = (
    ("varisat", "varisat {cnf}"),
    ("splr", "splr -q -C -r - {cnf}"),
    ("kissat", "kissat -q {cnf}"),
    ("cadical", "cadical -q {cnf}"),
)


def external_solver_commands() -> list[str]:
    """Command templates for every recognized solver on PATH."""
    found = []
    for binary, template in _SOLVER_TEMPLATES:
        if shutil.which(binary):
            found.append(template)
    return found


def embedded_as_external_command() -> str:
    """The package's own embedded solver exposed as a subprocess, for
    exercising the external-backend harness without third-party tools."""
    return f"{sys.executable} -m chirosat.cli solve-dimacs {{cnf}}"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def tetrahedron() -> Triangulation:
    return load_facets(DATA / "tetrahedron.facets")


@pytest.fixture(scope="session")
def octahedron() -> Triangulation:
    return load_facets(DATA / "octahedron.facets")


@pytest.fixture(scope="session")
def moebius_torus() -> Triangulation:
    return load_facets(DATA / "moebius_torus.facets")


@pytest.fixture(scope="session")
def projective_plane() -> Triangulation:
    return load_facets(DATA / "projective_plane6.facets")


@pytest.fixture(scope="session")
def genus5_1() -> Triangulation:
    return load_facets(DATA / "g5_2_12_1_1.facets")


@pytest.fixture(scope="session")
def genus5_2() -> Triangulation:
    return load_facets(DATA / "g5_2_12_1_2.facets")


@pytest.fixture(scope="session")
def genus5_6() -> Triangulation:
    return load_facets(DATA / "g5_2_12_1_6.facets")


@pytest.fixture(scope="session")
def genus6_no1() -> Triangulation:
    return load_facets(DATA / "g6_no1.facets")


def build_stacked_sphere(n: int, seed: int = 0) -> Triangulation:
    """A stacked sphere on n vertices: repeatedly cone a new vertex over a
    seeded-random facet of a tetrahedron."""
    rng = random.Random(seed)
    tri = Triangulation(4, ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)))
    while tri.n < n:
        f = rng.choice(tri.facets)
        new = tri.n + 1
        facets = [g for g in tri.facets if g != f]
        for e in ((f[0], f[1]), (f[0], f[2]), (f[1], f[2])):
            facets.append(tuple(sorted(e + (new,))))
        tri = Triangulation(new, tuple(facets))
    return tri
