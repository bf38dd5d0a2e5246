"""chirosat: SAT-based search for acyclic uniform oriented matroids
admissible for triangulated surfaces, with independent certificate
verification."""

from .chirotopes import (
    Chirotope,
    SignedCircuit,
    admissibility_violations,
    all_bases,
    basis_from_index,
    basis_index,
    circuit_on_support,
    circuits,
    gp_violations,
    is_acyclic,
    is_admissible,
    sort_with_sign,
    totally_positive_supports,
    verify_gp,
)
from .encoding import (
    CnfFormula,
    EncodingStats,
    VarMap,
    acyclicity_clauses,
    admissibility_clauses,
    blocking_clause,
    canonical_literal,
    encode_instance,
    forbid_circuit_clauses,
    gp_clauses,
    write_dimacs,
)
from .points import (
    DegeneratePointsError,
    PointConfiguration,
    chirotope_from_points,
    convex_hulls_intersect,
    integer_det,
    radon_partition,
)
from .sat import Solver, solve_clauses
from .solving import (
    CertificateReport,
    DecisionReport,
    EnumerationResult,
    SolverVerdict,
    decide,
    decode_model,
    enumerate_models,
    parse_dimacs,
    solve_formula,
    verify_certificate,
)
from .surfaces import (
    FacetInputError,
    SimplexPair,
    SurfaceReport,
    SurgeryError,
    Triangulation,
    connected_sum,
    forbidden_pairs,
    load_facets,
    parse_facets,
    relabel,
    remove_facet,
    star,
    surface_json,
    validate_surface,
)

__version__ = "0.1.0"
