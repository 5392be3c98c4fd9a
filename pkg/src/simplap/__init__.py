"""Weighted simplicial Laplacians: almost-hole detection and coverage dynamics."""

__version__ = "0.1.0"

from .chains import (
    boundary_matrix,
    down_laplacian,
    homology_dimension,
    laplacian,
    matrix_rank,
    up_laplacian,
)
from .complex import (
    SimplicialComplex,
    as_simplex,
    build_complex,
    complex_from_dict,
    complex_to_dict,
    faces,
    intersect_complexes,
    orientation_sign,
    transfer_chain,
    union_complexes,
)
from .dynamics import (
    IterationRecord,
    Trajectory,
    caging_run,
    eigenvalue_position_gradient,
    evaluate_state,
    finite_difference_gradient,
    fixed_complex_objective,
    repair_run,
)
from .geometry import (
    build_weighted_complex,
    circumcircle_violations,
    delaunay,
    geometric_weights,
    load_points,
    normalize_scale,
    save_points_csv,
)
from .harness import (
    BoundCheck,
    TheoremInstance,
    annulus_disc_instance,
    instance_conditions,
    multi_disc_instance,
    three_rings_configuration,
    verify_eigenvalue_bound,
)
from .spectral import (
    Spectrum,
    eig_sym,
    nullity,
    smallest_nonzero_eigenpairs,
)
from .weighted import (
    WeightedComplex,
    WeightFunction,
    check_filtration,
    norm_bound,
    operator_norm,
    unit_weights,
    up_laplacian_entry,
    weight_function,
    weighted_boundary,
    weighted_complex,
    weighted_down_laplacian,
    weighted_from_dict,
    weighted_intersection,
    weighted_laplacian,
    weighted_laplacian_sandwich,
    weighted_to_dict,
    weighted_union,
    weighted_up_laplacian,
)
