"""Projective spectra of matrix pencils, joint spectra of commuting tuples,
group representations and the D-infinity renormalization dynamics."""

__version__ = "0.1.0"

from .pencil import (
    DimensionError,
    LinearForm,
    MatrixPencil,
    ProjPoint,
    char_poly,
    evaluate,
    hyperplane_contained,
    is_singular,
    linear_multiplicity,
    load_pencil,
    save_pencil,
    spectrum_membership,
)
from .polynomial import MultiPoly
from .jointspec import (
    MatrixTuple,
    NotCommutingError,
    SpectrumError,
    approx_point_membership,
    cho_takaguchi_inverse,
    harte_membership,
    hyperplane_union_verdict,
    joint_eigenvalues,
    koszul_build,
    koszul_homology_dims,
    koszul_is_exact,
    splitting_homotopy,
    taylor_membership,
)
from .groups import (
    CayleyTable,
    GroupRep,
    cyclic_cayley,
    dihedral_cayley,
    free_group_region,
    gl3_reps,
    h0_containment_test,
    koopman_truncation,
    markov_operator,
    regular_rep,
    symmetric3_cayley,
)
from .dynamics import (
    F_pi,
    F_raw,
    INF,
    chebyshev,
    f_limit,
    f_n,
    indeterminacy_set,
    iterate_closed,
    julia_membership,
    limit_map,
    p_n,
    semiconjugacy_residual,
    tau,
)
from .render import ChartSlice, escape_field, render_slice, write_csv, write_image
