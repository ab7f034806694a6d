"""Numeric defaults shared by every module.

Everything tunable lives here so that the CLI can print one table
(``projspec --defaults``) and so that runs are reproducible.
"""

SEED = 20240917

# singular value threshold, relative to max(1, sigma_max)
SINGULAR_TOL = 1e-10
RANK_TOL = 1e-10

# commutator / normality / unitarity checks
COMMUTE_TOL = 1e-10
NORMAL_TOL = 1e-10
UNITARY_TOL = 1e-10
RELATION_TOL = 1e-8

# polynomial coefficient pruning and hyperplane containment
PRUNE_TOL = 1e-12
HYPERPLANE_TOL = 1e-10

# projective points
POINT_EQ_TOL = 1e-9
ZERO_TOL = 1e-12

# symbolic determinant limits
CHARPOLY_MAX_DIM = 16
EXPANSION_MAX_DIM = 8
INTERP_MAX_SAMPLES = 400_000

# dynamics
ESCAPE_RADIUS = 10.0
MAXITER = 100
REAL_AXIS_TOL = 1e-9
DEGENERATE_DELTA = 1e-8

# groups
KOOPMAN_MAX_LEVEL = 12
H0_SAMPLES = 50

# render
TILE = 64

DEFAULTS = {
    "seed": SEED,
    "singular_tol": SINGULAR_TOL,
    "rank_tol": RANK_TOL,
    "commute_tol": COMMUTE_TOL,
    "normal_tol": NORMAL_TOL,
    "unitary_tol": UNITARY_TOL,
    "relation_tol": RELATION_TOL,
    "prune_tol": PRUNE_TOL,
    "hyperplane_tol": HYPERPLANE_TOL,
    "point_eq_tol": POINT_EQ_TOL,
    "zero_tol": ZERO_TOL,
    "charpoly_max_dim": CHARPOLY_MAX_DIM,
    "expansion_max_dim": EXPANSION_MAX_DIM,
    "interp_max_samples": INTERP_MAX_SAMPLES,
    "escape_radius": ESCAPE_RADIUS,
    "maxiter": MAXITER,
    "real_axis_tol": REAL_AXIS_TOL,
    "degenerate_delta": DEGENERATE_DELTA,
    "koopman_max_level": KOOPMAN_MAX_LEVEL,
    "h0_samples": H0_SAMPLES,
    "tile": TILE,
}


def format_table():
    width = max(len(k) for k in DEFAULTS)
    return "\n".join(f"{k:<{width}}  {v!r}" for k, v in DEFAULTS.items())
