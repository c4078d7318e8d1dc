from .designs import (
    EXAMPLE2_INDEX_POINTS,
    LINKS,
    LinkName,
    ModelName,
    SimConfig,
    SimOutput,
    bm_eigenvalue,
    example1_beta,
    example1_grid,
    example2_grid,
    gen_example1,
    gen_example2,
    gen_finite_dim,
    gen_null,
    simulate,
)
from .processes import (
    CLIP_TOL,
    brownian_path,
    brownian_paths,
    derive_seed,
    fgp_factor,
    fgp_path,
    fgp_paths,
    make_rng,
)

__all__ = [
    "ModelName", "LinkName", "LINKS", "SimConfig", "SimOutput",
    "example1_beta", "example1_grid", "example2_grid", "EXAMPLE2_INDEX_POINTS",
    "gen_example1", "gen_example2", "gen_finite_dim", "gen_null", "simulate",
    "bm_eigenvalue",
    "make_rng", "derive_seed", "brownian_path", "brownian_paths",
    "fgp_factor", "fgp_path", "fgp_paths", "CLIP_TOL",
]
