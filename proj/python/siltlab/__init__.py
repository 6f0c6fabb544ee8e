"""Numerical laboratory for planar Brownian self-intersection local time.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (  # noqa: F401
    CenteredSilt,
    GNConstants,
    GroundState,
    Interval,
    PlanarPath,
    Vec2,
    __version__,
    alpha_hat,
    beta_hat,
    c_n_hat,
    centering_term,
    cross_ilt,
    expected_alpha,
    expected_alpha_mollified,
    generate_path,
    gn_constants,
    heat_kernel,
    identity_check,
    independent_pair,
    occupation_sup_stat,
    rescale,
    solve_ground_state,
)
