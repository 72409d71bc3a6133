"""Orlicz-space N-functions, norms and supremum tail bounds for OU processes."""

from ._core import (
    BoundFit,
    CapabilityError,
    ConfigError,
    DivergentIntegral,
    DomainOverflow,
    InvalidParameter,
    NFunction,
    OrliczError,
    OUModel,
    SingularEndpoint,
    alpha_interval,
    betas_admissible,
    biconjugate_residual,
    chebyshev_tail,
    d_p2_closed,
    d_p2_quad,
    delta2_quad,
    exp_linear,
    exp_power,
    fit_ou_bound,
    gamma2_closed,
    luxembourg_norm,
    luxembourg_norm_weighted,
    nu_t_closed,
    ou_path,
    ou_sup_tail,
    piecewise_exp,
    power,
    power_over_p,
)

__all__ = [name for name in dir() if not name.startswith("_")]
