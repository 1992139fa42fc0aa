"""Inverse mean curvature flow of spacelike graphs in hyperbolic space."""

from ._imcf import (
    TRAJECTORY_HEADER,
    ConfigError,
    MonitorFailure,
    SingularityError,
    chart_embed,
    christoffel_sigma,
    config_keys,
    evolve,
    geometry_check,
    mean_curvature,
    metric_sigma,
    minkowski_inner,
    oracle_round,
    resolve_config,
    run,
    support_function,
)

__all__ = [
    "TRAJECTORY_HEADER",
    "ConfigError",
    "MonitorFailure",
    "SingularityError",
    "chart_embed",
    "christoffel_sigma",
    "config_keys",
    "evolve",
    "geometry_check",
    "mean_curvature",
    "metric_sigma",
    "minkowski_inner",
    "oracle_round",
    "resolve_config",
    "run",
    "support_function",
]
