"""Stochastic wave equation simulator and blow-up criteria checker."""

from ._core import (
    Config,
    ConfigError,
    Grid,
    check_conditions,
    closed_form_table,
    cmd_check,
    cmd_ensemble,
    cmd_reproduce_example,
    example_threshold,
    gradient_sq_norm,
    half_plane_grid,
    inner_product,
    interval_grid,
    laplacian,
    load_config,
    mix64,
    parse_config,
    path_seed,
    run_ensemble,
    run_path,
    squared_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
