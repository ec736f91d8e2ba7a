"""Occupation-kernel learning of ODE and PDE vector fields."""

from ._rock import (  # noqa: F401
    KernelSpec,
    PdeModel,
    RockError,
    RockModel,
    count_parameters,
    cut_trajectories,
    evaluate,
    generate,
    generate_field,
    gram,
    legendre_features,
    load_model,
    save_model,
    train,
    train_pde,
    trapezoid_weights,
    two_stage_search,
)
