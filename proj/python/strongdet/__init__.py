"""Strongly deterministic toy theories: finite-dimensional quantum laws,
determinism checks over finite model sets, and the Mandelbrot world."""

from ._core import (
    NumericalError,
    ValidationError,
    __version__,
    branch_weight_equivalence,
    check_model_set,
    counterfactual,
    counterfactual_dependence,
    decompose,
    ensemble_mean_density,
    entropy_trajectory,
    equivalence_report,
    evolve_density,
    evolve_state,
    expectation,
    initial_projection,
    is_strongly_deterministic,
    make_propagator,
    mandelbrot_membership,
    orbit,
    random_hamiltonian,
    random_observable,
    render_mandelbrot,
    run_cli,
    sample_statistical_postulate,
    strong_prediction,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
