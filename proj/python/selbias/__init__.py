"""Selection-bias toolkit for scaling-law progress estimates.

Thin Python layer over the C++ core: simulate the noisy data-generating
process, fit the misspecified two-regressor model, evaluate the closed-form
probability limits, and run the full correlation sweep.
"""

from ._core import (
    BiasSign,
    DataError,
    Dataset,
    DgpParams,
    Error,
    FitResult,
    MomentSet,
    NumericError,
    PlimReport,
    SweepConfig,
    SweepRow,
    SynthSpec,
    TheoremConditions,
    __version__,
    bias_ratio_direct,
    check_theorem_conditions,
    default_rho_grid,
    default_sigma,
    emit_dataset_csv,
    emit_figure_svg,
    emit_sweep_csv,
    fixed_synth_dataset,
    generate_eps,
    implied_corr_lnd,
    ingest_csv,
    moments,
    ols_fit,
    plim_estimates,
    progress_overstatement,
    render_figure_svg,
    residualize,
    run_replication,
    run_sweep,
    simulate_lnl,
    synth_dataset,
)

__all__ = [
    "BiasSign",
    "DataError",
    "Dataset",
    "DgpParams",
    "Error",
    "FitResult",
    "MomentSet",
    "NumericError",
    "PlimReport",
    "SweepConfig",
    "SweepRow",
    "SynthSpec",
    "TheoremConditions",
    "__version__",
    "bias_ratio_direct",
    "check_theorem_conditions",
    "default_rho_grid",
    "default_sigma",
    "emit_dataset_csv",
    "emit_figure_svg",
    "emit_sweep_csv",
    "fixed_synth_dataset",
    "generate_eps",
    "implied_corr_lnd",
    "ingest_csv",
    "moments",
    "ols_fit",
    "plim_estimates",
    "progress_overstatement",
    "render_figure_svg",
    "residualize",
    "run_replication",
    "run_sweep",
    "simulate_lnl",
    "synth_dataset",
]
