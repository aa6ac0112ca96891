//! Continued fractions and the Dujella–Pethő reduction of the Baker bounds.

pub mod cf;
pub mod dp;
pub mod sweep;

pub use cf::{cf_expand, cf_expand_bounds, cf_expand_rational, CFExpansion, CfStop};
pub use dp::{
    dp_reduce, dp_reduce_prepared, norm_times, w_bound, Prepared, ReductionInstance, ReductionOutcome, RETRY_CAP,
};
pub use sweep::{
    final_n_bound_after_reduction, final_n_bound_after_reduction_with, reduction_sweep, reduction_sweep_to_file,
    reduction_sweep_to_file_with, reduction_sweep_with, Case, CellResult, Ladder, PipelineReport, ReductionContext,
    SweepResult, SweepSpec, DEFAULT_BITS, MAX_DOUBLINGS,
};
