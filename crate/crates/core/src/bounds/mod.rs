//! Sampled verification of the pointwise kernel estimates and the auxiliary integrals behind them.
//!
//! Every check draws its samples sequentially from a seeded stream, evaluates them in
//! parallel and folds the results in sample order, so reports are reproducible.

mod density;
mod global;
mod lemmas;
mod local;
mod minimizer;
mod pq;
mod report;
mod sample;
mod terms;

pub use density::{density_integrals, lemma326_check, log_decay_rho, Bump, DensityIntegrals, Lemma326Report};
pub use global::{default_eps, eps_supremum, global_bound_check, global_rhs};
pub use lemmas::{
    expineq_constant, expineq_grid_max, g2_holder_constant, lemma23_i_closed_form, lemma23_integrals,
    lemma23_refinement, lemma_gamma, lemma_gamma_closed_form, Lemma23Refinement,
};
pub use local::{aux_kernels, g2_check, local_bound_check, local_inequality_check, AuxKernels};
pub use minimizer::{
    estimate213_check, estimate213_closed_form, estimate213_integral, kernel_geometry, log_grid, phib0_batch,
    phib0_check, t0_asymptotics_check, t0_minimizer_batch, t0_minimizer_check, u_of_t, KernelGeometry,
    MinimizerOutcome, MinimizerReport, T0Asymptotics, GRID_T_MIN,
};
pub use pq::{alpha_infty, pq_kernel_check, q_moment_bound, PqReport};
pub use report::{BoundReport, RatioAccumulator};
pub use sample::{global_pair, local_pair, sample_point, Region, DIAGONAL_EXCLUSION};
pub use terms::{
    decompose, decomposition_rows, domination_report, master_decomposition_check, term_i, term_ii, term_iii,
    Decomposition, Domination,
};
