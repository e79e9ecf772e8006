//! Floer homology tables of `Σ_g × S^1` assembled from the slice maps.

mod nontorsion;
mod table;
mod topology;
mod torsion;

pub use nontorsion::{
    action_sweep, compare_kernels, direct_kernel_ranks, h1_action, hf_plus_nontorsion,
    model_degree, phi, ActionResult, ActionSweep, CorrectionTerm, KernelComparison, XModel,
};
pub use table::{Flavor, FloerTable, HalfDegree, SpinC, Tower};
pub use topology::*;
pub use torsion::{
    hat_rank_closed_form, hf_hat, hf_infinity, hf_plus_reduced, hf_plus_torsion, mod2_prediction,
    reduced_rank_closed_form, self_dual_count, sign_test, torsion_towers, u_action_red,
    u_kernel_formula, x_rank, DegreeWindow, SignTest, UActionReport, UStep,
};
