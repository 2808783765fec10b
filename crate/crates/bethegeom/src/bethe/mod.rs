//! Bethe equations: residuals in both presentations, the parameter
//! dictionary, homotopy continuation from the fixed points, and z-series
//! solutions.

pub mod homotopy;
pub mod instance;
pub mod perturb;
mod system;

pub use homotopy::{multiset_distance, solve_all, solve_from_subset, HomotopyConfig, RootSet, SolveAllReport};
pub use instance::{bethe_residual, convention_transform, BetheInstance, Convention};
pub use perturb::{perturbative_roots, saddle_residual_series, SeriesRootSet};

/// Series residual of the cleared SADDLE system along a series solution:
/// the largest coefficient through the truncation order.
pub fn series_residual(inst: &BetheInstance, roots: &SeriesRootSet) -> f64 {
    let sys = system::ClearedSystem::new(inst);
    sys.eval_series(&roots.roots)
        .iter()
        .map(|s| s.max_abs_coeff())
        .fold(0.0, f64::max)
}
