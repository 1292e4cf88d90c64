//! stretchlab: a discrete-geometry laboratory for metric stretching.
//!
//! The crate models closed surfaces with abstract discrete metrics, performs
//! metric surgery on product collars (cylindrical interpolation followed by
//! longitudinal stretching), applies conformal perturbations that make a
//! separating cycle minimal and strictly stable, solves volume-constrained
//! perimeter minimisation exactly on small meshes and by Lagrangian min-cut
//! sweeps on larger ones, and classifies minimal hypercones by their link
//! spectra.

pub mod cones;
pub mod conformal;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod solver;
pub mod surgery;

pub use error::{Error, Result};

/// Cap rayon's global pool from `STRETCHLAB_THREADS` if the variable is set.
/// Safe to call more than once; later calls are ignored.
pub fn init_thread_pool_from_env() {
    if let Ok(v) = std::env::var("STRETCHLAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
