//! Manifold models and measurement primitives: triangulated surfaces with
//! abstract discrete metrics, continuum warped products, regions, cycles and
//! collars.

pub mod collar;
pub mod fixtures;
pub mod io;
pub mod region;
pub mod surface;
pub mod warped;

pub use collar::{Collar, CollarSide};
pub use region::{Cycle, Region};
pub use surface::{BoundaryComponent, TriangulatedSurface};
pub use warped::{unit_sphere_area, WarpedInterval, WarpedMeasurements};

/// Length of the diagonal of a product quad with fibre edges `fa`, `fb` and
/// longitudinal spacing `long`: the hypotenuse of the local (fibre,
/// longitudinal) right triangle, with the fibre metric averaged across the gap
/// at the level of quadratic forms.
pub fn product_diagonal(fa: f64, fb: f64, long: f64) -> f64 {
    (0.5 * (fa * fa + fb * fb) + long * long).sqrt()
}
