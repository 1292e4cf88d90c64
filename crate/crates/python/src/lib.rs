//! Python bindings: the main surface/collar/surgery types and the solver,
//! cone and experiment entry points, as thin wrappers over the core crate.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use stretchlab::geometry::{self, fixtures, io, Cycle, Region};
use stretchlab::harness::{self, ExperimentConfig};
use stretchlab::{cones, conformal, solver, surgery};

fn err(e: stretchlab::Error) -> PyErr {
    use stretchlab::Error::*;
    match e {
        Input(_) | Infeasible(_) | SizeCap(_) | Format(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn side_from_str(side: &str) -> PyResult<geometry::CollarSide> {
    match side {
        "minus" => Ok(geometry::CollarSide::Minus),
        "plus" => Ok(geometry::CollarSide::Plus),
        other => Err(PyValueError::new_err(format!(
            "side must be \"minus\" or \"plus\", got {other:?}"
        ))),
    }
}

/// A closed triangulated surface with an abstract discrete metric.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Surface {
    inner: geometry::TriangulatedSurface,
}

#[pymethods]
impl Surface {
    /// Load a mesh from an .off or .json file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Surface {
            inner: io::load_mesh(&path).map_err(err)?,
        })
    }

    /// Build from faces and per-edge lengths [(u, v, length), ...].
    #[staticmethod]
    fn from_edge_lengths(
        faces: Vec<[usize; 3]>,
        edge_lengths: Vec<(usize, usize, f64)>,
    ) -> PyResult<Self> {
        let json = io::MeshJson {
            vertices: None,
            faces,
            edge_lengths: Some(edge_lengths),
            scalar_fields: None,
            provenance: None,
        };
        Ok(Surface {
            inner: io::mesh_from_json(&json).map_err(err)?,
        })
    }

    /// Build from an embedding; lengths are Euclidean distances.
    #[staticmethod]
    fn from_coordinates(vertices: Vec<[f64; 3]>, faces: Vec<[usize; 3]>) -> PyResult<Self> {
        Ok(Surface {
            inner: geometry::TriangulatedSurface::from_coordinates(vertices, faces).map_err(err)?,
        })
    }

    fn save_json(&self, path: PathBuf) -> PyResult<()> {
        io::save_mesh_json(&self.inner, None, &path).map_err(err)
    }

    fn face_count(&self) -> usize {
        self.inner.face_count()
    }
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }
    fn total_area(&self) -> f64 {
        self.inner.total_area()
    }
    fn faces(&self) -> Vec<[usize; 3]> {
        self.inner.faces().to_vec()
    }

    /// Sum of boundary edge lengths of the face set.
    fn perimeter(&self, faces: Vec<usize>) -> PyResult<f64> {
        self.inner.perimeter(&Region::new(faces)).map_err(err)
    }

    /// Area of the face set.
    fn volume(&self, faces: Vec<usize>) -> PyResult<f64> {
        self.inner.volume(&Region::new(faces)).map_err(err)
    }

    /// Boundary cycles of a region: (length, extrinsic diameter, edges).
    #[allow(clippy::type_complexity)]
    fn boundary_components(
        &self,
        faces: Vec<usize>,
    ) -> PyResult<Vec<(f64, f64, Vec<(usize, usize)>)>> {
        let comps = self
            .inner
            .boundary_components(&Region::new(faces))
            .map_err(err)?;
        Ok(comps
            .into_iter()
            .map(|c| (c.length, c.diameter, c.cycle.to_vertex_pairs(&self.inner)))
            .collect())
    }

    /// Whether the cycle separates the mesh; returns the two sides.
    fn separates(
        &self,
        edges: Vec<(usize, usize)>,
    ) -> PyResult<(bool, Vec<usize>, Vec<usize>)> {
        let cycle = Cycle::from_vertex_pairs(&self.inner, &edges).map_err(err)?;
        let (sep, a, b) = self.inner.separates(&cycle).map_err(err)?;
        Ok((sep, a.faces().to_vec(), b.faces().to_vec()))
    }
}

/// The banded product neighbourhood of Σ that surgery acts on.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Collar {
    inner: geometry::Collar,
}

#[pymethods]
impl Collar {
    /// Detect the maximal symmetric product band around a separating cycle.
    #[staticmethod]
    fn around(surface: &Surface, sigma: Vec<(usize, usize)>) -> PyResult<Self> {
        let cycle = Cycle::from_vertex_pairs(&surface.inner, &sigma).map_err(err)?;
        Ok(Collar {
            inner: geometry::Collar::around(&surface.inner, &cycle).map_err(err)?,
        })
    }

    fn ring_count(&self) -> usize {
        self.inner.ring_count()
    }
    fn fibre_count(&self) -> usize {
        self.inner.fibre_count()
    }
    fn sigma_index(&self) -> usize {
        self.inner.sigma_index()
    }
    fn epsilon(&self) -> f64 {
        self.inner.epsilon()
    }

    fn sigma_cycle(&self, surface: &Surface) -> Vec<(usize, usize)> {
        self.inner.sigma_cycle().to_vertex_pairs(&surface.inner)
    }

    fn ring_cycle(&self, surface: &Surface, ring: usize) -> Vec<(usize, usize)> {
        self.inner.ring_cycle(ring).to_vertex_pairs(&surface.inner)
    }

    fn is_cylindrical(&self, surface: &Surface) -> bool {
        self.inner.is_cylindrical(&surface.inner)
    }
}

/// A collar metric produced by the surgery pipeline.
#[pyclass]
struct SurgeredMetric {
    inner: surgery::SurgeredMetric,
}

#[pymethods]
impl SurgeredMetric {
    fn surface(&self) -> Surface {
        Surface {
            inner: self.inner.surface().clone(),
        }
    }
    fn cylinder_region(&self) -> Vec<usize> {
        self.inner.cylinder_region().faces().to_vec()
    }
    fn r(&self) -> f64 {
        self.inner.r()
    }
    fn ell(&self) -> f64 {
        self.inner.ell()
    }
    fn epsilon(&self) -> f64 {
        self.inner.epsilon()
    }
}

/// A solved point of the volume-perimeter trade-off.
#[pyclass]
struct IsoPoint {
    #[pyo3(get)]
    volume: f64,
    #[pyo3(get)]
    perimeter: f64,
    #[pyo3(get)]
    faces: Vec<usize>,
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    certified: bool,
}

impl From<solver::IsoPoint> for IsoPoint {
    fn from(p: solver::IsoPoint) -> Self {
        IsoPoint {
            volume: p.volume,
            perimeter: p.perimeter,
            faces: p.region.faces().to_vec(),
            method: p.method.to_string(),
            certified: p.certified_optimal,
        }
    }
}

fn dumbbell_tuple(d: fixtures::Dumbbell) -> (Surface, Vec<(usize, usize)>, Collar) {
    let sigma = d.sigma.to_vertex_pairs(&d.surface);
    (
        Surface { inner: d.surface },
        sigma,
        Collar { inner: d.collar },
    )
}

/// Two fan caps joined by a cylindrical neck; Σ is the middle ring.
#[pyfunction]
fn build_dumbbell(
    neck_fibre_size: f64,
    neck_bands: usize,
    cap_resolution: usize,
) -> PyResult<(Surface, Vec<(usize, usize)>, Collar)> {
    Ok(dumbbell_tuple(
        fixtures::dumbbell(neck_fibre_size, neck_bands, cap_resolution).map_err(err)?,
    ))
}

/// The transition fixture: one plain cap, one balloon-on-a-string cap.
#[pyfunction]
#[pyo3(signature = (neck_fibre_size, neck_bands, cap_resolution, string_ratio=0.6))]
fn build_balloon_dumbbell(
    neck_fibre_size: f64,
    neck_bands: usize,
    cap_resolution: usize,
    string_ratio: f64,
) -> PyResult<(Surface, Vec<(usize, usize)>, Collar)> {
    Ok(dumbbell_tuple(
        fixtures::balloon_dumbbell(
            neck_fibre_size,
            neck_bands,
            cap_resolution,
            string_ratio,
            3.0,
            1.0,
        )
        .map_err(err)?,
    ))
}

/// Interpolate the collar fibre metric toward the dominating h_Γ.
#[pyfunction]
fn cylindrical_interpolation(surface: &Surface, collar: &Collar) -> PyResult<SurgeredMetric> {
    let cutoff = surgery::make_cutoff(collar.inner.epsilon()).map_err(err)?;
    Ok(SurgeredMetric {
        inner: surgery::cylindrical_interpolation(&surface.inner, &collar.inner, &cutoff)
            .map_err(err)?,
    })
}

/// Wrap an already-cylindrical collar without touching the metric.
#[pyfunction]
fn already_cylindrical(surface: &Surface, collar: &Collar) -> PyResult<SurgeredMetric> {
    let cutoff = surgery::make_cutoff(collar.inner.epsilon()).map_err(err)?;
    Ok(SurgeredMetric {
        inner: surgery::SurgeredMetric::already_cylindrical(&surface.inner, &collar.inner, &cutoff)
            .map_err(err)?,
    })
}

/// Stretch the cylindrical part to length R.
#[pyfunction]
fn stretch(metric: &SurgeredMetric, r: f64) -> PyResult<SurgeredMetric> {
    let cutoff = surgery::make_cutoff(metric.inner.epsilon()).map_err(err)?;
    let params = surgery::StretchParams::standard(metric.inner.epsilon(), r);
    Ok(SurgeredMetric {
        inner: surgery::stretch(&metric.inner, &params, &cutoff).map_err(err)?,
    })
}

/// Shortest-path distance between the cylinder rims on one side
/// ("minus"/"plus").
#[pyfunction]
fn rim_distance(metric: &SurgeredMetric, side: &str) -> PyResult<f64> {
    Ok(surgery::rim_distance(&metric.inner, side_from_str(side)?))
}

fn settings(tolerance: Option<f64>, brute_cap: usize, certify: bool) -> solver::SolverSettings {
    solver::SolverSettings {
        volume_tolerance: tolerance,
        brute_cap,
        cross_validate: certify,
        ..solver::SolverSettings::default()
    }
}

/// Exhaustive minimum perimeter at the target volume.
#[pyfunction]
#[pyo3(signature = (surface, target_volume, tolerance=None, brute_cap=24))]
fn brute_force_min(
    surface: &Surface,
    target_volume: f64,
    tolerance: Option<f64>,
    brute_cap: usize,
) -> PyResult<IsoPoint> {
    solver::brute_force_min(&surface.inner, target_volume, &settings(tolerance, brute_cap, false))
        .map(Into::into)
        .map_err(err)
}

/// Lagrangian bisection with exchange repair at the target volume.
#[pyfunction]
#[pyo3(signature = (surface, target_volume, tolerance=None, brute_cap=24, certify=true))]
fn constrained_min_at_volume(
    surface: &Surface,
    target_volume: f64,
    tolerance: Option<f64>,
    brute_cap: usize,
    certify: bool,
) -> PyResult<IsoPoint> {
    solver::constrained_min_at_volume(
        &surface.inner,
        target_volume,
        &settings(tolerance, brute_cap, certify),
    )
    .map(Into::into)
    .map_err(err)
}

/// Lagrangian min-cut sweep over a λ grid.
#[pyfunction]
fn mincut_sweep(surface: &Surface, lambda_grid: Vec<f64>) -> PyResult<Vec<IsoPoint>> {
    Ok(solver::mincut_sweep(&surface.inner, &lambda_grid)
        .map_err(err)?
        .into_iter()
        .map(Into::into)
        .collect())
}

/// Isoperimetric profile on an even volume grid over [0, total/2].
#[pyfunction]
#[pyo3(signature = (surface, samples, tolerance=None, brute_cap=24))]
fn isoperimetric_profile(
    surface: &Surface,
    samples: usize,
    tolerance: Option<f64>,
    brute_cap: usize,
) -> PyResult<Vec<IsoPoint>> {
    Ok(
        solver::isoperimetric_profile(&surface.inner, samples, &settings(tolerance, brute_cap, true))
            .map_err(err)?
            .into_iter()
            .map(Into::into)
            .collect(),
    )
}

/// Closed-form link spectrum of the cone over S^p × S^q.
#[pyfunction]
fn product_link_spectrum(p: usize, q: usize, modes: usize) -> PyResult<Vec<f64>> {
    Ok(cones::product_link_spectrum(p, q, modes)
        .map_err(err)?
        .eigenvalues)
}

/// Classify the cone over S^p × S^q: (mu_1, threshold, class, gamma_pairs).
#[pyfunction]
#[allow(clippy::type_complexity)]
fn classify_product_cone(
    p: usize,
    q: usize,
) -> PyResult<(f64, f64, String, Vec<(usize, f64, f64)>)> {
    let cone = cones::MinimalCone::product(p, q);
    let spec = cones::product_link_spectrum(p, q, 8).map_err(err)?;
    let v = cones::classify_stability(&cone, &spec).map_err(err)?;
    Ok((
        v.mu_1,
        v.threshold,
        v.class.to_string(),
        v.radial_exponents
            .iter()
            .map(|e| (e.mode, e.gamma_minus, e.gamma_plus))
            .collect(),
    ))
}

/// Numeric μ₁ of the meshed Clifford-torus link at the given grid resolution.
#[pyfunction]
fn clifford_link_mu1(resolution: usize) -> PyResult<f64> {
    let link = cones::clifford_torus_link(resolution).map_err(err)?;
    Ok(cones::meshed_link_spectrum(&link, 1).map_err(err)?.eigenvalues[0])
}

/// H_h = e^{-f}(H_g - df/dnu).
#[pyfunction]
fn conformal_mean_curvature(h_g: f64, f_at_sigma: f64, df_dnu: f64) -> f64 {
    conformal::conformal_mean_curvature(h_g, f_at_sigma, df_dnu)
}

/// λ_min of the second-variation form on a closed ring.
#[pyfunction]
fn stability_lambda_min(edge_lengths: Vec<f64>, potential: Vec<f64>) -> PyResult<f64> {
    Ok(conformal::StabilityForm::on_ring(&edge_lengths, &potential)
        .map_err(err)?
        .lambda_min)
}

/// Run the stretching experiment from a TOML config file; returns
/// (ok, r_star, csv_path, summary_path).
#[pyfunction]
fn run_sweep(config_path: PathBuf) -> PyResult<(bool, Option<f64>, String, String)> {
    let cfg = ExperimentConfig::from_path(&config_path).map_err(err)?;
    let record = harness::run_stretch_experiment(&cfg).map_err(err)?;
    let (csv, summary) = harness::emit_report(&record, &cfg, &cfg.output.dir).map_err(err)?;
    Ok((
        record.ok(),
        record.r_star,
        csv.display().to_string(),
        summary.display().to_string(),
    ))
}

/// Run the volume-constrained-minimiser experiment from a TOML config file.
#[pyfunction]
fn run_vcm(config_path: PathBuf) -> PyResult<(bool, Option<f64>, String, String)> {
    let cfg = ExperimentConfig::from_path(&config_path).map_err(err)?;
    let record = harness::run_vcm_experiment(&cfg).map_err(err)?;
    let (csv, summary) = harness::emit_report(&record, &cfg, &cfg.output.dir).map_err(err)?;
    Ok((
        record.ok(),
        record.r_star,
        csv.display().to_string(),
        summary.display().to_string(),
    ))
}

#[pymodule]
fn _stretchlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Surface>()?;
    m.add_class::<Collar>()?;
    m.add_class::<SurgeredMetric>()?;
    m.add_class::<IsoPoint>()?;
    m.add_function(wrap_pyfunction!(build_dumbbell, m)?)?;
    m.add_function(wrap_pyfunction!(build_balloon_dumbbell, m)?)?;
    m.add_function(wrap_pyfunction!(cylindrical_interpolation, m)?)?;
    m.add_function(wrap_pyfunction!(already_cylindrical, m)?)?;
    m.add_function(wrap_pyfunction!(stretch, m)?)?;
    m.add_function(wrap_pyfunction!(rim_distance, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_min, m)?)?;
    m.add_function(wrap_pyfunction!(constrained_min_at_volume, m)?)?;
    m.add_function(wrap_pyfunction!(mincut_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(isoperimetric_profile, m)?)?;
    m.add_function(wrap_pyfunction!(product_link_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(classify_product_cone, m)?)?;
    m.add_function(wrap_pyfunction!(clifford_link_mu1, m)?)?;
    m.add_function(wrap_pyfunction!(conformal_mean_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(stability_lambda_min, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_vcm, m)?)?;
    Ok(())
}
