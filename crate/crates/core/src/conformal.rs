//! Conformal perturbations h = e^{2f} g: the mean-curvature and normal-Ricci
//! transformation laws, the factor that makes Σ minimal, the factor that makes
//! it strictly stable, and the discretized second-variation form on Σ.
//!
//! Normal convention: ν points from Σ into the enclosed region Ω, and the
//! scalar mean curvature is the pairing of the mean-curvature vector with ν,
//! so a circle bounding a flat disk of radius r has H = 1/r. In the warped
//! model Ω = {t < σ}, hence ∂/∂ν = −∂/∂t.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{Collar, CollarSide, TriangulatedSurface, WarpedInterval};

/// C² bump: 1 on |s| ≤ w/2, 0 on |s| ≥ w.
fn bump(s: f64, w: f64) -> f64 {
    let a = s.abs();
    if a <= 0.5 * w {
        1.0
    } else if a >= w {
        0.0
    } else {
        let u = (a - 0.5 * w) / (0.5 * w);
        1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
    }
}

/// A sampled conformal factor. For the warped model the values align with the
/// interval's grid; for meshes they are per-vertex.
#[derive(Debug, Clone)]
pub struct ConformalFactor {
    pub values: Vec<f64>,
    /// ∂f/∂ν sampled along Σ (one entry for the homogeneous warped fibre).
    pub normal_derivative_at_sigma: Vec<f64>,
}

impl ConformalFactor {
    pub fn zero(samples: usize) -> Self {
        ConformalFactor {
            values: vec![0.0; samples],
            normal_derivative_at_sigma: vec![0.0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Sum of two factors on the same sampling.
    pub fn add(&self, other: &ConformalFactor) -> ConformalFactor {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        let nd = self
            .normal_derivative_at_sigma
            .iter()
            .zip(&other.normal_derivative_at_sigma)
            .map(|(a, b)| a + b)
            .collect();
        ConformalFactor {
            values,
            normal_derivative_at_sigma: nd,
        }
    }

    /// f₂-type check on the warped grid: f and its first difference vanish at Σ.
    pub fn check_f2_warped(&self, w: &WarpedInterval, sigma: f64) -> Result<()> {
        let h = w.grid_spacing();
        let i = (sigma / h).round() as usize;
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let grad = (self.values[i + 1] - self.values[i - 1]) / (2.0 * h);
        if self.values[i].abs() > 1e-9 * scale || grad.abs() > 1e-6 * scale.max(1.0) {
            return Err(Error::input(format!(
                "factor is not f2-type: f(Σ) = {}, ∇f(Σ) = {grad}",
                self.values[i]
            )));
        }
        Ok(())
    }
}

/// H_h = e^{−f}(H_g − ∂f/∂ν).
pub fn conformal_mean_curvature(h_g: f64, f_at_sigma: f64, df_dnu: f64) -> f64 {
    (-f_at_sigma).exp() * (h_g - df_dnu)
}

// ---------------------------------------------------------------------------
// Warped model curvature.
// ---------------------------------------------------------------------------

/// Mean (geodesic) curvature of the level circle {t = c}: f'/f with ν into
/// {t < c}.
pub fn warped_mean_curvature(w: &WarpedInterval, c: f64) -> f64 {
    w.warp_derivative(c) / w.warp_at(c)
}

/// Gauss curvature of the warped surface at level c: −f''/f.
pub fn warped_gauss_curvature(w: &WarpedInterval, c: f64) -> f64 {
    -w.warp_second_derivative(c) / w.warp_at(c)
}

/// |II|² + Ric(ν,ν) along the level circle, the second-variation potential.
pub fn warped_stability_potential(w: &WarpedInterval, c: f64) -> f64 {
    let h = warped_mean_curvature(w, c);
    h * h + warped_gauss_curvature(w, c)
}

fn grid_index(w: &WarpedInterval, t: f64) -> usize {
    let h = w.grid_spacing();
    ((t / h).round() as usize).clamp(2, w.samples().len() - 3)
}

/// Transformed normal Ricci value (the Gauss curvature in the surface model)
/// at Σ = {t = σ}. With `specialized` the factor must be f₂-type and the
/// reduction Ric_h̃(ν,ν) = Ric(ν,ν) − ∇²f(ν,ν) is used; otherwise the general
/// 2D law K_h = e^{−2f}(K − Δf) with Δf = f'' + (f'/f) f'.
pub fn conformal_ricci_normal_warped(
    w: &WarpedInterval,
    sigma: f64,
    factor: &ConformalFactor,
    specialized: bool,
) -> Result<f64> {
    if factor.values.len() != w.samples().len() {
        return Err(Error::input("factor sampling does not match the grid"));
    }
    let h = w.grid_spacing();
    let i = grid_index(w, sigma);
    let k = warped_gauss_curvature(w, sigma);
    let phi = &factor.values;
    let d2 = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
    if specialized {
        factor.check_f2_warped(w, sigma)?;
        Ok(k - d2)
    } else {
        let d1 = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
        let lap = d2 + warped_mean_curvature(w, sigma) * d1;
        Ok((-2.0 * phi[i]).exp() * (k - lap))
    }
}

/// Sampled factor f₁ = H·s·χ(s) supported within `support` of Σ, with
/// ∂f₁/∂ν = H on Σ so the conformal change makes Σ minimal.
pub fn make_minimal_warped(
    w: &WarpedInterval,
    sigma: f64,
    support: f64,
) -> Result<ConformalFactor> {
    if sigma - support < 0.0 || sigma + support > w.length() {
        return Err(Error::Structure(format!(
            "support [{}, {}] leaves the interval",
            sigma - support,
            sigma + support
        )));
    }
    let h_g = warped_mean_curvature(w, sigma);
    let h = w.grid_spacing();
    let values = (0..w.samples().len())
        .map(|i| {
            let t = i as f64 * h;
            // s grows along ν = −∂t
            let s = sigma - t;
            h_g * s * bump(s, support)
        })
        .collect();
    Ok(ConformalFactor {
        values,
        normal_derivative_at_sigma: vec![h_g],
    })
}

/// Factor f₂ = c·s²·χ(s) with c chosen so the transformed potential satisfies
/// |II|² + Ric(ν,ν) ≤ −margin on Σ, plus the resulting second-variation form.
pub fn make_strictly_stable_warped(
    w: &WarpedInterval,
    sigma: f64,
    support: f64,
    margin: f64,
) -> Result<(ConformalFactor, StabilityForm)> {
    if margin < 0.0 {
        return Err(Error::input("margin must be nonnegative"));
    }
    if sigma - support < 0.0 || sigma + support > w.length() {
        return Err(Error::Structure("support leaves the interval".into()));
    }
    let h_g = warped_mean_curvature(w, sigma);
    if h_g.abs() > 1e-6 {
        return Err(Error::input(format!(
            "Σ must be minimal before stabilising (H = {h_g})"
        )));
    }
    let p = warped_stability_potential(w, sigma);
    let mut c = 0.5 * (p.max(0.0) + margin);
    if p <= -margin {
        c = 0.0;
    }
    // The exact choice above satisfies p − 2c ≤ −margin; keep a doubling
    // fallback against discretization wobble in the recomputed potential.
    let grid = w.grid_spacing();
    for _ in 0..64 {
        let factor = f2_factor(w, sigma, support, c);
        let achieved = if c == 0.0 {
            p
        } else {
            conformal_ricci_normal_warped(w, sigma, &factor, true)?
                + warped_mean_curvature(w, sigma).powi(2)
        };
        if achieved <= -margin + 1e-9 {
            let circumference = std::f64::consts::TAU * w.warp_at(sigma);
            let form = uniform_ring_form(circumference, achieved, 64)?;
            return Ok((factor, form));
        }
        c = if c == 0.0 { 0.5 * margin.max(grid) } else { 2.0 * c };
    }
    Err(Error::Structure(
        "could not reach the requested stability margin".into(),
    ))
}

/// Sample s ↦ g(s)·χ(s) on the interval's grid, where s = σ − t is the signed
/// distance along ν and χ is the C² bump supported in |s| < support. The
/// normal derivative at Σ is taken from the samples.
pub fn sampled_profile_factor(
    w: &WarpedInterval,
    sigma: f64,
    support: f64,
    g: impl Fn(f64) -> f64,
) -> ConformalFactor {
    let h = w.grid_spacing();
    let values: Vec<f64> = (0..w.samples().len())
        .map(|i| {
            let s = sigma - i as f64 * h;
            g(s) * bump(s, support)
        })
        .collect();
    let i = (sigma / h).round() as usize;
    let dnu = -(values[i + 1] - values[i - 1]) / (2.0 * h);
    ConformalFactor {
        values,
        normal_derivative_at_sigma: vec![dnu],
    }
}

fn f2_factor(w: &WarpedInterval, sigma: f64, support: f64, c: f64) -> ConformalFactor {
    let h = w.grid_spacing();
    let values = (0..w.samples().len())
        .map(|i| {
            let t = i as f64 * h;
            let s = sigma - t;
            c * s * s * bump(s, support)
        })
        .collect();
    ConformalFactor {
        values,
        normal_derivative_at_sigma: vec![0.0],
    }
}

/// Second-variation form on a homogeneous circle of the given circumference
/// with a constant potential, discretized with `segments` elements.
pub fn uniform_ring_form(circumference: f64, potential: f64, segments: usize) -> Result<StabilityForm> {
    let lens = vec![circumference / segments as f64; segments];
    let pots = vec![potential; segments];
    StabilityForm::on_ring(&lens, &pots)
}

/// Second-variation form of the level circle {t = σ} of a warped interval.
pub fn stability_form_warped(w: &WarpedInterval, sigma: f64, segments: usize) -> Result<StabilityForm> {
    let p = warped_stability_potential(w, sigma);
    uniform_ring_form(std::f64::consts::TAU * w.warp_at(sigma), p, segments)
}

// ---------------------------------------------------------------------------
// Finite-difference oracles: curvature recomputed from the perturbed metric.
// ---------------------------------------------------------------------------

/// Mean curvature of {t = c} under e^{2φ}g, differentiating the perturbed warp
/// F = e^{φ} f in its own arclength: H = e^{−φ} F_t / F.
pub fn fd_mean_curvature_perturbed(w: &WarpedInterval, factor: &ConformalFactor, c: f64) -> f64 {
    let h = w.grid_spacing();
    let i = grid_index(w, c);
    let big_f = |j: usize| factor.values[j].exp() * w.samples()[j];
    let ft = (big_f(i + 1) - big_f(i - 1)) / (2.0 * h);
    (-factor.values[i]).exp() * ft / big_f(i)
}

/// Gauss curvature of e^{2φ}g at {t = c}: K = −F_ττ / F with dτ = e^{φ} dt.
/// With d/dτ = e^{−φ} d/dt this is F_ττ = e^{−2φ}(F_tt − φ_t F_t); the t-grid
/// derivatives come from central differences of the sampled metric data.
pub fn fd_gauss_curvature_perturbed(w: &WarpedInterval, factor: &ConformalFactor, c: f64) -> f64 {
    let h = w.grid_spacing();
    let i = grid_index(w, c);
    let big_f = |j: usize| factor.values[j].exp() * w.samples()[j];
    let f_t = (big_f(i + 1) - big_f(i - 1)) / (2.0 * h);
    let f_tt = (big_f(i + 1) - 2.0 * big_f(i) + big_f(i - 1)) / (h * h);
    let phi_t = (factor.values[i + 1] - factor.values[i - 1]) / (2.0 * h);
    let f_tautau = (-2.0 * factor.values[i]).exp() * (f_tt - phi_t * f_t);
    -f_tautau / big_f(i)
}

// ---------------------------------------------------------------------------
// Mesh model: curvature along a collar's Σ ring and the same constructions.
// ---------------------------------------------------------------------------

fn angle_at(surface: &TriangulatedSurface, face: usize, v: usize) -> f64 {
    let f = surface.faces()[face];
    let others: Vec<usize> = f.iter().copied().filter(|&x| x != v).collect();
    let b = surface.edge_length(surface.edge_id(v, others[0]).unwrap());
    let c = surface.edge_length(surface.edge_id(v, others[1]).unwrap());
    let a = surface.edge_length(surface.edge_id(others[0], others[1]).unwrap());
    (((b * b + c * c - a * a) / (2.0 * b * c)).clamp(-1.0, 1.0)).acos()
}

/// Geodesic curvature density along Σ: (π − angle sum on the Ω side) divided
/// by the vertex's share of the cycle length. Positive when Σ bulges away
/// from Ω, matching H = 1/r for a circle bounding a disk.
pub fn mesh_geodesic_curvature(
    surface: &TriangulatedSurface,
    collar: &Collar,
    omega_side: CollarSide,
) -> Vec<f64> {
    let si = collar.sigma_index();
    let ring = &collar.rings()[si];
    let m = ring.len();
    let omega_gap = match omega_side {
        CollarSide::Minus => si - 1,
        CollarSide::Plus => si,
    };
    let gap_faces: std::collections::HashSet<usize> =
        collar.gap_faces(surface, omega_gap).into_iter().collect();
    let mut out = Vec::with_capacity(m);
    for (j, &v) in ring.iter().enumerate() {
        let mut theta = 0.0;
        for f in 0..surface.face_count() {
            if gap_faces.contains(&f) && surface.faces()[f].contains(&v) {
                theta += angle_at(surface, f, v);
            }
        }
        let mut defect = std::f64::consts::PI - theta;
        // geodesic within float roundoff of the angle sums
        if defect.abs() < 1e-9 {
            defect = 0.0;
        }
        let l_prev = surface.edge_length(collar.fibre_edge(si, (j + m - 1) % m));
        let l_next = surface.edge_length(collar.fibre_edge(si, j));
        out.push(defect / (0.5 * (l_prev + l_next)));
    }
    out
}

/// Gauss curvature density at a vertex: angle defect over the barycentric
/// dual area.
pub fn mesh_gauss_curvature_at(surface: &TriangulatedSurface, v: usize) -> f64 {
    let mut theta = 0.0;
    let mut area = 0.0;
    for f in 0..surface.face_count() {
        if surface.faces()[f].contains(&v) {
            theta += angle_at(surface, f, v);
            area += surface.face_area(f) / 3.0;
        }
    }
    (std::f64::consts::TAU - theta) / area
}

/// Second-variation potential |II|² + Ric(ν,ν) at the Σ-ring vertices.
pub fn mesh_stability_potential(
    surface: &TriangulatedSurface,
    collar: &Collar,
    omega_side: CollarSide,
) -> Vec<f64> {
    let kappa = mesh_geodesic_curvature(surface, collar, omega_side);
    let ring = &collar.rings()[collar.sigma_index()];
    ring.iter()
        .zip(kappa)
        .map(|(&v, k)| k * k + mesh_gauss_curvature_at(surface, v))
        .collect()
}

/// Signed distance along ν for a collar ring: positive on the Ω side.
fn ring_nu_distance(collar: &Collar, ring: usize, omega_side: CollarSide) -> f64 {
    let s = collar.ring_signed_distance(ring);
    match omega_side {
        CollarSide::Minus => -s,
        CollarSide::Plus => s,
    }
}

/// Per-vertex factor samples v ↦ g(s_ν(v)) on the collar rings, zero elsewhere.
fn collar_profile_factor(
    surface: &TriangulatedSurface,
    collar: &Collar,
    omega_side: CollarSide,
    per_fibre: &[f64],
    profile: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let mut values = vec![0.0; surface.vertex_count()];
    for (i, ring) in collar.rings().iter().enumerate() {
        let s = ring_nu_distance(collar, i, omega_side);
        for (j, &v) in ring.iter().enumerate() {
            values[v] = per_fibre[j] * profile(s);
        }
    }
    values
}

/// Mesh version of make_minimal: f₁ with ∂f₁/∂ν = H_g at each Σ vertex,
/// supported on the collar rings, normalized so the discrete normal
/// derivative across the adjacent rings is exact.
pub fn make_minimal_mesh(
    surface: &TriangulatedSurface,
    collar: &Collar,
    omega_side: CollarSide,
) -> Result<ConformalFactor> {
    let kappa = mesh_geodesic_curvature(surface, collar, omega_side);
    if kappa.iter().all(|&k| k == 0.0) {
        return Ok(ConformalFactor {
            values: vec![0.0; surface.vertex_count()],
            normal_derivative_at_sigma: vec![0.0; kappa.len()],
        });
    }
    let support = collar_support(collar)?;
    let si = collar.sigma_index();
    let l_up = ring_nu_distance(collar, si + 1, omega_side);
    let profile = |s: f64| s * bump(s, support);
    // discrete ∂/∂ν across the two neighbour rings
    let raw = (profile(l_up) - profile(-l_up)) / (2.0 * l_up.abs());
    if raw.abs() < 1e-12 {
        return Err(Error::Structure(
            "collar too narrow: f1 profile vanishes at the adjacent rings".into(),
        ));
    }
    let scale = 1.0 / raw;
    let values = collar_profile_factor(surface, collar, omega_side, &kappa, |s| {
        scale * profile(s)
    });
    Ok(ConformalFactor {
        values,
        normal_derivative_at_sigma: kappa,
    })
}

fn collar_support(collar: &Collar) -> Result<f64> {
    let support = 0.9 * collar.epsilon() / 4.0;
    let si = collar.sigma_index();
    let first_ring_dist = collar.ring_signed_distance(si + 1).abs();
    if first_ring_dist >= support {
        return Err(Error::Structure(
            "collar too narrow to support a conformal factor clear of the surgery zones".into(),
        ));
    }
    Ok(support)
}

/// Mesh version of make_strictly_stable: f₂ = c·s²·χ(s) scaled so the discrete
/// normal Hessian is exactly 2c, with c making the potential ≤ −margin.
pub fn make_strictly_stable_mesh(
    surface: &TriangulatedSurface,
    collar: &Collar,
    omega_side: CollarSide,
    margin: f64,
) -> Result<(ConformalFactor, StabilityForm)> {
    if margin < 0.0 {
        return Err(Error::input("margin must be nonnegative"));
    }
    let kappa = mesh_geodesic_curvature(surface, collar, omega_side);
    if kappa.iter().any(|&k| k.abs() > 1e-6) {
        return Err(Error::input(
            "Σ must be minimal before stabilising; run make_minimal first",
        ));
    }
    let potential = mesh_stability_potential(surface, collar, omega_side);
    let p_max = potential.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c = if p_max <= -margin {
        0.0
    } else {
        0.5 * (p_max.max(0.0) + margin)
    };
    let factor = if c == 0.0 {
        ConformalFactor {
            values: vec![0.0; surface.vertex_count()],
            normal_derivative_at_sigma: vec![0.0; kappa.len()],
        }
    } else {
        let support = collar_support(collar)?;
        let si = collar.sigma_index();
        let l_up = ring_nu_distance(collar, si + 1, omega_side);
        let profile = |s: f64| s * s * bump(s, support);
        let hess = (profile(l_up) + profile(-l_up)) / (l_up * l_up);
        if hess.abs() < 1e-12 {
            return Err(Error::Structure(
                "collar too narrow: f2 profile vanishes at the adjacent rings".into(),
            ));
        }
        let scale = 2.0 / hess;
        let ones = vec![1.0; kappa.len()];
        let values = collar_profile_factor(surface, collar, omega_side, &ones, |s| {
            c * scale * profile(s)
        });
        ConformalFactor {
            values,
            normal_derivative_at_sigma: vec![0.0; kappa.len()],
        }
    };
    let new_potential: Vec<f64> = potential.iter().map(|p| p - 2.0 * c).collect();
    let form = stability_form_of_ring(surface, collar, &new_potential)?;
    Ok((factor, form))
}

/// Transformed normal Ricci values at the Σ-ring vertices of a mesh. The
/// normal Hessian stencil is symmetric across Σ, so no side choice is needed.
pub fn conformal_ricci_normal_mesh(
    surface: &TriangulatedSurface,
    collar: &Collar,
    factor: &ConformalFactor,
    specialized: bool,
) -> Result<Vec<f64>> {
    if factor.values.len() != surface.vertex_count() {
        return Err(Error::input("factor sampling does not match the mesh"));
    }
    let si = collar.sigma_index();
    let ring = &collar.rings()[si];
    let up = &collar.rings()[si + 1];
    let down = &collar.rings()[si - 1];
    let l = collar.ring_signed_distance(si + 1).abs();
    if specialized {
        // f2-type gate: zero on Σ and first differences vanishing
        for (j, &v) in ring.iter().enumerate() {
            let grad = (factor.values[up[j]] - factor.values[down[j]]) / (2.0 * l);
            if factor.values[v].abs() > 1e-9 || grad.abs() > 1e-6 {
                return Err(Error::input("factor is not f2-type on Σ"));
            }
        }
    }
    let mut out = Vec::with_capacity(ring.len());
    for (j, &v) in ring.iter().enumerate() {
        let k = mesh_gauss_curvature_at(surface, v);
        let d2 = (factor.values[up[j]] - 2.0 * factor.values[v] + factor.values[down[j]]) / (l * l);
        if specialized {
            out.push(k - d2);
        } else {
            // tangential part of the Laplacian along the ring
            let m = ring.len();
            let lp = surface.edge_length(collar.fibre_edge(si, (j + m - 1) % m));
            let ln = surface.edge_length(collar.fibre_edge(si, j));
            let prev = factor.values[ring[(j + m - 1) % m]];
            let next = factor.values[ring[(j + 1) % m]];
            let here = factor.values[v];
            let tangential =
                ((next - here) / ln - (here - prev) / lp) / (0.5 * (lp + ln));
            out.push((-2.0 * here).exp() * (k - d2 - tangential));
        }
    }
    Ok(out)
}

/// Scale every edge by e^{(f(u)+f(v))/2}: the discrete conformal change.
pub fn apply_conformal_surface(
    surface: &TriangulatedSurface,
    factor: &ConformalFactor,
) -> Result<TriangulatedSurface> {
    if factor.values.len() != surface.vertex_count() {
        return Err(Error::input("factor sampling does not match the mesh"));
    }
    let lengths = surface
        .edges()
        .iter()
        .zip(surface.edge_lengths())
        .map(|(&(u, v), &l)| l * (0.5 * (factor.values[u] + factor.values[v])).exp())
        .collect();
    surface.with_edge_lengths(lengths)
}

/// Assemble the second-variation form on the Σ ring of a collar with an
/// explicit potential per ring vertex.
pub fn stability_form_of_ring(
    surface: &TriangulatedSurface,
    collar: &Collar,
    potential: &[f64],
) -> Result<StabilityForm> {
    let si = collar.sigma_index();
    let m = collar.fibre_count();
    let lens: Vec<f64> = (0..m)
        .map(|j| surface.edge_length(collar.fibre_edge(si, j)))
        .collect();
    StabilityForm::on_ring(&lens, potential)
}

/// Second-variation form of the Σ ring under the current metric.
pub fn stability_form_mesh(
    surface: &TriangulatedSurface,
    collar: &Collar,
    omega_side: CollarSide,
) -> Result<StabilityForm> {
    let potential = mesh_stability_potential(surface, collar, omega_side);
    stability_form_of_ring(surface, collar, &potential)
}

/// Discretized quadratic form Q(φ) = ∫_Σ |∇φ|² − P φ², with piecewise-linear
/// elements on the cycle edges, a lumped mass matrix and the lowest
/// generalized eigenvalue.
#[derive(Debug, Clone)]
pub struct StabilityForm {
    pub matrix: DMatrix<f64>,
    pub mass: Vec<f64>,
    pub lambda_min: f64,
}

impl StabilityForm {
    /// `edge_lengths[i]` joins vertices i and i+1 (mod n); `potential` is
    /// sampled at the vertices.
    pub fn on_ring(edge_lengths: &[f64], potential: &[f64]) -> Result<StabilityForm> {
        let n = edge_lengths.len();
        if n < 3 {
            return Err(Error::input("ring needs at least three edges"));
        }
        if potential.len() != n {
            return Err(Error::input("potential sampling does not match the ring"));
        }
        for &l in edge_lengths {
            if !(l > 0.0) {
                return Err(Error::input("degenerate zero-length cycle edge"));
            }
        }
        let mut a = DMatrix::<f64>::zeros(n, n);
        let mut mass = vec![0.0f64; n];
        for i in 0..n {
            let j = (i + 1) % n;
            let w = 1.0 / edge_lengths[i];
            a[(i, i)] += w;
            a[(j, j)] += w;
            a[(i, j)] -= w;
            a[(j, i)] -= w;
            mass[i] += 0.5 * edge_lengths[i];
            mass[j] += 0.5 * edge_lengths[i];
        }
        for i in 0..n {
            a[(i, i)] -= potential[i] * mass[i];
        }
        // generalized eigenvalue via the diagonal mass
        let mut b = a.clone();
        let inv_sqrt: Vec<f64> = mass.iter().map(|&m| 1.0 / m.sqrt()).collect();
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
            }
        }
        let eig = nalgebra::SymmetricEigen::new(b);
        let lambda_min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(StabilityForm {
            matrix: a,
            mass,
            lambda_min,
        })
    }

    /// Evaluate Q(φ) for a sampled test function.
    pub fn evaluate(&self, phi: &[f64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(phi);
        (v.transpose() * &self.matrix * &v)[(0, 0)]
    }
}
