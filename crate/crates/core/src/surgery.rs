//! Metric surgery on collars: a C² cutoff profile, cylindrical interpolation
//! with a dominating fibre metric, and the longitudinal stretch family. The
//! collar spans Σ; each half is treated as a band Γ×[0,ε] parameterized from
//! its outer boundary ring toward Σ, so the zones with η > 0 stay clear of
//! both the collar ends and Σ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::warped::WarpedMeasurements;
use crate::geometry::{
    product_diagonal, unit_sphere_area, Collar, Cycle, Region, TriangulatedSurface, WarpedInterval,
};

/// C² quintic smoothstep: 0 at 0, 1 at 1, vanishing first and second
/// derivatives at both ends.
fn smootherstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

/// Cutoff η: [0, ε] → [0, 1], zero on [0, ε/4] ∪ [3ε/4, ε], one on
/// [ε/3, 2ε/3], C² piecewise-quintic and monotone on each transition.
#[derive(Debug, Clone)]
pub struct CutoffProfile {
    epsilon: f64,
}

/// Construct the standard cutoff for a collar of width ε.
pub fn make_cutoff(epsilon: f64) -> Result<CutoffProfile> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::input(format!("collar width must be positive, got {epsilon}")));
    }
    Ok(CutoffProfile { epsilon })
}

impl CutoffProfile {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eval(&self, t: f64) -> f64 {
        let e = self.epsilon;
        if t <= e / 4.0 || t >= 3.0 * e / 4.0 {
            0.0
        } else if t >= e / 3.0 && t <= 2.0 * e / 3.0 {
            1.0
        } else if t < e / 3.0 {
            smootherstep((t - e / 4.0) / (e / 12.0))
        } else {
            1.0 - smootherstep((t - 2.0 * e / 3.0) / (e / 12.0))
        }
    }

    /// Identifier recorded in exported provenance blocks.
    pub fn spec_string(&self) -> String {
        "quintic-smoothstep(0 on [0,eps/4]+[3eps/4,eps], 1 on [eps/3,2eps/3])".to_string()
    }
}

/// Stretch parameters: target cylinder length R and the pre-stretch length ℓ
/// of the cylindrical segment (ℓ = ε/3 in the standard pipeline).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StretchParams {
    pub r: f64,
    pub ell: f64,
}

impl StretchParams {
    pub fn standard(epsilon: f64, r: f64) -> Self {
        StretchParams {
            r,
            ell: epsilon / 3.0,
        }
    }

    /// ρ_R(t) = 1 + ((R/ℓ)² − 1) η(t).
    pub fn rho(&self, cutoff: &CutoffProfile, t: f64) -> f64 {
        let q = self.r / self.ell;
        1.0 + (q * q - 1.0) * cutoff.eval(t)
    }
}

/// A collar metric produced by the surgery pipeline. Carries the full surface
/// with the new metric, the sub-bands forming the stretched part T, and the
/// dominating fibre metric h_Γ.
#[derive(Debug, Clone)]
pub struct SurgeredMetric {
    surface: TriangulatedSurface,
    collar: Collar,
    cylinder_region: Region,
    /// Per aligned fibre index: the dominating fibre edge length.
    h_gamma: Vec<f64>,
    epsilon: f64,
    ell: f64,
    /// Stretch target; equals ℓ before any stretch is applied.
    r: f64,
}

impl SurgeredMetric {
    pub fn surface(&self) -> &TriangulatedSurface {
        &self.surface
    }
    pub fn collar(&self) -> &Collar {
        &self.collar
    }
    pub fn cylinder_region(&self) -> &Region {
        &self.cylinder_region
    }
    pub fn h_gamma(&self) -> &[f64] {
        &self.h_gamma
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn ell(&self) -> f64 {
        self.ell
    }
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn into_surface(self) -> TriangulatedSurface {
        self.surface
    }

    /// Wrap an already-cylindrical collar without touching the metric. Stands
    /// in for `cylindrical_interpolation` when the fibre metric is constant
    /// across bands, where the interpolation would be the identity anyway.
    pub fn already_cylindrical(
        surface: &TriangulatedSurface,
        collar: &Collar,
        cutoff: &CutoffProfile,
    ) -> Result<Self> {
        check_cutoff_matches(collar, cutoff)?;
        if !collar.is_cylindrical(surface) {
            return Err(Error::Structure(
                "collar fibre metric varies between bands; run cylindrical_interpolation".into(),
            ));
        }
        let m = collar.fibre_count();
        let h_gamma = (0..m)
            .map(|j| surface.edge_length(collar.fibre_edge(0, j)))
            .collect();
        Ok(SurgeredMetric {
            surface: surface.clone(),
            collar: collar.clone(),
            cylinder_region: stretched_region(surface, collar, cutoff),
            h_gamma,
            epsilon: collar.epsilon(),
            ell: collar.epsilon() / 3.0,
            r: collar.epsilon() / 3.0,
        })
    }
}

fn check_cutoff_matches(collar: &Collar, cutoff: &CutoffProfile) -> Result<()> {
    let e = collar.epsilon();
    if (cutoff.epsilon() - e).abs() > 1e-9 * e.max(1.0) {
        return Err(Error::input(format!(
            "cutoff width {} does not match collar width {}",
            cutoff.epsilon(),
            e
        )));
    }
    Ok(())
}

/// Faces of the gaps the stretch acts on: every gap whose midpoint has η > 0.
fn stretched_region(surface: &TriangulatedSurface, collar: &Collar, cutoff: &CutoffProfile) -> Region {
    let mut faces = Vec::new();
    for g in 0..collar.gap_count() {
        if cutoff.eval(collar.gap_mid_u(g)) > 0.0 {
            faces.extend(collar.gap_faces(surface, g));
        }
    }
    Region::new(faces)
}

/// Replace the collar fibre metric by (1−η(t)) h_t + η(t) h_Γ at the level of
/// quadratic forms, where h_Γ is the per-fibre-edge maximum over all bands.
/// Longitudinal lengths are unchanged; diagonals of affected quads are
/// recomputed from the local product metric.
pub fn cylindrical_interpolation(
    surface: &TriangulatedSurface,
    collar: &Collar,
    cutoff: &CutoffProfile,
) -> Result<SurgeredMetric> {
    check_cutoff_matches(collar, cutoff)?;
    if collar.gap_count() < 12 {
        return Err(Error::input(format!(
            "collar has {} bands; the interpolation zones need at least 12",
            collar.gap_count()
        )));
    }
    let m = collar.fibre_count();
    let rings = collar.ring_count();

    let mut h_gamma = vec![0.0f64; m];
    for j in 0..m {
        for i in 0..rings {
            h_gamma[j] = h_gamma[j].max(surface.edge_length(collar.fibre_edge(i, j)));
        }
    }

    let mut lengths = surface.edge_lengths().to_vec();
    for i in 0..rings {
        let eta = cutoff.eval(collar.ring_u(i));
        if eta == 0.0 {
            continue;
        }
        for j in 0..m {
            let e = collar.fibre_edge(i, j);
            let old = surface.edge_length(e);
            let new = ((1.0 - eta) * old * old + eta * h_gamma[j] * h_gamma[j]).sqrt();
            lengths[e] = new;
        }
    }
    recompute_diagonals(surface, collar, &mut lengths);

    let new_surface = surface.with_edge_lengths(lengths)?;
    let out = SurgeredMetric {
        cylinder_region: stretched_region(&new_surface, collar, cutoff),
        surface: new_surface,
        collar: collar.clone(),
        h_gamma,
        epsilon: collar.epsilon(),
        ell: collar.epsilon() / 3.0,
        r: collar.epsilon() / 3.0,
    };
    check_dominates(surface, &out)?;
    Ok(out)
}

/// Scale the longitudinal factor of each gap by √ρ_R sampled at the band
/// midpoint; fibre lengths are untouched and diagonals of affected quads are
/// recomputed by the product rule.
pub fn stretch(
    g_tilde: &SurgeredMetric,
    params: &StretchParams,
    cutoff: &CutoffProfile,
) -> Result<SurgeredMetric> {
    let collar = &g_tilde.collar;
    check_cutoff_matches(collar, cutoff)?;
    if params.r < params.ell {
        return Err(Error::input(format!(
            "stretch target R = {} below ℓ = {}",
            params.r, params.ell
        )));
    }
    let expected_ell = collar.epsilon() / 3.0;
    if (params.ell - expected_ell).abs() > 1e-9 * expected_ell.max(1.0) {
        return Err(Error::input(format!(
            "ℓ = {} does not match ε/3 = {expected_ell} for this collar",
            params.ell
        )));
    }

    let surface = &g_tilde.surface;
    let mut lengths = surface.edge_lengths().to_vec();
    for g in 0..collar.gap_count() {
        let rho = params.rho(cutoff, collar.gap_mid_u(g));
        if rho == 1.0 {
            continue;
        }
        let scale = rho.sqrt();
        for &e in collar.longitudinal_edges_of_gap(g) {
            lengths[e] = surface.edge_length(e) * scale;
        }
    }
    recompute_diagonals(surface, collar, &mut lengths);

    let new_surface = surface.with_edge_lengths(lengths)?;
    let out = SurgeredMetric {
        cylinder_region: stretched_region(&new_surface, collar, cutoff),
        surface: new_surface,
        collar: collar.clone(),
        h_gamma: g_tilde.h_gamma.clone(),
        epsilon: g_tilde.epsilon,
        ell: params.ell,
        r: params.r,
    };
    check_dominates(surface, &out)?;
    Ok(out)
}

/// Recompute the diagonal of every quad whose legs changed; quads with
/// unchanged legs keep their input diagonal bit-identically.
fn recompute_diagonals(surface: &TriangulatedSurface, collar: &Collar, lengths: &mut [f64]) {
    let m = collar.fibre_count();
    for g in 0..collar.gap_count() {
        for j in 0..m {
            let fa_e = collar.fibre_edge(g, j);
            let fb_e = collar.fibre_edge(g + 1, j);
            let lo_e = collar.longitudinal_edges_of_gap(g)[j];
            let legs_changed = lengths[fa_e] != surface.edge_length(fa_e)
                || lengths[fb_e] != surface.edge_length(fb_e)
                || lengths[lo_e] != surface.edge_length(lo_e);
            if legs_changed {
                let d = collar.diagonal_edges_of_gap(g)[j];
                lengths[d] = product_diagonal(lengths[fa_e], lengths[fb_e], lengths[lo_e]);
            }
        }
    }
}

fn check_dominates(before: &TriangulatedSurface, after: &SurgeredMetric) -> Result<()> {
    for (e, (&old, &new)) in before
        .edge_lengths()
        .iter()
        .zip(after.surface.edge_lengths())
        .enumerate()
    {
        if new < old - 1e-12 * old {
            return Err(Error::metric(format!(
                "surgery shrank edge {e}: {old} -> {new}"
            )));
        }
    }
    Ok(())
}

/// Rim rings of the stretched cylinder on one collar side: the rings closest
/// to u = ε/3 and u = 2ε/3.
pub fn cylinder_rims(collar: &Collar, side: crate::geometry::CollarSide) -> (usize, usize) {
    use crate::geometry::CollarSide;
    let sigma = collar.sigma_index();
    let range: Vec<usize> = match side {
        CollarSide::Minus => (0..=sigma).collect(),
        CollarSide::Plus => (sigma..collar.ring_count()).collect(),
    };
    let eps = collar.epsilon();
    let closest = |target: f64| {
        range
            .iter()
            .copied()
            .min_by(|&a, &b| {
                let da = (collar.ring_u(a) - target).abs();
                let db = (collar.ring_u(b) - target).abs();
                da.partial_cmp(&db).unwrap().then(a.cmp(&b))
            })
            .unwrap()
    };
    (closest(eps / 3.0), closest(2.0 * eps / 3.0))
}

/// Shortest-path distance between the two rim cycles of the cylinder on one
/// side, measured in the surgered metric.
pub fn rim_distance(metric: &SurgeredMetric, side: crate::geometry::CollarSide) -> f64 {
    let (a, b) = cylinder_rims(&metric.collar, side);
    let sources = metric.collar.rings()[a].clone();
    let dist = metric.surface.vertex_distances(&sources);
    metric.collar.rings()[b]
        .iter()
        .map(|&v| dist[v])
        .fold(f64::INFINITY, f64::min)
}

/// One row of the surgery verification report.
#[derive(Debug, Clone, Serialize)]
pub struct SurgeryRow {
    pub r: f64,
    pub per_omega: f64,
    pub vol_omega: f64,
    pub vol_complement: f64,
    pub vol_t: f64,
    pub vol_not_t: f64,
}

/// Verification outcome for an R-sweep; failures are recorded, not thrown.
#[derive(Debug, Clone, Serialize)]
pub struct SurgeryReport {
    pub rows: Vec<SurgeryRow>,
    pub violations: Vec<String>,
    /// Least-squares affine fit Vol(T) = a·R + b and its max relative residual.
    pub t_fit: Option<(f64, f64, f64)>,
    pub ok: bool,
}

/// Check properties 1-3 of the construction over an R-sweep: the perimeter of
/// Ω is preserved bit-exactly, the volumes of Ω, its complement and T grow
/// strictly and at least linearly, and the volume of M∖T is constant
/// bit-exactly.
pub fn verify_surgery(
    original: &TriangulatedSurface,
    sweep: &[&SurgeredMetric],
    _sigma: &Cycle,
    omega: &Region,
    t_region: &Region,
) -> Result<SurgeryReport> {
    if sweep.is_empty() {
        return Err(Error::input("empty R-sweep"));
    }
    let per_base = original.perimeter(omega)?;
    let not_t = t_region.complement(original);

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for m in sweep {
        let s = m.surface();
        let row = SurgeryRow {
            r: m.r(),
            per_omega: s.perimeter(omega)?,
            vol_omega: s.volume(omega)?,
            vol_complement: s.volume(&omega.complement(s))?,
            vol_t: s.volume(t_region)?,
            vol_not_t: s.volume(&not_t)?,
        };
        if row.per_omega.to_bits() != per_base.to_bits() {
            violations.push(format!(
                "property 1 violated at R = {}: Per(Ω) = {} vs {}",
                row.r, row.per_omega, per_base
            ));
        }
        rows.push(row);
    }
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.r <= a.r {
            violations.push(format!("R-sweep not strictly increasing at {} -> {}", a.r, b.r));
        }
        for (name, va, vb) in [
            ("Vol(Ω)", a.vol_omega, b.vol_omega),
            ("Vol(M∖Ω)", a.vol_complement, b.vol_complement),
            ("Vol(T)", a.vol_t, b.vol_t),
        ] {
            if vb <= va {
                violations.push(format!(
                    "property 2 violated: {name} not strictly increasing at R = {}",
                    b.r
                ));
            }
        }
        if a.vol_not_t.to_bits() != b.vol_not_t.to_bits() {
            violations.push(format!(
                "property 3 violated: Vol(M∖T) changed between R = {} and R = {}",
                a.r, b.r
            ));
        }
    }
    // At-least-linear growth: difference quotients must not fall below the first.
    if rows.len() >= 3 {
        let q0 = (rows[1].vol_t - rows[0].vol_t) / (rows[1].r - rows[0].r);
        for w in rows.windows(2).skip(1) {
            let q = (w[1].vol_t - w[0].vol_t) / (w[1].r - w[0].r);
            if q < q0 * (1.0 - 1e-9) {
                violations.push(format!(
                    "Vol(T) growth drops below linear near R = {}",
                    w[1].r
                ));
            }
        }
    }
    let t_fit = if rows.len() >= 2 {
        Some(affine_fit(
            &rows.iter().map(|r| r.r).collect::<Vec<_>>(),
            &rows.iter().map(|r| r.vol_t).collect::<Vec<_>>(),
        ))
    } else {
        None
    };
    let ok = violations.is_empty();
    Ok(SurgeryReport {
        rows,
        violations,
        t_fit,
        ok,
    })
}

/// Least squares y = a·x + b; returns (a, b, max relative residual).
pub fn affine_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let denom = n * sxx - sx * sx;
    let a = (n * sxy - sx * sy) / denom;
    let b = (sy - a * sx) / n;
    let mut resid: f64 = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let fit = a * xi + b;
        resid = resid.max((fit - yi).abs() / yi.abs().max(1e-300));
    }
    (a, b, resid)
}

// ---------------------------------------------------------------------------
// Continuum counterpart on warped intervals.
// ---------------------------------------------------------------------------

/// Surgery on a warped interval. The collar is [σ−ε, σ+ε]; each side carries
/// the local coordinate u measured from its outer end toward Σ.
#[derive(Debug, Clone)]
pub struct WarpedSurgery {
    base: WarpedInterval,
    sigma: f64,
    cutoff: CutoffProfile,
    params: Option<StretchParams>,
    f_gamma: f64,
}

impl WarpedSurgery {
    /// Interpolate the fibre metric toward the dominating constant warp
    /// f_Γ = max over the collar of f.
    pub fn interpolate(base: WarpedInterval, sigma: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::input("collar width must be positive"));
        }
        if sigma - epsilon < 0.0 || sigma + epsilon > base.length() {
            return Err(Error::input(format!(
                "collar [{}, {}] leaves the interval [0, {}]",
                sigma - epsilon,
                sigma + epsilon,
                base.length()
            )));
        }
        let cutoff = make_cutoff(epsilon)?;
        let h = base.grid_spacing();
        let mut f_gamma: f64 = 0.0;
        let lo = ((sigma - epsilon) / h).floor() as usize;
        let hi = (((sigma + epsilon) / h).ceil() as usize).min(base.samples().len() - 1);
        for i in lo..=hi {
            f_gamma = f_gamma.max(base.samples()[i]);
        }
        Ok(WarpedSurgery {
            base,
            sigma,
            cutoff,
            params: None,
            f_gamma,
        })
    }

    pub fn stretch(mut self, r: f64) -> Result<Self> {
        let params = StretchParams::standard(self.cutoff.epsilon(), r);
        if r < params.ell {
            return Err(Error::input(format!(
                "stretch target R = {r} below ℓ = {}",
                params.ell
            )));
        }
        self.params = Some(params);
        Ok(self)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn epsilon(&self) -> f64 {
        self.cutoff.epsilon()
    }
    pub fn ell(&self) -> f64 {
        self.cutoff.epsilon() / 3.0
    }
    pub fn base(&self) -> &WarpedInterval {
        &self.base
    }

    /// Collar coordinate of a global parameter t on its side, or None outside.
    pub fn local_u(&self, t: f64) -> Option<f64> {
        let e = self.cutoff.epsilon();
        if t < self.sigma - e || t > self.sigma + e {
            None
        } else if t <= self.sigma {
            Some(t - (self.sigma - e))
        } else {
            Some((self.sigma + e) - t)
        }
    }

    pub fn eta_at(&self, t: f64) -> f64 {
        match self.local_u(t) {
            Some(u) => self.cutoff.eval(u),
            None => 0.0,
        }
    }

    /// Interpolated warp: f̃² = (1−η) f² + η f_Γ².
    pub fn warp_at(&self, t: f64) -> f64 {
        let f = self.base.warp_at(t);
        let eta = self.eta_at(t);
        if eta == 0.0 {
            f
        } else {
            ((1.0 - eta) * f * f + eta * self.f_gamma * self.f_gamma).sqrt()
        }
    }

    pub fn rho_at(&self, t: f64) -> f64 {
        match &self.params {
            None => 1.0,
            Some(p) => {
                let eta = self.eta_at(t);
                let q = p.r / p.ell;
                1.0 + (q * q - 1.0) * eta
            }
        }
    }

    /// Breakpoints of η within [c1, c2] (both sides of the collar).
    fn breakpoints(&self, c1: f64, c2: f64) -> Vec<f64> {
        let e = self.cutoff.epsilon();
        let mut pts = vec![c1, c2];
        for frac in [0.0, 0.25, 1.0 / 3.0, 2.0 / 3.0, 0.75, 1.0] {
            for t in [
                self.sigma - e + frac * e, // minus side: u = frac·ε at this t
                self.sigma + e - frac * e, // plus side
            ] {
                if t > c1 && t < c2 {
                    pts.push(t);
                }
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }

    /// ∫ √ρ dt over [c1, c2]. Pieces where η is constant integrate in closed
    /// form; transition pieces use Gauss-Legendre quadrature.
    pub fn longitudinal_distance(&self, c1: f64, c2: f64) -> f64 {
        if c2 <= c1 {
            return 0.0;
        }
        if self.params.is_none() {
            return c2 - c1;
        }
        let mut total = 0.0;
        let pts = self.breakpoints(c1, c2);
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let eta_a = self.eta_at(a);
            let eta_b = self.eta_at(b);
            let eta_m = self.eta_at(mid);
            if eta_a == eta_m && eta_b == eta_m {
                // constant η on this piece: exact
                total += self.rho_at(mid).sqrt() * (b - a);
            } else {
                total += gauss_legendre(a, b, |t| self.rho_at(t).sqrt());
            }
        }
        total
    }

    /// Plateau span {η = 1} of one side in global coordinates.
    pub fn cylinder_span(&self, side: crate::geometry::CollarSide) -> (f64, f64) {
        use crate::geometry::CollarSide;
        let e = self.cutoff.epsilon();
        match side {
            CollarSide::Minus => (self.sigma - e + e / 3.0, self.sigma - e + 2.0 * e / 3.0),
            CollarSide::Plus => (self.sigma + e - 2.0 * e / 3.0, self.sigma + e - e / 3.0),
        }
    }

    /// Distance across one cylinder; equals R exactly after a stretch.
    pub fn cylinder_distance(&self, side: crate::geometry::CollarSide) -> f64 {
        let (a, b) = self.cylinder_span(side);
        self.longitudinal_distance(a, b)
    }

    /// Measurements under the surgered metric: fibre areas use the
    /// interpolated warp, the slab volume integrates ω_n f̃ⁿ √ρ, and the
    /// distance integrates √ρ.
    pub fn measurements(&self, c1: f64, c2: f64) -> Result<WarpedMeasurements> {
        if c1 > c2 {
            return Err(Error::input(format!("c1 = {c1} exceeds c2 = {c2}")));
        }
        let omega = unit_sphere_area(self.base.fibre_dim());
        let n = self.base.fibre_dim() as i32;
        let pts = self.breakpoints(c1, c2);
        let mut volume = 0.0;
        for w in pts.windows(2) {
            volume += self
                .base
                .trapezoid(w[0], w[1], |t| self.warp_at(t).powi(n) * self.rho_at(t).sqrt());
        }
        Ok(WarpedMeasurements {
            area_start: omega * self.warp_at(c1).powi(n),
            area_end: omega * self.warp_at(c2).powi(n),
            volume: omega * volume,
            distance: self.longitudinal_distance(c1, c2),
        })
    }
}

/// 16-point Gauss-Legendre quadrature on [a, b].
fn gauss_legendre(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    const X: [f64; 8] = [
        0.0950125098376374,
        0.2816035507792589,
        0.4580167776572274,
        0.6178762444026438,
        0.7554044083550030,
        0.8656312023878318,
        0.9445750230732326,
        0.9894009349916499,
    ];
    const W: [f64; 8] = [
        0.1894506104550685,
        0.1826034150449236,
        0.1691565193950025,
        0.1495959888165767,
        0.1246289712555339,
        0.0951585116824928,
        0.0622535239386479,
        0.0271524594117541,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..8 {
        s += W[i] * (f(c + h * X[i]) + f(c - h * X[i]));
    }
    s * h
}
