//! End-to-end stretching experiments: build geometry, apply the surgery
//! pipeline across an R-sweep, solve the volume-constrained problem at
//! Vol(Ω), and record when the minimizer's boundary becomes Σ.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::io;
use crate::geometry::{fixtures, Collar, Cycle, Region, TriangulatedSurface};
use crate::solver::{self, IsoPoint, SolverSettings};
use crate::surgery::{self, CutoffProfile, StretchParams, SurgeredMetric};

// ---------------------------------------------------------------------------
// Configuration (TOML sections [geometry], [surgery], [solver], [output]).
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometryConfig,
    pub surgery: SurgeryConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// "dumbbell", "triangle-cap-dumbbell", "balloon-dumbbell" or "mesh".
    pub kind: String,
    pub neck_fibre_size: Option<f64>,
    pub neck_bands: Option<usize>,
    pub cap_resolution: Option<usize>,
    pub cap_lateral: Option<f64>,
    pub string_ratio: Option<f64>,
    pub outer_gap: Option<f64>,
    pub inner_gap: Option<f64>,
    /// Mesh file (.off or .json) when kind = "mesh".
    pub path: Option<PathBuf>,
    /// Σ cycle JSON (vertex pairs) when kind = "mesh".
    pub sigma_path: Option<PathBuf>,
    /// Competitor ring for the volume-constrained-minimiser mode: Σ̃ is the
    /// collar ring this many bands away from Σ (signed).
    pub competitor_ring_offset: Option<i64>,
}

fn default_epsilon() -> f64 {
    3.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurgeryConfig {
    /// Per-side collar width ε; built dumbbells realize it, loaded meshes must
    /// match it.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    pub r_list: Vec<f64>,
    /// Optional expected collar band count (validated when present).
    pub band_count: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub volume_tolerance: Option<f64>,
    pub brute_cap: Option<usize>,
    pub repair_budget: Option<usize>,
    /// Cross-validate against exhaustive search when under the cap.
    pub certify: Option<bool>,
}

impl SolverConfig {
    pub fn settings(&self) -> SolverSettings {
        let mut s = SolverSettings::default();
        s.volume_tolerance = self.volume_tolerance;
        if let Some(c) = self.brute_cap {
            s.brute_cap = c;
        }
        if let Some(b) = self.repair_budget {
            s.repair_budget = b;
        }
        if let Some(c) = self.certify {
            s.cross_validate = c;
        }
        s
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_csv_name")]
    pub csv: String,
    #[serde(default = "default_summary_name")]
    pub summary: String,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_csv_name() -> String {
    "experiment.csv".to_string()
}
fn default_summary_name() -> String {
    "summary.json".to_string()
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: default_out_dir(),
            csv: default_csv_name(),
            summary: default_summary_name(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::format(format!("config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }
}

/// Geometry realized from a config: the surface, Σ and the collar.
pub struct Geometry {
    pub surface: TriangulatedSurface,
    pub sigma: Cycle,
    pub collar: Collar,
}

pub fn build_geometry(config: &ExperimentConfig) -> Result<Geometry> {
    let g = &config.geometry;
    let eps = config.surgery.epsilon;
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::input(format!("geometry.{name} required for kind {}", g.kind)))
    };
    let need_n = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| Error::input(format!("geometry.{name} required for kind {}", g.kind)))
    };
    let d = match g.kind.as_str() {
        "dumbbell" => fixtures::dumbbell_with(
            need(g.neck_fibre_size, "neck_fibre_size")?,
            need_n(g.neck_bands, "neck_bands")?,
            need_n(g.cap_resolution, "cap_resolution")?,
            eps,
            g.cap_lateral.unwrap_or(1.0),
        )?,
        "triangle-cap-dumbbell" => fixtures::triangle_cap_dumbbell(
            need(g.neck_fibre_size, "neck_fibre_size")?,
            need_n(g.neck_bands, "neck_bands")?,
            eps,
        )?,
        "uneven-dumbbell" => {
            let outer = g.outer_gap.unwrap_or(2.5);
            let inner = g.inner_gap.unwrap_or(eps - outer);
            fixtures::uneven_dumbbell(need(g.neck_fibre_size, "neck_fibre_size")?, outer, inner)?
        }
        "balloon-dumbbell" => fixtures::balloon_dumbbell(
            need(g.neck_fibre_size, "neck_fibre_size")?,
            need_n(g.neck_bands, "neck_bands")?,
            need_n(g.cap_resolution, "cap_resolution")?,
            g.string_ratio.unwrap_or(0.6),
            eps,
            g.cap_lateral.unwrap_or(1.0),
        )?,
        "mesh" => {
            let path = g
                .path
                .as_ref()
                .ok_or_else(|| Error::input("geometry.path required for kind mesh"))?;
            let surface = io::load_mesh(path)?;
            let sigma_path = g
                .sigma_path
                .as_ref()
                .ok_or_else(|| Error::input("geometry.sigma_path required for kind mesh"))?;
            let sigma = io::cycle_from_json(&surface, &std::fs::read_to_string(sigma_path)?)?;
            let collar = Collar::around(&surface, &sigma)?;
            if (collar.epsilon() - eps).abs() > 1e-6 * eps.max(1.0) {
                return Err(Error::input(format!(
                    "configured epsilon {} does not match the detected collar width {}",
                    eps,
                    collar.epsilon()
                )));
            }
            fixtures::Dumbbell {
                surface,
                sigma,
                collar,
            }
        }
        other => return Err(Error::input(format!("unknown geometry kind {other:?}"))),
    };
    if let Some(expected) = config.surgery.band_count {
        if d.collar.ring_count() != expected {
            return Err(Error::input(format!(
                "collar has {} rings, config expects {expected}",
                d.collar.ring_count()
            )));
        }
    }
    Ok(Geometry {
        surface: d.surface,
        sigma: d.sigma,
        collar: d.collar,
    })
}

// ---------------------------------------------------------------------------
// Records.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub r: f64,
    /// Per_{g_R}(Ω): the property-1 subject.
    pub per_sigma: f64,
    /// Perimeter of the target region (equals per_sigma in sweep mode).
    pub per_target: f64,
    /// Solve target Vol_{g_R}(Ω) (or of Ω̃ in vcm mode).
    pub vol_target: f64,
    pub vol_omega: f64,
    pub vol_complement: f64,
    pub vol_t: f64,
    pub vol_not_t: f64,
    pub solver_volume: f64,
    pub solver_perimeter: f64,
    pub solver_method: solver::Method,
    pub solver_certified: bool,
    /// Exact edge-set equality of the minimizer's boundary with the target cycle.
    pub boundary_matches: bool,
    pub component_count: usize,
    pub delta: f64,
    pub diameter: f64,
    pub c_per_component: f64,
    pub complement_bound: f64,
    pub dichotomy_ok: bool,
    pub property1_ok: bool,
    /// vcm mode: measured |Σ̃| − |Σ| in g_R.
    pub area_gap: Option<f64>,
    /// vcm mode: the measured minimum boundary-component length of the
    /// Σ-problem minimizer at Vol(Ω), gating the area-gap precondition.
    pub gate_delta: Option<f64>,
    /// vcm rows failing the area-gap precondition are skipped, with the reason.
    pub skipped: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRecord {
    pub mode: String,
    pub rows: Vec<ExperimentRow>,
    /// First R from which the boundary is Σ for every larger tested R.
    pub r_star: Option<f64>,
    /// Property-1 failure anywhere marks the record invalid.
    pub invalid: bool,
    pub violations: Vec<String>,
    pub epsilon: f64,
    pub ell: f64,
    pub eta_spec: String,
}

impl ExperimentRecord {
    pub fn ok(&self) -> bool {
        !self.invalid && self.violations.is_empty() && self.rows.iter().all(|r| r.error.is_none())
    }
}

// ---------------------------------------------------------------------------
// Experiment driver.
// ---------------------------------------------------------------------------

/// Side of Σ designated as Ω: the component containing the smallest face index.
pub fn omega_side(surface: &TriangulatedSurface, sigma: &Cycle) -> Result<Region> {
    let (sep, a, b) = surface.separates(sigma)?;
    if !sep {
        return Err(Error::Structure("Σ does not separate the mesh".into()));
    }
    let fa = a.faces().first().copied().unwrap_or(usize::MAX);
    let fb = b.faces().first().copied().unwrap_or(usize::MAX);
    Ok(if fa < fb { a } else { b })
}

/// Measured per-component volume cap C: the largest volume of a metric ball of
/// radius `d` centred at a collar vertex (faces touching the ball count whole).
pub fn measured_ball_cap(
    surface: &TriangulatedSurface,
    collar: &Collar,
    d: f64,
) -> f64 {
    let verts = collar.all_vertices();
    verts
        .par_iter()
        .map(|&v| {
            let dist = surface.vertex_distances(&[v]);
            let mut vol = 0.0;
            for f in 0..surface.face_count() {
                if surface.faces()[f].iter().any(|&w| dist[w] <= d) {
                    vol += surface.face_area(f);
                }
            }
            vol
        })
        .reduce(|| 0.0, f64::max)
}

fn prepare(geometry: &Geometry, config: &ExperimentConfig) -> Result<(CutoffProfile, SurgeredMetric)> {
    let collar = &geometry.collar;
    let cutoff = surgery::make_cutoff(collar.epsilon())?;
    let g_tilde = if collar.is_cylindrical(&geometry.surface) {
        SurgeredMetric::already_cylindrical(&geometry.surface, collar, &cutoff)?
    } else {
        surgery::cylindrical_interpolation(&geometry.surface, collar, &cutoff)?
    };
    let ell = collar.epsilon() / 3.0;
    let rl = &config.surgery.r_list;
    for w in rl.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::input("r_list must be strictly ascending"));
        }
    }
    if let Some(&r0) = rl.first() {
        if r0 < ell * (1.0 - 1e-12) {
            return Err(Error::input(format!("r_list starts below ℓ = {ell}")));
        }
    }
    Ok((cutoff, g_tilde))
}

struct RowInput<'a> {
    cutoff: &'a CutoffProfile,
    g_tilde: &'a SurgeredMetric,
    omega: &'a Region,
    target_region: &'a Region,
    target_cycle: &'a Cycle,
    per_omega_base: f64,
    settings: &'a SolverSettings,
    vcm_sigma: Option<&'a Cycle>,
}

fn run_row(inp: &RowInput, r: f64) -> ExperimentRow {
    let blank = |err: Option<String>| ExperimentRow {
        r,
        per_sigma: f64::NAN,
        per_target: f64::NAN,
        vol_target: f64::NAN,
        vol_omega: f64::NAN,
        vol_complement: f64::NAN,
        vol_t: f64::NAN,
        vol_not_t: f64::NAN,
        solver_volume: f64::NAN,
        solver_perimeter: f64::NAN,
        solver_method: solver::Method::MinCut,
        solver_certified: false,
        boundary_matches: false,
        component_count: 0,
        delta: f64::NAN,
        diameter: f64::NAN,
        c_per_component: f64::NAN,
        complement_bound: f64::NAN,
        dichotomy_ok: true,
        property1_ok: false,
        area_gap: None,
        gate_delta: None,
        skipped: None,
        error: err,
    };

    let compute = || -> Result<ExperimentRow> {
        let ell = inp.g_tilde.ell();
        let params = StretchParams { r, ell };
        let metric = surgery::stretch(inp.g_tilde, &params, inp.cutoff)?;
        let s = metric.surface();
        let per_sigma = s.perimeter(inp.omega)?;
        let per_target = s.perimeter(inp.target_region)?;
        let vol_target = s.volume(inp.target_region)?;
        let vol_omega = s.volume(inp.omega)?;
        let vol_complement = s.volume(&inp.omega.complement(s))?;
        let t = metric.cylinder_region();
        let vol_t = s.volume(t)?;
        let vol_not_t = s.volume(&t.complement(s))?;

        let solved: IsoPoint = solver::constrained_min_at_volume(s, vol_target, inp.settings)?;
        let boundary = Cycle::boundary_of(s, &solved.region)?;
        let boundary_matches = boundary == *inp.target_cycle;

        let comps = s.boundary_components(&solved.region)?;
        let diameter = comps.iter().map(|c| c.diameter).fold(0.0f64, f64::max);
        let c_per_component = measured_ball_cap(s, metric.collar(), diameter);
        let bounds = solver::bounds_report(s, &solved, t, c_per_component)?;
        // the comparison argument: a minimizer whose boundary avoids Σ's class
        // must have one small side
        let dichotomy_ok = boundary_matches || !bounds.exceeds_bound;

        let property1_ok = per_sigma.to_bits() == inp.per_omega_base.to_bits();

        // vcm gate: |Σ̃| < |Σ| + δ, with δ measured as the smallest boundary
        // component of the Σ-problem minimizer at Vol(Ω) under the same
        // metric.
        let (area_gap, gate_delta, skipped) = match inp.vcm_sigma {
            None => (None, None, None),
            Some(sigma) => {
                let gap = per_target - sigma.total_length(s);
                let omega_solve = solver::constrained_min_at_volume(s, vol_omega, inp.settings)?;
                let comps = s.boundary_components(&omega_solve.region)?;
                let delta = comps
                    .iter()
                    .map(|c| c.length)
                    .fold(f64::INFINITY, f64::min);
                let skipped = if gap >= delta {
                    Some(format!(
                        "area gap {gap} is not below the measured delta {delta}"
                    ))
                } else {
                    None
                };
                (Some(gap), Some(delta), skipped)
            }
        };

        Ok(ExperimentRow {
            r,
            per_sigma,
            per_target,
            vol_target,
            vol_omega,
            vol_complement,
            vol_t,
            vol_not_t,
            solver_volume: solved.volume,
            solver_perimeter: solved.perimeter,
            solver_method: solved.method,
            solver_certified: solved.certified_optimal,
            boundary_matches,
            component_count: bounds.component_count,
            delta: bounds.delta,
            diameter: bounds.diameter,
            c_per_component,
            complement_bound: bounds.complement_bound,
            dichotomy_ok,
            property1_ok,
            area_gap,
            gate_delta,
            skipped,
            error: None,
        })
    };
    compute().unwrap_or_else(|e| blank(Some(e.to_string())))
}

fn finish_record(
    mode: &str,
    rows: Vec<ExperimentRow>,
    geometry: &Geometry,
    cutoff: &CutoffProfile,
) -> ExperimentRecord {
    let mut violations = Vec::new();
    let mut invalid = false;
    let active: Vec<&ExperimentRow> = rows
        .iter()
        .filter(|r| r.error.is_none() && r.skipped.is_none())
        .collect();
    for row in &active {
        if !row.property1_ok {
            invalid = true;
            violations.push(format!("property 1 fails at R = {}", row.r));
        }
        if !row.dichotomy_ok {
            violations.push(format!(
                "anomaly at R = {}: boundary differs from the target but both sides exceed the complement bound",
                row.r
            ));
        }
        let total = row.vol_omega + row.vol_complement;
        let direct = row.vol_t + row.vol_not_t;
        if (total - direct).abs() > 1e-9 * total.abs().max(1.0) {
            violations.push(format!("volume bookkeeping off at R = {}", row.r));
        }
    }
    for pair in active.windows(2) {
        if pair[0].vol_not_t.to_bits() != pair[1].vol_not_t.to_bits() {
            violations.push(format!(
                "Vol(M∖T) changed between R = {} and R = {}",
                pair[0].r, pair[1].r
            ));
        }
    }
    // threshold monotonicity: once the boundary is the target, it stays so
    let mut seen_match = false;
    for row in &active {
        if seen_match && !row.boundary_matches {
            violations.push(format!(
                "boundary stopped matching at R = {} after matching at a smaller R",
                row.r
            ));
        }
        seen_match |= row.boundary_matches;
    }
    let r_star = active
        .iter()
        .rev()
        .take_while(|r| r.boundary_matches)
        .last()
        .map(|r| r.r);
    ExperimentRecord {
        mode: mode.to_string(),
        rows,
        r_star,
        invalid,
        violations,
        epsilon: geometry.collar.epsilon(),
        ell: geometry.collar.epsilon() / 3.0,
        eta_spec: cutoff.spec_string(),
    }
}

/// The stretching experiment: solve at Vol_{g_R}(Ω) across the R-sweep and
/// report the empirical threshold R* from which the minimizer's boundary is Σ.
pub fn run_stretch_experiment(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let geometry = build_geometry(config)?;
    let (cutoff, g_tilde) = prepare(&geometry, config)?;
    let omega = omega_side(&geometry.surface, &geometry.sigma)?;
    let per_omega_base = geometry.surface.perimeter(&omega)?;
    let settings = config.solver.settings();
    let inp = RowInput {
        cutoff: &cutoff,
        g_tilde: &g_tilde,
        omega: &omega,
        target_region: &omega,
        target_cycle: &geometry.sigma,
        per_omega_base,
        settings: &settings,
        vcm_sigma: None,
    };
    let rows: Vec<ExperimentRow> = config
        .surgery
        .r_list
        .par_iter()
        .map(|&r| run_row(&inp, r))
        .collect();
    Ok(finish_record("sweep", rows, &geometry, &cutoff))
}

/// The volume-constrained-minimiser experiment: solve at Vol_{g_R}(Ω̃) for a
/// competitor ring Σ̃ inside the collar, gating each row on the measured
/// area-gap condition.
pub fn run_vcm_experiment(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let geometry = build_geometry(config)?;
    let offset = config
        .geometry
        .competitor_ring_offset
        .ok_or_else(|| Error::input("vcm mode needs geometry.competitor_ring_offset"))?;
    let collar = &geometry.collar;
    let idx = collar.sigma_index() as i64 + offset;
    if idx <= 0 || idx as usize >= collar.ring_count() - 1 {
        return Err(Error::input(format!(
            "competitor ring offset {offset} leaves the collar interior"
        )));
    }
    let sigma_tilde = collar.ring_cycle(idx as usize);
    // homologous to Σ in the collar: both rim rings on opposite sides
    let (sep, _, _) = geometry.surface.separates(&sigma_tilde)?;
    if !sep {
        return Err(Error::Structure("competitor cycle does not separate".into()));
    }

    let (cutoff, g_tilde) = prepare(&geometry, config)?;
    let omega = omega_side(&geometry.surface, &geometry.sigma)?;
    let omega_tilde = omega_side(&geometry.surface, &sigma_tilde)?;
    let per_omega_base = geometry.surface.perimeter(&omega)?;
    let settings = config.solver.settings();
    let inp = RowInput {
        cutoff: &cutoff,
        g_tilde: &g_tilde,
        omega: &omega,
        target_region: &omega_tilde,
        target_cycle: &sigma_tilde,
        per_omega_base,
        settings: &settings,
        vcm_sigma: Some(&geometry.sigma),
    };
    let rows: Vec<ExperimentRow> = config
        .surgery
        .r_list
        .par_iter()
        .map(|&r| run_row(&inp, r))
        .collect();
    Ok(finish_record("vcm", rows, &geometry, &cutoff))
}

// ---------------------------------------------------------------------------
// Reporting.
// ---------------------------------------------------------------------------

fn fmt_opt(v: &Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v}")
    }
}

pub const CSV_HEADER: &str = "r,per_sigma,per_target,vol_target,vol_omega,vol_complement,vol_t,vol_not_t,solver_volume,solver_perimeter,solver_method,solver_certified,boundary_matches,components,delta,diameter,c_per_component,complement_bound,dichotomy_ok,property1_ok,area_gap,gate_delta,skipped,error";

pub fn record_to_csv(record: &ExperimentRecord) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &record.rows {
        let cells = [
            fmt_f64(row.r),
            fmt_f64(row.per_sigma),
            fmt_f64(row.per_target),
            fmt_f64(row.vol_target),
            fmt_f64(row.vol_omega),
            fmt_f64(row.vol_complement),
            fmt_f64(row.vol_t),
            fmt_f64(row.vol_not_t),
            fmt_f64(row.solver_volume),
            fmt_f64(row.solver_perimeter),
            row.solver_method.to_string(),
            row.solver_certified.to_string(),
            row.boundary_matches.to_string(),
            row.component_count.to_string(),
            fmt_f64(row.delta),
            fmt_f64(row.diameter),
            fmt_f64(row.c_per_component),
            fmt_f64(row.complement_bound),
            row.dichotomy_ok.to_string(),
            row.property1_ok.to_string(),
            fmt_opt(&row.area_gap),
            fmt_opt(&row.gate_delta),
            row.skipped.clone().unwrap_or_default().replace(',', ";"),
            row.error.clone().unwrap_or_default().replace(',', ";"),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Summary<'a> {
    mode: &'a str,
    ok: bool,
    invalid: bool,
    r_star: Option<f64>,
    violations: &'a [String],
    epsilon: f64,
    ell: f64,
    eta_spec: &'a str,
    rows: usize,
    config: &'a ExperimentConfig,
}

/// Write the per-R CSV and the JSON summary (config echo and provenance
/// included); output bytes are a deterministic function of the record.
pub fn emit_report(
    record: &ExperimentRecord,
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(&config.output.csv);
    std::fs::write(&csv_path, record_to_csv(record))?;
    let summary = Summary {
        mode: &record.mode,
        ok: record.ok(),
        invalid: record.invalid,
        r_star: record.r_star,
        violations: &record.violations,
        epsilon: record.epsilon,
        ell: record.ell,
        eta_spec: &record.eta_spec,
        rows: record.rows.len(),
        config,
    };
    let mut text = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::format(format!("summary: {e}")))?;
    text.push('\n');
    let summary_path = out_dir.join(&config.output.summary);
    std::fs::write(&summary_path, text)?;
    Ok((csv_path, summary_path))
}

/// Apply the surgery for each R in the config and export the results in the
/// JSON mesh schema with a provenance block.
pub fn export_surgered_meshes(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let geometry = build_geometry(config)?;
    let (cutoff, g_tilde) = prepare(&geometry, config)?;
    std::fs::create_dir_all(out_dir)?;
    let mut paths = Vec::new();
    for &r in &config.surgery.r_list {
        let params = StretchParams {
            r,
            ell: g_tilde.ell(),
        };
        let metric = surgery::stretch(&g_tilde, &params, &cutoff)?;
        let provenance = io::Provenance {
            epsilon: metric.epsilon(),
            ell: metric.ell(),
            r,
            eta_spec: cutoff.spec_string(),
        };
        let path = out_dir.join(format!("surgered_r{r}.json"));
        io::save_mesh_json(metric.surface(), Some(provenance), &path)?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coarse_config(r_list: Vec<f64>) -> ExperimentConfig {
        ExperimentConfig {
            geometry: GeometryConfig {
                kind: "dumbbell".into(),
                neck_fibre_size: Some(0.5),
                neck_bands: Some(3),
                cap_resolution: Some(3),
                cap_lateral: None,
                string_ratio: None,
                outer_gap: None,
                inner_gap: None,
                path: None,
                sigma_path: None,
                competitor_ring_offset: None,
            },
            surgery: SurgeryConfig {
                epsilon: 3.0,
                r_list,
                band_count: None,
            },
            solver: SolverConfig::default(),
            output: OutputConfig::default(),
        }
    }

    #[test]
    fn config_roundtrip() {
        let text = r#"
[geometry]
kind = "dumbbell"
neck_fibre_size = 0.5
neck_bands = 13
cap_resolution = 6

[surgery]
epsilon = 3.0
r_list = [1.0, 2.0, 4.0]

[solver]
brute_cap = 20

[output]
dir = "out"
"#;
        let cfg = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.surgery.r_list.len(), 3);
        assert_eq!(cfg.solver.brute_cap, Some(20));
        assert!(ExperimentConfig::from_toml_str("[geometry]\nbogus = 1").is_err());
    }

    #[test]
    fn stretch_experiment_on_coarse_dumbbell() {
        let cfg = coarse_config(vec![1.0, 2.0, 4.0]);
        let record = run_stretch_experiment(&cfg).unwrap();
        assert!(record.ok(), "violations: {:?}", record.violations);
        assert_eq!(record.rows.len(), 3);
        for row in &record.rows {
            assert!(row.property1_ok);
            assert!(row.boundary_matches, "R = {}", row.r);
            assert!(row.solver_certified);
        }
        assert_eq!(record.r_star, Some(1.0));
    }

    #[test]
    fn descending_r_list_rejected() {
        let cfg = coarse_config(vec![2.0, 1.0]);
        assert!(run_stretch_experiment(&cfg).is_err());
        let cfg = coarse_config(vec![0.5]);
        assert!(run_stretch_experiment(&cfg).is_err());
    }

    #[test]
    fn emit_is_deterministic() {
        let cfg = coarse_config(vec![1.0, 2.0]);
        let record = run_stretch_experiment(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (c1, s1) = emit_report(&record, &cfg, dir.path()).unwrap();
        let csv1 = std::fs::read(&c1).unwrap();
        let sum1 = std::fs::read(&s1).unwrap();
        let record2 = run_stretch_experiment(&cfg).unwrap();
        let (c2, s2) = emit_report(&record2, &cfg, dir.path()).unwrap();
        assert_eq!(csv1, std::fs::read(&c2).unwrap());
        assert_eq!(sum1, std::fs::read(&s2).unwrap());
    }

    #[test]
    fn empty_r_list_gives_header_only_csv() {
        let cfg = coarse_config(vec![]);
        let record = run_stretch_experiment(&cfg).unwrap();
        let csv = record_to_csv(&record);
        assert_eq!(csv.lines().count(), 1);
        assert!(csv.starts_with("r,per_sigma"));
    }

    #[test]
    fn surgery_export_carries_provenance() {
        let cfg = coarse_config(vec![2.0]);
        let dir = tempfile::tempdir().unwrap();
        let paths = export_surgered_meshes(&cfg, dir.path()).unwrap();
        assert_eq!(paths.len(), 1);
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let json: io::MeshJson = serde_json::from_str(&text).unwrap();
        let prov = json.provenance.clone().unwrap();
        assert_eq!(prov.r, 2.0);
        assert_eq!(prov.ell, 1.0);
        let loaded = io::mesh_from_json(&json).unwrap();
        assert_eq!(loaded.face_count(), 18);
    }
}
