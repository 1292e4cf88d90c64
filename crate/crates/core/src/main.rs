use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stretchlab::cones;
use stretchlab::conformal;
use stretchlab::geometry::{io, WarpedInterval};
use stretchlab::harness::{self, ExperimentConfig};
use stretchlab::solver::{self, SolverSettings};

#[derive(Parser)]
#[command(name = "stretchlab", version, about = "Discrete-geometry laboratory for metric stretching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the volume-constrained perimeter minimisation on a mesh.
    Solve {
        /// Mesh file (.off or .json).
        #[arg(long)]
        mesh: PathBuf,
        /// Target enclosed volume (ignored when --lambda-grid is given).
        #[arg(long)]
        volume: Option<f64>,
        /// Comma-separated λ values: run the Lagrangian sweep instead.
        #[arg(long)]
        lambda_grid: Option<String>,
        /// Volume tolerance (default: half the smallest face area).
        #[arg(long)]
        tolerance: Option<f64>,
        /// Cross-validate against exhaustive search when under the cap.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        certify: bool,
        /// Exhaustive-search face cap.
        #[arg(long, default_value_t = 24)]
        brute_cap: usize,
        /// Write the point records as CSV here (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the solved region as a JSON face-index list.
        #[arg(long)]
        region_out: Option<PathBuf>,
    },
    /// Apply the surgery pipeline and export the surgered meshes.
    Surgery {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the full stretching experiment over the configured R-sweep.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the volume-constrained-minimiser variant with a competitor ring.
    Vcm {
        #[arg(long)]
        config: PathBuf,
    },
    /// Classify minimal hypercones over products of spheres.
    Cones {
        /// Classify all 1 ≤ p ≤ q with p + q ≤ this bound.
        #[arg(long, default_value_t = 12)]
        max_sum: usize,
        /// JSON file with explicit cone specs (a list of MinimalCone records);
        /// overrides the (p, q) grid.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Number of link eigenvalues per cone.
        #[arg(long, default_value_t = 8)]
        modes: usize,
        /// Also cross-check the Clifford-torus link numerically.
        #[arg(long, default_value_t = false)]
        clifford_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conformal transformation laws vs finite-difference recomputation.
    ConformalCheck {
        /// Grid spacing for the warped-model samples.
        #[arg(long, default_value_t = 1e-3)]
        grid: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(path: &Option<PathBuf>, text: &str) -> stretchlab::Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(p, text)?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn point_csv(surface: &stretchlab::geometry::TriangulatedSurface, points: &[solver::IsoPoint]) -> String {
    let mut out = String::from("volume,perimeter,certified,method,component_count\n");
    for p in points {
        let comps = surface
            .boundary_components(&p.region)
            .map(|c| c.len())
            .unwrap_or(0);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.volume, p.perimeter, p.certified_optimal, p.method, comps
        ));
    }
    out
}

fn run_solve(
    mesh: PathBuf,
    volume: Option<f64>,
    lambda_grid: Option<String>,
    tolerance: Option<f64>,
    certify: bool,
    brute_cap: usize,
    out: Option<PathBuf>,
    region_out: Option<PathBuf>,
) -> stretchlab::Result<()> {
    let surface = io::load_mesh(&mesh)?;
    let settings = SolverSettings {
        volume_tolerance: tolerance,
        brute_cap,
        cross_validate: certify,
        ..SolverSettings::default()
    };
    let points = if let Some(grid) = lambda_grid {
        let lambdas: Vec<f64> = grid
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| stretchlab::Error::Input(format!("bad λ {s:?}: {e}")))
            })
            .collect::<stretchlab::Result<_>>()?;
        solver::mincut_sweep(&surface, &lambdas)?
    } else {
        let v = volume.ok_or_else(|| {
            stretchlab::Error::Input("--volume or --lambda-grid is required".into())
        })?;
        vec![solver::constrained_min_at_volume(&surface, v, &settings)?]
    };
    write_out(&out, &point_csv(&surface, &points))?;
    if let Some(rp) = region_out {
        let mut text = io::region_to_json(&points.last().unwrap().region);
        text.push('\n');
        std::fs::write(rp, text)?;
    }
    Ok(())
}

fn run_cones(
    max_sum: usize,
    modes: usize,
    spec_path: Option<PathBuf>,
    clifford_check: bool,
    out: Option<PathBuf>,
) -> stretchlab::Result<()> {
    let cone_list: Vec<cones::MinimalCone> = match spec_path {
        Some(path) => {
            let text = std::fs::read_to_string(&path)?;
            serde_json::from_str(&text)
                .map_err(|e| stretchlab::Error::Format(format!("{}: {e}", path.display())))?
        }
        None => {
            let mut list = Vec::new();
            for q in 1..max_sum {
                for p in 1..=q {
                    if p + q <= max_sum {
                        list.push(cones::MinimalCone::product(p, q));
                    }
                }
            }
            list
        }
    };
    let mut text = String::from("p,q,n,mu_1,threshold,class,gamma_minus_1,gamma_plus_1\n");
    for cone in &cone_list {
        let cones::LinkSpec::ProductOfSpheres { p, q } = cone.link else {
            return Err(stretchlab::Error::Input(
                "cone specs must use product-of-spheres links".into(),
            ));
        };
        let spec = cones::product_link_spectrum(p, q, modes)?;
        let verdict = cones::classify_stability(cone, &spec)?;
        let (gm, gp) = verdict
            .radial_exponents
            .iter()
            .find(|e| e.mode == 0)
            .map(|e| (format!("{}", e.gamma_minus), format!("{}", e.gamma_plus)))
            .unwrap_or_default();
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            p,
            q,
            p + q + 1,
            verdict.mu_1,
            verdict.threshold,
            verdict.class,
            gm,
            gp
        ));
    }
    write_out(&out, &text)?;
    if clifford_check {
        let link = cones::clifford_torus_link(16)?;
        let numeric = cones::meshed_link_spectrum(&link, 1)?;
        let closed = cones::product_link_spectrum(1, 1, 1)?;
        eprintln!(
            "clifford-link check: numeric mu_1 = {}, closed form = {}, |diff| = {:e}",
            numeric.eigenvalues[0],
            closed.eigenvalues[0],
            (numeric.eigenvalues[0] - closed.eigenvalues[0]).abs()
        );
    }
    Ok(())
}

struct ConformalCase {
    name: &'static str,
    interval: WarpedInterval,
    sigma: f64,
}

fn conformal_cases(grid: f64) -> stretchlab::Result<Vec<ConformalCase>> {
    let cells = |len: f64| ((len / grid).round() as usize).max(16);
    Ok(vec![
        ConformalCase {
            name: "sphere",
            interval: WarpedInterval::from_fn(
                std::f64::consts::PI,
                1,
                cells(std::f64::consts::PI),
                (true, true),
                f64::sin,
            )?,
            sigma: 1.0,
        },
        ConformalCase {
            name: "cylinder",
            interval: WarpedInterval::from_fn(2.0, 1, cells(2.0), (false, false), |_| 1.0)?,
            sigma: 1.0,
        },
        ConformalCase {
            name: "neck",
            interval: WarpedInterval::from_fn(2.0, 1, cells(2.0), (false, false), |t| {
                (t - 1.0).cosh()
            })?,
            sigma: 1.0,
        },
    ])
}

fn run_conformal_check(grid: f64, out: Option<PathBuf>) -> stretchlab::Result<()> {
    let mut text = String::from("case,quantity,formula,finite_difference,residual\n");
    for case in conformal_cases(grid)? {
        let w = &case.interval;
        // snap Σ onto the sample grid
        let sigma = w.grid_spacing() * (case.sigma / w.grid_spacing()).round();
        // generic smooth factor for the mean-curvature law
        let phi = conformal::sampled_profile_factor(w, sigma, 0.35, |s| {
            0.3 * (1.0 - s) * s.sin().cos()
        });
        let h_g = conformal::warped_mean_curvature(w, sigma);
        let i0 = (sigma / w.grid_spacing()).round() as usize;
        let formula_h = conformal::conformal_mean_curvature(
            h_g,
            phi.values[i0],
            phi.normal_derivative_at_sigma[0],
        );
        let fd_h = conformal::fd_mean_curvature_perturbed(w, &phi, sigma);
        text.push_str(&format!(
            "{},mean_curvature,{},{},{:e}\n",
            case.name,
            formula_h,
            fd_h,
            (formula_h - fd_h).abs()
        ));

        // f2-type factor for the normal-Ricci law
        let f2 = conformal::sampled_profile_factor(w, sigma, 0.35, |s| 0.3 * s * s);
        let formula_k = conformal::conformal_ricci_normal_warped(w, sigma, &f2, true)?;
        let fd_k = conformal::fd_gauss_curvature_perturbed(w, &f2, sigma);
        text.push_str(&format!(
            "{},ricci_normal,{},{},{:e}\n",
            case.name,
            formula_k,
            fd_k,
            (formula_k - fd_k).abs()
        ));
    }
    write_out(&out, &text)
}

fn run() -> stretchlab::Result<ExitCode> {
    stretchlab::init_thread_pool_from_env();
    let cli = Cli::parse();
    match cli.command {
        Command::Solve {
            mesh,
            volume,
            lambda_grid,
            tolerance,
            certify,
            brute_cap,
            out,
            region_out,
        } => {
            run_solve(
                mesh,
                volume,
                lambda_grid,
                tolerance,
                certify,
                brute_cap,
                out,
                region_out,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Surgery { config, out_dir } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let dir = out_dir.unwrap_or_else(|| cfg.output.dir.clone());
            let paths = harness::export_surgered_meshes(&cfg, &dir)?;
            for p in paths {
                println!("{}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let record = harness::run_stretch_experiment(&cfg)?;
            let (csv, summary) = harness::emit_report(&record, &cfg, &cfg.output.dir.clone())?;
            println!("{}", csv.display());
            println!("{}", summary.display());
            Ok(if record.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Vcm { config } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let record = harness::run_vcm_experiment(&cfg)?;
            let (csv, summary) = harness::emit_report(&record, &cfg, &cfg.output.dir.clone())?;
            println!("{}", csv.display());
            println!("{}", summary.display());
            Ok(if record.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Cones {
            max_sum,
            modes,
            spec,
            clifford_check,
            out,
        } => {
            run_cones(max_sum, modes, spec, clifford_check, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ConformalCheck { grid, out } => {
            run_conformal_check(grid, out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
