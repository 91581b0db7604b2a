//! Command-line front end. `run` parses argv, executes one subcommand and
//! returns the process exit code: 0 on success, 1 when a computation fails,
//! 2 for usage errors and unreadable or invalid configs.

mod output;

pub use output::{manifest_path, Artifact, Cell, Csv, RunManifest};

use crate::asymptotics::{asymptote_convergence, liouville_build, liouville_compare, wkb_compare};
use crate::determinant::{eval_sinh_model_scaled, DetSettings, Transmission, DEFAULT_K_MIN};
use crate::error::Error;
use crate::media::{compute_constants, validate_profile, MediumProfile, ProfileSpec, DEFAULT_QUAD_TOL};
use crate::radial_solver::OdeSettings;
use crate::stability::{displacement_vs_eta, track_eigenvalues, Family};
use crate::zero_finder::{find_zeros, sector_density, BoundaryKind, FinderOptions, Rect, Sector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const THREADS_ENV: &str = "ITEP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "itep", version, about = "Interior transmission eigenvalues of spherically symmetric absorbing media")]
struct Cli {
    /// Worker threads (0 = all cores); ITEP_THREADS takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Medium profile in JSON.
    #[arg(long)]
    config: PathBuf,
    /// Relative tolerance of the radial integrator.
    #[arg(long, default_value_t = OdeSettings::default().rel_tol)]
    rel_tol: f64,
    /// Radius of the excluded disk around k = 0.
    #[arg(long, default_value_t = DEFAULT_K_MIN)]
    k_min: f64,
    /// Output file; a manifest is written next to it. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Dirichlet,
    Neumann,
}

impl From<Kind> for BoundaryKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Dirichlet => BoundaryKind::Dirichlet,
            Kind::Neumann => BoundaryKind::Neumann,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print A, B, C, D as JSON.
    Constants {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate D(k) and the sinh model at given points.
    EvalD {
        #[command(flatten)]
        common: Common,
        /// A point `RE,IM`; repeatable.
        #[arg(long = "k", value_parser = parse_complex, allow_hyphen_values = true)]
        k: Vec<Complex64>,
        /// `RE0,IM0:RE1,IM1:N`, N + 1 equally spaced points.
        #[arg(long, value_parser = parse_line, allow_hyphen_values = true)]
        k_line: Vec<Vec<Complex64>>,
    },
    /// Locate all eigenvalues in a rectangle.
    Eigs {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        re_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        re_max: f64,
        #[arg(long, allow_hyphen_values = true)]
        im_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        im_max: f64,
        /// Muller tolerance; default 1e-10·π/(A+B).
        #[arg(long)]
        refine_tol: Option<f64>,
        #[arg(long, default_value_t = 0.2)]
        sector_eps: f64,
        /// Skip the tight-box winding check of each zero.
        #[arg(long)]
        no_verify: bool,
    },
    /// Zero counts in a sector against the predicted density (A+B)/π.
    Density {
        #[command(flatten)]
        common: Common,
        /// Radii, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        r_list: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        center: f64,
        #[arg(long, default_value_t = 0.2)]
        half_width: f64,
        /// Zeros closer to the origin are not counted.
        #[arg(long, default_value_t = 0.5)]
        r_min: f64,
    },
    /// Zeros of y(1;k) or y'(1;k) against their leading asymptotes.
    AsymCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Dirichlet)]
        kind: Kind,
        #[arg(long, default_value_t = 5)]
        j_lo: u32,
        #[arg(long, default_value_t = 40)]
        j_hi: u32,
    },
    /// Radial solution against the two-exponential WKB form along a ray.
    WkbCompare {
        #[command(flatten)]
        common: Common,
        /// |k| values, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        k_abs: Vec<f64>,
        /// arg k of the ray.
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
        arg: f64,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
    },
    /// Liouville-frame solution against the partial sums of its expansion.
    LiouvilleCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long = "k", value_parser = parse_complex, allow_hyphen_values = true)]
        k: Complex64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
        order: u8,
        /// Number of equally spaced ξ in (0, B].
        #[arg(long, default_value_t = 8)]
        xi_points: usize,
    },
    /// Track eigenvalues while γ₁ is scaled by s.
    Stability {
        #[command(flatten)]
        common: Common,
        /// Scale factors, comma separated, starting at 1.
        #[arg(long, value_delimiter = ',', required = true)]
        scale_list: Vec<f64>,
        #[arg(long, default_value_t = 6)]
        num_eigs: usize,
        #[arg(long)]
        refine_tol: Option<f64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Constants { .. } => "constants",
            Command::EvalD { .. } => "eval-d",
            Command::Eigs { .. } => "eigs",
            Command::Density { .. } => "density",
            Command::AsymCheck { .. } => "asym-check",
            Command::WkbCompare { .. } => "wkb-compare",
            Command::LiouvilleCheck { .. } => "liouville-check",
            Command::Stability { .. } => "stability",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Constants { common }
            | Command::EvalD { common, .. }
            | Command::Eigs { common, .. }
            | Command::Density { common, .. }
            | Command::AsymCheck { common, .. }
            | Command::WkbCompare { common, .. }
            | Command::LiouvilleCheck { common, .. }
            | Command::Stability { common, .. } => common,
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got `{s}`"))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok(Complex64::new(p(re)?, p(im)?))
}

fn parse_line(s: &str) -> Result<Vec<Complex64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("expected RE0,IM0:RE1,IM1:N, got `{s}`"));
    };
    let (a, b) = (parse_complex(a)?, parse_complex(b)?);
    let n: usize = n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?;
    if n == 0 {
        return Err("N must be positive".into());
    }
    Ok((0..=n).map(|i| a + (b - a) * (i as f64 / n as f64)).collect())
}

/// How a subcommand failed.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Compute(_) | CliError::Io { .. } => 1,
        }
    }
}

/// Reads and validates a profile. Errors name the JSON path or the violated
/// constraint.
pub fn load_profile(path: &Path) -> Result<MediumProfile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let profile =
        MediumProfile::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let report = validate_profile(&profile);
    if !report.passed() {
        let list: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(CliError::Config(format!("{}: {}", path.display(), list.join("; "))));
    }
    Ok(profile)
}

fn thread_count(flag: usize) -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(flag),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let argv: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<(), CliError> {
    let threads = thread_count(cli.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let common = cli.command.common();
    let profile = load_profile(&common.config)?;
    let det = DetSettings { ode: OdeSettings::default().with_rel_tol(common.rel_tol), k_min: common.k_min };
    det.ode.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let (text, settings) = pool.install(|| compute(&cli.command, &profile, &det))?;

    let Some(out) = &common.out else {
        print!("{text}");
        return Ok(());
    };
    write(out, text.as_bytes())?;
    let manifest = RunManifest {
        subcommand: cli.command.name().to_string(),
        argv,
        config: ProfileSpec::from(&profile),
        settings,
        threads: pool.current_num_threads(),
        duration_seconds: start.elapsed().as_secs_f64(),
        artifacts: vec![Artifact::of(out, text.as_bytes())],
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write(&manifest_path(out), json.as_bytes())
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn finder_options(refine_tol: f64, sector_eps: f64, verify: bool) -> FinderOptions {
    FinderOptions { refine_tol, sector_eps, verify, ..FinderOptions::default() }
}

/// Produces the primary output and the settings recorded in the manifest.
fn compute(cmd: &Command, profile: &MediumProfile, det: &DetSettings) -> Result<(String, serde_json::Value), CliError> {
    let constants = compute_constants(profile, DEFAULT_QUAD_TOL)?;
    let base = json!({ "det": det, "quad_tol": DEFAULT_QUAD_TOL });
    let merge = |extra: serde_json::Value| {
        let mut v = base.clone();
        v.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
        v
    };
    match cmd {
        Command::Constants { .. } => {
            let text = serde_json::to_string_pretty(&constants).expect("constants serialize") + "\n";
            Ok((text, base.clone()))
        }

        Command::EvalD { k, k_line, .. } => {
            let points: Vec<Complex64> = k.iter().copied().chain(k_line.iter().flatten().copied()).collect();
            if points.is_empty() {
                return Err(CliError::Usage("eval-d needs at least one --k or --k-line".into()));
            }
            let t = Transmission::new(profile.clone(), *det)?;
            let rows: Vec<_> = points
                .par_iter()
                .map(|&k| {
                    let d = t.eval_d(k)?;
                    let m = eval_sinh_model_scaled(&t.constants, profile.epsilon1_at(0.0), k)?;
                    Ok((k, d, m.rescaled_to(d.log_scale)))
                })
                .collect::<Result<_, Error>>()?;
            let mut csv = Csv::new(&["k_re", "k_im", "D_re", "D_im", "log_scale", "model_re", "model_im"]);
            for (k, d, m) in rows {
                csv.row(&[
                    k.re.into(),
                    k.im.into(),
                    d.value.re.into(),
                    d.value.im.into(),
                    d.log_scale.into(),
                    m.re.into(),
                    m.im.into(),
                ]);
            }
            Ok((csv.as_str().to_string(), merge(json!({ "points": points.len() }))))
        }

        Command::Eigs { re_min, re_max, im_min, im_max, refine_tol, sector_eps, no_verify, .. } => {
            let rect = Rect::new(*re_min, *re_max, *im_min, *im_max).map_err(|e| CliError::Usage(e.to_string()))?;
            let tol = refine_tol.unwrap_or(1e-10 * std::f64::consts::PI / constants.type_sum());
            let opts = finder_options(tol, *sector_eps, !no_verify);
            let t = Transmission::new(profile.clone(), *det)?;
            let set = find_zeros(&t, rect, &opts)?;
            let mut csv = Csv::new(&["k_re", "k_im", "multiplicity", "residual", "sector"]);
            for r in &set.records {
                csv.row(&[
                    r.k.re.into(),
                    r.k.im.into(),
                    (r.multiplicity as i64).into(),
                    r.residual.into(),
                    r.sector.as_str().into(),
                ]);
            }
            eprintln!(
                "{} eigenvalues (winding {}) in {:?}",
                set.total_multiplicity(),
                set.region.winding,
                set.region.rect
            );
            Ok((csv.as_str().to_string(), merge(json!({ "rect": rect, "finder": opts, "searched": set.region.rect }))))
        }

        Command::Density { r_list, center, half_width, r_min, .. } => {
            let sector = Sector::symmetric(*center, *half_width).map_err(|e| CliError::Usage(e.to_string()))?;
            let opts = FinderOptions::default();
            let t = Transmission::new(profile.clone(), *det)?;
            let counts = sector_density(&t, &sector, r_list, *r_min, &opts)?;
            let predicted = constants.predicted_density();
            let mut csv = Csv::new(&["r", "count", "density", "predicted"]);
            for p in &counts.points {
                csv.row(&[p.r.into(), p.count.into(), p.density.into(), predicted.into()]);
            }
            let extra = json!({ "center": center, "half_width": half_width, "r_min": r_min, "finder": opts });
            Ok((csv.as_str().to_string(), merge(extra)))
        }

        Command::AsymCheck { kind, j_lo, j_hi, .. } => {
            let opts = FinderOptions::default();
            let table = asymptote_convergence(profile, *j_lo, *j_hi, (*kind).into(), &det.ode, &opts)?;
            let mut csv = Csv::new(&["j", "found_re", "found_im", "pred_re", "pred_im", "gap", "gap_times_j"]);
            for r in &table.rows {
                csv.row(&[
                    (r.j as i64).into(),
                    r.found.re.into(),
                    r.found.im.into(),
                    r.predicted.re.into(),
                    r.predicted.im.into(),
                    r.gap.into(),
                    r.gap_times_j.into(),
                ]);
            }
            eprintln!(
                "max gap·j = {:.3e}, max |Im| over {} zeros = {:.3e}",
                table.max_gap_times_j(),
                table.found,
                table.max_abs_im
            );
            let extra = json!({ "kind": format!("{kind:?}").to_lowercase(), "j_lo": j_lo, "j_hi": j_hi, "finder": opts });
            Ok((csv.as_str().to_string(), merge(extra)))
        }

        Command::WkbCompare { k_abs, arg, r, .. } => {
            let rows: Vec<_> = k_abs
                .par_iter()
                .map(|&m| wkb_compare(profile, *r, Complex64::from_polar(m, *arg), &det.ode))
                .collect::<Result<_, Error>>()?;
            let mut csv = Csv::new(&[
                "k_re", "k_im", "exact_re", "exact_im", "pred_re", "pred_im", "rel_error", "log_scale",
            ]);
            for c in &rows {
                csv.row(&[
                    c.k.re.into(),
                    c.k.im.into(),
                    c.exact.re.into(),
                    c.exact.im.into(),
                    c.predicted.re.into(),
                    c.predicted.im.into(),
                    c.rel_error.into(),
                    c.log_scale.into(),
                ]);
            }
            Ok((csv.as_str().to_string(), merge(json!({ "arg": arg, "r": r }))))
        }

        Command::LiouvilleCheck { k, order, xi_points, .. } => {
            if *xi_points == 0 {
                return Err(CliError::Usage("--xi-points must be positive".into()));
            }
            let frame = liouville_build(profile)?;
            let rows: Vec<_> = (1..=*xi_points)
                .into_par_iter()
                .map(|i| liouville_compare(&frame, frame.b * i as f64 / *xi_points as f64, *k, *order, &det.ode))
                .collect::<Result<_, Error>>()?;
            let mut csv = Csv::new(&[
                "xi", "exact_re", "exact_im", "pred_re", "pred_im", "rel_error", "scaled_residual",
            ]);
            for s in &rows {
                csv.row(&[
                    s.xi.into(),
                    s.exact.re.into(),
                    s.exact.im.into(),
                    s.predicted.re.into(),
                    s.predicted.im.into(),
                    s.rel_error.into(),
                    s.scaled_residual.into(),
                ]);
            }
            Ok((csv.as_str().to_string(), merge(json!({ "k": [k.re, k.im], "order": order }))))
        }

        Command::Stability { scale_list, num_eigs, refine_tol, .. } => {
            let tol = refine_tol.unwrap_or(1e-10 * std::f64::consts::PI / constants.type_sum());
            let opts = finder_options(tol, FinderOptions::default().sector_eps, false);
            let family = Family::Scale;
            let run = track_eigenvalues(profile, &family, scale_list, *num_eigs, det, &opts)?;
            let mut csv = Csv::new(&["s", "eta", "eig_index", "k_re", "k_im", "displacement", "eta_cch"]);
            for (i, &s) in run.s_values.iter().enumerate() {
                for (j, traj) in run.trajectories.iter().enumerate() {
                    let k = traj[i];
                    csv.row(&[
                        s.into(),
                        run.eta[i].into(),
                        (j as i64).into(),
                        k.re.into(),
                        k.im.into(),
                        (k - traj[0]).norm().into(),
                        run.eta_from_lossless[i].into(),
                    ]);
                }
            }
            if !run.broken.is_empty() {
                eprintln!("warning: trajectories {:?} broke; their later rows repeat the last good value", run.broken);
            }
            match displacement_vs_eta(&run) {
                Ok(s) => eprintln!(
                    "slope {:.4e}, intercept {:.3e} ± {:.3e}, monotone {}",
                    s.fit.slope, s.fit.intercept, s.fit.intercept_se, s.monotone
                ),
                Err(e) => eprintln!("no regression: {e}"),
            }
            let extra = json!({ "family": family, "num_eigs": num_eigs, "finder": opts });
            Ok((csv.as_str().to_string(), merge(extra)))
        }
    }
}
