//! `hill4bp`: command-line front end for the library.
//!
//! Subcommands cover the closed-form equilibria, linear stability and the
//! critical mass ratio, trajectory propagation from a JSON run
//! configuration, allowed-region grids with optional contour SVG, the
//! pullback convergence table, and continuation of the equilibria into the
//! full problem. Identical invocations produce byte-identical output.
//!
//! Exit codes: 0 on success, 2 for usage or validation problems, 3 for
//! numerical or IO failures. Diagnostics go to standard error only.

mod config;
mod render;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use hill4bp::equilibria::{equilibrium_points, libration_point, r4bp_equilibria_near_m3};
use hill4bp::hill::MassRatio;
use hill4bp::integrate::{propagate, propagate_sampled};
use hill4bp::r4bp::{log_log_slope, pullback_deviation};
use hill4bp::regions::{contours, region_grid_limit};
use hill4bp::stability::{classify, critical_mass};
use hill4bp::{PointLabel, SpatialState};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::render::num;

/// Fixed seed for the `limit-check` sample states.
const LIMIT_CHECK_SEED: u64 = 7;

/// CLI failure carrying its exit code: usage/validation problems exit 2,
/// numerical and IO failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

/// Library errors split by exit code: rejected inputs are usage problems,
/// everything discovered mid-computation is a numerical failure.
fn from_core(err: hill4bp::Error) -> CliError {
    use hill4bp::Error as E;
    match err {
        E::InvalidMasses { .. }
        | E::DegenerateMasses { .. }
        | E::MassRatioRange { .. }
        | E::DegenerateParameter { .. }
        | E::InvalidArgument(_) => CliError::Usage(err.to_string()),
        _ => CliError::Failure(err.to_string()),
    }
}

fn usage_for(field: &str) -> impl Fn(hill4bp::Error) -> CliError + '_ {
    move |err| CliError::Usage(format!("{field}: {err}"))
}

fn parse_mu(mu: f64) -> Result<MassRatio, CliError> {
    MassRatio::new(mu).map_err(usage_for("--mu"))
}

fn parse_bounds(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected four comma-separated numbers x0,x1,y0,y1".into());
    }
    let mut out = [0.0; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("{part:?}: {e}"))?;
    }
    Ok(out)
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated counts NX,NY".into());
    }
    let nx = parts[0]
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("{:?}: {e}", parts[0]))?;
    let ny = parts[1]
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("{:?}: {e}", parts[1]))?;
    Ok((nx, ny))
}

#[derive(Parser)]
#[command(
    name = "hill4bp",
    version,
    about = "Equilibria, stability, trajectories, and allowed regions of an \
             equilateral four-body problem and its small-third-mass limit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the four libration points of the limit problem.
    Equilibria {
        /// Mass ratio of the second primary, in (0, 1/2].
        #[arg(long)]
        mu: f64,
        /// Emit JSON instead of the plain listing.
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit CSV (name,x,y,grad_norm,A,B,D,class) instead of the plain listing.
        #[arg(long)]
        csv: bool,
    },
    /// Linear stability at libration points, or a coefficient sweep over mu.
    Stability {
        /// Mass ratio; required unless --sweep is given.
        #[arg(long)]
        mu: Option<f64>,
        /// Which point to report: L1, L2, L3, L4, or all.
        #[arg(long, default_value = "all")]
        point: String,
        /// Sweep size: emit the coefficient CSV at N mass ratios 0.5 (i+1)/N.
        #[arg(long, conflicts_with_all = ["mu", "point"])]
        sweep: Option<usize>,
        /// Write the sweep CSV here instead of standard output.
        #[arg(long, requires = "sweep")]
        out: Option<PathBuf>,
    },
    /// Bracket the critical mass ratio where the soft pair destabilizes.
    CriticalMass {
        /// Bisection bracket width.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Propagate a trajectory described by a JSON run configuration.
    Integrate {
        /// Path to the configuration file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Allowed-region grid of the limit problem at one Jacobi constant.
    Region {
        /// Mass ratio of the second primary, in (0, 1/2].
        #[arg(long)]
        mu: f64,
        /// Jacobi constant defining the zero-velocity level 2 Omega = C.
        #[arg(long)]
        c: f64,
        /// Grid rectangle as x0,x1,y0,y1.
        #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true)]
        bounds: [f64; 4],
        /// Node counts as NX,NY (at least 2,2).
        #[arg(long, value_parser = parse_resolution)]
        n: (usize, usize),
        /// Write zero-velocity contours as SVG to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the grid CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deviation of the rescaled full problem from the limit across m3 decades.
    LimitCheck {
        /// Mass ratio of the second primary, in [1e-3, 1/2].
        #[arg(long)]
        mu: f64,
        /// Number of decades below the m3 = 1e-3 anchor (K+1 table rows).
        #[arg(long = "m3-decades")]
        m3_decades: u32,
        /// Number of random sample states held fixed across the table.
        #[arg(long)]
        samples: usize,
    },
    /// Continue the limit equilibria into the full problem at small m3.
    R4bpEquilibria {
        /// Mass ratio of the second primary, in (0, 1/2].
        #[arg(long)]
        mu: f64,
        /// Third mass, in (0, 1e-4].
        #[arg(long)]
        m3: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Equilibria { mu, json, csv } => cmd_equilibria(mu, json, csv),
        Command::Stability {
            mu,
            point,
            sweep,
            out,
        } => cmd_stability(mu, &point, sweep, out.as_deref()),
        Command::CriticalMass { tol } => cmd_critical_mass(tol),
        Command::Integrate { config } => cmd_integrate(&config),
        Command::Region {
            mu,
            c,
            bounds,
            n,
            svg,
            out,
        } => cmd_region(mu, c, bounds, n, svg.as_deref(), out.as_deref()),
        Command::LimitCheck {
            mu,
            m3_decades,
            samples,
        } => cmd_limit_check(mu, m3_decades, samples),
        Command::R4bpEquilibria { mu, m3 } => cmd_r4bp_equilibria(mu, m3),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

fn write_stdout(contents: &str) -> Result<(), CliError> {
    std::io::stdout()
        .write_all(contents.as_bytes())
        .map_err(|e| CliError::Failure(format!("standard output: {e}")))
}

fn cmd_equilibria(mu: f64, json: bool, csv: bool) -> Result<(), CliError> {
    let mu = parse_mu(mu)?;
    let set = equilibrium_points(mu).map_err(usage_for("--mu"))?;
    let text = if json {
        render::equilibria_json(mu, &set).map_err(from_core)?
    } else if csv {
        render::equilibria_csv(mu, &set).map_err(from_core)?
    } else {
        render::equilibria_table(mu, &set).map_err(from_core)?
    };
    write_stdout(&text)
}

fn cmd_stability(
    mu: Option<f64>,
    point: &str,
    sweep: Option<usize>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if let Some(n) = sweep {
        let csv = render::sweep_csv(n).map_err(usage_for("--sweep"))?;
        return match out {
            Some(path) => write_file(path, &csv),
            None => write_stdout(&csv),
        };
    }
    let mu = parse_mu(mu.ok_or_else(|| {
        CliError::Usage("--mu: required unless --sweep is given".into())
    })?)?;
    let labels: Vec<PointLabel> = if point.eq_ignore_ascii_case("all") {
        PointLabel::ALL.to_vec()
    } else {
        vec![PointLabel::from_str(point).map_err(|_| {
            CliError::Usage(format!(
                "--point: {point:?} is not one of L1, L2, L3, L4, all"
            ))
        })?]
    };
    let mut text = String::new();
    for label in labels {
        let p = libration_point(mu, label).map_err(from_core)?;
        let report = classify(p, mu).map_err(from_core)?;
        text.push_str(&render::stability_block(label, &report));
    }
    write_stdout(&text)
}

fn cmd_critical_mass(tol: f64) -> Result<(), CliError> {
    let found = critical_mass(tol).map_err(|e| match e {
        hill4bp::Error::InvalidArgument(_) => usage_for("--tol")(e),
        other => from_core(other),
    })?;
    let text = format!(
        "mu0 = {}\nbracket = [{}, {}]\niterations = {}\n",
        num(found.mu0),
        num(found.bracket.0),
        num(found.bracket.1),
        found.iterations
    );
    write_stdout(&text)
}

fn cmd_integrate(path: &Path) -> Result<(), CliError> {
    let cfg = RunConfig::load(path)?;
    let dynamics = cfg.dynamics()?;
    let settings = cfg.settings()?;
    let start = cfg.start()?;
    let samples = cfg.sample_times()?;
    let traj = match &samples {
        Some(times) => propagate_sampled(dynamics.as_ref(), cfg.t_span, start, &settings, times),
        None => propagate(dynamics.as_ref(), cfg.t_span, start, &settings),
    }
    .map_err(from_core)?;
    let csv = render::trajectory_csv(&traj);
    let drift = traj.jacobi_drift().map_err(from_core)?;
    let summary = format!("rows = {}\njacobi drift = {}\n", traj.len(), num(drift));
    match &cfg.output {
        Some(out) => {
            write_file(out, &csv)?;
            write_stdout(&summary)
        }
        None => {
            write_stdout(&csv)?;
            // The CSV owns standard output here; the summary is diagnostics.
            eprint!("{summary}");
            Ok(())
        }
    }
}

fn cmd_region(
    mu: f64,
    c: f64,
    bounds: [f64; 4],
    n: (usize, usize),
    svg: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mu = parse_mu(mu)?;
    let [x0, x1, y0, y1] = bounds;
    let grid = region_grid_limit(mu, c, [x0, x1], [y0, y1], n.0, n.1)
        .map_err(usage_for("--c/--bounds/--n"))?;
    if let Some(path) = svg {
        let set = contours(&grid);
        write_file(path, &render::contours_svg(&grid, &set))?;
    }
    let csv = render::region_csv(&grid);
    match out {
        Some(path) => write_file(path, &csv),
        None => write_stdout(&csv),
    }
}

fn cmd_limit_check(mu: f64, decades: u32, samples: usize) -> Result<(), CliError> {
    let mu = parse_mu(mu)?;
    if mu.value() < 1e-3 {
        return Err(CliError::Usage(format!(
            "--mu: {} is below 1e-3, so the m3 = 1e-3 anchor would outweigh the second mass",
            mu.value()
        )));
    }
    if samples == 0 {
        return Err(CliError::Usage(
            "--samples: need at least one sample state".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(LIMIT_CHECK_SEED);
    let states: Vec<SpatialState> = (0..samples)
        .map(|_| {
            let p = loop {
                let p: [f64; 3] = [
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                ];
                let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                if (0.5..=2.0).contains(&r) {
                    break p;
                }
            };
            SpatialState::new(
                p[0],
                p[1],
                p[2],
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
        })
        .collect();
    let mut table = Vec::new();
    let mut text = String::from("m3,sup_deviation\n");
    for k in 0..=decades {
        let m3 = 1e-3 * 10f64.powi(-(k as i32));
        let mut sup = 0.0f64;
        for state in &states {
            sup = sup.max(pullback_deviation(state, mu, m3).map_err(from_core)?);
        }
        writeln!(text, "{},{}", num(m3), num(sup)).expect("string write");
        table.push((m3, sup));
    }
    let slope = log_log_slope(&table).map_err(usage_for("--m3-decades"))?;
    writeln!(text, "fitted slope: {}", num(slope)).expect("string write");
    write_stdout(&text)
}

fn cmd_r4bp_equilibria(mu: f64, m3: f64) -> Result<(), CliError> {
    let mu = parse_mu(mu)?;
    let limit = equilibrium_points(mu).map_err(from_core)?;
    let continued = r4bp_equilibria_near_m3(mu, m3).map_err(|e| match e {
        hill4bp::Error::InvalidArgument(_) | hill4bp::Error::InvalidMasses { .. } => {
            usage_for("--m3")(e)
        }
        other => from_core(other),
    })?;
    let mut text = String::from("name,x,y,dist_to_limit\n");
    for (label, point) in continued.iter() {
        writeln!(
            text,
            "{label},{},{},{}",
            num(point.x),
            num(point.y),
            num(point.dist(limit.get(label)))
        )
        .expect("string write");
    }
    write_stdout(&text)
}
