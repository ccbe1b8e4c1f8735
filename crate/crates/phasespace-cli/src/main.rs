//! `wigner`: build phase-space states, evolve them under diffusive
//! decoherence, apply ideal parity measurements, scan positivity thresholds,
//! sample measurement statistics, and export figure data.
//!
//! Exit codes: 0 success, 1 conjecture violation, 2 usage, 3 numerical or
//! data error, 4 impossible measurement outcome.

mod config;
mod plot;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use phasespace::decoherence::{
    heat_propagate, negativity_volume, positivity_threshold, DiffusionParams,
};
use phasespace::grid::{evolved_half_width, GridSpec};
use phasespace::measurement::{estimate_wigner_point, project_parity, simulate_measurements};
use phasespace::states::{
    cat_wigner, coherent_wigner, evolved_cat_wigner, rasterize, CatParameters, Displacement,
    Parity,
};
use phasespace::{io, negativity_epsilon, Error, PhasePoint, Result, WignerField};

use config::{parse_point, parse_time, RunConfig};

#[derive(Parser)]
#[command(
    name = "wigner",
    version,
    about = "Phase-space toolkit: cat states, parity measurements, decoherence",
    after_help = "Config file keys (overridden by flags): hbar, c, y, grid_n, half_width, seed, out_dir."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Line-oriented `key = value` configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Planck constant (phase-space area unit)
    #[arg(long, global = true)]
    hbar: Option<f64>,

    /// Environment coupling constant
    #[arg(long, global = true)]
    c: Option<f64>,

    /// Displacement center as P,Q
    #[arg(long, global = true, value_parser = parse_point)]
    y: Option<Displacement>,

    /// Nodes per grid axis (even, >= 8)
    #[arg(long, global = true)]
    grid_n: Option<usize>,

    /// Explicit grid half-width (default: domain rule |Y| + 6 sqrt(hbar s))
    #[arg(long, global = true)]
    half_width: Option<f64>,

    /// Seed for measurement sampling
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rasterize a closed-form state: coherent, cat+, cat-, or evolved-cat
    State {
        /// coherent | cat+ | cat- | evolved-cat
        kind: String,
        /// Evolution time for evolved-cat (accepts t0 multiples, e.g. 2t0)
        #[arg(long)]
        t: Option<String>,
        /// Extra domain margin for later evolution, as a time (e.g. 2t0)
        #[arg(long)]
        margin_t: Option<String>,
        /// Output stem (files land in out_dir as stem.csv and stem.gp)
        #[arg(long)]
        out: Option<String>,
    },
    /// Diffuse a stored field for a time t
    Evolve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Ideal parity measurement: project a stored field about a center
    Measure {
        #[arg(long)]
        input: PathBuf,
        /// Reflection center as P,Q (default origin)
        #[arg(long, value_parser = parse_point)]
        x: Option<PhasePoint>,
        /// Outcome sign: + or -
        #[arg(long)]
        sign: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Repeated parity measurements with a seeded generator
    Sample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_point)]
        x: Option<PhasePoint>,
        /// Number of measurement shots
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Bisect for the positivity threshold of a stored field
    ScanThreshold {
        #[arg(long)]
        input: PathBuf,
        /// Bracket end (default 4t0)
        #[arg(long)]
        t_hi: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Probe the persistent-negativity conjecture for even projections of
    /// decohered cats
    Conjecture {
        /// Comma-separated decoherence times (default t0,2t0,4t0)
        #[arg(long)]
        t_list: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Extract a 1-D profile from a stored field
    Export {
        #[arg(long)]
        input: PathBuf,
        /// diag | antidiag | row | col
        #[arg(long)]
        profile: String,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::ImpossibleOutcome { .. } => 4,
        _ => 3,
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    if let Some(v) = cli.hbar {
        config.hbar = v;
    }
    if let Some(v) = cli.c {
        config.coupling = v;
    }
    if let Some(v) = cli.y {
        config.y = v;
    }
    if let Some(v) = cli.grid_n {
        config.grid_n = v;
    }
    if let Some(v) = cli.half_width {
        config.half_width = Some(v);
    }
    if let Some(v) = cli.seed {
        config.seed = v;
    }
    if let Some(v) = &cli.out_dir {
        config.out_dir = v.clone();
    }
    Ok(config)
}

fn time_arg(s: &str, config: &RunConfig) -> Result<f64> {
    parse_time(s, config.t0()).map_err(|msg| Error::Parse { line: 0, msg })
}

fn state_grid(config: &RunConfig, margin_t: f64) -> Result<GridSpec> {
    let half = config.half_width.unwrap_or_else(|| {
        evolved_half_width(config.y.norm(), config.hbar, config.coupling, margin_t)
    });
    GridSpec::centered_square(half, config.grid_n)
}

fn write_field(config: &RunConfig, stem: &str, title: &str, field: &WignerField) -> Result<PathBuf> {
    std::fs::create_dir_all(&config.out_dir)?;
    let csv = config.out_dir.join(format!("{stem}.csv"));
    io::save_wigner(&csv, field)?;
    let gp = config.out_dir.join(format!("{stem}.gp"));
    plot::write_script(&gp, &plot::field_script(&format!("{stem}.csv"), title, field))?;
    println!("{}", csv.display());
    println!("{}", gp.display());
    Ok(csv)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = build_config(&cli)?;
    match cli.command {
        Command::State {
            kind,
            t,
            margin_t,
            out,
        } => {
            let margin = match &margin_t {
                Some(s) => time_arg(s, &config)?,
                None => 0.0,
            };
            let (stem, title, field) = match kind.as_str() {
                "coherent" => {
                    let grid = state_grid(&config, margin)?;
                    let y = config.y;
                    let hbar = config.hbar;
                    (
                        "state_coherent",
                        "coherent state",
                        rasterize(&grid, hbar, |x| coherent_wigner(y, hbar, x))?,
                    )
                }
                "cat+" | "cat-" => {
                    let parity = if kind == "cat+" {
                        Parity::Even
                    } else {
                        Parity::Odd
                    };
                    let params = CatParameters::new(config.y, parity, config.hbar)?;
                    let grid = state_grid(&config, margin)?;
                    let stem = if parity == Parity::Even {
                        "state_cat_plus"
                    } else {
                        "state_cat_minus"
                    };
                    (
                        stem,
                        "parity cat state",
                        rasterize(&grid, config.hbar, |x| cat_wigner(&params, x))?,
                    )
                }
                "evolved-cat" => {
                    let t_str = t.as_deref().ok_or(Error::Parse {
                        line: 0,
                        msg: "evolved-cat requires --t".into(),
                    })?;
                    let time = time_arg(t_str, &config)?;
                    if config.y.norm_sq() == 0.0 {
                        return Err(Error::DegenerateCat);
                    }
                    let grid = state_grid(&config, time + margin)?;
                    let (y, c, hbar) = (config.y, config.coupling, config.hbar);
                    (
                        "state_evolved_cat",
                        "decohered odd cat",
                        rasterize(&grid, hbar, |x| evolved_cat_wigner(y, time, c, hbar, x))?,
                    )
                }
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!(
                            "unknown state kind {other:?} (coherent | cat+ | cat- | evolved-cat)"
                        ),
                    })
                }
            };
            let stem = out.as_deref().unwrap_or(stem);
            if let Some(tail) = field.tail_warning() {
                eprintln!("warning: boundary tail mass {tail:.3e}; consider a larger --half-width");
            }
            write_field(&config, stem, title, &field)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Evolve { input, t, out } => {
            let field = io::load_wigner(&input)?;
            let time = time_arg(&t, &config)?;
            let params = DiffusionParams::new(config.coupling, field.hbar())?;
            let evolved = heat_propagate(&field, time, &params)?;
            let stem = out.as_deref().unwrap_or("evolved");
            write_field(&config, stem, "diffused state", &evolved)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Measure {
            input,
            x,
            sign,
            out,
        } => {
            let field = io::load_wigner(&input)?;
            let x_center = x.unwrap_or(PhasePoint::ORIGIN);
            let parity = parse_sign(&sign)?;
            let projected = project_parity(&field, x_center, parity)?;
            let stem = out.unwrap_or_else(|| {
                format!(
                    "measured_{}",
                    if parity == Parity::Even { "plus" } else { "minus" }
                )
            });
            write_field(&config, &stem, "post-measurement state", &projected)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Sample { input, x, n, out } => {
            let field = io::load_wigner(&input)?;
            let x_center = x.unwrap_or(PhasePoint::ORIGIN);
            let record = simulate_measurements(&field, x_center, n, config.seed)?;
            let (estimate, std_error) = estimate_wigner_point(&record, field.hbar())?;
            std::fs::create_dir_all(&config.out_dir)?;
            let stem = out.as_deref().unwrap_or("record");
            let path = config.out_dir.join(format!("{stem}.csv"));
            let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            io::write_record(&mut file, &record)?;
            println!("{}", path.display());
            println!(
                "n+ = {}, n- = {}, estimate W(X) = {estimate:.6e} +- {std_error:.6e}",
                record.n_plus, record.n_minus
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::ScanThreshold { input, t_hi, out } => {
            let field = io::load_wigner(&input)?;
            let params = DiffusionParams::new(config.coupling, field.hbar())?;
            let bracket = match &t_hi {
                Some(s) => time_arg(s, &config)?,
                None => 4.0 * config.t0(),
            };
            let report = positivity_threshold(&field, &params, bracket)?;
            std::fs::create_dir_all(&config.out_dir)?;
            let stem = out.as_deref().unwrap_or("threshold");
            let path = config.out_dir.join(format!("{stem}.csv"));
            let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            io::write_threshold_report(&mut file, &report)?;
            drop(file);
            let gp = config.out_dir.join(format!("{stem}.gp"));
            plot::write_script(
                &gp,
                &plot::profile_script(&format!("{stem}.csv"), "minimum vs diffusion time", "t"),
            )?;
            println!("{}", path.display());
            println!("t_star = {}", report.t_star);
            Ok(ExitCode::SUCCESS)
        }

        Command::Conjecture { t_list, out } => {
            let times: Vec<f64> = match &t_list {
                Some(list) => list
                    .split(',')
                    .map(|s| time_arg(s, &config))
                    .collect::<Result<_>>()?,
                None => vec![config.t0(), 2.0 * config.t0(), 4.0 * config.t0()],
            };
            let epsilon = negativity_epsilon(config.hbar);
            let params = DiffusionParams::new(config.coupling, config.hbar)?;
            let cat = CatParameters::new(config.y, Parity::Odd, config.hbar)?;

            std::fs::create_dir_all(&config.out_dir)?;
            let stem = out.as_deref().unwrap_or("conjecture");
            let path = config.out_dir.join(format!("{stem}.csv"));
            let mut lines = String::new();
            lines.push_str("# kind=conjecture-report\n");
            lines.push_str(&format!(
                "# hbar={}, c={}, y={},{}, grid_n={}\n",
                config.hbar, config.coupling, config.y.p, config.y.q, config.grid_n
            ));
            lines.push_str(&format!("# epsilon={epsilon:.16e}\n"));
            lines.push_str("# columns: t,min_w_plus,negativity_volume,verdict\n");

            let mut violated = false;
            for &t in &times {
                let grid = state_grid(&config, t)?;
                let initial = rasterize(&grid, config.hbar, |x| cat_wigner(&cat, x))?;
                let evolved = heat_propagate(&initial, t, &params)?;
                let projected = project_parity(&evolved, PhasePoint::ORIGIN, Parity::Even)?;
                let min = projected.min_max().min;
                let volume = negativity_volume(&projected);
                let negative = min < -epsilon;
                violated |= !negative;
                let verdict = if negative { "negative" } else { "VIOLATION" };
                lines.push_str(&format!("{t:.16e},{min:.16e},{volume:.16e},{verdict}\n"));
                println!("t = {t}: min W+ = {min:.6e}, negativity volume = {volume:.6e} ({verdict})");
            }
            std::fs::write(&path, lines)?;
            println!("{}", path.display());
            if violated {
                eprintln!("conjecture violated at grid precision");
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }

        Command::Export {
            input,
            profile,
            out,
        } => {
            let field = io::load_wigner(&input)?;
            let g = *field.grid();
            let (ci, cj) = (g.n_p() / 2, g.n_q() / 2);
            let half_n = ci.min(cj);
            let mut rows = Vec::new();
            let kind = profile.as_str();
            for k in -(half_n as isize)..(half_n as isize) {
                let (i, j) = match kind {
                    "diag" => (ci as isize + k, cj as isize + k),
                    "antidiag" => (ci as isize - k, cj as isize + k),
                    "row" => (ci as isize, cj as isize + k),
                    "col" => (ci as isize + k, cj as isize),
                    other => {
                        return Err(Error::Parse {
                            line: 0,
                            msg: format!(
                                "unknown profile {other:?} (diag | antidiag | row | col)"
                            ),
                        })
                    }
                };
                if i < 0 || j < 0 || i as usize >= g.n_p() || j as usize >= g.n_q() {
                    continue;
                }
                let x = g.node(i as usize, j as usize);
                let s = match kind {
                    "diag" | "antidiag" => k as f64 * g.dp() * std::f64::consts::SQRT_2,
                    "row" => x.q,
                    _ => x.p,
                };
                rows.push((s, field.values()[(i as usize, j as usize)]));
            }
            std::fs::create_dir_all(&config.out_dir)?;
            let stem = out.unwrap_or_else(|| format!("profile_{kind}"));
            let path = config.out_dir.join(format!("{stem}.csv"));
            let mut text = String::from("# kind=profile\n# columns: s,w\n");
            for (s, value) in &rows {
                text.push_str(&format!("{s:.16e},{value:.16e}\n"));
            }
            std::fs::write(&path, text)?;
            let gp = config.out_dir.join(format!("{stem}.gp"));
            plot::write_script(
                &gp,
                &plot::profile_script(&format!("{stem}.csv"), "profile", "s"),
            )?;
            println!("{}", path.display());
            println!("{}", gp.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_sign(s: &str) -> Result<Parity> {
    match s {
        "+" | "+1" | "plus" | "even" => Ok(Parity::Even),
        "-" | "-1" | "minus" | "odd" => Ok(Parity::Odd),
        other => Err(Error::Parse {
            line: 0,
            msg: format!("unknown sign {other:?} (use + or -)"),
        }),
    }
}
