use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qshutter::checks::{num, Manifest};
use qshutter::config::load_config;
use qshutter::output::{gnuplot_script, poles_csv, trace_csv, transmission_csv, write_file};
use qshutter::presets::{run_figure, Preset};
use qshutter::scenario::Scenario;
use qshutter::{selftest, CliError};
use qshutter_core::model::MEV;
use qshutter_core::poles::find_poles;
use qshutter_core::scattering::transmission;

/// Transient tunneling through resonance doublets.
#[derive(Parser)]
#[command(name = "qshutter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Shipped config name (triple_barrier_paper, double_barrier_paper) or a file path
    #[arg(long)]
    config: String,
}

#[derive(Subcommand)]
enum Command {
    /// Resonance poles as CSV
    Poles {
        #[command(flatten)]
        config: ConfigArg,
        /// Number of poles (default: the config's `poles`)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// T(E) on a uniform energy grid
    Transmission {
        #[command(flatten)]
        config: ConfigArg,
        /// meV (default 1)
        #[arg(long = "from")]
        from: Option<f64>,
        /// meV (default: tallest barrier)
        #[arg(long)]
        to: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density curves for one configuration
    Evolve {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Pole truncation N
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        points: Option<usize>,
        /// Observation point in nm (default L)
        #[arg(long)]
        x: Option<f64>,
    },
    /// Figure preset: fig1, fig2a, fig2b, fig3a, fig3b
    Figure {
        preset: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Acceptance suite with a pass/fail table
    Selftest {
        /// Also write the table to DIR/selftest.txt
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Whether every check passed.
type Outcome = Result<bool, CliError>;

fn poles(config: &str, n: Option<usize>, out: Option<PathBuf>) -> Outcome {
    let c = load_config(config)?;
    let poles = find_poles(&c.profile()?, n.unwrap_or(c.poles))?;
    let csv = poles_csv(&poles);
    print!("{csv}");
    if let Some(dir) = out {
        write_file(&dir, &format!("{}_poles.csv", c.output), &csv)?;
    }
    Ok(true)
}

fn sweep(config: &str, from: Option<f64>, to: Option<f64>, points: usize, out: Option<PathBuf>) -> Outcome {
    let c = load_config(config)?;
    let profile = c.profile()?;
    let from = from.unwrap_or(1.0) * MEV;
    let to = to.map(|e| e * MEV).unwrap_or(profile.max_height());
    if !(from > 0.0 && to > from && points >= 2) {
        return Err(CliError::Usage(format!(
            "need 0 < --from < --to and --points >= 2, got {} .. {} meV with {points} points",
            num(from / MEV),
            num(to / MEV)
        )));
    }
    let rows = (0..points)
        .map(|i| {
            let e = from + (to - from) * i as f64 / (points - 1) as f64;
            Ok((e, transmission(&profile, e)?.1))
        })
        .collect::<Result<Vec<_>, qshutter_core::Error>>()?;
    let csv = transmission_csv(&rows);
    print!("{csv}");
    if let Some(dir) = out {
        write_file(&dir, &format!("{}_transmission.csv", c.output), &csv)?;
    }
    Ok(true)
}

fn evolve(config: &str, out: PathBuf, n: Option<usize>, points: Option<usize>, x: Option<f64>) -> Outcome {
    let mut c = load_config(config)?;
    if let Some(n) = n {
        c.poles = n.max(1);
    }
    if let Some(points) = points {
        c.points = points.max(2);
    }
    if let Some(x) = x {
        c.x = Some(x);
    }
    let s = Scenario::prepare(&c)?;
    let curves = s.curves()?;
    let mut manifest = Manifest::default();
    s.describe(&c.name, &mut manifest);
    manifest.note(
        "window",
        format!("t in [0, {} tau1], {} points", num(c.t_max), c.points),
    );
    manifest.check(s.long_time_check(&format!("{}.density_25tau_vs_stationary", c.name))?);
    for curve in &curves {
        write_file(&out, &format!("{}.csv", curve.label), &trace_csv(curve))?;
    }
    let t = s.problem.transmission();
    let script = gnuplot_script(&c.output, &curves, &[(format!("T = {}", num(t)), t)]);
    write_file(&out, &format!("{}.gp", c.output), &script)?;
    let rendered = manifest.render();
    write_file(&out, &format!("{}_manifest.txt", c.output), &rendered)?;
    print!("{rendered}");
    Ok(manifest.passed())
}

fn figure(preset: &str, out: PathBuf) -> Outcome {
    let output = run_figure(Preset::parse(preset)?)?;
    output.write(&out)?;
    print!("{}", output.manifest.render());
    Ok(output.manifest.passed())
}

fn run_selftest(out: Option<PathBuf>) -> Outcome {
    let criteria = selftest::run_all();
    let table = selftest::render(&criteria);
    print!("{table}");
    if let Some(dir) = out {
        write_file(&dir, "selftest.txt", &table)?;
    }
    Ok(criteria.iter().all(|c| c.passed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Poles { config, n, out } => poles(&config.config, n, out),
        Command::Transmission {
            config,
            from,
            to,
            points,
            out,
        } => sweep(&config.config, from, to, points, out),
        Command::Evolve {
            config,
            out,
            n,
            points,
            x,
        } => evolve(&config.config, out, n, points, x),
        Command::Figure { preset, out } => figure(&preset, out),
        Command::Selftest { out } => run_selftest(out),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("qshutter: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("qshutter: {e}");
            ExitCode::from(2)
        }
    }
}
