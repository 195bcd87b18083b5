mod commands;
mod exit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cylnav::scene::{Scene, SceneConfig};
use cylnav::verification::Suite;

use crate::exit::{Code, Failure};

#[derive(Parser, Debug)]
#[command(name = "cylnav", version, about = "Zermelo navigation on cylinders of revolution")]
struct Cli {
    /// Scene configuration (JSON). Defaults to exp_gauss with the bounded odd A and B = 0.3.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override every tolerance of the scene.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Navigation metrics and scalars at one radius.
    Metric {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
    },
    /// Integrate an alpha-geodesic, reparameterize it and deform it; CSV output.
    Geodesic {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Launch angle measured from d/dr.
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long)]
        length: f64,
        /// Arclength between rows.
        #[arg(long, default_value_t = 0.05)]
        spacing: f64,
    },
    /// Cut locus of a point; JSON output.
    Cutlocus {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Deform the samples by the rotation flow.
        #[arg(long)]
        deform: bool,
        /// Samples on the meridian and on the parallel subarc.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Half-width of the sampled meridian range around r = 0.
        #[arg(long, default_value_t = 3.0)]
        meridian_half_width: f64,
    },
    /// Tabulate xi and phi over a grid of Clairaut constants; CSV output.
    Phi {
        /// `a:b:n`
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
    /// Run a verification suite; JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

fn load_scene(cli: &Cli) -> Result<Scene, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::new(Code::Admissibility, format!("{}: {e}", p.display())))?;
            serde_json::from_str::<SceneConfig>(&text)
                .map_err(|e| Failure::new(Code::Admissibility, format!("{}: {e}", p.display())))?
        }
        None => SceneConfig::example(),
    };
    if let Some(t) = cli.tol {
        if !(t > 0.0) {
            return Err(Failure::new(Code::Admissibility, format!("--tol must be positive, got {t}")));
        }
        cfg.tolerances.ode_tol = t;
        cfg.tolerances.quad_tol = t;
        cfg.tolerances.root_tol = t;
    }
    Ok(cfg.build()?)
}

fn run(cli: &Cli) -> Result<Code, Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::new(Code::Admissibility, format!("--threads: {e}")))?;
    }
    let scene = load_scene(cli)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Metric { r } => commands::metric(&scene, *r, out),
        Command::Geodesic {
            r,
            theta,
            angle,
            length,
            spacing,
        } => commands::geodesic(&scene, *r, *theta, *angle, *length, *spacing, out),
        Command::Cutlocus {
            r,
            theta,
            deform,
            samples,
            meridian_half_width,
        } => commands::cutlocus(&scene, *r, *theta, *deform, *samples, *meridian_half_width, out),
        Command::Phi { grid } => commands::phi(&scene, grid, out),
        Command::Verify { suite } => commands::verify(&scene, *suite, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
