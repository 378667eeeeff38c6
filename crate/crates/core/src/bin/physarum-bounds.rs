use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use physarum_bounds::pipeline::{
    cmd_analyze, cmd_oscillators, cmd_segment, cmd_synth, ImageSpec, OscillatorArgs, RunConfig, SyntheticSpec,
};
use physarum_bounds::Result;

#[derive(Parser)]
#[command(version, about = "Computational-capacity bounds from slime-mould growth morphology")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// End of the analysis window, hours.
    #[arg(long = "t-end", global = true)]
    t_end: Option<f64>,
    /// Bound evaluation grid step, hours.
    #[arg(long, global = true)]
    grid: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment plate images into a morphology table.
    Segment {
        /// Directory of `<sample>_t<minutes>.png` images.
        input: Option<PathBuf>,
        /// Scanner resolution.
        #[arg(long)]
        dpi: Option<f64>,
    },
    /// Fit growth curves and compute bounds, NESS times and allometry.
    Analyze {
        /// Morphology CSV or image directory.
        input: Option<PathBuf>,
        /// Skip SVG output.
        #[arg(long)]
        no_plots: bool,
    },
    /// Generate a synthetic morphology table.
    Synth(SynthArgs),
    /// Speed-limit ratios, ring spectra and the scaling law.
    Oscillators(OscArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Relative Gaussian noise.
    #[arg(long)]
    noise: Option<f64>,
    /// Use the two-phase growth preset.
    #[arg(long)]
    bisigmoid: bool,
    /// Also write a growing-disk image stack at this dpi.
    #[arg(long, value_name = "DPI")]
    images: Option<f64>,
}

#[derive(Args)]
struct OscArgs {
    /// Three-coupled ratio for frequency ratio W and cutoff ratio B.
    #[arg(long, num_args = 2, value_names = ["W", "B"])]
    three_coupled: Option<Vec<f64>>,
    /// Gd/(Gd+1).
    #[arg(long, num_args = 2, value_names = ["G", "D"])]
    ratio: Option<Vec<usize>>,
    /// Exact enumeration for G modes in D dimensions.
    #[arg(long, num_args = 2, value_names = ["G", "D"])]
    enumerate: Option<Vec<usize>>,
    /// Level cutoff for --enumerate.
    #[arg(long, default_value_t = 200)]
    cutoff: u64,
    /// Normal modes of a ring of this many oscillators.
    #[arg(long)]
    ring: Option<usize>,
    /// Scaling law at this speed, m/s.
    #[arg(long)]
    scaling: Option<f64>,
    /// Mass for the motional estimate, kg.
    #[arg(long, default_value_t = 1e-3)]
    mass_kg: f64,
    /// Time window for the motional estimate, hours.
    #[arg(long, default_value_t = 24.0)]
    window_h: f64,
}

fn pair<T: Copy>(v: Option<Vec<T>>) -> Option<(T, T)> {
    v.map(|v| (v[0], v[1]))
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out {
        cfg.output_dir = out;
    }
    if let Some(t) = cli.t_end {
        cfg.t_end_h = t;
    }
    if let Some(g) = cli.grid {
        cfg.grid_step_h = g;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    if let Some(n) = cfg.threads {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }

    match cli.command {
        Command::Segment { input, dpi } => {
            if input.is_some() {
                cfg.input = input;
            }
            if let Some(dpi) = dpi {
                cfg.segmentation.dpi = dpi;
            }
            let path = cmd_segment(&cfg)?;
            println!("wrote {}", path.display());
        }
        Command::Analyze { input, no_plots } => {
            if input.is_some() {
                cfg.input = input;
            }
            if no_plots {
                cfg.analysis.plots = false;
            }
            let out = cmd_analyze(&cfg)?;
            println!(
                "analyzed {} sample(s) in {} group(s); {} failed; reports in {}",
                out.samples.len(),
                out.groups.len(),
                out.failures.len(),
                cfg.output_dir.display()
            );
        }
        Command::Synth(args) => {
            let mut spec = if args.bisigmoid {
                SyntheticSpec {
                    seed: cfg.synth.seed,
                    ..SyntheticSpec::bisigmoid()
                }
            } else {
                cfg.synth.clone()
            };
            if let Some(n) = args.samples {
                spec.n_samples = n;
            }
            if let Some(s) = args.seed {
                spec.seed = s;
            }
            if let Some(n) = args.noise {
                spec.noise_sigma_rel = n;
            }
            if let Some(dpi) = args.images {
                spec.images = Some(ImageSpec { dpi });
            }
            cfg.validate()?;
            let path = cmd_synth(&spec, cfg.t_end_h, &cfg.output_dir)?;
            println!("wrote {}", path.display());
        }
        Command::Oscillators(a) => {
            let args = OscillatorArgs {
                three_coupled: pair(a.three_coupled),
                ratio: pair(a.ratio),
                enumerate: pair(a.enumerate),
                cutoff: a.cutoff,
                ring: a.ring,
                scaling: a.scaling,
                mass_kg: a.mass_kg,
                window_h: a.window_h,
            };
            print!("{}", cmd_oscillators(&args)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
