use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use beamdec::codes::{code_capacity_problem, logical_operators};
use beamdec::problem::read_syndrome;
use beamdec::sim::{run_trials, SimReport, SHOT_CSV_HEADER};
use beamdec::{CodePreset, DecoderSpec, DecodingProblem, ErrorType, Stacking, TrialPlan};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "beamdec",
    version,
    about = "Beam search decoding for quantum LDPC codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code-capacity decoding problem and write it as QDEM1.
    MakeCode {
        #[command(flatten)]
        code: CodeArgs,
        /// Destination file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a single syndrome.
    Decode {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        syndrome: PathBuf,
        #[arg(long, default_value = "beam8_230iters")]
        decoder: DecoderSpec,
    },
    /// Run seeded Monte Carlo trials.
    Simulate {
        /// QDEM1 problem file, as an alternative to the preset flags.
        #[arg(long, conflicts_with = "preset")]
        problem: Option<PathBuf>,
        #[command(flatten)]
        code: OptionalCodeArgs,
        #[arg(long, default_value = "beam8_230iters")]
        decoder: DecoderSpec,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// JSON report destination.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        per_shot_csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CodeArgs {
    /// rep<n>, bb72, bb90, bb144 or hgp450.
    #[arg(long)]
    preset: CodePreset,
    /// Physical error rate.
    #[arg(long)]
    noise: f64,
    #[arg(long = "type", default_value = "X")]
    error_type: ErrorType,
    #[arg(long = "stack", default_value = "XZ")]
    stacking: Stacking,
}

#[derive(Args)]
struct OptionalCodeArgs {
    #[arg(long, requires = "noise")]
    preset: Option<CodePreset>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long = "type", default_value = "X")]
    error_type: ErrorType,
    #[arg(long = "stack", default_value = "XZ")]
    stacking: Stacking,
}

/// Exit status for usage, file and parse errors.
const USAGE: u8 = 2;

type CliResult<T> = std::result::Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::MakeCode { code, out } => make_code(&code, out.as_deref()),
        Command::Decode {
            problem,
            syndrome,
            decoder,
        } => decode(&problem, &syndrome, decoder),
        Command::Simulate {
            problem,
            code,
            decoder,
            shots,
            seed,
            workers,
            out,
            per_shot_csv,
        } => simulate(SimulateArgs {
            problem,
            code,
            decoder,
            shots,
            seed,
            workers,
            out,
            per_shot_csv,
        }),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}

fn build_problem(
    preset: CodePreset,
    noise: f64,
    error_type: ErrorType,
    stacking: Stacking,
) -> CliResult<(DecodingProblem, usize, usize)> {
    let code = preset.build().map_err(|e| e.to_string())?;
    let (ax, az) = logical_operators(&code).map_err(|e| e.to_string())?;
    let problem = code_capacity_problem(&code, &ax, &az, noise, error_type, stacking)
        .map_err(|e| e.to_string())?;
    Ok((problem, code.n(), code.k()))
}

fn load_problem(path: &Path) -> CliResult<DecodingProblem> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    DecodingProblem::load(BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn make_code(args: &CodeArgs, out: Option<&Path>) -> CliResult<u8> {
    let (problem, n, k) = build_problem(args.preset, args.noise, args.error_type, args.stacking)?;
    let summary = format!(
        "n={n} k={k} M={} N={}",
        problem.num_detectors(),
        problem.num_errors()
    );
    match out {
        Some(path) => {
            let mut w = create(path)?;
            problem.save(&mut w).map_err(|e| e.to_string())?;
            w.flush().map_err(|e| e.to_string())?;
            println!("{summary}");
        }
        None => {
            // keep stdout a valid QDEM1 stream
            problem
                .save(io::stdout().lock())
                .map_err(|e| e.to_string())?;
            eprintln!("{summary}");
        }
    }
    Ok(0)
}

fn decode(problem_path: &Path, syndrome_path: &Path, decoder: DecoderSpec) -> CliResult<u8> {
    let problem = load_problem(problem_path)?;
    let file =
        File::open(syndrome_path).map_err(|e| format!("{}: {e}", syndrome_path.display()))?;
    let s = read_syndrome(BufReader::new(file), problem.num_detectors())
        .map_err(|e| format!("{}: {e}", syndrome_path.display()))?;
    let result = decoder.decode(&problem, &s).map_err(|e| e.to_string())?;
    println!("{}", result.decoded);
    println!("converged={}", result.converged);
    println!("weight={}", result.weight);
    println!("rounds={}", result.rounds_used);
    Ok(if result.converged { 0 } else { 1 })
}

struct SimulateArgs {
    problem: Option<PathBuf>,
    code: OptionalCodeArgs,
    decoder: DecoderSpec,
    shots: u64,
    seed: u64,
    workers: usize,
    out: Option<PathBuf>,
    per_shot_csv: Option<PathBuf>,
}

fn simulate(args: SimulateArgs) -> CliResult<u8> {
    if args.shots == 0 {
        return Err("--shots must be at least 1".into());
    }
    if args.workers == 0 {
        return Err("--workers must be at least 1".into());
    }
    let (problem, label) = match (&args.problem, args.code.preset) {
        (Some(path), _) => (load_problem(path)?, path.display().to_string()),
        (None, Some(preset)) => {
            let noise = args.code.noise.ok_or("--noise is required with --preset")?;
            let (p, _, _) = build_problem(preset, noise, args.code.error_type, args.code.stacking)?;
            let label = format!(
                "{preset} p={noise} type={} stack={}",
                match args.code.error_type {
                    ErrorType::X => "X",
                    ErrorType::Z => "Z",
                },
                match args.code.stacking {
                    Stacking::Xz => "XZ",
                    Stacking::Xyz => "XYZ",
                }
            );
            (p, label)
        }
        (None, None) => return Err("either --problem or --preset is required".into()),
    };
    let plan = TrialPlan {
        problem: &problem,
        decoder: args.decoder,
        shots: args.shots,
        base_seed: args.seed,
        workers: args.workers,
        keep_shot_log: args.per_shot_csv.is_some(),
    };
    let stats = run_trials(&plan).map_err(|e| e.to_string())?;

    if let Some(path) = &args.out {
        let report = SimReport::new(&plan, &label, &stats);
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, &report).map_err(|e| e.to_string())?;
        writeln!(w)
            .and_then(|_| w.flush())
            .map_err(|e| e.to_string())?;
    }
    if let (Some(path), Some(log)) = (&args.per_shot_csv, &stats.shot_log) {
        let mut w = create(path)?;
        let mut write_all = || -> io::Result<()> {
            writeln!(w, "{SHOT_CSV_HEADER}")?;
            for r in log {
                writeln!(w, "{}", r.csv_line())?;
            }
            w.flush()
        };
        write_all().map_err(|e| e.to_string())?;
    }

    let p999 = stats.percentile(0.999).unwrap_or_default();
    println!(
        "shots={} failures={} ler={} mean_ms={:.4} p999_ms={:.4}",
        stats.shots,
        stats.logical_failures,
        stats.logical_error_rate(),
        stats.mean_time.as_secs_f64() * 1e3,
        p999.as_secs_f64() * 1e3
    );
    Ok(0)
}
