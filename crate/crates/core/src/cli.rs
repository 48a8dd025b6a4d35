//! Command-line front-end.
//!
//! Exit codes: 0 success, 1 inconclusive verdict (`analyze` only), 2 usage
//! or parse errors, 3 numeric failures.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::graphs::{
    augment, brute_force_labeling, build_r_graph, build_sr_graph, check_io_monotonicity,
    find_consistent_labeling, r_graph_to_dot, sr_graph_to_dot, VerdictKind,
};
use crate::parser::{parse, NetworkDocument};
use crate::report::{verdict_json, verdict_text};
use crate::sim::{
    check_empirical_monotonicity, simulate, sweep, sweep_csv, trajectory_csv, EmpiricalOutcome,
    SimConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser)]
#[command(
    name = "crn-mono",
    about = "Structural input-output monotonicity analysis of reaction networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide structural input-output monotonicity and print the verdict
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        io: IoFlags,
        /// emit a machine-readable JSON report
        #[arg(long)]
        json: bool,
    },
    /// Print the SR- or R-graph in DOT format
    Graph {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: GraphKind,
        /// add the dummy input/output reactions before building the graph
        #[arg(long)]
        augment: bool,
        #[command(flatten)]
        io: IoFlags,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Integrate the ODEs from the file's initial concentrations
    Simulate {
        file: PathBuf,
        #[arg(long = "t-end")]
        t_end: Option<f64>,
        /// write the trajectory CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the input's initial concentration and record output steady states
    Sweep {
        file: PathBuf,
        #[command(flatten)]
        io: IoFlags,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        points: usize,
        /// space the sweep values logarithmically
        #[arg(long)]
        log: bool,
        /// also run the pointwise trajectory dominance check
        #[arg(long)]
        empirical: bool,
        #[arg(long = "t-end")]
        t_end: Option<f64>,
        /// write the sweep CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the labeling search against exhaustive enumeration
    Oracle { file: PathBuf },
}

#[derive(Args)]
struct IoFlags {
    /// input species (defaults to the file's `input` line)
    #[arg(long)]
    input: Option<String>,
    /// output species (defaults to the file's `output` line)
    #[arg(long)]
    output: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Sr,
    R,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum GraphFormat {
    Dot,
}

struct CmdError {
    code: i32,
    message: String,
}

impl CmdError {
    fn usage(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn numeric(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

/// Run the CLI on explicit arguments and streams; returns the exit code.
pub fn run(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output on "error"
            let code = if e.exit_code() == 0 { EXIT_OK } else { EXIT_USAGE };
            if code == EXIT_OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn load(file: &PathBuf) -> Result<NetworkDocument, CmdError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CmdError::usage(format!("{}: {e}", file.display())))?;
    parse(&text).map_err(|e| CmdError::usage(format!("{}:{e}", file.display())))
}

fn resolve_io(doc: &NetworkDocument, io: &IoFlags) -> Result<(usize, usize), CmdError> {
    let pick = |flag: &Option<String>, declared: &Option<String>, role: &str| {
        let name = flag
            .as_deref()
            .or(declared.as_deref())
            .ok_or_else(|| CmdError::usage(format!("no {role} species: pass --{role} or add an `{role}` line to the file")))?;
        doc.network
            .species_id(name)
            .ok_or_else(|| CmdError::usage(format!("unknown {role} species `{name}`")))
    };
    let input = pick(&io.input, &doc.declared_input, "input")?;
    let output = pick(&io.output, &doc.declared_output, "output")?;
    if input == output {
        return Err(CmdError::usage("input and output must be distinct species"));
    }
    Ok((input, output))
}

fn sim_config(t_end: Option<f64>) -> Result<SimConfig, CmdError> {
    match t_end {
        None => Ok(SimConfig::default()),
        Some(t) if t > 0.0 && t.is_finite() => Ok(SimConfig::with_t_end(t)),
        Some(t) => Err(CmdError::usage(format!("invalid --t-end {t}"))),
    }
}

fn write_or_print(
    stdout: &mut dyn Write,
    out: &Option<PathBuf>,
    content: &str,
) -> Result<(), CmdError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CmdError::numeric(format!("{}: {e}", path.display()))),
        None => {
            let _ = stdout.write_all(content.as_bytes());
            Ok(())
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32, CmdError> {
    match command {
        Command::Analyze { file, io, json } => {
            let doc = load(&file)?;
            let (input, output) = resolve_io(&doc, &io)?;
            let verdict = check_io_monotonicity(&doc.network, input, output)
                .map_err(|e| CmdError::usage(e.to_string()))?;
            if json {
                let report = verdict_json(&doc.network, input, output, &verdict);
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                let _ = write!(stdout, "{}", verdict_text(&doc.network, input, output, &verdict));
            }
            Ok(if verdict.kind == VerdictKind::Inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            })
        }
        Command::Graph {
            file,
            kind,
            augment: do_augment,
            io,
            format,
        } => {
            let doc = load(&file)?;
            let network = if do_augment {
                let (input, output) = resolve_io(&doc, &io)?;
                augment(&doc.network, input, output).map_err(|e| CmdError::usage(e.to_string()))?
            } else {
                doc.network.clone()
            };
            debug_assert!(format == GraphFormat::Dot);
            let dot = match kind {
                GraphKind::Sr => sr_graph_to_dot(&build_sr_graph(&network)),
                GraphKind::R => r_graph_to_dot(&build_r_graph(&network)),
            };
            let _ = write!(stdout, "{dot}");
            Ok(EXIT_OK)
        }
        Command::Simulate { file, t_end, out } => {
            let doc = load(&file)?;
            let cfg = sim_config(t_end)?;
            let traj = simulate(&doc.network, &doc.network.initial, &cfg)
                .map_err(|e| CmdError::numeric(e.to_string()))?;
            write_or_print(stdout, &out, &trajectory_csv(&traj, &doc.network))?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            file,
            io,
            from,
            to,
            points,
            log,
            empirical,
            t_end,
            out,
        } => {
            let doc = load(&file)?;
            let (input, output) = resolve_io(&doc, &io)?;
            let cfg = sim_config(t_end)?;
            let values = sweep_values(from, to, points, log)?;
            if empirical {
                let (outcome, result) =
                    check_empirical_monotonicity(&doc.network, input, output, &values, &cfg)
                        .map_err(|e| CmdError::numeric(e.to_string()))?;
                write_or_print(stdout, &out, &sweep_csv(&result))?;
                let _ = writeln!(stdout, "empirical: {}", describe_outcome(&outcome));
            } else {
                let result = sweep(&doc.network, input, &values, output, &cfg)
                    .map_err(|e| CmdError::numeric(e.to_string()))?;
                write_or_print(stdout, &out, &sweep_csv(&result))?;
            }
            Ok(EXIT_OK)
        }
        Command::Oracle { file } => {
            let doc = load(&file)?;
            let rg = build_r_graph(&doc.network);
            let brute = brute_force_labeling(&rg).map_err(|e| CmdError::usage(e.to_string()))?;
            let fast = find_consistent_labeling(&rg);
            let agree = brute.is_some() == fast.is_ok();
            let _ = writeln!(
                stdout,
                "fast: {}  brute-force: {}  agreement: {}",
                if fast.is_ok() { "labeling" } else { "no labeling" },
                if brute.is_some() { "labeling" } else { "no labeling" },
                agree
            );
            Ok(if agree { EXIT_OK } else { EXIT_NUMERIC })
        }
    }
}

fn sweep_values(from: f64, to: f64, points: usize, log: bool) -> Result<Vec<f64>, CmdError> {
    if points == 0 || from >= to || !from.is_finite() || !to.is_finite() {
        return Err(CmdError::usage("sweep needs --from < --to and --points >= 1"));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    if log && from <= 0.0 {
        return Err(CmdError::usage("--log requires a positive --from"));
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let s = i as f64 / n;
            if log {
                from * (to / from).powf(s)
            } else {
                from + (to - from) * s
            }
        })
        .collect())
}

fn describe_outcome(outcome: &EmpiricalOutcome) -> String {
    match outcome {
        EmpiricalOutcome::ConsistentPositive => "ConsistentPositive".into(),
        EmpiricalOutcome::ConsistentNegative => "ConsistentNegative".into(),
        EmpiricalOutcome::Violation {
            lower,
            upper,
            time,
            gap,
        } => format!("Violation between sweep points {lower} and {upper} at t={time} (gap {gap})"),
        EmpiricalOutcome::Indeterminate => "Indeterminate".into(),
    }
}
