use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mirela::analysis::check_zeno_free;
use mirela::classify::{checked_partition, classify_network, prepare, render_table, ClassifyError, ClassifyOptions, Scale};
use mirela::dump::{network_dot, network_text};
use mirela::elaborate::elaborate;
use mirela::prism::{emit_model, emit_properties, EmitOptions};
use mirela::semantics::{BuildError, InvariantBound};
use mirela::spec::{load, pretty_print, ResolvedSpec};

#[derive(Parser)]
#[command(name = "mirela", version, about = "Compile MIRELA specifications and detect indefinite waiting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Dot,
}

#[derive(clap::Args)]
struct Pipeline {
    /// Time-constant divisor: `auto` (gcd of all constants), `none`, or a positive integer.
    #[arg(long, default_value = "auto")]
    scale: Scale,
    /// Reading of activity invariants x<c over integer clocks: `weak` (x<=c) or `strict` (x<=c-1).
    #[arg(long, default_value = "weak")]
    invariants: InvariantBound,
}

#[derive(Subcommand)]
enum Command {
    /// Print the specification with every target list made explicit.
    Parse { input: PathBuf },
    /// Print the timed automata of every component.
    Elaborate {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Print the network after channel demultiplexing, scaling and the urgency transform.
    Transform {
        input: PathBuf,
        #[command(flatten)]
        pipeline: Pipeline,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Write `<name>.prism` and `<name>.props`.
    Emit {
        input: PathBuf,
        #[command(flatten)]
        pipeline: Pipeline,
        /// Also emit properties for memories read by a rendering loop.
        #[arg(long)]
        include_memories: bool,
        /// Directory receiving the two files.
        #[arg(long, short = 'o', default_value = ".")]
        out_dir: PathBuf,
    },
    /// Classify every wait location (deadlock, starvation, safe).
    Classify {
        input: PathBuf,
        #[command(flatten)]
        pipeline: Pipeline,
        /// Also check memories read by a rendering loop.
        #[arg(long)]
        include_memories: bool,
        /// Evaluate ψ and ρ even where the decision does not need them.
        #[arg(long)]
        full_formulas: bool,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Maximum number of explored transitions.
        #[arg(long, env = "MIRELA_STATE_CAP", default_value_t = mirela::semantics::DEFAULT_STATE_CAP)]
        state_cap: u64,
    },
}

/// Failure with its exit status: 1 for specification errors, 2 when the
/// analysis runs out of resources.
struct Failure(u8, String);

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        let code = match e {
            ClassifyError::Build(BuildError::StateCap { .. } | BuildError::TooManyStates) => 2,
            _ => 1,
        };
        Failure(code, e.to_string())
    }
}

fn read_spec(path: &Path) -> Result<ResolvedSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(1, format!("{}: {e}", path.display())))?;
    let spec = load(&text).map_err(|e| Failure(1, format!("{}:{e}", path.display())))?;
    for w in &spec.warnings {
        eprintln!("{}: warning: {w}", path.display());
    }
    Ok(spec)
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Parse { input } => Ok(pretty_print(&read_spec(&input)?)),
        Command::Elaborate { input, format } => {
            let net = elaborate(&read_spec(&input)?).map_err(|e| Failure(1, e.to_string()))?;
            let zeno = check_zeno_free(&net);
            for v in &zeno {
                eprintln!(
                    "{}: Zeno loop ({:?}) through {}",
                    v.automaton,
                    v.reason,
                    v.locations.join(", ")
                );
            }
            if !zeno.is_empty() {
                return Err(Failure(1, "network admits Zeno behaviour".into()));
            }
            Ok(match format {
                Format::Human => network_text(&net),
                Format::Json => json(&net),
                Format::Dot => network_dot(&net),
            })
        }
        Command::Transform {
            input,
            pipeline,
            format,
        } => {
            let (unet, _) = prepare(&read_spec(&input)?, pipeline.scale)?;
            Ok(match format {
                Format::Human => network_text(&unet.network),
                Format::Json => json(&unet.network),
                Format::Dot => network_dot(&unet.network),
            })
        }
        Command::Emit {
            input,
            pipeline,
            include_memories,
            out_dir,
        } => {
            let spec = read_spec(&input)?;
            let (unet, divisor) = prepare(&spec, pipeline.scale)?;
            let emitted = emit_model(
                &unet,
                EmitOptions {
                    scale: divisor,
                    invariants: pipeline.invariants,
                },
            );
            let partition = checked_partition(&spec, &unet.network, include_memories);
            let props = emit_properties(&partition, &unet, &emitted.names);
            let stem = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| spec.name.clone());
            let model_path = out_dir.join(format!("{stem}.prism"));
            let props_path = out_dir.join(format!("{stem}.props"));
            for (path, text) in [(&model_path, &emitted.model), (&props_path, &props)] {
                fs::write(path, text).map_err(|e| Failure(1, format!("{}: {e}", path.display())))?;
            }
            Ok(format!("{}\n{}\n", model_path.display(), props_path.display()))
        }
        Command::Classify {
            input,
            pipeline,
            include_memories,
            full_formulas,
            format,
            state_cap,
        } => {
            let spec = read_spec(&input)?;
            let opts = ClassifyOptions {
                scale: pipeline.scale,
                include_memories,
                full_formulas,
                invariants: pipeline.invariants,
                transition_cap: state_cap,
            };
            let (unet, divisor) = prepare(&spec, opts.scale)?;
            let report = classify_network(&spec, &unet, divisor, &opts)?;
            Ok(match format {
                Format::Json => json(&report),
                _ => render_table(&report),
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
