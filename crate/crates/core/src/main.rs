use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use private_littlestone::cli::{commands, error_json, load_class, AuditInstance, ClassSource, DistSpec, ExperimentSpec, LearnerKind};
use private_littlestone::learners::{LearnerConfig, ReduceTreeConfig};
use private_littlestone::{Error, Result};

#[derive(Parser)]
#[command(name = "plearn", version, about = "Private proper learning of finite Littlestone classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ClassArg {
    /// Class file or generator spec (thresholds:16, negpt:8, all:3, random:4:6:seed).
    #[arg(long)]
    class: String,
}

#[derive(Subcommand)]
enum Command {
    /// Littlestone and VC dimensions with a shattered-tree witness.
    Dims(ClassArg),
    /// k-irreducibility, irreducibility order and a reducing witness.
    Irreducible {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long, short)]
        k: u64,
    },
    /// The SOA classifier of the class.
    Soa(ClassArg),
    /// ReduceTree on a distribution.
    ReduceTree {
        #[command(flatten)]
        class: ClassArg,
        /// Distribution file, or uniform[:target] / random[:target].
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k_prime: u64,
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        #[arg(long)]
        alpha_delta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reject distributions no class member labels perfectly.
        #[arg(long)]
        strict: bool,
    },
    /// Run a learner over seeded trials and emit a report.
    Learn(LearnArgs),
    /// Differential privacy audits.
    Dp {
        #[command(subcommand)]
        command: DpCommand,
    },
    /// A named check suite.
    Suite {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum DpCommand {
    /// Exhaustive (eps, delta) check over adjacent micro inputs.
    Audit {
        /// exponential, counting, generic_learner or sparse_selection.
        mechanism: String,
        /// JSON instance file; defaults apply to missing fields.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
    },
}

#[derive(Args)]
struct LearnArgs {
    /// Experiment spec JSON; flags below override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    class: Option<String>,
    /// Distribution file, or uniform[:target] / random[:target].
    #[arg(long)]
    dist: Option<String>,
    /// LearnerConfig JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum)]
    learner: Option<Learner>,
    #[arg(long)]
    desk_scale: bool,
    /// Comma-separated eta values for the accuracy curve.
    #[arg(long, value_delimiter = ',')]
    curve: Vec<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Learner {
    Ppp,
    Poly,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn learn_spec(a: LearnArgs) -> Result<ExperimentSpec> {
    let mut spec = match &a.spec {
        Some(p) => read_json::<ExperimentSpec>(p)?,
        None => ExperimentSpec {
            class: ClassSource::parse(a.class.as_deref().ok_or_else(|| Error::Argument("--class or --spec is required".into()))?)?,
            distribution: DistSpec::parse("random")?,
            learner: LearnerKind::Ppp,
            config: LearnerConfig::new(1.0, 1e-6, 0.25, 0.1),
            trials: 1,
            seed: a.seed.ok_or_else(|| Error::Argument("--seed is required without --spec".into()))?,
            output: None,
            curve: Vec::new(),
        },
    };
    if let Some(c) = &a.class {
        spec.class = ClassSource::parse(c)?;
    }
    if let Some(d) = &a.dist {
        spec.distribution = DistSpec::parse(d)?;
    }
    if let Some(p) = &a.config {
        spec.config = read_json(p)?;
    }
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    if let Some(t) = a.trials {
        spec.trials = t;
    }
    if let Some(l) = a.learner {
        spec.learner = match l {
            Learner::Ppp => LearnerKind::Ppp,
            Learner::Poly => LearnerKind::Poly,
        };
    }
    if a.desk_scale {
        spec.config.desk_scale = true;
    }
    if !a.curve.is_empty() {
        spec.curve = a.curve;
    }
    // the binary writes the report itself, in the requested format
    spec.output = None;
    Ok(spec)
}

fn run(cli: Cli) -> Result<String> {
    let out = match cli.command {
        Command::Dims(c) => commands::dims(&load_class(&c.class)?)?,
        Command::Irreducible { class, k } => commands::irreducible(&load_class(&class.class)?, k)?,
        Command::Soa(c) => commands::soa_command(&load_class(&c.class)?)?,
        Command::ReduceTree {
            class,
            dist,
            n,
            k_prime,
            gamma,
            alpha_delta,
            seed,
            strict,
        } => {
            let mut cfg = ReduceTreeConfig::new(n, k_prime, gamma).strict(strict);
            cfg.alpha_delta = alpha_delta;
            commands::reduce_tree_command(&load_class(&class.class)?, &DistSpec::parse(&dist)?, &cfg, seed)?
        }
        Command::Learn(a) => commands::learn(&learn_spec(a)?)?.1,
        Command::Dp {
            command:
                DpCommand::Audit {
                    mechanism,
                    instance,
                    epsilon,
                    delta,
                },
        } => {
            let inst = match &instance {
                Some(p) => read_json(p)?,
                None => AuditInstance::default(),
            };
            let r = commands::dp_audit(&mechanism, &inst, epsilon, delta)?;
            commands::CommandOutput {
                json: serde_json::to_value(&r)?,
                csv: None,
            }
        }
        Command::Suite { name, seed } => commands::suite(&name, seed)?,
    };
    let failed_suite = out.json.get("checks").is_some() && out.json["passed"] == false;
    let text = match (cli.format, out.csv) {
        (Format::Csv, Some(csv)) => csv,
        (Format::Csv, None) => return Err(Error::Argument("this command has no CSV output".into())),
        (Format::Json, _) => serde_json::to_string_pretty(&out.json)? + "\n",
    };
    let text = match &cli.out {
        Some(p) => {
            std::fs::write(p, &text)?;
            String::new()
        }
        None => text,
    };
    if failed_suite {
        print!("{text}");
        return Err(Error::Contract("suite checks failed".into()));
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
