use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use entcap::capreport::{capacity_report, ReportOptions};
use entcap::codingsearch::{c1_exact, exhaustive_achievable, SearchConfig, SearchOutcome, DEFAULT_BUDGET};
use entcap::netmodel::{min_cut, scale, tensor_power};
use entcap::reproduce::{run_claim, CLAIMS};
use entcap::tnrank::{estimate_r1_with, PrimeField, DEFAULT_PRIME};
use entcap::transforms::{round_networks, sandwich_check, split_cycle_edge, teleport_reduce_scaled, SplitSpec};
use entcap::{fixtures, BigUint, Error, Exec, Network};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "entcap", version, about = "Capacities of networks with multiplicative edge dimensions")]
struct Cli {
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact multiplicative min-cut and a witness source side.
    Mincut { file: PathBuf },
    /// Randomized lower bound on the tensor-network rank.
    Rank {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive one-shot coding search on a directed acyclic network.
    C1 {
        file: PathBuf,
        /// Decide whether exactly this many messages can be sent.
        #[arg(long)]
        l: Option<usize>,
        /// Find the largest transmissible alphabet up to this size.
        #[arg(long)]
        exact_up_to: Option<usize>,
        /// Enumerate every source encoder instead of one per relabeling.
        #[arg(long)]
        no_bijection_reduction: bool,
    },
    /// Apply a transformation and print the result.
    Transform {
        file: PathBuf,
        /// split:EDGE:A:B, power:N, scale:K, round:N or teleport:K
        #[arg(long)]
        op: String,
    },
    /// Full capacity report.
    Bounds {
        file: PathBuf,
        /// Also evaluate the network split around EDGE as A x B.
        #[arg(long = "split", value_name = "EDGE:A:B")]
        splits: Vec<String>,
        /// Enumerate directions of terminal edges too.
        #[arg(long)]
        all_orientations: bool,
        /// Independently known tensor rank.
        #[arg(long)]
        r1_exact: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Power-of-two sandwich of the rank of the n-th tensor power.
    Sandwich {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recompute the named claims and print expected against computed values.
    Reproduce {
        #[arg(long, conflicts_with = "all")]
        claim: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// List the shipped fixtures or print one.
    Fixtures { name: Option<String> },
}

enum Failure {
    Input(String),
    Budget(String),
    /// A partial result printed before exiting with the budget code.
    BudgetReport(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn big(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(small) => json!(small),
        Err(_) => json!(n.to_string()),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

fn load(file: &PathBuf) -> Result<Network, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let net = Network::from_json(&text)?;
    net.validated()?;
    Ok(net)
}

fn budget() -> Result<u64, Failure> {
    match std::env::var("ENTCAP_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Input(format!("ENTCAP_BUDGET `{v}` is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn parse_split(text: &str) -> Result<SplitSpec, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [edge, a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok(SplitSpec::new(*edge, a, b)),
            _ => Err(Failure::Input(format!("bad split factors in `{text}`"))),
        },
        _ => Err(Failure::Input(format!("expected EDGE:A:B, got `{text}`"))),
    }
}

fn parse_num<T: std::str::FromStr>(text: &str) -> Result<T, Failure> {
    text.parse().map_err(|_| Failure::Input(format!("`{text}` is not a valid number")))
}

fn outcome_json(outcome: &SearchOutcome) -> (Value, Value) {
    match outcome {
        SearchOutcome::Witness(pt) => (json!("witness"), serde_json::to_value(pt).expect("protocol")),
        SearchOutcome::Impossible => (json!("impossible"), Value::Null),
        SearchOutcome::BudgetExceeded => (json!("budget_exceeded"), Value::Null),
    }
}

fn run(cli: Cli) -> Outcome {
    let exec = if cli.threads == Some(1) { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Mincut { file } => {
            let net = load(&file)?;
            let cut = min_cut(&net)?;
            let crossing: Vec<&str> = cut.crossing_edges(&net).iter().map(|e| e.id.as_str()).collect();
            Ok(pretty(&json!({
                "mc": big(&cut.value),
                "s_side": cut.s_side,
                "crossing_edges": crossing,
            })))
        }
        Command::Rank { file, prime, trials, seed } => {
            let net = load(&file)?;
            let est = estimate_r1_with(&net, PrimeField::new(prime)?, trials, seed, exec)?;
            Ok(pretty(&json!({
                "r1_lower": est.r1_lower,
                "mc_upper": big(&est.mc_upper),
                "certified_exact": est.is_certified_exact(),
                "failure_bound": est.failure_bound_f64(),
                "failure_bound_exact": est.failure_bound.to_string(),
                "prime": prime,
                "seed": seed,
                "ranks": est.ranks,
            })))
        }
        Command::C1 {
            file,
            l,
            exact_up_to,
            no_bijection_reduction,
        } => {
            let net = load(&file)?;
            let cfg = SearchConfig {
                node_budget: budget()?,
                fix_source_bijection: !no_bijection_reduction,
                exec,
                ..SearchConfig::new(l.unwrap_or(1))
            };
            match (l, exact_up_to) {
                (Some(l), None) => {
                    let report = exhaustive_achievable(&net, &cfg)?;
                    let (outcome, witness) = outcome_json(&report.outcome);
                    let text = pretty(&json!({
                        "l": l,
                        "outcome": outcome,
                        "witness": witness,
                        "space_estimate": big(&report.space_estimate),
                    }));
                    // depends on how the search was sharded, so kept off stdout
                    eprintln!("{} candidate tables examined", report.tables_tried);
                    match report.outcome {
                        SearchOutcome::BudgetExceeded => Err(Failure::BudgetReport(text)),
                        _ => Ok(text),
                    }
                }
                (None, Some(cap)) => {
                    let r = c1_exact(&net, cap, &cfg)?;
                    let searched: Vec<Value> = r
                        .searched
                        .iter()
                        .map(|(l, o)| json!({"l": l, "outcome": outcome_json(o).0}))
                        .collect();
                    Ok(pretty(&json!({
                        "c1": r.c1,
                        "mc_directed": big(&r.mc_directed),
                        "witness": r.witness,
                        "searched": searched,
                    })))
                }
                _ => Err(Failure::Input("give exactly one of --l and --exact-up-to".into())),
            }
        }
        Command::Transform { file, op } => {
            let net = load(&file)?;
            let (name, arg) = op.split_once(':').unwrap_or((op.as_str(), ""));
            match name {
                "split" => Ok(split_cycle_edge(&net, &parse_split(arg)?)?.to_canonical_json()),
                "power" => Ok(tensor_power(&net, parse_num(arg)?)?.to_canonical_json()),
                "scale" => Ok(scale(&net, parse_num(arg)?)?.to_canonical_json()),
                "round" => {
                    let pair = round_networks(&net, parse_num(arg)?)?;
                    Ok(pretty(&json!({
                        "lower": pair.lower,
                        "upper": pair.upper,
                        "c1": pair.c1,
                        "c2": pair.c2,
                    })))
                }
                "teleport" => {
                    let t = teleport_reduce_scaled(&net, parse_num(arg)?)?;
                    Ok(pretty(&json!({
                        "through_rank": big(&t.through_rank),
                        "residual": t.residual,
                    })))
                }
                _ => Err(Failure::Input(format!("unknown transform `{op}`"))),
            }
        }
        Command::Bounds {
            file,
            splits,
            all_orientations,
            r1_exact,
            prime,
            trials,
            seed,
        } => {
            let net = load(&file)?;
            let opts = ReportOptions {
                splits: splits.iter().map(|s| parse_split(s)).collect::<Result<_, _>>()?,
                all_orientations,
                prime,
                rank_trials: trials,
                seed,
                coding_budget: budget()?,
                r1_exact,
                exec,
            };
            let report = capacity_report(&net, &opts)?;
            if report.ok {
                Ok(report.to_json())
            } else {
                Err(Failure::Assertion(report.to_json()))
            }
        }
        Command::Sandwich { file, n, seed } => {
            let net = load(&file)?;
            let field = PrimeField::new(DEFAULT_PRIME)?;
            let r = sandwich_check(&net, n, |p| Ok(estimate_r1_with(p, field, 5, seed, exec)?.r1_lower))?;
            let mut v = serde_json::to_value(&r).expect("report");
            v["holds"] = json!(r.holds());
            if r.holds() {
                Ok(pretty(&v))
            } else {
                Err(Failure::Assertion(pretty(&v)))
            }
        }
        Command::Reproduce { claim, all } => {
            let names: Vec<String> = match (claim, all) {
                (Some(c), _) => vec![c],
                (None, _) => CLAIMS.iter().map(|(n, _)| n.to_string()).collect(),
            };
            let mut text = String::new();
            let mut failed = false;
            for name in names {
                let out = run_claim(&name, exec)?;
                failed |= !out.pass;
                text.push_str(&format!("{:<22} {}\n", out.name, out.summary));
                for d in &out.details {
                    text.push_str(&format!("    {d}\n"));
                }
            }
            if failed {
                Err(Failure::Assertion(text))
            } else {
                Ok(text)
            }
        }
        Command::Fixtures { name } => match name {
            Some(n) => Ok(fixtures::raw(&n)?.to_string()),
            None => Ok(fixtures::names().map(|n| format!("{n}\n")).collect()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global thread pool is configured once");
    }
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Assertion(text)) => {
            print!("{text}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::BudgetReport(text)) => {
            print!("{text}");
            ExitCode::from(3)
        }
    }
}
