//! Command-line front end. Every command builds one JSON document; text mode
//! prints the same document as `key: value` lines.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

/// Seed used when neither `--seed` nor `ENDORING_SEED` is given.
const DEFAULT_SEED: u64 = 20_100_601;

#[derive(Parser, Debug)]
#[command(
    name = "endoring",
    version,
    about = "Endomorphism rings of ordinary elliptic curves over prime fields"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Master seed for every random choice.
    #[arg(long, global = true, env = "ENDORING_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for relation search; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CurveSpec {
    /// Field characteristic, a prime above 3.
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParamOverrides {
    /// Factor-base norm bound `N`.
    #[arg(long)]
    pub norm_bound: Option<u64>,
    /// Exponent range for the random part of a relation.
    #[arg(long)]
    pub coord_bound: Option<u64>,
    /// Primes below this norm carry random exponents.
    #[arg(long)]
    pub small_norm: Option<u64>,
    /// Minimum number of relations per order test.
    #[arg(long)]
    pub r_min: Option<usize>,
    /// Trials per relation before giving up.
    #[arg(long)]
    pub max_trials: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// The prime with the smaller eigenvalue.
    Plus,
    /// Its conjugate.
    Minus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute End E by climbing the lattice of orders.
    Compute {
        #[command(flatten)]
        curve: CurveSpec,
        #[command(flatten)]
        params: ParamOverrides,
    },
    /// Compute End E by volcano climbing at every prime dividing the index.
    Oracle {
        #[command(flatten)]
        curve: CurveSpec,
    },
    /// Class number, reduced forms and group structure of a discriminant.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Draw one relation of an order.
    Relation {
        #[arg(long, requires_all = ["a", "b"], conflicts_with = "disc")]
        p: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
        /// Discriminant of the order; alone it stands for a curve with
        /// `Z[pi]` of this discriminant.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "p")]
        disc: Option<i64>,
        /// Frobenius trace, with `--q`, placing `--disc` in a lattice.
        #[arg(long, allow_hyphen_values = true, requires = "q")]
        trace: Option<i64>,
        #[arg(long, requires = "trace")]
        q: Option<u64>,
        #[command(flatten)]
        params: ParamOverrides,
    },
    /// Walk the isogeny graph along one prime ideal.
    Act {
        #[command(flatten)]
        curve: CurveSpec,
        #[arg(long)]
        ell: u64,
        #[arg(long, value_enum, default_value_t = Which::Plus)]
        which: Which,
        #[arg(long, default_value_t = 1)]
        steps: u64,
    },
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(x, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", inline(v))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) if m.is_empty() => "{}".into(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let seed = cli.seed;
    let result = match &cli.command {
        Command::Compute { curve, params } => commands::compute(curve, params, seed),
        Command::Oracle { curve } => commands::oracle(curve),
        Command::Classgroup { disc } => commands::classgroup(*disc),
        Command::Relation {
            p,
            a,
            b,
            disc,
            trace,
            q,
            params,
        } => {
            let spec = match (p, a, b) {
                (Some(p), Some(a), Some(b)) => commands::OrderSpec::Curve(CurveSpec { p: *p, a: *a, b: *b }),
                _ => commands::OrderSpec::Disc {
                    disc: disc.expect("clap requires --disc without --p"),
                    frobenius: trace.zip(*q),
                },
            };
            commands::relation(&spec, params, seed)
        }
        Command::Act {
            curve,
            ell,
            which,
            steps,
        } => commands::act(curve, *ell, *which, *steps, seed),
    };
    let (doc, code) = match result {
        Ok(doc) => (doc, 0),
        Err(e) => (
            serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } }),
            e.exit_code(),
        ),
    };
    let text = if cli.json {
        serde_json::to_string_pretty(&doc).expect("values serialize") + "\n"
    } else {
        let mut s = String::new();
        render_text(&doc, 0, &mut s);
        s
    };
    if code == 0 || cli.json {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    ExitCode::from(code as u8)
}
