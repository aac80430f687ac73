use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use revzimin::classic;
use revzimin::corpus::{self, CorpusSummary};
use revzimin::decide::{self, DecideConfig, Status, SCHEMA_VERSION};
use revzimin::morphism::{self, Outcome};
use revzimin::omega::parse_exponent;
use revzimin::oracle::{self, OracleBudget};
use revzimin::zimin::{self, ZiminTemplate};
use revzimin::{Error, FormulaR, SearchBudget, Word};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

/// Decide avoidability of patterns and formulas with reversal.
#[derive(Parser)]
#[command(name = "revzimin", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Longest image tried by morphism searches.
    #[arg(long, global = true, default_value_t = SearchBudget::DEFAULT_IMAGE_LEN)]
    max_image_len: usize,
    /// Step budget of each morphism search.
    #[arg(long, global = true, default_value_t = SearchBudget::DEFAULT_STEPS)]
    max_steps: u64,
    /// Largest alphabet for avoiding-word searches.
    #[arg(long, global = true, default_value_t = 5)]
    alphabet_size: usize,
    /// Length of avoiding words searched as evidence.
    #[arg(long, global = true, default_value_t = 50)]
    max_word_len: usize,
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for corpus runs; 0 means one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a formula and print the verdict with its certificate.
    Decide {
        formula: String,
        /// Prefix length for lemma witness verification.
        #[arg(long, default_value_t = 300)]
        prefix_len: usize,
        /// Image bound for lemma witness verification.
        #[arg(long, default_value_t = 30)]
        image_bound: usize,
        /// Skip the avoiding-word evidence search.
        #[arg(long)]
        no_evidence: bool,
    },
    /// Search for a division of the first formula into the second.
    Divides { phi: String, psi: String },
    /// Search for an occurrence of a formula in a word.
    Occurs {
        formula: String,
        word: String,
        /// Require all fragments to share one image.
        #[arg(long)]
        common_image: bool,
    },
    /// Erase mirror marks.
    Flatten { formula: String },
    /// Adjacency graph, free sets and a reduction chain of a formula without reversal.
    Reduce { formula: String },
    /// Statistics and template of Z_{m,n}.
    Zimin {
        m: usize,
        n: usize,
        /// Also list the fragments (small cases only).
        #[arg(long)]
        list: bool,
    },
    /// Generate a word over `q` letters with no factor of exponent >= alpha.
    Powerfree {
        q: usize,
        alpha: String,
        len: usize,
        #[arg(long, default_value_t = 2_000_000)]
        max_nodes: u64,
    },
    /// Search for a word avoiding a formula.
    Avoid {
        formula: String,
        #[arg(long, default_value_t = 200_000)]
        max_nodes: u64,
        /// Steps shared by the incremental occurrence checks
        #[arg(long, default_value_t = 100_000_000)]
        max_oracle_steps: u64,
    },
    /// Delete all two-way variables and decide what is left.
    Probe { formula: String },
    /// Decide every entry of a JSON-lines corpus.
    Corpus { path: String },
}

struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

fn parse_formula(text: &str) -> Result<FormulaR, Failure> {
    text.parse().map_err(|e: Error| Failure(EXIT_USAGE, format!("cannot parse {text:?}: {e}")))
}

fn outcome_json<T: serde::Serialize>(o: &Outcome<T>, key: &str) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "status": o.status() });
    if let Some(x) = o.found() {
        v[key] = serde_json::to_value(x).expect("serializable");
    }
    if let Outcome::Incomplete(i) = o {
        v["reason"] = json!(i.to_string());
    }
    v
}

fn versioned(mut v: Value) -> Value {
    v["schema_version"] = json!(SCHEMA_VERSION);
    v
}

fn run(cli: Cli) -> Result<(Value, u8), Failure> {
    let o = &cli.opts;
    let budget = SearchBudget::new(o.max_image_len, o.max_steps);
    let mut cfg = DecideConfig { budget, ..DecideConfig::default() };
    cfg.evidence.max_alphabet = o.alphabet_size;
    cfg.evidence.length = o.max_word_len;
    match cli.cmd {
        Cmd::Decide { formula, prefix_len, image_bound, no_evidence } => {
            let phi = parse_formula(&formula)?;
            cfg.witness.prefix_len = prefix_len;
            cfg.witness.image_bound = image_bound;
            cfg.evidence.enabled = !no_evidence;
            let v = decide::decide(&phi, &cfg);
            let code = if v.status == Status::Unknown { EXIT_UNKNOWN } else { 0 };
            Ok((v.to_json(), code))
        }
        Cmd::Divides { phi, psi } => {
            let out = morphism::divides(&parse_formula(&phi)?, &parse_formula(&psi)?, &budget);
            Ok((outcome_json(&out, "morphism"), 0))
        }
        Cmd::Occurs { formula, word, common_image } => {
            let phi = parse_formula(&formula)?;
            let w: Word = word.parse()?;
            let out = if common_image {
                morphism::occurs_common_image(&phi, &w, &budget)
            } else {
                morphism::occurs(&phi, &w, &budget)
            };
            Ok((outcome_json(&out, "morphism"), 0))
        }
        Cmd::Flatten { formula } => {
            let phi = parse_formula(&formula)?;
            let v = json!({ "formula": phi.to_string(), "flattened": phi.flatten().to_string() });
            Ok((versioned(v), 0))
        }
        Cmd::Reduce { formula } => {
            let phi = parse_formula(&formula)?;
            let graph = classic::adjacency_graph(&phi)?;
            let components: Vec<Vec<String>> = graph
                .nontrivial_components()
                .iter()
                .map(|c| c.iter().map(ToString::to_string).collect())
                .collect();
            let free: Vec<Vec<String>> = classic::free_sets(&phi)?
                .iter()
                .map(|s| s.iter().map(|v| v.name().to_string()).collect())
                .collect();
            let chain = classic::is_reducible(&phi)?;
            let v = json!({
                "formula": phi.to_string(),
                "components": components,
                "free_sets": free,
                "reducible": chain.is_some(),
                "chain": chain,
            });
            Ok((versioned(v), 0))
        }
        Cmd::Zimin { m, n, list } => {
            let t = ZiminTemplate::new(m, n)?;
            let mut v = serde_json::to_value(zimin::stats(m, n)?).expect("serializable");
            v["template"] = json!(t.render());
            if list {
                let frags = t.enumerate_fragments()?;
                v["fragment_list"] = json!(frags.fragments().iter().map(ToString::to_string).collect::<Vec<_>>());
            }
            Ok((versioned(v), 0))
        }
        Cmd::Powerfree { q, alpha, len, max_nodes } => {
            let alpha = parse_exponent(&alpha)?;
            let r = oracle::generate_power_free(q, alpha, len, &OracleBudget::nodes(max_nodes))?;
            let mut v = serde_json::to_value(&r).expect("serializable");
            if let Some(w) = r.word() {
                v["max_exponent"] = json!(w.max_exponent()?.to_string());
            }
            Ok((versioned(v), 0))
        }
        Cmd::Avoid { formula, max_nodes, max_oracle_steps } => {
            let phi = parse_formula(&formula)?;
            let budget = OracleBudget { max_nodes, max_steps: max_oracle_steps };
            let r = oracle::search_avoiding_word(&phi, o.alphabet_size, o.max_word_len, &budget)?;
            let mut v = serde_json::to_value(r.report()).expect("serializable");
            v["alphabet_size"] = json!(o.alphabet_size);
            Ok((versioned(v), 0))
        }
        Cmd::Probe { formula } => {
            let r = decide::conjecture2_probe(&parse_formula(&formula)?, &cfg)?;
            Ok((versioned(serde_json::to_value(r).expect("serializable")), 0))
        }
        Cmd::Corpus { path } => {
            let text = std::fs::read_to_string(&path).map_err(|e| Failure(EXIT_USAGE, format!("{path}: {e}")))?;
            let entries = corpus::parse_corpus(&text)?;
            cfg.evidence.enabled = false;
            let results = corpus::run_corpus(&entries, &cfg, o.jobs)?;
            let summary = CorpusSummary::of(&results);
            eprintln!("{:>6}  {:<28} {:<12} {:<12}", "line", "formula", "expected", "status");
            for r in &results {
                let expected = r.expected_status.map_or("-".to_string(), |s| s.to_string());
                let mark = if r.matches { "" } else { "  MISMATCH" };
                eprintln!("{:>6}  {:<28} {:<12} {:<12}{mark}", r.line, r.formula, expected, r.status.to_string());
            }
            eprintln!(
                "total {}  unavoidable {}  avoidable {}  unknown {}  mismatches {}",
                summary.total,
                summary.unavoidable,
                summary.avoidable,
                summary.unknown,
                summary.mismatches.len()
            );
            let code = if summary.mismatches.is_empty() { 0 } else { EXIT_MISMATCH };
            Ok((versioned(json!({ "summary": summary, "results": results })), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.opts.pretty;
    match run(cli) {
        Ok((value, code)) => {
            let text = if pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            };
            println!("{}", text.expect("json"));
            ExitCode::from(code)
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
