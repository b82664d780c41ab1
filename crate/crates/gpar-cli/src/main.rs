//! `gpar` — evaluate, score, apply, and export graph pattern rules.
//!
//! Every error path exits non-zero after printing one machine-parseable
//! line of the form `ERR:<code>:<message>` on standard error: `usage`
//! exits 1, `data` exits 2, `cap` exits 3. Output is byte-identical
//! across runs on identical inputs.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gpar_core::apply::{closure, extend_once_all, link_predict, predict_patterns, TripleQuery};
use gpar_core::export::{to_sparql_construct, to_swrl};
use gpar_core::graph::{parse_graph, parse_graph_bag, serialize_graph, GraphBag};
use gpar_core::matcher::{evaluate, Semantics};
use gpar_core::metrics::{metrics_macro, metrics_micro, metrics_single, MetricReport, Regime};
use gpar_core::pattern::parse_pattern;
use gpar_core::reframe::{check_correspondence, DEFAULT_CAP};
use gpar_core::rule::{is_trivial, parse_rules, serialize_simplified, to_simplified, Rule};
use gpar_core::term::Term;
use gpar_core::value::MetricValue;
use gpar_core::Error;

#[derive(Parser)]
#[command(name = "gpar", version, about = "Graph pattern-based association rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write standard output to a file instead.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<String>,

    /// Worker threads for evaluation across graphs and rules.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SemanticsArg {
    /// Evaluation semantics: `nra` (injective) or `hom`.
    #[arg(long, default_value = "nra", value_name = "SEM")]
    semantics: String,
}

#[derive(Args)]
struct GraphInput {
    /// A single-graph file.
    #[arg(long, value_name = "FILE")]
    graph: Option<String>,

    /// A graph-bag file (`@graph <id>` sections).
    #[arg(long, value_name = "FILE")]
    graphs: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a pattern against a graph; one mapping per line.
    Match {
        #[arg(long, value_name = "FILE")]
        graph: String,
        #[arg(long, value_name = "FILE")]
        pattern: String,
        #[command(flatten)]
        semantics: SemanticsArg,
    },
    /// Score rules; one tab-separated record per rule.
    Metrics {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_name = "FILE")]
        rules: String,
        /// Evaluation regime: single, micro, or macro.
        #[arg(long, default_value = "single", value_name = "MODE")]
        mode: String,
        #[command(flatten)]
        semantics: SemanticsArg,
        /// Add approximate decimal columns with this many digits.
        #[arg(long, value_name = "DIGITS")]
        decimal: Option<usize>,
    },
    /// Apply every rule once and print the extended graph.
    Apply {
        #[arg(long, value_name = "FILE")]
        graph: String,
        #[arg(long, value_name = "FILE")]
        rules: String,
        #[command(flatten)]
        semantics: SemanticsArg,
    },
    /// Iterate rule application to a fixpoint and print the closure.
    Closure {
        #[arg(long, value_name = "FILE")]
        graph: String,
        #[arg(long, value_name = "FILE")]
        rules: String,
        #[arg(long, default_value_t = 1000, value_name = "N")]
        max_steps: usize,
        #[command(flatten)]
        semantics: SemanticsArg,
    },
    /// Report each rule as TRIVIAL (with a witness) or NONTRIVIAL.
    Trivial {
        #[arg(long, value_name = "FILE")]
        rules: String,
    },
    /// Rewrite rules into the simplified two-pattern form.
    Rewrite {
        #[arg(long, value_name = "FILE")]
        rules: String,
    },
    /// Predict consequent patterns, or rank link candidates for a query.
    Predict {
        #[arg(long, value_name = "FILE")]
        graph: String,
        #[arg(long, value_name = "FILE")]
        rules: String,
        /// Incomplete triple `s p o` with exactly one `?` hole.
        #[arg(long, value_name = "TRIPLE")]
        query: Option<String>,
        #[command(flatten)]
        semantics: SemanticsArg,
    },
    /// Replay rules as itemset rules on a generated transaction database
    /// and compare every metric.
    Oracle {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_name = "FILE")]
        rules: String,
        /// Transaction cap for materialization.
        #[arg(long, default_value_t = DEFAULT_CAP, value_name = "N")]
        cap: u64,
        #[command(flatten)]
        semantics: SemanticsArg,
    },
    /// Export rules as SPARQL CONSTRUCT queries.
    ExportSparql {
        #[arg(long, value_name = "FILE")]
        rules: String,
        #[arg(long, default_value = "http://example.org#", value_name = "NS")]
        namespace: String,
    },
    /// Export rules as SWRL rules.
    ExportSwrl {
        #[arg(long, value_name = "FILE")]
        rules: String,
        #[arg(long, default_value = "http://example.org#", value_name = "NS")]
        namespace: String,
    },
}

enum Failure {
    Usage(String),
    Data(String),
    Cap(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn report(&self) {
        let (code, msg) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Data(m) => ("data", m),
            Failure::Cap(m) => ("cap", m),
        };
        eprintln!("ERR:{code}:{msg}");
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("cannot read `{path}`: {e}")))
}

fn parse_semantics(arg: &SemanticsArg) -> Result<Semantics, Failure> {
    Semantics::parse(&arg.semantics)
        .ok_or_else(|| Failure::Usage(format!("unknown semantics `{}`", arg.semantics)))
}

/// Rejects `hom` for the operations whose definitions are built on
/// injective matching.
fn require_nra(arg: &SemanticsArg, what: &str) -> Result<(), Failure> {
    match parse_semantics(arg)? {
        Semantics::Nra => Ok(()),
        Semantics::Hom => Err(Failure::Usage(format!(
            "{what} is defined for nra semantics only; hom is not supported"
        ))),
    }
}

fn load_bag(input: &GraphInput) -> Result<GraphBag, Failure> {
    match (&input.graph, &input.graphs) {
        (Some(path), None) => {
            let g = parse_graph(&read_file(path)?)?;
            Ok(GraphBag::singleton("g", g))
        }
        (None, Some(path)) => Ok(parse_graph_bag(&read_file(path)?)?),
        (Some(_), Some(_)) => Err(Failure::Usage(
            "pass either --graph or --graphs, not both".into(),
        )),
        (None, None) => Err(Failure::Usage("one of --graph or --graphs is required".into())),
    }
}

fn load_rules(path: &str) -> Result<Vec<Rule>, Failure> {
    let rules = parse_rules(&read_file(path)?)?;
    if rules.is_empty() {
        return Err(Failure::Data(format!("no rules in `{path}`")));
    }
    Ok(rules)
}

fn parse_query(text: &str) -> Result<TripleQuery, Failure> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != 3 {
        return Err(Failure::Usage(format!(
            "query must have 3 tokens, found {}",
            tokens.len()
        )));
    }
    let holes = tokens.iter().filter(|t| **t == "?").count();
    if holes != 1 {
        return Err(Failure::Usage(format!(
            "query must have exactly one `?` hole, found {holes}"
        )));
    }
    let term = |t: &str| Term::new(t);
    Ok(match (tokens[0], tokens[1], tokens[2]) {
        ("?", p, o) => TripleQuery::Head {
            relation: term(p),
            tail: term(o),
        },
        (s, "?", o) => TripleQuery::Relation {
            head: term(s),
            tail: term(o),
        },
        (s, p, _) => TripleQuery::Tail {
            head: term(s),
            relation: term(p),
        },
    })
}

fn metric_columns(decimal: Option<usize>) -> String {
    let base = [
        "rule_id",
        "regime",
        "tau",
        "e1",
        "e2",
        "joint",
        "support1",
        "support2",
        "confidence",
        "lift",
        "leverage",
        "conviction",
        "applicability",
    ];
    let mut cols: Vec<String> = Vec::new();
    for c in base {
        cols.push(c.to_owned());
        if decimal.is_some() && !matches!(c, "rule_id" | "regime" | "tau" | "e1" | "e2" | "joint")
        {
            cols.push(format!("{c}_dec"));
        }
    }
    format!("# {}", cols.join("\t"))
}

fn metric_row(name: &str, report: &MetricReport, decimal: Option<usize>) -> String {
    let mut cells: Vec<String> = vec![
        name.to_owned(),
        report.regime.to_string(),
        report.stats.tuple_space.to_string(),
        report.stats.antecedent.to_string(),
        report.stats.consequent.to_string(),
        report.stats.joint.to_string(),
    ];
    let values = [
        &report.support_antecedent,
        &report.support_consequent,
        &report.confidence,
        &report.lift,
        &report.leverage,
        &report.conviction,
    ];
    for v in values {
        cells.push(v.to_string());
        if let Some(digits) = decimal {
            cells.push(v.to_decimal(digits));
        }
    }
    match &report.applicability {
        Some(a) => {
            let v = MetricValue::Rational(a.clone());
            cells.push(v.to_string());
            if let Some(digits) = decimal {
                cells.push(v.to_decimal(digits));
            }
        }
        None => {
            cells.push("-".to_owned());
            if decimal.is_some() {
                cells.push("-".to_owned());
            }
        }
    }
    cells.join("\t")
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Match {
            graph,
            pattern,
            semantics,
        } => {
            let g = parse_graph(&read_file(graph)?)?;
            let p = parse_pattern(&read_file(pattern)?)?;
            let sem = parse_semantics(semantics)?;
            let matches = evaluate(&p, &g, sem)?;
            let mut out = String::new();
            for m in &matches {
                let row: Vec<String> = m
                    .bindings()
                    .iter()
                    .map(|(v, t)| format!("?{}={}", v.name(), t.label()))
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            Ok(out)
        }
        Command::Metrics {
            input,
            rules,
            mode,
            semantics,
            decimal,
        } => {
            require_nra(semantics, "the metrics subcommand")?;
            let rules = load_rules(rules)?;
            let mut out = metric_columns(*decimal);
            out.push('\n');
            let rows: Result<Vec<String>, Failure> = match mode.as_str() {
                "single" => {
                    let path = input.graph.as_ref().ok_or_else(|| {
                        Failure::Usage("--mode single expects --graph".into())
                    })?;
                    if input.graphs.is_some() {
                        return Err(Failure::Usage("--mode single expects --graph".into()));
                    }
                    let g = parse_graph(&read_file(path)?)?;
                    run_over_rules(cli.jobs, &rules, |rule| {
                        Ok(metric_row(&rule.name, &metrics_single(&g, rule)?, *decimal))
                    })
                }
                "micro" | "macro" => {
                    let bag = load_bag(input)?;
                    let regime = if mode == "micro" {
                        Regime::Micro
                    } else {
                        Regime::Macro
                    };
                    run_over_rules(cli.jobs, &rules, |rule| {
                        let report = match regime {
                            Regime::Micro => metrics_micro(&bag, rule)?,
                            _ => metrics_macro(&bag, rule)?,
                        };
                        Ok(metric_row(&rule.name, &report, *decimal))
                    })
                }
                other => Err(Failure::Usage(format!(
                    "unknown mode `{other}` (single|micro|macro)"
                ))),
            };
            for row in rows? {
                out.push_str(&row);
                out.push('\n');
            }
            Ok(out)
        }
        Command::Apply {
            graph,
            rules,
            semantics,
        } => {
            require_nra(semantics, "rule application")?;
            let g = parse_graph(&read_file(graph)?)?;
            let simplified = simplify_all(&load_rules(rules)?)?;
            let extended = extend_once_all(&g, &simplified)?;
            Ok(serialize_graph(&extended))
        }
        Command::Closure {
            graph,
            rules,
            max_steps,
            semantics,
        } => {
            require_nra(semantics, "closure")?;
            let g = parse_graph(&read_file(graph)?)?;
            let simplified = simplify_all(&load_rules(rules)?)?;
            let result = closure(&g, &simplified, *max_steps)?;
            let mut out = serialize_graph(&result.graph);
            if result.fixpoint {
                out.push_str(&format!("FIXPOINT steps={}\n", result.steps));
            } else {
                out.push_str(&format!("PARTIAL steps={}\n", result.steps));
            }
            Ok(out)
        }
        Command::Trivial { rules } => {
            let mut out = String::new();
            for rule in &load_rules(rules)? {
                match is_trivial(rule) {
                    (true, Some(witness)) => {
                        out.push_str(&format!("{}\tTRIVIAL\t{}\n", rule.name, witness));
                    }
                    _ => out.push_str(&format!("{}\tNONTRIVIAL\n", rule.name)),
                }
            }
            Ok(out)
        }
        Command::Rewrite { rules } => {
            let simplified = simplify_all(&load_rules(rules)?)?;
            Ok(serialize_simplified(&simplified))
        }
        Command::Predict {
            graph,
            rules,
            query,
            semantics,
        } => {
            require_nra(semantics, "prediction")?;
            let g = parse_graph(&read_file(graph)?)?;
            let simplified = simplify_all(&load_rules(rules)?)?;
            match query {
                Some(text) => {
                    let query = parse_query(text)?;
                    let predictions = link_predict(&g, &simplified, &query)?;
                    let mut out = String::new();
                    for p in &predictions {
                        out.push_str(&format!(
                            "{}\t{}\t{}\n",
                            p.term.label(),
                            p.rule,
                            p.confidence
                        ));
                    }
                    Ok(out)
                }
                None => {
                    let mut out = String::new();
                    for rule in &simplified {
                        for pattern in predict_patterns(&g, rule)? {
                            out.push_str(&format!("@prediction {}\n", rule.name));
                            out.push_str(&gpar_core::serialize_pattern(&pattern));
                        }
                    }
                    Ok(out)
                }
            }
        }
        Command::Oracle {
            input,
            rules,
            cap,
            semantics,
        } => {
            require_nra(semantics, "the oracle subcommand")?;
            let bag = load_bag(input)?;
            let rules = load_rules(rules)?;
            let mut out = String::new();
            for rule in &rules {
                let report = check_correspondence(&bag, rule, *cap)?;
                out.push_str(&format!("{}\tdb_size\t{}\n", rule.name, report.db_size));
                for pair in &report.pairs {
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\n",
                        rule.name,
                        pair.name,
                        pair.graph_value,
                        pair.itemset_value,
                        if pair.equal() { "equal" } else { "DIFFERENT" }
                    ));
                }
                out.push_str(&format!(
                    "{}\tALL_EQUAL\t{}\n",
                    rule.name, report.all_equal
                ));
            }
            Ok(out)
        }
        Command::ExportSparql { rules, namespace } => {
            let simplified = simplify_all(&load_rules(rules)?)?;
            let mut out = String::new();
            for rule in &simplified {
                out.push_str(&format!("# rule: {}\n", rule.name));
                out.push_str(&to_sparql_construct(rule, namespace));
                out.push('\n');
            }
            Ok(out)
        }
        Command::ExportSwrl { rules, namespace } => {
            let simplified = simplify_all(&load_rules(rules)?)?;
            let mut out = String::new();
            for rule in &simplified {
                out.push_str(&format!("# rule: {}\n", rule.name));
                out.push_str(&to_swrl(rule, namespace)?);
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn simplify_all(rules: &[Rule]) -> Result<Vec<gpar_core::SimplifiedRule>, Failure> {
    rules
        .iter()
        .map(|r| to_simplified(r).map_err(Failure::from))
        .collect()
}

/// Applies a per-rule action, in parallel when requested, emitting the
/// results in rule order regardless of completion order.
fn run_over_rules<F>(jobs: Option<usize>, rules: &[Rule], action: F) -> Result<Vec<String>, Failure>
where
    F: Fn(&Rule) -> Result<String, Failure> + Sync,
{
    if jobs.is_some() {
        use rayon::prelude::*;
        rules.par_iter().map(|r| action(r)).collect()
    } else {
        rules.iter().map(action).collect()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return ExitCode::SUCCESS;
            }
            eprintln!("ERR:usage:{}", e.kind());
            return ExitCode::from(1);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            Failure::Usage("--jobs must be at least 1".into()).report();
            return ExitCode::from(1);
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(output) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, output) {
                    Failure::Data(format!("cannot write `{path}`: {e}")).report();
                    return ExitCode::from(2);
                }
            } else {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(output.as_bytes()).is_err() {
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            failure.report();
            ExitCode::from(failure.exit_code())
        }
    }
}
