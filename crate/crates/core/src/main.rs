use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pt_variant::classification::{build_isomorphism, canonical_rep, enumerate_types};
use pt_variant::oracle::{
    cayley_table, find_isomorphism, verify_isomorphism, CAYLEY_LIMIT, DEFAULT_SEARCH_BUDGET,
};
use pt_variant::partition::partition_count;
use pt_variant::suite::{run_suite, SuiteConfig};
use pt_variant::transform::DEFAULT_EXHAUSTIVE_LIMIT;
use pt_variant::variant::predicted_class_multiset;
use pt_variant::{Error, PartialTransformation, VariantSemigroup};

#[derive(Debug, Parser)]
#[command(
    name = "pt-variant",
    version,
    about = "Variants of the partial transformation semigroup PT_n"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    /// Ground set size; inferred from the literals when omitted.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Seed for sampled checks.
    #[arg(long, default_value_t = SuiteConfig::default().seed, global = true)]
    seed: u64,

    /// Node budget for the backtracking isomorphism search.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET, global = true)]
    budget: u64,

    /// Largest n for operations that walk all of PT_n.
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT, global = true)]
    max_n: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Aligned text for people.
    Human,
    /// One JSON record per line.
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Type vector, rank and number of undefined points of a transformation.
    Type { a: String },
    /// Annihilator counts of (PT_n, *_a), brute force next to closed forms.
    Annih { a: String },
    /// Classes of the relation x ~_a y.
    Classes {
        a: String,
        /// List every class with its members.
        #[arg(long)]
        full: bool,
    },
    /// One row per isomorphism class of variants of PT_n.
    Classify { n: usize },
    /// Explicit isomorphism (PT_n, *_a) -> (PT_n, *_b).
    Iso {
        a: String,
        b: String,
        /// Confirm with the Cayley-table oracle even when n > 2.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the property suite at degree n.
    Verify { n: usize },
    /// Export the Cayley table of (PT_n, *_a).
    Cayley {
        a: String,
        /// Write the element labels to this file.
        #[arg(long)]
        labels: Option<std::path::PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Parse = 1,
    Verification = 2,
    Budget = 3,
}

fn status_of(err: &Error) -> Status {
    match err {
        Error::OverBudget { .. } | Error::SearchBudgetExhausted { .. } => Status::Budget,
        _ => Status::Parse,
    }
}

/// Output of one request. Human text and records carry the same numbers.
struct Report {
    subcommand: &'static str,
    inputs: Value,
    seed: Option<u64>,
    budget: Value,
    human: String,
    records: Vec<Value>,
    status: Status,
}

impl Report {
    fn new(subcommand: &'static str, inputs: Value, cli: &Cli) -> Self {
        Self {
            subcommand,
            inputs,
            seed: None,
            budget: json!({ "search_nodes": cli.budget, "max_n": cli.max_n }),
            human: String::new(),
            records: Vec::new(),
            status: Status::Ok,
        }
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.human.push_str(text.as_ref());
        self.human.push('\n');
    }

    fn record(&mut self, results: Value) {
        self.records.push(results);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human.clone(),
            Format::Json => self.records.iter().fold(String::new(), |mut out, results| {
                let record = json!({
                    "subcommand": self.subcommand,
                    "inputs": self.inputs,
                    "results": results,
                    "seed": self.seed,
                    "budget": self.budget,
                });
                let _ = writeln!(out, "{record}");
                out
            }),
        }
    }
}

fn parse_literal(text: &str, n: Option<usize>) -> pt_variant::Result<PartialTransformation> {
    match n {
        Some(n) => PartialTransformation::parse(text, n),
        None => PartialTransformation::parse_inferred(text),
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Type { a } => type_report(cli, &parse_literal(a, cli.n)?),
        Command::Annih { a } => annih_report(cli, &parse_literal(a, cli.n)?),
        Command::Classes { a, full } => classes_report(cli, &parse_literal(a, cli.n)?, *full),
        Command::Classify { n } => classify_report(cli, *n),
        Command::Iso { a, b, oracle } => {
            let a = parse_literal(a, cli.n)?;
            let b = parse_literal(b, cli.n.or(Some(a.degree())))?;
            iso_report(cli, &a, &b, *oracle)
        }
        Command::Verify { n } => verify_report(cli, *n),
        Command::Cayley { a, labels } => {
            cayley_report(cli, &parse_literal(a, cli.n)?, labels.as_deref())
        }
    }
}

fn type_report(cli: &Cli, a: &PartialTransformation) -> Result<Report, Error> {
    let mut r = Report::new("type", json!({ "a": a, "n": a.degree() }), cli);
    let t = a.type_vector();
    r.line(format!("type  {t}"));
    r.line(format!("rank  {}", a.rank()));
    r.line(format!("z     {}", a.undefined_count()));
    r.record(json!({ "type": t, "rank": a.rank(), "z": a.undefined_count() }));
    Ok(r)
}

fn annih_report(cli: &Cli, a: &PartialTransformation) -> Result<Report, Error> {
    let mut r = Report::new("annih", json!({ "a": a, "n": a.degree() }), cli);
    let census = VariantSemigroup::new(a.clone()).annihilator_census_with_limit(cli.max_n)?;
    let (o, p) = (census.observed, census.predicted);
    r.line(format!("{:<10} {:>12} {:>12}", "kind", "brute", "formula"));
    for (kind, brute, formula) in [
        ("left", o.left, p.left),
        ("right", o.right, p.right),
        ("two-sided", o.two_sided, p.two_sided),
    ] {
        r.line(format!("{kind:<10} {brute:>12} {formula:>12}"));
    }
    r.line(if census.agrees() {
        "agreement PASS"
    } else {
        "agreement FAIL"
    });
    r.record(json!({
        "brute": { "left": o.left.to_string(), "right": o.right.to_string(), "two_sided": o.two_sided.to_string() },
        "formula": { "left": p.left.to_string(), "right": p.right.to_string(), "two_sided": p.two_sided.to_string() },
        "agrees": census.agrees(),
    }));
    if !census.agrees() {
        r.status = Status::Verification;
    }
    Ok(r)
}

fn classes_report(cli: &Cli, a: &PartialTransformation, full: bool) -> Result<Report, Error> {
    let mut r = Report::new(
        "classes",
        json!({ "a": a, "n": a.degree(), "full": full }),
        cli,
    );
    let classes = VariantSemigroup::new(a.clone()).sim_classes_with_limit(cli.max_n)?;
    r.line(format!("classes  {}", classes.class_count()));
    r.line(format!("sizes    {}", classes.size_multiset()));
    let mut listing = Vec::new();
    if full {
        for (key, members) in classes.iter() {
            let names: Vec<String> = members.iter().map(ToString::to_string).collect();
            r.line(format!("[{key}] {}: {}", members.len(), names.join(" ")));
            listing.push(json!({ "key": key, "members": names }));
        }
    }
    let sizes: Vec<String> = classes
        .size_multiset()
        .expanded()
        .iter()
        .map(u128::to_string)
        .collect();
    let mut results = json!({ "class_count": classes.class_count(), "sizes": sizes });
    if full {
        results["classes"] = Value::Array(listing);
    }
    r.record(results);
    Ok(r)
}

fn classify_report(cli: &Cli, n: usize) -> Result<Report, Error> {
    let mut r = Report::new("classify", json!({ "n": n }), cli);
    let types = enumerate_types(n)?;
    r.line(format!(
        "{:>4}  {:<16} {:<16} {:<28} {}",
        "#", "type", "representative", "class sizes", "annihilators (left, right, two-sided)"
    ));
    for (row, t) in types.iter().enumerate() {
        let rep = canonical_rep(t)?;
        let sizes = predicted_class_multiset(t)?;
        let ann = VariantSemigroup::new(rep.clone()).predicted_annihilators()?;
        r.line(format!(
            "{:>4}  {:<16} {:<16} {:<28} ({}, {}, {})",
            row + 1,
            t.to_string(),
            rep.to_string(),
            sizes.to_string(),
            ann.left,
            ann.right,
            ann.two_sided
        ));
        r.record(json!({
            "row": row + 1,
            "type": t,
            "representative": rep,
            "class_sizes": sizes.to_string(),
            "annihilators": { "left": ann.left.to_string(), "right": ann.right.to_string(), "two_sided": ann.two_sided.to_string() },
        }));
    }
    let terms: Vec<String> = (0..=n).map(|k| format!("p({k})")).collect();
    let counts: Vec<String> = (0..=n).map(|k| partition_count(k).to_string()).collect();
    r.line(format!("{} = {}", types.len(), terms.join("+")));
    r.record(json!({ "total": types.len(), "partition_counts": counts }));
    Ok(r)
}

fn iso_report(
    cli: &Cli,
    a: &PartialTransformation,
    b: &PartialTransformation,
    force_oracle: bool,
) -> Result<Report, Error> {
    let n = a.degree();
    let mut r = Report::new("iso", json!({ "a": a, "b": b, "n": n }), cli);
    let use_oracle = n <= 2 || force_oracle;
    let mut results = json!({});
    let tables = if use_oracle {
        let va = VariantSemigroup::new(a.clone());
        let vb = VariantSemigroup::new(b.clone());
        if n > CAYLEY_LIMIT {
            return Err(Error::OverBudget {
                n,
                limit: CAYLEY_LIMIT,
            });
        }
        Some((cayley_table(&va)?, cayley_table(&vb)?))
    } else {
        None
    };
    match build_isomorphism(a, b) {
        Ok(w) => {
            r.line(format!("tau      {} = {}", w.tau.cycle_notation(), w.tau));
            r.line(format!("pi       {} = {}", w.pi.cycle_notation(), w.pi));
            r.line("verdict  ISOMORPHIC");
            results["verdict"] = json!("isomorphic");
            results["tau"] = json!(w.tau.to_string());
            results["pi"] = json!(w.pi.to_string());
            if let Some((ta, tb)) = &tables {
                let map = pt_variant::enumerate_all(n)?
                    .map(|x| w.apply(&x).map(|y| y.index() as usize))
                    .collect::<Result<Vec<_>, _>>()?;
                let ok = verify_isomorphism(ta, tb, &map)?;
                r.line(format!("oracle   {}", if ok { "PASS" } else { "FAIL" }));
                results["oracle"] = json!(ok);
                if !ok {
                    r.status = Status::Verification;
                }
            }
        }
        Err(Error::TypeMismatch { left, right }) => {
            r.line(format!("types    {left} vs {right}"));
            r.line("verdict  NOT ISOMORPHIC");
            results["verdict"] = json!("not isomorphic");
            results["types"] = json!([left, right]);
            if let Some((ta, tb)) = &tables {
                let found = find_isomorphism(ta, tb, cli.budget)?;
                let ok = found.is_none();
                r.line(format!("oracle   {}", if ok { "PASS" } else { "FAIL" }));
                results["oracle"] = json!(ok);
                if !ok {
                    r.status = Status::Verification;
                }
            }
        }
        Err(e) => return Err(e),
    }
    r.record(results);
    Ok(r)
}

fn verify_report(cli: &Cli, n: usize) -> Result<Report, Error> {
    let config = SuiteConfig {
        seed: cli.seed,
        search_budget: cli.budget,
        ..SuiteConfig::default()
    };
    let mut r = Report::new("verify", json!({ "n": n }), cli);
    r.seed = Some(cli.seed);
    if n > cli.max_n {
        return Err(Error::OverBudget {
            n,
            limit: cli.max_n,
        });
    }
    r.line(format!("seed {}", cli.seed));
    let outcomes = run_suite(n, &config)?;
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        r.line(format!(
            "{verdict}  {:<28} {:>10} cases  {}",
            o.name, o.cases, o.detail
        ));
        r.record(
            json!({ "check": o.name, "passed": o.passed, "cases": o.cases, "detail": o.detail }),
        );
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    r.line(format!("{} checks, {failed} failed", outcomes.len()));
    r.record(json!({ "checks": outcomes.len(), "failed": failed }));
    if failed > 0 {
        r.status = Status::Verification;
    }
    Ok(r)
}

fn cayley_report(
    cli: &Cli,
    a: &PartialTransformation,
    labels: Option<&std::path::Path>,
) -> Result<Report, Error> {
    let mut r = Report::new("cayley", json!({ "a": a, "n": a.degree() }), cli);
    let table = cayley_table(&VariantSemigroup::new(a.clone()))?;
    if let Some(path) = labels {
        std::fs::write(path, table.labels_text()).map_err(|e| Error::TableFormat {
            line: 0,
            message: format!("writing {}: {e}", path.display()),
        })?;
    }
    r.human = table.to_text();
    r.record(json!({ "table": table.to_text(), "labels": table.labels() }));
    Ok(r)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Status::Parse as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(report.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(status_of(&e) as u8)
        }
    }
}
