//! `ualg` — command-line front end for the finite universal-algebra
//! workbench: term codecs, syntactic congruences, quotients, free
//! algebras, set Boolean algebras with meshes and duals, and the
//! built-in demonstration suites.
//!
//! Exit codes: 0 on success, 1 on a domain error (reported with the
//! originating module error name), 2 on a usage error. A `demo` run that
//! finds violations exits 1 after printing its report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use ualg::algebra::{AlgebraError, FiniteAlgebra};
use ualg::bitset::BitSet;
use ualg::boole::{algebra_from_dual, canonical_mesh, star_check, BooleError, SetBooleanAlgebra};
use ualg::counterexample::{
    nonprofinite_check, run_jonsson_tarski, run_not_faithful, run_omega_law, CounterexampleError,
};
use ualg::json::{
    algebra_from_json, algebra_to_json, boolean_algebra_from_json, congruence_from_json,
    congruence_to_json, parse_identity_file, parse_term_file, recognizer_from_json,
    signature_from_json, JsonError,
};
use ualg::sigma::{SigmaAlgebra, SigmaConfig};
use ualg::signature::{SignatureError, VariableSet};
use ualg::term::{parse_functional, parse_polish, Term, TermError};
use ualg::translation::{syntactic_congruence, translation_monoid};
use ualg::variety::{free_algebra, pushout_quotient, satisfies};

const FILE_FORMATS: &str = "\
File formats (JSON unless noted):
  signature         {\"symbols\": [{\"name\": \"f\", \"arity\": 2}, ...]}
  algebra           {\"signature\": <signature>, \"size\": N, \"tables\": {\"f\": <table>, ...}}
                    a nullary table is a bare integer; an arity-k table is a
                    k-deep nested array, row-major, first argument outermost
  congruence        {\"classOf\": [c0, c1, ...]}   (class index per element)
  recognizer        {\"algebra\": <algebra>, \"assignment\": {\"x\": 0, ...},
                     \"accepting\": [0, 2]}
  boolean algebra   {\"universe\": N, \"atoms\": [[0, 1], [2], ...]}   (a partition)
  factor list       [<boolean algebra>, ...]   (one coordinate per entry)
  terms (text)      one prefix-notation word per line
  identities (text) one \"lhs-word = rhs-word\" per line";

/// Finite universal-algebra and tree-language workbench.
#[derive(Parser)]
#[command(name = "ualg", version, about, after_help = FILE_FORMATS)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest algebra carrier accepted from input files.
    #[arg(long, global = true, default_value_t = 8)]
    max_algebra_size: usize,
    /// Largest Boolean-algebra universe accepted from input files.
    #[arg(long, global = true, default_value_t = 12)]
    max_universe: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse prefix-notation words and show the term trees.
    Parse {
        /// Signature JSON file.
        #[arg(long)]
        signature: PathBuf,
        /// Comma-separated variable names.
        #[arg(long, default_value = "")]
        variables: String,
        /// A single prefix-notation word.
        #[arg(required_unless_present = "terms")]
        word: Option<String>,
        /// A file with one prefix-notation word per line.
        #[arg(long, conflicts_with = "word")]
        terms: Option<PathBuf>,
    },
    /// Serialize a term written functionally, e.g. "f(x,g(y))", to its
    /// prefix-notation word.
    Print {
        /// Signature JSON file.
        #[arg(long)]
        signature: PathBuf,
        /// Comma-separated variable names.
        #[arg(long, default_value = "")]
        variables: String,
        /// The term, in functional notation.
        term: String,
    },
    /// Evaluate a term in a finite algebra under a variable assignment.
    Eval {
        /// Recognizer JSON file (algebra + assignment + accepting set);
        /// also reports whether the accepting set contains the value.
        #[arg(long, conflicts_with_all = ["algebra", "assign"])]
        recognizer: Option<PathBuf>,
        /// Algebra JSON file.
        #[arg(long, required_unless_present = "recognizer")]
        algebra: Option<PathBuf>,
        /// Variable assignment, e.g. "x=0,y=1".
        #[arg(long, required_unless_present = "recognizer")]
        assign: Option<String>,
        /// The term, as a prefix-notation word.
        word: String,
    },
    /// Syntactic congruence of a subset of an algebra's carrier.
    SyntCongr {
        /// Algebra JSON file.
        #[arg(long)]
        algebra: PathBuf,
        /// Accepting subset as comma-separated elements; empty when omitted.
        #[arg(long)]
        accepting: Option<String>,
    },
    /// The translation monoid of an algebra: all unary self-maps that
    /// terms linear in one variable induce.
    Translations {
        /// Algebra JSON file.
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Quotient an algebra by a congruence.
    Quotient {
        /// Algebra JSON file.
        #[arg(long)]
        algebra: PathBuf,
        /// Congruence JSON file over the same algebra.
        #[arg(long)]
        congruence: PathBuf,
    },
    /// Relatively free algebra over the variety generated by the given
    /// algebras, on the given variable set.
    FreeAlgebra {
        /// Generating algebra JSON file; repeat for several generators.
        #[arg(long = "algebra", required = true)]
        algebras: Vec<PathBuf>,
        /// Comma-separated variable names.
        #[arg(long)]
        variables: String,
    },
    /// Check which identities from a file hold in an algebra.
    CheckIdentity {
        /// Algebra JSON file.
        #[arg(long)]
        algebra: PathBuf,
        /// Comma-separated variable names the identities may use.
        #[arg(long, default_value = "")]
        variables: String,
        /// File with one "lhs-word = rhs-word" identity per line.
        #[arg(long)]
        identities: PathBuf,
    },
    /// Build the subterm algebra of a term: its distinct subterms plus a
    /// sink, separating the term from every other term.
    Sigma {
        /// Signature JSON file.
        #[arg(long)]
        signature: PathBuf,
        /// Comma-separated variable names.
        #[arg(long, default_value = "")]
        variables: String,
        /// The base term, as a prefix-notation word.
        word: String,
    },
    /// Canonical mesh of a member of a tensor of set Boolean algebras:
    /// coordinate partitions plus the box cells that cover it.
    Mesh {
        /// JSON file with the factor list (one Boolean algebra per
        /// coordinate).
        #[arg(long)]
        factors: PathBuf,
        /// The member as comma-separated point indices of the product
        /// universe (row-major, first coordinate most significant).
        #[arg(long, default_value = "")]
        member: String,
    },
    /// Dual algebra on the atoms of a Boolean subalgebra of the powerset
    /// (the full powerset when no subalgebra is given).
    Dual {
        /// Algebra JSON file.
        #[arg(long)]
        algebra: PathBuf,
        /// Boolean algebra JSON file over the carrier.
        #[arg(long)]
        boolean: Option<PathBuf>,
    },
    /// Check the operation-compatibility (star) condition of a Boolean
    /// subalgebra: preimages of its elements under every operation must
    /// belong to the tensor of copies of the subalgebra.
    StarCheck {
        /// Algebra JSON file.
        #[arg(long)]
        algebra: PathBuf,
        /// Boolean algebra JSON file over the carrier.
        #[arg(long)]
        boolean: PathBuf,
    },
    /// Pushout of two congruence quotients of one algebra: the joint
    /// quotient with its two induced maps.
    Pushout {
        /// Algebra JSON file.
        #[arg(long)]
        algebra: PathBuf,
        /// Congruence JSON file for the left quotient.
        #[arg(long)]
        left: PathBuf,
        /// Congruence JSON file for the right quotient.
        #[arg(long)]
        right: PathBuf,
    },
    /// Built-in demonstration suites; exits 1 if a run finds violations.
    Demo {
        #[command(subcommand)]
        case: DemoCase,
    },
}

#[derive(Subcommand)]
enum DemoCase {
    /// Wrapped-term family separated by a finite algebra while the
    /// limiting omega-words collapse in every finite monoid.
    NotFaithful {
        /// Arity of the wrapping symbol (at least 2).
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Check wrap depths 1 through this bound.
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        /// Sampled transformation monoids for the omega-word law.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Random seed.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Decrement/increment structure on the extended naturals: no finite
    /// continuous quotient separates 0 from the limit point.
    NonProfinite {
        /// Exhaustively scan target sizes up to this bound (at most 4).
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Pairing identities admit no finite model with two or more
    /// elements.
    JonssonTarski {
        /// Exhaustive at size 2; sizes above 2 are sampled.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Number of sampled algebras per size above 2.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Random seed.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// The omega-power of every monoid element is the unique idempotent
    /// among its powers.
    OmegaLaw {
        /// Enumerate all monoids up to this size (at most 3).
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Boole(#[from] BooleError),
    #[error(transparent)]
    Counterexample(#[from] CounterexampleError),
}

struct Rendered {
    json: Value,
    text: String,
    exit: u8,
}

impl Rendered {
    fn ok(json: Value, text: String) -> Rendered {
        Rendered {
            json,
            text,
            exit: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(rendered) => {
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&rendered.json).expect("serializable output")
                ),
                Format::Text => println!("{}", rendered.text),
            }
            ExitCode::from(rendered.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Rendered, CliError> {
    let max_algebra = cli.max_algebra_size;
    let max_universe = cli.max_universe;
    match cli.command {
        Command::Parse {
            signature,
            variables,
            word,
            terms,
        } => cmd_parse(&signature, &variables, word.as_deref(), terms.as_deref()),
        Command::Print {
            signature,
            variables,
            term,
        } => cmd_print(&signature, &variables, &term),
        Command::Eval {
            recognizer,
            algebra,
            assign,
            word,
        } => cmd_eval(
            recognizer.as_deref(),
            algebra.as_deref(),
            assign.as_deref(),
            &word,
            max_algebra,
        ),
        Command::SyntCongr { algebra, accepting } => {
            cmd_synt_congr(&algebra, accepting.as_deref().unwrap_or(""), max_algebra)
        }
        Command::Translations { algebra } => cmd_translations(&algebra, max_algebra),
        Command::Quotient {
            algebra,
            congruence,
        } => cmd_quotient(&algebra, &congruence, max_algebra),
        Command::FreeAlgebra {
            algebras,
            variables,
        } => cmd_free_algebra(&algebras, &variables, max_algebra),
        Command::CheckIdentity {
            algebra,
            variables,
            identities,
        } => cmd_check_identity(&algebra, &variables, &identities, max_algebra),
        Command::Sigma {
            signature,
            variables,
            word,
        } => cmd_sigma(&signature, &variables, &word),
        Command::Mesh { factors, member } => cmd_mesh(&factors, &member, max_universe),
        Command::Dual { algebra, boolean } => {
            cmd_dual(&algebra, boolean.as_deref(), max_algebra, max_universe)
        }
        Command::StarCheck { algebra, boolean } => {
            cmd_star_check(&algebra, &boolean, max_algebra, max_universe)
        }
        Command::Pushout {
            algebra,
            left,
            right,
        } => cmd_pushout(&algebra, &left, &right, max_algebra),
        Command::Demo { case } => cmd_demo(&case),
    }
}

// ---------------------------------------------------------------------
// Input helpers.

/// Reports a bad flag value through the usual usage-error channel
/// (exit code 2).
fn usage_error(message: String) -> ! {
    Cli::command()
        .error(ErrorKind::ValueValidation, message)
        .exit()
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_name_list(raw: &str) -> Vec<String> {
    raw.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(String::from)
        .collect()
}

fn parse_point_list(flag: &str, raw: &str) -> Vec<usize> {
    raw.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse().unwrap_or_else(|_| {
                usage_error(format!(
                    "{flag}: expected comma-separated integers, got `{p}`"
                ))
            })
        })
        .collect()
}

fn parse_assignment(raw: &str) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for part in raw.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((name, value)) = part.split_once('=') else {
            usage_error(format!("--assign: expected `var=value`, got `{part}`"));
        };
        let value = value.trim().parse().unwrap_or_else(|_| {
            usage_error(format!("--assign: `{part}` has a non-integer value"))
        });
        out.insert(name.trim().to_string(), value);
    }
    out
}

fn check_algebra_bound(algebra: &FiniteAlgebra, limit: usize) -> Result<(), CliError> {
    if algebra.size() > limit {
        return Err(AlgebraError::BoundExceeded {
            size: algebra.size(),
            limit,
        }
        .into());
    }
    Ok(())
}

fn load_algebra(path: &Path, limit: usize) -> Result<FiniteAlgebra, CliError> {
    let algebra = algebra_from_json(&read_file(path)?)?;
    check_algebra_bound(&algebra, limit)?;
    Ok(algebra)
}

fn load_boolean(path: &Path, limit: usize) -> Result<SetBooleanAlgebra, CliError> {
    let b = boolean_algebra_from_json(&read_file(path)?)?;
    if b.universe() > limit {
        return Err(BooleError::UniverseTooLarge {
            size: b.universe(),
            limit,
        }
        .into());
    }
    Ok(b)
}

fn points_in_range(
    flag: &str,
    raw: &str,
    size: usize,
) -> Result<BTreeSet<usize>, CliError> {
    let points = parse_point_list(flag, raw);
    for &p in &points {
        if p >= size {
            return Err(AlgebraError::ValueOutOfRange { value: p, size }.into());
        }
    }
    Ok(points.into_iter().collect())
}

// ---------------------------------------------------------------------
// Output helpers.

fn to_value(text: String) -> Value {
    serde_json::from_str(&text).expect("modules emit valid JSON")
}

fn join_spaced(values: impl IntoIterator<Item = usize>) -> String {
    let parts: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
    parts.join(" ")
}

fn braces(points: impl IntoIterator<Item = usize>) -> String {
    format!("{{{}}}", join_spaced(points))
}

fn render_classes(classes: &[Vec<usize>]) -> String {
    let parts: Vec<String> = classes
        .iter()
        .map(|c| braces(c.iter().copied()))
        .collect();
    parts.join(" ")
}

fn render_algebra_text(algebra: &FiniteAlgebra) -> String {
    let mut out = format!("size {}", algebra.size());
    for (symbol, arity) in algebra.signature().symbols() {
        let table = algebra.table(symbol);
        match arity {
            0 => {
                let _ = write!(out, "\n{symbol} = {}", table[0]);
            }
            2 => {
                let _ = write!(out, "\n{symbol}:");
                for row in table.chunks(algebra.size().max(1)) {
                    let _ = write!(out, "\n  {}", join_spaced(row.iter().copied()));
                }
            }
            _ => {
                let _ = write!(
                    out,
                    "\n{symbol}: {}",
                    join_spaced(table.iter().copied())
                );
            }
        }
    }
    out
}

fn term_json(term: &Term) -> Value {
    json!({
        "polish": term.polish_string(),
        "functional": term.to_string(),
        "nodes": term.node_count(),
        "depth": term.depth(),
    })
}

// ---------------------------------------------------------------------
// Subcommands.

fn cmd_parse(
    signature: &Path,
    variables: &str,
    word: Option<&str>,
    terms: Option<&Path>,
) -> Result<Rendered, CliError> {
    let sig = signature_from_json(&read_file(signature)?)?;
    let vars = VariableSet::new(parse_name_list(variables), &sig)?;
    if let Some(word) = word {
        let term = parse_polish(word, &sig, &vars)?;
        let tree = term.render_tree();
        return Ok(Rendered::ok(term_json(&term), tree));
    }
    let text = read_file(terms.expect("clap requires word or --terms"))?;
    let parsed = parse_term_file(&text, &sig, &vars)?;
    let json = json!({ "terms": parsed.iter().map(term_json).collect::<Vec<_>>() });
    let trees: Vec<String> = parsed.iter().map(Term::render_tree).collect();
    Ok(Rendered::ok(json, trees.join("\n")))
}

fn cmd_print(signature: &Path, variables: &str, term: &str) -> Result<Rendered, CliError> {
    let sig = signature_from_json(&read_file(signature)?)?;
    let vars = VariableSet::new(parse_name_list(variables), &sig)?;
    let term = parse_functional(term, &sig, &vars)?;
    let word = term.polish_string();
    Ok(Rendered::ok(json!({ "polish": word }), word))
}

fn cmd_eval(
    recognizer: Option<&Path>,
    algebra: Option<&Path>,
    assign: Option<&str>,
    word: &str,
    max_algebra: usize,
) -> Result<Rendered, CliError> {
    if let Some(path) = recognizer {
        let recognizer = recognizer_from_json(&read_file(path)?)?;
        check_algebra_bound(recognizer.algebra(), max_algebra)?;
        let names: Vec<String> = recognizer.assignment().keys().cloned().collect();
        let vars = VariableSet::new(names, recognizer.algebra().signature())?;
        let term = parse_polish(word, recognizer.algebra().signature(), &vars)?;
        let value = recognizer.algebra().eval(&term, recognizer.assignment())?;
        let accepted = recognizer.accepting().contains(&value);
        let verdict = if accepted { "accepted" } else { "rejected" };
        return Ok(Rendered::ok(
            json!({ "value": value, "accepted": accepted }),
            format!("{value} ({verdict})"),
        ));
    }
    let algebra = load_algebra(algebra.expect("clap requires --algebra"), max_algebra)?;
    let assignment = parse_assignment(assign.expect("clap requires --assign"));
    let names: Vec<String> = assignment.keys().cloned().collect();
    let vars = VariableSet::new(names, algebra.signature())?;
    let term = parse_polish(word, algebra.signature(), &vars)?;
    let value = algebra.eval(&term, &assignment)?;
    Ok(Rendered::ok(json!({ "value": value }), value.to_string()))
}

fn cmd_synt_congr(
    algebra: &Path,
    accepting: &str,
    max_algebra: usize,
) -> Result<Rendered, CliError> {
    let algebra = load_algebra(algebra, max_algebra)?;
    let accepting = points_in_range("--accepting", accepting, algebra.size())?;
    let theta = syntactic_congruence(&algebra, &accepting);
    let classes = theta.classes();
    let text = format!("{} classes\n{}", classes.len(), render_classes(&classes));
    Ok(Rendered::ok(to_value(congruence_to_json(&theta)), text))
}

fn cmd_translations(algebra: &Path, max_algebra: usize) -> Result<Rendered, CliError> {
    let algebra = load_algebra(algebra, max_algebra)?;
    let translations = translation_monoid(&algebra);
    let mut lines = vec![format!("{} translations", translations.len())];
    let mut entries = Vec::new();
    for t in &translations {
        let witness_json = t.witness().map(|w| {
            json!({
                "term": w.term.polish_string(),
                "distinguished": w.distinguished,
                "params": w.params,
            })
        });
        let witness_text = match t.witness() {
            Some(w) if w.params.is_empty() => {
                format!("{} at {}", w.term.polish_string(), w.distinguished)
            }
            Some(w) => {
                let params: Vec<String> =
                    w.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!(
                    "{} at {} with {}",
                    w.term.polish_string(),
                    w.distinguished,
                    params.join(",")
                )
            }
            None => "(composite)".to_string(),
        };
        lines.push(format!(
            "[{}] {}",
            join_spaced(t.map().iter().copied()),
            witness_text
        ));
        entries.push(json!({
            "map": t.map(),
            "witness": witness_json,
        }));
    }
    let json = json!({
        "size": algebra.size(),
        "count": translations.len(),
        "translations": entries,
    });
    Ok(Rendered::ok(json, lines.join("\n")))
}

fn cmd_quotient(
    algebra: &Path,
    congruence: &Path,
    max_algebra: usize,
) -> Result<Rendered, CliError> {
    let algebra = load_algebra(algebra, max_algebra)?;
    let theta = congruence_from_json(&read_file(congruence)?, &algebra)?;
    let (quotient, projection) = theta.quotient();
    let json = json!({
        "algebra": to_value(algebra_to_json(&quotient)),
        "projection": projection.map(),
    });
    let text = format!(
        "projection: {}\n{}",
        join_spaced(projection.map().iter().copied()),
        render_algebra_text(&quotient)
    );
    Ok(Rendered::ok(json, text))
}

fn cmd_free_algebra(
    algebras: &[PathBuf],
    variables: &str,
    max_algebra: usize,
) -> Result<Rendered, CliError> {
    let gens = algebras
        .iter()
        .map(|p| load_algebra(p, max_algebra))
        .collect::<Result<Vec<_>, _>>()?;
    let vars = VariableSet::new(parse_name_list(variables), gens[0].signature())?;
    let free = free_algebra(&gens, &vars)?;
    let json = json!({
        "algebra": to_value(algebra_to_json(free.algebra())),
        "generators": free.generators(),
    });
    let generators: Vec<String> = free
        .generators()
        .iter()
        .map(|(name, element)| format!("{name} -> {element}"))
        .collect();
    let text = format!(
        "generators: {}\n{}",
        generators.join(", "),
        render_algebra_text(free.algebra())
    );
    Ok(Rendered::ok(json, text))
}

fn cmd_check_identity(
    algebra: &Path,
    variables: &str,
    identities: &Path,
    max_algebra: usize,
) -> Result<Rendered, CliError> {
    let algebra = load_algebra(algebra, max_algebra)?;
    let vars = VariableSet::new(parse_name_list(variables), algebra.signature())?;
    let identities =
        parse_identity_file(&read_file(identities)?, algebra.signature(), &vars)?;
    let mut results = Vec::new();
    let mut lines = Vec::new();
    for identity in &identities {
        let holds = satisfies(&algebra, identity)?;
        let verdict = if holds { "holds" } else { "fails" };
        lines.push(format!("{verdict}  {identity}"));
        results.push(json!({
            "identity": identity.to_string(),
            "satisfied": holds,
        }));
    }
    Ok(Rendered::ok(
        json!({ "results": results }),
        lines.join("\n"),
    ))
}

fn cmd_sigma(signature: &Path, variables: &str, word: &str) -> Result<Rendered, CliError> {
    let sig = signature_from_json(&read_file(signature)?)?;
    let vars = VariableSet::new(parse_name_list(variables), &sig)?;
    let base = parse_polish(word, &sig, &vars)?;
    let sigma = SigmaAlgebra::build(SigmaConfig::identity(base, sig, vars));
    let subterms: Vec<String> = sigma
        .subterms()
        .iter()
        .map(Term::polish_string)
        .collect();
    let json = json!({
        "algebra": to_value(algebra_to_json(sigma.algebra())),
        "subterms": subterms,
        "sink": sigma.sink(),
        "assignment": sigma.assignment(),
    });
    let mut text = format!(
        "size {} (sink {})",
        sigma.algebra().size(),
        sigma.sink()
    );
    for (index, subterm) in subterms.iter().enumerate() {
        let _ = write!(text, "\n{index}: {subterm}");
    }
    let assignment: Vec<String> = sigma
        .assignment()
        .iter()
        .map(|(name, element)| format!("{name} -> {element}"))
        .collect();
    if !assignment.is_empty() {
        let _ = write!(text, "\nassignment: {}", assignment.join(", "));
    }
    Ok(Rendered::ok(json, text))
}

fn cmd_mesh(factors: &Path, member: &str, max_universe: usize) -> Result<Rendered, CliError> {
    let raw: Vec<Value> = serde_json::from_str(&read_file(factors)?).map_err(JsonError::from)?;
    let factors = raw
        .iter()
        .map(|v| Ok(boolean_algebra_from_json(&v.to_string())?))
        .collect::<Result<Vec<SetBooleanAlgebra>, CliError>>()?;
    if factors.is_empty() {
        return Err(BooleError::EmptyList.into());
    }
    for factor in &factors {
        if factor.universe() > max_universe {
            return Err(BooleError::UniverseTooLarge {
                size: factor.universe(),
                limit: max_universe,
            }
            .into());
        }
    }
    let product: usize = factors.iter().map(SetBooleanAlgebra::universe).product();
    let points = points_in_range("--member", member, product)?;
    let member = BitSet::from_indices(product, points.iter().copied());
    let (mesh, cells) = canonical_mesh(&member, &factors)?;

    let partitions_json: Vec<Vec<Vec<usize>>> = mesh
        .partitions
        .iter()
        .map(|p| p.iter().map(|c| c.iter().collect()).collect())
        .collect();
    let cells_json: Vec<Vec<Vec<usize>>> = cells
        .iter()
        .map(|cell| cell.factors.iter().map(|f| f.iter().collect()).collect())
        .collect();
    let mut text = String::new();
    for (coordinate, partition) in mesh.partitions.iter().enumerate() {
        let parts: Vec<String> = partition.iter().map(|c| braces(c.iter())).collect();
        let _ = writeln!(text, "coordinate {coordinate}: {}", parts.join(" "));
    }
    let _ = write!(text, "cells: {}", cells.len());
    for cell in &cells {
        let sides: Vec<String> = cell.factors.iter().map(|f| braces(f.iter())).collect();
        let _ = write!(text, "\n{}", sides.join(" x "));
    }
    Ok(Rendered::ok(
        json!({ "partitions": partitions_json, "cells": cells_json }),
        text,
    ))
}

fn cmd_dual(
    algebra: &Path,
    boolean: Option<&Path>,
    max_algebra: usize,
    max_universe: usize,
) -> Result<Rendered, CliError> {
    let algebra = load_algebra(algebra, max_algebra)?;
    let b = match boolean {
        Some(path) => load_boolean(path, max_universe)?,
        None => SetBooleanAlgebra::powerset(algebra.size()),
    };
    let dual = algebra_from_dual(&algebra, &b)?;
    Ok(Rendered::ok(
        json!({ "algebra": to_value(algebra_to_json(&dual)) }),
        render_algebra_text(&dual),
    ))
}

fn cmd_star_check(
    algebra: &Path,
    boolean: &Path,
    max_algebra: usize,
    max_universe: usize,
) -> Result<Rendered, CliError> {
    let algebra = load_algebra(algebra, max_algebra)?;
    let b = load_boolean(boolean, max_universe)?;
    let holds = star_check(&algebra, &b)?;
    Ok(Rendered::ok(
        json!({ "holds": holds }),
        format!("star condition holds: {holds}"),
    ))
}

fn cmd_pushout(
    algebra: &Path,
    left: &Path,
    right: &Path,
    max_algebra: usize,
) -> Result<Rendered, CliError> {
    let algebra = load_algebra(algebra, max_algebra)?;
    let theta1 = congruence_from_json(&read_file(left)?, &algebra)?;
    let theta2 = congruence_from_json(&read_file(right)?, &algebra)?;
    let (left_quotient, phi) = theta1.quotient();
    let (right_quotient, psi) = theta2.quotient();
    let (pushout, delta, epsilon) = pushout_quotient(&phi, &psi)?;
    let json = json!({
        "algebra": to_value(algebra_to_json(&pushout)),
        "delta": delta.map(),
        "epsilon": epsilon.map(),
    });
    let text = format!(
        "left quotient size {}, right quotient size {}\ndelta: {}\nepsilon: {}\n{}",
        left_quotient.size(),
        right_quotient.size(),
        join_spaced(delta.map().iter().copied()),
        join_spaced(epsilon.map().iter().copied()),
        render_algebra_text(&pushout)
    );
    Ok(Rendered::ok(json, text))
}

fn cmd_demo(case: &DemoCase) -> Result<Rendered, CliError> {
    let report = match case {
        DemoCase::NotFaithful {
            arity,
            max_depth,
            samples,
            seed,
        } => {
            let depths: Vec<usize> = (1..=*max_depth).collect();
            run_not_faithful(*arity, &depths, *samples, *seed)?
        }
        DemoCase::NonProfinite { bound } => nonprofinite_check(*bound)?,
        DemoCase::JonssonTarski {
            max_size,
            samples,
            seed,
        } => run_jonsson_tarski(*max_size, *samples, *seed)?,
        DemoCase::OmegaLaw { max_size } => run_omega_law(*max_size)?,
    };
    let mut text = match case {
        DemoCase::NotFaithful { .. } => format!(
            "{} violations / {} instances",
            report.violations.len(),
            report.instances_checked
        ),
        DemoCase::NonProfinite { .. } => format!(
            "{} separating homomorphisms / {} candidate maps",
            report.violations.len(),
            report.instances_checked
        ),
        DemoCase::JonssonTarski { .. } => format!(
            "{} nontrivial satisfiers / {} algebras",
            report.violations.len(),
            report.instances_checked
        ),
        DemoCase::OmegaLaw { .. } => format!(
            "{} violations / {} elements checked",
            report.violations.len(),
            report.instances_checked
        ),
    };
    for violation in &report.violations {
        let _ = write!(text, "\n{violation}");
    }
    let exit = if report.passed() { 0 } else { 1 };
    let json = serde_json::to_value(&report).expect("reports are serializable");
    Ok(Rendered { json, text, exit })
}
