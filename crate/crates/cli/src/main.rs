use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quivar::acceptance::{self, CriterionResult};
use quivar::algebra::decompose::decomposable_under_field;
use quivar::algebra::matrix::{invariant_polynomial, polynomial_to_json, Sigma};
use quivar::algebra::substitute::{substitution_certificate, Subst};
use quivar::bounds::{m_formula, m_formula_branch, max_nonzero_degree, q_class_nonempty, survey_class, upper_bound_for_quiver};
use quivar::extremal::{build_extremal, verify_witness, Family, Params};
use quivar::omega::{build_complete_chain, build_delta_tree, check_complete_chain, omega_membership};
use quivar::validate::cross_validate;
use quivar::{Characteristic, CyclicWord, EngineConfig, Error, Gf2, Gf3, Multidegree, Quiver, Rational};
use serde_json::{json, Value};

static PROGRESS: Mutex<String> = Mutex::new(String::new());

fn progress(note: impl Into<String>) {
    if let Ok(mut p) = PROGRESS.lock() {
        *p = note.into();
    }
}

#[derive(Parser)]
#[command(name = "quivar", version, about = "Trace invariants of 2x2 quiver representations")]
struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Accepted for reproducibility; enumeration order does not depend on it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on explored states per equivalence search.
    #[arg(long, global = true)]
    max_states: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldChoice {
    Q,
    Gf2,
    Gf3,
}

impl FieldChoice {
    fn characteristic(self) -> Characteristic {
        match self {
            FieldChoice::Gf2 => Characteristic::Two,
            _ => Characteristic::NotTwo,
        }
    }

    fn default_for(chi: Characteristic) -> Self {
        match chi {
            Characteristic::Two => FieldChoice::Gf2,
            Characteristic::NotTwo => FieldChoice::Q,
        }
    }
}

#[derive(Args)]
struct QuiverArg {
    #[arg(long)]
    quiver: PathBuf,
}

#[derive(Args)]
struct CharArg {
    /// 2 or not2.
    #[arg(long = "char", value_parser = parse_char)]
    chi: Characteristic,
}

#[derive(Args)]
struct Ndm {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    m: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a closed path is equivalent to zero.
    EquivZero {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        word: PathBuf,
        #[command(flatten)]
        c: CharArg,
    },
    /// Largest degree of a nonzero closed path.
    MaxDegree {
        #[command(flatten)]
        q: QuiverArg,
        #[command(flatten)]
        c: CharArg,
        /// Defaults to the upper bound for the quiver.
        #[arg(long)]
        cutoff: Option<usize>,
        /// Accept multidegrees of the doubly decomposable region without search.
        #[arg(long)]
        shortcut: bool,
    },
    /// Membership of a multidegree in the four sets.
    Omega {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        delta: PathBuf,
        #[command(flatten)]
        c: CharArg,
    },
    /// A checked complete chain for a multidegree.
    Chain {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        delta: PathBuf,
    },
    /// A checked tree of complete chains for a multidegree.
    Tree {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        delta: PathBuf,
    },
    /// The bound M(n, d, m).
    MBound {
        #[command(flatten)]
        p: Ndm,
        #[command(flatten)]
        c: CharArg,
    },
    /// Whether some strongly connected quiver has these parameters.
    ClassNonempty {
        #[command(flatten)]
        p: Ndm,
    },
    /// Exact D over a grid of small classes.
    Survey {
        /// Comma separated values or inclusive ranges such as 1-3.
        #[arg(long)]
        n: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        m: String,
        #[command(flatten)]
        c: CharArg,
    },
    /// Build, and optionally verify, an extremal witness.
    Extremal {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[command(flatten)]
        p: Ndm,
        /// Defaults to the characteristic of the family.
        #[arg(long = "char", value_parser = parse_char)]
        chi: Option<Characteristic>,
        #[arg(long)]
        verify: bool,
    },
    /// Direct access to the polynomial oracle.
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
    /// Compare the engine with the oracle on every word up to a degree.
    CrossValidate {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        cutoff: usize,
        #[command(flatten)]
        c: CharArg,
        #[arg(long, value_enum)]
        field: Option<FieldChoice>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Run the acceptance criteria.
    Accept {
        /// Comma separated criterion numbers; all by default.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Subcommand)]
enum OracleOp {
    /// Whether sigma_k of the word is decomposable.
    Decomp {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        word: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, default_value_t = FieldChoice::Q)]
        field: FieldChoice,
        /// Degree cap for the spanning set.
        #[arg(long, default_value_t = 8)]
        cutoff: usize,
    },
    /// Dump sigma_k of the word as a polynomial.
    Poly {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        word: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, default_value_t = FieldChoice::Q)]
        field: FieldChoice,
    },
    /// Trace after replacing arrows by constant matrices.
    Subst {
        #[command(flatten)]
        q: QuiverArg,
        #[arg(long)]
        word: PathBuf,
        /// JSON object from arrow id to I, J, E or Generic.
        #[arg(long)]
        assign: PathBuf,
        #[arg(long, value_enum, default_value_t = FieldChoice::Q)]
        field: FieldChoice,
    },
}

fn parse_char(s: &str) -> Result<Characteristic, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Violation(_) => 1,
            e if e.is_inconclusive() => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn bad_input(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Report plus exit code.
struct Outcome {
    code: u8,
    payload: Value,
    table: Option<String>,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Outcome { code: 0, payload, table: None }
    }

    fn checked(payload: Value, passed: bool) -> Self {
        Outcome { code: if passed { 0 } else { 1 }, payload, table: None }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

fn load_quiver(a: &QuiverArg) -> Result<Quiver, Failure> {
    Ok(Quiver::from_json(&read(&a.quiver)?)?)
}

fn load_word(q: &Quiver, path: &Path) -> Result<CyclicWord, Failure> {
    Ok(CyclicWord::from_json(q, &read(path)?)?)
}

fn load_delta(q: &Quiver, path: &Path) -> Result<Multidegree, Failure> {
    Ok(Multidegree::from_json(q, &read(path)?)?)
}

fn parse_list(s: &str) -> Result<Vec<i64>, Failure> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || bad_input(format!("bad range `{part}`"));
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (i64, i64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad_input("empty list"));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let mut cfg = EngineConfig::default();
    if let Some(s) = cli.max_states {
        cfg.max_states = s;
    }
    match cli.command {
        Command::EquivZero { q, word, c } => {
            let quiver = load_quiver(&q)?;
            let w = load_word(&quiver, &word)?;
            let engine = quivar::Engine::with_config(&quiver, c.chi, cfg);
            let dec = engine.decide(&w)?;
            Ok(Outcome::ok(dec.to_json_value(&quiver, &w, c.chi)))
        }
        Command::MaxDegree { q, c, cutoff, shortcut } => {
            let quiver = load_quiver(&q)?;
            let bound = upper_bound_for_quiver(&quiver, c.chi)?;
            let cutoff = cutoff.unwrap_or(bound.max(0) as usize);
            let md = max_nonzero_degree(&quiver, c.chi, cutoff, cfg, shortcut)?;
            let holds = md.degree as i64 <= bound;
            Ok(Outcome::checked(
                json!({
                    "char": c.chi.to_string(),
                    "cutoff": cutoff,
                    "upper_bound": bound,
                    "max_degree": md.degree,
                    "witness": md.witness.map(|w| w.names(&quiver)),
                    "certificate": md.certificate,
                    "within_bound": holds,
                }),
                holds,
            ))
        }
        Command::Omega { q, delta, c } => {
            let quiver = load_quiver(&q)?;
            let t = load_delta(&quiver, &delta)?;
            let mem = omega_membership(&quiver, &t, c.chi, cfg)?;
            let mut v = mem.to_json_value(&quiver);
            let holds = mem.inclusions_hold();
            v["inclusions_hold"] = json!(holds);
            Ok(Outcome::checked(v, holds))
        }
        Command::Chain { q, delta } => {
            let quiver = load_quiver(&q)?;
            let t = load_delta(&quiver, &delta)?;
            let chain = build_complete_chain(&quiver, &t)?;
            let check = check_complete_chain(&quiver, &t, &chain);
            let mut v = chain.to_json_value(&quiver);
            v["checked"] = json!(check.is_ok());
            if let Err(e) = &check {
                v["error"] = json!(e.to_string());
            }
            Ok(Outcome::checked(v, check.is_ok()))
        }
        Command::Tree { q, delta } => {
            let quiver = load_quiver(&q)?;
            let t = load_delta(&quiver, &delta)?;
            let tree = build_delta_tree(&quiver, &t)?;
            let check = tree.check(&quiver);
            let mut v = json!({ "tree": tree.to_json_value(&quiver), "nodes": tree.node_count() });
            v["checked"] = json!(check.is_ok());
            if let Err(e) = &check {
                v["error"] = json!(e.to_string());
            }
            Ok(Outcome::checked(v, check.is_ok()))
        }
        Command::MBound { p, c } => {
            let m = m_formula(p.n, p.d, p.m, c.chi)?;
            let branch = m_formula_branch(p.n, p.d, p.m, c.chi)?;
            let mut out = Outcome::ok(json!({ "M": m }));
            out.table = Some(format!("M({}, {}, {}) char {} = {m} (branch {branch})", p.n, p.d, p.m, c.chi));
            Ok(out)
        }
        Command::ClassNonempty { p } => {
            Ok(Outcome::ok(json!({ "class_nonempty": q_class_nonempty(p.n, p.d, p.m) })))
        }
        Command::Survey { n, d, m, c } => survey(&parse_list(&n)?, &parse_list(&d)?, &parse_list(&m)?, c.chi, cfg),
        Command::Extremal { family, p, chi, verify } => {
            let chi = chi.unwrap_or(family.characteristic());
            let params = Params { n: p.n, d: p.d, m: p.m };
            progress(format!("building family {family} witness"));
            let w = build_extremal(family, params)?;
            let mut v = json!({ "witness": w.to_json_value() });
            if !verify {
                return Ok(Outcome::ok(v));
            }
            progress(format!("verifying family {family} witness"));
            let report = verify_witness(&w, chi, cfg)?;
            let passed = report.passed;
            v["verification"] = serde_json::to_value(&report).map_err(Error::from)?;
            Ok(Outcome::checked(v, passed))
        }
        Command::Oracle { op } => oracle(op),
        Command::CrossValidate { q, cutoff, c, field, inject_fault } => {
            let quiver = load_quiver(&q)?;
            let field = field.unwrap_or(FieldChoice::default_for(c.chi));
            if field.characteristic() != c.chi {
                return Err(bad_input("field does not match the characteristic"));
            }
            let report = match field {
                FieldChoice::Gf2 => cross_validate::<Gf2>(&quiver, c.chi, cutoff, cfg, inject_fault)?,
                FieldChoice::Gf3 => cross_validate::<Gf3>(&quiver, c.chi, cutoff, cfg, inject_fault)?,
                FieldChoice::Q => cross_validate::<Rational>(&quiver, c.chi, cutoff, cfg, inject_fault)?,
            };
            let passed = report.passed();
            Ok(Outcome::checked(serde_json::to_value(&report).map_err(Error::from)?, passed))
        }
        Command::Accept { only } => accept(only, cfg, cli.format == Format::Json),
    }
}

fn survey(ns: &[i64], ds: &[i64], ms: &[i64], chi: Characteristic, cfg: EngineConfig) -> Result<Outcome, Failure> {
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    let mut inconclusive = Vec::new();
    for &n in ns {
        for &d in ds {
            for &m in ms {
                if n < 1 || d < 1 || m < 1 || !q_class_nonempty(n, d, m) {
                    continue;
                }
                progress(format!("surveying ({n}, {d}, {m}); {} classes done", reports.len()));
                match survey_class(n, d, m, chi, cfg) {
                    Ok(r) => {
                        let big_d = r.d_exact.map(|x| x as i64);
                        rows.push([
                            n.to_string(),
                            d.to_string(),
                            m.to_string(),
                            chi.to_string(),
                            r.m_formula.to_string(),
                            big_d.map_or(String::new(), |x| x.to_string()),
                            big_d.map_or(String::new(), |x| (r.m_formula - x).to_string()),
                            r.theorem_holds.to_string(),
                        ]);
                        reports.push(r);
                    }
                    Err(e) if e.is_inconclusive() => inconclusive.push(json!([n, d, m, e.to_string()])),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    let holds = reports.iter().all(|r| r.theorem_holds);
    let code = if !holds {
        1
    } else if !inconclusive.is_empty() {
        3
    } else {
        0
    };
    let payload = json!({
        "reports": serde_json::to_value(&reports).map_err(Error::from)?,
        "inconclusive": inconclusive,
    });
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| bad_input(e.to_string());
    w.write_record(["n", "d", "m", "char", "M", "D", "gap", "holds"]).map_err(io)?;
    for r in &rows {
        w.write_record(r).map_err(io)?;
    }
    let table = String::from_utf8(w.into_inner().map_err(|e| bad_input(e.to_string()))?).expect("utf8");
    Ok(Outcome { code, payload, table: Some(table) })
}

fn oracle(op: OracleOp) -> Result<Outcome, Failure> {
    match op {
        OracleOp::Decomp { q, word, k, field, cutoff } => {
            let quiver = load_quiver(&q)?;
            let w = load_word(&quiver, &word)?;
            let dec = match field {
                FieldChoice::Q => decomposable_under_field::<Rational>(&quiver, &w, k, cutoff)?,
                FieldChoice::Gf2 => decomposable_under_field::<Gf2>(&quiver, &w, k, cutoff)?,
                FieldChoice::Gf3 => decomposable_under_field::<Gf3>(&quiver, &w, k, cutoff)?,
            };
            Ok(Outcome::ok(json!({ "decomposable": dec, "k": k, "word": w.names(&quiver) })))
        }
        OracleOp::Poly { q, word, k, field } => {
            let quiver = load_quiver(&q)?;
            let w = load_word(&quiver, &word)?;
            let sigma = Sigma::from_k(k).ok_or_else(|| bad_input("k must be 1 or 2"))?;
            let poly = match field {
                FieldChoice::Q => polynomial_to_json(&quiver, &invariant_polynomial::<Rational>(&quiver, &w, sigma)),
                FieldChoice::Gf2 => polynomial_to_json(&quiver, &invariant_polynomial::<Gf2>(&quiver, &w, sigma)),
                FieldChoice::Gf3 => polynomial_to_json(&quiver, &invariant_polynomial::<Gf3>(&quiver, &w, sigma)),
            };
            Ok(Outcome::ok(json!({ "polynomial": poly, "k": k })))
        }
        OracleOp::Subst { q, word, assign, field } => {
            let quiver = load_quiver(&q)?;
            let w = load_word(&quiver, &word)?;
            let raw: std::collections::BTreeMap<String, Subst> =
                serde_json::from_str(&read(&assign)?).map_err(|e| bad_input(e.to_string()))?;
            let mut assignment = vec![Subst::Generic; quiver.d()];
            for (name, s) in raw {
                let a = quiver.arrow_by_name(&name).ok_or_else(|| bad_input(format!("unknown arrow `{name}`")))?;
                assignment[a] = s;
            }
            let (poly, nonzero) = match field {
                FieldChoice::Q => {
                    let r = substitution_certificate::<Rational>(&quiver, &w, &assignment)?;
                    (polynomial_to_json(&quiver, &r.polynomial), r.nonzero)
                }
                FieldChoice::Gf2 => {
                    let r = substitution_certificate::<Gf2>(&quiver, &w, &assignment)?;
                    (polynomial_to_json(&quiver, &r.polynomial), r.nonzero)
                }
                FieldChoice::Gf3 => {
                    let r = substitution_certificate::<Gf3>(&quiver, &w, &assignment)?;
                    (polynomial_to_json(&quiver, &r.polynomial), r.nonzero)
                }
            };
            Ok(Outcome::ok(json!({ "polynomial": poly, "nonzero": nonzero })))
        }
    }
}

fn accept(only: Option<String>, cfg: EngineConfig, echo: bool) -> Result<Outcome, Failure> {
    let ids: Vec<usize> = match only {
        None => (1..=acceptance::CRITERIA).collect(),
        Some(s) => parse_list(&s)?
            .into_iter()
            .map(|i| {
                usize::try_from(i)
                    .ok()
                    .filter(|&i| (1..=acceptance::CRITERIA).contains(&i))
                    .ok_or_else(|| bad_input(format!("no criterion {i}")))
            })
            .collect::<Result<_, _>>()?,
    };
    let mut results: Vec<CriterionResult> = Vec::new();
    for id in ids {
        progress(format!("criterion {id}; {} finished", results.len()));
        let r = acceptance::run_criterion(id, cfg);
        if echo {
            eprintln!("{r}");
        }
        results.push(r);
    }
    let failed = results.iter().any(|r| !r.passed && !r.inconclusive);
    let open = results.iter().any(|r| r.inconclusive);
    let code = if failed {
        1
    } else if open {
        3
    } else {
        0
    };
    let table = results.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
    let payload = json!({ "criteria": serde_json::to_value(&results).map_err(Error::from)?, "passed": code == 0 });
    Ok(Outcome { code, payload, table: Some(table) })
}

fn configure_threads() {
    let Ok(v) = std::env::var("QUIVAR_THREADS") else { return };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("ignoring QUIVAR_THREADS={v}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    configure_threads();
    let _ = ctrlc::set_handler(|| {
        let note = PROGRESS.lock().map(|p| p.clone()).unwrap_or_default();
        if note.is_empty() {
            eprintln!("interrupted");
        } else {
            eprintln!("interrupted during {note}");
        }
        std::process::exit(3);
    });
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            let text = match (format, &out.table) {
                (Format::Json, _) | (_, None) => {
                    serde_json::to_string_pretty(&out.payload).expect("json serializes")
                }
                (_, Some(t)) => t.trim_end().to_string(),
            };
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{text}");
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
