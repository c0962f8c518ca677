//! The `dualcheck` command line.
//!
//! Exit codes: 0 ok, 1 verdict no, 2 input error, 3 size guard, 4 internal
//! assertion.

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::acceptance;
use crate::corpus;
use crate::cornish::{d_functor, CornishAlgebra, CornishSpace, Signature, Word};
use crate::ddp::{ddp_quasi_primal_family, ddp_simplicity_triple};
use crate::engine::{all_congruences, FiniteAlgebra};
use crate::error::{ensure, Error, Result};
use crate::guards::Guards;
use crate::ockham::build_cm;
use crate::order::Poset;
use crate::primality::{
    bounded_term_search, even_cycle_witness, internal_sufficient, internal_sufficient_semiprimal,
    quasi_primal_family, semi_primal, Certificate, Outcome, TernaryOp, Verdict, Witness,
};
use crate::report::{render_text, verdict_json, Report, StructureInfo};
use crate::text::{render, Document, Structure};

#[derive(Parser, Debug)]
#[command(name = "dualcheck", version, about = "Duality-based checks for Cornish algebras")]
pub struct Cli {
    /// Largest product |A1|·|A2| checked exhaustively.
    #[arg(long, global = true)]
    pub guard_product: Option<usize>,
    /// Largest number of subuniverses enumerated.
    #[arg(long, global = true)]
    pub guard_subuniverses: Option<usize>,
    /// Node budget for the discriminator term search.
    #[arg(long, global = true)]
    pub budget_term: Option<usize>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also exit non-zero for guard-limited and condition-not-met verdicts.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the dual structure as a document.
    Dualize {
        file: String,
        #[arg(long, value_enum)]
        direction: Option<Direction>,
    },
    #[command(subcommand)]
    Check(CheckCommand),
    #[command(subcommand)]
    Witness(WitnessCommand),
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Algebra to space (or ddp-algebra to poset).
    D,
    /// Space to algebra (or poset to ddp-algebra).
    E,
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Common discriminator term for a family of algebras (spaces are dualized).
    QuasiPrimal {
        #[arg(required = true)]
        files: Vec<String>,
        /// Word for the orbit route on large pairs.
        #[arg(long)]
        term: Option<String>,
        /// Also search for an explicit discriminator term.
        #[arg(long)]
        search_term: bool,
    },
    SemiPrimal {
        file: String,
        #[arg(long)]
        term: Option<String>,
    },
    Simple {
        file: String,
    },
    /// ddp-algebras of posets (spaces contribute their order).
    Ddp {
        #[arg(required = true)]
        files: Vec<String>,
    },
    /// The sufficient orbit condition for a family of spaces.
    Internal {
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(long)]
        term: String,
        /// Check the constant-term condition for semi-primality instead.
        #[arg(long)]
        semiprimal: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCommand {
    /// The refuting pair for the cycle space C_M, M even.
    EvenCycle { m: usize },
}

#[derive(Subcommand, Debug)]
pub enum CorpusCommand {
    /// Run the acceptance suite.
    Verify,
    List,
    Show { name: String },
}

/// Output text and exit code.
pub struct CliOutput {
    pub output: String,
    pub code: i32,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::GuardExceeded { .. } => 3,
        Error::Assertion(_) => 4,
        _ => 2,
    }
}

impl Cli {
    pub fn guards(&self) -> Guards {
        let mut g = Guards::default();
        if let Some(p) = self.guard_product {
            g.product = p;
        }
        if let Some(s) = self.guard_subuniverses {
            g.subuniverses = s;
        }
        if let Some(b) = self.budget_term {
            g.term_budget = b;
        }
        g
    }
}

fn verdict_code(v: &Verdict, strict: bool) -> i32 {
    match v.outcome {
        Outcome::Yes => 0,
        Outcome::No => 1,
        Outcome::UnknownGuard if strict => 3,
        Outcome::ConditionNotMet if strict => 1,
        _ => 0,
    }
}

/// Runs a parsed command line. `argv` (without the program name) is echoed
/// into the report.
pub fn run(cli: &Cli, argv: Vec<String>) -> CliOutput {
    let start = Instant::now();
    let guards = cli.guards();
    let mut report = Report::new(argv, &guards);
    match execute(cli, &guards, &mut report) {
        Ok((code, plain)) => {
            let value = report.finish(start.elapsed().as_secs_f64() * 1000.0);
            let output = if cli.json {
                serde_json::to_string_pretty(&value).expect("json") + "\n"
            } else {
                plain.unwrap_or_else(|| render_text(&value["result"]))
            };
            CliOutput { output, code }
        }
        Err(e) => {
            let code = exit_code(&e);
            let output = if cli.json {
                serde_json::to_string_pretty(&json!({
                    "schema": crate::report::SCHEMA,
                    "error": e.to_string(),
                    "exit_code": code,
                }))
                .expect("json")
                    + "\n"
            } else {
                format!("error: {e}\n")
            };
            CliOutput { output, code }
        }
    }
}

type Executed = (i32, Option<String>);

fn execute(cli: &Cli, guards: &Guards, report: &mut Report) -> Result<Executed> {
    match &cli.command {
        Command::Dualize { file, direction } => dualize(file, *direction, guards, report),
        Command::Check(c) => match c {
            CheckCommand::QuasiPrimal {
                files,
                term,
                search_term,
            } => check_quasi_primal(files, term.as_deref(), *search_term, cli.strict, guards, report),
            CheckCommand::SemiPrimal { file, term } => {
                check_semi_primal(file, term.as_deref(), cli.strict, guards, report)
            }
            CheckCommand::Simple { file } => check_simple(file, cli.strict, guards, report),
            CheckCommand::Ddp { files } => check_ddp(files, cli.strict, guards, report),
            CheckCommand::Internal {
                files,
                term,
                semiprimal,
            } => check_internal(files, term, *semiprimal, cli.strict, guards, report),
        },
        Command::Witness(WitnessCommand::EvenCycle { m }) => witness_even_cycle(*m, guards, report),
        Command::Corpus(c) => match c {
            CorpusCommand::Verify => corpus_verify(guards, report),
            CorpusCommand::List => {
                let names = corpus::names();
                report.result = json!({ "entries": names });
                Ok((0, Some(names.join("\n") + "\n")))
            }
            CorpusCommand::Show { name } => {
                let doc = corpus::get(name, guards)?;
                let text = render(&doc);
                report.structures.push(StructureInfo::new(&format!("corpus:{name}"), &doc));
                report.result = json!({ "document": text });
                Ok((0, Some(text)))
            }
        },
    }
}

fn load(reference: &str, guards: &Guards, report: &mut Report) -> Result<Document> {
    let doc = corpus::resolve(reference, guards)?;
    report.structures.push(StructureInfo::new(reference, &doc));
    Ok(doc)
}

fn dualize(file: &str, direction: Option<Direction>, guards: &Guards, report: &mut Report) -> Result<Executed> {
    let doc = load(file, guards, report)?;
    let natural = match doc.structure {
        Structure::Space(_) | Structure::Poset(_) => Direction::E,
        Structure::Algebra(_) | Structure::Ddp(_) => Direction::D,
    };
    if let Some(d) = direction {
        if d != natural {
            return Err(Error::InvalidArgument(format!(
                "direction {d:?} does not apply to a {}",
                doc.kind().keyword()
            )));
        }
    }
    let dual = corpus::dual_document(&doc, guards)?;
    let text = render(&dual);
    report.result = json!({ "document": text });
    Ok((0, Some(text)))
}

/// Algebra documents, dualizing spaces.
fn as_algebra_doc(doc: Document, guards: &Guards) -> Result<Document> {
    match doc.structure {
        Structure::Algebra(_) => Ok(doc),
        Structure::Space(_) => corpus::dual_document(&doc, guards),
        _ => Err(Error::InvalidArgument(format!(
            "`{}` is a {}, expected a space or an algebra",
            doc.name,
            doc.kind().keyword()
        ))),
    }
}

fn check_quasi_primal(
    files: &[String],
    term: Option<&str>,
    search_term: bool,
    strict: bool,
    guards: &Guards,
    report: &mut Report,
) -> Result<Executed> {
    let docs: Vec<Document> = files
        .iter()
        .map(|f| load(f, guards, report).and_then(|d| as_algebra_doc(d, guards)))
        .collect::<Result<_>>()?;
    let algs: Vec<CornishAlgebra> = docs.iter().map(|d| d.algebra().expect("algebra").clone()).collect();
    let word = match term {
        Some(t) => Some(Word::parse(algs[0].sig(), t)?),
        None => None,
    };
    let verdict = quasi_primal_family(&algs, word.as_ref(), guards)?;
    let refs: Vec<&Document> = docs.iter().collect();
    let mut result = json!({
        "check": "quasi-primal",
        "members": docs.iter().map(|d| d.name.clone()).collect::<Vec<_>>(),
        "verdict": verdict_json(&verdict, &refs),
    });
    if search_term {
        let targets: Vec<TernaryOp> = algs.iter().map(|a| TernaryOp::discriminator(a.len())).collect();
        let found = bounded_term_search(&algs, &targets, guards.term_budget)?;
        result["term_search"] = serde_json::to_value(found).expect("json");
    }
    report.result = result;
    Ok((verdict_code(&verdict, strict), None))
}

fn check_semi_primal(
    file: &str,
    term: Option<&str>,
    strict: bool,
    guards: &Guards,
    report: &mut Report,
) -> Result<Executed> {
    let doc = as_algebra_doc(load(file, guards, report)?, guards)?;
    let a = doc.algebra().expect("algebra");
    let word = match term {
        Some(t) => Some(Word::parse(a.sig(), t)?),
        None => None,
    };
    let verdict = semi_primal(a, word.as_ref(), guards)?;
    report.result = json!({
        "check": "semi-primal",
        "members": [doc.name.clone()],
        "verdict": verdict_json(&verdict, &[&doc]),
    });
    Ok((verdict_code(&verdict, strict), None))
}

fn simple_verdict<A: FiniteAlgebra>(a: &A, guards: &Guards) -> Result<Verdict> {
    let cons = all_congruences(a, guards.congruence_parent)?;
    if cons.len() == 2 {
        Ok(Verdict::yes(Certificate::Simple { congruences: 2 }))
    } else {
        let blocks = cons
            .iter()
            .find(|c| c.block_count() > 1 && c.block_count() < a.size())
            .or_else(|| cons.first())
            .expect("at least one congruence")
            .blocks()
            .to_vec();
        Ok(Verdict::no(Witness::Congruence { blocks }))
    }
}

fn check_simple(file: &str, strict: bool, guards: &Guards, report: &mut Report) -> Result<Executed> {
    let doc = load(file, guards, report)?;
    let (verdict, target) = match &doc.structure {
        Structure::Space(_) | Structure::Algebra(_) => {
            let adoc = as_algebra_doc(doc.clone(), guards)?;
            let a = adoc.algebra().expect("algebra");
            let v = simple_verdict(a, guards)?;
            let dual_simple = a.len() >= 2 && d_functor(a)?.space.has_no_proper_substructure();
            ensure!(
                v.is_yes() == dual_simple,
                "congruence count and dual substructures disagree on simplicity"
            );
            (v, adoc)
        }
        Structure::Ddp(a) => (simple_verdict(a, guards)?, doc.clone()),
        Structure::Poset(p) => {
            let kdoc = corpus::dual_document(&doc, guards)?;
            let v = match &kdoc.structure {
                Structure::Ddp(a) => simple_verdict(a, guards)?,
                _ => unreachable!("posets dualize to ddp-algebras"),
            };
            if !p.is_empty() {
                ensure!(
                    ddp_simplicity_triple(p, guards)?.value == v.is_yes(),
                    "ddp simplicity conditions disagree with the congruence count"
                );
            }
            (v, kdoc)
        }
    };
    report.result = json!({
        "check": "simple",
        "members": [target.name.clone()],
        "verdict": verdict_json(&verdict, &[&target]),
    });
    Ok((verdict_code(&verdict, strict), None))
}

fn poset_of_doc(doc: &Document) -> Result<Poset> {
    match &doc.structure {
        Structure::Ddp(a) => Ok(crate::birkhoff::PrimeFilterSpace::new(a.lattice()).poset),
        _ => corpus::poset_of(doc),
    }
}

fn check_ddp(files: &[String], strict: bool, guards: &Guards, report: &mut Report) -> Result<Executed> {
    let docs: Vec<Document> = files.iter().map(|f| load(f, guards, report)).collect::<Result<_>>()?;
    let posets: Vec<Poset> = docs.iter().map(poset_of_doc).collect::<Result<_>>()?;
    let verdict = ddp_quasi_primal_family(&posets, guards)?;
    let triples: Vec<Value> = posets
        .iter()
        .map(|p| match ddp_simplicity_triple(p, guards) {
            Ok(t) => serde_json::to_value(t).expect("json"),
            Err(e) if e.is_guard() => json!({ "skipped": e.to_string() }),
            Err(e) => json!({ "error": e.to_string() }),
        })
        .collect();
    let refs: Vec<&Document> = docs.iter().collect();
    report.result = json!({
        "check": "ddp",
        "members": docs.iter().map(|d| d.name.clone()).collect::<Vec<_>>(),
        "simplicity": triples,
        "verdict": verdict_json(&verdict, &refs),
    });
    Ok((verdict_code(&verdict, strict), None))
}

fn as_space(doc: &Document) -> Result<CornishSpace> {
    match &doc.structure {
        Structure::Space(x) => Ok(x.clone()),
        Structure::Algebra(a) => Ok(d_functor(a)?.space),
        _ => Err(Error::InvalidArgument(format!(
            "`{}` is a {}, expected a space or an algebra",
            doc.name,
            doc.kind().keyword()
        ))),
    }
}

fn check_internal(
    files: &[String],
    term: &str,
    semiprimal: bool,
    strict: bool,
    guards: &Guards,
    report: &mut Report,
) -> Result<Executed> {
    let docs: Vec<Document> = files.iter().map(|f| load(f, guards, report)).collect::<Result<_>>()?;
    let spaces: Vec<CornishSpace> = docs.iter().map(as_space).collect::<Result<_>>()?;
    let word = Word::parse(spaces[0].sig(), term)?;
    let verdict = if semiprimal {
        internal_sufficient_semiprimal(&spaces, &word)?
    } else {
        internal_sufficient(&spaces, &word)?
    };
    let refs: Vec<&Document> = docs.iter().collect();
    report.result = json!({
        "check": if semiprimal { "internal-semiprimal" } else { "internal" },
        "term": word.display(spaces[0].sig()).to_string(),
        "members": docs.iter().map(|d| d.name.clone()).collect::<Vec<_>>(),
        "verdict": verdict_json(&verdict, &refs),
    });
    Ok((verdict_code(&verdict, strict), None))
}

fn witness_even_cycle(m: usize, guards: &Guards, report: &mut Report) -> Result<Executed> {
    let w = even_cycle_witness(m, guards)?;
    let x = Document::numbered(format!("C{m}"), "c", Structure::Space(build_cm(m)?))?;
    let y = Document::new(
        "Y",
        vec!["u".into(), "v".into(), "w".into()],
        Structure::Space(CornishSpace::new(
            Signature::ockham(),
            Poset::chain(3),
            vec![vec![2, 1, 0]],
        )?),
    )?;
    let map_line = |label: &str, table: &[usize]| {
        let entries: Vec<String> = table
            .iter()
            .enumerate()
            .map(|(i, &t)| format!("{}->{}", x.names[i], y.names[t]))
            .collect();
        format!("# {label}: {}", entries.join(" "))
    };
    let mut text = render(&x);
    text.push('\n');
    text.push_str(&render(&y));
    text.push('\n');
    text.push_str(&map_line("phi1", w.pair.phi1.table()));
    text.push('\n');
    text.push_str(&map_line("phi2", w.pair.phi2.table()));
    text.push('\n');
    let e = crate::cornish::e_functor(&x.space().expect("space").clone(), guards)?;
    let n = e.algebra.len();
    let up_names = corpus::dual_document(&x, guards)?.names;
    let members: Vec<[String; 2]> = w
        .members
        .iter()
        .map(|i| [up_names[i / n].clone(), up_names[i % n].clone()])
        .collect();
    report.result = json!({
        "witness": "even-cycle",
        "m": m,
        "base": x.names[w.base],
        "phi1": w.pair.phi1.table().iter().map(|&t| y.names[t].clone()).collect::<Vec<_>>(),
        "phi2": w.pair.phi2.table().iter().map(|&t| y.names[t].clone()).collect::<Vec<_>>(),
        "subuniverse": members,
        "classification": w.classification,
        "documents": text,
    });
    Ok((0, Some(text)))
}

fn corpus_verify(guards: &Guards, report: &mut Report) -> Result<Executed> {
    let results = acceptance::run_all(guards);
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut text: String = results.iter().map(|r| r.line() + "\n").collect();
    text.push_str(&format!("{} of {} criteria passed\n", results.len() - failed, results.len()));
    report.result = json!({
        "criteria": results,
        "passed": results.len() - failed,
        "failed": failed,
    });
    Ok((if failed == 0 { 0 } else { 1 }, Some(text)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CliOutput {
        let cli = Cli::try_parse_from(args).unwrap();
        run(&cli, args[1..].iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn quasi_primal_examples() {
        assert_eq!(run_args(&["dualcheck", "check", "quasi-primal", "corpus:X2"]).code, 0);
        let no = run_args(&["dualcheck", "--json", "check", "quasi-primal", "corpus:C2-algebra"]);
        assert_eq!(no.code, 1);
        let v: Value = serde_json::from_str(&no.output).unwrap();
        assert_eq!(v["result"]["verdict"]["outcome"], "no");
        assert!(v["result"]["verdict"]["named_witness"]["members"].is_array());
        assert_eq!(run_args(&["dualcheck", "check", "semi-primal", "corpus:A2"]).code, 0);
    }

    #[test]
    fn error_codes() {
        assert_eq!(run_args(&["dualcheck", "check", "simple", "corpus:missing"]).code, 2);
        let guarded = run_args(&[
            "dualcheck",
            "--guard-product",
            "4",
            "--strict",
            "check",
            "quasi-primal",
            "corpus:C3-algebra",
            "--term",
            "eps",
        ]);
        assert_eq!(guarded.code, 3);
    }
}
