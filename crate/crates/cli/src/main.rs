use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use bernstein_core::bernstein::{
    check_peirce_relations, idempotent_from_seed, peirce, peirce_default, quotient, verify_weight, BaricAlgebra,
    BernsteinError, Check, PeirceData,
};
use bernstein_core::dsl::{parse, parse_element, parse_vectors, serialize, AlgebraFile};
use bernstein_core::families::{make_family, FamilyKind};
use bernstein_core::identity::{check_identity_seeded, IdentityId, IdentityOutcome};
use bernstein_core::report::{
    build_report, emit_report, format_subspace, opt, render_text, rows, CertificateSummary, ChainSummary,
    FixedSubspaceSummary, MultClosureSummary, PeirceSummary, ReportOptions, WitnessEntry,
};
use bernstein_core::theorem::{
    greatest_fixed_subspace, lemma51_check, mult_closure_nilpotent, thm43_decompose, Lemma51Check, TheoremError,
};
use bernstein_core::{CommAlgebra, Element, NamedAlgebra, PowerKind, Rational, Subspace};
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bernstein", version, about = "Exact checks for commutative algebras given by structure constants")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized fallbacks.
    #[arg(long = "seed-rng", global = true, default_value_t = 0)]
    seed_rng: u64,
    /// Cap on the number of power-chain terms.
    #[arg(long = "max-steps", global = true)]
    max_steps: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight, identities and Peirce relations.
    Check { file: String },
    /// Peirce decomposition and ann_U(U).
    Peirce {
        file: String,
        /// Element of weight 1 whose square is used as the idempotent.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Full classification report.
    Classify { file: String },
    /// A power chain of the barideal (or of the whole algebra if not baric).
    Powers {
        file: String,
        #[arg(long)]
        kind: PowerKind,
        /// Start from the span of these vectors instead.
        #[arg(long)]
        subspace: Option<String>,
    },
    /// Greatest subspace I of the barideal with VI = I.
    Fixedspace { file: String },
    /// Nilpotency of the operators L_v on the barideal, v in V.
    Multalg { file: String },
    /// NI = I versus VI = I for a subspace I.
    Lemma51 {
        file: String,
        #[arg(long)]
        subspace: String,
    },
    /// Decomposition certificate for an ideal generated by the given elements.
    Thm43 {
        file: String,
        #[arg(long)]
        gens: String,
        /// The ideal (defaults to the barideal, or the whole algebra if not baric).
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Writes a member of a built-in family in the text format.
    Family {
        kind: FamilyKind,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Quotient by ann_U(U) or by the span of the given vectors.
    Quotient {
        file: String,
        #[arg(long)]
        by: String,
    },
}

enum Failure {
    /// Bad input: exit code 2, message on stderr.
    Input(String),
    /// A property check failed: exit code 1, output (with witness) on stdout.
    Property(String),
}

type Outcome = Result<(String, bool), Failure>;

fn input<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{context}: {e}"))
}

fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(input("stdin"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(input(path))
    }
}

fn load(path: &str) -> Result<NamedAlgebra<Rational>, Failure> {
    let text = read_source(path)?;
    Ok(parse(&text).map_err(input(path))?.to_named_algebra())
}

fn elements(a: &CommAlgebra<Rational>, text: &str) -> Result<Vec<Element<Rational>>, Failure> {
    Ok(parse_vectors(text, a.names())
        .map_err(input("vector list"))?
        .into_iter()
        .map(Element::new)
        .collect())
}

fn span(a: &CommAlgebra<Rational>, text: &str) -> Result<Subspace<Rational>, Failure> {
    let vs = parse_vectors(text, a.names()).map_err(input("vector list"))?;
    Subspace::from_vectors(&vs, a.dim()).map_err(input("vector list"))
}

/// The weight must be valid and the Bernstein identity must hold.
fn bernstein_input(named: &NamedAlgebra<Rational>, seed: u64) -> Result<BaricAlgebra<Rational>, Failure> {
    let b = named
        .baric()
        .ok_or_else(|| Failure::Input(format!("{}: needs a weight function", named.name)))?
        .map_err(input(&named.name))?;
    if let Check::Fails(w) = verify_weight(&b) {
        return Err(Failure::Property(format!(
            "weight function is not a homomorphism: {}",
            WitnessEntry::weight(&b.algebra, &w).reason
        )));
    }
    let outcome = check_identity_seeded(&b.algebra, IdentityId::Bernstein, Some(&b.weight), seed)
        .map_err(input(&named.name))?;
    if let IdentityOutcome::Fails(w) = outcome {
        let assignment: Vec<String> =
            w.assignment.iter().map(|(n, x)| format!("{n} = {}", b.algebra.format(x))).collect();
        return Err(Failure::Property(format!(
            "not a Bernstein algebra: {} fails at {} (residual {})",
            IdentityId::Bernstein.formula(),
            assignment.join(", "),
            b.algebra.format(&w.residual)
        )));
    }
    Ok(b)
}

fn bernstein_peirce(named: &NamedAlgebra<Rational>, seed: u64) -> Result<(BaricAlgebra<Rational>, PeirceData<Rational>), Failure> {
    let b = bernstein_input(named, seed)?;
    let p = peirce_default(&b).map_err(|e| Failure::Property(e.to_string()))?;
    Ok((b, p))
}

fn json_or<T: Serialize>(json: bool, value: &T, text: String) -> String {
    if json {
        emit_report(value)
    } else {
        text
    }
}

#[derive(Serialize)]
struct PeirceOutput {
    algebra: String,
    #[serde(flatten)]
    peirce: PeirceSummary,
    relations_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
}

#[derive(Serialize)]
struct PowersOutput {
    algebra: String,
    start: Vec<Vec<String>>,
    #[serde(flatten)]
    chain: ChainSummary,
}

#[derive(Serialize)]
struct Lemma51Output {
    algebra: String,
    subspace: Vec<Vec<String>>,
    #[serde(flatten)]
    check: Lemma51Check,
}

#[derive(Serialize)]
struct NamedOutput<T: Serialize> {
    algebra: String,
    #[serde(flatten)]
    result: T,
}

fn run(cli: &Cli) -> Outcome {
    let opts = ReportOptions { seed: cli.seed_rng, max_steps: cli.max_steps, full: false };
    match &cli.command {
        Command::Check { file } => {
            let named = load(file)?;
            let r = build_report(&named, &opts).map_err(input(file))?;
            let ok = r.flags.weight_valid != Some(false)
                && r.flags.bernstein != Some(false)
                && r.flags.peirce_relations != Some(false);
            Ok((json_or(cli.json, &r, render_text(&r)), ok))
        }
        Command::Classify { file } => {
            let named = load(file)?;
            let r = build_report(&named, &ReportOptions { full: true, ..opts }).map_err(input(file))?;
            Ok((json_or(cli.json, &r, render_text(&r)), true))
        }
        Command::Peirce { file, seed } => {
            let named = load(file)?;
            let b = bernstein_input(&named, cli.seed_rng)?;
            let a = &b.algebra;
            let p = match seed {
                None => peirce_default(&b),
                Some(expr) => {
                    let x = Element::new(parse_element(expr, a.names()).map_err(input("--seed"))?);
                    let e = idempotent_from_seed(&b, &x).map_err(|e| match e {
                        BernsteinError::SeedWeight { .. } => Failure::Input(format!("--seed: {e}")),
                        other => Failure::Property(other.to_string()),
                    })?;
                    peirce(&b, &e)
                }
            }
            .map_err(|e| Failure::Property(e.to_string()))?;
            let relations = check_peirce_relations(a, &p).map_err(input(file))?;
            let violation = relations.witness().map(|v| {
                format!(
                    "{} fails: ({}) ({}) = {}",
                    v.relation.describe(),
                    a.format(&v.left),
                    a.format(&v.right),
                    a.format(&v.product)
                )
            });
            let names = a.names();
            let text = format!(
                "idempotent e = {}\nN ({}): {}\nU ({}): {}\nV ({}): {}\nann_U(U) ({}): {}\npeirce relations: {}\n",
                a.format(&p.e),
                p.n.dim(),
                format_subspace(names, &p.n),
                p.u.dim(),
                format_subspace(names, &p.u),
                p.v.dim(),
                format_subspace(names, &p.v),
                p.ann_u.dim(),
                format_subspace(names, &p.ann_u),
                violation.as_deref().unwrap_or("hold"),
            );
            let out = PeirceOutput {
                algebra: named.name.clone(),
                peirce: PeirceSummary::new(a, &p),
                relations_hold: relations.holds(),
                violation,
            };
            Ok((json_or(cli.json, &out, text), relations.holds()))
        }
        Command::Powers { file, kind, subspace } => {
            let named = load(file)?;
            let a = &named.algebra;
            let start = match subspace {
                Some(text) => span(a, text)?,
                None => match named.baric() {
                    Some(b) => b.map_err(input(file))?.barideal(),
                    None => Subspace::full(a.dim()),
                },
            };
            let chain = a.power_chain(&start, *kind, cli.max_steps).map_err(input(file))?;
            let summary = ChainSummary::new(&chain);
            let mut text = format!("{} powers of {}\n", kind, format_subspace(a.names(), &start));
            for (k, t) in chain.terms.iter().enumerate() {
                let label = match kind {
                    PowerKind::Plenary => format!("({k})"),
                    PowerKind::Principal => format!("<{}>", k + 1),
                    PowerKind::Full => format!("^{}", k + 1),
                };
                text.push_str(&format!("  {label:>6}  dim {:>3}  {}\n", t.dim(), format_subspace(a.names(), t)));
            }
            text.push_str(&format!("stabilized: {}\nnil index: {}\n", chain.stabilized, opt(chain.nil_index)));
            if let Some(s) = summary.solv_index {
                text.push_str(&format!("solvability index: {s}\n"));
            }
            let out = PowersOutput { algebra: named.name.clone(), start: rows(&start), chain: summary };
            Ok((json_or(cli.json, &out, text), true))
        }
        Command::Fixedspace { file } => {
            let named = load(file)?;
            let (b, p) = bernstein_peirce(&named, cli.seed_rng)?;
            let r = greatest_fixed_subspace(&b.algebra, &p).map_err(input(file))?;
            let names = b.algebra.names();
            let mut text = String::from("I_0 = N, I_(k+1) = V I_k\n");
            for (k, s) in r.chain.iter().enumerate() {
                text.push_str(&format!("  I_{k}: dim {}  {}\n", s.dim(), format_subspace(names, s)));
            }
            text.push_str(&format!("greatest fixed subspace: {}\n", format_subspace(names, &r.gfp)));
            let out = NamedOutput { algebra: named.name.clone(), result: FixedSubspaceSummary::new(&r) };
            Ok((json_or(cli.json, &out, text), true))
        }
        Command::Multalg { file } => {
            let named = load(file)?;
            let (b, p) = bernstein_peirce(&named, cli.seed_rng)?;
            let c = mult_closure_nilpotent(&b.algebra, &p).map_err(input(file))?;
            let s = MultClosureSummary::new(&c);
            let text = format!(
                "generators: {}\nclosure dimension: {}\nnilpotent: {}\nnil index: {}\n",
                s.generators,
                s.closure_dim,
                s.nilpotent,
                opt(s.nil_index)
            );
            Ok((json_or(cli.json, &NamedOutput { algebra: named.name.clone(), result: s }, text), true))
        }
        Command::Lemma51 { file, subspace } => {
            let named = load(file)?;
            let (b, p) = bernstein_peirce(&named, cli.seed_rng)?;
            let s = span(&b.algebra, subspace)?;
            let r = lemma51_check(&b.algebra, &p, &s).map_err(input(file))?;
            let text = format!(
                "I = {}\nNI = I: {}\nVI = I: {}\nconclusion holds: {}\n",
                format_subspace(b.algebra.names(), &s),
                r.ni_eq_i,
                r.vi_eq_i,
                r.conclusion_holds
            );
            let out = Lemma51Output { algebra: named.name.clone(), subspace: rows(&s), check: r };
            Ok((json_or(cli.json, &out, text), r.conclusion_holds))
        }
        Command::Thm43 { file, gens, ideal } => {
            let named = load(file)?;
            let a = &named.algebra;
            let gens = elements(a, gens)?;
            let n = match (ideal, named.baric()) {
                (Some(text), _) => span(a, text)?,
                (None, Some(b)) => b.map_err(input(file))?.barideal(),
                (None, None) => Subspace::full(a.dim()),
            };
            let cert = match thm43_decompose(a, &n, &gens, cli.max_steps) {
                Ok(c) => c,
                Err(e @ TheoremError::NotNilpotent { .. }) => return Err(Failure::Property(e.to_string())),
                Err(e) => return Err(Failure::Input(format!("{file}: {e}"))),
            };
            let s = CertificateSummary::new(a, &gens, &cert);
            let mut text = format!(
                "F = {} (dim {})\nm = {} (F^m = 0)\n",
                format_subspace(a.names(), &cert.f),
                s.f_dim,
                s.m
            );
            for step in &s.inclusions {
                text.push_str(&format!(
                    "  N^{} in F^{} + N^{}: {} (dims {} <= {})\n",
                    step.i,
                    step.i,
                    step.i + 1,
                    step.holds,
                    step.dim_n_i,
                    step.dim_f_i_plus_n_next
                ));
            }
            text.push_str(&format!(
                "N = F + N^m: {}\nN^m = 0: {}\nnil index of N: {}\ncertificate closes: {}\n",
                s.n_equals_f_plus_nm,
                s.n_nilpotent,
                opt(s.n_nil_index),
                s.closes
            ));
            let closes = s.closes;
            Ok((json_or(cli.json, &NamedOutput { algebra: named.name.clone(), result: s }, text), closes))
        }
        Command::Family { kind, n, out } => {
            let named = make_family::<Rational>(*kind, *n).map_err(input("family"))?;
            let text = serialize(&AlgebraFile::from_named_algebra(&named));
            match out {
                Some(path) => {
                    fs::write(path, &text).map_err(input(path))?;
                    Ok((String::new(), true))
                }
                None => Ok((text, true)),
            }
        }
        Command::Quotient { file, by } => {
            let named = load(file)?;
            let b = named
                .baric()
                .ok_or_else(|| Failure::Input(format!("{file}: quotients need a weight function")))?
                .map_err(input(file))?;
            let (ideal, suffix) = if by == "annU" {
                let (_, p) = bernstein_peirce(&named, cli.seed_rng)?;
                (p.ann_u, "annU".to_string())
            } else {
                (span(&b.algebra, by)?, "I".to_string())
            };
            let q = quotient(&b, &ideal).map_err(input(file))?;
            let qn = NamedAlgebra {
                name: format!("{}_mod_{suffix}", named.name),
                algebra: q.algebra,
                weight: Some(q.weight),
            };
            Ok((serialize(&AlgebraFile::from_named_algebra(&qn)), true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Property(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
