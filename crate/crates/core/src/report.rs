//! Machine-readable summaries. Field order in each struct is the JSON key
//! order; scalars are rendered as `p` or `p/q` strings and subspaces as
//! their reduced row echelon basis rows. Sections that only make sense for
//! baric inputs are omitted otherwise, and every flag that is `false` has a
//! matching entry in `witnesses`.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{format_combination, AlgebraError, CommAlgebra, Element, PowerChain, PowerKind};
use crate::bernstein::{
    check_peirce_relations, classify, peirce_default, verify_weight, BaricAlgebra, BernsteinError, Check, JordanWitness,
    NamedAlgebra, PeirceData, WeightWitness,
};
use crate::field::Field;
use crate::identity::{check_identity_seeded, IdentityError, IdentityId, IdentityOutcome, Witness};
use crate::linalg::Subspace;
use crate::theorem::{
    greatest_fixed_subspace, mult_closure_nilpotent, PowerInclusion, FixedSubspaceResult, MultClosure,
    TheoremError, Thm43Certificate,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
    #[error(transparent)]
    Theorem(#[from] TheoremError),
}

pub fn rows<F: Field>(s: &Subspace<F>) -> Vec<Vec<String>> {
    s.basis_vectors()
        .map(|v| v.iter().map(ToString::to_string).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub flag: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<NamedValue>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subspace: Vec<Vec<String>>,
}

fn value<F: Field>(a: &CommAlgebra<F>, name: &str, x: &Element<F>) -> NamedValue {
    NamedValue { name: name.to_string(), value: a.format(x) }
}

impl WitnessEntry {
    fn new(flag: &str, reason: impl Into<String>) -> Self {
        WitnessEntry { flag: flag.to_string(), reason: reason.into(), values: Vec::new(), subspace: Vec::new() }
    }

    pub fn identity<F: Field>(a: &CommAlgebra<F>, flag: &str, w: &Witness<F>) -> Self {
        let mut values: Vec<NamedValue> = w.assignment.iter().map(|(n, x)| value(a, n, x)).collect();
        values.push(value(a, "residual", &w.residual));
        WitnessEntry { values, ..WitnessEntry::new(flag, format!("{} fails", w.identity.formula())) }
    }

    pub fn weight<F: Field>(a: &CommAlgebra<F>, w: &WeightWitness<F>) -> Self {
        match w {
            WeightWitness::Zero => WitnessEntry::new("weight_valid", "the weight function is zero"),
            WeightWitness::NotMultiplicative { i, j, weight_of_product, product_of_weights } => WitnessEntry::new(
                "weight_valid",
                format!(
                    "w({} {}) = {weight_of_product} but w({}) w({}) = {product_of_weights}",
                    a.names()[*i],
                    a.names()[*j],
                    a.names()[*i],
                    a.names()[*j]
                ),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityEntry {
    pub identity: String,
    pub formula: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_valid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bernstein: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peirce_relations: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jordan: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jordan_identity: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nuclear: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub barideal_nilpotent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilpotent: Option<bool>,
}

impl Flags {
    pub fn values(&self) -> impl Iterator<Item = bool> + '_ {
        [
            self.weight_valid,
            self.bernstein,
            self.peirce_relations,
            self.jordan,
            self.jordan_identity,
            self.nuclear,
            self.barideal_nilpotent,
            self.nilpotent,
        ]
        .into_iter()
        .flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeirceSummary {
    pub idempotent: String,
    pub dim_n: usize,
    pub dim_u: usize,
    pub dim_v: usize,
    pub dim_ann_u: usize,
    pub u: Vec<Vec<String>>,
    pub v: Vec<Vec<String>>,
    pub ann_u: Vec<Vec<String>>,
}

impl PeirceSummary {
    pub fn new<F: Field>(a: &CommAlgebra<F>, p: &PeirceData<F>) -> Self {
        PeirceSummary {
            idempotent: a.format(&p.e),
            dim_n: p.n.dim(),
            dim_u: p.u.dim(),
            dim_v: p.v.dim(),
            dim_ann_u: p.ann_u.dim(),
            u: rows(&p.u),
            v: rows(&p.v),
            ann_u: rows(&p.ann_u),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainSummary {
    pub kind: PowerKind,
    pub dims: Vec<usize>,
    pub stabilized: bool,
    pub nil_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solv_index: Option<usize>,
}

impl ChainSummary {
    pub fn new<F: Field>(c: &PowerChain<F>) -> Self {
        ChainSummary {
            kind: c.kind,
            dims: c.terms.iter().map(Subspace::dim).collect(),
            stabilized: c.stabilized,
            nil_index: c.nil_index,
            solv_index: (c.kind == PowerKind::Plenary).then(|| c.solvability_index()).flatten(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowersSummary {
    /// `N` for baric inputs, `A` otherwise.
    pub of: String,
    pub full: ChainSummary,
    pub principal: ChainSummary,
    pub plenary: ChainSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedSubspaceSummary {
    pub dim: usize,
    pub steps: usize,
    pub chain_dims: Vec<usize>,
    pub basis: Vec<Vec<String>>,
}

impl FixedSubspaceSummary {
    pub fn new<F: Field>(r: &FixedSubspaceResult<F>) -> Self {
        FixedSubspaceSummary {
            dim: r.gfp.dim(),
            steps: r.steps,
            chain_dims: r.chain.iter().map(Subspace::dim).collect(),
            basis: rows(&r.gfp),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultClosureSummary {
    pub generators: usize,
    pub closure_dim: usize,
    pub nilpotent: bool,
    pub nil_index: Option<usize>,
}

impl MultClosureSummary {
    pub fn new<F: Field>(c: &MultClosure<F>) -> Self {
        MultClosureSummary {
            generators: c.generators.len(),
            closure_dim: c.span_closure.len(),
            nilpotent: c.nilpotent,
            nil_index: c.nil_index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateSummary {
    pub gens: Vec<String>,
    pub f_dim: usize,
    pub f: Vec<Vec<String>>,
    pub m: usize,
    pub inclusions: Vec<PowerInclusion>,
    pub inclusions_verified: usize,
    pub n_equals_f_plus_nm: bool,
    pub n_nilpotent: bool,
    pub n_nil_index: Option<usize>,
    pub closes: bool,
}

impl CertificateSummary {
    pub fn new<F: Field>(a: &CommAlgebra<F>, gens: &[Element<F>], c: &Thm43Certificate<F>) -> Self {
        CertificateSummary {
            gens: gens.iter().map(|g| a.format(g)).collect(),
            f_dim: c.f.dim(),
            f: rows(&c.f),
            m: c.m,
            inclusions: c.inclusions.clone(),
            inclusions_verified: c.inclusions_verified,
            n_equals_f_plus_nm: c.n_equals_f_plus_nm,
            n_nilpotent: c.n_nilpotent,
            n_nil_index: c.n_nil_index,
            closes: c.closes(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub algebra: String,
    pub dimension: usize,
    pub basis: Vec<String>,
    pub baric: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<String>>,
    pub flags: Flags,
    pub witnesses: Vec<WitnessEntry>,
    pub identities: Vec<IdentityEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peirce: Option<PeirceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub powers: Option<PowersSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_subspace: Option<FixedSubspaceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult_closure: Option<MultClosureSummary>,
}

impl Report {
    /// True when every computed flag holds.
    pub fn all_flags_hold(&self) -> bool {
        self.flags.values().all(|x| x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReportOptions {
    /// Seed for the random fallback of the witness search.
    pub seed: u64,
    pub max_steps: Option<usize>,
    /// Include power chains, the fixed subspace and the multiplication closure.
    pub full: bool,
}

fn chains<F: Field>(
    a: &CommAlgebra<F>,
    s: &Subspace<F>,
    of: &str,
    max_steps: Option<usize>,
) -> Result<PowersSummary, ReportError> {
    let chain = |kind| -> Result<ChainSummary, ReportError> {
        Ok(ChainSummary::new(&a.power_chain(s, kind, max_steps)?))
    };
    Ok(PowersSummary {
        of: of.to_string(),
        full: chain(PowerKind::Full)?,
        principal: chain(PowerKind::Principal)?,
        plenary: chain(PowerKind::Plenary)?,
    })
}

fn identity_entry<F: Field>(
    a: &CommAlgebra<F>,
    id: IdentityId,
    outcome: &IdentityOutcome<F>,
    witnesses: &mut Vec<WitnessEntry>,
) -> IdentityEntry {
    if let IdentityOutcome::Fails(w) = outcome {
        witnesses.push(WitnessEntry::identity(a, &format!("identity:{}", id.name()), w));
    }
    IdentityEntry { identity: id.name().to_string(), formula: id.formula().to_string(), holds: outcome.holds() }
}

fn check_to_outcome<F: Field>(c: &Check<Witness<F>>) -> IdentityOutcome<F> {
    match c {
        Check::Holds => IdentityOutcome::Holds,
        Check::Fails(w) => IdentityOutcome::Fails(w.clone()),
    }
}

/// Runs the checks for one algebra: weight, identities and Peirce relations,
/// plus (with `full`) classification, power chains, the fixed subspace and
/// the multiplication closure.
pub fn build_report<F: Field>(named: &NamedAlgebra<F>, opts: &ReportOptions) -> Result<Report, ReportError> {
    let a = &named.algebra;
    let mut flags = Flags::default();
    let mut witnesses = Vec::new();
    let mut identities = Vec::new();
    let mut report = Report {
        algebra: named.name.clone(),
        dimension: a.dim(),
        basis: a.names().to_vec(),
        baric: named.weight.is_some(),
        weight: named.weight.as_ref().map(|w| w.iter().map(ToString::to_string).collect()),
        flags: Flags::default(),
        witnesses: Vec::new(),
        identities: Vec::new(),
        peirce: None,
        powers: None,
        fixed_subspace: None,
        mult_closure: None,
    };

    let Some(baric) = named.baric() else {
        for id in [IdentityId::Jordan, IdentityId::Jacobi, IdentityId::CubeZero, IdentityId::SquareSquareZero] {
            let outcome = check_identity_seeded(a, id, None, opts.seed)?;
            identities.push(identity_entry(a, id, &outcome, &mut witnesses));
        }
        if opts.full {
            let powers = chains(a, &Subspace::full(a.dim()), "A", opts.max_steps)?;
            let nilpotent = powers.principal.nil_index.is_some();
            if !nilpotent {
                witnesses.push(WitnessEntry {
                    subspace: rows(&a.power_chain(&Subspace::full(a.dim()), PowerKind::Principal, opts.max_steps)?.last().clone()),
                    ..WitnessEntry::new("nilpotent", "the principal power chain stabilizes at a nonzero subspace")
                });
            }
            flags.nilpotent = Some(nilpotent);
            report.powers = Some(powers);
        }
        report.flags = flags;
        report.witnesses = witnesses;
        report.identities = identities;
        return Ok(report);
    };
    let b: BaricAlgebra<F> = baric?;
    let weight = verify_weight(&b);
    flags.weight_valid = Some(weight.holds());
    if let Check::Fails(w) = &weight {
        witnesses.push(WitnessEntry::weight(a, w));
    }

    let class = if weight.holds() { Some(classify(&b)?) } else { None };
    let bernstein_outcome = match class.as_ref().and_then(|c| c.bernstein.as_ref()) {
        Some(c) => check_to_outcome(c),
        None => check_identity_seeded(a, IdentityId::Bernstein, Some(&b.weight), opts.seed)?,
    };
    flags.bernstein = Some(bernstein_outcome.holds());
    identities.push(identity_entry(a, IdentityId::Bernstein, &bernstein_outcome, &mut witnesses));
    if let Some(w) = bernstein_outcome.witness() {
        witnesses.push(WitnessEntry::identity(a, "bernstein", w));
    }
    let jordan_identity = match class.as_ref().and_then(|c| c.jordan_identity.as_ref()) {
        Some(c) => check_to_outcome(c),
        None => check_identity_seeded(a, IdentityId::Jordan, None, opts.seed)?,
    };
    identities.push(identity_entry(a, IdentityId::Jordan, &jordan_identity, &mut witnesses));
    for id in [IdentityId::CubeWeight, IdentityId::Jacobi, IdentityId::CubeZero, IdentityId::SquareSquareZero] {
        let outcome = check_identity_seeded(a, id, Some(&b.weight), opts.seed)?;
        identities.push(identity_entry(a, id, &outcome, &mut witnesses));
    }

    // Peirce relations are reported whenever a decomposition exists, so a
    // non-Bernstein input still gets a structural witness.
    let fallback = match &class {
        Some(c) if !c.is_bernstein() => peirce_default(&b).ok(),
        _ => None,
    };
    if let Some(p) = class.as_ref().and_then(|c| c.peirce.as_ref()).or(fallback.as_ref()) {
        let relations = check_peirce_relations(a, p)?;
        flags.peirce_relations = Some(relations.holds());
        if let Check::Fails(v) = &relations {
            witnesses.push(WitnessEntry {
                values: vec![
                    value(a, "left", &v.left),
                    value(a, "right", &v.right),
                    value(a, "product", &v.product),
                ],
                ..WitnessEntry::new("peirce_relations", format!("{} fails", v.relation.describe()))
            });
        }
    }
    if let Some(class) = class.filter(|c| c.is_bernstein()) {
        let p = class.peirce.as_ref().expect("Bernstein inputs have Peirce data");
        flags.jordan = class.jordan.as_ref().map(Check::holds);
        match class.jordan.as_ref().and_then(Check::witness) {
            Some(JordanWitness::VSquaredNonzero { v1, v2, product }) => witnesses.push(WitnessEntry {
                values: vec![value(a, "v", v1), value(a, "v'", v2), value(a, "product", product)],
                ..WitnessEntry::new("jordan", "V^2 != 0")
            }),
            Some(JordanWitness::UVVNonzero { u, v, value: r }) => witnesses.push(WitnessEntry {
                values: vec![value(a, "u", u), value(a, "v", v), value(a, "(uv)v", r)],
                ..WitnessEntry::new("jordan", "(uv)v != 0")
            }),
            None => {}
        }
        flags.jordan_identity = Some(jordan_identity.holds());
        if let Some(w) = jordan_identity.witness() {
            witnesses.push(WitnessEntry::identity(a, "jordan_identity", w));
        }
        flags.nuclear = class.nuclear.as_ref().map(Check::holds);
        if let Some(w) = class.nuclear.as_ref().and_then(Check::witness) {
            witnesses.push(WitnessEntry {
                values: vec![value(a, "missing", &w.missing)],
                ..WitnessEntry::new("nuclear", "V is not contained in U^2")
            });
        }
        report.peirce = Some(PeirceSummary::new(a, p));
        if opts.full {
            flags.barideal_nilpotent = class.barideal_nilpotent.as_ref().map(Check::holds);
            if let Some(w) = class.barideal_nilpotent.as_ref().and_then(Check::witness) {
                witnesses.push(WitnessEntry {
                    subspace: rows(&w.stable_term),
                    ..WitnessEntry::new("barideal_nilpotent", "the principal powers of N stabilize at a nonzero subspace")
                });
            }
            report.powers = Some(chains(a, &p.n, "N", opts.max_steps)?);
            report.fixed_subspace = Some(FixedSubspaceSummary::new(&greatest_fixed_subspace(a, p)?));
            report.mult_closure = Some(MultClosureSummary::new(&mult_closure_nilpotent(a, p)?));
        }
    }
    report.flags = flags;
    report.witnesses = witnesses;
    report.identities = identities;
    Ok(report)
}

/// Pretty JSON with a trailing newline.
pub fn emit_report<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Human-readable rendering of a [`Report`].
pub fn render_text(r: &Report) -> String {
    let mut out = format!("algebra {} (dimension {})\n", r.algebra, r.dimension);
    let flag = |name: &str, v: Option<bool>, out: &mut String| {
        if let Some(v) = v {
            out.push_str(&format!("  {name}: {v}\n"));
        }
    };
    out.push_str("flags:\n");
    flag("baric", Some(r.baric), &mut out);
    flag("weight_valid", r.flags.weight_valid, &mut out);
    flag("bernstein", r.flags.bernstein, &mut out);
    flag("peirce_relations", r.flags.peirce_relations, &mut out);
    flag("jordan", r.flags.jordan, &mut out);
    flag("jordan_identity", r.flags.jordan_identity, &mut out);
    flag("nuclear", r.flags.nuclear, &mut out);
    flag("barideal_nilpotent", r.flags.barideal_nilpotent, &mut out);
    flag("nilpotent", r.flags.nilpotent, &mut out);
    out.push_str("identities:\n");
    for i in &r.identities {
        out.push_str(&format!("  {:<20} {:<28} {}\n", i.identity, i.formula, if i.holds { "holds" } else { "fails" }));
    }
    if let Some(p) = &r.peirce {
        out.push_str(&format!(
            "peirce: e = {}, dim N = {}, dim U = {}, dim V = {}, dim ann_U(U) = {}\n",
            p.idempotent, p.dim_n, p.dim_u, p.dim_v, p.dim_ann_u
        ));
    }
    if let Some(p) = &r.powers {
        for c in [&p.full, &p.principal, &p.plenary] {
            out.push_str(&format!("powers of {} ({}): dims {:?}, nil index {}\n", p.of, c.kind, c.dims, opt(c.nil_index)));
        }
    }
    if let Some(f) = &r.fixed_subspace {
        out.push_str(&format!("greatest fixed subspace of I -> VI: dim {} after {} steps\n", f.dim, f.steps));
    }
    if let Some(m) = &r.mult_closure {
        out.push_str(&format!(
            "multiplication algebra of V on N: dim {}, nilpotent {}, index {}\n",
            m.closure_dim,
            m.nilpotent,
            opt(m.nil_index)
        ));
    }
    for w in &r.witnesses {
        out.push_str(&format!("witness [{}]: {}\n", w.flag, w.reason));
        for v in &w.values {
            out.push_str(&format!("    {} = {}\n", v.name, v.value));
        }
        for row in &w.subspace {
            out.push_str(&format!("    [{}]\n", row.join(", ")));
        }
    }
    out
}

pub fn opt(x: Option<usize>) -> String {
    x.map_or_else(|| "none".to_string(), |v| v.to_string())
}

/// Renders a subspace as a list of linear combinations of basis names.
pub fn format_subspace<F: Field>(names: &[String], s: &Subspace<F>) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = s.basis_vectors().map(|v| format_combination(names, v)).collect();
    format!("span{{{}}}", parts.join(", "))
}
