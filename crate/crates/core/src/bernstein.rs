//! Baric and Bernstein structure: weight verification, idempotents, the
//! Peirce decomposition `A = Ke + U + V`, `ann_U(U)`, classification,
//! quotients by barideals and the nuclear core `Ke + U + U^2`.

use thiserror::Error;

use crate::algebra::{AlgebraError, CommAlgebra, Element, NilpotencyReport, PowerKind};
use crate::field::Field;
use crate::identity::{check_identity, IdentityError, IdentityId, IdentityOutcome, Witness};
use crate::linalg::{dot, LinalgError, Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BernsteinError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error("weight has {found} entries, algebra has dimension {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("the weight function vanishes on every basis vector")]
    ZeroWeight,
    #[error("seed has weight {weight}, expected 1")]
    SeedWeight { weight: String },
    #[error("x^2 = {element} is not an idempotent of weight 1 (input is not Bernstein)")]
    NotIdempotent { element: String },
    #[error("barideal (dim {dim_n}) is not U + V (dims {dim_u} + {dim_v}); input is not Bernstein")]
    NotDirectSum { dim_n: usize, dim_u: usize, dim_v: usize },
    #[error("subspace is not contained in the barideal")]
    NotInBarideal,
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("nuclear core check failed: {0}")]
    NuclearCore(&'static str),
}

impl From<LinalgError> for BernsteinError {
    fn from(e: LinalgError) -> Self {
        BernsteinError::Algebra(e.into())
    }
}

/// Outcome of a property check: holds, or fails with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check<W> {
    Holds,
    Fails(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }
}

/// An algebra with a display name and an optional weight function, as read
/// from a file or produced by a family generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedAlgebra<F: Field> {
    pub name: String,
    pub algebra: CommAlgebra<F>,
    pub weight: Option<Vec<F>>,
}

impl<F: Field> NamedAlgebra<F> {
    pub fn baric(&self) -> Option<Result<BaricAlgebra<F>, BernsteinError>> {
        self.weight
            .as_ref()
            .map(|w| BaricAlgebra::new(self.algebra.clone(), w.clone()))
    }
}

/// A commutative algebra with a linear functional `w` given on the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaricAlgebra<F: Field> {
    pub algebra: CommAlgebra<F>,
    pub weight: Vec<F>,
}

impl<F: Field> BaricAlgebra<F> {
    pub fn new(algebra: CommAlgebra<F>, weight: Vec<F>) -> Result<Self, BernsteinError> {
        if weight.len() != algebra.dim() {
            return Err(BernsteinError::WeightLength {
                expected: algebra.dim(),
                found: weight.len(),
            });
        }
        Ok(BaricAlgebra { algebra, weight })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn weight_of(&self, x: &[F]) -> F {
        dot(&self.weight, x)
    }

    /// `N = ker w`.
    pub fn barideal(&self) -> Subspace<F> {
        Matrix::from_rows(vec![self.weight.clone()], self.dim())
            .expect("single row")
            .kernel()
    }
}

/// Why a weight function is not a nonzero algebra homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightWitness<F: Field> {
    Zero,
    NotMultiplicative {
        i: usize,
        j: usize,
        /// `w(b_i b_j)`
        weight_of_product: F,
        /// `w(b_i) w(b_j)`
        product_of_weights: F,
    },
}

/// `w != 0` and `w(b_i b_j) = w(b_i) w(b_j)` on all basis pairs.
pub fn verify_weight<F: Field>(b: &BaricAlgebra<F>) -> Check<WeightWitness<F>> {
    if b.weight.iter().all(F::is_zero) {
        return Check::Fails(WeightWitness::Zero);
    }
    for j in 0..b.dim() {
        for i in 0..=j {
            let lhs = b.weight_of(&b.algebra.basis_product(i, j));
            let rhs = b.weight[i].clone() * &b.weight[j];
            if lhs != rhs {
                return Check::Fails(WeightWitness::NotMultiplicative {
                    i,
                    j,
                    weight_of_product: lhs,
                    product_of_weights: rhs,
                });
            }
        }
    }
    Check::Holds
}

/// `e = x^2` for `x = b_k / w(b_k)`, `b_k` the first basis vector of nonzero weight.
pub fn find_idempotent<F: Field>(b: &BaricAlgebra<F>) -> Result<Element<F>, BernsteinError> {
    let k = b
        .weight
        .iter()
        .position(|w| !w.is_zero())
        .ok_or(BernsteinError::ZeroWeight)?;
    let inv = b.weight[k].inv().expect("nonzero");
    let x = b.algebra.basis_element(k).scale(&inv);
    idempotent_from_seed(b, &x)
}

/// `e = x^2` for a seed `x` of weight 1, checked to be an idempotent of weight 1.
pub fn idempotent_from_seed<F: Field>(b: &BaricAlgebra<F>, x: &Element<F>) -> Result<Element<F>, BernsteinError> {
    let wx = b.weight_of(b.algebra.element(x.coords().to_vec())?.coords());
    if !wx.is_one() {
        return Err(BernsteinError::SeedWeight { weight: wx.to_string() });
    }
    let e = b.algebra.square(x)?;
    if b.algebra.square(&e)? != e || !b.weight_of(e.coords()).is_one() {
        return Err(BernsteinError::NotIdempotent { element: b.algebra.format(&e) });
    }
    Ok(e)
}

/// Peirce decomposition relative to an idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeirceData<F: Field> {
    pub e: Element<F>,
    /// `{u in N : eu = u/2}`
    pub u: Subspace<F>,
    /// `{v in N : ev = 0}`
    pub v: Subspace<F>,
    pub n: Subspace<F>,
    /// `{u in U : uU = 0}`
    pub ann_u: Subspace<F>,
}

pub fn peirce<F: Field>(b: &BaricAlgebra<F>, e: &Element<F>) -> Result<PeirceData<F>, BernsteinError> {
    let a = &b.algebra;
    if a.square(e)? != *e || !b.weight_of(e.coords()).is_one() {
        return Err(BernsteinError::NotIdempotent { element: a.format(e) });
    }
    let n = b.barideal();
    let le = a.left_mult_operator(e, None)?;
    let half = F::from_ratio(1, 2).expect("characteristic is not 2");
    let u = le.eigenspace(&half)?.intersect(&n)?;
    let v = le.eigenspace(&F::zero())?.intersect(&n)?;
    if u.dim() + v.dim() != n.dim() {
        return Err(BernsteinError::NotDirectSum {
            dim_n: n.dim(),
            dim_u: u.dim(),
            dim_v: v.dim(),
        });
    }
    let ann_u = a.annihilator(&u, &u)?;
    Ok(PeirceData { e: e.clone(), u, v, n, ann_u })
}

/// Peirce data for the default idempotent.
pub fn peirce_default<F: Field>(b: &BaricAlgebra<F>) -> Result<PeirceData<F>, BernsteinError> {
    let e = find_idempotent(b)?;
    peirce(b, &e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeirceRelation {
    USquaredInV,
    UVInU,
    VSquaredInU,
    UVSquaredZero,
    AnnUKillsUPlusUSquared,
    VSquaredInAnnU,
}

impl PeirceRelation {
    pub fn describe(self) -> &'static str {
        match self {
            PeirceRelation::USquaredInV => "U^2 in V",
            PeirceRelation::UVInU => "UV in U",
            PeirceRelation::VSquaredInU => "V^2 in U",
            PeirceRelation::UVSquaredZero => "UV^2 = 0",
            PeirceRelation::AnnUKillsUPlusUSquared => "ann_U(U)(U + U^2) = 0",
            PeirceRelation::VSquaredInAnnU => "V^2 in ann_U(U)",
        }
    }
}

/// A basis product `left * right` lying outside the required target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeirceViolation<F: Field> {
    pub relation: PeirceRelation,
    pub left: Element<F>,
    pub right: Element<F>,
    pub product: Element<F>,
}

/// `(x, y, xy)` for a basis pair whose product escapes the target.
type Escape<F> = (Element<F>, Element<F>, Element<F>);

/// First basis pair `(x, y)` from `xs` × `ys` with `xy` outside `target`.
fn inclusion_failure<F: Field>(
    a: &CommAlgebra<F>,
    xs: &Subspace<F>,
    ys: &Subspace<F>,
    target: &Subspace<F>,
) -> Result<Option<Escape<F>>, BernsteinError> {
    for x in xs.basis_vectors() {
        for y in ys.basis_vectors() {
            let p = a.multiply_coords(x, y)?;
            if !target.contains(&p)? {
                return Ok(Some((
                    Element::new(x.to_vec()),
                    Element::new(y.to_vec()),
                    Element::new(p),
                )));
            }
        }
    }
    Ok(None)
}

/// The multiplication rules of the Peirce components plus the two standard
/// facts about `ann_U(U)`.
pub fn check_peirce_relations<F: Field>(
    a: &CommAlgebra<F>,
    p: &PeirceData<F>,
) -> Result<Check<PeirceViolation<F>>, BernsteinError> {
    let zero = Subspace::zero(a.dim());
    let v2 = a.subspace_product(&p.v, &p.v)?;
    let u_plus_u2 = p.u.sum(&a.subspace_product(&p.u, &p.u)?)?;
    let cases = [
        (PeirceRelation::USquaredInV, &p.u, &p.u, &p.v),
        (PeirceRelation::UVInU, &p.u, &p.v, &p.u),
        (PeirceRelation::VSquaredInU, &p.v, &p.v, &p.u),
        (PeirceRelation::UVSquaredZero, &p.u, &v2, &zero),
        (PeirceRelation::AnnUKillsUPlusUSquared, &p.ann_u, &u_plus_u2, &zero),
        (PeirceRelation::VSquaredInAnnU, &p.v, &p.v, &p.ann_u),
    ];
    for (relation, xs, ys, target) in cases {
        if let Some((left, right, product)) = inclusion_failure(a, xs, ys, target)? {
            return Ok(Check::Fails(PeirceViolation { relation, left, right, product }));
        }
    }
    Ok(Check::Holds)
}

/// Why the structural Jordan condition `V^2 = 0` and `(uv)v = 0` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JordanWitness<F: Field> {
    VSquaredNonzero { v1: Element<F>, v2: Element<F>, product: Element<F> },
    UVVNonzero { u: Element<F>, v: Element<F>, value: Element<F> },
}

/// `V^2 = 0` and `(uv)v = 0` for all `u in U`, `v in V`.
///
/// `(uv)v` is quadratic in `v`, so it is checked on basis vectors `v_j` and
/// on the polarized form `(uv_j)v_k + (uv_k)v_j`; a polarized failure turns
/// into the witness `v = v_j + v_k`.
pub fn jordan_condition<F: Field>(
    a: &CommAlgebra<F>,
    p: &PeirceData<F>,
) -> Result<Check<JordanWitness<F>>, BernsteinError> {
    let zero = Subspace::zero(a.dim());
    if let Some((v1, v2, product)) = inclusion_failure(a, &p.v, &p.v, &zero)? {
        return Ok(Check::Fails(JordanWitness::VSquaredNonzero { v1, v2, product }));
    }
    let vs: Vec<&[F]> = p.v.basis_vectors().collect();
    let uvv = |u: &[F], v: &[F]| a.mul_coords(&a.mul_coords(u, v), v);
    for u in p.u.basis_vectors() {
        for v in &vs {
            let value = uvv(u, v);
            if value.iter().any(|x| !x.is_zero()) {
                return Ok(Check::Fails(JordanWitness::UVVNonzero {
                    u: Element::new(u.to_vec()),
                    v: Element::new(v.to_vec()),
                    value: Element::new(value),
                }));
            }
        }
        for (j, vj) in vs.iter().enumerate() {
            for vk in &vs[j + 1..] {
                let sum: Vec<F> = vj.iter().zip(vk.iter()).map(|(x, y)| x.clone() + y).collect();
                let value = uvv(u, &sum);
                if value.iter().any(|x| !x.is_zero()) {
                    return Ok(Check::Fails(JordanWitness::UVVNonzero {
                        u: Element::new(u.to_vec()),
                        v: Element::new(sum),
                        value: Element::new(value),
                    }));
                }
            }
        }
    }
    Ok(Check::Holds)
}

/// A vector of `V` outside `U^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuclearWitness<F: Field> {
    pub missing: Element<F>,
}

/// The principal chain of the barideal stopped at a nonzero term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilWitness<F: Field> {
    pub stable_term: Subspace<F>,
}

/// Classification flags. Flags past a failed prerequisite are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification<F: Field> {
    pub baric: Check<WeightWitness<F>>,
    pub bernstein: Option<Check<Witness<F>>>,
    pub peirce: Option<PeirceData<F>>,
    /// Structural condition `V^2 = 0`, `(uv)v = 0`.
    pub jordan: Option<Check<JordanWitness<F>>>,
    /// The identity `x(x^2 y) = x^2(xy)`, computed independently.
    pub jordan_identity: Option<Check<Witness<F>>>,
    pub nuclear: Option<Check<NuclearWitness<F>>>,
    pub barideal_nilpotent: Option<Check<NilWitness<F>>>,
    pub barideal_report: Option<NilpotencyReport>,
}

impl<F: Field> Classification<F> {
    pub fn is_bernstein(&self) -> bool {
        self.bernstein.as_ref().is_some_and(Check::holds)
    }

    pub fn is_jordan(&self) -> bool {
        self.jordan.as_ref().is_some_and(Check::holds)
    }

    pub fn is_nuclear(&self) -> bool {
        self.nuclear.as_ref().is_some_and(Check::holds)
    }
}

fn identity_check<F: Field>(o: IdentityOutcome<F>) -> Check<Witness<F>> {
    match o {
        IdentityOutcome::Holds => Check::Holds,
        IdentityOutcome::Fails(w) => Check::Fails(w),
    }
}

pub fn nuclear_check<F: Field>(
    a: &CommAlgebra<F>,
    p: &PeirceData<F>,
) -> Result<Check<NuclearWitness<F>>, BernsteinError> {
    let u2 = a.subspace_product(&p.u, &p.u)?;
    Ok(match p.v.first_outside(&u2)? {
        None if u2.leq(&p.v)? => Check::Holds,
        None => {
            let stray = u2.first_outside(&p.v)?.expect("not contained");
            Check::Fails(NuclearWitness { missing: Element::new(stray) })
        }
        Some(v) => Check::Fails(NuclearWitness { missing: Element::new(v) }),
    })
}

pub fn classify<F: Field>(b: &BaricAlgebra<F>) -> Result<Classification<F>, BernsteinError> {
    let mut out = Classification {
        baric: verify_weight(b),
        bernstein: None,
        peirce: None,
        jordan: None,
        jordan_identity: None,
        nuclear: None,
        barideal_nilpotent: None,
        barideal_report: None,
    };
    if !out.baric.holds() {
        return Ok(out);
    }
    let a = &b.algebra;
    let bernstein = identity_check(check_identity(a, IdentityId::Bernstein, Some(&b.weight))?);
    let is_bernstein = bernstein.holds();
    out.bernstein = Some(bernstein);
    if !is_bernstein {
        return Ok(out);
    }
    let p = peirce_default(b)?;
    out.jordan = Some(jordan_condition(a, &p)?);
    out.jordan_identity = Some(identity_check(check_identity(a, IdentityId::Jordan, None)?));
    out.nuclear = Some(nuclear_check(a, &p)?);
    let report = a.nilpotency_report(&p.n)?;
    out.barideal_nilpotent = Some(if report.nil_index_principal.is_some() {
        Check::Holds
    } else {
        let chain = a.power_chain(&p.n, PowerKind::Principal, None)?;
        Check::Fails(NilWitness { stable_term: chain.last().clone() })
    });
    out.barideal_report = Some(report);
    out.peirce = Some(p);
    Ok(out)
}

/// `A / I` for a baric ideal `I`, on the standard basis vectors outside the
/// pivots of `I`, with the induced weight.
pub fn quotient<F: Field>(b: &BaricAlgebra<F>, ideal: &Subspace<F>) -> Result<BaricAlgebra<F>, BernsteinError> {
    let a = &b.algebra;
    if ideal.ambient_dim() != a.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.dim(),
            found: ideal.ambient_dim(),
        }
        .into());
    }
    if !ideal.leq(&b.barideal())? {
        return Err(BernsteinError::NotInBarideal);
    }
    if !a.is_ideal(ideal)? {
        return Err(BernsteinError::NotAnIdeal);
    }
    let keep = ideal.complement_indices();
    let names = keep.iter().map(|&i| a.names()[i].clone()).collect();
    let mut q = CommAlgebra::new(names);
    for (qi, &i) in keep.iter().enumerate() {
        for (qj, &j) in keep.iter().enumerate().skip(qi) {
            let reduced = ideal.reduce(&a.basis_product(i, j))?;
            let coords: Vec<F> = keep.iter().map(|&k| reduced[k].clone()).collect();
            q.set_product(qi, qj, &coords)?;
        }
    }
    let weight = keep.iter().map(|&i| b.weight[i].clone()).collect();
    BaricAlgebra::new(q, weight)
}

/// Picks a basis-vector name for `v`: the name of its leading coordinate,
/// suffixed with `'` until unused.
fn vector_name<F: Field>(a: &CommAlgebra<F>, v: &[F], used: &mut Vec<String>) -> String {
    let lead = v.iter().position(|x| !x.is_zero()).unwrap_or(0);
    let mut name = a.names()[lead].clone();
    while used.contains(&name) {
        name.push('\'');
    }
    used.push(name.clone());
    name
}

/// The subalgebra `Ke + U + U^2`, verified to be nuclear Bernstein, with
/// `U + U^2` verified to be an ideal of `A`.
pub fn nuclear_core<F: Field>(b: &BaricAlgebra<F>, p: &PeirceData<F>) -> Result<BaricAlgebra<F>, BernsteinError> {
    let a = &b.algebra;
    let u2 = a.subspace_product(&p.u, &p.u)?;
    let core_ideal = p.u.sum(&u2)?;
    if !a.is_ideal(&core_ideal)? {
        return Err(BernsteinError::NuclearCore("U + U^2 is not an ideal"));
    }
    let mut basis = vec![p.e.coords().to_vec()];
    basis.extend(p.u.basis_vectors().map(<[F]>::to_vec));
    basis.extend(u2.basis_vectors().map(<[F]>::to_vec));
    let mut used = Vec::new();
    let names = basis.iter().map(|v| vector_name(a, v, &mut used)).collect();
    let sub = a.restrict(&basis, names)?;
    let mut weight = vec![F::zero(); basis.len()];
    weight[0] = F::one();
    let core = BaricAlgebra::new(sub, weight)?;
    let flags = classify(&core)?;
    if !flags.is_bernstein() {
        return Err(BernsteinError::NuclearCore("core is not Bernstein"));
    }
    if !flags.is_nuclear() {
        return Err(BernsteinError::NuclearCore("core is not nuclear"));
    }
    Ok(core)
}
