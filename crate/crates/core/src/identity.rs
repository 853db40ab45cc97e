//! Exact verification of polynomial identities by full linearization.
//!
//! An identity `f(x, y, ...) = 0` that is homogeneous of degree `d` in `x`
//! holds on the whole algebra iff its full linearization
//!
//! ```text
//! P(x1, ..., xd) = sum over nonempty S of (-1)^(d - |S|) f(sum_{i in S} xi)
//! ```
//!
//! vanishes, because `P(x, ..., x) = d! f(x)` and the characteristic is 0
//! (or a prime larger than `d`). `P` is multilinear and symmetric, so it is
//! enough to evaluate it on nondecreasing tuples of basis vectors. Values of
//! `f` at sums of basis vectors are memoized since the same partial sums
//! appear in many tuples.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{scale_vec, AlgebraError, CommAlgebra, Element};
use crate::field::Field;
use crate::linalg::dot;
use crate::sample::random_element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `(x^2)^2 = w(x)^2 x^2`
    Bernstein,
    /// `x (x^2 y) = x^2 (x y)`
    Jordan,
    /// `x^3 = w(x) x^2`
    CubeWeight,
    /// `(xy)z + (yz)x + (zx)y = 0`
    Jacobi,
    /// `x^3 = 0`
    CubeZero,
    /// `(x^2)^2 = 0`
    SquareSquareZero,
}

impl IdentityId {
    pub const ALL: [IdentityId; 6] = [
        IdentityId::Bernstein,
        IdentityId::Jordan,
        IdentityId::CubeWeight,
        IdentityId::Jacobi,
        IdentityId::CubeZero,
        IdentityId::SquareSquareZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Bernstein => "bernstein",
            IdentityId::Jordan => "jordan",
            IdentityId::CubeWeight => "cube_weight",
            IdentityId::Jacobi => "jacobi",
            IdentityId::CubeZero => "cube_zero",
            IdentityId::SquareSquareZero => "square_square_zero",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            IdentityId::Bernstein => "(x^2)^2 = w(x)^2 x^2",
            IdentityId::Jordan => "x(x^2 y) = x^2(xy)",
            IdentityId::CubeWeight => "x^3 = w(x) x^2",
            IdentityId::Jacobi => "(xy)z + (yz)x + (zx)y = 0",
            IdentityId::CubeZero => "x^3 = 0",
            IdentityId::SquareSquareZero => "(x^2)^2 = 0",
        }
    }

    pub fn needs_weight(self) -> bool {
        matches!(self, IdentityId::Bernstein | IdentityId::CubeWeight)
    }

    /// Variables with their degrees.
    pub fn variables(self) -> &'static [(&'static str, usize)] {
        match self {
            IdentityId::Bernstein | IdentityId::SquareSquareZero => &[("x", 4)],
            IdentityId::CubeWeight | IdentityId::CubeZero => &[("x", 3)],
            IdentityId::Jordan => &[("x", 3), ("y", 1)],
            IdentityId::Jacobi => &[("x", 1), ("y", 1), ("z", 1)],
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        IdentityId::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| format!("unknown identity `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("identity {0} needs a weight function")]
    MissingWeight(IdentityId),
    #[error("weight has {found} entries, algebra has dimension {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("identity {id} takes {expected} variables, got {found}")]
    Arity { id: IdentityId, expected: usize, found: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An assignment at which an identity fails, with the nonzero defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<F: Field> {
    pub identity: IdentityId,
    pub assignment: Vec<(String, Element<F>)>,
    pub residual: Element<F>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityOutcome<F: Field> {
    Holds,
    Fails(Witness<F>),
}

impl<F: Field> IdentityOutcome<F> {
    pub fn holds(&self) -> bool {
        matches!(self, IdentityOutcome::Holds)
    }

    pub fn witness(&self) -> Option<&Witness<F>> {
        match self {
            IdentityOutcome::Holds => None,
            IdentityOutcome::Fails(w) => Some(w),
        }
    }
}

fn validate_weight<'w, F: Field>(
    a: &CommAlgebra<F>,
    id: IdentityId,
    weight: Option<&'w [F]>,
) -> Result<Option<&'w [F]>, IdentityError> {
    match weight {
        Some(w) if w.len() != a.dim() => Err(IdentityError::WeightLength {
            expected: a.dim(),
            found: w.len(),
        }),
        None if id.needs_weight() => Err(IdentityError::MissingWeight(id)),
        w => Ok(w),
    }
}

/// The defect `lhs - rhs` of the identity at the given variable values.
pub fn evaluate<F: Field>(
    a: &CommAlgebra<F>,
    id: IdentityId,
    weight: Option<&[F]>,
    values: &[Element<F>],
) -> Result<Element<F>, IdentityError> {
    let weight = validate_weight(a, id, weight)?;
    let arity = id.variables().len();
    if values.len() != arity {
        return Err(IdentityError::Arity {
            id,
            expected: arity,
            found: values.len(),
        });
    }
    for v in values {
        a.element(v.coords().to_vec())?;
    }
    let coords: Vec<&[F]> = values.iter().map(Element::coords).collect();
    Ok(Element::new(defect(a, id, weight, &coords)))
}

/// Re-evaluates the identity at a witness assignment.
pub fn evaluate_witness<F: Field>(
    a: &CommAlgebra<F>,
    weight: Option<&[F]>,
    witness: &Witness<F>,
) -> Result<Element<F>, IdentityError> {
    let values: Vec<Element<F>> = witness.assignment.iter().map(|(_, v)| v.clone()).collect();
    evaluate(a, witness.identity, weight, &values)
}

fn defect<F: Field>(a: &CommAlgebra<F>, id: IdentityId, weight: Option<&[F]>, v: &[&[F]]) -> Vec<F> {
    let mul = |x: &[F], y: &[F]| a.mul_coords(x, y);
    let sub = |x: Vec<F>, y: Vec<F>| -> Vec<F> { x.into_iter().zip(y).map(|(p, q)| p - q).collect() };
    let w = |x: &[F]| dot(weight.expect("validated"), x);
    match id {
        IdentityId::Bernstein => {
            let x2 = mul(v[0], v[0]);
            let wx = w(v[0]);
            let rhs = scale_vec(&x2, &(wx.clone() * &wx));
            sub(mul(&x2, &x2), rhs)
        }
        IdentityId::SquareSquareZero => {
            let x2 = mul(v[0], v[0]);
            mul(&x2, &x2)
        }
        IdentityId::CubeWeight => {
            let x2 = mul(v[0], v[0]);
            let rhs = scale_vec(&x2, &w(v[0]));
            sub(mul(&x2, v[0]), rhs)
        }
        IdentityId::CubeZero => {
            let x2 = mul(v[0], v[0]);
            mul(&x2, v[0])
        }
        IdentityId::Jordan => {
            let (x, y) = (v[0], v[1]);
            let x2 = mul(x, x);
            sub(mul(x, &mul(&x2, y)), mul(&x2, &mul(x, y)))
        }
        IdentityId::Jacobi => {
            let (x, y, z) = (v[0], v[1], v[2]);
            let t1 = mul(&mul(x, y), z);
            let t2 = mul(&mul(y, z), x);
            let t3 = mul(&mul(z, x), y);
            t1.into_iter()
                .zip(t2)
                .zip(t3)
                .map(|((p, q), r)| p + q + r)
                .collect()
        }
    }
}

/// Nondecreasing sequences of length `len` over `0..n`, in lexicographic order.
fn multisets(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = vec![0; len];
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..len).rev().find(|&p| cur[p] + 1 < n) else {
            return out;
        };
        let next = cur[pos] + 1;
        for c in &mut cur[pos..] {
            *c = next;
        }
    }
}

/// Basis tuples, one multiset per variable, lexicographic with the first
/// variable outermost.
fn basis_tuples(n: usize, degrees: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for &d in degrees {
        let choices = multisets(n, d);
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut t = prefix.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect();
    }
    tuples
}

/// All nonempty position subsets per variable, as sub-multisets with sign.
/// Ordered by total size, then lexicographically by masks.
fn sub_assignments(tuple: &[Vec<usize>]) -> Vec<(bool, Vec<Vec<usize>>)> {
    let mut combos: Vec<(usize, Vec<u32>)> = vec![(0, Vec::new())];
    for part in tuple {
        let d = part.len();
        combos = combos
            .into_iter()
            .flat_map(|(size, masks)| {
                (1u32..(1 << d)).map(move |m| {
                    let mut masks = masks.clone();
                    masks.push(m);
                    (size + m.count_ones() as usize, masks)
                })
            })
            .collect();
    }
    combos.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    combos
        .into_iter()
        .map(|(_, masks)| {
            let mut negative = false;
            let subs = tuple
                .iter()
                .zip(&masks)
                .map(|(part, &m)| {
                    if (part.len() - m.count_ones() as usize) % 2 == 1 {
                        negative = !negative;
                    }
                    part.iter()
                        .enumerate()
                        .filter(|(p, _)| m & (1 << p) != 0)
                        .map(|(_, &b)| b)
                        .collect()
                })
                .collect();
            (negative, subs)
        })
        .collect()
}

fn multiset_vector<F: Field>(n: usize, indices: &[usize]) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    for &i in indices {
        v[i] = v[i].clone() + F::one();
    }
    v
}

/// Decides whether the identity holds on all of `a`.
///
/// The witness for a failure is found deterministically: the first failing
/// basis tuple in lexicographic order, then the smallest partial sum of that
/// tuple at which the identity itself is nonzero.
pub fn check_identity<F: Field>(
    a: &CommAlgebra<F>,
    id: IdentityId,
    weight: Option<&[F]>,
) -> Result<IdentityOutcome<F>, IdentityError> {
    check_identity_seeded(a, id, weight, 0)
}

/// As [`check_identity`], with the seed for the random fallback search.
pub fn check_identity_seeded<F: Field>(
    a: &CommAlgebra<F>,
    id: IdentityId,
    weight: Option<&[F]>,
    seed: u64,
) -> Result<IdentityOutcome<F>, IdentityError> {
    let weight = validate_weight(a, id, weight)?;
    let n = a.dim();
    let degrees: Vec<usize> = id.variables().iter().map(|(_, d)| *d).collect();
    let mut memo: HashMap<Vec<Vec<usize>>, Vec<F>> = HashMap::new();
    let mut eval = |subs: &Vec<Vec<usize>>| -> Vec<F> {
        if let Some(v) = memo.get(subs) {
            return v.clone();
        }
        let values: Vec<Vec<F>> = subs.iter().map(|s| multiset_vector(n, s)).collect();
        let refs: Vec<&[F]> = values.iter().map(Vec::as_slice).collect();
        let v = defect(a, id, weight, &refs);
        memo.insert(subs.clone(), v.clone());
        v
    };

    for tuple in basis_tuples(n, &degrees) {
        let subs = sub_assignments(&tuple);
        let mut total = vec![F::zero(); n];
        for (negative, sub) in &subs {
            let f = eval(sub);
            for (t, x) in total.iter_mut().zip(f) {
                *t = if *negative { t.clone() - x } else { t.clone() + x };
            }
        }
        if total.iter().all(F::is_zero) {
            continue;
        }
        for (_, sub) in &subs {
            let f = eval(sub);
            if f.iter().any(|x| !x.is_zero()) {
                let assignment = id
                    .variables()
                    .iter()
                    .zip(sub)
                    .map(|((name, _), s)| (name.to_string(), Element::new(multiset_vector(n, s))))
                    .collect();
                return Ok(IdentityOutcome::Fails(Witness {
                    identity: id,
                    assignment,
                    residual: Element::new(f),
                }));
            }
        }
        // A nonzero signed sum has a nonzero summand, so this is unreachable
        // in exact arithmetic; keep a sampling fallback regardless.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let IdentityOutcome::Fails(w) = random_identity_probe(a, id, weight, 1000, &mut rng)? {
            return Ok(IdentityOutcome::Fails(w));
        }
    }
    Ok(IdentityOutcome::Holds)
}

/// Evaluates the identity directly at `trials` random dense assignments.
pub fn random_identity_probe<F: Field, R: Rng + ?Sized>(
    a: &CommAlgebra<F>,
    id: IdentityId,
    weight: Option<&[F]>,
    trials: usize,
    rng: &mut R,
) -> Result<IdentityOutcome<F>, IdentityError> {
    let weight = validate_weight(a, id, weight)?;
    for _ in 0..trials {
        let values: Vec<Element<F>> = id
            .variables()
            .iter()
            .map(|_| random_element(a.dim(), rng))
            .collect();
        let refs: Vec<&[F]> = values.iter().map(Element::coords).collect();
        let residual = defect(a, id, weight, &refs);
        if residual.iter().any(|x| !x.is_zero()) {
            let assignment = id
                .variables()
                .iter()
                .zip(values)
                .map(|((name, _), v)| (name.to_string(), v))
                .collect();
            return Ok(IdentityOutcome::Fails(Witness {
                identity: id,
                assignment,
                residual: Element::new(residual),
            }));
        }
    }
    Ok(IdentityOutcome::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_family, FamilyKind};
    use crate::field::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn multiset_enumeration() {
        assert_eq!(multisets(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(multisets(12, 4).len(), 1365);
        assert_eq!(multisets(3, 0), vec![Vec::<usize>::new()]);
        assert!(multisets(0, 2).is_empty());
    }

    #[test]
    fn square_square_zero_fails_on_squareshift3() {
        let a = make_family::<Rational>(FamilyKind::Squareshift, 3).unwrap().algebra;
        let out = check_identity(&a, IdentityId::SquareSquareZero, None).unwrap();
        let w = out.witness().expect("must fail");
        assert_eq!(w.assignment, vec![("x".to_string(), a.basis_element(2))]);
        assert_eq!(w.residual, a.basis_element(0));
    }

    #[test]
    fn one_dimensional_idempotent_is_bernstein() {
        let mut a = CommAlgebra::<Rational>::with_names(&["e"]);
        a.set_product(0, 0, &[q(1)]).unwrap();
        let out = check_identity(&a, IdentityId::Bernstein, Some(&[q(1)])).unwrap();
        assert!(out.holds());
    }

    #[test]
    fn bdown3_is_not_jordan() {
        let f = make_family::<Rational>(FamilyKind::Bdown, 3).unwrap();
        let out = check_identity(&f.algebra, IdentityId::Jordan, None).unwrap();
        let w = out.witness().expect("bdown(3) is not Jordan");
        let again = evaluate_witness(&f.algebra, None, w).unwrap();
        assert_eq!(again, w.residual);
        assert!(!w.residual.is_zero());
    }

    #[test]
    fn missing_weight_is_an_error() {
        let a = make_family::<Rational>(FamilyKind::Squareshift, 2).unwrap().algebra;
        assert_eq!(
            check_identity(&a, IdentityId::Bernstein, None),
            Err(IdentityError::MissingWeight(IdentityId::Bernstein))
        );
        assert!(matches!(
            check_identity(&a, IdentityId::CubeWeight, Some(&[q(1)])),
            Err(IdentityError::WeightLength { .. })
        ));
    }

    #[test]
    fn probe_finds_square_square_defect() {
        let a = make_family::<Rational>(FamilyKind::Squareshift, 3).unwrap().algebra;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let out = random_identity_probe(&a, IdentityId::SquareSquareZero, None, 100, &mut rng).unwrap();
        let w = out.witness().expect("probe should hit the defect");
        assert_eq!(evaluate_witness(&a, None, w).unwrap(), w.residual);
    }

    #[test]
    fn jordan3_is_jordan_by_probe() {
        let a = make_family::<Rational>(FamilyKind::Jordan3, 0).unwrap().algebra;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(random_identity_probe(&a, IdentityId::Jordan, None, 200, &mut rng).unwrap().holds());
        assert!(check_identity(&a, IdentityId::Jordan, None).unwrap().holds());
    }

    #[test]
    fn sub_assignment_signs() {
        let subs = sub_assignments(&[vec![0, 1]]);
        assert_eq!(
            subs,
            vec![(true, vec![vec![0]]), (true, vec![vec![1]]), (false, vec![vec![0, 1]])]
        );
    }

    #[test]
    fn arity_checked() {
        let a = make_family::<Rational>(FamilyKind::Jordan3, 0).unwrap().algebra;
        let x = a.basis_element(0);
        assert!(matches!(
            evaluate(&a, IdentityId::Jordan, None, &[x]),
            Err(IdentityError::Arity { .. })
        ));
    }
}
