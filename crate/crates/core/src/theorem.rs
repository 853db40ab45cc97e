//! Computational checks around nilpotency of the barideal.
//!
//! * the action of words in `V` on `ann_U(U)` and the matching between its
//!   invariant subspaces and ideals of `A` contained in `ann_U(U)`;
//! * the greatest subspace `I` with `V I = I`;
//! * nilpotency of the associative algebra generated by the operators
//!   `L_v|_N`, `v in V`;
//! * the `N I = I  <=>  V I = I` criterion;
//! * a decomposition certificate for an ideal `N` generated by finitely many
//!   elements whose generated subalgebra `F` is nilpotent.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, CommAlgebra, Element, PowerKind};
use crate::bernstein::{BaricAlgebra, BernsteinError, PeirceData};
use crate::field::Field;
use crate::linalg::{LinalgError, Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
    #[error("word letter {index} does not lie in V")]
    LetterOutsideV { index: usize },
    #[error("element does not lie in ann_U(U)")]
    NotInAnnU,
    #[error("subspace is not contained in ann_U(U)")]
    SubspaceNotInAnnU,
    #[error("N is not an ideal of the algebra")]
    NotAnIdeal,
    #[error("the generators span an ideal of dimension {generated}, not N (dimension {expected})")]
    GensDoNotGenerate { generated: usize, expected: usize },
    #[error("generators lie outside N")]
    GensOutsideN,
    #[error("the generated subalgebra is not nilpotent within {steps} full powers")]
    NotNilpotent { steps: usize },
}

impl From<LinalgError> for TheoremError {
    fn from(e: LinalgError) -> Self {
        TheoremError::Algebra(e.into())
    }
}

/// `(v_1 * ... * v_k) . u = v_1(v_2(...(v_k u)...))`.
pub fn module_action<F: Field>(
    a: &CommAlgebra<F>,
    p: &PeirceData<F>,
    word: &[Element<F>],
    u: &Element<F>,
) -> Result<Element<F>, TheoremError> {
    for (index, letter) in word.iter().enumerate() {
        if !p.v.contains(letter.coords())? {
            return Err(TheoremError::LetterOutsideV { index });
        }
    }
    if !p.ann_u.contains(u.coords())? {
        return Err(TheoremError::NotInAnnU);
    }
    let mut acc = u.clone();
    for letter in word.iter().rev() {
        acc = a.multiply(letter, &acc)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubmoduleIdealCheck {
    pub is_submodule: bool,
    pub is_ideal_in_a: bool,
}

impl SubmoduleIdealCheck {
    pub fn agree(&self) -> bool {
        self.is_submodule == self.is_ideal_in_a
    }
}

/// For `s` inside `ann_U(U)`: is `s` stable under `V`, and is it an ideal of `A`?
pub fn submodule_ideal_check<F: Field>(
    a: &CommAlgebra<F>,
    p: &PeirceData<F>,
    s: &Subspace<F>,
) -> Result<SubmoduleIdealCheck, TheoremError> {
    if !s.leq(&p.ann_u)? {
        return Err(TheoremError::SubspaceNotInAnnU);
    }
    Ok(SubmoduleIdealCheck {
        is_submodule: a.subspace_product(&p.v, s)?.leq(s)?,
        is_ideal_in_a: a.is_ideal(s)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSubspaceResult<F: Field> {
    /// `I_0 = N`, `I_(k+1) = V I_k`, ending at the first repeated term.
    pub chain: Vec<Subspace<F>>,
    pub gfp: Subspace<F>,
    pub steps: usize,
}

/// Greatest subspace `I` with `V I = I`, as the limit of `I_(k+1) = V I_k`
/// from `I_0 = N`. The chain decreases because `V N` lies in `N`.
pub fn greatest_fixed_subspace<F: Field>(
    a: &CommAlgebra<F>,
    p: &PeirceData<F>,
) -> Result<FixedSubspaceResult<F>, TheoremError> {
    let mut chain = vec![p.n.clone()];
    loop {
        let last = chain.last().expect("nonempty");
        let next = a.subspace_product(&p.v, last)?;
        if &next == last {
            let gfp = next;
            let steps = chain.len() - 1;
            return Ok(FixedSubspaceResult { chain, gfp, steps });
        }
        chain.push(next);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultClosure<F: Field> {
    /// `L_v` restricted to `N`, in the canonical basis of `N`, for `v` in a basis of `V`.
    pub generators: Vec<Matrix<F>>,
    /// A basis of the associative algebra spanned by all nonempty products.
    pub span_closure: Vec<Matrix<F>>,
    pub nilpotent: bool,
    /// Least `k` such that every product of `k` generators vanishes.
    pub nil_index: Option<usize>,
}

fn flatten<F: Field>(m: &Matrix<F>) -> Vec<F> {
    m.entries().to_vec()
}

fn unflatten<F: Field>(v: &[F], d: usize) -> Matrix<F> {
    let rows = v.chunks(d.max(1)).take(d).map(<[F]>::to_vec).collect();
    Matrix::from_rows(rows, d).expect("square chunks")
}

/// Builds the operators `L_v|_N` and decides whether the associative algebra
/// they generate is nilpotent. A nilpotent algebra of operators on a
/// `d`-dimensional space kills all products of length `d`, so products up to
/// length `d + 1` decide the question.
pub fn mult_closure_nilpotent<F: Field>(
    a: &CommAlgebra<F>,
    p: &PeirceData<F>,
) -> Result<MultClosure<F>, TheoremError> {
    let d = p.n.dim();
    let generators = p
        .v
        .basis_vectors()
        .map(|v| a.left_mult_operator(&Element::new(v.to_vec()), Some(&p.n)))
        .collect::<Result<Vec<_>, _>>()?;
    let flat_dim = d * d;
    let to_space = |ms: &[Matrix<F>]| {
        let vs: Vec<Vec<F>> = ms.iter().map(flatten).collect();
        Subspace::from_vectors(&vs, flat_dim)
    };
    let mut level = to_space(&generators)?;
    let mut closure = level.clone();
    let mut nil_index = None;
    for k in 1..=d + 1 {
        if level.is_zero() {
            nil_index = Some(k);
            break;
        }
        let products = level
            .basis_vectors()
            .flat_map(|m| {
                let m = unflatten(m, d);
                generators.iter().map(move |g| g.matmul(&m))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let next = to_space(&products)?;
        if next == level {
            break;
        }
        closure = closure.sum(&next)?;
        level = next;
    }
    Ok(MultClosure {
        generators,
        span_closure: closure.basis_vectors().map(|v| unflatten(v, d)).collect(),
        nilpotent: nil_index.is_some(),
        nil_index,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lemma51Check {
    pub ni_eq_i: bool,
    pub vi_eq_i: bool,
    pub conclusion_holds: bool,
}

/// `N I = I  <=>  V I = I`, and `N I = I` forces `I` into `ann_U(U)` as an ideal.
pub fn lemma51_check<F: Field>(
    a: &CommAlgebra<F>,
    p: &PeirceData<F>,
    s: &Subspace<F>,
) -> Result<Lemma51Check, TheoremError> {
    let ni_eq_i = a.subspace_product(&p.n, s)? == *s;
    let vi_eq_i = a.subspace_product(&p.v, s)? == *s;
    let consequence = !ni_eq_i || (s.leq(&p.ann_u)? && a.is_ideal(s)?);
    Ok(Lemma51Check {
        ni_eq_i,
        vi_eq_i,
        conclusion_holds: ni_eq_i == vi_eq_i && consequence,
    })
}

/// One inclusion `N^i ⊆ F^i + N^(i+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PowerInclusion {
    pub i: usize,
    pub holds: bool,
    pub dim_n_i: usize,
    pub dim_f_i_plus_n_next: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm43Certificate<F: Field> {
    /// Subalgebra generated by the ideal generators.
    pub f: Subspace<F>,
    /// Full-power nil index of `F`: `F^m = 0`.
    pub m: usize,
    pub inclusions: Vec<PowerInclusion>,
    /// Largest `i` such that the inclusions for `1..=i` all hold.
    pub inclusions_verified: usize,
    pub n_equals_f_plus_nm: bool,
    /// `N^m = 0`.
    pub n_nilpotent: bool,
    pub n_nil_index: Option<usize>,
}

impl<F: Field> Thm43Certificate<F> {
    /// Every recorded inclusion holds and `N = F` with `N^m = 0`.
    pub fn closes(&self) -> bool {
        self.inclusions.iter().all(|s| s.holds) && self.n_equals_f_plus_nm && self.n_nilpotent
    }
}

/// Certificate for an ideal `n` generated (as an ideal of the algebra `n`)
/// by `gens`: `F = <gens>`, `F^m = 0`, `N^i ⊆ F^i + N^(i+1)` for
/// `i = 1..=m`, `N = F + N^m`, and whether `N^m = 0`.
pub fn thm43_decompose<F: Field>(
    a: &CommAlgebra<F>,
    n: &Subspace<F>,
    gens: &[Element<F>],
    max_steps: Option<usize>,
) -> Result<Thm43Certificate<F>, TheoremError> {
    if !a.is_ideal(n)? {
        return Err(TheoremError::NotAnIdeal);
    }
    for g in gens {
        if !n.contains(a.element(g.coords().to_vec())?.coords())? {
            return Err(TheoremError::GensOutsideN);
        }
    }
    let generated = a.generated_ideal_within(n, gens)?;
    if generated != *n {
        return Err(TheoremError::GensDoNotGenerate {
            generated: generated.dim(),
            expected: n.dim(),
        });
    }
    let f = a.generated_subalgebra(gens)?;
    let chain = a.power_chain(&f, PowerKind::Full, max_steps)?;
    let m = chain.nil_index.ok_or(TheoremError::NotNilpotent {
        steps: chain.terms.len(),
    })?;
    let f_powers = a.full_powers(&f, m)?;
    let n_powers = a.full_powers(n, m + 1)?;
    let inclusions: Vec<PowerInclusion> = (1..=m)
        .map(|i| -> Result<PowerInclusion, TheoremError> {
            let rhs = f_powers[i - 1].sum(&n_powers[i])?;
            Ok(PowerInclusion {
                i,
                holds: n_powers[i - 1].leq(&rhs)?,
                dim_n_i: n_powers[i - 1].dim(),
                dim_f_i_plus_n_next: rhs.dim(),
            })
        })
        .collect::<Result<_, _>>()?;
    let inclusions_verified = inclusions.iter().take_while(|s| s.holds).count();
    let n_m = &n_powers[m - 1];
    let n_chain = a.power_chain(n, PowerKind::Full, max_steps)?;
    Ok(Thm43Certificate {
        n_equals_f_plus_nm: *n == f.sum(n_m)?,
        n_nilpotent: n_m.is_zero(),
        n_nil_index: n_chain.nil_index,
        f,
        m,
        inclusions,
        inclusions_verified,
    })
}

/// Convenience: the barideal certificate of a baric algebra.
pub fn barideal_certificate<F: Field>(
    b: &BaricAlgebra<F>,
    gens: &[Element<F>],
    max_steps: Option<usize>,
) -> Result<Thm43Certificate<F>, TheoremError> {
    thm43_decompose(&b.algebra, &b.barideal(), gens, max_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::peirce_default;
    use crate::families::{make_family, FamilyKind};
    use crate::field::Rational;

    fn baric(kind: FamilyKind, n: usize) -> BaricAlgebra<Rational> {
        make_family::<Rational>(kind, n).unwrap().baric().unwrap().unwrap()
    }

    fn el(a: &CommAlgebra<Rational>, name: &str) -> Element<Rational> {
        a.basis_element(a.index_of(name).unwrap())
    }

    fn span(a: &CommAlgebra<Rational>, names: &[&str]) -> Subspace<Rational> {
        let idx: Vec<usize> = names.iter().map(|n| a.index_of(n).unwrap()).collect();
        Subspace::coordinate(&idx, a.dim())
    }

    #[test]
    fn module_action_examples() {
        let b = baric(FamilyKind::Bdown, 3);
        let a = &b.algebra;
        let p = peirce_default(&b).unwrap();
        let v1 = el(a, "v1");
        let u3 = el(a, "u3");
        assert_eq!(module_action(a, &p, &[v1.clone(), v1.clone()], &u3).unwrap(), el(a, "u1"));
        assert_eq!(module_action(a, &p, &[], &u3).unwrap(), u3);
        assert!(module_action(a, &p, &[v1.clone(), v1.clone(), v1.clone()], &u3).unwrap().is_zero());
        assert_eq!(
            module_action(a, &p, std::slice::from_ref(&u3), &u3),
            Err(TheoremError::LetterOutsideV { index: 0 })
        );
        assert_eq!(module_action(a, &p, std::slice::from_ref(&v1), &v1), Err(TheoremError::NotInAnnU));
    }

    #[test]
    fn submodule_examples() {
        let b = baric(FamilyKind::Bdown, 3);
        let a = &b.algebra;
        let p = peirce_default(&b).unwrap();
        let both = |s| submodule_ideal_check(a, &p, &s).unwrap();
        assert_eq!(both(span(a, &["u1"])), SubmoduleIdealCheck { is_submodule: true, is_ideal_in_a: true });
        assert_eq!(both(Subspace::zero(a.dim())), SubmoduleIdealCheck { is_submodule: true, is_ideal_in_a: true });
        assert_eq!(both(span(a, &["u2"])), SubmoduleIdealCheck { is_submodule: false, is_ideal_in_a: false });
        assert_eq!(
            submodule_ideal_check(a, &p, &span(a, &["v1"])),
            Err(TheoremError::SubspaceNotInAnnU)
        );
    }

    #[test]
    fn fixed_subspace_examples() {
        let b = baric(FamilyKind::Bup, 4);
        let a = &b.algebra;
        let p = peirce_default(&b).unwrap();
        let r = greatest_fixed_subspace(a, &p).unwrap();
        assert_eq!(
            r.chain,
            vec![
                p.n.clone(),
                span(a, &["u2", "u3", "u4"]),
                span(a, &["u3", "u4"]),
                span(a, &["u4"]),
                Subspace::zero(a.dim()),
            ]
        );
        assert!(r.gfp.is_zero());

        let b = baric(FamilyKind::Bdown, 3);
        let r = greatest_fixed_subspace(&b.algebra, &peirce_default(&b).unwrap()).unwrap();
        assert!(r.gfp.is_zero());

        let j = baric(FamilyKind::Jordan3, 0);
        let r = greatest_fixed_subspace(&j.algebra, &peirce_default(&j).unwrap()).unwrap();
        assert!(r.gfp.is_zero());
        assert_eq!(r.chain.len(), 2);
    }

    #[test]
    fn mult_closure_examples() {
        let b = baric(FamilyKind::Bdown, 3);
        let c = mult_closure_nilpotent(&b.algebra, &peirce_default(&b).unwrap()).unwrap();
        assert_eq!(c.generators.len(), 1);
        assert_eq!(c.generators[0].rows(), 4);
        assert!(c.nilpotent);
        // L^2 u3 = u1 and L^3 = 0 on N
        assert_eq!(c.nil_index, Some(3));
        assert_eq!(c.span_closure.len(), 2);

        let j = baric(FamilyKind::Jordan3, 0);
        let p = peirce_default(&j).unwrap();
        let c = mult_closure_nilpotent(&j.algebra, &p).unwrap();
        assert!(c.nilpotent);

        let b = baric(FamilyKind::Bup, 4);
        let c = mult_closure_nilpotent(&b.algebra, &peirce_default(&b).unwrap()).unwrap();
        assert!(c.nilpotent);
    }

    #[test]
    fn mult_closure_with_trivial_v() {
        let mut a = CommAlgebra::<Rational>::with_names(&["e", "u"]);
        let half = Rational::from_ratio(1, 2).unwrap();
        a.set_product(0, 0, &[Rational::from_i64(1), Rational::from_i64(0)]).unwrap();
        a.set_product(0, 1, &[Rational::from_i64(0), half]).unwrap();
        let b = BaricAlgebra::new(a, vec![Rational::from_i64(1), Rational::from_i64(0)]).unwrap();
        let p = peirce_default(&b).unwrap();
        assert!(p.v.is_zero());
        let c = mult_closure_nilpotent(&b.algebra, &p).unwrap();
        assert!(c.generators.is_empty() && c.span_closure.is_empty());
        assert_eq!(c.nil_index, Some(1));
    }

    #[test]
    fn lemma51_examples() {
        let b = baric(FamilyKind::Bdown, 3);
        let a = &b.algebra;
        let p = peirce_default(&b).unwrap();
        let zero = lemma51_check(a, &p, &Subspace::zero(a.dim())).unwrap();
        assert!(zero.ni_eq_i && zero.vi_eq_i && zero.conclusion_holds);
        let u = span(a, &["u1", "u2", "u3"]);
        assert_eq!(a.subspace_product(&p.n, &u).unwrap(), span(a, &["u1", "u2"]));
        let r = lemma51_check(a, &p, &u).unwrap();
        assert!(!r.ni_eq_i && !r.vi_eq_i && r.conclusion_holds);
    }

    #[test]
    fn thm43_examples() {
        let s = make_family::<Rational>(FamilyKind::Squareshift, 3).unwrap().algebra;
        let n = Subspace::full(3);
        let cert = thm43_decompose(&s, &n, &[el(&s, "e3")], None).unwrap();
        assert_eq!(cert.f, n);
        assert_eq!(cert.m, 5);
        assert_eq!(cert.inclusions_verified, 5);
        assert!(cert.closes());

        let zero = Subspace::zero(3);
        let cert = thm43_decompose(&s, &zero, &[], None).unwrap();
        assert_eq!(cert.m, 1);
        assert!(cert.closes());

        let b = baric(FamilyKind::Bdown, 3);
        let a = &b.algebra;
        let cert = barideal_certificate(&b, &[el(a, "u3"), el(a, "v1")], None).unwrap();
        assert_eq!(cert.f, span(a, &["u1", "u2", "u3", "v1"]));
        assert!(cert.inclusions.iter().all(|s| s.holds));
        assert!(cert.n_nilpotent && cert.closes());
    }

    #[test]
    fn thm43_errors() {
        let s = make_family::<Rational>(FamilyKind::Squareshift, 3).unwrap().algebra;
        let n = Subspace::full(3);
        assert!(matches!(
            thm43_decompose(&s, &n, &[el(&s, "e2")], None),
            Err(TheoremError::GensDoNotGenerate { .. })
        ));
        let b = baric(FamilyKind::Bdown, 3);
        let a = &b.algebra;
        assert_eq!(
            thm43_decompose(a, &span(a, &["u2"]), &[el(a, "u2")], None),
            Err(TheoremError::NotAnIdeal)
        );
        assert_eq!(
            thm43_decompose(a, &b.barideal(), &[el(a, "e")], None),
            Err(TheoremError::GensOutsideN)
        );
        // The whole of bdown(2) is generated by e, v1, u2 but is not nilpotent.
        let b2 = baric(FamilyKind::Bdown, 2);
        let a2 = &b2.algebra;
        let all = Subspace::full(a2.dim());
        assert!(matches!(
            thm43_decompose(a2, &all, &[el(a2, "e"), el(a2, "v1"), el(a2, "u2")], None),
            Err(TheoremError::NotNilpotent { .. })
        ));
    }
}
