//! Finite truncations of the standard example algebras.
//!
//! | kind          | basis                    | nonzero products                                   |
//! |---------------|--------------------------|----------------------------------------------------|
//! | `zhevlakov`   | `e1..en`                 | `ei ej = e(min(i,j)-1)` for `i, j >= 2`            |
//! | `squareshift` | `e1..en`                 | `ek^2 = e(k-1)` for `k >= 2`                       |
//! | `bdown`       | `e, v1, u1..un`          | `e^2 = e`, `e ui = ui/2`, `ui v1 = u(i-1)` (`i>=2`) |
//! | `bup`         | `e, v2, u1..un`          | `e^2 = e`, `e ui = ui/2`, `ui v2 = u(i+1)` (`i<n`)  |
//! | `jordan3`     | `e, u, v`                | `e^2 = e`, `e u = u/2`, `u^2 = v`                  |
//!
//! `bdown` and `bup` carry the weight `w(e) = 1`, zero elsewhere.
//!
//! Truncation changes some properties of the infinite-dimensional originals:
//! `zhevlakov(n)` no longer satisfies `N^2 = N` (its square misses `en`), and
//! setting `un v2 = 0` in `bup(n)` makes the barideal nilpotent, so the
//! truncated `bup` agrees with every finite-dimensional nilpotency criterion.
//!
//! The iterated squares `x^[r]` of an element of `squareshift` have squared
//! coefficients at every step: `(a2 e2 + a3 e3)^2 = a2^2 e1 + a3^2 e2`.
//! [`plenary_trace`] computes them directly.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{AlgebraError, CommAlgebra, Element};
use crate::bernstein::NamedAlgebra;
use crate::field::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Zhevlakov,
    Squareshift,
    Bdown,
    Bup,
    Jordan3,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Zhevlakov,
        FamilyKind::Squareshift,
        FamilyKind::Bdown,
        FamilyKind::Bup,
        FamilyKind::Jordan3,
    ];

    pub fn is_parametrized(self) -> bool {
        self != FamilyKind::Jordan3
    }

    pub fn is_baric(self) -> bool {
        matches!(self, FamilyKind::Bdown | FamilyKind::Bup | FamilyKind::Jordan3)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Zhevlakov => "zhevlakov",
            FamilyKind::Squareshift => "squareshift",
            FamilyKind::Bdown => "bdown",
            FamilyKind::Bup => "bup",
            FamilyKind::Jordan3 => "jordan3",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, FamilyError> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| FamilyError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}` (expected zhevlakov, squareshift, bdown, bup or jordan3)")]
    UnknownKind(String),
    #[error("family {kind} needs n >= 1, got {n}")]
    InvalidN { kind: FamilyKind, n: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Builds the truncation of `kind` with parameter `n` (ignored for `jordan3`).
pub fn make_family<F: Field>(kind: FamilyKind, n: usize) -> Result<NamedAlgebra<F>, FamilyError> {
    if kind.is_parametrized() && n == 0 {
        return Err(FamilyError::InvalidN { kind, n });
    }
    let name = if kind.is_parametrized() {
        format!("{kind}{n}")
    } else {
        kind.to_string()
    };
    let half = F::from_ratio(1, 2).expect("characteristic is not 2");
    let unit = |dim: usize, i: usize, c: F| {
        let mut v = vec![F::zero(); dim];
        v[i] = c;
        v
    };
    let named = match kind {
        FamilyKind::Zhevlakov | FamilyKind::Squareshift => {
            let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
            let mut a = CommAlgebra::new(names);
            // index k holds e_(k+1)
            for i in 1..n {
                for j in i..n {
                    if kind == FamilyKind::Squareshift && i != j {
                        continue;
                    }
                    a.set_product(i, j, &unit(n, i.min(j) - 1, F::one()))?;
                }
            }
            NamedAlgebra { name, algebra: a, weight: None }
        }
        FamilyKind::Bdown | FamilyKind::Bup => {
            let dim = n + 2;
            let v_name = if kind == FamilyKind::Bdown { "v1" } else { "v2" };
            let mut names = vec!["e".to_string(), v_name.to_string()];
            names.extend((1..=n).map(|i| format!("u{i}")));
            let mut a = CommAlgebra::new(names);
            let u = |i: usize| i + 1; // u_i lives at index i + 1
            a.set_product(0, 0, &unit(dim, 0, F::one()))?;
            for i in 1..=n {
                a.set_product(0, u(i), &unit(dim, u(i), half.clone()))?;
            }
            match kind {
                FamilyKind::Bdown => {
                    for i in 2..=n {
                        a.set_product(u(i), 1, &unit(dim, u(i - 1), F::one()))?;
                    }
                }
                _ => {
                    for i in 1..n {
                        a.set_product(u(i), 1, &unit(dim, u(i + 1), F::one()))?;
                    }
                }
            }
            let mut weight = vec![F::zero(); dim];
            weight[0] = F::one();
            NamedAlgebra { name, algebra: a, weight: Some(weight) }
        }
        FamilyKind::Jordan3 => {
            let mut a = CommAlgebra::with_names(&["e", "u", "v"]);
            a.set_product(0, 0, &unit(3, 0, F::one()))?;
            a.set_product(0, 1, &unit(3, 1, half))?;
            a.set_product(1, 1, &unit(3, 2, F::one()))?;
            NamedAlgebra { name, algebra: a, weight: Some(vec![F::one(), F::zero(), F::zero()]) }
        }
    };
    Ok(named)
}

/// `x^[1] = x`, `x^[r] = (x^[r-1])^2`, up to `max_r` terms; stops after the
/// first zero term.
pub fn plenary_trace<F: Field>(
    a: &CommAlgebra<F>,
    x: &Element<F>,
    max_r: usize,
) -> Result<Vec<Element<F>>, AlgebraError> {
    let mut out = vec![a.element(x.coords().to_vec())?];
    while out.len() < max_r && !out.last().expect("nonempty").is_zero() {
        let next = a.square(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, F5};
    use crate::linalg::Subspace;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn kinds_round_trip_through_strings() {
        for k in FamilyKind::ALL {
            assert_eq!(k.to_string().parse::<FamilyKind>().unwrap(), k);
        }
        assert!("bsideways".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn invalid_n() {
        assert!(matches!(
            make_family::<Rational>(FamilyKind::Bdown, 0),
            Err(FamilyError::InvalidN { .. })
        ));
        assert!(make_family::<Rational>(FamilyKind::Jordan3, 0).is_ok());
    }

    #[test]
    fn squareshift_one_is_zero_algebra() {
        let f = make_family::<Rational>(FamilyKind::Squareshift, 1).unwrap();
        assert_eq!(f.algebra.dim(), 1);
        assert!(f.algebra.is_zero_algebra());
        assert!(f.weight.is_none());
    }

    #[test]
    fn zhevlakov_square_misses_top() {
        let a = make_family::<Rational>(FamilyKind::Zhevlakov, 4).unwrap().algebra;
        let n = Subspace::full(4);
        assert_eq!(a.subspace_product(&n, &n).unwrap(), Subspace::coordinate(&[0, 1, 2], 4));
    }

    #[test]
    fn bup_products() {
        let a = make_family::<Rational>(FamilyKind::Bup, 3).unwrap().algebra;
        let idx = |s: &str| a.index_of(s).unwrap();
        assert_eq!(a.basis_product(idx("u1"), idx("v2")), a.basis_element(idx("u2")).into_coords());
        assert!(a.basis_product(idx("u3"), idx("v2")).iter().all(|c| c == &q(0)));
    }

    #[test]
    fn prime_field_families() {
        let f = make_family::<F5>(FamilyKind::Bdown, 2).unwrap();
        let e = f.algebra.basis_element(0);
        let u1 = f.algebra.basis_element(2);
        assert_eq!(
            f.algebra.multiply(&e, &u1).unwrap(),
            u1.scale(&F5::from_ratio(1, 2).unwrap())
        );
    }

    #[test]
    fn plenary_trace_examples() {
        let a = make_family::<Rational>(FamilyKind::Squareshift, 3).unwrap().algebra;
        let x = Element::new(vec![q(0), q(1), q(1)]);
        let t = plenary_trace(&a, &x, 10).unwrap();
        assert_eq!(t[1].coords(), &[q(1), q(1), q(0)]);
        assert_eq!(t[2].coords(), &[q(1), q(0), q(0)]);
        assert!(t[3].is_zero());
        assert_eq!(t.len(), 4);

        let zero = plenary_trace(&a, &Element::zero(3), 10).unwrap();
        assert_eq!(zero.len(), 1);

        let t = plenary_trace(&a, &Element::new(vec![q(0), q(0), q(2)]), 3).unwrap();
        assert_eq!(t[1].coords(), &[q(0), q(4), q(0)]);
        assert_eq!(t[2].coords(), &[q(16), q(0), q(0)]);
    }
}
