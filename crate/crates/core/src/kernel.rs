//! Product kernels: the inner loop of every multiplication.
//!
//! A product table lists, for each unordered basis pair `(i, j)` with
//! `i <= j`, the nonzero coordinates of `b_i b_j`. Fields may precompute a
//! faster form of that table; the rationals use one integer table over a
//! common denominator so a product needs no intermediate normalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::Field;

/// Slot of the unordered pair `{i, j}` in a product table.
pub(crate) fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    j * (j + 1) / 2 + i
}

/// Straightforward bilinear product over a sparse table.
pub(crate) fn sparse_product<F: Field>(table: &[Vec<(usize, F)>], x: &[F], y: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); x.len()];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let entries = &table[pair_index(i, j)];
            if entries.is_empty() {
                continue;
            }
            let c = xi.clone() * yj;
            for (k, t) in entries {
                out[*k] = out[*k].clone() + c.clone() * t;
            }
        }
    }
    out
}

/// Structure constants scaled to integers: `b_i b_j = entries / denom`.
#[derive(Debug, Clone)]
pub struct IntegerTable {
    entries: Vec<Vec<(usize, BigInt)>>,
    denom: BigInt,
}

impl IntegerTable {
    pub(crate) fn new(table: &[Vec<(usize, BigRational)>]) -> Self {
        let denom = table
            .iter()
            .flatten()
            .fold(BigInt::one(), |d, (_, t)| d.lcm(t.denom()));
        let entries = table
            .iter()
            .map(|row| row.iter().map(|(k, t)| (*k, t.numer() * (&denom / t.denom()))).collect())
            .collect();
        IntegerTable { entries, denom }
    }

    pub(crate) fn product(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let (xs, dx) = clear_denominators(x);
        let (ys, dy) = clear_denominators(y);
        let n = x.len();
        let mut acc = vec![BigInt::zero(); n];
        for j in 0..n {
            for i in 0..=j {
                let entries = &self.entries[pair_index(i, j)];
                if entries.is_empty() {
                    continue;
                }
                let mut c = &xs[i] * &ys[j];
                if i != j {
                    c += &xs[j] * &ys[i];
                }
                if c.is_zero() {
                    continue;
                }
                for (k, t) in entries {
                    acc[*k] += &c * t;
                }
            }
        }
        let d = dx * dy * &self.denom;
        acc.into_iter().map(|a| BigRational::new(a, d.clone())).collect()
    }
}

/// `v = ints / d` with `d` the least common denominator.
fn clear_denominators(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let d = v.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
    let ints = v.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    (ints, d)
}
