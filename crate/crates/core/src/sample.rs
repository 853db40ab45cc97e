//! Random scalars, elements and subspaces for sampling-based checks.

use rand::Rng;

use crate::algebra::Element;
use crate::field::Field;
use crate::linalg::Subspace;

/// A random scalar `p/q` with `|p| <= 6`, `1 <= q <= 4`.
pub fn random_scalar<F: Field, R: Rng + ?Sized>(rng: &mut R) -> F {
    let p: i64 = rng.gen_range(-6..=6);
    let q: i64 = rng.gen_range(1..=4);
    F::from_ratio(p, q).unwrap_or_else(|| F::from_i64(p))
}

/// A random element with every coordinate drawn by [`random_scalar`].
pub fn random_element<F: Field, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Element<F> {
    Element::new((0..dim).map(|_| random_scalar(rng)).collect())
}

/// Span of `count` random combinations of the basis of `within`.
pub fn random_subspace_of<F: Field, R: Rng + ?Sized>(
    within: &Subspace<F>,
    count: usize,
    rng: &mut R,
) -> Subspace<F> {
    let vectors: Vec<Vec<F>> = (0..count)
        .map(|_| {
            let coords: Vec<F> = (0..within.dim()).map(|_| random_scalar(rng)).collect();
            within.combine(&coords).expect("coordinate count matches")
        })
        .collect();
    Subspace::from_vectors(&vectors, within.ambient_dim()).expect("lengths match")
}

/// A random subspace of `within` whose dimension is drawn uniformly from
/// `0..=dim(within)`.
pub fn random_subspace<F: Field, R: Rng + ?Sized>(within: &Subspace<F>, rng: &mut R) -> Subspace<F> {
    let k = rng.gen_range(0..=within.dim());
    random_subspace_of(within, k, rng)
}
