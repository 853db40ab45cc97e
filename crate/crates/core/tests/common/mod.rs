#![allow(dead_code)]

pub mod prime;

use bernstein_core::bernstein::{nuclear_core, peirce_default, quotient};
use bernstein_core::families::{make_family, FamilyKind};
use bernstein_core::field::{Field, Rational};
use bernstein_core::linalg::Matrix;
use bernstein_core::{BaricAlgebra, CommAlgebra, NamedAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

pub fn family(kind: FamilyKind, n: usize) -> NamedAlgebra<Rational> {
    make_family(kind, n).unwrap()
}

pub fn baric(named: &NamedAlgebra<Rational>) -> BaricAlgebra<Rational> {
    named.baric().expect("baric input").expect("weight length")
}

fn named_from(name: String, b: BaricAlgebra<Rational>) -> NamedAlgebra<Rational> {
    NamedAlgebra { name, algebra: b.algebra, weight: Some(b.weight) }
}

/// An isomorphic copy in a random dense basis with small integer entries.
pub fn base_change(named: &NamedAlgebra<Rational>, seed: u64) -> NamedAlgebra<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = named.algebra.dim();
    let basis = loop {
        let rows: Vec<Vec<Rational>> =
            (0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-2..=2))).collect()).collect();
        if Matrix::from_rows(rows.clone(), n).unwrap().rank() == n {
            break rows;
        }
    };
    let names = (1..=n).map(|i| format!("b{i}")).collect();
    let algebra = named.algebra.restrict(&basis, names).unwrap();
    let weight = named.weight.as_ref().map(|w| {
        basis.iter().map(|b| b.iter().zip(w).fold(q(0), |acc, (x, y)| acc + x.clone() * y)).collect()
    });
    NamedAlgebra { name: format!("{}~{seed}", named.name), algebra, weight }
}

/// Finite-dimensional Bernstein algebras: the baric families for n = 2..8,
/// their nuclear cores and quotients by ann_U(U), and dense isomorphic
/// copies of a few of them.
pub fn bernstein_corpus() -> Vec<NamedAlgebra<Rational>> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push(family(FamilyKind::Bdown, n));
        out.push(family(FamilyKind::Bup, n));
    }
    out.push(family(FamilyKind::Jordan3, 0));
    let mut ke = CommAlgebra::<Rational>::with_names(&["e"]);
    ke.set_product(0, 0, &[q(1)]).unwrap();
    out.push(NamedAlgebra { name: "ke".into(), algebra: ke, weight: Some(vec![q(1)]) });
    let mut derived = Vec::new();
    for named in [family(FamilyKind::Bdown, 4), family(FamilyKind::Bup, 4), family(FamilyKind::Jordan3, 0)] {
        let b = baric(&named);
        let p = peirce_default(&b).unwrap();
        derived.push(named_from(format!("{}_core", named.name), nuclear_core(&b, &p).unwrap()));
        derived.push(named_from(format!("{}_mod_annU", named.name), quotient(&b, &p.ann_u).unwrap()));
    }
    out.extend(derived);
    for (k, named) in [family(FamilyKind::Bdown, 3), family(FamilyKind::Bup, 3), family(FamilyKind::Jordan3, 0)]
        .iter()
        .enumerate()
    {
        out.push(base_change(named, 100 + k as u64));
    }
    out
}

/// A random algebra whose products all land in a subspace that annihilates
/// everything, so `x^3 = 0` holds.
pub fn cube_zero_algebra(gens: usize, top: usize, seed: u64) -> NamedAlgebra<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = gens + top;
    let names: Vec<String> = (1..=gens).map(|i| format!("x{i}")).chain((1..=top).map(|i| format!("z{i}"))).collect();
    let mut a = CommAlgebra::new(names);
    for i in 0..gens {
        for j in i..gens {
            let mut v = vec![q(0); dim];
            for k in 0..top {
                v[gens + k] = q(rng.gen_range(-2..=2));
            }
            a.set_product(i, j, &v).unwrap();
        }
    }
    NamedAlgebra { name: format!("cubezero{gens}_{top}_{seed}"), algebra: a, weight: None }
}

/// Non-baric corpus: squareshift and zhevlakov truncations, barideals of the
/// Bernstein corpus as algebras in their own right, and random algebras
/// with `x^3 = 0`.
pub fn nonbaric_corpus() -> Vec<NamedAlgebra<Rational>> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push(family(FamilyKind::Squareshift, n));
        out.push(family(FamilyKind::Zhevlakov, n));
    }
    for named in [family(FamilyKind::Bdown, 4), family(FamilyKind::Bup, 4), family(FamilyKind::Jordan3, 0)] {
        let b = baric(&named);
        let n = b.barideal();
        let basis: Vec<Vec<Rational>> = n.basis_vectors().map(<[Rational]>::to_vec).collect();
        let names = (1..=basis.len()).map(|i| format!("n{i}")).collect();
        let algebra = b.algebra.restrict(&basis, names).unwrap();
        out.push(NamedAlgebra { name: format!("{}_N", named.name), algebra, weight: None });
    }
    for seed in 0..4 {
        out.push(cube_zero_algebra(3, 2, seed));
    }
    out
}
