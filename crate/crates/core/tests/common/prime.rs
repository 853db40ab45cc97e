//! Exhaustive oracles over small prime fields. Subspaces are enumerated as
//! explicit sets of vectors, built by closing under addition and scaling,
//! without going through the echelon-form code under test.

use std::collections::BTreeSet;

use bernstein_core::bernstein::{peirce_default, PeirceData};
use bernstein_core::families::{make_family, FamilyKind};
use bernstein_core::field::Fp;
use bernstein_core::linalg::Subspace;
use bernstein_core::theorem::lemma51_check;
use bernstein_core::{BaricAlgebra, CommAlgebra};

pub type VecSet = BTreeSet<Vec<u64>>;

pub fn key<const P: u64>(v: &[Fp<P>]) -> Vec<u64> {
    v.iter().map(|x| x.value()).collect()
}

pub fn unkey<const P: u64>(v: &[u64]) -> Vec<Fp<P>> {
    v.iter().map(|&x| Fp::<P>::new(x as i64)).collect()
}

pub fn add<const P: u64>(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| (x + y) % P).collect()
}

pub fn scale<const P: u64>(c: u64, a: &[u64]) -> Vec<u64> {
    a.iter().map(|x| (c * x) % P).collect()
}

/// `S + Kv` as a set.
pub fn extend<const P: u64>(s: &VecSet, v: &[u64]) -> VecSet {
    let mut out = VecSet::new();
    for x in s {
        for c in 0..P {
            out.insert(add::<P>(x, &scale::<P>(c, v)));
        }
    }
    out
}

pub fn span_set<const P: u64>(vectors: impl IntoIterator<Item = Vec<u64>>, n: usize) -> VecSet {
    let mut s: VecSet = [vec![0; n]].into_iter().collect();
    for v in vectors {
        if !s.contains(&v) {
            s = extend::<P>(&s, &v);
        }
    }
    s
}

/// Every subspace of `ambient` (given as a set), by breadth-first extension.
pub fn all_subspaces<const P: u64>(ambient: &VecSet, n: usize) -> Vec<VecSet> {
    let mut seen: BTreeSet<VecSet> = BTreeSet::new();
    let mut frontier = vec![span_set::<P>([], n)];
    while let Some(s) = frontier.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        for v in ambient {
            if !s.contains(v) {
                frontier.push(extend::<P>(&s, v));
            }
        }
    }
    seen.into_iter().collect()
}

pub fn elements<const P: u64>(s: &Subspace<Fp<P>>) -> VecSet {
    span_set::<P>(s.basis_vectors().map(key::<P>), s.ambient_dim())
}

pub fn to_subspace<const P: u64>(s: &VecSet, n: usize) -> Subspace<Fp<P>> {
    let vs: Vec<Vec<Fp<P>>> = s.iter().map(|v| unkey::<P>(v)).collect();
    Subspace::from_vectors(&vs, n).unwrap()
}

pub fn full_space<const P: u64>(n: usize) -> VecSet {
    span_set::<P>((0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()), n)
}

pub fn check_lattice<const P: u64>(n: usize) {
    let subspaces = all_subspaces::<P>(&full_space::<P>(n), n);
    let lib: Vec<Subspace<Fp<P>>> = subspaces.iter().map(|s| to_subspace::<P>(s, n)).collect();
    for (s, l) in subspaces.iter().zip(&lib) {
        assert_eq!(&elements::<P>(l), s);
        assert_eq!(P.pow(l.dim() as u32), s.len() as u64);
    }
    for (i, s) in subspaces.iter().enumerate() {
        for (j, t) in subspaces.iter().enumerate() {
            let sum: VecSet = s.iter().flat_map(|x| t.iter().map(move |y| add::<P>(x, y))).collect();
            let meet: VecSet = s.intersection(t).cloned().collect();
            assert_eq!(elements::<P>(&lib[i].sum(&lib[j]).unwrap()), sum);
            assert_eq!(elements::<P>(&lib[i].intersect(&lib[j]).unwrap()), meet);
            assert_eq!(lib[i].leq(&lib[j]).unwrap(), s.is_subset(t));
            assert_eq!(lib[i] == lib[j], s == t);
        }
    }
}

/// `S T` as the span of all products of elements.
pub fn product_set<const P: u64>(a: &CommAlgebra<Fp<P>>, s: &VecSet, t: &VecSet) -> VecSet {
    let n = a.dim();
    let products: VecSet = s
        .iter()
        .flat_map(|x| {
            t.iter().map(move |y| key::<P>(&a.multiply_coords(&unkey::<P>(x), &unkey::<P>(y)).unwrap()))
        })
        .collect();
    span_set::<P>(products, n)
}

pub fn baric<const P: u64>(kind: FamilyKind, n: usize) -> (BaricAlgebra<Fp<P>>, PeirceData<Fp<P>>) {
    let b = make_family::<Fp<P>>(kind, n).unwrap().baric().unwrap().unwrap();
    let p = peirce_default(&b).unwrap();
    (b, p)
}

pub fn instances<const P: u64>() -> Vec<(BaricAlgebra<Fp<P>>, PeirceData<Fp<P>>)> {
    vec![
        baric::<P>(FamilyKind::Bdown, 1),
        baric::<P>(FamilyKind::Bdown, 2),
        baric::<P>(FamilyKind::Bup, 1),
        baric::<P>(FamilyKind::Bup, 2),
        baric::<P>(FamilyKind::Jordan3, 0),
    ]
}

/// Lemma 5.1 on every subspace of N, with the products and the ideal
/// property computed from element sets.
pub fn lemma51_exhaustive<const P: u64>() -> Result<usize, String> {
    let mut checked = 0;
    for (b, p) in instances::<P>() {
        let a = &b.algebra;
        let n = a.dim();
        if p.n.dim() > 3 {
            return Err(format!("dim N = {} exceeds 3", p.n.dim()));
        }
        let n_set = elements::<P>(&p.n);
        let v_set = elements::<P>(&p.v);
        let ann = elements::<P>(&p.ann_u);
        let basis: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        for s in all_subspaces::<P>(&n_set, n) {
            let ni_eq_i = product_set::<P>(a, &n_set, &s) == s;
            let vi_eq_i = product_set::<P>(a, &v_set, &s) == s;
            let is_ideal = basis.iter().all(|x| {
                s.iter()
                    .all(|y| s.contains(&key::<P>(&a.multiply_coords(&unkey::<P>(x), &unkey::<P>(y)).unwrap())))
            });
            let lib = lemma51_check(a, &p, &to_subspace::<P>(&s, n)).map_err(|e| e.to_string())?;
            let oracle_holds = ni_eq_i == vi_eq_i && (!ni_eq_i || (s.is_subset(&ann) && is_ideal));
            if !oracle_holds || !lib.conclusion_holds || (lib.ni_eq_i, lib.vi_eq_i) != (ni_eq_i, vi_eq_i) {
                return Err(format!("F_{P}, dim {n}: subspace with {} elements", s.len()));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
