//! Commutative algebras given by structure constants.
//!
//! Only products `b_i b_j` with `i <= j` are stored, so commutativity holds
//! by construction. Pairs that were never set multiply to zero.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::kernel::pair_index;
use crate::linalg::{unit, LinalgError, Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("subspace is not invariant under the multiplication operator")]
    NotInvariant,
    #[error("subspace is not closed under multiplication")]
    NotClosed,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("{kind} power chain did not stabilize within {steps} steps")]
    ChainDidNotStabilize { kind: PowerKind, steps: usize },
}

/// An element, as its coordinate vector in the algebra's basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element<F>(Vec<F>);

impl<F: Field> Element<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Element(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Element(vec![F::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        Element(unit(dim, i))
    }

    pub fn coords(&self) -> &[F] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<F> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(F::is_zero)
    }

    pub fn add(&self, other: &Element<F>) -> Element<F> {
        Element(add_vec(&self.0, &other.0))
    }

    pub fn sub(&self, other: &Element<F>) -> Element<F> {
        Element(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b).collect())
    }

    pub fn scale(&self, s: &F) -> Element<F> {
        Element(scale_vec(&self.0, s))
    }
}

impl<F: Field> From<Vec<F>> for Element<F> {
    fn from(v: Vec<F>) -> Self {
        Element(v)
    }
}

impl<F: fmt::Display> fmt::Debug for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn add_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

pub(crate) fn scale_vec<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * s).collect()
}

/// Which recurrence a [`PowerChain`] follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerKind {
    /// `S^i = sum_{r+s=i} S^r S^s`
    Full,
    /// `S^<i> = S^<i-1> S`
    Principal,
    /// `S^(1) = S^2`, `S^(i) = (S^(i-1))^2`
    Plenary,
}

impl fmt::Display for PowerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerKind::Full => "full",
            PowerKind::Principal => "principal",
            PowerKind::Plenary => "plenary",
        })
    }
}

impl std::str::FromStr for PowerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(PowerKind::Full),
            "principal" => Ok(PowerKind::Principal),
            "plenary" => Ok(PowerKind::Plenary),
            other => Err(format!("unknown power kind `{other}` (expected full, principal or plenary)")),
        }
    }
}

/// Default cap on the number of chain terms.
///
/// Principal and plenary chains of a subalgebra are decreasing and settle as
/// soon as two consecutive terms agree, so `dim + 2` terms always suffice.
/// Full powers can plateau before dropping again (`S^3 = S^4 != S^5 = 0`
/// happens already in dimension 3) and their nil index can grow like
/// `2^(dim-1)`, hence the much larger cap.
pub fn default_step_bound(kind: PowerKind, dim: usize) -> usize {
    match kind {
        PowerKind::Principal | PowerKind::Plenary => dim + 2,
        PowerKind::Full => (1usize << (dim + 1).min(12)) + 2,
    }
}

/// A computed power chain. `terms[0]` is the starting subspace.
///
/// For full and principal chains `terms[i - 1]` is the `i`-th power. For the
/// plenary chain `terms[k]` is the `k`-th plenary power. `nil_index` is the
/// 1-based position of the first zero term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerChain<F: Field> {
    pub kind: PowerKind,
    pub terms: Vec<Subspace<F>>,
    pub stabilized: bool,
    pub nil_index: Option<usize>,
}

impl<F: Field> PowerChain<F> {
    pub fn is_nilpotent(&self) -> bool {
        self.nil_index.is_some()
    }

    pub fn last(&self) -> &Subspace<F> {
        self.terms.last().expect("chain has at least one term")
    }

    /// For plenary chains: the least `i >= 1` with `S^(i) = 0`.
    pub fn solvability_index(&self) -> Option<usize> {
        self.nil_index.map(|pos| pos.saturating_sub(1).max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NilpotencyReport {
    pub nil_index_full: Option<usize>,
    pub nil_index_principal: Option<usize>,
    pub solv_index: Option<usize>,
}

/// Finite-dimensional commutative algebra over `F`.
#[derive(Clone)]
pub struct CommAlgebra<F: Field> {
    names: Vec<String>,
    /// Sparse product vectors, indexed by [`pair_index`].
    table: Vec<Vec<(usize, F)>>,
    /// Built on first use; reset whenever the table changes.
    kernel: OnceLock<F::Kernel>,
}

impl<F: Field> PartialEq for CommAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.table == other.table
    }
}

impl<F: Field> Eq for CommAlgebra<F> {}

impl<F: Field> CommAlgebra<F> {
    /// The zero-multiplication algebra on the given basis.
    pub fn new(names: Vec<String>) -> Self {
        let n = names.len();
        CommAlgebra {
            names,
            table: vec![Vec::new(); n * (n + 1) / 2],
            kernel: OnceLock::new(),
        }
    }

    pub fn with_names<S: AsRef<str>>(names: &[S]) -> Self {
        Self::new(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Sets `b_i b_j = b_j b_i = product`.
    pub fn set_product(&mut self, i: usize, j: usize, product: &[F]) -> Result<(), AlgebraError> {
        let dim = self.dim();
        for index in [i, j] {
            if index >= dim {
                return Err(AlgebraError::IndexOutOfRange { index, dim });
            }
        }
        if product.len() != dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim,
                found: product.len(),
            }
            .into());
        }
        self.kernel = OnceLock::new();
        self.table[pair_index(i, j)] = product
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| (k, x.clone()))
            .collect();
        Ok(())
    }

    /// Sparse form of `b_i b_j`.
    pub fn basis_product_sparse(&self, i: usize, j: usize) -> &[(usize, F)] {
        &self.table[pair_index(i, j)]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        for (k, x) in self.basis_product_sparse(i, j) {
            v[*k] = x.clone();
        }
        v
    }

    pub fn is_zero_algebra(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    pub fn element(&self, coords: Vec<F>) -> Result<Element<F>, AlgebraError> {
        self.check(&coords)?;
        Ok(Element(coords))
    }

    pub fn basis_element(&self, i: usize) -> Element<F> {
        Element::basis(self.dim(), i)
    }

    fn check(&self, v: &[F]) -> Result<(), AlgebraError> {
        if v.len() == self.dim() {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            }
            .into())
        }
    }

    fn check_subspace(&self, s: &Subspace<F>) -> Result<(), AlgebraError> {
        if s.ambient_dim() == self.dim() {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            }
            .into())
        }
    }

    /// Bilinear product of coordinate vectors; lengths are not checked.
    pub(crate) fn mul_coords(&self, x: &[F], y: &[F]) -> Vec<F> {
        let kernel = self.kernel.get_or_init(|| F::build_kernel(&self.table));
        F::kernel_product(kernel, &self.table, x, y)
    }

    pub fn multiply_coords(&self, x: &[F], y: &[F]) -> Result<Vec<F>, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_coords(x, y))
    }

    pub fn multiply(&self, x: &Element<F>, y: &Element<F>) -> Result<Element<F>, AlgebraError> {
        self.multiply_coords(&x.0, &y.0).map(Element)
    }

    pub fn square(&self, x: &Element<F>) -> Result<Element<F>, AlgebraError> {
        self.multiply(x, x)
    }

    /// Matrix of `L_x` (acting on column coordinate vectors). With
    /// `restrict_to`, the matrix of `L_x` on that subspace in its canonical basis.
    pub fn left_mult_operator(
        &self,
        x: &Element<F>,
        restrict_to: Option<&Subspace<F>>,
    ) -> Result<Matrix<F>, AlgebraError> {
        self.check(&x.0)?;
        match restrict_to {
            None => {
                let columns: Vec<Vec<F>> = (0..self.dim())
                    .map(|j| self.mul_coords(&x.0, &unit(self.dim(), j)))
                    .collect();
                Ok(Matrix::from_columns(&columns, self.dim())?)
            }
            Some(s) => {
                self.check_subspace(s)?;
                let columns = s
                    .basis_vectors()
                    .map(|b| {
                        s.coordinates(&self.mul_coords(&x.0, b))?
                            .ok_or(AlgebraError::NotInvariant)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Matrix::from_columns(&columns, s.dim())?)
            }
        }
    }

    /// Span of all products of a basis vector of `a` with one of `b`.
    pub fn subspace_product(&self, a: &Subspace<F>, b: &Subspace<F>) -> Result<Subspace<F>, AlgebraError> {
        self.check_subspace(a)?;
        self.check_subspace(b)?;
        if a.is_zero() || b.is_zero() {
            return Ok(Subspace::zero(self.dim()));
        }
        let symmetric = a == b;
        let mut products = Vec::new();
        for (i, x) in a.basis_vectors().enumerate() {
            for (j, y) in b.basis_vectors().enumerate() {
                if symmetric && j < i {
                    continue;
                }
                let p = self.mul_coords(x, y);
                if p.iter().any(|c| !c.is_zero()) {
                    products.push(p);
                }
            }
        }
        Ok(Subspace::span_unchecked(products, self.dim()))
    }

    /// `A * s`, the span of all `b_i * x` with `x` in `s`.
    pub fn ambient_product(&self, s: &Subspace<F>) -> Result<Subspace<F>, AlgebraError> {
        self.subspace_product(&Subspace::full(self.dim()), s)
    }

    pub fn is_ideal(&self, s: &Subspace<F>) -> Result<bool, AlgebraError> {
        Ok(self.ambient_product(s)?.leq(s)?)
    }

    pub fn is_subalgebra(&self, s: &Subspace<F>) -> Result<bool, AlgebraError> {
        Ok(self.subspace_product(s, s)?.leq(s)?)
    }

    fn span_of(&self, gens: &[Element<F>]) -> Result<Subspace<F>, AlgebraError> {
        let vs: Vec<&[F]> = gens.iter().map(|g| g.coords()).collect();
        Ok(Subspace::from_vectors(&vs, self.dim())?)
    }

    /// Smallest subalgebra containing `gens`.
    pub fn generated_subalgebra(&self, gens: &[Element<F>]) -> Result<Subspace<F>, AlgebraError> {
        let mut s = self.span_of(gens)?;
        loop {
            let next = s.sum(&self.subspace_product(&s, &s)?)?;
            if next == s {
                return Ok(s);
            }
            s = next;
        }
    }

    /// Smallest ideal of the algebra containing `gens`.
    pub fn generated_ideal(&self, gens: &[Element<F>]) -> Result<Subspace<F>, AlgebraError> {
        self.generated_ideal_within(&Subspace::full(self.dim()), gens)
    }

    /// Smallest subspace containing `gens` and closed under multiplication by
    /// elements of `within` (the ideal of the subalgebra `within` generated by
    /// `gens`, when the generators lie in it).
    pub fn generated_ideal_within(
        &self,
        within: &Subspace<F>,
        gens: &[Element<F>],
    ) -> Result<Subspace<F>, AlgebraError> {
        let mut s = self.span_of(gens)?;
        loop {
            let next = s.sum(&self.subspace_product(within, &s)?)?;
            if next == s {
                return Ok(s);
            }
            s = next;
        }
    }

    /// `{x in s : x t = 0 for all t in t}`.
    pub fn annihilator(&self, s: &Subspace<F>, t: &Subspace<F>) -> Result<Subspace<F>, AlgebraError> {
        self.check_subspace(s)?;
        self.check_subspace(t)?;
        if s.is_zero() || t.is_zero() {
            return Ok(s.clone());
        }
        let n = self.dim();
        let k = s.dim();
        let mut system = Matrix::zeros(t.dim() * n, k);
        for (j, y) in t.basis_vectors().enumerate() {
            for (i, x) in s.basis_vectors().enumerate() {
                let p = self.mul_coords(x, y);
                for (r, c) in p.into_iter().enumerate() {
                    system[(j * n + r, i)] = c;
                }
            }
        }
        let solutions = system.kernel();
        let vs = solutions
            .basis_vectors()
            .map(|c| s.combine(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Subspace::span_unchecked(vs, n))
    }

    /// Full powers `s^1 ..= s^count`, by dynamic programming over splittings.
    pub fn full_powers(&self, s: &Subspace<F>, count: usize) -> Result<Vec<Subspace<F>>, AlgebraError> {
        self.check_subspace(s)?;
        let mut builder = FullPowerBuilder::new(self, s.clone());
        while builder.terms.len() < count {
            builder.push_next()?;
        }
        builder.terms.truncate(count);
        Ok(builder.terms)
    }

    /// Computes the chain of the given kind starting from `s`.
    ///
    /// Stops at the first zero term, once the chain provably stabilizes, or
    /// after `max_steps` terms (defaulting to [`default_step_bound`]).
    pub fn power_chain(
        &self,
        s: &Subspace<F>,
        kind: PowerKind,
        max_steps: Option<usize>,
    ) -> Result<PowerChain<F>, AlgebraError> {
        self.check_subspace(s)?;
        let bound = max_steps.unwrap_or_else(|| default_step_bound(kind, self.dim())).max(1);
        match kind {
            PowerKind::Full => self.full_chain(s, bound),
            PowerKind::Principal | PowerKind::Plenary => {
                let mut terms = vec![s.clone()];
                loop {
                    let last = terms.last().expect("nonempty");
                    if last.is_zero() {
                        let idx = terms.len();
                        return Ok(PowerChain { kind, terms, stabilized: true, nil_index: Some(idx) });
                    }
                    if terms.len() >= bound {
                        return Ok(PowerChain { kind, terms, stabilized: false, nil_index: None });
                    }
                    let next = match kind {
                        PowerKind::Principal => self.subspace_product(last, s)?,
                        _ => self.subspace_product(last, last)?,
                    };
                    if &next == last {
                        return Ok(PowerChain { kind, terms, stabilized: true, nil_index: None });
                    }
                    terms.push(next);
                }
            }
        }
    }

    /// Full powers until zero or until `s^m = s^(m+1) = ... = s^(2m)`, after
    /// which every later power equals `s^m`.
    fn full_chain(&self, s: &Subspace<F>, bound: usize) -> Result<PowerChain<F>, AlgebraError> {
        let mut builder = FullPowerBuilder::new(self, s.clone());
        let mut plateau_start = 1;
        loop {
            let i = builder.terms.len();
            let last = &builder.terms[i - 1];
            if last.is_zero() {
                return Ok(PowerChain {
                    kind: PowerKind::Full,
                    terms: builder.terms,
                    stabilized: true,
                    nil_index: Some(i),
                });
            }
            if i > 1 && i >= 2 * plateau_start {
                return Ok(PowerChain {
                    kind: PowerKind::Full,
                    terms: builder.terms,
                    stabilized: true,
                    nil_index: None,
                });
            }
            if i >= bound {
                return Ok(PowerChain {
                    kind: PowerKind::Full,
                    terms: builder.terms,
                    stabilized: false,
                    nil_index: None,
                });
            }
            builder.push_next()?;
            if builder.terms[i] != builder.terms[i - 1] {
                plateau_start = i + 1;
            }
        }
    }

    /// Nil indices of the full and principal chains and the solvability index.
    pub fn nilpotency_report(&self, s: &Subspace<F>) -> Result<NilpotencyReport, AlgebraError> {
        let run = |kind| -> Result<PowerChain<F>, AlgebraError> {
            let chain = self.power_chain(s, kind, None)?;
            if chain.stabilized {
                Ok(chain)
            } else {
                Err(AlgebraError::ChainDidNotStabilize { kind, steps: chain.terms.len() })
            }
        };
        let full = run(PowerKind::Full)?;
        let principal = run(PowerKind::Principal)?;
        let plenary = run(PowerKind::Plenary)?;
        Ok(NilpotencyReport {
            nil_index_full: full.nil_index,
            nil_index_principal: principal.nil_index,
            solv_index: plenary.solvability_index(),
        })
    }

    /// The algebra structure on the span of `basis` (which must be linearly
    /// independent and closed under multiplication), in that basis.
    pub fn restrict(&self, basis: &[Vec<F>], names: Vec<String>) -> Result<CommAlgebra<F>, AlgebraError> {
        for b in basis {
            self.check(b)?;
        }
        let k = basis.len();
        let m = Matrix::from_columns(basis, self.dim())?;
        if m.rank() != k {
            return Err(AlgebraError::DependentBasis);
        }
        let mut out = CommAlgebra::new(names);
        for i in 0..k {
            for j in i..k {
                let p = self.mul_coords(&basis[i], &basis[j]);
                let coords = m.solve(&p)?.ok_or(AlgebraError::NotClosed)?;
                out.set_product(i, j, &coords)?;
            }
        }
        Ok(out)
    }

    /// Human-readable linear combination, e.g. `e + 1/2 u1 - v1`.
    pub fn format_coords(&self, v: &[F]) -> String {
        format_combination(&self.names, v)
    }

    pub fn format(&self, x: &Element<F>) -> String {
        self.format_coords(&x.0)
    }
}

impl<F: Field> fmt::Debug for CommAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CommAlgebra(")?;
        let mut first = true;
        for j in 0..self.dim() {
            for i in 0..=j {
                let p = self.basis_product(i, j);
                if p.iter().all(F::is_zero) {
                    continue;
                }
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "{}*{} = {}", self.names[i], self.names[j], self.format_coords(&p))?;
            }
        }
        write!(f, ")")
    }
}

pub fn format_combination<F: Field>(names: &[String], v: &[F]) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let text = c.to_string();
        let (negative, magnitude) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if magnitude != "1" {
            out.push_str(&magnitude);
            out.push(' ');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Incremental full powers with products cached per pair of distinct terms.
struct FullPowerBuilder<'a, F: Field> {
    algebra: &'a CommAlgebra<F>,
    terms: Vec<Subspace<F>>,
    /// `canon[i]` is the index of the first term equal to `terms[i]`.
    canon: Vec<usize>,
    cache: HashMap<(usize, usize), Subspace<F>>,
}

impl<'a, F: Field> FullPowerBuilder<'a, F> {
    fn new(algebra: &'a CommAlgebra<F>, s: Subspace<F>) -> Self {
        FullPowerBuilder {
            algebra,
            terms: vec![s],
            canon: vec![0],
            cache: HashMap::new(),
        }
    }

    fn push_next(&mut self) -> Result<(), AlgebraError> {
        let i = self.terms.len() + 1;
        let mut pairs: Vec<(usize, usize)> = (1..=i / 2)
            .map(|r| {
                let a = self.canon[r - 1];
                let b = self.canon[i - r - 1];
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut acc = Subspace::zero(self.algebra.dim());
        for key in pairs {
            if !self.cache.contains_key(&key) {
                let p = self
                    .algebra
                    .subspace_product(&self.terms[key.0], &self.terms[key.1])?;
                self.cache.insert(key, p);
            }
            acc = acc.sum(&self.cache[&key])?;
        }
        let canon = self
            .terms
            .iter()
            .position(|t| *t == acc)
            .map_or(self.terms.len(), |p| self.canon[p]);
        self.canon.push(canon);
        self.terms.push(acc);
        Ok(())
    }
}
