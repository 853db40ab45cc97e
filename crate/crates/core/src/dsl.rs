//! Line-oriented text format for algebras with rational structure constants.
//!
//! ```text
//! # comment
//! algebra bdown2
//! basis e v1 u1 u2
//! weight e 1
//! prod e e = 1 e
//! prod e u1 = 1/2 u1
//! prod e u2 = 1/2 u2
//! prod u2 v1 = u1
//! ```
//!
//! Omitted weights are zero; a file with no `weight` line describes a
//! non-baric algebra. Omitted products are zero and `prod a b` also defines
//! `b a`. A right-hand side is `0` or a sum of terms `[coefficient] name`
//! joined by `+` or `-`.

use std::fmt;

use thiserror::Error;

use crate::algebra::CommAlgebra;
use crate::bernstein::NamedAlgebra;
use crate::field::{format_rational, parse_rational, Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub terms: Vec<(Rational, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraFile {
    pub name: String,
    pub basis: Vec<String>,
    pub weights: Vec<(String, Rational)>,
    pub products: Vec<ProductEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}` (expected algebra, basis, weight or prod)")]
    UnknownDirective(String),
    #[error("missing `algebra <name>` line")]
    MissingAlgebra,
    #[error("`algebra` declared twice")]
    DuplicateAlgebra,
    #[error("missing `basis` line")]
    MissingBasis,
    #[error("`basis` declared twice")]
    DuplicateBasisLine,
    #[error("empty basis")]
    EmptyBasis,
    #[error("basis vector `{0}` declared twice")]
    DuplicateBasisVector(String),
    #[error("`{0}` used before the basis line")]
    BeforeBasis(&'static str),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("expected {expected}, found {found}")]
    Expected { expected: &'static str, found: String },
    #[error("unexpected `{0}` at end of line")]
    Trailing(String),
    #[error("conflicting declarations for the product {0} {1}")]
    ConflictingProduct(String, String),
    #[error("conflicting weights for `{0}`")]
    ConflictingWeight(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Eq,
    Plus,
    Minus,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
        }
    }
}

/// Tokens with 1-based columns. A `-` directly followed by a non-space
/// character starts a word (a signed coefficient); otherwise it is a
/// separator.
fn tokenize(text: &str) -> Vec<(usize, Tok)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let next_is_word = chars
            .get(i + 1)
            .is_some_and(|n| !n.is_whitespace() && !matches!(n, '=' | '+'));
        if c.is_whitespace() {
            i += 1;
        } else if c == '=' {
            out.push((col, Tok::Eq));
            i += 1;
        } else if c == '+' {
            out.push((col, Tok::Plus));
            i += 1;
        } else if c == '-' && !next_is_word {
            out.push((col, Tok::Minus));
            i += 1;
        } else {
            let start = i;
            i += 1;
            while i < chars.len() && !chars[i].is_whitespace() && !matches!(chars[i], '=' | '+') {
                i += 1;
            }
            out.push((col, Tok::Word(chars[start..i].iter().collect())));
        }
    }
    out
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn looks_numeric(s: &str) -> bool {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    body.chars().next().is_some_and(|c| c.is_ascii_digit())
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn err_at(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column, kind }
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn found(&self) -> String {
        self.peek().map_or("end of line".to_string(), Tok::to_string)
    }

    fn expect_eq(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Eq) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_at(self.col(), ParseErrorKind::Expected { expected: "`=`", found: self.found() }))
        }
    }

    fn word(&mut self, expected: &'static str) -> Result<(usize, &'a str), ParseError> {
        match self.toks.get(self.pos) {
            Some((c, Tok::Word(w))) => {
                self.pos += 1;
                Ok((*c, w.as_str()))
            }
            _ => Err(self.err_at(self.col(), ParseErrorKind::Expected { expected, found: self.found() })),
        }
    }

    fn ident(&mut self, known: Option<&[String]>) -> Result<String, ParseError> {
        let (col, w) = self.word("an identifier")?;
        if !is_identifier(w) {
            return Err(self.err_at(col, ParseErrorKind::InvalidIdentifier(w.to_string())));
        }
        if let Some(known) = known {
            if !known.iter().any(|k| k == w) {
                return Err(self.err_at(col, ParseErrorKind::UnknownIdentifier(w.to_string())));
            }
        }
        Ok(w.to_string())
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let (col, w) = self.word("a rational")?;
        parse_rational(w).ok_or_else(|| self.err_at(col, ParseErrorKind::MalformedRational(w.to_string())))
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some((c, t)) => Err(self.err_at(*c, ParseErrorKind::Trailing(t.to_string().trim_matches('`').to_string()))),
        }
    }

    /// `0` or `[+|-] [coef] id ((+|-) [coef] id)*`.
    fn combination(&mut self, known: &[String]) -> Result<Vec<(Rational, String)>, ParseError> {
        if let Some(Tok::Word(w)) = self.peek() {
            if looks_numeric(w) && parse_rational(w).is_some_and(|q| q.is_zero())
                && !matches!(self.toks.get(self.pos + 1), Some((_, Tok::Word(_))))
            {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        let mut terms = Vec::new();
        let mut negate = false;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    negate = !negate;
                    self.pos += 1;
                }
                Some(Tok::Plus) => self.pos += 1,
                _ => {}
            }
            let coef = match self.peek() {
                Some(Tok::Word(w)) if looks_numeric(w) => self.rational()?,
                _ => Rational::one(),
            };
            let id = self.ident(Some(known))?;
            terms.push((if negate { -coef } else { coef }, id));
            negate = false;
            match self.peek() {
                Some(Tok::Plus | Tok::Minus) => {}
                _ => return Ok(terms),
            }
        }
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code)
}

pub fn parse(text: &str) -> Result<AlgebraFile, ParseError> {
    let mut name: Option<String> = None;
    let mut basis: Option<Vec<String>> = None;
    let mut weights: Vec<(String, Rational)> = Vec::new();
    let mut products: Vec<ProductEntry> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let code = strip_comment(raw);
        let toks = tokenize(code);
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor { line, toks: &toks, pos: 0, end_col: code.chars().count() + 1 };
        let (dcol, directive) = cur.word("a directive")?;
        match directive {
            "algebra" => {
                if name.is_some() {
                    return Err(cur.err_at(dcol, ParseErrorKind::DuplicateAlgebra));
                }
                name = Some(cur.ident(None)?);
            }
            "basis" => {
                if basis.is_some() {
                    return Err(cur.err_at(dcol, ParseErrorKind::DuplicateBasisLine));
                }
                let mut ids: Vec<String> = Vec::new();
                while cur.peek().is_some() {
                    let col = cur.col();
                    let id = cur.ident(None)?;
                    if ids.contains(&id) {
                        return Err(cur.err_at(col, ParseErrorKind::DuplicateBasisVector(id)));
                    }
                    ids.push(id);
                }
                if ids.is_empty() {
                    return Err(cur.err_at(cur.end_col, ParseErrorKind::EmptyBasis));
                }
                basis = Some(ids);
            }
            "weight" => {
                let known = basis
                    .as_deref()
                    .ok_or_else(|| cur.err_at(dcol, ParseErrorKind::BeforeBasis("weight")))?;
                let col = cur.col();
                let id = cur.ident(Some(known))?;
                let w = cur.rational()?;
                match weights.iter().find(|(k, _)| *k == id) {
                    Some((_, old)) if *old != w => {
                        return Err(cur.err_at(col, ParseErrorKind::ConflictingWeight(id)));
                    }
                    Some(_) => {}
                    None => weights.push((id, w)),
                }
            }
            "prod" => {
                let known = basis
                    .as_deref()
                    .ok_or_else(|| cur.err_at(dcol, ParseErrorKind::BeforeBasis("prod")))?;
                let col = cur.col();
                let left = cur.ident(Some(known))?;
                let right = cur.ident(Some(known))?;
                cur.expect_eq()?;
                let terms = cur.combination(known)?;
                let entry = ProductEntry { left, right, terms };
                let same_pair = |p: &ProductEntry| {
                    (p.left == entry.left && p.right == entry.right)
                        || (p.left == entry.right && p.right == entry.left)
                };
                match products.iter().find(|p| same_pair(p)) {
                    Some(old) if combine(known, &old.terms) != combine(known, &entry.terms) => {
                        return Err(cur.err_at(
                            col,
                            ParseErrorKind::ConflictingProduct(entry.left, entry.right),
                        ));
                    }
                    Some(_) => {}
                    None => products.push(entry),
                }
            }
            other => {
                return Err(cur.err_at(dcol, ParseErrorKind::UnknownDirective(other.to_string())));
            }
        }
        cur.finish()?;
    }
    let eof = |kind| ParseError { line: last_line + 1, column: 1, kind };
    Ok(AlgebraFile {
        name: name.ok_or_else(|| eof(ParseErrorKind::MissingAlgebra))?,
        basis: basis.ok_or_else(|| eof(ParseErrorKind::MissingBasis))?,
        weights,
        products,
    })
}

fn combine(basis: &[String], terms: &[(Rational, String)]) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); basis.len()];
    for (c, id) in terms {
        let i = basis.iter().position(|b| b == id).expect("declared");
        v[i] = &v[i] + c;
    }
    v
}

fn format_terms(terms: &[(Rational, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (c, id)) in terms.iter().enumerate() {
        if k == 0 {
            out.push_str(&format!("{} {id}", format_rational(c)));
        } else if *c < Rational::zero() {
            out.push_str(&format!(" - {} {id}", format_rational(&-c)));
        } else {
            out.push_str(&format!(" + {} {id}", format_rational(c)));
        }
    }
    out
}

pub fn serialize(f: &AlgebraFile) -> String {
    let mut out = format!("algebra {}\nbasis {}\n", f.name, f.basis.join(" "));
    for (id, w) in &f.weights {
        out.push_str(&format!("weight {id} {}\n", format_rational(w)));
    }
    for p in &f.products {
        out.push_str(&format!("prod {} {} = {}\n", p.left, p.right, format_terms(&p.terms)));
    }
    out
}

impl AlgebraFile {
    pub fn to_named_algebra(&self) -> NamedAlgebra<Rational> {
        let mut algebra = CommAlgebra::new(self.basis.clone());
        let index = |id: &str| self.basis.iter().position(|b| b == id).expect("declared");
        for p in &self.products {
            let v = combine(&self.basis, &p.terms);
            algebra
                .set_product(index(&p.left), index(&p.right), &v)
                .expect("dimensions match the basis");
        }
        let weight = (!self.weights.is_empty()).then(|| {
            let mut w = vec![Rational::zero(); self.basis.len()];
            for (id, x) in &self.weights {
                w[index(id)] = x.clone();
            }
            w
        });
        NamedAlgebra { name: self.name.clone(), algebra, weight }
    }

    /// Canonical form: nonzero weights and products in basis order, terms in
    /// basis order. An all-zero weight is kept as a single zero entry so the
    /// algebra stays baric.
    pub fn from_named_algebra(a: &NamedAlgebra<Rational>) -> AlgebraFile {
        let basis = a.algebra.names().to_vec();
        let weights = match &a.weight {
            None => Vec::new(),
            Some(w) => {
                let nonzero: Vec<(String, Rational)> = basis
                    .iter()
                    .zip(w)
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(id, x)| (id.clone(), x.clone()))
                    .collect();
                if nonzero.is_empty() && !basis.is_empty() {
                    vec![(basis[0].clone(), Rational::zero())]
                } else {
                    nonzero
                }
            }
        };
        let mut products = Vec::new();
        for i in 0..basis.len() {
            for j in i..basis.len() {
                let terms: Vec<(Rational, String)> = a
                    .algebra
                    .basis_product_sparse(i, j)
                    .iter()
                    .map(|(k, c)| (c.clone(), basis[*k].clone()))
                    .collect();
                if !terms.is_empty() {
                    products.push(ProductEntry { left: basis[i].clone(), right: basis[j].clone(), terms });
                }
            }
        }
        AlgebraFile { name: a.name.clone(), basis, weights, products }
    }
}

/// Reads a linear combination such as `e - v1 + 1/2 u1` over `names`.
pub fn parse_element(text: &str, names: &[String]) -> Result<Vec<Rational>, ParseError> {
    let toks = tokenize(text);
    let mut cur = Cursor { line: 1, toks: &toks, pos: 0, end_col: text.chars().count() + 1 };
    let terms = cur.combination(names)?;
    cur.finish()?;
    Ok(combine(names, &terms))
}

/// Reads a list of linear combinations separated by `;` or `,`. Columns in
/// errors refer to the item that failed and `line` to its 1-based position.
pub fn parse_vectors(text: &str, names: &[String]) -> Result<Vec<Vec<Rational>>, ParseError> {
    text.split([';', ','])
        .enumerate()
        .filter(|(_, item)| !item.trim().is_empty())
        .map(|(k, item)| {
            parse_element(item, names).map_err(|e| ParseError { line: k + 1, ..e })
        })
        .collect()
}
