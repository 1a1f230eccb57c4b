use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::laurent::write_signed_terms;
use super::{LaurentScalar, Ring};

/// Sparse Laurent polynomial in a fixed number of variables with integer
/// coefficients.
///
/// By convention the last variable is the grading variable `q` and the others
/// are the torus weights `t_1, ..., t_n`, but nothing in the arithmetic depends
/// on that. Values of arity 0 (produced by [`Ring::zero`] / [`Ring::one`]) are
/// constants and combine with any arity.
#[derive(Clone, Debug, Default, Hash)]
pub struct MultiLaurent {
    arity: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl MultiLaurent {
    pub fn zero_with_arity(arity: usize) -> Self {
        MultiLaurent { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: BigInt) -> Self {
        Self::monomial(c, vec![0; arity])
    }

    pub fn monomial(coeff: BigInt, exps: Vec<i32>) -> Self {
        let mut out = Self::zero_with_arity(exps.len());
        if !Zero::is_zero(&coeff) {
            out.terms.insert(exps, coeff);
        }
        out
    }

    /// The variable with index `i`.
    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::monomial(<BigInt as One>::one(), e)
    }

    /// Embed a polynomial in `q` by placing it on variable `q_index`.
    pub fn from_laurent_scalar(arity: usize, q_index: usize, s: &LaurentScalar) -> Self {
        let mut out = Self::zero_with_arity(arity);
        for (e, c) in s.terms() {
            let mut exps = vec![0; arity];
            exps[q_index] = e;
            out.add_term(exps, c.clone());
        }
        out
    }

    /// Build from `(exponents, coefficient)` pairs; all exponent vectors must
    /// have length `arity`.
    pub fn from_terms<I: IntoIterator<Item = (Vec<i32>, i64)>>(arity: usize, iter: I) -> Self {
        let mut out = Self::zero_with_arity(arity);
        for (e, c) in iter {
            assert_eq!(e.len(), arity, "exponent vector of wrong arity");
            out.add_term(e, BigInt::from(c));
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[i32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, exps: Vec<i32>, coeff: BigInt) {
        if Zero::is_zero(&coeff) {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(c) => {
                *c += coeff;
                if Zero::is_zero(c) {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, coeff);
            }
        }
    }

    fn padded(&self, arity: usize) -> MultiLaurent {
        if self.arity == arity {
            return self.clone();
        }
        assert_eq!(self.arity, 0, "arity mismatch: {} vs {}", self.arity, arity);
        let mut out = Self::zero_with_arity(arity);
        for c in self.terms.values() {
            out.add_term(vec![0; arity], c.clone());
        }
        out
    }

    fn common_arity(&self, other: &Self) -> usize {
        self.arity.max(other.arity)
    }

    /// Multiply by the monomial `x^shift` (exponent-wise addition).
    pub fn shift(&self, shift: &[i32]) -> MultiLaurent {
        let mut out = Self::zero_with_arity(self.arity);
        for (e, c) in &self.terms {
            let ne: Vec<i32> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            out.terms.insert(ne, c.clone());
        }
        out
    }

    /// Componentwise minimum exponent over all terms (`None` for zero).
    pub fn min_exponents(&self) -> Option<Vec<i32>> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        Some(m)
    }

    /// Largest term in lexicographic exponent order.
    pub fn leading_term(&self) -> Option<(&Vec<i32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &BigInt) -> MultiLaurent {
        if Zero::is_zero(c) {
            return Self::zero_with_arity(self.arity);
        }
        MultiLaurent {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Substitute `1` for variable `i` (the arity is kept; that exponent
    /// becomes zero everywhere).
    pub fn specialize_to_one(&self, i: usize) -> MultiLaurent {
        let mut out = Self::zero_with_arity(self.arity);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[i] = 0;
            out.add_term(ne, c.clone());
        }
        out
    }

    /// If this is `c * x^e` for a single term, return it.
    pub fn as_monomial(&self) -> Option<(&Vec<i32>, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Render with explicit variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        struct D<'a>(&'a MultiLaurent, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let terms = self.0.terms.iter().rev().map(|(e, c)| {
                    let mut mono = String::new();
                    for (i, &k) in e.iter().enumerate() {
                        if k == 0 {
                            continue;
                        }
                        let name = self.1.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                        if !mono.is_empty() {
                            mono.push('*');
                        }
                        if k == 1 {
                            mono.push_str(&name);
                        } else {
                            mono.push_str(&format!("{name}^{k}"));
                        }
                    }
                    (c, mono)
                });
                write_signed_terms(f, terms)
            }
        }
        D(self, names).to_string()
    }

    /// Default names: `t1, ..., t{k-1}, q` for arity `k`.
    pub fn default_names(arity: usize) -> Vec<String> {
        let mut v: Vec<String> = (1..arity).map(|i| format!("t{i}")).collect();
        if arity > 0 {
            v.push("q".to_string());
        }
        v
    }
}

impl PartialEq for MultiLaurent {
    fn eq(&self, other: &Self) -> bool {
        if self.arity == other.arity {
            return self.terms == other.terms;
        }
        if self.terms.is_empty() && other.terms.is_empty() {
            return true;
        }
        let a = self.common_arity(other);
        self.padded(a).terms == other.padded(a).terms
    }
}

impl Eq for MultiLaurent {}

impl Ring for MultiLaurent {
    fn zero() -> Self {
        Self::zero_with_arity(0)
    }
    fn one() -> Self {
        Self::constant(0, <BigInt as One>::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let a = self.common_arity(other);
        let mut out = self.padded(a);
        for (e, c) in other.padded(a).terms {
            out.add_term(e, c);
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let a = self.common_arity(other);
        let (x, y) = (self.padded(a), other.padded(a));
        let mut out = Self::zero_with_arity(a);
        for (e1, c1) in &x.terms {
            for (e2, c2) in &y.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(p, q)| p + q).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
    fn negate(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }
}

impl fmt::Display for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Self::default_names(self.arity)))
    }
}

impl Serialize for MultiLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
