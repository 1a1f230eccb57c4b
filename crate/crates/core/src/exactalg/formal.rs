use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};

use super::Ring;

/// A finitely supported combination `Σ c_L · L` of basis labels.
///
/// This is the carrier for every Grothendieck-group element in the crate.
/// Iteration order is the label order, so printed output is deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSum<L: Ord + Clone, R: Ring> {
    terms: BTreeMap<L, R>,
}

impl<L: Ord + Clone, R: Ring> Default for FormalSum<L, R> {
    fn default() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }
}

impl<L: Ord + Clone, R: Ring> FormalSum<L, R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(label: L) -> Self {
        Self::term(label, R::one())
    }

    pub fn term(label: L, coeff: R) -> Self {
        let mut s = Self::default();
        s.add_term(label, coeff);
        s
    }

    pub fn add_term(&mut self, label: L, coeff: R) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&label) {
            Some(c) => {
                *c = c.plus(&coeff);
                if c.is_zero() {
                    self.terms.remove(&label);
                }
            }
            None => {
                self.terms.insert(label, coeff);
            }
        }
    }

    pub fn coeff(&self, label: &L) -> R {
        self.terms.get(label).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &R)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(&R::one().negate()))
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::default();
        for (l, v) in &self.terms {
            out.add_term(l.clone(), c.times(v));
        }
        out
    }

    /// Apply `f` to each coefficient, dropping zeros.
    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> FormalSum<L, S> {
        let mut out = FormalSum::default();
        for (l, c) in &self.terms {
            out.add_term(l.clone(), f(c));
        }
        out
    }
}

impl<L: Ord + Clone + fmt::Display, R: Ring> FormalSum<L, R> {
    /// JSON object `label -> coefficient string`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (l, c) in &self.terms {
            m.insert(l.to_string(), Value::String(c.to_string()));
        }
        Value::Object(m)
    }
}

impl<L: Ord + Clone + fmt::Display, R: Ring> fmt::Display for FormalSum<L, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *c == R::one() {
                write!(f, "[{l}]")?;
            } else {
                write!(f, "({c})[{l}]")?;
            }
        }
        Ok(())
    }
}

impl<L: Ord + Clone, R: Ring> FromIterator<(L, R)> for FormalSum<L, R> {
    fn from_iter<I: IntoIterator<Item = (L, R)>>(iter: I) -> Self {
        let mut out = Self::default();
        for (l, c) in iter {
            out.add_term(l, c);
        }
        out
    }
}

/// A linear map given by its columns: the image of each source label.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOp<L1: Ord + Clone, L2: Ord + Clone, R: Ring> {
    columns: BTreeMap<L1, FormalSum<L2, R>>,
}

impl<L1: Ord + Clone, L2: Ord + Clone, R: Ring> Default for LinearOp<L1, L2, R> {
    fn default() -> Self {
        LinearOp { columns: BTreeMap::new() }
    }
}

impl<L1: Ord + Clone, L2: Ord + Clone, R: Ring> LinearOp<L1, L2, R> {
    pub fn from_columns<I: IntoIterator<Item = (L1, FormalSum<L2, R>)>>(iter: I) -> Self {
        LinearOp { columns: iter.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn set_column(&mut self, label: L1, image: FormalSum<L2, R>) {
        if image.is_zero() {
            self.columns.remove(&label);
        } else {
            self.columns.insert(label, image);
        }
    }

    pub fn column(&self, label: &L1) -> FormalSum<L2, R> {
        self.columns.get(label).cloned().unwrap_or_default()
    }

    pub fn columns(&self) -> impl Iterator<Item = (&L1, &FormalSum<L2, R>)> {
        self.columns.iter()
    }

    pub fn entry(&self, row: &L2, col: &L1) -> R {
        self.columns.get(col).map(|c| c.coeff(row)).unwrap_or_else(R::zero)
    }

    pub fn apply(&self, v: &FormalSum<L1, R>) -> FormalSum<L2, R> {
        let mut out = FormalSum::default();
        for (l, c) in v.iter() {
            if let Some(col) = self.columns.get(l) {
                out = out.plus(&col.scale(c));
            }
        }
        out
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then<L3: Ord + Clone>(&self, other: &LinearOp<L2, L3, R>) -> LinearOp<L1, L3, R> {
        LinearOp::from_columns(self.columns.iter().map(|(l, col)| (l.clone(), other.apply(col))))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, col) in &other.columns {
            let merged = out.column(l).plus(col);
            out.set_column(l.clone(), merged);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(&R::one().negate()))
    }

    pub fn scale(&self, c: &R) -> Self {
        LinearOp::from_columns(self.columns.iter().map(|(l, col)| (l.clone(), col.scale(c))))
    }
}

impl<L: Ord + Clone, R: Ring> LinearOp<L, L, R> {
    pub fn identity<I: IntoIterator<Item = L>>(labels: I) -> Self {
        LinearOp::from_columns(labels.into_iter().map(|l| (l.clone(), FormalSum::basis(l))))
    }
}

impl<L1, L2, R> LinearOp<L1, L2, R>
where
    L1: Ord + Clone + fmt::Display,
    L2: Ord + Clone + fmt::Display,
    R: Ring,
{
    /// JSON object `source label -> {target label -> coefficient}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (l, col) in &self.columns {
            m.insert(l.to_string(), col.to_json());
        }
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type Op = LinearOp<u8, u8, BigInt>;

    fn op() -> impl Strategy<Value = Op> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 3).prop_map(|cols| {
            LinearOp::from_columns(cols.into_iter().enumerate().map(|(j, col)| {
                let s: FormalSum<u8, BigInt> =
                    col.into_iter().enumerate().map(|(i, c)| (i as u8, BigInt::from(c))).collect();
                (j as u8, s)
            }))
        })
    }

    #[test]
    fn zero_terms_are_not_stored() {
        let mut s: FormalSum<&str, BigInt> = FormalSum::basis("a");
        s.add_term("a", BigInt::from(-1));
        assert!(s.is_zero());
        assert_eq!(s, FormalSum::zero());
    }

    #[test]
    fn json_is_label_to_string() {
        let s: FormalSum<&str, BigInt> = [("x", BigInt::from(2)), ("y", BigInt::from(-1))].into_iter().collect();
        assert_eq!(s.to_json().to_string(), r#"{"x":"2","y":"-1"}"#);
    }

    proptest! {
        #[test]
        fn composition_is_associative(a in op(), b in op(), c in op()) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        }

        #[test]
        fn apply_is_linear(a in op(), x in proptest::collection::vec(-3i64..=3, 3), y in proptest::collection::vec(-3i64..=3, 3)) {
            let fx: FormalSum<u8, BigInt> = x.iter().enumerate().map(|(i, c)| (i as u8, BigInt::from(*c))).collect();
            let fy: FormalSum<u8, BigInt> = y.iter().enumerate().map(|(i, c)| (i as u8, BigInt::from(*c))).collect();
            prop_assert_eq!(a.apply(&fx.plus(&fy)), a.apply(&fx).plus(&a.apply(&fy)));
        }
    }
}
