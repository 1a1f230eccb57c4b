use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::Ring;

/// Laurent polynomial in the single grading variable `q` with integer
/// coefficients. The empty map is zero; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentScalar {
    pub fn monomial(coeff: BigInt, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&coeff) {
            terms.insert(exp, coeff);
        }
        LaurentScalar { terms }
    }

    /// `q^exp`.
    pub fn q_pow(exp: i32) -> Self {
        Self::monomial(<BigInt as One>::one(), exp)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(BigInt::from(c), 0)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(iter: I) -> Self {
        let mut out = LaurentScalar::default();
        for (e, c) in iter {
            out.add_term(e, &BigInt::from(c));
        }
        out
    }

    fn add_term(&mut self, exp: i32, coeff: &BigInt) {
        if Zero::is_zero(coeff) {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(<BigInt as Zero>::zero);
        *entry += coeff;
        if Zero::is_zero(entry) {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Specialization `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Bar involution `q -> q^-1`.
    pub fn bar(&self) -> Self {
        LaurentScalar {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }
}

impl Ring for LaurentScalar {
    fn zero() -> Self {
        LaurentScalar::default()
    }
    fn one() -> Self {
        LaurentScalar::q_pow(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = LaurentScalar::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
    fn negate(&self) -> Self {
        LaurentScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

pub(crate) fn write_signed_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a BigInt, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        if mono.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{abs}{mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LaurentScalar {
    /// Descending powers, e.g. `q^2 + 1 + q^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().rev().map(|(e, c)| {
            let mono = match *e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{e}"),
            };
            (c, mono)
        });
        write_signed_terms(f, terms)
    }
}

impl Serialize for LaurentScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
