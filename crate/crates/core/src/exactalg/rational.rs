use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use super::{MultiLaurent, Ring};

/// The quotient is not a Laurent polynomial: the denominator does not divide
/// the numerator in the Laurent ring.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a Laurent polynomial: ({numerator}) / ({denominator})")]
pub struct NotPolynomial {
    pub numerator: String,
    pub denominator: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("rational function with zero denominator")]
pub struct ZeroDenominator;

/// A formal quotient of two [`MultiLaurent`]s.
///
/// No GCD normalization is performed; equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFn {
    numerator: MultiLaurent,
    denominator: MultiLaurent,
}

impl RationalFn {
    pub fn new(numerator: MultiLaurent, denominator: MultiLaurent) -> Result<Self, ZeroDenominator> {
        if denominator.is_zero() {
            return Err(ZeroDenominator);
        }
        Ok(RationalFn { numerator, denominator })
    }

    pub fn from_laurent(p: MultiLaurent) -> Self {
        RationalFn { numerator: p, denominator: MultiLaurent::one() }
    }

    pub fn numerator(&self) -> &MultiLaurent {
        &self.numerator
    }

    pub fn denominator(&self) -> &MultiLaurent {
        &self.denominator
    }

    pub fn reduce_to_laurent(&self) -> Result<MultiLaurent, NotPolynomial> {
        rational_reduce_to_laurent(self)
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.numerator.times(&other.denominator) == other.numerator.times(&self.denominator)
    }
}

impl Ring for RationalFn {
    fn zero() -> Self {
        RationalFn::from_laurent(MultiLaurent::zero())
    }
    fn one() -> Self {
        RationalFn::from_laurent(MultiLaurent::one())
    }
    fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        if self.denominator == other.denominator {
            return RationalFn {
                numerator: self.numerator.plus(&other.numerator),
                denominator: self.denominator.clone(),
            };
        }
        RationalFn {
            numerator: self
                .numerator
                .times(&other.denominator)
                .plus(&other.numerator.times(&self.denominator)),
            denominator: self.denominator.times(&other.denominator),
        }
    }
    fn times(&self, other: &Self) -> Self {
        RationalFn {
            numerator: self.numerator.times(&other.numerator),
            denominator: self.denominator.times(&other.denominator),
        }
    }
    fn negate(&self) -> Self {
        RationalFn { numerator: self.numerator.negate(), denominator: self.denominator.clone() }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == MultiLaurent::one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

/// Return the Laurent polynomial equal to `f`, if one exists.
///
/// Monomial factors are cleared from numerator and denominator first; what is
/// left of the denominator is coprime to every variable, so divisibility in the
/// Laurent ring reduces to exact division of ordinary polynomials, carried out
/// term by term in lexicographic order.
pub fn rational_reduce_to_laurent(f: &RationalFn) -> Result<MultiLaurent, NotPolynomial> {
    let num = &f.numerator;
    let den = &f.denominator;
    if num.is_zero() {
        return Ok(MultiLaurent::zero_with_arity(num.arity().max(den.arity())));
    }
    let arity = num.arity().max(den.arity());
    let num = num.plus(&MultiLaurent::zero_with_arity(arity));
    let den = den.plus(&MultiLaurent::zero_with_arity(arity));
    let fail = || NotPolynomial { numerator: num.to_string(), denominator: den.to_string() };

    let dmin = den.min_exponents().expect("nonzero denominator");
    let nmin = num.min_exponents().expect("nonzero numerator");
    let neg = |v: &[i32]| v.iter().map(|x| -x).collect::<Vec<i32>>();
    let den_poly = den.shift(&neg(&dmin));
    let mut rem = num.shift(&neg(&nmin));

    let (lead_d, lead_c) = {
        let (e, c) = den_poly.leading_term().expect("nonzero");
        (e.clone(), c.clone())
    };
    let mut quotient = MultiLaurent::zero_with_arity(arity);
    while let Some((e, c)) = rem.leading_term() {
        let diff: Vec<i32> = e.iter().zip(&lead_d).map(|(a, b)| a - b).collect();
        if diff.iter().any(|&x| x < 0) {
            return Err(fail());
        }
        let (qc, r) = c.div_rem(&lead_c);
        if !Zero::is_zero(&r) {
            return Err(fail());
        }
        let term = MultiLaurent::monomial(qc.clone(), diff.clone());
        rem = rem.minus(&den_poly.times(&term));
        quotient.add_term(diff, qc);
    }
    let shift: Vec<i32> = nmin.iter().zip(&dmin).map(|(a, b)| a - b).collect();
    Ok(quotient.shift(&shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ml(arity: usize, t: &[(&[i32], i64)]) -> MultiLaurent {
        MultiLaurent::from_terms(arity, t.iter().map(|(e, c)| (e.to_vec(), *c)))
    }

    #[test]
    fn geometric_factor() {
        // (1 - t1^2) / (1 - t1) = 1 + t1, variables (t1, q)
        let f = RationalFn::new(ml(2, &[(&[0, 0], 1), (&[2, 0], -1)]), ml(2, &[(&[0, 0], 1), (&[1, 0], -1)]))
            .unwrap();
        assert_eq!(f.reduce_to_laurent().unwrap(), ml(2, &[(&[0, 0], 1), (&[1, 0], 1)]));
    }

    #[test]
    fn identity_quotient() {
        let d = ml(3, &[(&[1, 0, 0], 1), (&[0, 1, 0], -1)]);
        let f = RationalFn::new(d.clone(), d).unwrap();
        assert_eq!(f.reduce_to_laurent().unwrap(), MultiLaurent::constant(3, 1.into()));
    }

    #[test]
    fn non_divisible_reports_not_polynomial() {
        // (1 - q^2 t1/t2) / (1 - t2/t1), variables (t1, t2, q)
        let num = ml(3, &[(&[0, 0, 0], 1), (&[1, -1, 2], -1)]);
        let den = ml(3, &[(&[0, 0, 0], 1), (&[-1, 1, 0], -1)]);
        let f = RationalFn::new(num, den).unwrap();
        assert!(f.reduce_to_laurent().is_err());
    }

    #[test]
    fn monomial_denominators_are_units() {
        let num = ml(2, &[(&[3, 1], 2)]);
        let den = ml(2, &[(&[1, -2], 1)]);
        let f = RationalFn::new(num, den).unwrap();
        assert_eq!(f.reduce_to_laurent().unwrap(), ml(2, &[(&[2, 3], 2)]));
        // a non-unit integer denominator does not divide in Z[x^±]
        let g = RationalFn::new(ml(2, &[(&[0, 0], 1)]), ml(2, &[(&[0, 0], 2)])).unwrap();
        assert!(g.reduce_to_laurent().is_err());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFn::new(MultiLaurent::one(), MultiLaurent::zero()).is_err());
    }

    fn small() -> impl Strategy<Value = MultiLaurent> {
        proptest::collection::vec((proptest::collection::vec(-2i32..=2, 3), -3i64..=3), 1..4)
            .prop_map(|t| MultiLaurent::from_terms(3, t))
    }

    proptest! {
        #[test]
        fn product_divided_by_factor_round_trips(a in small(), b in small()) {
            prop_assume!(!b.is_zero());
            let f = RationalFn::new(a.times(&b), b).unwrap();
            prop_assert_eq!(f.reduce_to_laurent().unwrap(), a);
        }

        #[test]
        fn cross_multiplication_equality_is_transitive(
            a in small(), b in small(), k in small(), m in small()
        ) {
            prop_assume!(!b.is_zero() && !k.is_zero() && !m.is_zero());
            let f = RationalFn::new(a.clone(), b.clone()).unwrap();
            let g = RationalFn::new(a.times(&k), b.times(&k)).unwrap();
            let h = RationalFn::new(a.times(&m), b.times(&m)).unwrap();
            prop_assert!(f == f.clone());
            prop_assert!(f == g && g == f);
            prop_assert!(g == h);
        }
    }
}
