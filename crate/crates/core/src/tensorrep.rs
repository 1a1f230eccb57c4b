//! The representation `(C^2)^{⊗n}` of `sl2` and of `U_q(sl2)`, and exact
//! intertwiner computations between small representations.
//!
//! The q-action uses the coproduct `Δe = e⊗k + 1⊗e`, `Δf = f⊗1 + k^{-1}⊗f`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::blockcomb::is_odd_prime;
use crate::exactalg::{quantum_integer, FormalSum, LaurentScalar, LinearOp, QMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("p = {0} must be an odd prime")]
    InvalidPrime(u64),
}

/// `v_S`: the pure tensor with `v_1` in the positions of `S` and `v_0`
/// elsewhere. Ordered by its bit string, so for `n = 2` the order is
/// `v00, v01, v10, v11`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetBasisVector {
    n: usize,
    subset: BTreeSet<usize>,
}

impl SubsetBasisVector {
    pub fn new(n: usize, subset: BTreeSet<usize>) -> Self {
        assert!(subset.iter().all(|&i| (1..=n).contains(&i)), "subset outside 1..=n");
        SubsetBasisVector { n, subset }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subset(&self) -> &BTreeSet<usize> {
        &self.subset
    }

    /// `-n + 2|S|`.
    pub fn weight(&self) -> i64 {
        2 * self.subset.len() as i64 - self.n as i64
    }

    fn bits(&self) -> Vec<bool> {
        (1..=self.n).map(|i| self.subset.contains(&i)).collect()
    }

    /// All `2^n` basis vectors in order.
    pub fn all(n: usize) -> Vec<SubsetBasisVector> {
        let mut v: Vec<SubsetBasisVector> = (0u64..1 << n)
            .map(|m| SubsetBasisVector::new(n, (1..=n).filter(|i| m >> (n - i) & 1 == 1).collect()))
            .collect();
        v.sort();
        v
    }
}

impl Ord for SubsetBasisVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n.cmp(&other.n).then_with(|| self.bits().cmp(&other.bits()))
    }
}

impl PartialOrd for SubsetBasisVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetBasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v")?;
        for b in self.bits() {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

pub type TensorOp = LinearOp<SubsetBasisVector, SubsetBasisVector, LaurentScalar>;

/// `e`, `f`, `k` on `(C^2)^{⊗n}` with Laurent coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RepOperators {
    pub n: usize,
    pub q_deformed: bool,
    pub e: TensorOp,
    pub f: TensorOp,
    pub k: TensorOp,
}

pub fn build_rep(n: usize, q_deformed: bool) -> RepOperators {
    let basis = SubsetBasisVector::all(n);
    let qp = |x: i64| LaurentScalar::q_pow(if q_deformed { x as i32 } else { 0 });
    let mut e = TensorOp::default();
    let mut f = TensorOp::default();
    let mut k = TensorOp::default();
    for v in &basis {
        let s = &v.subset;
        let count = |pred: &dyn Fn(usize) -> bool| (1..=n).filter(|&j| pred(j)).count() as i64;
        let mut ev = FormalSum::zero();
        let mut fv = FormalSum::zero();
        for i in 1..=n {
            if s.contains(&i) {
                let exp = -(count(&|j| j < i && s.contains(&j)) - count(&|j| j < i && !s.contains(&j)));
                let mut t = s.clone();
                t.remove(&i);
                fv.add_term(SubsetBasisVector::new(n, t), qp(exp));
            } else {
                let exp = count(&|j| j > i && s.contains(&j)) - count(&|j| j > i && !s.contains(&j));
                let mut t = s.clone();
                t.insert(i);
                ev.add_term(SubsetBasisVector::new(n, t), qp(exp));
            }
        }
        e.set_column(v.clone(), ev);
        f.set_column(v.clone(), fv);
        k.set_column(v.clone(), FormalSum::term(v.clone(), qp(v.weight())));
    }
    RepOperators { n, q_deformed, e, f, k }
}

impl RepOperators {
    /// `ef - fe` (apply `f` first in `ef`).
    pub fn commutator(&self) -> TensorOp {
        self.f.then(&self.e).minus(&self.e.then(&self.f))
    }

    /// `[2|S| - n]_q` on the diagonal (or `2|S| - n` at `q = 1`).
    pub fn expected_commutator(&self) -> TensorOp {
        LinearOp::from_columns(SubsetBasisVector::all(self.n).into_iter().map(|v| {
            let c = if self.q_deformed {
                quantum_integer(v.weight())
            } else {
                LaurentScalar::constant(v.weight())
            };
            (v.clone(), FormalSum::term(v, c))
        }))
    }

    /// `(q - q^{-1})(ef - fe) = k - k^{-1}`, which avoids dividing.
    pub fn check_commutator_cleared(&self) -> bool {
        let qq = if self.q_deformed {
            LaurentScalar::from_terms([(1, 1), (-1, -1)])
        } else {
            return self.commutator() == self.expected_commutator();
        };
        let kinv = LinearOp::from_columns(self.k.columns().map(|(v, col)| {
            let c = col.coeff(v);
            let (e, _) = c.terms().next().expect("k is a monomial");
            (v.clone(), FormalSum::term(v.clone(), LaurentScalar::q_pow(-e)))
        }));
        self.commutator().scale(&qq) == self.k.minus(&kinv)
    }

    pub fn check_commutator(&self) -> bool {
        self.commutator() == self.expected_commutator()
    }

    /// Specialize at `q = 1` into rational matrices `(e, f, h)`.
    pub fn to_matrices(&self) -> RepMatrices {
        let basis = SubsetBasisVector::all(self.n);
        let at_one = |op: &TensorOp| {
            let mut m = QMatrix::zeros(basis.len(), basis.len());
            for (j, src) in basis.iter().enumerate() {
                for (i, tgt) in basis.iter().enumerate() {
                    let c = op.entry(tgt, src).eval_at_one();
                    m.set(i, j, BigRational::from_integer(c));
                }
            }
            m
        };
        let mut h = QMatrix::zeros(basis.len(), basis.len());
        for (i, v) in basis.iter().enumerate() {
            h.set(i, i, BigRational::from_integer(BigInt::from(v.weight())));
        }
        RepMatrices {
            basis: basis.iter().map(|v| v.to_string()).collect(),
            e: at_one(&self.e),
            f: at_one(&self.f),
            h,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "q_deformed": self.q_deformed,
            "e": self.e.to_json(),
            "f": self.f.to_json(),
            "k": self.k.to_json(),
        })
    }
}

/// An `sl2`-action `(e, f, h)` by rational matrices on a named basis. Column
/// `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMatrices {
    pub basis: Vec<String>,
    pub e: QMatrix,
    pub f: QMatrix,
    pub h: QMatrix,
}

impl RepMatrices {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `ef - fe`.
    pub fn commutator(&self) -> QMatrix {
        self.e.mul(&self.f).sub(&self.f.mul(&self.e))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "basis": self.basis,
            "e": matrix_json(&self.e),
            "f": matrix_json(&self.f),
            "h": matrix_json(&self.h),
        })
    }
}

pub fn matrix_json(m: &QMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| Value::String(m.get(i, j).to_string())).collect()))
            .collect(),
    )
}

/// A basis of `{T : T X_A = X_B T for X = e, f, h}`; each `T` is
/// `dim B × dim A`.
pub fn solve_intertwiner(a: &RepMatrices, b: &RepMatrices) -> Vec<QMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let unknowns = da * db;
    let var = |k: usize, l: usize| k * da + l;
    let pairs = [(&a.e, &b.e), (&a.f, &b.f), (&a.h, &b.h)];
    let mut system = QMatrix::zeros(3 * db * da, unknowns.max(1));
    let mut row = 0;
    for (xa, xb) in pairs {
        for i in 0..db {
            for j in 0..da {
                // (T X_A)_{ij} - (X_B T)_{ij}
                for l in 0..da {
                    let c = xa.get(l, j);
                    if !c.is_zero() {
                        let v = system.get(row, var(i, l)) + c;
                        system.set(row, var(i, l), v);
                    }
                }
                for k in 0..db {
                    let c = xb.get(i, k);
                    if !c.is_zero() {
                        let v = system.get(row, var(k, j)) - c;
                        system.set(row, var(k, j), v);
                    }
                }
                row += 1;
            }
        }
    }
    if unknowns == 0 {
        return Vec::new();
    }
    system
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut t = QMatrix::zeros(db, da);
            for k in 0..db {
                for l in 0..da {
                    t.set(k, l, v[var(k, l)].clone());
                }
            }
            t
        })
        .collect()
}

/// Whether `m` is a linear combination of `basis`.
pub fn in_span(basis: &[QMatrix], m: &QMatrix) -> bool {
    let flat = |x: &QMatrix| -> Vec<BigRational> {
        (0..x.rows()).flat_map(|i| (0..x.cols()).map(move |j| (i, j))).map(|(i, j)| x.get(i, j).clone()).collect()
    };
    let len = m.rows() * m.cols();
    let build = |vs: &[Vec<BigRational>]| {
        let mut a = QMatrix::zeros(len, vs.len());
        for (c, v) in vs.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                a.set(r, c, x.clone());
            }
        }
        a
    };
    let mut cols: Vec<Vec<BigRational>> = basis.iter().map(flat).collect();
    let r0 = build(&cols).rank();
    cols.push(flat(m));
    build(&cols).rank() == r0
}

/// Search small integer combinations of `basis` for an invertible matrix.
pub fn find_invertible(basis: &[QMatrix]) -> Option<QMatrix> {
    let first = basis.first()?;
    if first.rows() != first.cols() {
        return None;
    }
    let range: Vec<i64> = vec![1, -1, 2, -2, 3, 0];
    let mut coeffs = vec![0usize; basis.len()];
    loop {
        let mut m = QMatrix::zeros(first.rows(), first.cols());
        for (b, &ci) in basis.iter().zip(&coeffs) {
            m = m.add(&b.scale(&BigRational::from_integer(BigInt::from(range[ci]))));
        }
        if !m.determinant().is_zero() {
            return Some(m);
        }
        let mut pos = 0;
        loop {
            if pos == coeffs.len() {
                return None;
            }
            coeffs[pos] += 1;
            if coeffs[pos] < range.len() {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
    }
}

/// The `n = 2` Grothendieck-group action in the basis
/// `(w_{-2}, w_0^1, w_0^2, w_2)`, where `w_0^1 = [L(0)]`, `w_0^2 = [L(-2)]`
/// and `w_{±2}` are the classes of the one-dimensional extreme blocks.
pub fn pcanonical_n2_rep(p: u64) -> Result<RepMatrices, TensorError> {
    if !is_odd_prime(p) {
        return Err(TensorError::InvalidPrime(p));
    }
    #[rustfmt::skip]
    let e = QMatrix::from_ints(4, 4, &[
        0, 0, 0, 0,
        2, 0, 0, 0,
        2, 0, 0, 0,
        0, 0, 1, 0,
    ]);
    #[rustfmt::skip]
    let f = QMatrix::from_ints(4, 4, &[
        0, 0, 1, 0,
        0, 0, 0, 2,
        0, 0, 0, 2,
        0, 0, 0, 0,
    ]);
    #[rustfmt::skip]
    let h = QMatrix::from_ints(4, 4, &[
        -2, 0, 0, 0,
        0, 0, 0, 0,
        0, 0, 0, 0,
        0, 0, 0, 2,
    ]);
    Ok(RepMatrices { basis: w_basis_names(), e, f, h })
}

pub fn w_basis_names() -> Vec<String> {
    ["w_-2", "w_0^1", "w_0^2", "w_2"].iter().map(|s| s.to_string()).collect()
}

/// `w_{-2} ↦ v00, w_0^1 ↦ v01 - v10, w_0^2 ↦ v01, w_2 ↦ v11`, columns in the
/// order of [`pcanonical_n2_rep`], rows `v00, v01, v10, v11`.
pub fn unit_coefficient_map() -> QMatrix {
    #[rustfmt::skip]
    let t = QMatrix::from_ints(4, 4, &[
        1, 0, 0, 0,
        0, 1, 1, 0,
        0, -1, 0, 0,
        0, 0, 0, 1,
    ]);
    t
}

/// `w_{-2} ↦ -2 v00, w_0^1 ↦ v01 - v10, w_0^2 ↦ -2 v01, w_2 ↦ -2 v11`.
pub fn rescaled_intertwiner() -> QMatrix {
    #[rustfmt::skip]
    let t = QMatrix::from_ints(4, 4, &[
        -2, 0, 0, 0,
        0, 1, -2, 0,
        0, -1, 0, 0,
        0, 0, 0, -2,
    ]);
    t
}

/// Does `t` satisfy `T X_A = X_B T` for all three generators?
pub fn is_intertwiner(t: &QMatrix, a: &RepMatrices, b: &RepMatrices) -> bool {
    [(&a.e, &b.e), (&a.f, &b.f), (&a.h, &b.h)]
        .iter()
        .all(|(xa, xb)| t.mul(xa) == xb.mul(t))
}

/// Everything the `n = 2` comparison produces.
#[derive(Clone, Debug)]
pub struct IntertwinerReport {
    pub basis: Vec<QMatrix>,
    pub invertible: Option<QMatrix>,
    pub unit_map_in_span: bool,
    pub unit_map_intertwines_e: bool,
    pub rescaled: QMatrix,
    pub rescaled_in_span: bool,
    pub rescaled_invertible: bool,
}

impl IntertwinerReport {
    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.basis.len(),
            "basis": self.basis.iter().map(matrix_json).collect::<Vec<_>>(),
            "invertible_member": self.invertible.as_ref().map(matrix_json),
            "unit_coefficient_map_in_span": self.unit_map_in_span,
            "unit_coefficient_map_intertwines_e": self.unit_map_intertwines_e,
            "rescaled_map": matrix_json(&self.rescaled),
            "rescaled_map_images": {
                "w_-2": "-2 v00",
                "w_0^1": "v01 - v10",
                "w_0^2": "-2 v01",
                "w_2": "-2 v11",
            },
            "rescaled_in_span": self.rescaled_in_span,
            "rescaled_invertible": self.rescaled_invertible,
        })
    }
}

pub fn n2_intertwiner_report(p: u64) -> Result<IntertwinerReport, TensorError> {
    let a = pcanonical_n2_rep(p)?;
    let b = build_rep(2, false).to_matrices();
    let basis = solve_intertwiner(&a, &b);
    let unit = unit_coefficient_map();
    let rescaled = rescaled_intertwiner();
    Ok(IntertwinerReport {
        invertible: find_invertible(&basis),
        unit_map_in_span: in_span(&basis, &unit),
        unit_map_intertwines_e: unit.mul(&a.e) == b.e.mul(&unit),
        rescaled_in_span: in_span(&basis, &rescaled),
        rescaled_invertible: !rescaled.determinant().is_zero(),
        rescaled,
        basis,
    })
}
