//! The eight-dimensional algebra `A = End(P(0) ⊕ P(-2))` controlling the
//! `n = 2` principal block, its Cartan data and the Grothendieck-group
//! matrices of the bimodule functors.
//!
//! Products compose right to left: `x·y` applies `y` first.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactalg::{FormalSum, LinearOp, QMatrix};
use crate::tensorrep::{w_basis_names, RepMatrices};

/// The two vertex labels, `0` and `-2`.
pub const VERTICES: [i8; 2] = [0, -2];

/// `ψ^layer_{source,target} ∈ Hom(P(source), P(target))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElt {
    pub source: i8,
    pub target: i8,
    pub layer: u8,
}

impl BasisElt {
    pub fn new(source: i8, target: i8, layer: u8) -> Self {
        assert!(VERTICES.contains(&source) && VERTICES.contains(&target) && (1..=2).contains(&layer));
        BasisElt { source, target, layer }
    }

    pub fn all() -> Vec<BasisElt> {
        let mut v = Vec::new();
        for s in VERTICES {
            for t in VERTICES {
                for k in [1, 2] {
                    v.push(BasisElt::new(s, t, k));
                }
            }
        }
        v.sort();
        v
    }

    pub fn idempotent(i: i8) -> Self {
        BasisElt::new(i, i, 1)
    }

    pub fn is_idempotent(&self) -> bool {
        self.layer == 1 && self.source == self.target
    }
}

impl fmt::Display for BasisElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi^{}_{{{},{}}}", self.layer, self.source, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZigzagError {
    #[error("product {x} * {y} is specified as {first} by {first_clause} and as {second} by {second_clause}")]
    InconsistentTable {
        x: String,
        y: String,
        first: String,
        first_clause: String,
        second: String,
        second_clause: String,
    },
    #[error("product {x} * {y} is not determined by any relation")]
    IncompleteTable { x: String, y: String },
}

pub type Element = FormalSum<BasisElt, BigInt>;

#[derive(Clone, Debug)]
pub struct AlgebraA {
    basis: Vec<BasisElt>,
    structure: BTreeMap<(BasisElt, BasisElt), Element>,
    /// The relation clauses that fixed each product.
    coverage: BTreeMap<(BasisElt, BasisElt), Vec<&'static str>>,
}

type Clause = (BasisElt, BasisElt, Element, &'static str);

fn relation_clauses() -> Vec<Clause> {
    let b = BasisElt::new;
    let mut out: Vec<Clause> = Vec::new();
    let all = BasisElt::all();
    for &x in &all {
        for &y in &all {
            if y.target != x.source {
                out.push((x, y, Element::zero(), "composability"));
            }
        }
    }
    for i in VERTICES {
        for j in VERTICES {
            for k in [1, 2] {
                let p = b(i, j, k);
                out.push((b(j, j, 1), p, Element::basis(p), "left unit"));
                out.push((p, b(i, i, 1), Element::basis(p), "right unit"));
                if !(k == 1 && i == j) {
                    out.push((b(j, j, 2), p, Element::zero(), "left layer-2 annihilation"));
                    out.push((p, b(i, i, 2), Element::zero(), "right layer-2 annihilation"));
                }
            }
            if i == j {
                continue;
            }
            out.push((b(i, j, 1), b(j, i, 1), Element::zero(), "cross, both layer 1"));
            for k in [1, 2] {
                for k2 in [1, 2] {
                    if k == 1 && k2 == 1 {
                        continue;
                    }
                    out.push((b(i, j, k), b(j, i, k2), Element::basis(b(j, j, 2)), "cross"));
                }
            }
        }
    }
    out
}

pub fn build_algebra_a() -> Result<AlgebraA, ZigzagError> {
    build_from_clauses(relation_clauses())
}

fn build_from_clauses(clauses: Vec<Clause>) -> Result<AlgebraA, ZigzagError> {
    let mut structure: BTreeMap<(BasisElt, BasisElt), (Element, &'static str)> = BTreeMap::new();
    let mut coverage: BTreeMap<(BasisElt, BasisElt), Vec<&'static str>> = BTreeMap::new();
    for (x, y, value, clause) in clauses {
        coverage.entry((x, y)).or_default().push(clause);
        match structure.get(&(x, y)) {
            Some((prev, prev_clause)) if *prev != value => {
                return Err(ZigzagError::InconsistentTable {
                    x: x.to_string(),
                    y: y.to_string(),
                    first: prev.to_string(),
                    first_clause: prev_clause.to_string(),
                    second: value.to_string(),
                    second_clause: clause.to_string(),
                });
            }
            Some(_) => {}
            None => {
                structure.insert((x, y), (value, clause));
            }
        }
    }
    let basis = BasisElt::all();
    for &x in &basis {
        for &y in &basis {
            if !structure.contains_key(&(x, y)) {
                return Err(ZigzagError::IncompleteTable { x: x.to_string(), y: y.to_string() });
            }
        }
    }
    Ok(AlgebraA {
        basis,
        structure: structure.into_iter().map(|(k, (v, _))| (k, v)).collect(),
        coverage,
    })
}

impl AlgebraA {
    pub fn basis(&self) -> &[BasisElt] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mul_basis(&self, x: BasisElt, y: BasisElt) -> Element {
        self.structure[&(x, y)].clone()
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for (bx, cx) in x.iter() {
            for (by, cy) in y.iter() {
                out = out.plus(&self.mul_basis(*bx, *by).scale(&(cx * cy)));
            }
        }
        out
    }

    pub fn unit(&self) -> Element {
        VERTICES.iter().map(|&i| (BasisElt::idempotent(i), BigInt::from(1))).collect()
    }

    /// Number of basis triples with `(xy)z ≠ x(yz)`.
    pub fn associativity_failures(&self) -> usize {
        let mut bad = 0;
        for &x in &self.basis {
            for &y in &self.basis {
                let xy = self.mul_basis(x, y);
                for &z in &self.basis {
                    let left = self.mul(&xy, &Element::basis(z));
                    let right = self.mul(&Element::basis(x), &self.mul_basis(y, z));
                    if left != right {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    pub fn unit_acts_trivially(&self) -> bool {
        let u = self.unit();
        self.basis.iter().all(|&x| {
            let e = Element::basis(x);
            self.mul(&u, &e) == e && self.mul(&e, &u) == e
        })
    }

    pub fn idempotents_orthogonal(&self) -> bool {
        let (a, b) = (Element::basis(BasisElt::idempotent(0)), Element::basis(BasisElt::idempotent(-2)));
        self.mul(&a, &a) == a && self.mul(&b, &b) == b && self.mul(&a, &b).is_zero() && self.mul(&b, &a).is_zero()
    }

    /// Pairs fixed by more than one clause, with the clauses involved. All of
    /// them agree, otherwise the build would have failed.
    pub fn multiply_covered(&self) -> Vec<((BasisElt, BasisElt), Vec<&'static str>)> {
        self.coverage.iter().filter(|(_, c)| c.len() > 1).map(|(k, c)| (*k, c.clone())).collect()
    }

    pub fn structure_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        for ((x, y), v) in &self.structure {
            if !v.is_zero() {
                m.insert(format!("{x} * {y}"), Value::String(v.to_string()));
            }
        }
        Value::Object(m)
    }

    fn vector(&self, e: &Element) -> Vec<BigRational> {
        self.basis.iter().map(|b| BigRational::from_integer(e.coeff(b))).collect()
    }

    fn span_rank(&self, elems: &[Element]) -> usize {
        if elems.is_empty() {
            return 0;
        }
        let mut m = QMatrix::zeros(elems.len(), self.dim());
        for (i, e) in elems.iter().enumerate() {
            for (j, x) in self.vector(e).into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m.rank()
    }

    /// A basis of the left ideal `A·g_1 + ... + A·g_m`, as a spanning list.
    pub fn left_submodule(&self, gens: &[Element]) -> Vec<Element> {
        let mut span: Vec<Element> = Vec::new();
        for g in gens {
            for &x in &self.basis {
                let p = self.mul(&Element::basis(x), g);
                let mut trial = span.clone();
                trial.push(p.clone());
                if self.span_rank(&trial) > span.len() {
                    span.push(p);
                }
            }
        }
        span
    }

    /// `[M : L_j] = dim e_j M` for a left submodule given by a spanning list.
    pub fn composition_class(&self, module: &[Element]) -> BTreeMap<i8, usize> {
        VERTICES
            .iter()
            .map(|&j| {
                let e = Element::basis(BasisElt::idempotent(j));
                let proj: Vec<Element> = module.iter().map(|m| self.mul(&e, m)).collect();
                (j, self.span_rank(&proj))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    /// `dim e_i A e_j`, rows and columns in the order `0, -2`.
    pub matrix: [[usize; 2]; 2],
    pub projective_dims: BTreeMap<i8, usize>,
    pub radical_dim: usize,
    pub radical_is_ideal: bool,
    pub radical_cubed_zero: bool,
    pub dim: usize,
}

impl CartanData {
    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "cartan": self.matrix,
            "projective_dims": self.projective_dims.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
            "radical_dim": self.radical_dim,
            "radical_is_ideal": self.radical_is_ideal,
            "radical_cubed_zero": self.radical_cubed_zero,
        })
    }
}

pub fn cartan_data(a: &AlgebraA) -> CartanData {
    let mut matrix = [[0; 2]; 2];
    for (ii, &i) in VERTICES.iter().enumerate() {
        for (jj, &j) in VERTICES.iter().enumerate() {
            let ei = Element::basis(BasisElt::idempotent(i));
            let ej = Element::basis(BasisElt::idempotent(j));
            let elems: Vec<Element> =
                a.basis.iter().map(|&x| a.mul(&a.mul(&ei, &Element::basis(x)), &ej)).collect();
            matrix[ii][jj] = a.span_rank(&elems);
        }
    }
    let projective_dims = VERTICES
        .iter()
        .map(|&i| {
            let ei = Element::basis(BasisElt::idempotent(i));
            let elems: Vec<Element> = a.basis.iter().map(|&x| a.mul(&Element::basis(x), &ei)).collect();
            (i, a.span_rank(&elems))
        })
        .collect();
    let radical: Vec<Element> =
        a.basis.iter().filter(|x| !x.is_idempotent()).map(|&x| Element::basis(x)).collect();
    let in_radical = |e: &Element| e.labels().all(|b| !b.is_idempotent());
    let radical_is_ideal = a.basis.iter().all(|&x| {
        radical.iter().all(|r| in_radical(&a.mul(&Element::basis(x), r)) && in_radical(&a.mul(r, &Element::basis(x))))
    });
    let mut radical_cubed_zero = true;
    for r1 in &radical {
        for r2 in &radical {
            let r12 = a.mul(r1, r2);
            for r3 in &radical {
                if !a.mul(&r12, r3).is_zero() {
                    radical_cubed_zero = false;
                }
            }
        }
    }
    CartanData {
        matrix,
        projective_dims,
        radical_dim: a.span_rank(&radical),
        radical_is_ideal,
        radical_cubed_zero,
        dim: a.dim(),
    }
}

/// Labels of the Grothendieck groups involved: `[k]` for `k-mod`, and
/// `[L_0]`, `[L_s]` for the simple `A`-modules at the vertices `0`, `-2`.
pub const K_LABEL: &str = "[k]";
pub const L0_LABEL: &str = "[L_0]";
pub const LS_LABEL: &str = "[L_s]";

pub type KOp = LinearOp<String, String, BigInt>;

fn simple_label(j: i8) -> String {
    if j == 0 { L0_LABEL } else { LS_LABEL }.to_string()
}

#[derive(Clone, Debug, PartialEq)]
pub struct KMatrices {
    pub e_minus1: KOp,
    pub f_minus1: KOp,
    pub e_1: KOp,
    pub f_1: KOp,
}

pub fn bimodule_k_matrices(a: &AlgebraA) -> KMatrices {
    let e_s = Element::basis(BasisElt::idempotent(-2));
    let proj = a.left_submodule(&[e_s.clone()]);
    let class = a.composition_class(&proj);
    let e_col: FormalSum<String, BigInt> =
        class.iter().map(|(&j, &m)| (simple_label(j), BigInt::from(m))).collect();
    let e_minus1 = KOp::from_columns([(K_LABEL.to_string(), e_col)]);

    // ψ^1_{-2,-2} acting on L_j = A e_j / rad(A e_j).
    let mut f_cols = Vec::new();
    for j in VERTICES {
        let ej = Element::basis(BasisElt::idempotent(j));
        let pj = a.left_submodule(&[ej.clone()]);
        let mut rad_gens = Vec::new();
        for m in &pj {
            for &x in a.basis.iter().filter(|x| !x.is_idempotent()) {
                rad_gens.push(a.mul(&Element::basis(x), m));
            }
        }
        let rad = a.left_submodule(&rad_gens);
        let top = a.composition_class(&pj)[&-2] - a.composition_class(&rad)[&-2];
        f_cols.push((simple_label(j), FormalSum::term(K_LABEL.to_string(), BigInt::from(top))));
    }
    let f_minus1 = KOp::from_columns(f_cols);
    KMatrices { e_1: f_minus1.clone(), f_1: e_minus1.clone(), e_minus1, f_minus1 }
}

impl KMatrices {
    /// Assemble `e`, `f`, `h` on `(w_{-2}, w_0^1, w_0^2, w_2)` with
    /// `w_0^1 = [L_0]`, `w_0^2 = [L_s]` and `w_{±2} = [k]`.
    pub fn assemble(&self) -> RepMatrices {
        let mut e = QMatrix::zeros(4, 4);
        let mut f = QMatrix::zeros(4, 4);
        let mid = |l: &str| if l == L0_LABEL { 1 } else { 2 };
        let q = |c: &BigInt| BigRational::from_integer(c.clone());
        for (tgt, c) in self.e_minus1.column(&K_LABEL.to_string()).iter() {
            e.set(mid(tgt), 0, q(c));
        }
        for (tgt, c) in self.f_1.column(&K_LABEL.to_string()).iter() {
            f.set(mid(tgt), 3, q(c));
        }
        for src in [L0_LABEL, LS_LABEL] {
            let s = src.to_string();
            e.set(3, mid(src), q(&self.e_1.entry(&K_LABEL.to_string(), &s)));
            f.set(0, mid(src), q(&self.f_minus1.entry(&K_LABEL.to_string(), &s)));
        }
        let h = QMatrix::from_ints(4, 4, &[-2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2]);
        RepMatrices { basis: w_basis_names(), e, f, h }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "E_-1": self.e_minus1.to_json(),
            "F_-1": self.f_minus1.to_json(),
            "E_1": self.e_1.to_json(),
            "F_1": self.f_1.to_json(),
        })
    }
}

/// K-classes read off the filtrations `0 → Z(j) → P(i) → Z(i) → 0` and
/// `0 → L(j) → Z(i) → L(i) → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortExactSequences {
    /// Classes of `P(i)`, `Z(i)` as multiplicities of `L(0)`, `L(-2)`.
    pub projective: BTreeMap<i8, BTreeMap<i8, usize>>,
    pub baby_verma: BTreeMap<i8, BTreeMap<i8, usize>>,
    /// `[P(i)] = [Z(i)] + [Z(j)]` for both `i`.
    pub projective_sum_holds: bool,
    /// `[Z(i)] = [L(0)] + [L(-2)]` for both `i`.
    pub verma_sum_holds: bool,
}

pub fn short_exact_sequences(a: &AlgebraA) -> ShortExactSequences {
    let mut projective = BTreeMap::new();
    let mut baby_verma = BTreeMap::new();
    for i in VERTICES {
        let j = if i == 0 { -2 } else { 0 };
        let pi = a.left_submodule(&[Element::basis(BasisElt::idempotent(i))]);
        let sub = a.left_submodule(&[Element::basis(BasisElt::new(i, j, 1))]);
        let cp = a.composition_class(&pi);
        let cs = a.composition_class(&sub);
        let quotient: BTreeMap<i8, usize> = VERTICES.iter().map(|&v| (v, cp[&v] - cs[&v])).collect();
        projective.insert(i, cp);
        // the submodule generated by ψ^1_{i,j} is Z(j); the quotient is Z(i)
        baby_verma.entry(j).or_insert_with(BTreeMap::new).extend(cs.clone());
        baby_verma.entry(i).or_insert_with(BTreeMap::new).extend(quotient);
    }
    let add = |x: &BTreeMap<i8, usize>, y: &BTreeMap<i8, usize>| -> BTreeMap<i8, usize> {
        VERTICES.iter().map(|&v| (v, x[&v] + y[&v])).collect()
    };
    let projective_sum_holds =
        VERTICES.iter().all(|&i| projective[&i] == add(&baby_verma[&0], &baby_verma[&-2]));
    let verma_sum_holds = VERTICES.iter().all(|&i| VERTICES.iter().all(|&v| baby_verma[&i][&v] == 1));
    ShortExactSequences { projective, baby_verma, projective_sum_holds, verma_sum_holds }
}

impl ShortExactSequences {
    pub fn to_json(&self) -> Value {
        let cls = |m: &BTreeMap<i8, usize>| {
            format!("{}[L(0)] + {}[L(-2)]", m[&0], m[&-2])
        };
        json!({
            "P(0)": cls(&self.projective[&0]),
            "P(-2)": cls(&self.projective[&-2]),
            "Z(0)": cls(&self.baby_verma[&0]),
            "Z(-2)": cls(&self.baby_verma[&-2]),
            "P = Z(0) + Z(-2)": self.projective_sum_holds,
            "Z = L(0) + L(-2)": self.verma_sum_holds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi(k: u8, i: i8, j: i8) -> Element {
        Element::basis(BasisElt::new(i, j, k))
    }

    #[test]
    fn paper_products() {
        let a = build_algebra_a().unwrap();
        assert!(a.mul(&psi(2, 0, 0), &psi(2, 0, 0)).is_zero());
        assert_eq!(a.mul(&psi(2, 0, -2), &psi(2, -2, 0)), psi(2, -2, -2));
        assert_eq!(a.mul(&psi(2, -2, 0), &psi(2, 0, -2)), psi(2, 0, 0));
        assert_eq!(a.mul(&psi(1, 0, -2), &psi(2, -2, 0)), psi(2, -2, -2));
        assert!(a.mul(&psi(1, 0, -2), &psi(1, -2, 0)).is_zero());
    }

    #[test]
    fn algebra_axioms() {
        let a = build_algebra_a().unwrap();
        assert_eq!(a.dim(), 8);
        assert_eq!(a.associativity_failures(), 0);
        assert!(a.unit_acts_trivially());
        assert!(a.idempotents_orthogonal());
    }

    #[test]
    fn conflicting_clause_is_reported() {
        let mut clauses = relation_clauses();
        let x = BasisElt::new(0, 0, 2);
        clauses.push((x, x, Element::basis(x), "bogus"));
        assert!(matches!(build_from_clauses(clauses), Err(ZigzagError::InconsistentTable { .. })));
    }

    #[test]
    fn missing_product_is_reported() {
        let clauses: Vec<Clause> = relation_clauses().into_iter().filter(|c| c.3 != "cross").collect();
        assert!(matches!(build_from_clauses(clauses), Err(ZigzagError::IncompleteTable { .. })));
    }

    #[test]
    fn cartan() {
        let a = build_algebra_a().unwrap();
        let c = cartan_data(&a);
        assert_eq!(c.matrix, [[2, 2], [2, 2]]);
        assert_eq!(c.projective_dims[&0], 4);
        assert_eq!(c.projective_dims[&-2], 4);
        assert_eq!(c.radical_dim, 6);
        assert!(c.radical_is_ideal && c.radical_cubed_zero);
    }

    #[test]
    fn k_matrices() {
        let a = build_algebra_a().unwrap();
        let k = bimodule_k_matrices(&a);
        let e = k.e_minus1.column(&K_LABEL.to_string());
        assert_eq!(e.coeff(&L0_LABEL.to_string()), BigInt::from(2));
        assert_eq!(e.coeff(&LS_LABEL.to_string()), BigInt::from(2));
        assert!(k.f_minus1.column(&L0_LABEL.to_string()).is_zero());
        assert_eq!(k.f_minus1.column(&LS_LABEL.to_string()), FormalSum::basis(K_LABEL.to_string()));
    }

    #[test]
    fn sequences() {
        let a = build_algebra_a().unwrap();
        let s = short_exact_sequences(&a);
        assert!(s.projective_sum_holds && s.verma_sum_holds);
    }
}
