//! Torus-equivariant K-theory of `T*Gr(r, n)` by fixed-point localization,
//! and the Fourier–Mukai kernels supported on the correspondences
//! `W ⊂ T*Gr(r, n) × T*Gr(r+1, n)`.
//!
//! Classes are recorded by their restrictions to the `C(n, r)` torus-fixed
//! points. Variables are `t_1, ..., t_n` (the torus of `GL_n`) and `q`, the
//! dilation on cotangent fibers, which scales them by `q^2`.
//!
//! Conventions:
//! * `λ(T) = Π_{w ∈ T} (1 - w^{-1})`.
//! * A kernel with internal shift `s` and homological shift `h` contributes
//!   `(-1)^h q^s`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactalg::{quantum_integer, LaurentScalar, LinearOp, MultiLaurent, NotPolynomial, RationalFn, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("{context}: {source}")]
    NotPolynomial { context: String, source: NotPolynomial },
    #[error("class lives on T*Gr({found}, {n}) but the kernel expects T*Gr({expected}, {n})")]
    SourceMismatch { n: usize, expected: usize, found: usize },
    #[error("rank r = {r} is out of range for n = {n}")]
    RankOutOfRange { n: usize, r: usize },
}

/// The fixed point of `T*Gr(r, n)` given by the coordinate subspace spanned
/// by `e_i`, `i ∈ subset`, with zero cotangent vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FixedPoint {
    pub n: usize,
    pub subset: BTreeSet<usize>,
}

impl FixedPoint {
    pub fn new(n: usize, subset: BTreeSet<usize>) -> Self {
        assert!(subset.iter().all(|&i| (1..=n).contains(&i)));
        FixedPoint { n, subset }
    }

    pub fn rank(&self) -> usize {
        self.subset.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.subset.contains(&i)
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.subset.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// All fixed points of `T*Gr(r, n)`, in lexicographic order.
pub fn fixed_points(n: usize, r: usize) -> Vec<FixedPoint> {
    fn go(start: usize, n: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<FixedPoint>) {
        if left == 0 {
            out.push(FixedPoint::new(n, acc.iter().copied().collect()));
            return;
        }
        for i in start..=n {
            if n - i + 1 < left {
                break;
            }
            acc.push(i);
            go(i + 1, n, left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(1, n, r, &mut Vec::new(), &mut out);
    }
    out
}

/// A character `t^e q^f`, stored as its exponent vector of length `n + 1`.
pub type Character = Vec<i32>;

fn ratio(n: usize, num: usize, den: usize, q: i32) -> Character {
    let mut c = vec![0; n + 1];
    c[num - 1] += 1;
    c[den - 1] -= 1;
    c[n] = q;
    c
}

fn det_char(n: usize, subset: &BTreeSet<usize>, power: i32) -> Character {
    let mut c = vec![0; n + 1];
    for &i in subset {
        c[i - 1] += power;
    }
    c
}

fn mul_char(a: &Character, b: &Character) -> Character {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn inv_char(a: &Character) -> Character {
    a.iter().map(|x| -x).collect()
}

/// Tangent weights of `T*Gr(r, n)` at `S`: `t_j/t_i` along the base and
/// `q^2 t_i/t_j` along the fiber, for `i ∈ S`, `j ∉ S`.
pub fn tangent_weights_y(p: &FixedPoint) -> Vec<Character> {
    let n = p.n;
    let mut out = Vec::new();
    for &i in &p.subset {
        for j in (1..=n).filter(|j| !p.contains(*j)) {
            out.push(ratio(n, j, i, 0));
            out.push(ratio(n, i, j, 2));
        }
    }
    out
}

/// Tangent weights of `W` at the fixed point `(S ⊂ S')`, `S' = S ∪ {a}`.
pub fn tangent_weights_w(small: &FixedPoint, big: &FixedPoint) -> Vec<Character> {
    let n = small.n;
    let extra: Vec<usize> = big.subset.difference(&small.subset).copied().collect();
    assert!(extra.len() == 1 && small.subset.is_subset(&big.subset), "not a flag");
    let a = extra[0];
    let outside: Vec<usize> = (1..=n).filter(|j| !big.contains(*j)).collect();
    let mut out = Vec::new();
    for &i in &small.subset {
        out.push(ratio(n, a, i, 0));
    }
    for &i in &small.subset {
        for &j in &outside {
            out.push(ratio(n, j, i, 0));
            out.push(ratio(n, i, j, 2));
        }
    }
    for &j in &outside {
        out.push(ratio(n, j, a, 0));
    }
    out
}

/// `dim T*Gr(r, n) = 2 r (n - r)`.
pub fn dim_cotangent_grassmannian(n: usize, r: usize) -> usize {
    2 * r * (n - r)
}

/// A class in `K_{T × G_m}(T*Gr(r, n))` by its fixed-point restrictions.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedClass {
    pub n: usize,
    pub r: usize,
    pub values: BTreeMap<FixedPoint, RationalFn>,
}

impl LocalizedClass {
    pub fn zero(n: usize, r: usize) -> Self {
        LocalizedClass {
            n,
            r,
            values: fixed_points(n, r).into_iter().map(|p| (p, RationalFn::zero())).collect(),
        }
    }

    pub fn from_laurent(n: usize, r: usize, values: BTreeMap<FixedPoint, MultiLaurent>) -> Self {
        let mut c = Self::zero(n, r);
        for (p, v) in values {
            c.values.insert(p, RationalFn::from_laurent(v));
        }
        c
    }

    pub fn value(&self, p: &FixedPoint) -> RationalFn {
        self.values.get(p).cloned().unwrap_or_else(RationalFn::zero)
    }

    pub fn laurent_values(&self) -> Result<BTreeMap<FixedPoint, MultiLaurent>, NotPolynomial> {
        self.values.iter().map(|(p, v)| Ok((p.clone(), v.reduce_to_laurent()?))).collect()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, v) in &other.values {
            out.values.insert(p.clone(), out.value(p).plus(v));
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(&MultiLaurent::one().negate()))
    }

    pub fn scale(&self, c: &MultiLaurent) -> Self {
        let c = RationalFn::from_laurent(c.clone());
        LocalizedClass {
            n: self.n,
            r: self.r,
            values: self.values.iter().map(|(p, v)| (p.clone(), v.times(&c))).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }
}

fn laurent_of_char(c: &Character) -> MultiLaurent {
    MultiLaurent::monomial(BigInt::from(1), c.clone())
}

/// `1 - x^m`.
fn one_minus(m: &Character) -> MultiLaurent {
    MultiLaurent::constant(m.len(), BigInt::from(1)).minus(&laurent_of_char(m))
}

fn lambda_class(weights: &[Character]) -> MultiLaurent {
    let n1 = weights.first().map(|w| w.len()).unwrap_or(0);
    weights
        .iter()
        .fold(MultiLaurent::constant(n1, BigInt::from(1)), |acc, w| acc.times(&one_minus(&inv_char(w))))
}

/// The structure sheaf of the fixed point `S`: `λ(T_S)` at `S`, zero
/// elsewhere.
pub fn skyscraper_class(p: &FixedPoint) -> LocalizedClass {
    let r = p.rank();
    let mut values = BTreeMap::new();
    let lam = lambda_class(&tangent_weights_y(p));
    values.insert(p.clone(), lam.plus(&MultiLaurent::zero_with_arity(p.n + 1)));
    LocalizedClass::from_laurent(p.n, r, values)
}

/// `det(V)^a`: value `(Π_{i ∈ S} t_i)^a` at `S`.
pub fn line_bundle_class(n: usize, r: usize, a: i32) -> LocalizedClass {
    let values = fixed_points(n, r)
        .into_iter()
        .map(|p| {
            let v = laurent_of_char(&det_char(n, &p.subset, a));
            (p, v)
        })
        .collect();
    LocalizedClass::from_laurent(n, r, values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `T*Gr(r, n) → T*Gr(r+1, n)`.
    Up,
    /// `T*Gr(r+1, n) → T*Gr(r, n)`.
    Down,
    /// The diagonal of `T*Gr(r, n)`.
    Diagonal,
}

/// A kernel `O_W ⊗ det(V)^a det(V')^b ⊗ (t_1⋯t_n)^ambient {s} [h]`, where
/// `V` has rank `r` and `V'` rank `r + 1`. For the diagonal both are the
/// rank-`r` bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelSpec {
    pub n: usize,
    pub r: usize,
    pub direction: Direction,
    pub a: i32,
    pub b: i32,
    pub internal_shift: i32,
    pub homological_shift: i32,
    pub ambient: i32,
}

impl KernelSpec {
    pub fn source_rank(&self) -> usize {
        match self.direction {
            Direction::Up | Direction::Diagonal => self.r,
            Direction::Down => self.r + 1,
        }
    }

    pub fn target_rank(&self) -> usize {
        match self.direction {
            Direction::Down | Direction::Diagonal => self.r,
            Direction::Up => self.r + 1,
        }
    }

    /// `(-1)^h q^s (t_1⋯t_n)^ambient`.
    fn scalar(&self) -> (BigInt, Character) {
        let n = self.n;
        let mut c = vec![self.ambient; n + 1];
        c[n] = self.internal_shift;
        let sign = if self.homological_shift.rem_euclid(2) == 0 { 1 } else { -1 };
        (BigInt::from(sign), c)
    }

    pub fn diagonal(n: usize, r: usize) -> Self {
        KernelSpec {
            n,
            r,
            direction: Direction::Diagonal,
            a: 0,
            b: 0,
            internal_shift: 0,
            homological_shift: 0,
            ambient: 0,
        }
    }
}

/// Multiset difference `a \ b` together with `b \ a`.
fn cancel(a: &[Character], b: &[Character]) -> (Vec<Character>, Vec<Character>) {
    let mut counts: BTreeMap<&Character, i64> = BTreeMap::new();
    for x in a {
        *counts.entry(x).or_default() += 1;
    }
    for x in b {
        *counts.entry(x).or_default() -= 1;
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (x, c) in counts {
        for _ in 0..c.max(0) {
            left.push(x.clone());
        }
        for _ in 0..(-c).max(0) {
            right.push(x.clone());
        }
    }
    (left, right)
}

/// A summand `numerator / Π (1 - x^m)` with every `m` lexicographically
/// positive.
struct Fraction {
    numerator: MultiLaurent,
    denominator: BTreeMap<Character, usize>,
}

fn is_positive(m: &Character) -> bool {
    m.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

impl Fraction {
    fn new(mut numerator: MultiLaurent, factors: Vec<Character>) -> Self {
        let mut denominator: BTreeMap<Character, usize> = BTreeMap::new();
        for m in factors {
            if is_positive(&m) {
                *denominator.entry(m).or_default() += 1;
            } else {
                // 1/(1 - x^m) = -x^{-m} / (1 - x^{-m})
                let inv = inv_char(&m);
                numerator = numerator.times(&laurent_of_char(&inv)).negate();
                *denominator.entry(inv).or_default() += 1;
            }
        }
        Fraction { numerator, denominator }
    }
}

fn sum_fractions(arity: usize, terms: Vec<Fraction>) -> RationalFn {
    let mut lcm: BTreeMap<Character, usize> = BTreeMap::new();
    for t in &terms {
        for (m, &k) in &t.denominator {
            let e = lcm.entry(m.clone()).or_default();
            *e = (*e).max(k);
        }
    }
    let mut numerator = MultiLaurent::zero_with_arity(arity);
    for t in terms {
        let mut num = t.numerator;
        for (m, &k) in &lcm {
            let have = t.denominator.get(m).copied().unwrap_or(0);
            for _ in have..k {
                num = num.times(&one_minus(m));
            }
        }
        numerator = numerator.plus(&num);
    }
    let mut denominator = MultiLaurent::constant(arity, BigInt::from(1));
    if !numerator.is_zero() {
        for (m, &k) in &lcm {
            for _ in 0..k {
                denominator = denominator.times(&one_minus(m));
            }
        }
    }
    RationalFn::new(numerator, denominator).expect("product of nonzero binomials")
}

/// Apply the Fourier–Mukai transform with kernel `kernel` to `alpha`.
///
/// At each target fixed point the pushforward is evaluated by summing over
/// the fixed points of `W` above it; the result is reduced to a Laurent
/// polynomial, and `NotPolynomial` is returned if the poles fail to cancel.
pub fn fm_apply(kernel: &KernelSpec, alpha: &LocalizedClass) -> Result<LocalizedClass, KError> {
    let n = kernel.n;
    if alpha.r != kernel.source_rank() || alpha.n != n {
        return Err(KError::SourceMismatch { n, expected: kernel.source_rank(), found: alpha.r });
    }
    if kernel.target_rank() > n {
        return Err(KError::RankOutOfRange { n, r: kernel.r });
    }
    let source: BTreeMap<FixedPoint, MultiLaurent> = alpha
        .laurent_values()
        .map_err(|e| KError::NotPolynomial { context: "input class".to_string(), source: e })?;
    let (sign, scalar) = kernel.scalar();
    let targets = fixed_points(n, kernel.target_rank());
    let values: Result<Vec<(FixedPoint, MultiLaurent)>, KError> = targets
        .par_iter()
        .map(|tgt| {
            let ty = tangent_weights_y(tgt);
            let mut terms = Vec::new();
            let pairs: Vec<(FixedPoint, FixedPoint, FixedPoint)> = match kernel.direction {
                Direction::Diagonal => vec![(tgt.clone(), tgt.clone(), tgt.clone())],
                Direction::Up => tgt
                    .subset
                    .iter()
                    .map(|&a| {
                        let mut s = tgt.subset.clone();
                        s.remove(&a);
                        let small = FixedPoint::new(n, s);
                        (small.clone(), small, tgt.clone())
                    })
                    .collect(),
                Direction::Down => (1..=n)
                    .filter(|a| !tgt.contains(*a))
                    .map(|a| {
                        let mut s = tgt.subset.clone();
                        s.insert(a);
                        let big = FixedPoint::new(n, s);
                        (big.clone(), tgt.clone(), big)
                    })
                    .collect(),
            };
            for (src, small, big) in pairs {
                let Some(a_val) = source.get(&src) else { continue };
                if a_val.is_zero() {
                    continue;
                }
                let tw = if kernel.direction == Direction::Diagonal {
                    tangent_weights_y(&small)
                } else {
                    tangent_weights_w(&small, &big)
                };
                let (num_w, den_w) = cancel(&ty, &tw);
                let twist = mul_char(&det_char(n, &small.subset, kernel.a), &det_char(n, &big.subset, kernel.b));
                let mono = mul_char(&twist, &scalar);
                let mut numerator = a_val.times(&MultiLaurent::monomial(sign.clone(), mono));
                for w in &num_w {
                    numerator = numerator.times(&one_minus(&inv_char(w)));
                }
                let factors: Vec<Character> = den_w.iter().map(inv_char).collect();
                terms.push(Fraction::new(numerator, factors));
            }
            let f = sum_fractions(n + 1, terms);
            let v = f.reduce_to_laurent().map_err(|e| KError::NotPolynomial {
                context: format!("kernel {kernel:?} at fixed point {tgt}"),
                source: e,
            })?;
            Ok((tgt.clone(), v))
        })
        .collect();
    Ok(LocalizedClass::from_laurent(n, kernel.target_rank(), values?.into_iter().collect()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// The kernels of Cautis–Kamnitzer–Licata.
    Ckl,
    /// The Koszul-dual translation kernels.
    Frak,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ckl => "ckl",
            Family::Frak => "frak",
        })
    }
}

fn check_rank(n: usize, r: usize) -> Result<(), KError> {
    if r < n {
        Ok(())
    } else {
        Err(KError::RankOutOfRange { n, r })
    }
}

/// `O_W ⊗ det(V')^{n-2r-1} det(V)^{-(n-2r-1)} {n-r-1} [n-r-1]`.
pub fn kernel_e_ckl(n: usize, r: usize) -> KernelSpec {
    let m = n as i32 - 2 * r as i32 - 1;
    let s = n as i32 - r as i32 - 1;
    KernelSpec { n, r, direction: Direction::Up, a: -m, b: m, internal_shift: s, homological_shift: s, ambient: 0 }
}

/// `O_W ⊗ det(V') det(V) {r} [r]`, with the torus character `(t_1⋯t_n)^{-1}`.
pub fn kernel_f_ckl(n: usize, r: usize) -> KernelSpec {
    let s = r as i32;
    KernelSpec { n, r, direction: Direction::Down, a: 1, b: 1, internal_shift: s, homological_shift: s, ambient: -1 }
}

/// `O_W ⊗ det(V)^{-(n-r-1)} det(V')^{n-r} ⟨n-r-1⟩ [n-r-1]`.
pub fn kernel_e_frak(n: usize, r: usize) -> KernelSpec {
    let s = n as i32 - r as i32 - 1;
    KernelSpec {
        n,
        r,
        direction: Direction::Up,
        a: -s,
        b: n as i32 - r as i32,
        internal_shift: s,
        homological_shift: s,
        ambient: 0,
    }
}

/// `O_W ⊗ det(V)^{r+1} det(V')^{-r} ⟨r⟩ [r]`, with `(t_1⋯t_n)^{-1}`.
pub fn kernel_f_frak(n: usize, r: usize) -> KernelSpec {
    let s = r as i32;
    KernelSpec {
        n,
        r,
        direction: Direction::Down,
        a: s + 1,
        b: -s,
        internal_shift: s,
        homological_shift: s,
        ambient: -1,
    }
}

pub fn kernel_e(family: Family, n: usize, r: usize) -> KernelSpec {
    match family {
        Family::Ckl => kernel_e_ckl(n, r),
        Family::Frak => kernel_e_frak(n, r),
    }
}

pub fn kernel_f(family: Family, n: usize, r: usize) -> KernelSpec {
    match family {
        Family::Ckl => kernel_f_ckl(n, r),
        Family::Frak => kernel_f_frak(n, r),
    }
}

pub type KOp = LinearOp<FixedPoint, FixedPoint, MultiLaurent>;

/// The matrix of a kernel: column `S` holds the fixed-point values of the
/// image of the skyscraper class at `S`.
pub fn kernel_matrix(kernel: &KernelSpec) -> Result<KOp, KError> {
    let cols: Result<Vec<_>, KError> = fixed_points(kernel.n, kernel.source_rank())
        .into_par_iter()
        .map(|p| {
            let img = fm_apply(kernel, &skyscraper_class(&p))?;
            let vals = img.laurent_values().expect("fm_apply returns Laurent values");
            Ok((p, vals.into_iter().collect()))
        })
        .collect();
    Ok(LinearOp::from_columns(cols?))
}

pub fn op_e_ckl(n: usize, r: usize) -> Result<KOp, KError> {
    check_rank(n, r)?;
    kernel_matrix(&kernel_e_ckl(n, r))
}

pub fn op_f_ckl(n: usize, r: usize) -> Result<KOp, KError> {
    check_rank(n, r)?;
    kernel_matrix(&kernel_f_ckl(n, r))
}

pub fn op_e_frak(n: usize, r: usize) -> Result<KOp, KError> {
    check_rank(n, r)?;
    kernel_matrix(&kernel_e_frak(n, r))
}

pub fn op_f_frak(n: usize, r: usize) -> Result<KOp, KError> {
    check_rank(n, r)?;
    kernel_matrix(&kernel_f_frak(n, r))
}

/// `Θ_r = ⊗ det(V)^r`, diagonal on fixed points.
pub fn op_theta(n: usize, r: usize) -> KOp {
    LinearOp::from_columns(fixed_points(n, r).into_iter().map(|p| {
        let v = laurent_of_char(&det_char(n, &p.subset, r as i32));
        (p.clone(), [(p, v)].into_iter().collect())
    }))
}

fn first_difference(x: &KOp, y: &KOp, rows: &[FixedPoint], cols: &[FixedPoint]) -> Option<String> {
    for c in cols {
        for r in rows {
            let (a, b) = (x.entry(r, c), y.entry(r, c));
            if a != b {
                return Some(format!("entry ({r}, {c}): {a} vs {b}"));
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaReport {
    pub n: usize,
    pub r: usize,
    pub e_holds: bool,
    pub f_holds: bool,
    pub first_difference: Option<String>,
}

/// `Θ_{r+1} E_ckl = 𝔈 Θ_r` and `Θ_r F_ckl = 𝔉 Θ_{r+1}` as matrices.
pub fn verify_theta_intertwine(n: usize, r: usize) -> Result<ThetaReport, KError> {
    check_rank(n, r)?;
    let (lo, hi) = (fixed_points(n, r), fixed_points(n, r + 1));
    let e_lhs = op_e_ckl(n, r)?.then(&op_theta(n, r + 1));
    let e_rhs = op_theta(n, r).then(&op_e_frak(n, r)?);
    let f_lhs = op_f_ckl(n, r)?.then(&op_theta(n, r));
    let f_rhs = op_theta(n, r + 1).then(&op_f_frak(n, r)?);
    let de = first_difference(&e_lhs, &e_rhs, &hi, &lo);
    let df = first_difference(&f_lhs, &f_rhs, &lo, &hi);
    Ok(ThetaReport { n, r, e_holds: de.is_none(), f_holds: df.is_none(), first_difference: de.or(df) })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    pub n: usize,
    pub r: usize,
    pub family: Family,
    /// `[n - 2r]_q`.
    #[serde(serialize_with = "crate::report::as_string")]
    pub quantum_integer: LaurentScalar,
    /// `+1` or `-1` if `fe - ef = ε [n-2r]_q · Id`; `None` if the defect is
    /// not of that form. Both signs fit when `n = 2r`.
    pub epsilon: Option<i8>,
    pub is_scalar: bool,
    /// The same identity after `q = 1`.
    pub holds_at_q_one: bool,
    pub first_defect: Option<String>,
}

/// `F E - E F` applied to a class of rank `r`.
pub fn commutator_on(family: Family, alpha: &LocalizedClass) -> Result<LocalizedClass, KError> {
    let (n, r) = (alpha.n, alpha.r);
    let fe = if r < n {
        fm_apply(&kernel_f(family, n, r), &fm_apply(&kernel_e(family, n, r), alpha)?)?
    } else {
        LocalizedClass::zero(n, r)
    };
    let ef = if r > 0 {
        fm_apply(&kernel_e(family, n, r - 1), &fm_apply(&kernel_f(family, n, r - 1), alpha)?)?
    } else {
        LocalizedClass::zero(n, r)
    };
    Ok(fe.minus(&ef))
}

pub fn verify_commutator(n: usize, r: usize, family: Family) -> Result<CommutatorReport, KError> {
    if r > n {
        return Err(KError::RankOutOfRange { n, r });
    }
    let qi = quantum_integer(n as i64 - 2 * r as i64);
    let scalar = MultiLaurent::from_laurent_scalar(n + 1, n, &qi);
    let points = fixed_points(n, r);
    let results: Result<Vec<(LocalizedClass, LocalizedClass)>, KError> = points
        .par_iter()
        .map(|p| {
            let basis = skyscraper_class(p);
            Ok((commutator_on(family, &basis)?, basis))
        })
        .collect();
    let results = results?;
    let mut plus = true;
    let mut minus = true;
    let mut at_one_plus = true;
    let mut at_one_minus = true;
    let mut first_defect = None;
    for (defect, basis) in &results {
        let want = basis.scale(&scalar);
        let d = defect.laurent_values().expect("Laurent");
        let w = want.laurent_values().expect("Laurent");
        let neg_ok = d.iter().all(|(p, v)| *v == w[p].negate());
        let pos_ok = d == w;
        if !pos_ok && first_defect.is_none() {
            let p = d.keys().find(|p| d[*p] != w[*p]).expect("a differing point");
            first_defect = Some(format!("at {p}: got {} expected {}", d[p], w[p]));
        }
        plus &= pos_ok;
        minus &= neg_ok;
        let qi1 = BigInt::from(n as i64 - 2 * r as i64);
        let b = basis.laurent_values().expect("Laurent");
        let at_q_one = |sign: i64| {
            d.iter().all(|(p, v)| v.specialize_to_one(n) == b[p].specialize_to_one(n).scale(&(&qi1 * sign)))
        };
        at_one_plus &= at_q_one(1);
        at_one_minus &= at_q_one(-1);
    }
    let epsilon = match (plus, minus) {
        (true, _) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    };
    if epsilon == Some(-1) {
        first_defect = None;
    }
    Ok(CommutatorReport {
        n,
        r,
        family,
        quantum_integer: qi,
        epsilon,
        is_scalar: plus || minus,
        holds_at_q_one: at_one_plus || at_one_minus,
        first_defect,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PoleReport {
    pub n: usize,
    pub entries_checked: usize,
    pub failures: Vec<String>,
}

/// Apply every kernel to skyscraper and line-bundle classes, and every
/// `FE`, `EF` composite to skyscraper classes; every value must be Laurent.
pub fn pole_cancellation(n: usize) -> PoleReport {
    let mut rep = PoleReport { n, ..Default::default() };
    let mut record = |res: Result<LocalizedClass, KError>, what: String| match res {
        Ok(c) => rep.entries_checked += c.values.len(),
        Err(e) => rep.failures.push(format!("{what}: {e}")),
    };
    for r in 0..n {
        let mut kernels = vec![
            ("E_ckl", kernel_e_ckl(n, r)),
            ("F_ckl", kernel_f_ckl(n, r)),
            ("E_frak", kernel_e_frak(n, r)),
            ("F_frak", kernel_f_frak(n, r)),
        ];
        kernels.push(("diagonal", KernelSpec::diagonal(n, r)));
        for (name, k) in &kernels {
            let src = k.source_rank();
            for p in fixed_points(n, src) {
                record(fm_apply(k, &skyscraper_class(&p)), format!("{name}(n={n}, r={r}) on O_{p}"));
            }
            for a in -2..=2 {
                record(fm_apply(k, &line_bundle_class(n, src, a)), format!("{name}(n={n}, r={r}) on det^{a}"));
            }
        }
    }
    for family in [Family::Ckl, Family::Frak] {
        for r in 0..=n {
            for p in fixed_points(n, r) {
                record(commutator_on(family, &skyscraper_class(&p)), format!("FE - EF ({family}, n={n}, r={r}) on O_{p}"));
            }
        }
    }
    rep
}

pub fn kop_json(op: &KOp) -> Value {
    op.to_json()
}

/// Comparison of the four `n = 2` kernels listed on `T*P^1` with the
/// Koszul-dual family.
#[derive(Clone, Debug, Serialize)]
pub struct N2DictionaryReport {
    /// Exponent of the tautological line on the `T*P^1` side for
    /// `𝔈(-1), 𝔉(-1), 𝔈(1), 𝔉(1)` in the Koszul-dual family.
    pub frak_exponents: [i32; 4],
    /// The listed `O(k)` read as `L^k` and as `L^{-k}`.
    pub listed_as_tautological: [i32; 4],
    pub listed_as_dual: [i32; 4],
    /// A uniform difference `listed - frak`, if there is one.
    pub uniform_twist_tautological: Option<i32>,
    pub uniform_twist_dual: Option<i32>,
    /// `FE - EF` on the three weight spaces for the listed kernels, in each
    /// reading, as `epsilon` per weight space (`None`: not a scalar multiple
    /// of `[2 - 2r]`).
    pub listed_relation_tautological: Vec<Option<i8>>,
    pub listed_relation_dual: Vec<Option<i8>>,
}

fn listed_kernels(sign: i32) -> [KernelSpec; 4] {
    let n = 2;
    // E(-1): r = 0, line on V'; F(-1): r = 0, line on V'; E(1), F(1): r = 1, line on V.
    [
        KernelSpec { n, r: 0, direction: Direction::Up, a: 0, b: sign, internal_shift: 1, homological_shift: 0, ambient: 0 },
        KernelSpec { n, r: 0, direction: Direction::Down, a: 0, b: -sign, internal_shift: 0, homological_shift: 0, ambient: 0 },
        KernelSpec { n, r: 1, direction: Direction::Up, a: -sign, b: 0, internal_shift: 0, homological_shift: 0, ambient: 0 },
        KernelSpec { n, r: 1, direction: Direction::Down, a: sign, b: 0, internal_shift: 1, homological_shift: 0, ambient: 0 },
    ]
}

fn relation_signs(kernels: &[KernelSpec; 4]) -> Result<Vec<Option<i8>>, KError> {
    let n = 2;
    let mut out = Vec::new();
    for r in 0..=2usize {
        let qi = quantum_integer(n as i64 - 2 * r as i64);
        let scalar = MultiLaurent::from_laurent_scalar(n + 1, n, &qi);
        let (mut plus, mut minus) = (true, true);
        for p in fixed_points(n, r) {
            let basis = skyscraper_class(&p);
            let fe = if r < n { fm_apply(&kernels[2 * r + 1], &fm_apply(&kernels[2 * r], &basis)?)? } else { LocalizedClass::zero(n, r) };
            let ef = if r > 0 {
                fm_apply(&kernels[2 * (r - 1)], &fm_apply(&kernels[2 * (r - 1) + 1], &basis)?)?
            } else {
                LocalizedClass::zero(n, r)
            };
            let d = fe.minus(&ef).laurent_values().expect("Laurent");
            let w = basis.scale(&scalar).laurent_values().expect("Laurent");
            plus &= d == w;
            minus &= d.iter().all(|(p, v)| *v == w[p].negate());
        }
        out.push(if plus { Some(1) } else if minus { Some(-1) } else { None });
    }
    Ok(out)
}

pub fn n2_dictionary_report() -> Result<N2DictionaryReport, KError> {
    let n = 2;
    let frak_exponents = [kernel_e_frak(n, 0).b, kernel_f_frak(n, 0).b, kernel_e_frak(n, 1).a, kernel_f_frak(n, 1).a];
    let listed = [1, -1, -1, 1];
    let taut = listed;
    let dual = listed.map(|x| -x);
    let uniform = |l: [i32; 4]| {
        let d: BTreeSet<i32> = l.iter().zip(&frak_exponents).map(|(x, y)| x - y).collect();
        (d.len() == 1).then(|| *d.iter().next().unwrap())
    };
    Ok(N2DictionaryReport {
        frak_exponents,
        listed_as_tautological: taut,
        listed_as_dual: dual,
        uniform_twist_tautological: uniform(taut),
        uniform_twist_dual: uniform(dual),
        listed_relation_tautological: relation_signs(&listed_kernels(1))?,
        listed_relation_dual: relation_signs(&listed_kernels(-1))?,
    })
}

impl N2DictionaryReport {
    pub fn to_json(&self) -> Value {
        json!(self)
    }
}
