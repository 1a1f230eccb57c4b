//! Weights of `sl_n` modulo `p`, the singular blocks `μ_r`, marked rows and
//! the translation functors `E`, `F` on classes of Weyl modules.
//!
//! A weight is stored as an `n`-tuple of integers but compared modulo the
//! all-ones vector. Residues are taken of `λ + ρ̂` with `ρ̂ = (n-1, ..., 1, 0)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactalg::FormalSum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("{parts:?} is not a dominant weight")]
    NotDominant { parts: Vec<i64> },
    #[error("p = {p} must be an odd prime greater than n = {n}")]
    InvalidPrime { p: u64, n: usize },
    #[error("weight {lambda} lies in no sl2 block mod {p} (residues {residues:?})")]
    NotInSl2Block { lambda: String, p: u64, residues: Vec<u64> },
    #[error("weight {lambda} has constant residues mod {p}; a rank hint of 0 or n is required")]
    AmbiguousRank { lambda: String, p: u64 },
    #[error("rank hint {hint} is invalid for constant residues (must be 0 or {n})")]
    InvalidHint { hint: usize, n: usize },
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64, n: usize) -> Result<(), BlockError> {
    if is_odd_prime(p) && p > n as u64 {
        Ok(())
    } else {
        Err(BlockError::InvalidPrime { p, n })
    }
}

/// A dominant integral weight `λ_1 ≥ ... ≥ λ_n`.
///
/// Equality, ordering and hashing only see the consecutive differences, so
/// `(2,1)` and `(3,2)` are the same weight. The stored parts are kept for
/// display.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct Weight {
    parts: Vec<i64>,
}

impl Weight {
    pub fn new(parts: Vec<i64>) -> Result<Self, BlockError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(BlockError::NotDominant { parts });
        }
        Ok(Weight { parts })
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    fn differences(&self) -> impl Iterator<Item = i64> + '_ {
        self.parts.windows(2).map(|w| w[0] - w[1])
    }

    /// Shift by the all-ones vector until the last part is positive.
    pub fn normalized(&self) -> Weight {
        let last = self.parts.last().copied().unwrap_or(1);
        if last >= 1 {
            return self.clone();
        }
        let s = 1 - last;
        Weight { parts: self.parts.iter().map(|x| x + s).collect() }
    }

    /// `λ + e_i` (rows are 1-based). Not checked for dominance.
    fn plus_row(&self, i: usize, delta: i64) -> Vec<i64> {
        let mut v = self.parts.clone();
        v[i - 1] += delta;
        v
    }

    /// Residues of `λ + ρ̂` mod `p`.
    pub fn residues(&self, p: u64) -> Vec<u64> {
        let rho = RhoShift::new(self.n());
        self.parts
            .iter()
            .zip(&rho.rho_hat)
            .map(|(l, r)| (l + r).mod_floor(&(p as i64)) as u64)
            .collect()
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.differences().eq(other.differences())
    }
}

impl Eq for Weight {}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n().cmp(&other.n()).then_with(|| self.differences().cmp(other.differences()))
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Weight {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n().hash(state);
        for d in self.differences() {
            d.hash(state);
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `ρ̂ = (n-1, n-2, ..., 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoShift {
    pub rho_hat: Vec<i64>,
}

impl RhoShift {
    pub fn new(n: usize) -> Self {
        RhoShift { rho_hat: (0..n as i64).rev().collect() }
    }
}

/// The block `μ_r` containing a weight, together with its marked rows.
///
/// Rows in `marked` have residue `base + 1`, all other rows residue `base`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockData {
    pub p: u64,
    pub r: usize,
    pub marked: BTreeSet<usize>,
    pub base: u64,
}

pub fn block_of(lambda: &Weight, p: u64, r_hint: Option<usize>) -> Result<BlockData, BlockError> {
    let n = lambda.n();
    check_prime(p, n)?;
    let res = lambda.residues(p);
    let values: BTreeSet<u64> = res.iter().copied().collect();
    let not_in_block =
        || BlockError::NotInSl2Block { lambda: lambda.to_string(), p, residues: res.clone() };
    match values.len() {
        1 => {
            let v = res[0];
            match r_hint {
                None => Err(BlockError::AmbiguousRank { lambda: lambda.to_string(), p }),
                Some(0) => Ok(BlockData { p, r: 0, marked: BTreeSet::new(), base: v }),
                Some(h) if h == n => {
                    Ok(BlockData { p, r: n, marked: (1..=n).collect(), base: (v + p - 1) % p })
                }
                Some(hint) => Err(BlockError::InvalidHint { hint, n }),
            }
        }
        2 => {
            let mut it = values.iter().copied();
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            let base = if (a + 1) % p == b {
                a
            } else if (b + 1) % p == a {
                b
            } else {
                return Err(not_in_block());
            };
            let top = (base + 1) % p;
            let marked: BTreeSet<usize> =
                res.iter().enumerate().filter(|(_, &x)| x == top).map(|(i, _)| i + 1).collect();
            Ok(BlockData { p, r: marked.len(), marked, base })
        }
        _ => Err(not_in_block()),
    }
}

/// Rows where a box can be added (unmarked) or removed (marked) keeping the
/// weight dominant. Row `n` can always lose a box, since weights are taken
/// mod the all-ones vector.
pub fn typical_rows(lambda: &Weight, bd: &BlockData) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let parts = lambda.parts();
    let n = parts.len();
    let addable = (1..=n)
        .filter(|i| !bd.marked.contains(i))
        .filter(|&i| i == 1 || parts[i - 2] > parts[i - 1])
        .collect();
    let removable = (1..=n)
        .filter(|i| bd.marked.contains(i))
        .filter(|&i| i == n || parts[i - 1] > parts[i])
        .collect();
    (addable, removable)
}

pub fn translate_e(lambda: &Weight, bd: &BlockData) -> FormalSum<Weight, BigInt> {
    let (addable, _) = typical_rows(lambda, bd);
    addable.into_iter().map(|i| (Weight { parts: lambda.plus_row(i, 1) }, BigInt::from(1))).collect()
}

pub fn translate_f(lambda: &Weight, bd: &BlockData) -> FormalSum<Weight, BigInt> {
    let (_, removable) = typical_rows(lambda, bd);
    removable.into_iter().map(|i| (Weight { parts: lambda.plus_row(i, -1) }, BigInt::from(1))).collect()
}

/// Atypical marked rows `i` correspond bijectively to atypical unmarked rows
/// `i + 1`.
pub fn atypical_pairing_check(lambda: &Weight, bd: &BlockData) -> bool {
    let n = lambda.n();
    let (addable, removable) = typical_rows(lambda, bd);
    let atyp_marked: BTreeSet<usize> = bd.marked.difference(&removable).copied().collect();
    let unmarked: BTreeSet<usize> = (1..=n).filter(|i| !bd.marked.contains(i)).collect();
    let atyp_unmarked: BTreeSet<usize> = unmarked.difference(&addable).copied().collect();
    let image: BTreeSet<usize> = atyp_marked.iter().map(|i| i + 1).collect();
    image == atyp_unmarked
}

/// Outcome of comparing `FE + r` with `EF + (n - r)` on one Weyl class.
#[derive(Clone, Debug)]
pub struct Sl2Report {
    pub lambda: Weight,
    pub block: BlockData,
    pub e_image: FormalSum<Weight, BigInt>,
    pub f_image: FormalSum<Weight, BigInt>,
    pub fe: FormalSum<Weight, BigInt>,
    pub ef: FormalSum<Weight, BigInt>,
    pub relation_holds: bool,
    pub c1: i64,
    pub c2: i64,
    pub q: Vec<Weight>,
    pub pairing_holds: bool,
    /// `E` terms land in rank `r+1` with marks `S ∪ {i}`, `F` terms in rank
    /// `r-1` with marks `S \ {i}`.
    pub targets_consistent: bool,
}

impl Sl2Report {
    pub fn to_json(&self) -> Value {
        let weights = |s: &FormalSum<Weight, BigInt>| -> Vec<Value> {
            s.iter()
                .map(|(w, c)| {
                    if *c == BigInt::from(1) {
                        json!(w.parts())
                    } else {
                        json!({ "weight": w.parts(), "coeff": c.to_string() })
                    }
                })
                .collect()
        };
        json!({
            "lambda": self.lambda.parts(),
            "p": self.block.p,
            "r": self.block.r,
            "marked": self.block.marked,
            "E": weights(&self.e_image),
            "F": weights(&self.f_image),
            "relation_holds": self.relation_holds,
            "c1": self.c1,
            "c2": self.c2,
            "Q": self.q.iter().map(|w| json!(w.parts())).collect::<Vec<_>>(),
            "atypical_pairing": self.pairing_holds,
        })
    }

    pub fn passed(&self) -> bool {
        self.relation_holds && self.pairing_holds && self.targets_consistent
    }
}

fn hint_for(rank: usize) -> Option<usize> {
    Some(rank)
}

fn apply_e_to_sum(
    sum: &FormalSum<Weight, BigInt>,
    rank: usize,
    p: u64,
) -> Result<FormalSum<Weight, BigInt>, BlockError> {
    let mut out = FormalSum::zero();
    for (w, c) in sum.iter() {
        let bd = block_of(w, p, hint_for(rank))?;
        out = out.plus(&translate_e(w, &bd).scale(c));
    }
    Ok(out)
}

fn apply_f_to_sum(
    sum: &FormalSum<Weight, BigInt>,
    rank: usize,
    p: u64,
) -> Result<FormalSum<Weight, BigInt>, BlockError> {
    let mut out = FormalSum::zero();
    for (w, c) in sum.iter() {
        let bd = block_of(w, p, hint_for(rank))?;
        out = out.plus(&translate_f(w, &bd).scale(c));
    }
    Ok(out)
}

fn targets_consistent(l: &Weight, bd: &BlockData) -> Result<bool, BlockError> {
    let (addable, removable) = typical_rows(l, bd);
    for i in addable {
        let w = Weight { parts: l.plus_row(i, 1) };
        let t = block_of(&w, bd.p, Some(bd.r + 1))?;
        let mut expect = bd.marked.clone();
        expect.insert(i);
        if t.r != bd.r + 1 || t.marked != expect {
            return Ok(false);
        }
    }
    for i in removable {
        let w = Weight { parts: l.plus_row(i, -1) };
        let t = block_of(&w, bd.p, Some(bd.r - 1))?;
        let mut expect = bd.marked.clone();
        expect.remove(&i);
        if t.r != bd.r - 1 || t.marked != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_sl2_relation(
    lambda: &Weight,
    p: u64,
    r_hint: Option<usize>,
) -> Result<Sl2Report, BlockError> {
    let n = lambda.n();
    let bd = block_of(lambda, p, r_hint)?;
    let r = bd.r;
    let e_image = translate_e(lambda, &bd);
    let f_image = translate_f(lambda, &bd);
    let fe = apply_f_to_sum(&e_image, r + 1, p)?;
    let ef = apply_e_to_sum(&f_image, r.saturating_sub(1), p)?;
    let one = FormalSum::basis(lambda.clone());
    let lhs = fe.plus(&one.scale(&BigInt::from(r)));
    let rhs = ef.plus(&one.scale(&BigInt::from(n - r)));
    let c1 = fe.coeff(lambda).to_i64().expect("small coefficient");
    let c2 = ef.coeff(lambda).to_i64().expect("small coefficient");
    let q: Vec<Weight> = fe.labels().filter(|w| *w != lambda).cloned().collect();
    Ok(Sl2Report {
        lambda: lambda.clone(),
        pairing_holds: atypical_pairing_check(lambda, &bd),
        targets_consistent: targets_consistent(lambda, &bd)?,
        block: bd,
        e_image,
        f_image,
        relation_holds: lhs == rhs,
        fe,
        ef,
        c1,
        c2,
        q,
    })
}

/// The scalar `b_λ` by which the Casimir acts on `Z(λ)`, and the values
/// `c_{λ,i}` in `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CasimirValue {
    #[serde(serialize_with = "crate::report::as_string")]
    pub b: BigInt,
    pub c: BTreeMap<usize, u64>,
}

fn casimir_b(lambda: &[i64]) -> BigInt {
    let mut b = BigInt::from(0);
    for (i, &x) in lambda.iter().enumerate() {
        b += BigInt::from(x) * BigInt::from(x);
        for &y in &lambda[i + 1..] {
            b += BigInt::from(x - y);
        }
    }
    b
}

pub fn casimir(lambda: &[i64], p: u64) -> Result<CasimirValue, BlockError> {
    if !is_odd_prime(p) {
        return Err(BlockError::InvalidPrime { p, n: lambda.len() });
    }
    let n = lambda.len();
    let b = casimir_b(lambda);
    let mut e1 = vec![0; n];
    if n > 0 {
        e1[0] = 1;
    }
    let b_e1 = casimir_b(&e1);
    let pb = BigInt::from(p);
    let half = BigInt::from((p + 1) / 2);
    let mut c = BTreeMap::new();
    for i in 0..n {
        let mut shifted = lambda.to_vec();
        shifted[i] += 1;
        let diff = casimir_b(&shifted) - &b - &b_e1;
        let v = (diff * &half).mod_floor(&pb);
        c.insert(i + 1, v.to_u64().expect("residue fits"));
    }
    Ok(CasimirValue { b, c })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationCounterexample {
    pub lambda: Vec<i64>,
    pub i: usize,
    pub j: usize,
    pub c_equal: bool,
    pub orbit_equal: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SeparationReport {
    pub n: usize,
    pub p: u64,
    pub weights_checked: usize,
    pub pairs_checked: usize,
    pub counterexamples: Vec<SeparationCounterexample>,
}

fn shifted_residue_multiset(lambda: &[i64], row: usize, p: u64) -> Vec<u64> {
    let n = lambda.len();
    let mut v: Vec<u64> = lambda
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let bump = if k == row { 1 } else { 0 };
            (x + bump + (n - 1 - k) as i64).mod_floor(&(p as i64)) as u64
        })
        .collect();
    v.sort_unstable();
    v
}

fn same_up_to_shift(a: &[u64], b: &[u64], p: u64) -> bool {
    (0..p).any(|s| {
        let mut t: Vec<u64> = a.iter().map(|x| (x + s) % p).collect();
        t.sort_unstable();
        t == b
    })
}

/// `c_{λ,i} = c_{λ,j}` exactly when `λ + e_i` and `λ + e_j` are linked.
pub fn casimir_separation_check(
    n: usize,
    p: u64,
    sample: &[Vec<i64>],
) -> Result<SeparationReport, BlockError> {
    if !is_odd_prime(p) {
        return Err(BlockError::InvalidPrime { p, n });
    }
    let mut rep = SeparationReport { n, p, ..Default::default() };
    for lambda in sample {
        assert_eq!(lambda.len(), n, "sample weight of wrong length");
        let cv = casimir(lambda, p)?;
        let multisets: Vec<Vec<u64>> = (0..n).map(|i| shifted_residue_multiset(lambda, i, p)).collect();
        rep.weights_checked += 1;
        for i in 0..n {
            for j in i + 1..n {
                rep.pairs_checked += 1;
                let c_equal = cv.c[&(i + 1)] == cv.c[&(j + 1)];
                let orbit_equal = same_up_to_shift(&multisets[i], &multisets[j], p);
                if c_equal != orbit_equal {
                    rep.counterexamples.push(SeparationCounterexample {
                        lambda: lambda.clone(),
                        i: i + 1,
                        j: j + 1,
                        c_equal,
                        orbit_equal,
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// Every integer `n`-tuple with entries in `[0, p)`.
pub fn residue_class_sample(n: usize, p: u64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p as i64).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Dominant weights with parts in `[0, max]`.
pub fn dominant_weights(n: usize, max_part: i64) -> Vec<Weight> {
    dominant_tuples(n, 0, max_part, false)
}

/// Dominant weights with parts in `[0, max]` and last part 0, one per class
/// mod the all-ones vector.
pub fn dominant_representatives(n: usize, max_part: i64) -> Vec<Weight> {
    dominant_tuples(n, 0, max_part, true)
}

fn dominant_tuples(n: usize, low: i64, max: i64, pin_last: bool) -> Vec<Weight> {
    fn go(n: usize, low: i64, upper: i64, pin_last: bool, acc: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if acc.len() == n {
            out.push(Weight { parts: acc.clone() });
            return;
        }
        if pin_last && acc.len() == n - 1 {
            acc.push(low);
            go(n, low, upper, pin_last, acc, out);
            acc.pop();
            return;
        }
        for x in (low..=upper).rev() {
            acc.push(x);
            go(n, low, x, pin_last, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 || max < low {
        return out;
    }
    go(n, low, max, pin_last, &mut Vec::new(), &mut out);
    out
}

fn in_block(w: &Weight, p: u64, r: usize) -> bool {
    matches!(block_of(w, p, Some(r)), Ok(bd) if bd.r == r)
}

/// Every dominant weight in block `μ_r` with parts in `[0, max]`.
pub fn enumerate_block_weights(n: usize, p: u64, r: usize, max_part: i64) -> Result<Vec<Weight>, BlockError> {
    check_prime(p, n)?;
    Ok(dominant_weights(n, max_part).into_iter().filter(|w| in_block(w, p, r)).collect())
}

/// One weight per class mod `𝟙` in block `μ_r`, with last part 0 and parts
/// in `[0, max]`.
pub fn enumerate_block_classes(n: usize, p: u64, r: usize, max_part: i64) -> Result<Vec<Weight>, BlockError> {
    check_prime(p, n)?;
    Ok(dominant_representatives(n, max_part).into_iter().filter(|w| in_block(w, p, r)).collect())
}

/// `C(n, k)` as an integer.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
