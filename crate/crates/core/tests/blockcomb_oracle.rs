//! Brute-force model of translation functors on Weyl-module classes:
//! tensor with the standard representation (or its dual), keep the dominant
//! summands `λ ± e_i`, and project to a block by comparing residue multisets
//! of `λ + ρ̂` mod `p`.

use std::collections::{BTreeMap, BTreeSet};

use catblocks::blockcomb::{
    atypical_pairing_check, binomial, block_of, enumerate_block_classes, enumerate_block_weights,
    translate_e, translate_f, verify_sl2_relation,
};
use catblocks::Weight;
use proptest::prelude::*;
use rayon::prelude::*;

type Parts = Vec<i64>;

fn residues(parts: &[i64], p: i64) -> Vec<i64> {
    let n = parts.len() as i64;
    parts.iter().enumerate().map(|(k, x)| (x + n - 1 - k as i64).rem_euclid(p)).collect()
}

fn dominant(parts: &[i64]) -> bool {
    parts.windows(2).all(|w| w[0] >= w[1])
}

/// `(base, marked rows)` with residues in `{base, base + 1}`.
fn oracle_block(parts: &[i64], p: i64, hint: usize) -> Option<(i64, BTreeSet<usize>)> {
    let res = residues(parts, p);
    let n = parts.len();
    let vals: BTreeSet<i64> = res.iter().copied().collect();
    let vals: Vec<i64> = vals.into_iter().collect();
    match vals.len() {
        1 if hint == 0 => Some((vals[0], BTreeSet::new())),
        1 if hint == n => Some(((vals[0] - 1).rem_euclid(p), (1..=n).collect())),
        2 => {
            let (a, b) = (vals[0], vals[1]);
            let top = if (a + 1) % p == b {
                b
            } else if (b + 1) % p == a {
                a
            } else {
                return None;
            };
            let base = (top - 1).rem_euclid(p);
            Some((base, res.iter().enumerate().filter(|(_, &x)| x == top).map(|(i, _)| i + 1).collect()))
        }
        _ => None,
    }
}

fn block_multiset(base: i64, r: usize, n: usize, p: i64) -> Vec<i64> {
    let mut v: Vec<i64> = std::iter::repeat((base + 1) % p).take(r).chain(std::iter::repeat(base).take(n - r)).collect();
    v.sort();
    v
}

/// Summands of `λ ⊗ V` (`delta = 1`) or `λ ⊗ V*` (`delta = -1`) landing in
/// the block with the given base and rank.
fn oracle_translate(parts: &[i64], delta: i64, base: i64, target_rank: Option<usize>, p: i64) -> Vec<Parts> {
    let n = parts.len();
    let Some(tr) = target_rank.filter(|&t| t <= n) else { return vec![] };
    let want = block_multiset(base, tr, n, p);
    let mut out = Vec::new();
    for i in 0..n {
        let mut mu = parts.to_vec();
        mu[i] += delta;
        if !dominant(&mu) {
            continue;
        }
        let mut res = residues(&mu, p);
        res.sort();
        if res == want {
            out.push(mu);
        }
    }
    out
}

fn oracle_e(parts: &[i64], base: i64, r: usize, p: i64) -> Vec<Parts> {
    oracle_translate(parts, 1, base, Some(r + 1), p)
}

fn oracle_f(parts: &[i64], base: i64, r: usize, p: i64) -> Vec<Parts> {
    oracle_translate(parts, -1, base, r.checked_sub(1), p)
}

/// Multiplicities in `FE(λ)` and `EF(λ)`.
fn oracle_fe_ef(parts: &[i64], base: i64, r: usize, p: i64) -> (BTreeMap<Parts, i64>, BTreeMap<Parts, i64>) {
    let mut fe = BTreeMap::new();
    for mu in oracle_e(parts, base, r, p) {
        for nu in oracle_f(&mu, base, r + 1, p) {
            *fe.entry(nu).or_insert(0) += 1;
        }
    }
    let mut ef = BTreeMap::new();
    for mu in oracle_f(parts, base, r, p) {
        for nu in oracle_e(&mu, base, r - 1, p) {
            *ef.entry(nu).or_insert(0) += 1;
        }
    }
    (fe, ef)
}

fn weights(v: &[Parts]) -> BTreeSet<Weight> {
    v.iter().map(|x| Weight::new(x.clone()).unwrap()).collect()
}

fn all_dominant(n: usize, max: i64) -> Vec<Parts> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Parts| {
                let hi = v.last().copied().unwrap_or(max);
                (0..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Compare every library output on one weight with the oracle.
fn check_weight(parts: &[i64], p: u64, r: usize) -> Result<(), String> {
    let n = parts.len();
    let Some((base, marked)) = oracle_block(parts, p as i64, r) else { return Ok(()) };
    if marked.len() != r {
        return Ok(());
    }
    let w = Weight::new(parts.to_vec()).unwrap();
    let bd = block_of(&w, p, Some(r)).map_err(|e| format!("{parts:?}: {e}"))?;
    if bd.r != r || bd.marked != marked || bd.base as i64 != base {
        return Err(format!("{parts:?} p={p}: block {bd:?} vs oracle ({base}, {marked:?})"));
    }
    let e_lib: BTreeSet<Weight> = translate_e(&w, &bd).labels().cloned().collect();
    let f_lib: BTreeSet<Weight> = translate_f(&w, &bd).labels().cloned().collect();
    let e_or = oracle_e(parts, base, r, p as i64);
    let f_or = oracle_f(parts, base, r, p as i64);
    if e_lib != weights(&e_or) || f_lib != weights(&f_or) {
        return Err(format!("{parts:?} p={p}: E {e_lib:?} vs {e_or:?}; F {f_lib:?} vs {f_or:?}"));
    }
    let rep = verify_sl2_relation(&w, p, Some(r)).map_err(|e| e.to_string())?;
    let (fe, ef) = oracle_fe_ef(parts, base, r, p as i64);
    let me = parts.to_vec();
    let c1 = fe.get(&me).copied().unwrap_or(0);
    let c2 = ef.get(&me).copied().unwrap_or(0);
    // FE + r = EF + (n - r)
    let mut lhs = fe.clone();
    *lhs.entry(me.clone()).or_insert(0) += r as i64;
    let mut rhs = ef.clone();
    *rhs.entry(me.clone()).or_insert(0) += (n - r) as i64;
    lhs.retain(|_, c| *c != 0);
    rhs.retain(|_, c| *c != 0);
    let oracle_holds = lhs == rhs;
    let q_or: BTreeSet<Weight> = weights(&fe.keys().filter(|k| **k != me).cloned().collect::<Vec<_>>());
    let q_lib: BTreeSet<Weight> = rep.q.iter().cloned().collect();
    if !oracle_holds || !rep.relation_holds || rep.c1 != c1 || rep.c2 != c2 || q_lib != q_or {
        return Err(format!(
            "{parts:?} p={p} r={r}: oracle holds={oracle_holds} c1={c1} c2={c2}; library holds={} c1={} c2={}",
            rep.relation_holds, rep.c1, rep.c2
        ));
    }
    if !rep.pairing_holds || !atypical_pairing_check(&w, &bd) || !rep.targets_consistent {
        return Err(format!("{parts:?} p={p} r={r}: pairing or target check failed"));
    }
    if rep.c1 + r as i64 != rep.c2 + (n - r) as i64 {
        return Err(format!("{parts:?}: counting identity fails"));
    }
    Ok(())
}

#[test]
fn oracle_agrees_on_small_sweep() {
    let cases: Vec<(usize, u64)> = vec![(2, 5), (2, 7), (3, 5), (3, 7), (4, 5), (4, 7)];
    let failures: Vec<String> = cases
        .par_iter()
        .flat_map(|&(n, p)| {
            all_dominant(n, 14)
                .into_iter()
                .flat_map(move |parts| (0..=n).map(move |r| check_weight(&parts, p, r)))
                .filter_map(Result::err)
                .collect::<Vec<_>>()
        })
        .collect();
    assert!(failures.is_empty(), "{} failures, first: {}", failures.len(), failures[0]);
}

#[test]
fn enumeration_matches_oracle_classification() {
    for (n, p) in [(2u64, 5u64), (3, 5), (3, 7), (4, 7)] {
        let n = n as usize;
        for r in 0..=n {
            let lib: Vec<Parts> = enumerate_block_weights(n, p, r, 12).unwrap().iter().map(|w| w.parts().to_vec()).collect();
            let mut ours: Vec<Parts> = all_dominant(n, 12)
                .into_iter()
                .filter(|x| oracle_block(x, p as i64, r).is_some_and(|(_, m)| m.len() == r))
                .collect();
            let mut lib_sorted = lib.clone();
            lib_sorted.sort();
            ours.sort();
            assert_eq!(lib_sorted, ours, "n={n} p={p} r={r}");
        }
    }
}

#[test]
fn full_corpus_relation_and_targets() {
    // n ∈ {2,3,4,5}, p ∈ {5,7,11,13}, p > n, parts ≤ 25
    let mut cases = Vec::new();
    for n in 2..=5usize {
        for p in [5u64, 7, 11, 13] {
            if p > n as u64 {
                for r in 0..=n {
                    cases.push((n, p, r));
                }
            }
        }
    }
    let bad: Vec<String> = cases
        .par_iter()
        .flat_map(|&(n, p, r)| {
            enumerate_block_weights(n, p, r, 25)
                .unwrap()
                .into_par_iter()
                .filter_map(move |w| match verify_sl2_relation(&w, p, Some(r)) {
                    Ok(rep) if rep.passed() && rep.c1 + r as i64 == rep.c2 + (n - r) as i64 => None,
                    Ok(_) => Some(format!("{w} p={p} r={r}")),
                    Err(e) => Some(format!("{w} p={p} r={r}: {e}")),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn marked_sets_grow_to_binomial() {
    for (n, p) in [(2usize, 5u64), (2, 7), (3, 5), (3, 7), (4, 5), (4, 7)] {
        for r in 0..=n {
            let mut last = 0;
            // residues depend only on λ_k - λ_{k+1} mod p, so differences
            // below p realize every marked set
            let top = ((n - 1) * (p as usize - 1)) as i64;
            for max in [0, top / 3, 2 * top / 3, top] {
                let sets: BTreeSet<BTreeSet<usize>> = enumerate_block_classes(n, p, r, max)
                    .unwrap()
                    .iter()
                    .map(|w| block_of(w, p, Some(r)).unwrap().marked)
                    .collect();
                assert!(sets.len() >= last && sets.len() <= binomial(n, r));
                last = sets.len();
            }
            assert_eq!(last, binomial(n, r), "n={n} p={p} r={r}");
        }
    }
}

fn weight_strategy() -> impl Strategy<Value = (Parts, u64)> {
    (2usize..=5, prop::sample::select(vec![7u64, 11, 13]))
        .prop_flat_map(|(n, p)| (prop::collection::vec(0i64..=6, n), Just(p)))
        .prop_map(|(diffs, p)| {
            // build a dominant weight from nonnegative differences
            let mut parts = vec![0; diffs.len()];
            for k in (0..diffs.len().saturating_sub(1)).rev() {
                parts[k] = parts[k + 1] + diffs[k];
            }
            (parts, p)
        })
}

fn block_biased_strategy() -> impl Strategy<Value = (Parts, u64)> {
    // choose a base residue and marked rows, then solve for the parts
    (2usize..=5, prop::sample::select(vec![7u64, 11, 13]))
        .prop_flat_map(|(n, p)| {
            (
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(0i64..2, n),
                Just(p),
                0..p as i64,
            )
        })
        .prop_map(|(marked, lift, p, base)| {
            let n = marked.len();
            let p_i = p as i64;
            let target = |k: usize| base + marked[k] as i64;
            let mut parts = vec![0; n];
            parts[n - 1] = target(n - 1).rem_euclid(p_i) + p_i * lift[n - 1];
            for k in (0..n - 1).rev() {
                let d = (target(k) - target(k + 1) - 1).rem_euclid(p_i);
                parts[k] = parts[k + 1] + d + p_i * lift[k];
            }
            (parts, p)
        })
}

proptest! {
    #[test]
    fn random_weights_agree_with_oracle((parts, p) in weight_strategy()) {
        for r in 0..=parts.len() {
            prop_assert!(check_weight(&parts, p, r).is_ok(), "{:?}", check_weight(&parts, p, r));
        }
    }

    #[test]
    fn random_block_weights_agree_with_oracle((parts, p) in block_biased_strategy()) {
        let n = parts.len();
        let mut found = false;
        for r in 0..=n {
            if oracle_block(&parts, p as i64, r).is_some_and(|(_, m)| m.len() == r) {
                found = true;
            }
            let res = check_weight(&parts, p, r);
            prop_assert!(res.is_ok(), "{:?}", res);
        }
        prop_assert!(found);
    }
}
