use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use catblocks::blockcomb::{
    binomial, casimir_separation_check, enumerate_block_weights, is_odd_prime, residue_class_sample,
    verify_sl2_relation, SeparationReport,
};
use catblocks::kgrass::{self, Family};
use catblocks::report::{failure, is_failure, tagged};
use catblocks::tensorrep::{matrix_json, n2_intertwiner_report, pcanonical_n2_rep};
use catblocks::zigzag::{bimodule_k_matrices, build_algebra_a, cartan_data, short_exact_sequences};
use catblocks::{quantum_integer, Ring, Weight};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn config<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

fn check_n_p(n: usize, p: u64) -> Result<(), ConfigError> {
    if n == 0 {
        return config("n must be at least 1");
    }
    if !is_odd_prime(p) {
        return config(format!("p = {p} is not an odd prime"));
    }
    if p <= n as u64 {
        return config(format!("p = {p} must exceed n = {n}"));
    }
    Ok(())
}

pub fn with_summary(command: &str, mut records: Vec<Value>) -> Vec<Value> {
    let failures = records.iter().filter(|r| is_failure(r)).count();
    records.push(json!({
        "kind": "summary",
        "command": command,
        "records": records.len(),
        "failures": failures,
        "status": if failures == 0 { "ok" } else { "failed" },
    }));
    records
}

fn case_records(w: &Weight, p: u64, r: Option<usize>) -> (Vec<Value>, Option<BTreeSet<usize>>) {
    match verify_sl2_relation(w, p, r) {
        Ok(rep) => {
            let mut rec = tagged("case", rep.to_json());
            rec["targets_consistent"] = json!(rep.targets_consistent);
            let mut out = vec![rec];
            if !rep.passed() {
                out.push(failure(
                    "sl2_relation",
                    json!({
                        "lambda": w.parts(),
                        "relation_holds": rep.relation_holds,
                        "atypical_pairing": rep.pairing_holds,
                        "targets_consistent": rep.targets_consistent,
                    }),
                ));
            }
            (out, Some(rep.block.marked.clone()))
        }
        Err(e) => (vec![failure("block_of", json!({ "lambda": w.parts(), "error": e.to_string() }))], None),
    }
}

pub fn verify_blocks(
    n: usize,
    p: u64,
    r: Option<usize>,
    max_part: Option<i64>,
    lambda: Option<Vec<i64>>,
) -> Result<Vec<Value>, ConfigError> {
    check_n_p(n, p)?;
    if let Some(r) = r.filter(|&r| r > n) {
        return config(format!("r = {r} exceeds n = {n}"));
    }
    if let Some(parts) = lambda {
        if parts.len() != n {
            return config(format!("--lambda has {} parts but n = {n}", parts.len()));
        }
        let w = Weight::new(parts).map_err(|e| ConfigError(e.to_string()))?;
        return Ok(case_records(&w, p, r).0);
    }
    let max = max_part.unwrap_or(3 * p as i64);
    let ranks: Vec<usize> = match r {
        Some(r) => vec![r],
        None => (0..=n).collect(),
    };
    let mut records = Vec::new();
    for r in ranks {
        let weights = enumerate_block_weights(n, p, r, max).map_err(|e| ConfigError(e.to_string()))?;
        let results: Vec<(Vec<Value>, Option<BTreeSet<usize>>)> =
            weights.par_iter().map(|w| case_records(w, p, Some(r))).collect();
        let mut marked = BTreeSet::new();
        for (recs, m) in results {
            records.extend(recs);
            marked.extend(m);
        }
        let expected = binomial(n, r);
        records.push(json!({
            "kind": "marked_sets",
            "n": n,
            "p": p,
            "r": r,
            "max_part": max,
            "weights": weights.len(),
            "count": marked.len(),
            "binomial": expected,
            "reached": marked.len() == expected,
        }));
        if marked.len() > expected {
            records.push(failure("marked_sets", json!({ "r": r, "count": marked.len(), "binomial": expected })));
        }
    }
    Ok(records)
}

pub fn casimir(n: usize, p: u64) -> Result<Vec<Value>, ConfigError> {
    check_n_p(n, p)?;
    let sample = residue_class_sample(n, p);
    let parts: Result<Vec<SeparationReport>, _> =
        sample.par_chunks(256).map(|c| casimir_separation_check(n, p, c)).collect();
    let parts = parts.map_err(|e| ConfigError(e.to_string()))?;
    let mut total = SeparationReport { n, p, ..Default::default() };
    for part in parts {
        total.weights_checked += part.weights_checked;
        total.pairs_checked += part.pairs_checked;
        total.counterexamples.extend(part.counterexamples);
    }
    let mut records = vec![json!({
        "kind": "separation",
        "n": n,
        "p": p,
        "weights_checked": total.weights_checked,
        "pairs_checked": total.pairs_checked,
        "counterexamples": total.counterexamples.len(),
    })];
    records.extend(total.counterexamples.iter().map(|c| failure("casimir_separation", json!(c))));
    Ok(records)
}

pub fn n2_suite(p: u64) -> Result<Vec<Value>, ConfigError> {
    check_n_p(2, p)?;
    let mut records = Vec::new();
    let a = match build_algebra_a() {
        Ok(a) => a,
        Err(e) => return Ok(vec![failure("algebra_a", e.to_string())]),
    };
    let assoc = a.associativity_failures();
    let unit = a.unit_acts_trivially();
    let orth = a.idempotents_orthogonal();
    records.push(json!({
        "kind": "algebra",
        "dim": a.dim(),
        "triples_checked": a.dim().pow(3),
        "associativity_failures": assoc,
        "unit_acts_trivially": unit,
        "idempotents_orthogonal": orth,
        "products_fixed_by_several_relations": a.multiply_covered().len(),
        "structure": a.structure_json(),
    }));
    if a.dim() != 8 || assoc != 0 || !unit || !orth {
        records.push(failure("algebra_a", json!({ "dim": a.dim(), "associativity_failures": assoc })));
    }

    let cd = cartan_data(&a);
    records.push(tagged("cartan", cd.to_json()));
    if cd.matrix != [[2, 2], [2, 2]] || !cd.radical_is_ideal || !cd.radical_cubed_zero {
        records.push(failure("cartan", cd.to_json()));
    }

    let ses = short_exact_sequences(&a);
    records.push(tagged("composition", ses.to_json()));
    if !ses.projective_sum_holds || !ses.verma_sum_holds {
        records.push(failure("composition", ses.to_json()));
    }

    let km = bimodule_k_matrices(&a);
    let assembled = km.assemble();
    let reference = pcanonical_n2_rep(p).map_err(|e| ConfigError(e.to_string()))?;
    let matches = assembled.e == reference.e && assembled.f == reference.f && assembled.h == reference.h;
    let comm = assembled.commutator();
    let diag = catblocks::exactalg::QMatrix::from_ints(4, 4, &[-2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2]);
    let mut rec = tagged("k_matrices", km.to_json());
    rec["basis"] = json!(assembled.basis);
    rec["e"] = matrix_json(&assembled.e);
    rec["f"] = matrix_json(&assembled.f);
    rec["ef_minus_fe"] = matrix_json(&comm);
    rec["matches_pcanonical"] = json!(matches);
    records.push(rec);
    if !matches {
        records.push(failure("k_matrices", "bimodule K-matrices differ from the p-canonical action"));
    }
    if comm != diag {
        records.push(failure("k_matrices", json!({ "ef_minus_fe": matrix_json(&comm) })));
    }

    let ir = n2_intertwiner_report(p).map_err(|e| ConfigError(e.to_string()))?;
    let mut rec = tagged("intertwiner", ir.to_json());
    rec["note"] = json!(
        "the unit-coefficient map w_-2 -> v00, w_0^1 -> v01 - v10, w_0^2 -> v01, w_2 -> v11 \
         does not intertwine the actions; the rescaled map does"
    );
    records.push(rec);
    if ir.basis.len() != 2 || ir.invertible.is_none() || !ir.rescaled_in_span || !ir.rescaled_invertible {
        records.push(failure("intertwiner", ir.to_json()));
    }
    Ok(records)
}

enum Job {
    Poles,
    Theta(usize),
    Commutator(usize, Family),
    Dictionary,
}

pub fn ktheory(n: usize, r: Option<usize>, allow_n5: bool) -> Result<Vec<Value>, ConfigError> {
    if n == 0 {
        return config("n must be at least 1");
    }
    if n >= 6 {
        return config(format!("n = {n} is beyond the supported range (n <= 5)"));
    }
    if n == 5 && !allow_n5 {
        return config("n = 5 is slow; pass --allow-n5 to run it");
    }
    if let Some(r) = r.filter(|&r| r > n) {
        return config(format!("r = {r} exceeds n = {n}"));
    }
    let ranks: Vec<usize> = match r {
        Some(r) => vec![r],
        None => (0..=n).collect(),
    };
    let mut jobs = vec![Job::Poles];
    jobs.extend(ranks.iter().filter(|&&r| r < n).map(|&r| Job::Theta(r)));
    for &r in &ranks {
        jobs.push(Job::Commutator(r, Family::Ckl));
        jobs.push(Job::Commutator(r, Family::Frak));
    }
    if n == 2 {
        jobs.push(Job::Dictionary);
    }
    let results: Vec<(Vec<Value>, Option<(usize, Option<i8>)>)> = jobs.par_iter().map(|j| run_job(n, j)).collect();
    let mut records = Vec::new();
    let mut signs = BTreeSet::new();
    for (recs, eps) in results {
        records.extend(recs);
        if let Some((r, e)) = eps {
            // when n = 2r the scalar is zero and fixes no sign
            if 2 * r != n {
                signs.insert(e);
            }
        }
    }
    let constant = signs.len() <= 1 && !signs.contains(&None);
    let epsilon = if constant { signs.iter().next().copied().flatten() } else { None };
    records.push(json!({ "kind": "epsilon", "n": n, "epsilon": epsilon, "constant": constant }));
    if !constant {
        records.push(failure("epsilon", json!({ "signs": signs.iter().collect::<Vec<_>>() })));
    }
    Ok(records)
}

fn run_job(n: usize, job: &Job) -> (Vec<Value>, Option<(usize, Option<i8>)>) {
    match *job {
        Job::Poles => {
            let rep = kgrass::pole_cancellation(n);
            let mut out = vec![json!({
                "kind": "pole_cancellation",
                "n": n,
                "entries_checked": rep.entries_checked,
                "failures": rep.failures.len(),
            })];
            out.extend(rep.failures.iter().map(|f| failure("NotPolynomial", f.as_str())));
            (out, None)
        }
        Job::Theta(r) => match kgrass::verify_theta_intertwine(n, r) {
            Ok(rep) => {
                let mut out = vec![tagged("theta", json!(rep))];
                if !(rep.e_holds && rep.f_holds) {
                    out.push(failure("theta_intertwine", json!(rep)));
                }
                (out, None)
            }
            Err(e) => (vec![failure("theta_intertwine", e.to_string())], None),
        },
        Job::Commutator(r, family) => match kgrass::verify_commutator(n, r, family) {
            Ok(rep) => {
                let mut rec = tagged("commutator", json!(rep));
                if let Some(e) = rep.epsilon {
                    let v = quantum_integer(n as i64 - 2 * r as i64);
                    let v = if e < 0 { v.negate() } else { v };
                    rec["fe_minus_ef"] = json!(v.to_string());
                }
                let mut out = vec![rec];
                if rep.epsilon.is_none() || !rep.holds_at_q_one {
                    out.push(failure("commutator", json!(rep)));
                }
                (out, Some((r, rep.epsilon)))
            }
            Err(e) => (vec![failure("commutator", e.to_string())], Some((r, None))),
        },
        Job::Dictionary => match kgrass::n2_dictionary_report() {
            Ok(rep) => {
                let mut rec = tagged("n2_kernel_dictionary", rep.to_json());
                rec["note"] = json!(dictionary_note(&rep));
                (vec![rec], None)
            }
            Err(e) => (vec![failure("n2_kernel_dictionary", e.to_string())], None),
        },
    }
}

fn dictionary_note(rep: &kgrass::N2DictionaryReport) -> String {
    let twist = match rep.uniform_twist_tautological {
        Some(t) => format!("reading O(k) as L^k the listed kernels are the dual family twisted by L^{t}"),
        None => "reading O(k) as L^k the listed kernels are not a uniform twist of the dual family".to_string(),
    };
    let literal = if rep.listed_relation_tautological.iter().all(|e| e.is_some()) {
        "taken literally they satisfy the relation on every weight space"
    } else {
        "taken literally they do not satisfy the relation on every weight space"
    };
    format!(
        "{twist}; {literal}; the relation [1]{{-1}} + [-1]{{1}} decategorifies to -(q + q^-1) under [1] -> -1, \
         the computed fe - ef at r = 0 is q + q^-1"
    )
}
