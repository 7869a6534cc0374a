//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use bdscore::{Dataset, Network, PriorSpec, VarSet, Variable};
use rand::Rng;

/// Lanczos approximation (g = 7, nine coefficients) with reflection.
pub fn lanczos_ln_gamma(z: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - lanczos_ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = C[0];
    for (k, &c) in C.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln Γ(n+b) - ln Γ(b)` as an explicit sum of logs.
pub fn ln_rising(n: u64, b: f64) -> f64 {
    (0..n).map(|k| (b + k as f64).ln()).sum()
}

/// Cell counts of `vars`, keyed by the tuple of values.
pub fn tuple_counts(ds: &Dataset, vars: &[usize]) -> HashMap<Vec<u32>, u64> {
    let mut m = HashMap::new();
    for row in ds.rows() {
        *m.entry(vars.iter().map(|&v| row[v]).collect()).or_insert(0) += 1;
    }
    m
}

/// Product-form `ln Q` for Jeffreys or BDeu: `-ln[Γ(n+A)/Γ(A)] + Σ ln[Γ(c+a)/Γ(a)]`.
pub fn oracle_ln_q(ds: &Dataset, vars: &[usize], prior: &PriorSpec) -> f64 {
    let gamma: f64 = vars.iter().map(|&v| ds.arity(v) as f64).product();
    let a = match prior {
        PriorSpec::Jeffreys => 0.5,
        PriorSpec::BDeu { ess } => ess / gamma,
        PriorSpec::Custom(_) => panic!("oracle covers Jeffreys and BDeu"),
    };
    let mut v = -ln_rising(ds.n() as u64, a * gamma);
    for c in tuple_counts(ds, vars).values() {
        v += ln_rising(*c, a);
    }
    v
}

/// Conditional entropy from tuple counts, in nats.
pub fn oracle_entropy(ds: &Dataset, child: usize, given: &[usize]) -> f64 {
    let mut family: Vec<usize> = given.to_vec();
    family.push(child);
    let joint = tuple_counts(ds, &family);
    let parent = tuple_counts(ds, given);
    let n = ds.n() as f64;
    joint
        .iter()
        .map(|(k, &c)| {
            let cu = parent[&k[..given.len()]] as f64;
            -(c as f64 / n) * (c as f64 / cu).ln()
        })
        .sum()
}

pub fn random_dataset<R: Rng>(rng: &mut R, arities: &[u32], n: usize) -> Dataset {
    let vars = arities
        .iter()
        .enumerate()
        .map(|(k, &a)| Variable::new(format!("V{k}"), a))
        .collect();
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|_| arities.iter().map(|&a| rng.gen_range(0..a)).collect())
        .collect();
    Dataset::from_rows(vars, &rows).unwrap()
}

/// Every DAG on `n` variables, by brute force over parent-set assignments.
pub fn all_dags(n: usize) -> Vec<Network> {
    let choices: Vec<Vec<VarSet>> = (0..n)
        .map(|v| {
            (0u64..1 << n)
                .filter(|m| m >> v & 1 == 0)
                .map(VarSet::from_mask)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let parents = (0..n).map(|v| choices[v][idx[v]].clone()).collect();
        if let Ok(net) = Network::new(parents) {
            out.push(net);
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
