//! Exact structure search over DAGs.
//!
//! Parent-set scores are tabulated once per variable; the optimal network
//! is then found by dynamic programming over subsets (choosing the best sink
//! of every subset), which is exact for the decomposable ratio-form score.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{Dataset, VarSet};
use crate::error::{Error, Result};
use crate::scores::{ln_q, PriorSpec, SCORE_TOL};

/// Largest number of variables [`learn_exact`] accepts.
pub const MAX_EXACT_VARS: usize = 15;

/// A DAG given by the parent set of every variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Network {
    parents: Vec<VarSet>,
}

impl Network {
    /// Fails with [`Error::Cyclic`] if the parent sets induce a cycle.
    pub fn new(parents: Vec<VarSet>) -> Result<Self> {
        let n = parents.len();
        for (v, ps) in parents.iter().enumerate() {
            if let Some(&p) = ps.indices().iter().find(|&&p| p >= n) {
                return Err(Error::InvalidArgument(format!(
                    "parent {p} of variable {v} out of range"
                )));
            }
            if ps.contains(v) {
                return Err(Error::Cyclic(v));
            }
        }
        let net = Self { parents };
        if let Some(v) = net.find_cycle() {
            return Err(Error::Cyclic(v));
        }
        Ok(net)
    }

    pub fn empty(num_vars: usize) -> Self {
        Self {
            parents: vec![VarSet::empty(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self, v: usize) -> &VarSet {
        &self.parents[v]
    }

    pub fn families(&self) -> impl Iterator<Item = (usize, &VarSet)> {
        self.parents.iter().enumerate()
    }

    pub fn num_edges(&self) -> usize {
        self.parents.iter().map(VarSet::len).sum()
    }

    /// Kahn's algorithm; returns a variable on a cycle if one exists.
    fn find_cycle(&self) -> Option<usize> {
        let n = self.parents.len();
        let mut indegree: Vec<usize> = self.parents.iter().map(VarSet::len).collect();
        let mut children = vec![Vec::new(); n];
        for (v, ps) in self.parents.iter().enumerate() {
            for &p in ps.indices() {
                children[p].push(v);
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &c in &children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    stack.push(c);
                }
            }
        }
        (seen < n).then(|| (0..n).find(|&v| indegree[v] > 0).unwrap())
    }
}

/// Ratio-form conditional scores for every variable and every candidate
/// parent set of size at most `cap`.
#[derive(Debug, Clone)]
pub struct ParentSetTable {
    num_vars: usize,
    cap: usize,
    // per variable: parent mask -> score
    entries: Vec<HashMap<u64, f64>>,
}

impl ParentSetTable {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn get(&self, child: usize, parents: &VarSet) -> Option<f64> {
        self.entries.get(child)?.get(&parents.to_mask()).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.iter().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries for `child`, ordered by parent-set size then lexicographically.
    pub fn entries_for(&self, child: usize) -> Vec<(VarSet, f64)> {
        let mut out: Vec<(VarSet, f64)> = self.entries[child]
            .iter()
            .map(|(&m, &s)| (VarSet::from_mask(m), s))
            .collect();
        out.sort_by(|a, b| tie_key(&a.0).cmp(&tie_key(&b.0)));
        out
    }

    /// Copy with `offset` added to every entry.
    pub fn with_offset(&self, offset: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|m| m.iter().map(|(&k, &s)| (k, s + offset)).collect())
            .collect();
        Self { entries, ..*self }
    }

    /// Sum of the table entries of the network's families.
    pub fn score(&self, net: &Network) -> Result<f64> {
        net.families()
            .map(|(v, ps)| {
                self.get(v, ps).ok_or_else(|| Error::MissingEntry {
                    child: v,
                    parents: ps.indices().to_vec(),
                })
            })
            .sum()
    }
}

fn tie_key(set: &VarSet) -> (usize, &[usize]) {
    (set.len(), set.indices())
}

/// Tabulates `ln Q(U ∪ {v}) - ln Q(U)` for `|U| ≤ cap`.
pub fn build_parent_tables(ds: &Dataset, prior: &PriorSpec, cap: usize) -> Result<ParentSetTable> {
    let n = ds.num_vars();
    if n > 63 {
        return Err(Error::Capacity(format!(
            "{n} variables exceed the 63 supported by parent tables"
        )));
    }
    if n > 0 && cap > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "parent cap {cap} exceeds N-1 = {}",
            n - 1
        )));
    }
    prior.validate()?;

    // Every subset of size ≤ cap+1 is needed once as a marginal.
    let all = VarSet::new(0..n)?;
    let subsets = all.subsets(cap + 1);
    let marginals: HashMap<u64, f64> = subsets
        .par_iter()
        .map(|s| Ok((s.to_mask(), ln_q(ds, s, prior)?)))
        .collect::<Result<_>>()?;

    let entries = (0..n)
        .map(|v| {
            all.without(v)
                .subsets(cap)
                .into_iter()
                .map(|u| {
                    let m = u.to_mask();
                    (m, marginals[&(m | 1 << v)] - marginals[&m])
                })
                .collect()
        })
        .collect();
    Ok(ParentSetTable {
        num_vars: n,
        cap,
        entries,
    })
}

/// Highest-scoring member of `family`. Scores within [`SCORE_TOL`] are tied
/// and resolved toward the smaller set, then the lexicographically first.
pub fn best_parent_set(table: &ParentSetTable, child: usize, family: &[VarSet]) -> Result<VarSet> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("empty parent-set family".into()));
    }
    let mut scored = family
        .iter()
        .map(|u| {
            table
                .get(child, u)
                .map(|s| (u, s))
                .ok_or_else(|| Error::MissingEntry {
                    child,
                    parents: u.indices().to_vec(),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| tie_key(a.0).cmp(&tie_key(b.0)));
    let mut best = scored[0];
    for &cand in &scored[1..] {
        if cand.1 > best.1 + SCORE_TOL {
            best = cand;
        }
    }
    Ok(best.0.clone())
}

/// One of the eleven Markov-equivalence classes on three variables.
#[derive(Debug, Clone, Serialize)]
pub struct ClassScore {
    pub id: u8,
    pub label: &'static str,
    pub log_score: f64,
    /// A DAG in the class.
    pub representative: Network,
}

// Variables X, Y, Z are indices 0, 1, 2. Each class lists the marginal
// subsets in its numerator and denominator (as masks) and one member DAG
// (parent masks of X, Y, Z).
type ClassSpec = (&'static str, &'static [u64], &'static [u64], [u64; 3]);

const N3_CLASSES: [ClassSpec; 11] = [
    ("Q(X)Q(Y)Q(Z)", &[0b001, 0b010, 0b100], &[], [0, 0, 0]),
    ("Q(X)Q(Y,Z)", &[0b001, 0b110], &[], [0, 0, 0b010]),
    ("Q(Y)Q(Z,X)", &[0b010, 0b101], &[], [0, 0, 0b001]),
    ("Q(Z)Q(X,Y)", &[0b100, 0b011], &[], [0, 0b001, 0]),
    (
        "Q(Z,X)Q(X,Y)/Q(X)",
        &[0b101, 0b011],
        &[0b001],
        [0, 0b001, 0b001],
    ),
    (
        "Q(X,Y)Q(Y,Z)/Q(Y)",
        &[0b011, 0b110],
        &[0b010],
        [0, 0b001, 0b010],
    ),
    (
        "Q(Y,Z)Q(Z,X)/Q(Z)",
        &[0b110, 0b101],
        &[0b100],
        [0b100, 0b100, 0],
    ),
    (
        "Q(Y)Q(Z)Q(X,Y,Z)/Q(Y,Z)",
        &[0b010, 0b100, 0b111],
        &[0b110],
        [0b110, 0, 0],
    ),
    (
        "Q(Z)Q(X)Q(X,Y,Z)/Q(Z,X)",
        &[0b100, 0b001, 0b111],
        &[0b101],
        [0, 0b101, 0],
    ),
    (
        "Q(X)Q(Y)Q(X,Y,Z)/Q(X,Y)",
        &[0b001, 0b010, 0b111],
        &[0b011],
        [0, 0, 0b011],
    ),
    ("Q(X,Y,Z)", &[0b111], &[], [0, 0b001, 0b011]),
];

/// Log scores of the eleven three-variable factorizations, from marginal
/// scores.
pub fn enumerate_n3_classes(ds: &Dataset, prior: &PriorSpec) -> Result<Vec<ClassScore>> {
    if ds.num_vars() != 3 {
        return Err(Error::InvalidArgument(format!(
            "class enumeration needs exactly 3 variables, got {}",
            ds.num_vars()
        )));
    }
    let mut q = HashMap::new();
    for mask in 1u64..8 {
        q.insert(mask, ln_q(ds, &VarSet::from_mask(mask), prior)?);
    }
    N3_CLASSES
        .iter()
        .enumerate()
        .map(|(k, (label, num, den, rep))| {
            let log_score =
                num.iter().map(|m| q[m]).sum::<f64>() - den.iter().map(|m| q[m]).sum::<f64>();
            let representative = Network::new(rep.iter().map(|&m| VarSet::from_mask(m)).collect())?;
            Ok(ClassScore {
                id: k as u8 + 1,
                label,
                log_score,
                representative,
            })
        })
        .collect()
}

/// Posterior class probabilities under a uniform prior over classes.
pub fn class_posteriors(classes: &[ClassScore]) -> Vec<f64> {
    let max = classes
        .iter()
        .map(|c| c.log_score)
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = classes.iter().map(|c| (c.log_score - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Maximum-score DAG with at most `cap` parents per variable.
pub fn learn_exact(ds: &Dataset, prior: &PriorSpec, cap: usize) -> Result<Network> {
    if ds.num_vars() > MAX_EXACT_VARS {
        return Err(Error::Capacity(format!(
            "exact search supports at most {MAX_EXACT_VARS} variables, got {}",
            ds.num_vars()
        )));
    }
    let table = build_parent_tables(ds, prior, cap)?;
    Ok(learn_exact_from_table(&table)?.0)
}

/// Exact DP over sink orderings; returns the network and its score.
pub fn learn_exact_from_table(table: &ParentSetTable) -> Result<(Network, f64)> {
    let n = table.num_vars;
    if n > MAX_EXACT_VARS {
        return Err(Error::Capacity(format!(
            "exact search supports at most {MAX_EXACT_VARS} variables, got {n}"
        )));
    }
    if n == 0 {
        return Ok((Network::empty(0), 0.0));
    }
    let full = (1usize << n) - 1;

    // best[v][c]: best (score, parent mask) for v with parents inside c.
    let best: Vec<Vec<(f64, u64)>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let entries = &table.entries[v];
            let mut best = vec![(f64::NEG_INFINITY, 0u64); 1 << n];
            for c in 0..=full {
                if c >> v & 1 == 1 {
                    continue;
                }
                let mut cur = match entries.get(&(c as u64)) {
                    Some(&s) => (s, c as u64),
                    None => (f64::NEG_INFINITY, 0),
                };
                let mut rest = c;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    rest ^= bit;
                    let cand = best[c ^ bit];
                    if better(cand, cur) {
                        cur = cand;
                    }
                }
                best[c] = cur;
            }
            best
        })
        .collect();

    // sink DP: score[w] is the best score of a DAG over w.
    let mut score = vec![f64::NEG_INFINITY; 1 << n];
    let mut sink = vec![usize::MAX; 1 << n];
    score[0] = 0.0;
    for w in 1..=full {
        let mut rest = w;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            let v = bit.trailing_zeros() as usize;
            let prev = w ^ bit;
            let s = score[prev] + best[v][prev].0;
            // near-ties keep the lowest-index sink, so roundoff cannot pick
            if s > score[w] + SCORE_TOL {
                score[w] = s;
                sink[w] = v;
            }
        }
    }

    let mut parents = vec![VarSet::empty(); n];
    let mut w = full;
    while w != 0 {
        let v = sink[w];
        let prev = w & !(1 << v);
        parents[v] = VarSet::from_mask(best[v][prev].1);
        w = prev;
    }
    Ok((Network::new(parents)?, score[full]))
}

// Scores within SCORE_TOL tie; ties prefer the smaller, then
// lexicographically first, parent set.
fn better(a: (f64, u64), b: (f64, u64)) -> bool {
    if a.0 > b.0 + SCORE_TOL {
        return true;
    }
    if a.0 < b.0 - SCORE_TOL || a.0 == f64::NEG_INFINITY {
        return false;
    }
    let ka = (a.1.count_ones(), VarSet::from_mask(a.1));
    let kb = (b.1.count_ones(), VarSet::from_mask(b.1));
    ka < kb
}
