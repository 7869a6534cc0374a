//! Bayesian-Dirichlet scores.
//!
//! `Q^n(S)` is the Dirichlet-multinomial marginal likelihood of the observed
//! columns `S`. Conditional scores come in two forms: the ratio form
//! `Q^n(S ∪ {X}) / Q^n(S)`, which is score-equivalent for every prior, and
//! the local form built from per-parent-configuration Dirichlet factors.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::dataset::{counts, entropy_nat, Dataset, FamilyCounts, VarSet};
use crate::error::{Error, Result};
use crate::numerics::{ln_gamma_ratio, DEFAULT_RATIO_THRESHOLD};
use crate::search::Network;

/// Absolute tolerance under which two log scores are treated as equal.
pub const SCORE_TOL: f64 = 1e-9;

// Custom per-cell priors are enumerated over every joint state.
const MAX_ENUMERATED_CELLS: u64 = 1 << 24;

type CellWeightFn = dyn Fn(&VarSet, &[u32]) -> f64 + Send + Sync;

/// Hyperparameter choice `a(s)` for each cell `s` of a variable subset.
#[derive(Clone)]
pub enum PriorSpec {
    /// `a(s) = 1/2` for every cell of every subset.
    Jeffreys,
    /// `a(s) = δ/γ` where `γ` is the subset's joint arity.
    BDeu {
        ess: f64,
    },
    Custom(CustomPrior),
}

/// User-supplied Dirichlet weights.
#[derive(Clone)]
pub enum CustomPrior {
    /// The same weight on every cell of every subset.
    Uniform(f64),
    /// Weight as a function of the subset and the cell's configuration
    /// (values in subset order).
    PerCell(Arc<CellWeightFn>),
}

impl PriorSpec {
    pub fn bdeu(ess: f64) -> Self {
        PriorSpec::BDeu { ess }
    }

    pub fn custom_uniform(weight: f64) -> Self {
        PriorSpec::Custom(CustomPrior::Uniform(weight))
    }

    pub fn custom_fn<F>(f: F) -> Self
    where
        F: Fn(&VarSet, &[u32]) -> f64 + Send + Sync + 'static,
    {
        PriorSpec::Custom(CustomPrior::PerCell(Arc::new(f)))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PriorSpec::Jeffreys => Ok(()),
            PriorSpec::BDeu { ess } if *ess > 0.0 && ess.is_finite() => Ok(()),
            PriorSpec::BDeu { ess } => Err(Error::Config(format!(
                "equivalent sample size must be positive, got {ess}"
            ))),
            PriorSpec::Custom(CustomPrior::Uniform(w)) if *w > 0.0 && w.is_finite() => Ok(()),
            PriorSpec::Custom(CustomPrior::Uniform(w)) => Err(Error::Config(format!(
                "custom cell weight must be positive, got {w}"
            ))),
            PriorSpec::Custom(CustomPrior::PerCell(_)) => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PriorSpec::Jeffreys => "jeffreys",
            PriorSpec::BDeu { .. } => "bdeu",
            PriorSpec::Custom(_) => "custom",
        }
    }

    /// Resolves `a(·)` over the cells of `set`.
    pub(crate) fn weights(&self, ds: &Dataset, set: &VarSet) -> Result<CellWeights> {
        self.validate()?;
        let gamma = ds.joint_arity(set)?;
        Ok(match self {
            PriorSpec::Jeffreys => CellWeights::uniform(0.5, gamma),
            PriorSpec::BDeu { ess } => CellWeights::uniform(ess / gamma as f64, gamma),
            PriorSpec::Custom(CustomPrior::Uniform(w)) => CellWeights::uniform(*w, gamma),
            PriorSpec::Custom(CustomPrior::PerCell(f)) => {
                if gamma > MAX_ENUMERATED_CELLS {
                    return Err(Error::Capacity(format!(
                        "custom prior over {set} needs {gamma} cells"
                    )));
                }
                let per_cell = (0..gamma)
                    .map(|idx| {
                        let config = set.decode(ds, idx);
                        let w = f(set, &config);
                        if w > 0.0 && w.is_finite() {
                            Ok(w)
                        } else {
                            Err(Error::Config(format!(
                                "custom weight {w} for cell {config:?} of {set} is not positive"
                            )))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                let total = per_cell.iter().sum();
                CellWeights::PerCell { per_cell, total }
            }
        })
    }
}

impl fmt::Debug for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriorSpec::Jeffreys => write!(f, "Jeffreys"),
            PriorSpec::BDeu { ess } => write!(f, "BDeu({ess})"),
            PriorSpec::Custom(CustomPrior::Uniform(w)) => write!(f, "Custom(uniform {w})"),
            PriorSpec::Custom(CustomPrior::PerCell(_)) => write!(f, "Custom(per-cell)"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum CellWeights {
    Uniform { per_cell: f64, total: f64 },
    PerCell { per_cell: Vec<f64>, total: f64 },
}

impl CellWeights {
    fn uniform(per_cell: f64, gamma: u64) -> Self {
        CellWeights::Uniform {
            per_cell,
            total: per_cell * gamma as f64,
        }
    }

    pub(crate) fn get(&self, cell: u64) -> f64 {
        match self {
            CellWeights::Uniform { per_cell, .. } => *per_cell,
            CellWeights::PerCell { per_cell, .. } => per_cell[cell as usize],
        }
    }

    pub(crate) fn total(&self) -> f64 {
        match self {
            CellWeights::Uniform { total, .. } | CellWeights::PerCell { total, .. } => *total,
        }
    }
}

/// What a [`LogScore`] was computed for.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScoreContext {
    Marginal { subset: VarSet },
    Conditional { child: usize, parents: VarSet },
    Network,
}

/// A natural-log score with the inputs it refers to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogScore {
    pub value: f64,
    pub context: ScoreContext,
}

impl LogScore {
    pub fn prob(&self) -> f64 {
        self.value.exp()
    }
}

/// How the parent-configuration weight `a(u)` of the local form is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParentWeight {
    /// `a(u) = Σ_x a(x, u)`, so the global normalizers cancel.
    Coupled,
    /// `a(u)` from the prior applied to the parent set alone.
    Independent,
}

pub(crate) fn ln_q(ds: &Dataset, set: &VarSet, prior: &PriorSpec) -> Result<f64> {
    let table = counts(ds, set)?;
    let weights = prior.weights(ds, set)?;
    let mut value = -ln_gamma_ratio(table.n(), weights.total(), DEFAULT_RATIO_THRESHOLD);
    for (cell, c) in table.nonzero() {
        value += ln_gamma_ratio(c, weights.get(cell), DEFAULT_RATIO_THRESHOLD);
    }
    Ok(value)
}

/// `ln Q^n(S)`.
pub fn marginal_score(ds: &Dataset, set: &VarSet, prior: &PriorSpec) -> Result<LogScore> {
    Ok(LogScore {
        value: ln_q(ds, set, prior)?,
        context: ScoreContext::Marginal {
            subset: set.clone(),
        },
    })
}

fn check_child(ds: &Dataset, child: usize, parents: &VarSet) -> Result<()> {
    ds.check_var(child)?;
    ds.check_varset(parents)?;
    if parents.contains(child) {
        return Err(Error::InvalidArgument(format!(
            "child {child} appears in its own parent set {parents}"
        )));
    }
    Ok(())
}

/// `ln Q^n(U ∪ {X}) - ln Q^n(U)`.
pub fn conditional_score_ratio(
    ds: &Dataset,
    child: usize,
    parents: &VarSet,
    prior: &PriorSpec,
) -> Result<LogScore> {
    check_child(ds, child, parents)?;
    let joint = ln_q(ds, &parents.with(child), prior)?;
    let marginal = ln_q(ds, parents, prior)?;
    Ok(LogScore {
        value: joint - marginal,
        context: ScoreContext::Conditional {
            child,
            parents: parents.clone(),
        },
    })
}

/// Local-form conditional score
/// `Π_u Γ(a(u))/Γ(c(u)+a(u)) · Π_x Γ(c(x,u)+a(x,u))/Γ(a(x,u))`.
///
/// Parent configurations that never occur contribute a factor of one and
/// are skipped.
pub fn conditional_score_local(
    ds: &Dataset,
    child: usize,
    parents: &VarSet,
    prior: &PriorSpec,
    parent_weight: ParentWeight,
) -> Result<LogScore> {
    check_child(ds, child, parents)?;
    let family = FamilyCounts::compute(ds, child, parents)?;
    let family_set = parents.with(child);
    let joint_weights = prior.weights(ds, &family_set)?;
    let parent_weights = match parent_weight {
        ParentWeight::Coupled => None,
        ParentWeight::Independent => Some(prior.weights(ds, parents)?),
    };

    // Position of the child within the sorted family set, and the stride it
    // occupies in the family's mixed-radix index.
    let pos = family_set
        .indices()
        .iter()
        .position(|&v| v == child)
        .unwrap();
    let stride: u64 = family_set.indices()[pos + 1..]
        .iter()
        .map(|&v| ds.arity(v) as u64)
        .product();
    let alpha = family.child_arity as u64;
    let family_index = |u: u64, x: u64| -> u64 {
        let high = u / stride;
        let low = u % stride;
        (high * alpha + x) * stride + low
    };

    let mut value = 0.0;
    for (&u, child_counts) in &family.by_parent {
        let cu: u64 = child_counts.iter().sum();
        let a_u = match &parent_weights {
            None => (0..alpha)
                .map(|x| joint_weights.get(family_index(u, x)))
                .sum(),
            Some(w) => w.get(u),
        };
        value -= ln_gamma_ratio(cu, a_u, DEFAULT_RATIO_THRESHOLD);
        for (x, &c) in child_counts.iter().enumerate() {
            if c > 0 {
                let a_xu = joint_weights.get(family_index(u, x as u64));
                value += ln_gamma_ratio(c, a_xu, DEFAULT_RATIO_THRESHOLD);
            }
        }
    }
    Ok(LogScore {
        value,
        context: ScoreContext::Conditional {
            child,
            parents: parents.clone(),
        },
    })
}

/// Free parameters of `X | U`: `(α - 1) γ`.
pub fn parameter_count(ds: &Dataset, child: usize, parents: &VarSet) -> Result<u64> {
    let gamma = ds.joint_arity(parents)?;
    Ok((ds.arity(child) as u64 - 1) * gamma)
}

/// `H^n(X|U) + k(U)/n` in nats.
pub fn aic(ds: &Dataset, child: usize, parents: &VarSet) -> Result<f64> {
    check_child(ds, child, parents)?;
    let family = FamilyCounts::compute(ds, child, parents)?;
    let k = parameter_count(ds, child, parents)? as f64;
    Ok(entropy_nat(&family, ds.n()) + k / ds.n() as f64)
}

/// `H^n(X|U) + (k(U)/2n) ln n` in nats.
pub fn bic(ds: &Dataset, child: usize, parents: &VarSet) -> Result<f64> {
    check_child(ds, child, parents)?;
    let family = FamilyCounts::compute(ds, child, parents)?;
    let k = parameter_count(ds, child, parents)? as f64;
    let n = ds.n() as f64;
    Ok(entropy_nat(&family, ds.n()) + k / (2.0 * n) * n.ln())
}

/// Sum of ratio-form conditional scores over the network's families. The
/// uniform structure prior contributes a constant and is omitted.
pub fn network_score(ds: &Dataset, net: &Network, prior: &PriorSpec) -> Result<LogScore> {
    if net.num_vars() != ds.num_vars() {
        return Err(Error::InvalidArgument(format!(
            "network has {} variables, dataset has {}",
            net.num_vars(),
            ds.num_vars()
        )));
    }
    let mut value = 0.0;
    for (v, parents) in net.families() {
        value += conditional_score_ratio(ds, v, parents, prior)?.value;
    }
    Ok(LogScore {
        value,
        context: ScoreContext::Network,
    })
}
