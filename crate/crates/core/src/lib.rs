//! Bayesian-Dirichlet scores for Bayesian network structure learning.
//!
//! The crate computes marginal and conditional Dirichlet-multinomial scores
//! under Jeffreys, BDeu or custom priors, score-based conditional
//! independence decisions, regularity audits of parent-set scores, and exact
//! structure search for small networks.
//!
//! ```
//! use bdscore::{load_csv, marginal_score, PriorSpec, VarSet};
//!
//! let ds = load_csv("A:2,B:2\n0,0\n1,1\n1,1\n".as_bytes()).unwrap();
//! let s = marginal_score(&ds, &VarSet::new([0, 1]).unwrap(), &PriorSpec::Jeffreys).unwrap();
//! assert!(s.value < 0.0);
//! ```

pub mod citest;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod numerics;
pub mod regularity;
pub mod scores;
pub mod search;

pub use citest::{
    ci_decide_cond, ci_decide_pair, ci_decide_sets, ci_statistics, d_n, i_penalized_mi,
    j_statistic, CIStatistics, CIVerdict,
};
pub use dataset::{
    counts, empirical_cond_entropy, load_csv, load_csv_path, ContingencyTable, Dataset, VarSet,
    Variable,
};
pub use error::{Error, Result};
pub use numerics::{log_gamma, log_gamma_ratio, stirling_log_gamma, LogBase, LogReal};
pub use regularity::{audit, AuditScore, RegularityViolation};
pub use scores::{
    aic, bic, conditional_score_local, conditional_score_ratio, marginal_score, network_score,
    LogScore, ParentWeight, PriorSpec,
};
pub use search::{best_parent_set, learn_exact, Network};
