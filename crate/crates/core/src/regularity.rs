//! Regularity auditing of parent-set scores.
//!
//! A score is regular when, for nested parent sets `U ⊂ U'` whose empirical
//! conditional entropies satisfy `H(X|U) ≤ H(X|U')`, the smaller set scores
//! at least as well. BDeu fails this whenever the child and an extra
//! candidate are both functions of `U`; Jeffreys does not.

use rand::Rng;
use serde::Serialize;

use crate::citest::j_log_ratio;
use crate::dataset::{empirical_cond_entropy, Dataset, VarSet, Variable};
use crate::error::{Error, Result};
use crate::numerics::{ln_gamma, ln_gamma_ratio, LogBase, DEFAULT_RATIO_THRESHOLD};
use crate::scores::{aic, bic, conditional_score_ratio, PriorSpec, SCORE_TOL};

/// Entropies closer than this are treated as equal.
pub const ENTROPY_TOL: f64 = 1e-12;

/// Score used by [`audit`]. AIC and BIC are negated so that larger is better.
#[derive(Debug, Clone)]
pub enum AuditScore {
    Bayes(PriorSpec),
    Aic,
    Bic,
}

impl AuditScore {
    fn score(&self, ds: &Dataset, child: usize, parents: &VarSet) -> Result<f64> {
        match self {
            AuditScore::Bayes(prior) => {
                Ok(conditional_score_ratio(ds, child, parents, prior)?.value)
            }
            AuditScore::Aic => Ok(-aic(ds, child, parents)?),
            AuditScore::Bic => Ok(-bic(ds, child, parents)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityViolation {
    pub child: usize,
    pub smaller: VarSet,
    pub larger: VarSet,
    pub h_smaller: f64,
    pub h_larger: f64,
    pub score_smaller: f64,
    pub score_larger: f64,
}

/// All nested pairs `U ⊂ U' ⊆ candidates` (with `|U'| ≤ max_parent_size`)
/// where `U` fits at least as well but scores strictly worse.
pub fn audit(
    ds: &Dataset,
    child: usize,
    score: &AuditScore,
    candidates: &VarSet,
    max_parent_size: usize,
) -> Result<Vec<RegularityViolation>> {
    ds.check_var(child)?;
    ds.check_varset(candidates)?;
    if candidates.contains(child) {
        return Err(Error::InvalidArgument(format!(
            "child {child} is among its own candidate parents"
        )));
    }
    let sets = candidates.subsets(max_parent_size);
    let evaluated = sets
        .iter()
        .map(|u| {
            let h = empirical_cond_entropy(ds, child, u, LogBase::E)?;
            let s = score.score(ds, child, u)?;
            Ok((h, s))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::new();
    for (i, small) in sets.iter().enumerate() {
        for (j, large) in sets.iter().enumerate() {
            if large.len() <= small.len() || !small.is_subset(large) {
                continue;
            }
            let (h_s, s_s) = evaluated[i];
            let (h_l, s_l) = evaluated[j];
            if h_s <= h_l + ENTROPY_TOL && s_l - s_s > SCORE_TOL {
                out.push(RegularityViolation {
                    child,
                    smaller: small.clone(),
                    larger: large.clone(),
                    h_smaller: h_s,
                    h_larger: h_l,
                    score_smaller: s_s,
                    score_larger: s_l,
                });
            }
        }
    }
    Ok(out)
}

/// Data in which `X = f(Z)` and `Y = g(Z)` row by row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterministicSpec {
    pub z_arity: u32,
    pub x_arity: u32,
    pub y_arity: u32,
    /// `f[z]` is the value of X when Z = z.
    pub f: Vec<u32>,
    pub g: Vec<u32>,
    pub z_sequence: Vec<u32>,
}

impl DeterministicSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.z_arity < 2 || self.x_arity < 2 || self.y_arity < 2 {
            return bad("all arities must be at least 2".into());
        }
        if self.f.len() != self.z_arity as usize || self.g.len() != self.z_arity as usize {
            return bad(format!(
                "f and g must list one value per Z state ({} states)",
                self.z_arity
            ));
        }
        if let Some(v) = self.f.iter().find(|&&v| v >= self.x_arity) {
            return bad(format!("f maps into {v}, outside 0..{}", self.x_arity));
        }
        if let Some(v) = self.g.iter().find(|&&v| v >= self.y_arity) {
            return bad(format!("g maps into {v}, outside 0..{}", self.y_arity));
        }
        if self.z_sequence.is_empty() {
            return bad("z sequence is empty".into());
        }
        if let Some(v) = self.z_sequence.iter().find(|&&v| v >= self.z_arity) {
            return bad(format!("z value {v} outside 0..{}", self.z_arity));
        }
        Ok(())
    }

    /// Number of binary columns Z is split into, or `None` when it stays a
    /// single column.
    fn binary_width(&self) -> Option<u32> {
        (self.z_arity >= 4 && self.z_arity.is_power_of_two()).then(|| self.z_arity.trailing_zeros())
    }

    /// Uniformly random maps and z-sequence.
    pub fn sample<R: Rng + ?Sized>(
        rng: &mut R,
        n: usize,
        z_arity: u32,
        x_arity: u32,
        y_arity: u32,
    ) -> Self {
        DeterministicSpec {
            z_arity,
            x_arity,
            y_arity,
            f: (0..z_arity).map(|_| rng.gen_range(0..x_arity)).collect(),
            g: (0..z_arity).map(|_| rng.gen_range(0..y_arity)).collect(),
            z_sequence: (0..n).map(|_| rng.gen_range(0..z_arity)).collect(),
        }
    }
}

/// Columns of a dataset built by [`make_deterministic_dataset`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicLayout {
    pub x: usize,
    pub y: usize,
    pub z: VarSet,
}

fn z_column_names(width: u32) -> Vec<String> {
    match width {
        2 => vec!["Z".into(), "W".into()],
        w => (0..w).map(|k| format!("Z{k}")).collect(),
    }
}

/// Emits columns `X`, the Z columns, then `Y`. A Z arity that is a power of
/// two of at least 4 is written as binary columns, most significant first.
pub fn make_deterministic_dataset(
    spec: &DeterministicSpec,
) -> Result<(Dataset, DeterministicLayout)> {
    spec.validate()?;
    let mut variables = vec![Variable::new("X", spec.x_arity)];
    let z_width = match spec.binary_width() {
        Some(w) => {
            variables.extend(z_column_names(w).into_iter().map(|n| Variable::new(n, 2)));
            w as usize
        }
        None => {
            variables.push(Variable::new("Z", spec.z_arity));
            1
        }
    };
    variables.push(Variable::new("Y", spec.y_arity));

    let rows: Vec<Vec<u32>> = spec
        .z_sequence
        .iter()
        .map(|&z| {
            let mut row = Vec::with_capacity(z_width + 2);
            row.push(spec.f[z as usize]);
            match spec.binary_width() {
                Some(w) => row.extend((0..w).rev().map(|bit| (z >> bit) & 1)),
                None => row.push(z),
            }
            row.push(spec.g[z as usize]);
            row
        })
        .collect();
    let ds = Dataset::from_rows(variables, &rows)?;
    let layout = DeterministicLayout {
        x: 0,
        y: z_width + 1,
        z: VarSet::new(1..=z_width)?,
    };
    Ok((ds, layout))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub jeffreys_holds: bool,
    pub bdeu_holds: bool,
    /// `ln LHS - ln RHS` of the Jeffreys inequality (≥ 0 when it holds).
    pub jeffreys_margin: f64,
    /// `ln RHS - ln LHS` of the BDeu inequality (≥ 0 when it holds).
    pub bdeu_margin: f64,
}

/// Checks, in log space,
///
/// * `Γ(n+αβ/2)Γ(n+½)/[Γ(αβ/2)Γ(½)] ≥ Γ(n+α/2)Γ(n+β/2)/[Γ(α/2)Γ(β/2)]`
/// * `Γ(n+δ/α)Γ(n+δ/β)/[Γ(δ/α)Γ(δ/β)] ≤ Γ(n+δ/αβ)Γ(n+δ)/[Γ(δ/αβ)Γ(δ)]`
pub fn gamma_inequality_check(n: u64, alpha: u32, beta: u32, ess: f64) -> Result<InequalityCheck> {
    if alpha < 2 || beta < 2 {
        return Err(Error::InvalidArgument("α and β must be at least 2".into()));
    }
    if ess <= 0.0 || !ess.is_finite() {
        return Err(Error::Config(format!("δ must be positive, got {ess}")));
    }
    let r = |b: f64| ln_gamma_ratio(n, b, DEFAULT_RATIO_THRESHOLD);
    let (a, b) = (alpha as f64, beta as f64);
    let jeffreys_margin = r(a * b / 2.0) + r(0.5) - r(a / 2.0) - r(b / 2.0);
    let bdeu_margin = r(ess / (a * b)) + r(ess) - r(ess / a) - r(ess / b);
    Ok(InequalityCheck {
        jeffreys_holds: jeffreys_margin >= -SCORE_TOL,
        bdeu_holds: bdeu_margin >= -SCORE_TOL,
        jeffreys_margin,
        bdeu_margin,
    })
}

/// Binary X with `r` ones followed by zeros, binary Y all zero.
pub fn profile_dataset(n: usize, r: usize) -> Result<Dataset> {
    if n == 0 || r > n {
        return Err(Error::InvalidArgument(format!(
            "need 0 ≤ r ≤ n and n ≥ 1, got n={n}, r={r}"
        )));
    }
    let x: Vec<u32> = (0..n).map(|k| u32::from(k < r)).collect();
    Dataset::from_columns(
        vec![Variable::new("X", 2), Variable::new("Y", 2)],
        &[x, vec![0; n]],
    )
}

/// `J(n)` (nats) for [`profile_dataset`]`(n, r)`.
pub fn jn_profile(n: usize, r: usize, prior: &PriorSpec) -> Result<f64> {
    let ds = profile_dataset(n, r)?;
    let nj = j_log_ratio(
        &ds,
        &VarSet::singleton(0),
        &VarSet::singleton(1),
        &VarSet::empty(),
        prior,
    )?;
    Ok(nj / n as f64)
}

/// Jeffreys value of [`jn_profile`], which does not depend on `r`:
/// `(1/n) ln[√π Γ(n+1) / ((n+1) Γ(n+½))]`.
pub fn jeffreys_profile_closed_form(n: usize) -> f64 {
    let nf = n as f64;
    (0.5 * std::f64::consts::PI.ln() + ln_gamma(nf + 1.0) - (nf + 1.0).ln() - ln_gamma(nf + 0.5))
        / nf
}
