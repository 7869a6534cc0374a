//! Score-based conditional independence decisions and the statistics used to
//! study them asymptotically.
//!
//! For disjoint variable sets `X`, `Y`, `Z`:
//!
//! * `J(n) = (1/n)[ln Q(X∪Y∪Z) + ln Q(Z) - ln Q(X∪Z) - ln Q(Y∪Z)]`
//! * `I(n)` is the empirical conditional mutual information minus the
//!   penalty `(α-1)(β-1)γ/(2n) · log n`.
//! * `D_n` is the BDeu correction so that `J ≈ I + D_n/n` up to `O(1/n)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dataset::{Dataset, VarSet};
use crate::error::{Error, Result};
use crate::numerics::LogBase;
use crate::scores::{ln_q, PriorSpec};

/// Sizes `α`, `β`, `γ` of the joint state spaces of `X`, `Y` and `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CIStatistics {
    pub n: usize,
    pub j: f64,
    pub i: f64,
    /// Only defined for BDeu priors.
    pub d_n: Option<f64>,
    pub dims: Dims,
    #[serde(serialize_with = "serialize_prior")]
    pub prior: PriorSpec,
    pub log_base: LogBase,
}

fn serialize_prior<S: serde::Serializer>(p: &PriorSpec, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{p:?}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CIVerdict {
    pub independent: bool,
    pub p: f64,
    /// `ln p` plus the log scores of the independence model.
    pub left: f64,
    /// `ln(1-p)` plus the log scores of the dependence model.
    pub right: f64,
}

fn check_sets(ds: &Dataset, x: &VarSet, y: &VarSet, z: &VarSet) -> Result<()> {
    for s in [x, y, z] {
        ds.check_varset(s)?;
    }
    if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
        return Err(Error::InvalidArgument(format!(
            "conditioning sets must be pairwise disjoint: X={x}, Y={y}, Z={z}"
        )));
    }
    Ok(())
}

fn check_nonempty(x: &VarSet, y: &VarSet) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidArgument("X and Y must be nonempty".into()));
    }
    Ok(())
}

pub fn dims(ds: &Dataset, x: &VarSet, y: &VarSet, z: &VarSet) -> Result<Dims> {
    Ok(Dims {
        alpha: ds.joint_arity(x)?,
        beta: ds.joint_arity(y)?,
        gamma: ds.joint_arity(z)?,
    })
}

/// `n·J(n)`: the log score difference itself, in nats.
pub fn j_log_ratio(
    ds: &Dataset,
    x: &VarSet,
    y: &VarSet,
    z: &VarSet,
    prior: &PriorSpec,
) -> Result<f64> {
    check_sets(ds, x, y, z)?;
    check_nonempty(x, y)?;
    let xz = x.union(z);
    let yz = y.union(z);
    let xyz = xz.union(y);
    Ok(
        ln_q(ds, &xyz, prior)? + ln_q(ds, z, prior)?
            - ln_q(ds, &xz, prior)?
            - ln_q(ds, &yz, prior)?,
    )
}

/// `J(n)` in nats per sample.
pub fn j_statistic(
    ds: &Dataset,
    x: &VarSet,
    y: &VarSet,
    z: &VarSet,
    prior: &PriorSpec,
) -> Result<f64> {
    Ok(j_log_ratio(ds, x, y, z, prior)? / ds.n() as f64)
}

/// Counts keyed by the separate configuration indices of `X`, `Y`, `Z`.
struct TripleCounts {
    xyz: BTreeMap<(u64, u64, u64), u64>,
    xz: BTreeMap<(u64, u64), u64>,
    yz: BTreeMap<(u64, u64), u64>,
    z: BTreeMap<u64, u64>,
}

impl TripleCounts {
    fn compute(ds: &Dataset, x: &VarSet, y: &VarSet, z: &VarSet) -> Self {
        let mut xyz = BTreeMap::new();
        for row in ds.rows() {
            let key = (x.encode(ds, row), y.encode(ds, row), z.encode(ds, row));
            *xyz.entry(key).or_insert(0u64) += 1;
        }
        let mut xz = BTreeMap::new();
        let mut yz = BTreeMap::new();
        let mut zc = BTreeMap::new();
        for (&(xi, yi, zi), &c) in &xyz {
            *xz.entry((xi, zi)).or_insert(0u64) += c;
            *yz.entry((yi, zi)).or_insert(0u64) += c;
            *zc.entry(zi).or_insert(0u64) += c;
        }
        Self { xyz, xz, yz, z: zc }
    }
}

fn mutual_information_nat(t: &TripleCounts, n: usize) -> f64 {
    let n = n as f64;
    let mut mi = 0.0;
    for (&(xi, yi, zi), &c) in &t.xyz {
        let c = c as f64;
        let cz = t.z[&zi] as f64;
        let cxz = t.xz[&(xi, zi)] as f64;
        let cyz = t.yz[&(yi, zi)] as f64;
        mi += c / n * (c * cz / (cxz * cyz)).ln();
    }
    mi
}

fn penalty_nat(d: Dims, n: usize) -> f64 {
    let n = n as f64;
    (d.alpha - 1) as f64 * (d.beta - 1) as f64 * d.gamma as f64 / (2.0 * n) * n.ln()
}

/// Penalized empirical conditional mutual information `I(n)`.
pub fn i_penalized_mi(
    ds: &Dataset,
    x: &VarSet,
    y: &VarSet,
    z: &VarSet,
    base: LogBase,
) -> Result<f64> {
    check_sets(ds, x, y, z)?;
    let d = dims(ds, x, y, z)?;
    let t = TripleCounts::compute(ds, x, y, z);
    Ok(base.from_nat(mutual_information_nat(&t, ds.n()) - penalty_nat(d, ds.n())))
}

/// Natural-log `D_n` for BDeu with equivalent sample size `ess`.
fn d_n_nat(t: &TripleCounts, d: Dims, n: usize, ess: f64) -> f64 {
    let n_plus = n as f64 + ess;
    let (alpha, beta, gamma) = (d.alpha as f64, d.beta as f64, d.gamma as f64);

    // Σ over all `cells` cells of ln((c + a)/(n + δ)); unobserved cells
    // contribute ln(a/(n + δ)) each.
    let sum_over = |observed: &mut dyn Iterator<Item = u64>, cells: f64, a: f64| -> f64 {
        let mut s = 0.0;
        let mut seen = 0.0;
        for c in observed {
            s += ((c as f64 + a) / n_plus).ln();
            seen += 1.0;
        }
        s + (cells - seen) * (a / n_plus).ln()
    };

    let a_xz = ess / (alpha * gamma);
    let a_yz = ess / (beta * gamma);
    let a_xyz = ess / (alpha * beta * gamma);
    let a_z = ess / gamma;

    let s_xz = sum_over(&mut t.xz.values().copied(), alpha * gamma, a_xz);
    let s_yz = sum_over(&mut t.yz.values().copied(), beta * gamma, a_yz);
    let s_xyz = sum_over(&mut t.xyz.values().copied(), alpha * beta * gamma, a_xyz);
    let s_z = sum_over(&mut t.z.values().copied(), gamma, a_z);

    -(a_xz - 0.5) * s_xz - (a_yz - 0.5) * s_yz + (a_xyz - 0.5) * s_xyz + (a_z - 0.5) * s_z
}

/// The BDeu correction term `D_n`, reported in `base`.
pub fn d_n(
    ds: &Dataset,
    x: &VarSet,
    y: &VarSet,
    z: &VarSet,
    ess: f64,
    base: LogBase,
) -> Result<f64> {
    check_sets(ds, x, y, z)?;
    if ess <= 0.0 || !ess.is_finite() {
        return Err(Error::Config(format!(
            "equivalent sample size must be positive, got {ess}"
        )));
    }
    let d = dims(ds, x, y, z)?;
    let t = TripleCounts::compute(ds, x, y, z);
    Ok(base.from_nat(d_n_nat(&t, d, ds.n(), ess)))
}

/// `J`, `I` and (for BDeu) `D_n` together, reported in `base`.
pub fn ci_statistics(
    ds: &Dataset,
    x: &VarSet,
    y: &VarSet,
    z: &VarSet,
    prior: &PriorSpec,
    base: LogBase,
) -> Result<CIStatistics> {
    let j = j_statistic(ds, x, y, z, prior)?;
    let d = dims(ds, x, y, z)?;
    let t = TripleCounts::compute(ds, x, y, z);
    let i = mutual_information_nat(&t, ds.n()) - penalty_nat(d, ds.n());
    let d_n = match prior {
        PriorSpec::BDeu { ess } => Some(base.from_nat(d_n_nat(&t, d, ds.n(), *ess))),
        _ => None,
    };
    Ok(CIStatistics {
        n: ds.n(),
        j: base.from_nat(j),
        i: base.from_nat(i),
        d_n,
        dims: d,
        prior: prior.clone(),
        log_base: base,
    })
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "prior probability of independence must lie in (0, 1), got {p}"
        )))
    }
}

/// Decides `X ⊥ Y` iff `p Q(X) Q(Y) ≥ (1-p) Q(X,Y)`.
pub fn ci_decide_pair(
    ds: &Dataset,
    x: usize,
    y: usize,
    prior: &PriorSpec,
    p: f64,
) -> Result<CIVerdict> {
    ci_decide_cond(ds, x, y, &VarSet::empty(), prior, p)
}

/// Decides `X ⊥ Y | Z` iff `p Q(X,Z) Q(Y,Z) ≥ (1-p) Q(X,Y,Z) Q(Z)`. Exact
/// ties count as independent.
pub fn ci_decide_cond(
    ds: &Dataset,
    x: usize,
    y: usize,
    z: &VarSet,
    prior: &PriorSpec,
    p: f64,
) -> Result<CIVerdict> {
    ds.check_var(x)?;
    ds.check_var(y)?;
    ci_decide_sets(
        ds,
        &VarSet::singleton(x),
        &VarSet::singleton(y),
        z,
        prior,
        p,
    )
}

/// [`ci_decide_cond`] for sets of variables.
pub fn ci_decide_sets(
    ds: &Dataset,
    x: &VarSet,
    y: &VarSet,
    z: &VarSet,
    prior: &PriorSpec,
    p: f64,
) -> Result<CIVerdict> {
    check_p(p)?;
    check_sets(ds, x, y, z)?;
    check_nonempty(x, y)?;
    let xz = x.union(z);
    let yz = y.union(z);
    let xyz = xz.union(y);
    let left = p.ln() + ln_q(ds, &xz, prior)? + ln_q(ds, &yz, prior)?;
    let right = (1.0 - p).ln() + ln_q(ds, &xyz, prior)? + ln_q(ds, z, prior)?;
    Ok(CIVerdict {
        independent: left >= right,
        p,
        left,
        right,
    })
}

/// One point of an asymptotic-residual sweep, natural log throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub n: usize,
    pub j: f64,
    pub i: f64,
    /// Zero for Jeffreys.
    pub d_n: f64,
    /// `n(J - I)` for Jeffreys, `n(J - I) - D_n` for BDeu.
    pub residual: f64,
}

/// Residuals of `J = I + D_n/n + O(1/n)` over prefixes of one sample stream.
pub fn asymptotic_residuals(
    ds: &Dataset,
    grid: &[usize],
    x: &VarSet,
    y: &VarSet,
    z: &VarSet,
    prior: &PriorSpec,
) -> Result<Vec<Residual>> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "grid must be strictly increasing".into(),
        ));
    }
    let ess = match prior {
        PriorSpec::Jeffreys => None,
        PriorSpec::BDeu { ess } => Some(*ess),
        PriorSpec::Custom(_) => {
            return Err(Error::Unsupported(
                "asymptotic residuals are defined for Jeffreys and BDeu priors".into(),
            ))
        }
    };
    check_sets(ds, x, y, z)?;
    check_nonempty(x, y)?;
    let d = dims(ds, x, y, z)?;
    grid.iter()
        .map(|&n| {
            let prefix = ds.prefix(n)?;
            let nj = j_log_ratio(&prefix, x, y, z, prior)?;
            let t = TripleCounts::compute(&prefix, x, y, z);
            let ni = n as f64 * mutual_information_nat(&t, n) - n as f64 * penalty_nat(d, n);
            let d_n = ess.map_or(0.0, |e| d_n_nat(&t, d, n, e));
            Ok(Residual {
                n,
                j: nj / n as f64,
                i: ni / n as f64,
                d_n,
                residual: nj - ni - d_n,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{load_csv, Variable};

    fn pair(x: Vec<u32>, y: Vec<u32>) -> Dataset {
        Dataset::from_columns(vec![Variable::new("X", 2), Variable::new("Y", 2)], &[x, y]).unwrap()
    }

    fn determined() -> Dataset {
        load_csv(include_str!("../fixtures/determined.csv").as_bytes()).unwrap()
    }

    fn s(i: usize) -> VarSet {
        VarSet::singleton(i)
    }

    #[test]
    fn determined_j_signs() {
        let ds = determined();
        let zw = ds.varset(&["Z", "W"]).unwrap();
        let jb = j_statistic(&ds, &s(0), &s(3), &zw, &PriorSpec::bdeu(1.0)).unwrap();
        let jj = j_statistic(&ds, &s(0), &s(3), &zw, &PriorSpec::Jeffreys).unwrap();
        assert!(jb > 0.0);
        assert!(jj <= 0.0);
    }

    #[test]
    fn zeros_n5_j_value() {
        let ds = pair(vec![0; 5], vec![0; 5]);
        let j = j_statistic(&ds, &s(0), &s(1), &VarSet::empty(), &PriorSpec::bdeu(1.0)).unwrap();
        let qxy: f64 = 9945.0 / 1024.0 / 120.0;
        let qx = 945.0 / 32.0 / 120.0;
        let expected = (qxy / (qx * qx)).ln() / 5.0;
        assert!((j - expected).abs() < 1e-12);
        assert!(j > 0.0);
    }

    #[test]
    fn overlapping_sets_are_rejected() {
        let ds = determined();
        let err = j_statistic(&ds, &s(0), &s(0), &VarSet::empty(), &PriorSpec::Jeffreys);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
        let err = j_statistic(&ds, &s(0), &s(1), &s(1), &PriorSpec::Jeffreys);
        assert!(err.is_err());
        let err = j_statistic(&ds, &VarSet::empty(), &s(1), &s(2), &PriorSpec::Jeffreys);
        assert!(err.is_err());
    }

    #[test]
    fn i_for_factorized_table() {
        let ds = pair(vec![0, 0, 1, 1], vec![0, 1, 0, 1]);
        let i = i_penalized_mi(&ds, &s(0), &s(1), &VarSet::empty(), LogBase::E).unwrap();
        let penalty = 1.0 / 8.0 * 4f64.ln();
        assert!((i + penalty).abs() < 1e-15);
    }

    #[test]
    fn i_for_identical_columns() {
        let x = vec![0, 1, 0, 1, 0, 1, 0, 1];
        let ds = pair(x.clone(), x);
        let i = i_penalized_mi(&ds, &s(0), &s(1), &VarSet::empty(), LogBase::E).unwrap();
        let expected = 2f64.ln() - 1.0 / 16.0 * 8f64.ln();
        assert!((i - expected).abs() < 1e-15);
    }

    #[test]
    fn i_on_determined_matches_direct_sum() {
        let ds = determined();
        let zw = ds.varset(&["Z", "W"]).unwrap();
        // X and Y are both functions of (Z, W): every conditional MI term
        // has c(x,y,z) = c(x,z) = c(y,z) = c(z), so the MI part is zero.
        let i = i_penalized_mi(&ds, &s(0), &s(3), &zw, LogBase::E).unwrap();
        let expected = -(4.0 / 24.0) * 12f64.ln();
        assert!((i - expected).abs() < 1e-15);
    }

    #[test]
    fn d_n_equal_counts() {
        // c(x,y) = n/4 in every cell, δ = 1, base 2.
        let n = 400;
        let x: Vec<u32> = (0..n).map(|k| (k % 2) as u32).collect();
        let y: Vec<u32> = (0..n).map(|k| ((k / 2) % 2) as u32).collect();
        let ds = pair(x, y);
        let got = d_n(&ds, &s(0), &s(1), &VarSet::empty(), 1.0, LogBase::Two).unwrap();
        let expected = -((n as f64 / 4.0 + 0.25) / (n as f64 + 1.0)).log2();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 2.0).abs() < 0.01);
    }

    #[test]
    fn d_n_includes_unobserved_cells() {
        let ds = pair(vec![0; 10], vec![0; 10]);
        let got = d_n(&ds, &s(0), &s(1), &VarSet::empty(), 1.0, LogBase::Two).unwrap();
        let expected = -0.25 * ((10.25f64 / 11.0).log2() + 3.0 * (0.25f64 / 11.0).log2());
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn d_n_rejects_bad_ess() {
        let ds = pair(vec![0, 1], vec![1, 0]);
        assert!(d_n(&ds, &s(0), &s(1), &VarSet::empty(), 0.0, LogBase::E).is_err());
    }

    #[test]
    fn decisions_on_small_samples() {
        let ds = pair(vec![0; 5], vec![0; 5]);
        let v = ci_decide_pair(&ds, 0, 1, &PriorSpec::Jeffreys, 0.5).unwrap();
        assert!(v.independent);
        let v = ci_decide_pair(&ds, 0, 1, &PriorSpec::bdeu(1.0), 0.5).unwrap();
        assert!(!v.independent);
        assert!(v.left < v.right);
    }

    #[test]
    fn copied_column_is_dependent() {
        let x: Vec<u32> = (0..200).map(|k| (k % 2) as u32).collect();
        let ds = pair(x.clone(), x);
        let v = ci_decide_pair(&ds, 0, 1, &PriorSpec::Jeffreys, 0.5).unwrap();
        assert!(!v.independent);
        let j = j_statistic(&ds, &s(0), &s(1), &VarSet::empty(), &PriorSpec::Jeffreys).unwrap();
        assert!((j - 2f64.ln()).abs() < 0.05);
    }

    #[test]
    fn p_outside_unit_interval_is_rejected() {
        let ds = pair(vec![0, 1], vec![1, 0]);
        for p in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(
                ci_decide_pair(&ds, 0, 1, &PriorSpec::Jeffreys, p),
                Err(Error::InvalidArgument(_))
            ));
        }
    }

    #[test]
    fn conditional_decision_uses_z() {
        let ds = determined();
        let zw = ds.varset(&["Z", "W"]).unwrap();
        let v = ci_decide_cond(&ds, 0, 3, &zw, &PriorSpec::Jeffreys, 0.5).unwrap();
        assert!(v.independent);
        let v = ci_decide_cond(&ds, 0, 3, &zw, &PriorSpec::bdeu(1.0), 0.5).unwrap();
        assert!(!v.independent);
    }

    #[test]
    fn residual_reconstructs_j() {
        let ds = determined();
        let zw = ds.varset(&["Z", "W"]).unwrap();
        let res = asymptotic_residuals(&ds, &[4, 8, 12], &s(0), &s(3), &zw, &PriorSpec::bdeu(1.0))
            .unwrap();
        for r in res {
            let n = r.n as f64;
            let rebuilt = r.i + r.d_n / n + r.residual / n;
            assert!((rebuilt - r.j).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_grid_must_increase() {
        let ds = determined();
        let err = asymptotic_residuals(
            &ds,
            &[8, 8],
            &s(0),
            &s(3),
            &VarSet::empty(),
            &PriorSpec::Jeffreys,
        );
        assert!(err.is_err());
        let err = asymptotic_residuals(
            &ds,
            &[8],
            &s(0),
            &s(3),
            &VarSet::empty(),
            &PriorSpec::custom_uniform(1.0),
        );
        assert!(matches!(err, Err(Error::Unsupported(_))));
    }
}
