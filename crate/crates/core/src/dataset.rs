//! Categorical datasets, variable subsets, contingency counts and empirical
//! conditional entropy.
//!
//! The on-disk format is a comma-separated file whose header declares each
//! column as `name:arity`, followed by rows of integer codes in
//! `0..arity`. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::LogBase;

/// Dense counting is used for tables up to this many joint states.
const DENSE_COUNT_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Variable {
    pub name: String,
    pub arity: u32,
}

impl Variable {
    pub fn new(name: impl Into<String>, arity: u32) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

/// `n` rows of integer-coded categorical values with declared arities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    variables: Vec<Variable>,
    // row-major, n * variables.len()
    values: Vec<u32>,
    n: usize,
}

impl Dataset {
    /// Builds a dataset from rows, validating shape and value ranges.
    pub fn from_rows(variables: Vec<Variable>, rows: &[Vec<u32>]) -> Result<Self> {
        validate_header(&variables)?;
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let width = variables.len();
        let mut values = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected {width} values, found {}", row.len()),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                check_value(&variables[j], i + 1, v)?;
            }
            values.extend_from_slice(row);
        }
        Ok(Self {
            variables,
            values,
            n: rows.len(),
        })
    }

    /// Builds a dataset from equal-length columns.
    pub fn from_columns(variables: Vec<Variable>, columns: &[Vec<u32>]) -> Result<Self> {
        validate_header(&variables)?;
        if columns.len() != variables.len() {
            return Err(Error::InvalidArgument(format!(
                "{} columns for {} variables",
                columns.len(),
                variables.len()
            )));
        }
        let n = columns[0].len();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        if let Some(bad) = columns.iter().position(|c| c.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "column `{}` has {} values, expected {n}",
                variables[bad].name,
                columns[bad].len()
            )));
        }
        let width = variables.len();
        let mut values = vec![0u32; n * width];
        for (j, column) in columns.iter().enumerate() {
            for (i, &v) in column.iter().enumerate() {
                check_value(&variables[j], i + 1, v)?;
                values[i * width + j] = v;
            }
        }
        Ok(Self {
            variables,
            values,
            n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn arity(&self, var: usize) -> u32 {
        self.variables[var].arity
    }

    pub fn name(&self, var: usize) -> &str {
        &self.variables[var].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Resolves a variable name, failing with [`Error::UnknownVariable`].
    pub fn resolve(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Resolves a list of names into a [`VarSet`].
    pub fn varset<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        let indices = names
            .iter()
            .map(|n| self.resolve(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        VarSet::new(indices)
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let w = self.variables.len();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.values.chunks_exact(self.variables.len().max(1))
    }

    pub fn column(&self, var: usize) -> impl Iterator<Item = u32> + '_ {
        self.rows().map(move |r| r[var])
    }

    /// The first `n` rows as a new dataset.
    pub fn prefix(&self, n: usize) -> Result<Dataset> {
        if n == 0 || n > self.n {
            return Err(Error::InvalidArgument(format!(
                "prefix length {n} outside 1..={}",
                self.n
            )));
        }
        let w = self.variables.len();
        Ok(Dataset {
            variables: self.variables.clone(),
            values: self.values[..n * w].to_vec(),
            n,
        })
    }

    /// Checks that every index of `set` names a column of this dataset.
    pub fn check_varset(&self, set: &VarSet) -> Result<()> {
        match set.indices().iter().find(|&&i| i >= self.num_vars()) {
            Some(&i) => Err(Error::InvalidArgument(format!(
                "variable index {i} out of range for {} columns",
                self.num_vars()
            ))),
            None => Ok(()),
        }
    }

    pub fn check_var(&self, var: usize) -> Result<()> {
        if var < self.num_vars() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "variable index {var} out of range for {} columns",
                self.num_vars()
            )))
        }
    }

    /// Product of arities of the members of `set`; 1 for the empty set.
    pub fn joint_arity(&self, set: &VarSet) -> Result<u64> {
        self.check_varset(set)?;
        set.indices().iter().try_fold(1u64, |acc, &i| {
            acc.checked_mul(self.arity(i) as u64)
                .ok_or_else(|| Error::Capacity(format!("joint state space of {set} overflows u64")))
        })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header = self
            .variables
            .iter()
            .map(|v| format!("{}:{}", v.name, v.arity))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "{header}")?;
        for row in self.rows() {
            let line = row.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ASCII")
    }
}

fn validate_header(variables: &[Variable]) -> Result<()> {
    if variables.is_empty() {
        return Err(Error::Header("no columns declared".into()));
    }
    for (i, v) in variables.iter().enumerate() {
        if v.name.is_empty() {
            return Err(Error::Header(format!("column {} has an empty name", i + 1)));
        }
        if v.arity < 2 {
            return Err(Error::Header(format!(
                "column `{}` declares arity {}, must be at least 2",
                v.name, v.arity
            )));
        }
        if variables[..i].iter().any(|w| w.name == v.name) {
            return Err(Error::Header(format!("duplicate column name `{}`", v.name)));
        }
    }
    Ok(())
}

fn check_value(var: &Variable, row: usize, value: u32) -> Result<()> {
    if value >= var.arity {
        return Err(Error::Validation {
            row,
            column: var.name.clone(),
            message: format!("value {value} not in 0..{}", var.arity),
        });
    }
    Ok(())
}

fn parse_header_token(token: &str) -> Result<Variable> {
    let (name, arity) = token
        .rsplit_once(':')
        .ok_or_else(|| Error::Header(format!("token `{token}` is not of the form name:arity")))?;
    let name = name.trim();
    let arity: u32 = arity
        .trim()
        .parse()
        .map_err(|_| Error::Header(format!("column `{name}` has non-integer arity `{arity}`")))?;
    Ok(Variable::new(name, arity))
}

/// Reads a dataset in the `name:arity` CSV format.
pub fn load_csv<R: Read>(source: R) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let mut records = reader.records();
    let header = loop {
        match records.next() {
            None => return Err(Error::Header("missing header line".into())),
            Some(rec) => {
                let rec = rec?;
                if rec.iter().all(str::is_empty) {
                    continue;
                }
                break rec;
            }
        }
    };
    let variables = header
        .iter()
        .map(parse_header_token)
        .collect::<Result<Vec<_>>>()?;
    validate_header(&variables)?;

    let width = variables.len();
    let mut values = Vec::new();
    let mut n = 0usize;
    for rec in records {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        n += 1;
        if rec.len() != width {
            return Err(Error::Parse {
                line,
                message: format!("expected {width} values, found {}", rec.len()),
            });
        }
        for (j, field) in rec.iter().enumerate() {
            let var = &variables[j];
            let parsed: i64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{field}` is not an integer (column `{}`)", var.name),
            })?;
            if parsed < 0 || parsed >= var.arity as i64 {
                return Err(Error::Validation {
                    row: n,
                    column: var.name.clone(),
                    message: format!("value {parsed} not in 0..{}", var.arity),
                });
            }
            values.push(parsed as u32);
        }
    }
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(Dataset {
        variables,
        values,
        n,
    })
}

pub fn load_csv_path(path: impl AsRef<Path>) -> Result<Dataset> {
    let file = File::open(path)?;
    load_csv(BufReader::new(file))
}

/// Ordered subset of variable indices, kept sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VarSet(Vec<usize>);

impl VarSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(var: usize) -> Self {
        Self(vec![var])
    }

    /// Sorts the indices; duplicates are rejected.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "duplicate variable in set {v:?}"
            )));
        }
        Ok(Self(v))
    }

    /// Members are the set bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    /// Bitmask of the members; all members must be below 64.
    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &i| {
            assert!(i < 64, "variable index {i} does not fit a 64-bit mask");
            m | 1 << i
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.0.binary_search(&var).is_ok()
    }

    pub fn with(&self, var: usize) -> Self {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&var) {
            v.insert(pos, var);
        }
        Self(v)
    }

    pub fn without(&self, var: usize) -> Self {
        Self(self.0.iter().copied().filter(|&i| i != var).collect())
    }

    pub fn union(&self, other: &VarSet) -> Self {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn is_disjoint(&self, other: &VarSet) -> bool {
        self.0.iter().all(|&i| !other.contains(i))
    }

    /// All subsets with at most `max_size` members, ordered by size and then
    /// lexicographically.
    pub fn subsets(&self, max_size: usize) -> Vec<VarSet> {
        let k = self.0.len();
        assert!(k < 64, "subset enumeration limited to 63 members");
        let mut out: Vec<VarSet> = (0u64..1 << k)
            .filter(|m| m.count_ones() as usize <= max_size)
            .map(|m| {
                VarSet(
                    (0..k)
                        .filter(|&b| m >> b & 1 == 1)
                        .map(|b| self.0[b])
                        .collect(),
                )
            })
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// Joint configuration index of `row` restricted to this set (first
    /// member most significant).
    pub fn encode(&self, ds: &Dataset, row: &[u32]) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &i| acc * ds.arity(i) as u64 + row[i] as u64)
    }

    /// Inverse of [`VarSet::encode`].
    pub fn decode(&self, ds: &Dataset, mut index: u64) -> Vec<u32> {
        let mut out = vec![0u32; self.0.len()];
        for (slot, &i) in out.iter_mut().zip(self.0.iter()).rev() {
            let a = ds.arity(i) as u64;
            *slot = (index % a) as u32;
            index /= a;
        }
        out
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Joint-configuration counts `c(s)` over a variable subset. Only nonzero
/// cells are stored; `joint_arity` counts every cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    subset: VarSet,
    arities: Vec<u32>,
    joint_arity: u64,
    cells: BTreeMap<u64, u64>,
    n: u64,
}

impl ContingencyTable {
    pub fn subset(&self) -> &VarSet {
        &self.subset
    }

    pub fn joint_arity(&self) -> u64 {
        self.joint_arity
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Count of the cell with configuration index `index` (0 if absent).
    pub fn get(&self, index: u64) -> u64 {
        self.cells.get(&index).copied().unwrap_or(0)
    }

    /// Count of a configuration given as values in subset order.
    pub fn count_of(&self, config: &[u32]) -> u64 {
        let idx = config
            .iter()
            .zip(&self.arities)
            .fold(0u64, |acc, (&v, &a)| acc * a as u64 + v as u64);
        self.get(idx)
    }

    /// Nonzero cells in increasing index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.cells.iter().map(|(&k, &v)| (k, v))
    }

    pub fn num_nonzero(&self) -> usize {
        self.cells.len()
    }

    pub fn num_zero(&self) -> u64 {
        self.joint_arity - self.cells.len() as u64
    }

    fn decode(&self, mut index: u64) -> Vec<u32> {
        let mut out = vec![0u32; self.arities.len()];
        for (slot, &a) in out.iter_mut().zip(&self.arities).rev() {
            *slot = (index % a as u64) as u32;
            index /= a as u64;
        }
        out
    }

    /// Sums out every variable not in `sub`.
    pub fn marginalize(&self, sub: &VarSet) -> Result<ContingencyTable> {
        if !sub.is_subset(&self.subset) {
            return Err(Error::InvalidArgument(format!(
                "{sub} is not a subset of {}",
                self.subset
            )));
        }
        let keep: Vec<usize> = sub
            .indices()
            .iter()
            .map(|v| self.subset.indices().iter().position(|w| w == v).unwrap())
            .collect();
        let arities: Vec<u32> = keep.iter().map(|&p| self.arities[p]).collect();
        let mut cells = BTreeMap::new();
        for (idx, c) in self.nonzero() {
            let config = self.decode(idx);
            let key = keep.iter().fold(0u64, |acc, &p| {
                acc * self.arities[p] as u64 + config[p] as u64
            });
            *cells.entry(key).or_insert(0) += c;
        }
        Ok(ContingencyTable {
            subset: sub.clone(),
            joint_arity: arities.iter().map(|&a| a as u64).product(),
            arities,
            cells,
            n: self.n,
        })
    }
}

/// Exact joint frequencies of `set`.
pub fn counts(ds: &Dataset, set: &VarSet) -> Result<ContingencyTable> {
    let joint_arity = ds.joint_arity(set)?;
    let arities: Vec<u32> = set.indices().iter().map(|&i| ds.arity(i)).collect();
    let cells = if joint_arity <= DENSE_COUNT_LIMIT {
        let mut dense = vec![0u64; joint_arity as usize];
        for row in ds.rows() {
            dense[set.encode(ds, row) as usize] += 1;
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(k, c)| (k as u64, c))
            .collect()
    } else {
        let mut sparse = BTreeMap::new();
        for row in ds.rows() {
            *sparse.entry(set.encode(ds, row)).or_insert(0u64) += 1;
        }
        sparse
    };
    Ok(ContingencyTable {
        subset: set.clone(),
        arities,
        joint_arity,
        cells,
        n: ds.n() as u64,
    })
}

/// Counts of a child variable grouped by the configuration of its parents.
#[derive(Debug, Clone)]
pub struct FamilyCounts {
    pub child: usize,
    pub parents: VarSet,
    pub child_arity: u32,
    pub parent_arity: u64,
    /// Parent configuration index -> counts per child value. Only observed
    /// parent configurations are present.
    pub by_parent: BTreeMap<u64, Vec<u64>>,
}

impl FamilyCounts {
    pub fn compute(ds: &Dataset, child: usize, parents: &VarSet) -> Result<Self> {
        ds.check_var(child)?;
        if parents.contains(child) {
            return Err(Error::InvalidArgument(format!(
                "child {child} appears in its own parent set {parents}"
            )));
        }
        let parent_arity = ds.joint_arity(parents)?;
        let child_arity = ds.arity(child);
        let mut by_parent: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for row in ds.rows() {
            let u = parents.encode(ds, row);
            by_parent
                .entry(u)
                .or_insert_with(|| vec![0; child_arity as usize])[row[child] as usize] += 1;
        }
        Ok(Self {
            child,
            parents: parents.clone(),
            child_arity,
            parent_arity,
            by_parent,
        })
    }
}

/// Empirical conditional entropy `H^n(X|U)` with `0 log 0 = 0`.
pub fn empirical_cond_entropy(
    ds: &Dataset,
    child: usize,
    given: &VarSet,
    base: LogBase,
) -> Result<f64> {
    let family = FamilyCounts::compute(ds, child, given)?;
    Ok(base.from_nat(entropy_nat(&family, ds.n())))
}

pub(crate) fn entropy_nat(family: &FamilyCounts, n: usize) -> f64 {
    let n = n as f64;
    let mut h = 0.0;
    for child_counts in family.by_parent.values() {
        let cu: u64 = child_counts.iter().sum();
        for &c in child_counts.iter().filter(|&&c| c > 0) {
            h -= (c as f64 / n) * (c as f64 / cu as f64).ln();
        }
    }
    // clamp the -0.0 produced by log(1) terms
    h.max(0.0)
}
