//! C ABI over `bdscore`.
//!
//! Every fallible function returns a [`BdStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can
//! be read with [`bd_last_error_message`]. Handles are opaque and must be
//! released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use bdscore::dataset::empirical_cond_entropy;
use bdscore::search::{build_parent_tables, learn_exact_from_table};
use bdscore::{
    ci_decide_sets, conditional_score_local, conditional_score_ratio, j_statistic, load_csv,
    load_csv_path, log_gamma, marginal_score, Dataset, Error, LogBase, Network, ParentWeight,
    PriorSpec, VarSet,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnknownVariable = 4,
    Domain = 5,
    Parse = 6,
    Io = 7,
    Capacity = 8,
    Unsupported = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BdPriorKind {
    Jeffreys = 0,
    Bdeu = 1,
    /// The same `cell_weight` on every cell.
    Custom = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BdPrior {
    pub kind: BdPriorKind,
    /// Equivalent sample size, read for `BDEU`.
    pub ess: f64,
    /// Read for `CUSTOM`.
    pub cell_weight: f64,
}

/// Opaque dataset handle.
pub struct BdDataset(Dataset);

/// Opaque network handle.
pub struct BdNetwork(Network);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> BdStatus {
    match e {
        Error::Domain(_) => BdStatus::Domain,
        Error::InvalidArgument(_) | Error::Config(_) | Error::Cyclic(_) => {
            BdStatus::InvalidArgument
        }
        Error::UnknownVariable(_) => BdStatus::UnknownVariable,
        Error::Header(_)
        | Error::Parse { .. }
        | Error::Validation { .. }
        | Error::EmptyDataset
        | Error::Csv(_) => BdStatus::Parse,
        Error::Io(_) => BdStatus::Io,
        Error::Capacity(_) => BdStatus::Capacity,
        Error::MissingEntry { .. } | Error::Unsupported(_) => BdStatus::Unsupported,
    }
}

struct Fail(BdStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(BdStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            BdStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            BdStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn varset(vars: *const usize, len: usize) -> Result<VarSet, Fail> {
    if len == 0 {
        return Ok(VarSet::empty());
    }
    if vars.is_null() {
        return Err(null("variable array"));
    }
    Ok(VarSet::new(
        slice::from_raw_parts(vars, len).iter().copied(),
    )?)
}

unsafe fn prior(p: *const BdPrior) -> Result<PriorSpec, Fail> {
    let p = deref(p, "prior")?;
    let spec = match p.kind {
        BdPriorKind::Jeffreys => PriorSpec::Jeffreys,
        BdPriorKind::Bdeu => PriorSpec::bdeu(p.ess),
        BdPriorKind::Custom => PriorSpec::custom_uniform(p.cell_weight),
    };
    spec.validate()?;
    Ok(spec)
}

unsafe fn dataset<'a>(ds: *const BdDataset) -> Result<&'a Dataset, Fail> {
    Ok(&deref(ds, "dataset")?.0)
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(BdStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// Message for the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a `name:arity` headed CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_dataset_load_path(
    path: *const c_char,
    out: *mut *mut BdDataset,
) -> BdStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let ds = load_csv_path(path)?;
        write_out(out, Box::into_raw(Box::new(BdDataset(ds))))
    })
}

/// Loads a CSV document from `len` bytes at `data`.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_dataset_load_bytes(
    data: *const u8,
    len: usize,
    out: *mut *mut BdDataset,
) -> BdStatus {
    guard(|| {
        if data.is_null() && len > 0 {
            return Err(null("data"));
        }
        let bytes = if len == 0 {
            &[][..]
        } else {
            slice::from_raw_parts(data, len)
        };
        let ds = load_csv(bytes)?;
        write_out(out, Box::into_raw(Box::new(BdDataset(ds))))
    })
}

/// Releases a dataset. Null is ignored.
///
/// # Safety
/// `ds` must come from a `bd_dataset_load_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bd_dataset_free(ds: *mut BdDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// # Safety
/// `ds` must be a live dataset handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_dataset_num_rows(ds: *const BdDataset, out: *mut usize) -> BdStatus {
    guard(|| write_out(out, dataset(ds)?.n()))
}

/// # Safety
/// `ds` must be a live dataset handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_dataset_num_vars(ds: *const BdDataset, out: *mut usize) -> BdStatus {
    guard(|| write_out(out, dataset(ds)?.num_vars()))
}

/// # Safety
/// `ds` must be a live dataset handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_dataset_arity(
    ds: *const BdDataset,
    var: usize,
    out: *mut u32,
) -> BdStatus {
    guard(|| {
        let ds = dataset(ds)?;
        ds.check_var(var)?;
        write_out(out, ds.arity(var))
    })
}

/// Column index of the variable called `name`.
///
/// # Safety
/// `ds` must be a live dataset handle, `name` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn bd_dataset_index_of(
    ds: *const BdDataset,
    name: *const c_char,
    out: *mut usize,
) -> BdStatus {
    guard(|| {
        let ds = dataset(ds)?;
        let name = c_str(name, "name")?;
        write_out(out, ds.resolve(name)?)
    })
}

/// Natural-log marginal score of the variables `vars[0..len]`.
///
/// # Safety
/// Pointers must be valid; `vars` may be null only when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn bd_marginal_score(
    ds: *const BdDataset,
    vars: *const usize,
    len: usize,
    prior_spec: *const BdPrior,
    out: *mut f64,
) -> BdStatus {
    guard(|| {
        let s = marginal_score(dataset(ds)?, &varset(vars, len)?, &prior(prior_spec)?)?;
        write_out(out, s.value)
    })
}

/// Natural-log ratio-form conditional score of `child` given the parents.
///
/// # Safety
/// Pointers must be valid; `parents` may be null only when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn bd_conditional_score(
    ds: *const BdDataset,
    child: usize,
    parents: *const usize,
    len: usize,
    prior_spec: *const BdPrior,
    out: *mut f64,
) -> BdStatus {
    guard(|| {
        let ds = dataset(ds)?;
        let s = conditional_score_ratio(ds, child, &varset(parents, len)?, &prior(prior_spec)?)?;
        write_out(out, s.value)
    })
}

/// Local-form conditional score. A nonzero `independent` weights parent
/// configurations by the prior on the parents alone.
///
/// # Safety
/// Pointers must be valid; `parents` may be null only when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn bd_conditional_score_local(
    ds: *const BdDataset,
    child: usize,
    parents: *const usize,
    len: usize,
    prior_spec: *const BdPrior,
    independent: bool,
    out: *mut f64,
) -> BdStatus {
    guard(|| {
        let ds = dataset(ds)?;
        let weight = if independent {
            ParentWeight::Independent
        } else {
            ParentWeight::Coupled
        };
        let s = conditional_score_local(
            ds,
            child,
            &varset(parents, len)?,
            &prior(prior_spec)?,
            weight,
        )?;
        write_out(out, s.value)
    })
}

/// Empirical `H(child | parents)`, in bits when `base_two` is set.
///
/// # Safety
/// Pointers must be valid; `parents` may be null only when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn bd_cond_entropy(
    ds: *const BdDataset,
    child: usize,
    parents: *const usize,
    len: usize,
    base_two: bool,
    out: *mut f64,
) -> BdStatus {
    guard(|| {
        let base = if base_two { LogBase::Two } else { LogBase::E };
        let h = empirical_cond_entropy(dataset(ds)?, child, &varset(parents, len)?, base)?;
        write_out(out, h)
    })
}

/// `J(n)` in nats for single variables `x`, `y` given `z[0..z_len]`.
///
/// # Safety
/// Pointers must be valid; `z` may be null only when `z_len` is 0.
#[no_mangle]
pub unsafe extern "C" fn bd_j_statistic(
    ds: *const BdDataset,
    x: usize,
    y: usize,
    z: *const usize,
    z_len: usize,
    prior_spec: *const BdPrior,
    out: *mut f64,
) -> BdStatus {
    guard(|| {
        let ds = dataset(ds)?;
        ds.check_var(x)?;
        ds.check_var(y)?;
        let j = j_statistic(
            ds,
            &VarSet::singleton(x),
            &VarSet::singleton(y),
            &varset(z, z_len)?,
            &prior(prior_spec)?,
        )?;
        write_out(out, j)
    })
}

/// Score-based test of `x ⊥ y | z` with prior independence probability `p`.
///
/// # Safety
/// Pointers must be valid; `z` may be null only when `z_len` is 0.
#[no_mangle]
pub unsafe extern "C" fn bd_ci_decide(
    ds: *const BdDataset,
    x: usize,
    y: usize,
    z: *const usize,
    z_len: usize,
    prior_spec: *const BdPrior,
    p: f64,
    out_independent: *mut bool,
) -> BdStatus {
    guard(|| {
        let ds = dataset(ds)?;
        ds.check_var(x)?;
        ds.check_var(y)?;
        let v = ci_decide_sets(
            ds,
            &VarSet::singleton(x),
            &VarSet::singleton(y),
            &varset(z, z_len)?,
            &prior(prior_spec)?,
            p,
        )?;
        write_out(out_independent, v.independent)
    })
}

/// Exact highest-scoring DAG with at most `max_parents` parents per node
/// (clamped to N-1). The log score goes to `out_score` when it is not null.
///
/// # Safety
/// `ds` and `prior_spec` must be valid, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_learn_exact(
    ds: *const BdDataset,
    prior_spec: *const BdPrior,
    max_parents: usize,
    out: *mut *mut BdNetwork,
    out_score: *mut f64,
) -> BdStatus {
    guard(|| {
        let ds = dataset(ds)?;
        let cap = max_parents.min(ds.num_vars().saturating_sub(1));
        let table = build_parent_tables(ds, &prior(prior_spec)?, cap)?;
        let (net, score) = learn_exact_from_table(&table)?;
        if !out_score.is_null() {
            out_score.write(score);
        }
        write_out(out, Box::into_raw(Box::new(BdNetwork(net))))
    })
}

/// Releases a network. Null is ignored.
///
/// # Safety
/// `net` must come from `bd_learn_exact` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bd_network_free(net: *mut BdNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// # Safety
/// `net` must be a live network handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_network_num_vars(net: *const BdNetwork, out: *mut usize) -> BdStatus {
    guard(|| write_out(out, deref(net, "network")?.0.num_vars()))
}

/// Copies the parents of `var` into `buf`, ascending. `out_len` always
/// receives the parent count; `BUFFER_TOO_SMALL` is returned when it
/// exceeds `cap`.
///
/// # Safety
/// `net` must be live, `buf` writable for `cap` entries (or null when `cap`
/// is 0), and `out_len` valid.
#[no_mangle]
pub unsafe extern "C" fn bd_network_parents(
    net: *const BdNetwork,
    var: usize,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> BdStatus {
    guard(|| {
        let net = &deref(net, "network")?.0;
        if var >= net.num_vars() {
            return Err(Fail(
                BdStatus::InvalidArgument,
                format!("variable {var} out of range"),
            ));
        }
        let parents = net.parents(var).indices();
        write_out(out_len, parents.len())?;
        if parents.len() > cap {
            return Err(Fail(
                BdStatus::BufferTooSmall,
                format!("{} parents do not fit in {cap}", parents.len()),
            ));
        }
        if !parents.is_empty() {
            if buf.is_null() {
                return Err(null("buffer"));
            }
            ptr::copy_nonoverlapping(parents.as_ptr(), buf, parents.len());
        }
        Ok(())
    })
}

/// `ln Γ(z)` for `z > 0`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_log_gamma(z: f64, out: *mut f64) -> BdStatus {
    guard(|| write_out(out, log_gamma(z)?))
}
