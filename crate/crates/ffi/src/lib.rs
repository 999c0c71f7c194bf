//! C ABI over `subqubo`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` /
//! `*_build` functions and released by the matching `*_free`. Every fallible
//! call returns an [`SqStatus`]; on failure the message is kept per thread
//! and can be read with [`sq_last_error_message`].
//!
//! Matrices are row-major `double` arrays. Assignments are `uint8_t` arrays
//! holding 0 or 1.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use subqubo::{
    brute_force_solve_capped, build_qubo, effective_rhs, energy, export_sampler_script,
    simulated_anneal, sweep, verify_solution, AnnealSchedule, Assignment, BinaryEncoding, Error,
    LinearSystem, QuboMatrix, SampleSet, Solver, SubrangeSpec, SweepOptions, SweepReport,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqStatus {
    Ok = 0,
    NullPointer = 1,
    Dimension = 2,
    Index = 3,
    Domain = 4,
    Capacity = 5,
    Config = 6,
    Parse = 7,
    Validation = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

impl From<&Error> for SqStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension(_) => SqStatus::Dimension,
            Error::Index(_) => SqStatus::Index,
            Error::Domain(_) => SqStatus::Domain,
            Error::Capacity(_) => SqStatus::Capacity,
            Error::Config(_) => SqStatus::Config,
            Error::Parse(_) => SqStatus::Parse,
            Error::Validation(_) => SqStatus::Validation,
            Error::Io(_) => SqStatus::Io,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqSolverKind {
    BruteForce = 0,
    Anneal = 1,
}

/// Annealing parameters. Zeroed fields are not replaced by defaults; use
/// [`sq_anneal_defaults`] to start from the library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SqAnnealSchedule {
    pub num_reads: u64,
    pub sweeps_per_read: u64,
    pub beta_initial: f64,
    pub beta_final: f64,
    pub seed: u64,
}

impl From<SqAnnealSchedule> for AnnealSchedule {
    fn from(s: SqAnnealSchedule) -> Self {
        AnnealSchedule {
            num_reads: s.num_reads,
            sweeps_per_read: s.sweeps_per_read,
            beta_initial: s.beta_initial,
            beta_final: s.beta_final,
            seed: s.seed,
        }
    }
}

/// Opaque linear system `A x = b`.
pub struct SqSystem(LinearSystem);

/// Opaque upper-triangular QUBO matrix.
pub struct SqQubo(QuboMatrix);

/// Opaque sampler output.
pub struct SqSampleSet(SampleSet);

/// Opaque sweep report.
pub struct SqReport(SweepReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Failure {
    Lib(Error),
    Status(SqStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(SqStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SqStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SqStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            let status = SqStatus::from(&e);
            set_error(e.to_string());
            status
        }
        Ok(Err(Failure::Status(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside subqubo".into());
            SqStatus::Panic
        }
    }
}

unsafe fn slice_in<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a, T>(
    p: *mut T,
    len: usize,
    need: usize,
    what: &str,
) -> Result<&'a mut [T], Failure> {
    if len < need {
        return Err(Failure::Status(
            SqStatus::BufferTooSmall,
            format!("{what} holds {len} elements, {need} required"),
        ));
    }
    if need == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, need))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn sq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn sq_anneal_defaults() -> SqAnnealSchedule {
    let d = AnnealSchedule::default();
    SqAnnealSchedule {
        num_reads: d.num_reads,
        sweeps_per_read: d.sweeps_per_read,
        beta_initial: d.beta_initial,
        beta_final: d.beta_final,
        seed: d.seed,
    }
}

/// Creates a system from a row-major `n * n` matrix and a length-`n` RHS.
///
/// # Safety
/// `a` must point to `n * n` doubles, `b` to `n` doubles, `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn sq_system_new(
    n: usize,
    a: *const f64,
    b: *const f64,
    out: *mut *mut SqSystem,
) -> SqStatus {
    guard(|| {
        let len = n
            .checked_mul(n)
            .ok_or_else(|| Failure::Lib(Error::Capacity(format!("n = {n}"))))?;
        let a = slice_in(a, len, "a")?.to_vec();
        let b = slice_in(b, n, "b")?.to_vec();
        let system = LinearSystem::from_row_major(n, a, b)?;
        write_out(out, Box::into_raw(Box::new(SqSystem(system))), "out")
    })
}

/// # Safety
/// `system` must come from [`sq_system_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sq_system_free(system: *mut SqSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// # Safety
/// `system` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_system_dim(system: *const SqSystem) -> usize {
    system.as_ref().map_or(0, |s| s.0.n())
}

/// Residual `||A x - b||^2`.
///
/// # Safety
/// `x` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_verify_solution(
    system: *const SqSystem,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> SqStatus {
    guard(|| {
        let system = handle(system, "system")?;
        let x = slice_in(x, len, "x")?;
        let r = verify_solution(&system.0, x)?;
        write_out(out, r, "out")
    })
}

/// Builds the QUBO of the window translated by `t` (`t_len == n`), or of the
/// untranslated problem when `t` is NULL. `lo`/`hi` are the bit exponents.
/// The window's target energy `-c^T c` goes to `target_energy` when it is
/// not NULL.
///
/// # Safety
/// Pointers must be valid for the stated lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_qubo_build(
    system: *const SqSystem,
    lo: i32,
    hi: i32,
    t: *const i64,
    t_len: usize,
    target_energy: *mut f64,
    out: *mut *mut SqQubo,
) -> SqStatus {
    guard(|| {
        let system = &handle(system, "system")?.0;
        let encoding = BinaryEncoding::new(lo, hi)?;
        let (c, target) = if t.is_null() {
            let c = system.b().to_vec();
            let target = -c.iter().map(|v| v * v).sum::<f64>();
            (c, target)
        } else {
            let t = slice_in(t, t_len, "t")?;
            if t.len() != system.n() {
                return Err(Error::Dimension(format!(
                    "t: expected length {}, got {}",
                    system.n(),
                    t.len()
                ))
                .into());
            }
            let spec = SubrangeSpec::from_translations(t, None, &encoding)?;
            let rhs = effective_rhs(system, &spec)?;
            (rhs.c().to_vec(), rhs.target_energy())
        };
        let q = build_qubo(system, &c, &encoding)?;
        if !target_energy.is_null() {
            target_energy.write(target);
        }
        write_out(out, Box::into_raw(Box::new(SqQubo(q))), "out")
    })
}

/// Wraps a row-major `dim * dim` upper-triangular matrix.
///
/// # Safety
/// `entries` must point to `dim * dim` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_qubo_from_dense(
    dim: usize,
    entries: *const f64,
    out: *mut *mut SqQubo,
) -> SqStatus {
    guard(|| {
        let len = dim
            .checked_mul(dim)
            .ok_or_else(|| Failure::Lib(Error::Capacity(format!("dim = {dim}"))))?;
        let flat = slice_in(entries, len, "entries")?;
        let rows: Vec<Vec<f64>> = flat.chunks(dim.max(1)).map(<[f64]>::to_vec).collect();
        let q = QuboMatrix::from_rows(&rows)?;
        write_out(out, Box::into_raw(Box::new(SqQubo(q))), "out")
    })
}

/// # Safety
/// `q` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sq_qubo_free(q: *mut SqQubo) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// # Safety
/// `q` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_qubo_dim(q: *const SqQubo) -> usize {
    q.as_ref().map_or(0, |q| q.0.dim())
}

/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_qubo_get(
    q: *const SqQubo,
    i: usize,
    j: usize,
    out: *mut f64,
) -> SqStatus {
    guard(|| {
        let q = &handle(q, "q")?.0;
        if i >= q.dim() || j >= q.dim() {
            return Err(
                Error::Index(format!("({i}, {j}) outside a {0}x{0} matrix", q.dim())).into(),
            );
        }
        write_out(out, q.get(i, j), "out")
    })
}

/// Copies the row-major matrix into `buf` (at least `dim * dim` doubles).
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sq_qubo_copy_dense(
    q: *const SqQubo,
    buf: *mut f64,
    len: usize,
) -> SqStatus {
    guard(|| {
        let q = &handle(q, "q")?.0;
        let src = q.row_major();
        slice_out(buf, len, src.len(), "buf")?.copy_from_slice(src);
        Ok(())
    })
}

/// # Safety
/// `bits` must point to `len` bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_qubo_energy(
    q: *const SqQubo,
    bits: *const u8,
    len: usize,
    out: *mut f64,
) -> SqStatus {
    guard(|| {
        let q = &handle(q, "q")?.0;
        let a = Assignment::new(slice_in(bits, len, "bits")?.to_vec())?;
        write_out(out, energy(q, &a)?, "out")
    })
}

/// Exhaustive minimum. Writes the energy, the number of minimizers, and
/// the first minimizer (lexicographically) into `bits`.
///
/// # Safety
/// `bits` must point to `len >= dim` writable bytes; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_brute_force(
    q: *const SqQubo,
    cap: usize,
    min_energy: *mut f64,
    num_minimizers: *mut usize,
    bits: *mut u8,
    len: usize,
) -> SqStatus {
    guard(|| {
        let q = &handle(q, "q")?.0;
        let g = brute_force_solve_capped(q, cap)?;
        let first = g.minimizers[0].bits();
        slice_out(bits, len, first.len(), "bits")?.copy_from_slice(first);
        write_out(min_energy, g.min_energy, "min_energy")?;
        write_out(num_minimizers, g.minimizers.len(), "num_minimizers")
    })
}

/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_anneal(
    q: *const SqQubo,
    schedule: SqAnnealSchedule,
    out: *mut *mut SqSampleSet,
) -> SqStatus {
    guard(|| {
        let q = &handle(q, "q")?.0;
        let set = simulated_anneal(q, &schedule.into())?;
        write_out(out, Box::into_raw(Box::new(SqSampleSet(set))), "out")
    })
}

/// # Safety
/// `set` must come from [`sq_anneal`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sq_sample_set_free(set: *mut SqSampleSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_sample_set_len(set: *const SqSampleSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.records().len())
}

/// Record `index` (0 is lowest energy): energy, occurrences and bits.
///
/// # Safety
/// `bits` must point to `len` writable bytes; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_sample_set_record(
    set: *const SqSampleSet,
    index: usize,
    energy: *mut f64,
    occurrences: *mut u64,
    bits: *mut u8,
    len: usize,
) -> SqStatus {
    guard(|| {
        let set = &handle(set, "set")?.0;
        let rec = set.records().get(index).ok_or_else(|| {
            Failure::Lib(Error::Index(format!(
                "record {index} of {}",
                set.records().len()
            )))
        })?;
        let src = rec.assignment.bits();
        slice_out(bits, len, src.len(), "bits")?.copy_from_slice(src);
        write_out(energy, rec.energy, "energy")?;
        write_out(occurrences, rec.occurrences, "occurrences")
    })
}

/// Sweeps all `(2s)^n` windows of an integer encoding with `bits_per_var`
/// qubits per variable. `schedule` is read only for the annealing solver.
///
/// # Safety
/// `system` must be a live handle; `schedule` may be NULL for brute force;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_sweep(
    system: *const SqSystem,
    bits_per_var: u32,
    bound: u64,
    solver: SqSolverKind,
    brute_force_cap: usize,
    schedule: *const SqAnnealSchedule,
    stop_on_hit: bool,
    out: *mut *mut SqReport,
) -> SqStatus {
    guard(|| {
        let system = &handle(system, "system")?.0;
        let encoding = BinaryEncoding::with_bits(bits_per_var)?;
        let solver = match solver {
            SqSolverKind::BruteForce => Solver::BruteForce {
                cap: brute_force_cap,
            },
            SqSolverKind::Anneal => Solver::Anneal((*handle(schedule, "schedule")?).into()),
        };
        let report = sweep(
            system,
            &encoding,
            bound,
            &solver,
            SweepOptions {
                stop_on_hit,
                ..SweepOptions::default()
            },
        )?;
        write_out(out, Box::into_raw(Box::new(SqReport(report))), "out")
    })
}

/// # Safety
/// `report` must come from [`sq_sweep`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sq_report_free(report: *mut SqReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_report_hit_count(report: *const SqReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.hits.len())
}

/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sq_report_window_count(report: *const SqReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.per_subrange.len())
}

/// Translation, best energy, target energy and first decoded solution of
/// hit `hit`. `translation` and `x` must each hold at least `n` elements.
///
/// # Safety
/// Buffers must be valid for `len` elements; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_report_hit(
    report: *const SqReport,
    hit: usize,
    translation: *mut i64,
    x: *mut f64,
    len: usize,
    best_energy: *mut f64,
    target_energy: *mut f64,
) -> SqStatus {
    guard(|| {
        let report = &handle(report, "report")?.0;
        let r = report.hit_results().nth(hit).ok_or_else(|| {
            Failure::Lib(Error::Index(format!("hit {hit} of {}", report.hits.len())))
        })?;
        slice_out(translation, len, report.n, "translation")?.copy_from_slice(&r.translation);
        slice_out(x, len, report.n, "x")?.copy_from_slice(&r.solutions[0]);
        write_out(best_energy, r.best_energy, "best_energy")?;
        write_out(target_energy, r.target_energy, "target_energy")
    })
}

/// Report as JSON. Release with [`sq_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_report_to_json(
    report: *const SqReport,
    out: *mut *mut c_char,
) -> SqStatus {
    guard(|| {
        let report = &handle(report, "report")?.0;
        let text = serde_json_string(report)?;
        write_out(out, text.into_raw(), "out")
    })
}

fn serde_json_string(report: &SweepReport) -> Result<CString, Failure> {
    let text = subqubo::io::report_to_json(report)?;
    CString::new(text).map_err(|e| Failure::Lib(Error::Parse(e.to_string())))
}

/// D-Wave sampler script for `q`. Release with [`sq_string_free`].
///
/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sq_export_script(
    q: *const SqQubo,
    num_reads: u64,
    out: *mut *mut c_char,
) -> SqStatus {
    guard(|| {
        let q = &handle(q, "q")?.0;
        let text = CString::new(export_sampler_script(q, num_reads))
            .map_err(|e| Failure::Lib(Error::Parse(e.to_string())))?;
        write_out(out, text.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
