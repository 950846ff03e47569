//! C ABI over `gauss_spectrum`.
//!
//! Objects are opaque handles created by `gs_*` constructors and released with
//! the matching `*_free` function. Every fallible call returns a [`GsStatus`];
//! on failure the message is available from [`gs_last_error_message`] on the
//! same thread until the next failing call.

use gauss_spectrum::discretize::{assemble, mesh_domain, mesh_interval, AssembledSystem, Mesh};
use gauss_spectrum::eigensolve::{solve_dirichlet_lambda1, solve_neumann_mu1, SpectralResult};
use gauss_spectrum::geometry::{reflect, ConvexDomain};
use gauss_spectrum::hermite::{hermite_eval, spectral_solve_real_line};
use gauss_spectrum::scenarios::{run_scenario, ScenarioParams};
use gauss_spectrum::Error;
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result codes shared by all fallible functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DegenerateGeometry = 3,
    OutsideValidity = 4,
    NotApplicable = 5,
    Singular = 6,
    NoConvergence = 7,
    Parse = 8,
    IndexOutOfRange = 9,
    Panic = 10,
}

/// A convex domain.
pub struct GsDomain(ConvexDomain);
/// A conforming interval or triangle mesh.
pub struct GsMesh(Mesh);
/// Assembled Gaussian-weighted stiffness and mass matrices.
pub struct GsSystem(AssembledSystem);
/// Eigenvalues, eigenvectors and residual norms of one solve.
pub struct GsSpectrum(SpectralResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GsStatus {
    match e {
        Error::InvalidInput(_) => GsStatus::InvalidInput,
        Error::DegenerateQuery { .. } | Error::DegenerateCell { .. } => GsStatus::DegenerateGeometry,
        Error::OutsideValidity(_) => GsStatus::OutsideValidity,
        Error::NotApplicable(_) => GsStatus::NotApplicable,
        Error::Singular { .. } => GsStatus::Singular,
        Error::NoConvergence { .. } => GsStatus::NoConvergence,
        Error::Parse(_) => GsStatus::Parse,
    }
}

struct Fail(GsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(GsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(GsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(GsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(GsStatus::InvalidInput, format!("{what} is not UTF-8")))
}

fn publish<T>(out: &mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failure on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn gs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a domain from JSON such as `{"kind":"disk","center":[0,0],"radius":1}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_domain_from_json(json: *const c_char, out: *mut *mut GsDomain) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let domain: ConvexDomain =
            serde_json::from_str(text(json, "json")?).map_err(|e| Fail(GsStatus::Parse, e.to_string()))?;
        domain.validate()?;
        publish(out, GsDomain(domain));
        Ok(())
    })
}

/// # Safety
/// `domain` must come from `gs_domain_from_json` or be null.
#[no_mangle]
pub unsafe extern "C" fn gs_domain_free(domain: *mut GsDomain) {
    release(domain)
}

/// Unsigned distance from `(x, y)` to the boundary.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_domain_distance(domain: *const GsDomain, x: f64, y: f64, out: *mut f64) -> GsStatus {
    guard(|| {
        let d = deref(domain, "domain")?.0.distance([x, y]);
        *out_ptr(out, "out")? = d;
        Ok(())
    })
}

/// Reflects an interior point near the boundary; writes the image to
/// `out_point[0..2]` and the Jacobian determinant to `out_jacobian`.
///
/// # Safety
/// `out_point` must have room for two doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_domain_reflect(
    domain: *const GsDomain,
    x: f64,
    y: f64,
    out_point: *mut f64,
    out_jacobian: *mut f64,
) -> GsStatus {
    guard(|| {
        let r = reflect(&deref(domain, "domain")?.0, [x, y])?;
        if out_point.is_null() {
            return Err(Fail(GsStatus::NullPointer, "out_point is null".into()));
        }
        *out_point = r.phi[0];
        *out_point.add(1) = r.phi[1];
        *out_ptr(out_jacobian, "out_jacobian")? = r.jac_analytic;
        Ok(())
    })
}

/// Uniform mesh of `(a, b)` with `n` cells.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_mesh_interval(a: f64, b: f64, n: usize, out: *mut *mut GsMesh) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        publish(out, GsMesh(mesh_interval(a, b, n)?));
        Ok(())
    })
}

/// Meshes a bounded domain with target size `h`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_mesh_domain(domain: *const GsDomain, h: f64, out: *mut *mut GsMesh) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        publish(out, GsMesh(mesh_domain(&deref(domain, "domain")?.0, h)?));
        Ok(())
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `mesh` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn gs_mesh_vertex_count(mesh: *const GsMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.0.num_vertices())
}

/// Number of cells, or 0 for a null handle.
///
/// # Safety
/// `mesh` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn gs_mesh_cell_count(mesh: *const GsMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.0.num_cells())
}

/// # Safety
/// `mesh` must come from a `gs_mesh_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn gs_mesh_free(mesh: *mut GsMesh) {
    release(mesh)
}

/// Assembles the weighted P1 stiffness and mass matrices of a mesh.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_assemble(mesh: *const GsMesh, out: *mut *mut GsSystem) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        publish(out, GsSystem(assemble(&deref(mesh, "mesh")?.0)?));
        Ok(())
    })
}

/// # Safety
/// `system` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn gs_system_dof_count(system: *const GsSystem) -> usize {
    system.as_ref().map_or(0, |s| s.0.dof_count)
}

/// Gaussian measure of the meshed region (sum of the mass matrix), NaN for null.
///
/// # Safety
/// `system` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn gs_system_gaussian_mass(system: *const GsSystem) -> f64 {
    system.as_ref().map_or(f64::NAN, |s| s.0.gaussian_mass)
}

/// # Safety
/// `system` must come from `gs_assemble` or be null.
#[no_mangle]
pub unsafe extern "C" fn gs_system_free(system: *mut GsSystem) {
    release(system)
}

/// Lowest `count` nonzero Neumann eigenpairs.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_solve_neumann(system: *const GsSystem, count: usize, out: *mut *mut GsSpectrum) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        publish(out, GsSpectrum(solve_neumann_mu1(&deref(system, "system")?.0, count)?));
        Ok(())
    })
}

/// Lowest `count` Dirichlet eigenpairs, with the mesh boundary vertices fixed.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_solve_dirichlet(system: *const GsSystem, count: usize, out: *mut *mut GsSpectrum) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let sys = &deref(system, "system")?.0;
        publish(out, GsSpectrum(solve_dirichlet_lambda1(sys, &sys.boundary_dofs, count)?));
        Ok(())
    })
}

/// Number of eigenpairs, or 0 for null.
///
/// # Safety
/// `spectrum` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_len(spectrum: *const GsSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.len())
}

fn index_check(len: usize, i: usize) -> Result<(), Fail> {
    if i < len {
        Ok(())
    } else {
        Err(Fail(GsStatus::IndexOutOfRange, format!("index {i} out of range for {len} eigenpairs")))
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_eigenvalue(spectrum: *const GsSpectrum, i: usize, out: *mut f64) -> GsStatus {
    guard(|| {
        let s = &deref(spectrum, "spectrum")?.0;
        index_check(s.len(), i)?;
        *out_ptr(out, "out")? = s.eigenvalues[i];
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_residual(spectrum: *const GsSpectrum, i: usize, out: *mut f64) -> GsStatus {
    guard(|| {
        let s = &deref(spectrum, "spectrum")?.0;
        index_check(s.len(), i)?;
        *out_ptr(out, "out")? = s.residual_norms[i];
        Ok(())
    })
}

/// Copies eigenvector `i` (nodal values, M-normalized) into `buffer`, which
/// must hold exactly the system's dof count.
///
/// # Safety
/// `buffer` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_eigenvector(spectrum: *const GsSpectrum, i: usize, buffer: *mut f64, len: usize) -> GsStatus {
    guard(|| {
        let s = &deref(spectrum, "spectrum")?.0;
        index_check(s.len(), i)?;
        let v = &s.eigenvectors[i];
        if buffer.is_null() {
            return Err(Fail(GsStatus::NullPointer, "buffer is null".into()));
        }
        if len != v.len() {
            return Err(Fail(GsStatus::InvalidInput, format!("buffer holds {len} values, eigenvector has {}", v.len())));
        }
        std::slice::from_raw_parts_mut(buffer, len).copy_from_slice(v);
        Ok(())
    })
}

/// # Safety
/// `spectrum` must come from a `gs_solve_*` call or be null.
#[no_mangle]
pub unsafe extern "C" fn gs_spectrum_free(spectrum: *mut GsSpectrum) {
    release(spectrum)
}

/// Probabilists' Hermite polynomial `He_n(t)`.
#[no_mangle]
pub extern "C" fn gs_hermite_eval(n: u32, t: f64) -> f64 {
    hermite_eval(n as usize, t)
}

/// Spectral eigenvalues of the one-dimensional operator on the real line in
/// the Hermite basis up to degree `n_max`; `out` must hold `n_max + 1` values.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_spectral_real_line(n_max: usize, out: *mut f64, len: usize) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(GsStatus::NullPointer, "out is null".into()));
        }
        let r = spectral_solve_real_line(n_max)?;
        if len != r.eigenvalues.len() {
            return Err(Fail(GsStatus::InvalidInput, format!("need room for {} values, got {len}", r.eigenvalues.len())));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&r.eigenvalues);
        Ok(())
    })
}

fn parse_params(json: Option<&str>) -> Result<ScenarioParams, Fail> {
    let mut p = ScenarioParams::default();
    let Some(json) = json else { return Ok(p) };
    let bad = |m: String| Fail(GsStatus::Parse, m);
    let v: serde_json::Value = serde_json::from_str(json).map_err(|e| bad(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| bad("parameters must be a JSON object".into()))?;
    for (k, v) in obj {
        let s = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(bad(format!("parameter {k} has unsupported value {other}"))),
        };
        let number = || s.parse::<f64>().map_err(|_| bad(format!("parameter {k}={s} is not a number")));
        match k.as_str() {
            "h" => p.h = Some(number()?),
            "tail_tol" => p.tail_tol = number()?,
            "seed" => p.seed = s.parse().map_err(|_| bad(format!("seed {s} is not an unsigned integer")))?,
            _ => {
                p.values.insert(k.clone(), s);
            }
        }
    }
    Ok(p)
}

/// Runs a named scenario. `params_json` is null or an object of parameters
/// (`h`, `tail_tol` and `seed` are recognized specially). The report JSON is
/// returned in `out_report` and must be released with `gs_string_free`;
/// `out_passed` receives 1 if every enforced check passed.
///
/// # Safety
/// `name` must be NUL-terminated; `params_json` NUL-terminated or null.
#[no_mangle]
pub unsafe extern "C" fn gs_run_scenario(
    name: *const c_char,
    params_json: *const c_char,
    out_report: *mut *mut c_char,
    out_passed: *mut c_int,
) -> GsStatus {
    guard(|| {
        let name = text(name, "name")?;
        let params = parse_params(if params_json.is_null() { None } else { Some(text(params_json, "params_json")?) })?;
        let out_report = out_ptr(out_report, "out_report")?;
        let out_passed = out_ptr(out_passed, "out_passed")?;
        let output = run_scenario(name, &params)?;
        *out_passed = c_int::from(output.report.passed);
        *out_report = CString::new(output.report.to_json()).map_err(|e| Fail(GsStatus::InvalidInput, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn gs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
