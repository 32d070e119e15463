//! C ABI over the `nonassoc` workbench.
//!
//! Every fallible function returns an [`NaStatus`]; on failure the message
//! is available from [`na_last_error_message`] on the same thread. Strings
//! handed out are owned by the caller and released with [`na_string_free`].
//! Terms and polynomials are opaque handles with their own free functions.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nonassoc::algebra::{self, cd_mul, CDElement, CheckMode, Identity};
use nonassoc::fock::{verify_projected_algebra, FockBasis};
use nonassoc::frame::{self, ComplexVector4, GaugeSnapshot};
use nonassoc::poly::FreePoly;
use nonassoc::potential::{self, PotentialParams, ScanGrid, ZeroLimit};
use nonassoc::rewrite;
use nonassoc::term::{self, Term};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    NotReducible = 4,
    AlgebraError = 5,
    FockError = 6,
    FrameError = 7,
    DomainError = 8,
    InvalidArgument = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaIdentity {
    Associative = 0,
    Flexible = 1,
    Alternative = 2,
    Jordan = 3,
    PowerAssociative = 4,
    LieAdmissible = 5,
    Unitary = 6,
}

/// Parsed term.
pub struct NaTerm(Term);

/// Normal-form polynomial.
pub struct NaPoly(FreePoly);

/// Result of [`na_fit_null_frame`]: `W = ψ₁e + ψ₂*e*`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NaSplit {
    pub psi1_re: f64,
    pub psi1_im: f64,
    pub psi2_re: f64,
    pub psi2_im: f64,
    pub e_re: [f64; 4],
    pub e_im: [f64; 4],
    pub residual: f64,
}

/// Result of [`na_find_minima`] for the positive minimum.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NaMinima {
    pub phi_star: f64,
    pub v_star: f64,
    pub closed_form: f64,
    pub printed_formula: f64,
    pub rel_gap: f64,
    pub curvature: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(NaStatus, String);

impl Fail {
    fn null(what: &str) -> Self {
        Fail(NaStatus::NullPointer, format!("{what} is null"))
    }
}

/// Runs `f`, records any error message and converts panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NaStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NaStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(NaStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn na_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn na_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn na_term_parse(text: *const c_char, out: *mut *mut NaTerm) -> NaStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let t = term::parse(text).map_err(|e| Fail(NaStatus::ParseError, format!("{}: {e}", e.kind.name())))?;
        write_out(out, Box::into_raw(Box::new(NaTerm(t))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn na_term_print(t: *const NaTerm, out: *mut *mut c_char) -> NaStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| Fail::null("term"))?;
        write_out(out, to_c_string(term::print(&t.0)), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn na_term_free(t: *mut NaTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

#[no_mangle]
pub unsafe extern "C" fn na_normalize(t: *const NaTerm, out: *mut *mut NaPoly) -> NaStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| Fail::null("term"))?;
        let p = rewrite::normalize(&t.0).map_err(|e| Fail(NaStatus::NotReducible, format!("{}: {e}", e.kind())))?;
        write_out(out, Box::into_raw(Box::new(NaPoly(p))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn na_poly_to_string(p: *const NaPoly, out: *mut *mut c_char) -> NaStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| Fail::null("poly"))?;
        write_out(out, to_c_string(p.0.to_string()), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn na_poly_associative_limit(p: *const NaPoly, out: *mut *mut NaPoly) -> NaStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| Fail::null("poly"))?;
        write_out(out, Box::into_raw(Box::new(NaPoly(p.0.associative_limit()))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn na_poly_term_count(p: *const NaPoly, out: *mut usize) -> NaStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| Fail::null("poly"))?;
        write_out(out, p.0.term_count(), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn na_poly_free(p: *mut NaPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Certifies one identity. `power` is used by `PowerAssociative` only.
/// With `randomized` false the check is exhaustive over basis tuples.
/// `out_report` receives the one-line report and may be null.
#[no_mangle]
pub unsafe extern "C" fn na_check_identity(
    level: u32,
    identity: NaIdentity,
    power: u32,
    randomized: bool,
    trials: u32,
    seed: u64,
    out_holds: *mut bool,
    out_report: *mut *mut c_char,
) -> NaStatus {
    guard(|| {
        let id = match identity {
            NaIdentity::Associative => Identity::Associative,
            NaIdentity::Flexible => Identity::Flexible,
            NaIdentity::Alternative => Identity::Alternative,
            NaIdentity::Jordan => Identity::Jordan,
            NaIdentity::PowerAssociative => Identity::PowerAssociative(power),
            NaIdentity::LieAdmissible => Identity::LieAdmissible,
            NaIdentity::Unitary => Identity::Unitary,
        };
        let mode = if randomized {
            CheckMode::Randomized { trials, seed }
        } else {
            CheckMode::ExhaustiveBasis
        };
        let r = algebra::check_identity(level, id, mode)
            .map_err(|e| Fail(NaStatus::AlgebraError, format!("{}: {e}", e.kind())))?;
        write_out(out_holds, r.holds, "out_holds")?;
        if !out_report.is_null() {
            out_report.write(to_c_string(r.to_string()));
        }
        Ok(())
    })
}

/// Cayley–Dickson product in floating point. `x`, `y` and `out` each hold
/// `2^level` coordinates.
#[no_mangle]
pub unsafe extern "C" fn na_cd_mul(level: u32, x: *const f64, y: *const f64, out: *mut f64) -> NaStatus {
    guard(|| {
        if level > algebra::MAX_RANDOMIZED_LEVEL {
            return Err(Fail(
                NaStatus::AlgebraError,
                format!("level {level} exceeds {}", algebra::MAX_RANDOMIZED_LEVEL),
            ));
        }
        if x.is_null() || y.is_null() || out.is_null() {
            return Err(Fail::null("coordinate buffer"));
        }
        let n = 1usize << level;
        let a = CDElement::new(std::slice::from_raw_parts(x, n).to_vec()).expect("power of two");
        let b = CDElement::new(std::slice::from_raw_parts(y, n).to_vec()).expect("power of two");
        let c = cd_mul(&a, &b).expect("same level");
        std::slice::from_raw_parts_mut(out, n).copy_from_slice(c.coords());
        Ok(())
    })
}

fn frame_fail(e: frame::FrameError) -> Fail {
    Fail(NaStatus::FrameError, format!("{}: {e}", e.kind()))
}

/// `a` is the 3×4 field in row-major order. Writes `Φ` (3×3) and the frame
/// (3×4), both row-major. `out_residual` may be null.
#[no_mangle]
pub unsafe extern "C" fn na_decompose_su2(
    a: *const f64,
    tol: f64,
    out_phi: *mut f64,
    out_frame: *mut f64,
    out_residual: *mut f64,
) -> NaStatus {
    guard(|| {
        if a.is_null() || out_phi.is_null() || out_frame.is_null() {
            return Err(Fail::null("matrix buffer"));
        }
        let m = nalgebra::Matrix3x4::from_row_slice(std::slice::from_raw_parts(a, 12));
        let d = frame::decompose_su2(&GaugeSnapshot(m), tol).map_err(frame_fail)?;
        let phi = std::slice::from_raw_parts_mut(out_phi, 9);
        let fr = std::slice::from_raw_parts_mut(out_frame, 12);
        for r in 0..3 {
            for c in 0..3 {
                phi[3 * r + c] = d.phi[(r, c)];
            }
            for c in 0..4 {
                fr[4 * r + c] = d.frame[(r, c)];
            }
        }
        if !out_residual.is_null() {
            out_residual.write(d.residual);
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn na_fit_null_frame(
    w_re: *const f64,
    w_im: *const f64,
    tol: f64,
    out: *mut NaSplit,
) -> NaStatus {
    guard(|| {
        if w_re.is_null() || w_im.is_null() {
            return Err(Fail::null("vector buffer"));
        }
        let (re, im) = (std::slice::from_raw_parts(w_re, 4), std::slice::from_raw_parts(w_im, 4));
        let w = ComplexVector4::from_fn(|i, _| num_complex::Complex64::new(re[i], im[i]));
        let s = frame::fit_null_frame(&w, tol).map_err(frame_fail)?;
        let split = NaSplit {
            psi1_re: s.psi1.re,
            psi1_im: s.psi1.im,
            psi2_re: s.psi2.re,
            psi2_im: s.psi2.im,
            e_re: std::array::from_fn(|i| s.e[i].re),
            e_im: std::array::from_fn(|i| s.e[i].im),
            residual: s.residual,
        };
        write_out(out, split, "out")
    })
}

fn potential_fail(e: potential::PotentialError) -> Fail {
    let status = match e {
        potential::PotentialError::InvalidParams(_) => NaStatus::InvalidArgument,
        _ => NaStatus::DomainError,
    };
    Fail(status, format!("{}: {e}", e.kind()))
}

/// Effective potential at `phi`; `phi = 0` is a domain error.
#[no_mangle]
pub unsafe extern "C" fn na_v_eff(phi: f64, alpha: f64, g: f64, mu_bar: f64, out: *mut f64) -> NaStatus {
    guard(|| {
        let p = PotentialParams::new(alpha, g, mu_bar).map_err(potential_fail)?;
        let v = potential::v_eff(phi, &p, ZeroLimit::Reject).map_err(potential_fail)?;
        write_out(out, v, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn na_find_minima(alpha: f64, g: f64, mu_bar: f64, tol: f64, out: *mut NaMinima) -> NaStatus {
    guard(|| {
        let p = PotentialParams::new(alpha, g, mu_bar).map_err(potential_fail)?;
        let r = potential::find_minima(&p, tol, ScanGrid::default()).map_err(potential_fail)?;
        let m = NaMinima {
            phi_star: r.phi_star(),
            v_star: r.v_star(),
            closed_form: r.closed_form,
            printed_formula: r.printed_formula,
            rel_gap: r.rel_gap,
            curvature: r.curvature,
        };
        write_out(out, m, "out")
    })
}

/// Runs the projected slave-boson checks. `out_report` may be null.
#[no_mangle]
pub unsafe extern "C" fn na_fock_verify(
    sites: usize,
    boson_cutoff: usize,
    out_all_pass: *mut bool,
    out_report: *mut *mut c_char,
) -> NaStatus {
    guard(|| {
        let basis =
            FockBasis::new(sites, boson_cutoff).map_err(|e| Fail(NaStatus::FockError, format!("{}: {e}", e.kind())))?;
        let r = verify_projected_algebra(&basis);
        write_out(out_all_pass, r.all_pass(), "out_all_pass")?;
        if !out_report.is_null() {
            out_report.write(to_c_string(r.to_string()));
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panic_becomes_status() {
        let st = guard(|| panic!("boom"));
        assert_eq!(st, NaStatus::Panic);
        let msg = unsafe { CStr::from_ptr(na_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }

    #[test]
    fn interior_nul_is_replaced() {
        set_error("a\0b".into());
        let msg = unsafe { CStr::from_ptr(na_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "a b");
    }

    #[test]
    fn null_out_pointer_rejected() {
        let st = unsafe { na_v_eff(1.0, 1.0, 1.0, 1.0, ptr::null_mut()) };
        assert_eq!(st, NaStatus::NullPointer);
    }

    #[test]
    fn cd_mul_level_bound() {
        let x = [0.0; 1];
        let mut o = [0.0; 1];
        let st = unsafe { na_cd_mul(64, x.as_ptr(), x.as_ptr(), o.as_mut_ptr()) };
        assert_eq!(st, NaStatus::AlgebraError);
    }
}
