//! C interface to `kcone`.
//!
//! Every function returns a [`KcStatus`]; results come back through out
//! pointers, which are left untouched on failure. The message for the last
//! failure on the calling thread is available from [`kc_last_error_message`].
//! Spaces are opaque handles created by [`kc_space_from_json`] and released
//! with [`kc_space_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kcone::comparison::{space_annulus_volume, AnnulusSpec, Method};
use kcone::spec::{parse_cone_point, parse_direction, parse_plane_point, parse_space, Space};
use kcone::{Curvature, Error};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Schema = 3,
    Unsupported = 4,
    Infeasible = 5,
    Internal = 6,
}

/// A parsed space. Opaque to C.
pub struct KcSpace {
    inner: Space,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("nul bytes removed"));
}

fn status_of(e: &Error) -> KcStatus {
    match e {
        Error::InvalidArgument(_) | Error::StepViolation(_) | Error::ExpansionDomain(_) | Error::InsufficientRange(_) => {
            KcStatus::InvalidArgument
        }
        Error::InfeasibleTriangle { .. } => KcStatus::Infeasible,
        Error::UnsupportedMeasure(_) | Error::Unsupported(_) => KcStatus::Unsupported,
        Error::Schema(_) => KcStatus::Schema,
    }
}

struct Fail(KcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, records any failure and turns panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            KcStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            KcStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(KcStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(KcStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `p` must be null or valid for a write of `T`.
unsafe fn put<T>(p: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// Message for the last failure on this thread; empty after a success. The
/// pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn kc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `sn_κ(t)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_sn(kappa: f64, t: f64, out: *mut f64) -> KcStatus {
    guard(|| {
        let v = Curvature::new(kappa)?.sn(t)?;
        put(out, v, "out")
    })
}

/// Third side of the model triangle with sides `s`, `t` and included angle
/// `theta`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_cosine_law_side(kappa: f64, s: f64, t: f64, theta: f64, out: *mut f64) -> KcStatus {
    guard(|| {
        let v = kcone::cosine_law_side(Curvature::new(kappa)?, s, t, theta)?;
        put(out, v, "out")
    })
}

/// Parses a space document (`{"schema": 1, "space": {...}}`). On success
/// `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_space_from_json(json: *const c_char, out: *mut *mut KcSpace) -> KcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let space = parse_space(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(KcSpace { inner: space })), "out")
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `space` must come from `kc_space_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kc_space_free(space: *mut KcSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Distance between two points given as text: `apex` or `t,direction` on
/// cones and glued cones, `x:y` on polygons, a direction on direction spaces.
/// Glued spaces and polygons use a boundary net of spacing `eps`; `error`
/// (may be null) receives the graph error bound, 0 for exact distances.
///
/// # Safety
/// `space` must be a live handle, `from` and `to` NUL-terminated strings,
/// `out` valid for writes, `error` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_space_distance(
    space: *const KcSpace,
    from: *const c_char,
    to: *const c_char,
    eps: f64,
    out: *mut f64,
    error: *mut f64,
) -> KcStatus {
    guard(|| {
        let space = &space.as_ref().ok_or_else(|| null("space"))?.inner;
        let (from, to) = (text(from, "from")?, text(to, "to")?);
        let (d, bound) = match space {
            Space::Cone(c) => (c.distance(&parse_cone_point(c, from)?, &parse_cone_point(c, to)?)?, 0.0),
            Space::Direction(s) => (s.distance(&parse_direction(s, from)?, &parse_direction(s, to)?)?, 0.0),
            Space::Glued(g) => {
                let d = g.distance(&parse_cone_point(g.cone(), from)?, &parse_cone_point(g.cone(), to)?, eps)?;
                (d.value, d.error_bound)
            }
            Space::Polygon(p) => {
                let d = p.distance(parse_plane_point(from)?, parse_plane_point(to)?, eps)?;
                (d.value, d.error_bound)
            }
            Space::Analytic(_) => {
                return Err(Fail(KcStatus::Unsupported, "distances on round_sphere spaces are not available".into()))
            }
        };
        put(out, d, "out")?;
        if !error.is_null() {
            error.write(bound);
        }
        Ok(())
    })
}

/// Volume of the ball of radius `r` about the base point. With
/// `samples == 0` the value is deterministic and `error` is its tolerance;
/// otherwise it is a Monte-Carlo estimate and `error` its standard error.
///
/// # Safety
/// `space` must be a live handle, `out` valid for writes, `error` null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_space_ball_volume(
    space: *const KcSpace,
    r: f64,
    samples: u64,
    seed: u64,
    out: *mut f64,
    error: *mut f64,
) -> KcStatus {
    guard(|| {
        let space = &space.as_ref().ok_or_else(|| null("space"))?.inner;
        let method = if samples == 0 { Method::Exact } else { Method::MonteCarlo { samples, seed } };
        let v = space_annulus_volume(space.pointed()?, AnnulusSpec::ball(r)?, method)?;
        put(out, v.value, "out")?;
        if !error.is_null() {
            error.write(v.error_value());
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_codes() {
        assert_eq!(status_of(&Error::Schema(String::new())), KcStatus::Schema);
        assert_eq!(status_of(&Error::InfeasibleTriangle { a: 1.0, b: 1.0, c: 3.0 }), KcStatus::Infeasible);
        assert_eq!(status_of(&Error::Unsupported(String::new())), KcStatus::Unsupported);
    }

    #[test]
    fn panics_become_internal() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, KcStatus::Internal);
        let msg = unsafe { CStr::from_ptr(kc_last_error_message()) }.to_str().unwrap().to_owned();
        assert!(msg.contains("boom"), "{msg}");
    }
}
